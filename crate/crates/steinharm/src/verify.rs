//! The acceptance suite, one function per criterion.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use steinharm_core::apartment::{self, fundamental_chamber};
use steinharm_core::building::{build_ball_with_limit, root_unipotent, simple_lift, ChamberBall, DEFAULT_MAX_CHAMBERS};
use steinharm_core::field::{Field, PrimeField, Rationals};
use steinharm_core::flagmodel::{self, FlagSpace};
use steinharm_core::harmonic::{self, Cochain};
use steinharm_core::linalg;
use steinharm_core::matrix::RatMatrix;
use steinharm_core::rootdata::{CartanType, Family, RootDatum};
use steinharm_core::weyl::{self, AffineWeylElement, FiniteWeylElement};
use steinharm_core::{Error, Result};

use crate::report::Check;
use crate::tree_oracle::{self, lattice_ball};

pub const CRITERIA: [(u8, &str); 10] = [
    (1, "sign of sigma_i equals the parity of l(w_i w_0)"),
    (2, "t_i w_i w_0 stabilizes the fundamental alcove"),
    (3, "translation by the cominuscule coweight is s_{a,1} s_a"),
    (4, "building counting laws"),
    (5, "telescoping over BwB"),
    (6, "harmonic cochains vanish on parahoric and relation generators"),
    (7, "re-pointing around cycles"),
    (8, "finite Steinberg dimensions"),
    (9, "parahoric partitions and BwP"),
    (10, "tree sanity against the lattice model"),
];

#[derive(Clone, Copy, Debug)]
pub struct Options {
    pub quick: bool,
    pub seed: u64,
    pub max_chambers: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options { quick: false, seed: 0, max_chambers: DEFAULT_MAX_CHAMBERS }
    }
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub id: u8,
    pub title: &'static str,
    pub checks: Vec<Check>,
}

impl Outcome {
    pub fn pass(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.pass)
    }
}

pub fn run_criterion(id: u8, opts: &Options) -> Result<Outcome> {
    let title = CRITERIA
        .iter()
        .find(|(k, _)| *k == id)
        .map(|(_, t)| *t)
        .ok_or_else(|| Error::InvalidParameters(format!("no criterion {id}")))?;
    let checks = match id {
        1 => lemma_tec()?,
        2 => stabilization()?,
        3 => cominuscule_translation()?,
        4 => counting_laws(opts)?,
        5 => telescoping(opts)?,
        6 => vanishing(opts)?,
        7 => repointing(opts)?,
        8 => steinberg_dimensions()?,
        9 => partitions(opts)?,
        _ => tree_sanity(opts)?,
    };
    Ok(Outcome { id, title, checks })
}

pub fn verify_all(opts: &Options) -> Result<Vec<Outcome>> {
    CRITERIA.iter().map(|(id, _)| run_criterion(*id, opts)).collect()
}

fn ball(n: usize, p: u64, radius: usize, opts: &Options) -> Result<ChamberBall> {
    build_ball_with_limit(n, p, radius, opts.max_chambers)
}

/// `|Φ^+|` from the classification tables.
pub fn positive_root_count(t: CartanType) -> usize {
    let l = t.rank();
    match t.family() {
        Family::A => l * (l + 1) / 2,
        Family::B | Family::C => l * l,
        Family::D => l * (l - 1),
        Family::E => [36, 63, 120][l - 6],
        Family::F => 24,
        Family::G => 6,
    }
}

fn lemma_tec() -> Result<Vec<Check>> {
    let mut checks = vec![];
    for t in CartanType::all_up_to(8) {
        let rd = RootDatum::new(t);
        let rows = apartment::verify_lemma_tec(&rd)?;
        checks.push(Check::new(format!("{t}: rows"), rd.special_set().len(), rows.len()));
        for row in rows {
            checks.push(Check::new(format!("{t} i={}", row.label), row.length_sign, row.sign_sigma));
        }
    }
    Ok(checks)
}

fn stabilization() -> Result<Vec<Check>> {
    let mut checks = vec![];
    for t in CartanType::all_up_to(8) {
        let rd = RootDatum::new(t);
        let c0 = fundamental_chamber(&rd);
        for i in rd.special_set() {
            let wi_w0 = weyl::longest_element(&rd, Some(i)).compose(&weyl::longest_element(&rd, None));
            let u = weyl::translation_element(&rd, i)?.compose(&AffineWeylElement::from_linear(wi_w0));
            let image = apartment::apply(&rd, &u, &c0)?;
            checks.push(Check::holds(format!("{t} i={i}: vertex set"), image.vertex_set() == c0.vertex_set()));
            checks.push(Check::new(format!("{t} i={i}: length"), 0, weyl::length_extended(&rd, &u)));
            checks.push(Check::holds(format!("{t} i={i}: rotation"), weyl::chamber_rotation(&rd, i)? == u));
        }
    }
    Ok(checks)
}

fn cominuscule_translation() -> Result<Vec<Check>> {
    let mut checks = vec![];
    for t in CartanType::all_up_to(8) {
        let rd = RootDatum::new(t);
        let i0 = rd.cominuscule_index()?;
        if t.family() == Family::A {
            checks.push(Check::new(format!("{t}: no i0"), None::<usize>, i0));
            continue;
        }
        let Some(i0) = i0 else {
            checks.push(Check::holds(format!("{t}: i0 exists"), false));
            continue;
        };
        let high = rd.highest_root().to_vec();
        let s1 = weyl::affine_reflection(&rd, &high, 1)?;
        let s = weyl::affine_reflection(&rd, &high, 0)?;
        let tr = AffineWeylElement::translation_by(rd.fundamental_coweight(i0).to_vec());
        checks.push(Check::holds(format!("{t}: s_(a,1) s_a = tau(w_i0)"), s1.compose(&s) == tr));
        checks.push(Check::holds(format!("{t}: i0 not in J"), !rd.special_set().contains(&i0)));
    }
    Ok(checks)
}

fn elements_shorter_than(rd: &RootDatum, bound: usize) -> BTreeSet<AffineWeylElement> {
    let mut seen = BTreeSet::from([AffineWeylElement::identity(rd.rank())]);
    let mut frontier: Vec<AffineWeylElement> = seen.iter().cloned().collect();
    for _ in 1..bound {
        let mut next = vec![];
        for w in &frontier {
            for s in 0..=rd.rank() {
                let ws = w.compose(&AffineWeylElement::generator(rd, s));
                if seen.insert(ws.clone()) {
                    next.push(ws);
                }
            }
        }
        frontier = next;
    }
    seen
}

fn laws(n: usize, p: u64, radius: usize, opts: &Options) -> Result<Vec<Check>> {
    let b = ball(n, p, radius, opts)?;
    let rd = b.root_datum().clone();
    let tag = format!("n={n} p={p} r={radius}");
    // a panel of a chamber strictly inside the ball has all its chambers in the ball
    let inner: Vec<_> = b.panels().iter().filter(|panel| panel.members.iter().any(|&c| b.distance(c) < radius)).collect();
    let thick = inner.iter().filter(|panel| panel.members.len() as u64 == p + 1).count();
    let mut counts: BTreeMap<AffineWeylElement, u64> = BTreeMap::new();
    let mut consistent = 0;
    for id in 0..b.len() {
        let w = b.weyl_distance(id);
        if weyl::length(&rd, w)? == b.distance(id) {
            consistent += 1;
        }
        *counts.entry(w.clone()).or_default() += 1;
    }
    let short = elements_shorter_than(&rd, radius);
    let mut lawful = 0;
    for w in &short {
        let l = weyl::length(&rd, w)?;
        if counts.get(w).copied() == Some(p.pow(l as u32)) {
            lawful += 1;
        }
    }
    Ok(vec![
        Check::new(format!("{tag}: inner panels with p+1 chambers"), inner.len(), thick),
        Check::new(format!("{tag}: Weyl distance length equals gallery distance"), b.len(), consistent),
        Check::new(format!("{tag}: w with l(w) < r counted p^l(w) times"), short.len(), lawful),
    ])
}

fn counting_laws(opts: &Options) -> Result<Vec<Check>> {
    let (r2, r3) = if opts.quick { (4, 2) } else { (6, 3) };
    let mut checks = vec![];
    for p in [2, 3] {
        checks.extend(laws(2, p, r2, opts)?);
        checks.extend(laws(3, p, r3, opts)?);
    }
    Ok(checks)
}

fn random_bwb(n: usize, radius: usize, trials: usize, rng: &mut ChaCha8Rng, opts: &Options) -> Result<Check> {
    let b = ball(n, 2, radius, opts)?;
    let rd = b.root_datum().clone();
    let mut held = 0;
    for _ in 0..trials {
        let len = rng.random_range(0..=3);
        let word: Vec<usize> = (0..len).map(|_| rng.random_range(0..n)).collect();
        let w = AffineWeylElement::from_word(&rd, &word);
        let l = weyl::length(&rd, &w)?;
        let room: Vec<usize> = (0..b.len()).filter(|&c| b.distance(c) + l <= radius).collect();
        let c = room[rng.random_range(0..room.len())];
        if harmonic::verify_lemma_bwb(&b, c, &w)? {
            held += 1;
        }
    }
    Ok(Check::new(format!("n={n} p=2 r={radius}: random (g, w)"), trials, held))
}

fn telescoping(opts: &Options) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let (a, b) = if opts.quick { (20, 5) } else { (100, 25) };
    Ok(vec![random_bwb(2, 6, a, &mut rng, opts)?, random_bwb(3, 3, b, &mut rng, opts)?])
}

/// Pairings of every basis cochain with every generator, as
/// (dimension, expected zero count, actual zero count) per generator family.
fn pairings<F: Field>(field: &F, b: &ChamberBall, tag: &str) -> Result<Vec<Check>> {
    let basis = harmonic::solve_harmonic(field, b);
    let parahoric = harmonic::all_parahoric_generators(b);
    let relations = harmonic::all_relation_generators(b)?;
    let hc2 = basis.iter().filter(|h| harmonic::check_hc2(field, b, h).is_empty()).count();
    let zeros = |gens: &[harmonic::IwahoriFunction]| {
        basis.iter().map(|h| gens.iter().filter(|f| field.is_zero(&harmonic::pair(field, b, h, f))).count()).sum::<usize>()
    };
    Ok(vec![
        Check::holds(format!("{tag}: nonzero solution space"), !basis.is_empty()),
        Check::new(format!("{tag}: basis satisfies HC2"), basis.len(), hc2),
        Check::new(format!("{tag}: parahoric pairings vanish"), basis.len() * parahoric.len(), zeros(&parahoric)),
        Check::holds(format!("{tag}: relation generators fit"), !relations.is_empty()),
        Check::new(format!("{tag}: relation pairings vanish"), basis.len() * relations.len(), zeros(&relations)),
    ])
}

fn vanishing(opts: &Options) -> Result<Vec<Check>> {
    let f5 = PrimeField::new(5).expect("prime");
    let mut checks = vec![];
    for (n, r) in [(2, 4), (3, 2)] {
        let b = ball(n, 2, r, opts)?;
        checks.extend(pairings(&Rationals, &b, &format!("n={n} p=2 r={r} over Q"))?);
        checks.extend(pairings(&f5, &b, &format!("n={n} p=2 r={r} over F5"))?);
    }
    Ok(checks)
}

fn random_cochain<F: Field>(field: &F, len: usize, rng: &mut ChaCha8Rng) -> Cochain<F::Elem> {
    Cochain::from_values((0..len).map(|_| field.from_i64(rng.random_range(-9..=9))).collect())
}

fn repointing(opts: &Options) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut checks = vec![];
    let q = Rationals;
    for (n, r) in [(2, 4), (3, 2)] {
        let b = ball(n, 2, r, opts)?;
        let mut cochains = harmonic::solve_harmonic(&q, &b);
        cochains.push(random_cochain(&q, b.len(), &mut rng));
        let failures: usize = cochains.iter().map(|h| harmonic::check_hc1_cycles(&q, &b, h).map(|f| f.len())).sum::<Result<_>>()?;
        checks.push(Check::new(format!("n={n} p=2 r={r}: failed cycles"), 0, failures));
        let signs: Vec<i64> = (0..n).map(|j| b.pointing_sign(j)).collect();
        // the cyclic shift by j on n letters has sign (-1)^{j(n-1)}
        let expected: Vec<i64> = (0..n).map(|j| if j * (n - 1) % 2 == 1 { -1 } else { 1 }).collect();
        checks.push(Check::new(format!("n={n}: sign of each rotation"), expected, signs));
    }
    Ok(checks)
}

fn steinberg_dimensions() -> Result<Vec<Check>> {
    let mut checks = vec![];
    for (n, p, expected) in [(2usize, 2u64, 2usize), (2, 3, 3), (3, 2, 8), (3, 3, 27)] {
        let dim = flagmodel::steinberg_dimension_level1(n, p)?;
        checks.push(Check::new(format!("n={n} p={p}"), expected, dim));
        checks.push(Check::new(format!("n={n} p={p}: closed form"), p.pow((n * (n - 1) / 2) as u32), dim as u64));
    }
    Ok(checks)
}

/// Integral matrices built from root subgroups and Weyl lifts of finite type.
pub fn random_integral(rng: &mut ChaCha8Rng, n: usize, p: u64) -> RatMatrix {
    let mut g = RatMatrix::identity(n);
    for _ in 0..4 {
        let label = rng.random_range(1..n);
        let a = rng.random_range(0..p);
        g = g.mul(&root_unipotent(n, p, label, a)).mul(&simple_lift(n, p, label));
    }
    g
}

fn partitions(opts: &Options) -> Result<Vec<Check>> {
    let mut checks = vec![];
    for (n, p, k) in [(2usize, 2u64, 1u32), (2, 3, 1), (3, 2, 2)] {
        for i in 1..n {
            let ok = flagmodel::verify_partition_bip(n, p, k, i)?;
            checks.push(Check::holds(format!("n={n} p={p} k={k} i={i}: partition"), ok));
        }
    }
    let rd = RootDatum::build(Family::A, 2)?;
    let space = FlagSpace::new(3, 2, 2)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let trials = if opts.quick { 5 } else { 20 };
    let mut held = 0;
    for _ in 0..trials {
        let g = random_integral(&mut rng, 3, 2);
        let len = rng.random_range(0..=3);
        let mut w = FiniteWeylElement::identity(2);
        for _ in 0..len {
            w = w.compose(&FiniteWeylElement::simple(&rd, rng.random_range(1..3)));
        }
        if flagmodel::verify_lemma_bwp(&space, &rd, &g, &w)? {
            held += 1;
        }
    }
    checks.push(Check::new("n=3 p=2 k=2: random BwP", trials, held));
    Ok(checks)
}

fn rat(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn tree_cross_check(p: u64, radius: usize, opts: &Options) -> Result<Vec<Check>> {
    let tag = format!("p={p} r={radius}");
    let b = ball(2, p, radius, opts)?;
    let lat = lattice_ball(p, radius);
    let index: BTreeMap<&tree_oracle::Edge, usize> = lat.edges.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let second = RatMatrix::diagonal(vec![rat(1), rat(p as i64)]);
    let mut edge_of = vec![];
    let mut labelled = 0;
    for c in b.chambers() {
        let g = c.to_matrix();
        let v0 = tree_oracle::vertex_of(&g, p);
        let v1 = tree_oracle::vertex_of(&g.mul(&second), p);
        if v0.label() == 0 && v1.label() == 1 {
            labelled += 1;
        }
        edge_of.push(index.get(&(v0, v1)).copied());
    }
    let matched: BTreeSet<usize> = edge_of.iter().flatten().copied().collect();
    let same_distance = edge_of.iter().enumerate().filter(|(c, e)| e.map(|e| lat.distances[e]) == Some(b.distance(*c))).count();
    let mut checks = vec![
        Check::new(format!("{tag}: chambers"), lat.edges.len(), b.len()),
        Check::new(format!("{tag}: chambers matched to distinct lattice edges"), lat.edges.len(), matched.len()),
        Check::new(format!("{tag}: vertex labels"), b.len(), labelled),
        Check::new(format!("{tag}: gallery distances"), b.len(), same_distance),
    ];
    if matched.len() != lat.edges.len() {
        return Ok(checks);
    }
    // harmonic solutions, read in the lattice edge order
    let q = Rationals;
    let order: Vec<usize> = {
        let mut o = vec![0; b.len()];
        for (c, e) in edge_of.iter().enumerate() {
            o[e.expect("matched")] = c;
        }
        o
    };
    let basis = harmonic::solve_harmonic(&q, &b);
    let solutions: Vec<Vec<BigRational>> = basis.iter().map(|h| order.iter().map(|&c| h.canonical(c).clone()).collect()).collect();
    let m = lat.edges.len();
    let classical = linalg::kernel_basis(&q, &linalg::rref(&q, lat.vertex_sum_rows(), m));
    let rank_ours = linalg::rank(&q, solutions.clone(), m);
    let rank_joint = linalg::rank(&q, solutions.iter().chain(&classical).cloned().collect(), m);
    checks.push(Check::new(format!("{tag}: dimension"), classical.len(), rank_ours));
    checks.push(Check::new(format!("{tag}: same span"), classical.len(), rank_joint));
    // a pointed chamber's value is the classical value on the edge oriented towards its pointer
    let mut oriented = 0;
    for h in &basis {
        let ok = (0..b.len()).all(|c| {
            let x = h.canonical(c).clone();
            let toward1 = h.value(&q, &b, b.point_chamber(c, 1).expect("pointer"));
            toward1 == -x
        });
        oriented += usize::from(ok);
    }
    checks.push(Check::new(format!("{tag}: reversed orientation flips the sign"), basis.len(), oriented));
    let ends = lat.difference_of_ends();
    let with_ends = linalg::rank(&q, solutions.iter().cloned().chain([ends.clone()]).collect(), m);
    checks.push(Check::holds(format!("{tag}: difference of two ends is nonzero"), ends.iter().any(|x| *x != rat(0))));
    checks.push(Check::new(format!("{tag}: difference of two ends is harmonic"), rank_ours, with_ends));
    Ok(checks)
}

fn tree_sanity(opts: &Options) -> Result<Vec<Check>> {
    let mut checks = vec![];
    let (r2, r3) = if opts.quick { (4, 3) } else { (6, 4) };
    for (p, max) in [(2u64, r2), (3, r3)] {
        let forests = (0..=max).filter(|&r| ball(2, p, r, opts).map(|b| b.incidence_is_forest()).unwrap_or(false)).count();
        checks.push(Check::new(format!("p={p}: acyclic for radius 0..={max}"), max + 1, forests));
    }
    checks.extend(tree_cross_check(2, 4, opts)?);
    if !opts.quick {
        checks.extend(tree_cross_check(3, 4, opts)?);
    }
    Ok(checks)
}
