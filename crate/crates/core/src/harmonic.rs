//! Harmonic cochains on pointed chambers of a ball, compactly supported
//! Iwahori-level functions, and the pairing between them.
//!
//! A cochain stores one value per chamber, at pointer `0`; the value at
//! pointer `j` is `sign(σ_j)` times the stored one, so the re-pointing rule
//! holds by construction and only the panel-sum rule has to be solved for.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use crate::building::{root_unipotent, simple_lift, ChamberBall, PointedChamber};
use crate::field::Field;
use crate::linalg;
use crate::matrix::RatMatrix;
use crate::weyl::{self, AffineWeylElement};
use crate::{Error, Result};

/// A cochain on the pointed chambers of a ball.
#[derive(Clone, Debug, PartialEq)]
pub struct Cochain<E> {
    values: Vec<E>,
}

impl<E: Clone> Cochain<E> {
    pub fn from_values(values: Vec<E>) -> Self {
        Self { values }
    }

    pub fn zero<F: Field<Elem = E>>(field: &F, chambers: usize) -> Self {
        Self { values: vec![field.zero(); chambers] }
    }

    /// Value at the canonical pointing.
    pub fn canonical(&self, chamber: usize) -> &E {
        &self.values[chamber]
    }

    pub fn values(&self) -> &[E] {
        &self.values
    }

    pub fn set(&mut self, chamber: usize, value: E) {
        self.values[chamber] = value;
    }

    pub fn value<F: Field<Elem = E>>(&self, field: &F, ball: &ChamberBall, pc: PointedChamber) -> E {
        let v = &self.values[pc.chamber];
        if ball.pointing_sign(pc.pointer) == 1 {
            v.clone()
        } else {
            field.neg(v)
        }
    }
}

/// A finitely supported integer-valued function on `G/B`, that is on pointed
/// chambers of the ball.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IwahoriFunction {
    values: BTreeMap<PointedChamber, i64>,
}

impl IwahoriFunction {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn indicator(points: impl IntoIterator<Item = PointedChamber>) -> Self {
        let mut f = Self::new();
        for pc in points {
            f.add(pc, 1);
        }
        f
    }

    pub fn add(&mut self, pc: PointedChamber, value: i64) {
        let e = self.values.entry(pc).or_insert(0);
        *e += value;
        if *e == 0 {
            self.values.remove(&pc);
        }
    }

    pub fn get(&self, pc: PointedChamber) -> i64 {
        self.values.get(&pc).copied().unwrap_or(0)
    }

    pub fn support(&self) -> impl Iterator<Item = (PointedChamber, i64)> + '_ {
        self.values.iter().map(|(k, v)| (*k, *v))
    }

    pub fn support_size(&self) -> usize {
        self.values.len()
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, v) in other.support() {
            out.add(k, v);
        }
        out
    }

    pub fn scaled(&self, s: i64) -> Self {
        let mut out = Self::new();
        for (k, v) in self.support() {
            out.add(k, v * s);
        }
        out
    }
}

/// Interior panels whose sum `Σ_{C ∈ B(η)} h(C)` is nonzero.
pub fn check_hc2<F: Field>(field: &F, ball: &ChamberBall, h: &Cochain<F::Elem>) -> Vec<usize> {
    ball.interior_panels()
        .filter(|(_, panel)| {
            let sum = panel.members.iter().fold(field.zero(), |acc, &c| field.add(&acc, h.canonical(c)));
            !field.is_zero(&sum)
        })
        .map(|(id, _)| id)
        .collect()
}

/// Rows of the panel-sum constraints, one per interior panel.
pub fn constraint_rows<F: Field>(field: &F, ball: &ChamberBall) -> Vec<Vec<F::Elem>> {
    ball.interior_panels()
        .map(|(_, panel)| {
            let mut row = vec![field.zero(); ball.len()];
            for &c in &panel.members {
                row[c] = field.one();
            }
            row
        })
        .collect()
}

/// A basis of the cochains satisfying the panel-sum rule at every interior
/// panel, read off the reduced echelon form of the constraints.
pub fn solve_harmonic<F: Field>(field: &F, ball: &ChamberBall) -> Vec<Cochain<F::Elem>> {
    let ech = linalg::rref(field, constraint_rows(field, ball), ball.len());
    linalg::kernel_basis(field, &ech).into_iter().map(Cochain::from_values).collect()
}

/// `ψ_h(φ) = Σ φ(c, j) h(c, j)`.
pub fn pair<F: Field>(field: &F, ball: &ChamberBall, h: &Cochain<F::Elem>, phi: &IwahoriFunction) -> F::Elem {
    phi.support().fold(field.zero(), |acc, (pc, v)| {
        field.add(&acc, &field.mul(&field.from_i64(v), &h.value(field, ball, pc)))
    })
}

/// `g χ_{B_i}` for `g = rep(c)`: the indicator of the chambers of the
/// type-`i` panel of `c`.
pub fn parahoric_indicator(ball: &ChamberBall, chamber: usize, label: usize) -> Result<IwahoriFunction> {
    parahoric_indicator_at(ball, ball.point_chamber(chamber, 0)?, label)
}

/// `g χ_{B_i}` with `g` the group element of an arbitrary pointed chamber.
pub fn parahoric_indicator_at(ball: &ChamberBall, pc: PointedChamber, label: usize) -> Result<IwahoriFunction> {
    let n = ball.n();
    if label >= n {
        return Err(Error::LabelOutOfRange { label, max: n - 1 });
    }
    let g = ball.pointed_matrix(pc);
    let s = simple_lift(n, ball.p(), label);
    let mut f = IwahoriFunction::new();
    f.add(pc, 1);
    for a in 0..ball.p() {
        let x = g.mul(&root_unipotent(n, ball.p(), label, a)).mul(&s);
        let y = ball.locate(&x)?.ok_or(Error::BoundaryPanel)?;
        f.add(y, 1);
    }
    Ok(f)
}

/// The finite Weyl element `w_0 w_i` with `t_i ∈ Ω_i w_0 w_i`.
fn w0_wi(ball: &ChamberBall, i: usize) -> AffineWeylElement {
    let rd = ball.root_datum();
    AffineWeylElement::from_linear(weyl::longest_element(rd, None).compose(&weyl::longest_element(rd, Some(i))))
}

/// `g (χ_{B t_i B} - χ_B)` for `g` the group element of `pc` and `i ∈ J`.
///
/// `B t_i B = Ω_i B v B` with `v = w_0 w_i`, so the support is `g Ω_i x B` for
/// `x` running over `BvB/B`, plus `gB` itself with value `-1`.
pub fn relation_generator(ball: &ChamberBall, pc: PointedChamber, i: usize) -> Result<IwahoriFunction> {
    let rd = ball.root_datum();
    if i == 0 || !rd.is_special_label(i) {
        return Err(Error::NotSpecial(i));
    }
    let v = w0_wi(ball, i);
    let word = weyl::reduced_word(rd, &v)?;
    let needed = ball.distance(pc.chamber) + word.len();
    let g = ball.pointed_matrix(pc);
    let ends = ball.gallery_endpoints(&RatMatrix::identity(ball.n()), &word)?;
    let gom = g.mul(ball.rotation(i));
    let mut f = IwahoriFunction::new();
    f.add(pc, -1);
    for x in ends {
        let y = ball.locate(&gom.mul(&x.to_matrix()))?.ok_or(Error::Margin { needed_radius: needed })?;
        f.add(y, 1);
    }
    Ok(f)
}

/// The translate `g φ`, with `(gφ)(xB) = φ(g^{-1} x B)`; `None` when part of the
/// support leaves the ball.
pub fn translate(ball: &ChamberBall, phi: &IwahoriFunction, g: &RatMatrix) -> Result<Option<IwahoriFunction>> {
    let mut out = IwahoriFunction::new();
    for (pc, v) in phi.support() {
        match ball.locate(&g.mul(&ball.pointed_matrix(pc)))? {
            Some(y) => out.add(y, v),
            None => return Ok(None),
        }
    }
    Ok(Some(out))
}

/// Indicator of the chambers `g x` with `x ∈ BvB/B`, as ids at pointer 0.
fn double_coset_chambers(ball: &ChamberBall, g: &RatMatrix, word: &[usize], needed: usize) -> Result<BTreeSet<usize>> {
    ball.gallery_endpoints(g, word)?
        .iter()
        .map(|x| ball.id_of(x).ok_or(Error::Margin { needed_radius: needed }))
        .collect()
}

/// The telescoping identity behind `χ_{gB} ≡ (-1)^{l(w)} χ_{gwB}` modulo
/// parahoric functions, for `g = rep(c)` and `w ∈ W_a`.
///
/// With `F_k` the indicator of `g B u_1⋯u_k B/B` for a reduced word
/// `u_1⋯u_d` of `w`, checks `F_0 - (-1)^d F_d = Σ (-1)^{k-1}(F_{k-1} + F_k)`
/// and that `F_{k-1} + F_k` is constant on every panel of type `u_k`.
pub fn verify_lemma_bwb(ball: &ChamberBall, chamber: usize, w: &AffineWeylElement) -> Result<bool> {
    let rd = ball.root_datum();
    let word = weyl::reduced_word(rd, w)?;
    let d = word.len();
    let needed = ball.distance(chamber) + d;
    if needed > ball.radius() {
        return Err(Error::Margin { needed_radius: needed });
    }
    let g = ball.chamber(chamber).to_matrix();
    let layers: Vec<BTreeSet<usize>> =
        (0..=d).map(|k| double_coset_chambers(ball, &g, &word[..k], needed)).collect::<Result<_>>()?;
    let as_map = |s: &BTreeSet<usize>, c: i64, into: &mut BTreeMap<usize, i64>| {
        for &x in s {
            *into.entry(x).or_insert(0) += c;
        }
    };
    let mut lhs = BTreeMap::new();
    as_map(&layers[0], 1, &mut lhs);
    as_map(&layers[d], -weyl::sign_of_length(d), &mut lhs);
    let mut rhs = BTreeMap::new();
    for k in 1..=d {
        let sign = weyl::sign_of_length(k - 1);
        as_map(&layers[k - 1], sign, &mut rhs);
        as_map(&layers[k], sign, &mut rhs);
    }
    lhs.retain(|_, v| *v != 0);
    rhs.retain(|_, v| *v != 0);
    if lhs != rhs {
        return Ok(false);
    }
    for k in 1..=d {
        let label = word[k - 1];
        let summand: BTreeSet<usize> = layers[k - 1].union(&layers[k]).copied().collect();
        if !layers[k - 1].is_disjoint(&layers[k]) {
            return Ok(false);
        }
        for &x in &summand {
            let panel = ball.panel(ball.panel_of(x, label));
            if !panel.interior {
                return Err(Error::Margin { needed_radius: needed + 1 });
            }
            if !panel.members.iter().all(|m| summand.contains(m)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// One re-pointing walk that failed to close up.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hc1Failure {
    pub chamber: usize,
    pub walk: Vec<usize>,
}

/// Walks around every closed sequence of pointings of length at most `n` at
/// every chamber, multiplying by `sign(σ)` for each step, and checks that the
/// value comes back. Each step `j -> j'` is the rotation `Ω_{j'-j}`, which is
/// checked against the matrices: `Ω_j^{-1} Ω_{j'} ∈ Ω_{j'-j} B`.
pub fn check_hc1_cycles<F: Field>(field: &F, ball: &ChamberBall, h: &Cochain<F::Elem>) -> Result<Vec<Hc1Failure>> {
    let n = ball.n();
    let p = ball.p();
    for j in 0..n {
        for k in 0..n {
            let step = (k + n - j) % n;
            let lhs = ball.rotation(j).inverse()?.mul(ball.rotation(k));
            let diff = ball.rotation(step).inverse()?.mul(&lhs);
            if !crate::building::iwahori_contains(&diff, p)? {
                return Err(Error::Internal(alloc::format!("Ω_{j}^-1 Ω_{k} is not Ω_{step} mod B")));
            }
            let sign = ball.pointing_sign(j) * ball.pointing_sign(step);
            if sign != ball.pointing_sign(k) {
                return Err(Error::Internal(alloc::format!("pointing signs are not multiplicative at {j},{k}")));
            }
        }
    }
    let mut walks: Vec<Vec<usize>> = vec![];
    let mut frontier: Vec<Vec<usize>> = (0..n).map(|j| vec![j]).collect();
    for _ in 0..n {
        let mut next = vec![];
        for w in &frontier {
            for j in 0..n {
                let mut x = w.clone();
                x.push(j);
                next.push(x);
            }
        }
        for w in &next {
            if w.first() == w.last() {
                walks.push(w.clone());
            }
        }
        frontier = next;
    }
    let mut failures = vec![];
    for c in 0..ball.len() {
        for walk in &walks {
            let start = h.value(field, ball, PointedChamber { chamber: c, pointer: walk[0] });
            let mut current = start.clone();
            let mut ok = true;
            for pair in walk.windows(2) {
                let step = (pair[1] + n - pair[0]) % n;
                current = if ball.pointing_sign(step) == 1 { current } else { field.neg(&current) };
                let direct = h.value(field, ball, PointedChamber { chamber: c, pointer: pair[1] });
                ok &= direct == current;
            }
            if !ok || current != start {
                failures.push(Hc1Failure { chamber: c, walk: walk.clone() });
            }
        }
    }
    Ok(failures)
}

/// All parahoric indicators `g χ_{B_i}` whose panel is interior, for every
/// pointed chamber `g` of the ball.
pub fn all_parahoric_generators(ball: &ChamberBall) -> Vec<IwahoriFunction> {
    let mut out = vec![];
    for c in 0..ball.len() {
        for j in 0..ball.n() {
            let pc = PointedChamber { chamber: c, pointer: j };
            for label in 0..ball.n() {
                if let Ok(f) = parahoric_indicator_at(ball, pc, label) {
                    out.push(f);
                }
            }
        }
    }
    out
}

/// All in-margin translates `g(χ_{Bt_iB} - χ_B)`, `i ∈ J`, over every pointed
/// chamber `g` of the ball.
pub fn all_relation_generators(ball: &ChamberBall) -> Result<Vec<IwahoriFunction>> {
    let mut out = vec![];
    for c in 0..ball.len() {
        for j in 0..ball.n() {
            let pc = PointedChamber { chamber: c, pointer: j };
            for i in ball.root_datum().special_set() {
                match relation_generator(ball, pc, i) {
                    Ok(f) => out.push(f),
                    Err(Error::Margin { .. }) => {}
                    Err(e) => return Err(e),
                }
            }
        }
    }
    Ok(out)
}
