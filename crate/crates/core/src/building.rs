//! The Bruhat-Tits building of `PGL_n` over `Q` with the p-adic valuation,
//! modelled by Iwahori cosets.
//!
//! Chambers are cosets `gB` with `v_p(det g) ≡ 0 mod n`, that is the
//! type-preserving part of `G/B`. A pointed chamber `(c, j)` is the coset
//! `rep(c) Ω_j B`, where `Ω_j = t_j w_j w_0` is the lift of the rotation of the
//! fundamental alcove sending `v_0` to `v_j`. This realizes `G/B` as the set of
//! pointed chambers.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::apartment;
use crate::field::is_prime;
use crate::matrix::RatMatrix;
use crate::padic::{pow_rat, residue_mod_power, valuation};
use crate::rootdata::{Family, RootDatum};
use crate::weyl::{self, AffineWeylElement, FiniteWeylElement};
use crate::{Error, Result};

/// Default bound on the number of chambers of a ball.
pub const DEFAULT_MAX_CHAMBERS: usize = 200_000;

fn rat(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// Membership of the projective class of `g` in the Iwahori subgroup of
/// matrices that are upper triangular modulo `p`.
pub fn iwahori_contains(g: &RatMatrix, p: u64) -> Result<bool> {
    if g.determinant().is_zero() {
        return Err(Error::SingularMatrix);
    }
    let h = g.primitive(p);
    if valuation(&h.determinant(), p) != Some(0) {
        return Ok(false);
    }
    let n = h.size();
    for r in 0..n {
        for c in 0..r {
            if valuation(h.get(r, c), p).is_some_and(|v| v < 1) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The canonical integer representative of a coset `gB` in `PGL_n`.
///
/// Every coset is `u m B` with `m` monomial with p-power entries and `u`
/// upper unipotent; `m` is unique and `u` is reduced modulo
/// `U ∩ m B m^{-1}` entry by entry. The result is scaled to be primitive.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChamberRep {
    n: usize,
    entries: Vec<BigInt>,
}

impl fmt::Debug for ChamberRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_matrix())
    }
}

impl ChamberRep {
    pub fn canonical(g: &RatMatrix, p: u64) -> Result<Self> {
        let n = g.size();
        if g.determinant().is_zero() {
            return Err(Error::SingularMatrix);
        }
        let mut m = g.clone();
        let mut used = vec![false; n];
        let mut pivot_col = vec![0usize; n];
        let mut pivot_val = vec![0i64; n];
        for i in (0..n).rev() {
            let (j, v) = (0..n)
                .filter(|&c| !used[c])
                .filter_map(|c| valuation(m.get(i, c), p).map(|v| (c, v)))
                .min_by_key(|&(c, v)| (v, c))
                .ok_or(Error::SingularMatrix)?;
            let pivot = m.get(i, j).clone();
            for k in 0..n {
                if used[k] || k == j || m.get(i, k).is_zero() {
                    continue;
                }
                let f = m.get(i, k) / &pivot;
                for r in 0..n {
                    let x = m.get(r, k) - &f * m.get(r, j);
                    m.set(r, k, x);
                }
            }
            let s = pow_rat(p, v) / &pivot;
            for r in 0..n {
                let x = m.get(r, j) * &s;
                m.set(r, j, x);
            }
            used[j] = true;
            pivot_col[i] = j;
            pivot_val[i] = v;
        }
        let mut u = RatMatrix::zero(n);
        for r in 0..n {
            for i in 0..n {
                u.set(r, i, m.get(r, pivot_col[i]) * pow_rat(p, -pivot_val[i]));
            }
        }
        for j in 1..n {
            for i in (0..j).rev() {
                let c = pivot_val[i] - pivot_val[j] + i64::from(pivot_col[i] > pivot_col[j]);
                let x = u.get(i, j).clone();
                let t = residue_mod_power(&x, p, c) - &x;
                if t.is_zero() {
                    continue;
                }
                for r in 0..=i {
                    let y = u.get(r, j) + &t * u.get(r, i);
                    u.set(r, j, y);
                }
            }
        }
        let mut h = RatMatrix::zero(n);
        for r in 0..n {
            for i in 0..n {
                h.set(r, pivot_col[i], u.get(r, i) * pow_rat(p, pivot_val[i]));
            }
        }
        let h = h.primitive(p);
        let entries = h
            .entries()
            .iter()
            .map(|x| {
                if x.is_integer() {
                    Ok(x.to_integer())
                } else {
                    Err(Error::Internal(format!("non-integral canonical entry {x}")))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { n, entries })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn to_matrix(&self) -> RatMatrix {
        RatMatrix::from_entries(self.n, self.entries.iter().map(|x| BigRational::from_integer(x.clone())).collect())
    }

    /// Rows as decimal strings, for dumps.
    pub fn rows(&self) -> Vec<Vec<BigInt>> {
        self.entries.chunks(self.n).map(|r| r.to_vec()).collect()
    }
}

/// `ṡ_i`: the transposition matrix of `i, i+1` for `i ≥ 1`; for `i = 0` the
/// monomial matrix with `p^{-1}` at `(1,n)` and `p` at `(n,1)`.
pub fn simple_lift(n: usize, p: u64, label: usize) -> RatMatrix {
    assert!(label < n, "label {label} out of range");
    let mut m = RatMatrix::identity(n);
    let (a, b) = if label == 0 { (0, n - 1) } else { (label - 1, label) };
    m.set(a, a, BigRational::zero());
    m.set(b, b, BigRational::zero());
    if label == 0 {
        m.set(a, b, pow_rat(p, -1));
        m.set(b, a, pow_rat(p, 1));
    } else {
        m.set(a, b, BigRational::one());
        m.set(b, a, BigRational::one());
    }
    m
}

/// `u_i(a)`: `I + a E_{i,i+1}` for `i ≥ 1`, `I + a p E_{n,1}` for `i = 0`.
pub fn root_unipotent(n: usize, p: u64, label: usize, a: u64) -> RatMatrix {
    let mut m = RatMatrix::identity(n);
    if label == 0 {
        m.set(n - 1, 0, rat(a as i64) * pow_rat(p, 1));
    } else {
        m.set(label - 1, label, rat(a as i64));
    }
    m
}

/// The `q + 1` chambers sharing the type-`label` panel of `gB`, `gB` first.
pub fn panel_neighbors(g: &RatMatrix, label: usize, p: u64) -> Result<Vec<ChamberRep>> {
    let n = g.size();
    if label >= n {
        return Err(Error::LabelOutOfRange { label, max: n - 1 });
    }
    let s = simple_lift(n, p, label);
    let mut out = Vec::with_capacity(p as usize + 1);
    out.push(ChamberRep::canonical(g, p)?);
    for a in 0..p {
        let x = g.mul(&root_unipotent(n, p, label, a)).mul(&s);
        out.push(ChamberRep::canonical(&x, p)?);
    }
    Ok(out)
}

/// `t_i = diag(p^{-1} 1_i, 1_{n-i})`.
pub fn translation_matrix(n: usize, p: u64, i: usize) -> Result<RatMatrix> {
    if i == 0 || i >= n {
        return Err(Error::LabelOutOfRange { label: i, max: n - 1 });
    }
    Ok(RatMatrix::diagonal((0..n).map(|k| if k < i { pow_rat(p, -1) } else { BigRational::one() }).collect()))
}

/// Permutation matrix of a finite Weyl element of `A_{n-1}`, as the product of
/// transposition matrices along a reduced word.
pub fn weyl_lift(rd: &RootDatum, p: u64, w: &FiniteWeylElement) -> RatMatrix {
    let n = rd.rank() + 1;
    let word = weyl::reduced_word(rd, &AffineWeylElement::from_linear(w.clone())).expect("finite elements are in W_a");
    word.iter().fold(RatMatrix::identity(n), |acc, &s| acc.mul(&simple_lift(n, p, s)))
}

/// `Ω_j = t_j w_j w_0`, the identity for `j = 0`.
pub fn rotation_matrix(rd: &RootDatum, p: u64, j: usize) -> Result<RatMatrix> {
    let n = rd.rank() + 1;
    if j == 0 {
        return Ok(RatMatrix::identity(n));
    }
    let t = translation_matrix(n, p, j)?;
    let wj = weyl_lift(rd, p, &weyl::longest_element(rd, Some(j)));
    let w0 = weyl_lift(rd, p, &weyl::longest_element(rd, None));
    Ok(t.mul(&wj).mul(&w0))
}

/// A chamber of a ball together with the label of its distinguished vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointedChamber {
    pub chamber: usize,
    pub pointer: usize,
}

impl PointedChamber {
    pub fn repoint(self, pointer: usize) -> Self {
        Self { pointer, ..self }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Panel {
    pub label: usize,
    /// In-ball members, ascending.
    pub members: Vec<usize>,
    /// Whether all `q + 1` chambers of the panel lie in the ball.
    pub interior: bool,
}

/// The gallery-distance ball of radius `radius` around the base chamber `B`.
#[derive(Clone, Debug)]
pub struct ChamberBall {
    n: usize,
    p: u64,
    radius: usize,
    rd: RootDatum,
    chambers: Vec<ChamberRep>,
    index: BTreeMap<ChamberRep, usize>,
    distances: Vec<usize>,
    parents: Vec<Option<(usize, usize)>>,
    weyl: Vec<AffineWeylElement>,
    panels: Vec<Panel>,
    chamber_panels: Vec<Vec<usize>>,
    rotations: Vec<RatMatrix>,
    rotation_inverses: Vec<RatMatrix>,
    pointing_signs: Vec<i64>,
}

pub fn build_ball(n: usize, p: u64, radius: usize) -> Result<ChamberBall> {
    build_ball_with_limit(n, p, radius, DEFAULT_MAX_CHAMBERS)
}

/// Breadth-first construction. Ids are assigned by distance, then by the
/// lexicographic order of canonical matrices.
pub fn build_ball_with_limit(n: usize, p: u64, radius: usize, max_chambers: usize) -> Result<ChamberBall> {
    if n < 2 {
        return Err(Error::InvalidParameters(format!("n must be at least 2, got {n}")));
    }
    if !is_prime(p) {
        return Err(Error::InvalidParameters(format!("{p} is not prime")));
    }
    let rd = RootDatum::build(Family::A, n - 1)?;
    let base = ChamberRep::canonical(&RatMatrix::identity(n), p)?;
    let mut chambers = vec![base.clone()];
    let mut index = BTreeMap::new();
    index.insert(base, 0);
    let mut distances = vec![0];
    let mut parents = vec![None];
    let mut weyl_dist = vec![AffineWeylElement::identity(n - 1)];
    let mut level = vec![0usize];
    for d in 0..radius {
        let mut found: BTreeMap<ChamberRep, (usize, usize)> = BTreeMap::new();
        for &c in &level {
            let g = chambers[c].to_matrix();
            for label in 0..n {
                for x in panel_neighbors(&g, label, p)? {
                    if !index.contains_key(&x) {
                        found.entry(x).or_insert((c, label));
                    }
                }
            }
        }
        if chambers.len() + found.len() > max_chambers {
            return Err(Error::BallTooLarge { limit: max_chambers });
        }
        level.clear();
        for (x, (parent, label)) in found {
            let id = chambers.len();
            let w = &weyl_dist[parent];
            let ws = w.compose(&AffineWeylElement::generator(&rd, label));
            let next = if weyl::length(&rd, &ws)? > weyl::length(&rd, w)? { ws } else { w.clone() };
            index.insert(x.clone(), id);
            chambers.push(x);
            distances.push(d + 1);
            parents.push(Some((parent, label)));
            weyl_dist.push(next);
            level.push(id);
        }
    }

    let mut panel_index: BTreeMap<Vec<ChamberRep>, usize> = BTreeMap::new();
    let mut panels = Vec::new();
    let mut chamber_panels = Vec::with_capacity(chambers.len());
    for c in 0..chambers.len() {
        let g = chambers[c].to_matrix();
        let mut mine = Vec::with_capacity(n);
        for label in 0..n {
            let mut members = panel_neighbors(&g, label, p)?;
            members.sort();
            let next = panels.len();
            let id = *panel_index.entry(members.clone()).or_insert(next);
            if id == next {
                let in_ball: Vec<usize> = members.iter().filter_map(|m| index.get(m).copied()).collect();
                let interior = in_ball.len() == members.len();
                let mut in_ball = in_ball;
                in_ball.sort_unstable();
                panels.push(Panel { label, members: in_ball, interior });
            }
            mine.push(id);
        }
        chamber_panels.push(mine);
    }

    let mut rotations = Vec::with_capacity(n);
    let mut rotation_inverses = Vec::with_capacity(n);
    let mut pointing_signs = Vec::with_capacity(n);
    for j in 0..n {
        let r = rotation_matrix(&rd, p, j)?;
        rotation_inverses.push(r.inverse()?);
        rotations.push(r);
        pointing_signs.push(apartment::pointing_permutation(&rd, j)?.sign());
    }

    Ok(ChamberBall {
        n,
        p,
        radius,
        rd,
        chambers,
        index,
        distances,
        parents,
        weyl: weyl_dist,
        panels,
        chamber_panels,
        rotations,
        rotation_inverses,
        pointing_signs,
    })
}

impl ChamberBall {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn root_datum(&self) -> &RootDatum {
        &self.rd
    }

    pub fn len(&self) -> usize {
        self.chambers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chambers.is_empty()
    }

    pub fn chambers(&self) -> &[ChamberRep] {
        &self.chambers
    }

    pub fn chamber(&self, id: usize) -> &ChamberRep {
        &self.chambers[id]
    }

    pub fn id_of(&self, rep: &ChamberRep) -> Option<usize> {
        self.index.get(rep).copied()
    }

    pub fn distance(&self, id: usize) -> usize {
        self.distances[id]
    }

    pub fn distances(&self) -> &[usize] {
        &self.distances
    }

    /// The BFS parent and the label of the panel crossed to reach `id`.
    pub fn parent(&self, id: usize) -> Option<(usize, usize)> {
        self.parents[id]
    }

    /// Relative position `δ(C_0, c)` as an element of `W_a`.
    pub fn weyl_distance(&self, id: usize) -> &AffineWeylElement {
        &self.weyl[id]
    }

    pub fn panels(&self) -> &[Panel] {
        &self.panels
    }

    pub fn panel(&self, id: usize) -> &Panel {
        &self.panels[id]
    }

    /// Index of the type-`label` panel of chamber `id`.
    pub fn panel_of(&self, id: usize, label: usize) -> usize {
        self.chamber_panels[id][label]
    }

    pub fn interior_panels(&self) -> impl Iterator<Item = (usize, &Panel)> {
        self.panels.iter().enumerate().filter(|(_, p)| p.interior)
    }

    /// `Ω_j`.
    pub fn rotation(&self, j: usize) -> &RatMatrix {
        &self.rotations[j]
    }

    /// `sign(σ_j)`, the HC1 factor between pointer `0` and pointer `j`.
    pub fn pointing_sign(&self, j: usize) -> i64 {
        self.pointing_signs[j]
    }

    pub fn point_chamber(&self, id: usize, pointer: usize) -> Result<PointedChamber> {
        if id >= self.len() {
            return Err(Error::InvalidParameters(format!("chamber {id} is not in the ball")));
        }
        if !self.rd.is_special_label(pointer) {
            return Err(Error::NotSpecial(pointer));
        }
        Ok(PointedChamber { chamber: id, pointer })
    }

    /// The group element `rep(c) Ω_j` whose coset is the pointed chamber.
    pub fn pointed_matrix(&self, pc: PointedChamber) -> RatMatrix {
        self.chambers[pc.chamber].to_matrix().mul(&self.rotations[pc.pointer])
    }

    /// The pointed chamber of the coset `gB`, if its chamber is in the ball.
    pub fn locate(&self, g: &RatMatrix) -> Result<Option<PointedChamber>> {
        let (rep, pointer) = self.locate_rep(g)?;
        Ok(self.id_of(&rep).map(|chamber| PointedChamber { chamber, pointer }))
    }

    /// Chamber representative and pointer of `gB`, inside the ball or not.
    pub fn locate_rep(&self, g: &RatMatrix) -> Result<(ChamberRep, usize)> {
        let v = valuation(&g.determinant(), self.p).ok_or(Error::SingularMatrix)?;
        let pointer = (-v).rem_euclid(self.n as i64) as usize;
        let h = g.mul(&self.rotation_inverses[pointer]);
        Ok((ChamberRep::canonical(&h, self.p)?, pointer))
    }

    /// Endpoints of all galleries of type `word` starting at `gB` and never
    /// stuttering. For a reduced word of `v` starting at the base these are
    /// the chambers of `BvB/B`.
    pub fn gallery_endpoints(&self, g: &RatMatrix, word: &[usize]) -> Result<Vec<ChamberRep>> {
        let mut current: BTreeSet<ChamberRep> = BTreeSet::new();
        current.insert(ChamberRep::canonical(g, self.p)?);
        for &s in word {
            let mut next = BTreeSet::new();
            for x in &current {
                for y in panel_neighbors(&x.to_matrix(), s, self.p)?.into_iter().skip(1) {
                    next.insert(y);
                }
            }
            current = next;
        }
        Ok(current.into_iter().collect())
    }

    /// Whether the chamber–panel incidence graph is a forest.
    pub fn incidence_is_forest(&self) -> bool {
        // vertices: chambers then panels; union-find over incidences
        let total = self.len() + self.panels.len();
        let mut parent: Vec<usize> = (0..total).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for (c, ps) in self.chamber_panels.iter().enumerate() {
            for &pid in ps {
                let a = find(&mut parent, c);
                let b = find(&mut parent, self.len() + pid);
                if a == b {
                    return false;
                }
                parent[a] = b;
            }
        }
        true
    }

    /// Canonical matrices of the chambers adjacent to `id` across `label`,
    /// whether or not they are in the ball.
    pub fn neighbors(&self, id: usize, label: usize) -> Result<Vec<ChamberRep>> {
        panel_neighbors(&self.chambers[id].to_matrix(), label, self.p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(n: usize, e: &[i64]) -> RatMatrix {
        RatMatrix::from_i64(n, e)
    }

    #[test]
    fn iwahori_examples() {
        assert!(iwahori_contains(&RatMatrix::identity(3), 2).unwrap());
        assert!(!iwahori_contains(&mat(2, &[1, 0, 0, 2]), 2).unwrap());
        assert!(!iwahori_contains(&mat(2, &[1, 0, 1, 1]), 2).unwrap());
        assert!(iwahori_contains(&mat(2, &[1, 0, 2, 1]), 2).unwrap());
        assert!(iwahori_contains(&mat(2, &[3, 0, 0, 3]), 3).unwrap());
        assert_eq!(iwahori_contains(&mat(2, &[1, 1, 1, 1]), 2), Err(Error::SingularMatrix));
    }

    #[test]
    fn canonical_of_iwahori_is_identity() {
        let id = ChamberRep::canonical(&RatMatrix::identity(3), 3).unwrap();
        let b = mat(3, &[2, 5, -1, 3, 1, 7, 6, -3, 4]);
        assert!(iwahori_contains(&b, 3).unwrap());
        assert_eq!(ChamberRep::canonical(&b, 3).unwrap(), id);
    }

    #[test]
    fn small_ball_counts() {
        assert_eq!(build_ball(2, 2, 0).unwrap().len(), 1);
        assert_eq!(build_ball(2, 2, 1).unwrap().len(), 5);
        assert_eq!(build_ball(2, 2, 2).unwrap().len(), 13);
        assert_eq!(build_ball(3, 2, 1).unwrap().len(), 7);
    }

    #[test]
    fn panel_of_base_has_q_plus_one_chambers() {
        let nb = panel_neighbors(&RatMatrix::identity(2), 1, 2).unwrap();
        assert_eq!(nb.len(), 3);
        let set: BTreeSet<_> = nb.iter().collect();
        assert_eq!(set.len(), 3);
    }

    #[test]
    fn panels_are_well_defined() {
        let g = mat(3, &[1, 2, 0, 0, 1, 1, 4, 0, 1]);
        for label in 0..3 {
            let mut first = panel_neighbors(&g, label, 2).unwrap();
            first.sort();
            for other in first.clone() {
                let mut again = panel_neighbors(&other.to_matrix(), label, 2).unwrap();
                again.sort();
                assert_eq!(again, first);
            }
        }
    }

    #[test]
    fn neighbors_across_one_panel_have_length_one() {
        let ball = build_ball(3, 2, 1).unwrap();
        let rd = ball.root_datum();
        for id in 1..ball.len() {
            let (_, label) = ball.parent(id).unwrap();
            assert_eq!(*ball.weyl_distance(id), AffineWeylElement::generator(rd, label));
        }
    }

    #[test]
    fn rotations_normalize_iwahori() {
        for n in 2..=4 {
            let rd = RootDatum::build(Family::A, n - 1).unwrap();
            for j in 0..n {
                let om = rotation_matrix(&rd, 3, j).unwrap();
                let inv = om.inverse().unwrap();
                for label in 0..n {
                    for a in 1..3 {
                        let b = if label == 0 { root_unipotent(n, 3, 0, a) } else { root_unipotent(n, 3, label, a) };
                        assert!(iwahori_contains(&om.mul(&b).mul(&inv), 3).unwrap());
                    }
                }
                // det valuation
                assert_eq!(valuation(&om.determinant(), 3), Some(-(j as i64)));
            }
        }
    }

    #[test]
    fn locate_pointed_roundtrip() {
        let ball = build_ball(3, 2, 2).unwrap();
        for id in 0..ball.len() {
            for j in 0..3 {
                let pc = ball.point_chamber(id, j).unwrap();
                assert_eq!(ball.locate(&ball.pointed_matrix(pc)).unwrap(), Some(pc));
                assert_eq!(pc.repoint(2).repoint(j), pc);
            }
        }
    }

    #[test]
    fn tree_is_forest() {
        assert!(build_ball(2, 3, 3).unwrap().incidence_is_forest());
        assert!(!build_ball(3, 2, 3).unwrap().incidence_is_forest());
    }
}
