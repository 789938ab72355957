//! Complete flags in `(Z/p^k)^n` as a finite model of locally constant
//! functions on `G/P`, with `P` the upper triangular Borel subgroup.
//!
//! A flag is stored as a canonical matrix over `Z/p^k` whose first `j`
//! columns span the `j`-th step. Column `j` has a `1` in its pivot row, zeros in
//! the pivot rows of earlier columns, arbitrary entries above the pivot and
//! multiples of `p` below it; the pivot is the lowest row holding a unit.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;

use crate::building::{root_unipotent, simple_lift, ChamberBall};
use crate::field::{is_prime, Rationals};
use crate::harmonic::IwahoriFunction;
use crate::linalg;
use crate::matrix::RatMatrix;
use crate::padic::{pow_rat, reduce_integral, valuation};
use crate::rootdata::RootDatum;
use crate::weyl::{self, AffineWeylElement, FiniteWeylElement};
use crate::{Error, Result};

/// Largest level enumerated; level `k` for `n = 3, p = 3` already has
/// `27^{k-1} · 52` points.
pub const MAX_LEVEL: u32 = 6;

fn inv_mod(a: u64, m: u64) -> u64 {
    let e = BigInt::from(a).extended_gcd(&BigInt::from(m));
    u64::try_from(e.x.mod_floor(&BigInt::from(m))).expect("fits")
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// The flags of `(Z/p^k)^n`, sorted lexicographically by canonical matrix.
#[derive(Clone, Debug)]
pub struct FlagSpace {
    n: usize,
    p: u64,
    level: u32,
    modulus: u64,
    points: Vec<Vec<u64>>,
    pivots: Vec<Vec<usize>>,
    index: BTreeMap<Vec<u64>, usize>,
}

impl FlagSpace {
    pub fn new(n: usize, p: u64, level: u32) -> Result<Self> {
        if n < 2 || !is_prime(p) || level == 0 || level > MAX_LEVEL {
            return Err(Error::InvalidParameters(format!("flag space n={n} p={p} level={level}")));
        }
        let modulus = p.checked_pow(level).ok_or_else(|| Error::InvalidParameters(format!("p^{level} overflows")))?;
        let mut points = vec![];
        let mut current = vec![0u64; n * n];
        let mut used = vec![false; n];
        enumerate(n, p, modulus, 0, &mut used, &mut current, &mut points);
        points.sort();
        let mut space = Self { n, p, level, modulus, points: vec![], pivots: vec![], index: BTreeMap::new() };
        for (i, pt) in points.iter().enumerate() {
            space.index.insert(pt.clone(), i);
        }
        space.pivots = points.iter().map(|pt| space.pivot_rows(pt)).collect();
        space.points = points;
        Ok(space)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Canonical matrix of flag `i`, row-major.
    pub fn point(&self, i: usize) -> &[u64] {
        &self.points[i]
    }

    /// Pivot row of each column: the Bruhat cell of the reduction mod `p`.
    pub fn cell(&self, i: usize) -> &[usize] {
        &self.pivots[i]
    }

    pub fn index_of(&self, canonical: &[u64]) -> Option<usize> {
        self.index.get(canonical).copied()
    }

    fn pivot_rows(&self, m: &[u64]) -> Vec<usize> {
        let n = self.n;
        (0..n).map(|j| (0..n).rev().find(|&r| m[r * n + j] % self.p != 0).expect("pivot")).collect()
    }

    /// Canonical form of an invertible matrix over `Z/p^k` (entries reduced).
    pub fn canonicalize(&self, m: &[u64]) -> Result<Vec<u64>> {
        canonical_flag(self.n, self.p, self.modulus, m)
    }

    /// The flag spanned by the columns of a rational matrix, after saturating
    /// in `Z_p^n` and reducing mod `p^k`.
    pub fn flag_of(&self, g: &RatMatrix) -> Result<usize> {
        let (lattice, _) = integral_flag(g, self.p)?;
        let reduced: Vec<u64> = lattice.entries().iter().map(|x| reduce_integral(x, self.p, self.level)).collect();
        let c = self.canonicalize(&reduced)?;
        self.index_of(&c).ok_or_else(|| Error::Internal(format!("flag {c:?} missing from enumeration")))
    }

    /// Integer lift of flag `i`.
    pub fn lift(&self, i: usize) -> RatMatrix {
        RatMatrix::from_entries(self.n, self.points[i].iter().map(|&x| BigRational::from_integer(x.into())).collect())
    }

    /// The flags sharing every step with flag `i` except the `j`-th,
    /// `1 ≤ j < n`: the fiber of `G/P -> G/P_j`.
    pub fn fiber(&self, i: usize, j: usize) -> Result<Vec<usize>> {
        let n = self.n;
        if j == 0 || j >= n {
            return Err(Error::LabelOutOfRange { label: j, max: n - 1 });
        }
        let m = &self.points[i];
        let (a, b) = (j - 1, j);
        let col = |c: usize| -> Vec<u64> { (0..n).map(|r| m[r * n + c]).collect() };
        let (fa, fb) = (col(a), col(b));
        let q = self.modulus;
        let mut out = BTreeSet::new();
        let mut push = |x: Vec<u64>, y: Vec<u64>| -> Result<()> {
            let mut new = m.clone();
            for r in 0..n {
                new[r * n + a] = x[r];
                new[r * n + b] = y[r];
            }
            let c = self.canonicalize(&new)?;
            out.insert(self.index_of(&c).ok_or_else(|| Error::Internal(format!("fiber point {c:?} missing")))?);
            Ok(())
        };
        let comb = |s: u64, t: u64| -> Vec<u64> {
            (0..n).map(|r| (mul_mod(s, fa[r], q) + mul_mod(t, fb[r], q)) % q).collect()
        };
        for y in 0..q {
            push(comb(1, y), fb.clone())?;
        }
        for z in 0..q / self.p {
            push(comb(self.p * z, 1), fa.clone())?;
        }
        Ok(out.into_iter().collect())
    }

    /// Level-`k+1` flags mapped to their level-`k` reduction.
    pub fn reduction_from(&self, finer: &FlagSpace) -> Result<Vec<usize>> {
        if finer.n != self.n || finer.p != self.p || finer.level < self.level {
            return Err(Error::InvalidParameters(format!("cannot reduce level {} to {}", finer.level, self.level)));
        }
        (0..finer.len())
            .map(|i| {
                let reduced: Vec<u64> = finer.points[i].iter().map(|x| x % self.modulus).collect();
                let c = self.canonicalize(&reduced)?;
                self.index_of(&c).ok_or_else(|| Error::Internal(format!("reduction {c:?} missing")))
            })
            .collect()
    }
}

fn enumerate(n: usize, p: u64, q: u64, j: usize, used: &mut [bool], current: &mut [u64], out: &mut Vec<Vec<u64>>) {
    if j == n {
        out.push(current.to_vec());
        return;
    }
    for r in 0..n {
        if used[r] {
            continue;
        }
        let free: Vec<(usize, u64, u64)> = (0..n)
            .filter(|&s| !used[s] && s != r)
            .map(|s| if s < r { (s, 1, q) } else { (s, p, q / p) })
            .collect();
        used[r] = true;
        let total: u64 = free.iter().map(|f| f.2).product();
        for mut code in 0..total {
            for s in 0..n {
                current[s * n + j] = 0;
            }
            current[r * n + j] = 1;
            for &(s, step, count) in &free {
                current[s * n + j] = (code % count) * step;
                code /= count;
            }
            enumerate(n, p, q, j + 1, used, current, out);
        }
        used[r] = false;
    }
}

/// Canonical form over `Z/q`, `q = p^k`.
pub fn canonical_flag(n: usize, p: u64, q: u64, m: &[u64]) -> Result<Vec<u64>> {
    let mut a: Vec<u64> = m.iter().map(|x| x % q).collect();
    let mut pivots: Vec<usize> = Vec::with_capacity(n);
    for j in 0..n {
        for (i, &r) in pivots.iter().enumerate() {
            let c = a[r * n + j];
            if c == 0 {
                continue;
            }
            for s in 0..n {
                let sub = mul_mod(c, a[s * n + i], q);
                a[s * n + j] = (a[s * n + j] + q - sub) % q;
            }
        }
        let r = (0..n)
            .rev()
            .find(|&r| !pivots.contains(&r) && a[r * n + j] % p != 0)
            .ok_or(Error::SingularMatrix)?;
        let inv = inv_mod(a[r * n + j], q);
        for s in 0..n {
            a[s * n + j] = mul_mod(a[s * n + j], inv, q);
        }
        pivots.push(r);
    }
    Ok(a)
}

/// A basis of `Z_p^n` adapted to the flag spanned by the columns of `g`,
/// with the pivot row of every column.
pub fn integral_flag(g: &RatMatrix, p: u64) -> Result<(RatMatrix, Vec<usize>)> {
    let n = g.size();
    let mut out = RatMatrix::zero(n);
    let mut pivots: Vec<usize> = vec![];
    for j in 0..n {
        let mut v: Vec<BigRational> = (0..n).map(|r| g.get(r, j).clone()).collect();
        for (i, &r) in pivots.iter().enumerate() {
            let c = v[r].clone();
            if c.is_zero() {
                continue;
            }
            for (s, x) in v.iter_mut().enumerate() {
                *x -= &c * out.get(s, i);
            }
        }
        let minval = v.iter().filter_map(|x| valuation(x, p)).min().ok_or(Error::SingularMatrix)?;
        let scale = pow_rat(p, -minval);
        for x in v.iter_mut() {
            *x *= &scale;
        }
        let r = (0..n)
            .rev()
            .find(|&r| !pivots.contains(&r) && valuation(&v[r], p) == Some(0))
            .ok_or_else(|| Error::Internal(alloc::string::String::from("no unit pivot")))?;
        let inv = v[r].recip();
        for (s, x) in v.into_iter().enumerate() {
            out.set(s, j, x * &inv);
        }
        pivots.push(r);
    }
    Ok((out, pivots))
}

/// The permutation `j -> row of the 1 in column j` of a Weyl element of
/// `A_{n-1}`.
pub fn weyl_permutation(rd: &RootDatum, w: &FiniteWeylElement) -> Vec<usize> {
    let m = crate::building::weyl_lift(rd, 2, w);
    let n = m.size();
    (0..n).map(|j| (0..n).find(|&r| !m.get(r, j).is_zero()).expect("permutation")).collect()
}

/// A function on the flags of a [`FlagSpace`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagFunction {
    pub level: u32,
    pub values: Vec<i64>,
}

impl FlagFunction {
    pub fn zero(space: &FlagSpace) -> Self {
        Self { level: space.level, values: vec![0; space.len()] }
    }

    pub fn support_size(&self) -> usize {
        self.values.iter().filter(|&&v| v != 0).count()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    pub fn plus(&self, other: &Self) -> Self {
        Self { level: self.level, values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect() }
    }

    pub fn scaled(&self, s: i64) -> Self {
        Self { level: self.level, values: self.values.iter().map(|a| a * s).collect() }
    }

    /// Pullback along the reduction map from a finer space.
    pub fn pullback(&self, finer: &FlagSpace, reduction: &[usize]) -> Self {
        Self { level: finer.level, values: reduction.iter().map(|&i| self.values[i]).collect() }
    }

    /// Whether the function is constant on every fiber of `G/P -> G/P_j`.
    pub fn is_fiber_constant(&self, space: &FlagSpace, j: usize) -> Result<bool> {
        let mut seen = vec![false; space.len()];
        for i in 0..space.len() {
            if seen[i] {
                continue;
            }
            for f in space.fiber(i, j)? {
                seen[f] = true;
                if self.values[f] != self.values[i] {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Smallest level at which `g · χ_{BvP}` is resolved.
pub fn required_level(g: &RatMatrix, p: u64) -> Result<u32> {
    Ok(1 + g.spread(p)? as u32)
}

/// `g · χ_{BvP}`: the flags `F` with `g^{-1} F` reducing into the cell of `v`,
/// `v` given as a permutation `column -> row`.
pub fn chi_bvp(space: &FlagSpace, g: &RatMatrix, v: &[usize]) -> Result<FlagFunction> {
    let needed = required_level(g, space.p)?;
    if needed > space.level {
        return Err(Error::LevelTooLow { needed_level: needed });
    }
    let ginv = g.inverse()?;
    let q = BigRational::from_integer(BigInt::from(space.modulus));
    let shift = RatMatrix::from_entries(space.n, vec![q; space.n * space.n]);
    let mut f = FlagFunction::zero(space);
    for i in 0..space.len() {
        let lift = space.lift(i);
        let (_, cell) = integral_flag(&ginv.mul(&lift), space.p)?;
        let other = add(&lift, &shift);
        let (_, cell2) = integral_flag(&ginv.mul(&other), space.p)?;
        if cell != cell2 {
            return Err(Error::Internal(format!("g χ_BvP is not constant at level {}", space.level)));
        }
        f.values[i] = i64::from(cell == v);
    }
    Ok(f)
}

fn add(a: &RatMatrix, b: &RatMatrix) -> RatMatrix {
    RatMatrix::from_entries(a.size(), a.entries().iter().zip(b.entries()).map(|(x, y)| x + y).collect())
}

/// `χ_{BP}`: flags reducing to the standard flag mod `p`.
pub fn chi_bp(space: &FlagSpace) -> FlagFunction {
    let id: Vec<usize> = (0..space.n).collect();
    FlagFunction { level: space.level, values: (0..space.len()).map(|i| i64::from(space.cell(i) == id.as_slice())).collect() }
}

/// `Θ(φ) = Σ φ(gB) g χ_{BP}`.
pub fn theta(space: &FlagSpace, ball: &ChamberBall, phi: &IwahoriFunction) -> Result<FlagFunction> {
    if ball.n() != space.n || ball.p() != space.p {
        return Err(Error::InvalidParameters(alloc::string::String::from("ball and flag space disagree")));
    }
    let id: Vec<usize> = (0..space.n).collect();
    let needed = phi
        .support()
        .map(|(pc, _)| required_level(&ball.pointed_matrix(pc), space.p))
        .try_fold(1, |acc, l| l.map(|l| acc.max(l)))?;
    if needed > space.level {
        return Err(Error::LevelTooLow { needed_level: needed });
    }
    let mut out = FlagFunction::zero(space);
    for (pc, v) in phi.support() {
        out = out.plus(&chi_bvp(space, &ball.pointed_matrix(pc), &id)?.scaled(v));
    }
    Ok(out)
}

/// Translates `b · χ_{BP}` for `b` over `B_i/B`, `1 ≤ i < n`: checks that they
/// are pairwise disjoint and add up to the indicator of the flags in the cells
/// of `1` and `s_i`.
pub fn verify_partition_bip(n: usize, p: u64, level: u32, i: usize) -> Result<bool> {
    if i == 0 || i >= n {
        return Err(Error::LabelOutOfRange { label: i, max: n - 1 });
    }
    let space = FlagSpace::new(n, p, level)?;
    let id: Vec<usize> = (0..n).collect();
    let s = simple_lift(n, p, i);
    let mut translates = vec![chi_bvp(&space, &RatMatrix::identity(n), &id)?];
    for a in 0..p {
        translates.push(chi_bvp(&space, &root_unipotent(n, p, i, a).mul(&s), &id)?);
    }
    let mut si = id.clone();
    si.swap(i - 1, i);
    for x in 0..space.len() {
        let hits = translates.iter().filter(|t| t.values[x] != 0).count();
        let expected = usize::from(space.cell(x) == id.as_slice() || space.cell(x) == si.as_slice());
        if hits != expected {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The flag-variety counterpart of the telescoping identity: with `F_m = g ·
/// χ_{B v_m P}` for the prefixes `v_m` of a reduced word of `w`, checks
/// `F_0 - (-1)^d F_d = Σ (-1)^{m-1}(F_{m-1} + F_m)` and that each summand is
/// constant on the fibers of `G/P -> G/P_j` for its letter `s_j`.
pub fn verify_lemma_bwp(space: &FlagSpace, rd: &RootDatum, g: &RatMatrix, w: &FiniteWeylElement) -> Result<bool> {
    if rd.rank() + 1 != space.n {
        return Err(Error::InvalidParameters(format!("rank {} does not match n = {}", rd.rank(), space.n)));
    }
    let word = weyl::reduced_word(rd, &AffineWeylElement::from_linear(w.clone()))?;
    let d = word.len();
    let layers: Vec<FlagFunction> = (0..=d)
        .map(|m| {
            let prefix = AffineWeylElement::from_word(rd, &word[..m]);
            chi_bvp(space, g, &weyl_permutation(rd, prefix.linear()))
        })
        .collect::<Result<_>>()?;
    let lhs = layers[0].plus(&layers[d].scaled(-weyl::sign_of_length(d)));
    let mut rhs = FlagFunction::zero(space);
    for m in 1..=d {
        let summand = layers[m - 1].plus(&layers[m]);
        if !summand.is_fiber_constant(space, word[m - 1])? {
            return Ok(false);
        }
        rhs = rhs.plus(&summand.scaled(weyl::sign_of_length(m - 1)));
    }
    Ok(lhs == rhs)
}

/// Dimension over `Q` of the functions on complete flags over `F_p` modulo
/// the pullbacks from the `n - 1` maximal partial flag varieties.
pub fn steinberg_dimension_level1(n: usize, p: u64) -> Result<usize> {
    let space = FlagSpace::new(n, p, 1)?;
    let mut rows = BTreeSet::new();
    for j in 1..n {
        for i in 0..space.len() {
            rows.insert(space.fiber(i, j)?);
        }
    }
    let q = Rationals;
    let one = BigRational::from_integer(1.into());
    let dense: Vec<Vec<BigRational>> = rows
        .into_iter()
        .map(|fib| {
            let mut row = vec![BigRational::zero(); space.len()];
            for f in fib {
                row[f] = one.clone();
            }
            row
        })
        .collect();
    Ok(space.len() - linalg::rank(&q, dense, space.len()))
}

/// `|GL_n(Z/p^k)| / |B(Z/p^k)|`.
pub fn flag_count(n: usize, p: u64, level: u32) -> u64 {
    let mut count = 1u64;
    for m in 1..=n as u32 {
        count *= (0..m).map(|e| p.pow(e)).sum::<u64>();
    }
    count * p.pow((level - 1) * (n * (n - 1) / 2) as u32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::Family;

    #[test]
    fn flag_counts() {
        for (n, p, k) in [(2, 2, 1), (2, 3, 1), (3, 2, 1), (3, 2, 2), (2, 2, 3), (3, 3, 1)] {
            assert_eq!(FlagSpace::new(n, p, k).unwrap().len() as u64, flag_count(n, p, k), "{n} {p} {k}");
        }
        assert_eq!(flag_count(3, 2, 1), 21);
    }

    #[test]
    fn canonical_form_is_fixed() {
        let s = FlagSpace::new(3, 2, 2).unwrap();
        for i in 0..s.len() {
            assert_eq!(s.canonicalize(s.point(i)).unwrap(), s.point(i));
        }
    }

    #[test]
    fn chi_bp_small() {
        let s = FlagSpace::new(2, 2, 1).unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(chi_bp(&s).support_size(), 1);
        let s2 = FlagSpace::new(2, 2, 2).unwrap();
        assert_eq!(chi_bp(&s2).support_size(), 2);
        let s3 = FlagSpace::new(2, 3, 2).unwrap();
        assert_eq!(chi_bp(&s3).support_size(), 3);
    }

    #[test]
    fn chi_bvp_matches_cells() {
        let s = FlagSpace::new(3, 2, 1).unwrap();
        let id = RatMatrix::identity(3);
        let mut total = FlagFunction::zero(&s);
        let rd = RootDatum::build(Family::A, 2).unwrap();
        let mut elements = BTreeSet::new();
        for word in [&[][..], &[1], &[2], &[1, 2], &[2, 1], &[1, 2, 1]] {
            let w = AffineWeylElement::from_word(&rd, word);
            let perm = weyl_permutation(&rd, w.linear());
            elements.insert(perm.clone());
            total = total.plus(&chi_bvp(&s, &id, &perm).unwrap());
        }
        assert_eq!(elements.len(), 6);
        assert!(total.values.iter().all(|&v| v == 1));
    }

    #[test]
    fn fibers_have_projective_line_size() {
        for (n, p, k) in [(2, 2, 1), (3, 2, 2), (3, 3, 1)] {
            let s = FlagSpace::new(n, p, k).unwrap();
            let expected = (p.pow(k) + p.pow(k - 1)) as usize;
            for j in 1..n {
                for i in 0..s.len() {
                    let f = s.fiber(i, j).unwrap();
                    assert_eq!(f.len(), expected);
                    assert!(f.contains(&i));
                }
            }
        }
    }

    #[test]
    fn steinberg_small() {
        assert_eq!(steinberg_dimension_level1(2, 2).unwrap(), 2);
        assert_eq!(steinberg_dimension_level1(2, 3).unwrap(), 3);
        assert_eq!(steinberg_dimension_level1(3, 2).unwrap(), 8);
    }

    #[test]
    fn partition_small() {
        assert!(verify_partition_bip(2, 2, 1, 1).unwrap());
        assert!(verify_partition_bip(2, 3, 1, 1).unwrap());
        assert!(verify_partition_bip(2, 2, 2, 1).unwrap());
    }

    #[test]
    fn lemma_bwp_single_letter() {
        let rd = RootDatum::build(Family::A, 1).unwrap();
        let s = FlagSpace::new(2, 2, 1).unwrap();
        let s1 = FiniteWeylElement::simple(&rd, 1);
        assert!(verify_lemma_bwp(&s, &rd, &RatMatrix::identity(2), &s1).unwrap());
        assert!(verify_lemma_bwp(&s, &rd, &RatMatrix::identity(2), &FiniteWeylElement::identity(1)).unwrap());
        let id = RatMatrix::identity(2);
        let sum = chi_bvp(&s, &id, &[0, 1]).unwrap().plus(&chi_bvp(&s, &id, &[1, 0]).unwrap());
        assert!(sum.values.iter().all(|&v| v == 1));
    }

    #[test]
    fn level_too_low_is_reported() {
        let s = FlagSpace::new(2, 2, 1).unwrap();
        let t = RatMatrix::from_i64(2, &[1, 0, 0, 4]);
        assert_eq!(chi_bvp(&s, &t, &[0, 1]), Err(Error::LevelTooLow { needed_level: 3 }));
    }
}
