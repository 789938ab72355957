//! Finite, affine and extended affine Weyl groups acting on the apartment.
//!
//! A finite Weyl element is stored as its integer matrix on coroot
//! coordinates. An affine element `x -> w(x) + lambda` is the pair
//! `(lambda, w)`; it lies in `W_a` iff `lambda` is an integral combination of
//! coroots.

use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;

use crate::rootdata::RootDatum;
use crate::{Error, Rat, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteWeylElement {
    rank: usize,
    matrix: Vec<i64>,
}

impl FiniteWeylElement {
    pub fn identity(rank: usize) -> Self {
        let mut matrix = vec![0; rank * rank];
        for i in 0..rank {
            matrix[i * rank + i] = 1;
        }
        Self { rank, matrix }
    }

    /// The simple reflection `s_i`, `i` in `1..=l`.
    pub fn simple(rd: &RootDatum, i: usize) -> Self {
        let mut root = vec![0; rd.rank()];
        root[i - 1] = 1;
        Self::reflection(rd, &root).expect("simple roots are roots")
    }

    /// `s_alpha(x) = x - <x, alpha> alpha^vee`.
    pub fn reflection(rd: &RootDatum, root: &[i64]) -> Result<Self> {
        let (k, sign) = rd.find_root(root).ok_or(Error::NotARoot)?;
        let l = rd.rank();
        // s_{-alpha} = s_alpha, so the sign drops out
        let _ = sign;
        let coroot = &rd.coroots()[k];
        let pos = &rd.positive_roots()[k];
        let functional: Vec<i64> =
            (0..l).map(|j| (0..l).map(|i| rd.cartan_matrix()[j][i] * pos[i]).sum()).collect();
        let mut m = Self::identity(l);
        for r in 0..l {
            for c in 0..l {
                m.matrix[r * l + c] -= coroot[r] * functional[c];
            }
        }
        Ok(m)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn entry(&self, r: usize, c: usize) -> i64 {
        self.matrix[r * self.rank + c]
    }

    pub fn matrix(&self) -> &[i64] {
        &self.matrix
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        let l = self.rank;
        let mut out = vec![0; l * l];
        for r in 0..l {
            for c in 0..l {
                out[r * l + c] = (0..l).map(|k| self.entry(r, k) * other.entry(k, c)).sum();
            }
        }
        Self { rank: l, matrix: out }
    }

    pub fn apply(&self, x: &[Rat]) -> Vec<Rat> {
        let l = self.rank;
        (0..l)
            .map(|r| (0..l).fold(Rat::from_integer(0), |acc, c| acc + x[c] * self.entry(r, c)))
            .collect()
    }

    fn apply_int(&self, x: &[i64]) -> Vec<i64> {
        let l = self.rank;
        (0..l).map(|r| (0..l).map(|c| self.entry(r, c) * x[c]).sum()).collect()
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.rank)
    }

    /// Number of positive coroots sent to negative ones.
    pub fn length(&self, rd: &RootDatum) -> usize {
        rd.coroots()
            .iter()
            .filter(|c| self.apply_int(c).iter().any(|&x| x < 0))
            .count()
    }

    /// Whether `w(alpha_i) > 0`, equivalently `l(w s_i) > l(w)`.
    fn keeps_simple_positive(&self, i: usize) -> bool {
        let l = self.rank;
        (0..l).all(|r| self.entry(r, i - 1) >= 0)
    }

    pub fn inverse(&self) -> Self {
        let l = self.rank;
        let mut m: Vec<Vec<Rat>> = (0..l)
            .map(|r| {
                let mut row: Vec<Rat> = (0..l).map(|c| Rat::from_integer(self.entry(r, c))).collect();
                row.extend((0..l).map(|c| Rat::from_integer((r == c) as i64)));
                row
            })
            .collect();
        gauss_jordan(&mut m, l);
        let matrix = m
            .iter()
            .flat_map(|row| row[l..].iter().map(|x| x.to_integer()))
            .collect();
        Self { rank: l, matrix }
    }

    /// Determinant by exact elimination.
    pub fn determinant(&self) -> i64 {
        let l = self.rank;
        let mut m: Vec<Vec<Rat>> = (0..l)
            .map(|r| (0..l).map(|c| Rat::from_integer(self.entry(r, c))).collect())
            .collect();
        let mut det = Rat::from_integer(1);
        for col in 0..l {
            let Some(p) = (col..l).find(|&r| m[r][col] != Rat::from_integer(0)) else {
                return 0;
            };
            if p != col {
                m.swap(p, col);
                det = -det;
            }
            det *= m[col][col];
            for r in col + 1..l {
                let f = m[r][col] / m[col][col];
                let pivot_row = m[col].clone();
                for (x, y) in m[r].iter_mut().zip(&pivot_row) {
                    *x -= f * *y;
                }
            }
        }
        det.to_integer()
    }
}

fn gauss_jordan(m: &mut [Vec<Rat>], l: usize) {
    for col in 0..l {
        let p = (col..l).find(|&r| m[r][col] != Rat::from_integer(0)).expect("invertible");
        m.swap(p, col);
        let inv = m[col][col].recip();
        for x in m[col].iter_mut() {
            *x *= inv;
        }
        for r in 0..l {
            if r != col && m[r][col] != Rat::from_integer(0) {
                let f = m[r][col];
                let pivot_row = m[col].clone();
                for (x, y) in m[r].iter_mut().zip(&pivot_row) {
                    *x -= f * *y;
                }
            }
        }
    }
}

/// An element `x -> linear(x) + translation` of the extended affine Weyl
/// group `P(Phi^vee) ⋊ W`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineWeylElement {
    translation: Vec<Rat>,
    linear: FiniteWeylElement,
}

impl AffineWeylElement {
    pub fn identity(rank: usize) -> Self {
        Self { translation: vec![Rat::from_integer(0); rank], linear: FiniteWeylElement::identity(rank) }
    }

    pub fn new(translation: Vec<Rat>, linear: FiniteWeylElement) -> Self {
        assert_eq!(translation.len(), linear.rank());
        Self { translation, linear }
    }

    pub fn from_linear(linear: FiniteWeylElement) -> Self {
        Self { translation: vec![Rat::from_integer(0); linear.rank()], linear }
    }

    /// The pure translation `tau(v)`.
    pub fn translation_by(v: Vec<Rat>) -> Self {
        let l = v.len();
        Self { translation: v, linear: FiniteWeylElement::identity(l) }
    }

    /// Generator of `S_a`: `s_0 = s_{alpha~,1}` for label 0, `s_i` otherwise.
    pub fn generator(rd: &RootDatum, label: usize) -> Self {
        if label == 0 {
            affine_reflection(rd, rd.highest_root(), 1).expect("highest root is a root")
        } else {
            Self::from_linear(FiniteWeylElement::simple(rd, label))
        }
    }

    pub fn translation(&self) -> &[Rat] {
        &self.translation
    }

    pub fn linear(&self) -> &FiniteWeylElement {
        &self.linear
    }

    pub fn rank(&self) -> usize {
        self.linear.rank()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        let moved = self.linear.apply(&other.translation);
        let translation = moved.iter().zip(&self.translation).map(|(a, b)| *a + *b).collect();
        Self { translation, linear: self.linear.compose(&other.linear) }
    }

    pub fn inverse(&self) -> Self {
        let inv = self.linear.inverse();
        let translation = inv.apply(&self.translation).into_iter().map(|x| -x).collect();
        Self { translation, linear: inv }
    }

    pub fn apply(&self, x: &[Rat]) -> Vec<Rat> {
        self.linear.apply(x).into_iter().zip(&self.translation).map(|(a, b)| a + *b).collect()
    }

    /// Whether the translation part lies in the coroot lattice.
    pub fn in_affine_weyl_group(&self) -> bool {
        self.translation.iter().all(|x| x.is_integer())
    }

    pub fn is_identity(&self) -> bool {
        self.linear.is_identity() && self.translation.iter().all(|x| *x == Rat::from_integer(0))
    }

    /// Product of generators, left to right.
    pub fn from_word(rd: &RootDatum, word: &[usize]) -> Self {
        word.iter()
            .fold(Self::identity(rd.rank()), |acc, &s| acc.compose(&Self::generator(rd, s)))
    }
}

/// `s_{alpha,r} = tau(r alpha^vee) ∘ s_alpha`, the reflection in
/// `H_{alpha,r} = {x : <x, alpha> = r}`.
pub fn affine_reflection(rd: &RootDatum, root: &[i64], r: i64) -> Result<AffineWeylElement> {
    let (k, sign) = rd.find_root(root).ok_or(Error::NotARoot)?;
    let linear = FiniteWeylElement::reflection(rd, root)?;
    let translation = rd.coroots()[k].iter().map(|&c| Rat::from_integer(sign * r * c)).collect();
    Ok(AffineWeylElement { translation, linear })
}

/// Number of affine hyperplanes separating `C_0` from `w C_0`. Defined on the
/// whole extended group; zero exactly on the stabilizer of `C_0`.
pub fn length_extended(rd: &RootDatum, w: &AffineWeylElement) -> usize {
    let image = w.apply(rd.alcove_barycenter());
    (0..rd.positive_roots().len())
        .map(|k| rd.pair(&image, k).floor().to_integer().unsigned_abs() as usize)
        .sum()
}

/// Coxeter length in `(W_a, S_a)`.
pub fn length(rd: &RootDatum, w: &AffineWeylElement) -> Result<usize> {
    if !w.in_affine_weyl_group() {
        return Err(Error::ExtendedElement);
    }
    Ok(length_extended(rd, w))
}

/// A reduced word for `w ∈ W_a`, as labels in `0..=l`; the product of the
/// generators from left to right is `w`. Lower labels are preferred.
pub fn reduced_word(rd: &RootDatum, w: &AffineWeylElement) -> Result<Vec<usize>> {
    let mut current = w.clone();
    let mut len = length(rd, &current)?;
    let mut word = Vec::with_capacity(len);
    while len > 0 {
        let (s, next, next_len) = (0..=rd.rank())
            .find_map(|s| {
                let candidate = AffineWeylElement::generator(rd, s).compose(&current);
                let cl = length_extended(rd, &candidate);
                (cl < len).then_some((s, candidate, cl))
            })
            .ok_or_else(|| Error::Internal(alloc::string::String::from("no descent found")))?;
        word.push(s);
        current = next;
        len = next_len;
    }
    Ok(word)
}

/// Longest element of `W`, or of the parabolic subgroup generated by
/// `s_j, j != omit`.
pub fn longest_element(rd: &RootDatum, omit: Option<usize>) -> FiniteWeylElement {
    let l = rd.rank();
    let mut w = FiniteWeylElement::identity(l);
    loop {
        let next = (1..=l)
            .filter(|&j| Some(j) != omit)
            .find(|&j| w.keeps_simple_positive(j));
        match next {
            Some(j) => w = w.compose(&FiniteWeylElement::simple(rd, j)),
            None => return w,
        }
    }
}

/// The pure translation `tau(varpi_i)`, a model for `t_i`.
pub fn translation_element(rd: &RootDatum, i: usize) -> Result<AffineWeylElement> {
    if i == 0 || i > rd.rank() {
        return Err(Error::LabelOutOfRange { label: i, max: rd.rank() });
    }
    Ok(AffineWeylElement::translation_by(rd.fundamental_coweight(i).to_vec()))
}

/// `t_i w_i w_0`, which stabilizes `C_0` for `i ∈ J`.
pub fn chamber_rotation(rd: &RootDatum, i: usize) -> Result<AffineWeylElement> {
    let t = translation_element(rd, i)?;
    let wi_w0 = longest_element(rd, Some(i)).compose(&longest_element(rd, None));
    Ok(t.compose(&AffineWeylElement::from_linear(wi_w0)))
}

/// Coxeter matrix entry `m_ij` of `(W_a, S_a)` read off the extended Dynkin
/// diagram; `None` stands for infinity.
pub fn coxeter_exponent(rd: &RootDatum, i: usize, j: usize) -> Option<u32> {
    if i == j {
        return Some(1);
    }
    let a = |x: usize, y: usize| -> i64 {
        // <alpha_x^vee, alpha_y> with alpha_0 = -alpha~ (up to the affine shift)
        let root = |z: usize| -> Vec<i64> {
            if z == 0 {
                rd.highest_root().iter().map(|c| -c).collect()
            } else {
                let mut e = vec![0; rd.rank()];
                e[z - 1] = 1;
                e
            }
        };
        let coroot: Vec<Rat> = if x == 0 {
            rd.highest_coroot().iter().map(|&c| Rat::from_integer(-c)).collect()
        } else {
            let mut e = vec![Rat::from_integer(0); rd.rank()];
            e[x - 1] = Rat::from_integer(1);
            e
        };
        rd.pair_root(&coroot, &root(y)).to_integer()
    };
    match a(i, j) * a(j, i) {
        0 => Some(2),
        1 => Some(3),
        2 => Some(4),
        3 => Some(6),
        4 => None,
        other => panic!("unexpected Cartan product {other}"),
    }
}

/// Parity helper: `(-1)^n`.
pub fn sign_of_length(n: usize) -> i64 {
    if n.is_even() {
        1
    } else {
        -1
    }
}
