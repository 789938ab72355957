//! Root data of the irreducible reduced root systems, with Bourbaki numbering
//! of the simple roots.
//!
//! Roots are integer vectors in simple-root coordinates, coroots and
//! coweights are vectors in the basis of simple coroots. The Cartan matrix
//! follows `a_ij = <alpha_i^vee, alpha_j>`.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Rat, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    pub fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        }
    }
}

impl core::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(Family::A),
            "B" => Ok(Family::B),
            "C" => Ok(Family::C),
            "D" => Ok(Family::D),
            "E" => Ok(Family::E),
            "F" => Ok(Family::F),
            "G" => Ok(Family::G),
            _ => Err(Error::UnknownFamily(s.to_string())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CartanType {
    family: Family,
    rank: usize,
}

impl CartanType {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::B | Family::C => rank >= 2,
            Family::D => rank >= 4,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if ok {
            Ok(Self { family, rank })
        } else {
            Err(Error::InvalidRank { family: family.letter(), rank })
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Every valid type of rank at most `max_rank`, in family order.
    pub fn all_up_to(max_rank: usize) -> Vec<CartanType> {
        let families = [Family::A, Family::B, Family::C, Family::D, Family::E, Family::F, Family::G];
        families
            .iter()
            .flat_map(|&f| (1..=max_rank).filter_map(move |r| CartanType::new(f, r).ok()))
            .collect()
    }

    /// Bourbaki Cartan matrix, row-major.
    pub fn cartan_matrix(&self) -> Vec<Vec<i64>> {
        let l = self.rank;
        let mut a = vec![vec![0i64; l]; l];
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = 2;
        }
        let mut bond = |i: usize, j: usize| {
            // 1-based labels
            a[i - 1][j - 1] = -1;
            a[j - 1][i - 1] = -1;
        };
        match self.family {
            Family::A | Family::B | Family::C => {
                for i in 1..l {
                    bond(i, i + 1);
                }
            }
            Family::D => {
                for i in 1..l - 1 {
                    bond(i, i + 1);
                }
                bond(l - 2, l);
            }
            Family::E => {
                bond(1, 3);
                bond(2, 4);
                for i in 3..l {
                    bond(i, i + 1);
                }
            }
            Family::F => {
                bond(1, 2);
                bond(2, 3);
                bond(3, 4);
            }
            Family::G => bond(1, 2),
        }
        // a_ij = -2 or -3 when alpha_i is short and alpha_j long
        match self.family {
            Family::B => a[l - 1][l - 2] = -2,
            Family::C => a[l - 2][l - 1] = -2,
            Family::F => a[2][1] = -2,
            Family::G => a[0][1] = -3,
            _ => {}
        }
        a
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.letter(), self.rank)
    }
}

/// Immutable root datum of an adjoint split group of the given type.
#[derive(Clone, Debug)]
pub struct RootDatum {
    cartan_type: CartanType,
    cartan: Vec<Vec<i64>>,
    positive_roots: Vec<Vec<i64>>,
    coroots: Vec<Vec<i64>>,
    /// `A k` for each positive root `k`: pairing a coweight in coroot
    /// coordinates with the root is a dot product with this vector.
    functionals: Vec<Vec<i64>>,
    fundamental_coweights: Vec<Vec<Rat>>,
    highest: usize,
    barycenter: Vec<Rat>,
}

impl RootDatum {
    pub fn new(cartan_type: CartanType) -> Self {
        let cartan = cartan_type.cartan_matrix();
        let l = cartan_type.rank();
        let (positive_roots, coroots) = closure(&cartan);
        let functionals = positive_roots
            .iter()
            .map(|k| (0..l).map(|j| (0..l).map(|i| cartan[j][i] * k[i]).sum()).collect())
            .collect();
        let fundamental_coweights = inverse_rows(&cartan);
        let highest = positive_roots.len() - 1;
        let mut rd = Self {
            cartan_type,
            cartan,
            positive_roots,
            coroots,
            functionals,
            fundamental_coweights,
            highest,
            barycenter: Vec::new(),
        };
        let mut bary = vec![Rat::from_integer(0); l];
        for i in 1..=l {
            let n = Rat::from_integer(rd.marks()[i - 1]);
            for (b, w) in bary.iter_mut().zip(&rd.fundamental_coweights[i - 1]) {
                *b += *w / n;
            }
        }
        let denom = Rat::from_integer(l as i64 + 1);
        rd.barycenter = bary.into_iter().map(|b| b / denom).collect();
        rd
    }

    pub fn build(family: Family, rank: usize) -> Result<Self> {
        Ok(Self::new(CartanType::new(family, rank)?))
    }

    pub fn cartan_type(&self) -> CartanType {
        self.cartan_type
    }

    pub fn rank(&self) -> usize {
        self.cartan_type.rank()
    }

    pub fn cartan_matrix(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    /// Positive roots ordered by height, then lexicographically.
    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.positive_roots
    }

    /// Coroot of `positive_roots()[k]`, in simple-coroot coordinates.
    pub fn coroots(&self) -> &[Vec<i64>] {
        &self.coroots
    }

    pub fn fundamental_coweights(&self) -> &[Vec<Rat>] {
        &self.fundamental_coweights
    }

    /// `varpi_i` for a label `i` in `1..=l`.
    pub fn fundamental_coweight(&self, i: usize) -> &[Rat] {
        &self.fundamental_coweights[i - 1]
    }

    pub fn highest_root(&self) -> &[i64] {
        &self.positive_roots[self.highest]
    }

    pub fn highest_coroot(&self) -> &[i64] {
        &self.coroots[self.highest]
    }

    /// Marks `n_1..n_l`: coefficients of the highest root.
    pub fn marks(&self) -> &[i64] {
        self.highest_root()
    }

    /// Labels `i` in `1..=l` with `n_i = 1`.
    pub fn special_set(&self) -> Vec<usize> {
        (1..=self.rank()).filter(|&i| self.marks()[i - 1] == 1).collect()
    }

    /// `{0} ∪ J`.
    pub fn special_vertex_labels(&self) -> Vec<usize> {
        let mut out = vec![0];
        out.extend(self.special_set());
        out
    }

    pub fn is_special_label(&self, label: usize) -> bool {
        label == 0 || (label <= self.rank() && self.marks()[label - 1] == 1)
    }

    /// The label `i_0` with `varpi_{i_0}` equal to the highest coroot, or
    /// `None` in type A.
    pub fn cominuscule_index(&self) -> Result<Option<usize>> {
        if self.cartan_type.family() == Family::A {
            return Ok(None);
        }
        let target: Vec<Rat> = self.highest_coroot().iter().map(|&c| Rat::from_integer(c)).collect();
        (1..=self.rank())
            .find(|&i| self.fundamental_coweight(i) == target.as_slice())
            .map(Some)
            .ok_or_else(|| Error::Internal("highest coroot is not a fundamental coweight".to_string()))
    }

    /// Index of `root` (positive or negative) in `positive_roots`, with the
    /// sign of the root.
    pub fn find_root(&self, root: &[i64]) -> Option<(usize, i64)> {
        if let Some(k) = self.positive_roots.iter().position(|r| r.as_slice() == root) {
            return Some((k, 1));
        }
        let neg: Vec<i64> = root.iter().map(|x| -x).collect();
        self.positive_roots.iter().position(|r| *r == neg).map(|k| (k, -1))
    }

    /// `<x, alpha_k>` for a coweight `x` in coroot coordinates and the k-th
    /// positive root.
    pub fn pair(&self, x: &[Rat], k: usize) -> Rat {
        x.iter()
            .zip(&self.functionals[k])
            .fold(Rat::from_integer(0), |acc, (a, &b)| acc + *a * b)
    }

    /// `<x, alpha>` for an arbitrary integer root vector.
    pub fn pair_root(&self, x: &[Rat], root: &[i64]) -> Rat {
        let l = self.rank();
        let mut acc = Rat::from_integer(0);
        for j in 0..l {
            let f: i64 = (0..l).map(|i| self.cartan[j][i] * root[i]).sum();
            acc += x[j] * f;
        }
        acc
    }

    /// `<x, alpha_i>` for a simple root label `i` in `1..=l`.
    pub fn pair_simple(&self, x: &[Rat], i: usize) -> Rat {
        let l = self.rank();
        (0..l).fold(Rat::from_integer(0), |acc, j| acc + x[j] * self.cartan[j][i - 1])
    }

    /// Barycenter of the fundamental alcove.
    pub fn alcove_barycenter(&self) -> &[Rat] {
        &self.barycenter
    }

    /// Index of the highest root in `positive_roots`.
    pub fn highest_index(&self) -> usize {
        self.highest
    }
}

/// Positive roots and their coroots, obtained by closing the simple roots
/// under simple reflections.
fn closure(cartan: &[Vec<i64>]) -> (Vec<Vec<i64>>, Vec<Vec<i64>>) {
    let l = cartan.len();
    let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut pairs: Vec<(Vec<i64>, Vec<i64>)> = Vec::new();
    let mut queue = VecDeque::new();
    for i in 0..l {
        let mut e = vec![0i64; l];
        e[i] = 1;
        seen.insert(e.clone());
        queue.push_back((e.clone(), e));
    }
    while let Some((root, coroot)) = queue.pop_front() {
        for i in 0..l {
            let c: i64 = (0..l).map(|j| cartan[i][j] * root[j]).sum();
            if c == 0 {
                continue;
            }
            let mut image = root.clone();
            image[i] -= c;
            if image.iter().any(|&x| x < 0) || image.iter().all(|&x| x == 0) {
                continue;
            }
            if seen.insert(image.clone()) {
                let d: i64 = (0..l).map(|j| coroot[j] * cartan[j][i]).sum();
                let mut co = coroot.clone();
                co[i] -= d;
                queue.push_back((image, co));
            }
        }
        pairs.push((root, coroot));
    }
    pairs.sort_by(|a, b| {
        let ha: i64 = a.0.iter().sum();
        let hb: i64 = b.0.iter().sum();
        ha.cmp(&hb).then_with(|| a.0.cmp(&b.0))
    });
    pairs.into_iter().unzip()
}

/// Rows of the inverse of an integer matrix.
fn inverse_rows(a: &[Vec<i64>]) -> Vec<Vec<Rat>> {
    let l = a.len();
    let mut m: Vec<Vec<Rat>> = (0..l)
        .map(|i| {
            let mut row: Vec<Rat> = a[i].iter().map(|&x| Rat::from_integer(x)).collect();
            row.extend((0..l).map(|j| Rat::from_integer((i == j) as i64)));
            row
        })
        .collect();
    for col in 0..l {
        let piv = (col..l).find(|&r| m[r][col] != Rat::from_integer(0)).expect("Cartan matrix is invertible");
        m.swap(col, piv);
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
    m.into_iter().map(|row| row[l..].to_vec()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rd(f: Family, l: usize) -> RootDatum {
        RootDatum::build(f, l).unwrap()
    }

    #[test]
    fn rejects_bad_ranks() {
        assert!(CartanType::new(Family::D, 3).is_err());
        assert!(CartanType::new(Family::E, 5).is_err());
        assert!(CartanType::new(Family::B, 1).is_err());
        assert!(CartanType::new(Family::A, 0).is_err());
        assert!(CartanType::new(Family::G, 3).is_err());
    }

    #[test]
    fn a1() {
        let r = rd(Family::A, 1);
        assert_eq!(r.positive_roots(), &[vec![1]]);
        assert_eq!(r.marks(), &[1]);
        assert_eq!(r.special_set(), vec![1]);
    }

    #[test]
    fn g2_has_empty_special_set() {
        let r = rd(Family::G, 2);
        assert_eq!(r.positive_roots().len(), 6);
        assert_eq!(r.marks(), &[3, 2]);
        assert!(r.special_set().is_empty());
    }

    #[test]
    fn c3_marks() {
        let r = rd(Family::C, 3);
        assert_eq!(r.marks(), &[2, 2, 1]);
        assert_eq!(r.special_set(), vec![3]);
    }

    #[test]
    fn special_vertex_labels_examples() {
        assert_eq!(rd(Family::A, 3).special_vertex_labels(), vec![0, 1, 2, 3]);
        assert_eq!(rd(Family::E, 8).special_vertex_labels(), vec![0]);
        assert_eq!(rd(Family::B, 2).special_vertex_labels(), vec![0, 1]);
    }

    #[test]
    fn cominuscule_examples() {
        assert_eq!(rd(Family::A, 4).cominuscule_index().unwrap(), None);
        // G2: highest root 3a1+2a2 is long, its coroot is a1v+2a2v... = varpi_2
        assert_eq!(rd(Family::G, 2).cominuscule_index().unwrap(), Some(2));
        assert_eq!(rd(Family::B, 2).cominuscule_index().unwrap(), Some(2));
        assert_eq!(rd(Family::C, 4).cominuscule_index().unwrap(), Some(1));
    }

    #[test]
    fn coweights_are_dual_to_simple_roots() {
        for t in CartanType::all_up_to(8) {
            let r = RootDatum::new(t);
            for i in 1..=r.rank() {
                for j in 1..=r.rank() {
                    let v = r.pair_simple(r.fundamental_coweight(i), j);
                    assert_eq!(v, Rat::from_integer((i == j) as i64), "{t} i={i} j={j}");
                }
            }
        }
    }

    #[test]
    fn barycenter_is_interior() {
        for t in CartanType::all_up_to(8) {
            let r = RootDatum::new(t);
            let x = r.alcove_barycenter();
            for i in 1..=r.rank() {
                assert!(r.pair_simple(x, i) > Rat::from_integer(0));
            }
            assert!(r.pair(x, r.highest_index()) < Rat::from_integer(1));
        }
    }
}
