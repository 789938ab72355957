//! Square matrices over `Q`, used for the building of `PGL_n`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::padic;
use crate::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    n: usize,
    data: Vec<BigRational>,
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for r in 0..self.n {
            if r > 0 {
                f.write_str("; ")?;
            }
            for c in 0..self.n {
                if c > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
        }
        f.write_str("]")
    }
}

impl RatMatrix {
    pub fn zero(n: usize) -> Self {
        Self { n, data: vec![BigRational::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.data[i * n + i] = BigRational::one();
        }
        m
    }

    pub fn from_i64(n: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), n * n);
        Self { n, data: entries.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect() }
    }

    pub fn from_entries(n: usize, data: Vec<BigRational>) -> Self {
        assert_eq!(data.len(), n * n);
        Self { n, data }
    }

    pub fn diagonal(entries: Vec<BigRational>) -> Self {
        let n = entries.len();
        let mut m = Self::zero(n);
        for (i, x) in entries.into_iter().enumerate() {
            m.data[i * n + i] = x;
        }
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, r: usize, c: usize) -> &BigRational {
        &self.data[r * self.n + c]
    }

    pub fn set(&mut self, r: usize, c: usize, x: BigRational) {
        self.data[r * self.n + c] = x;
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.data
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.n;
        let mut out = Self::zero(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..n {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        out.data[r * n + c] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        Self { n: self.n, data: self.data.iter().map(|x| x * s).collect() }
    }

    pub fn determinant(&self) -> BigRational {
        let n = self.n;
        let mut m = self.data.clone();
        let mut det = BigRational::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !m[r * n + col].is_zero()) else {
                return BigRational::zero();
            };
            if p != col {
                for c in 0..n {
                    m.swap(p * n + c, col * n + c);
                }
                det = -det;
            }
            let pivot = m[col * n + col].clone();
            det *= &pivot;
            for r in col + 1..n {
                if m[r * n + col].is_zero() {
                    continue;
                }
                let f = &m[r * n + col] / &pivot;
                for c in col..n {
                    let sub = &f * &m[col * n + c];
                    m[r * n + c] -= sub;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.n;
        let mut a = self.data.clone();
        let mut inv = Self::identity(n).data;
        for col in 0..n {
            let p = (col..n).find(|&r| !a[r * n + col].is_zero()).ok_or(Error::SingularMatrix)?;
            if p != col {
                for c in 0..n {
                    a.swap(p * n + c, col * n + c);
                    inv.swap(p * n + c, col * n + c);
                }
            }
            let pivot_inv = a[col * n + col].recip();
            for c in 0..n {
                a[col * n + c] *= &pivot_inv;
                inv[col * n + c] *= &pivot_inv;
            }
            for r in 0..n {
                if r == col || a[r * n + col].is_zero() {
                    continue;
                }
                let f = a[r * n + col].clone();
                for c in 0..n {
                    let sa = &f * &a[col * n + c];
                    a[r * n + c] -= sa;
                    let si = &f * &inv[col * n + c];
                    inv[r * n + c] -= si;
                }
            }
        }
        Ok(Self { n, data: inv })
    }

    /// Smallest p-adic valuation of an entry; `None` for the zero matrix.
    pub fn min_valuation(&self, p: u64) -> Option<i64> {
        self.data.iter().filter_map(|x| padic::valuation(x, p)).min()
    }

    /// Scales by a power of `p` so that all entries are p-integral and some
    /// entry is a unit.
    pub fn primitive(&self, p: u64) -> Self {
        match self.min_valuation(p) {
            Some(v) => self.scale(&padic::pow_rat(p, -v)),
            None => self.clone(),
        }
    }

    /// `-minval(g) - minval(g^{-1})`, invariant under scaling. Zero exactly
    /// for scalar multiples of elements of `GL_n(Z_p)`.
    pub fn spread(&self, p: u64) -> Result<i64> {
        let inv = self.inverse()?;
        Ok(-self.min_valuation(p).unwrap_or(0) - inv.min_valuation(p).unwrap_or(0))
    }

    /// Permutation matrix with `e_j -> e_{perm[j]}`.
    pub fn permutation(perm: &[usize]) -> Self {
        let n = perm.len();
        let mut m = Self::zero(n);
        for (j, &i) in perm.iter().enumerate() {
            m.data[i * n + j] = BigRational::one();
        }
        m
    }
}
