//! p-adic valuations of rationals and digit representatives modulo `p^c`.
//!
//! The building is modelled over `Q` with the p-adic valuation. Every
//! object in scope is locally constant, so nothing is lost by not completing.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// `v_p(n)`; `None` for zero.
pub fn valuation_int(n: &BigInt, p: u64) -> Option<i64> {
    if n.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut v = 0;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(&p);
        if !r.is_zero() {
            return Some(v);
        }
        m = q;
        v += 1;
    }
}

/// `v_p(x)`; `None` for zero.
pub fn valuation(x: &BigRational, p: u64) -> Option<i64> {
    let num = valuation_int(x.numer(), p)?;
    let den = valuation_int(x.denom(), p).expect("denominator is nonzero");
    Some(num - den)
}

pub fn pow(p: u64, e: u32) -> BigInt {
    num_traits::pow(BigInt::from(p), e as usize)
}

/// `p^e` as a rational, for any integer `e`.
pub fn pow_rat(p: u64, e: i64) -> BigRational {
    let m = BigRational::from_integer(pow(p, e.unsigned_abs() as u32));
    if e >= 0 {
        m
    } else {
        m.recip()
    }
}

/// Splits a nonzero `x` as `p^v * u` with `u` a p-adic unit.
pub fn split_unit(x: &BigRational, p: u64) -> (i64, BigRational) {
    let v = valuation(x, p).expect("nonzero");
    (v, x * pow_rat(p, -v))
}

/// The representative of `x + p^c Z_p` of the form `sum_{v <= k < c} d_k p^k`
/// with digits `0 <= d_k < p`; zero when `v_p(x) >= c`.
pub fn residue_mod_power(x: &BigRational, p: u64, c: i64) -> BigRational {
    let Some(v) = valuation(x, p) else {
        return BigRational::zero();
    };
    if v >= c {
        return BigRational::zero();
    }
    let (_, unit) = split_unit(x, p);
    let modulus = pow(p, (c - v) as u32);
    let num = unit.numer().mod_floor(&modulus);
    let den_inv = mod_inverse(unit.denom(), &modulus);
    let r = (num * den_inv).mod_floor(&modulus);
    BigRational::from_integer(r) * pow_rat(p, v)
}

/// Reduction of a p-integral rational modulo `p^k`, in `0..p^k`.
pub fn reduce_integral(x: &BigRational, p: u64, k: u32) -> u64 {
    let modulus = pow(p, k);
    let den_inv = mod_inverse(x.denom(), &modulus);
    let r = (x.numer().mod_floor(&modulus) * den_inv).mod_floor(&modulus);
    u64::try_from(r).expect("fits")
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    if m.is_one() {
        return BigInt::zero();
    }
    let g = a.mod_floor(m).extended_gcd(m);
    debug_assert!(g.gcd.abs().is_one(), "not invertible");
    g.x.mod_floor(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn valuations() {
        assert_eq!(valuation(&q(12, 5), 2), Some(2));
        assert_eq!(valuation(&q(3, 8), 2), Some(-3));
        assert_eq!(valuation(&q(0, 1), 2), None);
        assert_eq!(valuation(&(q(6, 1) * q(5, 9)), 3), Some(-1));
    }

    #[test]
    fn valuation_is_additive() {
        let xs = [q(12, 7), q(5, 18), q(-27, 4), q(1, 1)];
        for a in &xs {
            for b in &xs {
                assert_eq!(valuation(&(a * b), 3), Some(valuation(a, 3).unwrap() + valuation(b, 3).unwrap()));
            }
        }
    }

    #[test]
    fn residues() {
        // 7 = 1 + 2 + 4: mod 4 -> 3
        assert_eq!(residue_mod_power(&q(7, 1), 2, 2), q(3, 1));
        assert_eq!(residue_mod_power(&q(8, 1), 2, 2), q(0, 1));
        // 1/3 in Z_2 is ...0101011, mod 8 -> 3
        assert_eq!(residue_mod_power(&q(1, 3), 2, 3), q(3, 1));
        // 1/2 + 1/3 mod 2: 1/2 + 1
        assert_eq!(residue_mod_power(&(q(1, 2) + q(1, 3)), 2, 1), q(3, 2));
        // negative exponent target
        assert_eq!(residue_mod_power(&q(3, 4), 2, -1), q(1, 4));
    }

    #[test]
    fn residue_differs_by_multiple() {
        for (n, d) in [(5, 3), (-7, 9), (11, 2), (1, 27)] {
            let x = q(n, d);
            for c in -2..4 {
                let r = residue_mod_power(&x, 3, c);
                let diff = &x - &r;
                assert!(diff.is_zero() || valuation(&diff, 3).unwrap() >= c);
            }
        }
    }
}
