//! Exact combinatorics of split root data, affine Weyl groups and the
//! Bruhat-Tits building of `PGL_n(Q_p)`, together with harmonic cochains on
//! pointed chambers and their pairing with compactly supported Iwahori-level
//! functions.
//!
//! Everything here is exact: apartment geometry uses `Ratio<i64>`, building
//! matrices use arbitrary precision rationals with p-adic valuations, and the
//! linear algebra runs over `Q` or a prime field `F_l`.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

pub mod apartment;
pub mod building;
pub mod error;
pub mod field;
pub mod flagmodel;
pub mod harmonic;
pub mod linalg;
pub mod matrix;
pub mod padic;
pub mod rootdata;
pub mod weyl;

pub use error::{Error, Result};

/// Small exact rationals used for apartment coordinates.
pub type Rat = num_rational::Ratio<i64>;
