//! Exact topological recursion on genus-zero spectral curves, including
//! irregular (hard-edge) branch points, over the cyclotomic field Q(zeta_8).
//!
//! The crate computes correlators of the Chekhov-Eynard-Orantin recursion in
//! an exact basis of auxiliary differentials, assembles partition functions,
//! and verifies their factorisation into Kontsevich-Witten and
//! Brezin-Gross-Witten KdV tau functions through three independent routes:
//! direct recursion, a weighted sum over decorated stable graphs, and the
//! quantised operator pipeline R-hat T-hat Delta-hat.

pub mod error;
pub mod scalar;
pub mod ring;
pub mod param;
pub mod series;
pub mod biseries;
pub mod ratfun;
pub mod times;
pub mod curve;
pub mod recursion;
pub mod tables;
pub mod partition;
pub mod kdv;
pub mod deform;
pub mod graphs;
pub mod givental;
pub mod legendre;
pub mod fixtures;
pub mod report;
pub(crate) mod par;

pub use error::Error;
pub use scalar::Scalar;

/// Odd double factorial (2k-1)!! with the convention (-1)!! = 1.
pub fn double_factorial_odd(k: i64) -> num_bigint::BigInt {
    use num_bigint::BigInt;
    let mut acc = BigInt::from(1);
    let mut m = 2 * k - 1;
    while m >= 2 {
        acc *= m;
        m -= 2;
    }
    acc
}
