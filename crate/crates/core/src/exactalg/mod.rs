//! Exact coefficient arithmetic: the tower Q ⊂ Q(t) ⊂ Q(t)(x).
//!
//! `t` lives only inside [`Scalar`]; `x` lives only in [`Poly`] and
//! [`RatSeries`]. Nothing here uses floating point.

mod poly;
mod ratseries;
mod scalar;
mod tpoly;

pub use poly::Poly;
pub use ratseries::RatSeries;
pub use scalar::{rational_sign, RatFunc, Scalar};
pub use tpoly::TPoly;

/// Parses a list of scalar strings; convenience for tests and fixtures.
pub fn scalars(items: &[&str]) -> crate::error::Result<Vec<Scalar>> {
    items.iter().map(|s| s.parse()).collect()
}

/// Truncated Cauchy product of two coefficient lists.
pub fn cauchy_product(a: &[Scalar], b: &[Scalar], n: usize) -> Vec<Scalar> {
    (0..n)
        .map(|m| {
            (0..=m)
                .filter(|&i| i < a.len() && m - i < b.len())
                .map(|i| &a[i] * &b[m - i])
                .sum()
        })
        .collect()
}
