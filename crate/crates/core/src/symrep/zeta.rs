use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::asympt::{LaurentSeries, EXACT};
use crate::error::{Error, Result};

use super::family::dim_polynomial;
use super::partition::{dim, partitions};

/// `sum_{lambda ⊢ n} d_lambda^{-s}`.
pub fn zeta_exact(n: usize, s: u32) -> BigRational {
    partitions(n)
        .iter()
        .map(|l| BigRational::new(BigInt::from(1), BigInt::from(dim(l)).pow(s)))
        .fold(BigRational::zero(), |a, b| a + b)
}

/// The polynomial `P` in `u` with `zeta(n, s) / 2 = P(1/n) + O(n^{-M})`.
///
/// Sums `G_tail(n)^{-s}` over first-row families with fewer than
/// `ceil(M / s)` boxes outside the first row; column families contribute
/// the same amount, which is the factor 2.
pub fn zeta_poly(s: u32, m: usize) -> Result<LaurentSeries> {
    if s == 0 || m == 0 {
        return Err(Error::Domain("zeta_poly needs s >= 1 and M >= 1".into()));
    }
    let b = m.div_ceil(s as usize);
    let order = m as i64;
    let mut acc = LaurentSeries::zero(order);
    for k in 0..b {
        for tail in partitions(k) {
            let g = dim_polynomial(&tail).series();
            let gs = (0..s).fold(LaurentSeries::one(EXACT), |a, _| a.mul(&g));
            acc = acc.add(&gs.invert(order)?);
        }
    }
    Ok(acc)
}

/// `1 / P_{s,M}` truncated at `u^M`.
pub fn zeta_inv_poly(s: u32, m: usize) -> Result<LaurentSeries> {
    zeta_poly(s, m)?.invert(m as i64)
}

/// `sum d_lambda^{-s}` over `lambda ⊢ n` with at least `b` boxes outside the
/// first row and at least `b` boxes outside the first column.
pub fn truncation_tail(n: usize, b: usize, s: u32) -> BigRational {
    partitions(n)
        .iter()
        .filter(|l| l.b() >= b && l.conjugate().b() >= b)
        .map(|l| BigRational::new(BigInt::from(1), BigInt::from(dim(l)).pow(s)))
        .fold(BigRational::zero(), |a, b| a + b)
}
