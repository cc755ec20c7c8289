use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use twofloat::TwoFloat;

use super::Partition;
use crate::error::Result;

/// Exact and log-domain dimensions of the Specht module `W_mu` and the Weyl
/// module `V_mu^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct DimensionRecord {
    pub partition: Partition,
    pub d: u32,
    pub specht_dim: BigUint,
    pub weyl_dim: BigUint,
    pub log_specht: f64,
    pub log_weyl: f64,
}

impl DimensionRecord {
    pub fn new(mu: &Partition, d: u32) -> Result<Self> {
        Ok(Self {
            partition: mu.clone(),
            d,
            specht_dim: specht_dim(mu),
            weyl_dim: weyl_dim(mu, d)?,
            log_specht: log_specht_dim(mu),
            log_weyl: log_weyl_dim(mu, d)?,
        })
    }
}

fn product(factors: impl Iterator<Item = u64>) -> BigUint {
    factors.fold(BigUint::one(), |acc, f| acc * f)
}

/// Hook length formula, `d_mu = n! / prod(hooks)`.
pub fn specht_dim(mu: &Partition) -> BigUint {
    let n = mu.size() as u64;
    let numerator = product(1..=n);
    numerator / product(mu.hooks().map(u64::from))
}

/// Hook content formula, `m_{d,mu} = prod (d + j - i) / hook(i, j)`.
pub fn weyl_dim(mu: &Partition, d: u32) -> Result<BigUint> {
    mu.check_rows(d)?;
    let numerator = product(mu.cells().map(|(i, j)| (d as u64 + j as u64) - i as u64));
    Ok(numerator / product(mu.hooks().map(u64::from)))
}

// Compensated sum of logarithms of small integers.
fn log_sum(factors: impl Iterator<Item = u64>) -> TwoFloat {
    factors.fold(TwoFloat::from(0.0), |acc, f| acc + (f as f64).ln())
}

pub(crate) fn log_specht_dim_tf(mu: &Partition) -> TwoFloat {
    log_sum(1..=mu.size() as u64) - log_sum(mu.hooks().map(u64::from))
}

pub(crate) fn log_weyl_dim_tf(mu: &Partition, d: u32) -> TwoFloat {
    log_sum(mu.cells().map(|(i, j)| (d as u64 + j as u64) - i as u64)) - log_sum(mu.hooks().map(u64::from))
}

/// `ln d_mu`, accumulated in double-double from log factors.
pub fn log_specht_dim(mu: &Partition) -> f64 {
    log_specht_dim_tf(mu).into()
}

/// `ln m_{d,mu}`.
pub fn log_weyl_dim(mu: &Partition, d: u32) -> Result<f64> {
    mu.check_rows(d)?;
    Ok(log_weyl_dim_tf(mu, d).into())
}

/// `num / den` rounded into a double-double.
pub(crate) fn ratio_to_twofloat(num: &BigUint, den: &BigUint) -> TwoFloat {
    // Scale so the integer quotient carries about 120 significant bits.
    let shift = den.bits() as i64 - num.bits() as i64 + 121;
    let q = if shift >= 0 {
        (num << shift as u64) / den
    } else {
        num / (den << (-shift) as u64)
    };
    let q = q.to_u128().expect("quotient fits in 128 bits");
    let hi = q as f64;
    let rest = (q as i128 - hi as u128 as i128) as f64;
    let scale = |x: f64| scale_pow2(x, -shift as i32);
    TwoFloat::new_add(scale(hi), scale(rest))
}

fn scale_pow2(mut x: f64, mut exp: i32) -> f64 {
    // 2^exp alone may overflow or underflow.
    while exp > 1000 {
        x *= 2f64.powi(1000);
        exp -= 1000;
    }
    while exp < -1000 {
        x *= 2f64.powi(-1000);
        exp += 1000;
    }
    x * 2f64.powi(exp)
}
