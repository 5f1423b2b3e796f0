use serde::{Deserialize, Serialize};

use super::Variant;
use crate::error::{Error, Result};
use crate::oracles::{grr_params, ue_params};

/// Exact variance of one RS+FD estimate.
///
/// `delta` is the probability that a single report counts toward `N_i`;
/// counts are binomial so `Var = d² δ (1 - δ) / (n (p - q)²)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RsfdVarianceModel {
    pub variant: Variant,
    pub delta: f64,
    pub variance: f64,
}

fn delta(variant: Variant, f: f64, d: f64, k: f64, p: f64, q: f64) -> f64 {
    match variant {
        Variant::Grr => (q + f * (p - q) + (d - 1.0) / k) / d,
        Variant::OueZ => (d * q + f * (p - q)) / d,
        Variant::OueR => (q + f * (p - q) + (d - 1.0) / k * (p + (k - 1.0) * q)) / d,
    }
}

fn pq(variant: Variant, k: usize, epsilon_prime: f64) -> Result<(f64, f64)> {
    Ok(match variant {
        Variant::Grr => {
            let g = grr_params(epsilon_prime, k)?;
            (g.p(), g.q())
        }
        Variant::OueZ | Variant::OueR => {
            let u = ue_params(epsilon_prime)?;
            (u.p(), u.q())
        }
    })
}

/// Variance of the estimate for a value of true frequency `f` from `n` reports.
pub fn variance(
    variant: Variant,
    f: f64,
    n: u64,
    d: usize,
    k: usize,
    epsilon_prime: f64,
) -> Result<RsfdVarianceModel> {
    if !(0.0..=1.0).contains(&f) {
        return Err(Error::InvalidFrequency(f));
    }
    if d == 0 {
        return Err(Error::InvalidAttributeCount);
    }
    let (p, q) = pq(variant, k, epsilon_prime)?;
    let df = d as f64;
    let delta = delta(variant, f, df, k as f64, p, q);
    let variance = df * df * delta * (1.0 - delta) / (n as f64 * (p - q).powi(2));
    Ok(RsfdVarianceModel {
        variant,
        delta,
        variance,
    })
}

/// Picks RS+FD[GRR] when its variance at `f = 0` does not exceed that of
/// RS+FD[OUE-z]; `n` cancels. Differences under 1e-12 count as ties and go to GRR.
pub fn adp_select(epsilon_prime: f64, d: usize, k: usize) -> Variant {
    let at_zero = |v| variance(v, 0.0, 1, d, k, epsilon_prime).map(|m| m.variance);
    match (at_zero(Variant::Grr), at_zero(Variant::OueZ)) {
        (Ok(grr), Ok(oue)) if grr - oue <= 1e-12 => Variant::Grr,
        (Ok(_), Ok(_)) => Variant::OueZ,
        // Invalid parameters are rejected when the plan is built.
        _ => Variant::OueZ,
    }
}
