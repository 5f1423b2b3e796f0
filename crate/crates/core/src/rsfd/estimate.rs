//! Aggregator-side estimators. Each removes both the randomizer's bias and
//! the expected contribution of fake data, and is unbiased for the true
//! frequency of every value.

use super::{Rsfd, Variant};
use crate::error::Result;
use crate::frequency::FrequencyTable;
use crate::oracles::{check_distinct, grr_params, ue_params, CountVector};
use crate::report::ReportCounts;
use crate::schema::AttributeSchema;

/// RS+FD[GRR]: `(N_i d k - n (d - 1 + q k)) / (n k (p - q))` with GRR `(p, q)` at `ε'`.
pub fn grr_estimate(counts: &CountVector, d: usize, k: usize, epsilon_prime: f64) -> Result<Vec<f64>> {
    let g = grr_params(epsilon_prime, k)?;
    let (p, q) = (g.p(), g.q());
    check_distinct(p, q)?;
    let (n, d, k) = (counts.n, d as f64, k as f64);
    let offset = n * (d - 1.0 + q * k);
    let scale = n * k * (p - q);
    Ok(counts
        .counts
        .iter()
        .map(|&c| (c * d * k - offset) / scale)
        .collect())
}

/// RS+FD[OUE-z]: `d (N_i - n q) / (n (p - q))` with `p = 1/2`, `q = 1/(e^ε' + 1)`.
pub fn oue_z_estimate(counts: &CountVector, d: usize, epsilon_prime: f64) -> Result<Vec<f64>> {
    let u = ue_params(epsilon_prime)?;
    let (p, q) = (u.p(), u.q());
    check_distinct(p, q)?;
    let (n, d) = (counts.n, d as f64);
    Ok(counts
        .counts
        .iter()
        .map(|&c| d * (c - n * q) / (n * (p - q)))
        .collect())
}

/// RS+FD[OUE-r]: `(N_i d k - n [q k + (p - q)(d - 1) + q k (d - 1)]) / (n k (p - q))`.
pub fn oue_r_estimate(counts: &CountVector, d: usize, k: usize, epsilon_prime: f64) -> Result<Vec<f64>> {
    let u = ue_params(epsilon_prime)?;
    let (p, q) = (u.p(), u.q());
    check_distinct(p, q)?;
    let (n, d, k) = (counts.n, d as f64, k as f64);
    let offset = n * (q * k + (p - q) * (d - 1.0) + q * k * (d - 1.0));
    let scale = n * k * (p - q);
    Ok(counts
        .counts
        .iter()
        .map(|&c| (c * d * k - offset) / scale)
        .collect())
}

/// RS+FD[ADP] estimation over mixed reports: each attribute is dispatched to
/// the estimator matching the mechanism selected for it.
pub fn adp_estimate(counts: &ReportCounts, schema: &AttributeSchema, epsilon: f64) -> Result<FrequencyTable> {
    Rsfd::adaptive(schema, epsilon)?.estimate(counts)
}

/// Estimates for a single-variant RS+FD collection.
pub fn estimate_variant(
    counts: &ReportCounts,
    schema: &AttributeSchema,
    epsilon: f64,
    variant: Variant,
) -> Result<FrequencyTable> {
    Rsfd::new(schema, epsilon, variant)?.estimate(counts)
}
