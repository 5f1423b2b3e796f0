use rand::distributions::{Bernoulli, Distribution};
use rand::Rng;

use crate::error::{Error, Result};
use crate::schema::PrivacyBudget;

/// Generalized randomized response over `k` values.
///
/// Keeps the true value with `p = e^ε / (e^ε + k - 1)`, otherwise reports
/// one of the other `k - 1` values uniformly, each with `q = (1 - p) / (k - 1)`.
#[derive(Debug, Clone)]
pub struct GrrParams {
    k: usize,
    epsilon: f64,
    p: f64,
    q: f64,
    keep: Bernoulli,
}

impl GrrParams {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// Perturbs a value already known to be in range.
    #[inline]
    pub fn sample<R: Rng + ?Sized>(&self, value: u32, rng: &mut R) -> u32 {
        if self.keep.sample(rng) {
            value
        } else {
            let other = rng.gen_range(0..self.k as u32 - 1);
            if other >= value {
                other + 1
            } else {
                other
            }
        }
    }
}

pub fn grr_params(epsilon: f64, k: usize) -> Result<GrrParams> {
    let budget = PrivacyBudget::new(epsilon)?;
    if k < 2 {
        return Err(Error::CardinalityTooSmall {
            name: String::from("<grr>"),
            k,
        });
    }
    let e = budget.exp();
    let p = e / (e + k as f64 - 1.0);
    let q = 1.0 / (e + k as f64 - 1.0);
    Ok(GrrParams {
        k,
        epsilon,
        p,
        q,
        keep: Bernoulli::new(p).expect("p in [0, 1]"),
    })
}

/// Reports `value` with probability `p`, each other value with probability `q`.
pub fn grr_perturb<R: Rng + ?Sized>(value: u32, params: &GrrParams, rng: &mut R) -> Result<u32> {
    if value as usize >= params.k {
        return Err(Error::ValueOutOfRange {
            attribute: 0,
            value,
            k: params.k,
        });
    }
    Ok(params.sample(value, rng))
}
