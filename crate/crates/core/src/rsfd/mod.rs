//! Random sampling plus fake data (RS+FD).
//!
//! Each user samples one attribute uniformly, privatizes its true value at
//! the amplified budget `ε' = ln(d (e^ε - 1) + 1)` and emits fake data for
//! every other attribute. The report never reveals which attribute was
//! sampled. The aggregator removes the bias introduced by both the local
//! randomizer and the fake data.

mod client;
mod estimate;
mod variance;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::schema::PrivacyBudget;

pub use client::{adp_client, grr_client, oue_r_client, oue_z_client, AttributePlan, Rsfd};
pub use estimate::{adp_estimate, estimate_variant, grr_estimate, oue_r_estimate, oue_z_estimate};
pub use variance::{adp_select, variance, RsfdVarianceModel};

/// Local randomizer plugged into RS+FD.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    /// GRR on the sampled attribute, uniform fake values elsewhere.
    Grr,
    /// OUE on the sampled attribute, OUE-perturbed zero vectors elsewhere.
    OueZ,
    /// OUE on the sampled attribute, OUE-perturbed uniform one-hot vectors elsewhere.
    OueR,
}

impl Variant {
    pub fn label(self) -> &'static str {
        match self {
            Variant::Grr => "GRR",
            Variant::OueZ => "OUE-z",
            Variant::OueR => "OUE-r",
        }
    }
}

/// Target budget `ε` together with the amplified budget used on the sampled attribute.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AmplifiedBudget {
    pub epsilon: f64,
    pub d: usize,
    pub epsilon_prime: f64,
    /// Sampling rate `1/d`.
    pub beta: f64,
}

/// `ε' = ln(d (e^ε - 1) + 1)`, the budget a `1/d`-sampled mechanism may spend
/// while the composition stays ε-LDP.
pub fn amplify(epsilon: f64, d: usize) -> Result<AmplifiedBudget> {
    PrivacyBudget::new(epsilon)?;
    if d == 0 {
        return Err(Error::InvalidAttributeCount);
    }
    let epsilon_prime = if d == 1 {
        epsilon
    } else {
        (d as f64 * epsilon.exp_m1()).ln_1p()
    };
    Ok(AmplifiedBudget {
        epsilon,
        d,
        epsilon_prime,
        beta: 1.0 / d as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn amplification_examples() {
        let a = amplify(2f64.ln(), 5).unwrap();
        assert!((a.epsilon_prime - 6f64.ln()).abs() < 1e-12);
        assert!((a.epsilon_prime - 1.791759).abs() < 1e-6);
        let a = amplify(3f64.ln(), 10).unwrap();
        assert!((a.epsilon_prime - 21f64.ln()).abs() < 1e-12);
        assert!((a.epsilon_prime - 3.044522).abs() < 1e-6);
        assert_eq!(amplify(0.37, 1).unwrap().epsilon_prime, 0.37);
        assert!((amplify(1.0, 4).unwrap().beta - 0.25).abs() < 1e-15);
    }

    #[test]
    fn amplification_errors() {
        assert!(matches!(amplify(0.0, 3), Err(Error::InvalidBudget(_))));
        assert!(matches!(amplify(1.0, 0), Err(Error::InvalidAttributeCount)));
    }

    proptest::proptest! {
        #[test]
        fn amplification_invariants(eps in 0.01f64..8.0, d in 1usize..64) {
            let a = amplify(eps, d).unwrap();
            proptest::prop_assert!(a.epsilon_prime >= eps);
            if d > 1 {
                proptest::prop_assert!(a.epsilon_prime > eps);
            }
            let ratio = a.epsilon_prime.exp_m1() / eps.exp_m1();
            proptest::prop_assert!((ratio / d as f64 - 1.0).abs() < 1e-12);
        }
    }
}
