use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::schema::PrivacyBudget;

/// Tallies `N_i` for one attribute together with the number of contributing reports `n`.
///
/// Counts are stored as reals so that expected counts can be fed through
/// the same estimators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountVector {
    pub counts: Vec<f64>,
    pub n: f64,
}

impl CountVector {
    pub fn new(counts: Vec<f64>, n: f64) -> Self {
        Self { counts, n }
    }

    pub fn from_tallies(counts: &[u64], n: u64) -> Self {
        Self {
            counts: counts.iter().map(|&c| c as f64).collect(),
            n: n as f64,
        }
    }

    pub fn k(&self) -> usize {
        self.counts.len()
    }
}

pub(crate) fn check_distinct(p: f64, q: f64) -> Result<()> {
    if (p - q).abs() <= f64::EPSILON * p.abs().max(q.abs()) {
        Err(Error::DegenerateParams(p))
    } else {
        Ok(())
    }
}

/// Unbiased estimate `(N_i - n q) / (n (p - q))`. Raw: no clipping or normalization.
pub fn estimate_pure(counts: &CountVector, p: f64, q: f64) -> Result<Vec<f64>> {
    check_distinct(p, q)?;
    let n = counts.n;
    Ok(counts
        .counts
        .iter()
        .map(|&c| (c - n * q) / (n * (p - q)))
        .collect())
}

/// Approximate GRR variance `(e^ε + k - 2) / (n (e^ε - 1)^2)`.
pub fn var_grr(epsilon: f64, k: usize, n: u64) -> Result<f64> {
    let e = PrivacyBudget::new(epsilon)?.exp();
    Ok((e + k as f64 - 2.0) / (n as f64 * (e - 1.0).powi(2)))
}

/// Approximate OUE variance `4 e^ε / (n (e^ε - 1)^2)`.
pub fn var_oue(epsilon: f64, n: u64) -> Result<f64> {
    let e = PrivacyBudget::new(epsilon)?.exp();
    Ok(4.0 * e / (n as f64 * (e - 1.0).powi(2)))
}

/// Single-attribute frequency oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mechanism {
    Grr,
    Oue,
}

/// Adaptive choice: GRR iff `k < 3 e^ε + 2`. A `k` equal to the threshold
/// (up to rounding in `e^ε`) selects OUE.
pub fn adp_choose(epsilon: f64, k: usize) -> Mechanism {
    let threshold = 3.0 * epsilon.exp() + 2.0;
    let k = k as f64;
    if k < threshold && (threshold - k) > 1e-9 * threshold {
        Mechanism::Grr
    } else {
        Mechanism::Oue
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &[f64], b: &[f64]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-12)
    }

    #[test]
    fn estimate_examples() {
        let est = estimate_pure(&CountVector::new(vec![75.0, 25.0], 100.0), 0.75, 0.25).unwrap();
        assert!(close(&est, &[1.0, 0.0]));
        let est = estimate_pure(&CountVector::new(vec![50.0, 50.0], 100.0), 0.75, 0.25).unwrap();
        assert!(close(&est, &[0.5, 0.5]));
        let est =
            estimate_pure(&CountVector::new(vec![40.0, 5.0, 5.0], 50.0), 0.6, 0.2).unwrap();
        assert!(close(&est, &[1.5, -0.25, -0.25]));
    }

    #[test]
    fn degenerate_params() {
        assert!(matches!(
            estimate_pure(&CountVector::new(vec![1.0], 1.0), 0.3, 0.3),
            Err(Error::DegenerateParams(_))
        ));
    }

    #[test]
    fn approximate_variances() {
        let ln = f64::ln;
        assert!((var_grr(ln(3.0), 2, 100).unwrap() - 0.0075).abs() < 1e-12);
        assert!((var_grr(ln(3.0), 11, 100).unwrap() - 0.03).abs() < 1e-12);
        assert!((var_grr(ln(2.0), 2, 1000).unwrap() - 0.002).abs() < 1e-12);
        assert!((var_oue(ln(3.0), 100).unwrap() - 0.03).abs() < 1e-12);
        assert!((var_oue(ln(2.0), 100).unwrap() - 0.08).abs() < 1e-12);
        assert!((var_oue(ln(7.0), 100).unwrap() - 28.0 / 3600.0).abs() < 1e-12);
        assert!(var_grr(0.0, 2, 10).is_err());
        assert!(var_oue(f64::NAN, 10).is_err());
    }

    #[test]
    fn adaptive_threshold() {
        let ln = f64::ln;
        assert_eq!(adp_choose(ln(3.0), 10), Mechanism::Grr);
        assert_eq!(adp_choose(ln(3.0), 11), Mechanism::Oue);
        assert_eq!(adp_choose(ln(2.0), 7), Mechanism::Grr);
        assert_eq!(adp_choose(ln(2.0), 8), Mechanism::Oue);
    }

    #[test]
    fn adaptive_agrees_with_variance_comparison() {
        for &eps in &[0.1, 0.4, 1.0, 1.7, 2.9] {
            for k in 2..60 {
                let g = var_grr(eps, k, 1).unwrap();
                let o = var_oue(eps, 1).unwrap();
                if (g - o).abs() > 1e-9 * o {
                    let want = if g < o { Mechanism::Grr } else { Mechanism::Oue };
                    assert_eq!(adp_choose(eps, k), want, "eps={eps} k={k}");
                }
            }
        }
    }
}
