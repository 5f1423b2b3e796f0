use rsfd_core::FrequencyTable;

use crate::error::{BenchError, Result};

/// Squared error averaged over the values of each attribute, then over
/// attributes. Attributes absent from either table are left out of both
/// averages.
pub fn mse_avg(truth: &FrequencyTable, estimate: &FrequencyTable) -> Result<f64> {
    if truth.d() != estimate.d() {
        return Err(BenchError::ShapeMismatch(format!(
            "{} attributes in the truth, {} in the estimate",
            truth.d(),
            estimate.d()
        )));
    }
    let mut total = 0.0;
    let mut present = 0;
    for j in 0..truth.d() {
        let (Some(f), Some(g)) = (truth.attribute(j), estimate.attribute(j)) else {
            continue;
        };
        if f.len() != g.len() {
            return Err(BenchError::ShapeMismatch(format!(
                "attribute {j}: {} values in the truth, {} in the estimate",
                f.len(),
                g.len()
            )));
        }
        let sq: f64 = f.iter().zip(g).map(|(a, b)| (a - b) * (a - b)).sum();
        total += sq / f.len() as f64;
        present += 1;
    }
    if present == 0 {
        return Err(BenchError::NoAttributes);
    }
    Ok(total / present as f64)
}
