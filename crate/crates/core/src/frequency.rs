use serde::{Deserialize, Serialize};

/// Per-attribute frequency vectors, either ground truth or estimates.
///
/// An attribute may be absent when no report carried it (an empty Smp
/// group); absence is distinct from an all-zero estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencyTable {
    attributes: Vec<Option<Vec<f64>>>,
}

/// Optional post-processing applied to raw estimates. Off by default:
/// utility is measured on the raw unbiased estimates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum PostProcess {
    #[default]
    None,
    /// Clip negatives to zero and rescale each attribute to sum to one.
    ClipAndNormalize,
}

impl FrequencyTable {
    pub fn new(attributes: Vec<Option<Vec<f64>>>) -> Self {
        Self { attributes }
    }

    pub fn complete(attributes: Vec<Vec<f64>>) -> Self {
        Self {
            attributes: attributes.into_iter().map(Some).collect(),
        }
    }

    pub fn d(&self) -> usize {
        self.attributes.len()
    }

    pub fn attribute(&self, j: usize) -> Option<&[f64]> {
        self.attributes[j].as_deref()
    }

    pub fn attributes(&self) -> &[Option<Vec<f64>>] {
        &self.attributes
    }

    pub fn absent_count(&self) -> usize {
        self.attributes.iter().filter(|a| a.is_none()).count()
    }

    pub fn post_process(mut self, how: PostProcess) -> Self {
        if how == PostProcess::ClipAndNormalize {
            for freqs in self.attributes.iter_mut().flatten() {
                freqs.iter_mut().for_each(|f| *f = f.max(0.0));
                let total: f64 = freqs.iter().sum();
                if total > 0.0 {
                    freqs.iter_mut().for_each(|f| *f /= total);
                } else {
                    let uniform = 1.0 / freqs.len() as f64;
                    freqs.iter_mut().for_each(|f| *f = uniform);
                }
            }
        }
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clip_and_normalize() {
        let t = FrequencyTable::new(vec![Some(vec![1.2, -0.2]), None, Some(vec![-1.0, -1.0])]);
        let t = t.post_process(PostProcess::ClipAndNormalize);
        assert_eq!(t.attribute(0), Some(&[1.0, 0.0][..]));
        assert_eq!(t.attribute(1), None);
        assert_eq!(t.attribute(2), Some(&[0.5, 0.5][..]));
        assert_eq!(t.absent_count(), 1);
    }

    #[test]
    fn default_leaves_estimates_raw() {
        let t = FrequencyTable::complete(vec![vec![1.5, -0.5]]);
        assert_eq!(t.clone().post_process(PostProcess::default()), t);
    }
}
