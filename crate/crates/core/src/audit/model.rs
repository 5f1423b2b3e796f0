use crate::report::{AttributeReport, BitVector, ReportTuple};
use crate::schema::RecordTuple;

/// Closed-form per-attribute output distribution.
#[derive(Debug, Clone, PartialEq)]
pub enum Kernel {
    /// GRR: the input with `p`, any other value with `q`.
    RandomizedResponse { k: usize, p: f64, q: f64 },
    /// Uniform value, independent of the input.
    UniformValue { k: usize },
    /// One-hot encoding of the input with independent bit flips.
    UnaryEncoding { k: usize, p: f64, q: f64 },
    /// Perturbed zero vector: each bit set with `q`, independent of the input.
    UnaryZero { k: usize, q: f64 },
    /// Perturbed one-hot encoding of a uniform value, independent of the input.
    UnaryUniform { k: usize, p: f64, q: f64 },
}

impl Kernel {
    pub fn k(&self) -> usize {
        match *self {
            Kernel::RandomizedResponse { k, .. }
            | Kernel::UniformValue { k }
            | Kernel::UnaryEncoding { k, .. }
            | Kernel::UnaryZero { k, .. }
            | Kernel::UnaryUniform { k, .. } => k,
        }
    }

    pub fn emits_bits(&self) -> bool {
        !matches!(
            self,
            Kernel::RandomizedResponse { .. } | Kernel::UniformValue { .. }
        )
    }

    /// Number of distinct outputs: `k` values or `2^k` bit vectors.
    pub fn output_count(&self) -> u128 {
        if self.emits_bits() {
            1u128.checked_shl(self.k() as u32).unwrap_or(u128::MAX)
        } else {
            self.k() as u128
        }
    }

    pub fn outputs(&self) -> Vec<AttributeReport> {
        let k = self.k();
        if self.emits_bits() {
            (0..1u64 << k)
                .map(|i| AttributeReport::Bits(BitVector::from_index(i, k)))
                .collect()
        } else {
            (0..k as u32).map(AttributeReport::Value).collect()
        }
    }

    /// `Pr[output | input]`.
    pub fn prob(&self, input: u32, output: &AttributeReport) -> f64 {
        match (self, output) {
            (Kernel::RandomizedResponse { p, q, .. }, AttributeReport::Value(y)) => {
                if *y == input {
                    *p
                } else {
                    *q
                }
            }
            (Kernel::UniformValue { k }, AttributeReport::Value(_)) => 1.0 / *k as f64,
            (Kernel::UnaryEncoding { p, q, .. }, AttributeReport::Bits(b)) => {
                unary_prob(b, Some(input), *p, *q)
            }
            (Kernel::UnaryZero { q, .. }, AttributeReport::Bits(b)) => unary_prob(b, None, 0.0, *q),
            (Kernel::UnaryUniform { k, p, q }, AttributeReport::Bits(b)) => {
                (0..*k as u32)
                    .map(|h| unary_prob(b, Some(h), *p, *q))
                    .sum::<f64>()
                    / *k as f64
            }
            _ => 0.0,
        }
    }
}

fn unary_prob(bits: &BitVector, hot: Option<u32>, p: f64, q: f64) -> f64 {
    bits.bits()
        .iter()
        .enumerate()
        .map(|(i, &b)| {
            let rate = if Some(i as u32) == hot { p } else { q };
            if b {
                rate
            } else {
                1.0 - rate
            }
        })
        .product()
}

/// Which [`ReportTuple`] variant a full-tuple protocol emits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportShape {
    Values,
    Bits,
    Mixed,
}

impl ReportShape {
    pub(crate) fn wrap(self, parts: Vec<AttributeReport>) -> ReportTuple {
        match self {
            ReportShape::Mixed => ReportTuple::Mixed(parts),
            ReportShape::Values => ReportTuple::Values(
                parts
                    .into_iter()
                    .map(|r| match r {
                        AttributeReport::Value(v) => v,
                        AttributeReport::Bits(_) => panic!("bit output in a value-shaped channel"),
                    })
                    .collect(),
            ),
            ReportShape::Bits => ReportTuple::Bits(
                parts
                    .into_iter()
                    .map(|r| match r {
                        AttributeReport::Bits(b) => b,
                        AttributeReport::Value(_) => panic!("value output in a bit-shaped channel"),
                    })
                    .collect(),
            ),
        }
    }
}

/// Exact description of a protocol's report channel.
#[derive(Debug, Clone, PartialEq)]
pub enum ChannelModel {
    /// One attribute sampled uniformly and reported through `sampled[j]`;
    /// every other attribute `i` reported through `fake[i]`.
    FakeMixture {
        shape: ReportShape,
        sampled: Vec<Kernel>,
        fake: Vec<Kernel>,
    },
    /// Every attribute reported independently.
    Product {
        shape: ReportShape,
        kernels: Vec<Kernel>,
    },
    /// One attribute sampled uniformly; its index is part of the output.
    Disclosed { kernels: Vec<Kernel> },
}

impl ChannelModel {
    pub fn d(&self) -> usize {
        match self {
            ChannelModel::FakeMixture { sampled, .. } => sampled.len(),
            ChannelModel::Product { kernels, .. } | ChannelModel::Disclosed { kernels } => {
                kernels.len()
            }
        }
    }

    fn primary_kernels(&self) -> &[Kernel] {
        match self {
            ChannelModel::FakeMixture { sampled, .. } => sampled,
            ChannelModel::Product { kernels, .. } | ChannelModel::Disclosed { kernels } => kernels,
        }
    }

    pub fn output_count(&self) -> u128 {
        let kernels = self.primary_kernels();
        match self {
            ChannelModel::Disclosed { .. } => kernels
                .iter()
                .fold(0u128, |acc, k| acc.saturating_add(k.output_count())),
            _ => kernels
                .iter()
                .fold(1u128, |acc, k| acc.saturating_mul(k.output_count())),
        }
    }

    /// Every possible report, in a fixed order.
    pub fn outputs(&self) -> Vec<ReportTuple> {
        match self {
            ChannelModel::Disclosed { kernels } => kernels
                .iter()
                .enumerate()
                .flat_map(|(j, kernel)| {
                    kernel
                        .outputs()
                        .into_iter()
                        .map(move |report| ReportTuple::Sampled { attribute: j, report })
                })
                .collect(),
            ChannelModel::FakeMixture { shape, sampled, .. } => cartesian(sampled, *shape),
            ChannelModel::Product { shape, kernels } => cartesian(kernels, *shape),
        }
    }

    /// `Pr[report | record]`.
    pub fn prob(&self, record: &RecordTuple, report: &ReportTuple) -> f64 {
        let v = record.values();
        match self {
            ChannelModel::Disclosed { kernels } => match report {
                ReportTuple::Sampled { attribute, report } if *attribute < kernels.len() => {
                    kernels[*attribute].prob(v[*attribute], report) / kernels.len() as f64
                }
                _ => 0.0,
            },
            ChannelModel::Product { kernels, .. } => match attribute_parts(report) {
                Some(parts) if parts.len() == kernels.len() => kernels
                    .iter()
                    .zip(&parts)
                    .zip(v)
                    .map(|((kernel, out), &input)| kernel.prob(input, out))
                    .product(),
                _ => 0.0,
            },
            ChannelModel::FakeMixture { sampled, fake, .. } => {
                let Some(parts) = attribute_parts(report) else {
                    return 0.0;
                };
                if parts.len() != sampled.len() {
                    return 0.0;
                }
                let d = sampled.len();
                let truthful: Vec<f64> = (0..d).map(|j| sampled[j].prob(v[j], &parts[j])).collect();
                let faked: Vec<f64> = (0..d).map(|j| fake[j].prob(v[j], &parts[j])).collect();
                (0..d)
                    .map(|j| {
                        truthful[j]
                            * (0..d)
                                .filter(|&i| i != j)
                                .map(|i| faked[i])
                                .product::<f64>()
                    })
                    .sum::<f64>()
                    / d as f64
            }
        }
    }
}

fn attribute_parts(report: &ReportTuple) -> Option<Vec<AttributeReport>> {
    match report {
        ReportTuple::Values(values) => Some(values.iter().map(|&v| AttributeReport::Value(v)).collect()),
        ReportTuple::Bits(bits) => Some(bits.iter().cloned().map(AttributeReport::Bits).collect()),
        ReportTuple::Mixed(parts) => Some(parts.clone()),
        ReportTuple::Sampled { .. } => None,
    }
}

fn cartesian(kernels: &[Kernel], shape: ReportShape) -> Vec<ReportTuple> {
    let per_attribute: Vec<Vec<AttributeReport>> = kernels.iter().map(Kernel::outputs).collect();
    let mut tuples: Vec<Vec<AttributeReport>> = vec![Vec::new()];
    for options in &per_attribute {
        tuples = tuples
            .into_iter()
            .flat_map(|prefix| {
                options.iter().map(move |o| {
                    let mut next = prefix.clone();
                    next.push(o.clone());
                    next
                })
            })
            .collect();
    }
    tuples.into_iter().map(|parts| shape.wrap(parts)).collect()
}
