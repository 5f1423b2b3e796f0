//! Exact enumeration of report channels on small domains.
//!
//! The auditor computes `Pr[report | record]` from closed-form per-attribute
//! kernels, never from the samplers, so it doubles as the ground truth
//! against which client implementations are checked.

mod model;

use std::collections::HashMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::report::ReportTuple;
use crate::schema::{AttributeSchema, RecordTuple};
use crate::solution;

pub use model::{ChannelModel, Kernel, ReportShape};

/// Default cap on `inputs × outputs` entries.
pub const DEFAULT_STATE_LIMIT: u128 = 10_000_000;

/// `Pr[output | input]` for every input record and every possible output.
#[derive(Debug, Clone)]
pub struct ChannelTable {
    inputs: Vec<RecordTuple>,
    outputs: Vec<ReportTuple>,
    /// Row per input, column per output.
    probs: Vec<Vec<f64>>,
}

impl ChannelTable {
    pub fn inputs(&self) -> &[RecordTuple] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[ReportTuple] {
        &self.outputs
    }

    pub fn row(&self, input: usize) -> &[f64] {
        &self.probs[input]
    }

    pub fn input_index(&self, record: &RecordTuple) -> Option<usize> {
        self.inputs.iter().position(|r| r == record)
    }

    pub fn output_index(&self) -> HashMap<&ReportTuple, usize> {
        self.outputs.iter().enumerate().map(|(i, o)| (o, i)).collect()
    }

    pub fn prob(&self, record: &RecordTuple, report: &ReportTuple) -> Option<f64> {
        let i = self.input_index(record)?;
        let o = self.outputs.iter().position(|r| r == report)?;
        Some(self.probs[i][o])
    }

    /// Largest deviation of any row sum from one.
    pub fn max_row_error(&self) -> f64 {
        self.probs
            .iter()
            .map(|row| (row.iter().sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

/// Every record of `schema`, last attribute varying fastest.
pub fn all_records(schema: &AttributeSchema) -> Vec<RecordTuple> {
    let mut records = vec![Vec::new()];
    for &k in schema.cardinalities() {
        records = records
            .into_iter()
            .flat_map(|prefix: Vec<u32>| {
                (0..k as u32).map(move |v| {
                    let mut next = prefix.clone();
                    next.push(v);
                    next
                })
            })
            .collect();
    }
    records.into_iter().map(RecordTuple::new).collect()
}

/// Enumerates a channel model over all records of `schema`.
pub fn enumerate_model(model: &ChannelModel, schema: &AttributeSchema, limit: u128) -> Result<ChannelTable> {
    let entries = schema.domain_size().saturating_mul(model.output_count());
    if entries > limit {
        return Err(Error::StateSpaceTooLarge { entries, limit });
    }
    let inputs = all_records(schema);
    let outputs = model.outputs();
    let probs = inputs
        .par_iter()
        .map(|input| outputs.iter().map(|o| model.prob(input, o)).collect())
        .collect();
    Ok(ChannelTable {
        inputs,
        outputs,
        probs,
    })
}

/// Exact channel of the named solution at `epsilon`.
pub fn enumerate_channel(protocol: &str, schema: &AttributeSchema, epsilon: f64) -> Result<ChannelTable> {
    enumerate_channel_with_limit(protocol, schema, epsilon, DEFAULT_STATE_LIMIT)
}

pub fn enumerate_channel_with_limit(
    protocol: &str,
    schema: &AttributeSchema,
    epsilon: f64,
    limit: u128,
) -> Result<ChannelTable> {
    let prepared = solution::get(protocol)?.prepare(schema, epsilon)?;
    enumerate_model(&prepared.channel_model(), schema, limit)
}

/// Which input pairs count as neighbours.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Neighboring {
    /// Records differing in exactly one attribute.
    OneAttribute,
    /// Any two distinct records.
    Any,
}

/// A pair of inputs and an output attaining a ratio.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub numerator_input: RecordTuple,
    pub denominator_input: RecordTuple,
    pub output: ReportTuple,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RatioBound {
    /// `f64::INFINITY` when some output is possible under one input and impossible under another.
    pub ratio: f64,
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RatioReport {
    pub one_attribute: RatioBound,
    pub any: RatioBound,
}

impl RatioReport {
    pub fn max_ratio_one_attr(&self) -> f64 {
        self.one_attribute.ratio
    }

    pub fn max_ratio_any(&self) -> f64 {
        self.any.ratio
    }
}

fn ratio(num: f64, den: f64) -> Option<f64> {
    match (num > 0.0, den > 0.0) {
        (false, _) => None,
        (true, false) => Some(f64::INFINITY),
        (true, true) => Some(num / den),
    }
}

/// Supremum of `Pr[y | v] / Pr[y | v']` over qualifying pairs and outputs.
/// `0/0` is skipped; `x/0` with `x > 0` is unbounded.
pub fn max_ratio(table: &ChannelTable, neighboring: Neighboring) -> RatioBound {
    let mut best = RatioBound {
        ratio: 1.0,
        witness: None,
    };
    let mut consider = |a: usize, b: usize, o: usize, r: f64| {
        if r > best.ratio || best.witness.is_none() {
            best = RatioBound {
                ratio: r,
                witness: Some(Witness {
                    numerator_input: table.inputs[a].clone(),
                    denominator_input: table.inputs[b].clone(),
                    output: table.outputs[o].clone(),
                }),
            };
        }
    };
    let n_out = table.outputs.len();
    match neighboring {
        Neighboring::Any => {
            // Per output the worst pair is (argmax, argmin) over inputs.
            for o in 0..n_out {
                let (mut hi, mut lo) = (0, 0);
                for i in 0..table.inputs.len() {
                    if table.probs[i][o] > table.probs[hi][o] {
                        hi = i;
                    }
                    if table.probs[i][o] < table.probs[lo][o] {
                        lo = i;
                    }
                }
                if hi != lo {
                    if let Some(r) = ratio(table.probs[hi][o], table.probs[lo][o]) {
                        consider(hi, lo, o, r);
                    }
                }
            }
        }
        Neighboring::OneAttribute => {
            let index: HashMap<&RecordTuple, usize> =
                table.inputs.iter().enumerate().map(|(i, r)| (r, i)).collect();
            for (a, record) in table.inputs.iter().enumerate() {
                let mut neighbour = record.values().to_vec();
                for j in 0..neighbour.len() {
                    let original = neighbour[j];
                    // Cardinality is implied by the enumerated inputs.
                    for v in 0.. {
                        if v == original {
                            continue;
                        }
                        neighbour[j] = v;
                        let Some(&b) = index.get(&RecordTuple::new(neighbour.clone())) else {
                            break;
                        };
                        for o in 0..n_out {
                            if let Some(r) = ratio(table.probs[a][o], table.probs[b][o]) {
                                consider(a, b, o, r);
                            }
                        }
                    }
                    neighbour[j] = original;
                }
            }
        }
    }
    best
}

/// Both neighbouring notions at once.
pub fn audit_ratios(table: &ChannelTable) -> RatioReport {
    RatioReport {
        one_attribute: max_ratio(table, Neighboring::OneAttribute),
        any: max_ratio(table, Neighboring::Any),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rsfd::amplify;

    fn ln(x: f64) -> f64 {
        x.ln()
    }

    fn schema(ks: &[usize]) -> AttributeSchema {
        AttributeSchema::from_cardinalities(ks).unwrap()
    }

    // Hand enumeration of the RS+FD[GRR] tree, d=2, k=[2,2], ε=ln 2 (ε'=ln 3,
    // p=.75, q=.25, fake uniform 1/2): Pr[y|(0,0)] = ½(GRR(y1)·½) + ½(½·GRR(y2)).
    #[test]
    fn rsfd_grr_two_binary_attributes() {
        let table = enumerate_channel("rsfd-grr", &schema(&[2, 2]), ln(2.0)).unwrap();
        let input = RecordTuple::new(vec![0, 0]);
        let expected = [
            (vec![0, 0], 0.375),
            (vec![0, 1], 0.25),
            (vec![1, 0], 0.25),
            (vec![1, 1], 0.125),
        ];
        for (y, want) in expected {
            let got = table.prob(&input, &ReportTuple::Values(y.clone())).unwrap();
            assert!((got - want).abs() < 1e-12, "{y:?}: {got}");
        }
        assert!(table.max_row_error() < 1e-12);
    }

    #[test]
    fn rsfd_grr_ratio_golden_values() {
        let table = enumerate_channel("rsfd-grr", &schema(&[2, 2]), ln(2.0)).unwrap();
        let report = audit_ratios(&table);
        assert!((report.max_ratio_one_attr() - 2.0).abs() < 1e-9);
        assert!((report.max_ratio_any() - 3.0).abs() < 1e-9);
        let eps_prime = amplify(ln(2.0), 2).unwrap().epsilon_prime;
        assert!((report.max_ratio_one_attr() - (eps_prime.exp() + 1.0) / 2.0).abs() < 1e-9);
        let w = report.any.witness.unwrap();
        assert_ne!(w.numerator_input, w.denominator_input);
    }

    #[test]
    fn pure_grr_ratio() {
        let table = enumerate_channel("rsfd-grr", &schema(&[2]), ln(3.0)).unwrap();
        let report = audit_ratios(&table);
        assert!((report.max_ratio_one_attr() - 3.0).abs() < 1e-9);
        assert!((report.max_ratio_any() - 3.0).abs() < 1e-9);
    }

    #[test]
    fn rsfd_oue_z_one_attribute_bound() {
        let table = enumerate_channel("rsfd-oue-z", &schema(&[2, 2]), ln(2.0)).unwrap();
        assert_eq!(table.outputs().len(), 16);
        assert!(max_ratio(&table, Neighboring::OneAttribute).ratio <= 2.0 + 1e-9);
    }

    #[test]
    fn every_row_is_a_distribution() {
        for name in solution::names() {
            for ks in [&[2usize][..], &[3, 2], &[2, 3, 2]] {
                let table = enumerate_channel(name, &schema(ks), 0.9).unwrap();
                assert!(table.max_row_error() < 1e-12, "{name} {ks:?}");
                assert!(table.probs.iter().flatten().all(|&p| p >= 0.0));
            }
        }
    }

    #[test]
    fn adaptive_on_small_domains_equals_rsfd_grr() {
        let s = schema(&[2, 2, 2]);
        let adp = enumerate_channel("rsfd-adp", &s, 1.0).unwrap();
        let grr = enumerate_channel("rsfd-grr", &s, 1.0).unwrap();
        assert_eq!(adp.outputs().len(), grr.outputs().len());
        for i in 0..adp.inputs().len() {
            for (a, b) in adp.row(i).iter().zip(grr.row(i)) {
                assert!((a - b).abs() < 1e-15);
            }
        }
    }

    // Independently enumerated: fake one-hot vectors of a uniform value leak
    // more than zero vectors do, so this construction exceeds e^ε = 3.
    #[test]
    fn rsfd_oue_r_exceeds_the_one_attribute_bound() {
        let table = enumerate_channel("rsfd-oue-r", &schema(&[3, 3, 3]), ln(3.0)).unwrap();
        let r = max_ratio(&table, Neighboring::OneAttribute).ratio;
        assert!((r - 41.0 / 11.0).abs() < 1e-9, "{r}");
        let z = enumerate_channel("rsfd-oue-z", &schema(&[3, 3, 3]), ln(3.0)).unwrap();
        assert!(max_ratio(&z, Neighboring::OneAttribute).ratio <= 3.0 + 1e-9);
    }

    #[test]
    fn rsfd_grr_exceeds_the_one_attribute_bound_on_mixed_cardinalities() {
        for (ks, e, want) in [
            (vec![2, 3], 2.0, 23.0 / 11.0),
            (vec![3, 2], 3.0, 13.0 / 4.0),
            (vec![2, 3, 3], 3.0, 35.0 / 11.0),
        ] {
            for name in ["rsfd-grr", "rsfd-adp"] {
                let table = enumerate_channel(name, &schema(&ks), ln(e)).unwrap();
                let r = max_ratio(&table, Neighboring::OneAttribute).ratio;
                assert!((r - want).abs() < 1e-9, "{name} {ks:?}: {r}");
            }
        }
        for ks in [vec![3, 3], vec![2, 2, 2], vec![4, 4, 4]] {
            let table = enumerate_channel("rsfd-grr", &schema(&ks), ln(3.0)).unwrap();
            assert!(max_ratio(&table, Neighboring::OneAttribute).ratio <= 3.0 + 1e-9, "{ks:?}");
        }
    }

    #[test]
    fn one_attribute_never_exceeds_any_pair() {
        for name in solution::names() {
            let table = enumerate_channel(name, &schema(&[2, 3]), 1.3).unwrap();
            let report = audit_ratios(&table);
            assert!(report.max_ratio_one_attr() <= report.max_ratio_any() + 1e-12, "{name}");
        }
    }

    #[test]
    fn state_space_limit() {
        let err = enumerate_channel_with_limit("rsfd-oue-z", &schema(&[10, 10]), 1.0, 1_000).unwrap_err();
        assert!(matches!(err, Error::StateSpaceTooLarge { .. }));
    }

    #[test]
    fn zero_denominator_is_unbounded() {
        let table = ChannelTable {
            inputs: vec![RecordTuple::new(vec![0]), RecordTuple::new(vec![1])],
            outputs: vec![ReportTuple::Values(vec![0]), ReportTuple::Values(vec![1])],
            probs: vec![vec![1.0, 0.0], vec![0.5, 0.5]],
        };
        assert_eq!(max_ratio(&table, Neighboring::Any).ratio, f64::INFINITY);
        assert_eq!(max_ratio(&table, Neighboring::OneAttribute).ratio, f64::INFINITY);
    }
}
