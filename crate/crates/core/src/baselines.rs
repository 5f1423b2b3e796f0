//! Comparison solutions: budget splitting (Spl) and attribute sampling with
//! disclosure (Smp), both with the adaptive GRR/OUE choice per attribute.

use rand::Rng;

use crate::audit::{ChannelModel, Kernel, ReportShape};
use crate::error::Result;
use crate::frequency::FrequencyTable;
use crate::oracles::{adp_choose, estimate_pure, grr_params, ue_params, CountVector, GrrParams, Mechanism, UeParams};
use crate::report::{AttributeReport, BitVector, ReportCounts, ReportTuple};
use crate::schema::{AttributeSchema, PrivacyBudget, RecordTuple};

/// A frequency oracle bound to one attribute.
#[derive(Debug, Clone)]
pub enum AttributeOracle {
    Grr(GrrParams),
    Oue { k: usize, params: UeParams },
}

impl AttributeOracle {
    /// The adaptive choice for `(epsilon, k)`.
    pub fn adaptive(epsilon: f64, k: usize) -> Result<Self> {
        Ok(match adp_choose(epsilon, k) {
            Mechanism::Grr => AttributeOracle::Grr(grr_params(epsilon, k)?),
            Mechanism::Oue => AttributeOracle::Oue {
                k,
                params: ue_params(epsilon)?,
            },
        })
    }

    pub fn mechanism(&self) -> Mechanism {
        match self {
            AttributeOracle::Grr(_) => Mechanism::Grr,
            AttributeOracle::Oue { .. } => Mechanism::Oue,
        }
    }

    pub fn pq(&self) -> (f64, f64) {
        match self {
            AttributeOracle::Grr(g) => (g.p(), g.q()),
            AttributeOracle::Oue { params, .. } => (params.p(), params.q()),
        }
    }

    fn k(&self) -> usize {
        match self {
            AttributeOracle::Grr(g) => g.k(),
            AttributeOracle::Oue { k, .. } => *k,
        }
    }

    #[inline]
    fn emit<R: Rng + ?Sized>(&self, value: u32, rng: &mut R, slot: &mut AttributeReport) {
        match self {
            AttributeOracle::Grr(g) => *slot = AttributeReport::Value(g.sample(value, rng)),
            AttributeOracle::Oue { k, params } => {
                if !matches!(slot, AttributeReport::Bits(_)) {
                    *slot = AttributeReport::Bits(BitVector::default());
                }
                if let AttributeReport::Bits(b) = slot {
                    params.perturb_one_hot_into(Some(value), *k, rng, b);
                }
            }
        }
    }

    fn kernel(&self) -> Kernel {
        let (p, q) = self.pq();
        let k = self.k();
        match self {
            AttributeOracle::Grr(_) => Kernel::RandomizedResponse { k, p, q },
            AttributeOracle::Oue { .. } => Kernel::UnaryEncoding { k, p, q },
        }
    }

    fn estimate(&self, counts: &[u64], n: u64) -> Result<Vec<f64>> {
        let (p, q) = self.pq();
        estimate_pure(&CountVector::from_tallies(counts, n), p, q)
    }
}

/// Spl: every attribute is reported at budget `ε/d`.
#[derive(Debug, Clone)]
pub struct Spl {
    schema: AttributeSchema,
    oracles: Vec<AttributeOracle>,
}

impl Spl {
    pub fn new(schema: &AttributeSchema, epsilon: f64) -> Result<Self> {
        PrivacyBudget::new(epsilon)?;
        let share = epsilon / schema.d() as f64;
        let oracles = schema
            .cardinalities()
            .iter()
            .map(|&k| AttributeOracle::adaptive(share, k))
            .collect::<Result<_>>()?;
        Ok(Self {
            schema: schema.clone(),
            oracles,
        })
    }

    pub fn oracles(&self) -> &[AttributeOracle] {
        &self.oracles
    }

    pub fn privatize_into<R: Rng + ?Sized>(&self, record: &RecordTuple, rng: &mut R, out: &mut ReportTuple) {
        if !matches!(out, ReportTuple::Mixed(_)) {
            *out = ReportTuple::Mixed(Vec::with_capacity(self.oracles.len()));
        }
        let ReportTuple::Mixed(reports) = out else {
            unreachable!()
        };
        reports.resize_with(self.oracles.len(), || AttributeReport::Value(0));
        for ((oracle, slot), &v) in self.oracles.iter().zip(reports.iter_mut()).zip(record.values()) {
            oracle.emit(v, rng, slot);
        }
    }

    pub fn estimate(&self, counts: &ReportCounts) -> Result<FrequencyTable> {
        let attributes = self
            .oracles
            .iter()
            .enumerate()
            .map(|(j, o)| o.estimate(counts.counts(j), counts.total()))
            .collect::<Result<Vec<_>>>()?;
        Ok(FrequencyTable::complete(attributes))
    }

    pub fn channel_model(&self) -> ChannelModel {
        ChannelModel::Product {
            shape: ReportShape::Mixed,
            kernels: self.oracles.iter().map(AttributeOracle::kernel).collect(),
        }
    }

    pub fn schema(&self) -> &AttributeSchema {
        &self.schema
    }
}

/// Smp: each user samples one attribute, discloses its index and reports
/// it at the full budget.
#[derive(Debug, Clone)]
pub struct Smp {
    schema: AttributeSchema,
    oracles: Vec<AttributeOracle>,
}

impl Smp {
    pub fn new(schema: &AttributeSchema, epsilon: f64) -> Result<Self> {
        PrivacyBudget::new(epsilon)?;
        let oracles = schema
            .cardinalities()
            .iter()
            .map(|&k| AttributeOracle::adaptive(epsilon, k))
            .collect::<Result<_>>()?;
        Ok(Self {
            schema: schema.clone(),
            oracles,
        })
    }

    pub fn oracles(&self) -> &[AttributeOracle] {
        &self.oracles
    }

    pub fn privatize_into<R: Rng + ?Sized>(&self, record: &RecordTuple, rng: &mut R, out: &mut ReportTuple) {
        let j = rng.gen_range(0..self.oracles.len());
        let value = record.get(j);
        match out {
            ReportTuple::Sampled { attribute, report } => {
                *attribute = j;
                self.oracles[j].emit(value, rng, report);
            }
            _ => {
                let mut report = AttributeReport::Value(0);
                self.oracles[j].emit(value, rng, &mut report);
                *out = ReportTuple::Sampled { attribute: j, report };
            }
        }
    }

    /// Each attribute is estimated from the `n_j` reports that sampled it.
    /// Attributes nobody sampled are absent.
    pub fn estimate(&self, counts: &ReportCounts) -> Result<FrequencyTable> {
        let attributes = self
            .oracles
            .iter()
            .enumerate()
            .map(|(j, o)| match counts.group_size(j) {
                0 => Ok(None),
                n_j => o.estimate(counts.counts(j), n_j).map(Some),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FrequencyTable::new(attributes))
    }

    pub fn channel_model(&self) -> ChannelModel {
        ChannelModel::Disclosed {
            kernels: self.oracles.iter().map(AttributeOracle::kernel).collect(),
        }
    }

    pub fn schema(&self) -> &AttributeSchema {
        &self.schema
    }
}

pub fn spl_client(record: &RecordTuple, schema: &AttributeSchema, epsilon: f64, rng: &mut impl Rng) -> Result<ReportTuple> {
    schema.check_record(record)?;
    let mut out = ReportTuple::Mixed(Vec::new());
    Spl::new(schema, epsilon)?.privatize_into(record, rng, &mut out);
    Ok(out)
}

pub fn spl_estimate(counts: &ReportCounts, schema: &AttributeSchema, epsilon: f64) -> Result<FrequencyTable> {
    Spl::new(schema, epsilon)?.estimate(counts)
}

pub fn smp_client(record: &RecordTuple, schema: &AttributeSchema, epsilon: f64, rng: &mut impl Rng) -> Result<ReportTuple> {
    schema.check_record(record)?;
    let mut out = ReportTuple::Values(Vec::new());
    Smp::new(schema, epsilon)?.privatize_into(record, rng, &mut out);
    Ok(out)
}

pub fn smp_estimate(counts: &ReportCounts, schema: &AttributeSchema, epsilon: f64) -> Result<FrequencyTable> {
    Smp::new(schema, epsilon)?.estimate(counts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::RandomSource;

    fn ln(x: f64) -> f64 {
        x.ln()
    }

    #[test]
    fn spl_splits_budget() {
        let schema = AttributeSchema::from_cardinalities(&[2, 2]).unwrap();
        let spl = Spl::new(&schema, ln(2.0)).unwrap();
        let AttributeOracle::Grr(g) = &spl.oracles()[0] else {
            panic!("k=2 should use GRR")
        };
        assert!((g.epsilon() - 0.346_573_590_279_972_6).abs() < 1e-12);
    }

    #[test]
    fn spl_nursery_shape_all_grr() {
        // 3 e^{ln2/9} + 2 ≈ 5.24 > every k_j
        let schema = AttributeSchema::from_cardinalities(&[3, 5, 4, 4, 3, 2, 3, 3, 5]).unwrap();
        let spl = Spl::new(&schema, ln(2.0)).unwrap();
        assert!(spl.oracles().iter().all(|o| o.mechanism() == Mechanism::Grr));
    }

    #[test]
    fn single_attribute_spl_is_plain_adaptive() {
        let schema = AttributeSchema::from_cardinalities(&[30]).unwrap();
        let spl = Spl::new(&schema, 1.0).unwrap();
        assert_eq!(spl.oracles()[0].mechanism(), adp_choose(1.0, 30));
        let (p, q) = spl.oracles()[0].pq();
        let u = ue_params(1.0).unwrap();
        assert_eq!((p, q), (u.p(), u.q()));
    }

    #[test]
    fn smp_mechanisms_by_threshold() {
        let schema = AttributeSchema::from_cardinalities(&[2, 50]).unwrap();
        let smp = Smp::new(&schema, ln(3.0)).unwrap();
        assert_eq!(smp.oracles()[0].mechanism(), Mechanism::Grr);
        assert_eq!(smp.oracles()[1].mechanism(), Mechanism::Oue);
        let mut rng = RandomSource::new(4).rng();
        for _ in 0..100 {
            let r = smp_client(&RecordTuple::new(vec![1, 7]), &schema, ln(3.0), &mut rng).unwrap();
            match r {
                ReportTuple::Sampled { attribute: 0, report: AttributeReport::Value(_) } => {}
                ReportTuple::Sampled { attribute: 1, report: AttributeReport::Bits(b) } => assert_eq!(b.len(), 50),
                other => panic!("unexpected {other:?}"),
            }
        }
    }

    #[test]
    fn smp_single_attribute_always_samples_it() {
        let schema = AttributeSchema::from_cardinalities(&[3]).unwrap();
        let mut rng = RandomSource::new(5).rng();
        for _ in 0..100 {
            let r = smp_client(&RecordTuple::new(vec![2]), &schema, 1.0, &mut rng).unwrap();
            assert!(matches!(r, ReportTuple::Sampled { attribute: 0, .. }));
        }
    }

    #[test]
    fn smp_estimate_uses_group_size() {
        // d=2, n=100, n_1=50, GRR p=.75 q=.25, N=[40,10] → [1.1, -0.1]
        let schema = AttributeSchema::from_cardinalities(&[2, 2]).unwrap();
        let mut counts = ReportCounts::new(&schema);
        let push = |c: &mut ReportCounts, j: usize, v: u32, times: usize| {
            for _ in 0..times {
                c.absorb(&ReportTuple::Sampled { attribute: j, report: AttributeReport::Value(v) });
            }
        };
        push(&mut counts, 0, 0, 40);
        push(&mut counts, 0, 1, 10);
        push(&mut counts, 1, 0, 25);
        push(&mut counts, 1, 1, 25);
        let est = smp_estimate(&counts, &schema, ln(3.0)).unwrap();
        let a = est.attribute(0).unwrap();
        assert!((a[0] - 1.1).abs() < 1e-12 && (a[1] + 0.1).abs() < 1e-12);
        let b = est.attribute(1).unwrap();
        assert!((b[0] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn smp_empty_group_is_absent() {
        let schema = AttributeSchema::from_cardinalities(&[2, 2]).unwrap();
        let mut counts = ReportCounts::new(&schema);
        counts.absorb(&ReportTuple::Sampled { attribute: 0, report: AttributeReport::Value(1) });
        let est = smp_estimate(&counts, &schema, 1.0).unwrap();
        assert!(est.attribute(0).is_some());
        assert!(est.attribute(1).is_none());
    }

    #[test]
    fn noiseless_expectations_recover_truth() {
        // f = [1, 0] on a k=2 attribute, GRR at ε: E[N] = n [p, q]
        let schema = AttributeSchema::from_cardinalities(&[2]).unwrap();
        for &eps in &[ln(2.0), ln(3.0), 1.7] {
            let g = grr_params(eps, 2).unwrap();
            let n = 1000.0;
            let cv = CountVector::new(vec![n * g.p(), n * g.q()], n);
            let est = estimate_pure(&cv, g.p(), g.q()).unwrap();
            assert!((est[0] - 1.0).abs() < 1e-12 && est[1].abs() < 1e-12);
            // d = 1: Spl estimation reduces to the pure estimator.
            let spl = Spl::new(&schema, eps).unwrap();
            assert_eq!(spl.oracles()[0].pq(), (g.p(), g.q()));
        }
    }
}
