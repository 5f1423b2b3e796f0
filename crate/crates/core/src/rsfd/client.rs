use rand::Rng;

use super::{amplify, variance::adp_select, AmplifiedBudget, Variant};
use crate::audit::{ChannelModel, Kernel, ReportShape};
use crate::error::Result;
use crate::frequency::FrequencyTable;
use crate::oracles::{grr_params, ue_params, GrrParams, UeParams};
use crate::report::{AttributeReport, BitVector, ReportCounts, ReportTuple};
use crate::schema::{AttributeSchema, RecordTuple};

/// How one attribute is privatized when sampled and faked when not.
#[derive(Debug, Clone)]
pub enum AttributePlan {
    Grr(GrrParams),
    OueZ { k: usize, params: UeParams },
    OueR { k: usize, params: UeParams },
}

impl AttributePlan {
    fn new(variant: Variant, k: usize, epsilon_prime: f64) -> Result<Self> {
        Ok(match variant {
            Variant::Grr => AttributePlan::Grr(grr_params(epsilon_prime, k)?),
            Variant::OueZ => AttributePlan::OueZ {
                k,
                params: ue_params(epsilon_prime)?,
            },
            Variant::OueR => AttributePlan::OueR {
                k,
                params: ue_params(epsilon_prime)?,
            },
        })
    }

    pub fn variant(&self) -> Variant {
        match self {
            AttributePlan::Grr(_) => Variant::Grr,
            AttributePlan::OueZ { .. } => Variant::OueZ,
            AttributePlan::OueR { .. } => Variant::OueR,
        }
    }

    pub fn k(&self) -> usize {
        match self {
            AttributePlan::Grr(g) => g.k(),
            AttributePlan::OueZ { k, .. } | AttributePlan::OueR { k, .. } => *k,
        }
    }

    /// `(p, q)` of the randomizer at the amplified budget.
    pub fn pq(&self) -> (f64, f64) {
        match self {
            AttributePlan::Grr(g) => (g.p(), g.q()),
            AttributePlan::OueZ { params, .. } | AttributePlan::OueR { params, .. } => {
                (params.p(), params.q())
            }
        }
    }

    #[inline]
    fn value<R: Rng + ?Sized>(&self, g: &GrrParams, truth: Option<u32>, rng: &mut R) -> u32 {
        match truth {
            Some(v) => g.sample(v, rng),
            None => rng.gen_range(0..self.k() as u32),
        }
    }

    /// Writes the bit report of a unary-encoding plan into `out`.
    #[inline]
    fn bits<R: Rng + ?Sized>(&self, truth: Option<u32>, rng: &mut R, out: &mut BitVector) {
        match self {
            AttributePlan::OueZ { k, params } => params.perturb_one_hot_into(truth, *k, rng, out),
            AttributePlan::OueR { k, params } => {
                let hot = match truth {
                    Some(v) => v,
                    None => rng.gen_range(0..*k as u32),
                };
                params.perturb_one_hot_into(Some(hot), *k, rng, out)
            }
            AttributePlan::Grr(_) => unreachable!("value plan asked for bits"),
        }
    }

    #[inline]
    fn emit<R: Rng + ?Sized>(&self, truth: Option<u32>, rng: &mut R, slot: &mut AttributeReport) {
        match self {
            AttributePlan::Grr(g) => *slot = AttributeReport::Value(self.value(g, truth, rng)),
            _ => {
                if !matches!(slot, AttributeReport::Bits(_)) {
                    *slot = AttributeReport::Bits(BitVector::default());
                }
                if let AttributeReport::Bits(b) = slot {
                    self.bits(truth, rng, b);
                }
            }
        }
    }

    fn kernels(&self) -> (Kernel, Kernel) {
        let k = self.k();
        let (p, q) = self.pq();
        match self {
            AttributePlan::Grr(_) => (
                Kernel::RandomizedResponse { k, p, q },
                Kernel::UniformValue { k },
            ),
            AttributePlan::OueZ { .. } => {
                (Kernel::UnaryEncoding { k, p, q }, Kernel::UnaryZero { k, q })
            }
            AttributePlan::OueR { .. } => (
                Kernel::UnaryEncoding { k, p, q },
                Kernel::UnaryUniform { k, p, q },
            ),
        }
    }
}

/// An RS+FD protocol prepared for one schema and budget.
#[derive(Debug, Clone)]
pub struct Rsfd {
    schema: AttributeSchema,
    budget: AmplifiedBudget,
    plans: Vec<AttributePlan>,
    shape: ReportShape,
}

impl Rsfd {
    /// Every attribute uses `variant`.
    pub fn new(schema: &AttributeSchema, epsilon: f64, variant: Variant) -> Result<Self> {
        let budget = amplify(epsilon, schema.d())?;
        let plans = schema
            .cardinalities()
            .iter()
            .map(|&k| AttributePlan::new(variant, k, budget.epsilon_prime))
            .collect::<Result<_>>()?;
        let shape = match variant {
            Variant::Grr => ReportShape::Values,
            Variant::OueZ | Variant::OueR => ReportShape::Bits,
        };
        Ok(Self {
            schema: schema.clone(),
            budget,
            plans,
            shape,
        })
    }

    /// Each attribute uses whichever of GRR and OUE-z has the lower
    /// approximate variance at `(ε', d, k_j)`. Reports are always mixed.
    pub fn adaptive(schema: &AttributeSchema, epsilon: f64) -> Result<Self> {
        let budget = amplify(epsilon, schema.d())?;
        let plans = schema
            .cardinalities()
            .iter()
            .map(|&k| {
                let variant = adp_select(budget.epsilon_prime, schema.d(), k);
                AttributePlan::new(variant, k, budget.epsilon_prime)
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            schema: schema.clone(),
            budget,
            plans,
            shape: ReportShape::Mixed,
        })
    }

    pub fn schema(&self) -> &AttributeSchema {
        &self.schema
    }

    pub fn budget(&self) -> &AmplifiedBudget {
        &self.budget
    }

    pub fn plans(&self) -> &[AttributePlan] {
        &self.plans
    }

    pub fn privatize(&self, record: &RecordTuple, rng: &mut impl Rng) -> Result<ReportTuple> {
        self.schema.check_record(record)?;
        let mut out = ReportTuple::Values(Vec::new());
        self.privatize_into(record, rng, &mut out);
        Ok(out)
    }

    /// Privatizes a record known to be valid, reusing the buffers in `out`.
    pub fn privatize_into<R: Rng + ?Sized>(
        &self,
        record: &RecordTuple,
        rng: &mut R,
        out: &mut ReportTuple,
    ) {
        let d = self.plans.len();
        let sampled = rng.gen_range(0..d);
        let truth = |i: usize| (i == sampled).then(|| record.get(i));
        match self.shape {
            ReportShape::Values => {
                if !matches!(out, ReportTuple::Values(_)) {
                    *out = ReportTuple::Values(Vec::with_capacity(d));
                }
                let ReportTuple::Values(values) = out else {
                    unreachable!()
                };
                values.clear();
                for (i, plan) in self.plans.iter().enumerate() {
                    let AttributePlan::Grr(g) = plan else {
                        unreachable!("value-shaped protocol with a bit plan")
                    };
                    values.push(plan.value(g, truth(i), rng));
                }
            }
            ReportShape::Bits => {
                if !matches!(out, ReportTuple::Bits(_)) {
                    *out = ReportTuple::Bits(Vec::with_capacity(d));
                }
                let ReportTuple::Bits(vectors) = out else {
                    unreachable!()
                };
                vectors.resize_with(d, BitVector::default);
                for (i, (plan, slot)) in self.plans.iter().zip(vectors.iter_mut()).enumerate() {
                    plan.bits(truth(i), rng, slot);
                }
            }
            ReportShape::Mixed => {
                if !matches!(out, ReportTuple::Mixed(_)) {
                    *out = ReportTuple::Mixed(Vec::with_capacity(d));
                }
                let ReportTuple::Mixed(reports) = out else {
                    unreachable!()
                };
                reports.resize_with(d, || AttributeReport::Value(0));
                for (i, (plan, slot)) in self.plans.iter().zip(reports.iter_mut()).enumerate() {
                    plan.emit(truth(i), rng, slot);
                }
            }
        }
    }

    /// Per-attribute estimates, each attribute through the estimator of its plan.
    pub fn estimate(&self, counts: &ReportCounts) -> Result<FrequencyTable> {
        let d = self.schema.d();
        let eps = self.budget.epsilon_prime;
        let attributes = self
            .plans
            .iter()
            .enumerate()
            .map(|(j, plan)| {
                let cv = crate::oracles::CountVector::from_tallies(counts.counts(j), counts.total());
                match plan.variant() {
                    Variant::Grr => super::grr_estimate(&cv, d, plan.k(), eps),
                    Variant::OueZ => super::oue_z_estimate(&cv, d, eps),
                    Variant::OueR => super::oue_r_estimate(&cv, d, plan.k(), eps),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FrequencyTable::complete(attributes))
    }

    /// Exact description of the report channel for the auditor.
    pub fn channel_model(&self) -> ChannelModel {
        let (sampled, fake) = self.plans.iter().map(AttributePlan::kernels).unzip();
        ChannelModel::FakeMixture {
            shape: self.shape,
            sampled,
            fake,
        }
    }
}

fn run_client(
    record: &RecordTuple,
    schema: &AttributeSchema,
    rng: &mut impl Rng,
    protocol: Result<Rsfd>,
) -> Result<ReportTuple> {
    schema.check_record(record)?;
    protocol?.privatize(record, rng)
}

/// RS+FD[GRR] client.
pub fn grr_client(
    record: &RecordTuple,
    schema: &AttributeSchema,
    epsilon: f64,
    rng: &mut impl Rng,
) -> Result<ReportTuple> {
    run_client(record, schema, rng, Rsfd::new(schema, epsilon, Variant::Grr))
}

/// RS+FD[OUE-z] client.
pub fn oue_z_client(
    record: &RecordTuple,
    schema: &AttributeSchema,
    epsilon: f64,
    rng: &mut impl Rng,
) -> Result<ReportTuple> {
    run_client(record, schema, rng, Rsfd::new(schema, epsilon, Variant::OueZ))
}

/// RS+FD[OUE-r] client.
pub fn oue_r_client(
    record: &RecordTuple,
    schema: &AttributeSchema,
    epsilon: f64,
    rng: &mut impl Rng,
) -> Result<ReportTuple> {
    run_client(record, schema, rng, Rsfd::new(schema, epsilon, Variant::OueR))
}

/// RS+FD[ADP] client.
pub fn adp_client(
    record: &RecordTuple,
    schema: &AttributeSchema,
    epsilon: f64,
    rng: &mut impl Rng,
) -> Result<ReportTuple> {
    run_client(record, schema, rng, Rsfd::adaptive(schema, epsilon))
}
