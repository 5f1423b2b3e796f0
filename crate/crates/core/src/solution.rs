//! Name-addressed registry of the collection solutions.
//!
//! Every solution (a client plus its estimator) sits behind [`Solution`],
//! which prepares a [`Protocol`] for a concrete schema and budget. The
//! experiment harness, the auditor and the CLI select solutions by name.

use std::collections::HashMap;
use std::sync::LazyLock;

use crate::audit::ChannelModel;
use crate::baselines::{Smp, Spl};
use crate::error::{Error, Result};
use crate::frequency::FrequencyTable;
use crate::random::{RandomSource, StreamRng};
use crate::report::{ReportCounts, ReportTuple};
use crate::rsfd::{Rsfd, Variant};
use crate::schema::{AttributeSchema, RecordTuple};

pub trait Solution: Send + Sync {
    /// Registry key, e.g. `rsfd-oue-z`.
    fn name(&self) -> &'static str;

    /// Display name, e.g. `RS+FD[OUE-z]`.
    fn label(&self) -> &'static str;

    fn prepare(&self, schema: &AttributeSchema, epsilon: f64) -> Result<Box<dyn Protocol>>;
}

/// A solution bound to one schema and budget.
pub trait Protocol: Send + Sync {
    fn schema(&self) -> &AttributeSchema;

    /// Privatizes a record already validated against the schema.
    fn privatize_into(&self, record: &RecordTuple, rng: &mut StreamRng, out: &mut ReportTuple);

    fn estimate(&self, counts: &ReportCounts) -> Result<FrequencyTable>;

    fn channel_model(&self) -> ChannelModel;

    fn privatize(&self, record: &RecordTuple, rng: &mut StreamRng) -> Result<ReportTuple> {
        self.schema().check_record(record)?;
        let mut out = ReportTuple::Values(Vec::new());
        self.privatize_into(record, rng, &mut out);
        Ok(out)
    }
}

impl Protocol for Rsfd {
    fn schema(&self) -> &AttributeSchema {
        Rsfd::schema(self)
    }

    fn privatize_into(&self, record: &RecordTuple, rng: &mut StreamRng, out: &mut ReportTuple) {
        Rsfd::privatize_into(self, record, rng, out)
    }

    fn estimate(&self, counts: &ReportCounts) -> Result<FrequencyTable> {
        Rsfd::estimate(self, counts)
    }

    fn channel_model(&self) -> ChannelModel {
        Rsfd::channel_model(self)
    }
}

impl Protocol for Spl {
    fn schema(&self) -> &AttributeSchema {
        Spl::schema(self)
    }

    fn privatize_into(&self, record: &RecordTuple, rng: &mut StreamRng, out: &mut ReportTuple) {
        Spl::privatize_into(self, record, rng, out)
    }

    fn estimate(&self, counts: &ReportCounts) -> Result<FrequencyTable> {
        Spl::estimate(self, counts)
    }

    fn channel_model(&self) -> ChannelModel {
        Spl::channel_model(self)
    }
}

impl Protocol for Smp {
    fn schema(&self) -> &AttributeSchema {
        Smp::schema(self)
    }

    fn privatize_into(&self, record: &RecordTuple, rng: &mut StreamRng, out: &mut ReportTuple) {
        Smp::privatize_into(self, record, rng, out)
    }

    fn estimate(&self, counts: &ReportCounts) -> Result<FrequencyTable> {
        Smp::estimate(self, counts)
    }

    fn channel_model(&self) -> ChannelModel {
        Smp::channel_model(self)
    }
}

struct SplAdp;

impl Solution for SplAdp {
    fn name(&self) -> &'static str {
        "spl-adp"
    }

    fn label(&self) -> &'static str {
        "Spl[ADP]"
    }

    fn prepare(&self, schema: &AttributeSchema, epsilon: f64) -> Result<Box<dyn Protocol>> {
        Ok(Box::new(Spl::new(schema, epsilon)?))
    }
}

struct SmpAdp;

impl Solution for SmpAdp {
    fn name(&self) -> &'static str {
        "smp-adp"
    }

    fn label(&self) -> &'static str {
        "Smp[ADP]"
    }

    fn prepare(&self, schema: &AttributeSchema, epsilon: f64) -> Result<Box<dyn Protocol>> {
        Ok(Box::new(Smp::new(schema, epsilon)?))
    }
}

struct RsfdFixed(Variant);

impl Solution for RsfdFixed {
    fn name(&self) -> &'static str {
        match self.0 {
            Variant::Grr => "rsfd-grr",
            Variant::OueZ => "rsfd-oue-z",
            Variant::OueR => "rsfd-oue-r",
        }
    }

    fn label(&self) -> &'static str {
        match self.0 {
            Variant::Grr => "RS+FD[GRR]",
            Variant::OueZ => "RS+FD[OUE-z]",
            Variant::OueR => "RS+FD[OUE-r]",
        }
    }

    fn prepare(&self, schema: &AttributeSchema, epsilon: f64) -> Result<Box<dyn Protocol>> {
        Ok(Box::new(Rsfd::new(schema, epsilon, self.0)?))
    }
}

struct RsfdAdp;

impl Solution for RsfdAdp {
    fn name(&self) -> &'static str {
        "rsfd-adp"
    }

    fn label(&self) -> &'static str {
        "RS+FD[ADP]"
    }

    fn prepare(&self, schema: &AttributeSchema, epsilon: f64) -> Result<Box<dyn Protocol>> {
        Ok(Box::new(Rsfd::adaptive(schema, epsilon)?))
    }
}

static SOLUTIONS: LazyLock<Vec<Box<dyn Solution>>> = LazyLock::new(|| {
    vec![
        Box::new(SplAdp),
        Box::new(SmpAdp),
        Box::new(RsfdFixed(Variant::Grr)),
        Box::new(RsfdFixed(Variant::OueZ)),
        Box::new(RsfdFixed(Variant::OueR)),
        Box::new(RsfdAdp),
    ]
});

static INDEX: LazyLock<HashMap<&'static str, usize>> = LazyLock::new(|| {
    SOLUTIONS
        .iter()
        .enumerate()
        .map(|(i, s)| (s.name(), i))
        .collect()
});

/// All solutions in canonical order.
pub fn all() -> &'static [Box<dyn Solution>] {
    &SOLUTIONS
}

pub fn names() -> impl Iterator<Item = &'static str> {
    SOLUTIONS.iter().map(|s| s.name())
}

pub fn get(name: &str) -> Result<&'static dyn Solution> {
    INDEX
        .get(name)
        .map(|&i| SOLUTIONS[i].as_ref())
        .ok_or_else(|| Error::UnknownSolution(name.to_string()))
}

/// Position of `name` in the canonical order.
pub fn canonical_index(name: &str) -> Option<usize> {
    INDEX.get(name).copied()
}

/// Privatizes every record and tallies the reports. User `u` draws from
/// `source.derive(&[u])`, so the result does not depend on who runs it.
pub fn simulate_counts(protocol: &dyn Protocol, records: &[RecordTuple], source: &RandomSource) -> ReportCounts {
    let mut counts = ReportCounts::new(protocol.schema());
    let mut report = ReportTuple::Values(Vec::new());
    for (u, record) in records.iter().enumerate() {
        let mut rng = source.child_rng(u as u64);
        protocol.privatize_into(record, &mut rng, &mut report);
        counts.absorb(&report);
    }
    counts
}
