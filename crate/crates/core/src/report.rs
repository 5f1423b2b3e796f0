//! Privatized reports and the count tables the aggregator builds from them.
//!
//! A report never records which attribute a RS+FD client sampled; the
//! only variant that names an attribute is [`ReportTuple::Sampled`], used
//! by the disclosing Smp baseline.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::schema::AttributeSchema;

/// A fixed-width vector of bits (one per domain value).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct BitVector(Vec<bool>);

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self(vec![false; len])
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        Self(bits)
    }

    /// Bits of `index` read little-endian, `len` wide.
    pub fn from_index(index: u64, len: usize) -> Self {
        Self((0..len).map(|i| index >> i & 1 == 1).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> bool {
        self.0[i]
    }

    pub fn set(&mut self, i: usize, bit: bool) {
        self.0[i] = bit;
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn count_ones(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    pub(crate) fn reset(&mut self, len: usize) {
        self.0.clear();
        self.0.resize(len, false);
    }

    pub(crate) fn bits_mut(&mut self) -> &mut [bool] {
        &mut self.0
    }
}

impl std::fmt::Display for BitVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// What a client sends for a single attribute.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AttributeReport {
    Value(u32),
    Bits(BitVector),
}

impl AttributeReport {
    fn check(&self, k: usize) -> Result<()> {
        match self {
            AttributeReport::Value(v) if (*v as usize) < k => Ok(()),
            AttributeReport::Value(v) => Err(Error::ReportShape(format!(
                "value {v} out of range for cardinality {k}"
            ))),
            AttributeReport::Bits(b) if b.len() == k => Ok(()),
            AttributeReport::Bits(b) => Err(Error::ReportShape(format!(
                "bit vector of width {} for cardinality {k}",
                b.len()
            ))),
        }
    }
}

/// One user's privatized output.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ReportTuple {
    /// One value index per attribute (GRR family).
    Values(Vec<u32>),
    /// One bit vector per attribute (unary encoding family).
    Bits(Vec<BitVector>),
    /// A disclosed attribute index plus that attribute's report.
    Sampled {
        attribute: usize,
        report: AttributeReport,
    },
    /// Per-attribute choice of value or bit vector.
    Mixed(Vec<AttributeReport>),
}

impl ReportTuple {
    /// Checks lengths, value ranges and bit widths against `schema`.
    pub fn check(&self, schema: &AttributeSchema) -> Result<()> {
        let d = schema.d();
        let len_err = |got: usize| {
            Err(Error::ReportShape(format!(
                "{got} attribute reports for a schema with {d} attributes"
            )))
        };
        match self {
            ReportTuple::Values(values) => {
                if values.len() != d {
                    return len_err(values.len());
                }
                values
                    .iter()
                    .enumerate()
                    .try_for_each(|(j, &v)| AttributeReport::Value(v).check(schema.k(j)))
            }
            ReportTuple::Bits(vectors) => {
                if vectors.len() != d {
                    return len_err(vectors.len());
                }
                vectors.iter().enumerate().try_for_each(|(j, b)| {
                    if b.len() == schema.k(j) {
                        Ok(())
                    } else {
                        Err(Error::ReportShape(format!(
                            "attribute {j}: width {} != {}",
                            b.len(),
                            schema.k(j)
                        )))
                    }
                })
            }
            ReportTuple::Sampled { attribute, report } => {
                if *attribute >= d {
                    return Err(Error::ReportShape(format!(
                        "sampled attribute {attribute} >= d = {d}"
                    )));
                }
                report.check(schema.k(*attribute))
            }
            ReportTuple::Mixed(reports) => {
                if reports.len() != d {
                    return len_err(reports.len());
                }
                reports
                    .iter()
                    .enumerate()
                    .try_for_each(|(j, r)| r.check(schema.k(j)))
            }
        }
    }
}

/// Per-attribute tallies `N_i` with the number of reports that carried the attribute.
///
/// Merging is associative and commutative, so shards may be aggregated in any order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportCounts {
    total: u64,
    group_sizes: Vec<u64>,
    counts: Vec<Vec<u64>>,
}

impl ReportCounts {
    pub fn new(schema: &AttributeSchema) -> Self {
        Self {
            total: 0,
            group_sizes: vec![0; schema.d()],
            counts: schema.cardinalities().iter().map(|&k| vec![0; k]).collect(),
        }
    }

    /// Total number of absorbed reports.
    pub fn total(&self) -> u64 {
        self.total
    }

    /// Number of reports that carried attribute `j` (`n` for full tuples, `n_j` for Smp).
    pub fn group_size(&self, j: usize) -> u64 {
        self.group_sizes[j]
    }

    pub fn counts(&self, j: usize) -> &[u64] {
        &self.counts[j]
    }

    fn add_attribute(&mut self, j: usize, report: &AttributeReport) {
        self.group_sizes[j] += 1;
        match report {
            AttributeReport::Value(v) => self.counts[j][*v as usize] += 1,
            AttributeReport::Bits(b) => add_bits(&mut self.counts[j], b),
        }
    }

    /// Adds one report. The report must already match the schema.
    pub fn absorb(&mut self, report: &ReportTuple) {
        self.total += 1;
        match report {
            ReportTuple::Values(values) => {
                for (j, &v) in values.iter().enumerate() {
                    self.group_sizes[j] += 1;
                    self.counts[j][v as usize] += 1;
                }
            }
            ReportTuple::Bits(vectors) => {
                for (j, b) in vectors.iter().enumerate() {
                    self.group_sizes[j] += 1;
                    add_bits(&mut self.counts[j], b);
                }
            }
            ReportTuple::Sampled { attribute, report } => self.add_attribute(*attribute, report),
            ReportTuple::Mixed(reports) => {
                for (j, r) in reports.iter().enumerate() {
                    self.add_attribute(j, r);
                }
            }
        }
    }

    pub fn merge(&mut self, other: &ReportCounts) {
        assert_eq!(self.counts.len(), other.counts.len(), "schema mismatch");
        self.total += other.total;
        for (a, b) in self.group_sizes.iter_mut().zip(&other.group_sizes) {
            *a += b;
        }
        for (row, other_row) in self.counts.iter_mut().zip(&other.counts) {
            assert_eq!(row.len(), other_row.len(), "schema mismatch");
            for (a, b) in row.iter_mut().zip(other_row) {
                *a += b;
            }
        }
    }
}

#[inline]
fn add_bits(counts: &mut [u64], bits: &BitVector) {
    for (c, &b) in counts.iter_mut().zip(bits.bits()) {
        *c += b as u64;
    }
}
