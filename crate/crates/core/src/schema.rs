//! Collection domain: attribute schema, user records and the privacy budget.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The `d` attributes of a collection and their domain sizes.
///
/// Values of attribute `j` are dense codes in `[0, k_j)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttributeSchema {
    names: Vec<String>,
    cardinalities: Vec<usize>,
}

impl AttributeSchema {
    /// Builds a validated schema.
    pub fn new(names: Vec<String>, cardinalities: Vec<usize>) -> Result<Self> {
        let schema = Self {
            names,
            cardinalities,
        };
        validate_schema(&schema)?;
        Ok(schema)
    }

    /// Schema with generated names `a0, a1, ...`.
    pub fn from_cardinalities(cardinalities: &[usize]) -> Result<Self> {
        let names = (0..cardinalities.len()).map(|j| format!("a{j}")).collect();
        Self::new(names, cardinalities.to_vec())
    }

    /// Builds a schema without checking invariants; pair with [`validate_schema`].
    pub fn new_unchecked(names: Vec<String>, cardinalities: Vec<usize>) -> Self {
        Self {
            names,
            cardinalities,
        }
    }

    pub fn d(&self) -> usize {
        self.cardinalities.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn cardinalities(&self) -> &[usize] {
        &self.cardinalities
    }

    pub fn k(&self, attribute: usize) -> usize {
        self.cardinalities[attribute]
    }

    /// Number of distinct records, saturating at `u128::MAX`.
    pub fn domain_size(&self) -> u128 {
        self.cardinalities
            .iter()
            .fold(1u128, |acc, &k| acc.saturating_mul(k as u128))
    }

    /// Checks that `record` has one in-range value per attribute.
    pub fn check_record(&self, record: &RecordTuple) -> Result<()> {
        if record.values().len() != self.d() {
            return Err(Error::RecordLength {
                expected: self.d(),
                got: record.values().len(),
            });
        }
        for (j, (&v, &k)) in record.values().iter().zip(&self.cardinalities).enumerate() {
            if v as usize >= k {
                return Err(Error::ValueOutOfRange {
                    attribute: j,
                    value: v,
                    k,
                });
            }
        }
        Ok(())
    }
}

/// Returns `Ok(())` iff the schema is non-empty, names are unique and
/// every attribute has at least two values. Reports the first violation.
pub fn validate_schema(schema: &AttributeSchema) -> Result<()> {
    if schema.cardinalities.is_empty() {
        return Err(Error::EmptySchema);
    }
    if schema.names.len() != schema.cardinalities.len() {
        return Err(Error::SchemaShape {
            names: schema.names.len(),
            cardinalities: schema.cardinalities.len(),
        });
    }
    for (name, &k) in schema.names.iter().zip(&schema.cardinalities) {
        if k < 2 {
            return Err(Error::CardinalityTooSmall {
                name: name.clone(),
                k,
            });
        }
    }
    let mut seen = HashSet::with_capacity(schema.names.len());
    for name in &schema.names {
        if !seen.insert(name.as_str()) {
            return Err(Error::DuplicateName(name.clone()));
        }
    }
    Ok(())
}

/// One user's private tuple `(v_1, ..., v_d)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RecordTuple(Vec<u32>);

impl RecordTuple {
    pub fn new(values: Vec<u32>) -> Self {
        Self(values)
    }

    pub fn values(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, attribute: usize) -> u32 {
        self.0[attribute]
    }
}

impl From<Vec<u32>> for RecordTuple {
    fn from(values: Vec<u32>) -> Self {
        Self(values)
    }
}

/// A privacy budget in nats.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct PrivacyBudget(f64);

impl PrivacyBudget {
    pub fn new(epsilon: f64) -> Result<Self> {
        if epsilon.is_finite() && epsilon > 0.0 {
            Ok(Self(epsilon))
        } else {
            Err(Error::InvalidBudget(epsilon))
        }
    }

    pub fn epsilon(self) -> f64 {
        self.0
    }

    /// `e^ε`.
    pub fn exp(self) -> f64 {
        self.0.exp()
    }
}
