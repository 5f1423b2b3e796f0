//! Multidimensional frequency estimation under local differential privacy.
//!
//! Frequency oracles (GRR, OUE), the random-sampling-plus-fake-data
//! solutions built on them, the Spl and Smp baselines, an exact channel
//! auditor and dataset ingestion. Solutions are looked up by name through
//! [`solution::get`].

pub mod audit;
pub mod baselines;
pub mod data;
pub mod error;
pub mod frequency;
pub mod oracles;
pub mod random;
pub mod report;
pub mod rsfd;
pub mod schema;
pub mod solution;

pub use error::{Error, Result};
pub use frequency::{FrequencyTable, PostProcess};
pub use random::{RandomSource, StreamRng};
pub use report::{AttributeReport, BitVector, ReportCounts, ReportTuple};
pub use schema::{AttributeSchema, PrivacyBudget, RecordTuple};
pub use solution::{Protocol, Solution};
