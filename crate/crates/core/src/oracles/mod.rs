//! Single-attribute frequency oracles: GRR, OUE and the adaptive choice between them.

mod estimate;
mod grr;
mod oue;

pub use estimate::{adp_choose, estimate_pure, var_grr, var_oue, CountVector, Mechanism};
pub(crate) use estimate::check_distinct;
pub use grr::{grr_params, grr_perturb, GrrParams};
pub use oue::{oue_encode, oue_perturb, ue_params, UeParams};
