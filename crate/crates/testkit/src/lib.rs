//! Test support: random model generation, brute-force oracles and an
//! independent consistency validator.
//!
//! Nothing here shares code with the solver or the checker beyond the
//! resolved `Model` data structures themselves.

pub mod gen;
pub mod oracle;
pub mod toys;

pub use gen::{random_model, random_model_with, GenConfig};
pub use oracle::{
    brute_force_check, brute_force_cutsets, check_minimal, brute_force_pairs, brute_force_solve, validate_assignment, Oracle,
    OracleVerdict,
};
pub use toys::series_chain;
