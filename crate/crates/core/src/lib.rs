//! Bounded exhaustive model checking of failure propagation in dataflow
//! architectures.
//!
//! An architecture is a set of functions exchanging data through ports and
//! flows. Every function and port carries a dysfunctional [`Status`]
//! (`OK`, `Err`, `Lost`) and a value from a small finite domain. Transfer
//! expressions say how each function maps its own status and its inputs to
//! its outputs. The checker enumerates failure scenarios, solves the
//! propagation constraints for each one, and tests assertions against every
//! consistent port assignment.
//!
//! ```
//! use failprop::{case_study, checker::{check_all, CheckOptions, Outcome}};
//!
//! let model = case_study::hardened_lpv_model();
//! let verdicts = check_all(&model, &CheckOptions::default()).unwrap();
//! assert!(verdicts.iter().all(|v| v.outcome == Outcome::Holds));
//! ```

pub mod case_study;
pub mod checker;
pub mod dsl;
pub mod model;
mod par;
pub mod report;
pub mod semantics;
mod span;
mod status;

pub use model::{build_model, Model, ModelDef};
pub use par::Executor;
pub use span::SourceSpan;
pub use status::{Status, ValueId};
