//! Failure propagation semantics: scenarios, assignments and the solver.

mod eval;
mod solve;
mod space;

pub use eval::{eval_expr, eval_guard, EvalError, PortEnv};
pub use solve::{solution_count_is_one, solve, Solver, Uniqueness};
pub use space::ScenarioSpace;

use std::cmp::Ordering;

use crate::model::{FunctionId, Model, PortId};
use crate::{Status, ValueId};

/// Status of every function plus a value for every free input port.
///
/// Both vectors are indexed by declaration order (`FunctionId`, and position
/// in [`Model::free_inputs`]). The derived ordering is the canonical
/// scenario order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Scenario {
    pub statuses: Vec<Status>,
    pub free_values: Vec<ValueId>,
}

impl Scenario {
    pub fn nominal(model: &Model) -> Self {
        Scenario {
            statuses: vec![Status::Ok; model.functions().len()],
            free_values: vec![model.default_value(); model.free_inputs().len()],
        }
    }

    pub fn status(&self, f: FunctionId) -> Status {
        self.statuses[f.index()]
    }

    pub fn failures(&self) -> usize {
        crate::model::failures(&self.statuses)
    }

    /// Functions whose status is not OK, in declaration order.
    pub fn failed(&self) -> impl Iterator<Item = (FunctionId, Status)> + '_ {
        self.statuses
            .iter()
            .enumerate()
            .filter(|(_, s)| !s.is_ok())
            .map(|(i, s)| (FunctionId(i as u32), *s))
    }
}

/// Status and value of every port.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Assignment {
    pub status: Vec<Status>,
    pub value: Vec<ValueId>,
}

impl Assignment {
    pub fn status(&self, p: PortId) -> Status {
        self.status[p.index()]
    }

    pub fn value(&self, p: PortId) -> ValueId {
        self.value[p.index()]
    }

    /// Canonical comparison: ports visited in name order, comparing
    /// (status index, value index) at each.
    pub fn canonical_cmp(&self, other: &Assignment, name_order: &[PortId]) -> Ordering {
        for &p in name_order {
            let a = (self.status(p), self.value(p));
            let b = (other.status(p), other.value(p));
            match a.cmp(&b) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    }
}

impl PortEnv for Assignment {
    fn port_status(&self, p: PortId) -> Option<Status> {
        self.status.get(p.index()).copied()
    }

    fn port_value(&self, p: PortId) -> Option<ValueId> {
        self.value.get(p.index()).copied()
    }
}

/// Port ids sorted by port name.
pub fn ports_by_name(model: &Model) -> Vec<PortId> {
    let mut ids: Vec<PortId> = model.port_ids().collect();
    ids.sort_by(|a, b| model.port(*a).name.cmp(&model.port(*b).name));
    ids
}
