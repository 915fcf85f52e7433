use std::ops::ControlFlow;

use crate::model::{Field, Literal, Model, OthersOk, ScenarioConstraint};
use crate::semantics::Scenario;
use crate::{Status, ValueId};

/// Cartesian space of scenarios, one domain per function and per free input.
///
/// Enumeration order is the canonical scenario order: function statuses in
/// declaration order (most significant first), then free values, each
/// domain ascending. An optional bound caps the number of non-OK statuses
/// among functions whose domain has more than one member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioSpace {
    function_domains: Vec<Vec<Status>>,
    free_domains: Vec<Vec<ValueId>>,
    max_failures: Option<usize>,
}

impl ScenarioSpace {
    /// Every scenario of the model.
    pub fn full(model: &Model) -> Self {
        ScenarioSpace {
            function_domains: vec![Status::ALL.to_vec(); model.functions().len()],
            free_domains: vec![all_values(model); model.free_inputs().len()],
            max_failures: None,
        }
    }

    /// Scenarios allowed by the function atoms, the `others OK` clause and
    /// the free-input value atoms of `constraint`. Remaining port atoms are
    /// not applied here; they filter assignments.
    pub fn restricted(model: &Model, constraint: &ScenarioConstraint) -> Self {
        let mut space = ScenarioSpace::full(model);
        let mut mentioned = vec![false; model.functions().len()];
        for atom in &constraint.functions {
            mentioned[atom.function.index()] = true;
            space.function_domains[atom.function.index()].retain(|&s| atom.op.apply(s, atom.status));
        }
        match &constraint.others {
            OthersOk::Unconstrained => {}
            OthersOk::All => {
                for d in &mut space.function_domains {
                    d.retain(|s| s.is_ok());
                }
            }
            OthersOk::Except(exempt) => {
                for (i, d) in space.function_domains.iter_mut().enumerate() {
                    if !mentioned[i] && !exempt.iter().any(|f| f.index() == i) {
                        d.retain(|s| s.is_ok());
                    }
                }
            }
        }
        for atom in &constraint.ports {
            if atom.field != Field::Value {
                continue;
            }
            if let (Some(i), Literal::Value(v)) = (model.free_input_index(atom.port), atom.rhs) {
                space.free_domains[i].retain(|&x| atom.op.apply(x, v));
            }
        }
        space
    }

    pub fn with_max_failures(mut self, bound: Option<usize>) -> Self {
        self.max_failures = bound;
        self
    }

    pub fn max_failures(&self) -> Option<usize> {
        self.max_failures
    }

    pub fn function_domains(&self) -> &[Vec<Status>] {
        &self.function_domains
    }

    pub fn free_domains(&self) -> &[Vec<ValueId>] {
        &self.free_domains
    }

    /// Product of all domain sizes, ignoring the failure bound. Saturates.
    pub fn unbounded_size(&self) -> u128 {
        self.function_domains
            .iter()
            .map(|d| d.len() as u128)
            .chain(self.free_domains.iter().map(|d| d.len() as u128))
            .fold(1u128, |acc, n| acc.saturating_mul(n))
    }

    /// Visits scenarios in canonical order, in chunks of at most `chunk` items.
    pub fn for_each_chunk<F>(&self, chunk: usize, mut f: F)
    where
        F: FnMut(&[Scenario]) -> ControlFlow<()>,
    {
        let chunk = chunk.max(1);
        let mut buf: Vec<Scenario> = Vec::with_capacity(chunk.min(4096));
        let mut current = Scenario {
            statuses: vec![Status::Ok; self.function_domains.len()],
            free_values: vec![ValueId(0); self.free_domains.len()],
        };
        let flow = self.visit(0, 0, &mut current, &mut |s| {
            buf.push(s.clone());
            if buf.len() == chunk {
                let r = f(&buf);
                buf.clear();
                r
            } else {
                ControlFlow::Continue(())
            }
        });
        if flow.is_continue() && !buf.is_empty() {
            let _ = f(&buf);
        }
    }

    /// All scenarios, in canonical order.
    pub fn collect(&self) -> Vec<Scenario> {
        let mut out = Vec::new();
        self.for_each_chunk(4096, |c| {
            out.extend_from_slice(c);
            ControlFlow::Continue(())
        });
        out
    }

    fn visit(
        &self,
        depth: usize,
        failures: usize,
        current: &mut Scenario,
        emit: &mut dyn FnMut(&Scenario) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        let nf = self.function_domains.len();
        if depth < nf {
            let domain = &self.function_domains[depth];
            // Failures fixed by the constraint do not count against the bound.
            let swept = domain.len() > 1;
            for &s in domain {
                let f = failures + usize::from(swept && !s.is_ok());
                if self.max_failures.is_some_and(|k| f > k) {
                    continue;
                }
                current.statuses[depth] = s;
                self.visit(depth + 1, f, current, emit)?;
            }
            ControlFlow::Continue(())
        } else if depth < nf + self.free_domains.len() {
            for &v in &self.free_domains[depth - nf] {
                current.free_values[depth - nf] = v;
                self.visit(depth + 1, failures, current, emit)?;
            }
            ControlFlow::Continue(())
        } else {
            emit(current)
        }
    }
}

fn all_values(model: &Model) -> Vec<ValueId> {
    (0..model.value_count()).map(|i| ValueId(i as u16)).collect()
}
