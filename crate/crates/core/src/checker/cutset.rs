use crate::checker::{first_violation, CheckError, CheckOptions};
use crate::model::{FunctionId, Model, PortAtom};
use crate::par::Executor;
use crate::semantics::{Scenario, Solver};
use crate::{Status, ValueId};

/// A minimal set of function failures that violates a condition for every
/// free-input valuation, with all other functions OK.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CutSet {
    /// Sorted by function id; statuses are never OK.
    pub failures: Vec<(FunctionId, Status)>,
}

impl CutSet {
    pub fn order(&self) -> usize {
        self.failures.len()
    }

    /// True if every failure of `self` also appears in `other`.
    pub fn is_subset_of(&self, other: &[(FunctionId, Status)]) -> bool {
        self.failures.iter().all(|f| other.contains(f))
    }
}

/// A failure set that violates the condition for some, but not all,
/// free-input valuations, including at least one valuation under which the
/// nominal scenario satisfies it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionalFailure {
    pub failures: Vec<(FunctionId, Status)>,
    /// Free-input valuations (ordered as [`Model::free_inputs`]) under which
    /// the condition is violated.
    pub violating: Vec<Vec<ValueId>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutSetReport {
    pub condition: Vec<PortAtom>,
    pub max_order: usize,
    /// Sorted by order, then by (function declaration order, status).
    pub cut_sets: Vec<CutSet>,
    /// Minimal failure sets whose effect depends on free inputs.
    pub conditional: Vec<ConditionalFailure>,
    /// Free-input valuations under which the condition fails with every
    /// function OK.
    pub nominal_violations: Vec<Vec<ValueId>>,
    /// The condition fails with every function OK under every valuation.
    /// The empty set is then the only minimal cut set and nothing else is
    /// reported.
    pub violated_nominally: bool,
    pub candidates_examined: u64,
}

impl CutSetReport {
    pub fn of_order(&self, order: usize) -> impl Iterator<Item = &CutSet> {
        self.cut_sets.iter().filter(move |c| c.order() == order)
    }

}

fn valuations(model: &Model) -> Vec<Vec<ValueId>> {
    let mut out = vec![Vec::new()];
    for _ in model.free_inputs() {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..model.value_count()).map(move |v| {
                    let mut next = prefix.clone();
                    next.push(ValueId(v as u16));
                    next
                })
            })
            .collect();
    }
    out
}

/// Lexicographic k-combinations of `0..n`.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(idx.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] < n - k + i {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn candidates(model: &Model, order: usize) -> Vec<Vec<(FunctionId, Status)>> {
    const FAILED: [Status; 2] = [Status::Err, Status::Lost];
    let mut out = Vec::new();
    for combo in combinations(model.functions().len(), order) {
        for code in 0..(1usize << order) {
            out.push(
                combo
                    .iter()
                    .enumerate()
                    .map(|(i, &f)| (FunctionId(f as u32), FAILED[(code >> (order - 1 - i)) & 1]))
                    .collect(),
            );
        }
    }
    out
}

/// Minimal cut sets of order at most `max_order` for `condition`.
///
/// A failure set is a cut set when, with every other function OK, each
/// free-input valuation admits at least one solution violating some
/// conjunct of the condition. Candidates containing a lower-order cut set
/// are skipped, so every returned set is minimal. If the condition already
/// fails with no failure at all, no candidate is examined.
pub fn minimal_cutsets(
    model: &Model,
    condition: &[PortAtom],
    max_order: usize,
    opts: &CheckOptions,
) -> Result<CutSetReport, CheckError> {
    if max_order == 0 {
        return Err(CheckError::InvalidOrder);
    }
    let solver = Solver::new(model);
    let exec = Executor::new(opts.workers);
    let vals = valuations(model);
    let violating = |failures: &[(FunctionId, Status)]| -> Vec<Vec<ValueId>> {
        let mut scenario = Scenario::nominal(model);
        for &(f, s) in failures {
            scenario.statuses[f.index()] = s;
        }
        vals.iter()
            .filter(|v| {
                scenario.free_values.clone_from(v);
                solver
                    .solve(&scenario)
                    .iter()
                    .any(|a| first_violation(condition, a).is_some())
            })
            .cloned()
            .collect()
    };
    let nominal_violations = violating(&[]);
    let mut report = CutSetReport {
        condition: condition.to_vec(),
        max_order,
        cut_sets: Vec::new(),
        conditional: Vec::new(),
        violated_nominally: nominal_violations.len() == vals.len(),
        nominal_violations,
        candidates_examined: 0,
    };
    if report.violated_nominally {
        return Ok(report);
    }

    for order in 1..=max_order.min(model.functions().len()) {
        let pending: Vec<_> = candidates(model, order)
            .into_iter()
            .filter(|c| !report.cut_sets.iter().any(|cut| cut.is_subset_of(c)))
            .collect();
        let outcomes = exec.map(&pending, |failures| violating(failures));
        report.candidates_examined += pending.len() as u64;
        for (failures, violating) in pending.into_iter().zip(outcomes) {
            if violating.len() == vals.len() {
                report.cut_sets.push(CutSet { failures });
            } else if !violating.is_empty()
                && violating.iter().any(|v| !report.nominal_violations.contains(v))
                && !report
                    .conditional
                    .iter()
                    .any(|c| c.failures.iter().all(|f| failures.contains(f)))
            {
                report.conditional.push(ConditionalFailure { failures, violating });
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combinations_are_lexicographic() {
        assert_eq!(combinations(4, 2), vec![
            vec![0, 1],
            vec![0, 2],
            vec![0, 3],
            vec![1, 2],
            vec![1, 3],
            vec![2, 3]
        ]);
        assert_eq!(combinations(3, 3), vec![vec![0, 1, 2]]);
        assert!(combinations(2, 3).is_empty());
    }
}
