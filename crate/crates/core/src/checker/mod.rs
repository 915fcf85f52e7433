//! Assertion checking, instance search and minimal cut sets.

mod cutset;

pub use cutset::{minimal_cutsets, ConditionalFailure, CutSet, CutSetReport};
pub use crate::model::{Assertion, AssertionKind, Condition, OthersOk, PortAtom, ScenarioConstraint};

use std::ops::ControlFlow;
use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

use crate::model::{Literal, Model};
use crate::par::Executor;
use crate::semantics::{Assignment, Scenario, ScenarioSpace, Solver};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOptions {
    /// Worker threads; 1 runs everything on the calling thread.
    pub workers: usize,
    /// Bound on non-OK statuses among functions the hypothesis leaves open.
    /// `None` is exhaustive.
    pub max_failures: Option<usize>,
    /// Counterexamples kept per verdict. The total found is always reported.
    pub counterexample_cap: usize,
    /// Scenarios handed to the executor per batch.
    pub chunk_size: usize,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            workers: 1,
            max_failures: Some(2),
            counterexample_cap: 10,
            chunk_size: 4096,
        }
    }
}

impl CheckOptions {
    pub fn exhaustive() -> Self {
        CheckOptions {
            max_failures: None,
            ..CheckOptions::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("no assertions")]
    NoAssertions,
    #[error("unknown assertion `{0}`")]
    UnknownAssertion(String),
    #[error("assertion `{0}` is not bound to this model")]
    Unbound(String),
    #[error("max_order must be at least 1")]
    InvalidOrder,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Outcome {
    Holds,
    Fails,
    Vacuous,
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Outcome::Holds => "Holds",
            Outcome::Fails => "Fails",
            Outcome::Vacuous => "Vacuous",
        })
    }
}

/// A scenario and solution satisfying the hypothesis but not the conclusion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub scenario: Scenario,
    pub assignment: Assignment,
    /// Index of the first violated conjunct of the conclusion.
    pub violated: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Statistics {
    /// Size of the hypothesis-restricted space before the failure bound.
    pub scenario_space: u128,
    pub scenarios_enumerated: u64,
    pub solutions_examined: u64,
    /// (scenario, assignment) pairs satisfying the whole hypothesis.
    pub pairs_matching: u64,
    pub counterexamples_found: u64,
    pub zero_solution_scenarios: u64,
    pub wall_time: Duration,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub assertion: String,
    pub outcome: Outcome,
    pub counterexamples: Vec<Counterexample>,
    pub statistics: Statistics,
    pub warnings: Vec<String>,
}

fn atoms_hold(atoms: &[PortAtom], a: &Assignment) -> bool {
    atoms.iter().all(|atom| atom.holds(a.status(atom.port), a.value(atom.port)))
}

/// Index of the first conjunct of `condition` that `a` violates.
pub fn first_violation(condition: &[PortAtom], a: &Assignment) -> Option<usize> {
    condition
        .iter()
        .position(|atom| !atom.holds(a.status(atom.port), a.value(atom.port)))
}

fn is_bound(model: &Model, assertion: &Assertion) -> bool {
    let AssertionKind::Implication {
        hypothesis,
        conclusion,
    } = &assertion.kind
    else {
        return true;
    };
    constraint_is_bound(model, hypothesis) && conclusion.iter().all(|a| atom_is_bound(model, a))
}

fn atom_is_bound(model: &Model, a: &PortAtom) -> bool {
    a.port.index() < model.ports().len()
        && match a.rhs {
            Literal::Value(v) => v.index() < model.value_count(),
            Literal::Status(_) => true,
        }
}

fn constraint_is_bound(model: &Model, c: &ScenarioConstraint) -> bool {
    let nf = model.functions().len();
    c.functions.iter().all(|f| f.function.index() < nf)
        && c.ports.iter().all(|a| atom_is_bound(model, a))
        && match &c.others {
            OthersOk::Except(ids) => ids.iter().all(|f| f.index() < nf),
            _ => true,
        }
}

#[derive(Default)]
struct ScenarioResult {
    solutions: u64,
    matching: u64,
    violations: Vec<(Assignment, usize)>,
    violations_total: u64,
}

/// Checks one assertion by sweeping the hypothesis-restricted scenario space.
///
/// Every solution of every enumerated scenario that satisfies the remaining
/// hypothesis atoms is tested against the conclusion. `Vacuous` means no
/// such (scenario, assignment) pair exists.
pub fn check(model: &Model, assertion: &Assertion, opts: &CheckOptions) -> Result<Verdict, CheckError> {
    if !is_bound(model, assertion) {
        return Err(CheckError::Unbound(assertion.name.clone()));
    }
    let exec = Executor::new(opts.workers);
    Ok(check_with(model, assertion, opts, &exec))
}

fn check_with(model: &Model, assertion: &Assertion, opts: &CheckOptions, exec: &Executor) -> Verdict {
    let start = Instant::now();
    let (hypothesis, conclusion) = match &assertion.kind {
        AssertionKind::Structure => {
            let violations = model.validate_structure();
            let outcome = if violations.is_empty() {
                Outcome::Holds
            } else {
                Outcome::Fails
            };
            return Verdict {
                assertion: assertion.name.clone(),
                outcome,
                counterexamples: Vec::new(),
                statistics: Statistics {
                    wall_time: start.elapsed(),
                    ..Statistics::default()
                },
                warnings: violations.iter().map(|v| v.to_string()).collect(),
            };
        }
        AssertionKind::Implication {
            hypothesis,
            conclusion,
        } => (hypothesis, conclusion),
    };

    let solver = Solver::new(model);
    let space = ScenarioSpace::restricted(model, hypothesis).with_max_failures(opts.max_failures);
    let cap = opts.counterexample_cap;
    let mut stats = Statistics {
        scenario_space: space.unbounded_size(),
        ..Statistics::default()
    };
    let mut counterexamples = Vec::new();

    space.for_each_chunk(opts.chunk_size, |chunk| {
        let results = exec.map(chunk, |scenario| {
            let mut r = ScenarioResult::default();
            for a in solver.solve(scenario) {
                r.solutions += 1;
                if !atoms_hold(&hypothesis.ports, &a) {
                    continue;
                }
                r.matching += 1;
                if let Some(i) = first_violation(conclusion, &a) {
                    r.violations_total += 1;
                    if r.violations.len() < cap {
                        r.violations.push((a, i));
                    }
                }
            }
            r
        });
        for (scenario, r) in chunk.iter().zip(results) {
            stats.scenarios_enumerated += 1;
            stats.solutions_examined += r.solutions;
            stats.pairs_matching += r.matching;
            stats.counterexamples_found += r.violations_total;
            if r.solutions == 0 {
                stats.zero_solution_scenarios += 1;
            }
            for (assignment, violated) in r.violations {
                if counterexamples.len() < cap {
                    counterexamples.push(Counterexample {
                        scenario: scenario.clone(),
                        assignment,
                        violated,
                    });
                }
            }
        }
        ControlFlow::Continue(())
    });

    let outcome = if stats.pairs_matching == 0 {
        Outcome::Vacuous
    } else if stats.counterexamples_found > 0 {
        Outcome::Fails
    } else {
        Outcome::Holds
    };
    let mut warnings = Vec::new();
    if outcome == Outcome::Vacuous {
        warnings.push("hypothesis admits no scenario/assignment pair".to_string());
    }
    if stats.zero_solution_scenarios > 0 {
        warnings.push(format!(
            "{} scenario(s) admit no consistent assignment",
            stats.zero_solution_scenarios
        ));
    }
    if (stats.scenarios_enumerated as u128) < stats.scenario_space {
        warnings.push(format!(
            "search bounded to {} open failure(s): {} of {} scenarios enumerated",
            opts.max_failures.unwrap_or(0),
            stats.scenarios_enumerated,
            stats.scenario_space
        ));
    }
    stats.wall_time = start.elapsed();
    Verdict {
        assertion: assertion.name.clone(),
        outcome,
        counterexamples,
        statistics: stats,
        warnings,
    }
}

/// One verdict per assertion of the model, in declaration order.
pub fn check_all(model: &Model, opts: &CheckOptions) -> Result<Vec<Verdict>, CheckError> {
    if model.assertions().is_empty() {
        return Err(CheckError::NoAssertions);
    }
    let exec = Executor::new(opts.workers);
    Ok(model
        .assertions()
        .iter()
        .map(|a| check_with(model, a, opts, &exec))
        .collect())
}

/// Checks the named assertions, in the order given.
pub fn check_named(model: &Model, names: &[String], opts: &CheckOptions) -> Result<Vec<Verdict>, CheckError> {
    let selected = names
        .iter()
        .map(|n| model.assertion(n).ok_or_else(|| CheckError::UnknownAssertion(n.clone())))
        .collect::<Result<Vec<_>, _>>()?;
    if selected.is_empty() {
        return check_all(model, opts);
    }
    let exec = Executor::new(opts.workers);
    Ok(selected
        .into_iter()
        .map(|a| check_with(model, a, opts, &exec))
        .collect())
}

/// A scenario together with one of its solutions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub scenario: Scenario,
    pub assignment: Assignment,
}

/// First (scenario, assignment) pair in canonical order satisfying `constraint`.
pub fn run_instance(model: &Model, constraint: &ScenarioConstraint, opts: &CheckOptions) -> Option<Instance> {
    let solver = Solver::new(model);
    let exec = Executor::new(opts.workers);
    let space = ScenarioSpace::restricted(model, constraint).with_max_failures(opts.max_failures);
    let mut found = None;
    space.for_each_chunk(opts.chunk_size, |chunk| {
        let hits = exec.map(chunk, |s| {
            solver
                .solve(s)
                .into_iter()
                .find(|a| atoms_hold(&constraint.ports, a))
        });
        for (s, hit) in chunk.iter().zip(hits) {
            if let Some(assignment) = hit {
                found = Some(Instance {
                    scenario: s.clone(),
                    assignment,
                });
                return ControlFlow::Break(());
            }
        }
        ControlFlow::Continue(())
    });
    found
}
