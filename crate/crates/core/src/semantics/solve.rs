use crate::model::{dependency_graph, Direction, Literal, Model, PortId};
use crate::par::Executor;
use crate::semantics::{eval_expr, ports_by_name, Assignment, PortEnv, Scenario, ScenarioSpace};
use crate::{Status, ValueId};

enum Step {
    /// Port outside any cycle: computed directly from known ports.
    Direct(PortId),
    /// Cyclic component: outputs are guessed jointly, inputs follow their flows.
    Cycle { outputs: Vec<PortId>, inputs: Vec<PortId> },
}

/// Solver for one model, with the evaluation plan computed once.
///
/// Components of the dependency graph are handled in topological order.
/// Acyclic ports are evaluated directly; for a cyclic component every joint
/// (status, value) candidate of its output ports is tried and kept only if
/// all of the component's transfers and flows agree with it.
pub struct Solver<'m> {
    model: &'m Model,
    plan: Vec<Step>,
    name_order: Vec<PortId>,
}

#[derive(Clone)]
struct Partial {
    status: Vec<Status>,
    value: Vec<ValueId>,
    known: Vec<bool>,
}

impl PortEnv for Partial {
    fn port_status(&self, p: PortId) -> Option<Status> {
        self.known[p.index()].then(|| self.status[p.index()])
    }

    fn port_value(&self, p: PortId) -> Option<ValueId> {
        self.known[p.index()].then(|| self.value[p.index()])
    }
}

impl Partial {
    fn set(&mut self, p: PortId, s: Status, v: ValueId) {
        self.status[p.index()] = s;
        self.value[p.index()] = v;
        self.known[p.index()] = true;
    }
}

impl<'m> Solver<'m> {
    pub fn new(model: &'m Model) -> Self {
        let graph = dependency_graph(model);
        let plan = (0..graph.components().len())
            .map(|c| {
                let members = &graph.components()[c];
                if graph.is_cyclic(c) {
                    let (outputs, inputs) = members
                        .iter()
                        .partition(|p| model.port(**p).direction == Direction::Output);
                    Step::Cycle { outputs, inputs }
                } else {
                    Step::Direct(members[0])
                }
            })
            .collect();
        Solver {
            model,
            plan,
            name_order: ports_by_name(model),
        }
    }

    pub fn model(&self) -> &'m Model {
        self.model
    }

    /// Port ids in name order, the key for canonical assignment ordering.
    pub fn name_order(&self) -> &[PortId] {
        &self.name_order
    }

    /// Every assignment consistent with flows and transfers under `scenario`,
    /// deduplicated and canonically ordered. Empty if a cyclic component has
    /// no consistent candidate.
    pub fn solve(&self, scenario: &Scenario) -> Vec<Assignment> {
        let n = self.model.ports().len();
        let mut frontier = vec![Partial {
            status: vec![Status::Ok; n],
            value: vec![self.model.default_value(); n],
            known: vec![false; n],
        }];
        for step in &self.plan {
            match step {
                Step::Direct(p) => {
                    for partial in &mut frontier {
                        let (s, v) = self.direct(*p, scenario, partial);
                        partial.set(*p, s, v);
                    }
                }
                Step::Cycle { outputs, inputs } => {
                    let mut next = Vec::new();
                    for partial in &frontier {
                        self.extend_cycle(outputs, inputs, scenario, partial, &mut next);
                    }
                    frontier = next;
                }
            }
            if frontier.is_empty() {
                break;
            }
        }
        let mut out: Vec<Assignment> = frontier
            .into_iter()
            .map(|p| Assignment {
                status: p.status,
                value: p.value,
            })
            .collect();
        out.sort_by(|a, b| a.canonical_cmp(b, &self.name_order));
        out.dedup();
        out
    }

    fn input_state(&self, p: PortId, scenario: &Scenario, env: &Partial) -> (Status, ValueId) {
        match self.model.incoming(p) {
            Some(src) => (
                env.port_status(src).expect("flow source evaluated first"),
                env.port_value(src).expect("flow source evaluated first"),
            ),
            None => {
                let value = match self.model.free_input_index(p) {
                    Some(i) => scenario.free_values[i],
                    None => self.model.default_value(),
                };
                (Status::Ok, value)
            }
        }
    }

    fn output_state(&self, p: PortId, scenario: &Scenario, env: &Partial) -> (Status, ValueId) {
        let own = scenario.status(self.model.port(p).owner);
        let t = self.model.transfer(p).expect("every output has a transfer");
        let status = match eval_expr(&t.status, own, env).expect("solver evaluation order") {
            Literal::Status(s) => s,
            Literal::Value(_) => unreachable!("status transfer is status-sorted"),
        };
        let value = match &t.value {
            None => self.model.default_value(),
            Some(e) => match eval_expr(e, own, env).expect("solver evaluation order") {
                Literal::Value(v) => v,
                Literal::Status(_) => unreachable!("value transfer is value-sorted"),
            },
        };
        (status, value)
    }

    fn direct(&self, p: PortId, scenario: &Scenario, env: &Partial) -> (Status, ValueId) {
        match self.model.port(p).direction {
            Direction::Input => self.input_state(p, scenario, env),
            Direction::Output => self.output_state(p, scenario, env),
        }
    }

    fn extend_cycle(
        &self,
        outputs: &[PortId],
        inputs: &[PortId],
        scenario: &Scenario,
        base: &Partial,
        out: &mut Vec<Partial>,
    ) {
        let values = self.model.value_count();
        let per_port = Status::ALL.len() * values;
        let total = per_port.pow(outputs.len() as u32);
        let mut cand = base.clone();
        for code in 0..total {
            let mut rest = code;
            for &p in outputs.iter().rev() {
                let digit = rest % per_port;
                rest /= per_port;
                cand.set(p, Status::ALL[digit / values], ValueId((digit % values) as u16));
            }
            for &p in inputs {
                let (s, v) = self.input_state(p, scenario, &cand);
                cand.set(p, s, v);
            }
            let consistent = outputs.iter().all(|&p| {
                self.output_state(p, scenario, &cand) == (cand.status[p.index()], cand.value[p.index()])
            });
            if consistent {
                out.push(cand.clone());
            }
        }
    }
}

/// Convenience wrapper building a [`Solver`] for a single call.
pub fn solve(model: &Model, scenario: &Scenario) -> Vec<Assignment> {
    Solver::new(model).solve(scenario)
}

/// Outcome of the solution-uniqueness diagnostic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Uniqueness {
    pub unique: bool,
    /// A scenario with zero or several solutions, with its solution count.
    pub witness: Option<(Scenario, usize)>,
    pub scenarios_checked: u64,
    /// True when the answer follows from the graph being acyclic.
    pub by_acyclicity: bool,
}

/// Whether every scenario yields exactly one assignment.
///
/// Acyclic models are unique by construction. Otherwise the scenario space
/// (optionally bounded to `max_failures` non-OK functions) is swept and the
/// first scenario in canonical order with 0 or ≥2 solutions is returned.
pub fn solution_count_is_one(model: &Model, max_failures: Option<usize>, exec: &Executor) -> Uniqueness {
    if dependency_graph(model).is_acyclic() {
        return Uniqueness {
            unique: true,
            witness: None,
            scenarios_checked: 0,
            by_acyclicity: true,
        };
    }
    let solver = Solver::new(model);
    let space = ScenarioSpace::full(model).with_max_failures(max_failures);
    let mut checked = 0u64;
    let mut witness = None;
    space.for_each_chunk(4096, |chunk| {
        let counts = exec.map(chunk, |s| solver.solve(s).len());
        for (s, c) in chunk.iter().zip(counts) {
            checked += 1;
            if c != 1 {
                witness = Some((s.clone(), c));
                return std::ops::ControlFlow::Break(());
            }
        }
        std::ops::ControlFlow::Continue(())
    });
    Uniqueness {
        unique: witness.is_none(),
        witness,
        scenarios_checked: checked,
        by_acyclicity: false,
    }
}
