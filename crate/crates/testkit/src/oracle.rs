//! Brute-force reference implementations.
//!
//! The oracles enumerate every status and value for every port and keep
//! the combinations that satisfy the flow and transfer equations. They are
//! exponential in the number of ports and meant for models of at most
//! eight ports.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::ops::Range;

use failprop::checker::{AssertionKind, OthersOk, Outcome, PortAtom, ScenarioConstraint};
use failprop::model::{CmpOp, Direction, Field, FunctionId, Guard, Literal, PortId, Term, TransferExpr};
use failprop::semantics::{Assignment, Scenario};
use failprop::{Model, Status, ValueId};

fn cmp(op: CmpOp, equal: bool) -> bool {
    match op {
        CmpOp::Eq => equal,
        CmpOp::Ne => !equal,
    }
}

fn term(t: Term, own: Status, a: &Assignment) -> Literal {
    match t {
        Term::OwnStatus => Literal::Status(own),
        Term::PortStatus(p) => Literal::Status(a.status[p.index()]),
        Term::PortValue(p) => Literal::Value(a.value[p.index()]),
        Term::Status(s) => Literal::Status(s),
        Term::Value(v) => Literal::Value(v),
    }
}

fn guard(g: &Guard<Term>, own: Status, a: &Assignment) -> bool {
    match g {
        Guard::Cmp(l, op, r) => cmp(*op, term(*l, own, a) == term(*r, own, a)),
        Guard::And(gs) => gs.iter().all(|g| guard(g, own, a)),
        Guard::Or(gs) => gs.iter().any(|g| guard(g, own, a)),
        Guard::Not(g) => !guard(g, own, a),
    }
}

fn eval(e: &TransferExpr, own: Status, a: &Assignment) -> Literal {
    for b in &e.branches {
        if guard(&b.guard, own, a) {
            return term(b.result, own, a);
        }
    }
    term(e.otherwise, own, a)
}

fn atom_holds(atom: &PortAtom, a: &Assignment) -> bool {
    let p = atom.port.index();
    match (atom.field, atom.rhs) {
        (Field::Status, Literal::Status(s)) => cmp(atom.op, a.status[p] == s),
        (Field::Value, Literal::Value(v)) => cmp(atom.op, a.value[p] == v),
        _ => panic!("ill-sorted atom"),
    }
}

/// Input equations only: flows, and the fixed status and value of inputs
/// without an incoming flow. Free values are read off the assignment.
fn inputs_consistent(model: &Model, a: &Assignment) -> bool {
    model
        .port_ids()
        .all(|p| model.port(p).direction != Direction::Input || input_holds(model, p, a))
}

/// Whether every output of `f` matches its transfers under status `own`.
fn outputs_consistent(model: &Model, f: FunctionId, own: Status, a: &Assignment) -> bool {
    let decl = model.function(f);
    decl.transfers.iter().all(|t| {
        let p = t.port.index();
        let status_ok = eval(&t.status, own, a) == Literal::Status(a.status[p]);
        let value_ok = match &t.value {
            Some(e) => eval(e, own, a) == Literal::Value(a.value[p]),
            None => a.value[p] == model.default_value(),
        };
        status_ok && value_ok
    })
}

fn free_values_of(model: &Model, a: &Assignment) -> Vec<ValueId> {
    model.free_inputs().iter().map(|p| a.value[p.index()]).collect()
}

/// Checks that `a` is a consistent assignment for `scenario`. The error
/// names the first offending port.
pub fn validate_assignment(model: &Model, scenario: &Scenario, a: &Assignment) -> Result<(), String> {
    let n = model.ports().len();
    if a.status.len() != n || a.value.len() != n {
        return Err("assignment has the wrong number of ports".into());
    }
    if a.value.iter().any(|v| v.index() >= model.value_count()) {
        return Err("value out of domain".into());
    }
    if free_values_of(model, a) != scenario.free_values {
        return Err("free input value differs from scenario".into());
    }
    if !inputs_consistent(model, a) {
        let bad = model
            .port_ids()
            .find(|&p| model.port(p).direction == Direction::Input && !input_holds(model, p, a))
            .map(|p| model.port(p).name.clone())
            .unwrap_or_default();
        return Err(format!("input `{bad}` is inconsistent"));
    }
    for f in model.function_ids() {
        if !outputs_consistent(model, f, scenario.statuses[f.index()], a) {
            return Err(format!("outputs of `{}` disagree with their transfers", model.function(f).name));
        }
    }
    Ok(())
}

/// Whether input `p` satisfies its equation in `a`.
fn input_holds(model: &Model, p: PortId, a: &Assignment) -> bool {
    let i = p.index();
    match model.flows().iter().find(|f| f.target == p) {
        Some(f) => a.status[i] == a.status[f.source.index()] && a.value[i] == a.value[f.source.index()],
        None if model.port(p).free => a.status[i] == Status::Ok,
        None => a.status[i] == Status::Ok && a.value[i] == model.default_value(),
    }
}

/// Every port assignment whose input equations hold, and, when a scenario
/// is given, whose output equations hold under it too.
///
/// Walks the full status x value space port by port, abandoning a branch
/// as soon as an equation whose ports are all assigned fails.
fn consistent(model: &Model, scenario: Option<&Scenario>) -> Vec<Assignment> {
    let n = model.ports().len();
    // Equations that can be decided once port `i` is assigned.
    let mut ready: Vec<Vec<PortId>> = vec![Vec::new(); n];
    for p in model.port_ids() {
        let at = match model.port(p).direction {
            Direction::Input => match model.flows().iter().find(|f| f.target == p) {
                Some(f) => p.index().max(f.source.index()),
                None => p.index(),
            },
            Direction::Output if scenario.is_some() => {
                let t = model.transfer(p).expect("output has a transfer");
                let mut reads = t.status.referenced_ports();
                if let Some(v) = &t.value {
                    reads.extend(v.referenced_ports());
                }
                reads.into_iter().map(PortId::index).fold(p.index(), usize::max)
            }
            Direction::Output => continue,
        };
        ready[at].push(p);
    }
    let mut out = Vec::new();
    let mut a = Assignment {
        status: vec![Status::Ok; n],
        value: vec![ValueId(0); n],
    };
    walk(model, scenario, &ready, 0, &mut a, &mut out);
    out
}

fn port_holds(model: &Model, scenario: Option<&Scenario>, p: PortId, a: &Assignment) -> bool {
    match (model.port(p).direction, scenario) {
        (Direction::Input, _) => input_holds(model, p, a),
        (Direction::Output, Some(s)) => {
            let owner = model.port(p).owner;
            let t = model.transfer(p).expect("output has a transfer");
            let own = s.statuses[owner.index()];
            eval(&t.status, own, a) == Literal::Status(a.status[p.index()])
                && match &t.value {
                    Some(e) => eval(e, own, a) == Literal::Value(a.value[p.index()]),
                    None => a.value[p.index()] == model.default_value(),
                }
        }
        (Direction::Output, None) => true,
    }
}

fn walk(
    model: &Model,
    scenario: Option<&Scenario>,
    ready: &[Vec<PortId>],
    i: usize,
    a: &mut Assignment,
    out: &mut Vec<Assignment>,
) {
    if i == ready.len() {
        out.push(a.clone());
        return;
    }
    for s in Status::ALL {
        for v in 0..model.value_count() {
            a.status[i] = s;
            a.value[i] = ValueId(v as u16);
            if ready[i].iter().all(|&p| port_holds(model, scenario, p, a)) {
                walk(model, scenario, ready, i + 1, a, out);
            }
        }
    }
}

fn name_order(model: &Model) -> Vec<PortId> {
    let mut ids: Vec<PortId> = model.port_ids().collect();
    ids.sort_by(|a, b| model.port(*a).name.cmp(&model.port(*b).name));
    ids
}

fn canonical(model: &Model) -> impl Fn(&Assignment, &Assignment) -> Ordering {
    let order = name_order(model);
    move |x, y| {
        order
            .iter()
            .map(|p| (x.status[p.index()], x.value[p.index()]).cmp(&(y.status[p.index()], y.value[p.index()])))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    }
}

/// All consistent assignments for `scenario`, canonically ordered.
pub fn brute_force_solve(model: &Model, scenario: &Scenario) -> Vec<Assignment> {
    let mut out: Vec<Assignment> = consistent(model, Some(scenario))
        .into_iter()
        .filter(|a| free_values_of(model, a) == scenario.free_values)
        .filter(|a| {
            model
                .function_ids()
                .all(|f| outputs_consistent(model, f, scenario.statuses[f.index()], a))
        })
        .collect();
    out.sort_by(canonical(model));
    out
}

/// Every (scenario, assignment) pair of the unconstrained space, ordered by
/// scenario and then canonically by assignment.
pub fn brute_force_pairs(model: &Model) -> Vec<(Scenario, Assignment)> {
    let mut out = Vec::new();
    for a in consistent(model, None) {
        let allowed: Vec<Vec<Status>> = model
            .function_ids()
            .map(|f| {
                Status::ALL
                    .into_iter()
                    .filter(|&s| outputs_consistent(model, f, s, &a))
                    .collect()
            })
            .collect();
        let free_values = free_values_of(model, &a);
        let mut statuses = vec![Vec::new()];
        for options in &allowed {
            statuses = statuses
                .into_iter()
                .flat_map(|prefix: Vec<Status>| {
                    options.iter().map(move |s| {
                        let mut next = prefix.clone();
                        next.push(*s);
                        next
                    })
                })
                .collect();
        }
        for s in statuses {
            out.push((
                Scenario {
                    statuses: s,
                    free_values: free_values.clone(),
                },
                a.clone(),
            ));
        }
    }
    let by_assignment = canonical(model);
    out.sort_by(|x, y| x.0.cmp(&y.0).then_with(|| by_assignment(&x.1, &y.1)));
    out
}

fn hypothesis_holds(model: &Model, h: &ScenarioConstraint, s: &Scenario, a: &Assignment) -> bool {
    let atoms_ok = h
        .functions
        .iter()
        .all(|fa| cmp(fa.op, s.statuses[fa.function.index()] == fa.status));
    let others_ok = match &h.others {
        OthersOk::Unconstrained => true,
        OthersOk::All => s.statuses.iter().all(|st| *st == Status::Ok),
        OthersOk::Except(except) => model.function_ids().all(|f| {
            h.functions.iter().any(|fa| fa.function == f)
                || except.contains(&f)
                || s.statuses[f.index()] == Status::Ok
        }),
    };
    atoms_ok && others_ok && h.ports.iter().all(|p| atom_holds(p, a))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleVerdict {
    pub outcome: Outcome,
    pub pairs_matching: u64,
    /// Every counterexample with the index of its first violated conjunct.
    pub counterexamples: Vec<(Scenario, Assignment, usize)>,
}

/// The full scenario x assignment space of one model, enumerated once.
pub struct Oracle<'m> {
    model: &'m Model,
    pairs: Vec<(Scenario, Assignment)>,
    by_scenario: HashMap<Scenario, Range<usize>>,
}

impl<'m> Oracle<'m> {
    pub fn new(model: &'m Model) -> Self {
        let pairs = brute_force_pairs(model);
        let mut by_scenario: HashMap<Scenario, Range<usize>> = HashMap::new();
        for (i, (s, _)) in pairs.iter().enumerate() {
            by_scenario.entry(s.clone()).or_insert(i..i).end = i + 1;
        }
        Oracle {
            model,
            pairs,
            by_scenario,
        }
    }

    pub fn pairs(&self) -> &[(Scenario, Assignment)] {
        &self.pairs
    }

    /// Consistent assignments of `scenario`, canonically ordered.
    pub fn solve(&self, scenario: &Scenario) -> Vec<Assignment> {
        self.by_scenario
            .get(scenario)
            .map(|r| self.pairs[r.clone()].iter().map(|(_, a)| a.clone()).collect())
            .unwrap_or_default()
    }

    /// Verdict of the named assertion over the entire unconstrained space.
    pub fn check(&self, name: &str) -> OracleVerdict {
        let model = self.model;
        let assertion = model.assertion(name).expect("assertion exists");
        let (hyp, concl) = match &assertion.kind {
            AssertionKind::Structure => {
                let ok = model.validate_structure().is_empty();
                return OracleVerdict {
                    outcome: if ok { Outcome::Holds } else { Outcome::Fails },
                    pairs_matching: 0,
                    counterexamples: Vec::new(),
                };
            }
            AssertionKind::Implication { hypothesis, conclusion } => (hypothesis, conclusion),
        };
        let mut pairs_matching = 0;
        let mut counterexamples = Vec::new();
        for (s, a) in &self.pairs {
            if !hypothesis_holds(model, hyp, s, a) {
                continue;
            }
            pairs_matching += 1;
            if let Some(i) = concl.iter().position(|atom| !atom_holds(atom, a)) {
                counterexamples.push((s.clone(), a.clone(), i));
            }
        }
        let outcome = if pairs_matching == 0 {
            Outcome::Vacuous
        } else if counterexamples.is_empty() {
            Outcome::Holds
        } else {
            Outcome::Fails
        };
        OracleVerdict {
            outcome,
            pairs_matching,
            counterexamples,
        }
    }

    /// Minimal cut sets of order at most `max_order`. See [`brute_force_cutsets`].
    pub fn cutsets(&self, condition: &[PortAtom], max_order: usize) -> Vec<Vec<(FunctionId, Status)>> {
        cutsets_with(self.model, condition, max_order, |s| self.solve(s))
    }
}

/// Verdict of the named assertion over the entire unconstrained space.
pub fn brute_force_check(model: &Model, name: &str) -> OracleVerdict {
    Oracle::new(model).check(name)
}

fn violates_everywhere(
    model: &Model,
    condition: &[PortAtom],
    failures: &[(FunctionId, Status)],
    solve: &impl Fn(&Scenario) -> Vec<Assignment>,
) -> bool {
    let mut statuses = vec![Status::Ok; model.functions().len()];
    for &(f, s) in failures {
        statuses[f.index()] = s;
    }
    let nv = model.value_count();
    let k = model.free_inputs().len();
    (0..nv.pow(k as u32)).all(|code| {
        let mut c = code;
        let mut free_values = vec![ValueId(0); k];
        for slot in free_values.iter_mut().rev() {
            *slot = ValueId((c % nv) as u16);
            c /= nv;
        }
        let scenario = Scenario {
            statuses: statuses.clone(),
            free_values,
        };
        solve(&scenario)
            .iter()
            .any(|a| condition.iter().any(|atom| !atom_holds(atom, a)))
    })
}

fn cutsets_with(
    model: &Model,
    condition: &[PortAtom],
    max_order: usize,
    solve: impl Fn(&Scenario) -> Vec<Assignment>,
) -> Vec<Vec<(FunctionId, Status)>> {
    let nf = model.functions().len();
    let mut violating: Vec<Vec<(FunctionId, Status)>> = Vec::new();
    for code in 0..3usize.pow(nf as u32) {
        let mut c = code;
        let mut set = Vec::new();
        for f in 0..nf {
            let s = Status::ALL[c % 3];
            c /= 3;
            if s != Status::Ok {
                set.push((FunctionId(f as u32), s));
            }
        }
        if set.len() <= max_order && violates_everywhere(model, condition, &set, &solve) {
            violating.push(set);
        }
    }
    let mut minimal: Vec<_> = violating
        .iter()
        .filter(|s| !s.is_empty())
        .filter(|s| {
            !violating
                .iter()
                .any(|t| t.len() < s.len() && t.iter().all(|x| s.contains(x)))
        })
        .cloned()
        .collect();
    minimal.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    minimal
}

/// Minimal cut sets of order at most `max_order`: failure sets that violate
/// the condition under every free-input valuation and have no proper subset
/// doing the same. Sorted by order, then lexicographically. The empty set
/// counts as a subset but is never listed itself.
pub fn brute_force_cutsets(model: &Model, condition: &[PortAtom], max_order: usize) -> Vec<Vec<(FunctionId, Status)>> {
    cutsets_with(model, condition, max_order, |s| brute_force_solve(model, s))
}

/// Re-checks a reported cut set: it must violate `condition` under every
/// free-input valuation and no proper subset may do the same.
pub fn check_minimal(model: &Model, condition: &[PortAtom], cut: &[(FunctionId, Status)]) -> Result<(), String> {
    let solve = |s: &Scenario| brute_force_solve(model, s);
    if !violates_everywhere(model, condition, cut, &solve) {
        return Err(format!("{cut:?} does not violate the condition everywhere"));
    }
    for mask in 0..(1u32 << cut.len()) - 1 {
        let subset: Vec<_> = cut
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, f)| *f)
            .collect();
        if violates_everywhere(model, condition, &subset, &solve) {
            return Err(format!("subset {subset:?} of {cut:?} already violates"));
        }
    }
    Ok(())
}
