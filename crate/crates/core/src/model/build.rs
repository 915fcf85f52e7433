use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use super::def::{
    AssertionBodyDef, AssertionDef, Ident, ModelDef, RawAtom, RawConstraint, RawLiteral,
};
use super::expr::{Field, RawTerm, Sort, Term, TransferExpr};
use super::{
    Assertion, AssertionKind, Direction, Flow, FunctionAtom, FunctionDecl, FunctionId, Literal,
    Model, NameRef, OthersOk, OutputTransfer, PortAtom, PortDecl, PortId, ScenarioConstraint,
};
use crate::{SourceSpan, ValueId};

/// Structural rule broken by a model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    DuplicateName,
    PortOwnership,
    DanglingReference,
    FlowSourceNotOutput,
    FlowTargetNotInput,
    InputMultipleFlows,
    FreeInputWithFlow,
    MissingStatusTransfer,
}

impl Rule {
    pub fn describe(self) -> &'static str {
        match self {
            Rule::DuplicateName => "duplicate name",
            Rule::PortOwnership => "port owned by two functions",
            Rule::DanglingReference => "flow references an undeclared port",
            Rule::FlowSourceNotOutput => "flow source must be an output port",
            Rule::FlowTargetNotInput => "flow target must be an input port",
            Rule::InputMultipleFlows => "input targeted by two flows",
            Rule::FreeInputWithFlow => "free input targeted by a flow",
            Rule::MissingStatusTransfer => "output port lacks a status transfer",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.describe())
    }
}

/// A broken structural rule, naming the offending element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub rule: Rule,
    pub element: String,
    pub span: Option<SourceSpan>,
}

impl Violation {
    pub fn new(rule: Rule, element: &str) -> Self {
        Violation {
            rule,
            element: element.to_string(),
            span: None,
        }
    }

    fn at(rule: Rule, ident: &Ident) -> Self {
        Violation {
            rule,
            element: ident.name.clone(),
            span: Some(ident.span.clone()),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(span) = &self.span {
            write!(f, "{span}: ")?;
        }
        write!(f, "{}: `{}`", self.rule, self.element)
    }
}

/// Name-resolution or typing error inside expressions and assertions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{span}: {message}")]
pub struct SemanticError {
    pub message: String,
    pub span: SourceSpan,
}

impl SemanticError {
    fn new(message: impl Into<String>, span: &SourceSpan) -> Self {
        SemanticError {
            message: message.into(),
            span: span.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error("{} structural violation(s)", .0.len())]
    Structure(Vec<Violation>),
    #[error("{}", .0.first().map(|e| e.to_string()).unwrap_or_default())]
    Semantic(Vec<SemanticError>),
}

struct PortInfo<'a> {
    ident: &'a Ident,
    direction: Direction,
    owner: usize,
    free: bool,
}

/// Structural violations of a raw definition.
///
/// Empty iff every port belongs to exactly one function, names are unique,
/// flows go from declared output ports to declared input ports, no input has
/// two incoming flows, free inputs have none, and every output has a status
/// transfer.
pub fn validate_structure(def: &ModelDef) -> Vec<Violation> {
    collect_structure(def).1
}

fn collect_structure(def: &ModelDef) -> (Vec<PortInfo<'_>>, Vec<Violation>) {
    let mut out = Vec::new();
    let mut ports: Vec<PortInfo<'_>> = Vec::new();
    let mut seen: HashMap<&str, (bool, usize)> = HashMap::new();

    for f in &def.functions {
        if seen.insert(f.name.as_str(), (true, usize::MAX)).is_some() {
            out.push(Violation::at(Rule::DuplicateName, &f.name));
        }
    }
    for (fi, f) in def.functions.iter().enumerate() {
        let declared = f
            .inputs
            .iter()
            .map(|i| (&i.name, Direction::Input, i.free))
            .chain(f.outputs.iter().map(|o| (o, Direction::Output, false)));
        for (ident, direction, free) in declared {
            match seen.get(ident.as_str()) {
                Some(&(false, owner)) if owner != fi => {
                    out.push(Violation::at(Rule::PortOwnership, ident));
                }
                Some(_) => out.push(Violation::at(Rule::DuplicateName, ident)),
                None => {
                    seen.insert(ident.as_str(), (false, fi));
                    ports.push(PortInfo {
                        ident,
                        direction,
                        owner: fi,
                        free,
                    });
                }
            }
        }
    }

    let index: HashMap<&str, usize> = ports
        .iter()
        .enumerate()
        .map(|(i, p)| (p.ident.as_str(), i))
        .collect();
    let mut targeted = vec![0usize; ports.len()];
    for fl in &def.flows {
        let src = index.get(fl.source.as_str());
        let dst = index.get(fl.target.as_str());
        match src {
            None => out.push(Violation::at(Rule::DanglingReference, &fl.source)),
            Some(&s) if ports[s].direction != Direction::Output => {
                out.push(Violation::at(Rule::FlowSourceNotOutput, &fl.source))
            }
            _ => {}
        }
        match dst {
            None => out.push(Violation::at(Rule::DanglingReference, &fl.target)),
            Some(&t) if ports[t].direction != Direction::Input => {
                out.push(Violation::at(Rule::FlowTargetNotInput, &fl.target))
            }
            Some(&t) => {
                targeted[t] += 1;
                if targeted[t] == 2 {
                    out.push(Violation::at(Rule::InputMultipleFlows, &fl.target));
                }
                if ports[t].free {
                    out.push(Violation::at(Rule::FreeInputWithFlow, &fl.target));
                }
            }
        }
    }

    for f in &def.functions {
        for o in &f.outputs {
            let has = f
                .transfers
                .iter()
                .any(|t| t.field == Field::Status && t.port == *o);
            if !has {
                out.push(Violation::at(Rule::MissingStatusTransfer, o));
            }
        }
    }
    (ports, out)
}

/// Resolves and validates a raw definition.
///
/// Structural violations are reported together; if there are none, names in
/// transfers and assertions are resolved and type-checked.
pub fn build_model(def: &ModelDef) -> Result<Model, BuildError> {
    let (infos, violations) = collect_structure(def);
    if !violations.is_empty() {
        return Err(BuildError::Structure(violations));
    }
    let mut errors = Vec::new();

    let mut values: Vec<String> = Vec::new();
    for v in &def.values {
        if values.contains(&v.name) {
            errors.push(SemanticError::new(format!("duplicate value `{}`", v.name), &v.span));
        } else {
            values.push(v.name.clone());
        }
    }
    if values.is_empty() {
        errors.push(SemanticError::new(
            "value domain must declare at least one member",
            &SourceSpan::synthetic(),
        ));
    }

    let mut names = HashMap::new();
    for (fi, f) in def.functions.iter().enumerate() {
        names.insert(f.name.name.clone(), NameRef::Function(FunctionId(fi as u32)));
    }
    let ports: Vec<PortDecl> = infos
        .iter()
        .map(|p| PortDecl {
            name: p.ident.name.clone(),
            direction: p.direction,
            owner: FunctionId(p.owner as u32),
            free: p.free,
        })
        .collect();
    for (pi, p) in ports.iter().enumerate() {
        names.insert(p.name.clone(), NameRef::Port(PortId(pi as u32)));
    }
    let port_id = |name: &str| match names.get(name) {
        Some(NameRef::Port(p)) => Some(*p),
        _ => None,
    };

    let mut flows: Vec<Flow> = def
        .flows
        .iter()
        .map(|fl| Flow {
            source: port_id(fl.source.as_str()).expect("checked"),
            target: port_id(fl.target.as_str()).expect("checked"),
        })
        .collect();
    flows.sort_by(|a, b| {
        (&ports[a.source.index()].name, &ports[a.target.index()].name)
            .cmp(&(&ports[b.source.index()].name, &ports[b.target.index()].name))
    });
    let mut incoming = vec![None; ports.len()];
    for fl in &flows {
        incoming[fl.target.index()] = Some(fl.source);
    }
    let free_inputs: Vec<PortId> = (0..ports.len())
        .filter(|&i| ports[i].free)
        .map(|i| PortId(i as u32))
        .collect();

    let scope = Scope {
        names: &names,
        ports: &ports,
        values: &values,
    };

    let mut functions = Vec::with_capacity(def.functions.len());
    let mut transfer_of = vec![None; ports.len()];
    for (fi, f) in def.functions.iter().enumerate() {
        let owner = FunctionId(fi as u32);
        let inputs: Vec<PortId> = f.inputs.iter().map(|i| port_id(i.name.as_str()).unwrap()).collect();
        let outputs: Vec<PortId> = f.outputs.iter().map(|o| port_id(o.as_str()).unwrap()).collect();
        let mut slots: Vec<(Option<TransferExpr>, Option<TransferExpr>)> = vec![(None, None); outputs.len()];
        for t in &f.transfers {
            let Some(slot) = f.outputs.iter().position(|o| *o == t.port) else {
                errors.push(SemanticError::new(
                    format!("transfer target `{}` is not an output of `{}`", t.port, f.name),
                    &t.port.span,
                ));
                continue;
            };
            let want = Sort::from(t.field);
            let resolved = t
                .expr
                .try_map(&mut |term| scope.resolve_term(term, owner, &f.name.name))
                .and_then(|chain| normalize_chain(chain, &t.port))
                .and_then(|chain| {
                    check_chain_sorts(&chain, want, &t.port)?;
                    Ok(chain)
                });
            let resolved = match resolved {
                Ok(c) => c,
                Err(e) => {
                    errors.push(e);
                    continue;
                }
            };
            let entry = match t.field {
                Field::Status => &mut slots[slot].0,
                Field::Value => &mut slots[slot].1,
            };
            if entry.is_some() {
                errors.push(SemanticError::new(
                    format!("duplicate {} transfer for `{}`", t.field.as_str(), t.port),
                    &t.port.span,
                ));
            } else {
                *entry = Some(resolved);
            }
        }
        let mut transfers = Vec::with_capacity(outputs.len());
        for (i, (status, value)) in slots.into_iter().enumerate() {
            transfer_of[outputs[i].index()] = Some(i);
            transfers.push(OutputTransfer {
                port: outputs[i],
                // Presence is a structural rule; a resolution error was recorded otherwise.
                status: status.unwrap_or_else(|| TransferExpr::just(Term::OwnStatus)),
                value,
            });
        }
        functions.push(FunctionDecl {
            name: f.name.name.clone(),
            inputs,
            outputs,
            transfers,
        });
    }

    let mut assertions: Vec<Assertion> = Vec::new();
    for a in &def.assertions {
        if assertions.iter().any(|b| b.name == a.name.name) {
            errors.push(SemanticError::new(
                format!("duplicate assertion `{}`", a.name),
                &a.name.span,
            ));
            continue;
        }
        match scope.resolve_assertion(a) {
            Ok(x) => assertions.push(x),
            Err(e) => errors.push(e),
        }
    }

    if !errors.is_empty() {
        return Err(BuildError::Semantic(errors));
    }
    Ok(Model {
        name: def.name.clone(),
        values,
        functions,
        ports,
        flows,
        assertions,
        names,
        incoming,
        free_inputs,
        transfer_of,
    })
}

/// Collapses one-element `and`/`or` nodes and rejects empty ones, so that
/// every resolved guard has exactly one printed form.
fn normalize_chain(chain: TransferExpr, port: &Ident) -> Result<TransferExpr, SemanticError> {
    use super::expr::{Branch, Guard};
    fn go(g: Guard<Term>, port: &Ident) -> Result<Guard<Term>, SemanticError> {
        Ok(match g {
            Guard::Cmp(..) => g,
            Guard::Not(inner) => Guard::Not(Box::new(go(*inner, port)?)),
            Guard::And(gs) | Guard::Or(gs) if gs.is_empty() => {
                return Err(SemanticError::new(
                    format!("empty conjunction or disjunction in transfer for `{}`", port.name),
                    &port.span,
                ))
            }
            Guard::And(mut gs) | Guard::Or(mut gs) if gs.len() == 1 => go(gs.pop().unwrap(), port)?,
            Guard::And(gs) => Guard::And(gs.into_iter().map(|g| go(g, port)).collect::<Result<_, _>>()?),
            Guard::Or(gs) => Guard::Or(gs.into_iter().map(|g| go(g, port)).collect::<Result<_, _>>()?),
        })
    }
    let branches = chain
        .branches
        .into_iter()
        .map(|b| {
            Ok(Branch {
                guard: go(b.guard, port)?,
                result: b.result,
            })
        })
        .collect::<Result<_, SemanticError>>()?;
    Ok(TransferExpr {
        branches,
        otherwise: chain.otherwise,
    })
}

fn check_chain_sorts(chain: &TransferExpr, want: Sort, port: &Ident) -> Result<(), SemanticError> {
    let mismatch = |what: &str| {
        SemanticError::new(
            format!("{what} in transfer for `{}`", port.name),
            &port.span,
        )
    };
    for b in &chain.branches {
        check_guard_sorts(&b.guard).map_err(|_| mismatch("comparison between a status and a value"))?;
        if b.result.sort() != want {
            return Err(mismatch("branch result has the wrong sort"));
        }
    }
    if chain.otherwise.sort() != want {
        return Err(mismatch("else result has the wrong sort"));
    }
    Ok(())
}

fn check_guard_sorts(g: &super::expr::Guard<Term>) -> Result<(), ()> {
    use super::expr::Guard;
    match g {
        Guard::Cmp(l, _, r) if l.sort() != r.sort() => Err(()),
        Guard::Cmp(..) => Ok(()),
        Guard::And(gs) | Guard::Or(gs) => gs.iter().try_for_each(check_guard_sorts),
        Guard::Not(g) => check_guard_sorts(g),
    }
}

/// Name tables used while resolving expressions and assertions.
pub(crate) struct Scope<'a> {
    pub names: &'a HashMap<String, NameRef>,
    pub ports: &'a [PortDecl],
    pub values: &'a [String],
}

impl Scope<'_> {
    fn value(&self, ident: &Ident) -> Result<ValueId, SemanticError> {
        self.values
            .iter()
            .position(|v| *v == ident.name)
            .map(|i| ValueId(i as u16))
            .ok_or_else(|| SemanticError::new(format!("undeclared value `{}`", ident.name), &ident.span))
    }

    fn resolve_term(&self, term: &RawTerm, owner: FunctionId, owner_name: &str) -> Result<Term, SemanticError> {
        match term {
            RawTerm::Status(s) => Ok(Term::Status(*s)),
            RawTerm::Name(v) => self.value(v).map(Term::Value),
            RawTerm::Field(target, field) => match self.names.get(&target.name) {
                None => Err(SemanticError::new(
                    format!("reference to undeclared port or function `{}`", target.name),
                    &target.span,
                )),
                Some(NameRef::Function(f)) => {
                    if *f != owner {
                        Err(SemanticError::new(
                            format!("`{owner_name}` may only read its own status, not `{}`", target.name),
                            &target.span,
                        ))
                    } else if *field == Field::Value {
                        Err(SemanticError::new(
                            format!("function `{}` has no value", target.name),
                            &target.span,
                        ))
                    } else {
                        Ok(Term::OwnStatus)
                    }
                }
                Some(NameRef::Port(p)) => {
                    let decl = &self.ports[p.index()];
                    if decl.owner != owner || decl.direction != Direction::Input {
                        return Err(SemanticError::new(
                            format!("`{}` is not an input of `{owner_name}`", target.name),
                            &target.span,
                        ));
                    }
                    Ok(match field {
                        Field::Status => Term::PortStatus(*p),
                        Field::Value => Term::PortValue(*p),
                    })
                }
            },
        }
    }

    fn literal(&self, field: Field, lit: &RawLiteral, target: &Ident) -> Result<Literal, SemanticError> {
        match (field, lit) {
            (Field::Status, RawLiteral::Status(s)) => Ok(Literal::Status(*s)),
            (Field::Value, RawLiteral::Name(v)) => self.value(v).map(Literal::Value),
            (Field::Status, RawLiteral::Name(v)) => Err(SemanticError::new(
                format!("`{}.status` compared with value `{}`", target.name, v.name),
                &v.span,
            )),
            (Field::Value, RawLiteral::Status(s)) => Err(SemanticError::new(
                format!("`{}.value` compared with status `{s}`", target.name),
                &target.span,
            )),
        }
    }

    pub(crate) fn port_atom(&self, atom: &RawAtom) -> Result<PortAtom, SemanticError> {
        match self.names.get(&atom.target.name) {
            Some(NameRef::Port(p)) => Ok(PortAtom {
                port: *p,
                field: atom.field,
                op: atom.op,
                rhs: self.literal(atom.field, &atom.rhs, &atom.target)?,
            }),
            Some(NameRef::Function(_)) => Err(SemanticError::new(
                format!("expected a port, found function `{}`", atom.target.name),
                &atom.target.span,
            )),
            None => Err(SemanticError::new(
                format!("reference to undeclared port `{}`", atom.target.name),
                &atom.target.span,
            )),
        }
    }

    pub(crate) fn function(&self, ident: &Ident) -> Result<FunctionId, SemanticError> {
        match self.names.get(&ident.name) {
            Some(NameRef::Function(f)) => Ok(*f),
            _ => Err(SemanticError::new(
                format!("reference to undeclared function `{}`", ident.name),
                &ident.span,
            )),
        }
    }

    pub(crate) fn constraint(&self, parts: &[RawConstraint]) -> Result<ScenarioConstraint, SemanticError> {
        let mut out = ScenarioConstraint::default();
        let mut others_seen = false;
        for part in parts {
            match part {
                RawConstraint::Atom(atom) => match self.names.get(&atom.target.name) {
                    Some(NameRef::Function(f)) => {
                        let status = match (&atom.field, &atom.rhs) {
                            (Field::Status, RawLiteral::Status(s)) => *s,
                            (Field::Value, _) => {
                                return Err(SemanticError::new(
                                    format!("function `{}` has no value", atom.target.name),
                                    &atom.target.span,
                                ))
                            }
                            (Field::Status, RawLiteral::Name(v)) => {
                                return Err(SemanticError::new(
                                    format!("`{}.status` compared with value `{}`", atom.target.name, v.name),
                                    &v.span,
                                ))
                            }
                        };
                        out.functions.push(FunctionAtom {
                            function: *f,
                            op: atom.op,
                            status,
                        });
                    }
                    _ => out.ports.push(self.port_atom(atom)?),
                },
                RawConstraint::OthersOk { except, span } => {
                    if others_seen {
                        return Err(SemanticError::new("more than one `others OK`/`all OK` clause", span));
                    }
                    others_seen = true;
                    let ids = except.iter().map(|e| self.function(e)).collect::<Result<Vec<_>, _>>()?;
                    out.others = OthersOk::Except(ids);
                }
                RawConstraint::AllOk { span } => {
                    if others_seen {
                        return Err(SemanticError::new("more than one `others OK`/`all OK` clause", span));
                    }
                    others_seen = true;
                    out.others = OthersOk::All;
                }
            }
        }
        Ok(out)
    }

    fn resolve_assertion(&self, a: &AssertionDef) -> Result<Assertion, SemanticError> {
        let kind = match &a.body {
            AssertionBodyDef::Structure => AssertionKind::Structure,
            AssertionBodyDef::Implication {
                hypothesis,
                conclusion,
            } => {
                if conclusion.is_empty() {
                    return Err(SemanticError::new(
                        format!("assertion `{}` has an empty `expect` clause", a.name),
                        &a.name.span,
                    ));
                }
                AssertionKind::Implication {
                    hypothesis: self.constraint(hypothesis)?,
                    conclusion: conclusion.iter().map(|c| self.port_atom(c)).collect::<Result<_, _>>()?,
                }
            }
        };
        Ok(Assertion {
            name: a.name.name.clone(),
            kind,
        })
    }
}

impl Model {
    pub(crate) fn scope(&self) -> Scope<'_> {
        Scope {
            names: &self.names,
            ports: &self.ports,
            values: &self.values,
        }
    }

    /// Resolves a raw constraint against this model.
    pub fn bind_constraint(&self, parts: &[RawConstraint]) -> Result<ScenarioConstraint, SemanticError> {
        self.scope().constraint(parts)
    }

    /// Resolves a raw conjunction of port atoms against this model.
    pub fn bind_condition(&self, atoms: &[RawAtom]) -> Result<Vec<PortAtom>, SemanticError> {
        atoms.iter().map(|a| self.scope().port_atom(a)).collect()
    }

    pub fn bind_assertion(&self, def: &AssertionDef) -> Result<Assertion, SemanticError> {
        self.scope().resolve_assertion(def)
    }

    /// Copy of this model with a different assertion list.
    pub fn with_assertions(&self, assertions: Vec<Assertion>) -> Model {
        Model {
            assertions,
            ..self.clone()
        }
    }
}
