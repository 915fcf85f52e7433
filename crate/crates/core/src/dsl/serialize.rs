use std::fmt::Write;

use crate::model::{
    AssertionKind, FunctionAtom, FunctionId, Guard, Model, OthersOk, PortAtom, Term, TransferExpr,
};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Ctx {
    Top,
    InAnd,
    InOr,
    InNot,
}

struct Printer<'a> {
    model: &'a Model,
    owner: FunctionId,
}

impl Printer<'_> {
    fn term(&self, t: Term) -> String {
        match t {
            Term::OwnStatus => format!("{}.status", self.model.function(self.owner).name),
            Term::PortStatus(p) => format!("{}.status", self.model.port(p).name),
            Term::PortValue(p) => format!("{}.value", self.model.port(p).name),
            Term::Status(s) => s.to_string(),
            Term::Value(v) => self.model.value_name(v).to_string(),
        }
    }

    fn guard(&self, g: &Guard<Term>, ctx: Ctx) -> String {
        match g {
            Guard::Cmp(l, op, r) => format!("{} {} {}", self.term(*l), op, self.term(*r)),
            Guard::And(gs) => {
                let body = gs.iter().map(|g| self.guard(g, Ctx::InAnd)).collect::<Vec<_>>().join(" and ");
                if matches!(ctx, Ctx::InAnd | Ctx::InNot) {
                    format!("({body})")
                } else {
                    body
                }
            }
            Guard::Or(gs) => {
                let body = gs.iter().map(|g| self.guard(g, Ctx::InOr)).collect::<Vec<_>>().join(" or ");
                if ctx == Ctx::Top {
                    body
                } else {
                    format!("({body})")
                }
            }
            Guard::Not(g) => format!("not {}", self.guard(g, Ctx::InNot)),
        }
    }

    fn chain(&self, c: &TransferExpr) -> String {
        if c.branches.is_empty() {
            return format!(" {}", self.term(c.otherwise));
        }
        let mut out = String::new();
        for (i, b) in c.branches.iter().enumerate() {
            let lead = if i == 0 { "" } else { "else " };
            let _ = write!(
                out,
                "\n    {lead}{} implies {}",
                self.guard(&b.guard, Ctx::Top),
                self.term(b.result)
            );
        }
        let _ = write!(out, "\n    else {}", self.term(c.otherwise));
        out
    }
}

fn function_atom(model: &Model, a: &FunctionAtom) -> String {
    format!("{}.status {} {}", model.function(a.function).name, a.op, a.status)
}

fn port_atom(model: &Model, a: &PortAtom) -> String {
    a.display(model).to_string()
}

/// Canonical text of a model.
///
/// Functions appear in declaration order, flows sorted by source then target
/// name, assertions in declaration order. Output is deterministic and
/// re-parses to an equal model.
pub fn serialize(model: &Model) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "model {}", model.name());
    let _ = writeln!(out);
    let _ = writeln!(out, "values {{ {} }}", model.values().join(" "));

    for (fi, f) in model.functions().iter().enumerate() {
        let printer = Printer {
            model,
            owner: FunctionId(fi as u32),
        };
        let _ = writeln!(out);
        let _ = writeln!(out, "function {} {{", f.name);
        for &p in &f.inputs {
            let decl = model.port(p);
            let free = if decl.free { "free " } else { "" };
            let _ = writeln!(out, "  in {free}{}", decl.name);
        }
        for &p in &f.outputs {
            let _ = writeln!(out, "  out {}", model.port(p).name);
        }
        for t in &f.transfers {
            let name = &model.port(t.port).name;
            let _ = writeln!(out, "  transfer {name}.status ={}", printer.chain(&t.status));
            if let Some(v) = &t.value {
                let _ = writeln!(out, "  transfer {name}.value ={}", printer.chain(v));
            }
        }
        let _ = writeln!(out, "}}");
    }

    if !model.flows().is_empty() {
        let _ = writeln!(out);
        for fl in model.flows() {
            let _ = writeln!(out, "flow {} -> {}", model.port(fl.source).name, model.port(fl.target).name);
        }
    }

    for a in model.assertions() {
        let _ = writeln!(out);
        match &a.kind {
            AssertionKind::Structure => {
                let _ = writeln!(out, "assert {} {{ structure }}", a.name);
            }
            AssertionKind::Implication {
                hypothesis,
                conclusion,
            } => {
                let _ = writeln!(out, "assert {} {{", a.name);
                let mut when: Vec<String> = hypothesis.functions.iter().map(|f| function_atom(model, f)).collect();
                match &hypothesis.others {
                    OthersOk::Unconstrained => {}
                    OthersOk::All => when.push("all OK".into()),
                    OthersOk::Except(ids) if ids.is_empty() => when.push("others OK".into()),
                    OthersOk::Except(ids) => when.push(format!(
                        "others OK except {}",
                        ids.iter().map(|f| model.function(*f).name.as_str()).collect::<Vec<_>>().join(", ")
                    )),
                }
                when.extend(hypothesis.ports.iter().map(|p| port_atom(model, p)));
                if !when.is_empty() {
                    let _ = writeln!(out, "  when {}", when.join(" and "));
                }
                let expect: Vec<String> = conclusion.iter().map(|p| port_atom(model, p)).collect();
                let _ = writeln!(out, "  expect {}", expect.join(" and "));
                let _ = writeln!(out, "}}");
            }
        }
    }
    out
}
