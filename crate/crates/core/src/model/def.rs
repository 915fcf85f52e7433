//! Raw, name-based model definitions.
//!
//! This is what the DSL parser produces and what programmatic builders
//! assemble. Nothing is resolved yet; [`crate::build_model`] turns a
//! [`ModelDef`] into an index-based [`crate::Model`].

use std::fmt;
use std::hash::{Hash, Hasher};

use crate::model::expr::{CmpOp, Field, RawTransfer};
use crate::{SourceSpan, Status};

/// Identifier with the place it was written. Equality ignores the span.
#[derive(Debug, Clone)]
pub struct Ident {
    pub name: String,
    pub span: SourceSpan,
}

impl Ident {
    pub fn new(name: impl Into<String>) -> Self {
        Ident {
            name: name.into(),
            span: SourceSpan::synthetic(),
        }
    }

    pub fn spanned(name: impl Into<String>, span: SourceSpan) -> Self {
        Ident {
            name: name.into(),
            span,
        }
    }

    pub fn as_str(&self) -> &str {
        &self.name
    }
}

impl PartialEq for Ident {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
    }
}

impl Eq for Ident {}

impl Hash for Ident {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.name.hash(state)
    }
}

impl fmt::Display for Ident {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

impl From<&str> for Ident {
    fn from(s: &str) -> Self {
        Ident::new(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputDef {
    pub name: Ident,
    pub free: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransferDef {
    pub port: Ident,
    pub field: Field,
    pub expr: RawTransfer,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionDef {
    pub name: Ident,
    pub inputs: Vec<InputDef>,
    pub outputs: Vec<Ident>,
    pub transfers: Vec<TransferDef>,
}

impl FunctionDef {
    pub fn new(name: impl Into<String>) -> Self {
        FunctionDef {
            name: Ident::new(name),
            inputs: Vec::new(),
            outputs: Vec::new(),
            transfers: Vec::new(),
        }
    }

    pub fn input(mut self, name: &str) -> Self {
        self.inputs.push(InputDef {
            name: Ident::new(name),
            free: false,
        });
        self
    }

    pub fn free_input(mut self, name: &str) -> Self {
        self.inputs.push(InputDef {
            name: Ident::new(name),
            free: true,
        });
        self
    }

    pub fn output(mut self, name: &str) -> Self {
        self.outputs.push(Ident::new(name));
        self
    }

    pub fn status(mut self, port: &str, expr: RawTransfer) -> Self {
        self.transfers.push(TransferDef {
            port: Ident::new(port),
            field: Field::Status,
            expr,
        });
        self
    }

    pub fn value(mut self, port: &str, expr: RawTransfer) -> Self {
        self.transfers.push(TransferDef {
            port: Ident::new(port),
            field: Field::Value,
            expr,
        });
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowDef {
    pub source: Ident,
    pub target: Ident,
}

/// Right-hand side of an assertion atom: a status or a value name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RawLiteral {
    Status(Status),
    Name(Ident),
}

/// `target.field op literal`, unresolved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawAtom {
    pub target: Ident,
    pub field: Field,
    pub op: CmpOp,
    pub rhs: RawLiteral,
}

impl RawAtom {
    pub fn status_is(target: &str, status: Status) -> Self {
        RawAtom {
            target: Ident::new(target),
            field: Field::Status,
            op: CmpOp::Eq,
            rhs: RawLiteral::Status(status),
        }
    }

    pub fn value_is(target: &str, value: &str) -> Self {
        RawAtom {
            target: Ident::new(target),
            field: Field::Value,
            op: CmpOp::Eq,
            rhs: RawLiteral::Name(Ident::new(value)),
        }
    }
}

/// One conjunct of a `when` clause.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RawConstraint {
    Atom(RawAtom),
    /// `others OK [except A, B]`
    OthersOk { except: Vec<Ident>, span: SourceSpan },
    /// `all OK`
    AllOk { span: SourceSpan },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AssertionBodyDef {
    /// Structural well-formedness check.
    Structure,
    Implication {
        hypothesis: Vec<RawConstraint>,
        conclusion: Vec<RawAtom>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssertionDef {
    pub name: Ident,
    pub body: AssertionBodyDef,
}

impl AssertionDef {
    pub fn structure(name: &str) -> Self {
        AssertionDef {
            name: Ident::new(name),
            body: AssertionBodyDef::Structure,
        }
    }

    pub fn implication(name: &str, hypothesis: Vec<RawConstraint>, conclusion: Vec<RawAtom>) -> Self {
        AssertionDef {
            name: Ident::new(name),
            body: AssertionBodyDef::Implication {
                hypothesis,
                conclusion,
            },
        }
    }
}

impl RawConstraint {
    pub fn others_ok() -> Self {
        RawConstraint::OthersOk {
            except: Vec::new(),
            span: SourceSpan::synthetic(),
        }
    }

    pub fn others_ok_except(names: &[&str]) -> Self {
        RawConstraint::OthersOk {
            except: names.iter().map(|n| Ident::new(*n)).collect(),
            span: SourceSpan::synthetic(),
        }
    }

    pub fn all_ok() -> Self {
        RawConstraint::AllOk {
            span: SourceSpan::synthetic(),
        }
    }

    pub fn status_is(target: &str, status: Status) -> Self {
        RawConstraint::Atom(RawAtom::status_is(target, status))
    }

    pub fn value_is(target: &str, value: &str) -> Self {
        RawConstraint::Atom(RawAtom::value_is(target, value))
    }
}

/// Unresolved model: the input of [`crate::build_model`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelDef {
    pub name: String,
    pub values: Vec<Ident>,
    pub functions: Vec<FunctionDef>,
    pub flows: Vec<FlowDef>,
    pub assertions: Vec<AssertionDef>,
}

impl ModelDef {
    pub fn new(name: impl Into<String>, values: &[&str]) -> Self {
        ModelDef {
            name: name.into(),
            values: values.iter().map(|v| Ident::new(*v)).collect(),
            functions: Vec::new(),
            flows: Vec::new(),
            assertions: Vec::new(),
        }
    }

    pub fn function(&mut self, f: FunctionDef) -> &mut Self {
        self.functions.push(f);
        self
    }

    pub fn flow(&mut self, source: &str, target: &str) -> &mut Self {
        self.flows.push(FlowDef {
            source: Ident::new(source),
            target: Ident::new(target),
        });
        self
    }

    pub fn assertion(&mut self, a: AssertionDef) -> &mut Self {
        self.assertions.push(a);
        self
    }

    pub fn function_mut(&mut self, name: &str) -> Option<&mut FunctionDef> {
        self.functions.iter_mut().find(|f| f.name.name == name)
    }
}
