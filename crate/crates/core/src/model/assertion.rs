use std::fmt;

use crate::model::expr::{CmpOp, Field};
use crate::model::{FunctionId, Model, PortId};
use crate::{Status, ValueId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Literal {
    Status(Status),
    Value(ValueId),
}

/// `port.field op literal`
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PortAtom {
    pub port: PortId,
    pub field: Field,
    pub op: CmpOp,
    pub rhs: Literal,
}

impl PortAtom {
    pub fn holds(&self, status: Status, value: ValueId) -> bool {
        match (self.field, self.rhs) {
            (Field::Status, Literal::Status(s)) => self.op.apply(status, s),
            (Field::Value, Literal::Value(v)) => self.op.apply(value, v),
            // Rejected when the atom is resolved.
            _ => unreachable!("ill-sorted port atom"),
        }
    }

    pub fn display<'a>(&'a self, model: &'a Model) -> impl fmt::Display + 'a {
        AtomDisplay { atom: self, model }
    }
}

struct AtomDisplay<'a> {
    atom: &'a PortAtom,
    model: &'a Model,
}

impl fmt::Display for AtomDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = self.atom;
        write!(
            f,
            "{}.{} {} {}",
            self.model.port(a.port).name,
            a.field.as_str(),
            a.op,
            self.model.literal_name(a.rhs)
        )
    }
}

/// `function.status op status`
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FunctionAtom {
    pub function: FunctionId,
    pub op: CmpOp,
    pub status: Status,
}

/// The `others OK` family of sugar.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum OthersOk {
    #[default]
    Unconstrained,
    /// Functions not named by a status atom and not exempted are OK.
    Except(Vec<FunctionId>),
    /// Every function is OK.
    All,
}

/// Hypothesis of an assertion, or the `--where` clause of an instance query.
///
/// Function atoms and free-input value atoms restrict the scenario space
/// directly. All remaining port atoms filter solved assignments.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ScenarioConstraint {
    pub functions: Vec<FunctionAtom>,
    pub others: OthersOk,
    pub ports: Vec<PortAtom>,
}

/// Conjunction of port atoms.
pub type Condition = Vec<PortAtom>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AssertionKind {
    /// Structural well-formedness: holds iff the model has no violations.
    Structure,
    Implication {
        hypothesis: ScenarioConstraint,
        conclusion: Condition,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assertion {
    pub name: String,
    pub kind: AssertionKind,
}
