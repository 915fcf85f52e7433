//! Architecture models: functions, ports, flows and transfer expressions.

mod assertion;
mod build;
mod def;
pub mod expr;
mod graph;

use std::collections::HashMap;
use std::fmt;

pub use assertion::{
    Assertion, AssertionKind, Condition, FunctionAtom, Literal, OthersOk, PortAtom,
    ScenarioConstraint,
};
pub use build::{build_model, validate_structure, BuildError, Rule, SemanticError, Violation};
pub use def::{
    AssertionBodyDef, AssertionDef, FlowDef, FunctionDef, Ident, InputDef, ModelDef, RawAtom,
    RawConstraint, RawLiteral, TransferDef,
};
pub use expr::{Branch, Chain, CmpOp, Field, Guard, RawTerm, RawTransfer, Sort, Term, TransferExpr};
pub use graph::{dependency_graph, DependencyGraph};

use crate::{Status, ValueId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PortId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FunctionId(pub u32);

impl PortId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl FunctionId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Input,
    Output,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PortDecl {
    pub name: String,
    pub direction: Direction,
    pub owner: FunctionId,
    /// Only inputs without an incoming flow can be free.
    pub free: bool,
}

/// Transfer expressions attached to one output port.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputTransfer {
    pub port: PortId,
    pub status: TransferExpr,
    /// `None` pins the value to the domain default.
    pub value: Option<TransferExpr>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionDecl {
    pub name: String,
    pub inputs: Vec<PortId>,
    pub outputs: Vec<PortId>,
    /// Parallel to `outputs`.
    pub transfers: Vec<OutputTransfer>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Flow {
    pub source: PortId,
    pub target: PortId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NameRef {
    Function(FunctionId),
    Port(PortId),
}

/// A validated, immutable architecture.
///
/// Built only through [`build_model`]; every instance satisfies the
/// structural rules checked by [`validate_structure`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    name: String,
    values: Vec<String>,
    functions: Vec<FunctionDecl>,
    ports: Vec<PortDecl>,
    /// Sorted by (source name, target name).
    flows: Vec<Flow>,
    assertions: Vec<Assertion>,
    names: HashMap<String, NameRef>,
    incoming: Vec<Option<PortId>>,
    free_inputs: Vec<PortId>,
    /// Output port -> (owner, index into the owner's transfers).
    transfer_of: Vec<Option<usize>>,
}

impl Model {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn values(&self) -> &[String] {
        &self.values
    }

    pub fn value_count(&self) -> usize {
        self.values.len()
    }

    pub fn value_name(&self, v: ValueId) -> &str {
        &self.values[v.index()]
    }

    pub fn value_id(&self, name: &str) -> Option<ValueId> {
        self.values
            .iter()
            .position(|v| v == name)
            .map(|i| ValueId(i as u16))
    }

    /// Value taken by ports the model never constrains.
    pub fn default_value(&self) -> ValueId {
        ValueId(0)
    }

    pub fn functions(&self) -> &[FunctionDecl] {
        &self.functions
    }

    pub fn function(&self, id: FunctionId) -> &FunctionDecl {
        &self.functions[id.index()]
    }

    pub fn function_ids(&self) -> impl Iterator<Item = FunctionId> + '_ {
        (0..self.functions.len() as u32).map(FunctionId)
    }

    pub fn ports(&self) -> &[PortDecl] {
        &self.ports
    }

    pub fn port(&self, id: PortId) -> &PortDecl {
        &self.ports[id.index()]
    }

    pub fn port_ids(&self) -> impl Iterator<Item = PortId> + '_ {
        (0..self.ports.len() as u32).map(PortId)
    }

    pub fn flows(&self) -> &[Flow] {
        &self.flows
    }

    pub fn assertions(&self) -> &[Assertion] {
        &self.assertions
    }

    pub fn assertion(&self, name: &str) -> Option<&Assertion> {
        self.assertions.iter().find(|a| a.name == name)
    }

    pub fn lookup(&self, name: &str) -> Option<NameRef> {
        self.names.get(name).copied()
    }

    pub fn port_id(&self, name: &str) -> Option<PortId> {
        match self.lookup(name)? {
            NameRef::Port(p) => Some(p),
            NameRef::Function(_) => None,
        }
    }

    pub fn function_id(&self, name: &str) -> Option<FunctionId> {
        match self.lookup(name)? {
            NameRef::Function(f) => Some(f),
            NameRef::Port(_) => None,
        }
    }

    /// Source of the flow targeting `port`, if any.
    pub fn incoming(&self, port: PortId) -> Option<PortId> {
        self.incoming[port.index()]
    }

    /// Free input ports in declaration order; their values are scenario variables.
    pub fn free_inputs(&self) -> &[PortId] {
        &self.free_inputs
    }

    pub fn free_input_index(&self, port: PortId) -> Option<usize> {
        self.free_inputs.iter().position(|&p| p == port)
    }

    /// Transfer expressions defining an output port.
    pub fn transfer(&self, port: PortId) -> Option<&OutputTransfer> {
        let idx = self.transfer_of[port.index()]?;
        let owner = self.port(port).owner;
        Some(&self.function(owner).transfers[idx])
    }

    pub fn literal_name(&self, lit: Literal) -> &str {
        match lit {
            Literal::Status(s) => s.as_str(),
            Literal::Value(v) => self.value_name(v),
        }
    }

    /// Re-checks the structural rules on the resolved model.
    ///
    /// Always empty for models produced by [`build_model`]; kept as an
    /// executable statement of the invariant.
    pub fn validate_structure(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut owners = vec![0usize; self.ports.len()];
        for (fi, f) in self.functions.iter().enumerate() {
            for &p in &f.inputs {
                owners[p.index()] += 1;
                if self.port(p).owner.index() != fi || self.port(p).direction != Direction::Input {
                    out.push(Violation::new(Rule::PortOwnership, &self.port(p).name));
                }
            }
            for &p in &f.outputs {
                owners[p.index()] += 1;
                if self.port(p).owner.index() != fi || self.port(p).direction != Direction::Output {
                    out.push(Violation::new(Rule::PortOwnership, &self.port(p).name));
                }
            }
        }
        for (i, n) in owners.iter().enumerate() {
            if *n != 1 {
                out.push(Violation::new(Rule::PortOwnership, &self.ports[i].name));
            }
        }
        let mut targeted = vec![0usize; self.ports.len()];
        for fl in &self.flows {
            if self.port(fl.source).direction != Direction::Output {
                out.push(Violation::new(Rule::FlowSourceNotOutput, &self.port(fl.source).name));
            }
            if self.port(fl.target).direction != Direction::Input {
                out.push(Violation::new(Rule::FlowTargetNotInput, &self.port(fl.target).name));
            }
            if self.port(fl.target).free {
                out.push(Violation::new(Rule::FreeInputWithFlow, &self.port(fl.target).name));
            }
            targeted[fl.target.index()] += 1;
        }
        for (i, n) in targeted.iter().enumerate() {
            if *n > 1 {
                out.push(Violation::new(Rule::InputMultipleFlows, &self.ports[i].name));
            }
        }
        out
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Input => "in",
            Direction::Output => "out",
        })
    }
}

/// Number of non-OK statuses in a slice.
pub(crate) fn failures(statuses: &[Status]) -> usize {
    statuses.iter().filter(|s| !s.is_ok()).count()
}
