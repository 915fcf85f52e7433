//! Guarded conditional chains used as transfer expressions.
//!
//! The same [`Guard`] / [`Chain`] shapes are used for raw, name-based
//! definitions ([`RawTerm`]) and for resolved, index-based models
//! ([`Term`]).

use std::fmt;

use crate::model::{Ident, PortId};
use crate::{Status, ValueId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Eq,
    Ne,
}

impl CmpOp {
    pub fn apply<T: PartialEq>(self, lhs: T, rhs: T) -> bool {
        match self {
            CmpOp::Eq => lhs == rhs,
            CmpOp::Ne => lhs != rhs,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CmpOp::Eq => "=",
            CmpOp::Ne => "!=",
        }
    }
}

impl fmt::Display for CmpOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which half of a port (or function) a reference reads.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Field {
    Status,
    Value,
}

impl Field {
    pub fn as_str(self) -> &'static str {
        match self {
            Field::Status => "status",
            Field::Value => "value",
        }
    }
}

/// Sort of a term: everything is either a status or a domain value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sort {
    Status,
    Value,
}

impl From<Field> for Sort {
    fn from(f: Field) -> Sort {
        match f {
            Field::Status => Sort::Status,
            Field::Value => Sort::Value,
        }
    }
}

/// Boolean combination of comparisons.
///
/// `And`/`Or` are n-ary; the parser flattens `a and b and c` into one node
/// and keeps explicit parentheses as nesting, so printing is exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Guard<T> {
    Cmp(T, CmpOp, T),
    And(Vec<Guard<T>>),
    Or(Vec<Guard<T>>),
    Not(Box<Guard<T>>),
}

impl<T> Guard<T> {
    pub fn eq(lhs: T, rhs: T) -> Self {
        Guard::Cmp(lhs, CmpOp::Eq, rhs)
    }

    pub fn ne(lhs: T, rhs: T) -> Self {
        Guard::Cmp(lhs, CmpOp::Ne, rhs)
    }

    pub fn and(parts: impl IntoIterator<Item = Guard<T>>) -> Self {
        Guard::And(parts.into_iter().collect())
    }

    pub fn or(parts: impl IntoIterator<Item = Guard<T>>) -> Self {
        Guard::Or(parts.into_iter().collect())
    }

    pub fn negate(inner: Guard<T>) -> Self {
        Guard::Not(Box::new(inner))
    }

    pub fn terms(&self) -> Vec<&T> {
        let mut out = Vec::new();
        self.collect_terms(&mut out);
        out
    }

    fn collect_terms<'a>(&'a self, out: &mut Vec<&'a T>) {
        match self {
            Guard::Cmp(l, _, r) => {
                out.push(l);
                out.push(r);
            }
            Guard::And(gs) | Guard::Or(gs) => gs.iter().for_each(|g| g.collect_terms(out)),
            Guard::Not(g) => g.collect_terms(out),
        }
    }

    pub fn try_map<U, E>(&self, f: &mut impl FnMut(&T) -> Result<U, E>) -> Result<Guard<U>, E> {
        Ok(match self {
            Guard::Cmp(l, op, r) => Guard::Cmp(f(l)?, *op, f(r)?),
            Guard::And(gs) => Guard::And(gs.iter().map(|g| g.try_map(f)).collect::<Result<_, _>>()?),
            Guard::Or(gs) => Guard::Or(gs.iter().map(|g| g.try_map(f)).collect::<Result<_, _>>()?),
            Guard::Not(g) => Guard::Not(Box::new(g.try_map(f)?)),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Branch<T> {
    pub guard: Guard<T>,
    pub result: T,
}

/// First-match conditional chain with a mandatory trailing `else`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain<T> {
    pub branches: Vec<Branch<T>>,
    pub otherwise: T,
}

impl<T> Chain<T> {
    /// A chain with no guarded branches: always yields `term`.
    pub fn just(term: T) -> Self {
        Chain {
            branches: Vec::new(),
            otherwise: term,
        }
    }

    pub fn when(guard: Guard<T>, result: T) -> ChainBuilder<T> {
        ChainBuilder {
            branches: vec![Branch { guard, result }],
        }
    }

    pub fn terms(&self) -> Vec<&T> {
        let mut out = Vec::new();
        for b in &self.branches {
            out.extend(b.guard.terms());
            out.push(&b.result);
        }
        out.push(&self.otherwise);
        out
    }

    pub fn try_map<U, E>(&self, f: &mut impl FnMut(&T) -> Result<U, E>) -> Result<Chain<U>, E> {
        let branches = self
            .branches
            .iter()
            .map(|b| {
                Ok(Branch {
                    guard: b.guard.try_map(f)?,
                    result: f(&b.result)?,
                })
            })
            .collect::<Result<_, E>>()?;
        Ok(Chain {
            branches,
            otherwise: f(&self.otherwise)?,
        })
    }
}

pub struct ChainBuilder<T> {
    branches: Vec<Branch<T>>,
}

impl<T> ChainBuilder<T> {
    pub fn when(mut self, guard: Guard<T>, result: T) -> Self {
        self.branches.push(Branch { guard, result });
        self
    }

    pub fn otherwise(self, term: T) -> Chain<T> {
        Chain {
            branches: self.branches,
            otherwise: term,
        }
    }
}

/// Name-based term as written in source or by the builder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RawTerm {
    /// `X.status` or `X.value`, where `X` is a function or a port.
    Field(Ident, Field),
    Status(Status),
    /// A bare identifier, which must name a declared value.
    Name(Ident),
}

impl RawTerm {
    pub fn status(target: &str) -> Self {
        RawTerm::Field(Ident::new(target), Field::Status)
    }

    pub fn value(target: &str) -> Self {
        RawTerm::Field(Ident::new(target), Field::Value)
    }

    pub fn lit(status: Status) -> Self {
        RawTerm::Status(status)
    }

    pub fn val(name: &str) -> Self {
        RawTerm::Name(Ident::new(name))
    }
}

/// Resolved term. Transfers can only read their owner's status and the
/// owner's input ports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Term {
    OwnStatus,
    PortStatus(PortId),
    PortValue(PortId),
    Status(Status),
    Value(ValueId),
}

impl Term {
    pub fn sort(self) -> Sort {
        match self {
            Term::OwnStatus | Term::PortStatus(_) | Term::Status(_) => Sort::Status,
            Term::PortValue(_) | Term::Value(_) => Sort::Value,
        }
    }

    pub fn port(self) -> Option<PortId> {
        match self {
            Term::PortStatus(p) | Term::PortValue(p) => Some(p),
            _ => None,
        }
    }
}

pub type RawTransfer = Chain<RawTerm>;
pub type TransferExpr = Chain<Term>;

impl TransferExpr {
    /// Input ports read anywhere in the chain, deduplicated, in first-use order.
    pub fn referenced_ports(&self) -> Vec<PortId> {
        let mut out: Vec<PortId> = Vec::new();
        for t in self.terms() {
            if let Some(p) = t.port() {
                if !out.contains(&p) {
                    out.push(p);
                }
            }
        }
        out
    }
}
