use thiserror::Error;

use crate::model::expr::{Guard, Term, TransferExpr};
use crate::model::{Literal, PortId};
use crate::{Status, ValueId};

/// Read access to (possibly partial) port state.
pub trait PortEnv {
    fn port_status(&self, p: PortId) -> Option<Status>;
    fn port_value(&self, p: PortId) -> Option<ValueId>;
}

/// Evaluation read a port the environment does not define yet.
///
/// The solver orders evaluation so this never happens; seeing it means the
/// engine is broken, not the model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("transfer read unresolved port #{}", .0 .0)]
pub struct EvalError(pub PortId);

fn term<E: PortEnv + ?Sized>(t: Term, own: Status, env: &E) -> Result<Literal, EvalError> {
    Ok(match t {
        Term::OwnStatus => Literal::Status(own),
        Term::Status(s) => Literal::Status(s),
        Term::Value(v) => Literal::Value(v),
        Term::PortStatus(p) => Literal::Status(env.port_status(p).ok_or(EvalError(p))?),
        Term::PortValue(p) => Literal::Value(env.port_value(p).ok_or(EvalError(p))?),
    })
}

pub fn eval_guard<E: PortEnv + ?Sized>(g: &Guard<Term>, own: Status, env: &E) -> Result<bool, EvalError> {
    Ok(match g {
        Guard::Cmp(l, op, r) => op.apply(term(*l, own, env)?, term(*r, own, env)?),
        Guard::And(gs) => {
            for g in gs {
                if !eval_guard(g, own, env)? {
                    return Ok(false);
                }
            }
            true
        }
        Guard::Or(gs) => {
            for g in gs {
                if eval_guard(g, own, env)? {
                    return Ok(true);
                }
            }
            false
        }
        Guard::Not(g) => !eval_guard(g, own, env)?,
    })
}

/// Result of the first branch whose guard holds, else the trailing term.
///
/// `own` is the owning function's status.
pub fn eval_expr<E: PortEnv + ?Sized>(expr: &TransferExpr, own: Status, env: &E) -> Result<Literal, EvalError> {
    for b in &expr.branches {
        if eval_guard(&b.guard, own, env)? {
            return term(b.result, own, env);
        }
    }
    term(expr.otherwise, own, env)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::case_study::baseline_lpv_model;

    struct Env(Vec<(PortId, Status, ValueId)>);

    impl PortEnv for Env {
        fn port_status(&self, p: PortId) -> Option<Status> {
            self.0.iter().find(|e| e.0 == p).map(|e| e.1)
        }
        fn port_value(&self, p: PortId) -> Option<ValueId> {
            self.0.iter().find(|e| e.0 == p).map(|e| e.2)
        }
    }

    fn status_of(lit: Literal) -> Status {
        match lit {
            Literal::Status(s) => s,
            Literal::Value(_) => panic!("expected a status"),
        }
    }

    #[test]
    fn compute_lpv_status_transfer() {
        let m = baseline_lpv_model();
        let out = m.port_id("oDeviation1").unwrap();
        let sbas = m.port_id("iSBAS1").unwrap();
        let expr = &m.transfer(out).unwrap().status;
        let v0 = ValueId(0);

        let env = Env(vec![(sbas, Status::Err, v0)]);
        assert_eq!(status_of(eval_expr(expr, Status::Ok, &env).unwrap()), Status::Err);
        let env = Env(vec![(sbas, Status::Ok, v0)]);
        assert_eq!(status_of(eval_expr(expr, Status::Lost, &env).unwrap()), Status::Lost);
        assert_eq!(status_of(eval_expr(expr, Status::Err, &env).unwrap()), Status::Err);
    }

    #[test]
    fn acquire_selection_transfer() {
        let m = baseline_lpv_model();
        let out = m.port_id("oSelected1").unwrap();
        let expr = &m.transfer(out).unwrap().status;
        let d1 = m.port_id("iDeviation11").unwrap();
        let d2 = m.port_id("iDeviation21").unwrap();
        let sel = m.port_id("iSelection1").unwrap();
        let v1 = m.value_id("v1").unwrap();
        let env = Env(vec![
            (d1, Status::Ok, ValueId(0)),
            (d2, Status::Lost, ValueId(0)),
            (sel, Status::Ok, v1),
        ]);
        assert_eq!(status_of(eval_expr(expr, Status::Ok, &env).unwrap()), Status::Lost);
        assert_eq!(status_of(eval_expr(expr, Status::Err, &env).unwrap()), Status::Err);
    }

    #[test]
    fn unresolved_port_is_reported() {
        let m = baseline_lpv_model();
        let out = m.port_id("oDeviation1").unwrap();
        let expr = &m.transfer(out).unwrap().status;
        let err = eval_expr(expr, Status::Ok, &Env(vec![])).unwrap_err();
        assert_eq!(err.0, m.port_id("iSBAS1").unwrap());
        // Own status short-circuits before the port is read.
        assert!(eval_expr(expr, Status::Lost, &Env(vec![])).is_ok());
    }
}
