//! Seeded generator of small, valid models with assertions.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use failprop::model::{
    AssertionDef, Chain, CmpOp, Field, FunctionDef, Guard, Ident, RawAtom, RawConstraint, RawLiteral, RawTerm,
    RawTransfer,
};
use failprop::{ModelDef, SourceSpan, Status};

#[derive(Debug, Clone)]
pub struct GenConfig {
    pub max_functions: usize,
    pub max_ports: usize,
    pub max_values: usize,
    pub max_assertions: usize,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            max_functions: 6,
            max_ports: 8,
            max_values: 2,
            max_assertions: 3,
        }
    }
}

pub fn random_model(seed: u64) -> ModelDef {
    random_model_with(seed, &GenConfig::default())
}

struct Fun {
    name: String,
    inputs: Vec<String>,
    outputs: Vec<String>,
}

/// A model that always builds: every flow joins an output to a non-free
/// input at most once, and every output has a status transfer.
pub fn random_model_with(seed: u64, cfg: &GenConfig) -> ModelDef {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nv = rng.gen_range(1..=cfg.max_values.max(1));
    let values: Vec<String> = (0..nv).map(|i| format!("v{i}")).collect();
    let nf = rng.gen_range(1..=cfg.max_functions.max(1));
    let mut budget = rng.gen_range(1..=cfg.max_ports.max(1));

    let mut funs: Vec<Fun> = Vec::new();
    for f in 0..nf {
        let mut fun = Fun {
            name: format!("F{f}"),
            inputs: Vec::new(),
            outputs: Vec::new(),
        };
        for k in 0..rng.gen_range(0..=2) {
            if budget == 0 {
                break;
            }
            budget -= 1;
            fun.inputs.push(format!("i{f}_{k}"));
        }
        for k in 0..rng.gen_range(0..=2) {
            if budget == 0 {
                break;
            }
            budget -= 1;
            fun.outputs.push(format!("o{f}_{k}"));
        }
        funs.push(fun);
    }
    if funs.iter().all(|f| f.outputs.is_empty()) {
        // Give the model at least one output, reclaiming an input if needed.
        if budget == 0 {
            if let Some(f) = funs.iter_mut().find(|f| !f.inputs.is_empty()) {
                f.inputs.pop();
            }
        }
        funs[0].outputs.push("o0_9".into());
    }

    let outputs: Vec<String> = funs.iter().flat_map(|f| f.outputs.clone()).collect();
    let mut def = ModelDef::new(format!("random{seed}"), &values.iter().map(String::as_str).collect::<Vec<_>>());
    let mut flows = Vec::new();
    for fun in &funs {
        let mut fd = FunctionDef::new(fun.name.clone());
        let mut bound = Vec::new();
        for i in &fun.inputs {
            if rng.gen_bool(0.2) {
                fd = fd.free_input(i);
            } else {
                fd = fd.input(i);
                if rng.gen_bool(0.85) {
                    flows.push((outputs.choose(&mut rng).unwrap().clone(), i.clone()));
                }
            }
            bound.push(i.clone());
        }
        for o in &fun.outputs {
            fd = fd.output(o);
        }
        let ctx = Ctx {
            own: &fun.name,
            inputs: &bound,
            values: &values,
        };
        for o in &fun.outputs {
            let expr = ctx.chain(&mut rng, Want::Status);
            fd = fd.status(o, expr);
            if nv > 1 && rng.gen_bool(0.6) {
                let expr = ctx.chain(&mut rng, Want::Value);
                fd = fd.value(o, expr);
            }
        }
        def.function(fd);
    }
    flows.shuffle(&mut rng);
    for (s, t) in &flows {
        def.flow(s, t);
    }

    let ports: Vec<String> = funs
        .iter()
        .flat_map(|f| f.inputs.iter().chain(&f.outputs).cloned())
        .collect();
    let names: Vec<String> = funs.iter().map(|f| f.name.clone()).collect();
    for a in 0..rng.gen_range(1..=cfg.max_assertions.max(1)) {
        let name = format!("A{a}");
        if rng.gen_bool(0.1) {
            def.assertion(AssertionDef::structure(&name));
            continue;
        }
        let mut hyp = Vec::new();
        for _ in 0..rng.gen_range(0..=2) {
            hyp.push(RawConstraint::Atom(RawAtom {
                target: Ident::new(names.choose(&mut rng).unwrap()),
                field: Field::Status,
                op: random_op(&mut rng),
                rhs: RawLiteral::Status(random_status(&mut rng)),
            }));
        }
        match rng.gen_range(0..10) {
            0..=3 => {}
            4..=7 => {
                let except: Vec<Ident> = names
                    .iter()
                    .filter(|_| rng.gen_bool(0.2))
                    .map(|n| Ident::new(n.as_str()))
                    .collect();
                hyp.push(RawConstraint::OthersOk {
                    except,
                    span: SourceSpan::synthetic(),
                });
            }
            _ => hyp.push(RawConstraint::AllOk {
                span: SourceSpan::synthetic(),
            }),
        }
        if rng.gen_bool(0.3) {
            hyp.push(RawConstraint::Atom(port_atom(&mut rng, &ports, &values)));
        }
        let conclusion = (0..rng.gen_range(1..=2))
            .map(|_| port_atom(&mut rng, &ports, &values))
            .collect();
        def.assertion(AssertionDef::implication(&name, hyp, conclusion));
    }
    def
}

fn random_status(rng: &mut impl Rng) -> Status {
    *Status::ALL.choose(rng).unwrap()
}

fn random_op(rng: &mut impl Rng) -> CmpOp {
    if rng.gen_bool(0.7) {
        CmpOp::Eq
    } else {
        CmpOp::Ne
    }
}

fn port_atom(rng: &mut impl Rng, ports: &[String], values: &[String]) -> RawAtom {
    let target = Ident::new(ports.choose(rng).unwrap().as_str());
    if values.len() > 1 && rng.gen_bool(0.3) {
        RawAtom {
            target,
            field: Field::Value,
            op: random_op(rng),
            rhs: RawLiteral::Name(Ident::new(values.choose(rng).unwrap().as_str())),
        }
    } else {
        RawAtom {
            target,
            field: Field::Status,
            op: random_op(rng),
            rhs: RawLiteral::Status(random_status(rng)),
        }
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Want {
    Status,
    Value,
}

struct Ctx<'a> {
    own: &'a str,
    inputs: &'a [String],
    values: &'a [String],
}

impl Ctx<'_> {
    fn chain(&self, rng: &mut impl Rng, want: Want) -> RawTransfer {
        let n = rng.gen_range(0..=2);
        let mut branches = Vec::new();
        for _ in 0..n {
            branches.push((self.guard(rng, 2), self.term(rng, want, true)));
        }
        let otherwise = self.term(rng, want, true);
        Chain {
            branches: branches
                .into_iter()
                .map(|(guard, result)| failprop::model::Branch { guard, result })
                .collect(),
            otherwise,
        }
    }

    /// A term of the wanted sort. Literals are excluded when `allow_lit` is
    /// false, so comparisons always read something.
    fn term(&self, rng: &mut impl Rng, want: Want, allow_lit: bool) -> RawTerm {
        match want {
            Want::Status => {
                let k = rng.gen_range(0..if allow_lit { 3 } else { 2 });
                match k {
                    0 => RawTerm::status(self.own),
                    1 if !self.inputs.is_empty() => RawTerm::status(self.inputs.choose(rng).unwrap()),
                    1 => RawTerm::status(self.own),
                    _ => RawTerm::lit(random_status(rng)),
                }
            }
            Want::Value => {
                if !self.inputs.is_empty() && (!allow_lit || rng.gen_bool(0.5)) {
                    RawTerm::value(self.inputs.choose(rng).unwrap())
                } else {
                    RawTerm::val(self.values.choose(rng).unwrap())
                }
            }
        }
    }

    fn guard(&self, rng: &mut impl Rng, depth: usize) -> Guard<RawTerm> {
        if depth == 0 || rng.gen_bool(0.5) {
            let want = if self.values.len() > 1 && !self.inputs.is_empty() && rng.gen_bool(0.3) {
                Want::Value
            } else {
                Want::Status
            };
            let lhs = self.term(rng, want, false);
            let rhs = self.term(rng, want, true);
            return Guard::Cmp(lhs, random_op(rng), rhs);
        }
        match rng.gen_range(0..3) {
            0 => Guard::And(vec![self.guard(rng, depth - 1), self.guard(rng, depth - 1)]),
            1 => Guard::Or(vec![self.guard(rng, depth - 1), self.guard(rng, depth - 1)]),
            _ => Guard::Not(Box::new(self.guard(rng, depth - 1))),
        }
    }
}
