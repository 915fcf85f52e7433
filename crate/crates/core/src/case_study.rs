//! The LPV approach-guidance architecture, baseline and hardened, with its
//! safety and attack assertions.
//!
//! Functions: the crew's source selection, two satellite constellations,
//! two SBAS computations, two LPV computations, and three displays, each
//! made of an `Acquire`, a `Monitor` and a `Crosscheck`. The hardened
//! variant adds an RNAV receiver and a baro-altimeter per LPV computation.
//!
//! Reconstructed parts (transfers not given verbatim in the source
//! material, and port-level fan-out) are marked below so they can be
//! audited against the original architecture drawing.

use std::fmt;

use crate::checker::Outcome;
use crate::model::{
    build_model, AssertionDef, Chain, FunctionDef, Guard, Model, ModelDef, RawAtom, RawConstraint,
    RawTerm, RawTransfer,
};
use crate::Status::{self, Err, Lost, Ok as OK};

/// Normative text of the baseline model.
pub const BASELINE_FPROP: &str = include_str!("../models/lpv_baseline.fprop");
/// Normative text of the hardened model.
pub const HARDENED_FPROP: &str = include_str!("../models/lpv_hardened.fprop");

fn st(name: &str) -> RawTerm {
    RawTerm::status(name)
}

fn is(name: &str, s: Status) -> Guard<RawTerm> {
    Guard::eq(st(name), RawTerm::lit(s))
}

fn isnt(name: &str, s: Status) -> Guard<RawTerm> {
    Guard::ne(st(name), RawTerm::lit(s))
}

fn lit(s: Status) -> RawTerm {
    RawTerm::lit(s)
}

fn val(v: &str) -> RawTerm {
    RawTerm::val(v)
}

/// Output mirrors the function's own status.
fn own(function: &str) -> RawTransfer {
    Chain::just(st(function))
}

/// OK: forward `input`; Lost: Lost; Err: Err.
fn relay(function: &str, input: &str) -> RawTransfer {
    Chain::when(is(function, OK), st(input))
        .when(is(function, Lost), lit(Lost))
        .otherwise(lit(Err))
}

/// SBAS consolidation (reconstructed). Two consistent constellations or one
/// healthy survivor give a position; an erroneous constellation next to a
/// healthy one is detected and the output is dropped; an erroneous
/// constellation with nothing to compare against goes through undetected.
fn sbas(function: &str, gps: &str, galileo: &str) -> RawTransfer {
    Chain::when(is(function, Lost), lit(Lost))
        .when(is(function, Err), lit(Err))
        .when(Guard::and([is(gps, Lost), is(galileo, Lost)]), lit(Lost))
        .when(is(gps, Lost), st(galileo))
        .when(is(galileo, Lost), st(gps))
        .when(Guard::and([is(gps, OK), is(galileo, OK)]), lit(OK))
        .otherwise(lit(Lost))
}

/// Display selection: first LPV source on `v0`, second on `v1`.
fn acquire(function: &str, from_lpv1: &str, from_lpv2: &str, selection: &str) -> RawTransfer {
    let sel = |v: &str| Guard::eq(RawTerm::value(selection), val(v));
    Chain::when(Guard::and([is(function, OK), sel("v0")]), st(from_lpv1))
        .when(Guard::and([is(function, OK), sel("v1")]), st(from_lpv2))
        .when(is(function, Lost), lit(Lost))
        .otherwise(lit(Err))
}

/// Discrepancy alarm (reconstructed): raised by a healthy monitor when the
/// two LPV feeds differ in status and at least one is erroneous.
fn monitor(function: &str, a: &str, b: &str) -> RawTransfer {
    Chain::when(
        Guard::and([
            is(function, OK),
            Guard::or([is(a, Err), is(b, Err)]),
            Guard::ne(st(a), st(b)),
        ]),
        val("v1"),
    )
    .otherwise(val("v0"))
}

/// Display reset (reconstructed): raised by a healthy crosscheck when its
/// own display's data differs in status from both other displays.
fn crosscheck(function: &str, own_display: &str, other1: &str, other2: &str) -> RawTransfer {
    Chain::when(
        Guard::and([
            is(function, OK),
            Guard::ne(st(own_display), st(other1)),
            Guard::ne(st(own_display), st(other2)),
        ]),
        val("v1"),
    )
    .otherwise(val("v0"))
}

/// Hardened LPV status: SBAS backed by RNAV and baro-altimeter.
fn hardened_lpv_status(f: &str, sbas: &str, rnav: &str, baro: &str) -> RawTransfer {
    Chain::when(is(f, Lost), lit(Lost))
        .when(is(f, Err), lit(Err))
        .when(is(sbas, OK), lit(OK))
        .when(Guard::and([is(sbas, Lost), is(rnav, OK), is(baro, OK)]), lit(OK))
        .when(Guard::and([is(sbas, Lost), Guard::or([is(rnav, Lost), is(baro, Lost)])]), lit(Lost))
        .when(Guard::and([is(sbas, Lost), Guard::or([is(rnav, Err), is(baro, Err)])]), lit(Err))
        .when(Guard::and([is(sbas, Err), Guard::or([is(rnav, Lost), is(baro, Lost)])]), lit(Err))
        .when(Guard::and([is(sbas, Err), is(rnav, OK), is(baro, OK)]), lit(Lost))
        .when(Guard::and([is(sbas, Err), Guard::or([is(rnav, Err), is(baro, Err)])]), lit(Lost))
        .otherwise(lit(Err))
}

/// Alarm raised when SBAS and RNAV/baro disagree.
fn hardened_lpv_alarm(f: &str, sbas: &str, rnav: &str, baro: &str) -> RawTransfer {
    Chain::when(
        Guard::and([
            is(f, OK),
            isnt(sbas, Lost),
            isnt(rnav, Lost),
            isnt(baro, Lost),
            Guard::or([is(sbas, Err), is(rnav, Err), is(baro, Err)]),
        ]),
        val("v1"),
    )
    .when(
        Guard::and([is(f, OK), is(sbas, Err), Guard::or([is(rnav, OK), is(baro, OK)])]),
        val("v1"),
    )
    .when(
        Guard::and([is(f, OK), is(sbas, Lost), Guard::or([is(rnav, Lost), is(baro, Lost)])]),
        val("v1"),
    )
    .otherwise(val("v0"))
}

fn displays_ok() -> Vec<RawAtom> {
    (1..=3)
        .map(|i| RawAtom::status_is(&format!("oSelected{i}"), OK))
        .collect()
}

fn failing(list: &[(&str, Status)]) -> Vec<RawConstraint> {
    let mut h: Vec<RawConstraint> = list
        .iter()
        .map(|(f, s)| RawConstraint::status_is(f, *s))
        .collect();
    h.push(RawConstraint::others_ok());
    h
}

fn baseline_def() -> ModelDef {
    let mut m = ModelDef::new("lpv_baseline", &["v0", "v1"]);

    // The crew's choice is a free input fanned out to all three displays.
    m.function(
        FunctionDef::new("SelectSource")
            .free_input("iPilot")
            .output("oSelection")
            .status("oSelection", own("SelectSource"))
            .value("oSelection", Chain::just(RawTerm::value("iPilot"))),
    );
    m.function(FunctionDef::new("GPS").output("oGPS").status("oGPS", own("GPS")));
    m.function(FunctionDef::new("Galileo").output("oGalileo").status("oGalileo", own("Galileo")));
    for i in 1..=2 {
        let f = format!("ComputeSBAS{i}");
        let (gps, gal, out) = (format!("iGPS{i}"), format!("iGalileo{i}"), format!("oSBAS{i}"));
        m.function(
            FunctionDef::new(&f)
                .input(&gps)
                .input(&gal)
                .output(&out)
                .status(&out, sbas(&f, &gps, &gal)),
        );
    }
    for i in 1..=2 {
        let f = format!("ComputeLPV{i}");
        let (input, out) = (format!("iSBAS{i}"), format!("oDeviation{i}"));
        m.function(
            FunctionDef::new(&f)
                .input(&input)
                .output(&out)
                .status(&out, relay(&f, &input)),
        );
    }
    for i in 1..=3 {
        let f = format!("Acquire{i}");
        let (d1, d2, sel, out) = (
            format!("iDeviation1{i}"),
            format!("iDeviation2{i}"),
            format!("iSelection{i}"),
            format!("oSelected{i}"),
        );
        m.function(
            FunctionDef::new(&f)
                .input(&d1)
                .input(&d2)
                .input(&sel)
                .output(&out)
                .status(&out, acquire(&f, &d1, &d2, &sel)),
        );
    }
    for i in 1..=3 {
        let f = format!("Monitor{i}");
        let (a, b, out) = (format!("iMonitor1{i}"), format!("iMonitor2{i}"), format!("oDiscrepancy{i}"));
        m.function(
            FunctionDef::new(&f)
                .input(&a)
                .input(&b)
                .output(&out)
                .status(&out, own(&f))
                .value(&out, monitor(&f, &a, &b)),
        );
    }
    for i in 1..=3 {
        let f = format!("Crosscheck{i}");
        // iDisplay<j><i>: data of display j as seen by crosscheck i.
        let displays: Vec<String> = (1..=3).map(|j| format!("iDisplay{j}{i}")).collect();
        let own_display = &displays[i - 1];
        let others: Vec<&String> = displays.iter().filter(|d| *d != own_display).collect();
        let out = format!("oReset{i}");
        let mut fd = FunctionDef::new(&f);
        for d in &displays {
            fd = fd.input(d);
        }
        m.function(
            fd.output(&out)
                .status(&out, own(&f))
                .value(&out, crosscheck(&f, own_display, others[0], others[1])),
        );
    }

    for i in 1..=2 {
        m.flow("oGPS", &format!("iGPS{i}"));
        m.flow("oGalileo", &format!("iGalileo{i}"));
        m.flow(&format!("oSBAS{i}"), &format!("iSBAS{i}"));
    }
    for i in 1..=3 {
        m.flow("oDeviation1", &format!("iDeviation1{i}"));
        m.flow("oDeviation2", &format!("iDeviation2{i}"));
        m.flow("oSelection", &format!("iSelection{i}"));
        m.flow("oDeviation1", &format!("iMonitor1{i}"));
        m.flow("oDeviation2", &format!("iMonitor2{i}"));
        for j in 1..=3 {
            m.flow(&format!("oSelected{j}"), &format!("iDisplay{j}{i}"));
        }
    }
    m
}

/// Baseline architecture with its safety assertions and the first two
/// attack assertions.
pub fn baseline_lpv_def() -> ModelDef {
    let mut m = baseline_def();
    m.assertion(AssertionDef::structure("model_structure"));
    m.assertion(AssertionDef::implication(
        "one_computer_lost",
        {
            let mut h = failing(&[("ComputeLPV1", Lost)]);
            h.push(RawConstraint::value_is("oSelection", "v1"));
            h
        },
        displays_ok(),
    ));
    m.assertion(AssertionDef::implication(
        "one_computer_erroneous",
        failing(&[("ComputeLPV1", Err)]),
        (1..=3)
            .map(|i| RawAtom::value_is(&format!("oDiscrepancy{i}"), "v1"))
            .collect(),
    ));
    m.assertion(AssertionDef::implication(
        "one_display_erroneous",
        failing(&[("Acquire1", Err)]),
        vec![RawAtom::value_is("oReset1", "v1")],
    ));
    m.assertion(AssertionDef::implication(
        "one_satellite_corrupted",
        failing(&[("GPS", Err)]),
        displays_ok(),
    ));
    m.assertion(AssertionDef::implication(
        "one_satellite_lost",
        failing(&[("GPS", Lost)]),
        displays_ok(),
    ));
    m
}

/// Hardened architecture with the seven attack assertions.
pub fn hardened_lpv_def() -> ModelDef {
    let mut m = baseline_def();
    m.name = "lpv_hardened".into();
    for i in 1..=2 {
        let f = format!("ComputeLPV{i}");
        let (sbas, rnav, baro) = (format!("iSBAS{i}"), format!("iRNAV{i}"), format!("iBaroAltimeter{i}"));
        let (out, alarm) = (format!("oDeviation{i}"), format!("LPV{i}_alarm"));
        let lpv = m.function_mut(&f).expect("baseline declares ComputeLPV");
        *lpv = FunctionDef::new(&f)
            .input(&sbas)
            .input(&rnav)
            .input(&baro)
            .output(&out)
            .output(&alarm)
            .status(&out, hardened_lpv_status(&f, &sbas, &rnav, &baro))
            .status(&alarm, own(&f))
            .value(&alarm, hardened_lpv_alarm(&f, &sbas, &rnav, &baro));
    }
    for i in 1..=2 {
        let rnav = format!("RNAV{i}");
        let baro = format!("BaroAltimeter{i}");
        m.function(FunctionDef::new(&rnav).output(&format!("o{rnav}")).status(&format!("o{rnav}"), own(&rnav)));
        m.function(FunctionDef::new(&baro).output(&format!("o{baro}")).status(&format!("o{baro}"), own(&baro)));
    }
    for i in 1..=2 {
        m.flow(&format!("oRNAV{i}"), &format!("iRNAV{i}"));
        m.flow(&format!("oBaroAltimeter{i}"), &format!("iBaroAltimeter{i}"));
    }

    let alarm = || vec![RawAtom::value_is("LPV1_alarm", "v1")];
    m.assertion(AssertionDef::implication(
        "one_satellite_corrupted",
        failing(&[("GPS", Err)]),
        displays_ok(),
    ));
    m.assertion(AssertionDef::implication(
        "one_satellite_lost",
        failing(&[("GPS", Lost)]),
        displays_ok(),
    ));
    m.assertion(AssertionDef::implication(
        "RNAV_lost",
        failing(&[("RNAV1", Lost), ("RNAV2", Lost)]),
        displays_ok(),
    ));
    m.assertion(AssertionDef::implication(
        "one_satellite_lost_one_satellite_corrupted",
        failing(&[("GPS", Err), ("Galileo", Lost)]),
        alarm(),
    ));
    // Only RNAV1 is lost here, unlike RNAV_lost.
    m.assertion(AssertionDef::implication(
        "one_satellite_lost_RNAV_lost",
        failing(&[("GPS", Lost), ("RNAV1", Lost)]),
        displays_ok(),
    ));
    m.assertion(AssertionDef::implication(
        "one_satellite_corrupted_RNAV_lost",
        failing(&[("GPS", Err), ("RNAV1", Lost), ("RNAV2", Lost)]),
        alarm(),
    ));
    m.assertion(AssertionDef::implication(
        "one_satellite_corrupted_one_satellite_lost_RNAV_lost",
        failing(&[("GPS", Err), ("Galileo", Lost), ("RNAV1", Lost), ("RNAV2", Lost)]),
        alarm(),
    ));
    m
}

pub fn baseline_lpv_model() -> Model {
    build_model(&baseline_lpv_def()).expect("baseline LPV model is well-formed")
}

pub fn hardened_lpv_model() -> Model {
    build_model(&hardened_lpv_def()).expect("hardened LPV model is well-formed")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelId {
    Baseline,
    Hardened,
}

impl ModelId {
    pub fn model(self) -> Model {
        match self {
            ModelId::Baseline => baseline_lpv_model(),
            ModelId::Hardened => hardened_lpv_model(),
        }
    }
}

impl fmt::Display for ModelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelId::Baseline => "baseline",
            ModelId::Hardened => "hardened",
        })
    }
}

/// An assertion of the case study and its documented verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorpusEntry {
    pub model: ModelId,
    pub assertion: &'static str,
    pub expected: Outcome,
    /// Requirement or attack the assertion stands for.
    pub requirement: &'static str,
}

/// Every case-study assertion with its expected outcome.
pub fn corpus() -> Vec<CorpusEntry> {
    use ModelId::*;
    use Outcome::*;
    let e = |model, assertion, expected, requirement| CorpusEntry {
        model,
        assertion,
        expected,
        requirement,
    };
    vec![
        e(Baseline, "model_structure", Holds, "structural well-formedness"),
        e(Baseline, "one_computer_lost", Holds, "Safety 1: loss of LPV capability"),
        e(Baseline, "one_computer_erroneous", Holds, "Safety 2: misleading information (LPV)"),
        e(Baseline, "one_display_erroneous", Holds, "Safety 2: misleading information (display)"),
        e(Baseline, "one_satellite_corrupted", Fails, "Attack 1: malicious GPS signal"),
        e(Baseline, "one_satellite_lost", Holds, "Attack 2: scrambled constellation"),
        e(Hardened, "one_satellite_corrupted", Holds, "Attack 1: malicious GPS signal"),
        e(Hardened, "one_satellite_lost", Holds, "Attack 2: scrambled constellation"),
        e(Hardened, "RNAV_lost", Holds, "Attack 3: RNAV ground station neutralized"),
        e(Hardened, "one_satellite_lost_one_satellite_corrupted", Holds, "Attack 4: attacks 1 and 2"),
        e(Hardened, "one_satellite_lost_RNAV_lost", Holds, "Attack 5: attacks 2 and 3"),
        e(Hardened, "one_satellite_corrupted_RNAV_lost", Holds, "Attack 6: attacks 1 and 3"),
        e(Hardened, "one_satellite_corrupted_one_satellite_lost_RNAV_lost", Holds, "Attack 7: attacks 1, 2 and 3"),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Literal, PortId};
    use crate::semantics::{eval_expr, PortEnv};
    use crate::ValueId;

    struct Env<'m>(&'m Model, Vec<(&'static str, Status)>);

    impl PortEnv for Env<'_> {
        fn port_status(&self, p: PortId) -> Option<Status> {
            let name = &self.0.port(p).name;
            self.1.iter().find(|(n, _)| n == name).map(|(_, s)| *s)
        }
        fn port_value(&self, p: PortId) -> Option<ValueId> {
            self.port_status(p).map(|_| ValueId(0))
        }
    }

    fn eval(m: &Model, port: &str, value: bool, own: Status, env: Vec<(&'static str, Status)>) -> Literal {
        let t = m.transfer(m.port_id(port).unwrap()).unwrap();
        let expr = if value { t.value.as_ref().unwrap() } else { &t.status };
        eval_expr(expr, own, &Env(m, env)).unwrap()
    }

    use Status::{Err, Lost, Ok};

    #[test]
    fn baseline_shape() {
        let m = baseline_lpv_model();
        assert_eq!(m.functions().len(), 16);
        assert_eq!(m.values(), ["v0", "v1"]);
        assert!(m.validate_structure().is_empty());
        assert!(hardened_lpv_model().validate_structure().is_empty());
    }

    #[test]
    fn baseline_transfers() {
        let m = baseline_lpv_model();
        assert_eq!(eval(&m, "oDeviation1", false, Ok, vec![("iSBAS1", Ok)]), Literal::Status(Ok));
        let env = vec![("iDeviation11", Ok), ("iDeviation21", Ok), ("iSelection1", Ok)];
        assert_eq!(eval(&m, "oSelected1", false, Err, env), Literal::Status(Err));
    }

    #[test]
    fn hardened_lpv_transfers() {
        let m = hardened_lpv_model();
        let env = |sbas| vec![("iSBAS1", sbas), ("iRNAV1", Ok), ("iBaroAltimeter1", Ok)];
        assert_eq!(eval(&m, "oDeviation1", false, Ok, env(Lost)), Literal::Status(Ok));
        assert_eq!(eval(&m, "oDeviation1", false, Ok, env(Err)), Literal::Status(Lost));
        let v1 = Literal::Value(m.value_id("v1").unwrap());
        assert_eq!(eval(&m, "LPV1_alarm", true, Ok, env(Err)), v1);
    }

    #[test]
    fn corpus_entries() {
        let c = corpus();
        let find = |model, name| c.iter().find(|e| e.model == model && e.assertion == name).unwrap();
        assert_eq!(find(ModelId::Baseline, "one_satellite_corrupted").expected, Outcome::Fails);
        assert_eq!(find(ModelId::Baseline, "one_display_erroneous").expected, Outcome::Holds);
        assert_eq!(
            find(ModelId::Hardened, "one_satellite_corrupted_one_satellite_lost_RNAV_lost").expected,
            Outcome::Holds
        );
        for e in &c {
            assert!(e.model.model().assertion(e.assertion).is_some(), "{}", e.assertion);
        }
        let mut names: Vec<_> = c.iter().map(|e| (e.model, e.assertion)).collect();
        names.dedup();
        assert_eq!(names.len(), c.len());
    }

    #[test]
    fn conclusions_match_the_listings() {
        let check = |m: &Model, name: &str, text: &str| {
            let a = m.assertion(name).unwrap();
            let crate::model::AssertionKind::Implication { conclusion, .. } = &a.kind else {
                panic!("{name} is structural");
            };
            let rendered: Vec<String> = conclusion.iter().map(|c| c.display(m).to_string()).collect();
            assert_eq!(rendered.join(" and "), text);
        };
        check(&baseline_lpv_model(), "one_display_erroneous", "oReset1.value = v1");
        check(
            &hardened_lpv_model(),
            "one_satellite_corrupted_one_satellite_lost_RNAV_lost",
            "LPV1_alarm.value = v1",
        );
    }

    /// Outside the two LPV computers, hardening only adds functions and flows.
    #[test]
    fn hardening_delta() {
        let base = baseline_lpv_def();
        let hard = hardened_lpv_def();
        let changed = ["ComputeLPV1", "ComputeLPV2"];
        for f in &base.functions {
            let h = hard.functions.iter().find(|g| g.name == f.name).unwrap();
            if changed.contains(&f.name.as_str()) {
                assert_ne!(h, f);
            } else {
                assert_eq!(h, f, "{}", f.name.name);
            }
        }
        let added: Vec<_> = hard
            .functions
            .iter()
            .filter(|g| !base.functions.iter().any(|f| f.name == g.name))
            .map(|g| g.name.name.as_str())
            .collect();
        assert_eq!(added, ["RNAV1", "BaroAltimeter1", "RNAV2", "BaroAltimeter2"]);
        for flow in &base.flows {
            assert!(hard.flows.contains(flow));
        }
        for flow in hard.flows.iter().filter(|f| !base.flows.contains(f)) {
            let t = flow.target.as_str();
            assert!(t.starts_with("iRNAV") || t.starts_with("iBaroAltimeter"), "{t}");
        }
    }
}
