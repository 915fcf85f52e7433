//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use failprop::case_study::{baseline_lpv_model, corpus, hardened_lpv_model, ModelId};
use failprop::checker::{check_named, minimal_cutsets, AssertionKind, CheckOptions};
use failprop::dsl::{parse_condition, parse_model, serialize};
use failprop::model::FunctionId;
use failprop::semantics::{ScenarioSpace, Solver};
use failprop::{build_model, Model, Status};
use failprop_testkit::{check_minimal, random_model, series_chain, validate_assignment, Oracle};
use serde_json::Value;

const RANDOM_MODELS: u64 = 50;
const ROUND_TRIP_MODELS: u64 = 100;
const LPV_CONDITION: &str = "oSelected1.status = OK and oSelected2.status = OK and oSelected3.status = OK";

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn shipped(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/models")
        .join(name)
        .display()
        .to_string()
}

fn cli(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = failprop_cli::run(std::iter::once("failprop").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap())
}

fn random(seed: u64) -> Model {
    build_model(&random_model(seed)).expect("generated models are valid")
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn case_study_verdicts() -> Outcome {
    let start = Instant::now();
    let opts = CheckOptions::default();
    let entries = corpus();
    let mut matched = 0;
    for id in [ModelId::Baseline, ModelId::Hardened] {
        let model = id.model();
        let mine: Vec<_> = entries.iter().filter(|e| e.model == id).collect();
        let names: Vec<String> = mine.iter().map(|e| e.assertion.to_string()).collect();
        let verdicts = check_named(&model, &names, &opts).map_err(|e| e.to_string())?;
        for (v, e) in verdicts.iter().zip(&mine) {
            ensure(v.outcome == e.expected, || {
                format!("{id} {}: expected {:?}, got {:?}", e.assertion, e.expected, v.outcome)
            })?;
            matched += 1;
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(10), || format!("took {elapsed:?}"))?;
    Ok(format!("{matched}/{} outcomes, {:.2}s single-threaded", entries.len(), elapsed.as_secs_f64()))
}

fn attack_narrative() -> Outcome {
    let (code, out) = cli(&[
        "check",
        &shipped("lpv_baseline.fprop"),
        "--assert",
        "one_satellite_corrupted",
        "--format",
        "json",
        "--workers",
        "1",
    ]);
    ensure(code == 1, || format!("exit code {code}"))?;
    let doc: Value = serde_json::from_str(&out).map_err(|e| e.to_string())?;
    let result = &doc["results"][0];
    ensure(result["outcome"] == "Fails", || format!("outcome {}", result["outcome"]))?;
    let ces = result["counterexamples"].as_array().ok_or("no counterexamples")?;
    ensure(!ces.is_empty(), || "no counterexamples".into())?;
    for c in ces {
        let failures = c["scenario"]["failures"].as_array().ok_or("no failures")?;
        ensure(
            failures.len() == 1 && failures[0]["function"] == "GPS" && failures[0]["status"] == "Err",
            || format!("failures {failures:?}"),
        )?;
        let status = |port: &str| -> Result<String, String> {
            c["ports"]
                .as_array()
                .and_then(|ps| ps.iter().find(|p| p["port"] == port))
                .and_then(|p| p["status"].as_str())
                .map(str::to_string)
                .ok_or_else(|| format!("port {port} missing"))
        };
        for port in ["oSBAS1", "oSBAS2", "oDeviation1", "oDeviation2", "oSelected1", "oSelected2", "oSelected3"] {
            let s = status(port)?;
            ensure(s != "OK", || format!("{port} is OK"))?;
        }
    }
    Ok(format!("{} counterexample(s), GPS=Err propagates to every display", ces.len()))
}

fn oracle_equivalence() -> Outcome {
    let opts = CheckOptions {
        counterexample_cap: usize::MAX,
        ..CheckOptions::exhaustive()
    };
    let mut assertions = 0;
    for seed in 0..RANDOM_MODELS {
        let m = random(seed);
        ensure(m.functions().len() <= 6 && m.ports().len() <= 8, || format!("seed {seed} too large"))?;
        let oracle = Oracle::new(&m);
        for a in m.assertions() {
            let v = &check_named(&m, std::slice::from_ref(&a.name), &opts).map_err(|e| e.to_string())?[0];
            let o = oracle.check(&a.name);
            ensure(v.outcome == o.outcome, || format!("seed {seed} {}: {:?} vs {:?}", a.name, v.outcome, o.outcome))?;
            if matches!(a.kind, AssertionKind::Implication { .. }) {
                let got: Vec<_> = v
                    .counterexamples
                    .iter()
                    .map(|c| (c.scenario.clone(), c.assignment.clone(), c.violated))
                    .collect();
                ensure(
                    v.statistics.pairs_matching == o.pairs_matching && got == o.counterexamples,
                    || format!("seed {seed} {}: counterexamples differ", a.name),
                )?;
            }
            assertions += 1;
        }
    }
    Ok(format!("{RANDOM_MODELS} models, {assertions} assertions agree"))
}

fn validate_space(m: &Model, space: &ScenarioSpace, label: &str) -> Result<u64, String> {
    let solver = Solver::new(m);
    let mut n = 0;
    for s in space.collect() {
        for a in solver.solve(&s) {
            validate_assignment(m, &s, &a).map_err(|e| format!("{label}: {e}"))?;
            n += 1;
        }
    }
    Ok(n)
}

fn solver_soundness() -> Outcome {
    let mut checked = 0;
    for m in [baseline_lpv_model(), hardened_lpv_model()] {
        checked += validate_space(&m, &ScenarioSpace::full(&m).with_max_failures(Some(2)), m.name())?;
        for a in m.assertions() {
            if let AssertionKind::Implication { hypothesis, .. } = &a.kind {
                let space = ScenarioSpace::restricted(&m, hypothesis).with_max_failures(Some(2));
                checked += validate_space(&m, &space, &a.name)?;
            }
        }
    }
    for seed in 0..RANDOM_MODELS {
        let m = random(seed);
        checked += validate_space(&m, &ScenarioSpace::full(&m), &format!("seed {seed}"))?;
    }
    Ok(format!("{checked} assignments validated, 0 violations"))
}

fn cut_sets() -> Outcome {
    let opts = CheckOptions::default();
    let b = baseline_lpv_model();
    let cond = parse_condition(LPV_CONDITION, &b).map_err(|e| e.to_string())?;
    let r = minimal_cutsets(&b, &cond, 2, &opts).map_err(|e| e.to_string())?;
    for i in 1..=2 {
        let f = b.function_id(&format!("ComputeLPV{i}")).ok_or("no ComputeLPV")?;
        ensure(!r.cut_sets.iter().any(|c| c.failures == [(f, Status::Lost)]), || {
            format!("{{ComputeLPV{i}:Lost}} is a cut set")
        })?;
    }
    for c in &r.cut_sets {
        check_minimal(&b, &cond, &c.failures)?;
    }

    let s = build_model(&series_chain()).map_err(|e| format!("{e:?}"))?;
    let scond = parse_condition("oG.status = OK", &s).map_err(|e| e.to_string())?;
    let sr = minimal_cutsets(&s, &scond, 2, &opts).map_err(|e| e.to_string())?;
    let got: Vec<Vec<(FunctionId, Status)>> = sr.cut_sets.iter().map(|c| c.failures.clone()).collect();
    let expected = Oracle::new(&s).cutsets(&scond, 2);
    ensure(got == expected, || format!("series chain: {got:?} vs {expected:?}"))?;
    for c in &got {
        check_minimal(&s, &scond, c)?;
    }
    Ok(format!(
        "baseline: {} minimal sets up to order 2, none is {{ComputeLPVi:Lost}}; series chain matches oracle",
        r.cut_sets.len()
    ))
}

fn round_trip_one(text: &str, label: &str) -> Result<(), String> {
    let first = parse_model(text).map_err(|e| format!("{label}: {e}"))?;
    let printed = serialize(&first);
    let second = parse_model(&printed).map_err(|e| format!("{label} reparse: {e}"))?;
    ensure(first == second, || format!("{label}: models differ after round trip"))?;
    ensure(serialize(&second) == printed, || format!("{label}: printer is not a fixpoint"))
}

fn dsl_round_trip() -> Outcome {
    for name in ["lpv_baseline.fprop", "lpv_hardened.fprop"] {
        let text = std::fs::read_to_string(shipped(name)).map_err(|e| e.to_string())?;
        round_trip_one(&text, name)?;
    }
    for seed in 0..ROUND_TRIP_MODELS {
        round_trip_one(&serialize(&random(seed)), &format!("seed {seed}"))?;
    }
    Ok(format!("2 shipped + {ROUND_TRIP_MODELS} random models"))
}

fn determinism() -> Outcome {
    let workers = std::thread::available_parallelism().map_or(4, |n| n.get().max(4)).to_string();
    let mut reports = 0;
    for name in ["lpv_baseline.fprop", "lpv_hardened.fprop"] {
        let path = shipped(name);
        for format in ["text", "json"] {
            let one = cli(&["check", &path, "--format", format, "--workers", "1"]);
            let many = cli(&["check", &path, "--format", format, "--workers", &workers]);
            ensure(one == many, || format!("{name} {format}: reports differ"))?;
            reports += 1;
        }
    }
    Ok(format!("{reports} reports identical with 1 and {workers} workers"))
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("case-study verdict regression", case_study_verdicts),
        ("attack 1 counterexample narrative", attack_narrative),
        ("oracle equivalence on random models", oracle_equivalence),
        ("solver soundness", solver_soundness),
        ("cut sets", cut_sets),
        ("DSL round trip", dsl_round_trip),
        ("determinism across worker counts", determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {}. {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {}. {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
