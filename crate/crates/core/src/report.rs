//! Text and JSON renderings of verdicts, instances, cut sets and violations.
//!
//! JSON documents share the top-level shape
//! `{tool_version, model, command, results: [...]}`. Both renderings are
//! pure functions of their inputs; wall-clock time is only included when
//! asked for, so reports are byte-stable across runs and worker counts.

use std::fmt::Write;

use serde::Serialize;

use crate::checker::{CutSetReport, Instance, Verdict};
use crate::model::{FunctionId, Model, Violation};
use crate::semantics::{Assignment, Scenario};
use crate::Status;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ReportOptions {
    pub timings: bool,
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    tool_version: &'static str,
    model: &'a str,
    command: &'a str,
    results: Vec<T>,
}

fn envelope<T: Serialize>(model: &str, command: &str, results: Vec<T>) -> String {
    let mut s = serde_json::to_string_pretty(&Envelope {
        tool_version: TOOL_VERSION,
        model,
        command,
        results,
    })
    .expect("report serialization");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct FailureJson<'a> {
    function: &'a str,
    status: Status,
}

#[derive(Serialize)]
struct FreeValueJson<'a> {
    port: &'a str,
    value: &'a str,
}

#[derive(Serialize)]
struct ScenarioJson<'a> {
    failures: Vec<FailureJson<'a>>,
    free_values: Vec<FreeValueJson<'a>>,
}

#[derive(Serialize)]
struct PortJson<'a> {
    port: &'a str,
    status: Status,
    value: &'a str,
}

fn scenario_json<'a>(model: &'a Model, s: &Scenario) -> ScenarioJson<'a> {
    ScenarioJson {
        failures: s
            .failed()
            .map(|(f, status)| FailureJson {
                function: &model.function(f).name,
                status,
            })
            .collect(),
        free_values: model
            .free_inputs()
            .iter()
            .zip(&s.free_values)
            .map(|(p, v)| FreeValueJson {
                port: &model.port(*p).name,
                value: model.value_name(*v),
            })
            .collect(),
    }
}

fn ports_json<'a>(model: &'a Model, a: &Assignment) -> Vec<PortJson<'a>> {
    model
        .port_ids()
        .map(|p| PortJson {
            port: &model.port(p).name,
            status: a.status(p),
            value: model.value_name(a.value(p)),
        })
        .collect()
}

#[derive(Serialize)]
struct CounterexampleJson<'a> {
    scenario: ScenarioJson<'a>,
    violated: String,
    ports: Vec<PortJson<'a>>,
}

#[derive(Serialize)]
struct StatisticsJson {
    scenario_space: u128,
    scenarios_enumerated: u64,
    solutions_examined: u64,
    pairs_matching: u64,
    counterexamples_found: u64,
    zero_solution_scenarios: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    wall_time_ms: Option<f64>,
}

#[derive(Serialize)]
struct VerdictJson<'a> {
    assertion: &'a str,
    outcome: crate::checker::Outcome,
    statistics: StatisticsJson,
    counterexamples: Vec<CounterexampleJson<'a>>,
    warnings: &'a [String],
}

fn violated_text(model: &Model, v: &Verdict, conjunct: usize) -> String {
    match model.assertion(&v.assertion).map(|a| &a.kind) {
        Some(crate::model::AssertionKind::Implication { conclusion, .. }) => {
            conclusion[conjunct].display(model).to_string()
        }
        _ => format!("conjunct #{conjunct}"),
    }
}

fn failures_text(model: &Model, s: &Scenario) -> String {
    let parts: Vec<String> = s
        .failed()
        .map(|(f, st)| format!("{}={st}", model.function(f).name))
        .collect();
    if parts.is_empty() {
        "none".into()
    } else {
        parts.join(", ")
    }
}

fn free_text(model: &Model, s: &Scenario) -> String {
    let parts: Vec<String> = model
        .free_inputs()
        .iter()
        .zip(&s.free_values)
        .map(|(p, v)| format!("{}={}", model.port(*p).name, model.value_name(*v)))
        .collect();
    if parts.is_empty() {
        "none".into()
    } else {
        parts.join(", ")
    }
}

fn port_table(out: &mut String, model: &Model, a: &Assignment, indent: &str) {
    let width = model.ports().iter().map(|p| p.name.len()).max().unwrap_or(0);
    for p in model.port_ids() {
        let _ = writeln!(
            out,
            "{indent}{:<width$}  {:<4}  {}",
            model.port(p).name,
            a.status(p).as_str(),
            model.value_name(a.value(p)),
        );
    }
}

/// Verdicts of `check`, in the given order.
pub fn render_check(model: &Model, verdicts: &[Verdict], format: Format, opts: ReportOptions) -> String {
    match format {
        Format::Json => {
            let results = verdicts
                .iter()
                .map(|v| VerdictJson {
                    assertion: &v.assertion,
                    outcome: v.outcome,
                    statistics: StatisticsJson {
                        scenario_space: v.statistics.scenario_space,
                        scenarios_enumerated: v.statistics.scenarios_enumerated,
                        solutions_examined: v.statistics.solutions_examined,
                        pairs_matching: v.statistics.pairs_matching,
                        counterexamples_found: v.statistics.counterexamples_found,
                        zero_solution_scenarios: v.statistics.zero_solution_scenarios,
                        wall_time_ms: opts
                            .timings
                            .then_some(v.statistics.wall_time.as_secs_f64() * 1e3),
                    },
                    counterexamples: v
                        .counterexamples
                        .iter()
                        .map(|c| CounterexampleJson {
                            scenario: scenario_json(model, &c.scenario),
                            violated: violated_text(model, v, c.violated),
                            ports: ports_json(model, &c.assignment),
                        })
                        .collect(),
                    warnings: &v.warnings,
                })
                .collect();
            envelope(model.name(), "check", results)
        }
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "model {}", model.name());
            for v in verdicts {
                let s = &v.statistics;
                let _ = writeln!(out, "{}: {}", v.assertion, v.outcome);
                let _ = write!(
                    out,
                    "  scenarios {} of {}, solutions {}, matching {}, counterexamples {}",
                    s.scenarios_enumerated, s.scenario_space, s.solutions_examined, s.pairs_matching, s.counterexamples_found
                );
                if opts.timings {
                    let _ = write!(out, ", time {:.3} ms", s.wall_time.as_secs_f64() * 1e3);
                }
                out.push('\n');
                for w in &v.warnings {
                    let _ = writeln!(out, "  warning: {w}");
                }
                for (i, c) in v.counterexamples.iter().enumerate() {
                    let _ = writeln!(out, "  counterexample {}:", i + 1);
                    let _ = writeln!(out, "    failures: {}", failures_text(model, &c.scenario));
                    let _ = writeln!(out, "    free values: {}", free_text(model, &c.scenario));
                    let _ = writeln!(out, "    violated: {}", violated_text(model, v, c.violated));
                    let _ = writeln!(out, "    ports:");
                    port_table(&mut out, model, &c.assignment, "      ");
                }
            }
            let count = |o| verdicts.iter().filter(|v| v.outcome == o).count();
            use crate::checker::Outcome::*;
            let _ = writeln!(
                out,
                "summary: {} holds, {} fails, {} vacuous",
                count(Holds),
                count(Fails),
                count(Vacuous)
            );
            out
        }
    }
}

#[derive(Serialize)]
struct InstanceJson<'a> {
    scenario: ScenarioJson<'a>,
    ports: Vec<PortJson<'a>>,
}

/// Result of `run`: one instance, or none.
pub fn render_instance(model: &Model, instance: Option<&Instance>, format: Format) -> String {
    match format {
        Format::Json => envelope(
            model.name(),
            "run",
            instance
                .map(|i| InstanceJson {
                    scenario: scenario_json(model, &i.scenario),
                    ports: ports_json(model, &i.assignment),
                })
                .into_iter()
                .collect(),
        ),
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "model {}", model.name());
            match instance {
                None => out.push_str("no instance\n"),
                Some(i) => {
                    let _ = writeln!(out, "instance:");
                    let _ = writeln!(out, "  failures: {}", failures_text(model, &i.scenario));
                    let _ = writeln!(out, "  free values: {}", free_text(model, &i.scenario));
                    let _ = writeln!(out, "  ports:");
                    port_table(&mut out, model, &i.assignment, "    ");
                }
            }
            out
        }
    }
}

#[derive(Serialize)]
struct CutSetJson<'a> {
    order: usize,
    failures: Vec<FailureJson<'a>>,
    /// Free-input valuations under which the failures violate the
    /// condition; absent for unconditional cut sets.
    #[serde(skip_serializing_if = "Option::is_none")]
    only_when: Option<Vec<Vec<FreeValueJson<'a>>>>,
}

fn failures_json<'a>(model: &'a Model, fs: &[(FunctionId, Status)]) -> Vec<FailureJson<'a>> {
    fs.iter()
        .map(|(f, s)| FailureJson {
            function: &model.function(*f).name,
            status: *s,
        })
        .collect()
}

fn failure_set_text(model: &Model, fs: &[(FunctionId, Status)]) -> String {
    let parts: Vec<String> = fs
        .iter()
        .map(|(f, s)| format!("{}:{s}", model.function(*f).name))
        .collect();
    format!("{{{}}}", parts.join(", "))
}

/// Result of `cutsets`. Unconditional cut sets first, then failure sets
/// whose effect depends on free inputs.
pub fn render_cutsets(model: &Model, report: &CutSetReport, format: Format) -> String {
    let valuation_json = |vals: &[crate::ValueId]| -> Vec<FreeValueJson<'_>> {
        model
            .free_inputs()
            .iter()
            .zip(vals)
            .map(|(p, v)| FreeValueJson {
                port: &model.port(*p).name,
                value: model.value_name(*v),
            })
            .collect()
    };
    match format {
        Format::Json => {
            let mut results: Vec<CutSetJson<'_>> = report
                .cut_sets
                .iter()
                .map(|c| CutSetJson {
                    order: c.order(),
                    failures: failures_json(model, &c.failures),
                    only_when: None,
                })
                .collect();
            results.extend(report.conditional.iter().map(|c| CutSetJson {
                order: c.failures.len(),
                failures: failures_json(model, &c.failures),
                only_when: Some(c.violating.iter().map(|v| valuation_json(v)).collect()),
            }));
            if !report.nominal_violations.is_empty() {
                results.insert(0, CutSetJson {
                    order: 0,
                    failures: Vec::new(),
                    only_when: (!report.violated_nominally)
                        .then(|| report.nominal_violations.iter().map(|v| valuation_json(v)).collect()),
                });
            }
            envelope(model.name(), "cutsets", results)
        }
        Format::Text => {
            let mut out = String::new();
            let cond: Vec<String> = report.condition.iter().map(|a| a.display(model).to_string()).collect();
            let _ = writeln!(out, "model {}", model.name());
            let _ = writeln!(out, "condition: {}", cond.join(" and "));
            let _ = writeln!(out, "max order: {}", report.max_order);
            if report.violated_nominally {
                let _ = writeln!(out, "condition fails with every function OK; the empty set is the only cut set");
                return out;
            }
            if !report.nominal_violations.is_empty() {
                let when: Vec<String> = report
                    .nominal_violations
                    .iter()
                    .map(|v| {
                        valuation_json(v)
                            .iter()
                            .map(|f| format!("{}={}", f.port, f.value))
                            .collect::<Vec<_>>()
                            .join(", ")
                    })
                    .collect();
                let _ = writeln!(out, "condition fails with every function OK when {}", when.join(" | "));
            }
            for order in 1..=report.max_order {
                let sets: Vec<_> = report.of_order(order).collect();
                let _ = writeln!(out, "order {order}: {} cut set(s)", sets.len());
                for c in sets {
                    let _ = writeln!(out, "  {}", failure_set_text(model, &c.failures));
                }
            }
            if !report.conditional.is_empty() {
                let _ = writeln!(out, "conditional on free inputs:");
                for c in &report.conditional {
                    let when: Vec<String> = c
                        .violating
                        .iter()
                        .map(|v| {
                            valuation_json(v)
                                .iter()
                                .map(|f| format!("{}={}", f.port, f.value))
                                .collect::<Vec<_>>()
                                .join(", ")
                        })
                        .collect();
                    let _ = writeln!(
                        out,
                        "  {} when {}",
                        failure_set_text(model, &c.failures),
                        when.join(" | ")
                    );
                }
            }
            out
        }
    }
}

#[derive(Serialize)]
struct ViolationJson<'a> {
    rule: &'static str,
    element: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    location: Option<String>,
}

/// Result of `validate`.
pub fn render_violations(model_name: &str, violations: &[Violation], format: Format) -> String {
    match format {
        Format::Json => envelope(
            model_name,
            "validate",
            violations
                .iter()
                .map(|v| ViolationJson {
                    rule: v.rule.describe(),
                    element: &v.element,
                    location: v.span.as_ref().map(|s| s.to_string()),
                })
                .collect(),
        ),
        Format::Text => {
            let mut out = String::new();
            for v in violations {
                let _ = writeln!(out, "{v}");
            }
            if violations.is_empty() {
                let _ = writeln!(out, "model {}: structure ok", model_name);
            }
            out
        }
    }
}
