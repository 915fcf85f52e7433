use failprop::case_study::{baseline_lpv_model, hardened_lpv_model};
use failprop::model::{Chain, FunctionDef, RawTerm};
use failprop::semantics::{solution_count_is_one, solve, Scenario, ScenarioSpace, Solver};
use failprop::{build_model, Executor, Model, ModelDef, Status};
use failprop_testkit::{brute_force_solve, random_model, series_chain, validate_assignment};
use proptest::prelude::*;

fn scenario(m: &Model, failures: &[(&str, Status)], pilot: Option<&str>) -> Scenario {
    let mut s = Scenario::nominal(m);
    for (f, st) in failures {
        s.statuses[m.function_id(f).unwrap().index()] = *st;
    }
    if let Some(v) = pilot {
        s.free_values[0] = m.value_id(v).unwrap();
    }
    s
}

fn status(m: &Model, a: &failprop::semantics::Assignment, port: &str) -> Status {
    a.status(m.port_id(port).unwrap())
}

#[test]
fn series_chain_nominal() {
    let m = build_model(&series_chain()).unwrap();
    let sols = solve(&m, &Scenario::nominal(&m));
    assert_eq!(sols.len(), 1);
    assert!(sols[0].status.iter().all(|s| s.is_ok()));
}

#[test]
fn baseline_nominal_with_second_chain_selected() {
    let m = baseline_lpv_model();
    let s = scenario(&m, &[], Some("v1"));
    let sols = solve(&m, &s);
    assert_eq!(sols, brute_force_solve(&m, &s));
    assert_eq!(sols.len(), 1);
    for d in ["oSelected1", "oSelected2", "oSelected3"] {
        assert_eq!(status(&m, &sols[0], d), Status::Ok);
    }
    validate_assignment(&m, &s, &sols[0]).unwrap();
}

#[test]
fn baseline_gps_err_loses_a_display() {
    let m = baseline_lpv_model();
    let s = scenario(&m, &[("GPS", Status::Err)], None);
    let sols = solve(&m, &s);
    assert_eq!(sols, brute_force_solve(&m, &s));
    assert_eq!(sols.len(), 1);
    assert!(["oSelected1", "oSelected2", "oSelected3"]
        .iter()
        .any(|d| status(&m, &sols[0], d) != Status::Ok));
}

fn echo_ring() -> ModelDef {
    // Two functions copying each other's status: o = i both ways.
    let mut def = ModelDef::new("ring", &["v0"]);
    def.function(FunctionDef::new("A").input("ia").output("oa").status("oa", Chain::just(RawTerm::status("ia"))))
        .function(FunctionDef::new("B").input("ib").output("ob").status("ob", Chain::just(RawTerm::status("ib"))))
        .flow("oa", "ib")
        .flow("ob", "ia");
    def
}

#[test]
fn unanchored_ring_is_not_unique() {
    let m = build_model(&echo_ring()).unwrap();
    let u = solution_count_is_one(&m, None, &Executor::sequential());
    assert!(!u.unique);
    let (w, count) = u.witness.expect("witness");
    assert!(count >= 2);
    assert_eq!(solve(&m, &w).len(), count);
}

#[test]
fn acyclic_models_are_unique() {
    let m = build_model(&series_chain()).unwrap();
    assert!(solution_count_is_one(&m, None, &Executor::sequential()).unique);
}

#[test]
fn case_study_unique_over_the_full_space() {
    // Every scenario of the baseline, not just the bounded ones.
    for m in [baseline_lpv_model(), hardened_lpv_model()] {
        let solver = Solver::new(&m);
        let mut n = 0u64;
        ScenarioSpace::full(&m).with_max_failures(Some(1)).for_each_chunk(4096, |chunk| {
            for s in chunk {
                assert_eq!(solver.solve(s).len(), 1);
                n += 1;
            }
            std::ops::ControlFlow::Continue(())
        });
        assert!(n > 0);
    }
}

#[test]
fn inconsistent_cycle_yields_nothing() {
    // o = not-OK of itself has no fixed point when the function is OK.
    let mut def = ModelDef::new("liar", &["v0"]);
    def.function(
        FunctionDef::new("F").input("i").output("o").status(
            "o",
            Chain::when(
                failprop::model::Guard::eq(RawTerm::status("i"), RawTerm::lit(Status::Ok)),
                RawTerm::lit(Status::Lost),
            )
            .otherwise(RawTerm::lit(Status::Ok)),
        ),
    )
    .flow("o", "i");
    let m = build_model(&def).unwrap();
    assert!(solve(&m, &Scenario::nominal(&m)).is_empty());
    let u = solution_count_is_one(&m, None, &Executor::sequential());
    assert!(!u.unique);
    let (w, count) = u.witness.unwrap();
    assert_eq!(count, 0);
    assert!(solve(&m, &w).is_empty());
}

proptest! {
    #[test]
    fn solve_is_pure(seed in any::<u64>()) {
        let m = build_model(&random_model(seed)).unwrap();
        for s in ScenarioSpace::full(&m).collect() {
            prop_assert_eq!(solve(&m, &s), solve(&m, &s));
        }
    }

    #[test]
    fn acyclic_random_models_have_one_solution(seed in any::<u64>()) {
        let m = build_model(&random_model(seed)).unwrap();
        if failprop::model::dependency_graph(&m).is_acyclic() {
            for s in ScenarioSpace::full(&m).collect() {
                prop_assert_eq!(solve(&m, &s).len(), 1);
            }
        }
    }

    #[test]
    fn uniqueness_witness_is_genuine(seed in any::<u64>()) {
        let m = build_model(&random_model(seed)).unwrap();
        let u = solution_count_is_one(&m, None, &Executor::sequential());
        let counts: Vec<usize> = ScenarioSpace::full(&m).collect().iter().map(|s| solve(&m, s).len()).collect();
        prop_assert_eq!(u.unique, counts.iter().all(|&c| c == 1));
        if let Some((w, count)) = u.witness {
            prop_assert_eq!(solve(&m, &w).len(), count);
            prop_assert_ne!(count, 1);
        }
    }
}
