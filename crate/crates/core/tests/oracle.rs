use failprop::checker::{check_named, minimal_cutsets, AssertionKind, CheckOptions};
use failprop::semantics::{Solver, ScenarioSpace};
use failprop::{build_model, Model};
use failprop_testkit::{random_model, validate_assignment, Oracle};
use proptest::prelude::*;

fn model(seed: u64) -> Model {
    build_model(&random_model(seed)).unwrap()
}

fn solver_matches_oracle(m: &Model, oracle: &Oracle) -> Result<(), TestCaseError> {
    let solver = Solver::new(m);
    for s in ScenarioSpace::full(m).collect() {
        let got = solver.solve(&s);
        for a in &got {
            prop_assert!(validate_assignment(m, &s, a).is_ok(), "{}", validate_assignment(m, &s, a).unwrap_err());
        }
        prop_assert_eq!(&got, &oracle.solve(&s), "scenario {:?}", s);
    }
    Ok(())
}

fn checker_matches_oracle(m: &Model, oracle: &Oracle) -> Result<(), TestCaseError> {
    let opts = CheckOptions {
        counterexample_cap: usize::MAX,
        ..CheckOptions::exhaustive()
    };
    for a in m.assertions() {
        let v = &check_named(m, std::slice::from_ref(&a.name), &opts).unwrap()[0];
        let o = oracle.check(&a.name);
        prop_assert_eq!(v.outcome, o.outcome, "{}", a.name);
        if matches!(a.kind, AssertionKind::Implication { .. }) {
            prop_assert_eq!(v.statistics.pairs_matching, o.pairs_matching);
            prop_assert_eq!(v.statistics.counterexamples_found, o.counterexamples.len() as u64);
            let got: Vec<_> = v
                .counterexamples
                .iter()
                .map(|c| (c.scenario.clone(), c.assignment.clone(), c.violated))
                .collect();
            prop_assert_eq!(got, o.counterexamples);
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn solve_agrees_with_brute_force(seed in any::<u64>()) {
        let m = model(seed);
        solver_matches_oracle(&m, &Oracle::new(&m))?;
    }

    #[test]
    fn check_agrees_with_brute_force(seed in any::<u64>()) {
        let m = model(seed);
        checker_matches_oracle(&m, &Oracle::new(&m))?;
    }

    #[test]
    fn cutsets_agree_with_brute_force(seed in any::<u64>(), order in 1usize..=2) {
        let m = model(seed);
        let oracle = Oracle::new(&m);
        for a in m.assertions() {
            if let AssertionKind::Implication { conclusion, .. } = &a.kind {
                let got = minimal_cutsets(&m, conclusion, order, &CheckOptions::default()).unwrap();
                let got: Vec<_> = got.cut_sets.into_iter().map(|c| c.failures).collect();
                prop_assert_eq!(got, oracle.cutsets(conclusion, order));
            }
        }
    }
}

#[test]
fn fixed_seed_regression() {
    for seed in 0..40 {
        let m = model(seed);
        let oracle = Oracle::new(&m);
        solver_matches_oracle(&m, &oracle).unwrap();
        checker_matches_oracle(&m, &oracle).unwrap();
    }
}
