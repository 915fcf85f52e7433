use failprop::case_study::{baseline_lpv_def, baseline_lpv_model, hardened_lpv_model};
use failprop::model::{
    dependency_graph, validate_structure, BuildError, Chain, Direction, FunctionDef, Guard, RawTerm, Rule,
};
use failprop::{build_model, ModelDef, Status};
use failprop_testkit::random_model;
use proptest::prelude::*;

fn trivial(name: &str) -> Chain<RawTerm> {
    Chain::just(RawTerm::status(name))
}

fn two_functions() -> ModelDef {
    let mut m = ModelDef::new("pair", &["v0"]);
    m.function(FunctionDef::new("F").output("o").status("o", trivial("F")))
        .function(FunctionDef::new("G").input("i").output("g").status("g", trivial("i")))
        .flow("o", "i");
    m
}

fn rules(err: BuildError) -> Vec<Rule> {
    match err {
        BuildError::Structure(v) => v.into_iter().map(|v| v.rule).collect(),
        BuildError::Semantic(e) => panic!("expected structural violations, got {e:?}"),
    }
}

#[test]
fn minimal_well_formed_model() {
    let m = build_model(&two_functions()).unwrap();
    assert_eq!(m.flows().len(), 1);
    assert!(m.validate_structure().is_empty());
}

#[test]
fn port_owned_by_two_functions() {
    let mut def = two_functions();
    def.function(FunctionDef::new("H").input("i"));
    let err = build_model(&def).unwrap_err();
    assert!(rules(err.clone()).contains(&Rule::PortOwnership));
    assert_eq!(Rule::PortOwnership.describe(), "port owned by two functions");
}

#[test]
fn flow_from_an_input() {
    let mut def = two_functions();
    def.function(FunctionDef::new("H").input("j"));
    def.flow("i", "j");
    let v = validate_structure(&def);
    assert!(v.iter().any(|v| v.rule == Rule::FlowSourceNotOutput && v.element.contains('i')));
    assert_eq!(Rule::FlowSourceNotOutput.describe(), "flow source must be an output port");
}

#[test]
fn input_with_two_flows() {
    let mut def = two_functions();
    def.function(FunctionDef::new("H").output("h").status("h", trivial("H")));
    def.flow("h", "i");
    assert!(rules(build_model(&def).unwrap_err()).contains(&Rule::InputMultipleFlows));
    assert_eq!(Rule::InputMultipleFlows.describe(), "input targeted by two flows");
}

#[test]
fn duplicate_and_dangling_names() {
    let mut def = two_functions();
    def.function(FunctionDef::new("F"));
    def.flow("o", "nowhere");
    let r = rules(build_model(&def).unwrap_err());
    assert!(r.contains(&Rule::DuplicateName));
    assert!(r.contains(&Rule::DanglingReference));
}

#[test]
fn missing_status_transfer() {
    let mut def = ModelDef::new("m", &["v0"]);
    def.function(FunctionDef::new("F").output("o"));
    assert!(rules(build_model(&def).unwrap_err()).contains(&Rule::MissingStatusTransfer));
}

#[test]
fn free_input_with_flow() {
    let mut def = ModelDef::new("m", &["v0"]);
    def.function(FunctionDef::new("F").output("o").status("o", trivial("F")))
        .function(FunctionDef::new("G").free_input("i"))
        .flow("o", "i");
    assert!(rules(build_model(&def).unwrap_err()).contains(&Rule::FreeInputWithFlow));
}

#[test]
fn transfers_cannot_read_foreign_ports() {
    let mut def = two_functions();
    def.function(FunctionDef::new("H").output("h").status("h", trivial("i")));
    assert!(matches!(build_model(&def), Err(BuildError::Semantic(_))));
    let mut def = two_functions();
    def.function(FunctionDef::new("H").output("h").status("h", trivial("F")));
    assert!(matches!(build_model(&def), Err(BuildError::Semantic(_))));
}

#[test]
fn transfer_sorts_are_checked() {
    let mut def = ModelDef::new("m", &["v0", "v1"]);
    def.function(FunctionDef::new("F").output("o").status("o", Chain::just(RawTerm::val("v1"))));
    assert!(matches!(build_model(&def), Err(BuildError::Semantic(_))));
}

#[test]
fn baseline_is_valid() {
    let m = build_model(&baseline_lpv_def()).unwrap();
    assert_eq!(m.functions().len(), 16);
    assert!(m.validate_structure().is_empty());
    let sbas1 = m.port_id("oSBAS1").unwrap();
    let target = m.port_id("iSBAS1").unwrap();
    assert_eq!(m.incoming(target), Some(sbas1));
}

#[test]
fn acyclic_chain_has_singleton_components_in_order() {
    let m = build_model(&two_functions()).unwrap();
    let g = dependency_graph(&m);
    assert!(g.components().iter().all(|c| c.len() == 1));
    let pos = |name: &str| {
        let p = m.port_id(name).unwrap();
        g.components().iter().position(|c| c.contains(&p)).unwrap()
    };
    assert!(pos("o") < pos("i") && pos("i") < pos("g"));
}

#[test]
fn case_study_graphs_are_acyclic() {
    for m in [baseline_lpv_model(), hardened_lpv_model()] {
        let g = dependency_graph(&m);
        assert_eq!(g.components().len(), m.ports().len());
        assert!(g.is_acyclic());
    }
}

#[test]
fn self_loop_is_one_component_of_two() {
    let mut def = ModelDef::new("loop", &["v0"]);
    def.function(
        FunctionDef::new("F")
            .input("i")
            .output("o")
            .status("o", Chain::when(Guard::eq(RawTerm::status("F"), RawTerm::lit(Status::Ok)), RawTerm::status("i")).otherwise(RawTerm::status("F"))),
    )
    .flow("o", "i");
    let m = build_model(&def).unwrap();
    let g = dependency_graph(&m);
    assert_eq!(g.components().len(), 1);
    assert_eq!(g.components()[0].len(), 2);
}

#[test]
fn zero_port_functions_are_allowed() {
    let mut def = ModelDef::new("m", &["v0"]);
    def.function(FunctionDef::new("Idle"))
        .function(FunctionDef::new("Sink").input("i"));
    let m = build_model(&def).unwrap();
    assert_eq!(m.functions().len(), 2);
}

proptest! {
    #[test]
    fn valid_models_satisfy_the_structural_clauses(seed in any::<u64>()) {
        let m = build_model(&random_model(seed)).unwrap();
        prop_assert!(m.validate_structure().is_empty());
        for p in m.port_ids() {
            let owners = m.functions().iter().filter(|f| f.inputs.contains(&p) || f.outputs.contains(&p)).count();
            prop_assert_eq!(owners, 1);
            if m.port(p).direction == Direction::Input {
                prop_assert!(m.flows().iter().filter(|f| f.target == p).count() <= 1);
            }
        }
        for f in m.flows() {
            prop_assert_eq!(m.port(f.source).direction, Direction::Output);
            prop_assert_eq!(m.port(f.target).direction, Direction::Input);
        }
        let g = dependency_graph(&m);
        prop_assert_eq!(g.node_count(), m.ports().len());
        let mut seen: Vec<_> = g.components().iter().flatten().copied().collect();
        seen.sort();
        prop_assert_eq!(seen, m.port_ids().collect::<Vec<_>>());
    }
}
