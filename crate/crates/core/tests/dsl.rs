use failprop::case_study::{baseline_lpv_model, hardened_lpv_model, BASELINE_FPROP, HARDENED_FPROP};
use failprop::checker::{AssertionKind, OthersOk};
use failprop::dsl::{parse_assertion, parse_model, parse_model_named, serialize, DslError, ErrorKind};
use failprop::model::{CmpOp, Field, Literal};
use failprop::{build_model, Status};
use failprop_testkit::random_model;
use proptest::prelude::*;

const MINIMAL: &str = "model tiny\nvalues { v0 v1 }\nfunction F {\n  out o\n  transfer o.status = OK\n}\n";

fn semantic_messages(err: DslError) -> Vec<String> {
    err.parse_errors()
        .iter()
        .filter(|e| e.kind == ErrorKind::Semantic)
        .map(|e| e.message.clone())
        .collect()
}

#[test]
fn minimal_model_parses() {
    let m = parse_model(MINIMAL).unwrap();
    assert_eq!(m.functions().len(), 1);
    assert_eq!(m.values(), ["v0", "v1"]);
}

#[test]
fn missing_else_is_not_total() {
    let src = "values { v0 }\nfunction F {\n  in i\n  out o\n  transfer o.status = i.status = OK implies OK\n}\n";
    let msgs = semantic_messages(parse_model(src).unwrap_err());
    assert!(msgs.iter().any(|m| m.contains("transfer chain not total")), "{msgs:?}");
}

#[test]
fn shipped_files_equal_constructors() {
    assert_eq!(parse_model(BASELINE_FPROP).unwrap(), baseline_lpv_model());
    assert_eq!(parse_model(HARDENED_FPROP).unwrap(), hardened_lpv_model());
}

#[test]
fn shipped_models_round_trip() {
    for m in [baseline_lpv_model(), hardened_lpv_model()] {
        let text = serialize(&m);
        assert_eq!(parse_model(&text).unwrap(), m);
        assert_eq!(serialize(&m), text);
    }
}

#[test]
fn one_computer_lost_assertion() {
    let m = baseline_lpv_model();
    let a = parse_assertion(
        "assert A { when ComputeLPV1.status = Lost and others OK and oSelection.value = v1 \
         expect oSelected1.status = OK and oSelected2.status = OK and oSelected3.status = OK }",
        &m,
    )
    .unwrap();
    let AssertionKind::Implication { hypothesis, conclusion } = a.kind else {
        panic!("expected an implication");
    };
    let lpv1 = m.function_id("ComputeLPV1").unwrap();
    assert_eq!(hypothesis.functions.len(), 1);
    assert_eq!(hypothesis.functions[0].function, lpv1);
    assert_eq!(hypothesis.functions[0].status, Status::Lost);
    assert_eq!(hypothesis.others, OthersOk::Except(vec![]));
    assert_eq!(hypothesis.ports.len(), 1);
    assert_eq!(hypothesis.ports[0].rhs, Literal::Value(m.value_id("v1").unwrap()));
    assert_eq!(conclusion.len(), 3);
    for (i, atom) in conclusion.iter().enumerate() {
        assert_eq!(m.port(atom.port).name, format!("oSelected{}", i + 1));
        assert_eq!((atom.field, atom.op, atom.rhs), (Field::Status, CmpOp::Eq, Literal::Status(Status::Ok)));
    }
    // Same as the shipped assertion apart from its name.
    assert_eq!(
        m.assertion("one_computer_lost").unwrap().kind,
        parse_assertion(
            "assert x { when ComputeLPV1.status = Lost and others OK and oSelection.value = v1 \
             expect oSelected1.status = OK and oSelected2.status = OK and oSelected3.status = OK }",
            &m
        )
        .unwrap()
        .kind
    );
}

#[test]
fn nominal_assertion() {
    let m = baseline_lpv_model();
    let a = parse_assertion("assert T { when others OK expect oSelected1.status = OK }", &m).unwrap();
    let AssertionKind::Implication { hypothesis, .. } = a.kind else {
        panic!("expected an implication");
    };
    assert!(hypothesis.functions.is_empty());
    assert_eq!(hypothesis.others, OthersOk::Except(vec![]));
}

#[test]
fn others_ok_accepts_exemptions() {
    let m = hardened_lpv_model();
    let a = parse_assertion("assert T { when others OK except GPS, RNAV1 expect oSelected1.status = OK }", &m).unwrap();
    let AssertionKind::Implication { hypothesis, .. } = a.kind else {
        panic!("expected an implication");
    };
    assert_eq!(
        hypothesis.others,
        OthersOk::Except(vec![m.function_id("GPS").unwrap(), m.function_id("RNAV1").unwrap()])
    );
}

#[test]
fn unknown_port_in_expect_has_span() {
    let m = baseline_lpv_model();
    let text = "assert A {\n  when others OK\n  expect oFoo.status = OK\n}";
    let err = parse_assertion(text, &m).unwrap_err();
    let e = &err.parse_errors()[0];
    assert_eq!(e.kind, ErrorKind::Semantic);
    assert!(e.message.contains("oFoo"), "{}", e.message);
    assert_eq!((e.span.line, e.span.column, e.span.length), (3, 10, 4));
}

#[test]
fn serialize_is_canonical() {
    let m = parse_model(MINIMAL).unwrap();
    assert_eq!(
        serialize(&m),
        "model tiny\n\nvalues { v0 v1 }\n\nfunction F {\n  out o\n  transfer o.status = OK\n}\n"
    );
    assert_eq!(serialize(&m), serialize(&m));
}

#[test]
fn flows_print_sorted() {
    let src = "values { v0 }\n\
               function A { out b out a transfer a.status = OK transfer b.status = OK }\n\
               function B { in y in x transfer }\n";
    // `transfer` without a body is a syntax error; used to check error kinds.
    assert_eq!(parse_model(src).unwrap_err().parse_errors()[0].kind, ErrorKind::Syntax);
    let src = "values { v0 }\n\
               function A { out b out a transfer a.status = OK transfer b.status = OK }\n\
               function B { in y in x }\n\
               flow b -> x\nflow a -> y\n";
    let text = serialize(&parse_model(src).unwrap());
    let flows: Vec<&str> = text.lines().filter(|l| l.starts_with("flow")).collect();
    assert_eq!(flows, ["flow a -> y", "flow b -> x"]);
}

#[test]
fn structural_violations_are_reported_as_such() {
    let src = "values { v0 }\nfunction A { out a transfer a.status = OK }\nfunction B { in x }\nflow x -> a\n";
    match parse_model(src).unwrap_err() {
        DslError::Structure(v) => assert!(!v.is_empty()),
        e => panic!("unexpected {e:?}"),
    }
}

#[test]
fn lexical_errors_are_classified() {
    let err = parse_model("values { v0 }\nfunction F { out o transfer o.status = OK # }\n").unwrap_err();
    assert_eq!(err.parse_errors()[0].kind, ErrorKind::Lexical);
}

#[test]
fn unicode_not_equal_and_arrow() {
    let src = "values { v0 }\nfunction A { out a transfer a.status = OK }\nfunction B { in x out y\n\
               transfer y.status = x.status ≠ OK implies Lost else OK }\nflow a → x\n";
    let m = parse_model(src).unwrap();
    assert!(serialize(&m).contains("x.status != OK"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn random_models_round_trip(seed in any::<u64>()) {
        let m = build_model(&random_model(seed)).unwrap();
        let text = serialize(&m);
        let reparsed = parse_model(&text).unwrap();
        prop_assert_eq!(&reparsed, &m);
        prop_assert_eq!(serialize(&reparsed), text);
    }

    #[test]
    fn parse_errors_point_inside_the_text(seed in any::<u64>(), cut in 0usize..4000, junk in "[{}()=.a-z ]{0,3}") {
        let text = serialize(&build_model(&random_model(seed)).unwrap());
        let mut at = cut.min(text.len());
        while !text.is_char_boundary(at) {
            at -= 1;
        }
        let mutated = format!("{}{}{}", &text[..at], junk, &text[(at + 1).min(text.len())..]);
        if let Err(DslError::Parse(errors)) = parse_model_named(&mutated, "m.fprop") {
            let lines: Vec<&str> = mutated.split('\n').collect();
            for e in errors {
                prop_assert!(!e.message.is_empty());
                let (line, column) = (e.span.line as usize, e.span.column as usize);
                prop_assert!(line >= 1 && line <= lines.len(), "{:?}", e);
                let width = lines[line - 1].chars().count();
                prop_assert!(column >= 1 && column <= width + 1, "{:?}", e);
            }
        }
    }

    #[test]
    fn parsing_is_deterministic(seed in any::<u64>()) {
        let text = serialize(&build_model(&random_model(seed)).unwrap());
        prop_assert_eq!(parse_model(&text).unwrap(), parse_model(&text).unwrap());
    }
}
