//! Small hand-written models.

use failprop::model::{Chain, FunctionDef, ModelDef, RawTerm};
use failprop::Status;

/// `F -> G` with pass-through transfers: each output is Lost or Err when
/// its function is, and otherwise copies its input.
pub fn series_chain() -> ModelDef {
    let pass = |own: &str, input: Option<&str>| {
        let ok = match input {
            Some(i) => RawTerm::status(i),
            None => RawTerm::lit(Status::Ok),
        };
        Chain::when(
            failprop::model::Guard::eq(RawTerm::status(own), RawTerm::lit(Status::Ok)),
            ok,
        )
        .otherwise(RawTerm::status(own))
    };
    let mut m = ModelDef::new("series", &["v0"]);
    m.function(FunctionDef::new("F").output("oF").status("oF", pass("F", None)))
        .function(
            FunctionDef::new("G")
                .input("iG")
                .output("oG")
                .status("oG", pass("G", Some("iG"))),
        )
        .flow("oF", "iG");
    m
}
