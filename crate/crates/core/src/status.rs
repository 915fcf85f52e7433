use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Dysfunctional status of a function or port.
///
/// Declaration order (`OK`, `Err`, `Lost`) is the canonical index order used
/// when sorting scenarios and assignments. The engine never relies on it for
/// anything else.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Status {
    #[serde(rename = "OK")]
    Ok,
    Err,
    Lost,
}

impl Status {
    pub const ALL: [Status; 3] = [Status::Ok, Status::Err, Status::Lost];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn is_ok(self) -> bool {
        self == Status::Ok
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "OK",
            Status::Err => "Err",
            Status::Lost => "Lost",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Status {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "OK" => Ok(Status::Ok),
            "Err" => Ok(Status::Err),
            "Lost" => Ok(Status::Lost),
            _ => Err(()),
        }
    }
}

/// Index into a model's declared value domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ValueId(pub u16);

impl ValueId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}
