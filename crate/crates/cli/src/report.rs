use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use crate::Cli;

pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_FAIL: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_BUDGET: u8 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    /// A run with no verdict of its own, such as a build.
    Done,
    Pass,
    Fail,
    Exhausted,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Done | Status::Pass => 0,
            Status::Fail => EXIT_FAIL,
            Status::Exhausted => EXIT_BUDGET,
        }
    }

    pub fn of(pass: bool) -> Status {
        if pass {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

pub enum Output {
    Json(Value, Status),
    Text(String, Status),
}

impl Output {
    /// Wrap a result in the report envelope. Keys come out sorted, and
    /// nothing depends on the clock or the thread count.
    pub fn report(cli: &Cli, status: Status, result: Value) -> Output {
        let run = serde_json::to_value(cli).expect("run spec serializes");
        Output::Json(
            json!({
                "schema_version": SCHEMA_VERSION,
                "run": run,
                "status": status,
                "result": result,
            }),
            status,
        )
    }

    pub fn emit(&self, out: Option<&Path>) -> io::Result<u8> {
        let (text, status) = match self {
            Output::Json(v, s) => (serde_json::to_string_pretty(v).expect("report serializes") + "\n", *s),
            Output::Text(t, s) => (t.clone(), *s),
        };
        match out {
            Some(path) => fs::write(path, text)?,
            None => io::stdout().lock().write_all(text.as_bytes())?,
        }
        Ok(status.exit_code())
    }
}
