use std::fmt;

use serde::Serialize;
use serde_json::Value;

use raycat_core::Error;

/// How a command ended; each status has its own exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Clean,
    Finding,
    InputError,
    Incomplete,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Clean => 0,
            Status::Finding => 1,
            Status::InputError => 2,
            Status::Incomplete => 3,
        }
    }

    /// Worst of two outcomes: incomplete beats finding beats clean.
    pub fn worst(self, other: Status) -> Status {
        let rank = |s: Status| match s {
            Status::Clean => 0,
            Status::Finding => 1,
            Status::Incomplete => 2,
            Status::InputError => 3,
        };
        if rank(other) > rank(self) {
            other
        } else {
            self
        }
    }
}

/// A failed command, already sorted into input errors and incomplete runs.
#[derive(Debug)]
pub struct Failure {
    pub status: Status,
    pub message: String,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Self {
        Failure { status: Status::InputError, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e.kind() {
            Error::NotFinite { .. } | Error::ClosureBudget { .. } => Status::Incomplete,
            Error::AxiomViolation { .. } => Status::Finding,
            _ => Status::InputError,
        };
        Failure { status, message: e.to_string() }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

pub type Result<T> = std::result::Result<T, Failure>;

/// What a command produced: a status, a JSON body and its text rendering.
pub struct Outcome {
    pub status: Status,
    pub result: Value,
    pub text: String,
}

impl Outcome {
    pub fn new(status: Status, result: impl Serialize, text: String) -> Self {
        Outcome {
            status,
            result: serde_json::to_value(result).expect("results serialize"),
            text,
        }
    }
}

#[derive(Serialize)]
pub struct Envelope<'a> {
    pub command: &'a str,
    pub file: Option<String>,
    pub status: Status,
    pub exit_code: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub result: Value,
}
