use serde::Serialize;
use serde_json::Value;

pub const SCHEMA_VERSION: &str = "1";

pub const EXIT_DEFECT: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    pub fn defect(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_DEFECT,
            message: message.into(),
        }
    }
}

/// A finished command: the text rendering and the JSON payload carry the same
/// numbers.
#[derive(Debug)]
pub struct Output {
    pub command: &'static str,
    pub input: Value,
    pub result: Value,
    pub text: String,
    pub elapsed_ms: f64,
    /// Set when the command ran but found an invariant violation.
    pub defect: Option<String>,
}

impl Output {
    pub fn exit_code(&self) -> u8 {
        if self.defect.is_some() {
            EXIT_DEFECT
        } else {
            0
        }
    }

    pub fn to_json(&self, with_timing: bool) -> String {
        let envelope = Envelope {
            schema_version: SCHEMA_VERSION,
            command: self.command,
            input: &self.input,
            result: &self.result,
            timing_ms: with_timing.then_some(self.elapsed_ms),
        };
        serde_json::to_string_pretty(&envelope).expect("envelope serializes")
    }
}

#[derive(Serialize)]
struct Envelope<'a> {
    schema_version: &'static str,
    command: &'static str,
    input: &'a Value,
    result: &'a Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    timing_ms: Option<f64>,
}
