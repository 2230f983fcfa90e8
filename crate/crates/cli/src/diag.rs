//! Positioned diagnostics for the script front end.

use std::fmt;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Lexical,
    Syntax,
    Name,
    Semantic,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub code: &'static str,
    pub stage: Stage,
    pub message: String,
    pub line: usize,
    pub column: usize,
}

impl Diagnostic {
    pub fn new(code: &'static str, message: impl Into<String>, line: usize, column: usize) -> Diagnostic {
        let stage = match code.as_bytes().get(1) {
            Some(b'1') => Stage::Lexical,
            Some(b'2') => Stage::Syntax,
            Some(b'3') => Stage::Name,
            _ => Stage::Semantic,
        };
        Diagnostic {
            code,
            stage,
            message: message.into(),
            line,
            column,
        }
    }

    /// Process exit code: 2 for anything caught before execution, 3 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.stage == Stage::Semantic {
            3
        } else {
            2
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "error[{}] {}:{}: {}", self.code, self.line, self.column, self.message)
    }
}

impl std::error::Error for Diagnostic {}

/// Diagnostic codes. The leading digit names the stage.
pub mod codes {
    pub const UNEXPECTED_CHAR: &str = "E101";
    pub const EXPECTED: &str = "E201";
    pub const BAD_ARGUMENTS: &str = "E202";
    pub const BAD_NUMBER: &str = "E203";
    pub const UNDEFINED: &str = "E301";
    pub const REDEFINED: &str = "E302";
    pub const WRONG_CHART: &str = "E303";
    pub const BAD_CHART: &str = "E304";
    pub const EVALUATION: &str = "E401";
}
