//! Script front end and batch driver for the gradcalc engine.
//!
//! A script is a sequence of chart declarations, tensor declarations and
//! commands:
//!
//! ```text
//! chart M { x:0, y:0 }
//! vf X on M = x*d/dy
//! lift X lambda=1 r=1        # x*d/dy + x_1*d/dy_1
//! ```

pub mod ast;
pub mod diag;
pub mod exec;
pub mod lexer;
pub mod output;
pub mod parser;

pub use diag::Diagnostic;
pub use exec::{execute, Execution, RunOptions};
pub use output::Format;
pub use parser::parse;

/// Parses and executes `src`, returning rendered output and the exit code.
pub fn run_script(src: &str, opts: &RunOptions, format: Format) -> (output::Rendered, i32) {
    let exec = match parse(src) {
        Ok(script) => execute(&script, opts),
        Err(d) => Execution {
            records: Vec::new(),
            error: Some(d),
            any_failed: false,
            tensors: Default::default(),
        },
    };
    let code = exec.exit_code();
    (output::render_run(&exec, opts, format), code)
}
