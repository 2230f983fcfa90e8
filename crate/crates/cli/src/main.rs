use std::io::{Read, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use gradcalc::output::{render_suite, Format};
use gradcalc::{run_script, RunOptions};
use gradcalc_core::battery;

#[derive(Parser)]
#[command(name = "gradcalc", version, about = "Exact tensor calculus on graded bundles")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Text => Format::Text,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Execute a script; `-` reads standard input.
    Run {
        file: String,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random points per sampled check.
        #[arg(long, default_value_t = 8)]
        samples: usize,
    },
    /// Run the built-in theorem battery.
    CheckSuite {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
        /// Run only these criteria (repeatable).
        #[arg(long = "only")]
        only: Vec<u32>,
    },
}

fn read_source(file: &str) -> std::io::Result<String> {
    if file == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        std::fs::read_to_string(file)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Cmd::Run {
            file,
            format,
            seed,
            samples,
        } => {
            let src = match read_source(&file) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("error: cannot read {file}: {e}");
                    return ExitCode::from(2);
                }
            };
            let (out, code) = run_script(&src, &RunOptions { seed, samples }, format.into());
            print!("{}", out.stdout);
            eprint!("{}", out.stderr);
            let _ = std::io::stdout().flush();
            ExitCode::from(code as u8)
        }
        Cmd::CheckSuite { seed, format, only } => {
            let outcomes: Vec<_> = if only.is_empty() {
                battery::run_all(seed)
            } else {
                let mut v = Vec::new();
                for id in only {
                    match battery::run(id, seed) {
                        Some(o) => v.push(o),
                        None => {
                            eprintln!("error: no criterion {id}");
                            return ExitCode::from(2);
                        }
                    }
                }
                v
            };
            print!("{}", render_suite(&outcomes, seed, format.into()));
            if outcomes.iter().all(|o| o.passed) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
    }
}
