//! Output records and their text and JSON renderings.

use gradcalc_core::battery::CriterionOutcome;
use gradcalc_core::checkers::CheckReport;
use gradcalc_core::tensor::TensorJson;
use gradcalc_core::{Degree, TensorField};
use serde::Serialize;

use crate::diag::Diagnostic;
use crate::exec::{Execution, RunOptions};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VariableJson {
    pub name: String,
    pub weights: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SymbolJson {
    pub index: [String; 3],
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValueJson {
    pub index: Vec<String>,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Outcome {
    Tensor {
        #[serde(skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        tensor: TensorJson,
        /// Kept until the executor binds it to a name.
        #[serde(skip)]
        value: Option<TensorField>,
    },
    Degree {
        component: usize,
        degree: Degree,
    },
    Check {
        check: String,
        report: CheckReport,
    },
    Chart {
        name: String,
        variables: Vec<VariableJson>,
    },
    Connection {
        symbols: Vec<SymbolJson>,
    },
    Evaluation {
        text: String,
        values: Vec<ValueJson>,
    },
    Oracle {
        oracle: String,
        report: CheckReport,
    },
}

impl Outcome {
    pub fn tensor(t: TensorField) -> Outcome {
        Outcome::Tensor {
            name: None,
            tensor: t.to_json(),
            value: Some(t),
        }
    }

    pub fn to_text(&self) -> String {
        match self {
            Outcome::Tensor { name, tensor, .. } => match name {
                Some(n) => format!("{n} = {}", tensor.text),
                None => tensor.text.clone(),
            },
            Outcome::Degree { component, degree } => format!("degree {degree} in component {component}"),
            Outcome::Check { report, .. } | Outcome::Oracle { report, .. } => report_text(report),
            Outcome::Chart { name, variables } => {
                let vars: Vec<String> = variables
                    .iter()
                    .map(|v| {
                        let w: Vec<String> = v.weights.iter().map(i64::to_string).collect();
                        format!("{}:{}", v.name, w.join(","))
                    })
                    .collect();
                format!("chart {name} {{ {} }}", vars.join(", "))
            }
            Outcome::Connection { symbols } => {
                if symbols.is_empty() {
                    return "flat".into();
                }
                let lines: Vec<String> = symbols
                    .iter()
                    .map(|s| format!("[{}] = {}", s.index.join(", "), s.value))
                    .collect();
                lines.join("\n")
            }
            Outcome::Evaluation { text, .. } => text.clone(),
        }
    }
}

fn report_text(r: &CheckReport) -> String {
    let mut s = if r.passed() { "pass".to_string() } else { "fail".to_string() };
    if let Some(w) = &r.witness {
        s.push_str(": ");
        s.push_str(&w.summary());
    }
    if let Some(seed) = r.seed.filter(|_| r.probabilistic) {
        s.push_str(&format!(" (sampled, seed {seed})"));
    }
    s
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OutputRecord {
    pub line: usize,
    pub command: String,
    #[serde(flatten)]
    pub outcome: Outcome,
}

#[derive(Serialize)]
struct RunJson<'a> {
    gradcalc_version: &'static str,
    schema: u32,
    seed: u64,
    samples: usize,
    records: &'a [OutputRecord],
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<&'a Diagnostic>,
    exit_code: i32,
}

/// Stdout and stderr text of a run.
pub struct Rendered {
    pub stdout: String,
    pub stderr: String,
}

pub fn render_run(exec: &Execution, opts: &RunOptions, format: Format) -> Rendered {
    match format {
        Format::Json => {
            let doc = RunJson {
                gradcalc_version: VERSION,
                schema: SCHEMA,
                seed: opts.seed,
                samples: opts.samples,
                records: &exec.records,
                error: exec.error.as_ref(),
                exit_code: exec.exit_code(),
            };
            Rendered {
                stdout: to_json(&doc),
                stderr: String::new(),
            }
        }
        Format::Text => {
            let mut out = String::new();
            for r in &exec.records {
                out.push_str(&format!("> {}\n{}\n", r.command, r.outcome.to_text()));
            }
            Rendered {
                stdout: out,
                stderr: exec.error.as_ref().map(|e| format!("{e}\n")).unwrap_or_default(),
            }
        }
    }
}

#[derive(Serialize)]
struct SuiteJson<'a> {
    gradcalc_version: &'static str,
    schema: u32,
    seed: u64,
    passed: bool,
    criteria: &'a [CriterionOutcome],
}

pub fn render_suite(outcomes: &[CriterionOutcome], seed: u64, format: Format) -> String {
    let passed = outcomes.iter().all(|o| o.passed);
    match format {
        Format::Json => to_json(&SuiteJson {
            gradcalc_version: VERSION,
            schema: SCHEMA,
            seed,
            passed,
            criteria: outcomes,
        }),
        Format::Text => {
            let mut s = format!(
                "{:>3}  {:<22} {:>7} {:>8} {:>8}  result\n",
                "id", "criterion", "cases", "failed", "seconds"
            );
            for o in outcomes {
                s.push_str(&format!(
                    "{:>3}  {:<22} {:>7} {:>8} {:>8.2}  {}\n",
                    o.id,
                    o.key,
                    o.cases,
                    o.failures,
                    o.seconds,
                    if o.passed { "pass" } else { "FAIL" }
                ));
                for n in &o.notes {
                    s.push_str(&format!("       {n}\n"));
                }
            }
            s.push_str(&format!(
                "{} of {} criteria passed (seed {seed})\n",
                outcomes.iter().filter(|o| o.passed).count(),
                outcomes.len()
            ));
            s
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable output");
    s.push('\n');
    s
}
