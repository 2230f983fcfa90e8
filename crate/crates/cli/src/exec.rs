//! Statement execution.

use std::collections::BTreeMap;

use gradcalc_core::calculus::{
    concomitant, exterior_derivative, fn_bracket, lie_bracket, lie_derivative, nr_bracket, schouten_bracket,
};
use gradcalc_core::checkers::{
    is_almost_complex, is_almost_product, is_almost_tangent, is_involutive, is_nijenhuis, is_poisson,
    is_weighted_contact, is_weighted_distribution, is_weighted_nijenhuis, is_weighted_pn, is_weighted_poisson,
    is_weighted_tensor, CheckReport, Distribution, Witness,
};
use gradcalc_core::lifts::{AffineConnection, LiftContext};
use gradcalc_core::oracle::{
    evaluate_tensor_at, identity_spot_check, koszul_concomitant_oracle, pair_concomitant, taylor_lift_oracle,
    SamplePlan,
};
use gradcalc_core::{Chart, Poly, Symmetry, TensorField};

use crate::ast::{BracketKind, CheckKind, Command, DeclKind, Expr, OracleKind, Script, Stmt, StmtKind, CHECKS};
use crate::diag::{codes, Diagnostic};
use crate::output::{Outcome, OutputRecord, SymbolJson, ValueJson, VariableJson};

#[derive(Clone, Copy, Debug)]
pub struct RunOptions {
    pub seed: u64,
    pub samples: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            seed: 0,
            samples: SamplePlan::DEFAULT_COUNT,
        }
    }
}

/// Records of the statements that ran, and the error that stopped the
/// run, if any.
#[derive(Debug)]
pub struct Execution {
    pub records: Vec<OutputRecord>,
    pub error: Option<Diagnostic>,
    pub any_failed: bool,
    /// Every tensor defined or bound by the statements that ran.
    pub tensors: BTreeMap<String, TensorField>,
}

impl Execution {
    /// 0 on success, 1 if a check or oracle failed, 3 on a semantic error.
    pub fn exit_code(&self) -> i32 {
        match &self.error {
            Some(e) => e.exit_code(),
            None if self.any_failed => 1,
            None => 0,
        }
    }
}

enum Value {
    Scalar(Poly),
    Tensor(TensorField),
}

type EResult<T> = Result<T, String>;

fn engine<T>(r: gradcalc_core::Result<T>) -> EResult<T> {
    r.map_err(|e| e.to_string())
}

struct Session<'a> {
    script: &'a Script,
    plan: SamplePlan,
    tensors: BTreeMap<String, TensorField>,
    any_failed: bool,
}

pub fn execute(script: &Script, opts: &RunOptions) -> Execution {
    let mut records = Vec::new();
    let plan = match SamplePlan::new(opts.seed, opts.samples, SamplePlan::DEFAULT_BOUND) {
        Ok(p) => p,
        Err(e) => {
            return Execution {
                records,
                error: Some(Diagnostic::new(codes::EVALUATION, e.to_string(), 1, 1)),
                any_failed: false,
                tensors: BTreeMap::new(),
            }
        }
    };
    let mut s = Session {
        script,
        plan,
        tensors: BTreeMap::new(),
        any_failed: false,
    };
    for stmt in &script.stmts {
        match s.statement(stmt) {
            Ok(Some(outcome)) => records.push(OutputRecord {
                line: stmt.line,
                command: stmt.source.clone(),
                outcome,
            }),
            Ok(None) => {}
            Err(msg) => {
                return Execution {
                    records,
                    error: Some(Diagnostic::new(codes::EVALUATION, msg, stmt.line, stmt.column)),
                    any_failed: s.any_failed,
                    tensors: s.tensors,
                }
            }
        }
    }
    Execution {
        records,
        error: None,
        any_failed: s.any_failed,
        tensors: s.tensors,
    }
}

impl Session<'_> {
    fn get(&self, name: &str) -> &TensorField {
        // the parser guarantees every name is defined before use
        &self.tensors[name]
    }

    fn ctx(&self, i: usize) -> &LiftContext {
        &self.script.contexts[i]
    }

    fn statement(&mut self, stmt: &Stmt) -> EResult<Option<Outcome>> {
        match &stmt.kind {
            StmtKind::Chart { .. } => Ok(None),
            StmtKind::Decl {
                name,
                kind,
                chart,
                expr,
            } => {
                let t = self.declare(*kind, chart, expr)?;
                self.tensors.insert(name.clone(), t);
                Ok(None)
            }
            StmtKind::Command { command, bind } => {
                let mut outcome = self.command(command)?;
                if let Outcome::Tensor { name, value, .. } = &mut outcome {
                    let t = value.take();
                    if let (Some(b), Some(t)) = (bind, t) {
                        *name = Some(b.clone());
                        self.tensors.insert(b.clone(), t);
                    }
                }
                Ok(Some(outcome))
            }
        }
    }

    fn declare(&self, kind: DeclKind, chart: &Chart, expr: &Expr) -> EResult<TensorField> {
        let t = to_tensor(self.eval(expr, chart)?, chart)?;
        let (want, sym) = match kind {
            DeclKind::Function => ((0, 0), Symmetry::NONE),
            DeclKind::VectorField => ((1, 0), Symmetry::NONE),
            DeclKind::Form => ((0, t.p()), Symmetry::ANTISYM_COV),
            DeclKind::Tensor { q, p, sym } => ((q, p), sym),
        };
        // the zero expression `0` fits every declared valence
        if t.valence() == (0, 0) && t.is_zero() {
            return Ok(TensorField::zero(chart, want.0, want.1, sym));
        }
        if t.valence() != want {
            return Err(format!(
                "declared a ({},{})-tensor but the expression is a ({},{})-tensor",
                want.0,
                want.1,
                t.q(),
                t.p()
            ));
        }
        engine(t.with_symmetry(Symmetry::NONE).and_then(|t| t.with_symmetry(sym)))
    }

    fn eval(&self, e: &Expr, chart: &Chart) -> EResult<Value> {
        use Value::{Scalar, Tensor};
        Ok(match e {
            Expr::Const(c) => Scalar(Poly::constant(c.clone())),
            Expr::Var(v) => Scalar(Poly::var(*v)),
            Expr::Basis(v) => Tensor(engine(TensorField::coordinate_field(chart, *v))?),
            Expr::Differential(v) => Tensor(engine(TensorField::differential(chart, *v))?),
            Expr::Ref(name) => {
                let t = self.get(name);
                match t.as_scalar() {
                    Some(f) if t.valence() == (0, 0) => Scalar(f),
                    _ => Tensor(t.clone()),
                }
            }
            Expr::Neg(a) => match self.eval(a, chart)? {
                Scalar(f) => Scalar(-f),
                Tensor(t) => Tensor(t.neg()),
            },
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                let sub = matches!(e, Expr::Sub(..));
                match (self.eval(a, chart)?, self.eval(b, chart)?) {
                    (Scalar(f), Scalar(g)) => Scalar(if sub { f - g } else { f + g }),
                    (Tensor(s), Tensor(t)) => Tensor(engine(if sub { s.sub(&t) } else { s.add(&t) })?),
                    (Scalar(_), Tensor(t)) | (Tensor(t), Scalar(_)) => {
                        return Err(format!("cannot add a function and a ({},{})-tensor", t.q(), t.p()))
                    }
                }
            }
            Expr::Mul(a, b) => match (self.eval(a, chart)?, self.eval(b, chart)?) {
                (Scalar(f), Scalar(g)) => Scalar(&f * &g),
                (Scalar(f), Tensor(t)) | (Tensor(t), Scalar(f)) => Tensor(t.scale_poly(&f)),
                (Tensor(_), Tensor(_)) => return Err("use `ox` or `^^` to multiply two tensors".into()),
            },
            Expr::Pow(a, n) => match self.eval(a, chart)? {
                Scalar(f) => Scalar(f.pow(*n)),
                Tensor(_) => return Err("only functions can be raised to a power".into()),
            },
            Expr::Ox(a, b) | Expr::Wedge(a, b) => {
                let wedge = matches!(e, Expr::Wedge(..));
                match (self.eval(a, chart)?, self.eval(b, chart)?) {
                    (Scalar(f), Scalar(g)) => Scalar(&f * &g),
                    (Scalar(f), Tensor(t)) | (Tensor(t), Scalar(f)) => Tensor(t.scale_poly(&f)),
                    (Tensor(s), Tensor(t)) => Tensor(engine(if wedge { s.wedge(&t) } else { s.tensor_product(&t) })?),
                }
            }
        })
    }

    fn command(&mut self, c: &Command) -> EResult<Outcome> {
        let tensor = |t: TensorField| Ok(Outcome::tensor(t));
        match c {
            Command::Lift { tensor: k, lambda, ctx } => {
                tensor(engine(self.ctx(*ctx).lift_tensor(self.get(k), *lambda))?)
            }
            Command::Bracket { kind, a, b } => {
                let (a, b) = (self.get(a), self.get(b));
                tensor(engine(match kind {
                    BracketKind::Lie => lie_bracket(a, b),
                    BracketKind::Schouten => schouten_bracket(a, b),
                    BracketKind::FrolicherNijenhuis => fn_bracket(a, b),
                    BracketKind::NijenhuisRichardson => nr_bracket(a, b),
                    BracketKind::Concomitant => concomitant(a, b),
                })?)
            }
            Command::D { tensor: k } => tensor(engine(exterior_derivative(self.get(k)))?),
            Command::LieDeriv { x, k } => tensor(engine(lie_derivative(self.get(x), self.get(k)))?),
            Command::Degree { tensor: k, component } => Ok(Outcome::Degree {
                component: *component,
                degree: engine(self.get(k).degree(*component))?,
            }),
            Command::Check {
                kind,
                args,
                component,
                k,
            } => {
                let report = engine(self.check(*kind, args, *component, *k))?;
                self.any_failed |= !report.passed();
                let name = CHECKS.iter().find(|s| s.kind == *kind).map_or("", |s| s.name);
                Ok(Outcome::Check {
                    check: name.to_string(),
                    report,
                })
            }
            Command::Prolong { ctx, name } => {
                let chart = self.ctx(*ctx).prolonged();
                Ok(Outcome::Chart {
                    name: name.clone(),
                    variables: chart
                        .vars()
                        .map(|v| VariableJson {
                            name: chart.name(v).to_string(),
                            weights: chart.weights(v).to_vec(),
                        })
                        .collect(),
                })
            }
            Command::LiftConnection { ctx, symbols } => {
                let ctx = self.ctx(*ctx);
                let base = ctx.base();
                let mut entries = Vec::new();
                for (key, expr) in symbols {
                    match self.eval(expr, base)? {
                        Value::Scalar(f) => entries.push((*key, f)),
                        Value::Tensor(_) => return Err("Christoffel symbols must be functions".into()),
                    }
                }
                let lifted = engine(AffineConnection::new(base, entries).and_then(|c| c.lift(ctx)))?;
                let chart = lifted.chart();
                let name = |v| chart.name(v).to_string();
                Ok(Outcome::Connection {
                    symbols: lifted
                        .symbols()
                        .iter()
                        .map(|(&(i, j, l), f)| SymbolJson {
                            index: [name(i), name(j), name(l)],
                            value: f.display_with(|v| chart.name(v)),
                        })
                        .collect(),
                })
            }
            Command::Eval { tensor: k, point } => {
                let t = self.get(k);
                let values = engine(evaluate_tensor_at(t, point))?;
                let chart = t.chart();
                let constant = engine(TensorField::from_components(
                    chart,
                    t.q(),
                    t.p(),
                    Symmetry::NONE,
                    values.iter().map(|(i, v)| (i.clone(), Poly::constant(v.clone()))),
                ))?;
                Ok(Outcome::Evaluation {
                    text: constant.to_text(),
                    values: values
                        .iter()
                        .map(|(idx, v)| ValueJson {
                            index: idx.iter().map(|&x| chart.name(x).to_string()).collect(),
                            value: v.to_string(),
                        })
                        .collect(),
                })
            }
            Command::Oracle(o) => {
                let (oracle, report) = engine(self.oracle(o))?;
                self.any_failed |= !report.passed();
                Ok(Outcome::Oracle {
                    oracle: oracle.to_string(),
                    report,
                })
            }
        }
    }

    fn check(
        &self,
        kind: CheckKind,
        args: &[String],
        component: usize,
        k: Option<i64>,
    ) -> gradcalc_core::Result<CheckReport> {
        let a = self.get(&args[0]);
        let k = k.unwrap_or(0);
        let distribution = || Distribution::new(args.iter().map(|n| self.get(n).clone()).collect());
        match kind {
            CheckKind::Poisson => is_poisson(a),
            CheckKind::Weighted => is_weighted_tensor(a, component, k),
            CheckKind::WeightedPoisson => is_weighted_poisson(a, component, k),
            CheckKind::Nijenhuis => is_nijenhuis(a),
            CheckKind::WeightedNijenhuis => is_weighted_nijenhuis(a, component),
            CheckKind::AlmostComplex => is_almost_complex(a),
            CheckKind::AlmostProduct => is_almost_product(a),
            CheckKind::AlmostTangent => is_almost_tangent(a),
            CheckKind::PoissonNijenhuis => is_weighted_pn(a, self.get(&args[1]), component, k),
            CheckKind::Contact => is_weighted_contact(a, component, k),
            CheckKind::Involutive => is_involutive(&distribution()?, &self.plan),
            CheckKind::WeightedDistribution => is_weighted_distribution(&distribution()?, component, &self.plan),
        }
    }

    fn oracle(&self, o: &OracleKind) -> gradcalc_core::Result<(&'static str, CheckReport)> {
        match o {
            OracleKind::Taylor { f, lambda, ctx } => {
                let t = self.get(f);
                let f = t.as_scalar().filter(|_| t.valence() == (0, 0)).ok_or_else(|| {
                    gradcalc_core::Error::Malformed("the Taylor oracle applies to functions".into())
                })?;
                let ctx = self.ctx(*ctx);
                let diff = ctx.lift_function(&f, *lambda) - taylor_lift_oracle(&f, *lambda, ctx);
                let report = if diff.is_zero() {
                    CheckReport::pass()
                } else {
                    CheckReport::fail(Witness::poly("lift minus oracle", ctx.prolonged(), &diff))
                };
                Ok(("taylor", report))
            }
            OracleKind::Koszul {
                lambda,
                n,
                alpha,
                beta,
            } => {
                let (l, n, a, b) = (self.get(lambda), self.get(n), self.get(alpha), self.get(beta));
                let lhs = pair_concomitant(&concomitant(l, n)?, a, b)?;
                let rhs = koszul_concomitant_oracle(l, n, a, b)?;
                Ok(("koszul", CheckReport::zero_tensor("concomitant minus oracle", &lhs.sub(&rhs)?)))
            }
            OracleKind::Spot { lhs, rhs } => {
                Ok(("spot", identity_spot_check(self.get(lhs), self.get(rhs), &self.plan)?))
            }
        }
    }
}

fn to_tensor(v: Value, chart: &Chart) -> EResult<TensorField> {
    match v {
        Value::Scalar(f) => engine(TensorField::scalar(chart, f)),
        Value::Tensor(t) => Ok(t),
    }
}
