//! Resolved script representation. Every name in a [`Script`] refers to a
//! chart, coordinate or tensor defined earlier in the same script.

use gradcalc_core::lifts::LiftContext;
use gradcalc_core::{Chart, Rational, Symmetry, Var};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Const(Rational),
    Var(Var),
    /// `d/dx`
    Basis(Var),
    /// `dx`
    Differential(Var),
    /// A previously defined tensor on the same chart.
    Ref(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Ox(Box<Expr>, Box<Expr>),
    Wedge(Box<Expr>, Box<Expr>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeclKind {
    Function,
    VectorField,
    Form,
    Tensor { q: usize, p: usize, sym: Symmetry },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BracketKind {
    Lie,
    Schouten,
    FrolicherNijenhuis,
    NijenhuisRichardson,
    Concomitant,
}

impl BracketKind {
    pub const ALL: [(&'static str, BracketKind); 5] = [
        ("lie", BracketKind::Lie),
        ("schouten", BracketKind::Schouten),
        ("fn", BracketKind::FrolicherNijenhuis),
        ("nr", BracketKind::NijenhuisRichardson),
        ("concomitant", BracketKind::Concomitant),
    ];
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckKind {
    Poisson,
    Weighted,
    WeightedPoisson,
    Nijenhuis,
    WeightedNijenhuis,
    AlmostComplex,
    AlmostProduct,
    AlmostTangent,
    PoissonNijenhuis,
    Contact,
    Involutive,
    WeightedDistribution,
}

/// How many tensor arguments a check takes and whether it needs `k=`.
pub struct CheckShape {
    pub name: &'static str,
    pub kind: CheckKind,
    /// `None` for any positive number of arguments.
    pub arity: Option<usize>,
    pub needs_k: bool,
}

pub const CHECKS: [CheckShape; 12] = [
    CheckShape { name: "poisson", kind: CheckKind::Poisson, arity: Some(1), needs_k: false },
    CheckShape { name: "weighted", kind: CheckKind::Weighted, arity: Some(1), needs_k: true },
    CheckShape { name: "weighted-poisson", kind: CheckKind::WeightedPoisson, arity: Some(1), needs_k: true },
    CheckShape { name: "nijenhuis", kind: CheckKind::Nijenhuis, arity: Some(1), needs_k: false },
    CheckShape { name: "weighted-nijenhuis", kind: CheckKind::WeightedNijenhuis, arity: Some(1), needs_k: false },
    CheckShape { name: "almost-complex", kind: CheckKind::AlmostComplex, arity: Some(1), needs_k: false },
    CheckShape { name: "almost-product", kind: CheckKind::AlmostProduct, arity: Some(1), needs_k: false },
    CheckShape { name: "almost-tangent", kind: CheckKind::AlmostTangent, arity: Some(1), needs_k: false },
    CheckShape { name: "pn", kind: CheckKind::PoissonNijenhuis, arity: Some(2), needs_k: true },
    CheckShape { name: "contact", kind: CheckKind::Contact, arity: Some(1), needs_k: true },
    CheckShape { name: "involutive", kind: CheckKind::Involutive, arity: None, needs_k: false },
    CheckShape { name: "weighted-distribution", kind: CheckKind::WeightedDistribution, arity: None, needs_k: false },
];

#[derive(Clone, Debug, PartialEq)]
pub enum OracleKind {
    /// `lift_function` against the Taylor-coefficient oracle.
    Taylor { f: String, lambda: i64, ctx: usize },
    /// Coordinate concomitant against the Koszul bracket difference.
    Koszul { lambda: String, n: String, alpha: String, beta: String },
    /// Two tensors agree at sampled rational points.
    Spot { lhs: String, rhs: String },
}

#[derive(Clone, Debug, PartialEq)]
pub enum Command {
    Lift { tensor: String, lambda: i64, ctx: usize },
    Bracket { kind: BracketKind, a: String, b: String },
    D { tensor: String },
    LieDeriv { x: String, k: String },
    Degree { tensor: String, component: usize },
    Check { kind: CheckKind, args: Vec<String>, component: usize, k: Option<i64> },
    Prolong { ctx: usize, name: String },
    LiftConnection { ctx: usize, symbols: Vec<((Var, Var, Var), Expr)> },
    Eval { tensor: String, point: Vec<Rational> },
    Oracle(OracleKind),
}

#[derive(Clone, Debug)]
pub enum StmtKind {
    Chart { name: String, chart: Chart },
    Decl { name: String, kind: DeclKind, chart: Chart, expr: Expr },
    Command { command: Command, bind: Option<String> },
}

#[derive(Clone, Debug)]
pub struct Stmt {
    pub line: usize,
    pub column: usize,
    /// The statement's source text.
    pub source: String,
    pub kind: StmtKind,
}

#[derive(Clone, Debug)]
pub struct Script {
    pub stmts: Vec<Stmt>,
    /// Prolongations used by the script, shared so lifted tensors of the
    /// same chart and order live on one chart.
    pub contexts: Vec<LiftContext>,
}
