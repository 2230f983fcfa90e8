//! Decision procedures for weighted structures.
//!
//! Every check returns a [`CheckReport`]; a failing report always carries a
//! witness. Distribution checks sample exact rational points and are marked
//! probabilistic.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use crate::calculus::{
    concomitant, exterior_derivative, lie_bracket, lie_derivative, nijenhuis_torsion, schouten_bracket,
};
use crate::chart::{Chart, Degree};
use crate::error::{Error, Result};
use crate::linalg;
use crate::oracle::SamplePlan;
use crate::poly::{int, Poly, Rational, Var};
use crate::tensor::{Symmetry, TensorField, TensorJson};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Witness {
    Tensor {
        label: String,
        tensor: TensorJson,
    },
    Poly {
        label: String,
        text: String,
    },
    Point {
        point: BTreeMap<String, String>,
        detail: String,
    },
    Message {
        text: String,
    },
}

impl Witness {
    pub fn tensor(label: &str, t: &TensorField) -> Witness {
        Witness::Tensor {
            label: label.into(),
            tensor: t.to_json(),
        }
    }

    pub fn poly(label: &str, chart: &Chart, f: &Poly) -> Witness {
        Witness::Poly {
            label: label.into(),
            text: f.display_with(|v| chart.name(v)),
        }
    }

    pub fn point(chart: &Chart, point: &[Rational], detail: String) -> Witness {
        Witness::Point {
            point: chart
                .vars()
                .zip(point)
                .map(|(v, x)| (chart.name(v).to_string(), x.to_string()))
                .collect(),
            detail,
        }
    }

    pub fn message(text: impl Into<String>) -> Witness {
        Witness::Message { text: text.into() }
    }

    pub fn summary(&self) -> String {
        match self {
            Witness::Tensor { label, tensor } => format!("{label} = {}", tensor.text),
            Witness::Poly { label, text } => format!("{label} = {text}"),
            Witness::Point { point, detail } => {
                let coords: Vec<String> = point.iter().map(|(k, v)| format!("{k}={v}")).collect();
                format!("at ({}): {detail}", coords.join(", "))
            }
            Witness::Message { text } => text.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub degrees: BTreeMap<String, Degree>,
    pub probabilistic: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl CheckReport {
    pub fn pass() -> CheckReport {
        CheckReport {
            verdict: Verdict::Pass,
            witness: None,
            degrees: BTreeMap::new(),
            probabilistic: false,
            seed: None,
        }
    }

    pub fn fail(witness: Witness) -> CheckReport {
        CheckReport {
            verdict: Verdict::Fail,
            witness: Some(witness),
            ..CheckReport::pass()
        }
    }

    /// Pass iff `t` is zero, with `t` as the witness otherwise.
    pub fn zero_tensor(label: &str, t: &TensorField) -> CheckReport {
        if t.is_zero() {
            CheckReport::pass()
        } else {
            CheckReport::fail(Witness::tensor(label, t))
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn with_degree(mut self, name: &str, d: Degree) -> CheckReport {
        self.degrees.insert(name.into(), d);
        self
    }

    pub fn sampled(mut self, seed: u64) -> CheckReport {
        self.probabilistic = true;
        self.seed = Some(seed);
        self
    }

    /// The first failure of `self` then `other`; degrees are merged.
    pub fn and(mut self, other: CheckReport) -> CheckReport {
        let failed = !other.passed();
        self.degrees.extend(other.degrees);
        self.probabilistic |= other.probabilistic;
        self.seed = self.seed.or(other.seed);
        if self.passed() && failed {
            self.verdict = Verdict::Fail;
            self.witness = other.witness;
        }
        self
    }
}

/// A distribution spanned by polynomial vector fields on one chart.
#[derive(Clone, Debug)]
pub struct Distribution {
    chart: Chart,
    generators: Vec<TensorField>,
}

impl Distribution {
    pub fn new(generators: Vec<TensorField>) -> Result<Distribution> {
        let chart = generators
            .first()
            .ok_or_else(|| Error::Malformed("a distribution needs at least one generator".into()))?
            .chart()
            .clone();
        for g in &generators {
            if g.chart() != &chart {
                return Err(Error::ChartMismatch);
            }
            g.require_valence(1, 0)?;
        }
        Ok(Distribution { chart, generators })
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn generators(&self) -> &[TensorField] {
        &self.generators
    }
}

fn vector_at(x: &TensorField, point: &[Rational]) -> Result<Vec<Rational>> {
    let mut row = vec![Rational::zero(); x.chart().dim()];
    for (idx, c) in x.components() {
        row[idx[0].index()] = c.evaluate(|v| point.get(v.index()).cloned())?;
    }
    Ok(row)
}

fn rows_at(fields: &[TensorField], point: &[Rational]) -> Result<Vec<Vec<Rational>>> {
    fields.iter().map(|x| vector_at(x, point)).collect()
}

pub fn rank_at_point(d: &Distribution, point: &[Rational]) -> Result<usize> {
    let dim = d.chart().dim();
    if point.len() != dim {
        return Err(Error::Dimension {
            expected: dim,
            found: point.len(),
        });
    }
    Ok(linalg::rank(&rows_at(d.generators(), point)?))
}

/// Checks that each candidate lies in span(D) at every sample point.
fn span_check(d: &Distribution, candidates: &[(String, TensorField)], plan: &SamplePlan) -> Result<CheckReport> {
    let chart = d.chart();
    for point in plan.points(chart.dim())? {
        let mut rows = rows_at(d.generators(), &point)?;
        let base = linalg::rank(&rows);
        for (label, c) in candidates {
            rows.push(vector_at(c, &point)?);
            let extended = linalg::rank(&rows);
            rows.pop();
            if extended > base {
                let detail = format!("{label} leaves the span (rank {base} -> {extended})");
                return Ok(CheckReport::fail(Witness::point(chart, &point, detail)).sampled(plan.seed));
            }
        }
    }
    Ok(CheckReport::pass().sampled(plan.seed))
}

/// `L_∇ X_j ∈ D` for every generator.
pub fn is_weighted_distribution(d: &Distribution, component: usize, plan: &SamplePlan) -> Result<CheckReport> {
    let nabla = d.chart().weight_vector_field(component)?;
    let candidates = d
        .generators()
        .iter()
        .enumerate()
        .map(|(j, x)| Ok((format!("L_nabla X{j}"), lie_bracket(&nabla, x)?)))
        .collect::<Result<Vec<_>>>()?;
    span_check(d, &candidates, plan)
}

/// `[X_i, X_j] ∈ D` for every pair of generators.
pub fn is_involutive(d: &Distribution, plan: &SamplePlan) -> Result<CheckReport> {
    let g = d.generators();
    let mut candidates = Vec::new();
    for i in 0..g.len() {
        for j in i + 1..g.len() {
            candidates.push((format!("[X{i},X{j}]"), lie_bracket(&g[i], &g[j])?));
        }
    }
    span_check(d, &candidates, plan)
}

/// `L_∇ K = −(q−1)k·K`.
pub fn is_weighted_tensor(k: &TensorField, component: usize, weight: i64) -> Result<CheckReport> {
    let nabla = k.chart().weight_vector_field(component)?;
    let lhs = lie_derivative(&nabla, k)?;
    let factor = -(k.q() as i64 - 1) * weight;
    let defect = lhs.sub(&k.scale(&int(factor)))?;
    Ok(CheckReport::zero_tensor("L_nabla K + (q-1)k K", &defect).with_degree("tensor", k.degree(component)?))
}

fn require_bivector(lambda: &TensorField) -> Result<TensorField> {
    lambda.require_valence(2, 0)?;
    lambda.with_symmetry(Symmetry::ANTISYM_CONTRA)
}

/// `[Λ,Λ]_S = 0`.
pub fn is_poisson(lambda: &TensorField) -> Result<CheckReport> {
    let lambda = require_bivector(lambda)?;
    Ok(CheckReport::zero_tensor("[L,L]_S", &schouten_bracket(&lambda, &lambda)?))
}

/// Poisson and of degree −k.
pub fn is_weighted_poisson(lambda: &TensorField, component: usize, k: i64) -> Result<CheckReport> {
    let l = require_bivector(lambda)?;
    Ok(is_poisson(&l)?.and(is_weighted_tensor(&l, component, k)?))
}

pub fn is_nijenhuis(n: &TensorField) -> Result<CheckReport> {
    n.require_valence(1, 1)?;
    Ok(CheckReport::zero_tensor("[N,N]_FN", &nijenhuis_torsion(n)?))
}

/// Vanishing torsion and degree 0.
pub fn is_weighted_nijenhuis(n: &TensorField, component: usize) -> Result<CheckReport> {
    Ok(is_nijenhuis(n)?.and(is_weighted_tensor(n, component, 0)?))
}

fn square_is(n: &TensorField, sign: i64, label: &str) -> Result<CheckReport> {
    n.require_valence(1, 1)?;
    let sq = TensorField::compose_11(n, n)?;
    let target = TensorField::identity_11(n.chart()).scale(&int(sign));
    Ok(CheckReport::zero_tensor(label, &sq.sub(&target)?))
}

/// `N∘N = −I`.
pub fn is_almost_complex(n: &TensorField) -> Result<CheckReport> {
    square_is(n, -1, "N.N + I")
}

/// `N∘N = I`.
pub fn is_almost_product(n: &TensorField) -> Result<CheckReport> {
    square_is(n, 1, "N.N - I")
}

/// `N∘N = 0`.
pub fn is_almost_tangent(n: &TensorField) -> Result<CheckReport> {
    square_is(n, 0, "N.N")
}

/// `(NΛ)^{ij} = Λ^{il} Nʲ_l`.
pub fn n_lambda(lambda: &TensorField, n: &TensorField) -> Result<TensorField> {
    lambda.require_valence(2, 0)?;
    n.require_valence(1, 1)?;
    lambda
        .with_symmetry(Symmetry::NONE)?
        .tensor_product(n)?
        .contract(1, 0)
}

/// Weighted Poisson of degree −k, weighted Nijenhuis, NΛ skew, C(Λ,N) = 0.
pub fn is_weighted_pn(lambda: &TensorField, n: &TensorField, component: usize, k: i64) -> Result<CheckReport> {
    let l = require_bivector(lambda)?;
    n.require_valence(1, 1)?;
    let nl = n_lambda(&l, n)?;
    let skew_defect = nl.add(&transpose_20(&nl)?)?;
    let c = concomitant(&l, n)?;
    Ok(is_weighted_poisson(&l, component, k)?
        .and(is_weighted_nijenhuis(n, component)?)
        .and(CheckReport::zero_tensor("NL + (NL)^t", &skew_defect))
        .and(CheckReport::zero_tensor("C(L,N)", &c))
        .with_degree("NL", nl.degree(component)?)
        .with_degree("C", c.degree(component)?))
}

fn transpose_20(t: &TensorField) -> Result<TensorField> {
    TensorField::from_components(
        t.chart(),
        2,
        0,
        Symmetry::NONE,
        t.full().into_iter().map(|(i, c)| (vec![i[1], i[0]], c)),
    )
}

pub type PolyMatrix = Vec<Vec<Poly>>;

/// Component matrix `M[i][j] = Λ^{ij}` of `Λ♯`.
pub fn sharp_map(lambda: &TensorField) -> Result<PolyMatrix> {
    lambda.require_valence(2, 0)?;
    Ok(square_table(lambda))
}

/// Component matrix `M[i][j] = ω_{ij}` of `ω♭`.
pub fn flat_map(omega: &TensorField) -> Result<PolyMatrix> {
    omega.require_valence(0, 2)?;
    Ok(square_table(omega))
}

fn square_table(t: &TensorField) -> PolyMatrix {
    let n = t.chart().dim();
    (0..n)
        .map(|i| (0..n).map(|j| t.component(&[Var::from(i), Var::from(j)])).collect())
        .collect()
}

/// Checks that each entry `Σ_l p_l Λ^{lj}` of `Λ♯` is homogeneous of weight
/// `w_j` on the phase-shifted cotangent chart `T*[k]`.
pub fn sharp_degree_report(lambda: &TensorField, component: usize, k: i64) -> Result<CheckReport> {
    let m = sharp_map(lambda)?;
    let base = lambda.chart();
    let shifted = base.phase_shifted_cotangent(k, component)?;
    let n = base.dim();
    let mut report = CheckReport::pass();
    for j in 0..n {
        let entry: Poly = (0..n)
            .map(|l| &Poly::var(Var::from(n + l)) * &m[l][j])
            .sum();
        let want = base.weight(Var::from(j), component);
        let got = shifted.degree_of_function(&entry, component);
        let name = format!("sharp[{}]", base.name(Var::from(j)));
        report = report.with_degree(&name, got);
        if !got.is(want) {
            return Ok(report.and(CheckReport::fail(Witness::poly(&name, &shifted, &entry))));
        }
    }
    Ok(report)
}

/// Degree k and `α∧(dα)^n ≠ 0` on a chart of dimension 2n+1.
pub fn is_weighted_contact(alpha: &TensorField, component: usize, k: i64) -> Result<CheckReport> {
    alpha.require_valence(0, 1)?;
    let dim = alpha.chart().dim();
    if dim.is_multiple_of(2) {
        return Err(Error::EvenDimension(dim));
    }
    let degree = alpha.degree(component)?;
    let da = exterior_derivative(alpha)?;
    let mut top = alpha.clone();
    for _ in 0..dim / 2 {
        top = top.wedge(&da)?;
    }
    let mut report = CheckReport::pass().with_degree("alpha", degree);
    if alpha.is_zero() || !degree.is(k) {
        report = report.and(CheckReport::fail(Witness::message(format!(
            "alpha has degree {degree}, expected {k}"
        ))));
    }
    if top.is_zero() {
        report = report.and(CheckReport::fail(Witness::message("alpha ^ (d alpha)^n vanishes")));
    }
    Ok(report)
}

/// A section of the vector-bundle structure of a GrL chart, as fiber
/// components over the base variables.
#[derive(Clone, Debug, PartialEq)]
pub struct Section {
    pub components: BTreeMap<Var, Poly>,
}

impl Section {
    pub fn new(components: impl IntoIterator<Item = (Var, Poly)>) -> Section {
        Section {
            components: components.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    fn validate(&self, chart: &Chart, vb: usize) -> Result<()> {
        let (base, fiber) = chart.vb_split(vb)?;
        for (v, c) in &self.components {
            if !fiber.contains(v) {
                return Err(Error::Malformed(format!("`{}` is not a fiber coordinate", chart.name(*v))));
            }
            if c.variables().iter().any(|w| !base.contains(w)) {
                return Err(Error::Malformed("section components must depend on base variables only".into()));
            }
        }
        Ok(())
    }

    /// `ι(σ) = Σ σ_v ξ_v`, where the dual coordinate ξ_v sits at the
    /// position of v.
    pub fn linear_function(&self) -> Poly {
        self.components.iter().map(|(v, c)| c * &Poly::var(*v)).sum()
    }
}

/// Degree λ with each nonzero σ_v of weight λ + s_v, where s_v is the graded
/// weight of the fiber coordinate v. Cross-checked against `deg ι(σ) − k`
/// on the shifted dual chart.
pub fn section_degree(chart: &Chart, graded: usize, vb: usize, sigma: &Section) -> Result<Degree> {
    sigma.validate(chart, vb)?;
    let mut degree = Degree::Any;
    for (v, c) in &sigma.components {
        let s = chart.weight(*v, graded);
        let shifted = match chart.degree_of_function(c, graded) {
            Degree::Exactly(w) => Degree::Exactly(w - s),
            d => d,
        };
        degree = degree.join(shifted);
    }
    let (_, fiber) = chart.vb_split(vb)?;
    let k = fiber.iter().map(|&v| chart.weight(v, graded)).max().unwrap_or(0);
    let dual = chart.shifted_dual_grl(graded, vb, k)?;
    let via_dual = match dual.degree_of_function(&sigma.linear_function(), graded) {
        Degree::Exactly(w) => Degree::Exactly(w - k),
        d => d,
    };
    if via_dual != degree {
        return Err(Error::Malformed(format!(
            "section degree {degree} disagrees with dual degree {via_dual}"
        )));
    }
    Ok(degree)
}

/// Bracket of sections of E from a linear Leibniz tensor Λ on the dual
/// chart: `ι([X,Y]) = Λ(dιX, dιY)`. Sections are keyed by the dual fiber
/// coordinates they pair with.
pub fn algebroid_bracket(lambda: &TensorField, vb: usize, x: &Section, y: &Section) -> Result<Section> {
    lambda.require_valence(2, 0)?;
    let dual = lambda.chart();
    x.validate(dual, vb)?;
    y.validate(dual, vb)?;
    match lambda.degree(vb)? {
        Degree::Any | Degree::Exactly(-1) => {}
        d => {
            return Err(Error::Malformed(format!(
                "Leibniz tensor has fiber degree {d}, expected -1 (linear)"
            )))
        }
    }
    let f = x.linear_function();
    let g = y.linear_function();
    let mut bracket = Poly::zero();
    for (idx, c) in lambda.full() {
        bracket += &(&c * &f.partial(idx[0])) * &g.partial(idx[1]);
    }
    let (base, fiber) = dual.vb_split(vb)?;
    let mut out = BTreeMap::new();
    for (m, c) in bracket.terms() {
        let fiber_part: Vec<_> = m.factors().iter().filter(|(v, _)| fiber.contains(v)).collect();
        match fiber_part.as_slice() {
            [(v, 1)] => {
                let (_, rest) = m.without(*v);
                debug_assert!(rest.factors().iter().all(|(w, _)| base.contains(w)));
                *out.entry(*v).or_insert_with(Poly::zero) += Poly::term(c.clone(), rest);
            }
            _ => return Err(Error::Malformed("bracket of sections is not linear in the fiber".into())),
        }
    }
    Ok(Section::new(out))
}
