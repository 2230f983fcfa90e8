//! The theorem battery: randomized exact checks of the lift identities,
//! degree formulas and structure-preservation results. Every criterion is
//! deterministic in the seed.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::calculus::{
    concomitant, exterior_derivative, fn_bracket, interior, lie_bracket, lie_derivative, nijenhuis_torsion,
    nr_bracket, schouten_bracket,
};
use crate::chart::{Chart, Degree};
use crate::checkers::{
    is_almost_complex, is_involutive, is_nijenhuis, is_poisson, is_weighted_distribution, is_weighted_poisson,
    n_lambda, rank_at_point, Distribution,
};
use crate::error::Result;
use crate::lifts::{AffineConnection, LiftContext};
use crate::oracle::{koszul_concomitant_oracle, pair_concomitant, taylor_lift_oracle, SamplePlan};
use crate::poly::{rat, Poly, Var};
use crate::random::Gen;
use crate::tensor::{Symmetry, TensorField};

#[derive(Clone, Debug, Serialize)]
pub struct PartOutcome {
    pub name: String,
    pub cases: usize,
    pub failures: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionOutcome {
    pub id: u32,
    pub key: &'static str,
    pub title: &'static str,
    pub passed: bool,
    pub cases: usize,
    pub failures: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub parts: Vec<PartOutcome>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    /// Wall-clock seconds; excluded from JSON so output is reproducible.
    #[serde(skip)]
    pub seconds: f64,
}

pub const CRITERIA: [(u32, &str, &str); 10] = [
    (1, "lift-displays", "lifts of x d/dy and x dy match the explicit r=1,2 formulas"),
    (2, "bracket-lifts", "brackets, insertion, d and Lie derivative commute with lifts"),
    (3, "lift-degrees", "deg K^(l) = l - q r on the prolongation grading"),
    (4, "weight-commutation", "[nabla_TrF, nabla_F^(c)] = 0 for all small weight vectors"),
    (5, "poisson-lift", "complete lifts of Poisson bivectors are weighted Poisson of degree r"),
    (6, "nijenhuis-lift", "complete lifts preserve composition, J^2 = -I and vanishing torsion"),
    (7, "distribution-lift", "lifted involutive distribution has rank (r+1)k and stays involutive"),
    (8, "connection-lift", "lifted connections satisfy the Morimoto identity"),
    (9, "concomitant-dual-path", "coordinate concomitant equals the Koszul bracket difference"),
    (10, "oracle-independence", "lift_function agrees with the Taylor oracle"),
];

/// Accumulates case results with a few failure notes.
#[derive(Default)]
struct Tally {
    cases: usize,
    failures: usize,
    notes: Vec<String>,
}

impl Tally {
    fn record(&mut self, ok: Result<bool>, what: impl FnOnce() -> String) {
        self.cases += 1;
        let failed = match ok {
            Ok(true) => return,
            Ok(false) => what(),
            Err(e) => format!("{}: error {e}", what()),
        };
        self.failures += 1;
        if self.notes.len() < 5 {
            self.notes.push(failed);
        }
    }

    fn merge(&mut self, other: Tally) {
        self.cases += other.cases;
        self.failures += other.failures;
        for n in other.notes {
            if self.notes.len() < 5 {
                self.notes.push(n);
            }
        }
    }
}

fn outcome(id: u32, tally: Tally, parts: Vec<PartOutcome>, started: Instant) -> CriterionOutcome {
    let (_, key, title) = CRITERIA[id as usize - 1];
    CriterionOutcome {
        id,
        key,
        title,
        passed: tally.failures == 0 && tally.cases > 0,
        cases: tally.cases,
        failures: tally.failures,
        parts,
        notes: tally.notes,
        seconds: started.elapsed().as_secs_f64(),
    }
}

pub fn run(id: u32, seed: u64) -> Option<CriterionOutcome> {
    let f: fn(u64) -> CriterionOutcome = match id {
        1 => lift_displays,
        2 => bracket_lifts,
        3 => lift_degrees,
        4 => weight_commutation,
        5 => poisson_lift,
        6 => nijenhuis_lift,
        7 => distribution_lift,
        8 => connection_lift,
        9 => concomitant_dual_path,
        10 => oracle_independence,
        _ => return None,
    };
    Some(f(seed))
}

pub fn run_all(seed: u64) -> Vec<CriterionOutcome> {
    CRITERIA.iter().filter_map(|&(id, _, _)| run(id, seed)).collect()
}

fn manifold(dim: usize) -> Chart {
    let names = ["x", "y", "z"];
    Chart::manifold(&names[..dim]).expect("valid chart")
}

fn plane() -> Chart {
    manifold(2)
}

// ---------------------------------------------------------------- 1

/// The explicit r = 1, 2 formulas for the lifts of `X = Xⁱ∂ᵢ`, built from
/// partial derivatives of the components.
fn display_vector_lift(ctx: &LiftContext, x: &TensorField, lambda: usize) -> Result<TensorField> {
    let (r, n) = (ctx.r(), ctx.base().dim());
    let t = ctx.prolonged();
    let on = |f: &Poly| f.clone();
    let xv = |mu: usize, j: usize| Poly::var(ctx.var(Var::from(j), mu));
    let mut terms: Vec<(Var, Poly)> = Vec::new();
    for k in 0..n {
        let xk = x.component(&[Var::from(k)]);
        let d1: Poly = (0..n).map(|j| &xk.partial(Var::from(j)) * &xv(1, j)).sum();
        let target = |mu: usize| ctx.var(Var::from(k), mu);
        match (r, lambda) {
            (1, 0) => terms.push((target(1), on(&xk))),
            (1, 1) => {
                terms.push((target(0), on(&xk)));
                terms.push((target(1), d1));
            }
            (2, 0) => terms.push((target(2), on(&xk))),
            (2, 1) => {
                terms.push((target(1), on(&xk)));
                terms.push((target(2), d1));
            }
            (2, 2) => {
                terms.push((target(0), on(&xk)));
                terms.push((target(1), d1));
                let mut second = Poly::zero();
                for a in 0..n {
                    for b in 0..n {
                        let h = xk.partial(Var::from(a)).partial(Var::from(b));
                        second += &(&h * &xv(1, a)) * &xv(1, b);
                    }
                }
                let second = second.scale(&rat(1, 2));
                let lin: Poly = (0..n).map(|p| &xk.partial(Var::from(p)) * &xv(2, p)).sum();
                terms.push((target(2), second + lin));
            }
            _ => unreachable!("displays cover r = 1, 2"),
        }
    }
    TensorField::vector_field(t, terms)
}

/// The explicit r = 1, 2 formulas for the lifts of `α = α_i dxⁱ`.
fn display_form_lift(ctx: &LiftContext, alpha: &TensorField, lambda: usize) -> Result<TensorField> {
    let (r, n) = (ctx.r(), ctx.base().dim());
    let t = ctx.prolonged();
    let xv = |mu: usize, j: usize| Poly::var(ctx.var(Var::from(j), mu));
    let mut terms: Vec<(Var, Poly)> = Vec::new();
    for i in 0..n {
        let ai = alpha.component(&[Var::from(i)]);
        let d1: Poly = (0..n).map(|j| &ai.partial(Var::from(j)) * &xv(1, j)).sum();
        let slot = |mu: usize| ctx.var(Var::from(i), mu);
        match (r, lambda) {
            (_, 0) => terms.push((slot(0), ai.clone())),
            (_, 1) => {
                terms.push((slot(0), d1));
                terms.push((slot(1), ai.clone()));
            }
            (2, 2) => {
                let mut second = Poly::zero();
                for k in 0..n {
                    for j in 0..n {
                        let h = ai.partial(Var::from(k)).partial(Var::from(j));
                        second += &(&h * &xv(1, k)) * &xv(1, j);
                    }
                }
                let lin: Poly = (0..n).map(|l| &ai.partial(Var::from(l)) * &xv(2, l)).sum();
                terms.push((slot(0), second.scale(&rat(1, 2)) + lin));
                terms.push((slot(1), d1));
                terms.push((slot(2), ai.clone()));
            }
            _ => unreachable!("displays cover r = 1, 2"),
        }
    }
    TensorField::one_form(t, terms)
}

fn lift_displays(seed: u64) -> CriterionOutcome {
    let started = Instant::now();
    let mut tally = Tally::default();
    let c = plane();
    let x = Poly::var(Var(0));
    let xdy = TensorField::vector_field(&c, [(Var(1), x.clone())]).expect("valid field");
    let alpha = TensorField::one_form(&c, [(Var(1), x)]).expect("valid form");
    let mut inputs = vec![(xdy, alpha)];
    // a few random inputs exercise the second-derivative terms
    let mut g = Gen::new(seed, 1);
    for _ in 0..4 {
        inputs.push((g.vector_field(&c), g.tensor(&c, 0, 1, Symmetry::NONE, 2)));
    }
    for r in 1..=2 {
        let ctx = LiftContext::new(&c, r).expect("prolongation");
        for (i, (xf, af)) in inputs.iter().enumerate() {
            for l in 0..=r {
                let ok = display_vector_lift(&ctx, xf, l)
                    .and_then(|want| Ok(ctx.lift_vector_field(xf, l as i64)? == want));
                tally.record(ok, || format!("vector field #{i}, r={r}, lambda={l}"));
                let ok = display_form_lift(&ctx, af, l)
                    .and_then(|want| Ok(ctx.lift_one_form(af, l as i64)? == want));
                tally.record(ok, || format!("one-form #{i}, r={r}, lambda={l}"));
            }
        }
    }
    outcome(1, tally, vec![], started)
}

// ---------------------------------------------------------------- 2

pub const BRACKET_CASES: usize = 200;

type Identity = fn(&LiftContext, &mut Gen) -> Result<Vec<(i64, i64, bool)>>;

/// Runs `check` on every valid (λ, μ) for one random input.
fn over_pairs(
    ctx: &LiftContext,
    mut check: impl FnMut(i64, i64) -> Result<bool>,
) -> Result<Vec<(i64, i64, bool)>> {
    let r = ctx.r() as i64;
    let mut out = Vec::new();
    for l in 0..=r {
        for m in 0..=r {
            out.push((l, m, check(l, m)?));
        }
    }
    Ok(out)
}

fn id_lie_bracket(ctx: &LiftContext, g: &mut Gen) -> Result<Vec<(i64, i64, bool)>> {
    let c = ctx.base();
    let (x, y) = (g.vector_field(c), g.vector_field(c));
    let xy = lie_bracket(&x, &y)?;
    let r = ctx.r() as i64;
    over_pairs(ctx, |l, m| {
        Ok(lie_bracket(&ctx.lift_tensor(&x, l)?, &ctx.lift_tensor(&y, m)?)? == ctx.lift_tensor(&xy, l + m - r)?)
    })
}

fn id_insertion(ctx: &LiftContext, g: &mut Gen) -> Result<Vec<(i64, i64, bool)>> {
    let c = ctx.base();
    let p = g.range(1, c.dim().min(3));
    let x = g.vector_field(c);
    let w = g.form(c, p);
    let iw = interior(&x, &w)?;
    let r = ctx.r() as i64;
    over_pairs(ctx, |l, m| {
        Ok(interior(&ctx.lift_tensor(&x, l)?, &ctx.lift_tensor(&w, m)?)? == ctx.lift_tensor(&iw, l + m - r)?)
    })
}

fn id_exterior(ctx: &LiftContext, g: &mut Gen) -> Result<Vec<(i64, i64, bool)>> {
    let c = ctx.base();
    let p = g.range(0, c.dim().min(2));
    let w = if p == 0 {
        TensorField::scalar(c, g.nonzero_poly(c.dim(), 2, 3))?
    } else {
        g.form(c, p)
    };
    let dw = exterior_derivative(&w)?;
    let r = ctx.r() as i64;
    (0..=r)
        .map(|l| Ok((l, 0, exterior_derivative(&ctx.lift_tensor(&w, l)?)? == ctx.lift_tensor(&dw, l)?)))
        .collect()
}

fn id_lie_derivative(ctx: &LiftContext, g: &mut Gen) -> Result<Vec<(i64, i64, bool)>> {
    let c = ctx.base();
    let (q, p) = *g.pick(&[(0, 0), (1, 0), (0, 1), (1, 1), (2, 0), (0, 2), (2, 1), (1, 2)]);
    let sym = g.symmetry(q, p);
    let x = g.vector_field(c);
    let k = if q + p == 0 {
        TensorField::scalar(c, g.nonzero_poly(c.dim(), 2, 3))?
    } else if (sym.contra == crate::tensor::BlockSymmetry::Antisym && c.dim() < 2)
        || (sym.cov == crate::tensor::BlockSymmetry::Antisym && c.dim() < 2)
    {
        g.tensor(c, q, p, Symmetry::NONE, 2)
    } else {
        g.tensor(c, q, p, sym, 2)
    };
    let lk = lie_derivative(&x, &k)?;
    let r = ctx.r() as i64;
    over_pairs(ctx, |l, m| {
        Ok(lie_derivative(&ctx.lift_tensor(&x, l)?, &ctx.lift_tensor(&k, m)?)? == ctx.lift_tensor(&lk, l + m - r)?)
    })
}

fn id_schouten(ctx: &LiftContext, g: &mut Gen) -> Result<Vec<(i64, i64, bool)>> {
    let c = ctx.base();
    let top = c.dim().min(2);
    let (k, l) = (g.range(1, top), g.range(1, top));
    let (a, b) = (g.multivector(c, k), g.multivector(c, l));
    let ab = schouten_bracket(&a, &b)?;
    let r = ctx.r() as i64;
    over_pairs(ctx, |la, mb| {
        Ok(schouten_bracket(&ctx.lift_tensor(&a, la)?, &ctx.lift_tensor(&b, mb)?)?
            == ctx.lift_tensor(&ab, la + mb - r)?)
    })
}

fn id_nr(ctx: &LiftContext, g: &mut Gen) -> Result<Vec<(i64, i64, bool)>> {
    let c = ctx.base();
    let top = c.dim().min(2);
    let (k, l) = loop {
        let pair = (g.range(0, top), g.range(0, top));
        if pair.0 + pair.1 >= 1 {
            break pair;
        }
    };
    let (a, b) = (g.vector_valued_form(c, k), g.vector_valued_form(c, l));
    let ab = nr_bracket(&a, &b)?;
    let r = ctx.r() as i64;
    over_pairs(ctx, |la, mb| {
        Ok(nr_bracket(&ctx.lift_tensor(&a, la)?, &ctx.lift_tensor(&b, mb)?)? == ctx.lift_tensor(&ab, la + mb - r)?)
    })
}

fn id_fn(ctx: &LiftContext, g: &mut Gen) -> Result<Vec<(i64, i64, bool)>> {
    let c = ctx.base();
    let top = c.dim().min(2);
    let (k, l) = (g.range(0, top), g.range(0, top));
    let (a, b) = (g.vector_valued_form(c, k), g.vector_valued_form(c, l));
    let ab = fn_bracket(&a, &b)?;
    let r = ctx.r() as i64;
    over_pairs(ctx, |la, mb| {
        Ok(fn_bracket(&ctx.lift_tensor(&a, la)?, &ctx.lift_tensor(&b, mb)?)? == ctx.lift_tensor(&ab, la + mb - r)?)
    })
}

pub const BRACKET_IDENTITIES: [(&str, Identity); 7] = [
    ("lie-bracket", id_lie_bracket),
    ("insertion", id_insertion),
    ("exterior-derivative", id_exterior),
    ("lie-derivative", id_lie_derivative),
    ("schouten", id_schouten),
    ("nijenhuis-richardson", id_nr),
    ("frolicher-nijenhuis", id_fn),
];

/// One randomized input: a chart of dimension ≤ 3 and an order r ≤ 3.
fn random_context(g: &mut Gen) -> LiftContext {
    let dim = g.range(1, 3);
    let r = g.range(0, 3);
    LiftContext::new(&manifold(dim), r).expect("prolongation")
}

fn run_identity(name: &str, check: Identity, seed: u64, stream: u64, cases: usize) -> (PartOutcome, Tally) {
    let results: Vec<Tally> = (0..cases)
        .into_par_iter()
        .map(|i| {
            let mut g = Gen::new(seed, stream * 1_000_003 + i as u64);
            let ctx = random_context(&mut g);
            let mut t = Tally::default();
            match check(&ctx, &mut g) {
                Ok(rows) => {
                    for (l, m, ok) in rows {
                        t.record(Ok(ok), || {
                            format!("{name} input #{i} (dim {}, r {}) at lambda={l}, mu={m}", ctx.base().dim(), ctx.r())
                        });
                    }
                }
                Err(e) => t.record(Err(e), || format!("{name} input #{i}")),
            }
            t
        })
        .collect();
    let mut total = Tally::default();
    for t in results {
        total.merge(t);
    }
    let part = PartOutcome {
        name: name.to_string(),
        cases,
        failures: total.failures,
    };
    (part, total)
}

fn bracket_lifts(seed: u64) -> CriterionOutcome {
    let started = Instant::now();
    let mut tally = Tally::default();
    let mut parts = Vec::new();
    for (s, (name, check)) in BRACKET_IDENTITIES.iter().enumerate() {
        let (part, t) = run_identity(name, *check, seed, 20 + s as u64, BRACKET_CASES);
        parts.push(part);
        tally.merge(t);
    }
    outcome(2, tally, parts, started)
}

// ---------------------------------------------------------------- 3

pub const DEGREE_CASES: usize = 100;

/// A nonzero tensor homogeneous of `degree` in grading component 0.
fn homogeneous_tensor(g: &mut Gen, chart: &Chart, q: usize, p: usize, sym: Symmetry, degree: i64) -> Option<TensorField> {
    let pool = crate::random::canonical_indices(chart.dim(), q, p, sym);
    for _ in 0..20 {
        let mut comps = Vec::new();
        for _ in 0..g.range(1, 3) {
            let idx = g.pick(&pool).clone();
            let basis: i64 = idx[q..].iter().map(|&v| chart.weight(v, 0)).sum::<i64>()
                - idx[..q].iter().map(|&v| chart.weight(v, 0)).sum::<i64>();
            if let Some(c) = g.homogeneous_poly(chart, 0, degree - basis, 2) {
                comps.push((idx, c));
            }
        }
        if let Ok(t) = TensorField::from_components(chart, q, p, sym, comps) {
            if !t.is_zero() {
                return Some(t);
            }
        }
    }
    None
}

fn lift_degrees(seed: u64) -> CriterionOutcome {
    let started = Instant::now();
    let mut tally = Tally::default();
    let mut g = Gen::new(seed, 3);
    let mut inputs = 0;
    while inputs < DEGREE_CASES {
        let dim = g.range(1, 3);
        let weights: Vec<(String, i64)> = (0..dim).map(|i| (format!("x{i}"), g.int_range(0, 3))).collect();
        let spec: Vec<(&str, i64)> = weights.iter().map(|(n, w)| (n.as_str(), *w)).collect();
        let chart = Chart::simple(&spec).expect("valid chart");
        let r = g.range(1, 3);
        let (q, p) = (g.range(0, 2), g.range(0, 2));
        let mut sym = g.symmetry(q, p);
        if dim < 2 {
            sym = Symmetry::NONE;
        }
        let degree = g.int_range(-3, 3);
        let Some(k) = homogeneous_tensor(&mut g, &chart, q, p, sym, degree) else {
            continue;
        };
        if q + p == 0 && k.as_scalar().is_some_and(|f| f.as_constant().is_some()) {
            continue;
        }
        inputs += 1;
        let ctx = LiftContext::new(&chart, r).expect("prolongation");
        let top = ctx.prolonged().grading_count() - 1;
        for l in 0..=r {
            let ok = ctx.lift_tensor(&k, l as i64).and_then(|lk| {
                let want = l as i64 - (q * r) as i64;
                Ok(!lk.is_zero() && lk.degree(top)? == Degree::Exactly(want) && lk.degree(0)? == Degree::Exactly(degree))
            });
            tally.record(ok, || format!("({q},{p}) tensor of degree {degree}, r={r}, lambda={l}"));
        }
    }
    outcome(3, tally, vec![], started)
}

// ---------------------------------------------------------------- 4

/// Every weight vector in `{0..=3}^dim` for dim = 1..=3.
pub fn small_weight_vectors() -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for dim in 1..=3u32 {
        for code in 0..4usize.pow(dim) {
            let mut c = code;
            let mut w = Vec::new();
            for _ in 0..dim {
                w.push((c % 4) as i64);
                c /= 4;
            }
            out.push(w);
        }
    }
    out
}

fn weight_commutation(_seed: u64) -> CriterionOutcome {
    let started = Instant::now();
    let mut tally = Tally::default();
    let names = ["x", "y", "z"];
    for w in small_weight_vectors() {
        let spec: Vec<(&str, i64)> = names.iter().copied().zip(w.iter().copied()).collect();
        let chart = Chart::simple(&spec).expect("valid chart");
        for r in 1..=3 {
            let ok = (|| {
                let ctx = LiftContext::new(&chart, r)?;
                let euler = ctx.prolongation_weight_field()?;
                let lifted = ctx.lift_weight_vector_field(0)?;
                let via_lift = ctx.complete_lift(&chart.weight_vector_field(0)?)?;
                Ok(lifted == via_lift && lie_bracket(&euler, &lifted)?.is_zero())
            })();
            tally.record(ok, || format!("weights {w:?}, r={r}"));
        }
    }
    outcome(4, tally, vec![], started)
}

// ---------------------------------------------------------------- 5

/// Five base Poisson bivectors, including a constant and linear ones.
pub fn base_poisson_examples() -> Vec<(&'static str, TensorField)> {
    let c2 = plane();
    let c3 = manifold(3);
    let del = |c: &Chart, i: u32| TensorField::coordinate_field(c, Var(i)).expect("valid field");
    let wedge = |c: &Chart, i: u32, j: u32| del(c, i).wedge(&del(c, j)).expect("valid wedge");
    let v = |i: u32| Poly::var(Var(i));
    let so3 = wedge(&c3, 1, 2)
        .scale_poly(&v(0))
        .add(&wedge(&c3, 2, 0).scale_poly(&v(1)))
        .and_then(|t| t.add(&wedge(&c3, 0, 1).scale_poly(&v(2))))
        .expect("same shape");
    vec![
        ("d/dx ^^ d/dy", wedge(&c2, 0, 1)),
        ("x*d/dx ^^ d/dy (affine line algebra)", wedge(&c2, 0, 1).scale_poly(&v(0))),
        ("so(3) Lie-Poisson", so3),
        ("(x^2 + y)*d/dx ^^ d/dy", wedge(&c2, 0, 1).scale_poly(&(v(0).pow(2) + v(1)))),
        ("z*d/dx ^^ d/dy (Heisenberg)", wedge(&c3, 0, 1).scale_poly(&v(2))),
    ]
}

fn poisson_lift(_seed: u64) -> CriterionOutcome {
    let started = Instant::now();
    let mut tally = Tally::default();
    for (name, lambda) in base_poisson_examples() {
        tally.record(is_poisson(&lambda).map(|r| r.passed()), || format!("{name} is not Poisson"));
        for r in 1..=2 {
            let ok = (|| {
                let ctx = LiftContext::new(lambda.chart(), r)?;
                let lc = ctx.complete_lift(&lambda)?;
                let top = ctx.prolonged().grading_count() - 1;
                Ok(is_weighted_poisson(&lc, top, r as i64)?.passed())
            })();
            tally.record(ok, || format!("complete lift of {name}, r={r}"));
        }
    }
    outcome(5, tally, vec![], started)
}

// ---------------------------------------------------------------- 6

pub const COMPOSITION_CASES: usize = 100;

fn nijenhuis_lift(seed: u64) -> CriterionOutcome {
    let started = Instant::now();
    let mut tally = Tally::default();
    let c = plane();
    let del = |i: u32| TensorField::coordinate_field(&c, Var(i)).expect("valid field");
    let d = |i: u32| TensorField::differential(&c, Var(i)).expect("valid form");
    let j = del(1)
        .tensor_product(&d(0))
        .and_then(|a| a.sub(&del(0).tensor_product(&d(1))?))
        .expect("same shape");
    for r in 1..=2 {
        let ok = (|| {
            let ctx = LiftContext::new(&c, r)?;
            let jc = ctx.complete_lift(&j)?;
            let id = TensorField::identity_11(ctx.prolonged());
            Ok(is_almost_complex(&jc)?.passed()
                && is_nijenhuis(&jc)?.passed()
                && ctx.complete_lift(&TensorField::identity_11(&c))? == id)
        })();
        tally.record(ok, || format!("almost complex structure, r={r}"));
    }
    let mut g = Gen::new(seed, 6);
    let inputs: Vec<(Chart, usize, TensorField, TensorField)> = (0..COMPOSITION_CASES)
        .map(|_| {
            let chart = manifold(g.range(1, 3));
            let r = g.range(1, 2);
            let (a, b) = (g.constant_11(&chart), g.constant_11(&chart));
            (chart, r, a, b)
        })
        .collect();
    for (i, (chart, r, a, b)) in inputs.iter().enumerate() {
        let ok = (|| {
            let ctx = LiftContext::new(chart, *r)?;
            let lhs = ctx.complete_lift(&TensorField::compose_11(a, b)?)?;
            let rhs = TensorField::compose_11(&ctx.complete_lift(a)?, &ctx.complete_lift(b)?)?;
            let torsion_ok = nijenhuis_torsion(&ctx.complete_lift(a)?)?.is_zero();
            Ok(lhs == rhs && torsion_ok)
        })();
        tally.record(ok, || format!("constant pair #{i}, r={r}"));
    }
    outcome(6, tally, vec![], started)
}

// ---------------------------------------------------------------- 7

fn distribution_lift(seed: u64) -> CriterionOutcome {
    let started = Instant::now();
    let mut tally = Tally::default();
    let c = manifold(3);
    let dx = TensorField::coordinate_field(&c, Var(0)).expect("valid field");
    let xdy = TensorField::vector_field(&c, [(Var(1), Poly::var(Var(0)))]).expect("valid field");
    let dist = Distribution::new(vec![dx, xdy]).expect("valid distribution");
    let plan = SamplePlan::with_seed(seed);
    tally.record(is_involutive(&dist, &plan).map(|r| r.passed()), || "base distribution not involutive".into());
    for r in 1..=2 {
        let ctx = match LiftContext::new(&c, r) {
            Ok(ctx) => ctx,
            Err(e) => {
                tally.record(Err(e), || format!("r={r}"));
                continue;
            }
        };
        let lifted = match ctx.lift_distribution(&dist) {
            Ok(d) => d,
            Err(e) => {
                tally.record(Err(e), || format!("r={r}"));
                continue;
            }
        };
        let want = (r + 1) * 2;
        let points = plan.points(ctx.prolonged().dim()).unwrap_or_default();
        for (i, pt) in points.iter().enumerate() {
            let ok = rank_at_point(&lifted, pt).map(|k| k == want);
            tally.record(ok, || format!("rank at point #{i}, r={r} (expected {want})"));
        }
        tally.record(is_involutive(&lifted, &plan).map(|rep| rep.passed()), || format!("lift not involutive, r={r}"));
        for comp in 0..ctx.prolonged().grading_count() {
            let ok = is_weighted_distribution(&lifted, comp, &plan).map(|rep| rep.passed());
            tally.record(ok, || format!("lift not weighted in component {comp}, r={r}"));
        }
    }
    outcome(7, tally, vec![], started)
}

// ---------------------------------------------------------------- 8

pub const CONNECTION_CASES: usize = 20;

fn random_connection(g: &mut Gen) -> AffineConnection {
    let chart = manifold(g.range(1, 2));
    let n = chart.dim();
    let symbols: Vec<_> = (0..g.range(1, 3))
        .map(|_| {
            let v = |x: usize| Var::from(x);
            let key = (v(g.range(0, n - 1)), v(g.range(0, n - 1)), v(g.range(0, n - 1)));
            (key, g.nonzero_poly(n, 2, 2))
        })
        .collect();
    AffineConnection::new(&chart, symbols).expect("valid connection")
}

/// Morimoto identity over all (λ, μ) and the horizontal-field placement of
/// the lifted symbols, for one connection and order.
fn connection_case(conn: &AffineConnection, r: usize, g: &mut Gen) -> Result<bool> {
    let chart = conn.chart();
    let ctx = LiftContext::new(chart, r)?;
    let lifted = conn.lift(&ctx)?;
    let (x, y) = (g.vector_field(chart), g.vector_field(chart));
    let xy = conn.covariant_derivative(&x, &y)?;
    let rr = r as i64;
    for l in 0..=rr {
        for m in 0..=rr {
            let lhs = lifted.covariant_derivative(&ctx.lift_tensor(&x, l)?, &ctx.lift_tensor(&y, m)?)?;
            if lhs != ctx.lift_tensor(&xy, l + m - rr)? {
                return Ok(false);
            }
        }
    }
    // as a linear connection on TM: lifted horizontal fields are lifts of horizontal fields
    let linear = conn.as_linear()?;
    let tctx = LiftContext::new(linear.chart(), r)?;
    let llin = linear.lift(&tctx)?;
    let nb = linear.base_vars().len();
    for k in 0..nb {
        let h = linear.horizontal_field(k)?;
        for nu in 0..=r {
            if llin.horizontal_field(nu * nb + k)? != tctx.lift_vector_field(&h, (r - nu) as i64)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn connection_lift(seed: u64) -> CriterionOutcome {
    let started = Instant::now();
    let mut tally = Tally::default();
    let c = plane();
    let one = AffineConnection::new(&c, [((Var(1), Var(0), Var(0)), Poly::one())]).expect("valid connection");
    let mut g = Gen::new(seed, 8);
    let mut conns = vec![("one-symbol".to_string(), one)];
    for i in 0..CONNECTION_CASES {
        conns.push((format!("random #{i}"), random_connection(&mut g)));
    }
    for (name, conn) in &conns {
        for r in 1..=2 {
            let ok = connection_case(conn, r, &mut g);
            tally.record(ok, || format!("{name} connection, r={r}"));
        }
    }
    outcome(8, tally, vec![], started)
}

// ---------------------------------------------------------------- 9

pub const CONCOMITANT_CASES: usize = 100;

/// A random bivector Λ and a (1,1)-tensor `N = Λ♯∘B♭ + f·I` with NΛ skew.
pub fn random_pn_pair(g: &mut Gen, chart: &Chart) -> Result<(TensorField, TensorField)> {
    let lambda = g.multivector(chart, 2);
    let b = g.form(chart, 2);
    let f = g.poly(chart.dim(), 1, 2);
    let lb = lambda
        .with_symmetry(Symmetry::NONE)?
        .tensor_product(&b.with_symmetry(Symmetry::NONE)?)?
        .contract(1, 0)?;
    let n = lb.add(&TensorField::identity_11(chart).scale_poly(&f))?;
    Ok((lambda, n))
}

/// Draws inputs until the pairing `C(α, β)` is nonzero, so the comparison
/// is never between two zero forms.
/// In dimension 2 this family forces `N = φ·I` and a zero concomitant.
fn concomitant_case(g: &mut Gen) -> Result<bool> {
    let chart = manifold(3);
    for _ in 0..MAX_REDRAWS {
        let (lambda, n) = random_pn_pair(g, &chart)?;
        let c = concomitant(&lambda, &n)?;
        if c.is_zero() {
            continue;
        }
        let alpha = g.tensor(&chart, 0, 1, Symmetry::NONE, 3);
        let beta = g.tensor(&chart, 0, 1, Symmetry::NONE, 3);
        let lhs = pair_concomitant(&c, &alpha, &beta)?;
        if lhs.is_zero() {
            continue;
        }
        let skew = n_lambda(&lambda, &n)?.with_symmetry(Symmetry::ANTISYM_CONTRA).is_ok();
        let rhs = koszul_concomitant_oracle(&lambda, &n, &alpha, &beta)?;
        let with_identity = concomitant(&lambda, &TensorField::identity_11(&chart))?.is_zero();
        return Ok(skew && lhs == rhs && with_identity);
    }
    Err(crate::error::Error::Malformed("no nontrivial concomitant input drawn".into()))
}

const MAX_REDRAWS: usize = 200;

fn concomitant_dual_path(seed: u64) -> CriterionOutcome {
    let started = Instant::now();
    let mut tally = Tally::default();
    let mut g = Gen::new(seed, 9);
    for i in 0..CONCOMITANT_CASES {
        let ok = concomitant_case(&mut g);
        tally.record(ok, || format!("random case #{i}"));
    }
    outcome(9, tally, vec![], started)
}

// ---------------------------------------------------------------- 10

pub const ORACLE_CASES: usize = 500;

fn oracle_independence(seed: u64) -> CriterionOutcome {
    let started = Instant::now();
    let mut tally = Tally::default();
    let mut g = Gen::new(seed, 10);
    for i in 0..ORACLE_CASES {
        let chart = manifold(g.range(1, 3));
        let r = g.range(0, 3);
        let lambda = g.int_range(-1, r as i64 + 1);
        let f = g.poly(chart.dim(), 3, 4);
        let ok = LiftContext::new(&chart, r)
            .map(|ctx| ctx.lift_function(&f, lambda) == taylor_lift_oracle(&f, lambda, &ctx));
        tally.record(ok, || format!("case #{i}: r={r}, lambda={lambda}"));
    }
    outcome(10, tally, vec![], started)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_vectors_enumerated() {
        let w = small_weight_vectors();
        assert_eq!(w.len(), 4 + 16 + 64);
        assert!(w.contains(&vec![3, 0, 2]));
    }

    #[test]
    fn display_formulas_hold_for_the_reference_field() {
        let out = lift_displays(1);
        assert!(out.passed, "{:?}", out.notes);
        assert_eq!(out.cases, 2 * 5 * (2 + 3));
    }

    #[test]
    fn pn_pairs_are_skew_compatible() {
        let mut g = Gen::new(5, 0);
        let c = manifold(3);
        for _ in 0..10 {
            let (l, n) = random_pn_pair(&mut g, &c).unwrap();
            assert!(n_lambda(&l, &n).unwrap().with_symmetry(Symmetry::ANTISYM_CONTRA).is_ok());
        }
    }
}
