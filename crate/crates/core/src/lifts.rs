//! Morimoto λ-lifts to the higher tangent bundle `T^r`.
//!
//! A point of `T^r M` is an r-jet `t ↦ Σ t^μ x_μ`; the λ-lift of a function
//! is the coefficient of `t^λ` in `f(Σ t^μ x_μ)`. Basis objects lift as
//! `(∂_a)^(μ) = ∂_{a_{r−μ}}` and `(dx^b)^(μ) = dx^b_μ`, and everything else
//! follows from the Leibniz rule over tensor factors.

use std::collections::BTreeMap;

use crate::chart::Chart;
use crate::checkers::Distribution;
use crate::error::{Error, Result};
use crate::poly::{Poly, Var};
use crate::tensor::{BlockSymmetry, Symmetry, TensorField};

/// A base chart together with its r-th prolongation.
#[derive(Clone, Debug)]
pub struct LiftContext {
    base: Chart,
    r: usize,
    prolonged: Chart,
}

fn series_mul(a: &[Poly], b: &[Poly], len: usize) -> Vec<Poly> {
    let mut out = vec![Poly::zero(); len];
    for (i, ai) in a.iter().enumerate().filter(|(_, p)| !p.is_zero()) {
        for (j, bj) in b.iter().enumerate().take(len - i) {
            if !bj.is_zero() {
                out[i + j] += ai * bj;
            }
        }
    }
    out
}

/// All `(μ₀, …, μ_s)` with entries in `0..=r` summing to `total`.
fn compositions(parts: usize, total: usize, r: usize) -> Vec<Vec<usize>> {
    fn go(parts: usize, total: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 1 {
            if total <= r {
                cur.push(total);
                out.push(cur.clone());
                cur.pop();
            }
            return;
        }
        for m in 0..=total.min(r) {
            if total - m > r * (parts - 1) {
                continue;
            }
            cur.push(m);
            go(parts - 1, total - m, r, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(parts, total, r, &mut Vec::with_capacity(parts), &mut out);
    out
}

impl LiftContext {
    /// For r = 0 the prolonged chart is the base chart itself.
    pub fn new(base: &Chart, r: usize) -> Result<LiftContext> {
        let prolonged = if r == 0 { base.clone() } else { base.prolong(r)? };
        Ok(LiftContext {
            base: base.clone(),
            r,
            prolonged,
        })
    }

    pub fn base(&self) -> &Chart {
        &self.base
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn prolonged(&self) -> &Chart {
        &self.prolonged
    }

    /// `x_μ` for the base variable `v`.
    pub fn var(&self, v: Var, mu: usize) -> Var {
        Var::from(mu * self.base.dim() + v.index())
    }

    /// The first `len` jet coefficients `f^(0), …, f^(len−1)`.
    fn jet_upto(&self, f: &Poly, len: usize) -> Vec<Poly> {
        let mut out = vec![Poly::zero(); len];
        let mut powers: BTreeMap<Var, Vec<Vec<Poly>>> = BTreeMap::new();
        for (m, c) in f.terms() {
            let mut acc = vec![Poly::zero(); len];
            acc[0] = Poly::constant(c.clone());
            for &(v, e) in m.factors() {
                let table = powers.entry(v).or_insert_with(|| {
                    let lin: Vec<Poly> = (0..len).map(|mu| Poly::var(self.var(v, mu))).collect();
                    vec![lin]
                });
                while table.len() < e as usize {
                    let next = series_mul(table.last().unwrap(), &table[0], len);
                    table.push(next);
                }
                acc = series_mul(&acc, &table[e as usize - 1], len);
            }
            for (o, a) in out.iter_mut().zip(acc) {
                *o += a;
            }
        }
        out
    }

    /// All lifts `f^(0), …, f^(r)`.
    pub fn jet(&self, f: &Poly) -> Vec<Poly> {
        self.jet_upto(f, self.r + 1)
    }

    /// `f^(λ)`; zero for λ outside `0..=r`.
    pub fn lift_function(&self, f: &Poly, lambda: i64) -> Poly {
        if lambda < 0 || lambda as usize > self.r {
            return Poly::zero();
        }
        let l = lambda as usize;
        self.jet_upto(f, l + 1).pop().unwrap_or_default()
    }

    /// `K^(λ)` by the Leibniz rule over the coefficient and each slot.
    pub fn lift_tensor(&self, k: &TensorField, lambda: i64) -> Result<TensorField> {
        if k.chart() != &self.base {
            return Err(Error::ChartMismatch);
        }
        let (q, p) = k.valence();
        let sym = k.symmetry();
        let mut out = TensorField::zero(&self.prolonged, q, p, sym);
        if lambda < 0 || lambda as usize > self.r {
            return Ok(out);
        }
        let lambda = lambda as usize;
        let r = self.r;
        // symmetric blocks lift over the full table; the rest over stored components
        let expand = sym.contra == BlockSymmetry::Sym || sym.cov == BlockSymmetry::Sym;
        let source: Vec<(Vec<Var>, Poly)> = if expand {
            k.full().into_iter().collect()
        } else {
            k.components().map(|(i, c)| (i.clone(), c.clone())).collect()
        };
        let splits = compositions(q + p + 1, lambda, r);
        for (idx, c) in source {
            let jet = self.jet_upto(&c, lambda + 1);
            for split in &splits {
                let coeff = &jet[split[0]];
                if coeff.is_zero() {
                    continue;
                }
                let key: Vec<Var> = idx
                    .iter()
                    .enumerate()
                    .map(|(s, &v)| {
                        let mu = split[s + 1];
                        if s < q {
                            self.var(v, r - mu)
                        } else {
                            self.var(v, mu)
                        }
                    })
                    .collect();
                if expand && !out.is_canonical_index(&key) {
                    continue;
                }
                out.accumulate(key, coeff.clone());
            }
        }
        Ok(out)
    }

    pub fn lift_vector_field(&self, x: &TensorField, lambda: i64) -> Result<TensorField> {
        x.require_valence(1, 0)?;
        self.lift_tensor(x, lambda)
    }

    pub fn lift_one_form(&self, w: &TensorField, lambda: i64) -> Result<TensorField> {
        w.require_valence(0, 1)?;
        self.lift_tensor(w, lambda)
    }

    /// The complete lift `K^(c) = K^(r)`.
    pub fn complete_lift(&self, k: &TensorField) -> Result<TensorField> {
        self.lift_tensor(k, self.r as i64)
    }

    /// Generators `X_j^(ν)` for ν = 0..=r.
    pub fn lift_distribution(&self, d: &Distribution) -> Result<Distribution> {
        let mut gens = Vec::with_capacity(d.generators().len() * (self.r + 1));
        for nu in 0..=self.r {
            for x in d.generators() {
                gens.push(self.lift_vector_field(x, nu as i64)?);
            }
        }
        Distribution::new(gens)
    }

    /// `Σ_μ Σ_i wᵢ x^i_μ ∂_{x^i_μ}` for a base grading component.
    pub fn lift_weight_vector_field(&self, component: usize) -> Result<TensorField> {
        self.base.check_component(component)?;
        let mut out = TensorField::zero(&self.prolonged, 1, 0, Symmetry::NONE);
        for mu in 0..=self.r {
            for v in self.base.vars() {
                let w = self.base.weight(v, component);
                if w != 0 {
                    let lv = self.var(v, mu);
                    out.accumulate(vec![lv], Poly::var(lv).scale(&crate::poly::int(w)));
                }
            }
        }
        Ok(out)
    }

    /// The weight vector field `∇_{T^r F}` of the prolongation grading.
    pub fn prolongation_weight_field(&self) -> Result<TensorField> {
        if self.r == 0 {
            return Ok(TensorField::zero(&self.prolonged, 1, 0, Symmetry::NONE));
        }
        self.prolonged
            .weight_vector_field(self.prolonged.grading_count() - 1)
    }
}

/// A linear connection on a vector bundle with coordinates `(x^k, y^A)`,
/// given by symbols `Γ^A_{kB}(x)`. Horizontal lifts are
/// `X_k = ∂_{x^k} − Γ^A_{kB} y^B ∂_{y^A}`.
#[derive(Clone, Debug)]
pub struct LinearConnection {
    chart: Chart,
    base: Vec<Var>,
    fiber: Vec<Var>,
    /// `(k, A, B) ↦ Γ^A_{kB}`, positions into `base` and `fiber`.
    symbols: BTreeMap<(usize, usize, usize), Poly>,
}

impl LinearConnection {
    pub fn new(
        chart: &Chart,
        base: Vec<Var>,
        fiber: Vec<Var>,
        symbols: impl IntoIterator<Item = ((usize, usize, usize), Poly)>,
    ) -> Result<LinearConnection> {
        for &v in base.iter().chain(&fiber) {
            chart.check_var(v)?;
        }
        let mut seen = base.clone();
        seen.extend(&fiber);
        seen.sort();
        if seen.windows(2).any(|w| w[0] == w[1]) || seen.len() != chart.dim() {
            return Err(Error::BadChart(
                "base and fiber variables must partition the chart".into(),
            ));
        }
        let mut map = BTreeMap::new();
        for ((k, a, b), g) in symbols {
            if k >= base.len() || a >= fiber.len() || b >= fiber.len() {
                return Err(Error::Malformed(format!("symbol index ({k},{a},{b}) out of range")));
            }
            chart.check_poly(&g)?;
            if g.variables().iter().any(|v| fiber.contains(v)) {
                return Err(Error::Malformed("Christoffel symbols must not depend on fiber variables".into()));
            }
            if !g.is_zero() {
                *map.entry((k, a, b)).or_insert_with(Poly::zero) += g;
            }
        }
        map.retain(|_, g: &mut Poly| !g.is_zero());
        Ok(LinearConnection {
            chart: chart.clone(),
            base,
            fiber,
            symbols: map,
        })
    }

    /// Uses the base/fiber split of a vector-bundle grading component.
    pub fn on_vector_bundle(
        chart: &Chart,
        vb: usize,
        symbols: impl IntoIterator<Item = ((usize, usize, usize), Poly)>,
    ) -> Result<LinearConnection> {
        let (base, fiber) = chart.vb_split(vb)?;
        LinearConnection::new(chart, base, fiber, symbols)
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn base_vars(&self) -> &[Var] {
        &self.base
    }

    pub fn fiber_vars(&self) -> &[Var] {
        &self.fiber
    }

    pub fn symbol(&self, k: usize, a: usize, b: usize) -> Poly {
        self.symbols.get(&(k, a, b)).cloned().unwrap_or_default()
    }

    pub fn symbols(&self) -> &BTreeMap<(usize, usize, usize), Poly> {
        &self.symbols
    }

    pub fn horizontal_field(&self, k: usize) -> Result<TensorField> {
        let xk = *self.base.get(k).ok_or(Error::SlotOutOfRange {
            slot: k,
            order: self.base.len(),
        })?;
        let mut out = TensorField::zero(&self.chart, 1, 0, Symmetry::NONE);
        out.accumulate(vec![xk], Poly::one());
        for (&(kk, a, b), g) in &self.symbols {
            if kk == k {
                out.accumulate(vec![self.fiber[a]], -(g * &Poly::var(self.fiber[b])));
            }
        }
        Ok(out)
    }

    pub fn horizontal_fields(&self) -> Result<Vec<TensorField>> {
        (0..self.base.len()).map(|k| self.horizontal_field(k)).collect()
    }

    /// The lifted connection on `T^r E → T^r M`:
    /// `Γ^{(A,ρ)}_{(k,ν)(B,μ)} = (Γ^A_{kB})^{(ρ−ν−μ)}`, where ν, μ, ρ index
    /// the prolonged coordinates `x^k_ν`, `y^B_μ`, `y^A_ρ`. The lifted base
    /// and fiber lists are ordered block-major: position `ν·n + k`.
    pub fn lift(&self, ctx: &LiftContext) -> Result<LinearConnection> {
        if ctx.base() != &self.chart {
            return Err(Error::ChartMismatch);
        }
        let r = ctx.r();
        let (nb, nf) = (self.base.len(), self.fiber.len());
        let base: Vec<Var> = (0..=r)
            .flat_map(|nu| self.base.iter().map(move |&v| (nu, v)))
            .map(|(nu, v)| ctx.var(v, nu))
            .collect();
        let fiber: Vec<Var> = (0..=r)
            .flat_map(|nu| self.fiber.iter().map(move |&v| (nu, v)))
            .map(|(nu, v)| ctx.var(v, nu))
            .collect();
        let mut symbols = Vec::new();
        for (&(k, a, b), g) in &self.symbols {
            let jet = ctx.jet(g);
            for nu in 0..=r {
                for mu in 0..=r {
                    for rho in nu + mu..=r {
                        let s = &jet[rho - nu - mu];
                        if !s.is_zero() {
                            symbols.push(((nu * nb + k, rho * nf + a, mu * nf + b), s.clone()));
                        }
                    }
                }
            }
        }
        LinearConnection::new(ctx.prolonged(), base, fiber, symbols)
    }
}

/// An affine connection on the tangent bundle of a chart:
/// `∇_{∂_j}∂_l = Γ^i_{jl} ∂_i`.
#[derive(Clone, Debug)]
pub struct AffineConnection {
    chart: Chart,
    /// `(i, j, l) ↦ Γ^i_{jl}`.
    symbols: BTreeMap<(Var, Var, Var), Poly>,
}

impl AffineConnection {
    pub fn new(
        chart: &Chart,
        symbols: impl IntoIterator<Item = ((Var, Var, Var), Poly)>,
    ) -> Result<AffineConnection> {
        let mut map: BTreeMap<(Var, Var, Var), Poly> = BTreeMap::new();
        for ((i, j, l), g) in symbols {
            for v in [i, j, l] {
                chart.check_var(v)?;
            }
            chart.check_poly(&g)?;
            *map.entry((i, j, l)).or_default() += g;
        }
        map.retain(|_, g| !g.is_zero());
        Ok(AffineConnection {
            chart: chart.clone(),
            symbols: map,
        })
    }

    pub fn flat(chart: &Chart) -> AffineConnection {
        AffineConnection {
            chart: chart.clone(),
            symbols: BTreeMap::new(),
        }
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn symbol(&self, i: Var, j: Var, l: Var) -> Poly {
        self.symbols.get(&(i, j, l)).cloned().unwrap_or_default()
    }

    pub fn symbols(&self) -> &BTreeMap<(Var, Var, Var), Poly> {
        &self.symbols
    }

    /// `(∇_X Y)^k = X^j ∂_j Y^k + Γ^k_{jl} X^j Y^l`.
    pub fn covariant_derivative(&self, x: &TensorField, y: &TensorField) -> Result<TensorField> {
        if x.chart() != &self.chart || y.chart() != &self.chart {
            return Err(Error::ChartMismatch);
        }
        x.require_valence(1, 0)?;
        y.require_valence(1, 0)?;
        let mut out = TensorField::zero(&self.chart, 1, 0, Symmetry::NONE);
        for (ix, cx) in x.components() {
            for (iy, cy) in y.components() {
                out.accumulate(iy.clone(), cx * &cy.partial(ix[0]));
            }
        }
        for (&(k, j, l), g) in &self.symbols {
            let (xj, yl) = (x.component(&[j]), y.component(&[l]));
            if !xj.is_zero() && !yl.is_zero() {
                out.accumulate(vec![k], &(g * &xj) * &yl);
            }
        }
        Ok(out)
    }

    /// The Morimoto prolongation `∇^(r)` on `T^r M`, with symbols
    /// `Γ^{(i,ρ)}_{(j,α)(l,β)} = (Γ^i_{jl})^{(ρ−α−β)}`.
    pub fn lift(&self, ctx: &LiftContext) -> Result<AffineConnection> {
        if ctx.base() != &self.chart {
            return Err(Error::ChartMismatch);
        }
        let r = ctx.r();
        let mut symbols = Vec::new();
        for (&(i, j, l), g) in &self.symbols {
            let jet = ctx.jet(g);
            for a in 0..=r {
                for b in 0..=r - a {
                    for rho in a + b..=r {
                        let s = &jet[rho - a - b];
                        if !s.is_zero() {
                            symbols.push(((ctx.var(i, rho), ctx.var(j, a), ctx.var(l, b)), s.clone()));
                        }
                    }
                }
            }
        }
        AffineConnection::new(ctx.prolonged(), symbols)
    }

    /// The same connection viewed as a linear connection on `TM` with
    /// fiber coordinates the velocities of the tangent chart.
    pub fn as_linear(&self) -> Result<LinearConnection> {
        let t = self.chart.tangent()?;
        let n = self.chart.dim();
        let base: Vec<Var> = (0..n).map(Var::from).collect();
        let fiber: Vec<Var> = (n..2 * n).map(Var::from).collect();
        let symbols = self.symbols.iter().map(|(&(i, j, l), g)| {
            ((j.index(), i.index(), l.index()), g.clone())
        });
        LinearConnection::new(&t, base, fiber, symbols)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::lie_bracket;
    use crate::poly::int;

    fn plane() -> Chart {
        Chart::manifold(&["x", "y"]).unwrap()
    }

    fn named(c: &Chart, name: &str) -> Var {
        c.lookup(name).unwrap()
    }

    fn pv(c: &Chart, name: &str) -> Poly {
        Poly::var(named(c, name))
    }

    fn field(c: &Chart, terms: &[(&str, Poly)]) -> TensorField {
        TensorField::vector_field(c, terms.iter().map(|(n, p)| (named(c, n), p.clone()))).unwrap()
    }

    #[test]
    fn function_lifts() {
        let c = plane();
        let ctx = LiftContext::new(&c, 2).unwrap();
        let t = ctx.prolonged();
        let x = Poly::var(Var(0));
        let y = Poly::var(Var(1));
        assert_eq!(ctx.lift_function(&x, 1), pv(t, "x_1"));
        assert_eq!(ctx.lift_function(&y, 2), pv(t, "y_2"));
        assert!(ctx.lift_function(&x, -1).is_zero());
        assert!(ctx.lift_function(&x, 3).is_zero());
        let xy = &x * &y;
        assert_eq!(
            ctx.lift_function(&xy, 1),
            &pv(t, "x") * &pv(t, "y_1") + &pv(t, "x_1") * &pv(t, "y")
        );
        let x2 = x.pow(2);
        assert_eq!(
            ctx.lift_function(&x2, 2),
            (&pv(t, "x") * &pv(t, "x_2")).scale(&int(2)) + pv(t, "x_1").pow(2)
        );
        let k = Poly::int(7);
        assert_eq!(ctx.lift_function(&k, 0), k);
        assert!(ctx.lift_function(&k, 1).is_zero());
    }

    #[test]
    fn vector_field_lifts() {
        let c = plane();
        let x = Poly::var(Var(0));
        let xdy = field(&c, &[("y", x.clone())]);
        let ctx = LiftContext::new(&c, 1).unwrap();
        let t = ctx.prolonged();
        assert_eq!(
            ctx.lift_vector_field(&xdy, 1).unwrap(),
            field(t, &[("y", pv(t, "x")), ("y_1", pv(t, "x_1"))])
        );
        assert_eq!(
            ctx.lift_vector_field(&xdy, 0).unwrap(),
            field(t, &[("y_1", pv(t, "x"))])
        );
        let ctx = LiftContext::new(&c, 2).unwrap();
        let t = ctx.prolonged();
        assert_eq!(
            ctx.lift_vector_field(&xdy, 2).unwrap(),
            field(
                t,
                &[("y", pv(t, "x")), ("y_1", pv(t, "x_1")), ("y_2", pv(t, "x_2"))]
            )
        );
    }

    #[test]
    fn one_form_and_tensor_lifts() {
        let c = plane();
        let ctx = LiftContext::new(&c, 2).unwrap();
        let t = ctx.prolonged();
        let d = |n: &str| TensorField::differential(t, named(t, n)).unwrap();
        let dx = TensorField::differential(&c, Var(0)).unwrap();
        assert_eq!(ctx.lift_one_form(&dx, 1).unwrap(), d("x_1"));
        let xdy = TensorField::one_form(&c, [(Var(1), Poly::var(Var(0)))]).unwrap();
        let expected = d("y")
            .scale_poly(&pv(t, "x_2"))
            .add(&d("y_1").scale_poly(&pv(t, "x_1")))
            .unwrap()
            .add(&d("y_2").scale_poly(&pv(t, "x")))
            .unwrap();
        assert_eq!(ctx.lift_one_form(&xdy, 2).unwrap(), expected);

        let ctx = LiftContext::new(&c, 1).unwrap();
        let t = ctx.prolonged();
        let d = |n: &str| TensorField::differential(t, named(t, n)).unwrap();
        let del = |n: &str| TensorField::coordinate_field(t, named(t, n)).unwrap();
        let dy = TensorField::differential(&c, Var(1)).unwrap();
        let k = dx.tensor_product(&dy).unwrap();
        let expected = d("x_1")
            .tensor_product(&d("y"))
            .unwrap()
            .add(&d("x").tensor_product(&d("y_1")).unwrap())
            .unwrap();
        assert_eq!(ctx.lift_tensor(&k, 1).unwrap(), expected);

        let bi = TensorField::coordinate_field(&c, Var(0))
            .unwrap()
            .wedge(&TensorField::coordinate_field(&c, Var(1)).unwrap())
            .unwrap();
        let expected = del("x_1")
            .wedge(&del("y"))
            .unwrap()
            .add(&del("x").wedge(&del("y_1")).unwrap())
            .unwrap();
        assert_eq!(ctx.complete_lift(&bi).unwrap(), expected);
    }

    #[test]
    fn symmetric_lift_matches_untagged_lift() {
        let c = plane();
        let ctx = LiftContext::new(&c, 2).unwrap();
        let x = Poly::var(Var(0));
        let g = TensorField::from_components(
            &c,
            0,
            2,
            Symmetry::SYM_COV,
            [(vec![Var(0), Var(1)], x.clone()), (vec![Var(1), Var(1)], x.pow(2))],
        )
        .unwrap();
        let plain = g.with_symmetry(Symmetry::NONE).unwrap();
        for l in 0..=2 {
            assert_eq!(
                ctx.lift_tensor(&g, l).unwrap().full(),
                ctx.lift_tensor(&plain, l).unwrap().full()
            );
        }
    }

    #[test]
    fn r_zero_is_identity() {
        let c = plane();
        let ctx = LiftContext::new(&c, 0).unwrap();
        let x = field(&c, &[("y", Poly::var(Var(0)))]);
        assert_eq!(ctx.lift_tensor(&x, 0).unwrap(), x);
        assert!(ctx.lift_tensor(&x, 1).unwrap().is_zero());
    }

    #[test]
    fn weight_field_lift() {
        let c = Chart::simple(&[("x", 0), ("y", 1)]).unwrap();
        let ctx = LiftContext::new(&c, 1).unwrap();
        let t = ctx.prolonged();
        let expected = field(t, &[("y", pv(t, "y")), ("y_1", pv(t, "y_1"))]);
        assert_eq!(ctx.lift_weight_vector_field(0).unwrap(), expected);

        let c = Chart::simple(&[("x", 0), ("y", 1), ("z", 2)]).unwrap();
        let ctx = LiftContext::new(&c, 2).unwrap();
        let nabla = c.weight_vector_field(0).unwrap();
        let lw = ctx.lift_weight_vector_field(0).unwrap();
        assert_eq!(lw, ctx.complete_lift(&nabla).unwrap());
        let euler = ctx.prolongation_weight_field().unwrap();
        assert!(lie_bracket(&euler, &lw).unwrap().is_zero());

        let flat = Chart::manifold(&["a"]).unwrap();
        let ctx = LiftContext::new(&flat, 2).unwrap();
        assert!(ctx.lift_weight_vector_field(0).unwrap().is_zero());
    }

    #[test]
    fn covariant_derivative_examples() {
        let c = plane();
        let (x, y) = (Var(0), Var(1));
        let dx = TensorField::coordinate_field(&c, x).unwrap();
        let dy = TensorField::coordinate_field(&c, y).unwrap();
        let flat = AffineConnection::flat(&c);
        assert!(flat.covariant_derivative(&dx, &dy).unwrap().is_zero());
        let conn = AffineConnection::new(&c, [((y, x, x), Poly::one())]).unwrap();
        assert_eq!(conn.covariant_derivative(&dx, &dx).unwrap(), dy);
    }

    #[test]
    fn rank_one_connection_lift() {
        // line bundle over ℝ with Γ(x) = x
        let c = Chart::graded(vec!["x", "y"], vec![vec![0], vec![1]]).unwrap();
        let conn = LinearConnection::on_vector_bundle(&c, 0, [((0, 0, 0), Poly::var(Var(0)))]).unwrap();
        let ctx = LiftContext::new(&c, 1).unwrap();
        let lifted = conn.lift(&ctx).unwrap();
        let t = ctx.prolonged();
        // ν = μ = 0: ρ = 0 gives x, ρ = 1 gives x_1
        assert_eq!(lifted.symbol(0, 0, 0), pv(t, "x"));
        assert_eq!(lifted.symbol(0, 1, 0), pv(t, "x_1"));
        assert_eq!(lifted.symbol(1, 1, 0), pv(t, "x"));
        assert_eq!(lifted.symbol(0, 1, 1), pv(t, "x"));
        assert!(lifted.symbol(1, 0, 0).is_zero());
        assert!(lifted.symbol(1, 1, 1).is_zero());
        assert_eq!(lifted.symbols().len(), 4);
        // horizontal fields of the lift are the lifts of horizontal fields
        let h = conn.horizontal_field(0).unwrap();
        for nu in 0..=1usize {
            let lam = (1 - nu) as i64;
            assert_eq!(
                lifted.horizontal_field(nu).unwrap(),
                ctx.lift_vector_field(&h, lam).unwrap()
            );
        }
    }
}
