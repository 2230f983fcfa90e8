//! Graded coordinate charts.
//!
//! Every variable carries one integer weight per grading component, so
//! double graded bundles, GrL charts and higher tangent prolongations are
//! all the same mechanism: commuting coordinate-diagonal gradings.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{Monomial, Poly, Rational, Var};
use crate::tensor::TensorField;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GradingKind {
    /// All weights non-negative.
    N,
    Z,
}

/// Result of a homogeneity test. The zero object is homogeneous of every
/// degree and reports `Any`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase", tag = "kind", content = "value")]
pub enum Degree {
    Any,
    Exactly(i64),
    Inhomogeneous,
}

impl Degree {
    pub fn is(&self, w: i64) -> bool {
        matches!(self, Degree::Any) || *self == Degree::Exactly(w)
    }

    /// Combines the degrees of two summands.
    pub fn join(self, other: Degree) -> Degree {
        match (self, other) {
            (Degree::Any, d) | (d, Degree::Any) => d,
            (Degree::Exactly(a), Degree::Exactly(b)) if a == b => Degree::Exactly(a),
            _ => Degree::Inhomogeneous,
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::Any => write!(f, "any"),
            Degree::Exactly(w) => write!(f, "{w}"),
            Degree::Inhomogeneous => write!(f, "inhomogeneous"),
        }
    }
}

struct ChartData {
    names: Vec<String>,
    weights: Vec<Vec<i64>>,
    kinds: Vec<GradingKind>,
    lookup: HashMap<String, Var>,
    /// Number of nested prolongations; selects the name separator.
    depth: usize,
}

/// An ordered graded coordinate system.
///
/// Charts compare by identity: two structurally equal charts built
/// separately are different charts.
#[derive(Clone)]
pub struct Chart(Arc<ChartData>);

impl PartialEq for Chart {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

impl Eq for Chart {}

impl fmt::Debug for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for (n, w) in self.0.names.iter().zip(&self.0.weights) {
            m.entry(n, w);
        }
        m.finish()
    }
}

fn valid_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Chart {
    /// Builds a chart with explicit grading kinds.
    pub fn new(vars: Vec<(String, Vec<i64>)>, kinds: Vec<GradingKind>) -> Result<Chart> {
        if kinds.is_empty() {
            return Err(Error::BadChart("at least one grading component is required".into()));
        }
        let mut names = Vec::with_capacity(vars.len());
        let mut weights = Vec::with_capacity(vars.len());
        let mut lookup = HashMap::new();
        for (i, (name, w)) in vars.into_iter().enumerate() {
            if !valid_ident(&name) {
                return Err(Error::BadChart(format!("`{name}` is not a valid variable name")));
            }
            if w.len() != kinds.len() {
                return Err(Error::BadChart(format!(
                    "`{name}` has {} weights, expected {}",
                    w.len(),
                    kinds.len()
                )));
            }
            for (c, (&wc, kind)) in w.iter().zip(&kinds).enumerate() {
                if *kind == GradingKind::N && wc < 0 {
                    return Err(Error::NegativeWeight {
                        name,
                        weight: wc,
                        component: c,
                    });
                }
            }
            if lookup.insert(name.clone(), Var::from(i)).is_some() {
                return Err(Error::DuplicateName(name));
            }
            names.push(name);
            weights.push(w);
        }
        Ok(Chart(Arc::new(ChartData {
            names,
            weights,
            kinds,
            lookup,
            depth: 0,
        })))
    }

    /// Builds a chart, marking each component N-graded when all its weights
    /// are non-negative and Z-graded otherwise.
    pub fn graded<S: Into<String>>(names: Vec<S>, weights: Vec<Vec<i64>>) -> Result<Chart> {
        if names.len() != weights.len() {
            return Err(Error::BadChart(format!(
                "{} names but {} weight vectors",
                names.len(),
                weights.len()
            )));
        }
        let count = weights.first().map_or(1, Vec::len);
        let kinds = (0..count)
            .map(|c| {
                if weights.iter().all(|w| w.get(c).is_none_or(|&x| x >= 0)) {
                    GradingKind::N
                } else {
                    GradingKind::Z
                }
            })
            .collect();
        Chart::new(names.into_iter().map(Into::into).zip(weights).collect(), kinds)
    }

    /// Single-component chart from `(name, weight)` pairs.
    pub fn simple(vars: &[(&str, i64)]) -> Result<Chart> {
        Chart::graded(
            vars.iter().map(|(n, _)| n.to_string()).collect(),
            vars.iter().map(|&(_, w)| vec![w]).collect(),
        )
    }

    /// Ungraded chart (all weights zero).
    pub fn manifold(names: &[&str]) -> Result<Chart> {
        Chart::simple(&names.iter().map(|&n| (n, 0)).collect::<Vec<_>>())
    }

    pub fn dim(&self) -> usize {
        self.0.names.len()
    }

    pub fn grading_count(&self) -> usize {
        self.0.kinds.len()
    }

    pub fn kind(&self, component: usize) -> GradingKind {
        self.0.kinds[component]
    }

    pub fn kinds(&self) -> &[GradingKind] {
        &self.0.kinds
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> {
        (0..self.dim()).map(Var::from)
    }

    pub fn name(&self, v: Var) -> &str {
        &self.0.names[v.index()]
    }

    pub fn names(&self) -> &[String] {
        &self.0.names
    }

    pub fn lookup(&self, name: &str) -> Option<Var> {
        self.0.lookup.get(name).copied()
    }

    pub fn weights(&self, v: Var) -> &[i64] {
        &self.0.weights[v.index()]
    }

    pub fn weight(&self, v: Var, component: usize) -> i64 {
        self.0.weights[v.index()][component]
    }

    pub fn check_var(&self, v: Var) -> Result<()> {
        if v.index() < self.dim() {
            Ok(())
        } else {
            Err(Error::VariableOutOfRange {
                index: v.0,
                dim: self.dim(),
            })
        }
    }

    pub fn check_component(&self, component: usize) -> Result<()> {
        if component < self.grading_count() {
            Ok(())
        } else {
            Err(Error::NoSuchComponent {
                component,
                count: self.grading_count(),
            })
        }
    }

    /// Checks that every variable of `f` belongs to this chart.
    pub fn check_poly(&self, f: &Poly) -> Result<()> {
        match f.max_var() {
            Some(v) => self.check_var(v),
            None => Ok(()),
        }
    }

    /// Degree of a grading component: the largest absolute weight.
    pub fn degree(&self, component: usize) -> i64 {
        self.0
            .weights
            .iter()
            .map(|w| w[component].abs())
            .max()
            .unwrap_or(0)
    }

    pub fn weight_of_monomial(&self, m: &Monomial, component: usize) -> i64 {
        m.weight(|v| self.weight(v, component))
    }

    pub fn homogeneous_components(&self, f: &Poly, component: usize) -> BTreeMap<i64, Poly> {
        f.split_by_weight(|v| self.weight(v, component))
    }

    pub fn degree_of_function(&self, f: &Poly, component: usize) -> Degree {
        let mut weights = f
            .terms()
            .map(|(m, _)| self.weight_of_monomial(m, component));
        match weights.next() {
            None => Degree::Any,
            Some(w) if weights.all(|x| x == w) => Degree::Exactly(w),
            Some(_) => Degree::Inhomogeneous,
        }
    }

    /// `h_t^* f`: every monomial is multiplied by `t^weight`.
    pub fn apply_homogeneity(&self, f: &Poly, component: usize, t: &Rational) -> Poly {
        assert!(!t.is_zero(), "homogeneity parameter must be nonzero");
        Poly::from_terms(f.terms().map(|(m, c)| {
            let w = self.weight_of_monomial(m, component);
            let factor = if w >= 0 {
                num_traits::pow(t.clone(), w as usize)
            } else {
                num_traits::pow(Rational::one() / t, (-w) as usize)
            };
            (m.clone(), c * factor)
        }))
    }

    /// The weight vector field `Σ wᵢ xⁱ ∂_{xⁱ}` of one grading component.
    pub fn weight_vector_field(&self, component: usize) -> Result<TensorField> {
        self.check_component(component)?;
        TensorField::vector_field(
            self,
            self.vars().filter_map(|v| {
                let w = self.weight(v, component);
                (w != 0).then(|| (v, Poly::var(v).scale(&Rational::from_integer(w.into()))))
            }),
        )
    }

    /// Higher tangent prolongation `T^r`: variables `x_μ` for μ = 0..r,
    /// laid out block by block (index μ·n + i). Each keeps its weight vector
    /// and gains a last component equal to μ.
    pub fn prolong(&self, r: usize) -> Result<Chart> {
        if r == 0 {
            return Err(Error::BadChart("prolongation order must be at least 1".into()));
        }
        let mut vars = Vec::with_capacity(self.dim() * (r + 1));
        for mu in 0..=r {
            for v in self.vars() {
                let mut w = self.weights(v).to_vec();
                w.push(mu as i64);
                vars.push((self.prolonged_name(self.name(v), mu), w));
            }
        }
        let mut kinds = self.0.kinds.clone();
        kinds.push(GradingKind::N);
        let mut chart = Chart::new(vars, kinds)?;
        if let Some(data) = Arc::get_mut(&mut chart.0) {
            data.depth = self.0.depth + 1;
        }
        Ok(chart)
    }

    /// Name of the μ-th velocity of `base` in a prolongation of this chart.
    /// Nested prolongations lengthen the separator (`x_1`, then `x__1`).
    pub fn prolonged_name(&self, base: &str, mu: usize) -> String {
        if mu == 0 {
            base.to_string()
        } else {
            format!("{base}{}{mu}", "_".repeat(self.0.depth + 1))
        }
    }

    /// Cotangent bundle: momenta `p_x` with negated weights and weight 1 in
    /// a new vector-bundle component.
    pub fn cotangent(&self) -> Result<Chart> {
        let mut vars: Vec<(String, Vec<i64>)> = self
            .vars()
            .map(|v| {
                let mut w = self.weights(v).to_vec();
                w.push(0);
                (self.name(v).to_string(), w)
            })
            .collect();
        for v in self.vars() {
            let mut w: Vec<i64> = self.weights(v).iter().map(|x| -x).collect();
            w.push(1);
            vars.push((format!("p_{}", self.name(v)), w));
        }
        let mut kinds: Vec<GradingKind> = (0..self.grading_count())
            .map(|c| {
                if vars.iter().all(|(_, w)| w[c] >= 0) {
                    GradingKind::N
                } else {
                    GradingKind::Z
                }
            })
            .collect();
        kinds.push(GradingKind::N);
        Chart::new(vars, kinds)
    }

    /// Phase-shifted cotangent bundle `T*[k]`: in the chosen component the
    /// momentum of xʲ has weight k − wⱼ.
    pub fn phase_shifted_cotangent(&self, k: i64, component: usize) -> Result<Chart> {
        self.check_component(component)?;
        for v in self.vars() {
            if self.weight(v, component) > k {
                return Err(Error::ShiftTooSmall {
                    k,
                    weight: self.weight(v, component),
                    name: self.name(v).to_string(),
                });
            }
        }
        let mut vars: Vec<(String, Vec<i64>)> = self
            .vars()
            .map(|v| {
                let mut w = self.weights(v).to_vec();
                w.push(0);
                (self.name(v).to_string(), w)
            })
            .collect();
        for v in self.vars() {
            let mut w: Vec<i64> = self
                .weights(v)
                .iter()
                .enumerate()
                .map(|(c, &x)| if c == component { k - x } else { -x })
                .collect();
            w.push(1);
            vars.push((format!("p_{}", self.name(v)), w));
        }
        Chart::graded(
            vars.iter().map(|(n, _)| n.clone()).collect(),
            vars.into_iter().map(|(_, w)| w).collect(),
        )
    }

    /// Tangent bundle: velocities `xdot` with the weights of x and weight 1
    /// in a new vector-bundle component.
    pub fn tangent(&self) -> Result<Chart> {
        let mut vars: Vec<(String, Vec<i64>)> = self
            .vars()
            .map(|v| {
                let mut w = self.weights(v).to_vec();
                w.push(0);
                (self.name(v).to_string(), w)
            })
            .collect();
        for v in self.vars() {
            let mut w = self.weights(v).to_vec();
            w.push(1);
            vars.push((format!("{}dot", self.name(v)), w));
        }
        let mut kinds = self.0.kinds.clone();
        kinds.push(GradingKind::N);
        Chart::new(vars, kinds)
    }

    /// Shifted dual of a GrL chart. Fiber variables (weight 1 in `vb`) of
    /// graded weight s are replaced by momenta of graded weight k − s; base
    /// variables (weight 0 in `vb`) are kept. Weights in any other
    /// component are negated on the fiber.
    pub fn shifted_dual_grl(&self, graded: usize, vb: usize, k: i64) -> Result<Chart> {
        self.check_component(graded)?;
        self.check_component(vb)?;
        if graded == vb || self.vars().any(|v| !matches!(self.weight(v, vb), 0 | 1)) {
            return Err(Error::BadChart(format!(
                "component {vb} is not a vector-bundle component"
            )));
        }
        let mut vars = Vec::with_capacity(self.dim());
        for v in self.vars() {
            let w = self.weights(v);
            if w[vb] == 0 {
                vars.push((self.name(v).to_string(), w.to_vec()));
                continue;
            }
            if w[graded] > k {
                return Err(Error::ShiftTooSmall {
                    k,
                    weight: w[graded],
                    name: self.name(v).to_string(),
                });
            }
            let dual = w
                .iter()
                .enumerate()
                .map(|(c, &x)| match c {
                    c if c == graded => k - x,
                    c if c == vb => 1,
                    _ => -x,
                })
                .collect();
            vars.push((format!("p_{}", self.name(v)), dual));
        }
        Chart::graded(
            vars.iter().map(|(n, _)| n.clone()).collect(),
            vars.into_iter().map(|(_, w)| w).collect(),
        )
    }

    /// Variables of weight 1 (fiber) and 0 (base) in a vector-bundle component.
    pub fn vb_split(&self, vb: usize) -> Result<(Vec<Var>, Vec<Var>)> {
        self.check_component(vb)?;
        let mut base = Vec::new();
        let mut fiber = Vec::new();
        for v in self.vars() {
            match self.weight(v, vb) {
                0 => base.push(v),
                1 => fiber.push(v),
                _ => {
                    return Err(Error::BadChart(format!(
                        "component {vb} is not a vector-bundle component"
                    )))
                }
            }
        }
        Ok((base, fiber))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::int;

    fn xyz() -> Chart {
        Chart::simple(&[("x", 0), ("y", 1), ("z", 2)]).unwrap()
    }

    #[test]
    fn make_chart_degrees_and_errors() {
        assert_eq!(xyz().degree(0), 2);
        assert_eq!(Chart::simple(&[("x", 0)]).unwrap().degree(0), 0);
        assert!(matches!(
            Chart::simple(&[("x", 0), ("x", 1)]),
            Err(Error::DuplicateName(_))
        ));
        assert!(matches!(
            Chart::new(vec![("x".into(), vec![-1])], vec![GradingKind::N]),
            Err(Error::NegativeWeight { .. })
        ));
    }

    #[test]
    fn charts_compare_by_identity() {
        let a = xyz();
        let b = xyz();
        assert_eq!(a, a.clone());
        assert_ne!(a, b);
    }

    #[test]
    fn monomial_weights() {
        let c = xyz();
        let yz = Monomial::from_exponents([(Var(1), 1), (Var(2), 1)]);
        assert_eq!(c.weight_of_monomial(&yz, 0), 3);
        assert_eq!(c.weight_of_monomial(&Monomial::one(), 0), 0);
        assert_eq!(c.weight_of_monomial(&Monomial::from_exponents([(Var(1), 2)]), 0), 2);
    }

    #[test]
    fn homogeneous_split() {
        let c = Chart::simple(&[("x", 0), ("y", 1)]).unwrap();
        let (x, y) = (Poly::var(Var(0)), Poly::var(Var(1)));
        let parts = c.homogeneous_components(&(&x + &y), 0);
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[&0], x);
        assert_eq!(parts[&1], y);
        assert!(c.homogeneous_components(&Poly::zero(), 0).is_empty());

        let c = xyz();
        let (x, y, z) = (Poly::var(Var(0)), Poly::var(Var(1)), Poly::var(Var(2)));
        let f = &(&y.pow(2) + &z) + &(&x * &z);
        let parts = c.homogeneous_components(&f, 0);
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[&2], f);
    }

    #[test]
    fn degree_of_functions() {
        let c = xyz();
        let (x, y, z) = (Poly::var(Var(0)), Poly::var(Var(1)), Poly::var(Var(2)));
        assert_eq!(c.degree_of_function(&y.pow(2), 0), Degree::Exactly(2));
        assert_eq!(c.degree_of_function(&(&x + &y), 0), Degree::Inhomogeneous);
        assert_eq!(c.degree_of_function(&(&z + &y.pow(2)), 0), Degree::Exactly(2));
        assert_eq!(c.degree_of_function(&Poly::zero(), 0), Degree::Any);
    }

    #[test]
    fn homogeneity_action_scales_by_weight() {
        let c = xyz();
        let f = &Poly::var(Var(1)) * &Poly::var(Var(2));
        assert_eq!(c.apply_homogeneity(&f, 0, &int(2)), f.scale(&int(8)));
    }

    #[test]
    fn prolongation_weights() {
        let c = Chart::simple(&[("x", 0)]).unwrap();
        let t2 = c.prolong(2).unwrap();
        assert_eq!(t2.names(), &["x", "x_1", "x_2"]);
        assert_eq!(t2.weights(Var(1)), &[0, 1]);
        assert_eq!(t2.weights(Var(2)), &[0, 2]);

        let c = Chart::simple(&[("x", 0), ("y", 1)]).unwrap();
        let t1 = c.prolong(1).unwrap();
        assert_eq!(t1.weights(t1.lookup("y").unwrap()), &[1, 0]);
        assert_eq!(t1.weights(t1.lookup("y_1").unwrap()), &[1, 1]);
        let tt = t1.prolong(1).unwrap();
        assert_eq!(tt.grading_count(), 3);
        assert_eq!(tt.weights(tt.lookup("y_1__1").unwrap()), &[1, 1, 1]);

        // collision with an existing name
        let bad = Chart::simple(&[("x", 0), ("x_1", 0)]).unwrap();
        assert!(matches!(bad.prolong(1), Err(Error::DuplicateName(_))));
    }

    #[test]
    fn cotangent_weights() {
        let c = Chart::simple(&[("x", 0), ("y", 1)]).unwrap();
        let t = c.cotangent().unwrap();
        assert_eq!(t.weights(t.lookup("p_x").unwrap()), &[0, 1]);
        assert_eq!(t.weights(t.lookup("p_y").unwrap()), &[-1, 1]);
        assert_eq!(t.weights(t.lookup("y").unwrap()), &[1, 0]);
        assert_eq!(t.kind(0), GradingKind::Z);
        // pairing of x^i with p_i has degree 0
        for v in c.vars() {
            let p = t.lookup(&format!("p_{}", c.name(v))).unwrap();
            assert_eq!(c.weight(v, 0) + t.weight(p, 0), 0);
        }
    }

    #[test]
    fn phase_shifted_cotangent_weights() {
        let c = xyz();
        let t = c.phase_shifted_cotangent(2, 0).unwrap();
        let w = |n: &str| t.weight(t.lookup(n).unwrap(), 0);
        assert_eq!((w("p_x"), w("p_y"), w("p_z")), (2, 1, 0));
        assert_eq!(t.kind(0), GradingKind::N);
        let m = Chart::simple(&[("x", 0)]).unwrap();
        let t0 = m.phase_shifted_cotangent(0, 0).unwrap();
        assert_eq!(t0.weight(t0.lookup("p_x").unwrap(), 0), 0);
        let xy = Chart::simple(&[("x", 0), ("y", 1)]).unwrap();
        assert!(matches!(
            xy.phase_shifted_cotangent(0, 0),
            Err(Error::ShiftTooSmall { .. })
        ));
    }

    #[test]
    fn tangent_weights_and_weight_field() {
        let c = Chart::simple(&[("x", 0), ("y", 1)]).unwrap();
        let t = c.tangent().unwrap();
        assert_eq!(t.weights(t.lookup("xdot").unwrap()), &[0, 1]);
        assert_eq!(t.weights(t.lookup("ydot").unwrap()), &[1, 1]);
        let nabla = t.weight_vector_field(0).unwrap();
        let y = t.lookup("y").unwrap();
        let ydot = t.lookup("ydot").unwrap();
        let expected =
            TensorField::vector_field(&t, [(y, Poly::var(y)), (ydot, Poly::var(ydot))]).unwrap();
        assert_eq!(nabla, expected);
    }

    #[test]
    fn weight_vector_fields() {
        let c = xyz();
        let nabla = c.weight_vector_field(0).unwrap();
        let expected = TensorField::vector_field(
            &c,
            [
                (Var(1), Poly::var(Var(1))),
                (Var(2), Poly::var(Var(2)).scale(&int(2))),
            ],
        )
        .unwrap();
        assert_eq!(nabla, expected);
        let m = Chart::simple(&[("x", 0)]).unwrap();
        assert!(m.weight_vector_field(0).unwrap().is_zero());
        let t1 = m.prolong(1).unwrap();
        let n1 = t1.weight_vector_field(1).unwrap();
        assert_eq!(
            n1,
            TensorField::vector_field(&t1, [(Var(1), Poly::var(Var(1)))]).unwrap()
        );
    }

    fn zgc_chart() -> Chart {
        // components: (graded, vb). base x (0,0), y (1,0); fiber z (0,1), u (1,1)
        Chart::graded(
            vec!["x", "y", "z", "u"],
            vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]],
        )
        .unwrap()
    }

    #[test]
    fn shifted_dual_weights_and_involution() {
        let c = zgc_chart();
        let d = c.shifted_dual_grl(0, 1, 2).unwrap();
        assert_eq!(d.weights(d.lookup("p_u").unwrap()), &[1, 1]);
        assert_eq!(d.weights(d.lookup("p_z").unwrap()), &[2, 1]);
        assert_eq!(d.weights(d.lookup("y").unwrap()), &[1, 0]);
        let dd = d.shifted_dual_grl(0, 1, 2).unwrap();
        for v in c.vars() {
            assert_eq!(c.weights(v), dd.weights(v));
        }
        let plain = Chart::simple(&[("x", 0), ("y", 2)]).unwrap();
        assert!(plain.shifted_dual_grl(0, 1, 2).is_err());
    }
}
