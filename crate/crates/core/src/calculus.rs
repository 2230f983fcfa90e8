//! Differential operators and brackets in coordinates.
//!
//! The Schouten, Frölicher–Nijenhuis and Nijenhuis–Richardson brackets are
//! evaluated on coordinate decomposables: each stored component becomes a
//! coefficient times wedges of coordinate fields or differentials, with the
//! coefficient carried by the first multivector factor or by the form part.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::poly::{int, Poly, Var};
use crate::tensor::{shuffle_merge, Index, Symmetry, TensorField};

/// Antisymmetric form components keyed by strictly increasing tuples.
type FormMap = BTreeMap<Index, Poly>;

fn add_into(map: &mut FormMap, key: Index, c: Poly) {
    if c.is_zero() {
        return;
    }
    match map.entry(key) {
        Entry::Vacant(e) => {
            e.insert(c);
        }
        Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

fn form_wedge(a: &FormMap, b: &FormMap) -> FormMap {
    let mut out = FormMap::new();
    for (ia, ca) in a {
        for (ib, cb) in b {
            if let Some((key, sign)) = shuffle_merge(ia, ib) {
                let c = ca * cb;
                add_into(&mut out, key, if sign < 0 { -c } else { c });
            }
        }
    }
    out
}

fn form_d(a: &FormMap, dim: usize) -> FormMap {
    let mut out = FormMap::new();
    for (idx, c) in a {
        for v in (0..dim).map(Var::from) {
            let dc = c.partial(v);
            if dc.is_zero() {
                continue;
            }
            if let Some((key, sign)) = shuffle_merge(&[v], idx) {
                add_into(&mut out, key, if sign < 0 { -dc } else { dc });
            }
        }
    }
    out
}

/// `i_{∂_v}` on a form.
fn form_insert_coordinate(a: &FormMap, v: Var) -> FormMap {
    let mut out = FormMap::new();
    for (idx, c) in a {
        if let Some(m) = idx.iter().position(|&w| w == v) {
            let mut key = idx.clone();
            key.remove(m);
            add_into(&mut out, key, if m % 2 == 1 { -c } else { c.clone() });
        }
    }
    out
}

/// `L_{∂_v}` on a form: differentiate the coefficients.
fn form_partial(a: &FormMap, v: Var) -> FormMap {
    let mut out = FormMap::new();
    for (idx, c) in a {
        add_into(&mut out, idx.clone(), c.partial(v));
    }
    out
}

fn form_scale(a: &FormMap, s: i64) -> FormMap {
    a.iter()
        .map(|(k, c)| (k.clone(), c.scale(&int(s))))
        .collect()
}

/// Splits a vector-valued k-form into `Σ_a μ_a ⊗ ∂_a`.
fn split_vector_valued(t: &TensorField) -> Result<BTreeMap<Var, FormMap>> {
    if t.q() != 1 {
        return Err(Error::Valence {
            expected: "(1,k) vector-valued form".into(),
            q: t.q(),
            p: t.p(),
        });
    }
    let t = t.with_symmetry(Symmetry::ANTISYM_COV)?;
    let mut out: BTreeMap<Var, FormMap> = BTreeMap::new();
    for (idx, c) in t.components() {
        out.entry(idx[0])
            .or_default()
            .insert(idx[1..].to_vec(), c.clone());
    }
    Ok(out)
}

fn assemble_vector_valued(
    chart: &crate::chart::Chart,
    degree: usize,
    parts: impl IntoIterator<Item = (Var, FormMap)>,
) -> TensorField {
    let mut out = TensorField::zero(chart, 1, degree, Symmetry::ANTISYM_COV);
    for (a, form) in parts {
        for (idx, c) in form {
            let mut key = Vec::with_capacity(idx.len() + 1);
            key.push(a);
            key.extend(idx);
            out.accumulate(key, c);
        }
    }
    out
}

/// `X(f)`.
pub fn apply_vector_field(x: &TensorField, f: &Poly) -> Result<Poly> {
    x.require_valence(1, 0)?;
    x.chart().check_poly(f)?;
    Ok(x
        .components()
        .map(|(idx, c)| c * &f.partial(idx[0]))
        .sum())
}

/// Exterior derivative of a function or antisymmetric covariant tensor.
pub fn exterior_derivative(w: &TensorField) -> Result<TensorField> {
    if w.q() != 0 {
        return Err(Error::Valence {
            expected: "(0,p) form".into(),
            q: w.q(),
            p: w.p(),
        });
    }
    let w = w.with_symmetry(Symmetry::ANTISYM_COV)?;
    let form: FormMap = w.components().map(|(k, c)| (k.clone(), c.clone())).collect();
    let d = form_d(&form, w.chart().dim());
    TensorField::from_components(w.chart(), 0, w.p() + 1, Symmetry::ANTISYM_COV, d)
}

/// Interior product `i_X ω` of a vector field into the first slot.
pub fn interior(x: &TensorField, w: &TensorField) -> Result<TensorField> {
    x.require_valence(1, 0)?;
    TensorField::insert_multivector(x, w)
}

pub fn lie_bracket(x: &TensorField, y: &TensorField) -> Result<TensorField> {
    if x.chart() != y.chart() {
        return Err(Error::ChartMismatch);
    }
    x.require_valence(1, 0)?;
    y.require_valence(1, 0)?;
    let mut out = TensorField::zero(x.chart(), 1, 0, Symmetry::NONE);
    for (ix, cx) in x.components() {
        for (iy, cy) in y.components() {
            out.accumulate(iy.clone(), cx * &cy.partial(ix[0]));
            out.accumulate(ix.clone(), -(cy * &cx.partial(iy[0])));
        }
    }
    Ok(out)
}

/// Coordinate Lie derivative of an arbitrary tensor field.
pub fn lie_derivative(x: &TensorField, k: &TensorField) -> Result<TensorField> {
    if x.chart() != k.chart() {
        return Err(Error::ChartMismatch);
    }
    x.require_valence(1, 0)?;
    let chart = k.chart();
    let (q, p) = k.valence();
    // ∂_j Xᵃ, indexed by j
    let mut jac: BTreeMap<Var, Vec<(Var, Poly)>> = BTreeMap::new();
    for (ia, ca) in x.components() {
        for j in chart.vars() {
            let d = ca.partial(j);
            if !d.is_zero() {
                jac.entry(j).or_default().push((ia[0], d));
            }
        }
    }
    let xs: Vec<(Var, &Poly)> = x.components().map(|(i, c)| (i[0], c)).collect();
    let mut out = TensorField::zero(chart, q, p, k.symmetry());
    let full = k.full();
    for (idx, c) in &full {
        if out.is_canonical_index(idx) {
            let transport: Poly = xs.iter().map(|(j, xj)| *xj * &c.partial(*j)).sum();
            out.accumulate(idx.clone(), transport);
        }
        for s in 0..q {
            // −K^{..j..} ∂_j X^a
            if let Some(col) = jac.get(&idx[s]) {
                for (a, d) in col {
                    let mut key = idx.clone();
                    key[s] = *a;
                    if out.is_canonical_index(&key) {
                        out.accumulate(key, -(c * d));
                    }
                }
            }
        }
        for t in q..q + p {
            // +K_{..j..} ∂_b X^j
            let j = idx[t];
            for (&b, col) in &jac {
                for (a, d) in col {
                    if *a != j {
                        continue;
                    }
                    let mut key = idx.clone();
                    key[t] = b;
                    if out.is_canonical_index(&key) {
                        out.accumulate(key, c * d);
                    }
                }
            }
        }
    }
    Ok(out)
}

fn as_multivector(t: &TensorField) -> Result<TensorField> {
    if t.p() != 0 {
        return Err(Error::Valence {
            expected: "(k,0) multivector".into(),
            q: t.q(),
            p: t.p(),
        });
    }
    t.with_symmetry(Symmetry::ANTISYM_CONTRA)
}

/// Schouten–Nijenhuis bracket of multivector fields.
pub fn schouten_bracket(a: &TensorField, b: &TensorField) -> Result<TensorField> {
    if a.chart() != b.chart() {
        return Err(Error::ChartMismatch);
    }
    let a = as_multivector(a)?;
    let b = as_multivector(b)?;
    let chart = a.chart();
    let (k, l) = (a.q(), b.q());
    match (k, l) {
        (0, 0) => return Ok(TensorField::zero(chart, 0, 0, Symmetry::NONE)),
        (_, 0) => {
            let f = b.as_scalar().unwrap_or_default();
            return bracket_with_function(&a, &f);
        }
        (0, _) => {
            let f = a.as_scalar().unwrap_or_default();
            let s = bracket_with_function(&b, &f)?;
            // [f,B] = −(−1)^{l−1}[B,f]
            return Ok(if l % 2 == 1 { s.neg() } else { s });
        }
        _ => {}
    }
    let mut out = TensorField::zero(chart, k + l - 1, 0, Symmetry::ANTISYM_CONTRA);
    for (ia, ca) in a.components() {
        for (ib, cb) in b.components() {
            // i = j = 1
            let mut rest: Vec<Var> = ia[1..].to_vec();
            rest.extend_from_slice(&ib[1..]);
            let mut key = vec![ib[0]];
            key.extend_from_slice(&rest);
            out.accumulate(key, ca * &cb.partial(ia[0]));
            let mut key = vec![ia[0]];
            key.extend_from_slice(&rest);
            out.accumulate(key, -(cb * &ca.partial(ib[0])));
            // i = 1, j ≥ 2: [a∂_{I₁}, ∂_{J_j}] = −(∂_{J_j} a) ∂_{I₁}
            for j in 1..l {
                let d = ca.partial(ib[j]);
                if d.is_zero() {
                    continue;
                }
                let mut key = ia.clone();
                key.extend(ib.iter().enumerate().filter(|&(m, _)| m != j).map(|(_, &v)| v));
                // (−1)^{i+j} with 1-based i = 1, j + 1
                let sign = if (j + 2) % 2 == 0 { -1 } else { 1 };
                let c = cb * &d;
                out.accumulate(key, if sign < 0 { -c } else { c });
            }
            // i ≥ 2, j = 1: [∂_{I_i}, b∂_{J₁}] = (∂_{I_i} b) ∂_{J₁}
            for i in 1..k {
                let d = cb.partial(ia[i]);
                if d.is_zero() {
                    continue;
                }
                let mut key = vec![ib[0]];
                key.extend(ia.iter().enumerate().filter(|&(m, _)| m != i).map(|(_, &v)| v));
                key.extend_from_slice(&ib[1..]);
                let sign = if (i + 2) % 2 == 0 { 1 } else { -1 };
                let c = ca * &d;
                out.accumulate(key, if sign < 0 { -c } else { c });
            }
        }
    }
    Ok(out)
}

/// `[A, f]_S = (−1)^{k−1} i_{df} A`.
fn bracket_with_function(a: &TensorField, f: &Poly) -> Result<TensorField> {
    let chart = a.chart();
    let df = TensorField::one_form(chart, chart.vars().map(|v| (v, f.partial(v))))?;
    let s = TensorField::insert_form(&df, a)?;
    Ok(if a.q().is_multiple_of(2) { s.neg() } else { s })
}

/// Frölicher–Nijenhuis bracket of vector-valued forms.
pub fn fn_bracket(a: &TensorField, b: &TensorField) -> Result<TensorField> {
    if a.chart() != b.chart() {
        return Err(Error::ChartMismatch);
    }
    let chart = a.chart();
    let dim = chart.dim();
    let (k, l) = (a.p(), b.p());
    let sa = split_vector_valued(a)?;
    let sb = split_vector_valued(b)?;
    let sign_k = if k % 2 == 0 { 1 } else { -1 };
    let mut parts: BTreeMap<Var, FormMap> = BTreeMap::new();
    let mut push = |v: Var, f: FormMap| {
        let e = parts.entry(v).or_default();
        for (key, c) in f {
            add_into(e, key, c);
        }
    };
    for (&xa, mu) in &sa {
        let dmu = form_d(mu, dim);
        for (&yb, nu) in &sb {
            // μ∧L_Xν ⊗ Y − L_Yμ∧ν ⊗ X
            push(yb, form_wedge(mu, &form_partial(nu, xa)));
            push(xa, form_scale(&form_wedge(&form_partial(mu, yb), nu), -1));
            // (−1)^k (dμ∧i_Xν ⊗ Y + i_Yμ∧dν ⊗ X)
            let t1 = form_wedge(&dmu, &form_insert_coordinate(nu, xa));
            push(yb, form_scale(&t1, sign_k));
            let t2 = form_wedge(&form_insert_coordinate(mu, yb), &form_d(nu, dim));
            push(xa, form_scale(&t2, sign_k));
        }
    }
    Ok(assemble_vector_valued(chart, k + l, parts))
}

/// Nijenhuis–Richardson bracket: `μ∧i_Xν⊗Y + (−1)^k i_Yμ∧ν⊗X`.
pub fn nr_bracket(a: &TensorField, b: &TensorField) -> Result<TensorField> {
    if a.chart() != b.chart() {
        return Err(Error::ChartMismatch);
    }
    let chart = a.chart();
    let (k, l) = (a.p(), b.p());
    if k + l == 0 {
        return Err(Error::Valence {
            expected: "total form degree at least 1".into(),
            q: b.q(),
            p: b.p(),
        });
    }
    let sa = split_vector_valued(a)?;
    let sb = split_vector_valued(b)?;
    let sign_k = if k % 2 == 0 { 1 } else { -1 };
    let mut parts: BTreeMap<Var, FormMap> = BTreeMap::new();
    for (&xa, mu) in &sa {
        for (&yb, nu) in &sb {
            let t1 = form_wedge(mu, &form_insert_coordinate(nu, xa));
            let t2 = form_scale(&form_wedge(&form_insert_coordinate(mu, yb), nu), sign_k);
            for (v, f) in [(yb, t1), (xa, t2)] {
                let e = parts.entry(v).or_default();
                for (key, c) in f {
                    add_into(e, key, c);
                }
            }
        }
    }
    Ok(assemble_vector_valued(chart, k + l - 1, parts))
}

/// `[N,N]_FN`; vanishes iff N is a Nijenhuis tensor.
pub fn nijenhuis_torsion(n: &TensorField) -> Result<TensorField> {
    n.require_valence(1, 1)?;
    fn_bracket(n, n)
}

/// The (2,1) concomitant of a bivector Λ and a (1,1)-tensor N:
///
/// `C^{ij}_s = Λ^{lj}∂_l Nⁱ_s + Λ^{il}∂_l Nʲ_s − Nˡ_s ∂_l Λ^{ij} + Nʲ_l ∂_s Λ^{il} − Λ^{lj}∂_s Nⁱ_l`.
pub fn concomitant(lambda: &TensorField, n: &TensorField) -> Result<TensorField> {
    if lambda.chart() != n.chart() {
        return Err(Error::ChartMismatch);
    }
    let lambda = as_multivector(lambda)?;
    lambda.require_valence(2, 0)?;
    n.require_valence(1, 1)?;
    let chart = lambda.chart();
    let vars: Vec<Var> = chart.vars().collect();
    let lam = |i: Var, j: Var| lambda.component(&[i, j]);
    let nn = |i: Var, j: Var| n.component(&[i, j]);
    let mut out = TensorField::zero(chart, 2, 1, Symmetry::NONE);
    for &i in &vars {
        for &j in &vars {
            let lij = lam(i, j);
            for &s in &vars {
                let mut c = Poly::zero();
                for &l in &vars {
                    let llj = lam(l, j);
                    let lil = lam(i, l);
                    if !llj.is_zero() {
                        c += &llj * &nn(i, s).partial(l);
                        c -= &(&llj * &nn(i, l).partial(s));
                    }
                    if !lil.is_zero() {
                        c += &lil * &nn(j, s).partial(l);
                    }
                    let nls = nn(l, s);
                    if !nls.is_zero() && !lij.is_zero() {
                        c -= &(&nls * &lij.partial(l));
                    }
                    let njl = nn(j, l);
                    if !njl.is_zero() && !lil.is_zero() {
                        c += &njl * &lil.partial(s);
                    }
                }
                out.accumulate(vec![i, j, s], c);
            }
        }
    }
    Ok(out)
}
