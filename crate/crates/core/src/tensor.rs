//! (q,p)-tensor fields with polynomial components.
//!
//! Components are keyed by a single index vector: the q contravariant
//! indices followed by the p covariant ones. A block tagged symmetric or
//! antisymmetric stores only its canonical (sorted) index tuples; the
//! stored value is the value of the full tensor at that tuple.
//!
//! Wedge products are unnormalized, `dx^dy = dx⊗dy − dy⊗dx`, so a stored
//! antisymmetric component `c` at `(i₁<…<i_k)` is exactly the tensor
//! `c dx^{i₁}∧…∧dx^{i_k}`.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_traits::Signed;
use serde::Serialize;

use crate::chart::{Chart, Degree};
use crate::error::{Error, Result};
use crate::poly::{int, Poly, Rational, Var};

pub type Index = Vec<Var>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BlockSymmetry {
    None,
    Sym,
    Antisym,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Symmetry {
    pub contra: BlockSymmetry,
    pub cov: BlockSymmetry,
}

impl Symmetry {
    pub const NONE: Symmetry = Symmetry {
        contra: BlockSymmetry::None,
        cov: BlockSymmetry::None,
    };
    pub const ANTISYM_CONTRA: Symmetry = Symmetry {
        contra: BlockSymmetry::Antisym,
        cov: BlockSymmetry::None,
    };
    pub const ANTISYM_COV: Symmetry = Symmetry {
        contra: BlockSymmetry::None,
        cov: BlockSymmetry::Antisym,
    };
    pub const SYM_COV: Symmetry = Symmetry {
        contra: BlockSymmetry::None,
        cov: BlockSymmetry::Sym,
    };
    pub const SYM_CONTRA: Symmetry = Symmetry {
        contra: BlockSymmetry::Sym,
        cov: BlockSymmetry::None,
    };

    /// Drops tags on blocks with fewer than two slots.
    fn normalized(self, q: usize, p: usize) -> Symmetry {
        Symmetry {
            contra: if q < 2 { BlockSymmetry::None } else { self.contra },
            cov: if p < 2 { BlockSymmetry::None } else { self.cov },
        }
    }
}

/// Sorts a block in place. Returns the permutation sign, or `None` when an
/// antisymmetric block has a repeated index.
fn canonicalize_block(block: &mut [Var], sym: BlockSymmetry) -> Option<i32> {
    match sym {
        BlockSymmetry::None => Some(1),
        BlockSymmetry::Sym => {
            block.sort();
            Some(1)
        }
        BlockSymmetry::Antisym => {
            let mut sign = 1;
            // insertion sort counting swaps
            for i in 1..block.len() {
                let mut j = i;
                while j > 0 && block[j - 1] > block[j] {
                    block.swap(j - 1, j);
                    sign = -sign;
                    j -= 1;
                }
            }
            if block.windows(2).any(|w| w[0] == w[1]) {
                None
            } else {
                Some(sign)
            }
        }
    }
}

fn block_is_canonical(block: &[Var], sym: BlockSymmetry) -> bool {
    match sym {
        BlockSymmetry::None => true,
        BlockSymmetry::Sym => block.windows(2).all(|w| w[0] <= w[1]),
        BlockSymmetry::Antisym => block.windows(2).all(|w| w[0] < w[1]),
    }
}

/// All distinct permutations of `block` with their signs under `sym`.
fn block_permutations(block: &[Var], sym: BlockSymmetry) -> Vec<(Vec<Var>, i32)> {
    if sym == BlockSymmetry::None || block.len() < 2 {
        return vec![(block.to_vec(), 1)];
    }
    let mut out = Vec::new();
    let mut items = block.to_vec();
    items.sort();
    permute(&mut items, 0, &mut out);
    out.sort();
    out.dedup();
    out.into_iter()
        .map(|perm| {
            let mut sorted = perm.clone();
            let sign = canonicalize_block(&mut sorted, sym).unwrap_or(1);
            (perm, sign)
        })
        .collect()
}

fn permute(items: &mut Vec<Var>, k: usize, out: &mut Vec<Vec<Var>>) {
    if k == items.len() {
        out.push(items.clone());
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, out);
        items.swap(k, i);
    }
}

/// Sorted union of two strictly increasing tuples with the sign of the
/// shuffle, or `None` if they share an index.
pub(crate) fn shuffle_merge(a: &[Var], b: &[Var]) -> Option<(Vec<Var>, i32)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let mut inversions = 0usize;
    while i < a.len() && j < b.len() {
        if a[i] == b[j] {
            return None;
        }
        if a[i] < b[j] {
            out.push(a[i]);
            i += 1;
        } else {
            // b[j] jumps over the remaining a's
            inversions += a.len() - i;
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    Some((out, if inversions.is_multiple_of(2) { 1 } else { -1 }))
}

#[derive(Clone, Debug)]
pub struct TensorField {
    chart: Chart,
    q: usize,
    p: usize,
    sym: Symmetry,
    comps: BTreeMap<Index, Poly>,
}

impl PartialEq for TensorField {
    fn eq(&self, other: &Self) -> bool {
        if self.chart != other.chart || self.q != other.q || self.p != other.p {
            return false;
        }
        if self.sym == other.sym {
            self.comps == other.comps
        } else {
            self.full() == other.full()
        }
    }
}

impl TensorField {
    pub fn zero(chart: &Chart, q: usize, p: usize, sym: Symmetry) -> TensorField {
        TensorField {
            chart: chart.clone(),
            q,
            p,
            sym: sym.normalized(q, p),
            comps: BTreeMap::new(),
        }
    }

    /// Builds a tensor by adding each `(index, value)` to the component at
    /// `index` (and, through the symmetry, at all its permutations).
    pub fn from_components<I>(chart: &Chart, q: usize, p: usize, sym: Symmetry, it: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Index, Poly)>,
    {
        let mut t = TensorField::zero(chart, q, p, sym);
        for (idx, c) in it {
            if idx.len() != q + p {
                return Err(Error::Malformed(format!(
                    "index of length {} for a ({q},{p}) tensor",
                    idx.len()
                )));
            }
            for &v in &idx {
                chart.check_var(v)?;
            }
            chart.check_poly(&c)?;
            t.accumulate(idx, c);
        }
        Ok(t)
    }

    /// Builds from a full component table, keeping only canonical entries.
    /// The caller guarantees the table has the stated symmetry.
    pub(crate) fn from_full(
        chart: &Chart,
        q: usize,
        p: usize,
        sym: Symmetry,
        full: BTreeMap<Index, Poly>,
    ) -> TensorField {
        let sym = sym.normalized(q, p);
        let comps = full
            .into_iter()
            .filter(|(idx, c)| {
                !c.is_zero()
                    && block_is_canonical(&idx[..q], sym.contra)
                    && block_is_canonical(&idx[q..], sym.cov)
            })
            .collect();
        TensorField {
            chart: chart.clone(),
            q,
            p,
            sym,
            comps,
        }
    }

    pub(crate) fn accumulate(&mut self, mut idx: Index, c: Poly) {
        if c.is_zero() {
            return;
        }
        let q = self.q;
        let Some(s1) = canonicalize_block(&mut idx[..q], self.sym.contra) else {
            return;
        };
        let Some(s2) = canonicalize_block(&mut idx[q..], self.sym.cov) else {
            return;
        };
        let c = if s1 * s2 < 0 { -c } else { c };
        match self.comps.entry(idx) {
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

    pub(crate) fn is_canonical_index(&self, idx: &[Var]) -> bool {
        block_is_canonical(&idx[..self.q], self.sym.contra)
            && block_is_canonical(&idx[self.q..], self.sym.cov)
    }

    pub fn scalar(chart: &Chart, f: Poly) -> Result<TensorField> {
        TensorField::from_components(chart, 0, 0, Symmetry::NONE, [(vec![], f)])
    }

    pub fn vector_field<I: IntoIterator<Item = (Var, Poly)>>(chart: &Chart, it: I) -> Result<Self> {
        TensorField::from_components(chart, 1, 0, Symmetry::NONE, it.into_iter().map(|(v, c)| (vec![v], c)))
    }

    pub fn one_form<I: IntoIterator<Item = (Var, Poly)>>(chart: &Chart, it: I) -> Result<Self> {
        TensorField::from_components(chart, 0, 1, Symmetry::NONE, it.into_iter().map(|(v, c)| (vec![v], c)))
    }

    /// `∂_v`.
    pub fn coordinate_field(chart: &Chart, v: Var) -> Result<TensorField> {
        TensorField::vector_field(chart, [(v, Poly::one())])
    }

    /// `dv`.
    pub fn differential(chart: &Chart, v: Var) -> Result<TensorField> {
        TensorField::one_form(chart, [(v, Poly::one())])
    }

    /// Identity (1,1)-tensor `Σ ∂_i ⊗ dxⁱ`.
    pub fn identity_11(chart: &Chart) -> TensorField {
        let mut t = TensorField::zero(chart, 1, 1, Symmetry::NONE);
        for v in chart.vars() {
            t.accumulate(vec![v, v], Poly::one());
        }
        t
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn valence(&self) -> (usize, usize) {
        (self.q, self.p)
    }

    pub fn symmetry(&self) -> Symmetry {
        self.sym
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn len(&self) -> usize {
        self.comps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.comps.is_empty()
    }

    /// Stored (canonical) components.
    pub fn components(&self) -> impl Iterator<Item = (&Index, &Poly)> {
        self.comps.iter()
    }

    /// Value of the full tensor at any index.
    pub fn component(&self, idx: &[Var]) -> Poly {
        let mut key = idx.to_vec();
        let q = self.q;
        let Some(s1) = canonicalize_block(&mut key[..q], self.sym.contra) else {
            return Poly::zero();
        };
        let Some(s2) = canonicalize_block(&mut key[q..], self.sym.cov) else {
            return Poly::zero();
        };
        match self.comps.get(&key) {
            Some(c) if s1 * s2 < 0 => -c,
            Some(c) => c.clone(),
            None => Poly::zero(),
        }
    }

    /// Scalar value of a (0,0) tensor.
    pub fn as_scalar(&self) -> Option<Poly> {
        (self.q == 0 && self.p == 0).then(|| self.component(&[]))
    }

    /// Every nonzero component of the full tensor.
    pub fn full(&self) -> BTreeMap<Index, Poly> {
        if self.sym == Symmetry::NONE {
            return self.comps.clone();
        }
        let mut out = BTreeMap::new();
        for (idx, c) in &self.comps {
            for (a, sa) in block_permutations(&idx[..self.q], self.sym.contra) {
                for (b, sb) in block_permutations(&idx[self.q..], self.sym.cov) {
                    let mut key = a.clone();
                    key.extend_from_slice(&b);
                    out.insert(key, if sa * sb < 0 { -c } else { c.clone() });
                }
            }
        }
        out
    }

    /// Re-tags the symmetry, checking that the full tensor actually has it.
    pub fn with_symmetry(&self, sym: Symmetry) -> Result<TensorField> {
        let sym = sym.normalized(self.q, self.p);
        if sym == self.sym {
            return Ok(self.clone());
        }
        let full = self.full();
        let out = TensorField::from_full(&self.chart, self.q, self.p, sym, full.clone());
        if out.full() != full {
            let block = if sym.contra != self.sym.contra { "contravariant" } else { "covariant" };
            let antisym = sym.contra == BlockSymmetry::Antisym && self.sym.contra != BlockSymmetry::Antisym
                || sym.cov == BlockSymmetry::Antisym && self.sym.cov != BlockSymmetry::Antisym;
            return Err(if antisym {
                Error::NotAntisymmetric(block)
            } else {
                Error::NotSymmetric(block)
            });
        }
        Ok(out)
    }

    pub(crate) fn same_shape(&self, other: &TensorField) -> Result<()> {
        if self.chart != other.chart {
            return Err(Error::ChartMismatch);
        }
        if self.valence() != other.valence() {
            return Err(Error::Valence {
                expected: format!("({},{})", self.q, self.p),
                q: other.q,
                p: other.p,
            });
        }
        Ok(())
    }

    fn combine(&self, other: &TensorField, sign: i64) -> Result<TensorField> {
        self.same_shape(other)?;
        let (a, b) = if self.sym == other.sym {
            (self.clone(), other.clone())
        } else {
            (self.with_symmetry(Symmetry::NONE)?, other.with_symmetry(Symmetry::NONE)?)
        };
        let mut out = a;
        for (idx, c) in b.comps {
            let c = if sign < 0 { -c } else { c };
            let e = out.comps.entry(idx.clone()).or_default();
            *e += c;
            if e.is_zero() {
                out.comps.remove(&idx);
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &TensorField) -> Result<TensorField> {
        self.combine(other, 1)
    }

    pub fn sub(&self, other: &TensorField) -> Result<TensorField> {
        self.combine(other, -1)
    }

    pub fn neg(&self) -> TensorField {
        self.scale(&int(-1))
    }

    pub fn scale(&self, c: &Rational) -> TensorField {
        self.map_components(|p| p.scale(c))
    }

    /// Multiplies every component by a function.
    pub fn scale_poly(&self, f: &Poly) -> TensorField {
        self.map_components(|p| p * f)
    }

    pub fn map_components(&self, f: impl Fn(&Poly) -> Poly) -> TensorField {
        TensorField {
            chart: self.chart.clone(),
            q: self.q,
            p: self.p,
            sym: self.sym,
            comps: self
                .comps
                .iter()
                .map(|(k, c)| (k.clone(), f(c)))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        }
    }

    /// Moves the tensor to another chart through a variable map (used to
    /// embed base objects into derived charts).
    pub fn transport(&self, target: &Chart, var_map: impl Fn(Var) -> Var) -> Result<TensorField> {
        let mut out = TensorField::zero(target, self.q, self.p, self.sym);
        for (idx, c) in &self.comps {
            let key: Index = idx.iter().map(|&v| var_map(v)).collect();
            let c = c.map_vars(&var_map);
            for &v in &key {
                target.check_var(v)?;
            }
            target.check_poly(&c)?;
            out.accumulate(key, c);
        }
        Ok(out)
    }

    /// `A ⊗ B`, untagged.
    pub fn tensor_product(&self, other: &TensorField) -> Result<TensorField> {
        if self.chart != other.chart {
            return Err(Error::ChartMismatch);
        }
        let (qa, qb) = (self.q, other.q);
        let fa = self.full();
        let fb = other.full();
        let mut full = BTreeMap::new();
        for (ia, ca) in &fa {
            for (ib, cb) in &fb {
                let mut key = Vec::with_capacity(ia.len() + ib.len());
                key.extend_from_slice(&ia[..qa]);
                key.extend_from_slice(&ib[..qb]);
                key.extend_from_slice(&ia[qa..]);
                key.extend_from_slice(&ib[qb..]);
                full.insert(key, ca * cb);
            }
        }
        Ok(TensorField::from_full(
            &self.chart,
            qa + qb,
            self.p + other.p,
            Symmetry::NONE,
            full,
        ))
    }

    /// Antisymmetric view of a pure (k,0) or (0,k) tensor.
    pub(crate) fn as_antisym_pure(&self) -> Result<(bool, TensorField)> {
        match (self.q, self.p) {
            (0, 0) => Ok((false, self.clone())),
            (_, 0) => Ok((true, self.with_symmetry(Symmetry::ANTISYM_CONTRA)?)),
            (0, _) => Ok((false, self.with_symmetry(Symmetry::ANTISYM_COV)?)),
            (q, p) => Err(Error::Valence {
                expected: "(k,0) or (0,k)".into(),
                q,
                p,
            }),
        }
    }

    /// Unnormalized wedge of two multivectors or two forms.
    pub fn wedge(&self, other: &TensorField) -> Result<TensorField> {
        if self.chart != other.chart {
            return Err(Error::ChartMismatch);
        }
        let (ca, a) = self.as_antisym_pure()?;
        let (cb, b) = other.as_antisym_pure()?;
        let contra = match (a.q + a.p, b.q + b.p) {
            (0, 0) => false,
            (0, _) => cb,
            (_, 0) => ca,
            _ if ca == cb => ca,
            _ => {
                return Err(Error::Valence {
                    expected: "matching pure valence".into(),
                    q: other.q,
                    p: other.p,
                })
            }
        };
        let k = a.q + a.p + b.q + b.p;
        let (q, p, sym) = if contra {
            (k, 0, Symmetry::ANTISYM_CONTRA)
        } else {
            (0, k, Symmetry::ANTISYM_COV)
        };
        let mut out = TensorField::zero(&self.chart, q, p, sym);
        for (ia, xa) in &a.comps {
            for (ib, xb) in &b.comps {
                if let Some((key, sign)) = shuffle_merge(ia, ib) {
                    let c = xa * xb;
                    out.accumulate(key, if sign < 0 { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    /// Trace over one contravariant and one covariant slot.
    pub fn contract(&self, contra_slot: usize, cov_slot: usize) -> Result<TensorField> {
        if contra_slot >= self.q {
            return Err(Error::SlotOutOfRange {
                slot: contra_slot,
                order: self.q,
            });
        }
        if cov_slot >= self.p {
            return Err(Error::SlotOutOfRange {
                slot: cov_slot,
                order: self.p,
            });
        }
        let (q, p) = (self.q - 1, self.p - 1);
        let mut full: BTreeMap<Index, Poly> = BTreeMap::new();
        for (idx, c) in self.full() {
            if idx[contra_slot] != idx[self.q + cov_slot] {
                continue;
            }
            let key: Index = idx
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != contra_slot && k != self.q + cov_slot)
                .map(|(_, &v)| v)
                .collect();
            *full.entry(key).or_default() += c;
        }
        full.retain(|_, c| !c.is_zero());
        Ok(TensorField::from_full(&self.chart, q, p, self.sym, full))
    }

    /// `i_X K` for an l-vector X: pairs X against the first l covariant
    /// slots of K.
    pub fn insert_multivector(x: &TensorField, k: &TensorField) -> Result<TensorField> {
        if x.chart != k.chart {
            return Err(Error::ChartMismatch);
        }
        if x.p != 0 {
            return Err(Error::Valence {
                expected: "(l,0)".into(),
                q: x.q,
                p: x.p,
            });
        }
        let l = x.q;
        if l > k.p {
            return Err(Error::InsertionTooLarge {
                inserted: l,
                available: k.p,
            });
        }
        let q = k.q;
        let sym = Symmetry {
            contra: k.sym.contra,
            cov: k.sym.cov,
        }
        .normalized(q, k.p - l);
        let mut full: BTreeMap<Index, Poly> = BTreeMap::new();
        for (idx, c) in k.full() {
            let mut key = idx[..q].to_vec();
            key.extend_from_slice(&idx[q + l..]);
            if !block_is_canonical(&key[..q], sym.contra) || !block_is_canonical(&key[q..], sym.cov) {
                continue;
            }
            let xv = x.component(&idx[q..q + l]);
            if xv.is_zero() {
                continue;
            }
            *full.entry(key).or_default() += &xv * &c;
        }
        full.retain(|_, c| !c.is_zero());
        Ok(TensorField::from_full(&k.chart, q, k.p - l, sym, full))
    }

    /// `i_ω K` for a (0,u) tensor ω: pairs ω against the first u
    /// contravariant slots of K.
    pub fn insert_form(w: &TensorField, k: &TensorField) -> Result<TensorField> {
        if w.chart != k.chart {
            return Err(Error::ChartMismatch);
        }
        if w.q != 0 {
            return Err(Error::Valence {
                expected: "(0,u)".into(),
                q: w.q,
                p: w.p,
            });
        }
        let u = w.p;
        if u > k.q {
            return Err(Error::InsertionTooLarge {
                inserted: u,
                available: k.q,
            });
        }
        let q = k.q - u;
        let sym = Symmetry {
            contra: k.sym.contra,
            cov: k.sym.cov,
        }
        .normalized(q, k.p);
        let mut full: BTreeMap<Index, Poly> = BTreeMap::new();
        for (idx, c) in k.full() {
            let key = idx[u..].to_vec();
            if !block_is_canonical(&key[..q], sym.contra) || !block_is_canonical(&key[q..], sym.cov) {
                continue;
            }
            let wv = w.component(&idx[..u]);
            if wv.is_zero() {
                continue;
            }
            *full.entry(key).or_default() += &wv * &c;
        }
        full.retain(|_, c| !c.is_zero());
        Ok(TensorField::from_full(&k.chart, q, k.p, sym, full))
    }

    pub(crate) fn require_valence(&self, q: usize, p: usize) -> Result<()> {
        if self.valence() == (q, p) {
            Ok(())
        } else {
            Err(Error::Valence {
                expected: format!("({q},{p})"),
                q: self.q,
                p: self.p,
            })
        }
    }

    /// `N₁ ∘ N₂` for (1,1)-tensors viewed as endomorphisms of the tangent
    /// bundle: `(N₁∘N₂)ⁱ_j = N₁ⁱ_k N₂ᵏ_j`.
    pub fn compose_11(n1: &TensorField, n2: &TensorField) -> Result<TensorField> {
        n1.require_valence(1, 1)?;
        n2.require_valence(1, 1)?;
        // N₁ ⊗ N₂ has index (i, k', k, j); contract N₂'s upper k' with N₁'s lower k
        n1.tensor_product(n2)?.contract(1, 0)
    }

    /// Degree in one grading component: coefficient weight plus covariant
    /// index weights minus contravariant index weights.
    pub fn degree(&self, component: usize) -> Result<Degree> {
        self.chart.check_component(component)?;
        let mut d = Degree::Any;
        for (idx, c) in &self.comps {
            let index_weight: i64 = idx[self.q..]
                .iter()
                .map(|&v| self.chart.weight(v, component))
                .sum::<i64>()
                - idx[..self.q]
                    .iter()
                    .map(|&v| self.chart.weight(v, component))
                    .sum::<i64>();
            let cd = match self.chart.degree_of_function(c, component) {
                Degree::Exactly(w) => Degree::Exactly(w + index_weight),
                other => other,
            };
            d = d.join(cd);
            if d == Degree::Inhomogeneous {
                break;
            }
        }
        Ok(d)
    }

    /// Canonical ASCII text: `coef*d/dx ^^ d/dy + …` with `ox` between
    /// tensor factors and `^^` inside antisymmetric blocks.
    pub fn to_text(&self) -> String {
        let chart = &self.chart;
        if self.q == 0 && self.p == 0 {
            return self.component(&[]).display_with(|v| chart.name(v));
        }
        if self.comps.is_empty() {
            return "0".to_string();
        }
        // symmetric blocks are written out in full
        let mut rows: Vec<(Index, Poly)> = Vec::new();
        for (idx, c) in &self.comps {
            let contra = match self.sym.contra {
                BlockSymmetry::Sym => block_permutations(&idx[..self.q], BlockSymmetry::Sym),
                _ => vec![(idx[..self.q].to_vec(), 1)],
            };
            let cov = match self.sym.cov {
                BlockSymmetry::Sym => block_permutations(&idx[self.q..], BlockSymmetry::Sym),
                _ => vec![(idx[self.q..].to_vec(), 1)],
            };
            for (a, _) in &contra {
                for (b, _) in &cov {
                    let mut key = a.clone();
                    key.extend_from_slice(b);
                    rows.push((key, c.clone()));
                }
            }
        }
        rows.sort_by(|a, b| a.0.cmp(&b.0));
        let mut s = String::new();
        for (k, (idx, c)) in rows.iter().enumerate() {
            let basis = self.basis_text(idx);
            let single = c.len() == 1;
            let lead_negative = single && c.terms().next().is_some_and(|(_, a)| a.is_negative());
            let magnitude = if lead_negative { -c } else { c.clone() };
            if k == 0 {
                if lead_negative {
                    s.push('-');
                }
            } else {
                s.push_str(if lead_negative { " - " } else { " + " });
            }
            if magnitude.is_one() {
                s.push_str(&basis);
            } else if single {
                s.push_str(&magnitude.display_with(|v| chart.name(v)));
                s.push('*');
                s.push_str(&basis);
            } else {
                s.push('(');
                s.push_str(&magnitude.display_with(|v| chart.name(v)));
                s.push_str(")*");
                s.push_str(&basis);
            }
        }
        s
    }

    fn basis_text(&self, idx: &[Var]) -> String {
        let chart = &self.chart;
        let contra: Vec<String> = idx[..self.q]
            .iter()
            .map(|&v| format!("d/d{}", chart.name(v)))
            .collect();
        let cov: Vec<String> = idx[self.q..]
            .iter()
            .map(|&v| format!("d{}", chart.name(v)))
            .collect();
        let join = |parts: Vec<String>, sym: BlockSymmetry| {
            parts.join(if sym == BlockSymmetry::Antisym { " ^^ " } else { " ox " })
        };
        let mut blocks = Vec::new();
        if !contra.is_empty() {
            blocks.push(join(contra, self.sym.contra));
        }
        if !cov.is_empty() {
            blocks.push(join(cov, self.sym.cov));
        }
        blocks.join(" ox ")
    }

    pub fn to_json(&self) -> TensorJson {
        let chart = &self.chart;
        TensorJson {
            q: self.q,
            p: self.p,
            symmetry: self.sym,
            text: self.to_text(),
            components: self
                .comps
                .iter()
                .map(|(idx, c)| ComponentJson {
                    index: idx.iter().map(|&v| chart.name(v).to_string()).collect(),
                    coefficient: c.display_with(|v| chart.name(v)),
                })
                .collect(),
        }
    }
}

/// Machine-readable tensor: the stored component map.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TensorJson {
    pub q: usize,
    pub p: usize,
    pub symmetry: Symmetry,
    pub text: String,
    pub components: Vec<ComponentJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComponentJson {
    pub index: Vec<String>,
    pub coefficient: String,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plane() -> (Chart, Var, Var) {
        let c = Chart::manifold(&["x", "y"]).unwrap();
        (c, Var(0), Var(1))
    }

    fn dx(c: &Chart, v: Var) -> TensorField {
        TensorField::differential(c, v).unwrap()
    }

    fn del(c: &Chart, v: Var) -> TensorField {
        TensorField::coordinate_field(c, v).unwrap()
    }

    #[test]
    fn tensor_products() {
        let (c, x, y) = plane();
        let f = TensorField::scalar(&c, Poly::var(x)).unwrap();
        let xdy = TensorField::vector_field(&c, [(y, Poly::var(x))]).unwrap();
        assert_eq!(f.tensor_product(&del(&c, y)).unwrap(), xdy);

        let t = del(&c, x).tensor_product(&dx(&c, x)).unwrap();
        assert_eq!(t.valence(), (1, 1));
        assert_eq!(t.len(), 1);
        assert!(t.component(&[x, x]).is_one());

        let ydx = TensorField::one_form(&c, [(x, Poly::var(y))]).unwrap();
        let t = xdy.tensor_product(&ydx).unwrap();
        assert_eq!(t.component(&[y, x]), &Poly::var(x) * &Poly::var(y));
        assert_eq!(t.len(), 1);
    }

    #[test]
    fn wedge_sign_rules() {
        let (c, x, y) = plane();
        assert!(dx(&c, x).wedge(&dx(&c, x)).unwrap().is_zero());
        let a = dx(&c, x).wedge(&dx(&c, y)).unwrap();
        let b = dx(&c, y).wedge(&dx(&c, x)).unwrap();
        assert_eq!(a, b.neg());
        let bi = del(&c, x).wedge(&del(&c, y)).unwrap();
        let full = bi.full();
        assert!(full[&vec![x, y]].is_one());
        assert_eq!(full[&vec![y, x]], Poly::int(-1));
        assert!(dx(&c, x).wedge(&del(&c, y)).is_err());
    }

    #[test]
    fn wedge_of_forms_is_graded_commutative() {
        let c = Chart::manifold(&["x", "y", "z"]).unwrap();
        let (x, y, z) = (Var(0), Var(1), Var(2));
        let a = dx(&c, x).wedge(&dx(&c, y)).unwrap();
        let b = dx(&c, z);
        // (2-form) ∧ (1-form) = (1-form) ∧ (2-form)
        assert_eq!(a.wedge(&b).unwrap(), b.wedge(&a).unwrap());
        let vol = a.wedge(&b).unwrap();
        assert!(vol.component(&[x, y, z]).is_one());
        assert_eq!(vol.component(&[y, x, z]), Poly::int(-1));
    }

    #[test]
    fn contractions() {
        let (c, x, y) = plane();
        let t = del(&c, x).tensor_product(&dx(&c, x)).unwrap();
        assert!(t.contract(0, 0).unwrap().as_scalar().unwrap().is_one());
        let t = del(&c, x).tensor_product(&dx(&c, y)).unwrap();
        assert!(t.contract(0, 0).unwrap().as_scalar().unwrap().is_zero());
        assert!(matches!(t.contract(1, 0), Err(Error::SlotOutOfRange { .. })));
    }

    #[test]
    fn composition_matches_matrix_product() {
        let (c, x, y) = plane();
        let n1 = TensorField::from_components(
            &c,
            1,
            1,
            Symmetry::NONE,
            [(vec![x, y], Poly::var(x)), (vec![y, y], Poly::int(2)), (vec![y, x], Poly::int(1))],
        )
        .unwrap();
        let n2 = TensorField::from_components(
            &c,
            1,
            1,
            Symmetry::NONE,
            [(vec![x, x], Poly::int(3)), (vec![y, x], Poly::var(y))],
        )
        .unwrap();
        let comp = TensorField::compose_11(&n1, &n2).unwrap();
        for i in [x, y] {
            for j in [x, y] {
                let expected: Poly = [x, y]
                    .iter()
                    .map(|&k| &n1.component(&[i, k]) * &n2.component(&[k, j]))
                    .sum();
                assert_eq!(comp.component(&[i, j]), expected);
            }
        }
        let id = TensorField::identity_11(&c);
        assert_eq!(TensorField::compose_11(&id, &n1).unwrap(), n1);
    }

    #[test]
    fn insertions() {
        let c = Chart::manifold(&["x", "y", "z"]).unwrap();
        let (x, y, z) = (Var(0), Var(1), Var(2));
        let dxdy = dx(&c, x).tensor_product(&dx(&c, y)).unwrap();
        assert_eq!(TensorField::insert_multivector(&del(&c, x), &dxdy).unwrap(), dx(&c, y));
        let dydx = dx(&c, y).tensor_product(&dx(&c, x)).unwrap();
        assert!(TensorField::insert_multivector(&del(&c, x), &dydx).unwrap().is_zero());

        // bivector ∂x∧∂y into dx⊗dy⊗dz: δ-pairing leaves dz
        let bi = del(&c, x).wedge(&del(&c, y)).unwrap();
        let t = dxdy.tensor_product(&dx(&c, z)).unwrap();
        assert_eq!(TensorField::insert_multivector(&bi, &t).unwrap(), dx(&c, z));
        assert!(matches!(
            TensorField::insert_multivector(&bi, &dx(&c, z)),
            Err(Error::InsertionTooLarge { .. })
        ));

        let dd = del(&c, x).tensor_product(&del(&c, y)).unwrap();
        assert_eq!(TensorField::insert_form(&dx(&c, x), &dd).unwrap(), del(&c, y));
        assert!(TensorField::insert_form(&dx(&c, y), &dd).unwrap().is_zero());
        let xdx = TensorField::one_form(&c, [(x, Poly::var(x))]).unwrap();
        let xdelx = TensorField::vector_field(&c, [(x, Poly::var(x))]).unwrap();
        assert_eq!(
            TensorField::insert_form(&xdx, &xdelx).unwrap().as_scalar().unwrap(),
            Poly::var(x).pow(2)
        );
    }

    #[test]
    fn degrees() {
        let c = Chart::simple(&[("x", 0), ("y", 1)]).unwrap();
        let (x, y) = (Var(0), Var(1));
        assert_eq!(del(&c, y).degree(0).unwrap(), Degree::Exactly(-1));
        assert_eq!(dx(&c, y).degree(0).unwrap(), Degree::Exactly(1));
        let k = TensorField::vector_field(&c, [(y, Poly::var(y).pow(2))])
            .unwrap()
            .tensor_product(&dx(&c, x))
            .unwrap();
        assert_eq!(k.degree(0).unwrap(), Degree::Exactly(1));
        let mixed = del(&c, x).add(&del(&c, y)).unwrap();
        assert_eq!(mixed.degree(0).unwrap(), Degree::Inhomogeneous);
    }

    #[test]
    fn symmetry_retagging() {
        let (c, x, y) = plane();
        let junk = del(&c, x).tensor_product(&del(&c, y)).unwrap();
        assert!(matches!(
            junk.with_symmetry(Symmetry::ANTISYM_CONTRA),
            Err(Error::NotAntisymmetric(_))
        ));
        let bi = del(&c, x).wedge(&del(&c, y)).unwrap();
        let plain = bi.with_symmetry(Symmetry::NONE).unwrap();
        assert_eq!(plain.len(), 2);
        assert_eq!(plain.with_symmetry(Symmetry::ANTISYM_CONTRA).unwrap(), bi);
        let sym = junk.add(&del(&c, y).tensor_product(&del(&c, x)).unwrap()).unwrap();
        assert_eq!(sym.with_symmetry(Symmetry::SYM_CONTRA).unwrap().len(), 1);
    }

    #[test]
    fn text_rendering() {
        let (c, x, y) = plane();
        let t = TensorField::vector_field(&c, [(y, Poly::var(x))]).unwrap();
        assert_eq!(t.to_text(), "x*d/dy");
        let bi = del(&c, x).wedge(&del(&c, y)).unwrap().scale_poly(&(&Poly::var(x) + &Poly::var(y)));
        assert_eq!(bi.to_text(), "(x + y)*d/dx ^^ d/dy");
        let n = dx(&c, x)
            .tensor_product(&del(&c, y))
            .unwrap()
            .sub(&dx(&c, y).tensor_product(&del(&c, x)).unwrap())
            .unwrap();
        assert_eq!(n.to_text(), "-d/dx ox dy + d/dy ox dx");
    }
}
