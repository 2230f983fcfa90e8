//! Seeded generators of random polynomial objects for the theorem battery
//! and property tests.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chart::Chart;
use crate::poly::{int, Monomial, Poly, Rational, Var};
use crate::tensor::{BlockSymmetry, Index, Symmetry, TensorField};

pub struct Gen {
    rng: ChaCha8Rng,
}

/// Every index tuple of length `len` over `dim` variables that is canonical
/// for `sym`.
fn block_indices(dim: usize, len: usize, sym: BlockSymmetry) -> Vec<Vec<Var>> {
    let mut out: Vec<Vec<Var>> = vec![vec![]];
    for _ in 0..len {
        let mut next = Vec::new();
        for prefix in &out {
            for v in 0..dim {
                let v = Var::from(v);
                let ok = match (sym, prefix.last()) {
                    (BlockSymmetry::Sym, Some(&last)) => v >= last,
                    (BlockSymmetry::Antisym, Some(&last)) => v > last,
                    _ => true,
                };
                if ok {
                    let mut p = prefix.clone();
                    p.push(v);
                    next.push(p);
                }
            }
        }
        out = next;
    }
    out
}

pub fn canonical_indices(dim: usize, q: usize, p: usize, sym: Symmetry) -> Vec<Index> {
    let contra = block_indices(dim, q, if q < 2 { BlockSymmetry::None } else { sym.contra });
    let cov = block_indices(dim, p, if p < 2 { BlockSymmetry::None } else { sym.cov });
    let mut out = Vec::with_capacity(contra.len() * cov.len());
    for a in &contra {
        for b in &cov {
            let mut idx = a.clone();
            idx.extend_from_slice(b);
            out.push(idx);
        }
    }
    out
}

/// Monomials of total degree at most `max_deg` in the first `dim` variables.
pub fn monomials(dim: usize, max_deg: u32) -> Vec<Monomial> {
    let mut out = vec![Monomial::one()];
    let mut frontier = vec![Monomial::one()];
    for _ in 0..max_deg {
        let mut next = Vec::new();
        for m in &frontier {
            let start = m.max_var().map_or(0, |v| v.index());
            for v in start..dim {
                next.push(m * &Monomial::var(Var::from(v)));
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

impl Gen {
    pub fn new(seed: u64, stream: u64) -> Gen {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Gen { rng }
    }

    pub fn range(&mut self, lo: usize, hi: usize) -> usize {
        self.rng.gen_range(lo..=hi)
    }

    pub fn int_range(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    pub fn pick<'a, T>(&mut self, items: &'a [T]) -> &'a T {
        items.choose(&mut self.rng).expect("nonempty choice")
    }

    /// A nonzero integer in `−3..=3`.
    pub fn coeff(&mut self) -> Rational {
        let v = self.rng.gen_range(1..=3);
        int(if self.rng.gen_bool(0.5) { v } else { -v })
    }

    /// Up to `max_terms` random terms of total degree ≤ `max_deg`.
    pub fn poly(&mut self, dim: usize, max_deg: u32, max_terms: usize) -> Poly {
        let pool = monomials(dim, max_deg);
        let n = self.range(1, max_terms);
        let mut p = Poly::zero();
        for _ in 0..n {
            let m = self.pick(&pool).clone();
            let c = self.coeff();
            p.add_term(m, c);
        }
        p
    }

    pub fn nonzero_poly(&mut self, dim: usize, max_deg: u32, max_terms: usize) -> Poly {
        loop {
            let p = self.poly(dim, max_deg, max_terms);
            if !p.is_zero() {
                return p;
            }
        }
    }

    /// A random polynomial homogeneous of `weight` in a grading component,
    /// or `None` when no monomial of degree ≤ `max_deg` has that weight.
    pub fn homogeneous_poly(&mut self, chart: &Chart, component: usize, weight: i64, max_deg: u32) -> Option<Poly> {
        let pool: Vec<Monomial> = monomials(chart.dim(), max_deg)
            .into_iter()
            .filter(|m| chart.weight_of_monomial(m, component) == weight)
            .collect();
        if pool.is_empty() {
            return None;
        }
        let n = self.range(1, 2);
        let mut p = Poly::zero();
        for _ in 0..n {
            let m = self.pick(&pool).clone();
            let c = self.coeff();
            p.add_term(m, c);
        }
        Some(p)
    }

    /// A nonzero tensor with at most `max_comps` stored components.
    pub fn tensor(&mut self, chart: &Chart, q: usize, p: usize, sym: Symmetry, max_comps: usize) -> TensorField {
        let dim = chart.dim();
        let pool = canonical_indices(dim, q, p, sym);
        assert!(!pool.is_empty(), "no canonical index for this shape");
        loop {
            let n = self.range(1, max_comps);
            let comps: Vec<(Index, Poly)> = (0..n)
                .map(|_| (self.pick(&pool).clone(), self.poly(dim, 2, 2)))
                .collect();
            let t = TensorField::from_components(chart, q, p, sym, comps).expect("valid random tensor");
            if !t.is_zero() {
                return t;
            }
        }
    }

    pub fn vector_field(&mut self, chart: &Chart) -> TensorField {
        let n = chart.dim().min(2);
        self.tensor(chart, 1, 0, Symmetry::NONE, n)
    }

    pub fn form(&mut self, chart: &Chart, p: usize) -> TensorField {
        self.tensor(chart, 0, p, Symmetry::ANTISYM_COV, 2)
    }

    pub fn multivector(&mut self, chart: &Chart, q: usize) -> TensorField {
        self.tensor(chart, q, 0, Symmetry::ANTISYM_CONTRA, 2)
    }

    pub fn vector_valued_form(&mut self, chart: &Chart, k: usize) -> TensorField {
        self.tensor(chart, 1, k, Symmetry::ANTISYM_COV, 2)
    }

    /// A (1,1)-tensor with constant integer entries.
    pub fn constant_11(&mut self, chart: &Chart) -> TensorField {
        let dim = chart.dim();
        let mut comps = Vec::new();
        for i in 0..dim {
            for j in 0..dim {
                if self.chance(0.6) {
                    let c = self.int_range(-3, 3);
                    comps.push((vec![Var::from(i), Var::from(j)], Poly::int(c)));
                }
            }
        }
        TensorField::from_components(chart, 1, 1, Symmetry::NONE, comps).expect("valid (1,1) tensor")
    }

    /// A random symmetry tag valid for the shape.
    pub fn symmetry(&mut self, q: usize, p: usize) -> Symmetry {
        let choices = [BlockSymmetry::None, BlockSymmetry::Sym, BlockSymmetry::Antisym];
        let contra = if q >= 2 { *self.pick(&choices) } else { BlockSymmetry::None };
        let cov = if p >= 2 { *self.pick(&choices) } else { BlockSymmetry::None };
        Symmetry { contra, cov }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_enumeration() {
        assert_eq!(canonical_indices(3, 2, 0, Symmetry::ANTISYM_CONTRA).len(), 3);
        assert_eq!(canonical_indices(3, 0, 2, Symmetry::SYM_COV).len(), 6);
        assert_eq!(canonical_indices(2, 1, 1, Symmetry::NONE).len(), 4);
        assert_eq!(canonical_indices(2, 0, 0, Symmetry::NONE), vec![Vec::<Var>::new()]);
        assert_eq!(monomials(2, 2).len(), 6);
        assert_eq!(monomials(3, 2).len(), 10);
    }

    #[test]
    fn generators_are_deterministic() {
        let c = Chart::manifold(&["x", "y", "z"]).unwrap();
        let a = Gen::new(9, 1).form(&c, 2);
        let b = Gen::new(9, 1).form(&c, 2);
        assert_eq!(a, b);
        assert!(!a.is_zero());
    }

    #[test]
    fn homogeneous_polys_have_their_weight() {
        let c = Chart::simple(&[("x", 1), ("y", 2)]).unwrap();
        let mut g = Gen::new(3, 0);
        for w in 0..=4 {
            let p = g.homogeneous_poly(&c, 0, w, 2).unwrap();
            assert!(c.degree_of_function(&p, 0).is(w));
        }
        assert!(g.homogeneous_poly(&c, 0, 5, 2).is_none());
    }
}
