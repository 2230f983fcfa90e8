//! Exact row reduction over ℚ.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::Rational;

pub type Matrix = Vec<Vec<Rational>>;

/// Reduces `m` in place to row echelon form and returns the rank.
fn echelon(m: &mut Matrix) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        let inv = m[rank][col].recip();
        for c in col..cols {
            m[rank][c] = &m[rank][c] * &inv;
        }
        for r in 0..rows {
            if r != rank && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in col..cols {
                    let delta = &factor * &m[rank][c];
                    m[r][c] -= delta;
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut m = rows.to_vec();
    echelon(&mut m)
}

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Rational::one() } else { Rational::zero() })
                .collect()
        })
        .collect()
}

/// Inverse of a square matrix, or `None` when singular.
pub fn inverse(m: &[Vec<Rational>]) -> Result<Option<Matrix>> {
    let n = m.len();
    if m.iter().any(|row| row.len() != n) {
        return Err(Error::Malformed("inverse of a non-square matrix".into()));
    }
    let mut aug: Matrix = m
        .iter()
        .zip(identity(n))
        .map(|(row, id)| row.iter().cloned().chain(id).collect())
        .collect();
    if echelon(&mut aug) < n || (0..n).any(|i| aug[i][i].is_zero()) {
        return Ok(None);
    }
    Ok(Some(aug.into_iter().map(|row| row[n..].to_vec()).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::int;

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    #[test]
    fn ranks() {
        assert_eq!(rank(&m(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(rank(&m(&[&[0, 1, 0], &[1, 0, 0], &[1, 1, 0]])), 2);
        assert_eq!(rank(&m(&[&[0, 0]])), 0);
        assert_eq!(rank(&[]), 0);
    }

    #[test]
    fn inverses() {
        let a = m(&[&[0, 1], &[-1, 0]]);
        assert_eq!(inverse(&a).unwrap().unwrap(), m(&[&[0, -1], &[1, 0]]));
        assert!(inverse(&m(&[&[1, 2], &[2, 4]])).unwrap().is_none());
        let b = m(&[&[2, 1], &[1, 1]]);
        assert_eq!(inverse(&b).unwrap().unwrap(), m(&[&[1, -1], &[-1, 2]]));
    }
}
