//! Exact Gaussian elimination over the rationals.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::{Error, LinComb, Result, Q};

/// Solves `Σ_j x_j · columns[j] = rhs` exactly.
///
/// The columns are sparse vectors indexed by arbitrary keys. Fails if the
/// columns are dependent or if `rhs` is not in their span.
pub fn solve_columns<K: Ord + Clone>(columns: &[LinComb<K>], rhs: &LinComb<K>) -> Result<Vec<Q>> {
    let mut index: BTreeMap<&K, usize> = BTreeMap::new();
    for key in columns.iter().flat_map(|c| c.keys()).chain(rhs.keys()) {
        let next = index.len();
        index.entry(key).or_insert(next);
    }
    let (rows, cols) = (index.len(), columns.len());
    let mut m = vec![vec![Q::zero(); cols + 1]; rows];
    for (j, col) in columns.iter().enumerate() {
        for (k, c) in col.iter() {
            m[index[k]][j] = c.clone();
        }
    }
    for (k, c) in rhs.iter() {
        m[index[k]][cols] = c.clone();
    }

    let mut pivot_row = 0;
    let mut pivots = Vec::with_capacity(cols);
    for j in 0..cols {
        let Some(p) = (pivot_row..rows).find(|&r| !m[r][j].is_zero()) else {
            return Err(Error::Inexact(format!("candidate {j} is dependent on the others")));
        };
        m.swap(pivot_row, p);
        let inv = m[pivot_row][j].recip();
        for x in m[pivot_row][j..].iter_mut() {
            *x *= &inv;
        }
        let pivot = m[pivot_row].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != pivot_row && !row[j].is_zero() {
                let f = row[j].clone();
                for (x, p) in row[j..].iter_mut().zip(&pivot[j..]) {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(pivot_row);
        pivot_row += 1;
    }
    if m[pivot_row..].iter().any(|row| !row[cols].is_zero()) {
        return Err(Error::Inexact(
            "right-hand side is outside the span of the candidates".into(),
        ));
    }
    Ok(pivots.into_iter().map(|r| m[r][cols].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q;

    fn v(entries: &[(u32, i64)]) -> LinComb<u32> {
        entries.iter().map(|&(k, c)| (k, q(c))).collect()
    }

    #[test]
    fn solves_small_system() {
        let cols = [v(&[(0, 1), (1, 1)]), v(&[(1, 1), (2, 2)])];
        let rhs = v(&[(0, 2), (1, 5), (2, 6)]);
        assert_eq!(solve_columns(&cols, &rhs).unwrap(), vec![q(2), q(3)]);
    }

    #[test]
    fn rejects_outside_span() {
        let cols = [v(&[(0, 1)])];
        assert!(solve_columns(&cols, &v(&[(1, 1)])).is_err());
    }

    #[test]
    fn rejects_dependent_columns() {
        let cols = [v(&[(0, 1)]), v(&[(0, 2)])];
        assert!(solve_columns(&cols, &v(&[(0, 1)])).is_err());
    }

    #[test]
    fn fractional_solution() {
        let cols = [v(&[(0, 3)])];
        let x = solve_columns(&cols, &v(&[(0, 1)])).unwrap();
        assert_eq!(x, vec![Q::new(1.into(), 3.into())]);
    }
}
