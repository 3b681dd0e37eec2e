//! Gauss–Jordan elimination over the Novikov fraction field.
//!
//! Pivot rule: among the not-yet-used rows and columns, the nonzero entry of
//! least q-valuation, ties broken by row then column. The rule is fixed so
//! that representatives and certificates are reproducible.

use crate::novikov::{Frac, Setup};

pub type DenseMatrix = Vec<Vec<Frac>>;

/// Result of a full reduction: every pivot column is a unit vector.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub matrix: DenseMatrix,
    /// `(row, col)` in the order the pivots were chosen.
    pub pivots: Vec<(usize, usize)>,
    pub cols: usize,
}

impl Reduction {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Reduces `m` (with `cols` columns), pivoting only in columns `< pivot_cols`.
pub fn reduce(mut m: DenseMatrix, cols: usize, pivot_cols: usize) -> Reduction {
    let rows = m.len();
    let mut row_used = vec![false; rows];
    let mut col_used = vec![false; cols];
    let mut pivots = Vec::new();
    loop {
        let mut best: Option<(i64, usize, usize)> = None;
        for (r, row) in m.iter().enumerate() {
            if row_used[r] {
                continue;
            }
            for (c, x) in row.iter().enumerate().take(pivot_cols) {
                if col_used[c] || x.is_zero() {
                    continue;
                }
                let v = x.valuation().unwrap();
                if best.is_none_or(|(bv, _, _)| v < bv) {
                    best = Some((v, r, c));
                }
            }
        }
        let Some((_, pr, pc)) = best else { break };
        row_used[pr] = true;
        col_used[pc] = true;
        pivots.push((pr, pc));
        let inv = m[pr][pc].inv().expect("nonzero pivot");
        let prow: Vec<Frac> = m[pr].iter().map(|x| x.mul(&inv)).collect();
        let nz: Vec<usize> = (0..cols).filter(|&c| !prow[c].is_zero()).collect();
        for (r, row) in m.iter_mut().enumerate() {
            if r == pr || row[pc].is_zero() {
                continue;
            }
            let f = row[pc].clone();
            for &c in &nz {
                row[c] = row[c].sub(&f.mul(&prow[c]));
            }
        }
        m[pr] = prow;
    }
    Reduction { matrix: m, pivots, cols }
}

pub fn rank(m: &DenseMatrix, cols: usize) -> usize {
    reduce(m.clone(), cols, cols).rank()
}

/// Basis of `{x : m·x = 0}`, one vector per non-pivot column, in column order.
pub fn nullspace(m: &DenseMatrix, cols: usize, setup: Setup) -> Vec<Vec<Frac>> {
    let red = reduce(m.clone(), cols, cols);
    let mut pivot_of_col = vec![None; cols];
    for &(r, c) in &red.pivots {
        pivot_of_col[c] = Some(r);
    }
    let mut out = Vec::new();
    for f in 0..cols {
        if pivot_of_col[f].is_some() {
            continue;
        }
        let mut v = vec![Frac::zero(setup); cols];
        v[f] = Frac::one(setup);
        for c in 0..cols {
            if let Some(r) = pivot_of_col[c] {
                v[c] = red.matrix[r][f].neg();
            }
        }
        out.push(v);
    }
    out
}

/// A particular solution of `m·x = b` (free variables zero), or `None` when
/// the system is inconsistent.
pub fn solve(m: &DenseMatrix, cols: usize, b: &[Frac], setup: Setup) -> Option<Vec<Frac>> {
    solve_detailed(m, cols, b, setup).ok()
}

/// Like [`solve`], but an inconsistent system reports the first equation
/// left with a nonzero residual after elimination, and that residual.
pub fn solve_detailed(m: &DenseMatrix, cols: usize, b: &[Frac], setup: Setup) -> Result<Vec<Frac>, (usize, Frac)> {
    let aug: DenseMatrix = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let red = reduce(aug, cols + 1, cols);
    let pivot_rows: Vec<bool> = {
        let mut v = vec![false; m.len()];
        for &(r, _) in &red.pivots {
            v[r] = true;
        }
        v
    };
    for (r, row) in red.matrix.iter().enumerate() {
        if !pivot_rows[r] && !row[cols].is_zero() {
            return Err((r, row[cols].clone()));
        }
    }
    let mut x = vec![Frac::zero(setup); cols];
    for &(r, c) in &red.pivots {
        x[c] = red.matrix[r][cols].clone();
    }
    Ok(x)
}

/// Columns as a dense row-major matrix.
pub fn from_columns(cols: &[Vec<Frac>], rows: usize, setup: Setup) -> DenseMatrix {
    let mut m = vec![vec![Frac::zero(setup); cols.len()]; rows];
    for (j, col) in cols.iter().enumerate() {
        for (i, x) in col.iter().enumerate() {
            m[i][j] = x.clone();
        }
    }
    m
}

/// Indices of a maximal independent subset of `vectors`, chosen greedily in order.
pub fn independent_subset(vectors: &[Vec<Frac>], dim: usize, setup: Setup) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    let mut current: Vec<Vec<Frac>> = Vec::new();
    for (i, v) in vectors.iter().enumerate() {
        current.push(v.clone());
        if rank(&from_columns(&current, dim, setup), current.len()) == current.len() {
            chosen.push(i);
        } else {
            current.pop();
        }
    }
    chosen
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::novikov::{CoefficientRing, NovikovElem};

    fn s() -> Setup {
        Setup::integral(CoefficientRing::Rationals)
    }

    fn f(terms: &[(i64, i64)]) -> Frac {
        Frac::from_elem(NovikovElem::from_terms(s(), terms.iter().map(|&(n, c)| (n, s().ring.from_i64(c)))))
    }

    #[test]
    fn q_is_a_unit() {
        let m = vec![vec![f(&[(1, 1)])]];
        assert_eq!(rank(&m, 1), 1);
    }

    #[test]
    fn nullspace_is_annihilated() {
        let m = vec![vec![f(&[(0, 1)]), f(&[(1, 1)]), f(&[(0, 1), (1, 1)])], vec![f(&[(1, 2)]), f(&[(2, 2)]), f(&[(1, 2), (2, 2)])]];
        let ns = nullspace(&m, 3, s());
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for row in &m {
                let dot = row.iter().zip(v).fold(Frac::zero(s()), |acc, (a, b)| acc.add(&a.mul(b)));
                assert!(dot.is_zero());
            }
        }
    }

    #[test]
    fn solve_detects_inconsistency() {
        let m = vec![vec![f(&[(0, 1)])], vec![f(&[(0, 1)])]];
        assert!(solve(&m, 1, &[f(&[(0, 1)]), f(&[(0, 2)])], s()).is_none());
        let x = solve(&m, 1, &[f(&[(0, 1), (1, 1)]), f(&[(0, 1), (1, 1)])], s()).unwrap();
        assert_eq!(x[0], f(&[(0, 1), (1, 1)]));
    }

    #[test]
    fn division_by_polynomial() {
        // (1 + q)·x = 1  ⇒  x = 1/(1 + q)
        let m = vec![vec![f(&[(0, 1), (1, 1)])]];
        let x = solve(&m, 1, &[f(&[(0, 1)])], s()).unwrap();
        assert_eq!(x[0].mul(&m[0][0]), f(&[(0, 1)]));
        assert!(x[0].as_elem().is_none());
    }
}
