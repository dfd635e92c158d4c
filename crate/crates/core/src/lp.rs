//! Dense tableau simplex for `max c·x` subject to `A x ≤ b`, `x ≥ 0`, `b ≥ 0`.
//!
//! The origin is feasible so the slack basis starts phase two directly.
//! Entering and leaving variables follow Bland's rule, which cannot cycle.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{Scalar, Tolerance};

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct LpSolution<S> {
    pub x: Vec<S>,
    pub value: S,
}

pub(crate) fn maximize<S: Scalar>(c: &[S], a: &Matrix<S>, b: &[S], tol: Tolerance) -> Result<LpSolution<S>> {
    let (m, n) = a.shape();
    if c.len() != n || b.len() != m {
        return Err(Error::DimensionMismatch {
            context: "linear program shape",
            expected: m * n,
            found: b.len() * c.len(),
        });
    }
    if b.iter().any(|v| tol.is_negative(v)) {
        return Err(Error::InvalidParameter("right-hand side must be nonnegative".into()));
    }

    // Columns: n structural, m slack, then the right-hand side.
    let width = n + m + 1;
    let mut t = Matrix::<S>::zeros(m + 1, width);
    for i in 0..m {
        for j in 0..n {
            t[(i, j)] = a[(i, j)].clone();
        }
        t[(i, n + i)] = S::one();
        t[(i, width - 1)] = b[i].clone();
    }
    for j in 0..n {
        t[(m, j)] = -c[j].clone();
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    while let Some(enter) = (0..n + m).find(|&j| tol.is_negative(&t[(m, j)])) {
        let mut leave: Option<(usize, S)> = None;
        for i in 0..m {
            if !tol.is_positive(&t[(i, enter)]) {
                continue;
            }
            let ratio = t[(i, width - 1)].clone() / t[(i, enter)].clone();
            leave = match leave {
                None => Some((i, ratio)),
                Some((r, best)) => {
                    if tol.lt(&ratio, &best) || (tol.eq(&ratio, &best) && basis[i] < basis[r]) {
                        Some((i, ratio))
                    } else {
                        Some((r, best))
                    }
                }
            };
        }
        let (row, _) = leave.ok_or(Error::Unbounded)?;
        pivot(&mut t, row, enter);
        basis[row] = enter;
    }

    let mut x = vec![S::zero(); n];
    for (i, &var) in basis.iter().enumerate() {
        if var < n {
            x[var] = t[(i, width - 1)].clone();
        }
    }
    Ok(LpSolution { value: t[(m, width - 1)].clone(), x })
}

fn pivot<S: Scalar>(t: &mut Matrix<S>, row: usize, col: usize) {
    let (rows, width) = t.shape();
    let p = t[(row, col)].clone();
    for j in 0..width {
        t[(row, j)] = t[(row, j)].clone() / p.clone();
    }
    for i in 0..rows {
        if i == row || t[(i, col)].is_zero() {
            continue;
        }
        let factor = t[(i, col)].clone();
        for j in 0..width {
            t[(i, j)] = t[(i, j)].clone() - factor.clone() * t[(row, j)].clone();
        }
    }
}
