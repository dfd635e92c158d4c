//! Brute-force vertex enumeration of the transportation polytope.
//!
//! Every vertex of `Γ(μ, ν)` is the unique solution supported on some
//! spanning tree of the bipartite graph `K_{m,n}`. Enumerating all spanning
//! trees (`m + n − 1` acyclic cells) and keeping those whose forced flow is
//! nonnegative lists every basic feasible solution, degenerate ones included.
//! Nothing here shares code with the simplex.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{Scalar, Tolerance};

/// Default bound on `|X|·|Y|` for enumeration.
pub const DEFAULT_ENUMERATION_CAP: usize = 16;

fn find(parent: &[usize], mut x: usize) -> usize {
    while parent[x] != x {
        x = parent[x];
    }
    x
}

/// Calls `visit` with every spanning tree of `K_{m,n}` as a sorted cell list.
fn for_each_spanning_tree(m: usize, n: usize, mut visit: impl FnMut(&[usize])) -> usize {
    fn rec(
        m: usize,
        n: usize,
        next: usize,
        chosen: &mut Vec<usize>,
        parent: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize]),
        count: &mut usize,
    ) {
        let need = m + n - 1;
        if chosen.len() == need {
            *count += 1;
            visit(chosen);
            return;
        }
        if m * n - next < need - chosen.len() {
            return;
        }
        let (i, j) = (next / n, next % n);
        let (ri, rj) = (find(parent, i), find(parent, m + j));
        if ri != rj {
            let saved = parent[ri];
            parent[ri] = rj;
            chosen.push(next);
            rec(m, n, next + 1, chosen, parent, visit, count);
            chosen.pop();
            parent[ri] = saved;
        }
        rec(m, n, next + 1, chosen, parent, visit, count);
    }

    let mut parent: Vec<usize> = (0..m + n).collect();
    let mut chosen = Vec::with_capacity(m + n - 1);
    let mut count = 0;
    rec(m, n, 0, &mut chosen, &mut parent, &mut visit, &mut count);
    count
}

/// The flow forced on a spanning tree by the marginals, via leaf peeling.
/// `None` when some entry is negative (the basis is infeasible).
fn tree_flow<S: Scalar>(tree: &[usize], mu: &[S], nu: &[S], tol: Tolerance) -> Option<Matrix<S>> {
    let (m, n) = (mu.len(), nu.len());
    let mut degree = vec![0usize; m + n];
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); m + n];
    for &cell in tree {
        let (i, j) = (cell / n, m + cell % n);
        degree[i] += 1;
        degree[j] += 1;
        incident[i].push(cell);
        incident[j].push(cell);
    }
    let mut remaining: Vec<S> = mu.iter().chain(nu).cloned().collect();
    let mut used = vec![false; m * n];
    let mut flow = Matrix::zeros(m, n);
    let mut leaves: Vec<usize> = (0..m + n).filter(|&v| degree[v] == 1).collect();
    while let Some(leaf) = leaves.pop() {
        if degree[leaf] != 1 {
            continue;
        }
        let cell = *incident[leaf].iter().find(|&&c| !used[c]).expect("leaf has one live edge");
        used[cell] = true;
        let (i, j) = (cell / n, m + cell % n);
        let other = if leaf == i { j } else { i };
        let amount = remaining[leaf].clone();
        if tol.is_negative(&amount) {
            return None;
        }
        remaining[other] = remaining[other].clone() - amount.clone();
        remaining[leaf] = S::zero();
        flow[(i, j - m)] = amount;
        degree[leaf] -= 1;
        degree[other] -= 1;
        if degree[other] == 1 {
            leaves.push(other);
        }
    }
    Some(flow)
}

/// Result of [`enumerate_extreme_couplings`].
#[derive(Debug, Clone)]
pub struct ExtremeCouplings<S> {
    /// Distinct vertices of the transportation polytope.
    pub vertices: Vec<Matrix<S>>,
    /// Spanning trees examined.
    pub trees: usize,
    /// Trees whose forced flow is feasible (a vertex may have several).
    pub feasible_bases: usize,
}

fn check_cap(m: usize, n: usize, cap: usize) -> Result<()> {
    if m * n > cap {
        return Err(Error::InstanceTooLarge { cells: m * n, cap });
    }
    if m == 0 || n == 0 {
        return Err(Error::DimensionMismatch { context: "empty marginal", expected: 1, found: 0 });
    }
    Ok(())
}

/// Lists every distinct vertex of `Γ(μ, ν)`.
pub fn enumerate_extreme_couplings<S: Scalar>(
    mu: &[S],
    nu: &[S],
    cap: usize,
    tol: Tolerance,
) -> Result<ExtremeCouplings<S>> {
    check_cap(mu.len(), nu.len(), cap)?;
    let mut vertices: Vec<Matrix<S>> = Vec::new();
    let mut feasible_bases = 0;
    let trees = for_each_spanning_tree(mu.len(), nu.len(), |tree| {
        if let Some(flow) = tree_flow(tree, mu, nu, tol) {
            feasible_bases += 1;
            let known = vertices.iter().any(|v| v.le_entrywise(&flow, tol) && flow.le_entrywise(v, tol));
            if !known {
                vertices.push(flow);
            }
        }
    });
    Ok(ExtremeCouplings { vertices, trees, feasible_bases })
}

/// Minimum and maximum of `Σ P c` over all basic feasible couplings.
pub fn enumerate_extremes<S: Scalar>(
    cost: &Matrix<S>,
    mu: &[S],
    nu: &[S],
    cap: usize,
    tol: Tolerance,
) -> Result<(S, S)> {
    check_cap(mu.len(), nu.len(), cap)?;
    if cost.shape() != (mu.len(), nu.len()) {
        return Err(Error::DimensionMismatch {
            context: "cost vs marginals",
            expected: mu.len() * nu.len(),
            found: cost.rows() * cost.cols(),
        });
    }
    let mut best: Option<(S, S)> = None;
    for_each_spanning_tree(mu.len(), nu.len(), |tree| {
        if let Some(flow) = tree_flow(tree, mu, nu, tol) {
            let value = flow.dot(cost);
            best = Some(match best.take() {
                None => (value.clone(), value),
                Some((lo, hi)) => (S::min_of(lo, value.clone()), S::max_of(hi, value)),
            });
        }
    });
    best.ok_or_else(|| Error::InfeasibleMarginals { which: "mu/nu", total: "no feasible basis".into() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    #[test]
    fn spanning_tree_counts_match_cayley_formula() {
        // K_{m,n} has m^(n-1) n^(m-1) spanning trees.
        for (m, n, expected) in [(1, 1, 1), (1, 4, 1), (2, 2, 4), (2, 3, 12), (3, 3, 81), (4, 4, 4096)] {
            assert_eq!(for_each_spanning_tree(m, n, |_| {}), expected, "{m}x{n}");
        }
    }

    #[test]
    fn birkhoff_two_by_two_has_two_vertices() {
        let h = vec![Rational::from_ratio(1, 2); 2];
        let e = enumerate_extreme_couplings(&h, &h, 16, Tolerance::EXACT).unwrap();
        assert_eq!(e.trees, 4);
        assert_eq!(e.vertices.len(), 2);
    }

    #[test]
    fn cap_enforced() {
        let w = vec![0.2; 5];
        let err = enumerate_extreme_couplings(&w, &w, DEFAULT_ENUMERATION_CAP, Tolerance::default()).unwrap_err();
        assert_eq!(err, Error::InstanceTooLarge { cells: 25, cap: 16 });
    }
}
