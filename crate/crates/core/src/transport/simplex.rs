//! Primal network simplex on the complete bipartite transportation graph.
//!
//! Nodes `0..m` are rows (supplies μ) and `m..m+n` are columns (demands ν).
//! A basis is a spanning tree of `m + n − 1` cells. The start is the
//! north-west corner rule, which always yields a spanning tree, degenerate or
//! not. Pivoting follows Bland's rule on the cell index `i·n + j`: the
//! entering cell is the first one with negative reduced cost and the leaving
//! cell is the lowest-indexed blocking cell, which rules out cycling.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{Scalar, Tolerance};

/// An optimal basic solution with its node potentials.
#[derive(Debug, Clone)]
pub(crate) struct BasicSolution<S> {
    pub flow: Matrix<S>,
    /// Basic cells as `i·n + j`, sorted.
    pub basis: Vec<usize>,
    /// Row potentials, normalized so that `u[0] = 0`.
    pub u: Vec<S>,
    pub v: Vec<S>,
    pub pivots: usize,
}

const PIVOT_LIMIT: usize = 1_000_000;

struct Tree {
    /// `adj[node]` lists `(neighbour, cell)`.
    adj: Vec<Vec<(usize, usize)>>,
}

impl Tree {
    fn build(m: usize, n: usize, basis: &[usize]) -> Tree {
        let mut adj = vec![Vec::new(); m + n];
        for &cell in basis {
            let (i, j) = (cell / n, cell % n);
            adj[i].push((m + j, cell));
            adj[m + j].push((i, cell));
        }
        Tree { adj }
    }

    /// Parent links `(parent, cell)` of a BFS from `root`.
    fn parents(&self, root: usize) -> Vec<Option<(usize, usize)>> {
        let mut parent = vec![None; self.adj.len()];
        let mut seen = vec![false; self.adj.len()];
        let mut queue = std::collections::VecDeque::from([root]);
        seen[root] = true;
        while let Some(node) = queue.pop_front() {
            for &(next, cell) in &self.adj[node] {
                if !seen[next] {
                    seen[next] = true;
                    parent[next] = Some((node, cell));
                    queue.push_back(next);
                }
            }
        }
        parent
    }
}

fn potentials<S: Scalar>(cost: &Matrix<S>, tree: &Tree, m: usize, n: usize) -> (Vec<S>, Vec<S>) {
    let mut pot: Vec<Option<S>> = vec![None; m + n];
    pot[0] = Some(S::zero());
    let mut stack = vec![0usize];
    while let Some(node) = stack.pop() {
        let here = pot[node].clone().expect("visited nodes carry a potential");
        for &(next, cell) in &tree.adj[node] {
            if pot[next].is_none() {
                let c = cost[(cell / n, cell % n)].clone();
                pot[next] = Some(c - here.clone());
                stack.push(next);
            }
        }
    }
    let mut pot: Vec<S> = pot.into_iter().map(|p| p.expect("spanning tree reaches every node")).collect();
    let v = pot.split_off(m);
    (pot, v)
}

/// North-west corner rule: a staircase path of exactly `m + n − 1` cells.
fn north_west_corner<S: Scalar>(mu: &[S], nu: &[S], tol: Tolerance) -> (Matrix<S>, Vec<usize>) {
    let (m, n) = (mu.len(), nu.len());
    let mut flow = Matrix::zeros(m, n);
    let mut basis = Vec::with_capacity(m + n - 1);
    let mut supply = mu.to_vec();
    let mut demand = nu.to_vec();
    let (mut i, mut j) = (0, 0);
    loop {
        let q = S::min_of(supply[i].clone(), demand[j].clone());
        let q = if q < S::zero() { S::zero() } else { q };
        flow[(i, j)] = q.clone();
        basis.push(i * n + j);
        supply[i] = supply[i].clone() - q.clone();
        demand[j] = demand[j].clone() - q;
        if i == m - 1 && j == n - 1 {
            break;
        }
        if j == n - 1 || (i < m - 1 && tol.is_zero(&supply[i])) {
            i += 1;
        } else {
            j += 1;
        }
    }
    basis.sort_unstable();
    (flow, basis)
}

/// Minimizes `Σ P c` over couplings of `mu` and `nu`. Inputs are assumed validated.
pub(crate) fn minimize<S: Scalar>(cost: &Matrix<S>, mu: &[S], nu: &[S], tol: Tolerance) -> Result<BasicSolution<S>> {
    let (m, n) = (mu.len(), nu.len());
    let (mut flow, mut basis) = north_west_corner(mu, nu, tol);
    let mut in_basis = vec![false; m * n];
    for &cell in &basis {
        in_basis[cell] = true;
    }

    let mut pivots = 0;
    loop {
        let tree = Tree::build(m, n, &basis);
        let (u, v) = potentials(cost, &tree, m, n);

        let entering = (0..m * n).find(|&cell| {
            if in_basis[cell] {
                return false;
            }
            let (i, j) = (cell / n, cell % n);
            let reduced = cost[(i, j)].clone() - u[i].clone() - v[j].clone();
            tol.is_negative(&reduced)
        });
        let Some(entering) = entering else {
            return Ok(BasicSolution { flow, basis, u, v, pivots });
        };
        if pivots >= PIVOT_LIMIT {
            return Err(Error::InvalidParameter(format!("network simplex exceeded {PIVOT_LIMIT} pivots")));
        }
        pivots += 1;

        // The tree path from column j back to row i closes a cycle with the
        // entering cell; walking it from row i, the signs alternate −, +, −, …
        let (ei, ej) = (entering / n, entering % n);
        let parent = tree.parents(m + ej);
        let mut cycle = Vec::new();
        let mut node = ei;
        while node != m + ej {
            let (up, cell) = parent[node].expect("tree is connected");
            cycle.push(cell);
            node = up;
        }
        debug_assert!(cycle.len() % 2 == 1);

        let mut leaving: Option<usize> = None;
        let mut theta = S::zero();
        for &cell in cycle.iter().step_by(2) {
            let f = &flow[(cell / n, cell % n)];
            let better = match leaving {
                None => true,
                Some(best) => {
                    if tol.eq(f, &theta) {
                        cell < best
                    } else {
                        *f < theta
                    }
                }
            };
            if better {
                theta = f.clone();
                leaving = Some(cell);
            }
        }
        let leaving = leaving.expect("cycle has a minus edge");

        for (k, &cell) in cycle.iter().enumerate() {
            let idx = (cell / n, cell % n);
            flow[idx] = if k % 2 == 0 { flow[idx].clone() - theta.clone() } else { flow[idx].clone() + theta.clone() };
        }
        flow[(leaving / n, leaving % n)] = S::zero();
        flow[(ei, ej)] = theta;

        in_basis[leaving] = false;
        in_basis[entering] = true;
        let pos = basis.iter().position(|&c| c == leaving).expect("leaving cell is basic");
        basis.remove(pos);
        let ins = basis.partition_point(|&c| c < entering);
        basis.insert(ins, entering);
    }
}
