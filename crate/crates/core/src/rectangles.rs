//! Indicator costs of rectangle unions, minimal covers and null crosses.

use std::collections::VecDeque;

use crate::cost::CostMatrix;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::measure::SubsetMask;
use crate::scalar::{Scalar, Tolerance};
use crate::transport::{Coupling, TransportProblem};

/// How the rectangles of a family are combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Combine {
    /// `H = ∪ A_n × B_n`
    Union,
    /// `K = ∩ A_n × B_n`; the empty intersection is the whole of `X × Y`.
    Intersection,
}

/// An ordered finite family of rectangles `A_n × B_n ⊆ X × Y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RectangleFamily {
    x_len: usize,
    y_len: usize,
    rects: Vec<(SubsetMask, SubsetMask)>,
}

impl RectangleFamily {
    pub fn new(x_len: usize, y_len: usize, rects: Vec<(SubsetMask, SubsetMask)>) -> Result<Self> {
        for (a, b) in &rects {
            if a.len() != x_len {
                return Err(Error::DimensionMismatch {
                    context: "rectangle side A vs |X|",
                    expected: x_len,
                    found: a.len(),
                });
            }
            if b.len() != y_len {
                return Err(Error::DimensionMismatch {
                    context: "rectangle side B vs |Y|",
                    expected: y_len,
                    found: b.len(),
                });
            }
        }
        Ok(RectangleFamily { x_len, y_len, rects })
    }

    pub fn empty(x_len: usize, y_len: usize) -> Self {
        RectangleFamily { x_len, y_len, rects: Vec::new() }
    }

    pub fn x_len(&self) -> usize {
        self.x_len
    }

    pub fn y_len(&self) -> usize {
        self.y_len
    }

    pub fn rects(&self) -> &[(SubsetMask, SubsetMask)] {
        &self.rects
    }

    pub fn len(&self) -> usize {
        self.rects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rects.is_empty()
    }

    /// The first `k` rectangles.
    pub fn truncated(&self, k: usize) -> Self {
        RectangleFamily { x_len: self.x_len, y_len: self.y_len, rects: self.rects[..k.min(self.rects.len())].to_vec() }
    }

    pub fn contains(&self, mode: Combine, x: usize, y: usize) -> bool {
        let inside = |(a, b): &(SubsetMask, SubsetMask)| a.contains(x) && b.contains(y);
        match mode {
            Combine::Union => self.rects.iter().any(inside),
            Combine::Intersection => self.rects.iter().all(inside),
        }
    }

    /// Membership matrix of `H` or `K`.
    pub fn membership(&self, mode: Combine) -> Vec<Vec<bool>> {
        (0..self.x_len).map(|x| (0..self.y_len).map(|y| self.contains(mode, x, y)).collect()).collect()
    }
}

/// The 0/1 cost `1_H` or `1_K`.
pub fn indicator_cost<S: Scalar>(family: &RectangleFamily, mode: Combine) -> CostMatrix<S> {
    CostMatrix::new(indicator_matrix(&family.membership(mode)))
}

/// 0/1 matrix of an arbitrary membership table.
pub fn indicator_matrix<S: Scalar>(set: &[Vec<bool>]) -> Matrix<S> {
    let cols = set.first().map_or(0, Vec::len);
    Matrix::from_fn(set.len(), cols, |x, y| if set[x][y] { S::one() } else { S::zero() })
}

/// A cross `(A × Y) ∪ (X × B)` and its mass `μ(A) + ν(B)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cover<S> {
    pub a: SubsetMask,
    pub b: SubsetMask,
    pub value: S,
}

impl<S: Scalar> Cover<S> {
    /// Whether every point of `set` lies in the cross.
    pub fn covers(&self, set: &[Vec<bool>]) -> bool {
        set.iter().enumerate().all(|(x, row)| {
            self.a.contains(x) || row.iter().enumerate().all(|(y, &inside)| !inside || self.b.contains(y))
        })
    }
}

fn check_lengths<S>(family: &RectangleFamily, mu: &[S], nu: &[S]) -> Result<()> {
    if family.x_len != mu.len() {
        return Err(Error::DimensionMismatch { context: "family |X| vs mu", expected: mu.len(), found: family.x_len });
    }
    if family.y_len != nu.len() {
        return Err(Error::DimensionMismatch { context: "family |Y| vs nu", expected: nu.len(), found: family.y_len });
    }
    Ok(())
}

/// Minimum of `μ(A) + ν(B)` over crosses containing `H`.
pub fn min_cover<S: Scalar>(family: &RectangleFamily, mu: &[S], nu: &[S], tol: Tolerance) -> Result<Cover<S>> {
    check_lengths(family, mu, nu)?;
    Ok(min_cover_of_set(&family.membership(Combine::Union), mu, nu, tol))
}

/// Weighted bipartite vertex cover by max-flow min-cut.
///
/// Nodes: source, `X`, `Y`, sink. Arcs source→x carry `μ(x)`, y→sink carry
/// `ν(y)`, and x→y for `(x, y) ∈ H` carry 2, which exceeds any finite cut
/// (the source arcs total 1). With `S` the residual-reachable set, the cover
/// is `A = X ∖ S` and `B = Y ∩ S`; points without any pair in `H` are dropped
/// from `A`.
pub fn min_cover_of_set<S: Scalar>(set: &[Vec<bool>], mu: &[S], nu: &[S], tol: Tolerance) -> Cover<S> {
    let (m, n) = (mu.len(), nu.len());
    let source = m + n;
    let sink = source + 1;
    let size = sink + 1;
    let mut cap = Matrix::<S>::zeros(size, size);
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); size];
    let mut link = |cap: &mut Matrix<S>, u: usize, v: usize, c: S| {
        cap[(u, v)] = c;
        adj[u].push(v);
        adj[v].push(u);
    };
    let big = S::from_i64(2);
    for (x, w) in mu.iter().enumerate() {
        link(&mut cap, source, x, w.clone());
    }
    for (y, w) in nu.iter().enumerate() {
        link(&mut cap, m + y, sink, w.clone());
    }
    for (x, row) in set.iter().enumerate() {
        for (y, &inside) in row.iter().enumerate() {
            if inside {
                link(&mut cap, x, m + y, big.clone());
            }
        }
    }

    let mut flow = S::zero();
    loop {
        let parent = residual_bfs(&cap, &adj, source, tol);
        if parent[sink].is_none() {
            let reachable: Vec<bool> = parent.iter().map(Option::is_some).collect();
            let has_pair: Vec<bool> = set.iter().map(|row| row.iter().any(|&b| b)).collect();
            let a = SubsetMask::from_bits((0..m).map(|x| !reachable[x] && has_pair[x]).collect());
            let b = SubsetMask::from_bits((0..n).map(|y| reachable[m + y]).collect());
            let value = a.mass(mu) + b.mass(nu);
            debug_assert!(tol.eq(&value, &flow));
            return Cover { a, b, value };
        }
        let mut path = Vec::new();
        let mut v = sink;
        while v != source {
            let u = parent[v].expect("on path");
            path.push((u, v));
            v = u;
        }
        let push = path.iter().map(|&(u, v)| cap[(u, v)].clone()).reduce(S::min_of).expect("nonempty path");
        for (u, v) in path {
            cap[(u, v)] = cap[(u, v)].clone() - push.clone();
            cap[(v, u)] = cap[(v, u)].clone() + push.clone();
        }
        flow = flow + push;
    }
}

/// BFS parents over arcs with positive residual capacity; `parent[source]`
/// is set to itself so reachability reads as `is_some`.
fn residual_bfs<S: Scalar>(cap: &Matrix<S>, adj: &[Vec<usize>], source: usize, tol: Tolerance) -> Vec<Option<usize>> {
    let mut parent = vec![None; adj.len()];
    parent[source] = Some(source);
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if parent[v].is_none() && tol.is_positive(&cap[(u, v)]) {
                parent[v] = Some(u);
                queue.push_back(v);
            }
        }
    }
    parent
}

/// Answer to the null-cross question for `H`.
#[derive(Debug, Clone, PartialEq)]
pub enum ArvesonOutcome<S> {
    /// `μ(A) = ν(B) = 0` and `H ⊆ (A × Y) ∪ (X × B)`.
    Null(Cover<S>),
    /// `α*(1_H) > 0`, with a coupling attaining it.
    NotNull { alpha_star: S, coupling: Coupling<S> },
}

/// Looks for a marginal-null cross containing `H`.
pub fn arveson_witness<S: Scalar>(
    family: &RectangleFamily,
    mu: &[S],
    nu: &[S],
    tol: Tolerance,
) -> Result<ArvesonOutcome<S>> {
    check_lengths(family, mu, nu)?;
    let cost = indicator_cost::<S>(family, Combine::Union);
    let report = TransportProblem::with_tolerance(cost.values(), mu, nu, tol)?.alpha_star()?;
    if tol.is_zero(&report.value) {
        let cover = min_cover(family, mu, nu, tol)?;
        debug_assert!(tol.is_zero(&cover.value));
        return Ok(ArvesonOutcome::Null(cover));
    }
    Ok(ArvesonOutcome::NotNull {
        alpha_star: report.value,
        coupling: report.coupling.expect("alpha_star returns a coupling"),
    })
}

/// The finite part of the truncation argument for `H = ∪_i A_i × B_i` cut
/// at `V_n = ∪_{i ≤ n} A_i × B_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncationReport<S> {
    pub n: usize,
    pub alpha_h: S,
    pub alpha_vn: S,
    pub beta_vn: S,
    /// `μ(∪_{i > n} A_i)`
    pub tail: S,
    pub eps: S,
    /// `β(1_{V_n}) + (α(1_{V_n}) − β(1_{V_n})) + tail`
    pub bound: S,
    pub tail_below_eps: bool,
    /// `α(1_H) ≤ bound`
    pub certified: bool,
}

pub fn truncation_duality<S: Scalar>(
    family: &RectangleFamily,
    mu: &[S],
    nu: &[S],
    n: usize,
    eps: S,
    tol: Tolerance,
) -> Result<TruncationReport<S>> {
    check_lengths(family, mu, nu)?;
    if n >= family.len() {
        return Err(Error::IndexOutOfRange { index: n, len: family.len() });
    }
    let h = indicator_cost::<S>(family, Combine::Union);
    let vn = indicator_cost::<S>(&family.truncated(n + 1), Combine::Union);
    let alpha_h = TransportProblem::with_tolerance(h.values(), mu, nu, tol)?.alpha()?.value;
    let vn_problem = TransportProblem::with_tolerance(vn.values(), mu, nu, tol)?;
    let alpha_vn = vn_problem.alpha()?.value;
    let beta_vn = vn_problem.beta()?.value;
    let tail_set = family.rects[n + 1..].iter().fold(SubsetMask::empty(family.x_len), |acc, (a, _)| acc.union(a));
    let tail = tail_set.mass(mu);
    let bound = beta_vn.clone() + (alpha_vn.clone() - beta_vn.clone()) + tail.clone();
    Ok(TruncationReport {
        n,
        tail_below_eps: tail < eps,
        certified: tol.le(&alpha_h, &bound),
        alpha_h,
        alpha_vn,
        beta_vn,
        tail,
        eps,
        bound,
    })
}
