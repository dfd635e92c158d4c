//! Finite probability spaces and the measure-theoretic primitives built on them.
//!
//! Every σ-field here is the power set of a finite point set, so a measure is
//! just a weight vector and a measurable set is a [`SubsetMask`]. Countable
//! objects (partitions, set sequences) are represented by finite truncations;
//! a partition may designate one *null cell* standing in for the exceptional
//! set `A₀` on which no oscillation control is required.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{self, Scalar, Tolerance};

/// Membership vector of a subset of a finite space.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubsetMask {
    bits: Vec<bool>,
}

impl SubsetMask {
    pub fn empty(len: usize) -> Self {
        SubsetMask { bits: vec![false; len] }
    }

    pub fn full(len: usize) -> Self {
        SubsetMask { bits: vec![true; len] }
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        SubsetMask { bits }
    }

    pub fn from_indices(len: usize, indices: &[usize]) -> Result<Self> {
        let mut bits = vec![false; len];
        for &i in indices {
            *bits.get_mut(i).ok_or(Error::IndexOutOfRange { index: i, len })? = true;
        }
        Ok(SubsetMask { bits })
    }

    pub fn singleton(len: usize, index: usize) -> Result<Self> {
        Self::from_indices(len, &[index])
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        !self.bits.iter().any(|&b| b)
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.bits.get(i).copied().unwrap_or(false)
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i)
    }

    pub fn union(&self, other: &SubsetMask) -> SubsetMask {
        debug_assert_eq!(self.len(), other.len());
        SubsetMask { bits: self.bits.iter().zip(&other.bits).map(|(a, b)| *a || *b).collect() }
    }

    pub fn intersection(&self, other: &SubsetMask) -> SubsetMask {
        debug_assert_eq!(self.len(), other.len());
        SubsetMask { bits: self.bits.iter().zip(&other.bits).map(|(a, b)| *a && *b).collect() }
    }

    pub fn complement(&self) -> SubsetMask {
        SubsetMask { bits: self.bits.iter().map(|b| !b).collect() }
    }

    pub fn is_subset_of(&self, other: &SubsetMask) -> bool {
        self.bits.iter().zip(&other.bits).all(|(a, b)| !*a || *b)
    }

    /// `Σ_{i ∈ self} weights[i]`.
    pub fn mass<S: Scalar>(&self, weights: &[S]) -> S {
        scalar::sum(self.indices().map(|i| weights[i].clone()))
    }
}

/// A finite probability space `(X, 2^X, μ)` with an optional metric.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilitySpace<S> {
    labels: Vec<String>,
    weights: Vec<S>,
    metric: Option<Matrix<S>>,
}

impl<S: Scalar> ProbabilitySpace<S> {
    /// Builds a space and rejects it unless [`validate_space`] reports it valid.
    pub fn new(labels: Vec<String>, weights: Vec<S>, metric: Option<Matrix<S>>, tol: Tolerance) -> Result<Self> {
        let space = Self::from_parts_unchecked(labels, weights, metric)?;
        let report = validate_space(&space, tol);
        if let Some(err) = report.first_error() {
            return Err(err);
        }
        Ok(space)
    }

    /// Builds a space checking only that the parts have matching lengths.
    /// Use [`validate_space`] to diagnose the probability and metric axioms.
    pub fn from_parts_unchecked(labels: Vec<String>, weights: Vec<S>, metric: Option<Matrix<S>>) -> Result<Self> {
        if labels.len() != weights.len() {
            return Err(Error::DimensionMismatch {
                context: "labels vs weights",
                expected: labels.len(),
                found: weights.len(),
            });
        }
        if let Some(m) = &metric {
            if m.shape() != (weights.len(), weights.len()) {
                return Err(Error::DimensionMismatch {
                    context: "metric size",
                    expected: weights.len(),
                    found: m.rows().max(m.cols()),
                });
            }
        }
        Ok(ProbabilitySpace { labels, weights, metric })
    }

    /// Space with labels `"0", "1", …`.
    pub fn from_weights(weights: Vec<S>, tol: Tolerance) -> Result<Self> {
        let labels = (0..weights.len()).map(|i| i.to_string()).collect();
        Self::new(labels, weights, None, tol)
    }

    pub fn uniform(n: usize) -> Self {
        assert!(n > 0, "uniform space needs at least one point");
        ProbabilitySpace {
            labels: (0..n).map(|i| i.to_string()).collect(),
            weights: vec![S::one() / S::from_i64(n as i64); n],
            metric: None,
        }
    }

    pub fn with_metric(mut self, metric: Matrix<S>, tol: Tolerance) -> Result<Self> {
        self.metric = Some(metric);
        Self::new(self.labels, self.weights, self.metric, tol)
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn weights(&self) -> &[S] {
        &self.weights
    }

    pub fn metric(&self) -> Option<&Matrix<S>> {
        self.metric.as_ref()
    }

    pub fn require_metric(&self) -> Result<&Matrix<S>> {
        self.metric.as_ref().ok_or(Error::MissingMetric)
    }

    pub fn mass(&self, set: &SubsetMask) -> S {
        set.mass(&self.weights)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MetricViolation {
    NonzeroDiagonal {
        i: usize,
    },
    Negative {
        i: usize,
        j: usize,
    },
    Asymmetric {
        i: usize,
        j: usize,
    },
    /// `d(i,k) > d(i,j) + d(j,k)`.
    Triangle {
        i: usize,
        j: usize,
        k: usize,
    },
}

/// Diagnostics from [`validate_space`].
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport<S> {
    /// `Σ weights − 1`.
    pub normalization_defect: S,
    pub negative_weights: Vec<usize>,
    pub metric_violations: Vec<MetricViolation>,
    pub empty: bool,
    tol: Tolerance,
}

impl<S: Scalar> ValidationReport<S> {
    pub fn is_valid(&self) -> bool {
        self.first_error().is_none()
    }

    pub fn first_error(&self) -> Option<Error> {
        if self.empty {
            return Some(Error::InfeasibleMarginals { which: "space", total: "empty".into() });
        }
        if let Some(&i) = self.negative_weights.first() {
            return Some(Error::InfeasibleMarginals { which: "space", total: format!("negative weight at point {i}") });
        }
        if !self.tol.is_zero(&self.normalization_defect) {
            return Some(Error::InfeasibleMarginals {
                which: "space",
                total: (S::one() + self.normalization_defect.clone()).render(),
            });
        }
        self.metric_violations.first().map(|v| Error::InvalidMetric(format!("{v:?}")))
    }
}

/// Checks normalization, nonnegativity and the metric axioms, listing every
/// offending index, pair or triple.
pub fn validate_space<S: Scalar>(space: &ProbabilitySpace<S>, tol: Tolerance) -> ValidationReport<S> {
    let total = scalar::sum(space.weights.iter().cloned());
    let negative_weights =
        space.weights.iter().enumerate().filter(|(_, w)| tol.is_negative(*w)).map(|(i, _)| i).collect();
    let metric_violations = space.metric.as_ref().map(|d| metric_violations(d, tol)).unwrap_or_default();
    ValidationReport {
        normalization_defect: total - S::one(),
        negative_weights,
        metric_violations,
        empty: space.is_empty(),
        tol,
    }
}

pub fn metric_violations<S: Scalar>(d: &Matrix<S>, tol: Tolerance) -> Vec<MetricViolation> {
    let n = d.rows();
    let mut out = Vec::new();
    for i in 0..n {
        if !tol.is_zero(&d[(i, i)]) {
            out.push(MetricViolation::NonzeroDiagonal { i });
        }
        for j in 0..n {
            if tol.is_negative(&d[(i, j)]) {
                out.push(MetricViolation::Negative { i, j });
            }
            if i < j && !tol.eq(&d[(i, j)], &d[(j, i)]) {
                out.push(MetricViolation::Asymmetric { i, j });
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if !tol.le(&d[(i, k)], &(d[(i, j)].clone() + d[(j, k)].clone())) {
                    out.push(MetricViolation::Triangle { i, j, k });
                }
            }
        }
    }
    out
}

/// Shortest-path closure of a nonnegative matrix: symmetrize by the smaller
/// entry, zero the diagonal and run Floyd–Warshall. The result always passes
/// the metric axioms. Never applied implicitly.
pub fn shortest_path_closure<S: Scalar>(raw: &Matrix<S>) -> Result<Matrix<S>> {
    let n = raw.rows();
    if raw.cols() != n {
        return Err(Error::DimensionMismatch {
            context: "metric generator must be square",
            expected: n,
            found: raw.cols(),
        });
    }
    if raw.values().iter().any(|v| *v < S::zero()) {
        return Err(Error::InvalidMetric("generator has negative entries".into()));
    }
    let mut d =
        Matrix::from_fn(
            n,
            n,
            |i, j| {
                if i == j {
                    S::zero()
                } else {
                    S::min_of(raw[(i, j)].clone(), raw[(j, i)].clone())
                }
            },
        );
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[(i, k)].clone() + d[(k, j)].clone();
                if via < d[(i, j)] {
                    d[(i, j)] = via;
                }
            }
        }
    }
    Ok(d)
}

/// One block of a [`Partition`].
#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub members: SubsetMask,
    /// A designated point of the cell (`x_i`); absent only for the null cell
    /// or when the caller has not chosen one yet.
    pub representative: Option<usize>,
}

/// Finite partition of a point set, optionally with a designated null cell `A₀`.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    cells: Vec<Cell>,
    null_cell: Option<usize>,
    cell_of: Vec<usize>,
}

impl Partition {
    /// Validates disjointness, coverage and representative membership.
    pub fn new(cells: Vec<Cell>, null_cell: Option<usize>) -> Result<Self> {
        let n = cells.first().map_or(0, |c| c.members.len());
        if let Some(k) = null_cell {
            if k >= cells.len() {
                return Err(Error::InvalidPartition(format!("null cell index {k} out of range")));
            }
        }
        let mut cell_of = vec![usize::MAX; n];
        for (ci, cell) in cells.iter().enumerate() {
            if cell.members.len() != n {
                return Err(Error::InvalidPartition(format!(
                    "cell {ci} has length {} but the space has {n} points",
                    cell.members.len()
                )));
            }
            for x in cell.members.indices() {
                if cell_of[x] != usize::MAX {
                    return Err(Error::InvalidPartition(format!("point {x} lies in cells {} and {ci}", cell_of[x])));
                }
                cell_of[x] = ci;
            }
            if let Some(r) = cell.representative {
                if !cell.members.contains(r) {
                    return Err(Error::InvalidPartition(format!("representative {r} of cell {ci} is not a member")));
                }
            }
        }
        if let Some(x) = cell_of.iter().position(|&c| c == usize::MAX) {
            return Err(Error::InvalidPartition(format!("point {x} is in no cell")));
        }
        Ok(Partition { cells, null_cell, cell_of })
    }

    /// Every point in its own cell, represented by itself.
    pub fn singletons(n: usize) -> Self {
        let cells = (0..n)
            .map(|i| Cell { members: SubsetMask::singleton(n, i).expect("index in range"), representative: Some(i) })
            .collect();
        Partition::new(cells, None).expect("singleton partition is valid")
    }

    /// The whole space as one cell.
    pub fn single_cell(n: usize, representative: usize) -> Result<Self> {
        Partition::new(vec![Cell { members: SubsetMask::full(n), representative: Some(representative) }], None)
    }

    /// Partition from a cell label per point. Labels need not be contiguous;
    /// cells are ordered by first appearance and represented by their first point.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut order: Vec<usize> = Vec::new();
        for &l in labels {
            if !order.contains(&l) {
                order.push(l);
            }
        }
        let cells = order
            .iter()
            .map(|&l| {
                let members = SubsetMask::from_bits(labels.iter().map(|&m| m == l).collect());
                let representative = members.indices().next();
                Cell { members, representative }
            })
            .collect();
        Partition::new(cells, None).expect("label partition is valid")
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn null_cell(&self) -> Option<usize> {
        self.null_cell
    }

    pub fn is_null_cell(&self, cell: usize) -> bool {
        self.null_cell == Some(cell)
    }

    pub fn point_count(&self) -> usize {
        self.cell_of.len()
    }

    /// Index of the cell containing point `x`.
    pub fn cell_of(&self, x: usize) -> usize {
        self.cell_of[x]
    }

    pub fn cell_masses<S: Scalar>(&self, weights: &[S]) -> Vec<S> {
        self.cells.iter().map(|c| c.members.mass(weights)).collect()
    }
}

/// `μ(· | cell)` as a weight vector over the whole space.
pub fn conditional_measure<S: Scalar>(weights: &[S], cell: &SubsetMask) -> Result<Vec<S>> {
    if cell.len() != weights.len() {
        return Err(Error::DimensionMismatch {
            context: "cell mask vs space",
            expected: weights.len(),
            found: cell.len(),
        });
    }
    let mass = cell.mass(weights);
    if mass <= S::zero() {
        return Err(Error::ZeroMassCell);
    }
    Ok(weights
        .iter()
        .enumerate()
        .map(|(i, w)| if cell.contains(i) { w.clone() / mass.clone() } else { S::zero() })
        .collect())
}

/// Image measure `μ ∘ map⁻¹` on a target space of `target_len` points.
pub fn pushforward<S: Scalar>(weights: &[S], map: &[usize], target_len: usize) -> Result<Vec<S>> {
    if map.len() != weights.len() {
        return Err(Error::DimensionMismatch {
            context: "map must be total on the source",
            expected: weights.len(),
            found: map.len(),
        });
    }
    let mut out = vec![S::zero(); target_len];
    for (w, &y) in weights.iter().zip(map) {
        let slot = out.get_mut(y).ok_or(Error::IndexOutOfRange { index: y, len: target_len })?;
        *slot = slot.clone() + w.clone();
    }
    Ok(out)
}

/// Mass of `∪_{j > from_index} sets[j]`.
///
/// This is the finite-truncation surrogate of the tail union whose
/// decreasing intersection defines `limsup_n A_n`; the genuine limsup needs
/// the whole infinite sequence. An index at or past the end gives the empty
/// tail and mass zero.
pub fn limsup_mass<S: Scalar>(weights: &[S], sets: &[SubsetMask], from_index: usize) -> S {
    let mut tail = SubsetMask::empty(weights.len());
    for set in sets.iter().skip(from_index + 1) {
        tail = tail.union(set);
    }
    tail.mass(weights)
}
