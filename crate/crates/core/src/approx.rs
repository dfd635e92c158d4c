//! Approximation operators that move duality from simple costs to general ones.
//!
//! * [`lipschitz_infconv`] replaces `c` by the largest function below it that
//!   is `n`-Lipschitz in `x` uniformly in `y`.
//! * [`partition_discretize`] freezes `c(·, y)` on the cells of a partition,
//!   producing a cost that is measurable for the coarse σ-field.
//! * [`beta_star_limit_check`] verifies that `β*` is continuous along an
//!   increasing sequence of costs.

use crate::cost::{CostMatrix, PotentialPair, Side};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::measure::{Cell, Partition, ProbabilitySpace, SubsetMask};
use crate::scalar::{Scalar, Tolerance};
use crate::transport::TransportProblem;

fn check_rows<S: Scalar>(c: &CostMatrix<S>, n: usize, context: &'static str) -> Result<()> {
    if c.rows() != n {
        return Err(Error::DimensionMismatch { context, expected: n, found: c.rows() });
    }
    Ok(())
}

fn positive_parameter<S: Scalar>(n: &S, name: &str) -> Result<()> {
    if *n <= S::zero() {
        return Err(Error::InvalidParameter(format!("{name} must be positive, got {}", n.render())));
    }
    Ok(())
}

/// `c_n(x, y) = min_{z ∈ D} { n·d(x, z) + c(z, y) }` over the anchor set `D`
/// (all points when `anchors` is `None`).
///
/// The result satisfies `|c_n(x,y) − c_n(z,y)| ≤ n·d(x,z)` and, on anchor
/// rows, `c_n ≤ c`. It is nondecreasing in `n`.
pub fn lipschitz_infconv<S: Scalar>(
    c: &CostMatrix<S>,
    n: &S,
    space_x: &ProbabilitySpace<S>,
    anchors: Option<&SubsetMask>,
) -> Result<CostMatrix<S>> {
    infconv_impl(c, n, space_x, anchors, None)
}

/// Infimal convolution of the shifted cost `(x, y) ↦ c(x, y) − f(x)`:
/// `c_n(x, y) = min_z { n·d(x, z) + c(z, y) − f(z) }`. As `n` grows the
/// stages increase to `c − f`, reaching it once `n` exceeds the Lipschitz
/// modulus of `c − f` in `x`.
pub fn variant_infconv_shifted<S: Scalar>(
    c: &CostMatrix<S>,
    n: &S,
    space_x: &ProbabilitySpace<S>,
    f: &[S],
) -> Result<CostMatrix<S>> {
    infconv_impl(c, n, space_x, None, Some(f))
}

fn infconv_impl<S: Scalar>(
    c: &CostMatrix<S>,
    n: &S,
    space_x: &ProbabilitySpace<S>,
    anchors: Option<&SubsetMask>,
    shift: Option<&[S]>,
) -> Result<CostMatrix<S>> {
    let d = space_x.require_metric()?;
    check_rows(c, space_x.len(), "cost rows vs space")?;
    positive_parameter(n, "n")?;
    let all;
    let anchors = match anchors {
        Some(a) => {
            if a.len() != space_x.len() {
                return Err(Error::DimensionMismatch {
                    context: "anchor mask vs space",
                    expected: space_x.len(),
                    found: a.len(),
                });
            }
            a
        }
        None => {
            all = SubsetMask::full(space_x.len());
            &all
        }
    };
    if anchors.is_empty() {
        return Err(Error::EmptyAnchorSet);
    }
    if let Some(f) = shift {
        if f.len() != c.rows() {
            return Err(Error::DimensionMismatch {
                context: "shift potential vs cost rows",
                expected: c.rows(),
                found: f.len(),
            });
        }
    }
    let z_set: Vec<usize> = anchors.indices().collect();
    let base = match shift {
        Some(f) => shift_rows(c.values(), f),
        None => c.values().clone(),
    };
    let out = Matrix::from_fn(c.rows(), c.cols(), |x, y| {
        z_set
            .iter()
            .map(|&z| n.clone() * d[(x, z)].clone() + base[(z, y)].clone())
            .reduce(S::min_of)
            .expect("anchor set is nonempty")
    });
    Ok(CostMatrix::new(out))
}

/// `(x, y) ↦ c(x, y) − f(x)`.
pub fn shift_rows<S: Scalar>(c: &Matrix<S>, f: &[S]) -> Matrix<S> {
    Matrix::from_fn(c.rows(), c.cols(), |x, y| c[(x, y)].clone() - f[x].clone())
}

/// `f(x) = min_y { c(x, y) − g(y) }`, the largest `f` with `f ⊕ g ≤ c`.
pub fn row_minimum_potential<S: Scalar>(c: &Matrix<S>, g: &[S]) -> Vec<S> {
    (0..c.rows())
        .map(|x| (0..c.cols()).map(|y| c[(x, y)].clone() - g[y].clone()).reduce(S::min_of).unwrap_or_else(S::zero))
        .collect()
}

/// `sup_y |c(x,y) − c(z,y)|`.
pub fn row_distance<S: Scalar>(c: &Matrix<S>, x: usize, z: usize) -> S {
    (0..c.cols()).map(|y| (c[(x, y)].clone() - c[(z, y)].clone()).abs()).fold(S::zero(), S::max_of)
}

/// Smallest `L` with `sup_y |c(x,y) − c(z,y)| ≤ L·d(x,z)` for all `x, z`.
/// `None` if two points at distance zero have different rows.
pub fn lipschitz_modulus<S: Scalar>(c: &Matrix<S>, d: &Matrix<S>) -> Option<S> {
    let mut best = S::zero();
    for x in 0..c.rows() {
        for z in x + 1..c.rows() {
            let gap = row_distance(c, x, z);
            if d[(x, z)] > S::zero() {
                best = S::max_of(best, gap / d[(x, z)].clone());
            } else if gap > S::zero() {
                return None;
            }
        }
    }
    Some(best)
}

/// Checks `sup_y |c(x,y) − c(z,y)| ≤ u·d(x,z)` on every pair.
pub fn check_uniform_lipschitz<S: Scalar>(c: &Matrix<S>, d: &Matrix<S>, u: &S, tol: Tolerance) -> Result<()> {
    for x in 0..c.rows() {
        for z in x + 1..c.rows() {
            let gap = row_distance(c, x, z);
            let bound = u.clone() * d[(x, z)].clone();
            if !tol.le(&gap, &bound) {
                return Err(Error::LipschitzBoundViolated { x, z, gap: gap.render(), bound: bound.render() });
            }
        }
    }
    Ok(())
}

/// `c₀(x, y) = c(x, y)` on the null cell and `c(x_i, y)` on cell `A_i`.
pub fn partition_discretize<S: Scalar>(c: &CostMatrix<S>, partition: &Partition) -> Result<CostMatrix<S>> {
    check_rows(c, partition.point_count(), "cost rows vs partition")?;
    let mut source_row = vec![0usize; c.rows()];
    for (ci, cell) in partition.cells().iter().enumerate() {
        let rep = if partition.is_null_cell(ci) {
            None
        } else {
            Some(cell.representative.ok_or(Error::MissingRepresentative { cell: ci })?)
        };
        for x in cell.members.indices() {
            source_row[x] = rep.unwrap_or(x);
        }
    }
    let vals = c.values();
    Ok(CostMatrix::new(Matrix::from_fn(c.rows(), c.cols(), |x, y| vals[(source_row[x], y)].clone())))
}

/// Per-cell oscillation `max_{x,z ∈ A_i} sup_y |c(x,y) − c(z,y)|`.
#[derive(Debug, Clone, PartialEq)]
pub struct Oscillation<S> {
    /// Indexed like the partition's cells; `None` for the null cell.
    pub per_cell: Vec<Option<S>>,
}

impl<S: Scalar> Oscillation<S> {
    /// Largest oscillation over the non-null cells (zero if there are none).
    pub fn max(&self) -> S {
        self.per_cell.iter().flatten().cloned().fold(S::zero(), S::max_of)
    }

    /// The partition meets the oscillation condition at level `eps`.
    pub fn satisfies(&self, eps: &S, tol: Tolerance) -> bool {
        self.per_cell.iter().flatten().all(|o| tol.le(o, eps))
    }
}

pub fn oscillation<S: Scalar>(c: &CostMatrix<S>, partition: &Partition) -> Result<Oscillation<S>> {
    check_rows(c, partition.point_count(), "cost rows vs partition")?;
    let per_cell = partition
        .cells()
        .iter()
        .enumerate()
        .map(|(ci, cell)| {
            if partition.is_null_cell(ci) {
                return None;
            }
            let members: Vec<usize> = cell.members.indices().collect();
            let mut worst = S::zero();
            for (k, &x) in members.iter().enumerate() {
                for &z in &members[k + 1..] {
                    worst = S::max_of(worst, row_distance(c.values(), x, z));
                }
            }
            Some(worst)
        })
        .collect();
    Ok(Oscillation { per_cell })
}

/// Greedy partition into cells of diameter `< eps / u`, which under the
/// uniform bound `sup_y |c(x,y) − c(z,y)| ≤ u·d(x,z)` forces every cell
/// oscillation below `eps`.
///
/// Seeds are chosen farthest-point first (starting at point 0, ties to the
/// lowest index). Each seed's cell absorbs unassigned points in order of
/// distance to the seed while the cell diameter stays below the radius. The
/// seed is the cell representative and there is no null cell.
pub fn find_star_partition<S: Scalar>(
    c: &CostMatrix<S>,
    eps: &S,
    space_x: &ProbabilitySpace<S>,
    u: &S,
    tol: Tolerance,
) -> Result<Partition> {
    let d = space_x.require_metric()?;
    check_rows(c, space_x.len(), "cost rows vs space")?;
    positive_parameter(eps, "eps")?;
    positive_parameter(u, "lipschitz bound")?;
    check_uniform_lipschitz(c.values(), d, u, tol)?;

    let n = space_x.len();
    let radius = eps.clone() / u.clone();
    let mut assigned = vec![false; n];
    let mut seeds: Vec<usize> = Vec::new();
    let mut cells = Vec::new();

    while let Some(seed) = next_seed(d, &assigned, &seeds) {
        seeds.push(seed);
        assigned[seed] = true;
        let mut members = vec![seed];
        let mut candidates: Vec<usize> = (0..n).filter(|&x| !assigned[x]).collect();
        candidates.sort_by(|&a, &b| {
            d[(seed, a)].partial_cmp(&d[(seed, b)]).unwrap_or(std::cmp::Ordering::Equal).then(a.cmp(&b))
        });
        for x in candidates {
            if members.iter().all(|&m| d[(x, m)] < radius) {
                members.push(x);
                assigned[x] = true;
            }
        }
        let mut mask = SubsetMask::empty(n);
        for &m in &members {
            mask = mask.union(&SubsetMask::singleton(n, m)?);
        }
        cells.push(Cell { members: mask, representative: Some(seed) });
    }
    Partition::new(cells, None)
}

fn next_seed<S: Scalar>(d: &Matrix<S>, assigned: &[bool], seeds: &[usize]) -> Option<usize> {
    let mut best: Option<(usize, S)> = None;
    for x in (0..assigned.len()).filter(|&x| !assigned[x]) {
        let gap = seeds.iter().map(|&s| d[(x, s)].clone()).reduce(S::min_of).unwrap_or_else(S::zero);
        if best.as_ref().is_none_or(|(_, b)| gap > *b) {
            best = Some((x, gap));
        }
    }
    best.map(|(x, _)| x)
}

/// `h = c − (f ⊕ g)` for a feasible lower pair. The result is nonnegative and
/// `α(h) = α(c) − μ(f) − ν(g)`.
pub fn normalize_cost<S: Scalar>(c: &CostMatrix<S>, lower: &PotentialPair<S>, tol: Tolerance) -> Result<CostMatrix<S>> {
    if lower.side != Side::Lower {
        return Err(Error::InvalidParameter("normalization needs a lower potential pair".into()));
    }
    lower.check_feasible(c.values(), tol)?;
    let h = Matrix::from_fn(c.rows(), c.cols(), |x, y| {
        let v = c.at(x, y).clone() - lower.at(x, y);
        // Clamp float round-off; exact mode is already nonnegative.
        if v < S::zero() {
            S::zero()
        } else {
            v
        }
    });
    let zero = PotentialPair::zeros(c.rows(), c.cols(), Side::Lower);
    CostMatrix::with_bounds(h, Some(zero), None, tol)
}

/// An increasing sequence of costs below a base cost.
#[derive(Debug, Clone, PartialEq)]
pub struct ApproximantSequence<S> {
    base: CostMatrix<S>,
    stages: Vec<(S, CostMatrix<S>)>,
}

impl<S: Scalar> ApproximantSequence<S> {
    /// Validates `c_1 ≤ c_2 ≤ … ≤ base` entrywise.
    pub fn new(base: CostMatrix<S>, stages: Vec<(S, CostMatrix<S>)>, tol: Tolerance) -> Result<Self> {
        for (k, (_, stage)) in stages.iter().enumerate() {
            if stage.values().shape() != base.values().shape() {
                return Err(Error::DimensionMismatch {
                    context: "stage shape vs base",
                    expected: base.rows() * base.cols(),
                    found: stage.rows() * stage.cols(),
                });
            }
            let next = stages.get(k + 1).map_or(&base, |(_, s)| s);
            for x in 0..base.rows() {
                for y in 0..base.cols() {
                    if !tol.le(stage.at(x, y), next.at(x, y)) {
                        return Err(Error::NotMonotone { stage: k, x, y });
                    }
                }
            }
        }
        Ok(ApproximantSequence { base, stages })
    }

    /// Stages `lipschitz_infconv(c, n)` for each parameter.
    pub fn from_infconv(
        c: &CostMatrix<S>,
        space_x: &ProbabilitySpace<S>,
        params: &[S],
        tol: Tolerance,
    ) -> Result<Self> {
        let stages = params
            .iter()
            .map(|n| Ok((n.clone(), lipschitz_infconv(c, n, space_x, None)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(c.clone(), stages, tol)
    }

    pub fn base(&self) -> &CostMatrix<S> {
        &self.base
    }

    pub fn stages(&self) -> &[(S, CostMatrix<S>)] {
        &self.stages
    }
}

/// Outcome of [`beta_star_limit_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct LimitCheck<S> {
    /// `β*(c_n)` per stage.
    pub stage_values: Vec<S>,
    /// `β*(c)`.
    pub base_value: S,
    /// `β*(c) − β*(c_last)`; zero when the last stage has reached the base.
    pub final_gap: S,
    pub monotone: bool,
    pub last_stage_equals_base: bool,
}

impl<S: Scalar> LimitCheck<S> {
    /// Monotone values, and an exact meet whenever the stages reach the base.
    pub fn converged(&self, tol: Tolerance) -> bool {
        self.monotone && (!self.last_stage_equals_base || tol.is_zero(&self.final_gap))
    }
}

/// Computes `β*(c_n)` along the sequence and compares with `β*(c)`.
pub fn beta_star_limit_check<S: Scalar>(
    sequence: &ApproximantSequence<S>,
    mu: &[S],
    nu: &[S],
    tol: Tolerance,
) -> Result<LimitCheck<S>> {
    let beta_star = |c: &CostMatrix<S>| -> Result<S> {
        Ok(TransportProblem::with_tolerance(c.values(), mu, nu, tol)?.beta_star()?.value)
    };
    let stage_values = sequence.stages.iter().map(|(_, c)| beta_star(c)).collect::<Result<Vec<_>>>()?;
    let base_value = beta_star(&sequence.base)?;
    let monotone = stage_values
        .iter()
        .chain(std::iter::once(&base_value))
        .collect::<Vec<_>>()
        .windows(2)
        .all(|w| tol.le(w[0], w[1]));
    let last = stage_values.last().cloned().unwrap_or_else(|| base_value.clone());
    let last_stage_equals_base =
        sequence.stages.last().is_none_or(|(_, c)| c.values().max_abs_diff(sequence.base.values()) <= tol.slack());
    Ok(LimitCheck { final_gap: base_value.clone() - last, stage_values, base_value, monotone, last_stage_equals_base })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn z(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    fn line(points: &[Rational]) -> ProbabilitySpace<Rational> {
        let n = points.len();
        let d = Matrix::from_fn(n, n, |i, j| (points[i].clone() - points[j].clone()).abs());
        let labels = (0..n).map(|i| i.to_string()).collect();
        ProbabilitySpace::new(labels, vec![q(1, n as i64); n], Some(d), Tolerance::EXACT).unwrap()
    }

    fn column(profile: &[Rational], cols: usize) -> CostMatrix<Rational> {
        CostMatrix::new(Matrix::from_fn(profile.len(), cols, |x, _| profile[x].clone()))
    }

    #[test]
    fn infconv_of_constant_is_constant() {
        let sp = line(&[z(0), z(1), z(3)]);
        let c = CostMatrix::constant(3, 2, q(5, 2));
        for n in [q(1, 3), z(1), z(10)] {
            assert_eq!(lipschitz_infconv(&c, &n, &sp, None).unwrap(), c);
        }
    }

    #[test]
    fn one_lipschitz_profile_is_a_fixed_point() {
        let pts = [z(0), z(2), z(5), z(6)];
        let sp = line(&pts);
        let c = column(&[z(0), z(2), z(5), z(6)], 3);
        for n in [z(1), z(2), q(7, 2)] {
            assert_eq!(lipschitz_infconv(&c, &n, &sp, None).unwrap(), c);
        }
    }

    #[test]
    fn spike_is_flattened() {
        // min over z of |x − z| + (0, 10, 0)[z] at x = 1 is 1.
        let sp = line(&[z(0), z(1), z(2)]);
        let c = column(&[z(0), z(10), z(0)], 2);
        let out = lipschitz_infconv(&c, &z(1), &sp, None).unwrap();
        assert_eq!(out, column(&[z(0), z(1), z(0)], 2));
    }

    #[test]
    fn proper_anchor_subset() {
        let sp = line(&[z(0), z(1), z(2)]);
        let c = column(&[z(4), z(10), z(0)], 1);
        let anchors = SubsetMask::from_indices(3, &[0]).unwrap();
        let out = lipschitz_infconv(&c, &z(2), &sp, Some(&anchors)).unwrap();
        assert_eq!(out, column(&[z(4), z(6), z(8)], 1));
        let none = SubsetMask::empty(3);
        assert_eq!(lipschitz_infconv(&c, &z(2), &sp, Some(&none)), Err(Error::EmptyAnchorSet));
    }

    #[test]
    fn infconv_needs_metric_and_positive_n() {
        let sp = ProbabilitySpace::<Rational>::uniform(2);
        let c = CostMatrix::constant(2, 2, z(1));
        assert_eq!(lipschitz_infconv(&c, &z(1), &sp, None), Err(Error::MissingMetric));
        let sp = line(&[z(0), z(1)]);
        assert!(matches!(lipschitz_infconv(&c, &z(0), &sp, None), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn shifted_with_zero_potential_matches_plain() {
        let sp = line(&[z(0), z(1), z(2)]);
        let c = CostMatrix::from_rows(vec![vec![z(3), z(0)], vec![z(9), z(1)], vec![z(0), z(5)]]).unwrap();
        for n in [z(1), z(3)] {
            assert_eq!(
                variant_infconv_shifted(&c, &n, &sp, &vec![z(0); 3]).unwrap(),
                lipschitz_infconv(&c, &n, &sp, None).unwrap()
            );
        }
    }

    #[test]
    fn shifted_by_row_minimum_is_nonnegative_and_reaches_c_minus_f() {
        let sp = line(&[z(0), z(1), z(2)]);
        let c = CostMatrix::from_rows(vec![vec![z(3), z(0)], vec![z(9), z(1)], vec![z(0), z(5)]]).unwrap();
        let f = row_minimum_potential(c.values(), &[z(0), z(0)]);
        assert_eq!(f, vec![z(0), z(1), z(0)]);
        let target = shift_rows(c.values(), &f);
        assert!(target.values().iter().all(|v| *v >= z(0)));

        let modulus = lipschitz_modulus(&target, sp.metric().unwrap()).unwrap();
        assert_eq!(modulus, z(8));
        let mut prev: Option<Matrix<Rational>> = None;
        for n in [z(1), z(2), z(4), z(8), z(16)] {
            let stage = variant_infconv_shifted(&c, &n, &sp, &f).unwrap().into_values();
            assert!(stage.values().iter().all(|v| *v >= z(0)));
            assert!(stage.le_entrywise(&target, Tolerance::EXACT));
            if let Some(p) = &prev {
                assert!(p.le_entrywise(&stage, Tolerance::EXACT));
            }
            if n >= modulus {
                assert_eq!(stage, target);
            } else {
                assert_ne!(stage, target);
            }
            prev = Some(stage);
        }
    }

    #[test]
    fn discretize_examples() {
        let c = CostMatrix::from_rows(vec![vec![z(1), z(2)], vec![z(3), z(4)], vec![z(5), z(6)]]).unwrap();
        assert_eq!(partition_discretize(&c, &Partition::singletons(3)).unwrap(), c);
        let one = Partition::single_cell(3, 1).unwrap();
        let collapsed = partition_discretize(&c, &one).unwrap();
        assert!((0..3).all(|x| collapsed.values().row(x) == c.values().row(1)));
    }

    #[test]
    fn discretize_keeps_null_cell_rows_and_needs_representatives() {
        let c = CostMatrix::from_rows(vec![vec![z(1)], vec![z(3)], vec![z(5)]]).unwrap();
        let p = Partition::new(
            vec![
                Cell { members: SubsetMask::from_indices(3, &[0, 1]).unwrap(), representative: Some(1) },
                Cell { members: SubsetMask::singleton(3, 2).unwrap(), representative: None },
            ],
            Some(1),
        )
        .unwrap();
        let out = partition_discretize(&c, &p).unwrap();
        assert_eq!(out.values().values(), &[z(3), z(3), z(5)]);

        let missing = Partition::new(
            vec![
                Cell { members: SubsetMask::from_indices(3, &[0, 1]).unwrap(), representative: None },
                Cell { members: SubsetMask::singleton(3, 2).unwrap(), representative: Some(2) },
            ],
            None,
        )
        .unwrap();
        assert_eq!(partition_discretize(&c, &missing), Err(Error::MissingRepresentative { cell: 0 }));
    }

    #[test]
    fn discretization_error_bounded_by_oscillation() {
        // Profile (0, 0.2, 1) on cells {0,1} and {2}: oscillation 1/5 and 0.
        let c = CostMatrix::from_rows(vec![vec![z(0), q(1, 10)], vec![q(1, 5), q(1, 5)], vec![z(1), z(0)]]).unwrap();
        let p = Partition::from_labels(&[0, 0, 1]);
        let osc = oscillation(&c, &p).unwrap();
        assert_eq!(osc.per_cell, vec![Some(q(1, 5)), Some(z(0))]);
        let c0 = partition_discretize(&c, &p).unwrap();
        // Rows 0 and 1 differ by (1/5, 1/10); the max deviation is 1/5.
        assert_eq!(c.values().max_abs_diff(c0.values()), q(1, 5));
        assert!(c.values().max_abs_diff(c0.values()) <= osc.max());
    }

    #[test]
    fn oscillation_examples() {
        let c = column(&[z(0), z(10), z(0)], 2);
        let singles = oscillation(&c, &Partition::singletons(3)).unwrap();
        assert_eq!(singles.max(), z(0));
        assert_eq!(
            oscillation(&CostMatrix::constant(3, 2, z(4)), &Partition::single_cell(3, 0).unwrap()).unwrap().max(),
            z(0)
        );

        let p = Partition::from_labels(&[0, 1, 0]);
        assert_eq!(oscillation(&c, &p).unwrap().per_cell[0], Some(z(0)));
        let p = Partition::from_labels(&[0, 0, 1]);
        assert_eq!(oscillation(&c, &p).unwrap().per_cell[0], Some(z(10)));
    }

    #[test]
    fn star_partition_colinear_example() {
        let sp = line(&[z(0), q(1, 10), z(5), q(51, 10)]);
        // c(x, y) = |x − y| restricted to two targets: 1-Lipschitz in x.
        let targets = [z(0), z(5)];
        let pts = [z(0), q(1, 10), z(5), q(51, 10)];
        let c = CostMatrix::new(Matrix::from_fn(4, 2, |x, y| (pts[x].clone() - targets[y].clone()).abs()));
        let p = find_star_partition(&c, &z(1), &sp, &z(1), Tolerance::EXACT).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p.cells()[0].members.indices().collect::<Vec<_>>(), vec![0, 1]);
        assert_eq!(p.cells()[1].members.indices().collect::<Vec<_>>(), vec![2, 3]);
        assert!(oscillation(&c, &p).unwrap().satisfies(&z(1), Tolerance::EXACT));
    }

    #[test]
    fn star_partition_extremes() {
        let pts = [z(0), z(1), z(3)];
        let sp = line(&pts);
        let c = column(&pts, 1);
        // eps/u = 1/2 is below the minimum distance: singletons.
        let p = find_star_partition(&c, &z(1), &sp, &z(2), Tolerance::EXACT).unwrap();
        assert_eq!(p.len(), 3);
        // eps/u = 4 exceeds the diameter: one cell.
        let p = find_star_partition(&c, &z(4), &sp, &z(1), Tolerance::EXACT).unwrap();
        assert_eq!(p.len(), 1);
    }

    #[test]
    fn star_partition_rejects_violated_bound() {
        let sp = line(&[z(0), z(1)]);
        let c = column(&[z(0), z(3)], 1);
        let err = find_star_partition(&c, &z(1), &sp, &z(2), Tolerance::EXACT).unwrap_err();
        assert!(matches!(err, Error::LipschitzBoundViolated { x: 0, z: 1, .. }));
    }

    #[test]
    fn normalize_examples() {
        let c = CostMatrix::separable(vec![z(1), z(2)], vec![z(0), z(-3)]);
        let h = normalize_cost(&c, c.lower().unwrap(), Tolerance::EXACT).unwrap();
        assert!(h.values().values().iter().all(|v| *v == z(0)));

        let c = CostMatrix::from_rows(vec![vec![z(3), z(1)], vec![z(0), z(2)]]).unwrap();
        let f = row_minimum_potential(c.values(), &[z(0), z(0)]);
        let lower = PotentialPair::new(f, vec![z(0), z(0)], Side::Lower);
        let h = normalize_cost(&c, &lower, Tolerance::EXACT).unwrap();
        for x in 0..2 {
            assert!(h.values().row(x).iter().all(|v| *v >= z(0)));
            assert!(h.values().row(x).contains(&z(0)));
        }

        let bad = PotentialPair::new(vec![z(5), z(0)], vec![z(0), z(0)], Side::Lower);
        assert!(matches!(normalize_cost(&c, &bad, Tolerance::EXACT), Err(Error::InfeasibleWitness { .. })));
    }

    #[test]
    fn sequence_must_increase() {
        let base = CostMatrix::constant(1, 1, z(2));
        let up = vec![(z(1), CostMatrix::constant(1, 1, z(0))), (z(2), CostMatrix::constant(1, 1, z(1)))];
        assert!(ApproximantSequence::new(base.clone(), up, Tolerance::EXACT).is_ok());
        let down = vec![(z(1), CostMatrix::constant(1, 1, z(1))), (z(2), CostMatrix::constant(1, 1, z(0)))];
        assert_eq!(
            ApproximantSequence::new(base.clone(), down, Tolerance::EXACT),
            Err(Error::NotMonotone { stage: 0, x: 0, y: 0 })
        );
        let above = vec![(z(1), CostMatrix::constant(1, 1, z(3)))];
        assert!(ApproximantSequence::new(base, above, Tolerance::EXACT).is_err());
    }

    #[test]
    fn limit_check_constant_shift_and_constant_sequence() {
        let c = CostMatrix::from_rows(vec![vec![z(0), z(1)], vec![z(1), z(0)]]).unwrap();
        let h = vec![q(1, 2), q(1, 2)];
        let stages: Vec<_> = (1..=4).map(|n| (z(n), c.shifted(&q(-1, n)))).collect();
        let seq = ApproximantSequence::new(c.clone(), stages, Tolerance::EXACT).unwrap();
        let check = beta_star_limit_check(&seq, &h, &h, Tolerance::EXACT).unwrap();
        for (k, v) in check.stage_values.iter().enumerate() {
            assert_eq!(*v, check.base_value.clone() - q(1, k as i64 + 1));
        }
        assert!(check.monotone);
        assert_eq!(check.final_gap, q(1, 4));
        assert!(!check.last_stage_equals_base);

        let flat: Vec<_> = (1..=3).map(|n| (z(n), c.clone())).collect();
        let seq = ApproximantSequence::new(c, flat, Tolerance::EXACT).unwrap();
        let check = beta_star_limit_check(&seq, &h, &h, Tolerance::EXACT).unwrap();
        assert!(check.stage_values.iter().all(|v| *v == check.base_value));
        assert!(check.converged(Tolerance::EXACT));
    }
}
