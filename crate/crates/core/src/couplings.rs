//! Explicit members of `Γ(μ, ν)`.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::measure::{conditional_measure, pushforward, Partition, ProbabilitySpace};
use crate::scalar::{Scalar, Tolerance};
use crate::transport::{check_marginal, Coupling};

/// A coupling of the coarse marginal `μ₀` (one atom per partition cell) with `ν`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoarseCoupling<S> {
    partition: Partition,
    /// Rows are cells, columns are points of `Y`.
    matrix: Matrix<S>,
    nu: Vec<S>,
}

impl<S: Scalar> CoarseCoupling<S> {
    /// Checks shape, nonnegativity and that the columns sum to `nu`.
    /// Row sums are matched against the cell masses in [`extend_coupling`].
    pub fn new(partition: Partition, matrix: Matrix<S>, nu: Vec<S>, tol: Tolerance) -> Result<Self> {
        if matrix.shape() != (partition.len(), nu.len()) {
            return Err(Error::DimensionMismatch {
                context: "coarse coupling shape (cells x |Y|)",
                expected: partition.len() * nu.len(),
                found: matrix.rows() * matrix.cols(),
            });
        }
        if matrix.values().iter().any(|v| tol.is_negative(v)) {
            return Err(Error::MarginalMismatch("coarse coupling has negative entries".into()));
        }
        for (j, (got, want)) in matrix.col_sums().iter().zip(&nu).enumerate() {
            if !tol.eq(got, want) {
                return Err(Error::MarginalMismatch(format!(
                    "coarse column {j} sums to {} but nu = {}",
                    got.render(),
                    want.render()
                )));
            }
        }
        Ok(CoarseCoupling { partition, matrix, nu })
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn matrix(&self) -> &Matrix<S> {
        &self.matrix
    }

    pub fn nu(&self) -> &[S] {
        &self.nu
    }
}

/// Cell masses `μ(A_i)` and the coarse cost whose row `i` is `c(x_i, ·)`.
///
/// The null cell must be `μ`-null: its rows are not constant in general, so
/// it cannot be an atom of the coarse problem. Its coarse row is taken from
/// its representative or, failing that, its first point; the choice does not
/// affect any coupling value since the row carries no mass.
pub fn coarse_problem<S: Scalar>(
    c: &Matrix<S>,
    partition: &Partition,
    mu: &[S],
    tol: Tolerance,
) -> Result<(Matrix<S>, Vec<S>)> {
    if partition.point_count() != mu.len() || c.rows() != mu.len() {
        return Err(Error::DimensionMismatch {
            context: "partition/cost vs mu",
            expected: mu.len(),
            found: partition.point_count(),
        });
    }
    let masses = partition.cell_masses(mu);
    let mut rows = Vec::with_capacity(partition.len());
    for (ci, cell) in partition.cells().iter().enumerate() {
        let rep = if partition.is_null_cell(ci) {
            if !tol.is_zero(&masses[ci]) {
                return Err(Error::InvalidPartition(format!("null cell {ci} carries mass {}", masses[ci].render())));
            }
            cell.representative.or_else(|| cell.members.indices().next())
        } else {
            Some(cell.representative.ok_or(Error::MissingRepresentative { cell: ci })?)
        };
        rows.push(match rep {
            Some(r) => c.row(r).to_vec(),
            None => vec![S::zero(); c.cols()],
        });
    }
    Ok((Matrix::from_rows(rows)?, masses))
}

/// `P = Σ_i μ(A_i)·(μ_i × ν_i)` with `μ_i = μ(· | A_i)` and
/// `ν_i = T(A_i × ·) / μ(A_i)`, i.e. `P(x, y) = μ(x | A_i)·T(A_i, y)` for
/// `x ∈ A_i`. Cells of zero mass contribute zero rows.
///
/// `P` has marginals `μ` and `ν` and agrees with `T` on every rectangle
/// `A × B` with `A` a union of cells.
pub fn extend_coupling<S: Scalar>(t: &CoarseCoupling<S>, mu: &[S], tol: Tolerance) -> Result<Coupling<S>> {
    let partition = &t.partition;
    if partition.point_count() != mu.len() {
        return Err(Error::DimensionMismatch {
            context: "partition vs mu",
            expected: mu.len(),
            found: partition.point_count(),
        });
    }
    check_marginal("mu", mu, tol)?;
    let masses = partition.cell_masses(mu);
    for (i, (row_mass, cell_mass)) in t.matrix.row_sums().iter().zip(&masses).enumerate() {
        if !tol.eq(row_mass, cell_mass) {
            return Err(Error::MarginalMismatch(format!(
                "coarse row {i} has mass {} but mu(A_{i}) = {}",
                row_mass.render(),
                cell_mass.render()
            )));
        }
    }

    let mut p = Matrix::zeros(mu.len(), t.nu.len());
    for (i, cell) in partition.cells().iter().enumerate() {
        if masses[i] <= S::zero() {
            continue;
        }
        let conditional = conditional_measure(mu, &cell.members)?;
        for x in cell.members.indices() {
            for y in 0..t.nu.len() {
                p[(x, y)] = conditional[x].clone() * t.matrix[(i, y)].clone();
            }
        }
    }
    Coupling::new(p, mu.to_vec(), t.nu.clone(), tol)
}

/// The coupling carried by the graph of `map`: `P(x, map(x)) = μ(x)`.
/// Fails with the full defect `ν − μ∘map⁻¹` unless the map pushes `μ` onto `ν`.
pub fn monge_coupling<S: Scalar>(mu: &[S], map: &[usize], nu: &[S], tol: Tolerance) -> Result<Coupling<S>> {
    let image = pushforward(mu, map, nu.len())?;
    if image.iter().zip(nu).any(|(a, b)| !tol.eq(a, b)) {
        return Err(Error::NotMeasurePreserving {
            defect: nu.iter().zip(&image).map(|(b, a)| (b.clone() - a.clone()).render()).collect(),
        });
    }
    let mut p: Matrix<S> = Matrix::zeros(mu.len(), nu.len());
    for (x, &y) in map.iter().enumerate() {
        p[(x, y)] = p[(x, y)].clone() + mu[x].clone();
    }
    Coupling::new(p, mu.to_vec(), nu.to_vec(), tol)
}

/// `μ × ν`.
pub fn product_coupling<S: Scalar>(mu: &[S], nu: &[S]) -> Coupling<S> {
    let p = Matrix::from_fn(mu.len(), nu.len(), |x, y| mu[x].clone() * nu[y].clone());
    Coupling::from_parts_unchecked(p, mu.to_vec(), nu.to_vec())
}

/// `P(U) = μ{x : (x, x) ∈ U}`, a coupling of `μ` with itself.
pub fn diagonal_coupling<S: Scalar>(mu: &[S]) -> Coupling<S> {
    let p = Matrix::from_fn(mu.len(), mu.len(), |x, y| if x == y { mu[x].clone() } else { S::zero() });
    Coupling::from_parts_unchecked(p, mu.to_vec(), mu.to_vec())
}

/// [`diagonal_coupling`] between two spaces that must be the same labelled
/// point set with the same weights.
pub fn diagonal_coupling_on<S: Scalar>(
    x: &ProbabilitySpace<S>,
    y: &ProbabilitySpace<S>,
    tol: Tolerance,
) -> Result<Coupling<S>> {
    if x.labels() != y.labels() {
        return Err(Error::SpaceMismatch("diagonal coupling needs X = Y as point sets".into()));
    }
    if x.weights().iter().zip(y.weights()).any(|(a, b)| !tol.eq(a, b)) {
        return Err(Error::SpaceMismatch("diagonal coupling needs mu = nu".into()));
    }
    Ok(diagonal_coupling(x.weights()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{Cell, SubsetMask};
    use crate::scalar::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn singleton_partition_extension_is_identity() {
        let mu = vec![q(1, 2), q(1, 3), q(1, 6)];
        let nu = vec![q(1, 2), q(1, 2)];
        let t =
            Matrix::from_rows(vec![vec![q(1, 4), q(1, 4)], vec![q(1, 4), q(1, 12)], vec![q(0, 1), q(1, 6)]]).unwrap();
        let cc = CoarseCoupling::new(Partition::singletons(3), t.clone(), nu, Tolerance::EXACT).unwrap();
        let p = extend_coupling(&cc, &mu, Tolerance::EXACT).unwrap();
        assert_eq!(*p.matrix(), t);
    }

    #[test]
    fn single_cell_extension_is_product() {
        let mu = vec![q(1, 5), q(4, 5)];
        let nu = vec![q(1, 3), q(2, 3)];
        let t = Matrix::from_rows(vec![nu.clone()]).unwrap();
        let cc = CoarseCoupling::new(Partition::single_cell(2, 0).unwrap(), t, nu.clone(), Tolerance::EXACT).unwrap();
        let p = extend_coupling(&cc, &mu, Tolerance::EXACT).unwrap();
        assert_eq!(p, product_coupling(&mu, &nu));
    }

    #[test]
    fn two_cell_extension_on_four_points() {
        // Cells {0,1} and {2,3}, each of mass 1/2 under the uniform law.
        let mu = vec![q(1, 4); 4];
        let nu = vec![q(1, 3), q(2, 3)];
        let partition = Partition::from_labels(&[0, 0, 1, 1]);
        let t = Matrix::from_rows(vec![vec![q(1, 3), q(1, 6)], vec![q(0, 1), q(1, 2)]]).unwrap();
        let cc = CoarseCoupling::new(partition, t, nu.clone(), Tolerance::EXACT).unwrap();
        let p = extend_coupling(&cc, &mu, Tolerance::EXACT).unwrap();
        // Hand computation: rows of cell 0 are (1/2)(1/3, 1/6), rows of cell 1 are (1/2)(0, 1/2).
        let expected = Matrix::from_rows(vec![
            vec![q(1, 6), q(1, 12)],
            vec![q(1, 6), q(1, 12)],
            vec![q(0, 1), q(1, 4)],
            vec![q(0, 1), q(1, 4)],
        ])
        .unwrap();
        assert_eq!(*p.matrix(), expected);
        assert_eq!(p.matrix().row_sums(), mu);
        assert_eq!(p.matrix().col_sums(), nu);
        assert_eq!(p.mass_where(|x, y| x < 2 && y == 0), q(1, 3));
    }

    #[test]
    fn extension_checks_cell_masses() {
        let mu = vec![q(1, 4); 4];
        let nu = vec![q(1, 2), q(1, 2)];
        let t = Matrix::from_rows(vec![vec![q(1, 2), q(1, 4)], vec![q(0, 1), q(1, 4)]]).unwrap();
        let cc = CoarseCoupling::new(Partition::from_labels(&[0, 0, 1, 1]), t, nu, Tolerance::EXACT).unwrap();
        assert!(matches!(extend_coupling(&cc, &mu, Tolerance::EXACT), Err(Error::MarginalMismatch(_))));
    }

    #[test]
    fn zero_mass_cells_get_zero_rows() {
        let mu = vec![q(0, 1), q(1, 2), q(1, 2)];
        let nu = vec![q(1, 2), q(1, 2)];
        let partition = Partition::new(
            vec![
                Cell { members: SubsetMask::singleton(3, 0).unwrap(), representative: None },
                Cell { members: SubsetMask::from_indices(3, &[1, 2]).unwrap(), representative: Some(1) },
            ],
            Some(0),
        )
        .unwrap();
        let t = Matrix::from_rows(vec![vec![q(0, 1), q(0, 1)], vec![q(1, 2), q(1, 2)]]).unwrap();
        let cc = CoarseCoupling::new(partition, t, nu, Tolerance::EXACT).unwrap();
        let p = extend_coupling(&cc, &mu, Tolerance::EXACT).unwrap();
        assert_eq!(p.matrix().row(0), &[q(0, 1), q(0, 1)]);
        assert_eq!(p.matrix().row(1), &[q(1, 4), q(1, 4)]);
    }

    #[test]
    fn coarse_problem_rejects_heavy_null_cell() {
        let c = Matrix::from_rows(vec![vec![q(1, 1)], vec![q(2, 1)]]).unwrap();
        let mu = vec![q(1, 2), q(1, 2)];
        let p = Partition::new(
            vec![
                Cell { members: SubsetMask::singleton(2, 0).unwrap(), representative: None },
                Cell { members: SubsetMask::singleton(2, 1).unwrap(), representative: Some(1) },
            ],
            Some(0),
        )
        .unwrap();
        assert!(matches!(coarse_problem(&c, &p, &mu, Tolerance::EXACT), Err(Error::InvalidPartition(_))));
    }

    #[test]
    fn monge_examples() {
        let h = vec![q(1, 2), q(1, 2)];
        assert_eq!(monge_coupling(&h, &[0, 1], &h, Tolerance::EXACT).unwrap(), diagonal_coupling(&h));
        let swap = monge_coupling(&h, &[1, 0], &h, Tolerance::EXACT).unwrap();
        assert_eq!(swap.matrix()[(0, 1)], q(1, 2));
        assert_eq!(swap.matrix()[(0, 0)], q(0, 1));

        let mu = vec![q(1, 3), q(2, 3)];
        let point = vec![q(1, 1), q(0, 1), q(0, 1)];
        let col = monge_coupling(&mu, &[0, 0], &point, Tolerance::EXACT).unwrap();
        assert_eq!(col.matrix().col_sums(), point);
    }

    #[test]
    fn monge_reports_defect_vector() {
        let mu = vec![q(1, 4), q(3, 4)];
        let nu = vec![q(1, 2), q(1, 2)];
        match monge_coupling(&mu, &[0, 1], &nu, Tolerance::EXACT) {
            Err(Error::NotMeasurePreserving { defect }) => assert_eq!(defect, vec!["1/4", "-1/4"]),
            other => panic!("expected defect, got {other:?}"),
        }
    }

    #[test]
    fn uniform_product_and_diagonal() {
        let h = vec![q(1, 2), q(1, 2)];
        let p = product_coupling(&h, &h);
        assert!(p.matrix().values().iter().all(|v| *v == q(1, 4)));
        let d = diagonal_coupling(&h);
        assert_eq!(d.matrix()[(1, 1)], q(1, 2));
        assert_eq!(d.matrix()[(0, 1)], q(0, 1));
        assert!(d.check(Tolerance::EXACT).is_ok());
    }

    #[test]
    fn diagonal_needs_same_space() {
        let x = ProbabilitySpace::<Rational>::uniform(2);
        let y = ProbabilitySpace::<Rational>::uniform(3);
        assert!(matches!(diagonal_coupling_on(&x, &y, Tolerance::EXACT), Err(Error::SpaceMismatch(_))));
        assert!(diagonal_coupling_on(&x, &x, Tolerance::EXACT).is_ok());
    }
}
