//! Kantorovich–Rubinstein distance on a finite metric space.
//!
//! The primal side is `α(d)`, solved as a transport problem with cost `d`.
//! The dual side is `sup_f |μ(f) − ν(f)|` over 1-Lipschitz `f`, solved as a
//! separate linear program. Shifting `f` so that `min f = 0` loses nothing,
//! so the program is `max (μ − ν)·f` over `f ≥ 0`, `f(x) − f(z) ≤ d(x, z)`.

use crate::error::{Error, Result};
use crate::lp;
use crate::matrix::Matrix;
use crate::measure::ProbabilitySpace;
use crate::scalar::{Scalar, Tolerance};
use crate::transport::{check_marginal, Coupling, TransportProblem};

#[derive(Debug, Clone, PartialEq)]
pub struct WassersteinReport<S> {
    /// `α(d)`
    pub alpha: S,
    /// `sup_f |μ(f) − ν(f)|`
    pub beta: S,
    pub coupling: Coupling<S>,
    /// A 1-Lipschitz maximizer.
    pub potential: Vec<S>,
}

impl<S: Scalar> WassersteinReport<S> {
    pub fn duality_holds(&self, tol: Tolerance) -> bool {
        tol.eq(&self.alpha, &self.beta)
    }
}

/// `|f(x) − f(z)| ≤ d(x, z)` on every pair, or the first violation.
pub fn check_lipschitz_witness<S: Scalar>(f: &[S], d: &Matrix<S>, tol: Tolerance) -> Result<()> {
    if d.shape() != (f.len(), f.len()) {
        return Err(Error::DimensionMismatch {
            context: "witness vs metric",
            expected: f.len() * f.len(),
            found: d.rows() * d.cols(),
        });
    }
    for x in 0..f.len() {
        for z in 0..f.len() {
            let gap = (f[x].clone() - f[z].clone()).abs();
            if !tol.le(&gap, &d[(x, z)]) {
                return Err(Error::LipschitzBoundViolated { x, z, gap: gap.render(), bound: d[(x, z)].render() });
            }
        }
    }
    Ok(())
}

/// Both sides of the 1-Wasserstein duality for `μ` (the space's weights)
/// and `ν` on the same points.
pub fn wasserstein1<S: Scalar>(space: &ProbabilitySpace<S>, nu: &[S], tol: Tolerance) -> Result<WassersteinReport<S>> {
    let d = space.require_metric()?;
    let mu = space.weights();
    if nu.len() != mu.len() {
        return Err(Error::DimensionMismatch { context: "nu vs space", expected: mu.len(), found: nu.len() });
    }
    check_marginal("nu", nu, tol)?;

    let primal = TransportProblem::with_tolerance(d, mu, nu, tol)?.alpha()?;
    let potential = lipschitz_dual(d, mu, nu, tol)?;
    check_lipschitz_witness(&potential, d, tol)?;
    let beta =
        mu.iter().zip(nu).zip(&potential).fold(S::zero(), |acc, ((m, n), f)| acc + (m.clone() - n.clone()) * f.clone());
    Ok(WassersteinReport {
        alpha: primal.value,
        beta,
        coupling: primal.coupling.expect("alpha returns a coupling"),
        potential,
    })
}

fn lipschitz_dual<S: Scalar>(d: &Matrix<S>, mu: &[S], nu: &[S], tol: Tolerance) -> Result<Vec<S>> {
    let n = mu.len();
    let mut rows = Vec::with_capacity(n * n.saturating_sub(1));
    let mut rhs = Vec::with_capacity(rows.capacity());
    for x in 0..n {
        for z in 0..n {
            if x != z {
                let mut row = vec![S::zero(); n];
                row[x] = S::one();
                row[z] = -S::one();
                rows.push(row);
                rhs.push(d[(x, z)].clone());
            }
        }
    }
    let objective: Vec<S> = mu.iter().zip(nu).map(|(m, v)| m.clone() - v.clone()).collect();
    if rows.is_empty() {
        return Ok(vec![S::zero(); n]);
    }
    Ok(lp::maximize(&objective, &Matrix::from_rows(rows)?, &rhs, tol)?.x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn two_points_at_distance_one() {
        let d = Matrix::from_rows(vec![vec![q(0, 1), q(1, 1)], vec![q(1, 1), q(0, 1)]]).unwrap();
        let space = ProbabilitySpace::from_weights(vec![q(1, 1), q(0, 1)], Tolerance::EXACT)
            .unwrap()
            .with_metric(d, Tolerance::EXACT)
            .unwrap();
        let r = wasserstein1(&space, &[q(0, 1), q(1, 1)], Tolerance::EXACT).unwrap();
        assert_eq!(r.alpha, q(1, 1));
        assert_eq!(r.beta, q(1, 1));
    }

    #[test]
    fn points_on_a_line() {
        // |i - j| on {0, 1, 2}; moving (1/2, 1/2, 0) to (0, 1/2, 1/2) costs 1.
        let d = Matrix::from_fn(3, 3, |i, j| Rational::from_i64((i as i64 - j as i64).abs()));
        let space = ProbabilitySpace::from_weights(vec![q(1, 2), q(1, 2), q(0, 1)], Tolerance::EXACT)
            .unwrap()
            .with_metric(d.clone(), Tolerance::EXACT)
            .unwrap();
        let r = wasserstein1(&space, &[q(0, 1), q(1, 2), q(1, 2)], Tolerance::EXACT).unwrap();
        assert_eq!(r.alpha, q(1, 1));
        assert!(r.duality_holds(Tolerance::EXACT));
        assert!(check_lipschitz_witness(&r.potential, &d, Tolerance::EXACT).is_ok());
    }

    #[test]
    fn needs_metric() {
        let space = ProbabilitySpace::<Rational>::uniform(2);
        assert_eq!(wasserstein1(&space, &[q(1, 2), q(1, 2)], Tolerance::EXACT), Err(Error::MissingMetric));
    }

    #[test]
    fn witness_violation_reported() {
        let d = Matrix::from_fn(2, 2, |i, j| if i == j { 0.0 } else { 1.0 });
        assert!(matches!(
            check_lipschitz_witness(&[0.0, 2.0], &d, Tolerance::default()),
            Err(Error::LipschitzBoundViolated { x: 0, z: 1, .. })
        ));
    }
}
