use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{self, Scalar, Tolerance};

/// Which dual a [`PotentialPair`] is meant for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    /// `f ⊕ g ≤ c`, feasible for β.
    Lower,
    /// `f ⊕ g ≥ c`, feasible for β*.
    Upper,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Lower => Side::Upper,
            Side::Upper => Side::Lower,
        }
    }
}

/// A separable function `(x, y) ↦ f(x) + g(y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialPair<S> {
    pub f: Vec<S>,
    pub g: Vec<S>,
    pub side: Side,
}

impl<S: Scalar> PotentialPair<S> {
    pub fn new(f: Vec<S>, g: Vec<S>, side: Side) -> Self {
        PotentialPair { f, g, side }
    }

    pub fn zeros(rows: usize, cols: usize, side: Side) -> Self {
        PotentialPair::new(vec![S::zero(); rows], vec![S::zero(); cols], side)
    }

    /// `μ(f) + ν(g)`.
    pub fn value(&self, mu: &[S], nu: &[S]) -> S {
        let fx = scalar::sum(self.f.iter().zip(mu).map(|(a, b)| a.clone() * b.clone()));
        let gy = scalar::sum(self.g.iter().zip(nu).map(|(a, b)| a.clone() * b.clone()));
        fx + gy
    }

    pub fn at(&self, x: usize, y: usize) -> S {
        self.f[x].clone() + self.g[y].clone()
    }

    /// The matrix `f ⊕ g`.
    pub fn to_matrix(&self) -> Matrix<S> {
        Matrix::from_fn(self.f.len(), self.g.len(), |i, j| self.at(i, j))
    }

    /// `(−f, −g)` on the opposite side.
    pub fn negated(&self) -> Self {
        PotentialPair {
            f: self.f.iter().map(|v| -v.clone()).collect(),
            g: self.g.iter().map(|v| -v.clone()).collect(),
            side: self.side.flip(),
        }
    }

    /// Verifies the pair bounds `c` on its declared side, reporting the first
    /// violated entry.
    pub fn check_feasible(&self, c: &Matrix<S>, tol: Tolerance) -> Result<()> {
        if self.f.len() != c.rows() {
            return Err(Error::DimensionMismatch {
                context: "potential f vs cost rows",
                expected: c.rows(),
                found: self.f.len(),
            });
        }
        if self.g.len() != c.cols() {
            return Err(Error::DimensionMismatch {
                context: "potential g vs cost columns",
                expected: c.cols(),
                found: self.g.len(),
            });
        }
        for x in 0..c.rows() {
            for y in 0..c.cols() {
                let s = self.at(x, y);
                let ok = match self.side {
                    Side::Lower => tol.le(&s, &c[(x, y)]),
                    Side::Upper => tol.le(&c[(x, y)], &s),
                };
                if !ok {
                    return Err(Error::InfeasibleWitness { x, y, sum: s.render(), cost: c[(x, y)].render() });
                }
            }
        }
        Ok(())
    }

    pub fn is_feasible(&self, c: &Matrix<S>, tol: Tolerance) -> bool {
        self.check_feasible(c, tol).is_ok()
    }
}

/// Cost function on `X × Y`, optionally carrying the integrable bounds
/// `f₁ ⊕ g₁ ≤ c ≤ f₂ ⊕ g₂`. On a finite space every matrix admits such bounds;
/// declared witnesses are checked on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct CostMatrix<S> {
    values: Matrix<S>,
    lower: Option<PotentialPair<S>>,
    upper: Option<PotentialPair<S>>,
}

impl<S: Scalar> CostMatrix<S> {
    pub fn new(values: Matrix<S>) -> Self {
        CostMatrix { values, lower: None, upper: None }
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self> {
        Ok(CostMatrix::new(Matrix::from_rows(rows)?))
    }

    pub fn with_bounds(
        values: Matrix<S>,
        lower: Option<PotentialPair<S>>,
        upper: Option<PotentialPair<S>>,
        tol: Tolerance,
    ) -> Result<Self> {
        for (w, side) in [(&lower, Side::Lower), (&upper, Side::Upper)] {
            if let Some(w) = w {
                if w.side != side {
                    return Err(Error::InvalidParameter(format!("{side:?} bound declared with side {:?}", w.side)));
                }
                w.check_feasible(&values, tol)?;
            }
        }
        Ok(CostMatrix { values, lower, upper })
    }

    /// `c = f ⊕ g`, with the decomposition recorded as both bounds.
    pub fn separable(f: Vec<S>, g: Vec<S>) -> Self {
        let lower = PotentialPair::new(f.clone(), g.clone(), Side::Lower);
        let upper = PotentialPair::new(f, g, Side::Upper);
        CostMatrix { values: lower.to_matrix(), lower: Some(lower), upper: Some(upper) }
    }

    pub fn constant(rows: usize, cols: usize, k: S) -> Self {
        CostMatrix::new(Matrix::filled(rows, cols, k))
    }

    pub fn values(&self) -> &Matrix<S> {
        &self.values
    }

    pub fn into_values(self) -> Matrix<S> {
        self.values
    }

    pub fn lower(&self) -> Option<&PotentialPair<S>> {
        self.lower.as_ref()
    }

    pub fn upper(&self) -> Option<&PotentialPair<S>> {
        self.upper.as_ref()
    }

    pub fn rows(&self) -> usize {
        self.values.rows()
    }

    pub fn cols(&self) -> usize {
        self.values.cols()
    }

    pub fn at(&self, x: usize, y: usize) -> &S {
        &self.values[(x, y)]
    }

    /// `−c`; the bound witnesses swap sides.
    pub fn negated(&self) -> Self {
        CostMatrix {
            values: self.values.map(|v| -v.clone()),
            lower: self.upper.as_ref().map(PotentialPair::negated),
            upper: self.lower.as_ref().map(PotentialPair::negated),
        }
    }

    /// `c + t`; the constant is absorbed into the `f` part of each witness.
    pub fn shifted(&self, t: &S) -> Self {
        let shift = |p: &PotentialPair<S>| PotentialPair {
            f: p.f.iter().map(|v| v.clone() + t.clone()).collect(),
            g: p.g.clone(),
            side: p.side,
        };
        CostMatrix {
            values: self.values.map(|v| v.clone() + t.clone()),
            lower: self.lower.as_ref().map(shift),
            upper: self.upper.as_ref().map(shift),
        }
    }

    /// The trivial bounds `min c ≤ c ≤ max c`, as potentials on `X`.
    pub fn trivial_bounds(&self) -> (PotentialPair<S>, PotentialPair<S>) {
        let vals = self.values.values();
        let lo = vals.iter().cloned().reduce(S::min_of).unwrap_or_else(S::zero);
        let hi = vals.iter().cloned().reduce(S::max_of).unwrap_or_else(S::zero);
        (
            PotentialPair::new(vec![lo; self.rows()], vec![S::zero(); self.cols()], Side::Lower),
            PotentialPair::new(vec![hi; self.rows()], vec![S::zero(); self.cols()], Side::Upper),
        )
    }
}

impl<S: Scalar> From<Matrix<S>> for CostMatrix<S> {
    fn from(values: Matrix<S>) -> Self {
        CostMatrix::new(values)
    }
}
