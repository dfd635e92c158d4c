//! The four transport functionals on a finite instance:
//!
//! * `α(c)  = min { P(c) : P ∈ Γ(μ,ν) }`
//! * `α*(c) = max { P(c) : P ∈ Γ(μ,ν) }`
//! * `β(c)  = max { μ(f) + ν(g) : f ⊕ g ≤ c }`
//! * `β*(c) = min { μ(f) + ν(g) : f ⊕ g ≥ c }`
//!
//! `α` and `β` come out of one network simplex run: the optimal basis gives
//! the coupling and the node potentials give `(f, g)`. The starred versions
//! are obtained through `α*(c) = −α(−c)` and `β*(c) = −β(−c)`.

mod oracle;
mod simplex;

pub use oracle::{enumerate_extreme_couplings, enumerate_extremes, ExtremeCouplings, DEFAULT_ENUMERATION_CAP};

use crate::cost::{CostMatrix, PotentialPair, Side};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{self, Scalar, Tolerance};

/// A joint law on `X × Y` with prescribed marginals.
#[derive(Debug, Clone, PartialEq)]
pub struct Coupling<S> {
    matrix: Matrix<S>,
    mu: Vec<S>,
    nu: Vec<S>,
}

impl<S: Scalar> Coupling<S> {
    /// Checks nonnegativity and that row/column sums equal `mu`/`nu`.
    pub fn new(matrix: Matrix<S>, mu: Vec<S>, nu: Vec<S>, tol: Tolerance) -> Result<Self> {
        let coupling = Coupling { matrix, mu, nu };
        coupling.check(tol)?;
        Ok(coupling)
    }

    pub(crate) fn from_parts_unchecked(matrix: Matrix<S>, mu: Vec<S>, nu: Vec<S>) -> Self {
        Coupling { matrix, mu, nu }
    }

    pub fn check(&self, tol: Tolerance) -> Result<()> {
        if self.matrix.shape() != (self.mu.len(), self.nu.len()) {
            return Err(Error::DimensionMismatch {
                context: "coupling shape vs marginals",
                expected: self.mu.len() * self.nu.len(),
                found: self.matrix.rows() * self.matrix.cols(),
            });
        }
        if let Some(pos) = self.matrix.values().iter().position(|v| tol.is_negative(v)) {
            return Err(Error::MarginalMismatch(format!(
                "negative mass at ({}, {})",
                pos / self.nu.len(),
                pos % self.nu.len()
            )));
        }
        for (k, (got, want)) in self.matrix.row_sums().iter().zip(&self.mu).enumerate() {
            if !tol.eq(got, want) {
                return Err(Error::MarginalMismatch(format!(
                    "row {k} sums to {} but mu = {}",
                    got.render(),
                    want.render()
                )));
            }
        }
        for (k, (got, want)) in self.matrix.col_sums().iter().zip(&self.nu).enumerate() {
            if !tol.eq(got, want) {
                return Err(Error::MarginalMismatch(format!(
                    "column {k} sums to {} but nu = {}",
                    got.render(),
                    want.render()
                )));
            }
        }
        Ok(())
    }

    pub fn matrix(&self) -> &Matrix<S> {
        &self.matrix
    }

    pub fn mu(&self) -> &[S] {
        &self.mu
    }

    pub fn nu(&self) -> &[S] {
        &self.nu
    }

    /// `P(c) = Σ P(x,y) c(x,y)`.
    pub fn cost(&self, c: &Matrix<S>) -> S {
        self.matrix.dot(c)
    }

    /// Mass of the set of pairs flagged by `member`.
    pub fn mass_where(&self, member: impl Fn(usize, usize) -> bool) -> S {
        let (m, n) = self.matrix.shape();
        scalar::sum(
            (0..m)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .filter(|&(i, j)| member(i, j))
                .map(|(i, j)| self.matrix[(i, j)].clone()),
        )
    }

    /// Coupling of the swapped spaces.
    pub fn transposed(&self) -> Self {
        Coupling { matrix: self.matrix.transpose(), mu: self.nu.clone(), nu: self.mu.clone() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Objective {
    Alpha,
    AlphaStar,
    Beta,
    BetaStar,
}

impl Objective {
    pub fn name(self) -> &'static str {
        match self {
            Objective::Alpha => "alpha",
            Objective::AlphaStar => "alpha_star",
            Objective::Beta => "beta",
            Objective::BetaStar => "beta_star",
        }
    }

    /// `true` for the functionals computed as an infimum over couplings or a
    /// supremum over lower potentials (the `α`/`β` side).
    pub fn is_lower(self) -> bool {
        matches!(self, Objective::Alpha | Objective::Beta)
    }
}

/// Value of one functional with its primal and dual witnesses.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport<S> {
    pub objective: Objective,
    pub value: S,
    pub coupling: Option<Coupling<S>>,
    pub potentials: Option<PotentialPair<S>>,
    /// Basic cells `(x, y)` of the optimal spanning-tree basis.
    pub basis: Vec<(usize, usize)>,
    /// Simplex pivots performed.
    pub pivots: usize,
}

impl<S: Scalar> SolveReport<S> {
    pub fn arithmetic_mode(&self) -> &'static str {
        S::MODE
    }

    pub fn primal_value(&self, c: &Matrix<S>) -> Option<S> {
        self.coupling.as_ref().map(|p| p.cost(c))
    }

    pub fn dual_value(&self) -> Option<S> {
        let p = self.potentials.as_ref()?;
        let cp = self.coupling.as_ref()?;
        Some(p.value(cp.mu(), cp.nu()))
    }

    /// Weak duality between the two witnesses: dual ≤ primal on the lower
    /// side, primal ≤ dual on the upper side. Vacuously true without both.
    pub fn weak_duality_holds(&self, c: &Matrix<S>, tol: Tolerance) -> bool {
        match (self.primal_value(c), self.dual_value()) {
            (Some(primal), Some(dual)) => {
                if self.objective.is_lower() {
                    tol.le(&dual, &primal)
                } else {
                    tol.le(&primal, &dual)
                }
            }
            _ => true,
        }
    }
}

/// `(β, α, α*, β*)` with the ordering check.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainReport<S> {
    pub beta: S,
    pub alpha: S,
    pub alpha_star: S,
    pub beta_star: S,
}

impl<S: Scalar> ChainReport<S> {
    /// `β ≤ α ≤ α* ≤ β*` within tolerance.
    pub fn is_ordered(&self, tol: Tolerance) -> bool {
        tol.le(&self.beta, &self.alpha)
            && tol.le(&self.alpha, &self.alpha_star)
            && tol.le(&self.alpha_star, &self.beta_star)
    }

    /// `α = β` and `α* = β*` within tolerance.
    pub fn duality_holds(&self, tol: Tolerance) -> bool {
        tol.eq(&self.alpha, &self.beta) && tol.eq(&self.alpha_star, &self.beta_star)
    }

    pub fn as_array(&self) -> [S; 4] {
        [self.beta.clone(), self.alpha.clone(), self.alpha_star.clone(), self.beta_star.clone()]
    }
}

pub(crate) fn check_marginal<S: Scalar>(which: &'static str, w: &[S], tol: Tolerance) -> Result<()> {
    if w.is_empty() {
        return Err(Error::InfeasibleMarginals { which, total: "empty".into() });
    }
    if w.iter().any(|v| tol.is_negative(v)) {
        return Err(Error::InfeasibleMarginals { which, total: "negative weight".into() });
    }
    let total = scalar::sum(w.iter().cloned());
    if !tol.eq(&total, &S::one()) {
        return Err(Error::InfeasibleMarginals { which, total: total.render() });
    }
    Ok(())
}

struct Basis {
    cells: Vec<(usize, usize)>,
    pivots: usize,
}

/// A validated transport instance. All four functionals are solved from here.
#[derive(Debug, Clone, Copy)]
pub struct TransportProblem<'a, S> {
    cost: &'a Matrix<S>,
    mu: &'a [S],
    nu: &'a [S],
    tol: Tolerance,
}

impl<'a, S: Scalar> TransportProblem<'a, S> {
    pub fn new(cost: &'a Matrix<S>, mu: &'a [S], nu: &'a [S]) -> Result<Self> {
        Self::with_tolerance(cost, mu, nu, Tolerance::default())
    }

    pub fn with_tolerance(cost: &'a Matrix<S>, mu: &'a [S], nu: &'a [S], tol: Tolerance) -> Result<Self> {
        if cost.rows() != mu.len() {
            return Err(Error::DimensionMismatch {
                context: "cost rows vs mu",
                expected: mu.len(),
                found: cost.rows(),
            });
        }
        if cost.cols() != nu.len() {
            return Err(Error::DimensionMismatch {
                context: "cost columns vs nu",
                expected: nu.len(),
                found: cost.cols(),
            });
        }
        check_marginal("mu", mu, tol)?;
        check_marginal("nu", nu, tol)?;
        Ok(TransportProblem { cost, mu, nu, tol })
    }

    pub fn tolerance(&self) -> Tolerance {
        self.tol
    }

    fn minimize(&self, cost: &Matrix<S>) -> Result<(Coupling<S>, PotentialPair<S>, Basis)> {
        let sol = simplex::minimize(cost, self.mu, self.nu, self.tol)?;
        let n = self.nu.len();
        let basis = Basis { cells: sol.basis.iter().map(|&c| (c / n, c % n)).collect(), pivots: sol.pivots };
        let coupling = Coupling::from_parts_unchecked(sol.flow, self.mu.to_vec(), self.nu.to_vec());
        Ok((coupling, PotentialPair::new(sol.u, sol.v, Side::Lower), basis))
    }

    /// `α(c)` with an optimal coupling and lower potentials satisfying
    /// complementary slackness.
    pub fn alpha(&self) -> Result<SolveReport<S>> {
        let (coupling, potentials, basis) = self.minimize(self.cost)?;
        Ok(SolveReport {
            objective: Objective::Alpha,
            value: coupling.cost(self.cost),
            coupling: Some(coupling),
            potentials: Some(potentials),
            basis: basis.cells,
            pivots: basis.pivots,
        })
    }

    /// `α*(c) = −α(−c)`, with a maximizing coupling and upper potentials.
    pub fn alpha_star(&self) -> Result<SolveReport<S>> {
        let neg = self.cost.map(|v| -v.clone());
        let (coupling, potentials, basis) = self.minimize(&neg)?;
        Ok(SolveReport {
            objective: Objective::AlphaStar,
            value: -coupling.cost(&neg),
            coupling: Some(coupling),
            potentials: Some(potentials.negated()),
            basis: basis.cells,
            pivots: basis.pivots,
        })
    }

    /// `β(c)`, read off as `μ(f) + ν(g)` from the optimal lower potentials.
    pub fn beta(&self) -> Result<SolveReport<S>> {
        let (coupling, potentials, basis) = self.minimize(self.cost)?;
        Ok(SolveReport {
            objective: Objective::Beta,
            value: potentials.value(self.mu, self.nu),
            coupling: Some(coupling),
            potentials: Some(potentials),
            basis: basis.cells,
            pivots: basis.pivots,
        })
    }

    /// `β*(c) = −β(−c)`.
    pub fn beta_star(&self) -> Result<SolveReport<S>> {
        let neg = self.cost.map(|v| -v.clone());
        let (coupling, potentials, basis) = self.minimize(&neg)?;
        Ok(SolveReport {
            objective: Objective::BetaStar,
            value: -potentials.value(self.mu, self.nu),
            coupling: Some(coupling),
            potentials: Some(potentials.negated()),
            basis: basis.cells,
            pivots: basis.pivots,
        })
    }

    pub fn solve(&self, objective: Objective) -> Result<SolveReport<S>> {
        match objective {
            Objective::Alpha => self.alpha(),
            Objective::AlphaStar => self.alpha_star(),
            Objective::Beta => self.beta(),
            Objective::BetaStar => self.beta_star(),
        }
    }

    /// All four values from two simplex runs.
    pub fn chain(&self) -> Result<ChainReport<S>> {
        let (low, low_pot, _) = self.minimize(self.cost)?;
        let neg = self.cost.map(|v| -v.clone());
        let (high, high_pot, _) = self.minimize(&neg)?;
        Ok(ChainReport {
            beta: low_pot.value(self.mu, self.nu),
            alpha: low.cost(self.cost),
            alpha_star: -high.cost(&neg),
            beta_star: -high_pot.value(self.mu, self.nu),
        })
    }

    /// Brute-force value over all basic feasible couplings. The `β` sides
    /// report the primal extreme they equal by linear-programming duality.
    pub fn oracle(&self, objective: Objective, cap: usize) -> Result<S> {
        let (lo, hi) = enumerate_extremes(self.cost, self.mu, self.nu, cap, self.tol)?;
        Ok(if objective.is_lower() { lo } else { hi })
    }
}

pub fn solve_alpha<S: Scalar>(c: &CostMatrix<S>, mu: &[S], nu: &[S]) -> Result<SolveReport<S>> {
    TransportProblem::new(c.values(), mu, nu)?.alpha()
}

pub fn solve_alpha_star<S: Scalar>(c: &CostMatrix<S>, mu: &[S], nu: &[S]) -> Result<SolveReport<S>> {
    TransportProblem::new(c.values(), mu, nu)?.alpha_star()
}

pub fn solve_beta<S: Scalar>(c: &CostMatrix<S>, mu: &[S], nu: &[S]) -> Result<SolveReport<S>> {
    TransportProblem::new(c.values(), mu, nu)?.beta()
}

pub fn solve_beta_star<S: Scalar>(c: &CostMatrix<S>, mu: &[S], nu: &[S]) -> Result<SolveReport<S>> {
    TransportProblem::new(c.values(), mu, nu)?.beta_star()
}

pub fn check_chain<S: Scalar>(c: &CostMatrix<S>, mu: &[S], nu: &[S]) -> Result<ChainReport<S>> {
    TransportProblem::new(c.values(), mu, nu)?.chain()
}

/// Extreme of `Σ P c` over all basic feasible couplings (cap on `|X|·|Y|`).
pub fn oracle_enumerate<S: Scalar>(c: &CostMatrix<S>, mu: &[S], nu: &[S], objective: Objective) -> Result<S> {
    TransportProblem::new(c.values(), mu, nu)?.oracle(objective, DEFAULT_ENUMERATION_CAP)
}
