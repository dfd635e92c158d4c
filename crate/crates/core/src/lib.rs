//! Exact Monge–Kantorovich duality on finite probability spaces.
//!
//! The crate computes the transport functionals `α(c)`, `α*(c)`, `β(c)` and
//! `β*(c)` with both primal (coupling) and dual (potential) witnesses, and
//! implements the constructive approximation and coupling devices used to
//! transfer duality from simple costs to general ones: Lipschitz infimal
//! convolution, partition discretization with coupling extension, minimal
//! covers for rectangle unions and Monge couplings.
//!
//! Everything is generic over [`Scalar`]: use [`Rational`] for exact results
//! and `f64` for speed.

pub mod approx;
pub mod cost;
pub mod couplings;
pub mod error;
mod lp;
pub mod matrix;
pub mod measure;
pub mod rectangles;
pub mod scalar;
pub mod transport;
pub mod wasserstein;

pub use cost::{CostMatrix, PotentialPair, Side};
pub use couplings::{diagonal_coupling, extend_coupling, monge_coupling, product_coupling, CoarseCoupling};
pub use error::{Error, Result};
pub use matrix::Matrix;
pub use measure::{Cell, Partition, ProbabilitySpace, SubsetMask};
pub use rectangles::{arveson_witness, min_cover, ArvesonOutcome, Combine, Cover, RectangleFamily};
pub use scalar::{Rational, Scalar, Tolerance};
pub use transport::{ChainReport, Coupling, Objective, SolveReport, TransportProblem};
pub use wasserstein::{wasserstein1, WassersteinReport};
