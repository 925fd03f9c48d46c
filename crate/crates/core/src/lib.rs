//! Exact and numerical bound states of the truncated Coulomb potential
//! `V(r) = -β/(r + 1)`.
//!
//! * [`frobenius`] terminates the Frobenius series of the radial equation and
//!   returns the exact `(β, α)` eigenpairs with their eigenfunctions.
//! * [`spectrum`] arranges those pairs on the spectral curves `α_{ν,l}(β)`,
//!   interpolates them and checks the Hellmann–Feynman relation.
//! * [`oracle`] is an independent shooting eigensolver used to validate both.
//! * [`model`] converts energies between the physical, tilde and breve frames.
//! * [`cli`] holds the command implementations behind the `tcoulomb` binary.

pub mod checks;
pub mod cli;
pub mod error;
pub mod frobenius;
pub mod model;
pub mod oracle;
pub mod polynomial;
pub mod quadrature;
pub mod spectrum;
pub mod sturm;

pub use error::{Error, Result};
pub use frobenius::{
    count_nodes, eval_wavefunction, node_positions, ode_residual, recurrence_step,
    relative_ode_residual, solve_truncation, truncation_polynomial, ExactSolution,
};
pub use model::{beta_from_physical, convert_energy, Energy, FrameKind, PhysicalParams, UnitFrame};
pub use oracle::{solve_state, validate_exact, OracleResult, RadialProblem};
pub use polynomial::RationalPolynomial;
pub use spectrum::{
    build_curve, degeneracy_split, hellmann_feynman_check, interpolate, monotonicity_scan,
    CurvePoint, PointSource, SpectralCurve,
};
