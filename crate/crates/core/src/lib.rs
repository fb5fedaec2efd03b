//! Quantum transmission through combs of δ'_θ point interactions.
//!
//! Three independent routes compute the same quantities:
//!
//! * [`transfer`]: ordered products of SU(1,1) transfer matrices;
//! * [`comb`]: closed forms in Chebyshev polynomials of the second kind;
//! * [`oracle`]: direct RK4 integration through regularized dipole arrays
//!   built in [`regularized`].

pub mod chebyshev;
pub mod comb;
pub mod error;
pub mod oracle;
pub mod quadrature;
pub mod regularized;
pub mod spline;
pub mod transfer;

pub use chebyshev::{chebyshev_u, chebyshev_u_pair, ChebyshevArg};
pub use comb::{
    amplitudes_closed_form, canonical_theta, envelope, golden_section_max, passband, resonances, small_theta_bound,
    small_theta_threshold, theta_to_one_bound, transmission_closed_form, Passband, ResonanceSet,
};
pub use error::{Error, Result};
pub use oracle::{array_transmission_numeric, dipole_matrix_numeric, integrate_dipole, FundamentalPair};
pub use regularized::{
    custom_potential, dipole_matrix_analytic, example_potential, regularized_comb_matrix, regularized_transmission,
    DipoleArraySpec, ResonantPotential,
};
pub use transfer::{
    amplitudes_from_matrix, comb_matrix, comb_matrix_with, inverse, single_matrix, Amplitudes, CombSpec, Contrast,
    TransferMatrix,
};
