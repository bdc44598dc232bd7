//! Green function of a Dirac particle in a plane wave superposed on a
//! constant magnetic field, evaluated from its proper-time representation,
//! together with independent reference implementations used to check it.
//!
//! Conventions: metric `diag(1, 1, −1, 1)` with slots 0, 1 transverse and
//! 2, 3 longitudinal; wave vector `k = (0, 0, −1, −1)`; polarization
//! `ε = (1, i, 0, 0)/√2`; proper time on the ray `e₀ = s·e^{iθ}`.

pub mod cli;
pub mod error;
pub mod field;
pub mod green;
pub mod kernels;
pub mod minkowski;
pub mod oracles;
pub mod paths;
pub mod quadrature;
pub mod verify;
