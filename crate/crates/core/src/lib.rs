//! Superintegrable d-dimensional quantum systems with spin 0, ½ and 1.
//!
//! * [`cliffalg`] builds gamma matrices and so(d) spin generators over the Gaussian rationals.
//! * [`opalg`] is an exact algebra of matrix differential operators acting on functions
//!   `P(x)·r^k·exp(−βr)`; it builds the Hamiltonians, angular momenta and Runge-Lenz
//!   vectors and certifies their commutation relations.
//! * [`radial`] holds the radial channels, closed-form spectra and eigenfunctions.
//! * [`numsolve`] is an independent finite-difference eigenvalue oracle.
//! * [`specfun`] provides the special functions and quadrature the eigenfunctions need.

pub mod cliffalg;
pub mod error;
pub mod exact;
pub mod numsolve;
pub mod opalg;
pub mod radial;
pub mod report;
pub mod specfun;

pub use error::{Error, Result};
pub use report::{CheckReport, Residual, Violation};
