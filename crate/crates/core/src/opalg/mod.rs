//! Exact matrix differential operators on functions `P(x)·r^k·exp(−βr)`.
//!
//! Identities between operators are decided by applying both sides to random test
//! functions and evaluating the difference exactly at random rational points.

pub mod function;
pub mod model;
pub mod operator;
pub mod verify;

pub use function::{
    evaluate, is_zero_function, random_points, random_test_function, Key, Mono, ParityPair, Point, WaveFunction, MAX_D,
};
pub use model::{
    build_angular_momenta, build_dirac_d, build_hamiltonian, build_lrl, gradient_potential, ModelSpec, PotentialKind,
};
pub use operator::{apply, Coeff, DiffOperator, DiffTerm};
pub use verify::{
    verify_appendix_a, verify_potential_conditions, verify_spin1_identities, verify_symmetry_algebra, VerifyOptions,
};
