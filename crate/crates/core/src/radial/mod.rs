//! Radial channels, closed-form spectra and eigenfunctions.
//!
//! All channels use `ε = 2mE`; reported energies are `E`.

pub mod channel;
pub mod exact;
pub mod forbidden;
pub mod ladder;
pub mod spectrum;
pub mod states;

pub use channel::{
    phi3_channel, scalar_channel, scalar_mu, spinor_channel, spinor_rho, vector_casimir_l, vector_channel,
    vector_native_operator, vector_reduced_channel, ChannelLabel, RadialProblem,
};
pub use exact::{QMat, RadialBasis, RadialFunction, RadialOperator};
pub use forbidden::{forbidden_channel_check, hyperspherical_to_cartesian, FORBIDDEN_TOLERANCE};
pub use ladder::{
    conjugate_by_power, scalar_closed_form, scalar_hamiltonian, spinor_hamiltonian, spinor_ladder, susy_ladder,
    Direction, LadderKind, LadderOp,
};
pub use spectrum::{
    analytic_energy_scalar, analytic_energy_spinor, analytic_energy_vector, casimir_coincidences, casimir_energy_maps,
    casimir_relation_spinor, compatibility_omega, is_valid_series, vector_omega, vector_separation_constant,
    CasimirMap, SpectrumLine,
};
pub use states::{
    default_sample_grid, pointwise_residual, scalar_eigenfunction, scalar_exact_state, spinor_exact_state,
    spinor_excited_states, spinor_ground_state, vector_constraint_operator, vector_constraint_residual,
    vector_constraint_residual_at, vector_eigenfunctions, vector_exact_pair, vector_reduction_residual,
    RadialFunctionSample, VectorConstraintReport,
};
