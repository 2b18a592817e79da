//! Coarse-grained dynamics of two coupled oscillators.

mod dissipation;
mod exact;
mod fixed_basis;
mod gamma;
mod generator;
mod kraus;
mod lamb;
mod params;

pub use dissipation::{
    dissipation_limit, dissipation_matrix_model, gamma11_limit, limit_dissipation_matrix,
    limit_entries, model_basis, model_entries, GammaEntries, LimitReport, ModelDissipation,
};
pub use exact::{
    exact_reduced_dynamics, oscillator_hamiltonian, system_hamiltonian, ExactModel,
    TRUNCATION_LIMIT,
};
pub use fixed_basis::{orthogonal_from, rebased_basis, validate_fixed_basis_osr, FixedBasisReport};
pub use gamma::{gamma_sinc, gamma_tensor, sinc, ExpSum, GammaTensor};
pub use generator::{coarse_grained_generator, markov_comparison, GammaForm, MarkovComparison};
pub use kraus::{
    chi_from_kraus, first_order_gamma, first_order_kraus, interaction_kraus, kraus_from_unitary, model_coefficients,
    osr_apply, ChiMatrix, FirstOrderKraus, KrausSet, COMPLETENESS_TOL,
};
pub use lamb::{chi0_rates, lamb_shift, model_lamb_shift};
pub use params::ModelParams;
