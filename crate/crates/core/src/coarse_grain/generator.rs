//! Coarse-grained master equation of the model and its comparison with the
//! exact reduced dynamics.

use super::dissipation::{dissipation_matrix_model, limit_dissipation_matrix, model_basis};
use super::kraus::first_order_gamma;
use super::exact::{system_hamiltonian, ExactModel};
use super::params::ModelParams;
use crate::error::{Error, Result};
use crate::fock::DensityMatrix;
use crate::lindblad::{build_generator, evolve_master, DissipationMatrix, EvolveOptions, GKSGenerator};
use crate::linalg::hermitian_part;
use crate::linalg;

/// Which dissipation matrix to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GammaForm {
    /// Finite-τ model entries.
    Model,
    /// `γ₁₁ = γ₂₂` limit form.
    Limit,
    /// From first-order Kraus coefficients with interaction-picture phase `e^{−iω₀t}` on `a`.
    FirstOrder,
}

/// `L` with `H_S = ω₀(a†a + ½)`. The thermal-bath Lamb shift vanishes.
pub fn coarse_grained_generator(params: &ModelParams, form: GammaForm) -> Result<GKSGenerator> {
    let gamma = match form {
        GammaForm::Model => dissipation_matrix_model(params)?.matrix,
        GammaForm::Limit => limit_dissipation_matrix(params)?,
        GammaForm::FirstOrder => {
            let g = first_order_gamma(params)?.matrix();
            DissipationMatrix::new(hermitian_part(&g), model_basis(params.fock_dims.0))?
        }
    };
    build_generator(&system_hamiltonian(params), None, gamma)
}

#[derive(Debug, Clone)]
pub struct MarkovComparison {
    pub times: Vec<f64>,
    /// Trace distance between the Lindblad and exact reduced states.
    pub distances: Vec<f64>,
    pub max_top_population: f64,
}

impl MarkovComparison {
    pub fn max_distance(&self) -> f64 {
        self.distances.iter().copied().fold(0.0, f64::max)
    }
}

/// Evolves both the coarse-grained master equation and the exact joint state,
/// sampling every `sample_every` steps.
pub fn markov_comparison(
    params: &ModelParams,
    rho_s0: &DensityMatrix,
    form: GammaForm,
    t_final: f64,
    dt: f64,
    sample_every: usize,
) -> Result<MarkovComparison> {
    let gen = coarse_grained_generator(params, form)?;
    let opts = EvolveOptions {
        sample_every,
        ..Default::default()
    };
    let traj = evolve_master(&gen, rho_s0, t_final, dt, &opts)?;
    let model = ExactModel::new(params)?;
    let max_top_population = model.check_truncation(rho_s0, t_final)?;
    let mut distances = Vec::with_capacity(traj.times.len());
    for (t, rho) in traj.times.iter().zip(&traj.states) {
        let exact = model.reduced_state(rho_s0, *t)?;
        distances.push(linalg::trace_distance(&linalg::hermitian_part(rho), &linalg::hermitian_part(&exact)));
    }
    if distances.iter().any(|d| !d.is_finite()) {
        return Err(Error::Internal("non-finite trace distance".into()));
    }
    Ok(MarkovComparison {
        times: traj.times,
        distances,
        max_top_population,
    })
}
