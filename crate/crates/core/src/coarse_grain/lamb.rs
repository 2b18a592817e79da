//! First-order `χ_{α0}` rates and the Lamb-shift Hamiltonian.

use num_complex::Complex64;

use super::gamma::{gamma_tensor, GammaTensor};
use super::kraus::model_coefficients;
use super::params::ModelParams;
use super::dissipation::model_basis;
use crate::error::{Error, Result};
use crate::fock::{annihilation, DensityMatrix};
use crate::linalg::{self, c, Operator, I};

/// `⟨χ̇_{α0}⟩ = −i Σ_{γβδ} λ_βδ ⟨B_γ⟩ Γ^{αγ}_{βδ}`, one entry per `α`.
pub fn chi0_rates(lambda: &[Vec<f64>], bath_means: &[Complex64], gamma: &GammaTensor) -> Result<Vec<Complex64>> {
    let (na, ng, nb, nd) = gamma.shape;
    if bath_means.len() != ng || lambda.len() != nb || lambda.iter().any(|r| r.len() != nd) {
        return Err(Error::DimensionMismatch(format!(
            "λ is {}×{:?}, ⟨B⟩ has {} entries, Γ has shape {:?}",
            lambda.len(),
            lambda.first().map(Vec::len),
            bath_means.len(),
            gamma.shape
        )));
    }
    Ok((0..na)
        .map(|alpha| {
            let mut s = c(0.0);
            for (g, &bm) in bath_means.iter().enumerate() {
                if bm.norm() == 0.0 {
                    continue;
                }
                for (beta, row) in lambda.iter().enumerate() {
                    for (delta, &lam) in row.iter().enumerate() {
                        s += bm * gamma.get(alpha, g, beta, delta) * lam;
                    }
                }
            }
            -I * s
        })
        .collect())
}

/// `H_LS = (i/2) Σ_α (c_α S_α − c̄_α S_α†)`.
pub fn lamb_shift(chi_dot: &[Complex64], basis: &[Operator]) -> Result<Operator> {
    if chi_dot.len() != basis.len() || basis.is_empty() {
        return Err(Error::DimensionMismatch(format!(
            "{} rates for {} basis operators",
            chi_dot.len(),
            basis.len()
        )));
    }
    let d = basis[0].nrows();
    let mut h = Operator::zeros(d, d);
    for (cv, s) in chi_dot.iter().zip(basis) {
        h += s * *cv - s.adjoint() * cv.conj();
    }
    Ok(h * (I * 0.5))
}

/// Model `H_LS` at coarse-graining time `τ` for an arbitrary bath state.
pub fn model_lamb_shift(params: &ModelParams, bath_state: &DensityMatrix) -> Result<Operator> {
    params.validate()?;
    let nb = params.fock_dims.1;
    if bath_state.dim() != nb {
        return Err(Error::DimensionMismatch(format!(
            "bath state of dimension {} for N_B = {nb}",
            bath_state.dim()
        )));
    }
    let b = annihilation(nb);
    let means = [bath_state.expect(&b), bath_state.expect(&b.adjoint())];
    let (p, q, lam) = model_coefficients(params);
    let gt = gamma_tensor(&p, &q, params.tau);
    let lambda: Vec<Vec<f64>> = lam.iter().map(|r| r.to_vec()).collect();
    let rates = chi0_rates(&lambda, &means, &gt)?;
    let h = lamb_shift(&rates, &model_basis(params.fock_dims.0))?;
    Ok(linalg::hermitian_part(&h))
}
