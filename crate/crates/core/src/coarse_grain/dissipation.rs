//! Coarse-grained dissipation matrix of the coupled-oscillator model in the
//! basis `S₁ = a`, `S₂ = a†`.

use num_complex::Complex64;

use super::gamma::sinc;
use super::params::ModelParams;
use crate::error::Result;
use crate::fock::annihilation;
use crate::lindblad::{DissipationMatrix, PSD_CLIP};
use crate::linalg::{c, Operator, I};

/// The four entries `γ₁₁, γ₂₂, γ₁₂, γ₂₁`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaEntries {
    pub g11: Complex64,
    pub g22: Complex64,
    pub g12: Complex64,
    pub g21: Complex64,
}

impl GammaEntries {
    pub fn matrix(&self) -> Operator {
        Operator::from_row_slice(2, 2, &[self.g11, self.g12, self.g21, self.g22])
    }

    pub fn zero() -> Self {
        let z = c(0.0);
        Self {
            g11: z,
            g22: z,
            g12: z,
            g21: z,
        }
    }
}

/// `(a, a†)` on `dim` levels.
pub fn model_basis(dim: usize) -> Vec<Operator> {
    let a = annihilation(dim);
    let ad = a.adjoint();
    vec![a, ad]
}

/// Model γ together with its positivity diagnostic.
#[derive(Debug, Clone)]
pub struct ModelDissipation {
    pub entries: GammaEntries,
    pub matrix: DissipationMatrix,
    pub min_eigenvalue: f64,
    /// `None` when PSD within tolerance, otherwise a regime warning.
    pub warning: Option<String>,
}

/// Full model entries at finite `τ`.
pub fn model_entries(params: &ModelParams) -> GammaEntries {
    let (w0, wb, tau) = (params.omega0(), params.omega_b(), params.tau);
    let k2 = params.kappa().powi(2);
    let n = params.occupation();
    let sp = sinc(0.5 * (w0 + wb) * tau);
    let sm = sinc(0.5 * (w0 - wb) * tau);
    let g11 = tau * k2 * ((n + 1.0) * sp * sp + n * sm * sm);
    let g22 = tau * k2 * ((n + 1.0) * sm * sm + n * sp * sp);
    let off = tau * k2 * sp * sm * params.coth();
    let phase = (I * (w0 * tau)).exp();
    GammaEntries {
        g11: c(g11),
        g22: c(g22),
        g12: phase * off,
        g21: phase.conj() * off,
    }
}

pub fn dissipation_matrix_model(params: &ModelParams) -> Result<ModelDissipation> {
    params.validate()?;
    let entries = model_entries(params);
    let matrix = DissipationMatrix::new(entries.matrix(), model_basis(params.fock_dims.0))?;
    let min_eigenvalue = matrix.min_eigenvalue();
    let warning = (min_eigenvalue < -PSD_CLIP).then(|| {
        format!("model dissipation matrix not positive semi-definite (min eigenvalue {min_eigenvalue:e})")
    });
    Ok(ModelDissipation {
        entries,
        matrix,
        min_eigenvalue,
        warning,
    })
}

/// Limit-form entries: `γ₁₁ = γ₂₂ = τκ² coth(β_Tω_B/2) sinc²(ω_Bτ/2)`,
/// `γ₁₂ = γ₁₁ e^{iω₀τ} = γ₂₁*`.
pub fn limit_entries(params: &ModelParams) -> GammaEntries {
    let g = gamma11_limit(params);
    let phase = (I * (params.omega0() * params.tau)).exp();
    GammaEntries {
        g11: c(g),
        g22: c(g),
        g12: phase * g,
        g21: phase.conj() * g,
    }
}

pub fn gamma11_limit(params: &ModelParams) -> f64 {
    let s = sinc(0.5 * params.omega_b() * params.tau);
    params.tau * params.kappa().powi(2) * params.coth() * s * s
}

pub fn limit_dissipation_matrix(params: &ModelParams) -> Result<DissipationMatrix> {
    params.validate()?;
    DissipationMatrix::new(limit_entries(params).matrix(), model_basis(params.fock_dims.0))
}

/// Regime diagnostics comparing the limit form with the full model.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitReport {
    pub gamma11_limit: f64,
    pub gamma11_model: f64,
    pub gamma22_model: f64,
    /// `|γ₁₁ − γ₂₂| / γ₁₁` from the full model.
    pub mismatch: f64,
    /// `|γ₁₁^lim − γ₁₁| / γ₁₁`.
    pub limit_vs_model: f64,
    pub tau_b: f64,
    pub tau_0: f64,
    /// `ω_B τ`.
    pub bath_phase: f64,
    pub warnings: Vec<String>,
}

pub fn dissipation_limit(params: &ModelParams) -> Result<LimitReport> {
    params.validate()?;
    let m = model_entries(params);
    let lim = gamma11_limit(params);
    let g11 = m.g11.re;
    let g22 = m.g22.re;
    let rel = |x: f64| if g11 > 0.0 { x / g11 } else { f64::NAN };
    let tau_b = 1.0 / params.omega_b();
    let tau_0 = 1.0 / params.omega0();
    let mut warnings = Vec::new();
    if tau_b >= tau_0 {
        warnings.push(format!(
            "bath time scale {tau_b} is not shorter than system time scale {tau_0}"
        ));
    } else if tau_0 / tau_b < 10.0 {
        warnings.push(format!(
            "weak scale separation: omega_B/omega_0 = {}",
            tau_0 / tau_b
        ));
    }
    if params.tau <= tau_b {
        warnings.push(format!(
            "coarse-graining time {} does not exceed bath time {tau_b}",
            params.tau
        ));
    }
    if g11 == 0.0 {
        warnings.push("gamma11 vanishes (zero coupling or sinc node)".into());
    }
    let mismatch = rel((g11 - g22).abs());
    if mismatch > 1e-2 {
        warnings.push(format!("gamma11/gamma22 mismatch {mismatch:e} exceeds 1e-2"));
    }
    Ok(LimitReport {
        gamma11_limit: lim,
        gamma11_model: g11,
        gamma22_model: g22,
        mismatch,
        limit_vs_model: rel((lim - g11).abs()),
        tau_b,
        tau_0,
        bath_phase: params.omega_b() * params.tau,
        warnings,
    })
}
