//! Check of the fixed-basis master equation built from finite-difference
//! `χ̇(t)` against the exact reduced dynamics.

use nalgebra::DMatrix;

use super::exact::ExactModel;
use super::kraus::{chi_from_kraus, kraus_from_unitary};
use super::params::ModelParams;
use crate::error::{Error, Result};
use crate::fock::{gram_residual, DensityMatrix};
use crate::linalg::{self, c, Operator, I};

#[derive(Debug, Clone)]
pub struct FixedBasisReport {
    pub times: Vec<f64>,
    /// `max |RHS − Tr_B(−i[H, ρ_T(t)])|` per time.
    pub residuals: Vec<f64>,
    /// `max |RHS − (ρ(t+h) − ρ(t−h))/2h|` per time.
    pub fd_residuals: Vec<f64>,
    pub spacing: f64,
}

impl FixedBasisReport {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    pub fn max_fd_residual(&self) -> f64 {
        self.fd_residuals.iter().copied().fold(0.0, f64::max)
    }
}

/// `S′₀ = S₀`, `S′_α = Σ_{β≥1} v_βα S_β` for an orthogonal or unitary `v` on
/// the traceless subspace.
pub fn rebased_basis(basis: &[Operator], v: &Operator) -> Result<Vec<Operator>> {
    let n = basis.len();
    if n == 0 || v.shape() != (n - 1, n - 1) {
        return Err(Error::DimensionMismatch(format!(
            "rotation {:?} for {} basis operators",
            v.shape(),
            n
        )));
    }
    let mut out = vec![basis[0].clone()];
    for a in 0..n - 1 {
        let mut s = Operator::zeros(basis[0].nrows(), basis[0].ncols());
        for b in 0..n - 1 {
            s += &basis[b + 1] * v[(b, a)];
        }
        out.push(s);
    }
    Ok(out)
}

/// Fixed-basis OSR right-hand side from `χ̇` in the unnormalized-identity
/// convention (`S₀ = I`).
fn fixed_basis_rhs(chi_dot: &Operator, basis: &[Operator], rho0: &Operator) -> Operator {
    let d = rho0.nrows();
    let n = basis.len();
    let mut q = Operator::zeros(d, d);
    for b in 1..n {
        q += &basis[b] * chi_dot[(b, 0)] - basis[b].adjoint() * chi_dot[(0, b)];
    }
    q *= I * 0.5;
    let mut out = linalg::commutator(&q, rho0) * (-I);
    let mut anti = Operator::zeros(d, d);
    for a in 1..n {
        let mut right = Operator::zeros(d, d);
        for b in 1..n {
            let g = chi_dot[(a, b)];
            if g.norm() != 0.0 {
                right += basis[b].adjoint() * g;
            }
        }
        out += &basis[a] * rho0 * &right;
        anti += &right * &basis[a];
    }
    out - linalg::anticommutator(&anti, rho0) * c(0.5)
}

/// For each `t`, builds `χ̇(t)` by central differences of spacing `h` and
/// compares the resulting right-hand side with `dρ_S/dt`.
pub fn validate_fixed_basis_osr(
    params: &ModelParams,
    rho_s0: &DensityMatrix,
    times: &[f64],
    spacing: f64,
    basis: &[Operator],
) -> Result<FixedBasisReport> {
    let d = params.fock_dims.0;
    if basis.len() != d * d {
        return Err(Error::DimensionMismatch(format!(
            "{} basis operators for dimension {d}",
            basis.len()
        )));
    }
    let g = gram_residual(basis);
    if g > 1e-10 {
        return Err(Error::NonOrthonormalBasis { residual: g });
    }
    let s0 = linalg::identity(d) * c(1.0 / (d as f64).sqrt());
    let r0 = linalg::max_abs(&(&basis[0] - s0));
    if r0 > 1e-12 {
        return Err(Error::InvalidParams(format!(
            "first basis element must be I/sqrt(d) (residual {r0:e})"
        )));
    }
    if !(spacing > 0.0 && spacing.is_finite()) {
        return Err(Error::InvalidParams(format!("spacing {spacing} must be positive")));
    }
    if let Some(&t) = times.iter().find(|&&t| t < spacing || !t.is_finite()) {
        return Err(Error::InvalidParams(format!(
            "time {t} must be at least the spacing {spacing}"
        )));
    }
    let model = ExactModel::new(params)?;
    let chi_at = |t: f64| -> Result<Operator> {
        let k = kraus_from_unitary(&model.unitary(t), model.bath_state())?;
        Ok(chi_from_kraus(&k, basis, t)?.unnormalized_identity_convention(d))
    };
    let mut out = FixedBasisReport {
        times: times.to_vec(),
        residuals: Vec::with_capacity(times.len()),
        fd_residuals: Vec::with_capacity(times.len()),
        spacing,
    };
    for &t in times {
        let chi_dot = (chi_at(t + spacing)? - chi_at(t - spacing)?) / c(2.0 * spacing);
        let rhs = fixed_basis_rhs(&chi_dot, basis, rho_s0.as_op());
        let exact = model.reduced_derivative(rho_s0, t)?;
        let fd = (model.reduced_state(rho_s0, t + spacing)? - model.reduced_state(rho_s0, t - spacing)?)
            / c(2.0 * spacing);
        out.residuals.push(linalg::max_abs(&(&rhs - exact)));
        out.fd_residuals.push(linalg::max_abs(&(rhs - fd)));
    }
    Ok(out)
}

/// Random real orthogonal matrix from a QR factorization of `seed_matrix`.
pub fn orthogonal_from(seed_matrix: &DMatrix<f64>) -> Operator {
    let q = seed_matrix.clone().qr().q();
    linalg::to_complex(&q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{fock_state, hs_basis};

    #[test]
    fn rebasing_keeps_orthonormality() {
        let basis = hs_basis(3);
        let m = DMatrix::from_fn(8, 8, |i, j| ((i * 7 + j * 3) % 5) as f64 - 2.0 + if i == j { 4.0 } else { 0.0 });
        let rb = rebased_basis(&basis, &orthogonal_from(&m)).unwrap();
        assert!(gram_residual(&rb) < 1e-13);
    }

    #[test]
    fn small_case_matches() {
        let p = ModelParams::from_frequencies(1.0, 3.0, 0.4, 0.5, 2.0, (3, 5)).unwrap();
        let psi = (fock_state(3, 0).unwrap() + fock_state(3, 1).unwrap()) * c(std::f64::consts::FRAC_1_SQRT_2);
        let rho = DensityMatrix::pure(&psi).unwrap();
        let r = validate_fixed_basis_osr(&p, &rho, &[0.3, 0.9], 1e-4, &hs_basis(3)).unwrap();
        assert!(r.max_residual() < 1e-6, "{:?}", r.residuals);
    }
}
