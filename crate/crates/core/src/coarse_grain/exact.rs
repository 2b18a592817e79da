//! Exact unitary dynamics of system ⊗ bath on the truncated joint space.

use nalgebra::DVector;

use super::params::ModelParams;
use crate::error::{Error, Result};
use crate::fock::{annihilation, number, partial_trace, thermal_state, DensityMatrix};
use crate::linalg::{self, c, Operator, I};

/// Top-level population above which a truncation is rejected.
pub const TRUNCATION_LIMIT: f64 = 1e-6;

/// `ω(n + ½)` on `dim` levels.
pub fn oscillator_hamiltonian(dim: usize, omega: f64) -> Operator {
    (number(dim) + linalg::identity(dim) * c(0.5)) * c(omega)
}

/// `H_S = ω₀(a†a + ½)` on the system space.
pub fn system_hamiltonian(params: &ModelParams) -> Operator {
    oscillator_hamiltonian(params.fock_dims.0, params.omega0())
}

/// `H = H_S + H_B + κ(a + a†) ⊗ (b + b†)` with the eigendecomposition cached.
#[derive(Debug, Clone)]
pub struct ExactModel {
    params: ModelParams,
    h: Operator,
    h0_diag: DVector<f64>,
    energies: DVector<f64>,
    vectors: Operator,
    bath: DensityMatrix,
}

impl ExactModel {
    pub fn new(params: &ModelParams) -> Result<Self> {
        params.validate()?;
        let (ns, nb) = params.fock_dims;
        let hs = oscillator_hamiltonian(ns, params.omega0());
        let hb = oscillator_hamiltonian(nb, params.omega_b());
        let a = annihilation(ns);
        let b = annihilation(nb);
        let xa = &a + a.adjoint();
        let xb = &b + b.adjoint();
        let h0 = hs.kronecker(&linalg::identity(nb)) + linalg::identity(ns).kronecker(&hb);
        let h = &h0 + xa.kronecker(&xb) * c(params.kappa());
        let h0_diag = DVector::from_iterator(ns * nb, (0..ns * nb).map(|i| h0[(i, i)].re));
        let (energies, vectors) = linalg::hermitian_eigen(&h);
        let bath = thermal_state(&params.joint_spec(), 1, params.inv_temp())?;
        Ok(Self {
            params: *params,
            h,
            h0_diag,
            energies,
            vectors,
            bath,
        })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn hamiltonian(&self) -> &Operator {
        &self.h
    }

    pub fn bath_state(&self) -> &DensityMatrix {
        &self.bath
    }

    pub fn dims(&self) -> [usize; 2] {
        [self.params.fock_dims.0, self.params.fock_dims.1]
    }

    /// `e^{−iHt}`.
    pub fn unitary(&self, t: f64) -> Operator {
        let mut vd = self.vectors.clone();
        for (j, e) in self.energies.iter().enumerate() {
            let ph = (-I * (e * t)).exp();
            vd.column_mut(j).iter_mut().for_each(|z| *z *= ph);
        }
        vd * self.vectors.adjoint()
    }

    /// `U₀ = e^{−i(H_S + H_B)t}` (diagonal).
    pub fn free_unitary(&self, t: f64) -> Operator {
        Operator::from_diagonal(&self.h0_diag.map(|e| (-I * (e * t)).exp()))
    }

    /// `ρ_S ⊗ ρ_B`.
    pub fn initial_total(&self, rho_s0: &DensityMatrix) -> Result<Operator> {
        if rho_s0.dim() != self.params.fock_dims.0 {
            return Err(Error::DimensionMismatch(format!(
                "system state of dimension {} for N_S = {}",
                rho_s0.dim(),
                self.params.fock_dims.0
            )));
        }
        Ok(rho_s0.as_op().kronecker(self.bath.as_op()))
    }

    pub fn total_state(&self, rho_s0: &DensityMatrix, t: f64) -> Result<Operator> {
        let u = self.unitary(t);
        Ok(&u * self.initial_total(rho_s0)? * u.adjoint())
    }

    /// Reduced system state without truncation checks.
    pub fn reduced_state(&self, rho_s0: &DensityMatrix, t: f64) -> Result<Operator> {
        partial_trace(&self.total_state(rho_s0, t)?, &self.dims(), &[0])
    }

    /// `Tr_B(−i[H, ρ_T(t)])`.
    pub fn reduced_derivative(&self, rho_s0: &DensityMatrix, t: f64) -> Result<Operator> {
        let rt = self.total_state(rho_s0, t)?;
        partial_trace(&(linalg::commutator(&self.h, &rt) * (-I)), &self.dims(), &[0])
    }

    /// Largest top-level population of either mode over 16 sample times in
    /// `[0, t]` plus `t` itself; errors beyond [`TRUNCATION_LIMIT`].
    pub fn check_truncation(&self, rho_s0: &DensityMatrix, t: f64) -> Result<f64> {
        let [ns, nb] = self.dims();
        let mut worst: f64 = 0.0;
        for k in 0..=16 {
            let tk = t * k as f64 / 16.0;
            let rt = self.total_state(rho_s0, tk)?;
            let rs = partial_trace(&rt, &[ns, nb], &[0])?;
            let rb = partial_trace(&rt, &[ns, nb], &[1])?;
            for (mode, (r, n)) in [(rs, ns), (rb, nb)].into_iter().enumerate() {
                let pop = r[(n - 1, n - 1)].re;
                worst = worst.max(pop);
                if pop > TRUNCATION_LIMIT {
                    return Err(Error::TruncationBreach {
                        mode,
                        population: pop,
                        t: tk,
                        suggested_dim: 2 * n,
                    });
                }
            }
        }
        Ok(worst)
    }
}

/// `Tr_B[U(ρ_S ⊗ ρ_B)U†]` with the truncation check.
pub fn exact_reduced_dynamics(
    params: &ModelParams,
    rho_s0: &DensityMatrix,
    t: f64,
) -> Result<DensityMatrix> {
    let model = ExactModel::new(params)?;
    model.check_truncation(rho_s0, t)?;
    DensityMatrix::new(linalg::hermitian_part(&model.reduced_state(rho_s0, t)?))
}
