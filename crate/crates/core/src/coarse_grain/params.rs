use crate::error::{Error, Result};
use crate::fock::{FockSpec, InvTemp};

/// Coupled-oscillator model: `H = ½p₁² + ½k₁x₁² + ½p₂² + ½k₂x₂² − k′x₁x₂`,
/// oscillator 1 the system, oscillator 2 the bath.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub k1: f64,
    pub k2: f64,
    pub kprime: f64,
    /// Coarse-graining time.
    pub tau: f64,
    /// Bath inverse temperature.
    pub inv_temp: f64,
    /// Truncations `(N_S, N_B)`.
    pub fock_dims: (usize, usize),
}

impl ModelParams {
    pub fn new(
        k1: f64,
        k2: f64,
        kprime: f64,
        tau: f64,
        inv_temp: f64,
        fock_dims: (usize, usize),
    ) -> Result<Self> {
        let p = Self {
            k1,
            k2,
            kprime,
            tau,
            inv_temp,
            fock_dims,
        };
        p.validate()?;
        Ok(p)
    }

    /// Parametrized by frequencies instead of spring constants.
    pub fn from_frequencies(
        omega0: f64,
        omega_b: f64,
        kprime: f64,
        tau: f64,
        inv_temp: f64,
        fock_dims: (usize, usize),
    ) -> Result<Self> {
        Self::new(omega0 * omega0, omega_b * omega_b, kprime, tau, inv_temp, fock_dims)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.k1, self.k2, self.kprime, self.tau, self.inv_temp]
            .iter()
            .all(|x| x.is_finite());
        if !finite {
            return Err(Error::InvalidParams("non-finite parameter".into()));
        }
        if self.k1 <= 0.0 || self.k2 <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "k1 = {}, k2 = {} must be positive",
                self.k1, self.k2
            )));
        }
        if self.tau <= 0.0 {
            return Err(Error::InvalidParams(format!("tau = {} must be positive", self.tau)));
        }
        if self.inv_temp <= 0.0 {
            return Err(Error::InvalidInverseTemperature(self.inv_temp));
        }
        if self.kprime * self.kprime >= self.k1 * self.k2 {
            return Err(Error::InvalidParams(format!(
                "|k'| = {} must stay below sqrt(k1 k2) = {}",
                self.kprime.abs(),
                (self.k1 * self.k2).sqrt()
            )));
        }
        if self.fock_dims.0 < 2 || self.fock_dims.1 < 2 {
            return Err(Error::InvalidParams(format!(
                "Fock dimensions {:?} must be at least 2",
                self.fock_dims
            )));
        }
        Ok(())
    }

    pub fn omega0(&self) -> f64 {
        self.k1.sqrt()
    }

    pub fn omega_b(&self) -> f64 {
        self.k2.sqrt()
    }

    /// `κ = −k′ / (2√(ω₀ω_B))`.
    pub fn kappa(&self) -> f64 {
        -self.kprime / (2.0 * (self.omega0() * self.omega_b()).sqrt())
    }

    pub fn inv_temp(&self) -> InvTemp {
        InvTemp::Finite(self.inv_temp)
    }

    /// Thermal occupation `⟨b†b⟩` of the untruncated bath.
    pub fn occupation(&self) -> f64 {
        1.0 / (self.inv_temp * self.omega_b()).exp_m1()
    }

    /// `coth(β_T ω_B / 2) = 2n̄ + 1`.
    pub fn coth(&self) -> f64 {
        2.0 * self.occupation() + 1.0
    }

    /// Same model with `k′` scaled so that `κ → s·κ`.
    pub fn with_kappa_scaled(&self, s: f64) -> Self {
        Self {
            kprime: self.kprime * s,
            ..*self
        }
    }

    pub fn system_spec(&self) -> FockSpec {
        FockSpec::single(self.fock_dims.0, self.omega0()).expect("validated params")
    }

    pub fn joint_spec(&self) -> FockSpec {
        FockSpec::new(
            vec![self.fock_dims.0, self.fock_dims.1],
            vec![self.omega0(), self.omega_b()],
        )
        .expect("validated params")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_quantities() {
        let p = ModelParams::from_frequencies(1.0, 4.0, 0.2, 0.5, 1.0, (4, 4)).unwrap();
        assert!((p.kappa() + 0.2 / 4.0).abs() < 1e-15);
        assert!((p.coth() - 1.0 / (2.0f64).tanh()).abs() < 1e-12);
    }

    #[test]
    fn invalid_params_rejected() {
        assert!(ModelParams::new(1.0, 1.0, 1.0, 0.5, 1.0, (4, 4)).is_err());
        assert!(ModelParams::new(1.0, 1.0, 0.1, 0.0, 1.0, (4, 4)).is_err());
        assert!(ModelParams::new(1.0, 1.0, 0.1, 0.5, -1.0, (4, 4)).is_err());
        assert!(ModelParams::new(-1.0, 1.0, 0.1, 0.5, 1.0, (4, 4)).is_err());
        assert!(ModelParams::new(1.0, 1.0, 0.1, 0.5, 1.0, (1, 4)).is_err());
    }
}
