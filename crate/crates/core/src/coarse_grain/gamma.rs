//! Time averages `(1/t)∫₀ᵗ` of exponential sums.

use num_complex::Complex64;

use crate::linalg::I;

/// `sin x / x`, continuous at 0.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// `Γ(ω, τ) = (1/τ)∫₀^τ e^{iωt} dt = e^{iωτ/2} sinc(ωτ/2)`.
pub fn gamma_sinc(omega: f64, tau: f64) -> Complex64 {
    let x = 0.5 * omega * tau;
    (I * x).exp() * sinc(x)
}

/// `f(t) = Σ_k A_k e^{iω_k t}`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExpSum {
    pub terms: Vec<(Complex64, f64)>,
}

impl ExpSum {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(a: Complex64) -> Self {
        Self {
            terms: vec![(a, 0.0)],
        }
    }

    pub fn exp(a: Complex64, omega: f64) -> Self {
        Self {
            terms: vec![(a, omega)],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|(a, _)| a.norm() == 0.0)
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        self.terms.iter().map(|(a, w)| a * (I * (w * t)).exp()).sum()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (a, w) in &self.terms {
            for (b, v) in &other.terms {
                terms.push((a * b, w + v));
            }
        }
        Self { terms }
    }

    /// `(1/t)∫₀ᵗ f`, exact per term.
    pub fn mean(&self, t: f64) -> Complex64 {
        self.terms.iter().map(|(a, w)| a * gamma_sinc(*w, t)).sum()
    }
}

/// `Γ^{αγ}_{βδ}(t) = (1/t)∫₀ᵗ p_βα(t′) q_δγ(t′) dt′`.
#[derive(Debug, Clone)]
pub struct GammaTensor {
    /// `(n_α, n_γ, n_β, n_δ)`.
    pub shape: (usize, usize, usize, usize),
    data: Vec<Complex64>,
}

impl GammaTensor {
    pub fn get(&self, alpha: usize, gamma: usize, beta: usize, delta: usize) -> Complex64 {
        let (_, ng, nb, nd) = self.shape;
        self.data[((alpha * ng + gamma) * nb + beta) * nd + delta]
    }
}

/// `p[β][α]` and `q[δ][γ]` are exponential sums.
pub fn gamma_tensor(p: &[Vec<ExpSum>], q: &[Vec<ExpSum>], t: f64) -> GammaTensor {
    let nb = p.len();
    let na = p.first().map_or(0, Vec::len);
    let nd = q.len();
    let ng = q.first().map_or(0, Vec::len);
    let mut data = Vec::with_capacity(na * ng * nb * nd);
    for alpha in 0..na {
        for gamma in 0..ng {
            for row_p in p {
                for row_q in q {
                    data.push(row_p[alpha].mul(&row_q[gamma]).mean(t));
                }
            }
        }
    }
    GammaTensor {
        shape: (na, ng, nb, nd),
        data,
    }
}
