#![allow(dead_code)]

use dirac_lindblad::fock::DensityMatrix;
use dirac_lindblad::linalg::Operator;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_complex_matrix(r: &mut impl Rng, rows: usize, cols: usize) -> Operator {
    Operator::from_fn(rows, cols, |_, _| {
        Complex64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))
    })
}

pub fn random_density(r: &mut impl Rng, dim: usize) -> DensityMatrix {
    let g = random_complex_matrix(r, dim, dim);
    let rho = &g * g.adjoint();
    let tr = rho.trace();
    DensityMatrix::new(rho / tr).unwrap()
}

pub fn random_psd(r: &mut impl Rng, dim: usize, rank: usize) -> Operator {
    let g = random_complex_matrix(r, dim, rank);
    &g * g.adjoint()
}

pub fn random_hermitian(r: &mut impl Rng, dim: usize) -> Operator {
    let g = random_complex_matrix(r, dim, dim);
    (&g + g.adjoint()) * Complex64::new(0.5, 0.0)
}

/// Adaptive Simpson quadrature of a complex integrand.
pub fn simpson<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64, tol: f64) -> Complex64 {
    fn rec<F: Fn(f64) -> Complex64>(
        f: &F,
        a: f64,
        b: f64,
        fa: Complex64,
        fm: Complex64,
        fb: Complex64,
        whole: Complex64,
        tol: f64,
        depth: u32,
    ) -> Complex64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (fa + flm * 4.0 + fm) * ((m - a) / 6.0);
        let right = (fm + frm * 4.0 + fb) * ((b - m) / 6.0);
        let delta = left + right - whole;
        if depth == 0 || delta.norm() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (fa + fm * 4.0 + fb) * ((b - a) / 6.0);
    rec(f, a, b, fa, fm, fb, whole, tol, 50)
}

/// `(1/τ)∫₀^τ e^{iωt} dt` by quadrature.
pub fn gamma_quad(omega: f64, tau: f64) -> Complex64 {
    let f = |t: f64| Complex64::new(0.0, omega * t).exp();
    simpson(&f, 0.0, tau, 1e-14 * tau.max(1.0)) / tau
}

pub fn max_abs(a: &Operator) -> f64 {
    a.iter().fold(0.0, |m, z| m.max(z.norm()))
}
