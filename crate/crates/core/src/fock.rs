//! Truncated Fock-space operators, states and Weyl quantization.
//!
//! Multi-mode operators live on the Kronecker product of the per-mode spaces,
//! mode 0 (the system) being the most significant index. `x = (a + a†)/√(2ω)`
//! and `p = i√(ω/2)(a† − a)`.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, c, Operator, I};
use crate::poly_mech::PolyObservable;

/// Hermiticity/trace tolerance for density matrices.
pub const DENSITY_TOL: f64 = 1e-10;
/// Most negative eigenvalue accepted in a density matrix.
pub const NEG_EIG_TOL: f64 = 1e-8;
/// Largest thermal weight allowed beyond the truncation.
pub const THERMAL_TAIL_LIMIT: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct FockSpec {
    dims: Vec<usize>,
    frequencies: Vec<f64>,
}

impl FockSpec {
    pub fn new(dims: Vec<usize>, frequencies: Vec<f64>) -> Result<Self> {
        if dims.is_empty() || dims.len() != frequencies.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} dims for {} frequencies",
                dims.len(),
                frequencies.len()
            )));
        }
        if let Some(&n) = dims.iter().find(|&&n| n < 2) {
            return Err(Error::InvalidParams(format!("mode dimension {n} < 2")));
        }
        if let Some(&w) = frequencies.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(Error::InvalidParams(format!("mode frequency {w} must be positive")));
        }
        Ok(Self { dims, frequencies })
    }

    pub fn single(dim: usize, omega: f64) -> Result<Self> {
        Self::new(vec![dim], vec![omega])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn frequencies(&self) -> &[f64] {
        &self.frequencies
    }

    pub fn n_modes(&self) -> usize {
        self.dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    /// The one-mode spec of `mode`.
    pub fn mode_spec(&self, mode: usize) -> Result<Self> {
        self.check_mode(mode)?;
        Self::single(self.dims[mode], self.frequencies[mode])
    }

    fn check_mode(&self, mode: usize) -> Result<()> {
        if mode >= self.dims.len() {
            return Err(Error::IndexOutOfBounds {
                index: mode,
                len: self.dims.len(),
            });
        }
        Ok(())
    }
}

/// Ladder and quadrature operators of one mode embedded in the full space.
#[derive(Debug, Clone)]
pub struct LadderOps {
    pub a: Operator,
    pub a_dag: Operator,
    pub x: Operator,
    pub p: Operator,
}

/// Truncated single-mode annihilation operator: `a|n⟩ = √n |n−1⟩`.
pub fn annihilation(dim: usize) -> Operator {
    let mut a = linalg::zeros(dim);
    for n in 1..dim {
        a[(n - 1, n)] = c((n as f64).sqrt());
    }
    a
}

/// Number operator `diag(0, 1, …, N−1)`.
pub fn number(dim: usize) -> Operator {
    Operator::from_diagonal(&DVector::from_fn(dim, |n, _| c(n as f64)))
}

/// Kronecker product, first factor most significant.
pub fn tensor(ops: &[Operator]) -> Operator {
    let mut it = ops.iter();
    let first = match it.next() {
        Some(op) => op.clone(),
        None => return linalg::identity(1),
    };
    it.fold(first, |acc, op| acc.kronecker(op))
}

/// Places a single-mode operator on `mode`, identities elsewhere.
pub fn embed(spec: &FockSpec, mode: usize, op: &Operator) -> Result<Operator> {
    spec.check_mode(mode)?;
    if op.nrows() != spec.dims[mode] || op.ncols() != spec.dims[mode] {
        return Err(Error::DimensionMismatch(format!(
            "operator {:?} on mode of dimension {}",
            op.shape(),
            spec.dims[mode]
        )));
    }
    let factors: Vec<Operator> = spec
        .dims
        .iter()
        .enumerate()
        .map(|(k, &n)| if k == mode { op.clone() } else { linalg::identity(n) })
        .collect();
    Ok(tensor(&factors))
}

pub fn ladder_ops(spec: &FockSpec, mode: usize) -> Result<LadderOps> {
    spec.check_mode(mode)?;
    let n = spec.dims[mode];
    let w = spec.frequencies[mode];
    let a1 = annihilation(n);
    let ad1 = a1.adjoint();
    let x1 = (&a1 + &ad1) * c((0.5 / w).sqrt());
    let p1 = (&ad1 - &a1) * (I * (0.5 * w).sqrt());
    Ok(LadderOps {
        a: embed(spec, mode, &a1)?,
        a_dag: embed(spec, mode, &ad1)?,
        x: embed(spec, mode, &x1)?,
        p: embed(spec, mode, &p1)?,
    })
}

/// Partial trace keeping the modes in `keep` (in their original order).
pub fn partial_trace(rho: &Operator, dims: &[usize], keep: &[usize]) -> Result<Operator> {
    let total: usize = dims.iter().product();
    if rho.nrows() != total || rho.ncols() != total {
        return Err(Error::DimensionMismatch(format!(
            "operator {:?} on space of dimension {}",
            rho.shape(),
            total
        )));
    }
    if let Some(&k) = keep.iter().find(|&&k| k >= dims.len()) {
        return Err(Error::IndexOutOfBounds {
            index: k,
            len: dims.len(),
        });
    }
    let mut keep_sorted = keep.to_vec();
    keep_sorted.sort_unstable();
    keep_sorted.dedup();
    let traced: Vec<usize> = (0..dims.len()).filter(|k| !keep_sorted.contains(k)).collect();
    let kd: usize = keep_sorted.iter().map(|&k| dims[k]).product();
    let td: usize = traced.iter().map(|&k| dims[k]).product();

    // Flat index of the full space from (kept multi-index, traced multi-index).
    let compose = |ki: usize, ti: usize| -> usize {
        let mut digits = vec![0usize; dims.len()];
        let mut r = ki;
        for &k in keep_sorted.iter().rev() {
            digits[k] = r % dims[k];
            r /= dims[k];
        }
        let mut r = ti;
        for &k in traced.iter().rev() {
            digits[k] = r % dims[k];
            r /= dims[k];
        }
        digits.iter().zip(dims).fold(0, |acc, (&d, &n)| acc * n + d)
    };
    let index: Vec<Vec<usize>> = (0..kd)
        .map(|ki| (0..td).map(|ti| compose(ki, ti)).collect())
        .collect();

    let mut out = Operator::zeros(kd, kd);
    for i in 0..kd {
        for j in 0..kd {
            let mut s = Complex64::new(0.0, 0.0);
            for t in 0..td {
                s += rho[(index[i][t], index[j][t])];
            }
            out[(i, j)] = s;
        }
    }
    Ok(out)
}

/// Validated density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(Operator);

impl DensityMatrix {
    pub fn new(rho: Operator) -> Result<Self> {
        if rho.nrows() != rho.ncols() || rho.nrows() == 0 {
            return Err(Error::InvalidDensity(format!("shape {:?}", rho.shape())));
        }
        let herm = linalg::hermiticity_residual(&rho);
        if herm > DENSITY_TOL {
            return Err(Error::InvalidDensity(format!("hermiticity residual {herm:e}")));
        }
        let tr = rho.trace();
        if (tr - c(1.0)).norm() > DENSITY_TOL {
            return Err(Error::InvalidDensity(format!("trace {tr}")));
        }
        let min = linalg::min_eigenvalue(&rho);
        if min < -NEG_EIG_TOL {
            return Err(Error::InvalidDensity(format!("min eigenvalue {min:e}")));
        }
        Ok(Self(rho))
    }

    /// `|ψ⟩⟨ψ|` after normalizing `ψ`.
    pub fn pure(psi: &DVector<Complex64>) -> Result<Self> {
        let n = psi.norm();
        if n == 0.0 {
            return Err(Error::InvalidDensity("zero state vector".into()));
        }
        let v = psi / c(n);
        Self::new(&v * v.adjoint())
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self(linalg::identity(dim) * c(1.0 / dim as f64))
    }

    pub fn tensor(&self, other: &Self) -> Self {
        Self(self.0.kronecker(&other.0))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_op(&self) -> &Operator {
        &self.0
    }

    pub fn into_inner(self) -> Operator {
        self.0
    }

    pub fn purity(&self) -> f64 {
        linalg::hs_inner(&self.0, &self.0).re
    }

    pub fn entropy(&self) -> f64 {
        entropy(&self.0)
    }

    pub fn expect(&self, op: &Operator) -> Complex64 {
        (&self.0 * op).trace()
    }
}

/// von Neumann entropy in nats.
pub fn entropy(rho: &Operator) -> f64 {
    linalg::hermitian_eigenvalues(rho)
        .iter()
        .filter(|&&l| l > 1e-15)
        .map(|&l| -l * l.ln())
        .sum()
}

/// `|n⟩` in a `dim`-level mode.
pub fn fock_state(dim: usize, n: usize) -> Result<DVector<Complex64>> {
    if n >= dim {
        return Err(Error::IndexOutOfBounds { index: n, len: dim });
    }
    let mut v = DVector::zeros(dim);
    v[n] = c(1.0);
    Ok(v)
}

/// Truncated coherent state, renormalized over the kept levels.
pub fn coherent_state(dim: usize, alpha: Complex64) -> DVector<Complex64> {
    let mut v = DVector::zeros(dim);
    let mut amp = c((-0.5 * alpha.norm_sqr()).exp());
    for n in 0..dim {
        if n > 0 {
            amp *= alpha / c((n as f64).sqrt());
        }
        v[n] = amp;
    }
    let norm = v.norm();
    v / c(norm)
}

/// Bath inverse temperature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InvTemp {
    Finite(f64),
    /// The `inv_temp → ∞` limit (ground state).
    ZeroTemperature,
}

impl InvTemp {
    pub fn new(inv_temp: f64) -> Result<Self> {
        if inv_temp.is_finite() && inv_temp > 0.0 {
            Ok(Self::Finite(inv_temp))
        } else {
            Err(Error::InvalidInverseTemperature(inv_temp))
        }
    }

    /// Bose–Einstein occupation `1/(e^{βω} − 1)` of an untruncated mode.
    pub fn occupation(&self, omega: f64) -> f64 {
        match *self {
            Self::Finite(b) => 1.0 / (b * omega).exp_m1(),
            Self::ZeroTemperature => 0.0,
        }
    }
}

/// Thermal populations over `dim` levels, renormalized.
pub fn thermal_populations(dim: usize, omega: f64, inv_temp: InvTemp) -> Result<Vec<f64>> {
    match inv_temp {
        InvTemp::ZeroTemperature => {
            let mut p = vec![0.0; dim];
            p[0] = 1.0;
            Ok(p)
        }
        InvTemp::Finite(b) => {
            if !(b.is_finite() && b > 0.0) {
                return Err(Error::InvalidInverseTemperature(b));
            }
            let q = (-b * omega).exp();
            let tail = q.powi(dim as i32);
            if tail > THERMAL_TAIL_LIMIT {
                return Err(Error::ThermalTail {
                    tail,
                    dim,
                    limit: THERMAL_TAIL_LIMIT,
                });
            }
            let w: Vec<f64> = (0..dim).map(|m| q.powi(m as i32)).collect();
            let z: f64 = w.iter().sum();
            Ok(w.into_iter().map(|x| x / z).collect())
        }
    }
}

/// Thermal state of one mode of `spec` (on that mode's space only).
pub fn thermal_state(spec: &FockSpec, mode: usize, inv_temp: InvTemp) -> Result<DensityMatrix> {
    spec.check_mode(mode)?;
    let p = thermal_populations(spec.dims[mode], spec.frequencies[mode], inv_temp)?;
    Ok(DensityMatrix(Operator::from_diagonal(&DVector::from_iterator(
        p.len(),
        p.into_iter().map(c),
    ))))
}

/// `U = e^{−iHt}` through the eigendecomposition of hermitian `H`.
pub fn propagate(h: &Operator, t: f64) -> Result<Operator> {
    let herm = linalg::hermiticity_residual(h);
    if herm > 1e-10 * linalg::max_abs(h).max(1.0) {
        return Err(Error::NotHermitian { residual: herm });
    }
    let (e, v) = linalg::hermitian_eigen(h);
    let phases = DVector::from_iterator(e.len(), e.iter().map(|&ek| (-I * (ek * t)).exp()));
    let mut vd = v.clone();
    for (j, ph) in phases.iter().enumerate() {
        for i in 0..vd.nrows() {
            vd[(i, j)] *= ph;
        }
    }
    Ok(vd * v.adjoint())
}

/// Weyl-ordered operator of a real polynomial of degree ≤ 2.
///
/// Phase-space variable `q_k`/`p_k` maps to the quadratures of mode `k`.
/// Variables of degrees of freedom beyond `spec.n_modes()` must not appear.
pub fn weyl_quantize(poly: &PolyObservable, spec: &FockSpec) -> Result<Operator> {
    if poly.degree() > 2 {
        return Err(Error::DegreeTooHigh {
            degree: poly.degree(),
            max: 2,
        });
    }
    let layout = poly.layout();
    let n_dof = layout.n_dof();
    let mut quads: Vec<Option<Operator>> = vec![None; 2 * n_dof];
    for k in 0..n_dof.min(spec.n_modes()) {
        let ops = ladder_ops(spec, k)?;
        quads[layout.q(k)] = Some(ops.x);
        quads[layout.p(k)] = Some(ops.p);
    }
    let dim = spec.total_dim();
    let mut out = Operator::zeros(dim, dim);
    for (exps, coeff) in poly.terms() {
        let mut factors: Vec<&Operator> = Vec::with_capacity(2);
        for (var, &e) in exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let op = quads[var].as_ref().ok_or_else(|| {
                Error::DimensionMismatch(format!(
                    "variable {} has no mode in a {}-mode space",
                    layout.names()[var],
                    spec.n_modes()
                ))
            })?;
            for _ in 0..e {
                factors.push(op);
            }
        }
        let term = match factors.as_slice() {
            [] => linalg::identity(dim),
            [a] => (*a).clone(),
            [a, b] => (*a * *b + *b * *a) * c(0.5),
            _ => unreachable!("degree checked above"),
        };
        out += term * c(coeff);
    }
    Ok(out)
}

/// Orthonormal Hilbert–Schmidt basis of `dim × dim` matrices.
///
/// Order: `S₀ = I/√d`, then the `d − 1` diagonal generalized Gell-Mann
/// matrices, then the matrix units `E_jk` (`j ≠ k`) in row-major order.
pub fn hs_basis(dim: usize) -> Vec<Operator> {
    let mut basis = Vec::with_capacity(dim * dim);
    basis.push(linalg::identity(dim) * c(1.0 / (dim as f64).sqrt()));
    for l in 1..dim {
        let norm = 1.0 / ((l * (l + 1)) as f64).sqrt();
        let mut m = linalg::zeros(dim);
        for j in 0..l {
            m[(j, j)] = c(norm);
        }
        m[(l, l)] = c(-(l as f64) * norm);
        basis.push(m);
    }
    for j in 0..dim {
        for k in 0..dim {
            if j != k {
                let mut m = linalg::zeros(dim);
                m[(j, k)] = c(1.0);
                basis.push(m);
            }
        }
    }
    basis
}

/// Largest deviation of the Gram matrix `Tr(S_α† S_β)` from the identity.
pub fn gram_residual(basis: &[Operator]) -> f64 {
    let mut r: f64 = 0.0;
    for (a, sa) in basis.iter().enumerate() {
        for (b, sb) in basis.iter().enumerate() {
            let g = linalg::hs_inner(sa, sb);
            let target = if a == b { 1.0 } else { 0.0 };
            r = r.max((g - c(target)).norm());
        }
    }
    r
}
