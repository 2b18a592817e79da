//! GKS generators, their diagonal Lindblad form, and RK4 master-equation
//! integration with invariant monitoring.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::fock::DensityMatrix;
use crate::linalg::{self, c, Operator, I};

/// Hermiticity tolerance (relative to `max(1, max|γ|)`).
pub const GAMMA_HERM_TOL: f64 = 1e-10;
/// Negative eigenvalues of γ above `−PSD_CLIP` are treated as zero.
pub const PSD_CLIP: f64 = 1e-8;

/// `γ_αβ` together with its operator basis `S_1 … S_n`.
#[derive(Debug, Clone)]
pub struct DissipationMatrix {
    gamma: Operator,
    basis: Vec<Operator>,
}

impl DissipationMatrix {
    /// Checks shapes and hermiticity; positivity is checked by consumers.
    pub fn new(gamma: Operator, basis: Vec<Operator>) -> Result<Self> {
        let n = basis.len();
        if gamma.nrows() != n || gamma.ncols() != n {
            return Err(Error::DimensionMismatch(format!(
                "γ is {:?} for {} basis operators",
                gamma.shape(),
                n
            )));
        }
        if let Some(first) = basis.first() {
            let d = first.nrows();
            if basis.iter().any(|s| s.nrows() != d || s.ncols() != d) {
                return Err(Error::DimensionMismatch(
                    "basis operators differ in shape".into(),
                ));
            }
        }
        let herm = linalg::hermiticity_residual(&gamma);
        if herm > GAMMA_HERM_TOL * linalg::max_abs(&gamma).max(1.0) {
            return Err(Error::NotHermitian { residual: herm });
        }
        Ok(Self { gamma, basis })
    }

    pub fn gamma(&self) -> &Operator {
        &self.gamma
    }

    pub fn basis(&self) -> &[Operator] {
        &self.basis
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// Hilbert-space dimension the basis acts on (0 for an empty basis).
    pub fn space_dim(&self) -> usize {
        self.basis.first().map_or(0, |s| s.nrows())
    }

    pub fn min_eigenvalue(&self) -> f64 {
        if self.is_empty() {
            return 0.0;
        }
        linalg::min_eigenvalue(&self.gamma)
    }

    /// Errors when γ has an eigenvalue below `−PSD_CLIP`.
    pub fn check_psd(&self) -> Result<()> {
        let m = self.min_eigenvalue();
        if m < -PSD_CLIP {
            return Err(Error::NotPositive { min_eigenvalue: m });
        }
        Ok(())
    }

    /// `Σ γ_αβ S_α ρ S_β†`.
    pub fn jump_term(&self, rho: &Operator) -> Operator {
        let d = rho.nrows();
        let mut out = Operator::zeros(d, d);
        for (a, sa) in self.basis.iter().enumerate() {
            let sr = sa * rho;
            for (b, sb) in self.basis.iter().enumerate() {
                let g = self.gamma[(a, b)];
                if g.norm() == 0.0 {
                    continue;
                }
                out += &sr * sb.adjoint() * g;
            }
        }
        out
    }

    /// `Σ γ_αβ S_β† S_α`.
    pub fn anticommutator_operator(&self) -> Operator {
        let d = self.space_dim();
        let mut out = Operator::zeros(d, d);
        for (a, sa) in self.basis.iter().enumerate() {
            for (b, sb) in self.basis.iter().enumerate() {
                let g = self.gamma[(a, b)];
                if g.norm() == 0.0 {
                    continue;
                }
                out += sb.adjoint() * sa * g;
            }
        }
        out
    }
}

/// Anything that maps `ρ ↦ dρ/dt`.
pub trait Generator {
    fn dim(&self) -> usize;
    fn apply(&self, rho: &Operator) -> Operator;
    fn hamiltonian(&self) -> &Operator;
}

/// `L[ρ] = −i[H,ρ] + Σ γ_αβ (S_α ρ S_β† − ½{S_β† S_α, ρ})` in the basis form.
#[derive(Debug, Clone)]
pub struct GKSGenerator {
    h_total: Operator,
    dissipation: DissipationMatrix,
    anti: Operator,
}

impl GKSGenerator {
    pub fn h_total(&self) -> &Operator {
        &self.h_total
    }

    pub fn dissipation(&self) -> &DissipationMatrix {
        &self.dissipation
    }
}

fn check_hamiltonian(h: &Operator) -> Result<()> {
    let r = linalg::hermiticity_residual(h);
    if r > 1e-10 * linalg::max_abs(h).max(1.0) {
        return Err(Error::NotHermitian { residual: r });
    }
    Ok(())
}

/// Assembles the generator with `H = H_S + H_LS`.
pub fn build_generator(
    h_s: &Operator,
    h_ls: Option<&Operator>,
    gamma: DissipationMatrix,
) -> Result<GKSGenerator> {
    let d = h_s.nrows();
    if h_s.ncols() != d {
        return Err(Error::DimensionMismatch(format!("H_S is {:?}", h_s.shape())));
    }
    if !gamma.is_empty() && gamma.space_dim() != d {
        return Err(Error::DimensionMismatch(format!(
            "basis acts on dimension {}, H_S on {}",
            gamma.space_dim(),
            d
        )));
    }
    let h_total = match h_ls {
        Some(h) if h.shape() != h_s.shape() => {
            return Err(Error::DimensionMismatch(format!(
                "H_LS is {:?}, H_S is {:?}",
                h.shape(),
                h_s.shape()
            )))
        }
        Some(h) => h_s + h,
        None => h_s.clone(),
    };
    check_hamiltonian(&h_total)?;
    gamma.check_psd()?;
    let anti = if gamma.is_empty() {
        Operator::zeros(d, d)
    } else {
        gamma.anticommutator_operator()
    };
    Ok(GKSGenerator {
        h_total,
        dissipation: gamma,
        anti,
    })
}

impl Generator for GKSGenerator {
    fn dim(&self) -> usize {
        self.h_total.nrows()
    }

    fn apply(&self, rho: &Operator) -> Operator {
        let unitary = linalg::commutator(&self.h_total, rho) * (-I);
        let mut out = unitary - linalg::anticommutator(&self.anti, rho) * c(0.5);
        if !self.dissipation.is_empty() {
            out += self.dissipation.jump_term(rho);
        }
        out
    }

    fn hamiltonian(&self) -> &Operator {
        &self.h_total
    }
}

/// Diagonal form `γ = u diag(rates) u†`, `L_c = Σ_a S_a u_ac`.
#[derive(Debug, Clone)]
pub struct LindbladForm {
    /// Non-negative, descending.
    pub rates: Vec<f64>,
    pub jump_ops: Vec<Operator>,
    pub u: Operator,
}

impl LindbladForm {
    /// `max |u†γu − diag(rates)|`.
    pub fn diagonalization_residual(&self, gamma: &Operator) -> f64 {
        let diag = Operator::from_diagonal(&DVector::from_iterator(
            self.rates.len(),
            self.rates.iter().map(|&r| c(r)),
        ));
        linalg::max_abs(&(self.u.adjoint() * gamma * &self.u - diag))
    }

    /// `Σ_c rate_c L_c ρ L_c†`.
    pub fn jump_term(&self, rho: &Operator) -> Operator {
        let d = rho.nrows();
        let mut out = Operator::zeros(d, d);
        for (r, l) in self.rates.iter().zip(&self.jump_ops) {
            if *r == 0.0 {
                continue;
            }
            out += l * rho * l.adjoint() * c(*r);
        }
        out
    }
}

pub fn to_lindblad_form(gamma: &DissipationMatrix) -> Result<LindbladForm> {
    let n = gamma.len();
    if n == 0 {
        return Ok(LindbladForm {
            rates: Vec::new(),
            jump_ops: Vec::new(),
            u: Operator::zeros(0, 0),
        });
    }
    let (vals, vecs) = linalg::hermitian_eigen(gamma.gamma());
    let mut rates = Vec::with_capacity(n);
    let mut u = Operator::zeros(n, n);
    for (col, k) in (0..n).rev().enumerate() {
        let r = vals[k];
        if r < -PSD_CLIP {
            return Err(Error::NotPositive { min_eigenvalue: r });
        }
        rates.push(r.max(0.0));
        let mut v = vecs.column(k).into_owned();
        linalg::fix_phase(&mut v);
        u.set_column(col, &v);
    }
    let d = gamma.space_dim();
    let jump_ops = (0..n)
        .map(|col| {
            let mut l = Operator::zeros(d, d);
            for (a, s) in gamma.basis().iter().enumerate() {
                l += s * u[(a, col)];
            }
            l
        })
        .collect();
    Ok(LindbladForm { rates, jump_ops, u })
}

/// `L[ρ] = −i[H,ρ] + Σ_c γ̃_c (L_c ρ L_c† − ½{L_c† L_c, ρ})`; zero rates skipped.
#[derive(Debug, Clone)]
pub struct LindbladGenerator {
    h: Operator,
    form: LindbladForm,
    anti: Operator,
}

impl LindbladGenerator {
    pub fn new(h: &Operator, form: LindbladForm) -> Result<Self> {
        check_hamiltonian(h)?;
        let d = h.nrows();
        if let Some(l) = form.jump_ops.iter().find(|l| l.nrows() != d) {
            return Err(Error::DimensionMismatch(format!(
                "jump operator {:?} for H of dimension {}",
                l.shape(),
                d
            )));
        }
        if let Some(&r) = form.rates.iter().find(|&&r| r < 0.0) {
            return Err(Error::NotPositive { min_eigenvalue: r });
        }
        let mut anti = Operator::zeros(d, d);
        for (r, l) in form.rates.iter().zip(&form.jump_ops) {
            if *r != 0.0 {
                anti += l.adjoint() * l * c(*r);
            }
        }
        Ok(Self {
            h: h.clone(),
            form,
            anti,
        })
    }

    pub fn from_gks(g: &GKSGenerator) -> Result<Self> {
        Self::new(&g.h_total, to_lindblad_form(&g.dissipation)?)
    }

    pub fn form(&self) -> &LindbladForm {
        &self.form
    }
}

impl Generator for LindbladGenerator {
    fn dim(&self) -> usize {
        self.h.nrows()
    }

    fn apply(&self, rho: &Operator) -> Operator {
        linalg::commutator(&self.h, rho) * (-I) + self.form.jump_term(rho)
            - linalg::anticommutator(&self.anti, rho) * c(0.5)
    }

    fn hamiltonian(&self) -> &Operator {
        &self.h
    }
}

/// Scalar diagnostics of a (candidate) density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvariantReport {
    pub trace: f64,
    pub trace_imag: f64,
    pub hermiticity: f64,
    pub min_eigenvalue: f64,
    pub purity: f64,
}

pub fn monitor_invariants(rho: &Operator) -> InvariantReport {
    let tr = rho.trace();
    InvariantReport {
        trace: tr.re,
        trace_imag: tr.im,
        hermiticity: linalg::hermiticity_residual(rho),
        min_eigenvalue: linalg::min_eigenvalue(rho),
        purity: linalg::hs_inner(rho, rho).re,
    }
}

/// Hard limits past which [`evolve_master`] aborts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonitorLimits {
    pub trace_drift: f64,
    pub hermiticity: f64,
    pub min_eigenvalue: f64,
}

impl Default for MonitorLimits {
    fn default() -> Self {
        Self {
            trace_drift: 1e-6,
            hermiticity: 1e-6,
            min_eigenvalue: -1e-6,
        }
    }
}

#[derive(Debug, Clone)]
pub struct EvolveOptions {
    /// Record every `sample_every`-th step (the final step is always recorded).
    pub sample_every: usize,
    pub limits: MonitorLimits,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        Self {
            sample_every: 1,
            limits: MonitorLimits::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct MasterTrajectory {
    pub times: Vec<f64>,
    pub states: Vec<Operator>,
    pub monitors: Vec<InvariantReport>,
    /// `dt · ‖H‖`, reported against the 0.1 guideline.
    pub step_quality: f64,
}

fn rk4_step<G: Generator + ?Sized>(gen: &G, rho: &Operator, dt: f64) -> Operator {
    let h = c(dt);
    let k1 = gen.apply(rho);
    let k2 = gen.apply(&(rho + &k1 * c(0.5 * dt)));
    let k3 = gen.apply(&(rho + &k2 * c(0.5 * dt)));
    let k4 = gen.apply(&(rho + &k3 * h));
    rho + (k1 + k2 * c(2.0) + k3 * c(2.0) + k4) * c(dt / 6.0)
}

fn check_limits(r: &InvariantReport, limits: &MonitorLimits, t: f64) -> Result<()> {
    let drift = (r.trace - 1.0).abs().max(r.trace_imag.abs());
    if drift > limits.trace_drift {
        return Err(Error::MonitorBreach {
            t,
            what: format!("trace drift {drift:e}"),
        });
    }
    if r.hermiticity > limits.hermiticity {
        return Err(Error::MonitorBreach {
            t,
            what: format!("hermiticity residual {:e}", r.hermiticity),
        });
    }
    if r.min_eigenvalue < limits.min_eigenvalue {
        return Err(Error::MonitorBreach {
            t,
            what: format!("min eigenvalue {:e}", r.min_eigenvalue),
        });
    }
    Ok(())
}

/// Fixed-step RK4 integration of `dρ/dt = L[ρ]`.
pub fn evolve_master<G: Generator + ?Sized>(
    gen: &G,
    rho0: &DensityMatrix,
    t_final: f64,
    dt: f64,
    opts: &EvolveOptions,
) -> Result<MasterTrajectory> {
    if rho0.dim() != gen.dim() {
        return Err(Error::DimensionMismatch(format!(
            "state of dimension {} for generator of dimension {}",
            rho0.dim(),
            gen.dim()
        )));
    }
    if !(dt > 0.0 && dt.is_finite() && t_final >= 0.0 && t_final.is_finite()) {
        return Err(Error::InvalidParams(format!(
            "need dt > 0 and t_final ≥ 0, got dt = {dt}, t_final = {t_final}"
        )));
    }
    let every = opts.sample_every.max(1);
    let steps = (t_final / dt).round() as usize;
    let mut rho = rho0.as_op().clone();
    let mut out = MasterTrajectory {
        times: vec![0.0],
        states: vec![rho.clone()],
        monitors: vec![monitor_invariants(&rho)],
        step_quality: dt * linalg::operator_norm(gen.hamiltonian()),
    };
    for k in 1..=steps {
        rho = rk4_step(gen, &rho, dt);
        if k % every == 0 || k == steps {
            let t = k as f64 * dt;
            let rep = monitor_invariants(&rho);
            check_limits(&rep, &opts.limits, t)?;
            out.times.push(t);
            out.states.push(rho.clone());
            out.monitors.push(rep);
        }
    }
    Ok(out)
}
