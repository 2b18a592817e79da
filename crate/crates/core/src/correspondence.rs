//! Dirac-bracket / Lindblad correspondence on the coupled-oscillator model.
//!
//! The quantum side is `½ γ_αβ S_β† S_α` with `S = (a, a†)`; the classical
//! side is `(1/η) φ₂²` built from the constraints
//! `φ₁ = αx₁ + β(p₁ + (k′/k₂)p₂)`, `φ₂ = uβx₁ − αp₁`, `u = k₁ − k′²/k₂`.

use std::sync::Arc;

use num_complex::Complex64;

use crate::coarse_grain::{
    dissipation_limit, gamma11_limit, model_basis, GammaEntries, ModelParams,
};
use crate::error::{Error, Result};
use crate::fock::{weyl_quantize, FockSpec};
use crate::lindblad::{to_lindblad_form, DissipationMatrix};
use crate::linalg::{self, c, Operator, I};
use crate::poly_mech::{
    consistency_chain, poisson_bracket, AffineConstraint, PhaseLayout, PolyObservable,
};

/// Top Fock levels excluded from operator comparisons by default.
pub const DEFAULT_INTERIOR_EXCLUDE: usize = 2;

/// `|l − r| / max(|l|, |r|)`, zero when both vanish.
fn rel(l: Complex64, r: Complex64) -> f64 {
    let s = l.norm().max(r.norm());
    if s == 0.0 {
        0.0
    } else {
        (l - r).norm() / s
    }
}

fn relf(l: f64, r: f64) -> f64 {
    rel(c(l), c(r))
}

/// Phase layout `(x1, x2, p1, p2)`.
pub fn model_layout() -> Arc<PhaseLayout> {
    PhaseLayout::with_names(2, ["x1", "x2", "p1", "p2"].map(String::from).to_vec())
        .expect("two degrees of freedom")
}

/// `H_c = ½p₁² + ½k₁x₁² + ½p₂² + ½k₂x₂² − k′x₁x₂`.
pub fn model_hamiltonian(params: &ModelParams, layout: &Arc<PhaseLayout>) -> Result<PolyObservable> {
    if layout.n_dof() != 2 {
        return Err(Error::LayoutMismatch(format!(
            "model needs 2 degrees of freedom, layout has {}",
            layout.n_dof()
        )));
    }
    PolyObservable::from_terms(
        layout,
        [
            (vec![0, 0, 2, 0], 0.5),
            (vec![2, 0, 0, 0], 0.5 * params.k1),
            (vec![0, 0, 0, 2], 0.5),
            (vec![0, 2, 0, 0], 0.5 * params.k2),
            (vec![1, 1, 0, 0], -params.kprime),
        ],
    )
}

/// `u = k₁ − k′²/k₂`.
pub fn reduced_stiffness(params: &ModelParams) -> f64 {
    params.k1 - params.kprime * params.kprime / params.k2
}

/// Which closed form produced an α candidate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlphaSource {
    /// From the `x₁²` equation (uses `c₀`).
    XSquared,
    /// From the `p₁²` equation (uses `c₁`).
    PSquared,
}

impl AlphaSource {
    pub fn name(&self) -> &'static str {
        match self {
            AlphaSource::XSquared => "x_squared",
            AlphaSource::PSquared => "p_squared",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlphaCandidate {
    pub source: AlphaSource,
    pub sign: f64,
    /// `α²/β²` before the square root.
    pub radicand: f64,
    /// `None` when the radicand is negative.
    pub alpha: Option<f64>,
    pub eta: Option<f64>,
    /// Relative residuals of the reduced equations `(x², p², xp)`.
    pub residuals: Option<[f64; 3]>,
}

impl AlphaCandidate {
    pub fn max_residual(&self) -> Option<f64> {
        self.residuals.map(|r| r.iter().copied().fold(0.0, f64::max))
    }
}

/// Constraint coefficients compatible with a limit-form γ
/// (`γ₁₁ = γ₂₂`, `γ₁₂ = γ₁₁ e^{iθ}`).
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSolution {
    pub candidates: Vec<AlphaCandidate>,
    pub beta: f64,
    pub gamma_c: f64,
    pub delta: f64,
    /// `u = k₁ − k′²/k₂`.
    pub stiffness: f64,
    pub gamma11: f64,
    /// `θ`, equal to `ω₀τ` for the limit form.
    pub phase: f64,
    /// `c₀ = ω₀γ₁₁cos²(θ/2)`.
    pub c0: f64,
    /// `c₁ = γ₁₁sin²(θ/2)/ω₀`.
    pub c1: f64,
}

impl CoefficientSolution {
    /// Index of the real candidate with the smallest largest residual.
    pub fn best(&self) -> Option<usize> {
        self.candidates
            .iter()
            .enumerate()
            .filter_map(|(i, cand)| cand.max_residual().map(|r| (i, r)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .map(|(i, _)| i)
    }

    /// Left-hand sides `(c₀, c₁, −γ₁₁ sin θ / 2)` of the reduced equations.
    pub fn reduced_lhs(&self) -> [f64; 3] {
        [self.c0, self.c1, -0.5 * self.gamma11 * self.phase.sin()]
    }

    /// Right-hand sides `(u²β²/η, α²/η, −uαβ/η)`.
    pub fn reduced_rhs(&self, alpha: f64) -> [f64; 3] {
        let (u, b) = (self.stiffness, self.beta);
        let eta = alpha * alpha + u * b * b;
        [u * u * b * b / eta, alpha * alpha / eta, -u * alpha * b / eta]
    }

    pub fn reduced_residuals(&self, alpha: f64) -> [f64; 3] {
        let l = self.reduced_lhs();
        let r = self.reduced_rhs(alpha);
        [relf(l[0], r[0]), relf(l[1], r[1]), relf(l[2], r[2])]
    }

    /// Residual of the product identity on both sides:
    /// `c₀c₁ = (γ₁₁ sin θ / 2)²` and `R₅R₆ = R₇²`.
    pub fn identity_residual(&self, alpha: Option<f64>) -> f64 {
        let l = self.reduced_lhs();
        let mut r = relf(l[0] * l[1], l[2] * l[2]);
        if let Some(a) = alpha {
            let rr = self.reduced_rhs(a);
            r = r.max(relf(rr[0] * rr[1], rr[2] * rr[2]));
        }
        r
    }
}

/// Solves the reduced coefficient equations from the limit-form γ of `params`.
pub fn solve_coefficients(params: &ModelParams) -> Result<CoefficientSolution> {
    params.validate()?;
    let g = gamma11_limit(params);
    solve_coefficients_from(params, g, params.omega0() * params.tau)
}

/// As [`solve_coefficients`] for explicit `γ₁₁` and phase `θ`.
pub fn solve_coefficients_from(
    params: &ModelParams,
    gamma11: f64,
    phase: f64,
) -> Result<CoefficientSolution> {
    params.validate()?;
    if !(gamma11 > 0.0) {
        return Err(Error::Degenerate(format!(
            "gamma11 = {gamma11:e} must be positive (zero coupling or sinc node)"
        )));
    }
    let w0 = params.omega0();
    let u = reduced_stiffness(params);
    let beta = 1.0;
    let half = 0.5 * phase;
    let c0 = w0 * gamma11 * half.cos().powi(2);
    let c1 = gamma11 * half.sin().powi(2) / w0;
    let mut sol = CoefficientSolution {
        candidates: Vec::with_capacity(4),
        beta,
        gamma_c: 0.0,
        delta: params.kprime / params.k2 * beta,
        stiffness: u,
        gamma11,
        phase,
        c0,
        c1,
    };
    // α²/β² = u(u/c₀ − 1) from the x² equation, c₁u/(1 − c₁) from the p² one.
    let rad = [
        (AlphaSource::XSquared, if c0 > 0.0 { u * (u / c0 - 1.0) } else { f64::NAN }),
        (AlphaSource::PSquared, if c1 != 1.0 { c1 * u / (1.0 - c1) } else { f64::NAN }),
    ];
    for (source, r) in rad {
        for sign in [1.0, -1.0] {
            let mut cand = AlphaCandidate {
                source,
                sign,
                radicand: r,
                alpha: None,
                eta: None,
                residuals: None,
            };
            if r >= 0.0 {
                let a = sign * r.sqrt() * beta;
                let eta = a * a + u * beta * beta;
                let eta_general = a * a + params.k1 * beta * beta + sol.gamma_c * sol.gamma_c
                    - 2.0 * params.kprime * beta * sol.delta
                    + params.k2 * sol.delta * sol.delta;
                if relf(eta, eta_general) > 1e-12 {
                    return Err(Error::Internal(format!(
                        "eta mismatch: {eta} vs {eta_general}"
                    )));
                }
                cand.alpha = Some(a);
                cand.eta = Some(eta);
                cand.residuals = Some(sol.reduced_residuals(a));
            }
            sol.candidates.push(cand);
        }
    }
    Ok(sol)
}

/// `φ₁`, `φ₂` and the consistency-chain cross-check.
#[derive(Debug, Clone)]
pub struct ConstraintPair {
    pub phi1: AffineConstraint,
    pub phi2: AffineConstraint,
    pub eta: f64,
    /// `{φ₁, φ₂}_P`; equals `−η`.
    pub bracket: f64,
    /// Cosine between the chain's secondary and `φ₂`.
    pub chain_cosine: f64,
}

/// Constraints for coefficient `α` (with `β`, `δ` from `sol`).
pub fn build_constraints_for(
    alpha: f64,
    sol: &CoefficientSolution,
    params: &ModelParams,
) -> Result<ConstraintPair> {
    let (b, u) = (sol.beta, sol.stiffness);
    // Layout order (x1, x2, p1, p2).
    let phi1 = AffineConstraint::new(vec![alpha, sol.gamma_c, b, sol.delta], 0.0)?;
    let phi2 = AffineConstraint::new(vec![u * b, 0.0, -alpha, 0.0], 0.0)?;
    let eta = alpha * alpha + u * b * b;
    let layout = model_layout();
    let h = model_hamiltonian(params, &layout)?;
    let cs = consistency_chain(&h, std::slice::from_ref(&phi1))?;
    let chain_cosine = match cs.secondaries.as_slice() {
        [s] => s.cosine(&phi2),
        other => {
            return Err(Error::Internal(format!(
                "expected one secondary constraint, chain produced {}",
                other.len()
            )))
        }
    };
    Ok(ConstraintPair {
        bracket: crate::poly_mech::affine_bracket(&phi1, &phi2),
        phi1,
        phi2,
        eta,
        chain_cosine,
    })
}

/// Constraints for candidate `index` of `sol`.
pub fn build_constraints(
    sol: &CoefficientSolution,
    index: usize,
    params: &ModelParams,
) -> Result<ConstraintPair> {
    let cand = sol.candidates.get(index).ok_or(Error::IndexOutOfBounds {
        index,
        len: sol.candidates.len(),
    })?;
    let alpha = cand.alpha.ok_or(Error::NoRealCandidate)?;
    build_constraints_for(alpha, sol, params)
}

/// Classical side on the system space plus the dropped weakly-zero term.
#[derive(Debug, Clone)]
pub struct ClassicalLhs {
    /// `(1/η) Weyl(φ₂²)` on the system space.
    pub reduced: Operator,
    /// `D¹² Weyl(χ₂φ₁)` on system ⊗ bath, `χ₂ = {φ₂, H_c}`, `D¹² = −1/η`.
    pub weak_term: Operator,
    pub weak_term_norm: f64,
    /// Same norm restricted to the interior block.
    pub weak_term_interior_norm: f64,
}

pub fn classical_lhs_operator(
    pair: &ConstraintPair,
    params: &ModelParams,
    exclude: usize,
) -> Result<ClassicalLhs> {
    if pair.eta == 0.0 || !pair.eta.is_finite() {
        return Err(Error::Degenerate(format!("eta = {}", pair.eta)));
    }
    let layout = model_layout();
    let phi1 = pair.phi1.to_poly(&layout)?;
    let phi2 = pair.phi2.to_poly(&layout)?;
    let sq = phi2.try_mul(&phi2)?.scale(1.0 / pair.eta);
    let reduced = weyl_quantize(&sq, &params.system_spec())?;

    let h = model_hamiltonian(params, &layout)?;
    let chi2 = poisson_bracket(&phi2, &h)?;
    let weak_poly = chi2.try_mul(&phi1)?.scale(-1.0 / pair.eta);
    let joint: FockSpec = params.joint_spec();
    let weak_term = weyl_quantize(&weak_poly, &joint)?;
    let idx = linalg::interior_indices(joint.dims(), exclude);
    Ok(ClassicalLhs {
        reduced,
        weak_term_norm: linalg::operator_norm(&weak_term),
        weak_term_interior_norm: linalg::operator_norm(&linalg::submatrix(&weak_term, &idx)),
        weak_term,
    })
}

/// `½ Σ γ_αβ S_β† S_α`.
pub fn quantum_rhs_operator(gamma: &DissipationMatrix) -> Result<Operator> {
    if gamma.is_empty() {
        return Err(Error::DimensionMismatch("empty operator basis".into()));
    }
    Ok(gamma.anticommutator_operator() * c(0.5))
}

/// Limit-form γ that satisfies all four coefficient equations exactly for
/// the given `(α, β)`.
pub fn synthetic_gamma(params: &ModelParams, alpha: f64, beta: f64) -> Result<GammaEntries> {
    params.validate()?;
    let u = reduced_stiffness(params);
    let eta = alpha * alpha + u * beta * beta;
    if !(eta > 0.0) {
        return Err(Error::Degenerate(format!("eta = {eta}")));
    }
    let w = params.omega0();
    // Target x², p², (xp + px) coefficients of (1/η)φ₂².
    let a = u * u * beta * beta / eta;
    let b = alpha * alpha / eta;
    let cc = -u * alpha * beta / eta;
    let g = a / w + w * b;
    let z = Complex64::new(a / w - w * b, -2.0 * cc);
    Ok(GammaEntries {
        g11: c(g),
        g22: c(g),
        g12: z,
        g21: z.conj(),
    })
}

/// Which normalization of `L₁L₁† ∝ φ₂²/(γ₁₁η)` is used.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorConvention {
    /// `1/(2γ₁₁η)`.
    InverseTwoGamma11Eta,
    /// `1/(γ₁₁η)`.
    InverseGamma11Eta,
}

impl FactorConvention {
    pub fn name(&self) -> &'static str {
        match self {
            FactorConvention::InverseTwoGamma11Eta => "inverse_two_gamma11_eta",
            FactorConvention::InverseGamma11Eta => "inverse_gamma11_eta",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LindDissiReport {
    /// Interior relative residual with `1/(2γ₁₁η)`.
    pub residual_two: f64,
    /// Interior relative residual with `1/(γ₁₁η)`.
    pub residual_one: f64,
    pub preferred: FactorConvention,
    /// Leading rate `γ̃₁`.
    pub leading_rate: f64,
    /// `u†γu` against `diag(rates)`.
    pub diagonalization_residual: f64,
}

/// Compares `L₁L₁†` from the diagonalized γ with `φ̂₂²/(k γ₁₁η)` for `k = 1, 2`.
pub fn lindblad_constraint_identity(
    gamma: &DissipationMatrix,
    pair: &ConstraintPair,
    params: &ModelParams,
    exclude: usize,
) -> Result<LindDissiReport> {
    let g11 = gamma.gamma()[(0, 0)].re;
    if !(g11 > 0.0) {
        return Err(Error::Degenerate(format!("gamma11 = {g11:e}")));
    }
    let form = to_lindblad_form(gamma)?;
    let l1 = &form.jump_ops[0];
    let ll = l1 * l1.adjoint();
    let layout = model_layout();
    let phi2 = pair.phi2.to_poly(&layout)?;
    let sq = weyl_quantize(&phi2.try_mul(&phi2)?, &params.system_spec())?;
    let idx = linalg::interior_indices(&[params.fock_dims.0], exclude);
    let lhs = linalg::submatrix(&ll, &idx);
    let sq = linalg::submatrix(&sq, &idx);
    let norm = lhs.norm();
    let resid = |k: f64| (&lhs - &sq * c(1.0 / (k * g11 * pair.eta))).norm() / norm;
    let residual_two = resid(2.0);
    let residual_one = resid(1.0);
    Ok(LindDissiReport {
        residual_two,
        residual_one,
        preferred: if residual_one < residual_two {
            FactorConvention::InverseGamma11Eta
        } else {
            FactorConvention::InverseTwoGamma11Eta
        },
        leading_rate: form.rates[0],
        diagonalization_residual: form.diagonalization_residual(gamma.gamma()),
    })
}

/// How the candidate is chosen in [`verify`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CandidateSelector {
    /// Real candidate with the smallest residual.
    Best,
    Index(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyMode {
    /// γ from the limit form of the model.
    Physical,
    /// γ built to satisfy the coefficient equations for a chosen α.
    Synthetic,
}

impl VerifyMode {
    pub fn name(&self) -> &'static str {
        match self {
            VerifyMode::Physical => "physical",
            VerifyMode::Synthetic => "synthetic",
        }
    }
}

/// Operator-level comparison for the chosen coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorComparison {
    /// `‖LHS − RHS‖_F / ‖RHS‖_F` on the interior block.
    pub interior_gap: f64,
    pub interior_gap_abs: f64,
    pub lhs_hermiticity: f64,
    pub rhs_hermiticity: f64,
    pub weak_term_norm: f64,
    pub weak_term_interior_norm: f64,
    pub chain_cosine: f64,
    pub bracket: f64,
}

#[derive(Debug, Clone)]
pub struct CorrespondenceReport {
    pub mode: VerifyMode,
    pub params: ModelParams,
    pub interior_exclude: usize,
    pub gamma: GammaEntries,
    /// Set when the configuration is degenerate and no residuals were computed.
    pub degenerate: Option<String>,
    pub solution: Option<CoefficientSolution>,
    pub selected: Option<usize>,
    pub alpha: Option<f64>,
    pub beta: f64,
    pub eta: Option<f64>,
    /// Relative residuals of the four coefficient equations.
    pub residuals_c1_c4: Option<[f64; 4]>,
    /// Relative residuals of the three reduced equations.
    pub residuals_c5_c7: Option<[f64; 3]>,
    /// Largest gap between the four-equation and reduced left-hand sides.
    pub reduction_gap: Option<f64>,
    pub identity_residual: Option<f64>,
    /// `|γ₁₁ − γ₂₂| / γ₁₁` of the finite-τ model.
    pub gamma_equality_gap: f64,
    pub operators: Option<OperatorComparison>,
    pub lind_dissi: Option<LindDissiReport>,
}

/// Left-hand sides of the four coefficient equations for `γ`.
pub fn four_equation_lhs(gamma: &GammaEntries, omega0: f64) -> [Complex64; 4] {
    let GammaEntries { g11, g22, g12, g21 } = *gamma;
    [
        (g11 + g22 + g12 + g21) * (omega0 / 4.0),
        (g11 + g22 - g12 - g21) / (4.0 * omega0),
        (g11 - g22 + g12 - g21) * (I * 0.25),
        (-g11 + g22 + g12 - g21) * (I * 0.25),
    ]
}

fn degenerate_report(
    mode: VerifyMode,
    params: &ModelParams,
    exclude: usize,
    gamma: GammaEntries,
    gap: f64,
    why: String,
) -> CorrespondenceReport {
    CorrespondenceReport {
        mode,
        params: *params,
        interior_exclude: exclude,
        gamma,
        degenerate: Some(why),
        solution: None,
        selected: None,
        alpha: None,
        beta: 1.0,
        eta: None,
        residuals_c1_c4: None,
        residuals_c5_c7: None,
        reduction_gap: None,
        identity_residual: None,
        gamma_equality_gap: gap,
        operators: None,
        lind_dissi: None,
    }
}

fn assemble(
    mode: VerifyMode,
    params: &ModelParams,
    gamma: GammaEntries,
    alpha_choice: std::result::Result<CandidateSelector, f64>,
    exclude: usize,
) -> Result<CorrespondenceReport> {
    let gap = dissipation_limit(params)?.mismatch;
    let g11 = gamma.g11.re;
    if !(g11 > 0.0) {
        return Ok(degenerate_report(
            mode,
            params,
            exclude,
            gamma,
            gap,
            format!("gamma11 = {g11:e}; zero coupling or sinc node"),
        ));
    }
    let sol = solve_coefficients_from(params, g11, gamma.g12.arg())?;
    let (selected, alpha) = match alpha_choice {
        Ok(CandidateSelector::Best) => {
            let i = sol.best();
            (i, i.and_then(|i| sol.candidates[i].alpha))
        }
        Ok(CandidateSelector::Index(i)) => (
            Some(i),
            sol.candidates
                .get(i)
                .ok_or(Error::IndexOutOfBounds {
                    index: i,
                    len: sol.candidates.len(),
                })?
                .alpha,
        ),
        Err(a) => (None, Some(a)),
    };
    let w0 = params.omega0();
    let four = four_equation_lhs(&gamma, w0);
    let red = sol.reduced_lhs();
    let reduction_gap = [
        rel(four[0], c(red[0])),
        rel(four[1], c(red[1])),
        rel(four[2], c(red[2])),
        rel(four[3], c(red[2])),
    ]
    .into_iter()
    .fold(0.0, f64::max);

    let mut report = degenerate_report(mode, params, exclude, gamma, gap, String::new());
    report.degenerate = None;
    report.selected = selected;
    report.alpha = alpha;
    report.reduction_gap = Some(reduction_gap);
    report.identity_residual = Some(sol.identity_residual(alpha));

    if let Some(a) = alpha {
        let r = sol.reduced_rhs(a);
        let r4 = [c(r[0]), c(r[1]), c(r[2]), c(r[2])];
        report.residuals_c1_c4 = Some([
            rel(four[0], r4[0]),
            rel(four[1], r4[1]),
            rel(four[2], r4[2]),
            rel(four[3], r4[3]),
        ]);
        report.residuals_c5_c7 = Some(sol.reduced_residuals(a));
        let pair = build_constraints_for(a, &sol, params)?;
        report.eta = Some(pair.eta);
        let lhs = classical_lhs_operator(&pair, params, exclude)?;
        let dm = DissipationMatrix::new(gamma.matrix(), model_basis(params.fock_dims.0))?;
        let rhs = quantum_rhs_operator(&dm)?;
        let idx = linalg::interior_indices(&[params.fock_dims.0], exclude);
        let l = linalg::submatrix(&lhs.reduced, &idx);
        let r = linalg::submatrix(&rhs, &idx);
        let diff = (&l - &r).norm();
        report.operators = Some(OperatorComparison {
            interior_gap: if r.norm() > 0.0 { diff / r.norm() } else { f64::INFINITY },
            interior_gap_abs: diff,
            lhs_hermiticity: linalg::hermiticity_residual(&l),
            rhs_hermiticity: linalg::hermiticity_residual(&r),
            weak_term_norm: lhs.weak_term_norm,
            weak_term_interior_norm: lhs.weak_term_interior_norm,
            chain_cosine: pair.chain_cosine,
            bracket: pair.bracket,
        });
        report.lind_dissi = Some(lindblad_constraint_identity(&dm, &pair, params, exclude)?);
    }
    report.solution = Some(sol);
    Ok(report)
}

/// Physical path: γ in limit form, α from the closed-form candidates.
pub fn verify(
    params: &ModelParams,
    selector: CandidateSelector,
    exclude: usize,
) -> Result<CorrespondenceReport> {
    params.validate()?;
    let g = crate::coarse_grain::limit_entries(params);
    assemble(VerifyMode::Physical, params, g, Ok(selector), exclude)
}

/// Synthetic path: γ from [`synthetic_gamma`] for `(α, β = 1)`.
pub fn verify_synthetic(
    params: &ModelParams,
    alpha: f64,
    exclude: usize,
) -> Result<CorrespondenceReport> {
    let g = synthetic_gamma(params, alpha, 1.0)?;
    assemble(VerifyMode::Synthetic, params, g, Err(alpha), exclude)
}
