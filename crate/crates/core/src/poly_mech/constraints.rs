//! Dirac's constraint algorithm for quadratic Hamiltonians and affine constraints.
//!
//! With `H_c` of degree ≤ 2 and every constraint affine, brackets between
//! constraints are constants and `{φ, H_c}` is again affine, so every weak
//! equality reduces to a linear-span test in `R^{2n+1}` (coefficients plus
//! constant term).

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use super::poly::{poisson_bracket, PhaseLayout, PolyObservable};
use crate::error::{Error, Result};
use crate::linalg;

/// Relative singular-value threshold for every rank decision in this module.
pub const RANK_TOL: f64 = 1e-10;
/// Relative residual below which an affine expression counts as weakly zero.
pub const WEAK_ZERO_TOL: f64 = 1e-10;

/// `coeffs · z + constant ≈ 0` over a [`PhaseLayout`].
#[derive(Debug, Clone, PartialEq)]
pub struct AffineConstraint {
    pub coeffs: Vec<f64>,
    pub constant: f64,
}

impl AffineConstraint {
    pub fn new(coeffs: Vec<f64>, constant: f64) -> Result<Self> {
        if coeffs.iter().all(|&c| c == 0.0) && constant == 0.0 {
            return Err(Error::ZeroConstraint);
        }
        Ok(Self { coeffs, constant })
    }

    pub fn from_poly(p: &PolyObservable) -> Result<Self> {
        let (coeffs, constant) = p.as_affine().ok_or(Error::DegreeTooHigh {
            degree: p.degree(),
            max: 1,
        })?;
        Self::new(coeffs, constant)
    }

    pub fn to_poly(&self, layout: &Arc<PhaseLayout>) -> Result<PolyObservable> {
        if self.coeffs.len() != layout.dim() {
            return Err(Error::LayoutMismatch(format!(
                "constraint has {} coefficients for {} variables",
                self.coeffs.len(),
                layout.dim()
            )));
        }
        let mut p = PolyObservable::constant(layout, self.constant);
        for (i, &c) in self.coeffs.iter().enumerate() {
            p = &p + &PolyObservable::var(layout, i).scale(c);
        }
        Ok(p)
    }

    pub fn eval(&self, z: &[f64]) -> f64 {
        self.coeffs.iter().zip(z).map(|(a, b)| a * b).sum::<f64>() + self.constant
    }

    /// `(coeffs, constant)` as one vector of length `2n + 1`.
    pub fn augmented(&self) -> DVector<f64> {
        DVector::from_iterator(
            self.coeffs.len() + 1,
            self.coeffs.iter().copied().chain(std::iter::once(self.constant)),
        )
    }

    /// Cosine between coefficient vectors (constants ignored).
    pub fn cosine(&self, other: &Self) -> f64 {
        let a = DVector::from_column_slice(&self.coeffs);
        let b = DVector::from_column_slice(&other.coeffs);
        a.dot(&b) / (a.norm() * b.norm())
    }
}

/// Poisson bracket of two affine functions; always a constant.
pub fn affine_bracket(f: &AffineConstraint, g: &AffineConstraint) -> f64 {
    let n = f.coeffs.len() / 2;
    (0..n)
        .map(|i| f.coeffs[i] * g.coeffs[n + i] - f.coeffs[n + i] * g.coeffs[i])
        .sum()
}

/// Velocity-linear part of a Lagrangian: `q̇ᵀ(G q + ℓ)`.
#[derive(Debug, Clone)]
pub struct VelocityTerms {
    pub q_coupling: DMatrix<f64>,
    pub offset: DVector<f64>,
}

impl VelocityTerms {
    pub fn constant(offset: DVector<f64>) -> Self {
        let n = offset.len();
        Self {
            q_coupling: DMatrix::zeros(n, n),
            offset,
        }
    }
}

/// Primary constraints of `L = ½ q̇ᵀWq̇ + q̇ᵀ(Gq + ℓ) − V(q)`.
///
/// Momenta are `p = Wq̇ + Gq + ℓ`; every null direction `n` of `W` yields
/// `nᵀp − nᵀGq − nᵀℓ ≈ 0`.
pub fn derive_primary_constraints(
    mass: &DMatrix<f64>,
    velocity: &VelocityTerms,
) -> Result<Vec<AffineConstraint>> {
    let n = mass.nrows();
    if mass.ncols() != n || velocity.offset.len() != n || velocity.q_coupling.shape() != (n, n) {
        return Err(Error::DimensionMismatch(format!(
            "mass matrix {:?}, coupling {:?}, offset {}",
            mass.shape(),
            velocity.q_coupling.shape(),
            velocity.offset.len()
        )));
    }
    let asym = (mass - mass.transpose()).amax();
    if asym > 1e-12 * mass.amax().max(1.0) {
        return Err(Error::NotSymmetric { residual: asym });
    }
    let eig = mass.clone().symmetric_eigen();
    let scale = eig.eigenvalues.amax();
    let mut out = Vec::new();
    for (k, &lam) in eig.eigenvalues.iter().enumerate() {
        if scale > 0.0 && lam.abs() > RANK_TOL * scale {
            continue;
        }
        let mut v = eig.eigenvectors.column(k).into_owned();
        // Deterministic sign: largest component positive.
        let imax = v.iamax();
        if v[imax] < 0.0 {
            v.neg_mut();
        }
        let gq = velocity.q_coupling.transpose() * &v;
        let mut coeffs = vec![0.0; 2 * n];
        for i in 0..n {
            coeffs[i] = -gq[i];
            coeffs[n + i] = v[i];
        }
        out.push(AffineConstraint::new(coeffs, -v.dot(&velocity.offset))?);
    }
    Ok(out)
}

/// Lagrange multiplier of a primary constraint after closure of the chain.
#[derive(Debug, Clone, PartialEq)]
pub enum Multiplier {
    /// Determined (weakly) as an affine phase-space function.
    Solved(PolyObservable),
    /// Left free by the consistency conditions; signals first-class content.
    Undetermined,
}

/// Closed set of constraints with classification and bracket matrices.
///
/// Constraint index `a` runs over primaries first, then secondaries.
/// Secondaries are stored as `{φ, H_c}_P` exactly as computed (no sign flips).
#[derive(Debug, Clone)]
pub struct ConstraintSystem {
    pub layout: Arc<PhaseLayout>,
    pub hamiltonian: PolyObservable,
    pub primaries: Vec<AffineConstraint>,
    pub secondaries: Vec<AffineConstraint>,
    pub multipliers: Vec<Multiplier>,
    /// `C_ab = {φ_a, φ_b}` over all constraints.
    pub c_matrix: DMatrix<f64>,
    /// Inverse of the second-class block of `C`.
    pub d_matrix: DMatrix<f64>,
    pub first_class_idx: Vec<usize>,
    pub second_class_idx: Vec<usize>,
    /// First-class combinations `φ_r − Σ_s w_s φ_s`, one per `first_class_idx` entry.
    pub first_class: Vec<AffineConstraint>,
}

impl ConstraintSystem {
    pub fn all_constraints(&self) -> Vec<AffineConstraint> {
        self.primaries
            .iter()
            .chain(&self.secondaries)
            .cloned()
            .collect()
    }

    pub fn second_class(&self) -> Vec<AffineConstraint> {
        let all = self.all_constraints();
        self.second_class_idx.iter().map(|&i| all[i].clone()).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.primaries.is_empty() && self.secondaries.is_empty()
    }

    /// Largest `|φ_a(z)|` over all constraints.
    pub fn max_residual(&self, z: &[f64]) -> f64 {
        self.primaries
            .iter()
            .chain(&self.secondaries)
            .map(|c| c.eval(z).abs())
            .fold(0.0, f64::max)
    }

    /// Classify an already-closed constraint set without running the chain.
    /// Multipliers are left [`Multiplier::Undetermined`].
    pub fn classify(
        hamiltonian: PolyObservable,
        primaries: Vec<AffineConstraint>,
        secondaries: Vec<AffineConstraint>,
    ) -> Result<Self> {
        let layout = Arc::clone(hamiltonian.layout());
        for c in primaries.iter().chain(&secondaries) {
            if c.coeffs.len() != layout.dim() {
                return Err(Error::LayoutMismatch(format!(
                    "constraint has {} coefficients for {} variables",
                    c.coeffs.len(),
                    layout.dim()
                )));
            }
        }
        let all: Vec<&AffineConstraint> = primaries.iter().chain(&secondaries).collect();
        let t = all.len();
        let c_matrix = DMatrix::from_fn(t, t, |a, b| affine_bracket(all[a], all[b]));

        // Rows forming a basis of the row space of an antisymmetric matrix give a
        // nonsingular principal block.
        let target = linalg::rank(&c_matrix, RANK_TOL);
        let mut second_class_idx = Vec::new();
        for i in 0..t {
            if second_class_idx.len() == target {
                break;
            }
            let mut trial = second_class_idx.clone();
            trial.push(i);
            let rows = DMatrix::from_fn(trial.len(), t, |r, col| c_matrix[(trial[r], col)]);
            if linalg::rank(&rows, RANK_TOL) == trial.len() {
                second_class_idx = trial;
            }
        }
        let first_class_idx: Vec<usize> =
            (0..t).filter(|i| !second_class_idx.contains(i)).collect();

        let s = second_class_idx.len();
        let block = DMatrix::from_fn(s, s, |i, j| c_matrix[(second_class_idx[i], second_class_idx[j])]);
        let d_matrix = if s == 0 {
            DMatrix::zeros(0, 0)
        } else {
            block.clone().try_inverse().ok_or(Error::SingularConstraintMatrix {
                condition: f64::INFINITY,
            })?
        };

        let mut first_class = Vec::with_capacity(first_class_idx.len());
        for &r in &first_class_idx {
            // ψ_r = φ_r − Σ_s w_s φ_s with {ψ_r, φ_s'} = 0 for every second-class s'.
            let rhs = DVector::from_fn(s, |j, _| c_matrix[(r, second_class_idx[j])]);
            let w = d_matrix.transpose() * rhs;
            let mut coeffs = all[r].coeffs.clone();
            let mut constant = all[r].constant;
            for (j, &sidx) in second_class_idx.iter().enumerate() {
                for (ck, sk) in coeffs.iter_mut().zip(&all[sidx].coeffs) {
                    *ck -= w[j] * sk;
                }
                constant -= w[j] * all[sidx].constant;
            }
            first_class.push(AffineConstraint { coeffs, constant });
        }

        Ok(Self {
            layout,
            hamiltonian,
            multipliers: vec![Multiplier::Undetermined; primaries.len()],
            primaries,
            secondaries,
            c_matrix,
            d_matrix,
            first_class_idx,
            second_class_idx,
            first_class,
        })
    }

    /// `max |D·C_ss − I|` on the second-class block.
    pub fn inverse_residual(&self) -> f64 {
        let s = &self.second_class_idx;
        let block = DMatrix::from_fn(s.len(), s.len(), |i, j| self.c_matrix[(s[i], s[j])]);
        if s.is_empty() {
            return 0.0;
        }
        (&self.d_matrix * block - DMatrix::identity(s.len(), s.len())).amax()
    }
}

/// Orthonormal basis for the span of augmented constraint vectors.
struct Span {
    basis: Vec<DVector<f64>>,
}

impl Span {
    fn new() -> Self {
        Self { basis: Vec::new() }
    }

    fn residual(&self, x: &DVector<f64>) -> DVector<f64> {
        let mut r = x.clone();
        // Two Gram–Schmidt passes keep the projection accurate.
        for _ in 0..2 {
            for b in &self.basis {
                let proj = b.dot(&r);
                r.axpy(-proj, b, 1.0);
            }
        }
        r
    }

    /// Adds `x` if independent (relative to `scale`); returns whether it was added.
    fn push(&mut self, x: &DVector<f64>, scale: f64) -> bool {
        let r = self.residual(x);
        let norm = r.norm();
        if norm <= WEAK_ZERO_TOL * scale {
            return false;
        }
        self.basis.push(r / norm);
        true
    }

    fn contains(&self, x: &DVector<f64>, scale: f64) -> bool {
        self.residual(x).norm() <= WEAK_ZERO_TOL * scale
    }
}

fn bracket_with_hamiltonian(
    phi: &AffineConstraint,
    h_c: &PolyObservable,
) -> Result<AffineConstraint> {
    let layout = h_c.layout();
    let b = poisson_bracket(&phi.to_poly(layout)?, h_c)?;
    let (coeffs, constant) = b
        .as_affine()
        .ok_or_else(|| Error::Internal("bracket of affine constraint with H_c is not affine".into()))?;
    Ok(AffineConstraint { coeffs, constant })
}

/// Runs Dirac's consistency algorithm to closure.
///
/// Each round imposes `{φ_n, H_c} + Σ_m λ_m {φ_n, φ_m} ≈ 0` for every current
/// constraint. Combinations free of multipliers (left null space of the
/// bracket matrix against primaries) are either weakly zero or become new
/// constraints; the remaining equations fix multipliers.
pub fn consistency_chain(
    h_c: &PolyObservable,
    primaries: &[AffineConstraint],
) -> Result<ConstraintSystem> {
    if h_c.degree() > 2 {
        return Err(Error::DegreeTooHigh {
            degree: h_c.degree(),
            max: 2,
        });
    }
    let layout = h_c.layout();
    let dim = layout.dim();
    for c in primaries {
        if c.coeffs.len() != dim {
            return Err(Error::LayoutMismatch(format!(
                "constraint has {} coefficients for {} variables",
                c.coeffs.len(),
                dim
            )));
        }
    }

    let constant_fn = {
        let mut e = DVector::zeros(dim + 1);
        e[dim] = 1.0;
        e
    };

    let mut span = Span::new();
    for c in primaries {
        let v = c.augmented();
        span.push(&(&v / v.norm()), 1.0);
    }
    if span.contains(&constant_fn, 1.0) {
        return Err(Error::InconsistentDynamics);
    }

    let m = primaries.len();
    let mut constraints: Vec<AffineConstraint> = primaries.to_vec();
    // Each new constraint raises the span dimension, bounded by 2n + 1.
    for _round in 0..=dim + 1 {
        let t = constraints.len();
        let drifts: Vec<AffineConstraint> = constraints
            .iter()
            .map(|c| bracket_with_hamiltonian(c, h_c))
            .collect::<Result<_>>()?;
        let k = DMatrix::from_fn(t, m, |n, j| affine_bracket(&constraints[n], &constraints[j]));
        let left_null = linalg::null_space(&k.transpose(), RANK_TOL);

        let mut added = false;
        for w in left_null.column_iter() {
            let mut expr = DVector::zeros(dim + 1);
            let mut scale = 0.0;
            for (n, drift) in drifts.iter().enumerate() {
                let v = drift.augmented();
                expr.axpy(w[n], &v, 1.0);
                scale += w[n].abs() * v.norm();
            }
            if scale == 0.0 || span.contains(&expr, scale) {
                continue; // case (a): holds weakly
            }
            // case (c): a new constraint
            let norm = expr.norm();
            span.push(&(&expr / norm), 1.0);
            if span.contains(&constant_fn, 1.0) {
                return Err(Error::InconsistentDynamics);
            }
            let coeffs: Vec<f64> = expr.rows(0, dim).iter().copied().collect();
            constraints.push(AffineConstraint {
                coeffs,
                constant: expr[dim],
            });
            added = true;
        }
        if !added {
            let secondaries = constraints.split_off(m);
            let mut cs = ConstraintSystem::classify(h_c.clone(), constraints, secondaries)?;
            cs.multipliers = solve_multipliers(&cs, &k, &drifts)?;
            return Ok(cs);
        }
    }
    Err(Error::Internal("constraint chain failed to close".into()))
}

/// Case (b): `λ = −K⁺ A` with `K_nm = {φ_n, φ_m}`, `A_n = {φ_n, H_c}`.
fn solve_multipliers(
    cs: &ConstraintSystem,
    k: &DMatrix<f64>,
    drifts: &[AffineConstraint],
) -> Result<Vec<Multiplier>> {
    let m = k.ncols();
    if m == 0 {
        return Ok(Vec::new());
    }
    let dim = cs.layout.dim();
    let null = linalg::null_space(k, RANK_TOL);
    let pinv = k
        .clone()
        .pseudo_inverse(RANK_TOL * k.amax().max(f64::MIN_POSITIVE))
        .map_err(|e| Error::Internal(e.to_string()))?;
    let a = DMatrix::from_fn(drifts.len(), dim + 1, |n, j| drifts[n].augmented()[j]);
    let scale = a.amax() * pinv.amax();
    let lambda = -(pinv * a);
    Ok((0..m)
        .map(|j| {
            let free = null.column_iter().any(|v| v[j].abs() > RANK_TOL);
            if free {
                Multiplier::Undetermined
            } else {
                let coeffs: Vec<f64> = (0..dim).map(|i| lambda[(j, i)]).collect();
                let c = AffineConstraint {
                    coeffs,
                    constant: lambda[(j, dim)],
                };
                // Pseudo-inverse roundoff leaves ~eps-sized terms behind.
                Multiplier::Solved(
                    c.to_poly(&cs.layout)
                        .map(|p| p.chop(1e-13 * scale))
                        .unwrap_or_else(|_| PolyObservable::zero(&cs.layout)),
                )
            }
        })
        .collect())
}
