//! Dirac bracket and constrained (linear) phase-space flow.

use nalgebra::{DMatrix, DVector};

use super::constraints::ConstraintSystem;
use super::poly::{poisson_bracket, PolyObservable};
use crate::error::{Error, Result};
use crate::linalg;

/// Largest condition number of the second-class bracket block that is accepted.
pub const MAX_CONDITION: f64 = 1e12;
/// Initial-point tolerance for [`evolve_constrained`].
pub const SURFACE_TOL: f64 = 1e-9;

/// Relative cancellation threshold: a coefficient `p − q` is dropped when
/// `|p − q| ≤ CANCEL_TOL · max(|p|, |q|)`.
const CANCEL_TOL: f64 = 1e-12;

fn check_second_class_only(cs: &ConstraintSystem) -> Result<()> {
    if !cs.first_class_idx.is_empty() {
        return Err(Error::FirstClassPresent(cs.first_class_idx.clone()));
    }
    let s = &cs.second_class_idx;
    let block = DMatrix::from_fn(s.len(), s.len(), |i, j| cs.c_matrix[(s[i], s[j])]);
    let cond = linalg::condition_number(&block);
    if cond > MAX_CONDITION {
        return Err(Error::SingularConstraintMatrix { condition: cond });
    }
    Ok(())
}

/// `{a,b}* = {a,b}_P − {a,φ_s}_P D_ss' {φ_s',b}_P` over the second-class set.
pub fn dirac_bracket(
    a: &PolyObservable,
    b: &PolyObservable,
    cs: &ConstraintSystem,
) -> Result<PolyObservable> {
    check_second_class_only(cs)?;
    let pb = poisson_bracket(a, b)?;
    let phis: Vec<PolyObservable> = cs
        .second_class()
        .iter()
        .map(|c| c.to_poly(&cs.layout))
        .collect::<Result<_>>()?;
    let a_phi: Vec<PolyObservable> = phis
        .iter()
        .map(|phi| poisson_bracket(a, phi))
        .collect::<Result<_>>()?;
    let phi_b: Vec<PolyObservable> = phis
        .iter()
        .map(|phi| poisson_bracket(phi, b))
        .collect::<Result<_>>()?;

    let mut corr = PolyObservable::zero(&cs.layout);
    for (i, u) in a_phi.iter().enumerate() {
        if u.is_zero() {
            continue;
        }
        for (j, v) in phi_b.iter().enumerate() {
            let d = cs.d_matrix[(i, j)];
            if d == 0.0 || v.is_zero() {
                continue;
            }
            corr = corr.try_add(&u.try_mul(v)?.scale(d))?;
        }
    }

    let mut terms = Vec::new();
    let keys: std::collections::BTreeSet<Vec<u32>> = pb
        .terms()
        .chain(corr.terms())
        .map(|(k, _)| k.clone())
        .collect();
    for k in keys {
        let p = pb.coeff(&k);
        let q = corr.coeff(&k);
        let r = p - q;
        if r.abs() > CANCEL_TOL * p.abs().max(q.abs()) {
            terms.push((k, r));
        }
    }
    PolyObservable::from_terms(&cs.layout, terms)
}

/// Sampled solution of the constrained flow.
#[derive(Debug, Clone)]
pub struct PhaseTrajectory {
    pub times: Vec<f64>,
    pub points: Vec<Vec<f64>>,
    /// `max_a |φ_a(z(t))|` at each sample.
    pub residuals: Vec<f64>,
}

impl PhaseTrajectory {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

/// Affine generator `ż = F z + f` of the Dirac flow of `h_c`.
pub fn dirac_flow_matrix(
    h_c: &PolyObservable,
    cs: &ConstraintSystem,
) -> Result<(DMatrix<f64>, DVector<f64>)> {
    let layout = &cs.layout;
    let dim = layout.dim();
    let mut f = DMatrix::zeros(dim, dim);
    let mut g = DVector::zeros(dim);
    for i in 0..dim {
        let zi = PolyObservable::var(layout, i);
        let rate = if cs.is_empty() {
            poisson_bracket(&zi, h_c)?
        } else {
            dirac_bracket(&zi, h_c, cs)?
        };
        let (coeffs, constant) = rate.as_affine().ok_or(Error::DegreeTooHigh {
            degree: h_c.degree(),
            max: 2,
        })?;
        for (j, c) in coeffs.into_iter().enumerate() {
            f[(i, j)] = c;
        }
        g[i] = constant;
    }
    Ok((f, g))
}

/// Fixed-step RK4 integration of `ż = {z, H_c}*`. Constraint drift is recorded,
/// never projected out.
pub fn evolve_constrained(
    initial: &[f64],
    h_c: &PolyObservable,
    cs: &ConstraintSystem,
    t_final: f64,
    dt: f64,
) -> Result<PhaseTrajectory> {
    let dim = cs.layout.dim();
    if initial.len() != dim {
        return Err(Error::DimensionMismatch(format!(
            "initial point has {} entries for {} variables",
            initial.len(),
            dim
        )));
    }
    if !(dt > 0.0 && dt.is_finite() && t_final >= 0.0 && t_final.is_finite()) {
        return Err(Error::InvalidParams(format!(
            "need dt > 0 and t_final ≥ 0, got dt = {dt}, t_final = {t_final}"
        )));
    }
    if h_c.degree() > 2 {
        return Err(Error::DegreeTooHigh {
            degree: h_c.degree(),
            max: 2,
        });
    }
    let r0 = cs.max_residual(initial);
    if r0 > SURFACE_TOL {
        return Err(Error::OffConstraintSurface { residual: r0 });
    }
    let (f, g) = dirac_flow_matrix(h_c, cs)?;
    let rhs = |z: &DVector<f64>| &f * z + &g;

    let steps = (t_final / dt).round() as usize;
    let mut z = DVector::from_column_slice(initial);
    let mut out = PhaseTrajectory {
        times: Vec::with_capacity(steps + 1),
        points: Vec::with_capacity(steps + 1),
        residuals: Vec::with_capacity(steps + 1),
    };
    out.times.push(0.0);
    out.points.push(initial.to_vec());
    out.residuals.push(r0);
    for k in 1..=steps {
        let k1 = rhs(&z);
        let k2 = rhs(&(&z + &k1 * (0.5 * dt)));
        let k3 = rhs(&(&z + &k2 * (0.5 * dt)));
        let k4 = rhs(&(&z + &k3 * dt));
        z += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0);
        let pt: Vec<f64> = z.iter().copied().collect();
        out.residuals.push(cs.max_residual(&pt));
        out.times.push(k as f64 * dt);
        out.points.push(pt);
    }
    Ok(out)
}
