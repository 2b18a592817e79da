//! Kraus operator-sum representation, χ matrices and first-order Kraus
//! coefficients.

use num_complex::Complex64;

use super::dissipation::GammaEntries;
use super::exact::ExactModel;
use super::gamma::{gamma_tensor, ExpSum, GammaTensor};
use super::params::ModelParams;
use crate::error::{Error, Result};
use crate::fock::{annihilation, gram_residual, hs_basis, thermal_populations, DensityMatrix};
use crate::linalg::{self, c, Operator, I};

/// Completeness tolerance for Kraus sets.
pub const COMPLETENESS_TOL: f64 = 1e-10;

/// Kraus operators `K_lm = √p_m ⟨l|U|m⟩` labelled by `(l, m)`.
#[derive(Debug, Clone)]
pub struct KrausSet {
    pub ops: Vec<Operator>,
    pub labels: Vec<(usize, usize)>,
    /// `p_m` of each operator's label.
    pub weights: Vec<f64>,
}

impl KrausSet {
    pub fn dim(&self) -> usize {
        self.ops.first().map_or(0, |k| k.nrows())
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// `max |Σ K†K − I|`.
    pub fn completeness_residual(&self) -> f64 {
        let d = self.dim();
        let mut s = Operator::zeros(d, d);
        for k in &self.ops {
            s += k.adjoint() * k;
        }
        linalg::max_abs(&(s - linalg::identity(d)))
    }

    /// `Σ K X K†` for any operator `X`.
    pub fn apply(&self, x: &Operator) -> Operator {
        let d = self.dim();
        let mut out = Operator::zeros(d, d);
        for k in &self.ops {
            out += k * x * k.adjoint();
        }
        out
    }
}

/// Extracts `K_lm = √p_m ⟨l|U|m⟩` over the eigenbasis of the bath state
/// (the given basis when the state is already diagonal).
/// `u_total` acts on system ⊗ bath (bath index least significant).
pub fn kraus_from_unitary(u_total: &Operator, bath_state: &DensityMatrix) -> Result<KrausSet> {
    let nb = bath_state.dim();
    let n = u_total.nrows();
    if u_total.ncols() != n || n % nb != 0 {
        return Err(Error::DimensionMismatch(format!(
            "unitary {:?} with bath dimension {}",
            u_total.shape(),
            nb
        )));
    }
    let ur = linalg::unitarity_residual(u_total);
    if ur > 1e-9 {
        return Err(Error::NotUnitary { residual: ur });
    }
    let ns = n / nb;
    let rb = bath_state.as_op();
    let off_diag = (0..nb)
        .flat_map(|i| (0..nb).map(move |j| (i, j)))
        .filter(|(i, j)| i != j)
        .fold(0.0_f64, |m, (i, j)| m.max(rb[(i, j)].norm()));
    // A diagonal bath keeps its own basis so labels are Fock indices.
    let (vals, vecs) = if off_diag == 0.0 {
        (
            nalgebra::DVector::from_iterator(nb, (0..nb).map(|i| rb[(i, i)].re)),
            linalg::identity(nb),
        )
    } else {
        linalg::hermitian_eigen(rb)
    };
    let mut out = KrausSet {
        ops: Vec::new(),
        labels: Vec::new(),
        weights: Vec::new(),
    };
    // Bath-basis rotation W = I_S ⊗ V; K_lm = √p_m (W†UW)[(·,l),(·,m)].
    let w = linalg::identity(ns).kronecker(&vecs);
    let ut = w.adjoint() * u_total * &w;
    for m in 0..nb {
        let p = vals[m].max(0.0);
        if p == 0.0 {
            continue;
        }
        let sp = c(p.sqrt());
        for l in 0..nb {
            let k = Operator::from_fn(ns, ns, |i, j| ut[(i * nb + l, j * nb + m)] * sp);
            out.ops.push(k);
            out.labels.push((l, m));
            out.weights.push(p);
        }
    }
    Ok(out)
}

/// `Σ K ρ K†`.
pub fn osr_apply(kraus: &KrausSet, rho_s: &DensityMatrix) -> Result<DensityMatrix> {
    if rho_s.dim() != kraus.dim() {
        return Err(Error::DimensionMismatch(format!(
            "state of dimension {} for Kraus operators of dimension {}",
            rho_s.dim(),
            kraus.dim()
        )));
    }
    DensityMatrix::new(linalg::hermitian_part(&kraus.apply(rho_s.as_op())))
}

/// `χ_αβ = Σ_i b_iα b̄_iβ`, `b_iα = Tr(S_α† K_i)`, over an orthonormal basis.
#[derive(Debug, Clone)]
pub struct ChiMatrix {
    pub chi: Operator,
    /// `b` with one row per Kraus operator.
    pub b: Operator,
    pub t: f64,
}

impl ChiMatrix {
    /// `Σ χ_αβ S_α X S_β†`.
    pub fn apply(&self, x: &Operator, basis: &[Operator]) -> Operator {
        let d = x.nrows();
        let mut out = Operator::zeros(d, d);
        for (a, sa) in basis.iter().enumerate() {
            let mut right = Operator::zeros(d, d);
            for (b, sb) in basis.iter().enumerate() {
                let g = self.chi[(a, b)];
                if g.norm() != 0.0 {
                    right += sb.adjoint() * g;
                }
            }
            out += sa * x * right;
        }
        out
    }

    /// Rescales to the convention `S₀ = I` (unnormalized) for a basis whose
    /// first element is `I/√d`.
    pub fn unnormalized_identity_convention(&self, dim: usize) -> Operator {
        let s = 1.0 / (dim as f64).sqrt();
        let mut chi = self.chi.clone();
        for k in 0..chi.nrows() {
            chi[(k, 0)] *= s;
            chi[(0, k)] *= s;
        }
        chi
    }
}

pub fn chi_from_kraus(kraus: &KrausSet, basis: &[Operator], t: f64) -> Result<ChiMatrix> {
    let r = gram_residual(basis);
    if r > 1e-10 {
        return Err(Error::NonOrthonormalBasis { residual: r });
    }
    let d = kraus.dim();
    if basis.len() != d * d {
        return Err(Error::DimensionMismatch(format!(
            "{} basis operators for dimension {}",
            basis.len(),
            d
        )));
    }
    let b = Operator::from_fn(kraus.len(), basis.len(), |i, a| {
        linalg::hs_inner(&basis[a], &kraus.ops[i])
    });
    let chi = b.transpose() * b.map(|z| z.conj());
    Ok(ChiMatrix { chi, b, t })
}

/// Interaction-picture Kraus set `K̃_lm = √p_m ⟨l|U₀†U|m⟩` (thermal bath, Fock basis).
pub fn interaction_kraus(model: &ExactModel, t: f64) -> Result<KrausSet> {
    let u = model.free_unitary(t).adjoint() * model.unitary(t);
    kraus_from_unitary(&u, model.bath_state())
}

/// Interaction-picture coefficient functions of the model:
/// `p[β][α]` for `S̃_β(t) = Σ_α p_βα S_α` with `S = (a, a†)`,
/// `q[δ][γ]` for `B̃_δ(t) = Σ_γ q_δγ B_γ` with `B = (b, b†)`, and `λ_βδ = κ`.
pub fn model_coefficients(params: &ModelParams) -> (Vec<Vec<ExpSum>>, Vec<Vec<ExpSum>>, [[f64; 2]; 2]) {
    let one = c(1.0);
    let (w0, wb) = (params.omega0(), params.omega_b());
    let p = vec![
        vec![ExpSum::exp(one, -w0), ExpSum::zero()],
        vec![ExpSum::zero(), ExpSum::exp(one, w0)],
    ];
    let q = vec![
        vec![ExpSum::exp(one, -wb), ExpSum::zero()],
        vec![ExpSum::zero(), ExpSum::exp(one, wb)],
    ];
    let k = params.kappa();
    (p, q, [[k, k], [k, k]])
}

/// First-order (single Dyson term) Kraus data.
#[derive(Debug, Clone)]
pub struct FirstOrderKraus {
    pub labels: Vec<(usize, usize)>,
    /// Coefficients on `(a, a†)`, one row per Kraus operator.
    pub coeffs: Operator,
    /// `K^{(1)}_i = Σ_α coeffs_iα S_α`.
    pub ops: Vec<Operator>,
    /// `√p_m δ_lm I + K^{(1)}_lm` expanded in the orthonormal basis.
    pub b_full: Operator,
    /// `|κ| / ω₀`.
    pub coupling_ratio: f64,
    pub threshold: f64,
    pub weak: bool,
}

/// `b_iα = −it√p_m Σ λ_βδ ⟨l|B_γ|m⟩ Γ^{αγ}_{βδ}(t)`.
pub fn first_order_kraus(params: &ModelParams, t: f64, threshold: f64) -> Result<FirstOrderKraus> {
    params.validate()?;
    let (ns, nb) = params.fock_dims;
    let (p, q, lambda) = model_coefficients(params);
    let gt: GammaTensor = gamma_tensor(&p, &q, t);
    let weights = thermal_populations(nb, params.omega_b(), params.inv_temp())?;
    let b = annihilation(nb);
    let bath_ops = [b.clone(), b.adjoint()];
    let a = annihilation(ns);
    let sys_ops = [a.clone(), a.adjoint()];
    let basis = hs_basis(ns);

    let mut labels = Vec::new();
    let mut rows: Vec<[Complex64; 2]> = Vec::new();
    for (m, &pm) in weights.iter().enumerate() {
        if pm == 0.0 {
            continue;
        }
        for l in 0..nb {
            let mut row = [c(0.0); 2];
            for (alpha, slot) in row.iter_mut().enumerate() {
                let mut s = c(0.0);
                for (gamma, bg) in bath_ops.iter().enumerate() {
                    let elem = bg[(l, m)];
                    if elem.norm() == 0.0 {
                        continue;
                    }
                    for (beta, lrow) in lambda.iter().enumerate() {
                        for (delta, &lam) in lrow.iter().enumerate() {
                            s += elem * gt.get(alpha, gamma, beta, delta) * lam;
                        }
                    }
                }
                *slot = -I * t * pm.sqrt() * s;
            }
            labels.push((l, m));
            rows.push(row);
        }
    }
    let coeffs = Operator::from_fn(rows.len(), 2, |i, a| rows[i][a]);
    let ops: Vec<Operator> = rows
        .iter()
        .map(|r| &sys_ops[0] * r[0] + &sys_ops[1] * r[1])
        .collect();
    let b_full = Operator::from_fn(rows.len(), basis.len(), |i, al| {
        let (l, m) = labels[i];
        let mut k = ops[i].clone();
        if l == m {
            k += linalg::identity(ns) * c(weights[m].sqrt());
        }
        linalg::hs_inner(&basis[al], &k)
    });
    let coupling_ratio = params.kappa().abs() / params.omega0();
    Ok(FirstOrderKraus {
        labels,
        coeffs,
        ops,
        b_full,
        coupling_ratio,
        threshold,
        weak: coupling_ratio <= threshold,
    })
}

/// `γ_αβ = (1/τ) Σ_i b_iα b̄_iβ` from the first-order Kraus coefficients at `t = τ`.
pub fn first_order_gamma(params: &ModelParams) -> Result<GammaEntries> {
    let f = first_order_kraus(params, params.tau, f64::INFINITY)?;
    let g = f.coeffs.transpose() * f.coeffs.map(|z| z.conj()) / c(params.tau);
    Ok(GammaEntries {
        g11: g[(0, 0)],
        g22: g[(1, 1)],
        g12: g[(0, 1)],
        g21: g[(1, 0)],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::fock_state;

    #[test]
    fn identity_unitary_gives_identity_kraus() {
        let bath = DensityMatrix::new(Operator::from_diagonal(&nalgebra::DVector::from_vec(vec![
            c(0.75),
            c(0.25),
        ])))
        .unwrap();
        let k = kraus_from_unitary(&linalg::identity(6), &bath).unwrap();
        assert_eq!(k.len(), 4);
        for (op, &(l, m)) in k.ops.iter().zip(&k.labels) {
            let expect = if l == m {
                linalg::identity(3) * c(k.weights[k.labels.iter().position(|x| *x == (l, m)).unwrap()].sqrt())
            } else {
                linalg::zeros(3)
            };
            assert!(linalg::max_abs(&(op - expect)) < 1e-15);
        }
        assert!(k.completeness_residual() < 1e-15);
    }

    #[test]
    fn identity_channel_chi() {
        let k = KrausSet {
            ops: vec![linalg::identity(3)],
            labels: vec![(0, 0)],
            weights: vec![1.0],
        };
        let chi = chi_from_kraus(&k, &hs_basis(3), 0.0).unwrap();
        assert!((chi.chi[(0, 0)] - c(3.0)).norm() < 1e-14);
        let rest: f64 = chi.chi.iter().skip(1).map(|z| z.norm()).sum();
        assert!(rest < 1e-14);
        let rho = DensityMatrix::pure(&fock_state(3, 1).unwrap()).unwrap();
        let out = osr_apply(&k, &rho).unwrap();
        assert!(linalg::max_abs(&(out.as_op() - rho.as_op())) < 1e-15);
    }

    #[test]
    fn non_orthonormal_basis_rejected() {
        let k = KrausSet {
            ops: vec![linalg::identity(2)],
            labels: vec![(0, 0)],
            weights: vec![1.0],
        };
        let mut basis = hs_basis(2);
        basis[1] *= c(2.0);
        assert!(matches!(
            chi_from_kraus(&k, &basis, 0.0),
            Err(Error::NonOrthonormalBasis { .. })
        ));
    }

    #[test]
    fn zero_coupling_first_order_vanishes() {
        let p = ModelParams::from_frequencies(1.0, 6.0, 0.0, 0.5, 1.0, (3, 5)).unwrap();
        let f = first_order_kraus(&p, 0.4, 0.1).unwrap();
        assert!(f.coeffs.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn selection_rule() {
        let p = ModelParams::from_frequencies(1.0, 6.0, 0.3, 0.5, 1.0, (3, 5)).unwrap();
        let f = first_order_kraus(&p, 0.4, 0.1).unwrap();
        for (i, &(l, m)) in f.labels.iter().enumerate() {
            let nz = f.coeffs.row(i).iter().any(|z| z.norm() > 0.0);
            assert_eq!(nz, l.abs_diff(m) == 1, "label {:?}", (l, m));
        }
    }
}
