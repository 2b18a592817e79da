//! Dense complex matrix helpers shared by the quantum modules.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Dense complex operator on a (possibly tensor-product) Hilbert space.
pub type Operator = DMatrix<Complex64>;

pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[inline]
pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn identity(dim: usize) -> Operator {
    Operator::identity(dim, dim)
}

pub fn zeros(dim: usize) -> Operator {
    Operator::zeros(dim, dim)
}

pub fn commutator(a: &Operator, b: &Operator) -> Operator {
    a * b - b * a
}

pub fn anticommutator(a: &Operator, b: &Operator) -> Operator {
    a * b + b * a
}

/// Largest entry modulus of `a - a†`.
pub fn hermiticity_residual(a: &Operator) -> f64 {
    max_abs(&(a - a.adjoint()))
}

/// Largest entry modulus of `U†U - I`.
pub fn unitarity_residual(u: &Operator) -> f64 {
    max_abs(&(u.adjoint() * u - identity(u.nrows())))
}

pub fn max_abs(a: &Operator) -> f64 {
    a.iter().fold(0.0_f64, |m, z| m.max(z.norm()))
}

pub fn hermitian_part(a: &Operator) -> Operator {
    (a + a.adjoint()) * c(0.5)
}

/// Eigen-decomposition of the hermitian part of `a`, eigenvalues ascending.
pub fn hermitian_eigen(a: &Operator) -> (DVector<f64>, Operator) {
    let eig = hermitian_part(a).symmetric_eigen();
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = DVector::from_iterator(n, order.iter().map(|&i| eig.eigenvalues[i]));
    let mut vectors = Operator::zeros(a.nrows(), n);
    for (col, &i) in order.iter().enumerate() {
        vectors.set_column(col, &eig.eigenvectors.column(i));
    }
    (values, vectors)
}

pub fn hermitian_eigenvalues(a: &Operator) -> DVector<f64> {
    let mut v: Vec<f64> = hermitian_part(a)
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .collect();
    v.sort_by(f64::total_cmp);
    DVector::from_vec(v)
}

pub fn min_eigenvalue(a: &Operator) -> f64 {
    hermitian_eigenvalues(a)
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// Spectral norm (largest singular value).
pub fn operator_norm(a: &Operator) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    a.singular_values().iter().copied().fold(0.0, f64::max)
}

/// Trace distance `½‖ρ − σ‖₁` for hermitian arguments.
pub fn trace_distance(rho: &Operator, sigma: &Operator) -> f64 {
    0.5 * hermitian_eigenvalues(&(rho - sigma))
        .iter()
        .map(|v| v.abs())
        .sum::<f64>()
}

/// Hilbert–Schmidt inner product `Tr(A†B)`.
pub fn hs_inner(a: &Operator, b: &Operator) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// Basis indices whose per-mode occupation stays below `dims[k] - exclude`.
///
/// Mode 0 is the most significant index of the tensor product.
pub fn interior_indices(dims: &[usize], exclude: usize) -> Vec<usize> {
    let total: usize = dims.iter().product();
    (0..total)
        .filter(|&flat| {
            let mut rest = flat;
            dims.iter().rev().all(|&d| {
                let level = rest % d;
                rest /= d;
                level + exclude < d
            })
        })
        .collect()
}

pub fn submatrix(a: &Operator, idx: &[usize]) -> Operator {
    Operator::from_fn(idx.len(), idx.len(), |i, j| a[(idx[i], idx[j])])
}

pub fn to_complex(a: &DMatrix<f64>) -> Operator {
    a.map(c)
}

/// Column normalization used to fix eigenvector phases deterministically:
/// the last component whose modulus exceeds `1e-8 · max` is made real positive.
pub fn fix_phase(v: &mut DVector<Complex64>) {
    let max = v.iter().fold(0.0_f64, |m, z| m.max(z.norm()));
    if max == 0.0 {
        return;
    }
    if let Some(z) = v.iter().rev().find(|z| z.norm() > 1e-8 * max).copied() {
        let phase = z.conj() / z.norm();
        for x in v.iter_mut() {
            *x *= phase;
        }
    }
}

/// Orthonormal basis of the null space of a real matrix, via SVD with a
/// relative singular-value threshold.
pub fn null_space(a: &DMatrix<f64>, rel_tol: f64) -> DMatrix<f64> {
    let (rows, cols) = a.shape();
    if cols == 0 {
        return DMatrix::zeros(0, 0);
    }
    // Pad to square so the full right-singular basis is returned.
    let n = rows.max(cols);
    let mut padded = DMatrix::<f64>::zeros(n, cols);
    padded.view_mut((0, 0), (rows, cols)).copy_from(a);
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested v_t");
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let tol = rel_tol * smax;
    let null: Vec<DVector<f64>> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| smax == 0.0 || s <= tol)
        .map(|(k, _)| v_t.row(k).transpose())
        .collect();
    if null.is_empty() {
        DMatrix::zeros(cols, 0)
    } else {
        DMatrix::from_columns(&null)
    }
}

/// Numerical rank with a relative singular-value threshold.
pub fn rank(a: &DMatrix<f64>, rel_tol: f64) -> usize {
    if a.is_empty() {
        return 0;
    }
    let sv = a.singular_values();
    let smax = sv.iter().copied().fold(0.0, f64::max);
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * smax).count()
}

/// 2-norm condition number of a square real matrix.
pub fn condition_number(a: &DMatrix<f64>) -> f64 {
    if a.is_empty() {
        return 1.0;
    }
    let sv = a.singular_values();
    let smax = sv.iter().copied().fold(0.0, f64::max);
    let smin = sv.iter().copied().fold(f64::INFINITY, f64::min);
    if smin == 0.0 {
        f64::INFINITY
    } else {
        smax / smin
    }
}
