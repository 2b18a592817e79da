//! Orthogonal reduction of a real antisymmetric matrix to 2×2 blocks.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// `Oᵀ D O = B` with `B = diag([[0, b_k], [−b_k, 0]], …, 0, …)`.
#[derive(Debug, Clone)]
pub struct BlockDiagonalD {
    pub o_matrix: DMatrix<f64>,
    /// One entry per 2×2 block; zero blocks (if any) follow the nonzero ones.
    pub blocks: Vec<f64>,
}

impl BlockDiagonalD {
    pub fn dim(&self) -> usize {
        self.o_matrix.nrows()
    }

    /// The block matrix `B`, with a trailing zero row/column for odd dimension.
    pub fn block_matrix(&self) -> DMatrix<f64> {
        let n = self.dim();
        let mut b = DMatrix::zeros(n, n);
        for (k, &bk) in self.blocks.iter().enumerate() {
            b[(2 * k, 2 * k + 1)] = bk;
            b[(2 * k + 1, 2 * k)] = -bk;
        }
        b
    }

    /// `max |O B Oᵀ − D|`.
    pub fn reconstruction_residual(&self, d: &DMatrix<f64>) -> f64 {
        (&self.o_matrix * self.block_matrix() * self.o_matrix.transpose() - d).amax()
    }

    pub fn orthogonality_residual(&self) -> f64 {
        let n = self.dim();
        (self.o_matrix.transpose() * &self.o_matrix - DMatrix::identity(n, n)).amax()
    }
}

fn orthogonalize(v: &mut DVector<f64>, chosen: &[DVector<f64>]) {
    for _ in 0..2 {
        for c in chosen {
            let p = c.dot(v);
            v.axpy(-p, c, 1.0);
        }
    }
}

/// Real Schur-type decomposition of an antisymmetric matrix.
///
/// Uses the eigenvectors of `DᵀD = −D²`: for an eigenvector `v` with eigenvalue
/// `s² > 0`, the pair `(v, −Dv/s)` spans a `D`-invariant plane on which `D`
/// acts as `[[0, s], [−s, 0]]`.
pub fn block_diagonalize(d: &DMatrix<f64>) -> Result<BlockDiagonalD> {
    let n = d.nrows();
    if d.ncols() != n {
        return Err(Error::DimensionMismatch(format!("D is {:?}", d.shape())));
    }
    if n == 0 {
        return Ok(BlockDiagonalD {
            o_matrix: DMatrix::zeros(0, 0),
            blocks: Vec::new(),
        });
    }
    let asym = (d + d.transpose()).amax();
    if asym > 1e-12 * d.amax().max(1.0) {
        return Err(Error::NotAntisymmetric { residual: asym });
    }
    let s_mat = d.transpose() * d;
    let eig = s_mat.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let dnorm = eig.eigenvalues.amax().sqrt();

    let mut chosen: Vec<DVector<f64>> = Vec::with_capacity(n);
    let mut blocks = Vec::new();
    for &k in &order {
        let mut v = eig.eigenvectors.column(k).into_owned();
        orthogonalize(&mut v, &chosen);
        let norm = v.norm();
        if norm < 0.5 {
            continue; // already covered by an earlier pair
        }
        v /= norm;
        let dv = d * &v;
        let s = dv.norm();
        // Singular values below 1e-10 relative count as kernel.
        if s <= 1e-10 * dnorm {
            continue;
        }
        let mut w = -dv / s;
        orthogonalize(&mut w, &chosen);
        w /= w.norm();
        blocks.push(v.dot(&(d * &w)));
        chosen.push(v);
        chosen.push(w);
    }
    // Remaining directions: kernel of D.
    for k in 0..n {
        if chosen.len() == n {
            break;
        }
        let mut e = DVector::zeros(n);
        e[k] = 1.0;
        orthogonalize(&mut e, &chosen);
        let norm = e.norm();
        if norm > 1e-6 {
            chosen.push(e / norm);
        }
    }
    let zero_pairs = (n - 2 * blocks.len()) / 2;
    blocks.extend(std::iter::repeat(0.0).take(zero_pairs));
    Ok(BlockDiagonalD {
        o_matrix: DMatrix::from_columns(&chosen),
        blocks,
    })
}
