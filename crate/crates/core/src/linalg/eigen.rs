//! Cyclic Jacobi eigensolver for dense real symmetric matrices.

use crate::error::{Error, Result};
use crate::linalg::Matrix;

const MAX_SWEEPS: usize = 100;

/// Eigenvalues in ascending order with matching orthonormal eigenvectors
/// stored as the columns of `vectors`.
#[derive(Debug, Clone)]
pub struct SymEigen {
    pub values: Vec<f64>,
    pub vectors: Matrix,
}

/// Diagonalizes a symmetric matrix as `A = V Λ Vᵀ`.
///
/// Rejects non-square input and matrices with
/// `‖A − Aᵀ‖_max > 1e-10·(1 + ‖A‖_max)`; the symmetric part is used.
pub fn sym_eigen(a: &Matrix) -> Result<SymEigen> {
    sym_eigen_with(a, 1e-10)
}

pub fn sym_eigen_with(a: &Matrix, symmetry_tol: f64) -> Result<SymEigen> {
    if !a.is_square() {
        return Err(Error::domain(format!(
            "eigensolve needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let asym = a.asymmetry();
    if asym > symmetry_tol * (1.0 + a.max_abs()) {
        return Err(Error::domain(format!("matrix is not symmetric (asymmetry {asym:e})")));
    }
    let n = a.rows();
    // symmetric part, row-major
    let mut m: Vec<f64> = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            m[i * n + j] = 0.5 * (a[(i, j)] + a[(j, i)]);
        }
    }
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let norm: f64 = m.iter().map(|x| x * x).sum::<f64>().sqrt();

    for sweep in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .map(|(i, j)| m[i * n + j] * m[i * n + j])
            .sum();
        if off.sqrt() <= f64::EPSILON * 1e-2 * norm || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = m[p * n + p];
                let aqq = m[q * n + q];
                // negligible against both diagonal entries: drop it
                if sweep > 3 && (app.abs() + 100.0 * apq.abs() == app.abs()) && (aqq.abs() + 100.0 * apq.abs() == aqq.abs()) {
                    m[p * n + q] = 0.0;
                    m[q * n + p] = 0.0;
                    continue;
                }
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = m[k * n + p];
                    let akq = m[k * n + q];
                    m[k * n + p] = c * akp - s * akq;
                    m[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = m[p * n + k];
                    let aqk = m[q * n + k];
                    m[p * n + k] = c * apk - s * aqk;
                    m[q * n + k] = s * apk + c * aqk;
                }
                m[p * n + q] = 0.0;
                m[q * n + p] = 0.0;
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[i * n + i].total_cmp(&m[j * n + j]));
    let values = order.iter().map(|&i| m[i * n + i]).collect();
    let mut vectors = Matrix::zeros(n, n);
    for (k, &j) in order.iter().enumerate() {
        for i in 0..n {
            vectors[(i, k)] = v[i * n + j];
        }
    }
    Ok(SymEigen { values, vectors })
}
