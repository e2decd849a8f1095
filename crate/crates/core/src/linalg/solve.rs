use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Solves `A X = B` by LU decomposition with partial pivoting.
pub fn solve(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    if !a.is_square() || a.rows() != b.rows() {
        return Err(Error::domain("solve needs a square system with matching right-hand side"));
    }
    let n = a.rows();
    let mut lu = a.clone();
    let mut x = b.clone();
    let scale = a.max_abs().max(f64::MIN_POSITIVE);
    for k in 0..n {
        let pivot = (k..n)
            .max_by(|&i, &j| lu[(i, k)].abs().total_cmp(&lu[(j, k)].abs()))
            .unwrap();
        if lu[(pivot, k)].abs() <= 1e-300_f64.max(f64::EPSILON * 1e-4 * scale) {
            return Err(Error::domain("singular matrix"));
        }
        if pivot != k {
            swap_rows(&mut lu, pivot, k);
            swap_rows(&mut x, pivot, k);
        }
        let d = lu[(k, k)];
        for i in (k + 1)..n {
            let f = lu[(i, k)] / d;
            if f == 0.0 {
                continue;
            }
            lu[(i, k)] = 0.0;
            for j in (k + 1)..n {
                lu[(i, j)] -= f * lu[(k, j)];
            }
            for j in 0..x.cols() {
                x[(i, j)] -= f * x[(k, j)];
            }
        }
    }
    for k in (0..n).rev() {
        for j in 0..x.cols() {
            let mut s = x[(k, j)];
            for i in (k + 1)..n {
                s -= lu[(k, i)] * x[(i, j)];
            }
            x[(k, j)] = s / lu[(k, k)];
        }
    }
    Ok(x)
}

pub fn inverse(a: &Matrix) -> Result<Matrix> {
    solve(a, &Matrix::identity(a.rows()))
}

fn swap_rows(m: &mut Matrix, a: usize, b: usize) {
    for j in 0..m.cols() {
        let t = m[(a, j)];
        m[(a, j)] = m[(b, j)];
        m[(b, j)] = t;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_of_pivoting_case() {
        let a = Matrix::from_rows(&[vec![0.0, 1.0, 2.0], vec![1.0, 0.0, 3.0], vec![4.0, -3.0, 8.0]]).unwrap();
        let inv = inverse(&a).unwrap();
        let id = &a * &inv;
        assert!((&id - &Matrix::identity(3)).max_abs() < 1e-12);
    }

    #[test]
    fn singular_is_an_error() {
        let a = Matrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        assert!(inverse(&a).is_err());
    }
}
