//! One-sided (Hestenes) Jacobi SVD and the subspace utilities built on it.
//!
//! Rank decisions everywhere in the crate go through [`Svd::rank`] with a
//! threshold relative to the largest singular value.

use crate::linalg::Matrix;

const MAX_SWEEPS: usize = 80;

/// `A = U Σ Vᵀ` with singular values in descending order.
///
/// For an `m x n` input there are always `n` singular values (zero-padded
/// when `m < n`), `u` is `m x n` with zero columns for vanishing singular
/// values, and `v` is a full `n x n` orthogonal matrix.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: Matrix,
    pub singular_values: Vec<f64>,
    pub v: Matrix,
}

pub fn svd(a: &Matrix) -> Svd {
    let (m, n) = (a.rows(), a.cols());
    let rows = m.max(n);
    // column-major working copy, zero rows appended for wide input
    let mut w: Vec<Vec<f64>> = (0..n)
        .map(|j| {
            let mut col = a.column(j);
            col.resize(rows, 0.0);
            col
        })
        .collect();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|j| {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            e
        })
        .collect();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha: f64 = w[p].iter().map(|x| x * x).sum();
                let beta: f64 = w[q].iter().map(|x| x * x).sum();
                let gamma: f64 = w[p].iter().zip(&w[q]).map(|(x, y)| x * y).sum();
                if gamma == 0.0 || gamma.abs() <= 1e-15 * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut w, p, q, c, s);
                rotate(&mut v, p, q, c, s);
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<f64> = w.iter().map(|col| col.iter().map(|x| x * x).sum::<f64>().sqrt()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));

    let mut u = Matrix::zeros(m, n);
    let mut vm = Matrix::zeros(n, n);
    let mut singular_values = Vec::with_capacity(n);
    for (k, &j) in order.iter().enumerate() {
        let s = norms[j];
        singular_values.push(s);
        if s > 0.0 {
            for i in 0..m {
                u[(i, k)] = w[j][i] / s;
            }
        }
        for i in 0..n {
            vm[(i, k)] = v[j][i];
        }
    }
    Svd { u, singular_values, v: vm }
}

fn rotate(cols: &mut [Vec<f64>], p: usize, q: usize, c: f64, s: f64) {
    let (left, right) = cols.split_at_mut(q);
    let (cp, cq) = (&mut left[p], &mut right[0]);
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let (a, b) = (*x, *y);
        *x = c * a - s * b;
        *y = s * a + c * b;
    }
}

impl Svd {
    pub fn largest(&self) -> f64 {
        self.singular_values.first().copied().unwrap_or(0.0)
    }

    /// Number of singular values above `rel · s₁` (zero for the zero matrix).
    pub fn rank(&self, rel: f64) -> usize {
        self.rank_above(rel * self.largest())
    }

    /// Number of singular values strictly above `threshold`.
    pub fn rank_above(&self, threshold: f64) -> usize {
        self.singular_values.iter().filter(|&&s| s > threshold).count()
    }

    /// Orthonormal basis of the column space.
    pub fn range_basis(&self, rel: f64) -> Basis {
        self.range_basis_above(rel * self.largest())
    }

    pub fn range_basis_above(&self, threshold: f64) -> Basis {
        let r = self.rank_above(threshold);
        Basis::new(self.u.rows(), (0..r).map(|k| self.u.column(k)).collect())
    }

    /// Orthonormal basis of the null space.
    pub fn null_basis(&self, rel: f64) -> Basis {
        self.null_basis_above(rel * self.largest())
    }

    pub fn null_basis_above(&self, threshold: f64) -> Basis {
        let r = self.rank_above(threshold);
        let n = self.v.rows();
        Basis::new(n, (r..n).map(|k| self.v.column(k)).collect())
    }

    /// `s₁ / s_min`, infinite when the smallest singular value vanishes.
    pub fn condition(&self) -> f64 {
        let smin = self.singular_values.last().copied().unwrap_or(0.0);
        if smin == 0.0 {
            f64::INFINITY
        } else {
            self.largest() / smin
        }
    }
}

/// A list of column vectors spanning a subspace of `ℝ^ambient`. Unlike
/// [`Matrix`] it may be empty, which represents the zero subspace.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct Basis {
    ambient: usize,
    vectors: Vec<Vec<f64>>,
}

impl Basis {
    pub fn new(ambient: usize, vectors: Vec<Vec<f64>>) -> Self {
        assert!(vectors.iter().all(|v| v.len() == ambient), "basis vector length mismatch");
        Self { ambient, vectors }
    }

    pub fn empty(ambient: usize) -> Self {
        Self { ambient, vectors: Vec::new() }
    }

    pub fn from_matrix(m: &Matrix) -> Self {
        Self::new(m.rows(), m.columns())
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vec<f64>] {
        &self.vectors
    }

    pub fn to_matrix(&self) -> Option<Matrix> {
        (!self.is_empty()).then(|| Matrix::from_columns(self.ambient, &self.vectors))
    }

    /// Concatenation of two bases of the same ambient space.
    pub fn join(&self, other: &Basis) -> Basis {
        assert_eq!(self.ambient, other.ambient);
        let mut vectors = self.vectors.clone();
        vectors.extend(other.vectors.iter().cloned());
        Basis { ambient: self.ambient, vectors }
    }

    /// Numerical rank of the spanning set.
    pub fn rank(&self, rel: f64) -> usize {
        self.to_matrix().map_or(0, |m| svd(&m).rank(rel))
    }

    /// Maps every vector through `op`.
    pub fn map(&self, op: &Matrix) -> Basis {
        Basis::new(op.rows(), self.vectors.iter().map(|v| op.mul_vec(v)).collect())
    }
}

/// Basis of `ker A`.
pub fn null_space(a: &Matrix, rel: f64) -> Basis {
    svd(a).null_basis(rel)
}

/// Basis of the intersection of the column spans of all bases, computed as
/// the null space of the stacked `[B₁ | −B_j]` systems.
pub fn intersect(bases: &[Basis], rel: f64) -> Basis {
    let Some(first) = bases.first() else {
        panic!("intersect needs at least one basis");
    };
    let ambient = first.ambient();
    let mut current = orthonormalize(first, rel);
    for b in &bases[1..] {
        if current.is_empty() || b.is_empty() {
            return Basis::empty(ambient);
        }
        // x = C a = B c  ⇔  [C | −B] (a; c) = 0
        let c = current.to_matrix().unwrap();
        let bm = b.to_matrix().unwrap().scale(-1.0);
        let stacked = c.hcat(&bm);
        let kernel = svd(&stacked).null_basis(rel);
        let k = c.cols();
        let vecs: Vec<Vec<f64>> = kernel
            .vectors()
            .iter()
            .map(|coef| c.mul_vec(&coef[..k]))
            .collect();
        current = orthonormalize(&Basis::new(ambient, vecs), rel);
    }
    current
}

/// Orthonormal basis for the span of `b`.
pub fn orthonormalize(b: &Basis, rel: f64) -> Basis {
    match b.to_matrix() {
        None => Basis::empty(b.ambient()),
        Some(m) => svd(&m).range_basis(rel),
    }
}
