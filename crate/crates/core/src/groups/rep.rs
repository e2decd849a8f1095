use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::groups::group::{FiniteGroup, Subgroup};
use crate::linalg::{inverse, operator_norm, Matrix, NormContext};

const HOMOMORPHISM_SAMPLES: usize = 1000;
const HOMOMORPHISM_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RepKind {
    /// Left regular representation on `ℓp(G)`.
    Regular,
    Other,
}

/// A representation `g ↦ π(g)` of a finite group by real matrices.
#[derive(Debug, Clone)]
pub struct GroupRep {
    group: FiniteGroup,
    mats: Vec<Matrix>,
    ctx: NormContext,
    kind: RepKind,
    /// `sup_g ‖π(g)‖` in `ctx`, an upper estimate when not exact.
    sup_norm_bound: f64,
}

impl GroupRep {
    /// `λ(g) e_h = e_{gh}`.
    pub fn regular(group: &FiniteGroup, ctx: NormContext) -> Self {
        let n = group.order();
        let mats = (0..n)
            .map(|g| {
                let mut m = Matrix::zeros(n, n);
                for h in 0..n {
                    m[(group.mul(g, h), h)] = 1.0;
                }
                m
            })
            .collect();
        // permutation matrices are isometries of every ℓp
        Self { group: group.clone(), mats, ctx, kind: RepKind::Regular, sup_norm_bound: 1.0 }
    }

    /// Checks `π(e) = I` and `π(gh) = π(g)π(h)` on all pairs, or on 1000
    /// seeded random pairs for larger groups.
    pub fn from_matrices(group: &FiniteGroup, mats: Vec<Matrix>, ctx: NormContext) -> Result<Self> {
        let n = group.order();
        if mats.len() != n {
            return Err(Error::domain(format!("{} matrices for a group of order {n}", mats.len())));
        }
        let dim = mats[0].rows();
        if mats.iter().any(|m| m.rows() != dim || m.cols() != dim) {
            return Err(Error::domain(format!("representation matrices must all be {dim} x {dim}")));
        }
        if (&mats[0] - &Matrix::identity(dim)).max_abs() > HOMOMORPHISM_TOL {
            return Err(Error::domain("identity is not represented by I"));
        }
        let check = |g: usize, h: usize| {
            let err = (&(&mats[g] * &mats[h]) - &mats[group.mul(g, h)]).max_abs();
            if err > HOMOMORPHISM_TOL {
                Err(Error::domain(format!(
                    "pi({})pi({}) differs from pi of the product by {err:e}",
                    group.label(g),
                    group.label(h)
                )))
            } else {
                Ok(())
            }
        };
        if n * n <= HOMOMORPHISM_SAMPLES {
            for g in 0..n {
                for h in 0..n {
                    check(g, h)?;
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            for _ in 0..HOMOMORPHISM_SAMPLES {
                check(rng.gen_range(0..n), rng.gen_range(0..n))?;
            }
        }
        let sup_norm_bound = sup_norm(&mats, ctx);
        Ok(Self { group: group.clone(), mats, ctx, kind: RepKind::Other, sup_norm_bound })
    }

    /// `g ↦ S π(g) S⁻¹`.
    pub fn conjugated(&self, s: &Matrix) -> Result<Self> {
        let s_inv = inverse(s)?;
        let mats = self.mats.iter().map(|m| &(s * m) * &s_inv).collect();
        Self::from_matrices(&self.group, mats, self.ctx)
    }

    /// The same matrices measured in another norm.
    pub fn with_ctx(&self, ctx: NormContext) -> Self {
        let sup_norm_bound = if self.kind == RepKind::Regular { 1.0 } else { sup_norm(&self.mats, ctx) };
        Self { ctx, sup_norm_bound, ..self.clone() }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.mats[0].rows()
    }

    pub fn ctx(&self) -> NormContext {
        self.ctx
    }

    pub fn kind(&self) -> RepKind {
        self.kind
    }

    pub fn sup_norm_bound(&self) -> f64 {
        self.sup_norm_bound
    }

    pub fn matrix(&self, g: usize) -> &Matrix {
        &self.mats[g]
    }

    /// `π(f) = Σ_g f(g) π(g)` for counting measure.
    pub fn apply(&self, f: &[f64]) -> Result<Matrix> {
        if f.len() != self.mats.len() {
            return Err(Error::domain(format!("coefficient vector has length {}, group order is {}", f.len(), self.mats.len())));
        }
        let dim = self.dim();
        let mut out = Matrix::zeros(dim, dim);
        for (c, m) in f.iter().zip(&self.mats) {
            if *c != 0.0 {
                out = &out + &m.scale(*c);
            }
        }
        Ok(out)
    }

    /// Characteristic function of `k` divided by `|k|`.
    pub fn averaging_coefficients(&self, k: &Subgroup) -> Vec<f64> {
        let mut f = vec![0.0; self.mats.len()];
        let w = 1.0 / k.order() as f64;
        for &g in k.elements() {
            f[g] = w;
        }
        f
    }
}

fn sup_norm(mats: &[Matrix], ctx: NormContext) -> f64 {
    mats.iter()
        .map(|m| {
            let est = operator_norm(m, ctx);
            est.upper().unwrap_or(est.value)
        })
        .fold(0.0, f64::max)
}
