use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::{inverse, operator_norm, schur_upper_bound, svd, Basis, Matrix, NormContext};

/// An idempotent operator together with bases of its image and kernel.
#[derive(Debug, Clone)]
pub struct Projection {
    op: Matrix,
    ctx: NormContext,
    idem_residual: f64,
    image_basis: Basis,
    kernel_basis: Basis,
}

impl Projection {
    /// The unique projection with `Im P = span(image)` and
    /// `Ker P = span(kernel)`.
    pub fn from_bases(image: &Basis, kernel: &Basis, ctx: NormContext) -> Result<Self> {
        let n = image.ambient();
        if kernel.ambient() != n {
            return Err(Error::domain("image and kernel bases live in different spaces"));
        }
        if image.len() + kernel.len() != n {
            return Err(Error::DegenerateBasis { condition: f64::INFINITY });
        }
        let tol = Tolerances::default();
        let joint = image.join(kernel).to_matrix().expect("n > 0 columns");
        let condition = svd(&joint).condition();
        if condition > tol.max_condition {
            return Err(Error::DegenerateBasis { condition });
        }
        let mut keep = Matrix::zeros(n, n);
        for i in 0..image.len() {
            keep[(i, i)] = 1.0;
        }
        let op = &(&joint * &keep) * &inverse(&joint)?;
        let idem_residual = (&(&op * &op) - &op).frobenius();
        Ok(Self { op, ctx, idem_residual, image_basis: image.clone(), kernel_basis: kernel.clone() })
    }

    /// Wraps an operator that is idempotent within the projection tolerance.
    /// Image and kernel bases are read off a singular value decomposition.
    pub fn from_matrix(op: Matrix, ctx: NormContext) -> Result<Self> {
        Self::from_matrix_with(op, ctx, &Tolerances::default())
    }

    pub fn from_matrix_with(op: Matrix, ctx: NormContext, tol: &Tolerances) -> Result<Self> {
        if !op.is_square() {
            return Err(Error::domain(format!("projection must be square, got {}x{}", op.rows(), op.cols())));
        }
        let idem_residual = (&(&op * &op) - &op).frobenius();
        if idem_residual > tol.projection * (1.0 + op.frobenius()) {
            return Err(Error::domain(format!("operator is not idempotent (residual {idem_residual:e})")));
        }
        // nonzero singular values of a projection are at least 1
        let d = svd(&op);
        let threshold = tol.rank * d.largest().max(1.0);
        let image_basis = d.range_basis_above(threshold);
        let kernel_basis = d.null_basis_above(threshold);
        Ok(Self { op, ctx, idem_residual, image_basis, kernel_basis })
    }

    pub fn identity(n: usize, ctx: NormContext) -> Self {
        Self::from_matrix(Matrix::identity(n), ctx).expect("identity is idempotent")
    }

    pub fn op(&self) -> &Matrix {
        &self.op
    }

    pub fn ctx(&self) -> NormContext {
        self.ctx
    }

    pub fn dim(&self) -> usize {
        self.op.rows()
    }

    pub fn rank(&self) -> usize {
        self.image_basis.len()
    }

    pub fn idem_residual(&self) -> f64 {
        self.idem_residual
    }

    pub fn image_basis(&self) -> &Basis {
        &self.image_basis
    }

    pub fn kernel_basis(&self) -> &Basis {
        &self.kernel_basis
    }

    /// Operator norm in the projection's context.
    pub fn norm(&self) -> f64 {
        operator_norm(&self.op, self.ctx).value
    }

    /// Same operator measured in another ℓp context.
    pub fn with_ctx(&self, ctx: NormContext) -> Self {
        Self { ctx, ..self.clone() }
    }

    /// Text form: a `p=<value>` line followed by the matrix format.
    pub fn to_text(&self) -> String {
        format!("p={}\n{}", self.ctx, self.op.to_text())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (line, header) = lines.next().ok_or_else(|| Error::parse(1, "a 'p=<value>' header"))?;
        let ctx: NormContext = header
            .strip_prefix("p=")
            .ok_or_else(|| Error::parse(line, "a 'p=<value>' header"))?
            .parse()
            .map_err(|_| Error::parse(line, "a norm exponent >= 1 or 'inf'"))?;
        let op = Matrix::parse_lines(&mut lines)?;
        if let Some((line, _)) = lines.next() {
            return Err(Error::parse(line, "end of projection data"));
        }
        Self::from_matrix(op, ctx)
    }
}

/// Norm that is never below the true ℓp operator norm: exact for
/// p ∈ {1, 2, ∞}, the Schur bound otherwise. Used for tolerance checks.
pub(crate) fn residual_norm(m: &Matrix, ctx: NormContext) -> f64 {
    if ctx.is_exact() {
        operator_norm(m, ctx).value
    } else {
        schur_upper_bound(m, ctx)
    }
}

/// Cheap upper bound for stopping tests: Frobenius for p = 2.
pub(crate) fn cheap_upper_norm(m: &Matrix, ctx: NormContext) -> f64 {
    if ctx.is_hilbert() {
        m.frobenius()
    } else {
        schur_upper_bound(m, ctx)
    }
}
