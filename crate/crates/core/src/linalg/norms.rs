//! ℓp operator norms, Schatten norms and block norms on ℓ²(Ω; ℓp^m).
//!
//! Only p ∈ {1, 2, ∞} have closed forms. Every other p is estimated from
//! below by a dual-pair power iteration, and when the domain (or, by
//! duality, the codomain) has dimension at most 3 the estimate is upgraded
//! to a certified bracket by a refined mesh over the unit sphere.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{svd, Matrix};

/// Seed used when a caller does not supply one.
pub const DEFAULT_SEED: u64 = 0x5eed_a11e;
/// Restart count for the power iteration.
pub const DEFAULT_RESTARTS: usize = 8;
const POWER_STEPS: usize = 200;
const MESH_STEP: f64 = 0.01;
const MESH_BUDGET: usize = 200_000;
// relative bracket width at which refinement stops
const MESH_TARGET: f64 = 1e-5;

/// Selects the ℓp norm on both domain and codomain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormContext {
    p: f64,
}

impl NormContext {
    pub const HILBERT: NormContext = NormContext { p: 2.0 };

    pub fn new(p: f64) -> Result<Self> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::domain(format!("norm exponent p = {p} is below 1")));
        }
        Ok(Self { p })
    }

    pub fn infinity() -> Self {
        Self { p: f64::INFINITY }
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Conjugate exponent q with 1/p + 1/q = 1.
    pub fn dual(&self) -> NormContext {
        let q = if self.p == 1.0 {
            f64::INFINITY
        } else if self.p.is_infinite() {
            1.0
        } else {
            self.p / (self.p - 1.0)
        };
        NormContext { p: q }
    }

    pub fn is_hilbert(&self) -> bool {
        self.p == 2.0
    }

    /// Whether operator norms in this context have a closed form.
    pub fn is_exact(&self) -> bool {
        self.p == 1.0 || self.p == 2.0 || self.p.is_infinite()
    }

    pub fn vector_norm(&self, x: &[f64]) -> f64 {
        lp_norm(x, self.p)
    }
}

impl fmt::Display for NormContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.p.is_infinite() {
            write!(f, "inf")
        } else {
            write!(f, "{}", self.p)
        }
    }
}

impl FromStr for NormContext {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "inf" | "infinity" | "Inf" | "∞" => Ok(Self::infinity()),
            _ => {
                let p: f64 = s.parse().map_err(|_| Error::domain(format!("invalid norm exponent '{s}'")))?;
                Self::new(p)
            }
        }
    }
}

impl Serialize for NormContext {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.p.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(self.p)
        }
    }
}

impl<'de> Deserialize<'de> for NormContext {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Text(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(p) => NormContext::new(p).map_err(serde::de::Error::custom),
            Repr::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormKind {
    Exact,
    LowerBound,
    Bracketed,
}

/// A norm value with a statement of how much it can be trusted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormEstimate {
    pub value: f64,
    pub kind: NormKind,
    pub slack: f64,
}

impl NormEstimate {
    pub fn exact(value: f64) -> Self {
        Self { value, kind: NormKind::Exact, slack: 0.0 }
    }

    pub fn lower_bound(value: f64) -> Self {
        Self { value, kind: NormKind::LowerBound, slack: 0.0 }
    }

    /// Bracket `[lo, hi]` stored as midpoint and half-width.
    pub fn bracket(lo: f64, hi: f64) -> Self {
        let hi = hi.max(lo);
        Self { value: 0.5 * (lo + hi), kind: NormKind::Bracketed, slack: 0.5 * (hi - lo) }
    }

    /// Largest value known to be at most the true norm.
    pub fn lower(&self) -> f64 {
        self.value - self.slack
    }

    /// Smallest value known to bound the true norm, if any.
    pub fn upper(&self) -> Option<f64> {
        match self.kind {
            NormKind::LowerBound => None,
            _ => Some(self.value + self.slack),
        }
    }
}

pub fn lp_norm(x: &[f64], p: f64) -> f64 {
    if p.is_infinite() {
        x.iter().fold(0.0, |m, v| m.max(v.abs()))
    } else if p == 1.0 {
        x.iter().map(|v| v.abs()).sum()
    } else if p == 2.0 {
        x.iter().map(|v| v * v).sum::<f64>().sqrt()
    } else {
        let scale = x.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        if scale == 0.0 {
            return 0.0;
        }
        scale * x.iter().map(|v| (v.abs() / scale).powf(p)).sum::<f64>().powf(1.0 / p)
    }
}

/// Unit-dual-norm vector `y` with `⟨y, x⟩ = ‖x‖_p` (for 1 < p < ∞).
fn dual_vector(x: &[f64], p: f64) -> Vec<f64> {
    let norm = lp_norm(x, p);
    if norm == 0.0 {
        return vec![0.0; x.len()];
    }
    x.iter().map(|v| v.signum() * (v.abs() / norm).powf(p - 1.0)).collect()
}

fn max_col_sum(a: &Matrix) -> f64 {
    (0..a.cols())
        .map(|j| (0..a.rows()).map(|i| a[(i, j)].abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn max_row_sum(a: &Matrix) -> f64 {
    (0..a.rows()).map(|i| a.row(i).iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max)
}

/// Largest singular value.
pub fn spectral_norm(a: &Matrix) -> f64 {
    svd(a).largest()
}

/// Operator norm with the default seed and restart count.
pub fn operator_norm(a: &Matrix, ctx: NormContext) -> NormEstimate {
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    operator_norm_with(a, ctx, DEFAULT_RESTARTS, &mut rng)
}

/// Operator norm `‖A‖_{p→p}`. Exact for p ∈ {1, 2, ∞}; otherwise a lower
/// bound from `restarts` random starts, bracketed when `min(rows, cols) ≤ 3`.
pub fn operator_norm_with<R: Rng>(a: &Matrix, ctx: NormContext, restarts: usize, rng: &mut R) -> NormEstimate {
    let p = ctx.p();
    if p == 2.0 {
        return NormEstimate::exact(spectral_norm(a));
    }
    if p == 1.0 {
        return NormEstimate::exact(max_col_sum(a));
    }
    if p.is_infinite() {
        return NormEstimate::exact(max_row_sum(a));
    }
    let lower = power_lower_bound(a, ctx, restarts.max(DEFAULT_RESTARTS), rng);
    if a.cols() <= 3 {
        let b = mesh_bracket(a, ctx);
        return NormEstimate::bracket(b.lower().max(lower), b.upper().unwrap());
    }
    if a.rows() <= 3 {
        // ‖A‖_{p→p} = ‖Aᵀ‖_{q→q}
        let b = mesh_bracket(&a.transpose(), ctx.dual());
        return NormEstimate::bracket(b.lower().max(lower), b.upper().unwrap());
    }
    NormEstimate::lower_bound(lower)
}

/// Upper bound `‖A‖₁^{1/p} ‖A‖_∞^{1−1/p}` from the Schur test.
pub fn schur_upper_bound(a: &Matrix, ctx: NormContext) -> f64 {
    let p = ctx.p();
    if p.is_infinite() {
        return max_row_sum(a);
    }
    max_col_sum(a).powf(1.0 / p) * max_row_sum(a).powf(1.0 - 1.0 / p)
}

/// Value to use when a single number is needed: exact values, bracket
/// midpoints, or the lower bound.
pub fn norm_value(a: &Matrix, ctx: NormContext) -> f64 {
    operator_norm(a, ctx).value
}

fn ratio(a: &Matrix, x: &[f64], p: f64) -> f64 {
    let d = lp_norm(x, p);
    if d == 0.0 {
        0.0
    } else {
        lp_norm(&a.mul_vec(x), p) / d
    }
}

/// Dual-pair power iteration from one start; returns the best ratio seen.
fn power_from(a: &Matrix, p: f64, start: Vec<f64>) -> f64 {
    let q = NormContext { p }.dual().p();
    let mut x = start;
    let nx = lp_norm(&x, p);
    if nx == 0.0 {
        return 0.0;
    }
    x.iter_mut().for_each(|v| *v /= nx);
    let mut best = ratio(a, &x, p);
    let at = a.transpose();
    for _ in 0..POWER_STEPS {
        let y = a.mul_vec(&x);
        if lp_norm(&y, p) == 0.0 {
            break;
        }
        let z = at.mul_vec(&dual_vector(&y, p));
        let zx: f64 = z.iter().zip(&x).map(|(u, v)| u * v).sum();
        if lp_norm(&z, q) <= zx * (1.0 + 1e-14) {
            break;
        }
        x = dual_vector(&z, q);
        let r = ratio(a, &x, p);
        if r <= best * (1.0 + 1e-15) {
            best = best.max(r);
            break;
        }
        best = r;
    }
    best
}

/// Lower bound on `‖A‖_{p→p}` from the power iteration, started at the best
/// unit column and at `restarts` random vectors.
pub fn power_lower_bound<R: Rng>(a: &Matrix, ctx: NormContext, restarts: usize, rng: &mut R) -> f64 {
    let p = ctx.p();
    if p.is_infinite() || p == 1.0 {
        return operator_norm(a, ctx).value;
    }
    let n = a.cols();
    let mut best: f64 = 0.0;
    let best_col = (0..n)
        .max_by(|&i, &j| lp_norm(&a.column(i), p).total_cmp(&lp_norm(&a.column(j), p)))
        .unwrap_or(0);
    let mut e = vec![0.0; n];
    e[best_col] = 1.0;
    best = best.max(power_from(a, p, e));
    best = best.max(power_from(a, p, vec![1.0; n]));
    for _ in 0..restarts {
        let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        best = best.max(power_from(a, p, x));
    }
    best
}

#[derive(Debug, Clone, Copy)]
struct Cell {
    center: [f64; 2],
    half: [f64; 2],
    upper: f64,
}

impl PartialEq for Cell {
    fn eq(&self, other: &Self) -> bool {
        self.upper.total_cmp(&other.upper) == Ordering::Equal
    }
}
impl Eq for Cell {}
impl PartialOrd for Cell {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Cell {
    fn cmp(&self, other: &Self) -> Ordering {
        self.upper.total_cmp(&other.upper)
    }
}

/// Certified bracket of `‖A‖_{p→p}` for `A` with at most 3 columns.
///
/// The unit Euclidean sphere (up to sign) is covered by cells of angular
/// width 0.01; each cell centre `w` gives the lower value `‖Aw‖_p/‖w‖_p`
/// and, for every `u` within Euclidean distance `ρ` of `w`, the bound
/// `(‖Aw‖_p + c_out‖A‖₂ρ)/(‖w‖_p − c_in ρ)` where `c_out`, `c_in` bound
/// `‖·‖_p/‖·‖₂`. Cells whose bound exceeds the best lower value are split
/// until the bracket closes or the evaluation budget runs out. The best
/// cell then seeds a power iteration to polish the lower value.
pub fn mesh_bracket(a: &Matrix, ctx: NormContext) -> NormEstimate {
    let p = ctx.p();
    let d = a.cols();
    assert!(d <= 3, "mesh bracket needs at most 3 columns");
    if d == 1 {
        return NormEstimate::exact(lp_norm(&a.column(0), p));
    }
    let m = a.rows();
    let c_ratio = |dim: usize| -> f64 {
        if p.is_infinite() {
            1.0
        } else {
            (dim as f64).powf(1.0 / p - 0.5).max(1.0)
        }
    };
    let (c_out, c_in) = (c_ratio(m), c_ratio(d));
    let a2 = spectral_norm(a);

    let point = |c: [f64; 2]| -> Vec<f64> {
        if d == 2 {
            vec![c[0].cos(), c[0].sin()]
        } else {
            let (t, f) = (c[0], c[1]);
            vec![t.sin() * f.cos(), t.sin() * f.sin(), t.cos()]
        }
    };
    let radius = |h: [f64; 2]| -> f64 {
        if d == 2 {
            h[0]
        } else {
            h[0] + h[1]
        }
    };

    let mut lower: f64 = 0.0;
    let mut arg_best = point([0.0, 0.0]);
    let mut refinements = 0usize;
    let evaluate = |c: [f64; 2], h: [f64; 2], lower: &mut f64, arg: &mut Vec<f64>| -> Cell {
        let w = point(c);
        let num = lp_norm(&a.mul_vec(&w), p);
        let den = lp_norm(&w, p);
        let val = num / den;
        if val > *lower {
            *lower = val;
            *arg = w;
        }
        let r = radius(h);
        let upper = if den > c_in * r { (num + c_out * a2 * r) / (den - c_in * r) } else { f64::INFINITY };
        Cell { center: c, half: h, upper }
    };

    let mut heap = BinaryHeap::new();
    let steps = (PI / MESH_STEP).ceil() as usize;
    let h = PI / steps as f64;
    if d == 2 {
        for k in 0..steps {
            let c = [(k as f64 + 0.5) * h, 0.0];
            heap.push(evaluate(c, [0.5 * h, 0.0], &mut lower, &mut arg_best));
        }
    } else {
        for i in 0..steps {
            for j in 0..steps {
                let c = [(i as f64 + 0.5) * h, (j as f64 + 0.5) * h];
                heap.push(evaluate(c, [0.5 * h, 0.5 * h], &mut lower, &mut arg_best));
            }
        }
    }

    while let Some(top) = heap.peek().copied() {
        if top.upper <= lower * (1.0 + MESH_TARGET) + 1e-300 {
            break;
        }
        if refinements > MESH_BUDGET {
            break;
        }
        refinements += 1;
        heap.pop();
        let [hx, hy] = top.half;
        if d == 2 {
            for s in [-1.0, 1.0] {
                let c = [top.center[0] + s * 0.5 * hx, 0.0];
                heap.push(evaluate(c, [0.5 * hx, 0.0], &mut lower, &mut arg_best));
            }
        } else {
            for sx in [-1.0, 1.0] {
                for sy in [-1.0, 1.0] {
                    let c = [top.center[0] + sx * 0.5 * hx, top.center[1] + sy * 0.5 * hy];
                    heap.push(evaluate(c, [0.5 * hx, 0.5 * hy], &mut lower, &mut arg_best));
                }
            }
        }
    }
    let upper = heap.peek().map_or(lower, |c| c.upper.max(lower));
    if !p.is_infinite() && p != 1.0 {
        lower = lower.max(power_from(a, p, arg_best));
    }
    NormEstimate::bracket(lower, upper.max(lower))
}

/// Schatten r-norm: the ℓr norm of the singular values.
pub fn schatten_norm(a: &Matrix, r: f64) -> Result<f64> {
    if r.is_nan() || r < 1.0 {
        return Err(Error::domain(format!("Schatten exponent r = {r} is below 1")));
    }
    let s = svd(a).singular_values;
    let s1 = s.first().copied().unwrap_or(0.0);
    if r.is_infinite() || s1 == 0.0 {
        return Ok(s1);
    }
    Ok(s1 * s.iter().map(|v| (v / s1).powf(r)).sum::<f64>().powf(1.0 / r))
}

/// Largest `|Ω|` for which the ℓ∞/ℓ1 block norm is computed by exhaustive
/// sign enumeration.
pub const BLOCK_ENUMERATION_MAX: usize = 5;

/// Norm of `T ⊗ id_{ℓp^m}` on functions `Ω → ℓp^m` with the mixed norm
/// `(Σ_ω ‖f(ω)‖_p²)^{1/2}`.
///
/// Exact for p = 2 and m = 1 (both equal `‖T‖₂`) and, for `|Ω| ≤ 5`, for
/// p ∈ {1, ∞}: the ℓ∞ ball of `ℓ²(Ω; ℓ∞^m)` has extreme points whose rows
/// are scaled sign vectors, which reduces the norm to a maximum of
/// `‖T ∘ E‖₂` over sign matrices `E` with at most `m` distinct rows up to
/// sign. p = 1 follows by duality through `Tᵀ`. Other cases report an
/// alternating-maximization lower bound.
pub fn tensor_block_norm(t: &Matrix, block_dim: usize, ctx: NormContext) -> Result<NormEstimate> {
    if block_dim == 0 {
        return Err(Error::domain("block dimension must be positive"));
    }
    if !t.is_square() {
        return Err(Error::domain("block operator must be square"));
    }
    let p = ctx.p();
    if p == 2.0 || block_dim == 1 {
        return Ok(NormEstimate::exact(spectral_norm(t)));
    }
    let k = t.rows();
    if k <= BLOCK_ENUMERATION_MAX {
        if p.is_infinite() {
            return Ok(NormEstimate::exact(sign_enumeration_norm(t, block_dim)));
        }
        if p == 1.0 {
            return Ok(NormEstimate::exact(sign_enumeration_norm(&t.transpose(), block_dim)));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    Ok(NormEstimate::lower_bound(block_lower_bound(t, block_dim, p, DEFAULT_RESTARTS, &mut rng)))
}

fn sign_enumeration_norm(t: &Matrix, block_dim: usize) -> f64 {
    let k = t.rows();
    let free = (k - 1) * (k - 1);
    let mut best: f64 = 0.0;
    let mut e = Matrix::zeros(k, k);
    for mask in 0u64..(1u64 << free) {
        // rows and columns normalized so that E[i][0] = E[0][j] = +1
        for i in 0..k {
            for j in 0..k {
                let s = if i == 0 || j == 0 {
                    1.0
                } else {
                    let bit = (i - 1) * (k - 1) + (j - 1);
                    if mask >> bit & 1 == 1 {
                        -1.0
                    } else {
                        1.0
                    }
                };
                e[(i, j)] = t[(i, j)] * s;
            }
        }
        if block_dim < k {
            let mut distinct: Vec<u64> = (0..k)
                .map(|i| if i == 0 { 0 } else { (mask >> ((i - 1) * (k - 1))) & ((1u64 << (k - 1)) - 1) })
                .collect();
            distinct.sort_unstable();
            distinct.dedup();
            if distinct.len() > block_dim {
                continue;
            }
        }
        best = best.max(spectral_norm(&e));
    }
    best
}

fn mixed_norm(f: &[Vec<f64>], p: f64) -> f64 {
    f.iter().map(|row| lp_norm(row, p).powi(2)).sum::<f64>().sqrt()
}

fn apply_blocks(t: &Matrix, f: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let m = f[0].len();
    (0..t.rows())
        .map(|i| {
            let mut out = vec![0.0; m];
            for (j, row) in f.iter().enumerate() {
                let c = t[(i, j)];
                for (o, v) in out.iter_mut().zip(row) {
                    *o += c * v;
                }
            }
            out
        })
        .collect()
}

/// Dual element of `f` in `ℓ²(Ω; ℓp^m)`: unit in `ℓ²(Ω; ℓq^m)` and pairing
/// to the norm of `f`.
fn mixed_dual(f: &[Vec<f64>], p: f64) -> Vec<Vec<f64>> {
    let total = mixed_norm(f, p);
    f.iter()
        .map(|row| {
            let rn = lp_norm(row, p);
            if total == 0.0 || rn == 0.0 {
                return vec![0.0; row.len()];
            }
            let w = rn / total;
            if p.is_infinite() {
                let idx = (0..row.len()).max_by(|&i, &j| row[i].abs().total_cmp(&row[j].abs())).unwrap();
                let mut y = vec![0.0; row.len()];
                y[idx] = w * row[idx].signum();
                y
            } else if p == 1.0 {
                row.iter().map(|v| w * v.signum()).collect()
            } else {
                dual_vector(row, p).into_iter().map(|v| w * v).collect()
            }
        })
        .collect()
}

/// Alternating maximization of `⟨G, (T ⊗ id) F⟩` over the unit balls of
/// `ℓ²(ℓp)` and its dual.
pub fn block_lower_bound<R: Rng>(t: &Matrix, block_dim: usize, p: f64, restarts: usize, rng: &mut R) -> f64 {
    let k = t.rows();
    let q = NormContext { p }.dual().p();
    let tt = t.transpose();
    let value = |f: &[Vec<f64>]| {
        let n = mixed_norm(f, p);
        if n == 0.0 {
            0.0
        } else {
            mixed_norm(&apply_blocks(t, f), p) / n
        }
    };
    let mut starts: Vec<Vec<Vec<f64>>> = Vec::new();
    // top singular vector placed in the first coordinate
    let top = svd(t).v.column(0);
    starts.push(
        top.iter()
            .map(|&a| {
                let mut r = vec![0.0; block_dim];
                r[0] = a;
                r
            })
            .collect(),
    );
    for _ in 0..restarts.max(1) * 4 {
        starts.push((0..k).map(|_| (0..block_dim).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect());
    }
    let mut best: f64 = 0.0;
    for mut f in starts {
        let mut val = value(&f);
        for _ in 0..POWER_STEPS {
            let g = mixed_dual(&apply_blocks(t, &f), p);
            let h = apply_blocks(&tt, &g);
            let f_next = mixed_dual(&h, q);
            let v_next = value(&f_next);
            if v_next <= val * (1.0 + 1e-14) {
                val = val.max(v_next);
                break;
            }
            f = f_next;
            val = v_next;
        }
        best = best.max(val);
    }
    // f(ω) = a_ω e₁ realizes ‖T‖₂
    best.max(spectral_norm(t))
}
