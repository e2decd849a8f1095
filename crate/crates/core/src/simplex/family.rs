use std::collections::BTreeMap;
use std::sync::RwLock;

use rayon::prelude::*;
use serde::Serialize;

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::{intersect, operator_norm, Basis, Matrix, NormContext};
use crate::projections::{average, corollary_bound, iterate_powers, residual_norm, Projection};
use crate::simplex::face::{codim1_faces, Face, MAX_SIMPLEX_DIM};

/// A computed `P_τ` with its convergence record.
#[derive(Debug, Clone)]
pub struct FaceLimit {
    pub projection: Projection,
    /// Number of terms `N = |Δ ∖ τ|` in the average.
    pub terms: usize,
    pub iterations: usize,
    pub final_residual: f64,
    /// Whether `‖T^∞ − T^i‖ ≤ 4N((2N−1)/(2N))^{i−1}` held at every iterate.
    pub corollary_bound_held: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct FaceSummary {
    pub face: Face,
    pub rank: usize,
    pub norm: f64,
    pub iterations: usize,
    pub final_residual: f64,
    pub corollary_bound_held: bool,
}

/// Projections indexed by the faces of the simplex `Δ = {0, …, n}`: one
/// per codimension-one face plus `P_Δ`. Smaller faces get `P_τ = lim T_τ^i`
/// on demand; results are cached.
#[derive(Debug)]
pub struct SimplexFamily {
    n: usize,
    ctx: NormContext,
    p_top: Projection,
    p_codim1: BTreeMap<Face, Projection>,
    tol: Tolerances,
    cache: RwLock<BTreeMap<Face, FaceLimit>>,
}

impl Clone for SimplexFamily {
    fn clone(&self) -> Self {
        Self {
            n: self.n,
            ctx: self.ctx,
            p_top: self.p_top.clone(),
            p_codim1: self.p_codim1.clone(),
            tol: self.tol,
            cache: RwLock::new(self.cache.read().expect("cache lock").clone()),
        }
    }
}

impl SimplexFamily {
    /// `codim1[i]` is the projection for the face `Δ ∖ {i}`.
    pub fn new(top: Projection, codim1: Vec<Projection>) -> Result<Self> {
        Self::with_tolerances(top, codim1, Tolerances::default())
    }

    pub fn with_tolerances(top: Projection, codim1: Vec<Projection>, tol: Tolerances) -> Result<Self> {
        if codim1.len() < 2 || codim1.len() > MAX_SIMPLEX_DIM + 1 {
            return Err(Error::domain(format!("need between 2 and {} codimension-one projections", MAX_SIMPLEX_DIM + 1)));
        }
        let n = codim1.len() - 1;
        let ctx = top.ctx();
        let dim = top.dim();
        if codim1.iter().any(|p| p.dim() != dim || p.ctx() != ctx) {
            return Err(Error::domain("all projections must share dimension and norm context"));
        }
        let full = Face::full(n);
        let mut p_codim1 = BTreeMap::new();
        for (i, p) in codim1.into_iter().enumerate() {
            let face = full.without(i);
            let residual = residual_norm(&(&(p.op() * top.op()) - p.op()), ctx);
            if residual > tol.projection * (1.0 + p.op().frobenius()) {
                return Err(Error::ConsistencyPrecondition { identity: format!("P_{face} P_Δ = P_{face}"), residual });
            }
            p_codim1.insert(face, p);
        }
        Ok(Self { n, ctx, p_top: top, p_codim1, tol, cache: RwLock::new(BTreeMap::new()) })
    }

    /// Family given by the codimension-one projections in the order of
    /// [`codim1_faces`].
    pub fn from_faces(top: Projection, faces: BTreeMap<Face, Projection>) -> Result<Self> {
        let n = faces.len().saturating_sub(1);
        let full = Face::full(n);
        let mut ordered = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let p = faces
                .get(&full.without(i))
                .ok_or_else(|| Error::domain(format!("missing projection for face {}", full.without(i))))?;
            ordered.push(p.clone());
        }
        Self::new(top, ordered)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ctx(&self) -> NormContext {
        self.ctx
    }

    pub fn dim(&self) -> usize {
        self.p_top.dim()
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    pub fn full(&self) -> Face {
        Face::full(self.n)
    }

    pub fn top(&self) -> &Projection {
        &self.p_top
    }

    pub fn codim1(&self) -> &BTreeMap<Face, Projection> {
        &self.p_codim1
    }

    /// Same projections measured in another norm; the cache is dropped.
    pub fn with_ctx(&self, ctx: NormContext) -> Self {
        Self {
            n: self.n,
            ctx,
            p_top: self.p_top.with_ctx(ctx),
            p_codim1: self.p_codim1.iter().map(|(f, p)| (*f, p.with_ctx(ctx))).collect(),
            tol: self.tol,
            cache: RwLock::new(BTreeMap::new()),
        }
    }

    /// Same projections with another tolerance set; the cache is dropped.
    pub fn with_tol(&self, tol: Tolerances) -> Self {
        Self {
            n: self.n,
            ctx: self.ctx,
            p_top: self.p_top.clone(),
            p_codim1: self.p_codim1.clone(),
            tol,
            cache: RwLock::new(BTreeMap::new()),
        }
    }

    fn check_face(&self, tau: Face) -> Result<()> {
        if tau.is_subset(self.full()) {
            Ok(())
        } else {
            Err(Error::domain(format!("{tau} is not a face of the {}-simplex", self.n)))
        }
    }

    /// Codimension-one faces containing `tau`.
    pub fn cofaces(&self, tau: Face) -> Vec<Face> {
        codim1_faces(self.n).into_iter().filter(|s| tau.is_subset(*s)).collect()
    }

    /// `P_Δ` for `τ = Δ`, otherwise the average of `P_σ` over codimension-one
    /// `σ ⊇ τ`.
    pub fn t_tau(&self, tau: Face) -> Result<Matrix> {
        self.check_face(tau)?;
        if tau == self.full() {
            return Ok(self.p_top.op().clone());
        }
        let ops: Vec<&Matrix> = self.cofaces(tau).iter().map(|s| self.p_codim1[s].op()).collect();
        Ok(average(&ops))
    }

    /// `P_τ = lim T_τ^i`, cached.
    pub fn p_tau(&self, tau: Face) -> Result<Projection> {
        self.face_limit(tau).map(|l| l.projection)
    }

    pub fn face_limit(&self, tau: Face) -> Result<FaceLimit> {
        self.check_face(tau)?;
        if tau == self.full() {
            return Ok(FaceLimit {
                projection: self.p_top.clone(),
                terms: 0,
                iterations: 0,
                final_residual: 0.0,
                corollary_bound_held: true,
            });
        }
        if let Some(p) = self.p_codim1.get(&tau) {
            return Ok(FaceLimit {
                projection: p.clone(),
                terms: 1,
                iterations: 0,
                final_residual: 0.0,
                corollary_bound_held: true,
            });
        }
        if let Some(hit) = self.cache.read().expect("cache lock").get(&tau) {
            return Ok(hit.clone());
        }
        let limit = self.compute_limit(tau)?;
        // first writer wins so every caller sees the same matrix
        let mut cache = self.cache.write().expect("cache lock");
        Ok(cache.entry(tau).or_insert(limit).clone())
    }

    fn compute_limit(&self, tau: Face) -> Result<FaceLimit> {
        let cofaces = self.cofaces(tau);
        let terms = cofaces.len();
        let t = self.t_tau(tau)?;
        let (op, residuals, iterations) = iterate_powers(&t, self.ctx, self.tol.iteration, self.tol.max_iterations)?;
        let projection = Projection::from_matrix_with(op, self.ctx, &self.tol)?;

        let images: Vec<Basis> = cofaces.iter().map(|s| self.p_codim1[s].image_basis().clone()).collect();
        let common = intersect(&images, self.tol.rank).len();
        if projection.rank() != common {
            return Err(Error::domain(format!(
                "limit for {tau} has rank {} but the images intersect in dimension {common}",
                projection.rank()
            )));
        }

        let mut held = true;
        let mut power = t.clone();
        for i in 1..=iterations {
            let gap = operator_norm(&(projection.op() - &power), self.ctx).lower();
            held &= gap <= corollary_bound(terms, i) + self.tol.certificate_slack;
            power = &power * &t;
        }
        Ok(FaceLimit {
            projection,
            terms,
            iterations,
            final_residual: residuals.last().copied().unwrap_or(0.0),
            corollary_bound_held: held,
        })
    }

    /// Computes every `P_τ` in parallel and returns them in face order.
    pub fn all_limits(&self) -> Result<BTreeMap<Face, FaceLimit>> {
        let faces = self.full().subfaces();
        let results: Vec<Result<(Face, FaceLimit)>> =
            faces.par_iter().map(|&f| self.face_limit(f).map(|l| (f, l))).collect();
        results.into_iter().collect()
    }

    pub fn summaries(&self) -> Result<Vec<FaceSummary>> {
        Ok(self
            .all_limits()?
            .into_iter()
            .map(|(face, l)| FaceSummary {
                face,
                rank: l.projection.rank(),
                norm: l.projection.norm(),
                iterations: l.iterations,
                final_residual: l.final_residual,
                corollary_bound_held: l.corollary_bound_held,
            })
            .collect())
    }

    /// Family file: a `n p` header, one `FACE v₀ … v_{n−1}` block per
    /// codimension-one face and a `TOP` block, each followed by a matrix.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.ctx);
        for (face, p) in &self.p_codim1 {
            let v: Vec<String> = face.vertices().iter().map(ToString::to_string).collect();
            out.push_str(&format!("FACE {}\n{}", v.join(" "), p.op().to_text()));
        }
        out.push_str(&format!("TOP\n{}", self.p_top.op().to_text()));
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty())
            .peekable();
        let (line, header) = lines.next().ok_or_else(|| Error::parse(1, "an 'n p' header"))?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        if parts.len() != 2 {
            return Err(Error::parse(line, "an 'n p' header"));
        }
        let n: usize = parts[0].parse().map_err(|_| Error::parse(line, "a simplex dimension"))?;
        if n == 0 || n > MAX_SIMPLEX_DIM {
            return Err(Error::parse(line, "a simplex dimension between 1 and 30"));
        }
        let ctx: NormContext = parts[1].parse().map_err(|_| Error::parse(line, "a norm exponent >= 1 or 'inf'"))?;
        let full = Face::full(n);
        let mut faces = BTreeMap::new();
        let mut top = None;
        while let Some((line, label)) = lines.next() {
            let mut words = label.split_whitespace();
            match words.next() {
                Some("FACE") => {
                    let verts: std::result::Result<Vec<usize>, _> = words.map(str::parse).collect();
                    let verts = verts.map_err(|_| Error::parse(line, "vertex indices"))?;
                    if verts.len() != n || verts.iter().any(|&v| v > n) {
                        return Err(Error::parse(line, "a codimension-one face of the simplex"));
                    }
                    let face = Face::from_vertices(&verts);
                    if face.len() != n || !face.is_subset(full) {
                        return Err(Error::parse(line, "distinct vertices of a codimension-one face"));
                    }
                    let op = Matrix::parse_lines(&mut lines)?;
                    let p = Projection::from_matrix(op, ctx).map_err(|e| Error::parse(line, format!("a projection ({e})")))?;
                    if faces.insert(face, p).is_some() {
                        return Err(Error::parse(line, "each face at most once"));
                    }
                }
                Some("TOP") if words.next().is_none() => {
                    let op = Matrix::parse_lines(&mut lines)?;
                    let p = Projection::from_matrix(op, ctx).map_err(|e| Error::parse(line, format!("a projection ({e})")))?;
                    if top.replace(p).is_some() {
                        return Err(Error::parse(line, "a single TOP block"));
                    }
                }
                _ => return Err(Error::parse(line, "'FACE <vertices>' or 'TOP'")),
            }
        }
        let top = top.ok_or_else(|| Error::parse(text.lines().count().max(1), "a TOP block"))?;
        if faces.len() != n + 1 {
            return Err(Error::parse(text.lines().count().max(1), format!("{} FACE blocks", n + 1)));
        }
        Self::from_faces(top, faces)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(d: &[f64]) -> Projection {
        Projection::from_matrix(Matrix::diag(d), NormContext::HILBERT).unwrap()
    }

    // Coordinate projections on R^6 for the faces {1,2}, {0,2}, {0,1}.
    fn commuting() -> SimplexFamily {
        SimplexFamily::new(
            diag(&[1.0; 6]),
            vec![
                diag(&[1.0, 1.0, 0.0, 1.0, 0.0, 1.0]),
                diag(&[1.0, 0.0, 1.0, 1.0, 1.0, 0.0]),
                diag(&[0.0, 1.0, 1.0, 1.0, 1.0, 1.0]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn t_tau_cases() {
        let f = commuting();
        assert_eq!(f.t_tau(f.full()).unwrap(), Matrix::identity(6));
        let s = Face::from_vertices(&[1, 2]);
        assert_eq!(&f.t_tau(s).unwrap(), f.codim1()[&s].op());
        let t0 = f.t_tau(Face::from_vertices(&[0])).unwrap();
        let expected = average(&[f.codim1()[&Face::from_vertices(&[0, 1])].op(), f.codim1()[&Face::from_vertices(&[0, 2])].op()]);
        assert_eq!(t0, expected);
    }

    #[test]
    fn commuting_limit_is_entrywise_product() {
        let f = commuting();
        let l = f.face_limit(Face::EMPTY).unwrap();
        let mut product = Matrix::identity(6);
        for p in f.codim1().values() {
            product = &product * p.op();
        }
        assert!((l.projection.op() - &product).max_abs() < 1e-10);
        assert!(l.corollary_bound_held);
        assert_eq!(l.projection.rank(), 1);
    }

    #[test]
    fn identity_family_converges_at_once() {
        let id = diag(&[1.0; 3]);
        let f = SimplexFamily::new(id.clone(), vec![id.clone(), id.clone(), id.clone()]).unwrap();
        let l = f.face_limit(Face::EMPTY).unwrap();
        assert_eq!(l.iterations, 1);
        assert_eq!(l.projection.op(), id.op());
    }

    #[test]
    fn cached_results_are_stable() {
        let f = commuting();
        let all = f.all_limits().unwrap();
        assert_eq!(all.len(), 8);
        for (face, l) in all {
            assert_eq!(f.p_tau(face).unwrap().op(), l.projection.op());
        }
    }

    #[test]
    fn top_absorption_is_required() {
        let err = SimplexFamily::new(diag(&[1.0, 0.0]), vec![diag(&[1.0, 1.0]), diag(&[1.0, 0.0])]).unwrap_err();
        assert!(matches!(err, Error::ConsistencyPrecondition { .. }));
    }

    #[test]
    fn file_round_trip_and_errors() {
        let f = commuting();
        let g = SimplexFamily::parse(&f.to_text()).unwrap();
        assert_eq!(g.n(), 2);
        for (face, p) in f.codim1() {
            assert_eq!(g.codim1()[face].op(), p.op());
        }
        let bad = f.to_text().replacen("FACE 0 1", "FACE 0 0", 1);
        match SimplexFamily::parse(&bad) {
            Err(Error::Parse { line, .. }) => assert!(line > 1),
            other => panic!("{other:?}"),
        }
        assert!(SimplexFamily::parse("2 2\nTOP\n1 1\n1\n").is_err());
    }
}
