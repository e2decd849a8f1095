use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use projangles::groups::{
    build_simplex_family, coset_link_graph, lp_angle_sweep, model, pi_f_bound_check, schatten_link_bound_check, FiniteGroup,
    GroupRep, Subgroup, SubgroupFamily,
};
use projangles::linalg::{norm_value, Matrix, NormContext};
use projangles::projections::{averaged_iteration_with, Projection};
use projangles::simplex::{
    almost_commutativity, angle_no_consistency, consistency_check, decompose_oracle, decompose_tree, multi_angle,
    small_angle_verify, DecompositionResult, Face, SimplexFamily, PERMUTATION_CAP,
};
use projangles::spectra::{
    complete_bipartite, even_cycle, gq2_graph, mgon_vmin, projective_plane_graph, symplectic_quadrangle_graph,
    thickness_threshold, BipartiteGraph, MgonParams,
};
use projangles::Error;

use crate::plot::{render_svg, PlotLabels};
use crate::report::{fmt_num, write_atomic};
use crate::{effective_seed, CliError, Common};

pub struct Outcome {
    pub config: Value,
    pub result: Value,
}

fn outcome<A: Serialize>(args: &A, common: &Common, result: Value) -> Result<Outcome, CliError> {
    let mut config = serde_json::to_value(args).expect("arguments serialize");
    config["seed"] = json!(effective_seed(common.seed)?);
    Ok(Outcome { config, result })
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    write_atomic(path, bytes).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn load_family(path: &Path, common: &Common) -> Result<SimplexFamily, CliError> {
    let fam = SimplexFamily::parse(&read(path)?).map_err(CliError::in_file(path))?;
    Ok(fam.with_tol(common.tolerances()))
}

fn parse_p(s: &str) -> Result<NormContext, CliError> {
    s.parse().map_err(|_| CliError::Invalid(format!("'{s}' is not a norm exponent >= 1 or 'inf'")))
}

/// Faces written as vertex lists separated by commas, e.g. `1 2,0 2`.
fn parse_faces(s: &str) -> Result<Vec<Face>, CliError> {
    s.split(',')
        .map(|chunk| {
            let verts = chunk
                .split_whitespace()
                .map(|w| w.parse::<usize>().map_err(|_| CliError::Invalid(format!("'{w}' is not a vertex index"))))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Face::from_vertices(&verts))
        })
        .collect()
}

fn graph_summary(g: &BipartiteGraph) -> Value {
    json!({
        "parts": [g.part_sizes().0, g.part_sizes().1],
        "edges": g.edges().len(),
        "biregular": g.biregularity().map(|(a, b)| vec![a, b]),
        "girth": g.girth(),
        "components": g.components().len(),
    })
}

// ---------------------------------------------------------------- spectra

#[derive(Debug, Args, Serialize)]
pub struct SpectraArgs {
    /// Graph file: `parts a b` then one `u v` edge per line.
    #[arg(long, required_unless_present = "builtin", conflicts_with = "builtin")]
    pub graph: Option<PathBuf>,
    /// heawood, gq2, hexagon, plane:Q, wq:Q, cycle:K or complete:A,B.
    #[arg(long)]
    pub builtin: Option<String>,
    #[arg(long)]
    pub r: f64,
    /// Generalized m-gon parameters for the V_min formula cross-check.
    #[arg(long, requires_all = ["s", "t"])]
    pub m: Option<usize>,
    #[arg(long, requires = "m")]
    pub s: Option<usize>,
    #[arg(long, requires = "m")]
    pub t: Option<usize>,
    #[command(flatten)]
    #[serde(skip)]
    pub common: Common,
}

fn builtin_graph(name: &str) -> Result<BipartiteGraph, CliError> {
    let num = |s: &str| s.parse::<usize>().map_err(|_| CliError::Invalid(format!("bad number in builtin '{name}'")));
    let g = match name.split_once(':') {
        None => match name {
            "heawood" => projective_plane_graph(2)?,
            "gq2" => gq2_graph(),
            "hexagon" => even_cycle(3),
            _ => return Err(CliError::Invalid(format!("unknown builtin graph '{name}'"))),
        },
        Some(("plane", q)) => projective_plane_graph(num(q)?)?,
        Some(("wq", q)) => symplectic_quadrangle_graph(num(q)?)?,
        Some(("cycle", k)) => {
            let k = num(k)?;
            if k < 2 {
                return Err(CliError::Invalid("cycle:K needs K >= 2".into()));
            }
            even_cycle(k)
        }
        Some(("complete", ab)) => {
            let (a, b) = ab.split_once(',').ok_or_else(|| CliError::Invalid("complete:A,B".into()))?;
            let (a, b) = (num(a)?, num(b)?);
            if a == 0 || b == 0 {
                return Err(CliError::Invalid("complete:A,B needs positive sizes".into()));
            }
            complete_bipartite(a, b)
        }
        _ => return Err(CliError::Invalid(format!("unknown builtin graph '{name}'"))),
    };
    Ok(g)
}

pub fn spectra(a: &SpectraArgs) -> Result<Outcome, CliError> {
    let g = match (&a.graph, &a.builtin) {
        (Some(p), _) => BipartiteGraph::parse(&read(p)?).map_err(CliError::in_file(p))?,
        (None, Some(name)) => builtin_graph(name)?,
        (None, None) => return Err(CliError::Invalid("either --graph or --builtin is required".into())),
    };
    let mut rep = projangles::spectra::b_delta_r(&g, a.r)?;
    let mut formula = Value::Null;
    if let (Some(m), Some(s), Some(t)) = (a.m, a.s, a.t) {
        let (v, notice) = mgon_vmin(m, s, t)?;
        rep.mgon_params = Some(MgonParams { m, s, t });
        formula = json!({ "v_min": v, "matches_graph": v == rep.v_min as u64, "notice": notice });
    }
    let mut result = serde_json::to_value(&rep).expect("report serializes");
    result["graph"] = graph_summary(&g);
    result["vmin_formula"] = formula;
    outcome(a, &a.common, result)
}

// ---------------------------------------------------------------- mgon-sweep

#[derive(Debug, Args, Serialize)]
pub struct SweepArgs {
    /// 3 for projective planes, 4 for symplectic quadrangles.
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub r: f64,
    #[arg(long)]
    pub delta: f64,
    /// CSV table of the sweep.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// SVG line plot of b_value against q.
    #[arg(long)]
    pub plot: Option<PathBuf>,
    #[command(flatten)]
    #[serde(skip)]
    pub common: Common,
}

pub fn mgon_sweep(a: &SweepArgs) -> Result<Outcome, CliError> {
    let rep = thickness_threshold(a.m, a.r, a.delta)?;
    if let Some(w) = &rep.regime_warning {
        eprintln!("warning: {w}");
    }
    if let Some(path) = &a.csv {
        let mut csv = String::from("q,b_value,kappa,v_min,threshold\n");
        for row in &rep.table {
            let mark = if Some(row.q) == rep.found { "*" } else { "" };
            csv.push_str(&format!("{},{},{},{},{mark}\n", row.q, fmt_num(row.b_value), fmt_num(row.kappa), row.v_min));
        }
        write(path, csv.as_bytes())?;
    }
    if let Some(path) = &a.plot {
        let series: Vec<(f64, f64)> = rep.table.iter().map(|r| (r.q as f64, r.b_value)).collect();
        let labels = PlotLabels {
            title: format!("m' = {}, r = {}, delta = {}", a.m, fmt_num(a.r), fmt_num(a.delta)),
            x: "q".into(),
            y: "(1 - kappa) V_min^(1/r)".into(),
        };
        let highlight = rep.found.and_then(|q| rep.table.iter().position(|r| r.q == q));
        let svg = render_svg(&series, &labels, highlight).map_err(|e| CliError::Invalid(e.to_string()))?;
        write(path, svg.as_bytes())?;
    }
    outcome(a, &a.common, serde_json::to_value(&rep).expect("report serializes"))
}

// ---------------------------------------------------------------- angle

#[derive(Debug, Args, Serialize)]
pub struct AngleArgs {
    /// Family file (`n p` header, FACE and TOP blocks).
    #[arg(long)]
    pub family: PathBuf,
    /// Faces for the multi-angle, e.g. "1 2,0 2"; all codimension-one faces by default.
    #[arg(long)]
    pub faces: Option<String>,
    /// Re-measure every operator in this ℓp norm.
    #[arg(long)]
    pub p: Option<String>,
    /// Also run the small-angle verification at this ε.
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[command(flatten)]
    #[serde(skip)]
    pub common: Common,
}

pub fn angle(a: &AngleArgs) -> Result<Outcome, CliError> {
    let mut fam = load_family(&a.family, &a.common)?;
    if let Some(p) = &a.p {
        fam = fam.with_ctx(parse_p(p)?);
    }
    let faces = match &a.faces {
        Some(s) => parse_faces(s)?,
        None => fam.codim1().keys().copied().collect(),
    };
    let multi = if faces.len() <= PERMUTATION_CAP { Some(multi_angle(&fam, &faces)?) } else { None };
    let mut pairs = Vec::new();
    for (i, x) in faces.iter().enumerate() {
        for y in &faces[i + 1..] {
            pairs.push(json!({ "a": x, "b": y, "angle": angle_no_consistency(&fam, *x, *y)? }));
        }
    }
    let mut result = json!({
        "n": fam.n(),
        "dim": fam.dim(),
        "p": fam.ctx(),
        "faces": faces,
        "multi_angle": multi,
        "pairwise": pairs,
        "consistency": consistency_check(&fam)?,
        "almost_commutativity": almost_commutativity(&fam)?,
    });
    if let Some(eps) = a.epsilon {
        let sa = small_angle_verify(&fam, eps)?;
        result["small_angle"] = json!({ "passed": sa.passed(), "report": sa });
    }
    outcome(a, &a.common, result)
}

// ---------------------------------------------------------------- average

#[derive(Debug, Args, Serialize)]
pub struct AverageArgs {
    /// Family file; its codimension-one projections are averaged.
    #[arg(long, required_unless_present = "projections", conflicts_with = "projections")]
    pub family: Option<PathBuf>,
    /// Projection files (`p=<p>` header then the matrix).
    #[arg(long, num_args = 2..)]
    pub projections: Vec<PathBuf>,
    #[command(flatten)]
    #[serde(skip)]
    pub common: Common,
}

pub fn average(a: &AverageArgs) -> Result<Outcome, CliError> {
    let tol = a.common.tolerances();
    let ps: Vec<Projection> = match &a.family {
        Some(path) => load_family(path, &a.common)?.codim1().values().cloned().collect(),
        None => a
            .projections
            .iter()
            .map(|p| Projection::parse(&read(p)?).map_err(CliError::in_file(p)))
            .collect::<Result<_, _>>()?,
    };
    let out = averaged_iteration_with(&ps, tol.iteration, tol.max_iterations, &tol)?;
    let result = json!({
        "projections": ps.len(),
        "dim": ps[0].dim(),
        "p": ps[0].ctx(),
        "certificate": out.certificate,
        "limit_rank": out.limit.rank(),
        "intersection_dim": out.intersection_dim,
        "residuals": out.residuals,
        "limit_gaps": out.limit_gaps,
    });
    outcome(a, &a.common, result)
}

// ---------------------------------------------------------------- decompose

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodArg {
    Tree,
    Oracle,
    Both,
}

#[derive(Debug, Args, Serialize)]
pub struct DecomposeArgs {
    #[arg(long)]
    pub family: PathBuf,
    /// Vertices of η, e.g. "0 1"; the whole simplex by default.
    #[arg(long)]
    pub eta: Option<String>,
    #[arg(long, value_enum, default_value = "both")]
    pub method: MethodArg,
    #[command(flatten)]
    #[serde(skip)]
    pub common: Common,
}

fn decomposition_summary(d: &DecompositionResult) -> Value {
    let dims: Vec<Value> = d.summand_bases.iter().map(|(f, b)| json!({ "face": f, "dim": b.len() })).collect();
    json!({
        "method": d.method,
        "rank_eta": d.rank_eta,
        "rank_sum": d.rank_sum,
        "direct": d.direct,
        "condition": d.condition,
        "truncation_depth": d.truncation_depth,
        "summands": dims,
        "levels": d.levels,
    })
}

pub fn decompose(a: &DecomposeArgs) -> Result<Outcome, CliError> {
    let fam = load_family(&a.family, &a.common)?;
    let eta = match &a.eta {
        Some(s) => {
            let faces = parse_faces(s)?;
            match faces.as_slice() {
                [f] => *f,
                _ => return Err(CliError::Invalid("--eta takes a single face".into())),
            }
        }
        None => fam.full(),
    };
    let tree_tol = fam.tolerances().tree_series;
    let tree = matches!(a.method, MethodArg::Tree | MethodArg::Both).then(|| decompose_tree(&fam, eta, tree_tol)).transpose()?;
    let oracle = matches!(a.method, MethodArg::Oracle | MethodArg::Both).then(|| decompose_oracle(&fam, eta)).transpose()?;
    let mut result = json!({ "eta": eta, "dim": fam.dim(), "p": fam.ctx() });
    if let Some(t) = &tree {
        result["tree"] = decomposition_summary(t);
    }
    if let Some(o) = &oracle {
        result["oracle"] = decomposition_summary(o);
    }
    if let (Some(t), Some(o)) = (&tree, &oracle) {
        let diff = t
            .r_ops
            .iter()
            .map(|(f, r)| o.r_ops.get(f).map_or(f64::INFINITY, |s| norm_value(&(r - s), fam.ctx())))
            .fold(0.0, f64::max);
        result["max_r_difference"] = json!(diff);
    }
    outcome(a, &a.common, result)
}

// ---------------------------------------------------------------- group-model

#[derive(Debug, Args, Serialize)]
pub struct GroupModelArgs {
    /// Built-in model: s3, d4 or s4.
    #[arg(long, required_unless_present = "group", conflicts_with = "group")]
    pub model: Option<String>,
    /// Group file (`table <order>` or `perm <degree>` format).
    #[arg(long, requires = "subgroups")]
    pub group: Option<PathBuf>,
    /// Subgroup family file (`top:` and `face …:` lines of element indices).
    #[arg(long, requires = "group")]
    pub subgroups: Option<PathBuf>,
    /// Norm exponents for the angle sweep.
    #[arg(long, value_delimiter = ',', default_value = "2")]
    pub p: Vec<String>,
    /// Schatten exponents for the link checks.
    #[arg(long, value_delimiter = ',', default_value = "2")]
    pub r: Vec<f64>,
    #[command(flatten)]
    #[serde(skip)]
    pub common: Common,
}

type Link = (Subgroup, Subgroup, Subgroup);

fn load_model(name: Option<&str>, group: Option<&Path>, subgroups: Option<&Path>) -> Result<(String, FiniteGroup, SubgroupFamily, Vec<Link>), CliError> {
    if let Some(name) = name {
        let m = model(name)?;
        return Ok((m.name.to_string(), m.group, m.family, m.links));
    }
    let (gp, sp) = group.zip(subgroups).ok_or_else(|| CliError::Invalid("--group needs --subgroups".into()))?;
    let g = FiniteGroup::parse(&read(gp)?).map_err(CliError::in_file(gp))?;
    let fam = SubgroupFamily::parse(&read(sp)?, &g).map_err(CliError::in_file(sp))?;
    let ks: Vec<&Subgroup> = fam.codim1().values().collect();
    let mut links = Vec::new();
    for i in 0..ks.len() {
        for j in (i + 1)..ks.len() {
            links.push((ks[i].clone(), ks[j].clone(), g.join(&[ks[i], ks[j]])));
        }
    }
    Ok((gp.display().to_string(), g, fam, links))
}

fn link_checks(rep: &GroupRep, group: &FiniteGroup, links: &[Link], rs: &[f64]) -> Result<Vec<Value>, CliError> {
    links
        .iter()
        .map(|(k1, k2, amb)| {
            let graph = coset_link_graph(group, k1, k2, amb)?;
            let checks = rs.iter().map(|&r| schatten_link_bound_check(rep, k1, k2, amb, r)).collect::<Result<Vec<_>, Error>>()?;
            Ok(json!({
                "k1_order": k1.order(),
                "k2_order": k2.order(),
                "ambient_order": amb.order(),
                "graph": graph_summary(&graph),
                "checks": checks,
            }))
        })
        .collect()
}

pub fn group_model(a: &GroupModelArgs) -> Result<Outcome, CliError> {
    let (name, group, fam, links) = load_model(a.model.as_deref(), a.group.as_deref(), a.subgroups.as_deref())?;
    let rep = GroupRep::regular(&group, NormContext::HILBERT);
    let sf = build_simplex_family(&rep, &fam)?.with_tol(a.common.tolerances());
    let faces: Vec<Value> = sf
        .full()
        .subfaces()
        .into_iter()
        .map(|tau| {
            Ok(json!({
                "face": tau,
                "subgroup_order": fam.subgroup_of(&group, tau).order(),
                "rank": sf.p_tau(tau)?.rank(),
            }))
        })
        .collect::<Result<_, Error>>()?;
    let codim: Vec<Face> = sf.codim1().keys().copied().collect();
    let multi = if codim.len() <= PERMUTATION_CAP { Some(multi_angle(&sf, &codim)?) } else { None };
    let ps: Vec<f64> = a.p.iter().map(|s| parse_p(s).map(|c| c.p())).collect::<Result<_, _>>()?;
    let sweep = lp_angle_sweep(&rep, &fam, &ps)?;
    let oracle = decompose_oracle(&sf, sf.full())?;
    let dims: BTreeMap<String, usize> = oracle.summand_bases.iter().map(|(f, b)| (f.to_string(), b.len())).collect();
    let result = json!({
        "model": name,
        "group_order": group.order(),
        "elements": group.labels(),
        "n": fam.n(),
        "faces": faces,
        "consistency": consistency_check(&sf)?,
        "multi_angle": multi,
        "angle_sweep": sweep,
        "summand_dims": dims,
        "links": link_checks(&rep, &group, &links, &a.r)?,
    });
    outcome(a, &a.common, result)
}

// ---------------------------------------------------------------- bridge

#[derive(Debug, Args, Serialize)]
pub struct BridgeArgs {
    /// Built-in model: s3, d4 or s4.
    #[arg(long, default_value = "s3")]
    pub model: String,
    /// Schatten exponents for the link checks.
    #[arg(long, value_delimiter = ',', default_value = "2")]
    pub r: Vec<f64>,
    /// Random coefficient vectors for the π(f) check.
    #[arg(long, default_value_t = 50)]
    pub samples: usize,
    #[command(flatten)]
    #[serde(skip)]
    pub common: Common,
}

pub fn bridge(a: &BridgeArgs) -> Result<Outcome, CliError> {
    let m = model(&a.model)?;
    let seed = effective_seed(a.common.seed)?;
    let rep = GroupRep::regular(&m.group, NormContext::HILBERT);
    let sf = build_simplex_family(&rep, &m.family)?;
    let n = m.group.order();
    let mut d = vec![1.0; n];
    d[0] = 2.0;
    let conj = rep.conjugated(&Matrix::diag(&d))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut violations, mut undecided, mut max_ratio) = (0usize, 0usize, 0.0f64);
    for _ in 0..a.samples {
        let f: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let r = pi_f_bound_check(&conj, &f)?;
        match r.holds {
            Some(true) => {}
            Some(false) => violations += 1,
            None => undecided += 1,
        }
        if r.bound > 0.0 {
            max_ratio = max_ratio.max(r.lhs.value / r.bound);
        }
    }
    let result = json!({
        "model": m.name,
        "group_order": n,
        "links": link_checks(&rep, &m.group, &m.links, &a.r)?,
        "pi_f": {
            "representation": "regular, conjugated by diag(2, 1, ..., 1)",
            "sup_norm": conj.sup_norm_bound(),
            "samples": a.samples,
            "violations": violations,
            "undecided": undecided,
            "max_ratio": max_ratio,
        },
        "consistency": consistency_check(&sf)?,
    });
    outcome(a, &a.common, result)
}
