use std::collections::BTreeMap;

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::groups::group::{FiniteGroup, Subgroup};
use crate::groups::rep::GroupRep;
use crate::linalg::{svd, Matrix};
use crate::projections::Projection;
use crate::simplex::{Face, SimplexFamily, MAX_SIMPLEX_DIM};

/// Subgroups attached to the faces of an `n`-simplex: one per
/// codimension-one face plus `G_Δ`. Reverse inclusion holds, so a smaller
/// face `τ` gets the subgroup generated by `G_σ` over the codimension-one
/// faces `σ ⊇ τ`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubgroupFamily {
    n: usize,
    top: Subgroup,
    codim1: BTreeMap<Face, Subgroup>,
}

impl SubgroupFamily {
    /// `codim1[i]` is attached to the face `Δ ∖ {i}`.
    pub fn new(group: &FiniteGroup, top: &[usize], codim1: &[Vec<usize>]) -> Result<Self> {
        if codim1.len() < 2 || codim1.len() > MAX_SIMPLEX_DIM + 1 {
            return Err(Error::domain(format!("need between 2 and {} codimension-one subgroups", MAX_SIMPLEX_DIM + 1)));
        }
        let n = codim1.len() - 1;
        let top = group.subgroup(top)?;
        let full = Face::full(n);
        let mut map = BTreeMap::new();
        for (i, els) in codim1.iter().enumerate() {
            let face = full.without(i);
            let k = group.subgroup(els)?;
            if !top.is_subset(&k) {
                return Err(Error::Subgroup(format!("G_Δ is not contained in the subgroup of face {face}")));
            }
            map.insert(face, k);
        }
        Ok(Self { n, top, codim1: map })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn top(&self) -> &Subgroup {
        &self.top
    }

    pub fn codim1(&self) -> &BTreeMap<Face, Subgroup> {
        &self.codim1
    }

    /// `G_τ` for any face.
    pub fn subgroup_of(&self, group: &FiniteGroup, tau: Face) -> Subgroup {
        let full = Face::full(self.n);
        if tau == full {
            return self.top.clone();
        }
        let parts: Vec<&Subgroup> = self.codim1.iter().filter(|(s, _)| tau.is_subset(**s)).map(|(_, k)| k).collect();
        group.join(&parts)
    }

    /// One line per face, `top: i j …` and `face v…: i j …`, listing element
    /// indices.
    pub fn to_text(&self) -> String {
        let list = |k: &Subgroup| k.elements().iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
        let mut s = format!("top: {}\n", list(&self.top));
        let full = Face::full(self.n);
        for i in 0..=self.n {
            let face = full.without(i);
            let verts: Vec<String> = face.vertices().iter().map(ToString::to_string).collect();
            s.push_str(&format!("face {}: {}\n", verts.join(" "), list(&self.codim1[&face])));
        }
        s
    }

    pub fn parse(text: &str, group: &FiniteGroup) -> Result<Self> {
        let mut top = None;
        let mut faces: Vec<(usize, Vec<usize>, Vec<usize>)> = Vec::new();
        for (line, l) in text.lines().enumerate().map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim())) {
            if l.is_empty() {
                continue;
            }
            let (head, body) = l.split_once(':').ok_or_else(|| Error::parse(line, "'top: …' or 'face v…: …'"))?;
            let nums = |s: &str| {
                s.split_whitespace()
                    .map(|w| w.parse::<usize>().map_err(|_| Error::parse(line, "an index")))
                    .collect::<Result<Vec<_>>>()
            };
            let els = nums(body)?;
            let head = head.trim();
            if head == "top" {
                top = Some(els);
            } else if let Some(v) = head.strip_prefix("face") {
                faces.push((line, nums(v)?, els));
            } else {
                return Err(Error::parse(line, "'top' or 'face'"));
            }
        }
        let top = top.ok_or_else(|| Error::parse(1, "a 'top:' line"))?;
        let n = faces.len().saturating_sub(1);
        let full = Face::full(n);
        let mut codim1 = vec![None; faces.len()];
        for (line, verts, els) in faces {
            if verts.iter().any(|&v| v > n) {
                return Err(Error::parse(line, format!("vertices in 0..={n}")));
            }
            let face = Face::from_vertices(&verts);
            let missing = (0..=n).find(|&i| full.without(i) == face).ok_or_else(|| {
                Error::parse(line, format!("a face with {n} of the vertices 0..={n}"))
            })?;
            codim1[missing] = Some(els);
        }
        let codim1 = codim1
            .into_iter()
            .enumerate()
            .map(|(i, c)| c.ok_or_else(|| Error::domain(format!("missing subgroup for face {}", full.without(i)))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(group, &top, &codim1)
    }
}

/// `π(k_K) = |K|⁻¹ Σ_{g∈K} π(g)`. The rank is checked against the common
/// fixed space of a generating set of `K`.
pub fn averaging_operator(rep: &GroupRep, k: &Subgroup) -> Result<Projection> {
    let group = rep.group();
    let k = group.subgroup(k.elements())?;
    let op = rep.apply(&rep.averaging_coefficients(&k))?;
    let tol = Tolerances { projection: 1e-9, ..Tolerances::default() };
    let p = Projection::from_matrix_with(op, rep.ctx(), &tol)?;
    let dim = rep.dim();
    let gens = group.generators_of(&k);
    let fixed_dim = if gens.is_empty() {
        dim
    } else {
        let stacked = gens
            .iter()
            .map(|&g| rep.matrix(g) - &Matrix::identity(dim))
            .reduce(|a, b| a.vcat(&b))
            .expect("nonempty");
        let s = svd(&stacked);
        dim - s.rank_above(tol.rank * s.largest().max(1.0))
    };
    if fixed_dim != p.rank() {
        return Err(Error::domain(format!(
            "averaging operator has rank {} but the fixed space has dimension {fixed_dim}",
            p.rank()
        )));
    }
    Ok(p)
}

/// `P_σ = π(k_{G_σ})` on codimension-one faces and `P_Δ = π(k_{G_Δ})`.
pub fn build_simplex_family(rep: &GroupRep, fam: &SubgroupFamily) -> Result<SimplexFamily> {
    let top = averaging_operator(rep, fam.top())?;
    let faces = fam
        .codim1()
        .iter()
        .map(|(face, k)| Ok((*face, averaging_operator(rep, k)?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    SimplexFamily::from_faces(top, faces)
}

/// `max_{g∈H} ‖π(k_H)π(g) − π(k_H)‖` (max-entry), zero up to rounding.
pub fn absorption_residual(rep: &GroupRep, h: &Subgroup) -> Result<f64> {
    let k = rep.apply(&rep.averaging_coefficients(h))?;
    Ok(h.elements().iter().map(|&g| (&(&k * rep.matrix(g)) - &k).max_abs()).fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::group::symmetric_group;
    use crate::linalg::NormContext;

    #[test]
    fn averaging_examples() {
        let g = symmetric_group(3).unwrap();
        let rep = GroupRep::regular(&g, NormContext::HILBERT);
        assert_eq!(averaging_operator(&rep, &g.trivial()).unwrap().rank(), 6);
        let whole = averaging_operator(&rep, &g.whole()).unwrap();
        assert_eq!(whole.rank(), 1);
        assert!((whole.op()[(2, 5)] - 1.0 / 6.0).abs() < 1e-15);
        let t = g.generate(&[g.element_from_cycles("(1 2)").unwrap()]);
        let p = averaging_operator(&rep, &t).unwrap();
        assert_eq!(p.rank(), 3);
        assert!(p.op().asymmetry() < 1e-15);
        assert!(absorption_residual(&rep, &t).unwrap() <= 1e-10);
    }

    #[test]
    fn family_text_round_trip() {
        let g = symmetric_group(3).unwrap();
        let a = g.generate(&[g.element_from_cycles("(1 2)").unwrap()]);
        let b = g.generate(&[g.element_from_cycles("(2 3)").unwrap()]);
        let fam = SubgroupFamily::new(&g, &[0], &[a.elements().to_vec(), b.elements().to_vec()]).unwrap();
        assert_eq!(SubgroupFamily::parse(&fam.to_text(), &g).unwrap(), fam);
        assert_eq!(fam.subgroup_of(&g, Face::EMPTY).order(), 6);
        assert_eq!(fam.subgroup_of(&g, Face::from_vertices(&[0])).order(), 2);
        // G_Δ must sit inside every face subgroup
        assert!(SubgroupFamily::new(&g, a.elements(), &[a.elements().to_vec(), b.elements().to_vec()]).is_err());
        let rot = g.element_from_cycles("(1 2 3)").unwrap();
        assert!(SubgroupFamily::new(&g, &[0], &[vec![0, rot], b.elements().to_vec()]).is_err());
    }
}
