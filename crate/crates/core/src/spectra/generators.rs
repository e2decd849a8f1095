use std::collections::{BTreeMap, BTreeSet};

use crate::error::Result;
use crate::spectra::field::FiniteField;
use crate::spectra::graph::BipartiteGraph;

/// Point–line incidence graph of the projective plane over `GF(q)`.
/// Part 1 holds points, part 2 lines; both are indexed by normalized
/// vectors of `GF(q)^3`, and a point lies on a line when their dot product
/// vanishes.
pub fn projective_plane_graph(q: usize) -> Result<BipartiteGraph> {
    let f = FiniteField::new(q)?;
    let pts = f.projective_points(3);
    let mut edges = Vec::with_capacity(pts.len() * (q + 1));
    for (i, p) in pts.iter().enumerate() {
        for (j, l) in pts.iter().enumerate() {
            if f.dot(p, l) == 0 {
                edges.push((i, j));
            }
        }
    }
    BipartiteGraph::new(pts.len(), pts.len(), edges)
}

/// Symplectic form `x₀y₁ − x₁y₀ + x₂y₃ − x₃y₂` on `GF(q)^4`.
fn symplectic(f: &FiniteField, x: &[usize], y: &[usize]) -> usize {
    let a = f.sub(f.mul(x[0], y[1]), f.mul(x[1], y[0]));
    let b = f.sub(f.mul(x[2], y[3]), f.mul(x[3], y[2]));
    f.add(a, b)
}

/// Point–line incidence graph of the symplectic quadrangle `W(q)`, a
/// generalized quadrangle of order `(q, q)`. Points are those of `PG(3, q)`,
/// lines the totally isotropic lines of the symplectic form.
pub fn symplectic_quadrangle_graph(q: usize) -> Result<BipartiteGraph> {
    let f = FiniteField::new(q)?;
    let pts = f.projective_points(4);
    let index: BTreeMap<Vec<usize>, usize> = pts.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    let mut lines: BTreeSet<Vec<usize>> = BTreeSet::new();
    for (i, a) in pts.iter().enumerate() {
        for b in &pts[i + 1..] {
            if symplectic(&f, a, b) != 0 {
                continue;
            }
            let mut on_line = BTreeSet::new();
            for s in 0..q {
                for t in 0..q {
                    let v: Vec<usize> = a.iter().zip(b).map(|(&x, &y)| f.add(f.mul(s, x), f.mul(t, y))).collect();
                    if let Some(n) = f.normalize(&v) {
                        on_line.insert(index[&n]);
                    }
                }
            }
            lines.insert(on_line.into_iter().collect());
        }
    }
    let edges = lines.iter().enumerate().flat_map(|(j, l)| l.iter().map(move |&i| (i, j))).collect();
    BipartiteGraph::new(pts.len(), lines.len(), edges)
}

/// Incidence graph of the generalized quadrangle of order `(2, 2)`.
pub fn gq2_graph() -> BipartiteGraph {
    symplectic_quadrangle_graph(2).expect("W(2) is constructible")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heawood_invariants() {
        let g = projective_plane_graph(2).unwrap();
        assert_eq!(g.part_sizes(), (7, 7));
        assert_eq!(g.edges().len(), 21);
        assert_eq!(g.biregularity(), Some((3, 3)));
        assert_eq!(g.girth(), Some(6));
    }

    #[test]
    fn two_points_share_one_line() {
        for q in [2, 3, 4, 5] {
            let g = projective_plane_graph(q).unwrap();
            let n = q * q + q + 1;
            let mut lines_of = vec![BTreeSet::new(); n];
            for &(p, l) in g.edges() {
                lines_of[p].insert(l);
            }
            for a in 0..n {
                for b in (a + 1)..n {
                    assert_eq!(lines_of[a].intersection(&lines_of[b]).count(), 1, "q={q}");
                }
            }
            assert_eq!(g.biregularity(), Some((q + 1, q + 1)));
        }
    }

    #[test]
    fn quadrangle_invariants() {
        for q in [2, 3] {
            let g = symplectic_quadrangle_graph(q).unwrap();
            let v = (q + 1) * (q * q + 1);
            assert_eq!(g.part_sizes(), (v, v));
            assert_eq!(g.biregularity(), Some((q + 1, q + 1)));
            assert_eq!(g.girth(), Some(8));
        }
    }
}
