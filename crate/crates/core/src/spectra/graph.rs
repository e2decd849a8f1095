use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::linalg::{svd, sym_eigen, Matrix};

/// Threshold separating the zero eigenvalue of the normalized Laplacian.
pub const KAPPA_ZERO: f64 = 1e-9;

/// A simple bipartite graph. Vertices of each part are `0..size`; an edge
/// `(u, v)` joins `u` in part 1 to `v` in part 2.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteGraph {
    part1: usize,
    part2: usize,
    edges: Vec<(usize, usize)>,
    adj1: Vec<Vec<usize>>,
    adj2: Vec<Vec<usize>>,
}

impl BipartiteGraph {
    pub fn new(part1: usize, part2: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if part1 == 0 || part2 == 0 {
            return Err(Error::domain("both parts must be nonempty"));
        }
        let mut adj1 = vec![Vec::new(); part1];
        let mut adj2 = vec![Vec::new(); part2];
        let mut seen = BTreeSet::new();
        for &(u, v) in &edges {
            if u >= part1 || v >= part2 {
                return Err(Error::domain(format!("edge ({u}, {v}) leaves the parts {part1} x {part2}")));
            }
            if !seen.insert((u, v)) {
                return Err(Error::domain(format!("duplicate edge ({u}, {v})")));
            }
            adj1[u].push(v);
            adj2[v].push(u);
        }
        if let Some(u) = adj1.iter().position(Vec::is_empty) {
            return Err(Error::domain(format!("vertex {u} of part 1 is isolated")));
        }
        if let Some(v) = adj2.iter().position(Vec::is_empty) {
            return Err(Error::domain(format!("vertex {v} of part 2 is isolated")));
        }
        Ok(Self { part1, part2, edges, adj1, adj2 })
    }

    pub fn part_sizes(&self) -> (usize, usize) {
        (self.part1, self.part2)
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.part1 + self.part2
    }

    pub fn v_min(&self) -> usize {
        self.part1.min(self.part2)
    }

    pub fn degrees(&self) -> (Vec<usize>, Vec<usize>) {
        (self.adj1.iter().map(Vec::len).collect(), self.adj2.iter().map(Vec::len).collect())
    }

    /// `Some((d1, d2))` when every vertex of part `i` has degree `d_i`.
    pub fn biregularity(&self) -> Option<(usize, usize)> {
        let (d1, d2) = self.degrees();
        let uniform = |d: &[usize]| d.iter().all(|&x| x == d[0]).then_some(d[0]);
        Some((uniform(&d1)?, uniform(&d2)?))
    }

    /// Neighbours in the combined numbering (part 2 shifted by `part1`).
    fn neighbours(&self, x: usize) -> Vec<usize> {
        if x < self.part1 {
            self.adj1[x].iter().map(|v| v + self.part1).collect()
        } else {
            self.adj2[x - self.part1].clone()
        }
    }

    /// Connected components as sorted lists of combined vertex indices.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count();
        let mut label = vec![usize::MAX; n];
        let mut out = Vec::new();
        for start in 0..n {
            if label[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut comp = vec![start];
            label[start] = id;
            let mut queue = VecDeque::from([start]);
            while let Some(x) = queue.pop_front() {
                for y in self.neighbours(x) {
                    if label[y] == usize::MAX {
                        label[y] = id;
                        comp.push(y);
                        queue.push_back(y);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Length of a shortest cycle, `None` for forests.
    pub fn girth(&self) -> Option<usize> {
        let n = self.vertex_count();
        let mut best: Option<usize> = None;
        for s in 0..n {
            let mut dist = vec![usize::MAX; n];
            let mut parent = vec![usize::MAX; n];
            dist[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(x) = queue.pop_front() {
                for y in self.neighbours(x) {
                    if dist[y] == usize::MAX {
                        dist[y] = dist[x] + 1;
                        parent[y] = x;
                        queue.push_back(y);
                    } else if parent[x] != y {
                        let len = dist[x] + dist[y] + 1;
                        best = Some(best.map_or(len, |b| b.min(len)));
                    }
                }
            }
        }
        best
    }

    /// Biadjacency matrix `B` (part 1 rows, part 2 columns).
    pub fn biadjacency(&self) -> Matrix {
        let mut b = Matrix::zeros(self.part1, self.part2);
        for &(u, v) in &self.edges {
            b[(u, v)] = 1.0;
        }
        b
    }

    /// `I − D^{−1/2} A D^{−1/2}` on all vertices, part 1 first.
    pub fn normalized_laplacian(&self) -> Matrix {
        let n = self.vertex_count();
        let (d1, d2) = self.degrees();
        let deg: Vec<f64> = d1.iter().chain(&d2).map(|&d| d as f64).collect();
        let mut l = Matrix::identity(n);
        for &(u, v) in &self.edges {
            let (a, b) = (u, v + self.part1);
            let w = 1.0 / (deg[a] * deg[b]).sqrt();
            l[(a, b)] -= w;
            l[(b, a)] -= w;
        }
        l
    }

    /// Ascending eigenvalues of the normalized Laplacian.
    pub fn laplacian_spectrum(&self) -> Vec<f64> {
        sym_eigen(&self.normalized_laplacian()).expect("Laplacian is symmetric").values
    }

    /// Singular values of `D₁^{−1/2} B D₂^{−1/2}`, descending. The Laplacian
    /// eigenvalues are `1 ± σ` together with `1` for the unmatched dimensions.
    pub fn normalized_singular_values(&self) -> Vec<f64> {
        let (d1, d2) = self.degrees();
        let mut m = self.biadjacency();
        for u in 0..self.part1 {
            for v in 0..self.part2 {
                if m[(u, v)] != 0.0 {
                    m[(u, v)] /= ((d1[u] * d2[v]) as f64).sqrt();
                }
            }
        }
        // keep the smaller dimension as the column count
        let m = if self.part1 < self.part2 { m.transpose() } else { m };
        svd(&m).singular_values
    }

    /// Smallest eigenvalue of the normalized Laplacian above [`KAPPA_ZERO`],
    /// excluding the top eigenvalue 2. `K_{1,1}` has only `{0, 2}` and gets
    /// `κ = 1` like every other complete bipartite graph.
    pub fn kappa(&self) -> Result<f64> {
        let comps = self.components();
        if comps.len() > 1 {
            let names: Vec<String> = comps
                .iter()
                .map(|c| {
                    let shown: Vec<String> = c.iter().take(6).map(ToString::to_string).collect();
                    format!("[{}{}]", shown.join(","), if c.len() > 6 { ",…" } else { "" })
                })
                .collect();
            return Err(Error::domain(format!("graph is disconnected: {} components {}", comps.len(), names.join(" "))));
        }
        let sv = self.normalized_singular_values();
        let unmatched = self.vertex_count() > 2 * sv.len();
        let mut candidates: Vec<f64> = sv.iter().map(|s| 1.0 - s).filter(|&x| x > KAPPA_ZERO).collect();
        if unmatched {
            candidates.push(1.0);
        }
        Ok(candidates.into_iter().reduce(f64::min).unwrap_or(1.0))
    }

    /// Text form: `parts a b` followed by one `u v` line per edge.
    pub fn to_text(&self) -> String {
        let mut s = format!("parts {} {}\n", self.part1, self.part2);
        for (u, v) in &self.edges {
            s.push_str(&format!("{u} {v}\n"));
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (line, header) = lines.next().ok_or_else(|| Error::parse(1, "a 'parts a b' header"))?;
        let words: Vec<&str> = header.split_whitespace().collect();
        let (a, b) = match words.as_slice() {
            ["parts", a, b] => (
                a.parse().map_err(|_| Error::parse(line, "a part size"))?,
                b.parse().map_err(|_| Error::parse(line, "a part size"))?,
            ),
            _ => return Err(Error::parse(line, "a 'parts a b' header")),
        };
        let mut edges = Vec::new();
        for (line, l) in lines {
            let nums: Vec<&str> = l.split_whitespace().collect();
            let [u, v] = nums.as_slice() else {
                return Err(Error::parse(line, "an edge 'u v'"));
            };
            let u: usize = u.parse().map_err(|_| Error::parse(line, "a vertex index"))?;
            let v: usize = v.parse().map_err(|_| Error::parse(line, "a vertex index"))?;
            if u >= a || v >= b {
                return Err(Error::parse(line, format!("indices below {a} and {b}")));
            }
            edges.push((u, v));
        }
        Self::new(a, b, edges)
    }
}

/// `K_{a,b}`.
pub fn complete_bipartite(a: usize, b: usize) -> BipartiteGraph {
    let edges = (0..a).flat_map(|u| (0..b).map(move |v| (u, v))).collect();
    BipartiteGraph::new(a, b, edges).expect("complete bipartite graph")
}

/// The cycle of length `2k` as a bipartite graph.
pub fn even_cycle(k: usize) -> BipartiteGraph {
    let edges = (0..k).flat_map(|u| [(u, u), (u, (u + 1) % k)]).collect::<BTreeSet<_>>().into_iter().collect();
    BipartiteGraph::new(k, k, edges).expect("even cycle")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_bipartite_has_kappa_one() {
        for (a, b) in [(3, 3), (2, 5), (4, 1), (1, 1)] {
            let g = complete_bipartite(a, b);
            assert!((g.kappa().unwrap() - 1.0).abs() < 1e-12, "{a} {b}");
        }
    }

    #[test]
    fn hexagon_kappa_is_one_half() {
        let g = even_cycle(3);
        assert_eq!(g.girth(), Some(6));
        assert!((g.kappa().unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn reduced_problem_matches_full_spectrum() {
        for g in [even_cycle(5), complete_bipartite(2, 4), even_cycle(4)] {
            let spec = g.laplacian_spectrum();
            let from_full = spec.iter().copied().filter(|&x| x > KAPPA_ZERO && x < 2.0 - KAPPA_ZERO).fold(f64::INFINITY, f64::min);
            assert!((g.kappa().unwrap() - from_full).abs() < 1e-10);
            for (x, y) in spec.iter().zip(spec.iter().rev()) {
                assert!((x + y - 2.0).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn disconnected_graph_names_components() {
        let g = BipartiteGraph::new(2, 2, vec![(0, 0), (1, 1)]).unwrap();
        match g.kappa() {
            Err(Error::Domain(msg)) => assert!(msg.contains("2 components"), "{msg}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn validation_and_text_format() {
        assert!(BipartiteGraph::new(2, 2, vec![(0, 0), (0, 0), (1, 1)]).is_err());
        assert!(BipartiteGraph::new(2, 2, vec![(0, 0), (0, 1)]).is_err());
        let g = even_cycle(4);
        assert_eq!(BipartiteGraph::parse(&g.to_text()).unwrap(), g);
        match BipartiteGraph::parse("parts 2 2\n0 0\n1 x\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }
}
