use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Largest simplex dimension representable by a [`Face`].
pub const MAX_SIMPLEX_DIM: usize = 30;

/// A face of the simplex `{0, …, n}` stored as a vertex bitmask. Ordering
/// is lexicographic on sorted vertex lists, so `∅ < {0} < {0,1} < {1}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(into = "Vec<usize>", from = "Vec<usize>")]
pub struct Face(u32);

impl Face {
    pub const EMPTY: Face = Face(0);

    pub fn from_vertices(vertices: &[usize]) -> Self {
        Face(vertices.iter().fold(0, |m, &v| {
            assert!(v <= MAX_SIMPLEX_DIM, "vertex {v} out of range");
            m | (1 << v)
        }))
    }

    /// The whole simplex `{0, …, n}`.
    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_SIMPLEX_DIM);
        Face(((1u64 << (n + 1)) - 1) as u32)
    }

    pub fn from_bits(bits: u32) -> Self {
        Face(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, v: usize) -> bool {
        v <= MAX_SIMPLEX_DIM && self.0 & (1 << v) != 0
    }

    pub fn is_subset(self, other: Face) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_proper_subset(self, other: Face) -> bool {
        self.is_subset(other) && self != other
    }

    pub fn intersection(self, other: Face) -> Face {
        Face(self.0 & other.0)
    }

    pub fn union(self, other: Face) -> Face {
        Face(self.0 | other.0)
    }

    pub fn without(self, v: usize) -> Face {
        Face(self.0 & !(1 << v))
    }

    pub fn vertices(self) -> Vec<usize> {
        (0..=MAX_SIMPLEX_DIM).filter(|&v| self.contains(v)).collect()
    }

    /// All subfaces in lexicographic order, including `∅` and `self`.
    pub fn subfaces(self) -> Vec<Face> {
        let mut out = Vec::with_capacity(1 << self.len());
        let mut sub = self.0;
        loop {
            out.push(Face(sub));
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & self.0;
        }
        out.sort();
        out
    }

    pub fn proper_subfaces(self) -> Vec<Face> {
        self.subfaces().into_iter().filter(|&f| f != self).collect()
    }
}

impl Ord for Face {
    fn cmp(&self, other: &Self) -> Ordering {
        self.vertices().cmp(&other.vertices())
    }
}

impl PartialOrd for Face {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.vertices().iter().map(ToString::to_string).collect();
        write!(f, "{{{}}}", v.join(","))
    }
}

impl fmt::Debug for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<Face> for Vec<usize> {
    fn from(f: Face) -> Self {
        f.vertices()
    }
}

impl From<Vec<usize>> for Face {
    fn from(v: Vec<usize>) -> Self {
        Face::from_vertices(&v)
    }
}

/// Faces of `{0, …, n}` with exactly `k + 1` vertices, in lexicographic
/// order (`k = -1` gives the empty face).
pub fn faces_of_dim(n: usize, k: isize) -> Vec<Face> {
    Face::full(n).subfaces().into_iter().filter(|f| f.len() as isize == k + 1).collect()
}

/// Codimension-one faces `Δ ∖ {i}`.
pub fn codim1_faces(n: usize) -> Vec<Face> {
    faces_of_dim(n, n as isize - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lexicographic_order() {
        let all = Face::full(2).subfaces();
        let names: Vec<String> = all.iter().map(ToString::to_string).collect();
        assert_eq!(names, ["{}", "{0}", "{0,1}", "{0,1,2}", "{0,2}", "{1}", "{1,2}", "{2}"]);
    }

    #[test]
    fn set_operations() {
        let a = Face::from_vertices(&[0, 2]);
        let b = Face::from_vertices(&[1, 2]);
        assert_eq!(a.intersection(b), Face::from_vertices(&[2]));
        assert!(Face::EMPTY.is_proper_subset(a));
        assert!(!a.is_subset(b));
        assert_eq!(Face::full(3).without(1), Face::from_vertices(&[0, 2, 3]));
        assert_eq!(codim1_faces(2).len(), 3);
        assert_eq!(faces_of_dim(3, -1), vec![Face::EMPTY]);
    }

    #[test]
    fn serde_as_vertex_list() {
        let f = Face::from_vertices(&[1, 3]);
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, "[1,3]");
        assert_eq!(serde_json::from_str::<Face>(&s).unwrap(), f);
    }
}
