use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest group order accepted: regular representations are dense.
pub const MAX_GROUP_ORDER: usize = 120;

const ASSOCIATIVITY_SAMPLES: usize = 1000;

/// A finite group given by its multiplication table. Element 0 is the
/// identity.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteGroup {
    mul: Vec<usize>,
    inv: Vec<usize>,
    labels: Vec<String>,
    /// Permutations of `0..degree` for groups built from generators.
    perms: Option<Vec<Vec<usize>>>,
}

/// Sorted element indices of a subgroup, checked against its group.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Subgroup(Vec<usize>);

impl Subgroup {
    pub fn elements(&self) -> &[usize] {
        &self.0
    }

    pub fn order(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.0.binary_search(&g).is_ok()
    }

    pub fn is_subset(&self, other: &Subgroup) -> bool {
        self.0.iter().all(|&g| other.contains(g))
    }
}

impl FiniteGroup {
    /// Builds a group from a full table, `table[a][b] = ab`.
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 || n > MAX_GROUP_ORDER {
            return Err(Error::domain(format!("group order must be in 1..={MAX_GROUP_ORDER}, got {n}")));
        }
        if let Some(row) = table.iter().position(|r| r.len() != n) {
            return Err(Error::domain(format!("table row {row} has length {}, expected {n}", table[row].len())));
        }
        let mul: Vec<usize> = table.into_iter().flatten().collect();
        let labels = (0..n).map(|i| if i == 0 { "e".to_string() } else { format!("g{i}") }).collect();
        Self::validated(mul, labels, None)
    }

    /// Closure of the given permutations of `0..degree`.
    pub fn from_permutations(degree: usize, generators: &[Vec<usize>]) -> Result<Self> {
        for g in generators {
            let mut seen = vec![false; degree];
            if g.len() != degree || g.iter().any(|&x| x >= degree || std::mem::replace(&mut seen[x], true)) {
                return Err(Error::domain(format!("{g:?} is not a permutation of {degree} points")));
            }
        }
        let identity: Vec<usize> = (0..degree).collect();
        let mut perms = vec![identity.clone()];
        let mut index = BTreeMap::from([(identity, 0)]);
        let mut queue = VecDeque::from([0]);
        while let Some(x) = queue.pop_front() {
            for g in generators {
                let y: Vec<usize> = perms[x].iter().map(|&i| g[i]).collect();
                if !index.contains_key(&y) {
                    if perms.len() == MAX_GROUP_ORDER {
                        return Err(Error::domain(format!("generated group exceeds order {MAX_GROUP_ORDER}")));
                    }
                    index.insert(y.clone(), perms.len());
                    queue.push_back(perms.len());
                    perms.push(y);
                }
            }
        }
        let n = perms.len();
        let mut mul = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                let ab: Vec<usize> = (0..degree).map(|i| perms[a][perms[b][i]]).collect();
                mul[a * n + b] = index[&ab];
            }
        }
        let labels = perms.iter().map(|p| cycle_notation(p)).collect();
        Self::validated(mul, labels, Some(perms))
    }

    fn validated(mul: Vec<usize>, labels: Vec<String>, perms: Option<Vec<Vec<usize>>>) -> Result<Self> {
        let n = labels.len();
        if let Some(&x) = mul.iter().find(|&&x| x >= n) {
            return Err(Error::domain(format!("table entry {x} is out of range for order {n}")));
        }
        for a in 0..n {
            if mul[a] != a || mul[a * n] != a {
                return Err(Error::domain(format!("element 0 is not an identity for element {a}")));
            }
            let mut seen = vec![false; n];
            for b in 0..n {
                if std::mem::replace(&mut seen[mul[a * n + b]], true) {
                    return Err(Error::domain(format!("row {a} of the table repeats an element")));
                }
            }
        }
        let mut inv = vec![0; n];
        for a in 0..n {
            let b = (0..n).find(|&b| mul[a * n + b] == 0).expect("rows are permutations");
            if mul[b * n + a] != 0 {
                return Err(Error::domain(format!("left and right inverses of {a} differ")));
            }
            inv[a] = b;
        }
        let group = Self { mul, inv, labels, perms };
        group.check_associativity()?;
        Ok(group)
    }

    fn check_associativity(&self) -> Result<()> {
        let n = self.order();
        let check = |a, b, c| {
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                Err(Error::domain(format!("table is not associative at ({a}, {b}, {c})")))
            } else {
                Ok(())
            }
        };
        if n * n * n <= ASSOCIATIVITY_SAMPLES {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        check(a, b, c)?;
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            for _ in 0..ASSOCIATIVITY_SAMPLES {
                check(rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n))?;
            }
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order() + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, g: usize) -> &str {
        &self.labels[g]
    }

    /// Index of a permutation, for groups built from generators.
    pub fn element_of(&self, perm: &[usize]) -> Option<usize> {
        self.perms.as_ref()?.iter().position(|p| p == perm)
    }

    /// Index of the element written in 1-based cycle notation.
    pub fn element_from_cycles(&self, text: &str) -> Result<usize> {
        let degree = self.perms.as_ref().and_then(|p| p.first()).map(Vec::len).unwrap_or(0);
        let perm = parse_cycles(text, degree)?;
        self.element_of(&perm).ok_or_else(|| Error::domain(format!("{text} is not in the group")))
    }

    /// Checks closure under products and inverses.
    pub fn subgroup(&self, elements: &[usize]) -> Result<Subgroup> {
        let set: BTreeSet<usize> = elements.iter().copied().collect();
        if let Some(&g) = set.iter().find(|&&g| g >= self.order()) {
            return Err(Error::Subgroup(format!("element {g} is out of range for order {}", self.order())));
        }
        if !set.contains(&0) {
            return Err(Error::Subgroup("identity missing".into()));
        }
        for &a in &set {
            if !set.contains(&self.inv(a)) {
                return Err(Error::Subgroup(format!("inverse of {} missing", self.label(a))));
            }
            for &b in &set {
                if !set.contains(&self.mul(a, b)) {
                    return Err(Error::Subgroup(format!(
                        "not closed: {} * {} leaves the set",
                        self.label(a),
                        self.label(b)
                    )));
                }
            }
        }
        Ok(Subgroup(set.into_iter().collect()))
    }

    /// Subgroup generated by the given elements.
    pub fn generate(&self, generators: &[usize]) -> Subgroup {
        let mut set = BTreeSet::from([0]);
        let mut queue = VecDeque::from([0]);
        while let Some(x) = queue.pop_front() {
            for &g in generators {
                let y = self.mul(g, x);
                if set.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        Subgroup(set.into_iter().collect())
    }

    /// Subgroup generated by the union of the given subgroups.
    pub fn join(&self, parts: &[&Subgroup]) -> Subgroup {
        let gens: Vec<usize> = parts.iter().flat_map(|s| s.elements().iter().copied()).collect();
        self.generate(&gens)
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup((0..self.order()).collect())
    }

    pub fn trivial(&self) -> Subgroup {
        Subgroup(vec![0])
    }

    /// A small generating set of `k`, chosen greedily.
    pub fn generators_of(&self, k: &Subgroup) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = self.trivial();
        for &g in k.elements() {
            if !span.contains(g) {
                gens.push(g);
                span = self.generate(&gens);
            }
        }
        gens
    }

    /// Left cosets `gK` of `k` inside `ambient`, each sorted, in order of
    /// their smallest element.
    pub fn left_cosets(&self, k: &Subgroup, ambient: &Subgroup) -> Vec<Vec<usize>> {
        let mut seen = BTreeSet::new();
        let mut cosets = Vec::new();
        for &g in ambient.elements() {
            if seen.contains(&g) {
                continue;
            }
            let mut c: Vec<usize> = k.elements().iter().map(|&h| self.mul(g, h)).collect();
            c.sort_unstable();
            seen.extend(c.iter().copied());
            cosets.push(c);
        }
        cosets
    }

    /// Text form: `table <order>` then one row per line.
    pub fn to_text(&self) -> String {
        let n = self.order();
        let mut s = format!("table {n}\n");
        for a in 0..n {
            let row: Vec<String> = (0..n).map(|b| self.mul(a, b).to_string()).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }

    /// Parses either `table <order>` followed by the rows, or
    /// `perm <degree>` followed by one generator per line in 1-based cycle
    /// notation.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (line, header) = lines.next().ok_or_else(|| Error::parse(1, "'table <order>' or 'perm <degree>'"))?;
        let words: Vec<&str> = header.split_whitespace().collect();
        let size = |w: &str| w.parse::<usize>().map_err(|_| Error::parse(line, "a positive size"));
        match words.as_slice() {
            ["table", n] => {
                let n = size(n)?;
                let mut rows = Vec::with_capacity(n);
                for (line, l) in lines {
                    let row = l
                        .split_whitespace()
                        .map(|w| w.parse::<usize>().map_err(|_| Error::parse(line, "an element index")))
                        .collect::<Result<Vec<_>>>()?;
                    if row.len() != n {
                        return Err(Error::parse(line, format!("{n} entries")));
                    }
                    rows.push(row);
                }
                if rows.len() != n {
                    return Err(Error::parse(line, format!("{n} table rows, found {}", rows.len())));
                }
                Self::from_table(rows)
            }
            ["perm", d] => {
                let d = size(d)?;
                let gens = lines
                    .map(|(line, l)| parse_cycles(l, d).map_err(|_| Error::parse(line, format!("cycles on 1..={d}"))))
                    .collect::<Result<Vec<_>>>()?;
                Self::from_permutations(d, &gens)
            }
            _ => Err(Error::parse(line, "'table <order>' or 'perm <degree>'")),
        }
    }
}

/// `(1 2)(3 4)` style notation on points `1..=degree`.
pub fn parse_cycles(text: &str, degree: usize) -> Result<Vec<usize>> {
    let mut perm: Vec<usize> = (0..degree).collect();
    let mut used = vec![false; degree];
    let body = text.trim();
    if body == "e" || body == "()" {
        return Ok(perm);
    }
    for chunk in body.split(')') {
        let chunk = chunk.trim();
        if chunk.is_empty() {
            continue;
        }
        let inner = chunk.strip_prefix('(').ok_or_else(|| Error::domain(format!("malformed cycle in '{text}'")))?;
        let pts = inner
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|w| !w.is_empty())
            .map(|w| match w.parse::<usize>() {
                Ok(x) if (1..=degree).contains(&x) => Ok(x - 1),
                _ => Err(Error::domain(format!("point '{w}' is not in 1..={degree}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        for (i, &x) in pts.iter().enumerate() {
            if std::mem::replace(&mut used[x], true) {
                return Err(Error::domain(format!("point {} repeats in '{text}'", x + 1)));
            }
            perm[x] = pts[(i + 1) % pts.len()];
        }
    }
    Ok(perm)
}

fn cycle_notation(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        let mut cycle = Vec::new();
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            cycle.push((x + 1).to_string());
            x = p[x];
        }
        out.push_str(&format!("({})", cycle.join(" ")));
    }
    if out.is_empty() {
        "e".into()
    } else {
        out
    }
}

/// Symmetric group on `degree` points, generated by adjacent transpositions.
pub fn symmetric_group(degree: usize) -> Result<FiniteGroup> {
    let gens: Vec<Vec<usize>> = (0..degree.saturating_sub(1))
        .map(|i| {
            let mut p: Vec<usize> = (0..degree).collect();
            p.swap(i, i + 1);
            p
        })
        .collect();
    FiniteGroup::from_permutations(degree, &gens)
}

/// Dihedral group of order `2m` acting on the vertices of an `m`-gon,
/// generated by two reflections.
pub fn dihedral_group(m: usize) -> Result<FiniteGroup> {
    if m < 2 {
        return Err(Error::domain("dihedral group needs m >= 2"));
    }
    let (s, t) = dihedral_reflections(m);
    FiniteGroup::from_permutations(m, &[s, t])
}

/// Reflections `i ↦ −i` and `i ↦ 1 − i` mod `m`; their product is a rotation
/// of order `m`.
pub fn dihedral_reflections(m: usize) -> (Vec<usize>, Vec<usize>) {
    ((0..m).map(|i| (m - i) % m).collect(), (0..m).map(|i| (m + 1 - i) % m).collect())
}
