use crate::error::{Error, Result};
use crate::groups::family::SubgroupFamily;
use crate::groups::group::{dihedral_reflections, symmetric_group, FiniteGroup, Subgroup};

/// A group with a subgroup family and the link triples `(K1, K2, ambient)`
/// to check.
#[derive(Debug, Clone)]
pub struct GroupModel {
    pub name: &'static str,
    pub group: FiniteGroup,
    pub family: SubgroupFamily,
    pub links: Vec<(Subgroup, Subgroup, Subgroup)>,
}

pub const MODEL_NAMES: [&str; 3] = ["s3", "d4", "s4"];

pub fn model(name: &str) -> Result<GroupModel> {
    match name {
        "s3" => s3_model(),
        "d4" => d4_model(),
        "s4" => s4_model(),
        _ => Err(Error::domain(format!("unknown group model '{name}'; known: {}", MODEL_NAMES.join(", ")))),
    }
}

fn cyclic(g: &FiniteGroup, cycles: &str) -> Result<Subgroup> {
    Ok(g.generate(&[g.element_from_cycles(cycles)?]))
}

/// `S3` on an edge: walls `⟨(1 2)⟩`, `⟨(2 3)⟩`; the link is a hexagon.
pub fn s3_model() -> Result<GroupModel> {
    let g = symmetric_group(3)?;
    let a = cyclic(&g, "(1 2)")?;
    let b = cyclic(&g, "(2 3)")?;
    let family = SubgroupFamily::new(&g, &[0], &[a.elements().to_vec(), b.elements().to_vec()])?;
    let whole = g.whole();
    Ok(GroupModel { name: "s3", links: vec![(a, b, whole)], group: g, family })
}

/// Dihedral group of order 8 from two reflections; the link is an octagon.
pub fn d4_model() -> Result<GroupModel> {
    let (s, t) = dihedral_reflections(4);
    let g = FiniteGroup::from_permutations(4, &[s.clone(), t.clone()])?;
    let a = g.generate(&[g.element_of(&s).expect("generator")]);
    let b = g.generate(&[g.element_of(&t).expect("generator")]);
    let family = SubgroupFamily::new(&g, &[0], &[a.elements().to_vec(), b.elements().to_vec()])?;
    let whole = g.whole();
    Ok(GroupModel { name: "d4", links: vec![(a, b, whole)], group: g, family })
}

/// `S4` on a triangle with walls `⟨(1 2)⟩`, `⟨(2 3)⟩`, `⟨(3 4)⟩`. Links are
/// every pair of distinct parabolic subgroups of equal rank inside the
/// subgroup they generate.
pub fn s4_model() -> Result<GroupModel> {
    let g = symmetric_group(4)?;
    let s = [cyclic(&g, "(1 2)")?, cyclic(&g, "(2 3)")?, cyclic(&g, "(3 4)")?];
    let family = SubgroupFamily::new(&g, &[0], &s.iter().map(|k| k.elements().to_vec()).collect::<Vec<_>>())?;
    let rank2: Vec<Subgroup> = [(0, 1), (1, 2), (0, 2)].iter().map(|&(i, j)| g.join(&[&s[i], &s[j]])).collect();
    let mut links = Vec::new();
    for level in [&s[..], &rank2[..]] {
        for i in 0..level.len() {
            for j in (i + 1)..level.len() {
                let amb = g.join(&[&level[i], &level[j]]);
                links.push((level[i].clone(), level[j].clone(), amb));
            }
        }
    }
    Ok(GroupModel { name: "s4", links, group: g, family })
}
