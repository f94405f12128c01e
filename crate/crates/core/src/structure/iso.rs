use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::Perm;
use crate::structure::table::GroupTable;

/// Default bound on group orders accepted by the isomorphism search.
pub const DEFAULT_ISO_LIMIT: u128 = 720;

/// An isomorphism between two table groups, given by the images of a
/// generating set of the source and expanded to a full element map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupIso {
    pub source_gens: Vec<u32>,
    pub gen_images: Vec<u32>,
    map: Vec<u32>,
}

impl GroupIso {
    #[inline]
    pub fn apply(&self, x: u32) -> u32 {
        self.map[x as usize]
    }

    pub fn map(&self) -> &[u32] {
        &self.map
    }

    pub fn inverse_map(&self) -> Vec<u32> {
        let mut inv = vec![0; self.map.len()];
        for (x, &y) in self.map.iter().enumerate() {
            inv[y as usize] = x as u32;
        }
        inv
    }

    /// Expands generator images to a full element map, checking that they
    /// define an isomorphism.
    pub fn from_gen_images(
        source: &GroupTable,
        source_gens: &[u32],
        target: &GroupTable,
        gen_images: &[u32],
    ) -> Option<GroupIso> {
        if source.len() != target.len() || source_gens.len() != gen_images.len() {
            return None;
        }
        let mut map = vec![u32::MAX; source.len()];
        let mut used = FixedBitSet::with_capacity(target.len());
        extend(source, source_gens, target, gen_images, &mut map, &mut used)?;
        if map.contains(&u32::MAX) {
            return None;
        }
        Some(GroupIso {
            source_gens: source_gens.to_vec(),
            gen_images: gen_images.to_vec(),
            map,
        })
    }
}

/// Spreads `gens ↦ images` over the subgroup they generate, by walking the
/// Cayley graph from the identity. Fails on an inconsistency or a
/// collision, which means the assignment is not an injective homomorphism.
fn extend(
    source: &GroupTable,
    gens: &[u32],
    target: &GroupTable,
    images: &[u32],
    map: &mut [u32],
    used: &mut FixedBitSet,
) -> Option<()> {
    map.fill(u32::MAX);
    used.clear();
    map[0] = 0;
    used.insert(0);
    let mut queue = vec![0u32];
    while let Some(x) = queue.pop() {
        let fx = map[x as usize];
        for (&g, &h) in gens.iter().zip(images) {
            let y = source.mul(x, g);
            let fy = target.mul(fx, h);
            match map[y as usize] {
                u32::MAX => {
                    if used.put(fy as usize) {
                        return None;
                    }
                    map[y as usize] = fy;
                    queue.push(y);
                }
                old if old != fy => return None,
                _ => {}
            }
        }
    }
    Some(())
}

/// Cheap invariants that must agree between isomorphic groups.
pub fn invariants_match(a: &GroupTable, b: &GroupTable) -> bool {
    a.len() == b.len()
        && a.order_census() == b.order_census()
        && a.is_abelian() == b.is_abelian()
        && a.derived_subgroup().count_ones(..) == b.derived_subgroup().count_ones(..)
}

/// Backtracking search over images of `source_gens`, candidates tried in
/// ascending index order. `visit` returns `false` to stop the search.
pub fn search_isomorphisms(
    source: &GroupTable,
    source_gens: &[u32],
    target: &GroupTable,
    mut visit: impl FnMut(GroupIso) -> bool,
) {
    if source.len() != target.len() {
        return;
    }
    let candidates: Vec<Vec<u32>> = source_gens
        .iter()
        .map(|&g| {
            (0..target.len() as u32)
                .filter(|&x| target.order_of(x) == source.order_of(g))
                .collect()
        })
        .collect();
    let mut images = Vec::with_capacity(source_gens.len());
    let mut map = vec![u32::MAX; source.len()];
    let mut used = FixedBitSet::with_capacity(target.len());
    extend(source, &[], target, &[], &mut map, &mut used);
    descend(
        source,
        source_gens,
        target,
        &candidates,
        &mut images,
        &mut map,
        &mut used,
        &mut visit,
    );
}

#[allow(clippy::too_many_arguments)]
fn descend(
    source: &GroupTable,
    gens: &[u32],
    target: &GroupTable,
    candidates: &[Vec<u32>],
    images: &mut Vec<u32>,
    map: &mut [u32],
    used: &mut FixedBitSet,
    visit: &mut impl FnMut(GroupIso) -> bool,
) -> bool {
    let depth = images.len();
    if depth == gens.len() {
        if map.contains(&u32::MAX) {
            return true;
        }
        return visit(GroupIso {
            source_gens: gens.to_vec(),
            gen_images: images.clone(),
            map: map.to_vec(),
        });
    }
    for &c in &candidates[depth] {
        images.push(c);
        let ok = extend(source, &gens[..=depth], target, images, map, used).is_some();
        if ok && !descend(source, gens, target, candidates, images, map, used, visit) {
            return false;
        }
        images.pop();
    }
    true
}

/// First isomorphism `a → b` in canonical search order, if any.
pub fn find_table_isomorphism(a: &GroupTable, b: &GroupTable) -> Option<GroupIso> {
    if !invariants_match(a, b) {
        return None;
    }
    let gens = a.generating_set();
    let mut found = None;
    search_isomorphisms(a, &gens, b, |iso| {
        found = Some(iso);
        false
    });
    found
}

/// Isomorphism between permutation groups, recorded on their elements.
#[derive(Clone, Debug)]
pub struct PermIso {
    pub from: PermGroup,
    pub to: PermGroup,
    pub generators: Vec<Perm>,
    pub gen_images: Vec<Perm>,
    map: HashMap<Perm, Perm>,
}

impl PermIso {
    pub fn apply(&self, p: &Perm) -> Option<&Perm> {
        self.map.get(p)
    }
}

/// Searches for an isomorphism `a → b`; both orders must be within `limit`.
pub fn find_isomorphism(a: &PermGroup, b: &PermGroup, limit: u128) -> Result<Option<PermIso>> {
    for g in [a, b] {
        if g.order() > limit {
            return Err(Error::TooLarge {
                what: "isomorphism search",
                order: g.order(),
                limit,
            });
        }
    }
    if a.order() != b.order() {
        return Ok(None);
    }
    let ta = GroupTable::from_group(a, limit, "isomorphism search")?;
    let tb = GroupTable::from_group(b, limit, "isomorphism search")?;
    Ok(find_table_isomorphism(&ta, &tb).map(|iso| PermIso {
        from: a.clone(),
        to: b.clone(),
        generators: iso.source_gens.iter().map(|&x| ta.element(x).clone()).collect(),
        gen_images: iso.gen_images.iter().map(|&x| tb.element(x).clone()).collect(),
        map: (0..ta.len() as u32)
            .map(|x| (ta.element(x).clone(), tb.element(iso.apply(x)).clone()))
            .collect(),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(degree: usize, gens: &[&str]) -> PermGroup {
        PermGroup::new(
            degree,
            gens.iter().map(|g| Perm::parse(degree, g).unwrap()).collect(),
        )
        .unwrap()
    }

    fn iso(a: &PermGroup, b: &PermGroup) -> bool {
        find_isomorphism(a, b, 720).unwrap().is_some()
    }

    #[test]
    fn cyclic_versus_klein() {
        let c4 = group(4, &["(1 2 3 4)"]);
        let v4 = group(4, &["(1 2)(3 4)", "(1 3)(2 4)"]);
        assert!(!iso(&c4, &v4));
        assert!(iso(&c4, &group(6, &["(1 2)(3 4 5 6)"])));
    }

    #[test]
    fn dihedral_versus_quaternion() {
        let d8 = group(4, &["(1 2 3 4)", "(1 4)(2 3)"]);
        let q8 = group(8, &["(1 2 3 4)(5 6 7 8)", "(1 5 3 7)(2 8 4 6)"]);
        assert_eq!(q8.order(), 8);
        let t = GroupTable::from_group(&q8, 8, "t").unwrap();
        assert_eq!(t.order_census()[&2], 1);
        assert!(!iso(&d8, &q8));
        assert!(!iso(&q8, &d8));
    }

    #[test]
    fn found_map_is_a_homomorphism() {
        let s3 = group(3, &["(1 2 3)", "(1 2)"]);
        let other = group(6, &["(1 2)(3 4)(5 6)", "(1 3 5)(2 6 4)"]);
        let f = find_isomorphism(&s3, &other, 720).unwrap().unwrap();
        for a in s3.elements() {
            for b in s3.elements() {
                let lhs = f.apply(&a.compose(&b)).unwrap().clone();
                let rhs = f.apply(&a).unwrap().compose(f.apply(&b).unwrap());
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn limit_is_enforced() {
        let s6 = group(6, &["(1 2 3 4 5 6)", "(1 2)"]);
        let err = find_isomorphism(&s6, &s6, 100).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn automorphism_count_of_s3() {
        let t = GroupTable::from_group(&group(3, &["(1 2 3)", "(1 2)"]), 100, "t").unwrap();
        let gens = t.generating_set();
        let mut count = 0;
        search_isomorphisms(&t, &gens, &t, |_| {
            count += 1;
            true
        });
        assert_eq!(count, 6);
    }
}
