use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::Perm;
use crate::structure::iso::{search_isomorphisms, GroupIso};
use crate::structure::table::GroupTable;

/// Largest automorphism group the enumeration will materialize.
pub const AUTOMORPHISM_LIMIT: usize = 100_000;

/// Largest outer automorphism group given a multiplication table.
pub const OUT_TABLE_LIMIT: usize = 4096;

/// `Out(H) = Aut(H)/Inn(H)` with canonically numbered coset
/// representatives.
///
/// Automorphisms are identified by the images of a fixed generating set of
/// `H`. Class 0 is `Inn(H)`, represented by the identity; the remaining
/// classes are ordered by the smallest image tuple they contain, and that
/// tuple's automorphism is the representative.
#[derive(Debug)]
pub struct OutGroup {
    base: PermGroup,
    table: Arc<GroupTable>,
    generators: Vec<u32>,
    automorphisms: Vec<GroupIso>,
    class_of: HashMap<Vec<u32>, usize>,
    out_reps: Vec<usize>,
    mult_table: Vec<usize>,
    inner_count: usize,
}

impl OutGroup {
    pub fn build(base: &PermGroup, iso_limit: u128) -> Result<OutGroup> {
        let table = Arc::new(GroupTable::from_group(base, iso_limit, "automorphism search")?);
        OutGroup::from_table(base.clone(), table)
    }

    pub(crate) fn from_table(base: PermGroup, table: Arc<GroupTable>) -> Result<OutGroup> {
        let generators = table.generating_set();
        let mut automorphisms = Vec::new();
        let mut overflow = false;
        search_isomorphisms(&table, &generators, &table, |iso| {
            automorphisms.push(iso);
            overflow = automorphisms.len() > AUTOMORPHISM_LIMIT;
            !overflow
        });
        if overflow {
            return Err(Error::TooLarge {
                what: "automorphism enumeration",
                order: base.order(),
                limit: AUTOMORPHISM_LIMIT as u128,
            });
        }
        // search order is ascending in the image tuple already
        let key_index: HashMap<Vec<u32>, usize> = automorphisms
            .iter()
            .enumerate()
            .map(|(i, a)| (a.gen_images.clone(), i))
            .collect();

        let n = table.len() as u32;
        let inner: HashSet<Vec<u32>> = (0..n)
            .map(|h| generators.iter().map(|&g| table.conj(h, g)).collect())
            .collect();
        let inner_count = inner.len();

        let identity = key_index[&generators];
        let mut class_of_aut = vec![usize::MAX; automorphisms.len()];
        let mut out_reps = Vec::new();
        let mut assign = |start: usize, class_of_aut: &mut Vec<usize>| {
            let class = out_reps.len();
            out_reps.push(start);
            let phi = &automorphisms[start];
            for key in &inner {
                let composed: Vec<u32> = key.iter().map(|&x| phi.apply(x)).collect();
                class_of_aut[key_index[&composed]] = class;
            }
        };
        assign(identity, &mut class_of_aut);
        for i in 0..automorphisms.len() {
            if class_of_aut[i] == usize::MAX {
                assign(i, &mut class_of_aut);
            }
        }
        let out_order = out_reps.len();
        if out_order * inner_count != automorphisms.len() {
            return Err(Error::Consistency(format!(
                "|Aut| = {} is not |Out| = {out_order} times |Inn| = {inner_count}",
                automorphisms.len()
            )));
        }
        if out_order > OUT_TABLE_LIMIT {
            return Err(Error::TooLarge {
                what: "outer automorphism table",
                order: out_order as u128,
                limit: OUT_TABLE_LIMIT as u128,
            });
        }
        let class_of: HashMap<Vec<u32>, usize> = automorphisms
            .iter()
            .zip(&class_of_aut)
            .map(|(a, &c)| (a.gen_images.clone(), c))
            .collect();

        let mut mult_table = vec![0; out_order * out_order];
        for a in 0..out_order {
            for b in 0..out_order {
                let phi = &automorphisms[out_reps[a]];
                let psi = &automorphisms[out_reps[b]];
                let key: Vec<u32> = generators.iter().map(|&g| phi.apply(psi.apply(g))).collect();
                mult_table[a * out_order + b] = class_of[&key];
            }
        }

        Ok(OutGroup {
            base,
            table,
            generators,
            automorphisms,
            class_of,
            out_reps,
            mult_table,
            inner_count,
        })
    }

    pub fn base(&self) -> &PermGroup {
        &self.base
    }

    pub fn table(&self) -> &GroupTable {
        &self.table
    }

    /// Generators of `H` (table indices) whose images key automorphisms.
    pub fn generators(&self) -> &[u32] {
        &self.generators
    }

    pub fn automorphisms(&self) -> &[GroupIso] {
        &self.automorphisms
    }

    pub fn aut_order(&self) -> usize {
        self.automorphisms.len()
    }

    pub fn inner_order(&self) -> usize {
        self.inner_count
    }

    pub fn order(&self) -> usize {
        self.out_reps.len()
    }

    /// Representative automorphism of class `a`.
    pub fn representative(&self, a: usize) -> &GroupIso {
        &self.automorphisms[self.out_reps[a]]
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult_table[a * self.order() + b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        (0..self.order())
            .find(|&b| self.mul(a, b) == 0)
            .expect("group table has inverses")
    }

    /// Class of the automorphism sending `generators()[i]` to
    /// `images[i]`.
    pub fn class_of_images(&self, images: &[u32]) -> Result<usize> {
        self.class_of.get(images).copied().ok_or_else(|| {
            Error::NotAutomorphism(format!("generator images {images:?}"))
        })
    }

    /// Class of an arbitrary automorphism of `H`.
    pub fn outer_class(&self, phi: &GroupIso) -> Result<usize> {
        if phi.map().len() != self.table.len() {
            return Err(Error::NotAutomorphism("wrong domain size".into()));
        }
        let images: Vec<u32> = self.generators.iter().map(|&g| phi.apply(g)).collect();
        self.class_of_images(&images)
    }

    /// Class of the automorphism of `H` given as a permutation map on
    /// elements.
    pub fn outer_class_of_perm_map(&self, f: impl Fn(&Perm) -> Perm) -> Result<usize> {
        let images: Vec<u32> = self
            .generators
            .iter()
            .map(|&g| {
                let image = f(self.table.element(g));
                self.table
                    .index_of(&image)
                    .ok_or_else(|| Error::NotAutomorphism(format!("{image} is not in H")))
            })
            .collect::<Result<_>>()?;
        self.class_of_images(&images)
    }

    /// Generators of `H` with their images under each representative, in
    /// cycle notation.
    pub fn describe(&self, a: usize) -> Vec<(String, String)> {
        let rep = self.representative(a);
        self.generators
            .iter()
            .map(|&g| {
                (
                    self.table.element(g).to_string(),
                    self.table.element(rep.apply(g)).to_string(),
                )
            })
            .collect()
    }
}

/// Builds `Out(h)`; `|h|` must be within `iso_limit`.
pub fn out_group(h: &PermGroup, iso_limit: u128) -> Result<OutGroup> {
    OutGroup::build(h, iso_limit)
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

    fn a5() -> PermGroup {
        group(5, &["(1 2 3)", "(3 4 5)"])
    }

    #[test]
    fn out_orders() {
        let out = out_group(&a5(), 720).unwrap();
        assert_eq!(out.order(), 2);
        assert_eq!(out.aut_order(), 120);
        assert_eq!(out_group(&group(7, &["(1 2 3 4 5 6 7)"]), 720).unwrap().order(), 6);
        let s3 = out_group(&group(3, &["(1 2 3)", "(1 2)"]), 720).unwrap();
        assert_eq!(s3.order(), 1);
        assert_eq!(s3.aut_order(), 6);
        let v4 = out_group(&group(4, &["(1 2)(3 4)", "(1 3)(2 4)"]), 720).unwrap();
        assert_eq!(v4.order(), 6);
        assert_eq!(v4.inner_order(), 1);
        let d8 = out_group(&group(4, &["(1 2 3 4)", "(1 4)(2 3)"]), 720).unwrap();
        assert_eq!((d8.aut_order(), d8.inner_order(), d8.order()), (8, 4, 2));
        let q8 = out_group(&group(8, &["(1 2 3 4)(5 6 7 8)", "(1 5 3 7)(2 8 4 6)"]), 720).unwrap();
        assert_eq!((q8.aut_order(), q8.order()), (24, 6));
    }

    #[test]
    fn identity_and_inner_classes() {
        let g = a5();
        let out = out_group(&g, 720).unwrap();
        assert_eq!(out.outer_class_of_perm_map(|p| p.clone()).unwrap(), 0);
        for h in g.elements() {
            assert_eq!(out.outer_class_of_perm_map(|p| h.conjugate(p)).unwrap(), 0);
        }
        let t = Perm::parse(5, "(1 2)").unwrap();
        assert_eq!(out.outer_class_of_perm_map(|p| t.conjugate(p)).unwrap(), 1);
        assert!(out.outer_class_of_perm_map(|_| t.clone()).is_err());
    }

    #[test]
    fn class_map_is_multiplicative() {
        let out = out_group(&group(4, &["(1 2)(3 4)", "(1 3)(2 4)"]), 720).unwrap();
        let autos = out.automorphisms();
        for phi in autos {
            for psi in autos {
                let images: Vec<u32> = out
                    .generators()
                    .iter()
                    .map(|&g| phi.apply(psi.apply(g)))
                    .collect();
                let composed = out.class_of_images(&images).unwrap();
                let expected = out.mul(out.outer_class(phi).unwrap(), out.outer_class(psi).unwrap());
                assert_eq!(composed, expected);
            }
        }
        for a in 0..out.order() {
            assert_eq!(out.mul(0, a), a);
            assert_eq!(out.mul(a, out.inverse(a)), 0);
            for b in 0..out.order() {
                for c in 0..out.order() {
                    assert_eq!(out.mul(out.mul(a, b), c), out.mul(a, out.mul(b, c)));
                }
            }
        }
    }
}
