use std::collections::{BTreeMap, HashMap};

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::Perm;

/// Multiplication table of a small group whose elements are indexed
/// `0..n`, with index 0 the identity.
///
/// Tables built from a [`PermGroup`] index elements in canonical order.
/// Quotient tables index cosets instead; see `QuotientGroup`.
#[derive(Clone, Debug)]
pub struct GroupTable {
    elements: Vec<Perm>,
    lookup: HashMap<Perm, u32>,
    mul: Vec<u32>,
    inv: Vec<u32>,
    orders: Vec<u32>,
}

impl GroupTable {
    pub fn from_group(group: &PermGroup, limit: u128, what: &'static str) -> Result<GroupTable> {
        if group.order() > limit {
            return Err(Error::TooLarge {
                what,
                order: group.order(),
                limit,
            });
        }
        let elements = group.elements();
        let lookup: HashMap<Perm, u32> = elements
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i as u32))
            .collect();
        let n = elements.len();
        let mut mul = vec![0u32; n * n];
        for (a, pa) in elements.iter().enumerate() {
            for (b, pb) in elements.iter().enumerate() {
                mul[a * n + b] = lookup[&pa.compose(pb)];
            }
        }
        Ok(GroupTable::from_parts(elements, lookup, mul))
    }

    pub(crate) fn from_parts(
        elements: Vec<Perm>,
        lookup: HashMap<Perm, u32>,
        mul: Vec<u32>,
    ) -> GroupTable {
        let n = elements.len();
        let mut inv = vec![0u32; n];
        for a in 0..n {
            for b in 0..n {
                if mul[a * n + b] == 0 {
                    inv[a] = b as u32;
                    break;
                }
            }
        }
        let mut orders = vec![1u32; n];
        for (a, order) in orders.iter_mut().enumerate() {
            let mut x = a as u32;
            while x != 0 {
                x = mul[x as usize * n + a];
                *order += 1;
            }
        }
        GroupTable {
            elements,
            lookup,
            mul,
            inv,
            orders,
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[a as usize * self.elements.len() + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inv[a as usize]
    }

    /// `g x g⁻¹`.
    #[inline]
    pub fn conj(&self, g: u32, x: u32) -> u32 {
        self.mul(self.mul(g, x), self.inv(g))
    }

    #[inline]
    pub fn order_of(&self, a: u32) -> u32 {
        self.orders[a as usize]
    }

    pub fn element(&self, a: u32) -> &Perm {
        &self.elements[a as usize]
    }

    pub fn index_of(&self, p: &Perm) -> Option<u32> {
        self.lookup.get(p).copied()
    }

    /// Subgroup generated by `gens`, as a membership bitset.
    pub fn closure(&self, gens: &[u32]) -> FixedBitSet {
        let mut bits = FixedBitSet::with_capacity(self.len());
        bits.insert(0);
        let mut queue = vec![0u32];
        while let Some(x) = queue.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !bits.put(y as usize) {
                    queue.push(y);
                }
            }
        }
        bits
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.len() as u32;
        (0..n).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Number of elements of each order.
    pub fn order_census(&self) -> BTreeMap<u32, usize> {
        let mut census = BTreeMap::new();
        for &o in &self.orders {
            *census.entry(o).or_insert(0) += 1;
        }
        census
    }

    /// Normal closure of all commutators.
    pub fn derived_subgroup(&self) -> FixedBitSet {
        let n = self.len() as u32;
        let mut commutators: Vec<u32> = Vec::new();
        let mut seen = FixedBitSet::with_capacity(self.len());
        for a in 0..n {
            for b in 0..n {
                let c = self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)));
                if !seen.put(c as usize) {
                    commutators.push(c);
                }
            }
        }
        // The set of all commutators is closed under conjugation already.
        self.closure(&commutators)
    }

    /// A small generating set, picked greedily: at each step take the element
    /// that enlarges the generated subgroup the most (ties to the smallest
    /// index).
    pub fn generating_set(&self) -> Vec<u32> {
        let n = self.len();
        let mut gens: Vec<u32> = Vec::new();
        let mut current = self.closure(&gens);
        while current.count_ones(..) < n {
            let mut best: Option<(usize, u32, FixedBitSet)> = None;
            for x in 0..n as u32 {
                if current.contains(x as usize) {
                    continue;
                }
                let mut trial = gens.clone();
                trial.push(x);
                let closure = self.closure(&trial);
                let size = closure.count_ones(..);
                if best.as_ref().is_none_or(|(s, _, _)| size > *s) {
                    let full = size == n;
                    best = Some((size, x, closure));
                    if full {
                        break;
                    }
                }
            }
            let (_, x, closure) = best.expect("a proper subgroup misses some element");
            gens.push(x);
            current = closure;
        }
        gens
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(degree: usize, gens: &[&str]) -> GroupTable {
        let gens = gens.iter().map(|g| Perm::parse(degree, g).unwrap()).collect();
        let g = PermGroup::new(degree, gens).unwrap();
        GroupTable::from_group(&g, 10_000, "test").unwrap()
    }

    #[test]
    fn s3_table_basics() {
        let t = table(3, &["(1 2 3)", "(1 2)"]);
        assert_eq!(t.len(), 6);
        for a in 0..6 {
            assert_eq!(t.mul(a, t.inv(a)), 0);
            assert_eq!(t.mul(0, a), a);
        }
        assert_eq!(t.order_census(), BTreeMap::from([(1, 1), (2, 3), (3, 2)]));
        assert_eq!(t.derived_subgroup().count_ones(..), 3);
        assert!(!t.is_abelian());
        assert_eq!(t.generating_set().len(), 2);
    }

    #[test]
    fn cyclic_group_is_one_generated() {
        let t = table(6, &["(1 2 3 4 5 6)"]);
        assert_eq!(t.generating_set().len(), 1);
        assert!(t.is_abelian());
        assert_eq!(t.derived_subgroup().count_ones(..), 1);
    }

    #[test]
    fn limit_is_enforced() {
        let g = PermGroup::new(5, vec![Perm::parse(5, "(1 2 3 4 5)").unwrap(), Perm::parse(5, "(1 2)").unwrap()])
            .unwrap();
        let err = GroupTable::from_group(&g, 10, "lattice").unwrap_err();
        assert!(matches!(err, Error::TooLarge { order: 120, limit: 10, .. }));
    }
}
