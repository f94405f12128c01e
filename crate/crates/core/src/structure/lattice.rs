use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::Perm;
use crate::structure::quotient::QuotientGroup;
use crate::structure::table::GroupTable;

/// Default bound on the ambient order accepted by [`SubgroupLattice::build`].
pub const DEFAULT_LATTICE_LIMIT: u128 = 5040;

/// Index of a subgroup inside its [`SubgroupLattice`].
pub type SubgroupId = usize;

#[derive(Clone, Debug)]
pub struct Subgroup {
    bits: FixedBitSet,
    elements: Vec<u32>,
    generators: Vec<u32>,
    group: PermGroup,
}

impl Subgroup {
    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Ambient element indices, ascending (hence canonically sorted).
    pub fn elements(&self) -> &[u32] {
        &self.elements
    }

    pub fn generators(&self) -> &[u32] {
        &self.generators
    }

    pub fn bits(&self) -> &FixedBitSet {
        &self.bits
    }

    #[inline]
    pub fn contains(&self, x: u32) -> bool {
        self.bits.contains(x as usize)
    }
}

#[derive(Clone, Debug)]
pub struct ConjugacyClass {
    pub representative: SubgroupId,
    pub members: Vec<SubgroupId>,
}

/// Every subgroup of a small permutation group, with ambient conjugacy
/// classes.
///
/// Subgroups are sorted by order and then by their sorted element lists, so
/// the trivial group is id 0 and the ambient group is the last id. Each
/// class representative is the smallest id in its class.
#[derive(Debug)]
pub struct SubgroupLattice {
    ambient: PermGroup,
    table: Arc<GroupTable>,
    subgroups: Vec<Subgroup>,
    index: HashMap<FixedBitSet, SubgroupId>,
    classes: Vec<ConjugacyClass>,
    class_of: Vec<usize>,
    maximal: Vec<OnceLock<Vec<SubgroupId>>>,
    normalizers: Vec<OnceLock<SubgroupId>>,
}

struct Pending {
    bits: FixedBitSet,
    generators: Vec<u32>,
    class: usize,
}

impl SubgroupLattice {
    /// Enumerates all subgroups by generator extension.
    ///
    /// Seeds are the cyclic subgroups; each class representative `K` is then
    /// extended to `⟨K, g⟩` for every cyclic subgroup `⟨g⟩ ⊄ K`. Every new
    /// subgroup brings its whole conjugacy class along.
    pub fn build(ambient: &PermGroup, limit: u128) -> Result<SubgroupLattice> {
        let table = Arc::new(GroupTable::from_group(ambient, limit, "subgroup lattice")?);
        let n = table.len();
        let ambient_gens: Vec<u32> = ambient
            .generators()
            .iter()
            .map(|g| table.index_of(g).expect("generator is an element"))
            .collect();

        let mut pending: Vec<Pending> = Vec::new();
        let mut index: HashMap<FixedBitSet, usize> = HashMap::new();
        let mut class_reps: Vec<usize> = Vec::new();

        let add_class = |bits: FixedBitSet,
                             generators: Vec<u32>,
                             pending: &mut Vec<Pending>,
                             index: &mut HashMap<FixedBitSet, usize>,
                             class_reps: &mut Vec<usize>| {
            let class = class_reps.len();
            let first = pending.len();
            class_reps.push(first);
            index.insert(bits.clone(), first);
            pending.push(Pending {
                bits,
                generators,
                class,
            });
            let mut k = first;
            while k < pending.len() {
                for &s in &ambient_gens {
                    let bits = conjugate_bits(&table, s, &pending[k].bits);
                    if index.contains_key(&bits) {
                        continue;
                    }
                    let generators = pending[k]
                        .generators
                        .iter()
                        .map(|&x| table.conj(s, x))
                        .collect();
                    index.insert(bits.clone(), pending.len());
                    pending.push(Pending {
                        bits,
                        generators,
                        class,
                    });
                }
                k += 1;
            }
        };

        add_class(
            table.closure(&[]),
            Vec::new(),
            &mut pending,
            &mut index,
            &mut class_reps,
        );
        let mut cyclic: Vec<(u32, FixedBitSet)> = Vec::new();
        for x in 1..n as u32 {
            let bits = table.closure(&[x]);
            if !cyclic.iter().any(|(_, b)| *b == bits) {
                cyclic.push((x, bits.clone()));
            }
            if !index.contains_key(&bits) {
                add_class(bits, vec![x], &mut pending, &mut index, &mut class_reps);
            }
        }

        let mut c = 0;
        while c < class_reps.len() {
            let rep = class_reps[c];
            let rep_bits = pending[rep].bits.clone();
            let rep_gens = pending[rep].generators.clone();
            for (x, cbits) in &cyclic {
                if cbits.is_subset(&rep_bits) {
                    continue;
                }
                let mut gens = rep_gens.clone();
                gens.push(*x);
                let bits = table.closure(&gens);
                if !index.contains_key(&bits) {
                    add_class(bits, gens, &mut pending, &mut index, &mut class_reps);
                }
            }
            c += 1;
        }

        // Canonical order: by order, then by sorted element list.
        let mut keyed: Vec<(usize, Vec<u32>, usize)> = pending
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let elements: Vec<u32> = p.bits.ones().map(|x| x as u32).collect();
                (elements.len(), elements, i)
            })
            .collect();
        keyed.sort();
        let mut new_id = vec![0usize; pending.len()];
        for (id, (_, _, old)) in keyed.iter().enumerate() {
            new_id[*old] = id;
        }

        let mut class_members: Vec<Vec<SubgroupId>> = vec![Vec::new(); class_reps.len()];
        let mut subgroups = Vec::with_capacity(pending.len());
        let mut pending: Vec<Option<Pending>> = pending.into_iter().map(Some).collect();
        for (id, (_, elements, old)) in keyed.into_iter().enumerate() {
            let p = pending[old].take().unwrap();
            class_members[p.class].push(id);
            let gen_perms: Vec<Perm> = p
                .generators
                .iter()
                .map(|&x| table.element(x).clone())
                .collect();
            let mut group = PermGroup::with_cache_limit(ambient.degree(), gen_perms, 0)?;
            group.set_elements(elements.iter().map(|&x| table.element(x).clone()).collect());
            subgroups.push(Subgroup {
                bits: p.bits,
                elements,
                generators: p.generators,
                group,
            });
        }
        let index = index.into_iter().map(|(b, old)| (b, new_id[old])).collect();

        let mut classes: Vec<ConjugacyClass> = class_members
            .into_iter()
            .map(|members| ConjugacyClass {
                representative: members[0],
                members,
            })
            .collect();
        classes.sort_by_key(|c| c.representative);
        let mut class_of = vec![0; subgroups.len()];
        for (c, class) in classes.iter().enumerate() {
            for &m in &class.members {
                class_of[m] = c;
            }
        }

        let count = subgroups.len();
        Ok(SubgroupLattice {
            ambient: ambient.clone(),
            table,
            subgroups,
            index,
            classes,
            class_of,
            maximal: (0..count).map(|_| OnceLock::new()).collect(),
            normalizers: (0..count).map(|_| OnceLock::new()).collect(),
        })
    }

    pub fn ambient(&self) -> &PermGroup {
        &self.ambient
    }

    pub fn table(&self) -> &GroupTable {
        &self.table
    }

    pub(crate) fn shared_table(&self) -> Arc<GroupTable> {
        Arc::clone(&self.table)
    }

    pub fn len(&self) -> usize {
        self.subgroups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subgroups.is_empty()
    }

    pub fn subgroup(&self, id: SubgroupId) -> &Subgroup {
        &self.subgroups[id]
    }

    pub fn subgroups(&self) -> &[Subgroup] {
        &self.subgroups
    }

    pub fn group(&self, id: SubgroupId) -> &PermGroup {
        &self.subgroups[id].group
    }

    pub fn order(&self, id: SubgroupId) -> usize {
        self.subgroups[id].order()
    }

    pub fn trivial(&self) -> SubgroupId {
        0
    }

    pub fn whole(&self) -> SubgroupId {
        self.subgroups.len() - 1
    }

    pub fn classes(&self) -> &[ConjugacyClass] {
        &self.classes
    }

    pub fn class_of(&self, id: SubgroupId) -> usize {
        self.class_of[id]
    }

    pub fn class_representative(&self, id: SubgroupId) -> SubgroupId {
        self.classes[self.class_of[id]].representative
    }

    pub fn find(&self, bits: &FixedBitSet) -> Option<SubgroupId> {
        self.index.get(bits).copied()
    }

    /// Looks up an arbitrary permutation group among the lattice members.
    pub fn find_group(&self, group: &PermGroup) -> Result<SubgroupId> {
        if group.degree() != self.ambient.degree() {
            return Err(Error::DegreeMismatch {
                expected: self.ambient.degree(),
                found: group.degree(),
            });
        }
        let mut bits = FixedBitSet::with_capacity(self.table.len());
        for g in group.elements() {
            let x = self.table.index_of(&g).ok_or(Error::NotInLattice)?;
            bits.insert(x as usize);
        }
        self.find(&bits).ok_or(Error::NotInLattice)
    }

    pub fn element_index(&self, p: &Perm) -> Option<u32> {
        self.table.index_of(p)
    }

    fn lookup(&self, bits: &FixedBitSet) -> SubgroupId {
        *self
            .index
            .get(bits)
            .expect("lattice is closed under the subgroup operations")
    }

    /// `a ≤ b`.
    pub fn is_subgroup(&self, a: SubgroupId, b: SubgroupId) -> bool {
        self.subgroups[a].bits.is_subset(&self.subgroups[b].bits)
    }

    pub fn intersection(&self, a: SubgroupId, b: SubgroupId) -> SubgroupId {
        let mut bits = self.subgroups[a].bits.clone();
        bits.intersect_with(&self.subgroups[b].bits);
        self.lookup(&bits)
    }

    /// `⟨a, b⟩`.
    pub fn join(&self, a: SubgroupId, b: SubgroupId) -> SubgroupId {
        if self.is_subgroup(a, b) {
            return b;
        }
        if self.is_subgroup(b, a) {
            return a;
        }
        let mut gens = self.subgroups[a].generators.clone();
        gens.extend_from_slice(&self.subgroups[b].generators);
        self.lookup(&self.table.closure(&gens))
    }

    /// `g H g⁻¹` for an ambient element index `g`.
    pub fn conjugate(&self, id: SubgroupId, g: u32) -> SubgroupId {
        if g == 0 {
            return id;
        }
        self.lookup(&conjugate_bits(&self.table, g, &self.subgroups[id].bits))
    }

    pub fn normalizes(&self, g: u32, id: SubgroupId) -> bool {
        let sub = &self.subgroups[id];
        sub.generators
            .iter()
            .all(|&x| sub.contains(self.table.conj(g, x)))
    }

    /// `N_G(H)`.
    pub fn normalizer(&self, id: SubgroupId) -> SubgroupId {
        *self.normalizers[id].get_or_init(|| {
            let mut bits = FixedBitSet::with_capacity(self.table.len());
            for g in 0..self.table.len() as u32 {
                if self.normalizes(g, id) {
                    bits.insert(g as usize);
                }
            }
            self.lookup(&bits)
        })
    }

    /// `s ⊴ t`.
    pub fn is_normal(&self, s: SubgroupId, t: SubgroupId) -> bool {
        self.is_subgroup(s, t)
            && self.subgroups[t]
                .generators
                .iter()
                .all(|&g| self.normalizes(g, s))
    }

    /// All normal subgroups of `t`, in canonical order.
    pub fn normal_subgroups(&self, t: SubgroupId) -> Vec<SubgroupId> {
        let order = self.order(t);
        (0..self.subgroups.len())
            .filter(|&s| order % self.order(s) == 0 && self.is_normal(s, t))
            .collect()
    }

    /// Maximal proper subgroups of `t`.
    pub fn maximal_subgroups(&self, t: SubgroupId) -> &[SubgroupId] {
        self.maximal[t].get_or_init(|| {
            let order = self.order(t);
            let proper: Vec<SubgroupId> = (0..self.subgroups.len())
                .filter(|&m| {
                    m != t && order % self.order(m) == 0 && self.is_subgroup(m, t)
                })
                .collect();
            proper
                .iter()
                .copied()
                .filter(|&m| {
                    !proper
                        .iter()
                        .any(|&k| k != m && self.order(k) > self.order(m) && self.is_subgroup(m, k))
                })
                .collect()
        })
    }

    /// Intersection of the maximal subgroups of `t`; `t` itself when trivial.
    pub fn frattini(&self, t: SubgroupId) -> SubgroupId {
        let maximal = self.maximal_subgroups(t);
        if maximal.is_empty() {
            return t;
        }
        let mut bits = self.subgroups[t].bits.clone();
        for &m in maximal {
            bits.intersect_with(&self.subgroups[m].bits);
        }
        self.lookup(&bits)
    }

    /// Canonically smallest element of every double coset `B g T`, with the
    /// double coset size.
    pub fn double_coset_reps(&self, b: SubgroupId, t: SubgroupId) -> Vec<(u32, usize)> {
        let n = self.table.len();
        let mut seen = FixedBitSet::with_capacity(n);
        let mut out = Vec::new();
        for g in 0..n as u32 {
            if seen.contains(g as usize) {
                continue;
            }
            let mut size = 0;
            for &x in &self.subgroups[b].elements {
                let xg = self.table.mul(x, g);
                for &y in &self.subgroups[t].elements {
                    if !seen.put(self.table.mul(xg, y) as usize) {
                        size += 1;
                    }
                }
            }
            out.push((g, size));
        }
        out
    }

    /// Canonically smallest element of every left coset `gT` inside `n`.
    pub fn left_coset_reps(&self, n: SubgroupId, t: SubgroupId) -> Vec<u32> {
        let mut seen = FixedBitSet::with_capacity(self.table.len());
        let mut out = Vec::new();
        for &g in &self.subgroups[n].elements {
            if seen.contains(g as usize) {
                continue;
            }
            for &x in &self.subgroups[t].elements {
                seen.insert(self.table.mul(g, x) as usize);
            }
            out.push(g);
        }
        out
    }

    /// Quotient `t / s`; `s` must be normal in `t`.
    pub fn quotient(&self, t: SubgroupId, s: SubgroupId) -> Result<QuotientGroup> {
        if !self.is_normal(s, t) {
            return Err(Error::NotNormal(format!(
                "subgroup {s} (order {}) in subgroup {t} (order {})",
                self.order(s),
                self.order(t)
            )));
        }
        QuotientGroup::build(
            self.shared_table(),
            &self.subgroups[t].elements,
            &self.subgroups[t].generators,
            &self.subgroups[s].bits,
        )
    }
}

fn conjugate_bits(table: &GroupTable, g: u32, bits: &FixedBitSet) -> FixedBitSet {
    let mut out = FixedBitSet::with_capacity(table.len());
    for x in bits.ones() {
        out.insert(table.conj(g, x as u32) as usize);
    }
    out
}

/// Enumerates the subgroup lattice of `g`, refusing groups above `limit`.
pub fn subgroup_lattice(g: &PermGroup, limit: u128) -> Result<SubgroupLattice> {
    SubgroupLattice::build(g, limit)
}

/// Normal subgroups of a lattice member `t`, as permutation groups.
pub fn normal_subgroups(t: &PermGroup, lattice: &SubgroupLattice) -> Result<Vec<PermGroup>> {
    let id = lattice.find_group(t)?;
    Ok(lattice
        .normal_subgroups(id)
        .into_iter()
        .map(|s| lattice.group(s).clone())
        .collect())
}

/// Frattini subgroup of a lattice member `t`.
pub fn frattini(t: &PermGroup, lattice: &SubgroupLattice) -> Result<PermGroup> {
    let id = lattice.find_group(t)?;
    Ok(lattice.group(lattice.frattini(id)).clone())
}

/// Normal closure of the commutators of generator pairs.
pub fn derived_subgroup(g: &PermGroup) -> Result<PermGroup> {
    let gens = g.generators();
    let mut commutators: Vec<Perm> = Vec::new();
    for a in gens {
        for b in gens {
            let c = a.compose(b).compose(&a.inverse()).compose(&b.inverse());
            if !c.is_identity() {
                commutators.push(c);
            }
        }
    }
    let mut current = PermGroup::new(g.degree(), commutators.clone())?;
    loop {
        let mut grown = false;
        for s in gens {
            for c in current.generators().to_vec() {
                let x = s.conjugate(&c);
                if !current.contains(&x)? {
                    commutators.push(x);
                    grown = true;
                }
            }
        }
        if !grown {
            return Ok(current);
        }
        current = PermGroup::new(g.degree(), commutators.clone())?;
    }
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

    fn s3() -> PermGroup {
        group(3, &["(1 2 3)", "(1 2)"])
    }

    fn d8() -> PermGroup {
        group(4, &["(1 2 3 4)", "(1 4)(2 3)"])
    }

    #[test]
    fn s3_lattice() {
        let l = SubgroupLattice::build(&s3(), 100).unwrap();
        assert_eq!(l.len(), 6);
        assert_eq!(l.classes().len(), 4);
        assert_eq!(l.order(l.trivial()), 1);
        assert_eq!(l.order(l.whole()), 6);
        for class in l.classes() {
            assert_eq!(6 % class.members.len(), 0);
        }
    }

    #[test]
    fn c4_lattice() {
        let l = SubgroupLattice::build(&group(4, &["(1 2 3 4)"]), 100).unwrap();
        let orders: Vec<usize> = (0..l.len()).map(|i| l.order(i)).collect();
        assert_eq!(orders, vec![1, 2, 4]);
    }

    #[test]
    fn s5_has_a_unique_subgroup_of_order_60() {
        let s5 = group(5, &["(1 2 3 4 5)", "(1 2)"]);
        let l = SubgroupLattice::build(&s5, 5040).unwrap();
        assert_eq!(l.len(), 156);
        let a5: Vec<_> = (0..l.len()).filter(|&i| l.order(i) == 60).collect();
        assert_eq!(a5.len(), 1);
        assert!(l.is_normal(a5[0], l.whole()));
    }

    #[test]
    fn limit_error_names_the_limit() {
        let s5 = group(5, &["(1 2 3 4 5)", "(1 2)"]);
        let err = SubgroupLattice::build(&s5, 10).unwrap_err();
        assert_eq!(
            err.to_string(),
            "group too large for subgroup lattice: order 120 exceeds limit 10"
        );
    }

    #[test]
    fn normal_subgroup_counts() {
        let l = SubgroupLattice::build(&s3(), 100).unwrap();
        let orders: Vec<usize> = l
            .normal_subgroups(l.whole())
            .iter()
            .map(|&s| l.order(s))
            .collect();
        assert_eq!(orders, vec![1, 3, 6]);

        let a5 = group(5, &["(1 2 3)", "(3 4 5)"]);
        let l = SubgroupLattice::build(&a5, 100).unwrap();
        assert_eq!(l.normal_subgroups(l.whole()).len(), 2);

        let l = SubgroupLattice::build(&d8(), 100).unwrap();
        assert_eq!(l.len(), 10);
        assert_eq!(l.normal_subgroups(l.whole()).len(), 6);
    }

    #[test]
    fn frattini_subgroups() {
        let c4 = SubgroupLattice::build(&group(4, &["(1 2 3 4)"]), 100).unwrap();
        assert_eq!(c4.order(c4.frattini(c4.whole())), 2);
        let l = SubgroupLattice::build(&s3(), 100).unwrap();
        assert_eq!(l.frattini(l.whole()), l.trivial());
        assert_eq!(l.frattini(l.trivial()), l.trivial());
        let l = SubgroupLattice::build(&d8(), 100).unwrap();
        assert_eq!(l.maximal_subgroups(l.whole()).len(), 3);
        assert_eq!(l.order(l.frattini(l.whole())), 2);
        // the Frattini subgroup of D8 is its centre
        let phi = l.frattini(l.whole());
        assert!(l.group(phi).contains(&Perm::parse(4, "(1 3)(2 4)").unwrap()).unwrap());
    }

    #[test]
    fn derived_subgroups() {
        assert_eq!(derived_subgroup(&group(4, &["(1 2 3 4)"])).unwrap().order(), 1);
        assert_eq!(derived_subgroup(&s3()).unwrap().order(), 3);
        let d = derived_subgroup(&d8()).unwrap();
        assert_eq!(d.order(), 2);
        assert!(d.contains(&Perm::parse(4, "(1 3)(2 4)").unwrap()).unwrap());
    }

    #[test]
    fn lattice_closed_under_conjugation() {
        let l = SubgroupLattice::build(&d8(), 100).unwrap();
        for id in 0..l.len() {
            for g in 0..8 {
                let c = l.conjugate(id, g);
                assert_eq!(l.class_of(c), l.class_of(id));
            }
        }
    }

    #[test]
    fn free_function_wrappers() {
        let g = s3();
        let l = subgroup_lattice(&g, 100).unwrap();
        assert_eq!(normal_subgroups(&g, &l).unwrap().len(), 3);
        assert_eq!(frattini(&g, &l).unwrap().order(), 1);
        let stranger = group(3, &["(1 2)", "(2 3)", "(1 3)"]);
        assert_eq!(frattini(&stranger, &l).unwrap().order(), 1);
        let other = group(4, &["(1 2)"]);
        assert!(normal_subgroups(&other, &l).is_err());
    }
}
