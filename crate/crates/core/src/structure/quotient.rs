use std::collections::HashMap;
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::Perm;
use crate::structure::table::GroupTable;

/// `T/S` realized as the action of `T` on the left cosets of `S`.
///
/// Cosets are numbered by their smallest element, so coset 0 is `S`
/// itself. Element `c` of [`QuotientGroup::table`] is coset `c`, and its
/// permutation is left multiplication by that coset.
#[derive(Clone, Debug)]
pub struct QuotientGroup {
    ambient: Arc<GroupTable>,
    coset_reps: Vec<u32>,
    coset_of: Vec<u32>,
    kernel_order: usize,
    table: GroupTable,
    perm_rep: PermGroup,
}

impl QuotientGroup {
    /// `t_elements` must be ascending and `s_bits` normal in the group they
    /// form; the caller checks normality.
    pub(crate) fn build(
        ambient: Arc<GroupTable>,
        t_elements: &[u32],
        t_generators: &[u32],
        s_bits: &FixedBitSet,
    ) -> Result<QuotientGroup> {
        let s_elements: Vec<u32> = s_bits.ones().map(|x| x as u32).collect();
        if t_elements.len() % s_elements.len() != 0 {
            return Err(Error::NotNormal("kernel order does not divide".into()));
        }
        let mut coset_of = vec![u32::MAX; ambient.len()];
        let mut coset_reps = Vec::new();
        for &x in t_elements {
            if coset_of[x as usize] != u32::MAX {
                continue;
            }
            let c = coset_reps.len() as u32;
            coset_reps.push(x);
            for &s in &s_elements {
                coset_of[ambient.mul(x, s) as usize] = c;
            }
        }
        let m = coset_reps.len();
        let mut mul = vec![0u32; m * m];
        for a in 0..m {
            for b in 0..m {
                mul[a * m + b] = coset_of[ambient.mul(coset_reps[a], coset_reps[b]) as usize];
            }
        }
        let perms: Vec<Perm> = (0..m)
            .map(|a| Perm::from_images(mul[a * m..(a + 1) * m].to_vec()))
            .collect::<Result<_>>()
            .map_err(|_| Error::NotNormal("cosets do not multiply".into()))?;
        let lookup: HashMap<Perm, u32> = perms
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i as u32))
            .collect();
        let gens: Vec<Perm> = t_generators
            .iter()
            .map(|&g| perms[coset_of[g as usize] as usize].clone())
            .filter(|p| !p.is_identity())
            .collect();
        let perm_rep = PermGroup::new(m, gens)?;
        let table = GroupTable::from_parts(perms, lookup, mul);
        Ok(QuotientGroup {
            ambient,
            coset_reps,
            coset_of,
            kernel_order: s_elements.len(),
            table,
            perm_rep,
        })
    }

    /// `[T:S]`.
    pub fn order(&self) -> usize {
        self.coset_reps.len()
    }

    pub fn kernel_order(&self) -> usize {
        self.kernel_order
    }

    /// Multiplication table indexed by coset number.
    pub fn table(&self) -> &GroupTable {
        &self.table
    }

    /// Faithful permutation representation of degree `[T:S]`.
    pub fn perm_rep(&self) -> &PermGroup {
        &self.perm_rep
    }

    /// Coset number of an ambient element index, if it lies in `T`.
    pub fn project_index(&self, x: u32) -> Option<u32> {
        match self.coset_of[x as usize] {
            u32::MAX => None,
            c => Some(c),
        }
    }

    /// Image of an element of `T` in [`QuotientGroup::perm_rep`].
    pub fn project(&self, t: &Perm) -> Option<Perm> {
        let x = self.ambient.index_of(t)?;
        let c = self.project_index(x)?;
        Some(self.table.element(c).clone())
    }

    /// Smallest element of coset `c`, as an ambient element index.
    pub fn lift_index(&self, c: u32) -> u32 {
        self.coset_reps[c as usize]
    }

    /// Smallest element of the coset acting as `p`.
    pub fn lift(&self, p: &Perm) -> Option<Perm> {
        let c = self.table.index_of(p)?;
        Some(self.ambient.element(self.lift_index(c)).clone())
    }
}

#[cfg(test)]
mod tests {
    use crate::group::PermGroup;
    use crate::perm::Perm;
    use crate::structure::lattice::SubgroupLattice;

    fn lattice(degree: usize, gens: &[&str]) -> SubgroupLattice {
        let g = PermGroup::new(
            degree,
            gens.iter().map(|g| Perm::parse(degree, g).unwrap()).collect(),
        )
        .unwrap();
        SubgroupLattice::build(&g, 1000).unwrap()
    }

    #[test]
    fn quotient_by_trivial_is_isomorphic() {
        let l = lattice(3, &["(1 2 3)", "(1 2)"]);
        let q = l.quotient(l.whole(), l.trivial()).unwrap();
        assert_eq!(q.order(), 6);
        assert_eq!(q.perm_rep().order(), 6);
    }

    #[test]
    fn d8_mod_centre_is_klein() {
        let l = lattice(4, &["(1 2 3 4)", "(1 4)(2 3)"]);
        let z = l.frattini(l.whole());
        let q = l.quotient(l.whole(), z).unwrap();
        assert_eq!(q.order(), 4);
        assert_eq!(q.perm_rep().order(), 4);
        for c in 0..4 {
            assert_eq!(q.table().mul(c, c), 0);
        }
        // kernel of the projection is exactly the centre
        let table = l.table();
        for x in 0..8u32 {
            let in_kernel = q.project_index(x) == Some(0);
            assert_eq!(in_kernel, l.subgroup(z).contains(x));
            let p = q.project(table.element(x)).unwrap();
            let back = q.lift(&p).unwrap();
            assert_eq!(q.project_index(table.index_of(&back).unwrap()), q.project_index(x));
        }
        // projection is multiplicative
        for a in 0..8u32 {
            for b in 0..8u32 {
                let ab = q.project_index(table.mul(a, b)).unwrap();
                let pa = q.project_index(a).unwrap();
                let pb = q.project_index(b).unwrap();
                assert_eq!(ab, q.table().mul(pa, pb));
            }
        }
    }

    #[test]
    fn s5_mod_a5_has_order_two() {
        let l = lattice(5, &["(1 2 3 4 5)", "(1 2)"]);
        let a5 = (0..l.len()).find(|&i| l.order(i) == 60).unwrap();
        let q = l.quotient(l.whole(), a5).unwrap();
        assert_eq!(q.order(), 2);
        assert_eq!(q.perm_rep().order(), 2);
    }

    #[test]
    fn non_normal_is_rejected() {
        let l = lattice(3, &["(1 2 3)", "(1 2)"]);
        let c2 = (0..l.len()).find(|&i| l.order(i) == 2).unwrap();
        assert!(l.quotient(l.whole(), c2).is_err());
    }
}
