//! Permutation groups with a deterministic stabilizer chain.

use std::collections::HashSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::Perm;

/// Groups at or below this order keep a sorted list of all their elements.
pub const DEFAULT_ELEMENT_CACHE_LIMIT: u128 = 20_000;

#[derive(Clone, Debug)]
struct Level {
    point: usize,
    /// `transversal[β]` maps the base point to `β`, for `β` in the basic orbit.
    transversal: Vec<Option<Perm>>,
    orbit: Vec<usize>,
}

/// Base and strong generating set built by the Schreier–Sims algorithm.
///
/// Base points are always the smallest point moved by the generator that
/// forced the new level, so the chain is reproducible run to run.
#[derive(Clone, Debug)]
pub struct StabChain {
    degree: usize,
    strong: Vec<Perm>,
    levels: Vec<Level>,
}

impl StabChain {
    fn new(degree: usize, generators: &[Perm]) -> StabChain {
        let mut chain = StabChain {
            degree,
            strong: Vec::new(),
            levels: Vec::new(),
        };
        for g in generators {
            if g.is_identity() || chain.strong.contains(g) {
                continue;
            }
            if chain.levels.iter().all(|l| g.apply(l.point) == l.point) {
                let point = g.smallest_moved_point().expect("non-identity");
                chain.push_level(point);
            }
            chain.strong.push(g.clone());
        }
        for l in 0..chain.levels.len() {
            chain.rebuild_level(l);
        }
        chain.complete();
        chain
    }

    fn push_level(&mut self, point: usize) {
        self.levels.push(Level {
            point,
            transversal: Vec::new(),
            orbit: Vec::new(),
        });
    }

    /// Strong generators fixing the first `level` base points.
    fn level_generators(&self, level: usize) -> Vec<usize> {
        (0..self.strong.len())
            .filter(|&s| {
                self.levels[..level]
                    .iter()
                    .all(|l| self.strong[s].apply(l.point) == l.point)
            })
            .collect()
    }

    fn rebuild_level(&mut self, level: usize) {
        let gens = self.level_generators(level);
        let point = self.levels[level].point;
        let mut transversal: Vec<Option<Perm>> = vec![None; self.degree];
        transversal[point] = Some(Perm::identity(self.degree));
        let mut orbit = vec![point];
        let mut k = 0;
        while k < orbit.len() {
            let beta = orbit[k];
            for &s in &gens {
                let gamma = self.strong[s].apply(beta);
                if transversal[gamma].is_none() {
                    let u = self.strong[s].compose(transversal[beta].as_ref().unwrap());
                    transversal[gamma] = Some(u);
                    orbit.push(gamma);
                }
            }
            k += 1;
        }
        self.levels[level].transversal = transversal;
        self.levels[level].orbit = orbit;
    }

    /// Sifts `g` through the levels starting at `from`. Returns the residue
    /// and the level at which sifting stopped (`levels.len()` if it passed
    /// every level).
    fn strip(&self, mut g: Perm, from: usize) -> (Perm, usize) {
        for (l, level) in self.levels.iter().enumerate().skip(from) {
            let beta = g.apply(level.point);
            match &level.transversal[beta] {
                Some(u) => g = u.inverse().compose(&g),
                None => return (g, l),
            }
        }
        (g, self.levels.len())
    }

    fn complete(&mut self) {
        let mut i = self.levels.len() as isize - 1;
        while i >= 0 {
            let level = i as usize;
            let gens = self.level_generators(level);
            let mut restart = None;
            'scan: for k in 0..self.levels[level].orbit.len() {
                let beta = self.levels[level].orbit[k];
                for &s in &gens {
                    let x = &self.strong[s];
                    let gamma = x.apply(beta);
                    let u_beta = self.levels[level].transversal[beta].as_ref().unwrap();
                    let u_gamma = self.levels[level].transversal[gamma].as_ref().unwrap();
                    let schreier = u_gamma.inverse().compose(&x.compose(u_beta));
                    let (residue, j) = self.strip(schreier, level + 1);
                    if j < self.levels.len() || !residue.is_identity() {
                        if j == self.levels.len() {
                            let point = residue.smallest_moved_point().expect("non-identity");
                            self.push_level(point);
                        }
                        self.strong.push(residue);
                        for l in 0..=j {
                            self.rebuild_level(l);
                        }
                        restart = Some(j);
                        break 'scan;
                    }
                }
            }
            match restart {
                Some(j) => i = j as isize,
                None => i -= 1,
            }
        }
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.point).collect()
    }

    pub fn transversal_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    fn order(&self) -> Result<u128> {
        self.levels.iter().try_fold(1u128, |acc, l| {
            acc.checked_mul(l.orbit.len() as u128)
                .ok_or_else(|| Error::Parse("group order overflows 128 bits".into()))
        })
    }

    fn contains(&self, g: &Perm) -> bool {
        let (residue, j) = self.strip(g.clone(), 0);
        j == self.levels.len() && residue.is_identity()
    }

    fn elements(&self) -> Vec<Perm> {
        let mut out = vec![Perm::identity(self.degree)];
        for level in self.levels.iter().rev() {
            let mut next = Vec::with_capacity(out.len() * level.orbit.len());
            for &beta in &level.orbit {
                let u = level.transversal[beta].as_ref().unwrap();
                next.extend(out.iter().map(|g| u.compose(g)));
            }
            out = next;
        }
        out.sort();
        out
    }
}

/// A permutation group on `degree` points.
#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    chain: StabChain,
    order: u128,
    elements: Option<Arc<Vec<Perm>>>,
}

/// One representative per double coset, with the double coset sizes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DoubleCosetDecomposition {
    #[serde(with = "perm_list")]
    pub representatives: Vec<Perm>,
    pub sizes: Vec<u128>,
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Perm>) -> Result<PermGroup> {
        PermGroup::with_cache_limit(degree, generators, DEFAULT_ELEMENT_CACHE_LIMIT)
    }

    pub fn with_cache_limit(
        degree: usize,
        generators: Vec<Perm>,
        cache_limit: u128,
    ) -> Result<PermGroup> {
        for g in &generators {
            check_degree(degree, g)?;
        }
        let chain = StabChain::new(degree, &generators);
        let order = chain.order()?;
        let elements = (order <= cache_limit).then(|| Arc::new(chain.elements()));
        Ok(PermGroup {
            degree,
            generators,
            chain,
            order,
            elements,
        })
    }

    /// Builds a group from its full, canonically sorted element list.
    ///
    /// The generating set is chosen greedily: walk the elements in canonical
    /// order and keep each one not already generated by the earlier picks.
    pub fn from_sorted_elements(degree: usize, elements: Vec<Perm>) -> Result<PermGroup> {
        let mut generators = Vec::new();
        let mut current = PermGroup::with_cache_limit(degree, Vec::new(), 0)?;
        for e in &elements {
            if current.order as usize == elements.len() {
                break;
            }
            if !current.chain.contains(e) {
                generators.push(e.clone());
                current = PermGroup::with_cache_limit(degree, generators.clone(), 0)?;
            }
        }
        if current.order as usize != elements.len() {
            return Err(Error::NotSubgroup(format!(
                "{} elements do not form a group (closure has order {})",
                elements.len(),
                current.order
            )));
        }
        current.elements = Some(Arc::new(elements));
        Ok(current)
    }

    pub(crate) fn set_elements(&mut self, elements: Vec<Perm>) {
        debug_assert_eq!(elements.len() as u128, self.order);
        self.elements = Some(Arc::new(elements));
    }

    pub fn trivial(degree: usize) -> PermGroup {
        PermGroup::new(degree, Vec::new()).expect("trivial group")
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn order(&self) -> u128 {
        self.order
    }

    pub fn chain(&self) -> &StabChain {
        &self.chain
    }

    /// Cached sorted element list, if the group is small enough to carry one.
    pub fn cached_elements(&self) -> Option<&[Perm]> {
        self.elements.as_deref().map(|v| v.as_slice())
    }

    /// All elements in canonical order, enumerating through the chain when
    /// they are not cached.
    pub fn elements(&self) -> Vec<Perm> {
        match &self.elements {
            Some(e) => e.as_ref().clone(),
            None => self.chain.elements(),
        }
    }

    pub fn contains(&self, p: &Perm) -> Result<bool> {
        check_degree(self.degree, p)?;
        Ok(self.chain.contains(p))
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> Result<bool> {
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                expected: other.degree,
                found: self.degree,
            });
        }
        Ok(self.generators.iter().all(|g| other.chain.contains(g)))
    }

    /// Equality as subgroups of the same symmetric group.
    pub fn same_subgroup(&self, other: &PermGroup) -> bool {
        self.degree == other.degree
            && self.order == other.order
            && self.generators.iter().all(|g| other.chain.contains(g))
    }

    pub fn is_normal_in(&self, other: &PermGroup) -> Result<bool> {
        if !self.is_subgroup_of(other)? {
            return Ok(false);
        }
        Ok(other
            .generators
            .iter()
            .all(|g| self.generators.iter().all(|s| self.chain.contains(&g.conjugate(s)))))
    }

    fn require_subgroup(&self, sub: &PermGroup, name: &str) -> Result<()> {
        if !sub.is_subgroup_of(self)? {
            return Err(Error::NotSubgroup(format!(
                "{name} (order {}) is not contained in the ambient group",
                sub.order
            )));
        }
        Ok(())
    }

    /// `{g ∈ self : g t g⁻¹ = t}`.
    pub fn normalizer(&self, t: &PermGroup) -> Result<PermGroup> {
        self.require_subgroup(t, "T")?;
        let elements: Vec<Perm> = self
            .elements()
            .into_iter()
            .filter(|g| t.generators.iter().all(|x| t.chain.contains(&g.conjugate(x))))
            .collect();
        PermGroup::from_sorted_elements(self.degree, elements)
    }

    /// Canonically smallest representative of each left coset `gT`.
    pub fn coset_reps(&self, t: &PermGroup) -> Result<Vec<Perm>> {
        self.require_subgroup(t, "T")?;
        let sub = t.elements();
        let mut seen = HashSet::new();
        let mut reps = Vec::new();
        for g in self.elements() {
            if seen.contains(&g) {
                continue;
            }
            for x in &sub {
                seen.insert(g.compose(x));
            }
            reps.push(g);
        }
        Ok(reps)
    }

    /// Canonically smallest representative of each double coset `BgT`.
    pub fn double_coset_reps(
        &self,
        b: &PermGroup,
        t: &PermGroup,
    ) -> Result<DoubleCosetDecomposition> {
        self.require_subgroup(b, "B")?;
        self.require_subgroup(t, "T")?;
        let left = b.elements();
        let right = t.elements();
        let mut seen = HashSet::new();
        let mut representatives = Vec::new();
        let mut sizes = Vec::new();
        for g in self.elements() {
            if seen.contains(&g) {
                continue;
            }
            let mut size = 0u128;
            for x in &left {
                let xg = x.compose(&g);
                for y in &right {
                    if seen.insert(xg.compose(y)) {
                        size += 1;
                    }
                }
            }
            representatives.push(g);
            sizes.push(size);
        }
        Ok(DoubleCosetDecomposition {
            representatives,
            sizes,
        })
    }

    /// `g T g⁻¹`.
    pub fn conjugate_subgroup(&self, g: &Perm) -> Result<PermGroup> {
        check_degree(self.degree, g)?;
        let generators = self.generators.iter().map(|x| g.conjugate(x)).collect();
        PermGroup::new(self.degree, generators)
    }
}

fn check_degree(degree: usize, p: &Perm) -> Result<()> {
    if p.degree() != degree {
        return Err(Error::DegreeMismatch {
            expected: degree,
            found: p.degree(),
        });
    }
    Ok(())
}

pub(crate) mod perm_list {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::perm::Perm;

    pub fn serialize<S: Serializer>(perms: &[Perm], s: S) -> Result<S::Ok, S::Error> {
        let text: Vec<String> = perms.iter().map(|p| p.to_string()).collect();
        text.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Perm>, D::Error> {
        let text: Vec<String> = Vec::deserialize(d)?;
        let degree = text
            .iter()
            .map(|t| Perm::max_point(t))
            .collect::<Result<Vec<_>, _>>()
            .map_err(serde::de::Error::custom)?
            .into_iter()
            .max()
            .unwrap_or(0);
        text.iter()
            .map(|t| Perm::parse(degree, t).map_err(serde::de::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(degree: usize, s: &str) -> Perm {
        Perm::parse(degree, s).unwrap()
    }

    fn s5() -> PermGroup {
        PermGroup::new(5, vec![p(5, "(1 2 3 4 5)"), p(5, "(1 2)")]).unwrap()
    }

    fn a5() -> PermGroup {
        PermGroup::new(5, vec![p(5, "(1 2 3)"), p(5, "(3 4 5)")]).unwrap()
    }

    #[test]
    fn orders() {
        assert_eq!(s5().order(), 120);
        assert_eq!(a5().order(), 60);
        assert_eq!(PermGroup::new(4, vec![]).unwrap().order(), 1);
    }

    #[test]
    fn chain_product_matches_order() {
        let g = s5();
        let product: usize = g.chain().transversal_sizes().iter().product();
        assert_eq!(product as u128, g.order());
        assert_eq!(g.chain().base()[0], 0);
    }

    #[test]
    fn membership() {
        let a = a5();
        assert!(!a.contains(&p(5, "(1 2)")).unwrap());
        assert!(a.contains(&Perm::identity(5)).unwrap());
        assert!(s5().contains(&p(5, "(1 2)(3 4)")).unwrap());
        assert!(matches!(
            a.contains(&Perm::identity(4)),
            Err(Error::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn degree_mismatch_on_build() {
        let err = PermGroup::new(5, vec![p(4, "(1 2)")]).unwrap_err();
        assert!(matches!(err, Error::DegreeMismatch { expected: 5, found: 4 }));
    }

    #[test]
    fn normalizers() {
        let s3 = PermGroup::new(3, vec![p(3, "(1 2 3)"), p(3, "(1 2)")]).unwrap();
        let t = PermGroup::new(3, vec![p(3, "(1 2)")]).unwrap();
        assert_eq!(s3.normalizer(&t).unwrap().order(), 2);
        assert!(s3.normalizer(&s3).unwrap().same_subgroup(&s3));
        assert!(s5().normalizer(&a5()).unwrap().same_subgroup(&s5()));
        let outside = PermGroup::new(5, vec![p(5, "(1 2)")]).unwrap();
        assert!(matches!(a5().normalizer(&outside), Err(Error::NotSubgroup(_))));
    }

    #[test]
    fn double_cosets() {
        let s3 = PermGroup::new(3, vec![p(3, "(1 2 3)"), p(3, "(1 2)")]).unwrap();
        let t = PermGroup::new(3, vec![p(3, "(1 2)")]).unwrap();
        let d = s3.double_coset_reps(&t, &t).unwrap();
        let mut sizes = d.sizes.clone();
        sizes.sort();
        assert_eq!(sizes, vec![2, 4]);
        assert!(d.representatives[0].is_identity());

        let whole = s3.double_coset_reps(&s3, &t).unwrap();
        assert_eq!(whole.representatives.len(), 1);

        let d = s5().double_coset_reps(&a5(), &a5()).unwrap();
        assert_eq!(d.sizes, vec![60, 60]);
    }

    #[test]
    fn cosets() {
        let c4 = PermGroup::new(4, vec![p(4, "(1 2 3 4)")]).unwrap();
        let c2 = PermGroup::new(4, vec![p(4, "(1 3)(2 4)")]).unwrap();
        assert_eq!(c4.coset_reps(&c2).unwrap().len(), 2);
        assert_eq!(c4.coset_reps(&c4).unwrap(), vec![Perm::identity(4)]);
        let s3 = PermGroup::new(3, vec![p(3, "(1 2 3)"), p(3, "(1 2)")]).unwrap();
        let a3 = PermGroup::new(3, vec![p(3, "(1 2 3)")]).unwrap();
        assert_eq!(s3.coset_reps(&a3).unwrap().len(), 2);
    }

    #[test]
    fn conjugate_subgroups() {
        let t = PermGroup::new(3, vec![p(3, "(1 2)")]).unwrap();
        let c = t.conjugate_subgroup(&p(3, "(2 3)")).unwrap();
        assert!(c.contains(&p(3, "(1 3)")).unwrap());
        assert_eq!(c.order(), 2);
        assert!(t.conjugate_subgroup(&Perm::identity(3)).unwrap().same_subgroup(&t));
    }

    #[test]
    fn greedy_generators_from_elements() {
        let g = PermGroup::from_sorted_elements(5, a5().elements()).unwrap();
        assert_eq!(g.order(), 60);
        assert!(g.generators().len() <= 3);
        assert!(PermGroup::from_sorted_elements(3, vec![Perm::identity(3), p(3, "(1 2 3)")])
            .is_err());
    }
}
