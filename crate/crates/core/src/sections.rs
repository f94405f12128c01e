//! Sections `(T, S)` of a lattice group, their conjugacy orbits, linking,
//! minimality and the action of section normalizers on `T/S`.

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::structure::iso::{find_table_isomorphism, GroupIso};
use crate::structure::lattice::{SubgroupId, SubgroupLattice};
use crate::structure::out::OutGroup;
use crate::structure::quotient::QuotientGroup;

/// A pair of lattice members `S ⊴ T`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Section {
    pub top: SubgroupId,
    pub bottom: SubgroupId,
}

impl Section {
    pub fn new(lattice: &SubgroupLattice, top: SubgroupId, bottom: SubgroupId) -> Result<Section> {
        if !lattice.is_normal(bottom, top) {
            return Err(Error::NotNormal(format!(
                "subgroup {bottom} is not normal in subgroup {top}"
            )));
        }
        Ok(Section { top, bottom })
    }

    /// `|T/S|`.
    pub fn index(&self, lattice: &SubgroupLattice) -> usize {
        lattice.order(self.top) / lattice.order(self.bottom)
    }

    /// `(g T g⁻¹, g S g⁻¹)`.
    pub fn conjugate(&self, lattice: &SubgroupLattice, g: u32) -> Section {
        Section {
            top: lattice.conjugate(self.top, g),
            bottom: lattice.conjugate(self.bottom, g),
        }
    }

    pub fn quotient(&self, lattice: &SubgroupLattice) -> Result<QuotientGroup> {
        lattice.quotient(self.top, self.bottom)
    }
}

/// One `G`-conjugacy class of sections with `T/S ≅ H`.
#[derive(Debug)]
pub struct SectionOrbit {
    pub rep: Section,
    pub quotient: QuotientGroup,
    /// `H → T/S`, from `H`'s table to coset numbers of `quotient`.
    pub sigma: GroupIso,
    sigma_inv: Vec<u32>,
    pub orbit_size: usize,
    pub minimal: bool,
    /// `N_G(T, S)`.
    pub normalizer: SubgroupId,
    /// Smallest element of each coset of `T` in `N_G(T, S)`.
    pub nbar_reps: Vec<u32>,
    /// Class in `Out(H)` of the automorphism induced by each `nbar_reps`
    /// entry.
    pub gamma: Vec<usize>,
}

impl SectionOrbit {
    /// `σ⁻¹` on coset numbers.
    pub fn sigma_inverse(&self, coset: u32) -> u32 {
        self.sigma_inv[coset as usize]
    }

    /// Distinct classes hit by `gamma`, i.e. `Γ_G(T, S)`.
    pub fn gamma_image(&self) -> Vec<usize> {
        let mut image = self.gamma.clone();
        image.sort_unstable();
        image.dedup();
        image
    }
}

/// `(a.T, a.S) ⪯ (b.T, b.S)`: `a.T ≤ b.T`, `a.T · b.S = b.T` and
/// `a.T ∩ b.S = a.S`.
pub fn preceq(lattice: &SubgroupLattice, a: Section, b: Section) -> bool {
    if !lattice.is_subgroup(a.top, b.top) {
        return false;
    }
    let meet = lattice.intersection(a.top, b.bottom);
    let product = lattice.order(a.top) * lattice.order(b.bottom) / lattice.order(meet);
    product == lattice.order(b.top) && meet == a.bottom
}

fn count_and(x: &FixedBitSet, y: &FixedBitSet) -> usize {
    x.intersection(y).count()
}

/// The linking test in product form: `|B/A| = |T/S|`, `S(B∩T) = T` and
/// `A∩T ≤ S`, where `from = (T, S)` and `to = (B, A)`.
pub fn is_linked(lattice: &SubgroupLattice, from: Section, to: Section) -> bool {
    if from.index(lattice) != to.index(lattice) {
        return false;
    }
    let t = lattice.subgroup(from.top).bits();
    let s = lattice.subgroup(from.bottom).bits();
    let b = lattice.subgroup(to.top).bits();
    let a = lattice.subgroup(to.bottom).bits();
    let bt = count_and(b, t);
    let bts = b.intersection(t).filter(|&x| s.contains(x)).count();
    if lattice.order(from.bottom) * bt / bts != lattice.order(from.top) {
        return false;
    }
    let at = count_and(a, t);
    let ats = a.intersection(t).filter(|&x| s.contains(x)).count();
    at == ats
}

/// A linking together with its induced isomorphism `xS ↦ xA`, recorded on
/// coset numbers of the two quotients.
#[derive(Clone, Debug)]
pub struct Linking {
    pub from: Section,
    pub to: Section,
    pub coset_map: Vec<u32>,
}

/// Links `from` to `to` when the linking test passes.
pub fn linked(lattice: &SubgroupLattice, from: Section, to: Section) -> Result<Option<Linking>> {
    let from_q = from.quotient(lattice)?;
    let to_q = to.quotient(lattice)?;
    Ok(conjugated_link(lattice, from, &from_q, to, &to_q, 0).map(|coset_map| Linking {
        from,
        to,
        coset_map,
    }))
}

/// `φ ∘ Conj_g` as a coset map `T/S → B/A` when `g(T, S)g⁻¹` is linked to
/// `to = (B, A)`.
///
/// Works on the `T` side: with `B' = g⁻¹Bg`, each `w ∈ B' ∩ T` sends the
/// coset `wS` to `(g w g⁻¹) A`.
pub(crate) fn conjugated_link(
    lattice: &SubgroupLattice,
    from: Section,
    from_q: &QuotientGroup,
    to: Section,
    to_q: &QuotientGroup,
    g: u32,
) -> Option<Vec<u32>> {
    let table = lattice.table();
    let g_inv = table.inv(g);
    let pulled = to.conjugate(lattice, g_inv);
    if !is_linked(lattice, from, pulled) {
        return None;
    }
    let m = from_q.order();
    let mut map = vec![u32::MAX; m];
    let mut filled = 0;
    let t = lattice.subgroup(from.top).bits();
    for w in lattice.subgroup(pulled.top).bits().intersection(t) {
        let c = from_q.project_index(w as u32).expect("w lies in T") as usize;
        if map[c] == u32::MAX {
            let y = table.conj(g, w as u32);
            map[c] = to_q.project_index(y).expect("g w g⁻¹ lies in B");
            filled += 1;
            if filled == m {
                break;
            }
        }
    }
    debug_assert_eq!(filled, m);
    Some(map)
}

/// `S ≤ Φ(T)`.
pub fn is_minimal(lattice: &SubgroupLattice, sec: Section) -> bool {
    lattice.is_subgroup(sec.bottom, lattice.frattini(sec.top))
}

/// `N_G(T) ∩ N_G(S)`.
pub fn section_normalizer(lattice: &SubgroupLattice, sec: Section) -> SubgroupId {
    let nt = lattice.normalizer(sec.top);
    let mut bits = FixedBitSet::with_capacity(lattice.table().len());
    for &g in lattice.subgroup(nt).elements() {
        if lattice.normalizes(g, sec.bottom) {
            bits.insert(g as usize);
        }
    }
    lattice.find(&bits).expect("normalizers are subgroups")
}

/// Out class of `σ⁻¹ ∘ Conj_g ∘ σ` for each coset representative `g` of `T`
/// in `N_G(T, S)`.
pub fn gamma_map(
    lattice: &SubgroupLattice,
    quotient: &QuotientGroup,
    sigma: &GroupIso,
    nbar_reps: &[u32],
    out: &OutGroup,
) -> Result<Vec<usize>> {
    let table = lattice.table();
    let sigma_inv = sigma.inverse_map();
    nbar_reps
        .iter()
        .map(|&g| {
            let images: Vec<u32> = out
                .generators()
                .iter()
                .map(|&h| {
                    let x = quotient.lift_index(sigma.apply(h));
                    let c = quotient
                        .project_index(table.conj(g, x))
                        .expect("g normalizes T");
                    sigma_inv[c as usize]
                })
                .collect();
            out.class_of_images(&images)
        })
        .collect()
}

/// One orbit per `G`-class of sections `(T, S)` with `T/S ≅ H`, ordered by
/// `(T, S)` lattice ids. Each representative `T` is its class
/// representative and `S` is the smallest id in its `N_G(T)`-class.
pub fn enumerate_section_orbits(
    lattice: &SubgroupLattice,
    out: &OutGroup,
) -> Result<Vec<SectionOrbit>> {
    let h = out.table();
    let h_order = h.len();
    let g_order = lattice.table().len();
    let mut orbits = Vec::new();
    for class in lattice.classes() {
        let t = class.representative;
        let t_order = lattice.order(t);
        if t_order % h_order != 0 {
            continue;
        }
        let s_order = t_order / h_order;
        let nt = lattice.normalizer(t);
        let nt_gens = lattice.subgroup(nt).generators().to_vec();
        let candidates: Vec<SubgroupId> = (0..lattice.len())
            .filter(|&s| lattice.order(s) == s_order && lattice.is_normal(s, t))
            .collect();
        let mut seen = FixedBitSet::with_capacity(lattice.len());
        for &s in &candidates {
            if seen.contains(s) {
                continue;
            }
            let mut queue = vec![s];
            seen.insert(s);
            while let Some(x) = queue.pop() {
                for &g in &nt_gens {
                    let y = lattice.conjugate(x, g);
                    if !seen.put(y) {
                        queue.push(y);
                    }
                }
            }
            let rep = Section { top: t, bottom: s };
            let quotient = rep.quotient(lattice)?;
            let Some(sigma) = find_table_isomorphism(h, quotient.table()) else {
                continue;
            };
            let sigma_inv = sigma.inverse_map();
            let normalizer = section_normalizer(lattice, rep);
            let nbar_reps = lattice.left_coset_reps(normalizer, t);
            let gamma = gamma_map(lattice, &quotient, &sigma, &nbar_reps, out)?;
            orbits.push(SectionOrbit {
                rep,
                minimal: is_minimal(lattice, rep),
                orbit_size: g_order / lattice.order(normalizer),
                quotient,
                sigma,
                sigma_inv,
                normalizer,
                nbar_reps,
                gamma,
            });
        }
    }
    Ok(orbits)
}

/// `S` is expansive when for every `g ∉ N_G(S)` some normal subgroup `M` of
/// `N_G(S)` satisfies `S < M ≤ S(gSg⁻¹ ∩ N_G(S))`.
pub fn is_expansive(lattice: &SubgroupLattice, s: SubgroupId) -> bool {
    let n = lattice.normalizer(s);
    let normals = lattice.normal_subgroups(n);
    lattice.double_coset_reps(n, n).into_iter().all(|(g, _)| {
        if lattice.subgroup(n).contains(g) {
            return true;
        }
        let meet = lattice.intersection(lattice.conjugate(s, g), n);
        let product = lattice.join(s, meet);
        normals
            .iter()
            .any(|&m| m != s && lattice.is_subgroup(s, m) && lattice.is_subgroup(m, product))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::PermGroup;
    use crate::perm::Perm;
    use crate::structure::out::out_group;

    fn group(degree: usize, gens: &[&str]) -> PermGroup {
        PermGroup::new(
            degree,
            gens.iter().map(|g| Perm::parse(degree, g).unwrap()).collect(),
        )
        .unwrap()
    }

    fn setup(g: &PermGroup, h: &PermGroup) -> (SubgroupLattice, OutGroup) {
        (SubgroupLattice::build(g, 5040).unwrap(), out_group(h, 720).unwrap())
    }

    fn c4() -> PermGroup {
        group(4, &["(1 2 3 4)"])
    }

    fn c2() -> PermGroup {
        group(2, &["(1 2)"])
    }

    fn by_order(l: &SubgroupLattice, order: usize) -> Vec<SubgroupId> {
        (0..l.len()).filter(|&i| l.order(i) == order).collect()
    }

    #[test]
    fn a5_sections_of_s5() {
        let s5 = group(5, &["(1 2 3 4 5)", "(1 2)"]);
        let a5 = group(5, &["(1 2 3)", "(3 4 5)"]);
        let (l, out) = setup(&s5, &a5);
        let orbits = enumerate_section_orbits(&l, &out).unwrap();
        assert_eq!(orbits.len(), 1);
        let o = &orbits[0];
        assert_eq!(l.order(o.rep.top), 60);
        assert_eq!(o.rep.bottom, l.trivial());
        assert!(o.minimal);
        assert_eq!(o.normalizer, l.whole());
        assert_eq!(o.gamma_image(), vec![0, 1]);
        assert_eq!(o.gamma, vec![0, 1]);
    }

    #[test]
    fn c2_sections_of_c4() {
        let (l, out) = setup(&c4(), &c2());
        let orbits = enumerate_section_orbits(&l, &out).unwrap();
        let shapes: Vec<(usize, usize)> = orbits
            .iter()
            .map(|o| (l.order(o.rep.top), l.order(o.rep.bottom)))
            .collect();
        assert_eq!(shapes, vec![(2, 1), (4, 2)]);
        assert!(orbits.iter().all(|o| o.minimal));
        // C4 is abelian so conjugation acts trivially
        let small = &orbits[0];
        assert_eq!(small.gamma, vec![0, 0]);
    }

    #[test]
    fn lagrange_rules_out_c3_in_c4() {
        let (l, out) = setup(&c4(), &group(3, &["(1 2 3)"]));
        assert!(enumerate_section_orbits(&l, &out).unwrap().is_empty());
    }

    #[test]
    fn preceq_examples() {
        let l = SubgroupLattice::build(&c4(), 100).unwrap();
        let full = Section { top: 2, bottom: 1 };
        let small = Section { top: 1, bottom: 0 };
        assert!(preceq(&l, full, full));
        assert!(!preceq(&l, small, full));

        let l = SubgroupLattice::build(&group(3, &["(1 2 3)", "(1 2)"]), 100).unwrap();
        let a3 = by_order(&l, 3)[0];
        let t = l
            .find_group(&group(3, &["(1 2)"]))
            .unwrap();
        assert!(preceq(
            &l,
            Section { top: t, bottom: l.trivial() },
            Section { top: l.whole(), bottom: a3 }
        ));
    }

    #[test]
    fn linking_examples() {
        let l = SubgroupLattice::build(&c4(), 100).unwrap();
        let full = Section { top: 2, bottom: 1 };
        let small = Section { top: 1, bottom: 0 };
        let identity = linked(&l, full, full).unwrap().unwrap();
        assert_eq!(identity.coset_map, vec![0, 1]);
        assert!(linked(&l, full, small).unwrap().is_none());
        assert!(linked(&l, small, full).unwrap().is_none());
    }

    #[test]
    fn minimality() {
        let l = SubgroupLattice::build(&c4(), 100).unwrap();
        assert!(is_minimal(&l, Section { top: 2, bottom: 1 }));
        assert!(is_minimal(&l, Section { top: 2, bottom: 0 }));
        let l = SubgroupLattice::build(&group(3, &["(1 2 3)", "(1 2)"]), 100).unwrap();
        let a3 = by_order(&l, 3)[0];
        assert!(!is_minimal(&l, Section { top: l.whole(), bottom: a3 }));
    }

    #[test]
    fn section_normalizers() {
        let s3 = group(3, &["(1 2 3)", "(1 2)"]);
        let l = SubgroupLattice::build(&s3, 100).unwrap();
        let whole = Section { top: l.whole(), bottom: l.trivial() };
        assert_eq!(section_normalizer(&l, whole), l.whole());
        let t = l.find_group(&group(3, &["(1 2)"])).unwrap();
        assert_eq!(section_normalizer(&l, Section { top: t, bottom: 0 }), t);
    }

    #[test]
    fn expansive_examples() {
        let s3 = group(3, &["(1 2 3)", "(1 2)"]);
        let l = SubgroupLattice::build(&s3, 100).unwrap();
        for s in l.normal_subgroups(l.whole()) {
            assert!(is_expansive(&l, s));
        }
        let t = l.find_group(&group(3, &["(1 2)"])).unwrap();
        assert!(!is_expansive(&l, t));
        let a5 = group(5, &["(1 2 3)", "(3 4 5)"]);
        let l = SubgroupLattice::build(&a5, 100).unwrap();
        // the trivial subgroup is normal, so the condition is vacuous
        assert!(is_expansive(&l, l.trivial()));
    }
}
