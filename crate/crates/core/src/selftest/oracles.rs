//! Brute-force checks that work on explicit element sets, independent of the
//! lattice and double-coset code they validate. Each returns the number of
//! individual comparisons made, or a description of the first mismatch.

use std::collections::BTreeSet;

use crate::group::PermGroup;
use crate::perm::Perm;
use crate::sections::{is_linked, Section, SectionOrbit};
use crate::structure::iso::find_table_isomorphism;
use crate::structure::lattice::{SubgroupId, SubgroupLattice};
use crate::structure::out::OutGroup;

type Set = BTreeSet<Perm>;

/// Closure of `gens` under multiplication.
fn generate<'a>(degree: usize, gens: impl IntoIterator<Item = &'a Perm>) -> Set {
    let gens: Vec<&Perm> = gens.into_iter().collect();
    let mut set = Set::new();
    let mut frontier = vec![Perm::identity(degree)];
    set.insert(Perm::identity(degree));
    while let Some(x) = frontier.pop() {
        for g in &gens {
            let y = x.compose(g);
            if set.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    set
}

fn product(a: &Set, b: &Set) -> Set {
    a.iter().flat_map(|x| b.iter().map(move |y| x.compose(y))).collect()
}

fn elements(l: &SubgroupLattice, id: SubgroupId) -> Set {
    l.subgroup(id)
        .elements()
        .iter()
        .map(|&x| l.table().element(x).clone())
        .collect()
}

fn conjugate_set(g: &Perm, s: &Set) -> Set {
    s.iter().map(|x| g.conjugate(x)).collect()
}

/// Every subgroup is a join of cyclic subgroups, so closing the cyclic ones
/// under joins with cyclic ones finds them all.
pub fn lattice_completeness(g: &PermGroup, l: &SubgroupLattice) -> Result<usize, String> {
    let degree = g.degree();
    let all = g.elements();
    let cyclic: BTreeSet<Set> = all.iter().map(|x| generate(degree, [x])).collect();
    let mut found: BTreeSet<Set> = cyclic.clone();
    let mut queue: Vec<Set> = cyclic.iter().cloned().collect();
    while let Some(a) = queue.pop() {
        for c in &cyclic {
            if c.is_subset(&a) {
                continue;
            }
            let joined = generate(degree, a.iter().chain(c.iter()));
            if found.insert(joined.clone()) {
                queue.push(joined);
            }
        }
    }
    let listed: BTreeSet<Set> = (0..l.len()).map(|id| elements(l, id)).collect();
    if listed.len() != l.len() {
        return Err(format!("lattice lists {} subgroups with repeats", l.len()));
    }
    if listed != found {
        return Err(format!(
            "lattice has {} subgroups, brute force finds {}",
            listed.len(),
            found.len()
        ));
    }
    Ok(found.len())
}

/// `B\G/T` representatives: the double cosets they give are disjoint, cover
/// `G`, and have the recorded sizes.
pub fn double_coset_partition(
    l: &SubgroupLattice,
    b: SubgroupId,
    t: SubgroupId,
) -> Result<usize, String> {
    let bs = elements(l, b);
    let ts = elements(l, t);
    let mut covered = Set::new();
    let reps = l.double_coset_reps(b, t);
    for &(g, size) in &reps {
        let g = l.table().element(g).clone();
        let dc = product(&product(&bs, &[g].into()), &ts);
        if dc.len() != size {
            return Err(format!("double coset of size {} recorded as {size}", dc.len()));
        }
        if !covered.is_disjoint(&dc) {
            return Err("double cosets overlap".into());
        }
        covered.extend(dc);
    }
    if covered.len() != l.table().len() {
        return Err(format!(
            "double cosets cover {} of {} elements",
            covered.len(),
            l.table().len()
        ));
    }
    Ok(reps.len())
}

/// Linking by its defining conditions on element sets: `|B/A| = |T/S|`,
/// `S(B∩T) = T` and `S(A∩T) = S`.
fn linked_by_elements(l: &SubgroupLattice, from: Section, to: Section) -> bool {
    let (t, s) = (elements(l, from.top), elements(l, from.bottom));
    let (b, a) = (elements(l, to.top), elements(l, to.bottom));
    if b.len() * s.len() != t.len() * a.len() {
        return false;
    }
    let bt: Set = b.intersection(&t).cloned().collect();
    let at: Set = a.intersection(&t).cloned().collect();
    product(&s, &bt) == t && product(&s, &at) == s
}

/// Linking is symmetric and matches its element-set definition.
pub fn linking_symmetry(l: &SubgroupLattice, sections: &[Section]) -> Result<usize, String> {
    let mut checks = 0;
    for &x in sections {
        for &y in sections {
            let forward = is_linked(l, x, y);
            if forward != is_linked(l, y, x) {
                return Err(format!("linking of {x:?} and {y:?} is not symmetric"));
            }
            if forward != linked_by_elements(l, x, y) {
                return Err(format!("linking of {x:?} and {y:?} disagrees with its definition"));
            }
            checks += 1;
        }
    }
    Ok(checks)
}

/// Every section with quotient isomorphic to `H` is conjugate to exactly one
/// orbit representative, and orbit sizes count the conjugates. Returns all
/// such sections.
pub fn orbit_partition(
    l: &SubgroupLattice,
    out: &OutGroup,
    orbits: &[SectionOrbit],
) -> Result<Vec<Section>, String> {
    let h = out.table();
    let mut sigma = Vec::new();
    for t in 0..l.len() {
        for s in 0..l.len() {
            if l.order(t) != h.len() * l.order(s) || !l.is_subgroup(s, t) {
                continue;
            }
            let (ts, ss) = (elements(l, t), elements(l, s));
            if ts.iter().any(|x| conjugate_set(x, &ss) != ss) {
                continue;
            }
            let q = l.quotient(t, s).map_err(|e| e.to_string())?;
            if find_table_isomorphism(h, q.table()).is_some() {
                sigma.push(Section { top: t, bottom: s });
            }
        }
    }
    let all = l.ambient().elements();
    let conjugates = |sec: Section| -> BTreeSet<(Set, Set)> {
        let (t, s) = (elements(l, sec.top), elements(l, sec.bottom));
        all.iter()
            .map(|g| (conjugate_set(g, &t), conjugate_set(g, &s)))
            .collect()
    };
    let classes: Vec<BTreeSet<(Set, Set)>> = orbits.iter().map(|o| conjugates(o.rep)).collect();
    for (o, class) in orbits.iter().zip(&classes) {
        if class.len() != o.orbit_size {
            return Err(format!(
                "orbit of {:?} has {} conjugates, recorded {}",
                o.rep,
                class.len(),
                o.orbit_size
            ));
        }
    }
    for &sec in &sigma {
        let key = (elements(l, sec.top), elements(l, sec.bottom));
        let hits = classes.iter().filter(|c| c.contains(&key)).count();
        if hits != 1 {
            return Err(format!("section {sec:?} lies in {hits} orbits"));
        }
    }
    let total: usize = orbits.iter().map(|o| o.orbit_size).sum();
    if total != sigma.len() {
        return Err(format!(
            "orbits cover {total} sections, brute force finds {}",
            sigma.len()
        ));
    }
    Ok(sigma)
}

/// `Γ` recomputed from conjugation on lifted cosets, and checked to be a
/// homomorphism `N̄_G(T,S) → Out(H)`.
pub fn gamma_homomorphism(
    l: &SubgroupLattice,
    out: &OutGroup,
    orbit: &SectionOrbit,
) -> Result<usize, String> {
    let table = l.table();
    let q = &orbit.quotient;
    let top = l.subgroup(orbit.rep.top);
    let mut checks = 0;
    for (&x, &class) in orbit.nbar_reps.iter().zip(&orbit.gamma) {
        let images: Vec<u32> = out
            .generators()
            .iter()
            .map(|&h| {
                let lifted = q.lift_index(orbit.sigma.apply(h));
                let moved = table.conj(x, lifted);
                let coset = q.project_index(moved).expect("x normalizes T");
                orbit.sigma_inverse(coset)
            })
            .collect();
        let recomputed = out.class_of_images(&images).map_err(|e| e.to_string())?;
        if recomputed != class {
            return Err(format!("gamma of element {x} is {class}, recomputed {recomputed}"));
        }
        checks += 1;
    }
    for (i, &x) in orbit.nbar_reps.iter().enumerate() {
        for (j, &y) in orbit.nbar_reps.iter().enumerate() {
            let xy = table.mul(x, y);
            let k = orbit
                .nbar_reps
                .iter()
                .position(|&z| top.contains(table.mul(table.inv(xy), z)))
                .ok_or_else(|| format!("product of {x} and {y} leaves the normalizer"))?;
            if orbit.gamma[k] != out.mul(orbit.gamma[i], orbit.gamma[j]) {
                return Err(format!("gamma is not multiplicative at {x}, {y}"));
            }
            checks += 1;
        }
    }
    Ok(checks)
}
