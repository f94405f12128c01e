use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::evaluator::Evaluator;
use crate::exactlin::{trace_image_dim, KModule};
use crate::perm::gcd;
use crate::sections::{gamma_map, is_expansive, is_linked};
use crate::structure::iso::find_table_isomorphism;
use crate::structure::lattice::{SubgroupId, SubgroupLattice};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateKind {
    Quotient,
    Abelianized,
    NeverLinked,
    SelfNormalizing,
    Expansive,
    TraceWitness,
    InnerNormalizer,
    UniqueSection,
    NormalHall,
    Sylow,
    PGroupRank,
}

impl CertificateKind {
    /// Letter `a`–`k`.
    pub fn tag(&self) -> char {
        (b'a' + *self as u8) as char
    }

    pub fn name(&self) -> &'static str {
        match self {
            CertificateKind::Quotient => "quotient",
            CertificateKind::Abelianized => "abelianized",
            CertificateKind::NeverLinked => "never-linked",
            CertificateKind::SelfNormalizing => "self-normalizing",
            CertificateKind::Expansive => "expansive",
            CertificateKind::TraceWitness => "trace-witness",
            CertificateKind::InnerNormalizer => "inner-normalizer",
            CertificateKind::UniqueSection => "unique-section",
            CertificateKind::NormalHall => "normal-hall",
            CertificateKind::Sylow => "sylow",
            CertificateKind::PGroupRank => "p-group-rank",
        }
    }
}

/// What a fired certificate asserts about the evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Claim {
    Nonvanishing,
    Dimension(usize),
    ClosedFormulaApplies,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub claim: Claim,
    pub witness: String,
}

fn fire(out: &mut Vec<Certificate>, kind: CertificateKind, claim: Claim, witness: String) {
    out.push(Certificate {
        kind,
        claim,
        witness,
    });
}

pub(super) fn collect(
    ev: &Evaluator<'_>,
    module: &KModule,
    traces: &[usize],
) -> Result<Vec<Certificate>> {
    let l = ev.lattice();
    let out = ev.out();
    let orbits = ev.orbits();
    let h_order = out.table().len();
    let g_order = l.table().len();
    let whole = l.whole();
    let mut fired = Vec::new();
    let describe = |i: usize| {
        let o = &orbits[i];
        format!(
            "orbit {i}: |T| = {}, |S| = {}",
            l.order(o.rep.top),
            l.order(o.rep.bottom)
        )
    };

    // (a) a quotient of G is isomorphic to H
    if g_order % h_order == 0 {
        for n in l.normal_subgroups(whole) {
            if l.order(n) * h_order != g_order {
                continue;
            }
            let q = l.quotient(whole, n)?;
            if find_table_isomorphism(out.table(), q.table()).is_some() {
                fire(
                    &mut fired,
                    CertificateKind::Quotient,
                    Claim::Nonvanishing,
                    format!("normal subgroup of order {}", l.order(n)),
                );
                break;
            }
        }
    }

    // (b) H is a subquotient of the abelianization
    let derived = l
        .find(&l.table().derived_subgroup())
        .expect("derived subgroup is in the lattice");
    if let Some(i) = orbits.iter().position(|o| l.is_subgroup(derived, o.rep.bottom)) {
        fire(
            &mut fired,
            CertificateKind::Abelianized,
            Claim::Nonvanishing,
            format!("{}, containing the derived subgroup", describe(i)),
        );
    }

    // (c) no conjugate by an element outside T is linked back
    for (i, o) in orbits.iter().enumerate() {
        let t = o.rep.top;
        let never = l.double_coset_reps(t, t).into_iter().all(|(g, _)| {
            l.subgroup(t).contains(g) || !is_linked(l, o.rep, o.rep.conjugate(l, g))
        });
        if never {
            fire(&mut fired, CertificateKind::NeverLinked, Claim::Nonvanishing, describe(i));
            break;
        }
    }

    // (d) a self-normalizing subgroup isomorphic to H
    if let Some(i) = orbits
        .iter()
        .position(|o| o.rep.bottom == l.trivial() && l.normalizer(o.rep.top) == o.rep.top)
    {
        fire(&mut fired, CertificateKind::SelfNormalizing, Claim::Nonvanishing, describe(i));
    }

    // (e) H ≅ N_G(S)/S with S expansive
    if let Some(i) = orbits
        .iter()
        .position(|o| l.normalizer(o.rep.bottom) == o.rep.top && is_expansive(l, o.rep.bottom))
    {
        fire(&mut fired, CertificateKind::Expansive, Claim::Nonvanishing, describe(i));
    }

    // (f) a minimal orbit with nonzero trace
    if let Some(i) = (0..orbits.len()).find(|&i| orbits[i].minimal && traces[i] > 0) {
        fire(
            &mut fired,
            CertificateKind::TraceWitness,
            Claim::Nonvanishing,
            format!("{}, trace dimension {}", describe(i), traces[i]),
        );
    }

    // (g) a minimal orbit whose normalizer acts by inner automorphisms, with
    // |N̄| invertible
    let p = module.field().characteristic() as usize;
    if let Some(i) = orbits.iter().position(|o| {
        o.minimal && o.gamma.iter().all(|&c| c == 0) && (p == 0 || o.gamma.len() % p != 0)
    }) {
        fire(
            &mut fired,
            CertificateKind::InnerNormalizer,
            Claim::Nonvanishing,
            format!("{}, |N/T| = {}", describe(i), orbits[i].gamma.len()),
        );
    }

    // (h) a single orbit
    if orbits.len() == 1 {
        fire(
            &mut fired,
            CertificateKind::UniqueSection,
            Claim::Dimension(traces[0]),
            describe(0),
        );
    }

    // (i) H is a normal Hall subgroup with a faithful complement
    if let Some(c) = normal_hall(ev, module)? {
        fired.push(c);
    }

    // (j) H is a Sylow subgroup normalizing no nontrivial q-subgroup
    if let Some(c) = sylow(ev, traces) {
        fired.push(c);
    }

    // (k) p-groups of equal sectional rank
    if let Some(c) = p_group_rank(ev)? {
        fired.push(c);
    }

    Ok(fired)
}

fn normal_hall(ev: &Evaluator<'_>, module: &KModule) -> Result<Option<Certificate>> {
    let l = ev.lattice();
    let h_order = ev.out().table().len();
    let g_order = l.table().len();
    if g_order % h_order != 0 || gcd(h_order as u64, (g_order / h_order) as u64) != 1 {
        return Ok(None);
    }
    for (i, o) in ev.orbits().iter().enumerate() {
        let n = o.rep.top;
        if o.rep.bottom != l.trivial() || !l.is_normal(n, l.whole()) {
            continue;
        }
        let complement = (0..l.len()).find(|&y| {
            l.order(y) * h_order == g_order && l.intersection(y, n) == l.trivial()
        });
        let Some(y) = complement else {
            continue;
        };
        let faithful = l.subgroup(y).elements()[1..]
            .iter()
            .all(|&x| !centralizes(l, x, n));
        if !faithful {
            continue;
        }
        let entries = gamma_map(l, &o.quotient, &o.sigma, l.subgroup(y).elements(), ev.out())?;
        let predicted = trace_image_dim(module, &entries)?;
        return Ok(Some(Certificate {
            kind: CertificateKind::NormalHall,
            claim: Claim::Dimension(predicted),
            witness: format!("orbit {i}, complement of order {}", l.order(y)),
        }));
    }
    Ok(None)
}

fn centralizes(l: &SubgroupLattice, x: u32, n: SubgroupId) -> bool {
    let t = l.table();
    l.subgroup(n)
        .generators()
        .iter()
        .all(|&g| t.mul(x, g) == t.mul(g, x))
}

/// `(p, a)` with `n = p^a`, for `n > 1`.
pub(crate) fn prime_power(n: usize) -> Option<(usize, u32)> {
    if n < 2 {
        return None;
    }
    let p = (2..=n).find(|d| n % d == 0)?;
    let mut m = n;
    let mut a = 0;
    while m % p == 0 {
        m /= p;
        a += 1;
    }
    (m == 1).then_some((p, a))
}

fn sylow(ev: &Evaluator<'_>, traces: &[usize]) -> Option<Certificate> {
    let l = ev.lattice();
    let h_order = ev.out().table().len();
    let g_order = l.table().len();
    let (p, _) = prime_power(h_order)?;
    if g_order % h_order != 0 || (g_order / h_order) % p == 0 {
        return None;
    }
    let (i, o) = ev
        .orbits()
        .iter()
        .enumerate()
        .find(|(_, o)| o.rep.bottom == l.trivial() && l.order(o.rep.top) == h_order)?;
    let sylow = o.rep.top;
    let normalizes_q_subgroup = (1..l.len()).any(|q| {
        prime_power(l.order(q)).is_some_and(|(r, _)| r != p)
            && l.subgroup(sylow)
                .generators()
                .iter()
                .all(|&g| l.normalizes(g, q))
    });
    if normalizes_q_subgroup {
        return None;
    }
    Some(Certificate {
        kind: CertificateKind::Sylow,
        claim: Claim::Dimension(traces[i]),
        witness: format!("orbit {i}, Sylow {p}-subgroup of order {h_order}"),
    })
}

/// Largest rank of an elementary abelian section of a `p`-group lattice:
/// the maximum of `log_p [T : Φ(T)]`.
pub fn sectional_rank(l: &SubgroupLattice, p: usize) -> u32 {
    (0..l.len())
        .map(|t| {
            let mut index = l.order(t) / l.order(l.frattini(t));
            let mut r = 0;
            while index > 1 {
                index /= p;
                r += 1;
            }
            r
        })
        .max()
        .unwrap_or(0)
}

fn p_group_rank(ev: &Evaluator<'_>) -> Result<Option<Certificate>> {
    let l = ev.lattice();
    let h_order = ev.out().table().len();
    let (Some((p, _)), Some((q, _))) = (prime_power(l.table().len()), prime_power(h_order)) else {
        return Ok(None);
    };
    if p != q {
        return Ok(None);
    }
    let h_lattice = SubgroupLattice::build(ev.out().base(), h_order as u128)?;
    let rg = sectional_rank(l, p);
    let rh = sectional_rank(&h_lattice, p);
    if rg != rh {
        return Ok(None);
    }
    Ok(Some(Certificate {
        kind: CertificateKind::PGroupRank,
        claim: Claim::ClosedFormulaApplies,
        witness: format!("{p}-groups of sectional rank {rg}"),
    }))
}
