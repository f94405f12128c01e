use std::collections::BTreeSet;

use super::*;
use crate::exactlin::{cyclic_characters, named_module};
use crate::group::PermGroup;
use crate::presets::parse_group;
use crate::structure::out::out_group;

fn setup(g: &str, h: &str) -> (SubgroupLattice, OutGroup) {
    let g = parse_group(g).unwrap();
    let h = parse_group(h).unwrap();
    (
        SubgroupLattice::build(&g, 5040).unwrap(),
        out_group(&h, 720).unwrap(),
    )
}

fn dim(g: &str, h: &str, module: &str, field: Field) -> EvaluationReport {
    let (l, o) = setup(g, h);
    let m = named_module(module, &o, field).unwrap();
    Evaluator::new(&l, &o).unwrap().evaluate(&m, true).unwrap()
}

#[test]
fn s5_over_a5() {
    assert_eq!(dim("S5", "A5", "sign", Field::Rationals).dim, 0);
    assert_eq!(dim("S5", "A5", "trivial", Field::Rationals).dim, 1);
    assert_eq!(dim("S5", "A5", "trivial", Field::Prime(2)).dim, 0);
}

#[test]
fn sl25_over_a5() {
    let r = dim("SL(2,5)", "A5", "sign", Field::Rationals);
    assert_eq!(r.dim, 1);
    assert_eq!(r.orbit_count, 1);
}

#[test]
fn c4_over_c2() {
    let r = dim("C4", "C2", "trivial", Field::Rationals);
    assert_eq!(r.dim, 2);
    assert_eq!(r.orbit_count, 2);
}

#[test]
fn not_a_subquotient_vanishes() {
    let r = dim("C4", "C3", "trivial", Field::Rationals);
    assert_eq!(r.method, Method::EmptySigma);
    assert!(r.vanishes);
}

#[test]
fn whole_group_gives_the_module() {
    for spec in ["S3", "D8", "Q8", "A4"] {
        let r = dim(spec, spec, "trivial", Field::Rationals);
        assert_eq!(r.dim, 1, "{spec}");
    }
    let (l, o) = setup("C7", "C7");
    let ev = Evaluator::new(&l, &o).unwrap();
    for m in cyclic_characters(&o, Field::Prime(7)).unwrap() {
        assert_eq!(ev.evaluate(&m, true).unwrap().dim, 1);
    }
}

#[test]
fn f21_over_c7() {
    let (l, o) = setup("F21", "C7");
    let ev = Evaluator::new(&l, &o).unwrap();
    let dims: Vec<usize> = cyclic_characters(&o, Field::Prime(7)).unwrap()
        .iter()
        .map(|m| ev.evaluate(m, true).unwrap().dim)
        .collect();
    assert_eq!(dims, [1, 0, 0, 1, 0, 0]);
}

/// Conjugacy classes of cyclic subgroups, by brute force.
fn cyclic_classes(g: &PermGroup) -> usize {
    let elements = g.elements();
    let cyclic = |x: &crate::perm::Perm| {
        let mut set = BTreeSet::new();
        let mut y = x.clone();
        while set.insert(y.images().to_vec()) {
            y = y.compose(x);
        }
        set
    };
    let mut seen = BTreeSet::new();
    let mut classes = 0;
    for x in &elements {
        let c = cyclic(x);
        if seen.contains(&c) {
            continue;
        }
        classes += 1;
        for g in &elements {
            seen.insert(cyclic(&g.conjugate(x)));
        }
    }
    classes
}

#[test]
fn trivial_subquotient_counts_cyclic_classes() {
    for spec in ["S3", "C6", "D8", "Q8", "A4", "S4", "C3xS3", "D10", "A5"] {
        let g = parse_group(spec).unwrap();
        let r = dim(spec, "C1", "trivial", Field::Rationals);
        assert_eq!(r.dim, cyclic_classes(&g), "{spec}");
    }
}

#[test]
fn closed_formula_agrees_with_rank() {
    for (g, h) in [("S4", "C2"), ("D8", "C2"), ("A4", "C3"), ("S4", "S3"), ("Q8", "C4")] {
        for field in [Field::Rationals, Field::Prime(2), Field::Prime(3)] {
            let (l, o) = setup(g, h);
            let ev = Evaluator::new(&l, &o).unwrap();
            let m = KModule::trivial(&o, field);
            let rank = ev.evaluation_dim(&m).unwrap();
            if let Some(c) = ev.closed_formula_dim(&m).unwrap() {
                assert_eq!(c, rank, "{g} {h} {field}");
            }
            assert!(ev.lower_bound_dim(&m).unwrap() <= rank);
        }
    }
}

#[test]
fn certificates_fire() {
    let r = dim("S5", "A5", "trivial", Field::Rationals);
    let tags: Vec<char> = r.certificates.iter().map(|c| c.kind.tag()).collect();
    assert!(tags.contains(&'h'), "{tags:?}");
    let r = dim("S4", "S3", "trivial", Field::Rationals);
    let tags: Vec<char> = r.certificates.iter().map(|c| c.kind.tag()).collect();
    assert!(tags.contains(&'a'), "{tags:?}");
    assert!(tags.contains(&'d'), "{tags:?}");
    let r = dim("D8", "C2", "trivial", Field::Rationals);
    assert!(r.certificates.iter().any(|c| c.kind == CertificateKind::Abelianized));
    // the only C4 section of D8 has trivial bottom, missing the derived subgroup
    let r = dim("D8", "C4", "trivial", Field::Rationals);
    assert!(r.certificates.iter().all(|c| c.kind != CertificateKind::Abelianized));
}

#[test]
fn module_size_mismatch() {
    let (l, o) = setup("S5", "A5");
    let (_, other) = setup("C1", "C7");
    let m = KModule::trivial(&other, Field::Rationals);
    assert!(Evaluator::new(&l, &o).unwrap().evaluate(&m, false).is_err());
}

#[test]
fn abelian_groups_fire_abelianized() {
    for (g, h) in [("C4xC2", "C2"), ("C4xC2", "C4"), ("C3xC3", "C3"), ("C12", "C6")] {
        let r = dim(g, h, "trivial", Field::Rationals);
        assert!(r.certificates.iter().any(|c| c.kind == CertificateKind::Abelianized), "{g}/{h}");
        assert!(r.dim > 0);
    }
}
