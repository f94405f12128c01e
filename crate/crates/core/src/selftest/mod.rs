//! The self-test catalog: eight numbered criteria, shared by the `selftest`
//! command and the acceptance test target.

pub mod oracles;

use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::evaluator::{sectional_rank, CertificateKind, Evaluator};
use crate::exactlin::{cyclic_characters, named_module, Field, KModule, Matrix};
use crate::group::PermGroup;
use crate::presets::{parse_group, CATALOG};
use crate::sections::Section;
use crate::structure::iso::{find_table_isomorphism, invariants_match};
use crate::structure::lattice::{SubgroupLattice, DEFAULT_LATTICE_LIMIT};
use crate::structure::out::{out_group, OutGroup};
use crate::structure::DEFAULT_ISO_LIMIT;

#[derive(Clone, Copy, Debug)]
pub struct Config {
    pub lattice_limit: u128,
    pub iso_limit: u128,
}

impl Default for Config {
    fn default() -> Config {
        Config {
            lattice_limit: DEFAULT_LATTICE_LIMIT,
            iso_limit: DEFAULT_ISO_LIMIT,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionReport {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub checks: usize,
    pub failures: Vec<String>,
    pub seconds: f64,
    /// 0 when passed; otherwise 2 for limit errors alone and 3 for wrong
    /// values, following [`Error::exit_code`].
    pub exit_code: i32,
}

pub const TITLES: [&str; 8] = [
    "example values for A5 in S5 and SL(2,5)",
    "minimal-group identity",
    "closed formula equals rank when all sections are minimal",
    "minimal-section lower bound",
    "certificate soundness",
    "p-group closed formula",
    "characteristic sensitivity",
    "property suites",
];

/// Collects pass/fail outcomes for one criterion.
#[derive(Default)]
struct Tally {
    checks: usize,
    failures: Vec<String>,
    code: i32,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
            self.code = self.code.max(3);
        }
    }

    fn expect_eq<T: PartialEq + std::fmt::Debug>(&mut self, got: T, want: T, what: &str) {
        self.check(got == want, || format!("{what}: got {got:?}, expected {want:?}"));
    }

    fn absorb(&mut self, r: std::result::Result<usize, String>, what: &str) {
        match r {
            Ok(n) => self.checks += n.max(1),
            Err(e) => {
                self.failures.push(format!("{what}: {e}"));
                self.code = self.code.max(3);
            }
        }
    }

    fn error(&mut self, what: &str, e: Error) {
        self.failures.push(format!("{what}: {e}"));
        self.code = self.code.max(e.exit_code());
    }
}

fn pair(g: &str, h: &str, cfg: &Config) -> Result<(SubgroupLattice, OutGroup)> {
    let g = parse_group(g)?;
    let h = parse_group(h)?;
    Ok((
        SubgroupLattice::build(&g, cfg.lattice_limit)?,
        out_group(&h, cfg.iso_limit)?,
    ))
}

/// Rank, and closed formula when it applies.
fn both_methods(ev: &Evaluator<'_>, m: &KModule) -> Result<(usize, Option<usize>)> {
    Ok((ev.evaluation_dim(m)?, ev.closed_formula_dim(m)?))
}

/// Isomorphism types of subquotients of the lattice group, one quotient
/// permutation group per type.
pub fn subquotient_types(l: &SubgroupLattice) -> Result<Vec<PermGroup>> {
    let mut reps: Vec<crate::structure::quotient::QuotientGroup> = Vec::new();
    for class in l.classes() {
        let t = class.representative;
        for s in l.normal_subgroups(t) {
            let q = l.quotient(t, s)?;
            let seen = reps.iter().any(|r| {
                invariants_match(r.table(), q.table())
                    && find_table_isomorphism(r.table(), q.table()).is_some()
            });
            if !seen {
                reps.push(q);
            }
        }
    }
    reps.sort_by_key(|q| q.order());
    Ok(reps.into_iter().map(|q| q.perm_rep().clone()).collect())
}

/// Trivial over `Q`, `F2`, `F3`, and sign over `Q` and `F3` when `Out(H)`
/// has order 2.
pub fn sweep_modules(out: &OutGroup) -> Result<Vec<KModule>> {
    let mut modules: Vec<KModule> = [Field::Rationals, Field::Prime(2), Field::Prime(3)]
        .into_iter()
        .map(|f| KModule::trivial(out, f))
        .collect();
    if out.order() == 2 {
        for f in [Field::Rationals, Field::Prime(3)] {
            modules.push(named_module("sign", out, f)?);
        }
    }
    Ok(modules)
}

/// One `(G, H, V)` case of the catalog sweep.
#[derive(Clone, Debug, Serialize)]
pub struct SweepCase {
    pub group: String,
    pub subquotient_order: usize,
    pub module: String,
    pub field: Field,
    pub all_minimal: bool,
    pub rank: usize,
    pub closed_formula: Option<usize>,
    pub lower_bound: usize,
    /// Tags of fired certificates whose claim fails.
    pub violations: Vec<char>,
    pub fired: usize,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Sweep {
    pub cases: Vec<SweepCase>,
    pub errors: Vec<String>,
    /// Largest exit code among `errors`.
    pub error_code: i32,
    pub seconds: f64,
}

/// Every catalog group against each of its subquotient types and
/// [`sweep_modules`].
pub fn sweep(cfg: &Config) -> Sweep {
    let start = Instant::now();
    let mut result = Sweep::default();
    for &spec in CATALOG {
        if let Err(e) = sweep_group(spec, cfg, &mut result.cases) {
            result.errors.push(format!("{spec}: {e}"));
            result.error_code = result.error_code.max(e.exit_code());
        }
    }
    result.seconds = start.elapsed().as_secs_f64();
    result
}

fn sweep_group(spec: &str, cfg: &Config, cases: &mut Vec<SweepCase>) -> Result<()> {
    let g = parse_group(spec)?;
    let l = SubgroupLattice::build(&g, cfg.lattice_limit)?;
    for h in subquotient_types(&l)? {
        let out = out_group(&h, cfg.iso_limit)?;
        let ev = Evaluator::new(&l, &out)?;
        for m in sweep_modules(&out)? {
            let rank = ev.evaluation_dim(&m)?;
            let fired = ev.fired_certificates(&m)?;
            cases.push(SweepCase {
                group: spec.to_string(),
                subquotient_order: h.order() as usize,
                module: m.name().to_string(),
                field: m.field(),
                all_minimal: ev.all_minimal(),
                rank,
                closed_formula: ev.closed_formula_dim(&m)?,
                lower_bound: ev.lower_bound_dim(&m)?,
                violations: fired
                    .iter()
                    .filter(|c| !ev.claim_holds(c.claim, rank))
                    .map(|c| c.kind.tag())
                    .collect(),
                fired: fired.len(),
            });
        }
    }
    Ok(())
}

fn case_name(c: &SweepCase) -> String {
    format!(
        "{} over a subquotient of order {}, {} over {}",
        c.group, c.subquotient_order, c.module, c.field
    )
}

fn finish(id: u8, tally: Tally, start: Instant, extra_seconds: f64) -> CriterionReport {
    let passed = tally.failures.is_empty() && tally.checks > 0;
    CriterionReport {
        id,
        title: TITLES[id as usize - 1],
        passed,
        exit_code: if passed { 0 } else { tally.code.max(1) },
        checks: tally.checks,
        failures: tally.failures,
        seconds: start.elapsed().as_secs_f64() + extra_seconds,
    }
}

/// `S5/A5` with sign gives 0 and `SL(2,5)/A5` gives 1, by rank and by the
/// closed formula.
pub fn criterion_1(cfg: &Config) -> CriterionReport {
    let start = Instant::now();
    let mut t = Tally::default();
    for (g, want) in [("S5", 0), ("SL(2,5)", 1)] {
        let run = || -> Result<(usize, Option<usize>)> {
            let (l, o) = pair(g, "A5", cfg)?;
            let ev = Evaluator::new(&l, &o)?;
            both_methods(&ev, &named_module("sign", &o, Field::Rationals)?)
        };
        match run() {
            Ok((rank, closed)) => {
                t.expect_eq(rank, want, &format!("rank for {g}"));
                t.expect_eq(closed, Some(want), &format!("closed formula for {g}"));
            }
            Err(e) => t.error(g, e),
        }
    }
    finish(1, t, start, 0.0)
}

/// `S7/A5` with sign, which needs the full lattice of `S7`.
pub fn s7_stretch(cfg: &Config) -> Result<usize> {
    let (l, o) = pair("S7", "A5", cfg)?;
    Evaluator::new(&l, &o)?.evaluation_dim(&named_module("sign", &o, Field::Rationals)?)
}

/// The 2-dimensional sum-zero submodule of the permutation module of
/// `Out(V4) ≅ S3` on the three involutions, over `F3`.
pub fn v4_sum_zero_module(out: &OutGroup) -> Result<KModule> {
    let field = Field::Prime(3);
    let table = out.table();
    let involutions: Vec<u32> = (1..table.len() as u32).collect();
    if table.len() != 4 || involutions.iter().any(|&x| table.order_of(x) != 2) {
        return Err(Error::Module("needs the Klein four-group".into()));
    }
    let slot = |x: u32| involutions.iter().position(|&y| y == x).expect("involution");
    let rho = (0..out.order())
        .map(|a| {
            let phi = out.representative(a);
            // e_i − e_3 ↦ e_π(i) − e_π(3), written in the basis e_1 − e_3, e_2 − e_3
            let mut entries = [0i64; 4];
            for i in 0..2 {
                let mut v = [0i64; 3];
                v[slot(phi.apply(involutions[i]))] += 1;
                v[slot(phi.apply(involutions[2]))] -= 1;
                entries[i] = v[0];
                entries[2 + i] = v[1];
            }
            Matrix::from_integers(field, 2, 2, &entries)
        })
        .collect::<Result<_>>()?;
    KModule::new("sum-zero", out, field, rho)
}

/// `eval(H, H, V) = dim V`.
pub fn criterion_2(cfg: &Config) -> CriterionReport {
    let start = Instant::now();
    let mut t = Tally::default();
    for h in ["C2", "C3", "C4", "V4", "S3", "D8", "Q8", "A4", "A5"] {
        let run = |t: &mut Tally| -> Result<()> {
            let (l, o) = pair(h, h, cfg)?;
            let ev = Evaluator::new(&l, &o)?;
            let mut modules = vec![KModule::trivial(&o, Field::Rationals)];
            if o.order() == 2 {
                modules.push(named_module("sign", &o, Field::Rationals)?);
            }
            if h == "V4" {
                modules.push(v4_sum_zero_module(&o)?);
            }
            for m in modules {
                let (rank, closed) = both_methods(&ev, &m)?;
                let what = format!("{h} with {} over {}", m.name(), m.field());
                t.expect_eq(rank, m.dim(), &what);
                t.expect_eq(closed, Some(m.dim()), &format!("{what}, closed formula"));
            }
            Ok(())
        };
        if let Err(e) = run(&mut t) {
            t.error(h, e);
        }
    }
    finish(2, t, start, 0.0)
}

fn sweep_errors(t: &mut Tally, s: &Sweep) {
    t.failures.extend(s.errors.iter().cloned());
    t.code = t.code.max(s.error_code);
}

pub fn criterion_3(s: &Sweep) -> CriterionReport {
    let start = Instant::now();
    let mut t = Tally::default();
    sweep_errors(&mut t, s);
    for c in s.cases.iter().filter(|c| c.all_minimal) {
        t.check(c.closed_formula == Some(c.rank), || {
            format!("{}: closed formula {:?}, rank {}", case_name(c), c.closed_formula, c.rank)
        });
    }
    finish(3, t, start, s.seconds)
}

pub fn criterion_4(s: &Sweep) -> CriterionReport {
    let start = Instant::now();
    let mut t = Tally::default();
    sweep_errors(&mut t, s);
    for c in &s.cases {
        t.check(c.lower_bound <= c.rank, || {
            format!("{}: lower bound {} above rank {}", case_name(c), c.lower_bound, c.rank)
        });
    }
    finish(4, t, start, 0.0)
}

/// Sweep certificates, plus the normal Hall case `F21/C7` against every
/// character of `Out(C7) ≅ C6`.
pub fn criterion_5(s: &Sweep, cfg: &Config) -> CriterionReport {
    let start = Instant::now();
    let mut t = Tally::default();
    sweep_errors(&mut t, s);
    for c in &s.cases {
        t.checks += c.fired;
        if !c.violations.is_empty() {
            t.failures
                .push(format!("{}: certificates {:?} fail", case_name(c), c.violations));
            t.code = 3;
        }
    }
    let run = |t: &mut Tally| -> Result<()> {
        let (l, o) = pair("F21", "C7", cfg)?;
        let ev = Evaluator::new(&l, &o)?;
        let characters = cyclic_characters(&o, Field::Prime(7))?;
        let mut modules = vec![
            KModule::trivial(&o, Field::Rationals),
            rational_sign(&o, &characters[3])?,
        ];
        modules.extend(characters);
        let mut dims = Vec::new();
        for m in &modules {
            let r = ev.evaluate(m, true)?;
            let hall = r
                .certificates
                .iter()
                .find(|c| c.kind == CertificateKind::NormalHall);
            t.check(hall.is_some(), || format!("normal Hall certificate missing for {}", m.name()));
            dims.push(r.dim);
        }
        t.expect_eq(dims, vec![1, 1, 1, 0, 0, 1, 0, 0], "F21/C7 over Q and the six F7 characters");
        Ok(())
    };
    if let Err(e) = run(&mut t) {
        t.error("F21/C7", e);
    }
    finish(5, t, start, 0.0)
}

/// The rational character with the same kernel as a `±1`-valued
/// character over `F_p`.
fn rational_sign(out: &OutGroup, chi: &KModule) -> Result<KModule> {
    let rho = (0..out.order())
        .map(|a| {
            let v = if chi.rho(a).entry_string(0, 0) == "1" { 1 } else { -1 };
            Matrix::from_integers(Field::Rationals, 1, 1, &[v])
        })
        .collect::<Result<_>>()?;
    KModule::new("sign", out, Field::Rationals, rho)
}

/// Small `p`-groups: with equal sectional rank every section is minimal and
/// the closed formula matches the rank.
pub fn criterion_6(cfg: &Config) -> CriterionReport {
    let start = Instant::now();
    let mut t = Tally::default();
    for g in ["D8", "Q8", "C4xC2", "C2^3"] {
        for h in ["C2", "C4", "V4"] {
            let run = |t: &mut Tally| -> Result<()> {
                let (l, o) = pair(g, h, cfg)?;
                let ev = Evaluator::new(&l, &o)?;
                if ev.orbits().is_empty() {
                    return Ok(());
                }
                let hl = SubgroupLattice::build(o.base(), cfg.lattice_limit)?;
                let equal = sectional_rank(&l, 2) == sectional_rank(&hl, 2);
                if equal {
                    t.check(ev.all_minimal(), || format!("{g}/{h}: equal rank but a section is not minimal"));
                }
                for f in [Field::Rationals, Field::Prime(2), Field::Prime(3)] {
                    let m = KModule::trivial(&o, f);
                    let (rank, closed) = both_methods(&ev, &m)?;
                    if equal || ev.all_minimal() {
                        t.expect_eq(closed, Some(rank), &format!("{g}/{h} over {f}"));
                    }
                    let k = ev
                        .fired_certificates(&m)?
                        .iter()
                        .any(|c| c.kind == CertificateKind::PGroupRank);
                    t.expect_eq(k, equal, &format!("{g}/{h} sectional rank certificate"));
                }
                Ok(())
            };
            if let Err(e) = run(&mut t) {
                t.error(&format!("{g}/{h}"), e);
            }
        }
    }
    finish(6, t, start, 0.0)
}

/// `S5/A5` with the trivial module: 0 over `F2`, 1 over `Q`.
pub fn criterion_7(cfg: &Config) -> CriterionReport {
    let start = Instant::now();
    let mut t = Tally::default();
    let run = |t: &mut Tally| -> Result<()> {
        let (l, o) = pair("S5", "A5", cfg)?;
        let ev = Evaluator::new(&l, &o)?;
        for (f, want) in [(Field::Prime(2), 0), (Field::Rationals, 1), (Field::Prime(3), 1)] {
            let (rank, closed) = both_methods(&ev, &KModule::trivial(&o, f))?;
            t.expect_eq(rank, want, &format!("rank over {f}"));
            t.expect_eq(closed, Some(want), &format!("closed formula over {f}"));
        }
        Ok(())
    };
    if let Err(e) = run(&mut t) {
        t.error("S5/A5", e);
    }
    finish(7, t, start, 0.0)
}

/// Linking symmetry, orbit partition and gamma on a few pairs; lattice
/// completeness up to order 60; double-coset partition up to order 120.
pub fn criterion_8(cfg: &Config) -> CriterionReport {
    let start = Instant::now();
    let mut t = Tally::default();
    let run = |t: &mut Tally| -> Result<()> {
        let mut small: Vec<&str> = CATALOG.to_vec();
        small.push("A5");
        for spec in small {
            let g = parse_group(spec)?;
            let l = SubgroupLattice::build(&g, cfg.lattice_limit)?;
            t.absorb(oracles::lattice_completeness(&g, &l), &format!("{spec} lattice"));
        }
        for spec in ["S3", "D8", "Q8", "A4", "S4", "F21", "A5", "S5", "SL(2,5)"] {
            let l = SubgroupLattice::build(&parse_group(spec)?, cfg.lattice_limit)?;
            for b in l.classes() {
                for c in l.classes() {
                    t.absorb(
                        oracles::double_coset_partition(&l, b.representative, c.representative),
                        &format!("{spec} double cosets"),
                    );
                }
            }
        }
        for spec in ["S3", "D8", "Q8", "A4", "C4xC2", "S4", "D12", "F21"] {
            let l = SubgroupLattice::build(&parse_group(spec)?, cfg.lattice_limit)?;
            for h in subquotient_types(&l)? {
                let out = out_group(&h, cfg.iso_limit)?;
                let ev = Evaluator::new(&l, &out)?;
                let what = format!("{spec} over a subquotient of order {}", h.order());
                let sections: Vec<Section> =
                    match oracles::orbit_partition(&l, &out, ev.orbits()) {
                        Ok(s) => {
                            t.checks += s.len().max(1);
                            s
                        }
                        Err(e) => {
                            t.failures.push(format!("{what}: {e}"));
                            continue;
                        }
                    };
                t.absorb(oracles::linking_symmetry(&l, &sections), &what);
                for o in ev.orbits() {
                    t.absorb(oracles::gamma_homomorphism(&l, &out, o), &what);
                }
            }
        }
        Ok(())
    };
    if let Err(e) = run(&mut t) {
        t.error("property suites", e);
    }
    finish(8, t, start, 0.0)
}

/// All eight criteria in order.
pub fn run_all(cfg: &Config) -> Vec<CriterionReport> {
    let s = sweep(cfg);
    vec![
        criterion_1(cfg),
        criterion_2(cfg),
        criterion_3(&s),
        criterion_4(&s),
        criterion_5(&s, cfg),
        criterion_6(cfg),
        criterion_7(cfg),
        criterion_8(cfg),
    ]
}
