//! Command-line front end. Text output is for people; `--json` output is
//! the stable machine format.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::evaluator::{Claim, EvaluationReport, Evaluator};
use crate::exactlin::{load_module, named_module, Field, KModule};
use crate::presets::parse_group;
use crate::selftest::{self, CriterionReport};
use crate::structure::lattice::{SubgroupLattice, DEFAULT_LATTICE_LIMIT};
use crate::structure::out::{out_group, OutGroup};
use crate::structure::DEFAULT_ISO_LIMIT;

#[derive(Parser, Debug)]
#[command(
    name = "biset-eval",
    version,
    about = "Vanishing and dimension of simple biset functors S_{H,V}(G)"
)]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Clone, Debug)]
pub struct RunConfig {
    /// Coefficient field: Q or F<p>
    #[arg(long, global = true, default_value = "Q")]
    pub field: Field,
    /// Largest group order accepted for subgroup lattices
    #[arg(long, global = true, default_value_t = DEFAULT_LATTICE_LIMIT)]
    pub limit: u128,
    /// Largest group order accepted for automorphism and isomorphism search
    #[arg(long = "iso-limit", global = true, default_value_t = DEFAULT_ISO_LIMIT)]
    pub iso_limit: u128,
    /// Rank the pairing matrix even when the closed formula applies
    #[arg(long, global = true)]
    pub verify: bool,
    /// Print JSON instead of text
    #[arg(long, global = true)]
    pub json: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Outer automorphism classes of H, in canonical order
    Out { h: String },
    /// Conjugacy classes of subgroups of G
    Subgroups { g: String },
    /// Orbits of sections (T, S) of G with T/S isomorphic to H
    Sections { g: String, h: String },
    /// Dimension of S_{H,V}(G)
    Eval { g: String, h: String, module: String },
    /// Certificates that apply to S_{H,V}(G)
    Certify { g: String, h: String, module: String },
    /// Runs the acceptance catalog
    Selftest,
}

/// Parses arguments, runs the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = if e.use_stderr() {
                write!(err, "{e}")
            } else {
                write!(out, "{e}")
            };
            return code;
        }
    };
    match execute(&cli) {
        Ok((text, code)) => {
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: &Cli) -> Result<(String, i32)> {
    let cfg = &cli.config;
    if cfg.limit == 0 || cfg.iso_limit == 0 {
        return Err(Error::Parse("limits must be positive".into()));
    }
    match &cli.command {
        Command::Out { h } => render(cfg, &out_report(cfg, h)?, text_out).map(|s| (s, 0)),
        Command::Subgroups { g } => {
            render(cfg, &subgroups_report(cfg, g)?, text_subgroups).map(|s| (s, 0))
        }
        Command::Sections { g, h } => {
            render(cfg, &sections_report(cfg, g, h)?, text_sections).map(|s| (s, 0))
        }
        Command::Eval { g, h, module } => {
            render(cfg, &evaluate(cfg, g, h, module)?, text_eval).map(|s| (s, 0))
        }
        Command::Certify { g, h, module } => {
            render(cfg, &evaluate(cfg, g, h, module)?, text_certify).map(|s| (s, 0))
        }
        Command::Selftest => {
            let reports = selftest::run_all(&selftest::Config {
                lattice_limit: cfg.limit,
                iso_limit: cfg.iso_limit,
            });
            let extra = sign_cases(cfg);
            let code = reports.iter().map(|r| r.exit_code).max().unwrap_or(0);
            let report = SelftestReport { criteria: reports, extra };
            render(cfg, &report, text_selftest).map(|s| (s, code))
        }
    }
}

fn render<T: Serialize>(cfg: &RunConfig, value: &T, text: fn(&T) -> String) -> Result<String> {
    if cfg.json {
        let mut s = serde_json::to_string_pretty(value)
            .map_err(|e| Error::Consistency(format!("serializing report: {e}")))?;
        s.push('\n');
        Ok(s)
    } else {
        Ok(text(value))
    }
}

/// `trivial`, `sign`, or a path to a module file.
pub fn resolve_module(spec: &str, out: &OutGroup, field: Field) -> Result<KModule> {
    match spec {
        "trivial" | "sign" => named_module(spec, out, field),
        path => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Parse(format!("cannot read module file {path:?}: {e}")))?;
            load_module(&text, out, field)
        }
    }
}

fn lattice(cfg: &RunConfig, g: &str) -> Result<SubgroupLattice> {
    SubgroupLattice::build(&parse_group(g)?, cfg.limit)
}

fn evaluate(cfg: &RunConfig, g: &str, h: &str, module: &str) -> Result<EvaluationReport> {
    let l = lattice(cfg, g)?;
    let out = out_group(&parse_group(h)?, cfg.iso_limit)?;
    let m = resolve_module(module, &out, cfg.field)?;
    Evaluator::new(&l, &out)?.evaluate(&m, cfg.verify)
}

#[derive(Serialize)]
struct OutClass {
    index: usize,
    images: Vec<GeneratorImage>,
}

#[derive(Serialize)]
struct GeneratorImage {
    generator: String,
    image: String,
}

#[derive(Serialize)]
struct OutReport {
    group_order: usize,
    aut_order: usize,
    inner_order: usize,
    out_order: usize,
    classes: Vec<OutClass>,
}

fn out_report(cfg: &RunConfig, h: &str) -> Result<OutReport> {
    let o = out_group(&parse_group(h)?, cfg.iso_limit)?;
    Ok(OutReport {
        group_order: o.table().len(),
        aut_order: o.aut_order(),
        inner_order: o.inner_order(),
        out_order: o.order(),
        classes: (0..o.order())
            .map(|a| OutClass {
                index: a,
                images: o
                    .describe(a)
                    .into_iter()
                    .map(|(generator, image)| GeneratorImage { generator, image })
                    .collect(),
            })
            .collect(),
    })
}

fn text_out(r: &OutReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "|H| = {}, |Aut(H)| = {}, |Inn(H)| = {}, |Out(H)| = {}",
        r.group_order, r.aut_order, r.inner_order, r.out_order
    );
    for c in &r.classes {
        let images: Vec<String> = c
            .images
            .iter()
            .map(|g| format!("{} -> {}", g.generator, g.image))
            .collect();
        let _ = writeln!(s, "{}: {}", c.index, images.join(", "));
    }
    s
}

#[derive(Serialize)]
struct SubgroupClass {
    representative: usize,
    order: usize,
    size: usize,
    normal: bool,
    generators: Vec<String>,
}

#[derive(Serialize)]
struct SubgroupsReport {
    group_order: usize,
    subgroup_count: usize,
    classes: Vec<SubgroupClass>,
}

fn subgroups_report(cfg: &RunConfig, g: &str) -> Result<SubgroupsReport> {
    let l = lattice(cfg, g)?;
    Ok(SubgroupsReport {
        group_order: l.table().len(),
        subgroup_count: l.len(),
        classes: l
            .classes()
            .iter()
            .map(|c| {
                let rep = c.representative;
                SubgroupClass {
                    representative: rep,
                    order: l.order(rep),
                    size: c.members.len(),
                    normal: c.members.len() == 1,
                    generators: l
                        .subgroup(rep)
                        .generators()
                        .iter()
                        .map(|&x| l.table().element(x).to_string())
                        .collect(),
                }
            })
            .collect(),
    })
}

fn text_subgroups(r: &SubgroupsReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "|G| = {}: {} subgroups in {} conjugacy classes",
        r.group_order,
        r.subgroup_count,
        r.classes.len()
    );
    for (i, c) in r.classes.iter().enumerate() {
        let _ = writeln!(
            s,
            "class {i}: order {}, {} conjugate{}{}, generated by {}",
            c.order,
            c.size,
            if c.size == 1 { "" } else { "s" },
            if c.normal { ", normal" } else { "" },
            if c.generators.is_empty() {
                "()".to_string()
            } else {
                c.generators.join(", ")
            }
        );
    }
    s
}

#[derive(Serialize)]
struct SectionRow {
    orbit: usize,
    top_order: usize,
    bottom_order: usize,
    orbit_size: usize,
    minimal: bool,
    normalizer_order: usize,
    gamma_order: usize,
}

#[derive(Serialize)]
struct SectionsReport {
    group_order: usize,
    subquotient_order: usize,
    orbits: Vec<SectionRow>,
}

fn sections_report(cfg: &RunConfig, g: &str, h: &str) -> Result<SectionsReport> {
    let l = lattice(cfg, g)?;
    let out = out_group(&parse_group(h)?, cfg.iso_limit)?;
    let ev = Evaluator::new(&l, &out)?;
    Ok(SectionsReport {
        group_order: l.table().len(),
        subquotient_order: out.table().len(),
        orbits: ev
            .orbits()
            .iter()
            .enumerate()
            .map(|(i, o)| SectionRow {
                orbit: i,
                top_order: l.order(o.rep.top),
                bottom_order: l.order(o.rep.bottom),
                orbit_size: o.orbit_size,
                minimal: o.minimal,
                normalizer_order: l.order(o.normalizer),
                gamma_order: o.gamma_image().len(),
            })
            .collect(),
    })
}

fn text_sections(r: &SectionsReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "|G| = {}, |H| = {}: {} section orbit{}",
        r.group_order,
        r.subquotient_order,
        r.orbits.len(),
        if r.orbits.len() == 1 { "" } else { "s" }
    );
    if !r.orbits.is_empty() {
        let _ = writeln!(s, "orbit  |T|  |S|  size  minimal  |N_G(T,S)|  |Gamma|");
    }
    for o in &r.orbits {
        let _ = writeln!(
            s,
            "{:>5}  {:>3}  {:>3}  {:>4}  {:>7}  {:>10}  {:>7}",
            o.orbit,
            o.top_order,
            o.bottom_order,
            o.orbit_size,
            if o.minimal { "yes" } else { "no" },
            o.normalizer_order,
            o.gamma_order
        );
    }
    s
}

fn method_name(r: &EvaluationReport) -> String {
    serde_json::to_value(r.method)
        .ok()
        .and_then(|v| v.as_str().map(String::from))
        .unwrap_or_default()
}

fn claim_text(c: Claim) -> String {
    match c {
        Claim::Nonvanishing => "nonvanishing".into(),
        Claim::Dimension(d) => format!("dimension {d}"),
        Claim::ClosedFormulaApplies => "closed formula applies".into(),
    }
}

fn text_eval(r: &EvaluationReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "|G| = {}, |H| = {}, module {} of dimension {} over {}",
        r.group_order, r.subquotient_order, r.module, r.module_dim, r.field
    );
    let _ = writeln!(s, "section orbits: {}", r.orbit_count);
    let _ = writeln!(
        s,
        "dimension: {}{}",
        r.dim,
        if r.vanishes { " (vanishes)" } else { "" }
    );
    let _ = writeln!(s, "method: {}", method_name(r));
    let _ = writeln!(s, "lower bound: {}", r.lower_bound);
    if let Some(c) = r.closed_formula {
        let _ = writeln!(s, "closed formula: {c}");
    }
    if let Some(k) = r.rank_dim {
        let _ = writeln!(s, "rank: {k}");
    }
    for t in &r.per_orbit_traces {
        let _ = writeln!(
            s,
            "orbit {}: {}, trace dimension {}",
            t.orbit,
            if t.minimal { "minimal" } else { "not minimal" },
            t.trace_dim
        );
    }
    let tags: Vec<String> = r.certificates.iter().map(|c| c.kind.tag().to_string()).collect();
    let _ = writeln!(
        s,
        "certificates: {}",
        if tags.is_empty() { "none".into() } else { tags.join(" ") }
    );
    s
}

fn text_certify(r: &EvaluationReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "dimension: {}{}",
        r.dim,
        if r.vanishes { " (vanishes)" } else { "" }
    );
    if r.certificates.is_empty() {
        let _ = writeln!(s, "no certificate applies");
    }
    for c in &r.certificates {
        let _ = writeln!(
            s,
            "({}) {}: {}; {}",
            c.kind.tag(),
            c.kind.name(),
            claim_text(c.claim),
            c.witness
        );
    }
    s
}

/// The sign examples over the chosen field; in characteristic 2 the sign
/// module cannot be built and the load error is the expected outcome.
#[derive(Serialize)]
struct SignCase {
    group: &'static str,
    outcome: String,
    expected: bool,
}

#[derive(Serialize)]
struct SelftestReport {
    criteria: Vec<CriterionReport>,
    extra: Vec<SignCase>,
}

fn sign_cases(cfg: &RunConfig) -> Vec<SignCase> {
    if cfg.field == Field::Rationals {
        return Vec::new();
    }
    ["S5", "SL(2,5)"]
        .into_iter()
        .map(|g| match evaluate(cfg, g, "A5", "sign") {
            Ok(r) => SignCase {
                group: g,
                outcome: format!("dimension {}", r.dim),
                expected: true,
            },
            Err(e) => SignCase {
                group: g,
                outcome: e.to_string(),
                expected: matches!(e, Error::Module(_)) && cfg.field == Field::Prime(2),
            },
        })
        .collect()
}

fn text_selftest(r: &SelftestReport) -> String {
    let mut s = String::new();
    for c in &r.criteria {
        let _ = writeln!(
            s,
            "criterion {}: {} | {} | {} checks | {:.2}s",
            c.id,
            if c.passed { "PASS" } else { "FAIL" },
            c.title,
            c.checks,
            c.seconds
        );
        for f in c.failures.iter().take(10) {
            let _ = writeln!(s, "    {f}");
        }
    }
    for e in &r.extra {
        let _ = writeln!(
            s,
            "sign over A5 in {}: {}{}",
            e.group,
            e.outcome,
            if e.expected { " (expected)" } else { "" }
        );
    }
    let passed = r.criteria.iter().filter(|c| c.passed).count();
    let _ = writeln!(s, "{passed}/{} criteria passed", r.criteria.len());
    s
}
