use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use clap::ValueEnum;
use log::info;
use rayon::prelude::*;
use serde::Serialize;

use restrep::algebra::AlgebraJson;
use restrep::heisenberg::{build_scenario, central_extension_check, cgm_check, rank_row, CgmCertificate, RankRow};
use restrep::hopf::WANG_STRUCTURES;
use restrep::klein::{check_basev_formula, check_pb_witness, hom_table, klein_algebra, sample_isotropy, system_invertible};
use restrep::module::{block_tensor_table, ModuleJson};
use restrep::pipoint::{format_coords, nobility, point_module, projective_points, support, Nobility, PointFamily};
use restrep::wild::{wild_abelian_isotropy_check, WildCase, WildCertificate};
use restrep::{Algebra, Comultiplication, Elem, Field, Representation};

use crate::report::{Report, Table};

pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    Klein,
    Twodim,
    Heisenberg,
    Witt,
    WangTable,
    Support,
    AbelianWild,
    Cgm,
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.to_possible_value().expect("no skipped variants").get_name())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    pub p: Option<u32>,
    pub r: Option<usize>,
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub field_ext: Option<u32>,
    pub seed: u64,
    pub trials: usize,
}

#[derive(Debug)]
pub enum RunError {
    /// Bad flags or input files: exit status 2.
    Usage(String),
    /// The computation itself failed.
    Core(restrep::Error),
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunError::Usage(s) => write!(f, "{s}"),
            RunError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<restrep::Error> for RunError {
    fn from(e: restrep::Error) -> RunError {
        RunError::Core(e)
    }
}

type Result<T> = std::result::Result<T, RunError>;

fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(RunError::Usage(msg.into()))
}

fn prime_field(p: u32, e: u32) -> Result<Field> {
    Field::new(p, e).map_err(|err| RunError::Usage(format!("no field GF({p}^{e}): {err}")))
}

fn odd_prime(p: u32) -> Result<u32> {
    if p < 3 || Field::prime(p).is_err() {
        return usage(format!("--p must be an odd prime, got {p}"));
    }
    Ok(p)
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return usage("--trials must be positive");
        }
        if let Some(e) = self.field_ext {
            if !(1..=4).contains(&e) {
                return usage(format!("--field-ext must lie in 1..=4, got {e}"));
            }
        }
        match self.scenario {
            Scenario::Klein => {
                if self.p.is_some_and(|p| p != 2) {
                    return usage("klein requires p=2");
                }
                if self.n.is_some_and(|n| n == 0 || n > 6) {
                    return usage("klein: --n must lie in 1..=6");
                }
            }
            Scenario::Heisenberg => {
                let p = odd_prime(self.p.unwrap_or(3))?;
                if self.r.is_some_and(|r| r == 0 || r > p as usize) {
                    return usage(format!("heisenberg: --r must lie in 1..={p}"));
                }
            }
            Scenario::Cgm => {
                odd_prime(self.p.unwrap_or(3))?;
                if self.n.is_some_and(|n| n == 0) {
                    return usage("cgm: --n must be positive");
                }
            }
            Scenario::Witt => {
                prime_field(self.p.unwrap_or(2), 1)?;
                if self.r.is_some_and(|r| r != 1 && r != 2) {
                    return usage("witt: --r must be 1 or 2");
                }
            }
            Scenario::Twodim | Scenario::WangTable | Scenario::Support | Scenario::AbelianWild => {
                if let Some(p) = self.p {
                    prime_field(p, 1)?;
                }
            }
        }
        Ok(())
    }

    fn ext_or(&self, default: u32) -> u32 {
        self.field_ext.unwrap_or(default)
    }
}

pub fn run(cfg: &ScenarioConfig) -> Result<Report> {
    cfg.validate()?;
    let config = serde_json::to_value(cfg).expect("config serializes");
    let mut report = Report::new(&cfg.scenario.to_string(), config);
    info!("running {}", cfg.scenario);
    match cfg.scenario {
        Scenario::Klein => klein(cfg, &mut report)?,
        Scenario::Twodim => twodim(cfg, &mut report)?,
        Scenario::Heisenberg => heisenberg(cfg, &mut report)?,
        Scenario::Witt => witt(cfg, &mut report)?,
        Scenario::WangTable => wang_table(cfg, &mut report)?,
        Scenario::Support => support_scenario(cfg, &mut report)?,
        Scenario::AbelianWild => abelian_wild(cfg, &mut report)?,
        Scenario::Cgm => cgm(cfg, &mut report)?,
    }
    Ok(report)
}

fn yes(b: bool) -> String {
    if b { "yes" } else { "no" }.to_string()
}

fn klein(cfg: &ScenarioConfig, report: &mut Report) -> Result<()> {
    let e = cfg.ext_or(2);
    let max_n = cfg.n.unwrap_or(4);
    let a = klein_algebra(e)?;
    let f = a.field().clone();
    let points = projective_points(&f, 2);

    let jobs: Vec<(&str, &Vec<Elem>)> =
        WANG_STRUCTURES.iter().flat_map(|s| points.iter().map(move |pt| (*s, pt))).collect();
    let reports = jobs
        .par_iter()
        .map(|&(s, pt)| {
            let d = Comultiplication::named(&a, s)?;
            let mut out = Vec::new();
            for n in 1..=max_n {
                for m in 1..=max_n {
                    out.push(check_basev_formula(&d, pt, n, m)?);
                }
            }
            Ok(out)
        })
        .collect::<restrep::Result<Vec<_>>>()?;
    let mut table = Table::new(
        "basev_products",
        &["structure", "point", "n", "m", "noble", "expected", "computed", "match", "free_rank", "free_rank_expected"],
    );
    for r in reports.iter().flatten() {
        table.push(vec![
            r.structure.clone(),
            r.point.clone(),
            r.n.to_string(),
            r.m.to_string(),
            yes(r.noble),
            r.expected.clone(),
            r.computed.clone(),
            yes(r.matches),
            r.free_rank.to_string(),
            r.free_rank_expected.to_string(),
        ]);
        let name = format!("{} {} n={} m={}", r.structure, r.point, r.n, r.m);
        if r.noble {
            let exp = format!("{} (free rank {})", r.expected, r.free_rank_expected);
            let got = format!("{} (free rank {})", r.computed, r.free_rank);
            report.check(name, exp, got, r.passes());
        } else {
            report.check(name, format!("free rank {}", r.free_rank_expected), format!("free rank {}", r.free_rank), r.passes());
        }
    }
    report.tables.push(table);

    let mut witnesses = Table::new("pb_witnesses", &["structure", "point", "s2_rank_structure", "s2_rank_lie", "certified"]);
    for s in WANG_STRUCTURES {
        let d = Comultiplication::named(&a, s)?;
        for pt in &points {
            if nobility(s, &f, pt)? == Nobility::Noble {
                continue;
            }
            let w = check_pb_witness(&d, pt)?;
            witnesses.push(vec![
                w.structure.clone(),
                w.point.clone(),
                w.s2_rank_structure.to_string(),
                w.s2_rank_lie.to_string(),
                yes(w.certified),
            ]);
            report.check(
                format!("witness {} {}", w.structure, w.point),
                format!("s2 rank ≠ {}", w.s2_rank_lie),
                format!("s2 rank {}", w.s2_rank_structure),
                w.certified,
            );
        }
    }
    report.tables.push(witnesses);

    let cap = 2 * max_n;
    let mut homs = Table::new("hom_systems", &["point", "cap", "h", "free", "invertible"]);
    for pt in &points {
        let t = hom_table(&a, pt, cap)?;
        let inv = system_invertible(&t);
        let h: Vec<String> = t.h.iter().map(|row| row.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")).collect();
        let free: Vec<String> = t.free.iter().map(|x| x.to_string()).collect();
        homs.push(vec![t.point.clone(), cap.to_string(), h.join("; "), free.join(" "), yes(inv)]);
        report.check(format!("hom system {} up to {cap}", t.point), "invertible", if inv { "invertible" } else { "singular" }, inv);
    }
    report.tables.push(homs);

    let family = PointFamily::projective(&a, e)?;
    let iso_n = max_n.min(3);
    let samples = points
        .par_iter()
        .enumerate()
        .map(|(i, pt)| sample_isotropy(&family, pt, iso_n, cfg.trials, cfg.seed ^ i as u64))
        .collect::<restrep::Result<Vec<_>>>()?;
    let mut iso = Table::new("isotropy", &["point", "automorphism", "n", "fixes_point", "isomorphic"]);
    for s in samples.iter().flatten() {
        iso.push(vec![s.point.clone(), s.automorphism.clone(), s.n.to_string(), yes(s.fixes_point), yes(s.isomorphic)]);
        report.check(
            format!("isotropy {} {} n={}", s.point, s.automorphism, s.n),
            "twist isomorphic",
            if s.isomorphic { "twist isomorphic" } else { "twist not isomorphic" },
            s.isomorphic,
        );
    }
    report.tables.push(iso);
    Ok(())
}

fn twodim(cfg: &ScenarioConfig, report: &mut Report) -> Result<()> {
    let p = cfg.p.unwrap_or(3);
    if p == 2 {
        report.notes.push("no PA violation at p=2: the twisted construction needs p > 2".into());
        return Ok(());
    }
    let c = wild_abelian_isotropy_check(WildCase::TwoDim { p })?;
    let t = c.twodim.as_ref().expect("twodim report");
    let mut table = Table::new(
        "twodim",
        &["p", "automorphism", "point", "restriction", "max_part", "expected_max_part", "square_is_multiple", "square_has_full_part", "multiple_has_full_part"],
    );
    table.push(vec![
        p.to_string(),
        c.automorphism.clone(),
        c.point.clone(),
        t.twisted_restriction.clone(),
        t.max_part.to_string(),
        t.expected_max_part.to_string(),
        yes(t.square_is_multiple),
        yes(t.square_has_full_part),
        yes(t.multiple_has_full_part),
    ]);
    report.tables.push(table);
    report.check_eq("twist fixes the point", "yes", yes(c.fixes_point));
    report.check_eq("M⊗M ≅ pM", "yes", yes(t.square_is_multiple));
    report.check_eq("largest block of the twisted restriction", t.expected_max_part, t.max_part);
    report.check_eq(format!("twisted square has a J{p}"), "yes", yes(t.square_has_full_part));
    report.check_eq(format!("twisted pM has a J{p}"), "no", yes(t.multiple_has_full_part));
    report.certificate("twodim_certificate", &c);
    Ok(())
}

fn opt(x: Option<i64>) -> String {
    x.map_or_else(|| "-".into(), |v| v.to_string())
}

fn rank_rows(p: u32, rs: &[usize]) -> Result<Vec<RankRow>> {
    Ok(rs.par_iter().map(|&r| build_scenario(p, r).and_then(|sc| rank_row(&sc))).collect::<restrep::Result<Vec<_>>>()?)
}

fn heisenberg(cfg: &ScenarioConfig, report: &mut Report) -> Result<()> {
    let p = cfg.p.unwrap_or(3);
    let rs: Vec<usize> = match cfg.r {
        Some(r) => vec![r],
        None => (1..=p as usize).collect(),
    };
    let rows = rank_rows(p, &rs)?;
    let mut table = Table::new(
        "rank_table",
        &["p", "r", "rank", "rank_expected", "nullity", "nullity_expected", "rank_square", "rank_square_expected", "tau", "tau_expected", "jordan_type", "match"],
    );
    for row in &rows {
        table.push(vec![
            row.p.to_string(),
            row.r.to_string(),
            row.rank.to_string(),
            row.rank_expected.to_string(),
            row.nullity.to_string(),
            row.nullity_expected.to_string(),
            row.rank_square.to_string(),
            opt(row.rank_square_expected),
            row.tau.to_string(),
            opt(row.tau_expected),
            row.jordan_type.clone(),
            yes(row.matches()),
        ]);
        let exp = format!(
            "rank {}, nullity {}, rank² {}, τ {}",
            row.rank_expected,
            row.nullity_expected,
            opt(row.rank_square_expected),
            opt(row.tau_expected)
        );
        let got = format!("rank {}, nullity {}, rank² {}, τ {}", row.rank, row.nullity, row.rank_square, row.tau);
        report.check(format!("rank row p={p} r={}", row.r), exp, got, row.matches());
    }
    report.tables.push(table);
    if cfg.r.is_none() {
        cgm_checks(report, &cgm_check(p)?);
    }
    Ok(())
}

fn cgm_checks(report: &mut Report, c: &CgmCertificate) {
    report.check_eq("twisted CGM identity fails", "yes", yes(c.unequal));
    report.check_eq("untwisted restriction matches Mackey", "yes", yes(c.untwisted_matches_mackey));
    report.check_eq("twist fixes the point of x", "yes", yes(c.phi_fixes_point));
    report.check_eq("J1 count of L1⊗L1 equals its closed form", c.left_closed_form, c.left);
    report.check_eq("2Στ equals its closed form", c.right_closed_form, c.right);
    report.certificate("cgm_certificate", c);
}

fn cgm(cfg: &ScenarioConfig, report: &mut Report) -> Result<()> {
    let p = cfg.p.unwrap_or(3);
    cgm_checks(report, &cgm_check(p)?);
    let n = match cfg.n {
        Some(n) => Some(n),
        None if p == 3 => Some(2),
        None => None,
    };
    if let Some(n) = n {
        let c = central_extension_check(p, n)?;
        report.check(
            format!("central extension g_{n} at p={p}"),
            format!("{} (untwisted {})", c.expected, c.untwisted_expected),
            format!("{} (untwisted {})", c.twisted_restriction, c.untwisted_restriction),
            c.matches,
        );
        report.certificate("central_extension", &c);
    }
    Ok(())
}

fn witt(cfg: &ScenarioConfig, report: &mut Report) -> Result<()> {
    let p = cfg.p.unwrap_or(2);
    let rs = cfg.r.map_or_else(|| vec![1u32, 2], |r| vec![r as u32]);
    let f = Field::prime(p)?;
    for r in rs {
        let b = (p as usize).pow(r);
        let a = Algebra::truncated_polynomial(&f, &[b])?;
        let names: &[&str] = if r == 1 { &["lie_primitive", "oorttate_Zp"] } else { &["lie_primitive", "witt_G2", "witt_Zp2"] };
        let tables = names
            .par_iter()
            .map(|s| Comultiplication::named(&a, s).and_then(|d| block_tensor_table(&d)))
            .collect::<restrep::Result<Vec<_>>>()?;
        let mut cols = vec!["i", "j"];
        cols.extend_from_slice(names);
        cols.push("agree");
        let mut table = Table::new(&format!("witt_p{p}_r{r}"), &cols);
        let mut agreeing = 0;
        for i in 0..b {
            for j in 0..b {
                let cells: Vec<String> = tables.iter().map(|t| t[i][j].to_string()).collect();
                let agree = cells.windows(2).all(|w| w[0] == w[1]);
                agreeing += usize::from(agree);
                let mut row = vec![(i + 1).to_string(), (j + 1).to_string()];
                row.extend(cells);
                row.push(yes(agree));
                table.push(row);
            }
        }
        report.tables.push(table);
        report.check_eq(format!("p={p} r={r}: structures agree on all products"), b * b, agreeing);
        for (s, t) in names.iter().zip(&tables) {
            let units = (0..b).filter(|&i| t[0][i].to_string() == format!("J{}", i + 1)).count();
            report.check_eq(format!("p={p} r={r} {s}: J1⊗Ji ≅ Ji"), b, units);
        }
    }
    Ok(())
}

fn expected_noble_count(structure: &str, q: usize, p: usize) -> usize {
    match structure {
        "wang_Ga2" => 1,
        "wang_Ga1xZp" => 2,
        "wang_ZpZp" => p + 1,
        _ => q + 1,
    }
}

fn wang_table(cfg: &ScenarioConfig, report: &mut Report) -> Result<()> {
    let p = cfg.p.unwrap_or(2);
    let e = cfg.ext_or(2);
    let f = prime_field(p, e)?;
    let a = Algebra::truncated_polynomial(&f, &[p as usize, p as usize])?;
    let points = projective_points(&f, 2);
    let mut table = Table::new("nobility", &["structure", "point", "nobility"]);
    for s in WANG_STRUCTURES {
        let d = Comultiplication::named(&a, s)?;
        let verified = d.verify();
        report.check(
            format!("{s} satisfies the Hopf axioms"),
            "ok",
            verified.as_ref().map_or_else(|e| e.to_string(), |_| "ok".into()),
            verified.is_ok(),
        );
        let mut noble = 0;
        for pt in &points {
            let nb = nobility(s, &f, pt)?;
            noble += usize::from(nb == Nobility::Noble);
            table.push(vec![s.to_string(), format_coords(&f, pt), format!("{nb:?}").to_lowercase()]);
        }
        report.check_eq(format!("{s}: noble points over GF({p}^{e})"), expected_noble_count(s, f.order() as usize, p as usize), noble);
    }
    report.tables.push(table);

    if p == 2 {
        let a = klein_algebra(e)?;
        let mut witnesses = Table::new("pb_witnesses", &["structure", "point", "s2_rank_structure", "s2_rank_lie", "certified"]);
        for s in WANG_STRUCTURES {
            let d = Comultiplication::named(&a, s)?;
            for pt in &points {
                if nobility(s, &f, pt)? == Nobility::Noble {
                    continue;
                }
                let w = check_pb_witness(&d, pt)?;
                witnesses.push(vec![
                    w.structure.clone(),
                    w.point.clone(),
                    w.s2_rank_structure.to_string(),
                    w.s2_rank_lie.to_string(),
                    yes(w.certified),
                ]);
                report.check(
                    format!("witness {} {}", w.structure, w.point),
                    format!("s2 rank ≠ {}", w.s2_rank_lie),
                    format!("s2 rank {}", w.s2_rank_structure),
                    w.certified,
                );
            }
        }
        report.tables.push(witnesses);
    }
    Ok(())
}

fn support_scenario(cfg: &ScenarioConfig, report: &mut Report) -> Result<()> {
    let p = cfg.p.unwrap_or(2);
    let e = cfg.ext_or(if p == 2 { 2 } else { 1 });
    let f = prime_field(p, e)?;
    let a = Algebra::truncated_polynomial(&f, &[p as usize, p as usize])?;
    let family = PointFamily::projective(&a, e)?;
    let all: BTreeSet<String> = family.points.iter().map(|pt| pt.label()).collect();
    let mut table = Table::new("supports", &["module", "dim", "support"]);
    let mut record = |name: String, m: &Representation, expected: BTreeSet<String>, report: &mut Report| -> Result<()> {
        let s = support(m, &family)?;
        table.push(vec![name.clone(), m.dim().to_string(), s.points.join(" ")]);
        let got: BTreeSet<String> = s.points.iter().cloned().collect();
        report.check_eq(format!("support of {name}"), fmt_set(&expected), fmt_set(&got));
        Ok(())
    };
    for pt in &family.points {
        let v = point_module(pt)?;
        record(format!("V({})", pt.label()), &v, BTreeSet::from([pt.label()]), report)?;
    }
    record("k".into(), &Representation::trivial(&a), all, report)?;
    record("free(1)".into(), &Representation::free(&a, 1), BTreeSet::new(), report)?;
    if p == 2 && family.points.len() > 1 {
        let (p0, p1) = (&family.points[0], &family.points[1]);
        let sum = point_module(p0)?.direct_sum(&point_module(p1)?)?;
        record(format!("V({})⊕V({})", p0.label(), p1.label()), &sum, BTreeSet::from([p0.label(), p1.label()]), report)?;
    }
    report.tables.push(table);
    Ok(())
}

fn fmt_set(s: &BTreeSet<String>) -> String {
    format!("{{{}}}", s.iter().cloned().collect::<Vec<_>>().join(", "))
}

fn wild_cases(cfg: &ScenarioConfig) -> Vec<WildCase> {
    if let Some(m) = cfg.m {
        let (p, n) = (cfg.p.unwrap_or(2), cfg.n.unwrap_or(1) as u32);
        return vec![WildCase::Mixed { p, n, m: m as u32 }];
    }
    if let Some(p) = cfg.p {
        let mut v = Vec::new();
        if p > 2 {
            v.push(WildCase::TwoDim { p });
        }
        v.push(WildCase::Mixed { p, n: 1, m: 2 });
        return v;
    }
    vec![
        WildCase::Klein3Gen,
        WildCase::Equal2Power { n: 2 },
        WildCase::Equal2Power { n: 3 },
        WildCase::Mixed { p: 2, n: 1, m: 2 },
        WildCase::Mixed { p: 3, n: 1, m: 2 },
        WildCase::Mixed { p: 2, n: 2, m: 3 },
        WildCase::TwoDim { p: 3 },
    ]
}

fn abelian_wild(cfg: &ScenarioConfig, report: &mut Report) -> Result<()> {
    let cases = wild_cases(cfg);
    let certs = cases
        .par_iter()
        .map(|&case| {
            wild_abelian_isotropy_check(case).map_err(|e| match e {
                restrep::Error::HypothesisNotMet(s) => RunError::Usage(s),
                other => RunError::Core(other),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut table = Table::new(
        "wild_isotropies",
        &["case", "automorphism", "point", "fixes_point", "restriction", "free_part", "hypothesis_met", "intermediate_part", "mixed_sizes"],
    );
    let push = |c: &WildCertificate, table: &mut Table| {
        table.push(vec![
            c.case.clone(),
            c.automorphism.clone(),
            c.point.clone(),
            yes(c.fixes_point),
            c.restriction.clone(),
            c.free_part.to_string(),
            yes(c.hypothesis_met),
            yes(c.intermediate_part),
            yes(c.mixed_sizes),
        ]);
    };
    for c in &certs {
        push(c, &mut table);
        report.check(
            format!("{}: {} fixes the point, restriction neither trivial nor free", c.case, c.automorphism),
            format!("fixes point, not all J1, not all J{}", c.free_part),
            format!("fixes point {}, restriction {}", yes(c.fixes_point), c.restriction),
            c.passes(),
        );
        if let Some(aux) = &c.auxiliary {
            push(aux, &mut table);
            report.check(
                format!("{}: {} has mixed block sizes", aux.case, aux.automorphism),
                "mixed sizes",
                aux.restriction.clone(),
                aux.passes() && aux.mixed_sizes,
            );
        }
    }
    report.tables.push(table);
    for c in &certs {
        report.certificate(&format!("wild {}", c.case), c);
    }
    Ok(())
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| RunError::Usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| RunError::Usage(format!("{}: {e}", path.display())))
}

/// Support of a module read from JSON over the projective family of its algebra.
pub fn support_from_files(algebra: &Path, module: &Path, ext: Option<u32>) -> Result<Report> {
    let aj: AlgebraJson = read_json(algebra)?;
    let mj: ModuleJson = read_json(module)?;
    let a: Arc<Algebra> = Algebra::from_json(&aj).map_err(|e| RunError::Usage(format!("{}: {e}", algebra.display())))?;
    let m = Representation::from_json(&a, &mj).map_err(|e| RunError::Usage(format!("{}: {e}", module.display())))?;
    let e = ext.unwrap_or(a.field().e());
    if e % a.field().e() != 0 {
        return usage(format!("--field-ext {e} is not a multiple of the base degree {}", a.field().e()));
    }
    let family = PointFamily::projective(&a, e)?;
    let s = support(&m, &family)?;
    let config = serde_json::json!({
        "algebra": algebra.display().to_string(),
        "module": module.display().to_string(),
        "field_ext": e,
    });
    let mut report = Report::new("support", config);
    let mut table = Table::new("support", &["module", "dim", "family", "support"]);
    table.push(vec![m.label().to_string(), m.dim().to_string(), s.family.clone(), s.points.join(" ")]);
    report.tables.push(table);
    report.certificate("support", &s);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(scenario: Scenario) -> ScenarioConfig {
        ScenarioConfig { scenario, p: None, r: None, n: None, m: None, field_ext: None, seed: DEFAULT_SEED, trials: 2 }
    }

    #[test]
    fn klein_rejects_odd_p() {
        let c = ScenarioConfig { p: Some(3), ..cfg(Scenario::Klein) };
        assert!(matches!(c.validate(), Err(RunError::Usage(_))));
    }

    #[test]
    fn heisenberg_rejects_even_p_and_big_r() {
        let c = ScenarioConfig { p: Some(2), ..cfg(Scenario::Heisenberg) };
        assert!(matches!(c.validate(), Err(RunError::Usage(_))));
        let c = ScenarioConfig { p: Some(3), r: Some(4), ..cfg(Scenario::Heisenberg) };
        assert!(matches!(c.validate(), Err(RunError::Usage(_))));
    }

    #[test]
    fn twodim_at_two_is_a_note() {
        let r = run(&ScenarioConfig { p: Some(2), ..cfg(Scenario::Twodim) }).unwrap();
        assert!(r.checks.is_empty() && r.passed());
        assert!(r.notes[0].contains("no PA violation at p=2"));
    }

    #[test]
    fn witt_small_case_passes() {
        let r = run(&ScenarioConfig { p: Some(3), r: Some(1), ..cfg(Scenario::Witt) }).unwrap();
        assert!(r.passed(), "{}", r.diff());
        assert_eq!(r.tables[0].rows.len(), 9);
    }

    #[test]
    fn wang_table_counts_noble_points() {
        let r = run(&ScenarioConfig { p: Some(3), field_ext: Some(2), ..cfg(Scenario::WangTable) }).unwrap();
        assert!(r.passed(), "{}", r.diff());
    }

    #[test]
    fn mixed_case_needs_m_at_least_two() {
        let c = ScenarioConfig { p: Some(3), n: Some(1), m: Some(1), ..cfg(Scenario::AbelianWild) };
        assert!(matches!(run(&c), Err(RunError::Usage(_))));
    }
}
