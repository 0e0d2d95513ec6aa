use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use pfilt_core::certify::{certify, criteria, Certificate, CriteriaReport, Status};
use pfilt_core::g1b::decompose;
use pfilt_core::rootsys::RootSystem;
use pfilt_core::scan::{parse_box, scan_box, summary, DimCheck, ScanJob, ScanRow};
use pfilt_core::simples::{DecompTable, Simples};
use pfilt_core::weights::{box_weights, in_one_wall_region, split, Weight};
use serde_json::json;

use crate::cache::Cache;
use crate::{Cli, Command, Format, SystemArgs};

pub const EXIT_INVARIANT: u8 = 2;
pub const EXIT_UNKNOWN: u8 = 3;

pub fn parse_lambda(s: &str) -> Result<Weight> {
    let inner = s.trim().trim_start_matches(['(', '[']).trim_end_matches([')', ']']);
    if inner.trim().is_empty() {
        bail!("empty weight {s:?}");
    }
    let coords = inner
        .split(',')
        .map(|c| c.trim().parse::<i64>().with_context(|| format!("bad coordinate {c:?} in {s:?}")))
        .collect::<Result<Vec<_>>>()?;
    Ok(Weight(coords))
}

struct Session {
    cache: Option<Cache>,
}

impl Session {
    fn simples(&self, sys: &SystemArgs) -> Result<Simples> {
        let rs = RootSystem::parse(&sys.ty)?;
        if let Some(c) = &self.cache {
            let n = c.load_weyl(&rs);
            log::debug!("loaded {n} cached Weyl characters");
        }
        let s = Simples::with_bundled(&rs, sys.p)?;
        if let Some(path) = &sys.table {
            let t = DecompTable::ingest(path, &rs).with_context(|| format!("reading {}", path.display()))?;
            s.ingest(t)?;
        }
        if let Some(c) = &self.cache {
            let bound = sys.p as i64 - 1;
            match c.load_table(&rs, sys.p, bound) {
                Some(t) => {
                    if let Err(e) = s.ingest(t) {
                        log::warn!("cached table rejected, recomputing: {e}");
                        c.store_table(&s.jantzen_solver(bound)?, bound)?;
                    }
                }
                None => c.store_table(&s.jantzen_solver(bound)?, bound)?,
            }
        }
        Ok(s)
    }

    fn finish(&self, rs: &RootSystem) -> Result<()> {
        if let Some(c) = &self.cache {
            c.store_weyl(rs)?;
        }
        Ok(())
    }
}

pub fn run(cli: Cli) -> Result<ExitCode> {
    let session = Session {
        cache: cli.cache_dir.map(Cache::open).transpose()?,
    };
    match cli.command {
        Command::Info { name, ty, format } => {
            let name = name.or(ty).expect("clap enforces a type");
            info(&RootSystem::parse(&name)?, format)
        }
        Command::Criteria { sys, lambda } => {
            let s = session.simples(&sys)?;
            let report = criteria(&s, &parse_lambda(&lambda)?)?;
            print!("{}", render_criteria(&report, sys.format));
            session.finish(s.system())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Certify { sys, n, lambda, strict } => {
            let s = session.simples(&sys)?;
            let cert = certify(&s, &parse_lambda(&lambda)?, n)?;
            let dim_check = check_certificate(&s, &cert)?;
            print!("{}", render_certificate(&cert, dim_check, sys.format));
            session.finish(s.system())?;
            if dim_check == DimCheck::Mismatch {
                eprintln!("certificate for {} does not reassemble χ(λ)", cert.lambda);
                return Ok(ExitCode::from(EXIT_INVARIANT));
            }
            if strict && cert.status == Status::Unknown {
                return Ok(ExitCode::from(EXIT_UNKNOWN));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Scan { sys, n, bounds, strict } => {
            let (lo, hi) = parse_box(&bounds)?;
            let job = ScanJob {
                system: sys.ty.clone(),
                p: sys.p,
                n,
                lo,
                hi,
            };
            let s = session.simples(&sys)?;
            let rows = scan_box(&s, job.n, job.lo, job.hi)?;
            print!("{}", render_scan(&job, &rows, sys.format));
            session.finish(s.system())?;
            if rows.iter().any(|r| r.dim_check == DimCheck::Mismatch) {
                return Ok(ExitCode::from(EXIT_INVARIANT));
            }
            if strict && rows.iter().any(|r| r.certificate.status == Status::Unknown) {
                return Ok(ExitCode::from(EXIT_UNKNOWN));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::VerifyPaper => verify_examples(),
        Command::Table { sys, out } => {
            let s = session.simples(&sys)?;
            let t = s.jantzen_solver(i64::MAX)?;
            if !t.ambiguous().is_empty() {
                let list: Vec<String> = t.ambiguous().iter().map(ToString::to_string).collect();
                eprintln!("undetermined: {}", list.join(" "));
            }
            match out {
                Some(path) => t.export(&path)?,
                None => println!("{}", t.to_json()),
            }
            session.finish(s.system())?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn info(rs: &Arc<RootSystem>, format: Format) -> Result<ExitCode> {
    let simple: Vec<&Weight> = (0..rs.rank()).map(|i| rs.simple_root(i)).collect();
    let comps: Vec<_> = rs
        .components()
        .iter()
        .map(|c| {
            json!({
                "type": c.ty.to_string(),
                "h": c.coxeter_number(),
                "alpha0": rs.alpha0(c).weight,
            })
        })
        .collect();
    match format {
        Format::Json => {
            let v = json!({
                "type": rs.name(),
                "rank": rs.rank(),
                "h": rs.coxeter_number(),
                "positive_roots": rs.positive_roots().len(),
                "rho": rs.rho(),
                "simple_roots": simple,
                "components": comps,
            });
            println!("{v}");
        }
        Format::Tsv => {
            println!("type\trank\th\tpositive_roots\trho");
            println!("{}\t{}\t{}\t{}\t{}", rs.name(), rs.rank(), rs.coxeter_number(), rs.positive_roots().len(), rs.rho());
        }
        Format::Pretty => {
            println!("type            {}", rs.name());
            println!("rank            {}", rs.rank());
            println!("h               {}", rs.coxeter_number());
            println!("|R+|            {}", rs.positive_roots().len());
            println!("rho             {}", rs.rho());
            for c in rs.components() {
                println!("alpha0 [{}]     {}  (h = {})", c.ty, rs.alpha0(c).weight, c.coxeter_number());
            }
            for (i, a) in simple.iter().enumerate() {
                println!("alpha{:<10}{}", i + 1, a);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn render_criteria(r: &CriteriaReport, format: Format) -> String {
    let f = &r.flags;
    let hl = r.h_lambda.map_or("-".to_string(), |h| h.to_string());
    let i_set = r.i_lambda.as_ref().map_or("-".to_string(), |s| {
        let v: Vec<String> = s.iter().map(|i| (i + 1).to_string()).collect();
        format!("{{{}}}", v.join(","))
    });
    match format {
        Format::Json => format!("{}\n", serde_json::to_string(r).expect("report serializes")),
        Format::Tsv => format!(
            "lambda\tsmall\tlarge\tone_wall\tmain_bound\tglobal_bound\tI_lambda\th_lambda\th\n{}\t{}\t{}\t{}\t{}\t{}\t{i_set}\t{hl}\t{}\n",
            r.lambda, f.small, f.large, f.one_wall, f.main_bound, f.global_bound, r.h
        ),
        Format::Pretty => {
            let mut s = String::new();
            writeln!(s, "lambda        {}  (p = {})", r.lambda, r.p).unwrap();
            for (name, on) in [
                ("small", f.small),
                ("large", f.large),
                ("one_wall", f.one_wall),
                ("main_bound", f.main_bound),
                ("global_bound", f.global_bound),
            ] {
                writeln!(s, "{name:<14}{on}").unwrap();
            }
            writeln!(s, "I_lambda      {i_set}").unwrap();
            writeln!(s, "h_lambda      {hl}").unwrap();
            writeln!(s, "h             {}", r.h).unwrap();
            if !(f.small || f.large || f.one_wall || f.main_bound || f.global_bound) {
                writeln!(s, "no criterion applies").unwrap();
            }
            s
        }
    }
}

fn check_certificate(s: &Simples, cert: &Certificate) -> Result<DimCheck> {
    if !cert.status.has_lines() {
        return Ok(DimCheck::NotApplicable);
    }
    Ok(if cert.euler_identity_holds(s)? {
        DimCheck::Ok
    } else {
        DimCheck::Mismatch
    })
}

fn flag_of(status: Status) -> &'static str {
    match status {
        Status::Guaranteed(f) => f.as_str(),
        _ => "-",
    }
}

const TSV_HEADER: &str = "lambda\tstatus\tflag\tn_lines\tdim_check\n";

fn tsv_row(cert: &Certificate, dim_check: DimCheck) -> String {
    format!(
        "{}\t{}\t{}\t{}\t{}\n",
        cert.lambda,
        cert.status,
        flag_of(cert.status),
        cert.lines.len(),
        dim_check.as_str()
    )
}

fn render_certificate(cert: &Certificate, dim_check: DimCheck, format: Format) -> String {
    match format {
        Format::Json => format!("{}\n", cert.to_json()),
        Format::Tsv => format!("{TSV_HEADER}{}", tsv_row(cert, dim_check)),
        Format::Pretty => {
            let mut s = String::new();
            writeln!(s, "lambda  {}  p = {}  n = {}", cert.lambda, cert.p, cert.n).unwrap();
            writeln!(s, "status  {}", cert.status).unwrap();
            for l in &cert.lines {
                writeln!(s, "  {:>3} x L{} ⊗ ∇{}^({})", l.mult, l.mu0, l.mu1, cert.n).unwrap();
            }
            writeln!(s, "euler   {}", dim_check.as_str()).unwrap();
            s
        }
    }
}

fn render_scan(job: &ScanJob, rows: &[ScanRow], format: Format) -> String {
    let counts = summary(rows);
    let counts_line = counts
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(" ");
    match format {
        Format::Json => {
            eprintln!("{} rows: {counts_line}", rows.len());
            let certs: Vec<&Certificate> = rows.iter().map(|r| &r.certificate).collect();
            format!("{}\n", serde_json::to_string(&certs).expect("certificates serialize"))
        }
        Format::Tsv => {
            eprintln!("{} rows: {counts_line}", rows.len());
            let mut s = TSV_HEADER.to_string();
            for r in rows {
                s.push_str(&tsv_row(&r.certificate, r.dim_check));
            }
            s
        }
        Format::Pretty => {
            let mut s = String::new();
            writeln!(
                s,
                "{} p={} n={} box {}..{}",
                job.system, job.p, job.n, job.lo, job.hi
            )
            .unwrap();
            for r in rows {
                writeln!(
                    s,
                    "{:<12} {:<26} {:>3} lines  {}",
                    r.lambda.to_string(),
                    r.certificate.status.to_string(),
                    r.certificate.lines.len(),
                    r.dim_check.as_str()
                )
                .unwrap();
            }
            writeln!(s, "{} rows: {counts_line}", rows.len()).unwrap();
            s
        }
    }
}

type Check = Result<String, String>;

fn coxeter_fixture(name: &str, h: i64) -> Check {
    let rs = RootSystem::parse(name).map_err(|e| e.to_string())?;
    if rs.coxeter_number() == h {
        Ok(format!("{name}: h = {h}"))
    } else {
        Err(format!("{name}: h = {}, expected {h}", rs.coxeter_number()))
    }
}

fn sl3_region_fixture(p: u64) -> Check {
    let rs = RootSystem::parse("A2").map_err(|e| e.to_string())?;
    let s = Simples::with_bundled(&rs, p).map_err(|e| e.to_string())?;
    let pi = p as i64;
    let mut gap = 0;
    for lambda in box_weights(2, 0, pi * pi) {
        let r = criteria(&s, &lambda).map_err(|e| e.to_string())?;
        let l1 = split(&lambda, p, 1).lambda1;
        let small = l1[0] + l1[1] <= pi - 3;
        let large = lambda[0] >= pi && lambda[1] >= pi;
        if (r.flags.small, r.flags.large) != (small, large) {
            return Err(format!("A2 p={p} {lambda}: flags disagree with the region"));
        }
        if lambda[0] >= pi * (pi - 2) && lambda[1] < pi {
            gap += 1;
            if r.flags.small || r.flags.large {
                return Err(format!("A2 p={p} {lambda} should be outside both regions"));
            }
        }
    }
    Ok(format!("A2 p={p}: small/large region formula holds, {gap} gap weights uncovered"))
}

fn global_bound_fixture(name: &str, p: u64, hi: i64) -> Check {
    let rs = RootSystem::parse(name).map_err(|e| e.to_string())?;
    let s = Simples::with_bundled(&rs, p).map_err(|e| e.to_string())?;
    for lambda in box_weights(rs.rank(), 0, hi) {
        if !criteria(&s, &lambda).map_err(|e| e.to_string())?.flags.global_bound {
            return Err(format!("{name} p={p} {lambda}: global bound should hold"));
        }
    }
    Ok(format!("{name} p={p}: global bound holds on box 0..{hi}"))
}

fn one_wall_fixture() -> Check {
    let rs = RootSystem::parse("B2").map_err(|e| e.to_string())?;
    let s = Simples::with_bundled(&rs, 5).map_err(|e| e.to_string())?;
    let mut hits = 0;
    for lambda in box_weights(2, 0, 30) {
        let inside = in_one_wall_region(&rs, &lambda, 5).map_err(|e| e.to_string())?;
        let r = criteria(&s, &lambda).map_err(|e| e.to_string())?;
        if inside != r.flags.one_wall {
            return Err(format!("B2 p=5 {lambda}: one_wall flag {} but region {inside}", r.flags.one_wall));
        }
        hits += usize::from(inside);
    }
    Ok(format!("B2 p=5: one-wall criterion covers all {hits} weights of X(≤1) in box 0..30"))
}

fn sp4_list_fixture() -> Check {
    let rs = RootSystem::parse("B2").map_err(|e| e.to_string())?;
    let s = Simples::with_bundled(&rs, 2).map_err(|e| e.to_string())?;
    let f = decompose(&s, &Weight(vec![0, 0])).map_err(|e| e.to_string())?;
    let got: BTreeSet<(Weight, i64)> = f.factors.iter().map(|x| (x.weight.clone(), x.mult)).collect();
    let want: BTreeSet<(Weight, i64)> = [
        ((0, 0), 1),
        ((-2, 1), 1),
        ((2, -2), 1),
        ((0, -1), 1),
        ((-2, 0), 2),
        ((0, -2), 2),
        ((-4, 0), 1),
        ((-2, 2), 1),
    ]
    .into_iter()
    .map(|((a, b), m)| (Weight(vec![a, b]), m))
    .collect();
    if got == want {
        return Ok("B2 p=2: Ẑ1(0) has the listed 8 factors".into());
    }
    let fmt = |s: Vec<&(Weight, i64)>| {
        s.iter()
            .map(|(w, m)| format!("{w}x{m}"))
            .collect::<Vec<_>>()
            .join(" ")
    };
    Err(format!(
        "B2 p=2 Ẑ1(0): listed but not computed [{}], computed but not listed [{}]",
        fmt(want.difference(&got).collect()),
        fmt(got.difference(&want).collect())
    ))
}

fn sp4_p2_certificates() -> Check {
    let rs = RootSystem::parse("B2").map_err(|e| e.to_string())?;
    let s = Simples::with_bundled(&rs, 2).map_err(|e| e.to_string())?;
    for lambda in box_weights(2, 0, 8) {
        let c = certify(&s, &lambda, 1).map_err(|e| e.to_string())?;
        if !c.status.has_lines() {
            return Err(format!("B2 p=2 {lambda}: {}", c.status));
        }
    }
    Ok("B2 p=2: every certificate on box 0..8 is nonnegative".into())
}

fn verify_examples() -> Result<ExitCode> {
    let checks: Vec<Check> = vec![
        coxeter_fixture("A2", 3),
        coxeter_fixture("B2", 4),
        sl3_region_fixture(5),
        sl3_region_fixture(7),
        global_bound_fixture("A2", 3, 12),
        global_bound_fixture("B2", 11, 12),
        one_wall_fixture(),
        sp4_list_fixture(),
        sp4_p2_certificates(),
    ];
    let mut bad = 0;
    for c in &checks {
        match c {
            Ok(msg) => println!("ok        {msg}"),
            Err(msg) => {
                bad += 1;
                println!("MISMATCH  {msg}");
            }
        }
    }
    println!("{} of {} examples reproduced", checks.len() - bad, checks.len());
    Ok(if bad == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}
