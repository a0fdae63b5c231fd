//! Subcommand implementations. Each command builds a document, writes it in the
//! requested format and returns the exit code.

use std::io::Write;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use riembed_core::asymptotics::{
    fit_log_power, verify_samples, run_row, CorollaryTable, Family, LogPowerFit, RowStatus, TABLE_DENSITY,
};
use riembed_core::criteria::{
    check_campanato, check_campanato_to_holder, check_morrey, check_vanishing_campanato, check_vanishing_morrey,
    marcinkiewicz_norm, optimal_campanato_domain_norm, optimal_campanato_target, optimal_morrey_domain_norm,
    optimal_morrey_target, CheckOptions, Verdict,
};
use riembed_core::witnesses::{
    extremal_vf_centered_average, morrey_lower_witness, radial_morrey_norm, tail_pairing, RadialProfile,
};
use riembed_core::{Grid, RiSpace, StepFunction, Weight};

use crate::config::RunConfig;
use crate::output::{
    csv_num, nums, write_csv, write_json, CheckDoc, DomainNormDoc, ExtremalDoc, Format, MorreyWitnessDoc,
    Num, RowDoc, SectionDoc, SelftestDoc, TableDoc, TargetDoc, WitnessDoc,
};
use crate::spec::parse_profile;
use crate::{CliError, DomainKind, TargetKind, EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_OK};

/// Ball measures probed by `witness`.
pub const WITNESS_MEASURES: [f64; 8] = [1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8];
pub const DEFAULT_PROFILE: &str = "ind:1";

fn verdict_code(v: Verdict) -> i32 {
    match v {
        Verdict::Holds => EXIT_OK,
        Verdict::Fails => EXIT_FAIL,
        Verdict::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

fn profile(cfg: &RunConfig) -> Result<(String, StepFunction), CliError> {
    let s = cfg.profile.clone().unwrap_or_else(|| DEFAULT_PROFILE.to_string());
    let f = parse_profile(&s)?;
    Ok((s, f))
}

// ---------------------------------------------------------------- check

pub fn check_doc(cfg: &RunConfig) -> Result<CheckDoc, CliError> {
    let opts = CheckOptions { grid: cfg.grid()?, ..Default::default() };
    let theorem = match cfg.theorem.as_deref() {
        Some(t) => t,
        None if cfg.k.is_some() => "campanato",
        None => "morrey",
    };
    let report = match theorem {
        "holder" => check_campanato_to_holder(&cfg.weight()?, &cfg.sigma()?, &opts)?,
        "morrey" | "vanishing-morrey" | "campanato" | "vanishing-campanato" => {
            let (x, n, m, phi) = (cfg.space()?, cfg.n()?, cfg.m()?, cfg.weight()?);
            match theorem {
                "morrey" => check_morrey(&x, n, m, &phi, &opts)?,
                "vanishing-morrey" => check_vanishing_morrey(&x, n, m, &phi, &opts)?,
                "campanato" => check_campanato(&x, n, m, cfg.k()?, &phi, &opts)?,
                _ => check_vanishing_campanato(&x, n, m, cfg.k()?, &phi, &opts)?,
            }
        }
        other => {
            return Err(CliError::Usage(format!(
                "unknown theorem '{other}' (expected morrey, vanishing-morrey, campanato, vanishing-campanato or holder)"
            )))
        }
    };
    Ok(CheckDoc::new(cfg.params(), report))
}

pub fn check(cfg: &RunConfig, out: &mut dyn Write) -> Result<i32, CliError> {
    let doc = check_doc(cfg)?;
    match cfg.format() {
        Format::Json => write_json(out, &doc)?,
        Format::Csv => {
            let rows: Vec<Vec<String>> = doc.grid.iter().map(|[r, v]| vec![csv_num(r.0), csv_num(v.0)]).collect();
            write_csv(out, &["r", "value"], &rows)?;
        }
    }
    Ok(verdict_code(doc.verdict))
}

// ---------------------------------------------------------------- target

fn fitted(fit: &LogPowerFit, r: f64) -> Option<f64> {
    let l = (1.0 / r).ln();
    if l <= 1.0 {
        return None;
    }
    let ll = l.ln();
    let c = if fit.loglog_included { fit.c * ll.ln() } else { 0.0 };
    Some(fit.constant + fit.a * r.ln() + fit.b * ll + c)
}

pub fn target_doc(kind: TargetKind, cfg: &RunConfig) -> Result<TargetDoc, CliError> {
    let x = cfg.space()?;
    let (n, m) = (cfg.n()?, cfg.m()?);
    let window = cfg.window()?;
    let grid = Grid::log_spaced(cfg.grid_eps(), cfg.grid_density.unwrap_or(TABLE_DENSITY))
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let (phi, k) = match kind {
        TargetKind::Morrey => (optimal_morrey_target(&x, n, m, &grid)?, None),
        TargetKind::Campanato => {
            let k = cfg.k()?;
            (optimal_campanato_target(&x, n, m, k, &grid)?, Some(k))
        }
    };
    let samples: Vec<(f64, f64)> = match &phi {
        Weight::Sampled { radii, values } => radii.iter().copied().zip(values.iter().copied()).collect(),
        Weight::PowerLog { .. } => unreachable!("targets are sampled"),
    };
    let fit = fit_log_power(&samples, window)?;
    let table_row = match matching_row(&x, n, m, k) {
        Some(row) => Some(RowDoc::new(&row, &verify_samples(&row, &samples, window)?)),
        None => None,
    };
    let mut params = cfg.params();
    params.grid_density = cfg.grid_density.unwrap_or(TABLE_DENSITY);
    Ok(TargetDoc {
        kind: match kind {
            TargetKind::Morrey => "morrey".into(),
            TargetKind::Campanato => "campanato".into(),
        },
        params,
        samples: samples.iter().map(|&(r, v)| nums([r, v])).collect(),
        fit: (&fit).into(),
        table_row,
    })
}

fn matching_row(x: &RiSpace, n: u32, m: u32, k: Option<u32>) -> Option<riembed_core::asymptotics::CorollaryRow> {
    let (family, p, alpha) = match *x {
        RiSpace::Lebesgue { p } => (Family::Lebesgue, p, 0.0),
        RiSpace::Zygmund { p, alpha } => (Family::Zygmund, p, alpha),
        _ => return None,
    };
    CorollaryTable::builtin().rows.into_iter().find(|r| {
        let same_alpha = family == Family::Lebesgue || (r.alpha - alpha).abs() < 1e-12;
        r.family == family && (r.p - p).abs() < 1e-12 && same_alpha && r.n == n && r.m == m && r.k == k
    })
}

pub fn target(kind: TargetKind, cfg: &RunConfig, out: &mut dyn Write) -> Result<i32, CliError> {
    let doc = target_doc(kind, cfg)?;
    match cfg.format() {
        Format::Json => write_json(out, &doc)?,
        Format::Csv => {
            let fit = LogPowerFit {
                a: doc.fit.a.0,
                b: doc.fit.b.0,
                c: doc.fit.c.0,
                constant: doc.fit.constant.0,
                residual: doc.fit.residual.0,
                window: (doc.fit.window[0].0, doc.fit.window[1].0),
                loglog_included: doc.fit.loglog_included,
                samples: doc.fit.samples,
            };
            let rows: Vec<Vec<String>> = doc
                .samples
                .iter()
                .map(|[r, v]| {
                    let res = fitted(&fit, r.0).map(|y| csv_num(v.0.ln() - y)).unwrap_or_default();
                    vec![csv_num(r.0), csv_num(v.0), res]
                })
                .collect();
            write_csv(out, &["r", "phi", "fit_residual"], &rows)?;
        }
    }
    Ok(EXIT_OK)
}

// ---------------------------------------------------------------- domain-norm

pub fn domain_norm_doc(kind: DomainKind, cfg: &RunConfig) -> Result<DomainNormDoc, CliError> {
    let grid = cfg.grid()?;
    let phi = cfg.weight()?;
    let n = cfg.n()?;
    let (label, f) = profile(cfg)?;
    let f = f.rearranged();
    let (name, value) = match kind {
        DomainKind::Morrey => ("morrey", optimal_morrey_domain_norm(&phi, n, cfg.m()?, &f, &grid)?),
        DomainKind::Campanato => {
            ("campanato", optimal_campanato_domain_norm(&phi, n, cfg.m()?, cfg.k()?, &f, &grid)?)
        }
        DomainKind::Marcinkiewicz => ("marcinkiewicz", marcinkiewicz_norm(&phi, n, &f, &grid)?),
    };
    Ok(DomainNormDoc { kind: name.into(), params: cfg.params(), profile: label, value: Num(value) })
}

pub fn domain_norm(kind: DomainKind, cfg: &RunConfig, out: &mut dyn Write) -> Result<i32, CliError> {
    let doc = domain_norm_doc(kind, cfg)?;
    match cfg.format() {
        Format::Json => write_json(out, &doc)?,
        Format::Csv => write_csv(out, &["kind", "profile", "value"], &[vec![
            doc.kind.clone(),
            doc.profile.clone(),
            csv_num(doc.value.0),
        ]])?,
    }
    Ok(EXIT_OK)
}

// ---------------------------------------------------------------- table

pub fn table_doc(cfg: &RunConfig) -> Result<TableDoc, CliError> {
    let window = cfg.window()?;
    let table = CorollaryTable::builtin();
    let rows = match &cfg.only {
        None => table.rows.iter().collect::<Vec<_>>(),
        Some(keys) => keys
            .iter()
            .map(|k| table.row(k).ok_or_else(|| CliError::Usage(format!("no table row with key '{k}'"))))
            .collect::<Result<Vec<_>, _>>()?,
    };
    let mut docs = Vec::with_capacity(rows.len());
    for row in rows {
        docs.push(RowDoc::new(row, &run_row(row, window)?));
    }
    let count = |s: RowStatus| docs.iter().filter(|d| d.status == s).count();
    Ok(TableDoc {
        window: nums([window.0, window.1]),
        passed: count(RowStatus::Pass),
        failed: count(RowStatus::Fail),
        inconclusive: count(RowStatus::Inconclusive),
        rows: docs,
    })
}

fn table_code(doc: &TableDoc) -> i32 {
    let ok = doc.rows.iter().all(|r| match r.status {
        RowStatus::Pass => true,
        RowStatus::Inconclusive => r.reason.is_some(),
        RowStatus::Fail => false,
    });
    if ok {
        EXIT_OK
    } else {
        EXIT_FAIL
    }
}

pub fn table(cfg: &RunConfig, out: &mut dyn Write) -> Result<i32, CliError> {
    let doc = table_doc(cfg)?;
    match cfg.format() {
        Format::Json => write_json(out, &doc)?,
        Format::Csv => {
            let rows: Vec<Vec<String>> = doc
                .rows
                .iter()
                .map(|r| {
                    let mut v = vec![
                        r.key.clone(),
                        r.case.clone(),
                        format!("{:?}", r.regime).to_lowercase(),
                        format!("{:?}", r.status).to_lowercase(),
                    ];
                    v.extend([r.fit.a, r.fit.b, r.fit.c].iter().map(|x| csv_num(x.0)));
                    v.extend(r.expected.iter().map(|x| csv_num(x.0)));
                    v.push(csv_num(r.fit.residual.0));
                    v.push(r.reason.clone().unwrap_or_default());
                    v
                })
                .collect();
            write_csv(
                out,
                &["key", "case", "regime", "status", "a", "b", "c", "expected_a", "expected_b", "expected_c", "residual", "reason"],
                &rows,
            )?;
        }
    }
    Ok(table_code(&doc))
}

// ---------------------------------------------------------------- witness

pub fn witness_doc(cfg: &RunConfig) -> Result<WitnessDoc, CliError> {
    let x = cfg.space()?;
    let (n, m) = (cfg.n()?, cfg.m()?);
    let phi = cfg.weight()?;
    let grid = cfg.grid()?;
    let (label, f) = profile(cfg)?;
    let fs = f.rearranged();
    let mut extremal = Vec::with_capacity(WITNESS_MEASURES.len());
    for &r in &WITNESS_MEASURES {
        let average = extremal_vf_centered_average(&fs, n, m, r)?;
        let tail = tail_pairing(&fs, n, m, r);
        let lower = 2f64.powi(-(m as i32)) * tail;
        extremal.push(ExtremalDoc {
            r: Num(r),
            average: Num(average),
            lower_bound: Num(lower),
            ratio: Num(if tail > 0.0 { average / tail } else { f64::NAN }),
        });
    }
    let morrey = morrey_lower_witness(&x, n, m, &phi, &WITNESS_MEASURES)?;
    let samples: Vec<f64> = grid.interior().iter().copied().chain(std::iter::once(1.0)).collect();
    let radial = radial_morrey_norm(&RadialProfile::new(f.clone()), &phi, n, &samples)?;
    let marc = marcinkiewicz_norm(&phi, n, &fs, &grid)?;
    Ok(WitnessDoc {
        params: cfg.params(),
        profile: label,
        extremal,
        morrey: MorreyWitnessDoc::from(&morrey),
        radial_morrey: Num(radial),
        marcinkiewicz: Num(marc),
    })
}

fn witness_ok(doc: &WitnessDoc) -> bool {
    doc.extremal.iter().all(|e| e.average.0 >= e.lower_bound.0) && doc.radial_morrey.0 <= doc.marcinkiewicz.0 + 1e-12
}

pub fn witness(cfg: &RunConfig, out: &mut dyn Write) -> Result<i32, CliError> {
    let doc = witness_doc(cfg)?;
    match cfg.format() {
        Format::Json => write_json(out, &doc)?,
        Format::Csv => {
            let rows: Vec<Vec<String>> = doc
                .extremal
                .iter()
                .zip(&doc.morrey.rows)
                .map(|(e, w)| {
                    vec![
                        csv_num(e.r.0),
                        csv_num(e.average.0),
                        csv_num(e.lower_bound.0),
                        csv_num(e.ratio.0),
                        csv_num(w.best_ratio.0),
                        csv_num(w.kernel_ratio.0),
                        csv_num(w.tracking.0),
                    ]
                })
                .collect();
            write_csv(
                out,
                &["r", "average", "lower_bound", "ratio", "best_ratio", "kernel_ratio", "tracking"],
                &rows,
            )?;
        }
    }
    Ok(if witness_ok(&doc) { EXIT_OK } else { EXIT_FAIL })
}

// ---------------------------------------------------------------- selftest

fn config(space: &str, n: u32, m: u32, k: Option<u32>, weight: Option<&str>) -> RunConfig {
    RunConfig {
        space: Some(space.into()),
        n: Some(n),
        m: Some(m),
        k,
        weight: weight.map(Into::into),
        ..Default::default()
    }
}

fn json<T: serde::Serialize>(doc: &T) -> Result<String, CliError> {
    serde_json::to_string(doc).map_err(|e| CliError::Io(std::io::Error::other(e)))
}

/// A nonincreasing step function with random breakpoints and values.
pub fn random_profile(rng: &mut ChaCha8Rng) -> Result<StepFunction, CliError> {
    let cells = rng.random_range(1..12usize);
    let mut pts: Vec<f64> = (0..cells).map(|_| 10f64.powf(-8.0 * rng.random::<f64>())).collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts.retain(|&p| p < 1.0);
    let values: Vec<f64> = (0..=pts.len()).map(|_| 10.0 * rng.random::<f64>()).collect();
    Ok(StepFunction::new(Grid::from_breakpoints(&pts)?, values)?.rearranged())
}

/// One pass of the built-in suite: sections with their serialized documents.
fn suite(seed: u64) -> Result<(Vec<SectionDoc>, String), CliError> {
    let mut sections = Vec::new();
    let mut report = String::new();

    let checks = [
        (config("L:2", 3, 1, None, Some("pow:-0.5")), None, Verdict::Holds),
        (config("L:2", 3, 1, None, Some("pow:0")), None, Verdict::Fails),
        (config("Linf", 2, 2, None, Some("pow:0")), None, Verdict::Holds),
        (config("L:2", 3, 1, None, Some("pow:-0.5")), Some("vanishing-morrey"), Verdict::Fails),
        (config("L:2", 3, 1, None, Some("pow:-0.75")), Some("vanishing-morrey"), Verdict::Holds),
        (config("L:3", 3, 1, Some(0), Some("one")), None, Verdict::Holds),
    ];
    let mut matched = 0;
    for (mut cfg, theorem, want) in checks.iter().cloned() {
        cfg.theorem = theorem.map(Into::into);
        let doc = check_doc(&cfg)?;
        matched += usize::from(doc.verdict == want);
        report.push_str(&json(&doc)?);
        report.push('\n');
    }
    sections.push(SectionDoc {
        name: "check".into(),
        ok: matched == checks.len(),
        detail: format!("{matched}/{} verdicts as expected", checks.len()),
    });

    let targets = [
        (TargetKind::Morrey, config("L:1", 3, 1, None, None), -2.0),
        (TargetKind::Campanato, config("L:4", 2, 1, Some(0), None), 0.5),
    ];
    let mut ok = true;
    let mut detail = Vec::new();
    for (kind, cfg, a) in &targets {
        let doc = target_doc(*kind, cfg)?;
        ok &= (doc.fit.a.0 - a).abs() <= 0.02;
        detail.push(format!("a = {:.4}", doc.fit.a.0));
        report.push_str(&json(&doc)?);
        report.push('\n');
    }
    sections.push(SectionDoc { name: "target".into(), ok, detail: detail.join(", ") });

    let table = table_doc(&RunConfig::default())?;
    sections.push(SectionDoc {
        name: "table".into(),
        ok: table_code(&table) == EXIT_OK,
        detail: format!(
            "{} rows: {} pass, {} fail, {} inconclusive",
            table.rows.len(),
            table.passed,
            table.failed,
            table.inconclusive
        ),
    });
    report.push_str(&json(&table)?);
    report.push('\n');

    let mut wcfg = config("L:2", 3, 1, None, Some("pow:-0.5"));
    wcfg.profile = Some("steps:4@0.01,2@0.2,1@0.79".into());
    let w = witness_doc(&wcfg)?;
    sections.push(SectionDoc {
        name: "witness".into(),
        ok: witness_ok(&w),
        detail: format!("tracking in [{:.4}, {:.4}]", w.morrey.min_tracking.0, w.morrey.max_tracking.0),
    });
    report.push_str(&json(&w)?);
    report.push('\n');

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let trials = 200;
    let mut violations = 0;
    for _ in 0..trials {
        let f = random_profile(&mut rng)?;
        let n = rng.random_range(2..6u32);
        let m = rng.random_range(1..n);
        let r = 10f64.powf(-6.0 * rng.random::<f64>()) * 0.5;
        let avg = extremal_vf_centered_average(&f, n, m, r)?;
        let bound = 2f64.powi(-(m as i32)) * tail_pairing(&f, n, m, r);
        violations += usize::from(avg < bound);
        report.push_str(&format!("{n} {m} {r:e} {avg:e} {bound:e}\n"));
    }
    sections.push(SectionDoc {
        name: "extremal-bound".into(),
        ok: violations == 0,
        detail: format!("{violations} violations in {trials} random trials"),
    });

    Ok((sections, report))
}

pub fn selftest_doc(cfg: &RunConfig) -> Result<SelftestDoc, CliError> {
    let seed = cfg.seed();
    let (sections, first) = suite(seed)?;
    let (_, second) = suite(seed)?;
    let digest = Sha256::digest(first.as_bytes());
    Ok(SelftestDoc {
        seed,
        sections,
        identical: first.as_bytes() == second.as_bytes(),
        report_bytes: first.len(),
        report_sha256: digest.iter().map(|b| format!("{b:02x}")).collect(),
    })
}

/// Exit 0 iff the two passes produced byte-identical reports; section outcomes are
/// reported in the document.
pub fn selftest(cfg: &RunConfig, out: &mut dyn Write) -> Result<i32, CliError> {
    let doc = selftest_doc(cfg)?;
    match cfg.format() {
        Format::Json => write_json(out, &doc)?,
        Format::Csv => {
            let rows: Vec<Vec<String>> =
                doc.sections.iter().map(|s| vec![s.name.clone(), s.ok.to_string(), s.detail.clone()]).collect();
            write_csv(out, &["section", "ok", "detail"], &rows)?;
        }
    }
    Ok(if doc.identical { EXIT_OK } else { EXIT_FAIL })
}
