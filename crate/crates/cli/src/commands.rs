use std::f64::consts::PI;
use std::io::Write;
use std::path::Path;

use conecd::cdcheck::{CdRecord, CdVerifyReport, CSV_HEADER};
use conecd::cones::{uniform_radial_grid, ConeGrid};
use conecd::measures::{self, Preset, ScenarioPair};
use conecd::mms::{self, FiniteMetricMeasureSpace};
use conecd::spectral::lichnerowicz_check;
use conecd::transport::{apex_scan as scan, build_geodesic_plan, is_cyclically_monotone, solve_ot};
use conecd::{
    cd_inequality_check, cd_verify, CdVerifyConfig, ConeKind, DistortionParams, Error,
    ProbabilityVector,
};
use serde_json::{json, Value};

use crate::args::*;
use crate::{Failure, Outcome};

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Input(msg.into())
}

fn emit(out: Option<&Path>, v: &Value) -> Outcome {
    let text = serde_json::to_string_pretty(v).expect("report serializes") + "\n";
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn parse_base(base: &str) -> Result<FiniteMetricMeasureSpace, Failure> {
    if let Some(count) = base.strip_prefix("circle:") {
        let count: usize = count
            .parse()
            .map_err(|_| usage(format!("bad circle size in '{base}'")))?;
        return Ok(mms::circle_space(count)?);
    }
    Ok(FiniteMetricMeasureSpace::load(base)?)
}

fn build_grid(
    kind: KindArg,
    base: &str,
    cells: usize,
    rmax: Option<f64>,
    n: f64,
) -> Result<ConeGrid, Failure> {
    let space = parse_base(base)?;
    let kind: ConeKind = kind.into();
    let nodes = match kind {
        ConeKind::Euclidean => uniform_radial_grid(cells, rmax.unwrap_or(2.0)),
        ConeKind::Spherical => uniform_radial_grid(cells, PI),
    };
    Ok(ConeGrid::build(kind, &space, &nodes, n, base)?)
}

fn load_grid(g: &GridArgs) -> Result<ConeGrid, Failure> {
    if let Some(path) = &g.grid {
        return Ok(ConeGrid::load(path)?);
    }
    let kind = g
        .kind
        .ok_or_else(|| usage("need --grid <file> or --kind to build a grid inline"))?;
    build_grid(
        kind,
        g.base.as_deref().unwrap_or("circle:64"),
        g.cells.unwrap_or(32),
        g.rmax,
        g.cone_n.unwrap_or(1.0),
    )
}

fn load_measure(
    path: &Path,
    space: &FiniteMetricMeasureSpace,
) -> Result<ProbabilityVector, Failure> {
    let text =
        std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    ProbabilityVector::from_json(&text, space)
        .map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn preset_pair(
    preset: Preset,
    grid: &ConeGrid,
    seed: u64,
    trial: usize,
    k: Option<f64>,
    n: Option<f64>,
) -> Result<ScenarioPair, Failure> {
    let kn = match (preset, k, n) {
        (Preset::NearAntipodal, None, _) => return Err(usage("near-antipodal preset needs --K")),
        (Preset::NearAntipodal, _, None) => return Err(usage("near-antipodal preset needs --N")),
        (_, Some(k), Some(n)) => Some((k, n)),
        _ => None,
    };
    Ok(measures::preset_pair(preset, grid, seed, trial, kn)?)
}

pub fn build_cone(a: BuildConeArgs) -> Outcome {
    let kind = a.kind.ok_or_else(|| usage("missing --kind"))?;
    let n = a.n.ok_or_else(|| usage("missing --N"))?;
    let base = a.base.clone().unwrap_or_else(|| "circle:64".into());
    let grid = build_grid(kind, &base, a.cells.unwrap_or(32), a.rmax, n)?;
    let report = mms::validate(grid.space());
    if let Some(out) = &a.out {
        grid.save(out)?;
    }
    emit(
        None,
        &json!({
            "command": "build-cone",
            "config": a,
            "points": grid.len(),
            "total_mass": grid.space().total_mass(),
            "max_spacing": grid.max_spacing(),
            "radial_spacing": grid.radial_spacing(),
            "diameter": mms::diameter(grid.space())?,
            "warnings": grid.warnings(),
            "validation": report,
        }),
    )?;
    if report.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check(format!("grid fails validation: {report}")))
    }
}

fn read_csv_space(path: &Path) -> Result<FiniteMetricMeasureSpace, Failure> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let mut rows = Vec::new();
    for (line, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| usage(format!("{}: {e}", path.display())))?;
        let row = rec
            .iter()
            .enumerate()
            .map(|(col, f)| {
                f.parse::<f64>().map_err(|_| {
                    usage(format!(
                        "{}: line {}, column {}: '{f}' is not a number",
                        path.display(),
                        line + 1,
                        col + 1
                    ))
                })
            })
            .collect::<Result<Vec<f64>, _>>()?;
        rows.push(row);
    }
    let n = rows.len();
    let labels = (0..n).map(|i| i.to_string()).collect();
    Ok(FiniteMetricMeasureSpace::from_rows(
        labels,
        &rows,
        vec![1.0; n],
    )?)
}

pub fn validate(a: ValidateArgs) -> Outcome {
    let space = match (&a.space, &a.csv) {
        (Some(p), None) => {
            let text = std::fs::read_to_string(p)?;
            let file: Value =
                serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", p.display())))?;
            // parse without the validation step so violations are reported, not raised
            let rows: Vec<Vec<f64>> = serde_json::from_value(file["dist"].clone())
                .map_err(|e| usage(format!("{}: dist: {e}", p.display())))?;
            let weight: Vec<f64> = serde_json::from_value(file["weight"].clone())
                .map_err(|e| usage(format!("{}: weight: {e}", p.display())))?;
            let labels: Vec<String> = match file.get("labels") {
                Some(l) => serde_json::from_value(l.clone())
                    .map_err(|e| usage(format!("{}: labels: {e}", p.display())))?,
                None => (0..rows.len()).map(|i| i.to_string()).collect(),
            };
            FiniteMetricMeasureSpace::from_rows(labels, &rows, weight)?
        }
        (None, Some(p)) => read_csv_space(p)?,
        _ => return Err(usage("give exactly one of --space or --csv")),
    };
    let report = mms::validate(&space);
    emit(
        a.out.as_deref(),
        &json!({ "command": "validate", "config": a, "points": space.len(), "valid": report.is_empty(), "report": report }),
    )?;
    if report.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check(report.to_string()))
    }
}

fn monotonicity_depth(pairs: usize) -> usize {
    match pairs {
        0..=40 => 4,
        41..=300 => 3,
        _ => 2,
    }
}

pub fn wasserstein(a: WassersteinArgs) -> Outcome {
    let seed = a.seed.unwrap_or(0);
    let grid = if a.space.is_none() {
        Some(load_grid(&a.grid)?)
    } else {
        None
    };
    let space = match (&a.space, &grid) {
        (Some(p), _) => FiniteMetricMeasureSpace::load(p)?,
        (None, Some(g)) => g.space().clone(),
        _ => unreachable!(),
    };
    let (mu0, mu1) = match (&a.mu0, &a.mu1, a.preset) {
        (Some(p0), Some(p1), None) => (load_measure(p0, &space)?, load_measure(p1, &space)?),
        (None, None, Some(preset)) => {
            let g = grid
                .as_ref()
                .ok_or_else(|| usage("presets need a cone grid"))?;
            let pair = preset_pair(preset, g, seed, 0, None, None)?;
            (pair.mu0, pair.mu1)
        }
        _ => return Err(usage("give --mu0 and --mu1, or --preset")),
    };
    let coupling = solve_ot(&space, &mu0, &mu1)?;
    let pairs = coupling.pairs();
    let mono = is_cyclically_monotone(
        &pairs,
        &space,
        monotonicity_depth(pairs.len()),
        10_000,
        seed,
    );
    emit(
        a.out.as_deref(),
        &json!({
            "command": "wasserstein",
            "config": a,
            "cost": coupling.cost,
            "distance": coupling.cost.max(0.0).sqrt(),
            "monotonicity": mono,
            "coupling": coupling,
        }),
    )?;
    eprintln!("W2 = {}", coupling.cost.max(0.0).sqrt());
    if mono.monotone {
        Ok(())
    } else {
        Err(Failure::Check(
            "optimal coupling is not cyclically monotone".into(),
        ))
    }
}

pub fn cd_check(a: CdCheckArgs) -> Outcome {
    let k = a.k.ok_or_else(|| usage("missing --K"))?;
    let n = a.n.ok_or_else(|| usage("missing --N"))?;
    let grid = load_grid(&a.grid)?;
    let mut config = CdVerifyConfig::new(k, n, a.trials.unwrap_or(20), a.seed.unwrap_or(0));
    if let Some(t) = &a.t {
        config.t_list = t.clone();
    }
    config.nprimes = a.nprime.clone();
    config.eps = a.eps;
    config.plan_tol = a.plan_tol;

    let report = match a.preset {
        None | Some(Preset::GenericBlobs) => cd_verify(&grid, &config)?,
        Some(preset) => {
            config.trials = 1;
            let pair = preset_pair(preset, &grid, config.seed, 0, Some(k), Some(n))?;
            if a.t.is_none() {
                config.t_list = vec![pair.s];
            }
            run_pair(&grid, &config, &pair)?
        }
    };
    if let Some(path) = &a.csv {
        let mut w = csv::Writer::from_path(path).map_err(|e| usage(e.to_string()))?;
        w.write_record(CSV_HEADER)
            .map_err(|e| usage(e.to_string()))?;
        for row in report.csv_rows() {
            w.write_record(&row).map_err(|e| usage(e.to_string()))?;
        }
        w.flush()?;
    }
    emit(
        a.out.as_deref(),
        &json!({ "command": "cd-check", "config": a, "report": report }),
    )?;
    eprintln!(
        "reports: {} pass, {} fail, {} infinite-rhs; min deficit {}, max slack {}, eps {}",
        report.full.pass,
        report.full.fail,
        report.full.infinite_rhs,
        report.min_deficit,
        report.max_slack,
        report.eps
    );
    if report.all_pass() {
        return Ok(());
    }
    let bad = report
        .records
        .iter()
        .find(|r| !r.full.verdict.passed())
        .expect("a failing record exists");
    Err(Failure::Check(format!(
        "trial {} t={} N'={}: lhs {} rhs {} deficit {} ({})",
        bad.trial,
        bad.full.t,
        bad.full.nprime,
        bad.full.lhs,
        bad.full.rhs,
        bad.full.deficit,
        bad.full.verdict
    )))
}

fn run_pair(
    grid: &ConeGrid,
    config: &CdVerifyConfig,
    pair: &ScenarioPair,
) -> Result<CdVerifyReport, Failure> {
    let space = grid.space();
    let eps = config.eps.unwrap_or(5.0 * grid.max_spacing());
    let plan_tol = config.plan_tol.unwrap_or(2.0 * grid.max_spacing());
    let nprimes = config.resolved_nprimes();
    let coupling = solve_ot(space, &pair.mu0, &pair.mu1)?;
    let mut records = Vec::new();
    for &t in &config.t_list {
        let plan = build_geodesic_plan(space, &coupling, t, plan_tol)?;
        for &np in &nprimes {
            let full =
                cd_inequality_check(&pair.mu0, &pair.mu1, &plan, space, config.k, np, false, eps)?;
            let reduced =
                cd_inequality_check(&pair.mu0, &pair.mu1, &plan, space, config.k, np, true, eps)?;
            records.push(CdRecord {
                trial: 0,
                full,
                reduced,
            });
        }
    }
    Ok(CdVerifyReport::from_records(
        config.clone(),
        eps,
        plan_tol,
        nprimes,
        records,
    ))
}

pub fn apex_scan(a: ApexScanArgs) -> Outcome {
    let grid = load_grid(&a.grid)?;
    let space = grid.space();
    let plan_tol = a.plan_tol.unwrap_or(2.0 * grid.max_spacing());
    let seed = a.seed.unwrap_or(0);
    let dirac = a.preset == Some(Preset::AntipodalDirac);
    // radial nodes are cell centres, so the crossing is only resolved to a cell
    let eps = a
        .eps
        .unwrap_or(if dirac { grid.radial_spacing() } else { 0.0 });
    let (pairs, generic) = match (&a.mu0, &a.mu1, a.preset) {
        (Some(p0), Some(p1), None) => {
            let pair = ScenarioPair {
                mu0: load_measure(p0, space)?,
                mu1: load_measure(p1, space)?,
                s: 0.5,
            };
            (vec![pair], false)
        }
        (None, None, preset) => {
            let preset = preset.unwrap_or(Preset::GenericBlobs);
            let trials = if preset == Preset::GenericBlobs {
                a.trials.unwrap_or(1)
            } else {
                1
            };
            let pairs = (0..trials)
                .map(|trial| preset_pair(preset, &grid, seed, trial, None, None))
                .collect::<Result<Vec<_>, _>>()?;
            (pairs, preset == Preset::GenericBlobs)
        }
        _ => return Err(usage("give --mu0 and --mu1, or a --preset")),
    };
    let mut reports = Vec::new();
    for pair in &pairs {
        let s = a.s.unwrap_or(pair.s);
        let coupling = solve_ot(space, &pair.mu0, &pair.mu1)?;
        let plan = build_geodesic_plan(space, &coupling, s, plan_tol)?;
        reports.push(scan(&plan, &grid, eps));
    }
    let total: f64 = reports.iter().map(|r| r.apex_mass).sum();
    let pattern_ok = reports.iter().all(|r| r.pattern_ok);
    emit(
        a.out.as_deref(),
        &json!({ "command": "apex-scan", "config": a, "apex_mass": total, "pattern_ok": pattern_ok, "reports": reports }),
    )?;
    eprintln!("apex mass: {total}");
    for r in &reports {
        if let Some((b0, b1)) = r.base_pair {
            eprintln!(
                "routed base pair: ({b0}, {b1}), pattern {}",
                if r.pattern_ok { "PASS" } else { "FAIL" }
            );
        }
        for p in &r.routed {
            let (h0, h1) = match p.through.as_str() {
                "north" => (PI - p.radii.0, PI - p.radii.1),
                _ => p.radii,
            };
            eprintln!(
                "  through {}: radii {} and {}, ratio {} (expected {})",
                p.through,
                p.radii.0,
                p.radii.1,
                h1 / h0,
                (1.0 - r.s) / r.s
            );
        }
    }
    if !pattern_ok {
        return Err(Failure::Check(
            "apex-routed pairs break the antipodal pattern".into(),
        ));
    }
    if dirac && total == 0.0 {
        return Err(Failure::Check(
            "antipodal Diracs were not routed through a pole".into(),
        ));
    }
    if generic && total > 0.0 {
        return Err(Failure::Check(format!(
            "generic measures route mass {total} through a pole"
        )));
    }
    Ok(())
}

pub fn spectral(a: SpectralArgs) -> Outcome {
    let grid = load_grid(&a.grid)?;
    let n = a.n.unwrap_or(1);
    let report = lichnerowicz_check(&grid, n, a.bandwidth, a.tol_rel.unwrap_or(0.15)).map_err(
        |e| match e {
            Error::Disconnected { components } => usage(format!(
                "graph is disconnected ({} components)",
                components.len()
            )),
            other => other.into(),
        },
    )?;
    emit(
        a.out.as_deref(),
        &json!({ "command": "spectral", "config": a, "report": report }),
    )?;
    eprintln!(
        "gap {} vs bound {}: {}",
        report.gap,
        report.bound,
        if report.verdict { "PASS" } else { "FAIL" }
    );
    if report.verdict {
        Ok(())
    } else {
        Err(Failure::Check(format!(
            "spectral gap {} below {}",
            report.gap, report.bound
        )))
    }
}

pub fn coeffs(a: CoeffsArgs) -> Outcome {
    let ks = a.k.clone().unwrap_or_else(|| vec![-1.0, 0.0, 1.0]);
    let ns = a.n.clone().unwrap_or_else(|| vec![1.0, 2.0, 3.0]);
    let ts = a.t.clone().unwrap_or_else(|| vec![0.25, 0.5, 0.75]);
    let thetas = a.theta.clone().unwrap_or_else(|| vec![0.5, 1.0, 2.0, PI]);
    let mut rows = Vec::new();
    for &k in &ks {
        for &n in &ns {
            for &t in &ts {
                for &theta in &thetas {
                    let p = DistortionParams::new(k, n, t, theta)?;
                    rows.push((p, conecd::s_fun(k, theta), conecd::sigma(p), conecd::tau(p)));
                }
            }
        }
    }
    if let Some(path) = &a.csv {
        let mut w = csv::Writer::from_path(path).map_err(|e| usage(e.to_string()))?;
        w.write_record(["K", "N", "t", "theta", "s_fun", "sigma", "tau"])
            .map_err(|e| usage(e.to_string()))?;
        for (p, s, sg, ta) in &rows {
            w.write_record([
                p.k.to_string(),
                p.n.to_string(),
                p.t.to_string(),
                p.theta.to_string(),
                s.to_string(),
                sg.to_string(),
                ta.to_string(),
            ])
            .map_err(|e| usage(e.to_string()))?;
        }
        w.flush()?;
    }
    let table: Vec<Value> = rows
        .iter()
        .map(|(p, s, sg, ta)| json!({ "K": p.k, "N": p.n, "t": p.t, "theta": p.theta, "s_fun": s, "sigma": sg, "tau": ta }))
        .collect();
    emit(
        a.out.as_deref(),
        &json!({ "command": "coeffs", "config": a, "rows": table }),
    )
}
