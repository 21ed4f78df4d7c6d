use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use fractal_sandpile::experiments::{
    exponent_fit, growth_run, identity_survey, periodicity_run, GrowthOptions, PeriodicityOptions,
};
use fractal_sandpile::graph::build;
use fractal_sandpile::group::{sandpile_group, GroupReport};
use fractal_sandpile::io::{
    config_from_json, graph_from_json, graph_to_json, records_to_csv, render, write_atomic, Document, ResourceCaps,
    RunManifest,
};
use fractal_sandpile::sandpile::{stabilize_random_order, stabilize_with_limit};
use fractal_sandpile::{Configuration, FamilySpec, SinkedGraph, VertexId};
use serde::Serialize;

use crate::error::CliError;
use crate::{Cli, Command, ScheduleArg, SpecArgs, StabilizeArgs};

const DEFAULT_MAX_STATES: usize = 2_000_000;

struct Ctx {
    command: &'static str,
    seed: u64,
    caps: ResourceCaps,
    start: Instant,
}

impl Ctx {
    fn manifest(&self, spec: Option<FamilySpec>, outputs: &[PathBuf]) -> RunManifest {
        RunManifest {
            command: self.command.to_string(),
            spec,
            seed: self.seed,
            outputs: outputs.iter().map(|p| p.display().to_string()).collect(),
            caps: self.caps.clone(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            wall_time_secs: self.start.elapsed().as_secs_f64(),
        }
    }
}

fn caps(max_level: Option<u32>, max_states: Option<usize>, max_steps: Option<u64>) -> ResourceCaps {
    ResourceCaps {
        max_level: max_level.unwrap_or(u32::MAX),
        max_states: max_states.unwrap_or(DEFAULT_MAX_STATES),
        max_steps: max_steps.unwrap_or(u64::MAX),
    }
}

fn document<T: Serialize>(manifest: RunManifest, result: T) -> Result<Vec<u8>, CliError> {
    let mut s = serde_json::to_string_pretty(&Document { manifest, result })
        .map_err(|e| CliError { code: 1, message: e.to_string() })?;
    s.push('\n');
    Ok(s.into_bytes())
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match out {
        Some(p) => Ok(write_atomic(p, bytes)?),
        None => {
            print!("{}", String::from_utf8_lossy(bytes));
            Ok(())
        }
    }
}

fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError { code: 1, message: format!("{}: {e}", dir.display()) })
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

fn spec_of(a: &SpecArgs) -> FamilySpec {
    FamilySpec::new(a.family.into(), a.level, a.boundary.into())
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    let seed = cli.seed;
    let start = Instant::now();
    match cli.command {
        Command::Build { spec, out } => {
            let g = build(spec_of(&spec))?;
            let json = graph_to_json(&g)?;
            emit(out.as_deref(), format!("{json}\n").as_bytes())
        }
        Command::Stabilize(args) => stabilize(args, seed, start),
        Command::Identity { family, level, levels, boundary, out } => {
            let levels = match level {
                Some(l) => vec![l],
                None if levels.is_empty() => return Err(CliError::usage("give --level or --levels")),
                None => levels,
            };
            let ctx = Ctx { command: "identity", seed, caps: caps(levels.iter().copied().max(), None, None), start };
            let records = identity_survey(family.into(), boundary.into(), &levels)?;
            ensure_dir(&out)?;
            let csv = out.join("identity.csv");
            let json = out.join("identity.json");
            let spec = FamilySpec::new(family.into(), levels[0], boundary.into());
            let manifest = ctx.manifest(Some(spec), &[csv.clone(), json.clone()]);
            write_atomic(&csv, records_to_csv(&records)?.as_bytes())?;
            write_atomic(&json, &document(manifest, &records)?)?;
            for r in &records {
                println!("level {} k {}", r.level, r.k);
            }
            Ok(())
        }
        Command::Snf { spec, out } => {
            let ctx = Ctx { command: "snf", seed, caps: caps(Some(spec.level), None, None), start };
            let spec = spec_of(&spec);
            let g = build(spec)?;
            let (f, p) = sandpile_group(&g)?;
            println!("{f}");
            if let Some(out) = out {
                let manifest = ctx.manifest(Some(spec), &[out.clone()]);
                write_atomic(&out, &document(manifest, GroupReport::new(&f, &p))?)?;
            }
            Ok(())
        }
        Command::Growth { family, schedule, min, max, start_level, max_level, out } => {
            let ScheduleArg::Doubling = schedule;
            if min == 0 || min > max {
                return Err(CliError::usage("need 0 < --min <= --max"));
            }
            let mut points = Vec::new();
            let mut n = min;
            while n <= max {
                points.push(n);
                n = match n.checked_mul(2) {
                    Some(x) => x,
                    None => break,
                };
            }
            let ctx = Ctx { command: "growth", seed, caps: caps(max_level, None, None), start };
            let records = growth_run(family.into(), &points, GrowthOptions { start_level, max_level })?;
            let fit = exponent_fit(&records).ok();
            ensure_dir(&out)?;
            let csv = out.join("growth.csv");
            let json = out.join("growth.json");
            let spec = FamilySpec::sinked(family.into(), records.last().map_or(start_level, |r| r.level_used));
            let manifest = ctx.manifest(Some(spec), &[csv.clone(), json.clone()]);
            write_atomic(&csv, records_to_csv(&records)?.as_bytes())?;
            #[derive(Serialize)]
            struct Growth<'a> {
                records: &'a [fractal_sandpile::experiments::GrowthRecord],
                fit: Option<fractal_sandpile::experiments::Fit>,
            }
            write_atomic(&json, &document(manifest, Growth { records: &records, fit })?)?;
            if let Some(f) = fit {
                println!("slope {:.4} over {} points", f.slope, f.points);
            }
            Ok(())
        }
        Command::Period { family, max_n, level, max_states, out } => {
            let ctx = Ctx { command: "period", seed, caps: caps(level, Some(max_states), None), start };
            let opts = PeriodicityOptions { level, max_states, ..PeriodicityOptions::default() };
            let report = periodicity_run(family.into(), max_n, None, opts)?;
            ensure_dir(&out)?;
            let csv = out.join("period.csv");
            let json = out.join("period.json");
            #[derive(Serialize)]
            struct Row {
                n: u32,
                interior: usize,
                boundary: usize,
                preperiod: usize,
                period: usize,
                conjectured: Option<u64>,
                matches_conjecture: Option<bool>,
            }
            let rows: Vec<Row> = report
                .records
                .iter()
                .map(|r| Row {
                    n: r.n,
                    interior: r.interior,
                    boundary: r.boundary,
                    preperiod: r.preperiod,
                    period: r.period,
                    conjectured: r.conjectured,
                    matches_conjecture: r.matches_conjecture,
                })
                .collect();
            let manifest = ctx.manifest(Some(report.spec), &[csv.clone(), json.clone()]);
            write_atomic(&csv, records_to_csv(&rows)?.as_bytes())?;
            write_atomic(&json, &document(manifest, &report)?)?;
            for r in &report.records {
                println!("n {} period {} preperiod {}", r.n, r.period, r.preperiod);
            }
            Ok(())
        }
    }
}

fn parse_drop(g: &SinkedGraph, s: &str) -> Result<(VertexId, u64), CliError> {
    let (v, k) = s.split_once(':').ok_or_else(|| CliError::usage(format!("bad --drop {s:?}: expected VERTEX:COUNT")))?;
    let count: u64 = k.parse().map_err(|_| CliError::usage(format!("bad grain count {k:?}")))?;
    let vertex = if v == "v0" {
        g.center().ok_or_else(|| CliError::usage("graph has no v0"))?
    } else {
        let id: VertexId = v.parse().map_err(|_| CliError::usage(format!("bad vertex {v:?}")))?;
        g.check_vertex(id)?;
        id
    };
    Ok((vertex, count))
}

fn stabilize(args: StabilizeArgs, seed: u64, start: Instant) -> Result<(), CliError> {
    let ctx = Ctx { command: "stabilize", seed, caps: caps(None, None, args.max_steps), start };
    let g = graph_from_json(&read(&args.graph)?)?;
    let mut c = match &args.config {
        Some(p) => config_from_json(&read(p)?)?,
        None => Configuration::zeros(g.n_vertices()),
    };
    for d in &args.drops {
        let (v, k) = parse_drop(&g, d)?;
        c = c.drop(v, k)?;
    }
    let r = if args.random_order {
        stabilize_random_order(&g, &c, seed)?
    } else {
        stabilize_with_limit(&g, &c, args.max_steps)?
    };
    let mut outputs: Vec<PathBuf> = args.out.iter().cloned().collect();
    if let Some(p) = &args.render {
        write_atomic(p, &render(&g, &r.config, args.width)?)?;
        outputs.push(p.clone());
    }
    let manifest = ctx.manifest(g.spec(), &outputs);
    emit(args.out.as_deref(), &document(manifest, &r)?)
}
