//! Command-line driver for the blow-up time bounds: `bound` writes one
//! report, `sweep` tabulates estimators against a parameter, `verify` runs
//! the built-in suites.

pub mod render;
pub mod spec;
pub mod verify;

use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use pks_core::bounds::{selected_report, BoundConfig, BoundReport};
use pks_core::heatmass::InversionConfig;

use crate::render::fmt_value;
use crate::spec::DatumSpec;

/// Row names accepted by `--bounds`, in report order.
pub const ROW_NAMES: [&str; 13] = [
    "lower",
    "tc",
    "tc1",
    "tc2",
    "tc3",
    "tc3_jung",
    "tc4",
    "tc4_beta",
    "f_method",
    "virial",
    "oracle",
    "oracle_variance",
    "asymptotic",
];

#[derive(Debug, Parser)]
#[command(name = "pks-bounds", version, about = "Bounds on the blow-up critical time of the planar Keller-Segel system")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute a bound report for one datum spec.
    Bound(BoundArgs),
    /// Tabulate estimators while one parameter varies.
    Sweep(SweepArgs),
    /// Run built-in verification suites.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct Numerics {
    /// Relative tolerance of the heat-mass inversion.
    #[arg(long, env = "PKS_BOUND_TOL")]
    pub tol: Option<f64>,
    /// Moment order of the extra tc4_beta row.
    #[arg(long, default_value_t = 4.0)]
    pub beta: f64,
    /// Exponent p of the lower bound, `inf` allowed.
    #[arg(long, default_value = "inf")]
    pub lower_p: f64,
}

impl Numerics {
    pub fn config(&self) -> Result<BoundConfig<f64>> {
        let mut cfg = BoundConfig::default();
        if let Some(t) = self.tol {
            cfg.inversion = InversionConfig::new(t, cfg.inversion.max_bracket_steps).context("--tol")?;
        }
        if self.lower_p.is_nan() || self.lower_p <= 1.0 {
            bail!("--lower-p must exceed 1, got {}", self.lower_p);
        }
        cfg.beta = self.beta;
        cfg.lower_p = self.lower_p;
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    /// Datum spec file (JSON).
    pub input: PathBuf,
    /// `all` or a comma-separated list of row names.
    #[arg(long, default_value = "all")]
    pub bounds: String,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Fill the `seconds` column with wall-clock times.
    #[arg(long)]
    pub timings: bool,
    #[command(flatten)]
    pub numerics: Numerics,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Datum spec file (JSON).
    pub input: PathBuf,
    /// Swept parameter: `mass`, `sigma` (height for non-Gaussian families) or `R` (disk radius).
    #[arg(long, value_parser = ["mass", "sigma", "R"])]
    pub param: String,
    #[arg(long)]
    pub from: f64,
    #[arg(long)]
    pub to: f64,
    #[arg(long)]
    pub steps: usize,
    /// Space the points logarithmically.
    #[arg(long)]
    pub log: bool,
    #[arg(long, default_value = "all")]
    pub bounds: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub numerics: Numerics,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = verify::Suite::All)]
    pub suite: verify::Suite,
    #[command(flatten)]
    pub numerics: Numerics,
}

/// `2` for a subcritical mass, `1` for anything else.
pub fn exit_code(e: &anyhow::Error) -> i32 {
    let subcritical = e
        .chain()
        .any(|c| matches!(c.downcast_ref::<pks_core::Error>(), Some(pks_core::Error::SubcriticalMass { .. })));
    if subcritical {
        2
    } else {
        1
    }
}

/// Parses `all` or a comma-separated list of row names.
pub fn parse_selection(s: &str) -> Result<Vec<String>> {
    if s.trim() == "all" {
        return Ok(ROW_NAMES.iter().map(|s| s.to_string()).collect());
    }
    let mut out = Vec::new();
    for name in s.split(',').map(str::trim).filter(|n| !n.is_empty()) {
        if !ROW_NAMES.contains(&name) {
            bail!("unknown bound `{}` in --bounds (expected `all` or some of: {})", name, ROW_NAMES.join(", "));
        }
        out.push(name.to_string());
    }
    if out.is_empty() {
        bail!("--bounds selects nothing");
    }
    Ok(out)
}

fn selects(selection: &[String], row: &str) -> bool {
    let base = if row.starts_with("asymptotic") { "asymptotic" } else { row };
    selection.iter().any(|s| s == base)
}

pub fn compute_report(datum_spec: &DatumSpec, base: &Path, cfg: &BoundConfig<f64>, selection: &[String]) -> Result<BoundReport<f64>> {
    let datum = datum_spec.build(base)?;
    let mut report = selected_report(&datum, cfg, |n| selects(selection, n))?;
    report.rows.retain(|r| selects(selection, &r.name));
    Ok(report)
}

fn open_out(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(File::create(p).with_context(|| format!("cannot create {}", p.display()))?),
        None => Box::new(io::stdout().lock()),
    })
}

pub fn cmd_bound(args: &BoundArgs) -> Result<()> {
    let cfg = args.numerics.config()?;
    let selection = parse_selection(&args.bounds)?;
    let (spec, base) = DatumSpec::read(&args.input)?;
    let report = compute_report(&spec, &base, &cfg, &selection)?;
    for v in &report.violations {
        eprintln!("warning: ordering violated: {}", v);
    }
    let mut out = open_out(&args.out)?;
    match args.format {
        Format::Csv => render::write_csv(&mut out, &render::rows(&report, args.timings))?,
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, &render::to_json(&report, args.timings))?;
            writeln!(out)?;
        }
    }
    out.flush()?;
    Ok(())
}

/// The swept parameter values.
pub fn sweep_points(from: f64, to: f64, steps: usize, log: bool) -> Result<Vec<f64>> {
    if steps == 0 {
        bail!("--steps must be at least 1");
    }
    if !from.is_finite() || !to.is_finite() {
        bail!("--from and --to must be finite");
    }
    if log && !(from > 0.0 && to > 0.0) {
        bail!("--log needs positive --from and --to");
    }
    if steps == 1 {
        return Ok(vec![from]);
    }
    let n = (steps - 1) as f64;
    Ok((0..steps)
        .map(|i| {
            let t = i as f64 / n;
            if i == steps - 1 {
                to
            } else if log {
                (from.ln() + (to.ln() - from.ln()) * t).exp()
            } else {
                from + (to - from) * t
            }
        })
        .collect())
}

pub fn cmd_sweep(args: &SweepArgs) -> Result<()> {
    let cfg = args.numerics.config()?;
    let selection = parse_selection(&args.bounds)?;
    let points = sweep_points(args.from, args.to, args.steps, args.log)?;
    let (spec, base) = DatumSpec::read(&args.input)?;
    // Fail early on a parameter that does not belong to the family.
    spec.with_param(&args.param, points[0], &base)?;

    let results: Vec<Result<(f64, Option<BoundReport<f64>>)>> = points
        .par_iter()
        .map(|&p| {
            let s = spec.with_param(&args.param, p, &base)?;
            let mass = s.build(&base)?.mass();
            match compute_report(&s, &base, &cfg, &selection) {
                Ok(r) => Ok((mass, Some(r))),
                Err(e) if exit_code(&e) == 2 => Ok((mass, None)),
                Err(e) => Err(e.context(format!("{} = {}", args.param, p))),
            }
        })
        .collect();
    let results = results.into_iter().collect::<Result<Vec<_>>>()?;

    let mut columns: Vec<String> = Vec::new();
    for (_, r) in &results {
        for row in r.iter().flat_map(|r| &r.rows) {
            if !columns.contains(&row.name) {
                columns.push(row.name.clone());
            }
        }
    }
    let order = |n: &String| ROW_NAMES.iter().position(|r| n.starts_with(r)).unwrap_or(ROW_NAMES.len());
    columns.sort_by_key(|n| (order(n), n.clone()));
    if columns.is_empty() {
        columns = selection.iter().filter(|s| *s != "asymptotic").cloned().collect();
    }

    let mut w = csv::Writer::from_writer(open_out(&args.out)?);
    let with_mass = args.param != "mass";
    let mut header = vec![args.param.clone()];
    if with_mass {
        header.push("mass".into());
    }
    header.extend(columns.iter().cloned());
    header.push("ordered".into());
    w.write_record(&header)?;
    for (&p, (mass, report)) in points.iter().zip(&results) {
        let mut rec = vec![fmt_value(p)];
        if with_mass {
            rec.push(fmt_value(*mass));
        }
        match report {
            Some(r) => {
                for c in &columns {
                    rec.push(r.row(c).map(|e| fmt_value(e.value)).unwrap_or_default());
                }
                rec.push(r.is_ordered().to_string());
            }
            None => {
                // M <= 8π: the solution is global, T* = +∞.
                eprintln!("note: {} = {} gives a subcritical mass; row reported as inf", args.param, fmt_value(p));
                rec.extend(columns.iter().map(|_| "inf".to_string()));
                rec.push("true".into());
            }
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Runs the suites, printing one line per check; `Ok(false)` if any failed.
pub fn cmd_verify(args: &VerifyArgs) -> Result<bool> {
    let cfg = args.numerics.config()?;
    let checks = verify::run_suite(args.suite, &cfg);
    let mut out = io::stdout().lock();
    let mut failed = 0;
    for c in &checks {
        if !c.passed {
            failed += 1;
        }
        writeln!(out, "{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail)?;
    }
    writeln!(out, "{} of {} checks passed", checks.len() - failed, checks.len())?;
    Ok(failed == 0)
}

/// Runs a parsed command and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let res = match &cli.command {
        Command::Bound(a) => cmd_bound(a).map(|_| true),
        Command::Sweep(a) => cmd_sweep(a).map(|_| true),
        Command::Verify(a) => cmd_verify(a),
    };
    match res {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {:#}", e);
            exit_code(&e)
        }
    }
}
