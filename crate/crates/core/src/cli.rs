//! Command-line front end. Exit codes: 0 pass, 1 failed check or solve, 2 usage error.

use crate::analytic::DipoleSpec;
use crate::bie::{solve_problem, ProblemKind, ProblemSpec, SolverOptions};
use crate::error::{BowtieError, Result};
use crate::experiments::{
    epsilon_sweep, fit_exponent, fit_loglog, ray_profile, validation_suite, Case, Report, SweepConfig,
};
use crate::fields::RegimeThresholds;
use crate::geometry::{check_condition_a, BowtieConfig, Layout};
use crate::io;
use crate::vec2::Vec2;
use clap::{Parser, Subcommand};
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Parser, Debug)]
#[command(name = "bowtie", about = "Boundary-integral experiments for bow-tie conductors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Analytic identities and oracle comparisons.
    Validate {
        /// Print the records as JSON instead of one line each.
        #[arg(long)]
        json: bool,
    },
    /// Solve one problem and write its summary, mesh, density and a ray profile.
    Solve {
        /// TOML problem file (`kind` table plus `geometry`); overrides the flags below.
        #[arg(long)]
        problem: Option<PathBuf>,
        #[arg(long, default_value = "emitter")]
        kind: String,
        #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2)]
        alpha: f64,
        #[arg(long, default_value_t = 0.01)]
        epsilon: f64,
        /// Emitter height in units of epsilon.
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        /// Dipole or background direction as `x,y`.
        #[arg(long, default_value = "1,0", allow_hyphen_values = true)]
        direction: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run an epsilon sweep and write report.json, samples.csv and .dat files.
    Sweep {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        case: Option<String>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        p: Option<f64>,
        /// Comma-separated descending list.
        #[arg(long)]
        epsilons: Option<String>,
        #[arg(long, default_value = "sweep-out")]
        out: PathBuf,
    },
    /// Refit stored data: a CSV with a header row or a two-column .dat file.
    Fit {
        #[arg(long)]
        input: PathBuf,
        /// Abscissa column; `dist_V1`/`dist_V2` for samples.csv.
        #[arg(long, default_value = "x")]
        x: String,
        /// Ordinate column; `grad_norm` is derived from `ux`, `uy`.
        #[arg(long, default_value = "y")]
        y: String,
        /// Abscissa window `lo,hi`.
        #[arg(long)]
        window: Option<String>,
        /// Divide the abscissa by this value first, e.g. epsilon.
        #[arg(long)]
        scale: Option<f64>,
        /// Skip the r^2 gate.
        #[arg(long)]
        no_gate: bool,
    },
    /// Test the circle condition for opening `alpha` and emitter height `p`.
    CheckConditionA {
        #[arg(long)]
        alpha: f64,
        #[arg(long, allow_hyphen_values = true)]
        p: f64,
    },
    /// Aggregate report.json files (or directories containing one).
    Report {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        /// Write the aggregate as JSON to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Parse `argv` (including the program name) and run; output goes to stdout/stderr.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_cli_with(args, &mut stdout.lock(), &mut stderr.lock())
}

/// As [`run_cli`] with explicit output streams.
pub fn run_cli_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 { write!(out, "{}", e.render()) } else { write!(err, "{}", e.render()) };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                BowtieError::InvalidConfig(_) | BowtieError::Parse(_) | BowtieError::InvalidGeometry(_) => 2,
                _ => 1,
            }
        }
    }
}

fn parse_pair(s: &str) -> Result<[f64; 2]> {
    let v = parse_list(s)?;
    if v.len() != 2 {
        return Err(BowtieError::InvalidConfig(format!("expected two comma-separated numbers, got '{s}'")));
    }
    Ok([v[0], v[1]])
}

fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| BowtieError::InvalidConfig(format!("bad number '{t}'"))))
        .collect()
}

fn out_line(out: &mut dyn Write, s: &str) -> Result<()> {
    writeln!(out, "{s}")?;
    Ok(())
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<bool> {
    match cmd {
        Command::Validate { json } => {
            let records = validation_suite()?;
            if json {
                out_line(out, &serde_json::to_string_pretty(&records)?)?;
            } else {
                for r in &records {
                    out_line(
                        out,
                        &format!(
                            "{} {}: {:.3e} (limit {:.1e}) {}",
                            if r.pass { "PASS" } else { "FAIL" },
                            r.name,
                            r.value,
                            r.threshold,
                            r.detail
                        ),
                    )?;
                }
            }
            Ok(records.iter().all(|r| r.pass))
        }
        Command::Solve { problem, kind, alpha, epsilon, p, direction, out: dir } => {
            let spec = match problem {
                Some(path) => toml::from_str::<ProblemSpec>(&std::fs::read_to_string(path)?)?,
                None => flag_problem(&kind, alpha, epsilon, p, Vec2::from(parse_pair(&direction)?))?,
            };
            spec.validate()?;
            let result = solve_problem(&spec, &SolverOptions::default())?;
            let summary = serde_json::to_string_pretty(&result.summary())?;
            out_line(out, &summary)?;
            if let Some(dir) = dir {
                io::write_text(&dir.join("summary.json"), &summary)?;
                io::write_text(&dir.join("mesh.csv"), &io::mesh_csv(&result.mesh))?;
                io::write_text(&dir.join("density.csv"), &io::density_csv(&result))?;
                let vertex = if spec.geometry.layout == Layout::Single { 1 } else { 2 };
                let radii = crate::experiments::RaySpec::default().radii();
                let samples = ray_profile(&result, vertex, None, &radii, &RegimeThresholds::default())?;
                io::write_text(&dir.join("samples.csv"), &io::samples_csv(&samples))?;
            }
            Ok(true)
        }
        Command::Sweep { config, case, alpha, p, epsilons, out: dir } => {
            let mut cfg = match (&config, &case, alpha) {
                (Some(path), _, _) => SweepConfig::from_toml(&std::fs::read_to_string(path)?)?,
                (None, Some(c), Some(a)) => SweepConfig::new(Case::parse(c)?, a),
                _ => return Err(BowtieError::InvalidConfig("sweep needs --config or both --case and --alpha".into())),
            };
            if config.is_some() {
                if let Some(c) = &case {
                    cfg.case = Case::parse(c)?;
                }
                if let Some(a) = alpha {
                    cfg.alpha = a;
                }
            }
            if p.is_some() {
                cfg.p = p;
            }
            if let Some(e) = epsilons {
                cfg.epsilons = parse_list(&e)?;
            }
            cfg.validate()?;
            let output = epsilon_sweep(&cfg)?;
            output.write(&dir)?;
            let r = &output.report;
            out_line(out, &format!("config_hash {}", r.config_hash))?;
            for f in r.fits.iter().filter(|f| f.epsilon.is_none()) {
                out_line(
                    out,
                    &format!(
                        "fit {}: slope {} target {:?}{}",
                        f.name,
                        f.slope().map_or("n/a".into(), |s| format!("{s:.4}")),
                        f.target,
                        if f.informational { " (informational)" } else { "" }
                    ),
                )?;
            }
            for b in &r.bands {
                out_line(out, &format!("band {}: ratio {:.3} (limit {})", b.name, b.ratio, b.threshold))?;
            }
            for fail in r.failures() {
                out_line(out, &format!("failed: {fail}"))?;
            }
            out_line(out, &format!("{} -> {}", if r.pass { "PASS" } else { "FAIL" }, dir.display()))?;
            Ok(r.pass)
        }
        Command::Fit { input, x, y, window, scale, no_gate } => {
            let text = std::fs::read_to_string(&input)?;
            let (xs, ys) = fit_columns(&input, &text, &x, &y)?;
            let xs: Vec<f64> = xs.iter().map(|v| v / scale.unwrap_or(1.0)).collect();
            let window = window.map(|w| parse_pair(&w)).transpose()?;
            let (xs, ys): (Vec<f64>, Vec<f64>) = xs
                .into_iter()
                .zip(ys)
                .filter(|(a, b)| a.is_finite() && b.is_finite())
                .filter(|(a, _)| window.map_or(true, |w| *a >= w[0] && *a <= w[1]))
                .unzip();
            let fit = if no_gate { fit_loglog(&xs, &ys) } else { fit_exponent(&xs, &ys, None) };
            match fit {
                Ok(f) => {
                    out_line(out, &serde_json::to_string_pretty(&f)?)?;
                    Ok(true)
                }
                Err(BowtieError::Fit(msg)) => {
                    out_line(out, &format!("fit rejected: {msg}"))?;
                    Ok(false)
                }
                Err(e) => Err(e),
            }
        }
        Command::CheckConditionA { alpha, p } => {
            let r = check_condition_a(alpha, p)?;
            out_line(out, if r.holds { "holds" } else { "fails" })?;
            out_line(out, &format!("center {:.12} {:.12}", r.center.x, r.center.y))?;
            out_line(out, &format!("radius {:.12}", r.radius))?;
            if let (Some(w), Some((edge, s))) = (r.witness, r.witness_edge) {
                out_line(out, &format!("witness {:.12} {:.12} edge {edge} s {s:.12}", w.x, w.y))?;
            }
            Ok(r.holds)
        }
        Command::Report { paths, out: dest } => {
            let mut rows = Vec::new();
            for p in &paths {
                let file = if p.is_dir() { p.join("report.json") } else { p.clone() };
                let report: Report = serde_json::from_str(&std::fs::read_to_string(&file)?)?;
                out_line(
                    out,
                    &format!("{} {} case={:?} alpha={}", if report.pass { "PASS" } else { "FAIL" }, file.display(), report.case, report.alpha),
                )?;
                for f in report.failures() {
                    out_line(out, &format!("  failed: {f}"))?;
                }
                rows.push(serde_json::json!({
                    "path": file.display().to_string(),
                    "config_hash": report.config_hash,
                    "pass": report.pass,
                    "failures": report.failures(),
                }));
            }
            let pass = rows.iter().all(|r| r["pass"] == serde_json::Value::Bool(true));
            out_line(out, if pass { "overall PASS" } else { "overall FAIL" })?;
            if let Some(d) = dest {
                let agg = serde_json::json!({ "reports": rows, "pass": pass });
                io::write_text(&d, &serde_json::to_string_pretty(&agg)?)?;
            }
            Ok(pass)
        }
    }
}

fn flag_problem(kind: &str, alpha: f64, epsilon: f64, p: f64, direction: Vec2) -> Result<ProblemSpec> {
    let mut geometry = BowtieConfig::new(alpha, epsilon);
    let dip = DipoleSpec::emitter(direction, p, epsilon);
    let kind = match kind {
        "emitter" => ProblemKind::Emitter(dip),
        "capacity-q" | "capacity_q" => ProblemKind::CapacityQ,
        "auxiliary-v" | "auxiliary_v" => ProblemKind::AuxiliaryV(dip),
        "background" | "background-linear" => ProblemKind::BackgroundLinear { direction: direction.normalized() },
        "single" | "single-inclusion" => {
            geometry.layout = Layout::Single;
            ProblemKind::SingleInclusion(dip)
        }
        other => return Err(BowtieError::InvalidConfig(format!("unknown problem kind '{other}'"))),
    };
    Ok(ProblemSpec::new(kind, geometry))
}

fn fit_columns(path: &Path, text: &str, x: &str, y: &str) -> Result<(Vec<f64>, Vec<f64>)> {
    if path.extension().map_or(false, |e| e == "dat") {
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for line in text.lines().filter(|l| !l.trim_start().starts_with('#') && !l.trim().is_empty()) {
            let cols: Vec<f64> = line
                .split_whitespace()
                .map(|t| t.parse::<f64>().map_err(|_| BowtieError::Parse(format!("bad number '{t}'"))))
                .collect::<Result<_>>()?;
            if cols.len() < 2 {
                return Err(BowtieError::Parse("expected two columns".into()));
            }
            xs.push(cols[0]);
            ys.push(cols[1]);
        }
        return Ok((xs, ys));
    }
    let (header, cols) = io::read_csv_columns(text)?;
    let col = |name: &str| -> Result<Vec<f64>> {
        if name == "grad_norm" {
            let ux = header.iter().position(|h| h == "ux");
            let uy = header.iter().position(|h| h == "uy");
            if let (Some(a), Some(b)) = (ux, uy) {
                return Ok(cols[a].iter().zip(&cols[b]).map(|(p, q)| p.hypot(*q)).collect());
            }
        }
        header
            .iter()
            .position(|h| h == name)
            .map(|i| cols[i].clone())
            .ok_or_else(|| BowtieError::InvalidConfig(format!("no column '{name}' in {}", path.display())))
    };
    Ok((col(x)?, col(y)?))
}
