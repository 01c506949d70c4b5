use super::config::{Case, SweepConfig};
use super::fit::ExponentFit;
use crate::error::Result;
use crate::fields::{CornerCoefficient, FieldSample};
use crate::io;
use serde::{Deserialize, Serialize};
use std::path::Path;

/// Log-log fit compared against a target slope.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitRecord {
    pub name: String,
    /// `None` for cross-epsilon fits.
    pub epsilon: Option<f64>,
    pub target: Option<f64>,
    pub tolerance: Option<f64>,
    pub fit: Option<ExponentFit>,
    /// Reason the fit could not be formed or was rejected.
    pub error: Option<String>,
    /// Informational records do not affect the overall verdict.
    pub informational: bool,
    pub pass: bool,
}

impl FitRecord {
    pub fn new(name: &str, epsilon: Option<f64>, target: Option<f64>, tolerance: Option<f64>, fit: Result<ExponentFit>) -> Self {
        let (fit, error) = match fit {
            Ok(f) => (Some(f), None),
            Err(e) => (None, Some(e.to_string())),
        };
        let pass = match (&fit, target, tolerance) {
            (Some(f), Some(t), Some(tol)) => (f.slope - t).abs() <= tol,
            (Some(_), _, _) => true,
            (None, _, _) => false,
        };
        FitRecord { name: name.into(), epsilon, target, tolerance, fit, error, informational: false, pass }
    }

    pub fn slope(&self) -> Option<f64> {
        self.fit.map(|f| f.slope)
    }
}

/// Band statistic of a scaled quantity across the sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandRecord {
    pub name: String,
    pub epsilons: Vec<f64>,
    pub values: Vec<f64>,
    pub min: f64,
    pub max: f64,
    /// `max / min` of the absolute values.
    pub ratio: f64,
    pub threshold: f64,
    pub require_positive: bool,
    pub informational: bool,
    pub pass: bool,
}

impl BandRecord {
    pub fn new(name: &str, epsilons: Vec<f64>, values: Vec<f64>, threshold: f64, require_positive: bool) -> Self {
        let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
        let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let amin = values.iter().map(|v| v.abs()).fold(f64::INFINITY, f64::min);
        let amax = values.iter().map(|v| v.abs()).fold(0.0, f64::max);
        let ratio = if amin > 0.0 { amax / amin } else { f64::INFINITY };
        let finite = !values.is_empty() && values.iter().all(|v| v.is_finite());
        let signs_ok = if require_positive { min > 0.0 } else { min > 0.0 || max < 0.0 };
        let pass = finite && values.len() >= 2 && signs_ok && ratio < threshold;
        BandRecord { name: name.into(), epsilons, values, min, max, ratio, threshold, require_positive, informational: false, pass }
    }
}

/// Scalar pass/fail check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub epsilon: Option<f64>,
    pub value: f64,
    pub threshold: f64,
    pub detail: String,
    pub informational: bool,
    pub pass: bool,
}

impl CheckRecord {
    /// Passes when `value <= threshold`.
    pub fn at_most(name: &str, epsilon: Option<f64>, value: f64, threshold: f64, detail: String) -> Self {
        CheckRecord { name: name.into(), epsilon, value, threshold, detail, informational: false, pass: value <= threshold }
    }

    /// Passes when `value < threshold`, for strict sign conditions written as `-x < 0`.
    pub fn below(name: &str, epsilon: Option<f64>, value: f64, threshold: f64, detail: String) -> Self {
        CheckRecord { name: name.into(), epsilon, value, threshold, detail, informational: false, pass: value < threshold }
    }
}

/// Per-epsilon solve statistics and raw measurements.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpsilonRecord {
    pub epsilon: f64,
    pub n_nodes: usize,
    pub mesh_hash: String,
    pub residual: f64,
    pub condition_estimate: f64,
    pub constants: Vec<f64>,
    /// `|grad u|` at the fixed relative point.
    pub fixed_point_gradient: f64,
    /// Same value multiplied by `|X* - V|^(1 - beta)`.
    pub fixed_point_corrected: f64,
    pub corner: Option<CornerCoefficient>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub config_hash: String,
    pub case: Case,
    pub alpha: f64,
    pub beta: f64,
    pub p: f64,
    /// Whether the circle condition holds (Case 3 only).
    pub condition_a: Option<bool>,
    /// Thresholds and windows in force for this run.
    pub calibration: Vec<String>,
    pub per_epsilon: Vec<EpsilonRecord>,
    pub fits: Vec<FitRecord>,
    pub bands: Vec<BandRecord>,
    pub checks: Vec<CheckRecord>,
    /// Set when a solve failed and the report is partial.
    pub aborted: Option<String>,
    pub pass: bool,
}

impl Report {
    pub fn new(config: &SweepConfig) -> Self {
        Report {
            config_hash: config.hash(),
            case: config.case,
            alpha: config.alpha,
            beta: std::f64::consts::PI / (2.0 * std::f64::consts::PI - config.alpha),
            p: config.p(),
            condition_a: None,
            calibration: Vec::new(),
            per_epsilon: Vec::new(),
            fits: Vec::new(),
            bands: Vec::new(),
            checks: Vec::new(),
            aborted: None,
            pass: false,
        }
    }

    /// Recompute the overall verdict from the non-informational records.
    pub fn finalize(&mut self) {
        self.pass = self.aborted.is_none()
            && self.fits.iter().filter(|f| !f.informational).all(|f| f.pass)
            && self.bands.iter().filter(|b| !b.informational).all(|b| b.pass)
            && self.checks.iter().filter(|c| !c.informational).all(|c| c.pass);
    }

    pub fn fit(&self, name: &str) -> Option<&FitRecord> {
        self.fits.iter().find(|f| f.name == name && f.epsilon.is_none())
    }

    pub fn fits_named<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a FitRecord> + 'a {
        self.fits.iter().filter(move |f| f.name == name)
    }

    pub fn band(&self, name: &str) -> Option<&BandRecord> {
        self.bands.iter().find(|b| b.name == name)
    }

    pub fn checks_named<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a CheckRecord> + 'a {
        self.checks.iter().filter(move |c| c.name == name)
    }

    /// Failing non-informational record names.
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        if let Some(a) = &self.aborted {
            out.push(format!("aborted: {a}"));
        }
        for f in self.fits.iter().filter(|f| !f.informational && !f.pass) {
            out.push(match f.epsilon {
                Some(e) => format!("fit {} at eps={e}", f.name),
                None => format!("fit {}", f.name),
            });
        }
        out.extend(self.bands.iter().filter(|b| !b.informational && !b.pass).map(|b| format!("band {}", b.name)));
        for c in self.checks.iter().filter(|c| !c.informational && !c.pass) {
            out.push(match c.epsilon {
                Some(e) => format!("check {} at eps={e}", c.name),
                None => format!("check {}", c.name),
            });
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serialisable report")
    }
}

/// A named two-column data set for plotting.
#[derive(Debug, Clone, PartialEq)]
pub struct Figure {
    pub name: String,
    pub header: String,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

/// Everything a sweep produces.
#[derive(Debug, Clone)]
pub struct SweepOutput {
    pub report: Report,
    /// Field samples grouped by epsilon, in sweep order.
    pub samples: Vec<(f64, Vec<FieldSample>)>,
    pub figures: Vec<Figure>,
}

impl SweepOutput {
    /// Write `report.json`, `samples.csv` and one `.dat` file per figure into `dir`.
    pub fn write(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        io::write_text(&dir.join("report.json"), &self.report.to_json())?;
        let all: Vec<FieldSample> = self.samples.iter().flat_map(|(_, s)| s.iter().copied()).collect();
        io::write_text(&dir.join("samples.csv"), &io::samples_csv(&all))?;
        for f in &self.figures {
            io::write_text(&dir.join(format!("{}.dat", f.name)), &io::dat_columns(&f.x, &f.y, &f.header))?;
        }
        Ok(())
    }
}
