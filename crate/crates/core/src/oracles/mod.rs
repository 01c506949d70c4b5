//! Reference solutions that share no quadrature or assembly code with the solver.

pub mod disk;
pub mod fd;
pub mod manufactured;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub oracle_name: String,
    pub max_abs_error: f64,
    pub max_rel_error: f64,
    pub sample_count: usize,
    /// Wall-clock seconds.
    pub runtime: f64,
}

impl OracleReport {
    /// Summarise `(exact, computed)` gradient pairs; relative errors use `|exact|`.
    pub fn from_pairs(name: &str, pairs: &[(crate::Vec2, crate::Vec2)], runtime: f64) -> Self {
        let mut abs = 0.0f64;
        let mut rel = 0.0f64;
        for (e, c) in pairs {
            let d = (*e - *c).norm();
            abs = abs.max(d);
            if e.norm() > 0.0 {
                rel = rel.max(d / e.norm());
            }
        }
        OracleReport { oracle_name: name.into(), max_abs_error: abs, max_rel_error: rel, sample_count: pairs.len(), runtime }
    }
}

/// Compare a solve with the exact disk solution at `samples`.
pub fn disk_report(
    disk: &disk::DiskProblem,
    result: &crate::bie::SolveResult,
    samples: &[crate::Vec2],
) -> crate::Result<OracleReport> {
    let t = std::time::Instant::now();
    let mut pairs = Vec::with_capacity(samples.len());
    for &x in samples {
        pairs.push((disk.image_solution(x)?.1, crate::fields::eval_gradient(result, x)?));
    }
    Ok(OracleReport::from_pairs("disk_image", &pairs, t.elapsed().as_secs_f64()))
}

/// Compare a solve with a manufactured field at `samples`.
pub fn manufactured_report(
    m: &manufactured::ManufacturedSolution,
    result: &crate::bie::SolveResult,
    samples: &[crate::Vec2],
) -> crate::Result<OracleReport> {
    let t = std::time::Instant::now();
    let mut pairs = Vec::with_capacity(samples.len());
    for &x in samples {
        pairs.push((m.gradient(x), crate::fields::eval_gradient(result, x)?));
    }
    Ok(OracleReport::from_pairs("manufactured", &pairs, t.elapsed().as_secs_f64()))
}
