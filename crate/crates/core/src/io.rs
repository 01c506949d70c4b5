//! Text and binary export with fixed ordering and float formatting.

use crate::bie::SolveResult;
use crate::error::Result;
use crate::fields::FieldSample;
use crate::geometry::PanelMesh;
use std::fmt::Write as _;
use std::path::Path;

/// Fixed scientific format used in every CSV.
pub fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else if v.is_nan() {
        "nan".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

pub fn mesh_csv(mesh: &PanelMesh) -> String {
    let mut s = String::from("x,y,nx,ny,weight,component_id,arc_coordinate\n");
    for p in &mesh.panels {
        let label = mesh.components[p.component].label;
        for k in 0..p.order() {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{}",
                fmt_f64(p.nodes[k].x),
                fmt_f64(p.nodes[k].y),
                fmt_f64(p.normals[k].x),
                fmt_f64(p.normals[k].y),
                fmt_f64(p.weights[k]),
                label,
                fmt_f64(p.arc_coordinate[k])
            );
        }
    }
    s
}

/// Density per node, aligned row by row with [`mesh_csv`].
pub fn density_csv(result: &SolveResult) -> String {
    let mut s = String::from("density\n");
    for d in &result.density {
        let _ = writeln!(s, "{}", fmt_f64(*d));
    }
    s
}

pub fn samples_csv(samples: &[FieldSample]) -> String {
    let mut s = String::from("x,y,u,ux,uy,dist_V1,dist_V2,dist_emitter,regime_tag\n");
    for f in samples {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{}",
            fmt_f64(f.point.x),
            fmt_f64(f.point.y),
            fmt_f64(f.u),
            fmt_f64(f.grad_u.x),
            fmt_f64(f.grad_u.y),
            fmt_f64(f.dist_v1),
            fmt_f64(f.dist_v2),
            fmt_f64(f.dist_emitter),
            f.regime.tag()
        );
    }
    s
}

/// Two-column whitespace-separated data.
pub fn dat_columns(x: &[f64], y: &[f64], header: &str) -> String {
    let mut s = format!("# {header}\n");
    for (a, b) in x.iter().zip(y) {
        let _ = writeln!(s, "{} {}", fmt_f64(*a), fmt_f64(*b));
    }
    s
}

/// Parse a CSV with a header row into named numeric columns; non-numeric cells become NaN.
pub fn read_csv_columns(text: &str) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header: Vec<String> = lines
        .next()
        .ok_or_else(|| crate::BowtieError::Parse("empty CSV".into()))?
        .split(',')
        .map(|s| s.trim().to_string())
        .collect();
    let mut cols = vec![Vec::new(); header.len()];
    for (ln, line) in lines.enumerate() {
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != header.len() {
            return Err(crate::BowtieError::Parse(format!("row {} has {} cells", ln + 2, cells.len())));
        }
        for (c, cell) in cells.iter().enumerate() {
            cols[c].push(cell.trim().parse::<f64>().unwrap_or(f64::NAN));
        }
    }
    Ok((header, cols))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    std::fs::write(path, text)?;
    Ok(())
}

/// Raw little-endian `f64` array.
pub fn write_f64_le(path: &Path, values: &[f64]) -> Result<()> {
    let mut bytes = Vec::with_capacity(values.len() * 8);
    for v in values {
        bytes.extend_from_slice(&v.to_le_bytes());
    }
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    std::fs::write(path, bytes)?;
    Ok(())
}

pub fn read_f64_le(path: &Path) -> Result<Vec<f64>> {
    let bytes = std::fs::read(path)?;
    Ok(bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8")))
        .collect())
}
