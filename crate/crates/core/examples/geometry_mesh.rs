//! Build a corner-graded bow-tie mesh, print its panel statistics and write it as CSV.
//!
//! Run with `cargo run --release --example geometry_mesh -- [alpha] [epsilon] [out.csv]`.

use bowtie::geometry::{check_condition_a, BowtieConfig, PanelMesh};
use bowtie::io;

fn main() -> bowtie::Result<()> {
    let mut args = std::env::args().skip(1);
    let alpha: f64 = args.next().map_or(std::f64::consts::FRAC_PI_2, |s| s.parse().expect("alpha"));
    let eps: f64 = args.next().map_or(0.01, |s| s.parse().expect("epsilon"));
    let out = args.next();

    let config = BowtieConfig::new(alpha, eps);
    let mesh = PanelMesh::build(&config)?;
    println!("alpha = {alpha:.6}, eps = {eps}, beta = {:.6}, grading exponent = {}", config.beta(), mesh.grading_exponent);
    println!("{} panels, {} nodes, order {}", mesh.panels.len(), mesh.n_nodes(), mesh.order);
    for (c, per) in mesh.components.iter().zip(mesh.perimeters()) {
        let lengths: Vec<f64> = mesh.panels[c.panels.clone()].iter().map(|p| p.length).collect();
        let min = lengths.iter().cloned().fold(f64::INFINITY, f64::min);
        let max = lengths.iter().cloned().fold(0.0, f64::max);
        println!("component {}: {} panels, perimeter {per:.6}, panel length [{min:.3e}, {max:.3e}]", c.label, lengths.len());
    }
    println!("mesh hash {}", mesh.hash());
    for p in [0.5, 0.1] {
        let c = check_condition_a(alpha, p)?;
        println!("condition (A) at p = {p}: {}", if c.holds { "holds" } else { "fails" });
    }
    if let Some(path) = out {
        io::write_text(std::path::Path::new(&path), &io::mesh_csv(&mesh))?;
        println!("wrote {path}");
    }
    Ok(())
}
