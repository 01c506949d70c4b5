//! Horizontal dipole between the inclusions: near-vertex exponents, mid-range
//! band, gaps and the upper bound across the default epsilon grid.
//!
//! Writes `report.json`, `samples.csv` and `.dat` files into the directory given
//! as the first argument (default `out/case1`).

use bowtie::experiments::{epsilon_sweep, Case, SweepConfig};

fn main() -> bowtie::Result<()> {
    let dir = std::env::args().nth(1).unwrap_or_else(|| "out/case1".into());
    let config = SweepConfig::new(Case::Case1, std::f64::consts::FRAC_PI_2);
    let out = epsilon_sweep(&config)?;
    let r = &out.report;
    println!("beta = {:.6}; targets: spatial {:.4}, epsilon {:.4}", r.beta, r.beta - 1.0, -(1.0 + r.beta));
    for f in r.fits_named("spatial_slope") {
        println!("eps = {:<6} spatial slope {:.4}", f.epsilon.unwrap_or(f64::NAN), f.slope().unwrap_or(f64::NAN));
    }
    if let Some(f) = r.fit("epsilon_slope") {
        println!("cross-epsilon slope {:.4}", f.slope().unwrap_or(f64::NAN));
    }
    for b in &r.bands {
        println!("band {:<18} ratio {:.3} (limit {})", b.name, b.ratio, b.threshold);
    }
    out.write(std::path::Path::new(&dir))?;
    println!("{} -> {dir}", if r.pass { "PASS" } else { "FAIL" });
    Ok(())
}
