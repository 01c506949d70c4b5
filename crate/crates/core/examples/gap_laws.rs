//! Potential gaps of `u` and of the capacity function `q` and the near-vertex
//! flux of `q`, scaled by their logarithmic factors.

use bowtie::experiments::{gap_measurements, Case, SweepConfig};

fn main() -> bowtie::Result<()> {
    let report = gap_measurements(&SweepConfig::new(Case::Case1, std::f64::consts::FRAC_PI_2))?;
    for b in &report.bands {
        println!("{}:", b.name);
        for (e, v) in b.epsilons.iter().zip(&b.values) {
            println!("  eps = {e:<6} {v:.6}");
        }
        println!("  ratio {:.3} (limit {}) {}", b.ratio, b.threshold, if b.pass { "PASS" } else { "FAIL" });
    }
    Ok(())
}
