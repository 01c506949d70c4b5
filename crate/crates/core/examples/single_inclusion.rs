//! One inclusion and a dipole: the vertex blow-up exponents match the bow-tie.

use bowtie::experiments::{epsilon_sweep, Case, Report, SweepConfig};

fn exponents(r: &Report) -> (f64, f64) {
    let spatial: Vec<f64> = r.fits_named("spatial_slope").filter_map(|f| f.slope()).collect();
    let mean = spatial.iter().sum::<f64>() / spatial.len() as f64;
    (mean, r.fit("epsilon_slope").and_then(|f| f.slope()).unwrap_or(f64::NAN))
}

fn main() -> bowtie::Result<()> {
    let alpha = std::f64::consts::FRAC_PI_2;
    let single = epsilon_sweep(&SweepConfig::new(Case::SingleInclusion, alpha))?.report;
    let pair = epsilon_sweep(&SweepConfig::new(Case::Case1, alpha))?.report;
    let (s1, e1) = exponents(&single);
    let (s2, e2) = exponents(&pair);
    println!("single inclusion: spatial {s1:.4}, epsilon {e1:.4}");
    println!("bow-tie case 1:   spatial {s2:.4}, epsilon {e2:.4}");
    println!("differences {:.4}, {:.4}", (s1 - s2).abs(), (e1 - e2).abs());
    Ok(())
}
