//! Vertical dipole at the origin: the constants vanish, the potential is odd in
//! `x2` and `sup |grad u| |X|^2` stays bounded as the gap closes.

use bowtie::experiments::{epsilon_sweep, Case, SweepConfig};

fn main() -> bowtie::Result<()> {
    let config = SweepConfig::new(Case::Case2, std::f64::consts::FRAC_PI_2);
    let out = epsilon_sweep(&config)?;
    let r = &out.report;
    for e in &r.per_epsilon {
        println!("eps = {:<6} constants {:?}", e.epsilon, e.constants);
    }
    if let Some(b) = r.band("upper_bound") {
        for (e, v) in b.epsilons.iter().zip(&b.values) {
            println!("eps = {e:<6} sup |grad u| |X|^2 = {v:.6}");
        }
        println!("band ratio {:.4}", b.ratio);
    }
    if let Some(f) = r.fit("sup_epsilon_slope") {
        println!("slope of the sup against eps: {:.4}", f.slope().unwrap_or(f64::NAN));
    }
    println!("{}", if r.pass { "PASS" } else { "FAIL" });
    Ok(())
}
