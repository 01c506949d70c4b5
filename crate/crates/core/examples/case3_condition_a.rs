//! Vertical dipole above the gap. Shows the circle condition, the corner
//! coefficient `a1`, the extremal boundary values of `v` and the blow-up exponents.
//!
//! Arguments: `[alpha] [p]`.

use bowtie::experiments::{epsilon_sweep, Case, SweepConfig};
use bowtie::geometry::check_condition_a;

fn main() -> bowtie::Result<()> {
    let mut args = std::env::args().skip(1);
    let alpha: f64 = args.next().map_or(std::f64::consts::FRAC_PI_2, |s| s.parse().expect("alpha"));
    let p: f64 = args.next().map_or(0.5, |s| s.parse().expect("p"));
    let cond = check_condition_a(alpha, p)?;
    println!("condition (A): {} (circle centre {:.4}, radius {:.4})", if cond.holds { "holds" } else { "fails" }, cond.center.y, cond.radius);

    let mut config = SweepConfig::new(Case::Case3, alpha);
    config.p = Some(p);
    let out = epsilon_sweep(&config)?;
    let r = &out.report;
    for e in &r.per_epsilon {
        if let Some(c) = e.corner {
            println!("eps = {:<6} a1 = {:.6} (r/2: {:.6})", e.epsilon, c.a1, c.a1_half_radius);
        }
    }
    for c in r.checks_named("extremal_values") {
        println!("eps = {:<6} {}", c.epsilon.unwrap_or(f64::NAN), c.detail);
    }
    if let Some(f) = r.fit("epsilon_slope") {
        println!("cross-epsilon slope {:.4}{}", f.slope().unwrap_or(f64::NAN), if f.informational { " (informational)" } else { "" });
    }
    println!("{}", if r.pass { "PASS" } else { "FAIL" });
    Ok(())
}
