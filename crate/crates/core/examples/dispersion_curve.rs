//! Sample the dispersion eigenvalue mu(t, sigma) of the first mode over a
//! range of heights and watch it change sign at the crossing.

use halfcyl::dispersion::{bifurcation_point, crossing_slope, mu, regime};

fn main() -> halfcyl::Result<()> {
    let sigma = 1.0; // first Neumann eigenvalue on the interval of length pi
    println!("{:>8} {:>14} {:>14}", "t", "mu(t, 1)", "regime");
    for i in 0..=12 {
        let t = 0.5 + 1.5 * i as f64 / 12.0;
        println!(
            "{:>8.4} {:>14.8} {:>14}",
            t,
            mu(t, sigma)?,
            regime(t, sigma)?.as_str()
        );
    }

    let t1 = bifurcation_point(sigma)?;
    println!("\nsign change at t1 = {t1:.12} (= pi/2)");
    println!("slope through the crossing: {:.12}", crossing_slope(sigma)?);
    println!("mu exactly at t1: {:.3e}", mu(t1, sigma)?);
    Ok(())
}
