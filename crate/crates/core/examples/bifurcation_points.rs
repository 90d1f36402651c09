//! Locate candidate bifurcation heights in a window and report whether the
//! crossing eigenvalue is simple (the square cross-section shows why that
//! check matters).

use halfcyl::continuation::detect_bifurcations;
use halfcyl::cross_section::CrossSection;

fn main() -> halfcyl::Result<()> {
    let interval = CrossSection::Interval {
        length: std::f64::consts::PI,
    };
    println!("interval of length pi, window (0.3, 2.0):");
    println!("{:>3} {:>12} {:>10} {:>12}", "k", "t_k", "simple", "slope");
    for c in detect_bifurcations(&interval, 5, (0.3, 2.0))? {
        println!(
            "{:>3} {:>12.8} {:>10} {:>12.6}",
            c.k, c.t, c.simple, c.slope
        );
    }

    // on the square the second and third Neumann eigenvalues coincide, so
    // their crossings are flagged as multiple and skipped by the tracer
    let square = CrossSection::Rectangle {
        a: std::f64::consts::PI,
        b: std::f64::consts::PI,
    };
    println!("\nsquare pi x pi, window (0.3, 2.0):");
    println!("{:>3} {:>12} {:>10}", "k", "t_k", "simple");
    for c in detect_bifurcations(&square, 4, (0.3, 2.0))? {
        println!("{:>3} {:>12.8} {:>10}", c.k, c.t, c.simple);
    }
    Ok(())
}
