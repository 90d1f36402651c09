//! Solve one nontrivial point and reflect it across the cross-section
//! hyperplane: the doubled domain {|x_n| < v(x')} is the symmetric region
//! whose first eigenfunction satisfies the full overdetermined conditions.

use std::f64::consts::PI;

use halfcyl::continuation::{newton_solve, NewtonOptions};
use halfcyl::cross_section::CrossSection;
use halfcyl::dispersion::bifurcation_point;
use halfcyl::grid::Grid;

fn main() -> halfcyl::Result<()> {
    let section = CrossSection::Interval { length: PI };
    let grid = Grid::new(section, 48, 64)?;
    let s = 0.03;
    let t_star = bifurcation_point(1.0)?;
    let point = newton_solve(1, s, t_star, &[0.0; 6], &grid, 6, &NewtonOptions::default())?;

    println!("amplitude s = {s}, height t(s) = {:.10}", point.t());

    let n = 61;
    let rows = 12;
    let heights: Vec<f64> = (0..n)
        .map(|i| point.profile.v([PI * i as f64 / (n - 1) as f64, 0.0]))
        .collect();
    let vmax = heights.iter().fold(0.0f64, |m, v| m.max(*v));
    let vmin = heights.iter().fold(f64::INFINITY, |m, v| m.min(*v));

    // the deviation is tiny against the mean height, so plot the two free
    // boundaries with the vertical axis zoomed onto their band
    println!("\nupper free boundary (vertical axis zoomed to its range):");
    let curve = |r: usize, v: f64| -> char {
        let row = ((v - vmin) / (vmax - vmin) * (rows - 1) as f64).round() as usize;
        if row == r {
            '*'
        } else {
            ' '
        }
    };
    for r in (0..rows).rev() {
        let line: String = heights.iter().map(|v| curve(r, *v)).collect();
        println!("  {line}");
    }
    println!("  {}", "-".repeat(n));
    for r in 0..rows {
        let line: String = heights.iter().map(|v| curve(r, *v)).collect();
        println!("  {line}");
    }
    println!("  (mirror image: lower boundary at -v)");
    println!("\nheight range: {:.6} .. {:.6}", vmin, vmax);
    println!("max - min   = {:.6}", vmax - vmin);
    println!(
        "2 s sqrt(2/pi) = {:.6} (first-order prediction)",
        2.0 * s * (2.0 / PI).sqrt()
    );
    Ok(())
}
