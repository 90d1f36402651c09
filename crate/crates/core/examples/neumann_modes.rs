//! Enumerate the Neumann spectrum of a cross-section and check the modes
//! numerically: run with `cargo run --example neumann_modes`.

use halfcyl::cross_section::{neumann_spectrum, CrossSection};
use halfcyl::grid::Grid;

fn main() -> halfcyl::Result<()> {
    let interval = CrossSection::Interval {
        length: std::f64::consts::PI,
    };
    println!("interval of length pi, first 6 modes:");
    println!("{:>3} {:>4} {:>12}", "k", "m", "sigma");
    for mode in neumann_spectrum(&interval, 6)? {
        println!("{:>3} {:>4} {:>12.6}", mode.index, mode.numbers[0], mode.sigma);
    }

    let rect = CrossSection::Rectangle { a: 1.7, b: 1.0 };
    println!("\nrectangle 1.7 x 1.0, first 8 modes:");
    println!("{:>3} {:>4} {:>4} {:>12}", "k", "m", "n", "sigma");
    for mode in neumann_spectrum(&rect, 8)? {
        println!(
            "{:>3} {:>4} {:>4} {:>12.6}",
            mode.index, mode.numbers[0], mode.numbers[1], mode.sigma
        );
    }

    // quadrature orthonormality on a grid
    let grid = Grid::new(interval, 48, 8)?;
    let modes = neumann_spectrum(&grid.section(), 4)?;
    println!("\nquadrature Gram matrix of the first 4 interval modes:");
    for a in &modes {
        let row: Vec<String> = modes
            .iter()
            .map(|b| {
                let vals: Vec<f64> = grid
                    .cross_nodes()
                    .iter()
                    .map(|x| a.eval(*x) * b.eval(*x))
                    .collect();
                format!("{:+.2e}", grid.integrate_cross(&vals))
            })
            .collect();
        println!("  [{}]", row.join(", "));
    }
    Ok(())
}
