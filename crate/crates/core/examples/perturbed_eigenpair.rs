//! Solve the mixed eigenproblem on a curved domain (pulled back to the
//! straight cylinder) and inspect the boundary data that the overdetermined
//! condition cares about.

use std::f64::consts::PI;

use halfcyl::cross_section::CrossSection;
use halfcyl::grid::Grid;
use halfcyl::operator::{first_eigenpair, SolveOptions};
use halfcyl::overdetermined::{boundary_normal_derivative, overdetermined_residual_with_pair};
use halfcyl::profile::ProfileFunction;

fn main() -> halfcyl::Result<()> {
    let section = CrossSection::Interval { length: PI };
    let t = 1.0;
    let profile = ProfileFunction::new(section, t, vec![0.05, 0.01])?;
    let grid = Grid::new(section, 48, 64)?;

    let pair = first_eigenpair(&profile, &grid, &SolveOptions::default())?;
    let straight = (PI / (2.0 * t)).powi(2);
    println!("height profile: t = {t}, amplitudes [0.05, 0.01]");
    println!("lambda          = {:.12}", pair.lambda);
    println!("straight value  = {straight:.12}");
    println!("iterations      = {}", pair.iterations);
    println!("residual        = {:.3e}", pair.residual);

    let raw = boundary_normal_derivative(&profile, &pair, &grid)?;
    println!("\nnormal derivative on the curved top:");
    println!("mean (the would-be constant c) = {:.8}", raw.mean);
    println!("stddev                         = {:.3e}", raw.stddev(&grid));
    println!("straight-cylinder constant     = {:.8}", -PI / (2.0 * t));

    let field = overdetermined_residual_with_pair(&profile, &pair, &grid, 4)?;
    println!("\nmean-free residual, mode projections:");
    for (k, c) in field.modes.as_ref().unwrap().iter().enumerate() {
        println!("  mode {}: {c:+.6e}", k + 1);
    }
    Ok(())
}
