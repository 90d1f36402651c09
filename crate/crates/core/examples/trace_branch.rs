//! Trace the nontrivial branch through the first bifurcation point and
//! verify a point on it: heights move quadratically in the amplitude while
//! the normal derivative stays constant to solver precision.

use std::f64::consts::PI;

use halfcyl::continuation::{trace_branch, verify_branch_point, NewtonOptions};
use halfcyl::cross_section::CrossSection;
use halfcyl::grid::Grid;

fn main() -> halfcyl::Result<()> {
    let section = CrossSection::Interval { length: PI };
    let grid = Grid::new(section, 48, 64)?;
    let opts = NewtonOptions::default();

    let branch = trace_branch(1, 0.04, 0.01, &grid, 8, &opts)?;
    println!(
        "branch through mode {} at t* = {:.10}",
        branch.mode_index, branch.t_star
    );
    println!(
        "{:>7} {:>14} {:>12} {:>12} {:>6}",
        "s", "t(s)", "c", "residual", "iters"
    );
    for p in &branch.points {
        println!(
            "{:>7.3} {:>14.10} {:>12.8} {:>12.3e} {:>6}",
            p.s,
            p.t(),
            p.c,
            p.residual_norm,
            p.newton_iters
        );
    }
    for w in &branch.warnings {
        println!("warning: {w}");
    }

    let point = branch
        .points
        .iter()
        .find(|p| (p.s - 0.02).abs() < 1e-12)
        .expect("branch reaches s = 0.02");
    let report = verify_branch_point(point, &grid, &opts.solve)?;
    println!("\nverification at s = 0.02:");
    println!("constancy (stddev/|mean|) = {:.3e}", report.constancy);
    println!("c                         = {:.8}", report.c);
    println!("lambda                    = {:.10}", report.lambda);
    println!("deviation per amplitude   = {:.4}", report.nonconstancy.unwrap());
    println!("domain stays positive     = {}", report.shape_ok());
    Ok(())
}
