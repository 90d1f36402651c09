//! Subcommand orchestration: each command reads the run configuration,
//! calls into the numerical modules, and emits deterministic files.

use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::RunConfig;
use crate::continuation::{detect_bifurcations, newton_solve, trace_branch, NewtonOptions};
use crate::cross_section::neumann_spectrum;
use crate::dispersion::{bifurcation_point, lambda_trivial, mu, regime};
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::operator::{first_eigenpair, SolveOptions};
use crate::output::{float_cell, write_csv, write_json, TOOLKIT_VERSION};
use crate::overdetermined::{boundary_normal_derivative, frechet_difference, linearized_solution};
use crate::profile::ProfileFunction;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Modes,
    Dispersion,
    Bifurcations,
    Eig,
    Verify,
    Branch,
    Reflect,
}

impl Command {
    pub const ALL: [Command; 7] = [
        Command::Modes,
        Command::Dispersion,
        Command::Bifurcations,
        Command::Eig,
        Command::Verify,
        Command::Branch,
        Command::Reflect,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Command::Modes => "modes",
            Command::Dispersion => "dispersion",
            Command::Bifurcations => "bifurcations",
            Command::Eig => "eig",
            Command::Verify => "verify",
            Command::Branch => "branch",
            Command::Reflect => "reflect",
        }
    }
}

fn solve_options(config: &RunConfig) -> SolveOptions {
    SolveOptions {
        tol: config.tolerances.eig,
        ..SolveOptions::default()
    }
}

fn newton_options(config: &RunConfig) -> NewtonOptions {
    NewtonOptions {
        tol_rel: config.tolerances.newton,
        solve: solve_options(config),
        ..NewtonOptions::default()
    }
}

fn grid_for(config: &RunConfig) -> Result<Grid> {
    Grid::new(config.section()?, config.grid.n_cross, config.grid.n_axial)
}

/// Execute one subcommand, writing its files under `out_dir`.
pub fn run(command: Command, config: &RunConfig, out_dir: &Path) -> Result<()> {
    config.validate()?;
    std::fs::create_dir_all(out_dir)?;
    match command {
        Command::Modes => run_modes(config, out_dir),
        Command::Dispersion => run_dispersion(config, out_dir),
        Command::Bifurcations => run_bifurcations(config, out_dir),
        Command::Eig => run_eig(config, out_dir),
        Command::Verify => run_verify(config, out_dir),
        Command::Branch => run_branch(config, out_dir),
        Command::Reflect => run_reflect(config, out_dir),
    }
}

fn run_modes(config: &RunConfig, out_dir: &Path) -> Result<()> {
    let spectrum = neumann_spectrum(&config.section()?, config.model.k_count)?;
    let rows: Vec<Vec<String>> = spectrum
        .iter()
        .map(|m| {
            vec![
                m.index.to_string(),
                m.numbers[0].to_string(),
                m.numbers[1].to_string(),
                float_cell(m.sigma),
            ]
        })
        .collect();
    write_csv(
        &out_dir.join("modes.csv"),
        config,
        &["k", "m", "n", "sigma"],
        &rows,
    )
}

fn run_dispersion(config: &RunConfig, out_dir: &Path) -> Result<()> {
    let section = config.section()?;
    let spectrum = neumann_spectrum(&section, config.dispersion.k_max)?;
    let d = &config.dispersion;
    let mut rows = Vec::new();
    for m in &spectrum {
        for i in 0..d.samples {
            let t = d.t_min + (d.t_max - d.t_min) * i as f64 / (d.samples - 1) as f64;
            match mu(t, m.sigma) {
                Ok(value) => rows.push(vec![
                    float_cell(t),
                    m.index.to_string(),
                    float_cell(m.sigma),
                    float_cell(value),
                    regime(t, m.sigma)?.as_str().to_string(),
                ]),
                // a sample landing on a resonance pole is skipped, not fatal
                Err(Error::ResonancePole { .. }) => continue,
                Err(e) => return Err(e),
            }
        }
    }
    write_csv(
        &out_dir.join("dispersion.csv"),
        config,
        &["t", "k", "sigma", "mu", "regime"],
        &rows,
    )
}

fn run_bifurcations(config: &RunConfig, out_dir: &Path) -> Result<()> {
    let candidates = detect_bifurcations(
        &config.section()?,
        config.model.k_count,
        (config.window.t_min, config.window.t_max),
    )?;
    let rows: Vec<Vec<String>> = candidates
        .iter()
        .map(|c| {
            vec![
                c.k.to_string(),
                float_cell(c.t),
                if c.simple { "simple" } else { "multiple" }.to_string(),
                float_cell(c.slope),
            ]
        })
        .collect();
    write_csv(
        &out_dir.join("bifurcations.csv"),
        config,
        &["k", "t", "multiplicity", "slope"],
        &rows,
    )
}

#[derive(Serialize)]
struct EigReport {
    version: String,
    config: RunConfig,
    lambda: f64,
    lambda_straight: f64,
    iterations: usize,
    residual: f64,
    /// Mean normal derivative over the top boundary.
    c: f64,
    /// Relative constancy of the normal derivative: stddev / |mean|.
    constancy: f64,
}

fn run_eig(config: &RunConfig, out_dir: &Path) -> Result<()> {
    let section = config.section()?;
    let grid = grid_for(config)?;
    let profile = ProfileFunction::new(
        section,
        config.model.t,
        config.model.coefficients.clone(),
    )?;
    let pair = first_eigenpair(&profile, &grid, &solve_options(config))?;
    let trace = boundary_normal_derivative(&profile, &pair, &grid)?;

    let mut rows = Vec::with_capacity(grid.n_cross() * grid.n_axial);
    for (c, node) in grid.cross_nodes().iter().enumerate() {
        for j in 0..grid.n_axial {
            rows.push(vec![
                float_cell(node[0]),
                float_cell(node[1]),
                float_cell(j as f64 * grid.axial_spacing()),
                float_cell(pair.phi_at(c, j)),
            ]);
        }
    }
    write_csv(
        &out_dir.join("eig.csv"),
        config,
        &["x1", "x2", "y", "phi"],
        &rows,
    )?;
    write_json(
        &out_dir.join("eig.json"),
        &EigReport {
            version: TOOLKIT_VERSION.into(),
            config: config.clone(),
            lambda: pair.lambda,
            lambda_straight: lambda_trivial(config.model.t)?,
            iterations: pair.iterations,
            residual: pair.residual,
            c: trace.mean,
            constancy: trace.stddev(&grid) / trace.mean.abs(),
        },
    )?;
    println!(
        "eig: lambda = {:.12}, {} iterations, residual {:.3e}, c = {:.12}",
        pair.lambda, pair.iterations, pair.residual, trace.mean
    );
    Ok(())
}

#[derive(Serialize)]
struct VerifyRow {
    k: usize,
    t: f64,
    mu_closed_form: f64,
    mu_finite_difference: f64,
    /// Gap measured against the row tolerance; below 1 passes.
    gap_over_tol: f64,
    pass: bool,
}

#[derive(Serialize)]
struct RandomMeanCheck {
    draws: usize,
    max_abs_mean: f64,
    tol: f64,
    pass: bool,
}

#[derive(Serialize)]
struct VerifyReport {
    version: String,
    config: RunConfig,
    rows: Vec<VerifyRow>,
    mean_zero_normal_derivative: RandomMeanCheck,
    pass: bool,
}

/// Dispersion table: closed-form eigenvalues of the linearization against
/// the finite-difference oracle, for the first modes at heights around each
/// crossing. A row passes when the gap stays below the configured fraction
/// of the eigenvalue scale, with an absolute floor near the crossing where
/// the closed form vanishes.
fn run_verify(config: &RunConfig, out_dir: &Path) -> Result<()> {
    let section = config.section()?;
    let grid = grid_for(config)?;
    let solve = solve_options(config);
    let k_top = config.model.k_count.min(5);
    let spectrum = neumann_spectrum(&section, k_top)?;

    println!(
        "{:>2} {:>12} {:>22} {:>22} {:>10} {:>6}",
        "k", "t", "mu closed-form", "mu finite-diff", "gap/tol", "pass"
    );
    let mut rows = Vec::new();
    for m in &spectrum {
        let t_k = bifurcation_point(m.sigma)?;
        let mut coeffs = vec![0.0; m.index];
        coeffs[m.index - 1] = 1.0;
        let dir = ProfileFunction::new(section, t_k, coeffs)?;
        for factor in [0.6, 1.0, 1.4] {
            let t = factor * t_k;
            let exact = mu(t, m.sigma)?;
            let fd = frechet_difference(t, &dir, config.tolerances.fd_eps, &grid, &solve)?;
            let approx = fd.modes.as_ref().expect("projections are computed")[m.index - 1];
            let tol = config.tolerances.verify_gap * exact.abs().max(0.05 * m.sigma * m.sigma);
            let gap_over_tol = (approx - exact).abs() / tol;
            let pass = gap_over_tol <= 1.0;
            println!(
                "{:>2} {:>12.8} {:>22} {:>22} {:>10.4} {:>6}",
                m.index,
                t,
                float_cell(exact),
                float_cell(approx),
                gap_over_tol,
                if pass { "yes" } else { "NO" }
            );
            rows.push(VerifyRow {
                k: m.index,
                t,
                mu_closed_form: exact,
                mu_finite_difference: approx,
                gap_over_tol,
                pass,
            });
        }
    }

    // randomized invariant: the linearized solution has a mean-zero normal
    // derivative on the top boundary for any mean-zero direction
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let t1 = bifurcation_point(spectrum[0].sigma)?;
    let draws = 10;
    let mut max_abs_mean = 0.0f64;
    for _ in 0..draws {
        let sol = loop {
            let t = rng.gen_range(0.8 * t1..1.3 * t1);
            let coeffs: Vec<f64> = (0..config.model.k_count)
                .map(|_| rng.gen_range(-1.0..1.0))
                .collect();
            let w = ProfileFunction::new(section, t, coeffs)?;
            match linearized_solution(t, &w) {
                Ok(sol) => break sol,
                Err(Error::ResonancePole { .. }) => continue,
                Err(e) => return Err(e),
            }
        };
        let samples: Result<Vec<f64>> = grid
            .cross_nodes()
            .iter()
            .map(|x| sol.top_axial_derivative(*x))
            .collect();
        max_abs_mean = max_abs_mean.max(grid.integrate_cross(&samples?).abs());
    }
    let mean_check = RandomMeanCheck {
        draws,
        max_abs_mean,
        tol: 1e-12,
        pass: max_abs_mean <= 1e-12,
    };
    println!(
        "mean-zero normal derivative over {} random directions: max |integral| = {:.3e} ({})",
        draws,
        max_abs_mean,
        if mean_check.pass { "yes" } else { "NO" }
    );

    let all_rows = rows.iter().all(|r| r.pass);
    let pass = all_rows && mean_check.pass;
    write_json(
        &out_dir.join("verify.json"),
        &VerifyReport {
            version: TOOLKIT_VERSION.into(),
            config: config.clone(),
            rows,
            mean_zero_normal_derivative: mean_check,
            pass,
        },
    )?;
    if !pass {
        return Err(Error::VerificationFailed(
            "dispersion table or mean-zero check exceeded tolerance; see verify.json".into(),
        ));
    }
    Ok(())
}

fn branch_columns(k_count: usize) -> Vec<String> {
    let mut cols: Vec<String> = ["s", "t", "lambda", "c", "residual", "w_norm"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    cols.extend((1..=k_count).map(|k| format!("a{k}")));
    cols
}

fn run_branch(config: &RunConfig, out_dir: &Path) -> Result<()> {
    let grid = grid_for(config)?;
    let branch = trace_branch(
        config.branch.j,
        config.branch.s_max,
        config.branch.ds,
        &grid,
        config.model.k_count,
        &newton_options(config),
    )?;
    for w in &branch.warnings {
        eprintln!("warning: {w}");
    }

    let cols = branch_columns(config.model.k_count);
    let col_refs: Vec<&str> = cols.iter().map(|s| s.as_str()).collect();
    let mut rows = Vec::new();
    let mut profile_rows = Vec::new();
    for p in &branch.points {
        let mut row = vec![
            float_cell(p.s),
            float_cell(p.t()),
            float_cell(p.lambda),
            float_cell(p.c),
            float_cell(p.residual_norm),
            float_cell(p.profile.w_norm()),
        ];
        row.extend(p.coefficients().iter().map(|a| float_cell(*a)));
        rows.push(row);
        for node in grid.cross_nodes() {
            profile_rows.push(vec![
                float_cell(p.s),
                float_cell(node[0]),
                float_cell(node[1]),
                float_cell(p.profile.v(*node)),
            ]);
        }
    }
    write_csv(&out_dir.join("branch.csv"), config, &col_refs, &rows)?;
    write_csv(
        &out_dir.join("branch_profiles.csv"),
        config,
        &["s", "x1", "x2", "v"],
        &profile_rows,
    )?;
    println!(
        "branch through mode {}: {} points, t* = {:.12}",
        branch.mode_index,
        branch.points.len(),
        branch.t_star
    );
    Ok(())
}

fn run_reflect(config: &RunConfig, out_dir: &Path) -> Result<()> {
    let section = config.section()?;
    let grid = grid_for(config)?;
    let spectrum = neumann_spectrum(&section, config.branch.j)?;
    let t_star = bifurcation_point(spectrum[config.branch.j - 1].sigma)?;
    let bp = newton_solve(
        config.branch.j,
        config.branch.s_max,
        t_star,
        &vec![0.0; config.model.k_count],
        &grid,
        config.model.k_count,
        &newton_options(config),
    )?;
    let rows: Vec<Vec<String>> = grid
        .cross_nodes()
        .iter()
        .map(|node| {
            let v = bp.profile.v(*node);
            vec![
                float_cell(node[0]),
                float_cell(node[1]),
                float_cell(-v),
                float_cell(v),
            ]
        })
        .collect();
    write_csv(
        &out_dir.join("reflect.csv"),
        config,
        &["x1", "x2", "lower", "upper"],
        &rows,
    )?;
    println!(
        "reflect: amplitude {} shape at t = {:.12} written as mirrored graphs",
        bp.s,
        bp.t()
    );
    Ok(())
}

/// Convenience for tests and examples: run a command in a fresh directory.
pub fn run_to_dir(command: Command, config: &RunConfig, out_dir: PathBuf) -> Result<PathBuf> {
    run(command, config, &out_dir)?;
    Ok(out_dir)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_and_bifurcations_files() {
        let dir = tempfile::tempdir().unwrap();
        let mut config = RunConfig::default();
        config.model.k_count = 3;
        run(Command::Modes, &config, dir.path()).unwrap();
        run(Command::Bifurcations, &config, dir.path()).unwrap();
        let modes = std::fs::read_to_string(dir.path().join("modes.csv")).unwrap();
        assert!(modes.lines().any(|l| l.starts_with("1,1,0,")));
        let bif = std::fs::read_to_string(dir.path().join("bifurcations.csv")).unwrap();
        let body: Vec<&str> = bif.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(body[0], "k,t,multiplicity,slope");
        assert!(body[1].contains("simple"));
    }

    #[test]
    fn dispersion_file_has_all_modes() {
        let dir = tempfile::tempdir().unwrap();
        let mut config = RunConfig::default();
        config.dispersion.samples = 5;
        config.dispersion.k_max = 2;
        run(Command::Dispersion, &config, dir.path()).unwrap();
        let text = std::fs::read_to_string(dir.path().join("dispersion.csv")).unwrap();
        let body: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(body.len(), 1 + 2 * 5);
    }
}
