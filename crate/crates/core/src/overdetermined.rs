//! The overdetermined normal-derivative operator: the boundary trace
//! `x' -> d_nu u(x', v(x'))` of the first eigenfunction, its mean-free part
//! whose zeros are the solutions of the overdetermined problem, the
//! closed-form modal linearization at straight cylinders, and the
//! finite-difference Frechet oracle connecting the two.

use crate::cross_section::{neumann_spectrum, NeumannMode};
use crate::dispersion::{g_prime_at_top, g_profile, lambda_trivial, mu};
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::operator::{first_eigenpair, EigenPair, SolveOptions};
use crate::profile::ProfileFunction;

/// Scalar field sampled on the cross-section grid, identified with a field on
/// the top boundary through the graph map.
#[derive(Debug, Clone)]
pub struct BoundaryField {
    pub values: Vec<f64>,
    /// Quadrature mean over the cross-section.
    pub mean: f64,
    /// Projections onto the first Neumann modes, when requested.
    pub modes: Option<Vec<f64>>,
}

impl BoundaryField {
    fn new(values: Vec<f64>, grid: &Grid) -> BoundaryField {
        let mean = grid.integrate_cross(&values) / grid.section().volume();
        BoundaryField {
            values,
            mean,
            modes: None,
        }
    }

    /// Standard deviation of the samples under the quadrature measure.
    pub fn stddev(&self, grid: &Grid) -> f64 {
        let centered: Vec<f64> = self.values.iter().map(|v| (v - self.mean).powi(2)).collect();
        (grid.integrate_cross(&centered) / grid.section().volume())
            .max(0.0)
            .sqrt()
    }

    /// L2 norm of the samples over the cross-section.
    pub fn norm(&self, grid: &Grid) -> f64 {
        let sq: Vec<f64> = self.values.iter().map(|v| v * v).collect();
        grid.integrate_cross(&sq).max(0.0).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

/// Projection of grid samples onto one Neumann mode.
pub fn project_onto_mode(grid: &Grid, values: &[f64], mode: &NeumannMode) -> f64 {
    let weighted: Vec<f64> = grid
        .cross_nodes()
        .iter()
        .zip(values)
        .map(|(x, v)| v * mode.eval(*x))
        .collect();
    grid.integrate_cross(&weighted)
}

/// One-sided third-order estimate of the axial derivative at the top layer.
fn axial_derivative_at_top(pair: &EigenPair, cross: usize, ha: f64) -> f64 {
    let j = pair.n_axial() - 1;
    (11.0 * pair.phi_at(cross, j) - 18.0 * pair.phi_at(cross, j - 1)
        + 9.0 * pair.phi_at(cross, j - 2)
        - 2.0 * pair.phi_at(cross, j - 3))
        / (6.0 * ha)
}

/// Signed normal derivative of the eigenfunction along the top boundary.
///
/// The eigenfunction vanishes identically on the top layer, so its tangential
/// differences there are exactly zero and the metric contraction collapses to
/// the axial term: `d_nu u = sqrt(g^NN) * phi_N`, which is negative for the
/// positive first eigenfunction.
pub fn boundary_normal_derivative(
    profile: &ProfileFunction,
    pair: &EigenPair,
    grid: &Grid,
) -> Result<BoundaryField> {
    let ha = grid.axial_spacing();
    let n = grid.n_cross();
    let mut values = Vec::with_capacity(n);
    for c in 0..n {
        let m = crate::metric::metric_at(profile, grid.cross_nodes()[c], 1.0)?;
        let axis = m.dim - 1;
        let g_nn = m.g_inv[axis][axis];
        values.push(g_nn.sqrt() * axial_derivative_at_top(pair, c, ha));
    }
    Ok(BoundaryField::new(values, grid))
}

/// Mean-free part of the boundary normal derivative for the profile
/// `v = t + w`: the operator whose zeros are the overdetermined solutions.
/// The output carries both grid samples and Neumann-mode projections up to
/// the profile's truncation (or `k_count` when larger).
pub fn overdetermined_residual(
    profile: &ProfileFunction,
    grid: &Grid,
    k_count: usize,
    opts: &SolveOptions,
) -> Result<BoundaryField> {
    let pair = first_eigenpair(profile, grid, opts)?;
    overdetermined_residual_with_pair(profile, &pair, grid, k_count)
}

/// Same as [`overdetermined_residual`] but reusing an already computed
/// eigenpair, so callers issuing many evaluations keep control of the solves.
pub fn overdetermined_residual_with_pair(
    profile: &ProfileFunction,
    pair: &EigenPair,
    grid: &Grid,
    k_count: usize,
) -> Result<BoundaryField> {
    let raw = boundary_normal_derivative(profile, pair, grid)?;
    let values: Vec<f64> = raw.values.iter().map(|v| v - raw.mean).collect();
    let mut field = BoundaryField::new(values, grid);
    let volume = grid.section().volume();
    if field.mean.abs() > 1e-10 * field.max_abs().max(raw.mean.abs()) {
        log::warn!(
            "mean removal left a residual constant component {:.3e}",
            field.mean * volume
        );
    }
    let k = k_count.max(profile.k_count());
    let spectrum = neumann_spectrum(&grid.section(), k)?;
    field.modes = Some(
        spectrum
            .iter()
            .map(|m| project_onto_mode(grid, &field.values, m))
            .collect(),
    );
    Ok(field)
}

/// Closed-form modal solution of the linearized interior problem at a
/// straight cylinder: an axial profile per active Neumann mode, scaled so the
/// top trace equals `pi/(2 t^2)` times the direction.
#[derive(Debug, Clone)]
pub struct LinearizedSolution {
    t: f64,
    coefficients: Vec<f64>,
    modes: Vec<NeumannMode>,
}

impl LinearizedSolution {
    pub fn t(&self) -> f64 {
        self.t
    }

    /// Direction coefficients in the Neumann basis (index k starts at 1).
    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn modes(&self) -> &[NeumannMode] {
        &self.modes
    }

    /// Pointwise evaluation inside the straight cylinder, `x_n` in `[0, t]`.
    pub fn eval(&self, point: [f64; 2], x_n: f64) -> Result<f64> {
        let mut acc = 0.0;
        for (a, m) in self.coefficients.iter().zip(&self.modes) {
            if *a != 0.0 {
                acc += a * g_profile(self.t, m.sigma, x_n)? * m.eval(point);
            }
        }
        Ok(acc)
    }

    /// Axial derivative on the top boundary, evaluated mode by mode.
    pub fn top_axial_derivative(&self, point: [f64; 2]) -> Result<f64> {
        let mut acc = 0.0;
        for (a, m) in self.coefficients.iter().zip(&self.modes) {
            if *a != 0.0 {
                acc += a * g_prime_at_top(self.t, m.sigma)? * m.eval(point);
            }
        }
        Ok(acc)
    }
}

/// Solve the linearized interior problem at the straight cylinder of height
/// `t` in the direction `w` (a mean-zero deviation profile), using the
/// closed-form axial solutions; the result is orthogonal to the trivial
/// eigenfunction by construction.
pub fn linearized_solution(t: f64, w: &ProfileFunction) -> Result<LinearizedSolution> {
    lambda_trivial(t)?;
    for m in w.modes() {
        // fail early on a resonance pole; the error carries the bad mode
        g_prime_at_top(t, m.sigma)?;
    }
    Ok(LinearizedSolution {
        t,
        coefficients: w.coefficients().to_vec(),
        modes: w.modes().to_vec(),
    })
}

/// Apply the linearization of the overdetermined operator at the straight
/// cylinder of height `t` to the direction `w`, sampled on the grid. The
/// action is diagonal on Neumann modes with the dispersion eigenvalues on the
/// diagonal.
pub fn apply_linearization(t: f64, w: &ProfileFunction, grid: &Grid) -> Result<BoundaryField> {
    let sol = linearized_solution(t, w)?;
    let mut modal = Vec::with_capacity(sol.coefficients().len());
    for (a, m) in sol.coefficients().iter().zip(sol.modes()) {
        modal.push(a * mu(t, m.sigma)?);
    }
    let values: Vec<f64> = grid
        .cross_nodes()
        .iter()
        .map(|x| {
            modal
                .iter()
                .zip(sol.modes())
                .map(|(c, m)| c * m.eval(*x))
                .sum()
        })
        .collect();
    let mut field = BoundaryField::new(values, grid);
    field.modes = Some(modal);
    Ok(field)
}

/// Central finite-difference Frechet derivative of the overdetermined
/// operator at the straight cylinder of height `t`, in the given direction:
/// two full nonlinear evaluations at `t +- eps * direction`.
pub fn frechet_difference(
    t: f64,
    direction: &ProfileFunction,
    eps: f64,
    grid: &Grid,
    opts: &SolveOptions,
) -> Result<BoundaryField> {
    if eps <= 0.0 {
        return Err(Error::InvalidInput("step must be positive".into()));
    }
    let section = direction.section();
    let k = direction.k_count();
    let scale = |s: f64| -> Result<ProfileFunction> {
        let coeffs: Vec<f64> = direction.coefficients().iter().map(|a| s * a).collect();
        ProfileFunction::new(section, t, coeffs)
    };
    let plus = overdetermined_residual(&scale(eps)?, grid, k, opts)?;
    let minus = overdetermined_residual(&scale(-eps)?, grid, k, opts)?;
    let values: Vec<f64> = plus
        .values
        .iter()
        .zip(&minus.values)
        .map(|(p, m)| (p - m) / (2.0 * eps))
        .collect();
    let mut field = BoundaryField::new(values, grid);
    field.modes = match (plus.modes, minus.modes) {
        (Some(p), Some(m)) => Some(
            p.iter()
                .zip(&m)
                .map(|(a, b)| (a - b) / (2.0 * eps))
                .collect(),
        ),
        _ => None,
    };
    Ok(field)
}
