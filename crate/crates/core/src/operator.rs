//! Finite-difference discretization of the transformed Laplacian on the
//! reference cylinder and the inverse-iteration eigensolver.
//!
//! The operator acts on fields over the tensor grid with a Dirichlet top
//! (`y = 1`), mirror-ghost Neumann rows at the bottom and on the lateral
//! sides, and second-order centered stencils everywhere, including the mixed
//! cross/axial derivatives. Unknowns exclude the top layer and are ordered
//! axial-fastest, which keeps the matrix banded with bandwidth set by one
//! cross-section step.

use crate::cross_section::CrossSection;
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::linalg::BandedMatrix;
use crate::metric::metric_at;
use crate::profile::ProfileFunction;

/// Knobs for the eigensolver.
#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    /// Relative tolerance on eigenvalue increments between iterations.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            tol: 1e-12,
            max_iter: 200,
        }
    }
}

/// First eigenpair on the reference cylinder. `phi` covers every grid node
/// (cross-major, axial-fastest) including the zero top layer, is positive
/// inside, and carries the flat-measure normalization `sqrt(|omega| / 2)`.
#[derive(Debug, Clone)]
pub struct EigenPair {
    pub lambda: f64,
    pub phi: Vec<f64>,
    pub iterations: usize,
    /// Relative eigen-equation residual of the converged pair.
    pub residual: f64,
    n_cross: usize,
    n_axial: usize,
}

impl EigenPair {
    #[inline]
    pub fn phi_at(&self, cross: usize, axial: usize) -> f64 {
        self.phi[cross * self.n_axial + axial]
    }

    pub fn n_axial(&self) -> usize {
        self.n_axial
    }

    pub fn n_cross(&self) -> usize {
        self.n_cross
    }
}

/// Banded discretization of the transformed Laplacian (the operator itself,
/// not its negative).
pub struct AssembledOperator {
    band: BandedMatrix,
    pub n_unknowns: usize,
    n_axial: usize,
    n_cross: usize,
}

impl AssembledOperator {
    /// Apply the operator to a vector over the unknown nodes.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; x.len()];
        self.band.matvec(x, &mut y);
        y
    }

    pub fn unknown_index(&self, cross: usize, axial: usize) -> usize {
        debug_assert!(axial + 1 < self.n_axial);
        cross * (self.n_axial - 1) + axial
    }

    pub fn n_cross(&self) -> usize {
        self.n_cross
    }
}

fn mirror(idx: i64, last: i64) -> i64 {
    if idx < 0 {
        1
    } else if idx > last {
        last - 1
    } else {
        idx
    }
}

/// Assemble the banded operator for the given profile.
pub fn assemble_operator(profile: &ProfileFunction, grid: &Grid) -> Result<AssembledOperator> {
    let n_axial = grid.n_axial;
    let n_layers = n_axial - 1;
    let n_cross = grid.n_cross();
    let n = n_cross * n_layers;
    let ha = grid.axial_spacing();
    let hp = grid.cross_spacing();
    let nodes = grid.cross_nodes();

    let (dim, n2) = match grid.section() {
        CrossSection::Interval { .. } => (1usize, 1usize),
        CrossSection::Rectangle { .. } => (2usize, grid.n_prime),
    };
    let bw = if dim == 1 {
        n_axial
    } else {
        n2 * n_layers + 1
    };
    let mut band = BandedMatrix::zeros(n, bw, bw);
    let last = (grid.n_prime - 1) as i64;

    // cross index of a node after stepping one of the cross directions,
    // reflecting ghost points back inside
    let step = |c: usize, dir: usize, delta: i64| -> usize {
        if dim == 1 {
            mirror(c as i64 + delta, last) as usize
        } else {
            let (i1, i2) = ((c / n2) as i64, (c % n2) as i64);
            let (i1, i2) = if dir == 0 {
                (mirror(i1 + delta, last), i2)
            } else {
                (i1, mirror(i2 + delta, last))
            };
            (i1 * n2 as i64 + i2) as usize
        }
    };

    for c in 0..n_cross {
        for j in 0..n_layers {
            let row = c * n_layers + j;
            let m = metric_at(profile, nodes[c], j as f64 * ha)?;
            let mut add = |cc: usize, jj: i64, val: f64| {
                let jj = if jj < 0 { 1 } else { jj };
                if jj as usize == n_layers {
                    return; // Dirichlet top layer eliminated
                }
                band.add(row, cc * n_layers + jj as usize, val);
            };
            let j = j as i64;

            for dir in 0..dim {
                let inv_h2 = 1.0 / (hp[dir] * hp[dir]);
                add(step(c, dir, -1), j, inv_h2);
                add(c, j, -2.0 * inv_h2);
                add(step(c, dir, 1), j, inv_h2);
            }

            let c_nn = m.axial_second / (ha * ha);
            add(c, j - 1, c_nn);
            add(c, j, -2.0 * c_nn);
            add(c, j + 1, c_nn);

            if m.axial_first != 0.0 {
                let c_n = m.axial_first / (2.0 * ha);
                add(c, j + 1, c_n);
                add(c, j - 1, -c_n);
            }

            for dir in 0..dim {
                if m.cross_axial[dir] != 0.0 {
                    let c_x = m.cross_axial[dir] / (4.0 * hp[dir] * ha);
                    add(step(c, dir, 1), j + 1, c_x);
                    add(step(c, dir, 1), j - 1, -c_x);
                    add(step(c, dir, -1), j + 1, -c_x);
                    add(step(c, dir, -1), j - 1, c_x);
                }
            }
        }
    }
    Ok(AssembledOperator {
        band,
        n_unknowns: n,
        n_axial,
        n_cross,
    })
}

fn bottom_center_cross(grid: &Grid) -> usize {
    match grid.section() {
        CrossSection::Interval { .. } => grid.n_prime / 2,
        CrossSection::Rectangle { .. } => (grid.n_prime / 2) * grid.n_prime + grid.n_prime / 2,
    }
}

fn flat_norm(grid: &Grid, phi: &[f64]) -> f64 {
    let n_axial = grid.n_axial;
    let mut sq = 0.0;
    for (c, wc) in grid.cross_weights().iter().enumerate() {
        for j in 0..n_axial {
            let p = phi[c * n_axial + j];
            sq += wc * grid.axial_weight(j) * p * p;
        }
    }
    sq.sqrt()
}

/// Smallest eigenvalue of the negated operator with the mixed boundary
/// conditions, by inverse iteration with shift zero. The first eigenvalue is
/// simple, so the iteration contracts geometrically.
pub fn first_eigenpair(
    profile: &ProfileFunction,
    grid: &Grid,
    opts: &SolveOptions,
) -> Result<EigenPair> {
    let samples = if profile.section().dim() == 1 { 512 } else { 128 };
    let min_v = profile.min_v(samples);
    if min_v <= 1e-6 * profile.t() {
        return Err(Error::PositivityLost { min_v });
    }
    let op = assemble_operator(profile, grid)?;
    let n = op.n_unknowns;
    let m = op.band.scaled(-1.0);
    let lu = m.clone().factor()?;

    let mut x = vec![1.0 / (n as f64).sqrt(); n];
    let mut lambda = 0.0f64;
    let mut increment = f64::INFINITY;
    let mut converged_at = None;
    for it in 1..=opts.max_iter {
        let mut y = x.clone();
        lu.solve(&mut y);
        let xy: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
        let yy: f64 = y.iter().map(|a| a * a).sum();
        let lam = xy / yy;
        let norm = yy.sqrt();
        for (xi, yi) in x.iter_mut().zip(&y) {
            *xi = yi / norm;
        }
        increment = (lam - lambda).abs();
        lambda = lam;
        if increment <= opts.tol * lambda.abs().max(1.0) {
            converged_at = Some(it);
            break;
        }
    }
    let iterations = converged_at.ok_or(Error::SolverDiverged {
        iters: opts.max_iter,
        last_increment: increment,
    })?;

    let mut r = vec![0.0; n];
    m.matvec(&x, &mut r);
    let res_sq: f64 = r
        .iter()
        .zip(&x)
        .map(|(ri, xi)| (ri - lambda * xi).powi(2))
        .sum();
    let residual = res_sq.sqrt(); // ||x|| = 1

    let n_axial = grid.n_axial;
    let n_cross = grid.n_cross();
    let mut phi = vec![0.0; n_cross * n_axial];
    for c in 0..n_cross {
        for j in 0..n_axial - 1 {
            phi[c * n_axial + j] = x[c * (n_axial - 1) + j];
        }
    }
    if phi[bottom_center_cross(grid) * n_axial] < 0.0 {
        phi.iter_mut().for_each(|p| *p = -*p);
    }
    let target = (grid.section().volume() / 2.0).sqrt();
    let scale = target / flat_norm(grid, &phi);
    phi.iter_mut().for_each(|p| *p *= scale);

    Ok(EigenPair {
        lambda,
        phi,
        iterations,
        residual,
        n_cross,
        n_axial,
    })
}

/// Closed-form eigenpair of the straight cylinder of height `t`, sampled on
/// the grid: an axial cosine, constant across the section, which already
/// carries the `sqrt(|omega| / 2)` normalization.
pub fn trivial_eigenpair(t: f64, grid: &Grid) -> Result<EigenPair> {
    let lambda = crate::dispersion::lambda_trivial(t)?;
    let n_axial = grid.n_axial;
    let n_cross = grid.n_cross();
    let ha = grid.axial_spacing();
    let mut phi = vec![0.0; n_cross * n_axial];
    for c in 0..n_cross {
        for j in 0..n_axial {
            phi[c * n_axial + j] = (std::f64::consts::FRAC_PI_2 * j as f64 * ha).cos();
        }
    }
    Ok(EigenPair {
        lambda,
        phi,
        iterations: 0,
        residual: 0.0,
        n_cross,
        n_axial,
    })
}
