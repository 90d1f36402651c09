//! Height profiles `v = t + w` of the variable domain, with the deviation
//! `w` expanded over the positive Neumann modes of the cross-section. The
//! expansion has no constant term, so `w` is mean-zero by construction and
//! `v` meets the lateral boundary with vanishing normal derivative.

use crate::cross_section::{neumann_spectrum, CrossSection, NeumannMode};
use crate::error::{Error, Result};
use crate::grid::Grid;

#[derive(Debug, Clone)]
pub struct ProfileFunction {
    section: CrossSection,
    t: f64,
    coefficients: Vec<f64>,
    modes: Vec<NeumannMode>,
}

impl ProfileFunction {
    pub fn new(section: CrossSection, t: f64, coefficients: Vec<f64>) -> Result<ProfileFunction> {
        if t <= 0.0 {
            return Err(Error::InvalidInput("base height t must be positive".into()));
        }
        let modes = if coefficients.is_empty() {
            Vec::new()
        } else {
            neumann_spectrum(&section, coefficients.len())?
        };
        Ok(ProfileFunction {
            section,
            t,
            coefficients,
            modes,
        })
    }

    /// The straight cylinder of height `t`.
    pub fn trivial(section: CrossSection, t: f64) -> Result<ProfileFunction> {
        ProfileFunction::new(section, t, Vec::new())
    }

    pub fn section(&self) -> CrossSection {
        self.section
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn modes(&self) -> &[NeumannMode] {
        &self.modes
    }

    pub fn k_count(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.coefficients.iter().all(|&a| a == 0.0)
    }

    /// Mean-zero deviation at a cross-section point.
    pub fn w(&self, point: [f64; 2]) -> f64 {
        self.coefficients
            .iter()
            .zip(&self.modes)
            .map(|(a, m)| a * m.eval(point))
            .sum()
    }

    /// Full height `v = t + w`.
    pub fn v(&self, point: [f64; 2]) -> f64 {
        self.t + self.w(point)
    }

    pub fn grad_w(&self, point: [f64; 2]) -> [f64; 2] {
        let mut g = [0.0, 0.0];
        for (a, m) in self.coefficients.iter().zip(&self.modes) {
            let mg = m.grad(point);
            g[0] += a * mg[0];
            g[1] += a * mg[1];
        }
        g
    }

    /// Cross-section Laplacian of `w`; each mode contributes `-sigma_k` times
    /// its value.
    pub fn laplacian_w(&self, point: [f64; 2]) -> f64 {
        self.coefficients
            .iter()
            .zip(&self.modes)
            .map(|(a, m)| a * m.laplacian(point))
            .sum()
    }

    /// Minimum of `v` over a uniform sampling with `n` points per direction.
    pub fn min_v(&self, n: usize) -> f64 {
        let mut min = f64::INFINITY;
        match self.section {
            CrossSection::Interval { length } => {
                for i in 0..n {
                    let x = length * i as f64 / (n - 1) as f64;
                    min = min.min(self.v([x, 0.0]));
                }
            }
            CrossSection::Rectangle { a, b } => {
                for i1 in 0..n {
                    for i2 in 0..n {
                        let p = [
                            a * i1 as f64 / (n - 1) as f64,
                            b * i2 as f64 / (n - 1) as f64,
                        ];
                        min = min.min(self.v(p));
                    }
                }
            }
        }
        min
    }

    /// L2 norm of the deviation; the modes are orthonormal, so this is the
    /// Euclidean norm of the coefficients.
    pub fn w_norm(&self) -> f64 {
        self.coefficients.iter().map(|a| a * a).sum::<f64>().sqrt()
    }

    /// Recover a profile from height samples on the grid's cross-section
    /// nodes: `t` is the quadrature mean and the coefficients are mode
    /// projections.
    pub fn from_samples(grid: &Grid, k_count: usize, heights: &[f64]) -> Result<ProfileFunction> {
        if heights.len() != grid.n_cross() {
            return Err(Error::InvalidInput(format!(
                "expected {} height samples, got {}",
                grid.n_cross(),
                heights.len()
            )));
        }
        let section = grid.section();
        let t = grid.integrate_cross(heights) / section.volume();
        let modes = neumann_spectrum(&section, k_count)?;
        let coefficients = modes
            .iter()
            .map(|m| {
                let prod: Vec<f64> = grid
                    .cross_nodes()
                    .iter()
                    .zip(heights)
                    .map(|(&p, &h)| (h - t) * m.eval(p))
                    .collect();
                grid.integrate_cross(&prod)
            })
            .collect();
        ProfileFunction::new(section, t, coefficients)
    }
}
