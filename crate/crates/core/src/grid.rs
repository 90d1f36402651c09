//! Tensor grid on the reference cylinder: cross-section nodes times the
//! axial coordinate `y in [0, 1]`, with trapezoid quadrature weights.
//!
//! Endpoint nodes are included in every direction. Uniform spacing plus
//! trapezoid weights make the discrete cosine modes exactly orthogonal, so
//! projections onto Neumann modes carry no quadrature error beyond rounding.

use crate::cross_section::CrossSection;
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct Grid {
    section: CrossSection,
    pub n_prime: usize,
    pub n_axial: usize,
    cross_nodes: Vec<[f64; 2]>,
    cross_weights: Vec<f64>,
}

impl Grid {
    /// `n_prime` nodes per cross-section direction, `n_axial` axial nodes.
    pub fn new(section: CrossSection, n_prime: usize, n_axial: usize) -> Result<Grid> {
        section.validate()?;
        if n_prime < 8 || n_axial < 8 {
            return Err(Error::InvalidInput(format!(
                "grid too coarse: {n_prime} x {n_axial} (need at least 8 per direction)"
            )));
        }
        let mut cross_nodes = Vec::new();
        let mut cross_weights = Vec::new();
        match section {
            CrossSection::Interval { length } => {
                let h = length / (n_prime - 1) as f64;
                for i in 0..n_prime {
                    cross_nodes.push([i as f64 * h, 0.0]);
                    let w = if i == 0 || i == n_prime - 1 { 0.5 } else { 1.0 };
                    cross_weights.push(w * h);
                }
            }
            CrossSection::Rectangle { a, b } => {
                let ha = a / (n_prime - 1) as f64;
                let hb = b / (n_prime - 1) as f64;
                for i1 in 0..n_prime {
                    let w1 = if i1 == 0 || i1 == n_prime - 1 { 0.5 } else { 1.0 };
                    for i2 in 0..n_prime {
                        let w2 = if i2 == 0 || i2 == n_prime - 1 { 0.5 } else { 1.0 };
                        cross_nodes.push([i1 as f64 * ha, i2 as f64 * hb]);
                        cross_weights.push(w1 * ha * w2 * hb);
                    }
                }
            }
        }
        Ok(Grid {
            section,
            n_prime,
            n_axial,
            cross_nodes,
            cross_weights,
        })
    }

    pub fn section(&self) -> CrossSection {
        self.section
    }

    /// Cross-section nodes; the second coordinate is zero for intervals.
    pub fn cross_nodes(&self) -> &[[f64; 2]] {
        &self.cross_nodes
    }

    /// Trapezoid weights over the cross-section; they sum to its measure.
    pub fn cross_weights(&self) -> &[f64] {
        &self.cross_weights
    }

    pub fn n_cross(&self) -> usize {
        self.cross_nodes.len()
    }

    /// Spacing per cross-section direction.
    pub fn cross_spacing(&self) -> [f64; 2] {
        match self.section {
            CrossSection::Interval { length } => [length / (self.n_prime - 1) as f64, 0.0],
            CrossSection::Rectangle { a, b } => [
                a / (self.n_prime - 1) as f64,
                b / (self.n_prime - 1) as f64,
            ],
        }
    }

    pub fn axial_spacing(&self) -> f64 {
        1.0 / (self.n_axial - 1) as f64
    }

    /// Trapezoid weight of axial node `j`; weights sum to 1.
    pub fn axial_weight(&self, j: usize) -> f64 {
        let h = self.axial_spacing();
        if j == 0 || j == self.n_axial - 1 {
            0.5 * h
        } else {
            h
        }
    }

    /// Quadrature of a cross-section field sampled on the nodes.
    pub fn integrate_cross(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.n_cross());
        self.cross_weights
            .iter()
            .zip(values)
            .map(|(w, v)| w * v)
            .sum()
    }
}
