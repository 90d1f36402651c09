//! Pullback metric of the graph diffeomorphism `(y', y_n) -> (y', v(y') y_n)`
//! mapping the reference cylinder onto the variable domain, together with the
//! coefficients of the transformed Laplacian used by the assembler.

use crate::error::{Error, Result};
use crate::profile::ProfileFunction;

/// Metric data at one point of the reference cylinder. Matrices are stored as
/// dense `(d+1) x (d+1)` blocks with `d = cross-section dimension`; the axial
/// direction is the last index. Unused entries stay zero for intervals.
#[derive(Debug, Clone, Copy)]
pub struct MetricCoefficients {
    pub dim: usize,
    pub g: [[f64; 3]; 3],
    pub g_inv: [[f64; 3]; 3],
    pub det: f64,
    /// Coefficient of the mixed derivative `phi_{i,axial}` per cross direction.
    pub cross_axial: [f64; 2],
    /// Coefficient of the first axial derivative.
    pub axial_first: f64,
    /// Coefficient of the second axial derivative.
    pub axial_second: f64,
}

/// Evaluate the metric and the operator coefficients at a reference point
/// `(cross, y_n)` for the profile `v`.
pub fn metric_at(
    profile: &ProfileFunction,
    cross: [f64; 2],
    y_n: f64,
) -> Result<MetricCoefficients> {
    let v = profile.v(cross);
    if v <= 0.0 {
        return Err(Error::PositivityLost { min_v: v });
    }
    let d = profile.section().dim();
    let dv = profile.grad_w(cross);
    let lap = profile.laplacian_w(cross);
    let grad_sq = dv[0] * dv[0] + dv[1] * dv[1];

    let mut g = [[0.0; 3]; 3];
    let mut g_inv = [[0.0; 3]; 3];
    for i in 0..d {
        for j in 0..d {
            g[i][j] = if i == j { 1.0 } else { 0.0 } + dv[i] * dv[j] * y_n * y_n;
            g_inv[i][j] = if i == j { 1.0 } else { 0.0 };
        }
        g[i][d] = v * dv[i] * y_n;
        g[d][i] = g[i][d];
        g_inv[i][d] = -dv[i] * y_n / v;
        g_inv[d][i] = g_inv[i][d];
    }
    g[d][d] = v * v;
    g_inv[d][d] = (1.0 + grad_sq * y_n * y_n) / (v * v);

    let mut cross_axial = [0.0, 0.0];
    for i in 0..d {
        cross_axial[i] = -2.0 * dv[i] * y_n / v;
    }
    Ok(MetricCoefficients {
        dim: d + 1,
        g,
        g_inv,
        det: v * v,
        cross_axial,
        axial_first: y_n * (2.0 * grad_sq / (v * v) - lap / v),
        axial_second: (1.0 + grad_sq * y_n * y_n) / (v * v),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cross_section::CrossSection;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    #[test]
    fn straight_cylinder_metric_is_diagonal() {
        let p = ProfileFunction::trivial(CrossSection::Interval { length: PI }, 2.0).unwrap();
        let m = metric_at(&p, [1.0, 0.0], 0.6).unwrap();
        assert_eq!(m.g[0][0], 1.0);
        assert_eq!(m.g[0][1], 0.0);
        assert_eq!(m.g[1][1], 4.0);
        assert_eq!(m.det, 4.0);
        assert!((m.g_inv[1][1] - 0.25).abs() < 1e-15);
        assert_eq!(m.cross_axial[0], 0.0);
        assert_eq!(m.axial_first, 0.0);
    }

    #[test]
    fn mixed_entry_from_mode_derivative() {
        // v = 1 + 0.1 xi_1 on [0, pi]; at y' = pi/2, y_n = 1 the mixed metric
        // entry is v * v' * y_n = -0.1 sqrt(2/pi)
        let p =
            ProfileFunction::new(CrossSection::Interval { length: PI }, 1.0, vec![0.1]).unwrap();
        let m = metric_at(&p, [PI / 2.0, 0.0], 1.0).unwrap();
        let expect = -0.1 * (2.0 / PI).sqrt();
        assert!((m.g[0][1] - expect).abs() < 1e-12);
        assert!((expect + 0.079788).abs() < 1e-6);
    }

    #[test]
    fn inverse_is_exact_at_random_nodes() {
        let sections = [
            CrossSection::Interval { length: PI },
            CrossSection::Rectangle { a: PI, b: 1.4 },
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for section in sections {
            let p = ProfileFunction::new(section, 1.2, vec![0.15, -0.07, 0.02]).unwrap();
            let n = p.section().dim() + 1;
            for _ in 0..1000 {
                let cross = [rng.gen_range(0.0..PI), rng.gen_range(0.0..1.4)];
                let y = rng.gen_range(0.0..1.0);
                let m = metric_at(&p, cross, y).unwrap();
                assert!((m.det - p.v(cross).powi(2)).abs() <= 1e-12 * m.det);
                for i in 0..n {
                    for j in 0..n {
                        let mut s = 0.0;
                        for k in 0..n {
                            s += m.g[i][k] * m.g_inv[k][j];
                        }
                        let expect = if i == j { 1.0 } else { 0.0 };
                        assert!(
                            (s - expect).abs() < 1e-12,
                            "g g^-1 at ({i},{j}) = {s} for {section:?}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn nonpositive_height_rejected() {
        let p =
            ProfileFunction::new(CrossSection::Interval { length: PI }, 0.1, vec![-0.5]).unwrap();
        assert!(metric_at(&p, [0.0, 0.0], 0.5).is_err());
    }
}
