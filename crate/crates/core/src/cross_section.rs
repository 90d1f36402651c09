//! Neumann spectrum of the cross-section domain.
//!
//! The toolkit restricts the cross-section to an interval `[0, L]` or an
//! axis-aligned rectangle `[0, a] x [0, b]`, for which the Neumann
//! eigenfunctions are products of cosines and the spectrum is known in closed
//! form. The zero eigenvalue (constant mode) is excluded throughout: profile
//! deviations are mean-zero by construction.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Cross-section domain: the base of the half-cylinder.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum CrossSection {
    Interval { length: f64 },
    Rectangle { a: f64, b: f64 },
}

impl CrossSection {
    pub fn validate(&self) -> Result<()> {
        let ok = match self {
            CrossSection::Interval { length } => *length > 0.0,
            CrossSection::Rectangle { a, b } => *a > 0.0 && *b > 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput(
                "cross-section lengths must be positive".into(),
            ))
        }
    }

    /// Measure of the cross-section (length or area).
    pub fn volume(&self) -> f64 {
        match self {
            CrossSection::Interval { length } => *length,
            CrossSection::Rectangle { a, b } => a * b,
        }
    }

    /// Number of coordinate directions in the cross-section (1 or 2).
    pub fn dim(&self) -> usize {
        match self {
            CrossSection::Interval { .. } => 1,
            CrossSection::Rectangle { .. } => 2,
        }
    }

    /// Side-length ratio; multiplicity can only occur when a/b is such that
    /// (m pi/a)^2 + (n pi/b)^2 collides for distinct mode pairs.
    pub fn aspect_ratio(&self) -> f64 {
        match self {
            CrossSection::Interval { .. } => 1.0,
            CrossSection::Rectangle { a, b } => a / b,
        }
    }
}

/// One Neumann eigenpair of the cross-section, with `L^2`-normalized
/// eigenfunction. `numbers` identifies the analytic mode: `[k, 0]` for the
/// interval, `[m, n]` for the rectangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NeumannMode {
    /// 1-based position in the sorted positive spectrum.
    pub index: usize,
    pub sigma: f64,
    pub numbers: [u32; 2],
    section: CrossSection,
}

fn cosine_factor(m: u32, x: f64, len: f64) -> f64 {
    if m == 0 {
        (1.0 / len).sqrt()
    } else {
        (2.0 / len).sqrt() * (m as f64 * std::f64::consts::PI * x / len).cos()
    }
}

fn cosine_factor_deriv(m: u32, x: f64, len: f64) -> f64 {
    if m == 0 {
        0.0
    } else {
        let w = m as f64 * std::f64::consts::PI / len;
        -(2.0 / len).sqrt() * w * (w * x).sin()
    }
}

impl NeumannMode {
    /// Evaluate the eigenfunction at a cross-section point. For the interval
    /// only `point[0]` is read.
    pub fn eval(&self, point: [f64; 2]) -> f64 {
        match self.section {
            CrossSection::Interval { length } => cosine_factor(self.numbers[0], point[0], length),
            CrossSection::Rectangle { a, b } => {
                cosine_factor(self.numbers[0], point[0], a)
                    * cosine_factor(self.numbers[1], point[1], b)
            }
        }
    }

    /// Gradient of the eigenfunction; the second entry is zero for intervals.
    pub fn grad(&self, point: [f64; 2]) -> [f64; 2] {
        match self.section {
            CrossSection::Interval { length } => {
                [cosine_factor_deriv(self.numbers[0], point[0], length), 0.0]
            }
            CrossSection::Rectangle { a, b } => {
                let f1 = cosine_factor(self.numbers[0], point[0], a);
                let f2 = cosine_factor(self.numbers[1], point[1], b);
                [
                    cosine_factor_deriv(self.numbers[0], point[0], a) * f2,
                    f1 * cosine_factor_deriv(self.numbers[1], point[1], b),
                ]
            }
        }
    }

    /// Laplacian of the eigenfunction: -sigma times its value.
    pub fn laplacian(&self, point: [f64; 2]) -> f64 {
        -self.sigma * self.eval(point)
    }

    pub fn section(&self) -> CrossSection {
        self.section
    }
}

/// The `k_count` smallest positive Neumann eigenvalues with normalized
/// eigenfunctions, sorted nondecreasing; ties broken lexicographically on the
/// mode numbers for determinism.
pub fn neumann_spectrum(section: &CrossSection, k_count: usize) -> Result<Vec<NeumannMode>> {
    section.validate()?;
    if k_count == 0 {
        return Err(Error::InvalidInput("mode count K must be >= 1".into()));
    }
    let pi = std::f64::consts::PI;
    let mut modes = Vec::new();
    match section {
        CrossSection::Interval { length } => {
            for k in 1..=k_count as u32 {
                let s = (k as f64 * pi / length).powi(2);
                modes.push((s, [k, 0]));
            }
        }
        CrossSection::Rectangle { a, b } => {
            // Any mode among the K smallest has m, n <= K, so this enumeration
            // window cannot miss one.
            let m_max = k_count as u32;
            for m in 0..=m_max {
                for n in 0..=m_max {
                    if m + n == 0 {
                        continue;
                    }
                    let s = (m as f64 * pi / a).powi(2) + (n as f64 * pi / b).powi(2);
                    modes.push((s, [m, n]));
                }
            }
            modes.sort_by(|x, y| {
                x.0.partial_cmp(&y.0)
                    .unwrap()
                    .then(x.1[0].cmp(&y.1[0]))
                    .then(x.1[1].cmp(&y.1[1]))
            });
            modes.truncate(k_count);
        }
    }
    Ok(modes
        .into_iter()
        .enumerate()
        .map(|(i, (sigma, numbers))| NeumannMode {
            index: i + 1,
            sigma,
            numbers,
            section: *section,
        })
        .collect())
}

/// Whether the j-th eigenvalue (1-based within `spectrum`) is simple, judged
/// by the gap to its neighbors in the provided list. Boundary positions use
/// the one-sided gap.
pub fn is_simple(spectrum: &[NeumannMode], j: usize, gap_tol: f64) -> Result<bool> {
    if j == 0 || j > spectrum.len() {
        return Err(Error::InvalidInput(format!(
            "mode index {j} outside spectrum of length {}",
            spectrum.len()
        )));
    }
    if gap_tol <= 0.0 {
        return Err(Error::InvalidInput("gap_tol must be positive".into()));
    }
    let s = spectrum[j - 1].sigma;
    let mut gap = f64::INFINITY;
    if j >= 2 {
        gap = gap.min(s - spectrum[j - 2].sigma);
    }
    if j < spectrum.len() {
        gap = gap.min(spectrum[j].sigma - s);
    }
    Ok(gap > gap_tol)
}
