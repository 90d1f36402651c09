//! Closed-form linearized analysis on the trivial cylinders.
//!
//! For a straight cylinder of height `t` the first eigenpair is explicit and
//! the linearization of the boundary normal derivative acts diagonally on the
//! Neumann modes of the cross-section. Each mode contributes an axial profile
//! `g` solving `g'' - sigma g + lambda_t g = 0` with `g(t) = pi/(2 t^2)` and
//! `g'(0) = 0`, which has three regimes depending on the sign of
//! `lambda_t - sigma`. The per-mode eigenvalue `mu(t, sigma) = t g'(t)`
//! changes sign exactly at the bifurcation height `t_k = pi/(2 sqrt(sigma))`.

use crate::cross_section::{is_simple, neumann_spectrum, CrossSection};
use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Which side of the crossing a sample sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Subcritical,
    Critical,
    Supercritical,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::Subcritical => "subcritical",
            Regime::Critical => "critical",
            Regime::Supercritical => "supercritical",
        }
    }
}

/// One evaluated point of the dispersion relation.
#[derive(Debug, Clone, Copy)]
pub struct DispersionSample {
    pub t: f64,
    pub k: usize,
    pub mu: f64,
    pub regime: Regime,
}

/// First eigenvalue of the straight cylinder of height `t`.
pub fn lambda_trivial(t: f64) -> Result<f64> {
    if t <= 0.0 {
        return Err(Error::InvalidInput("height t must be positive".into()));
    }
    Ok((PI / (2.0 * t)).powi(2))
}

fn check_t_sigma(t: f64, sigma: f64) -> Result<()> {
    if t <= 0.0 {
        return Err(Error::InvalidInput("height t must be positive".into()));
    }
    if sigma <= 0.0 {
        return Err(Error::InvalidInput("sigma must be positive".into()));
    }
    Ok(())
}

/// Regime classification with an exact-arithmetic-width window around the
/// crossing; `mu` is continuous there, so the window only routes evaluation
/// through the constant branch.
pub fn regime(t: f64, sigma: f64) -> Result<Regime> {
    check_t_sigma(t, sigma)?;
    let tk = bifurcation_point(sigma)?;
    let rel = (t - tk) / tk;
    Ok(if rel.abs() <= 1e-13 {
        Regime::Critical
    } else if rel < 0.0 {
        Regime::Subcritical
    } else {
        Regime::Supercritical
    })
}

/// Axial modal profile `g(x_n)` for cross-section eigenvalue `sigma`,
/// evaluated at `x_n` in `[0, t]`.
pub fn g_profile(t: f64, sigma: f64, x_n: f64) -> Result<f64> {
    check_t_sigma(t, sigma)?;
    if !(0.0..=t * (1.0 + 1e-12)).contains(&x_n) {
        return Err(Error::InvalidInput(format!(
            "axial coordinate {x_n} outside [0, {t}]"
        )));
    }
    let scale = PI / (2.0 * t * t);
    let lam = (PI / (2.0 * t)).powi(2);
    match regime(t, sigma)? {
        Regime::Critical => Ok(scale),
        Regime::Subcritical => {
            let beta = (lam - sigma).sqrt();
            let denom = (beta * t).cos();
            if denom.abs() < 1e-12 {
                return Err(Error::ResonancePole { sigma, t });
            }
            Ok(scale * (beta * x_n).cos() / denom)
        }
        Regime::Supercritical => {
            // cosh ratio written exponentially so large arguments cannot overflow
            let tau = (sigma - lam).sqrt();
            let ratio = (tau * (x_n - t)).exp() * (1.0 + (-2.0 * tau * x_n).exp())
                / (1.0 + (-2.0 * tau * t).exp());
            Ok(scale * ratio)
        }
    }
}

/// Derivative of the modal profile at the top, `g'(t)`, by the three-case
/// closed form. The supercritical branch uses the cancellation-free form
/// `tau (1 - 2/(e^{2 tau t} + 1))`.
pub fn g_prime_at_top(t: f64, sigma: f64) -> Result<f64> {
    check_t_sigma(t, sigma)?;
    let scale = PI / (2.0 * t * t);
    let lam = (PI / (2.0 * t)).powi(2);
    match regime(t, sigma)? {
        Regime::Critical => Ok(0.0),
        Regime::Subcritical => {
            let beta = (lam - sigma).sqrt();
            if (beta * t).cos().abs() < 1e-12 {
                return Err(Error::ResonancePole { sigma, t });
            }
            Ok(-scale * beta * (beta * t).tan())
        }
        Regime::Supercritical => {
            let tau = (sigma - lam).sqrt();
            Ok(scale * tau * (1.0 - 2.0 / ((2.0 * tau * t).exp() + 1.0)))
        }
    }
}

/// Dispersion eigenvalue `mu(t, sigma) = t g'(t)`: the action of the
/// linearized normal-derivative operator on the mode with eigenvalue `sigma`.
pub fn mu(t: f64, sigma: f64) -> Result<f64> {
    Ok(t * g_prime_at_top(t, sigma)?)
}

/// Height at which the mode with cross-section eigenvalue `sigma` crosses:
/// `t_k = pi / (2 sqrt(sigma))`.
pub fn bifurcation_point(sigma: f64) -> Result<f64> {
    if sigma <= 0.0 {
        return Err(Error::InvalidInput("sigma must be positive".into()));
    }
    Ok(PI / (2.0 * sigma.sqrt()))
}

/// Slope `d mu / d t` at the crossing: `pi^3 / (4 t_k^3)`, always positive,
/// which is the transversality quantity for branch switching.
pub fn crossing_slope(sigma: f64) -> Result<f64> {
    let tk = bifurcation_point(sigma)?;
    Ok(PI.powi(3) / (4.0 * tk.powi(3)))
}

/// A bifurcation candidate found in a height window.
#[derive(Debug, Clone, Copy)]
pub struct Crossing {
    pub k: usize,
    pub t: f64,
    pub simple: bool,
}

/// All crossings `t_k` inside `(t_lo, t_hi)` for the first `k_count` modes,
/// with simplicity flags. An empty result is not an error.
pub fn find_crossings(
    section: &CrossSection,
    k_count: usize,
    t_window: (f64, f64),
) -> Result<Vec<Crossing>> {
    let (lo, hi) = t_window;
    if !(lo < hi) {
        return Err(Error::InvalidInput(format!(
            "empty height window ({lo}, {hi})"
        )));
    }
    // One extra mode so the last gap check is two-sided when possible.
    let spectrum = neumann_spectrum(section, k_count + 1)?;
    let mut out = Vec::new();
    for j in 1..=k_count {
        let tk = bifurcation_point(spectrum[j - 1].sigma)?;
        if tk > lo && tk < hi {
            out.push(Crossing {
                k: j,
                t: tk,
                simple: is_simple(&spectrum, j, 1e-8)?,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_eigenvalue_values() {
        assert!((lambda_trivial(1.0).unwrap() - PI * PI / 4.0).abs() < 1e-15);
        assert!((lambda_trivial(PI / 2.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((lambda_trivial(2.0).unwrap() - PI * PI / 16.0).abs() < 1e-15);
        assert!(lambda_trivial(0.0).is_err());
    }

    #[test]
    fn g_boundary_conditions() {
        for &(t, sigma) in &[(1.0, 1.0), (2.2, 1.0), (1.0, 4.0), (PI / 2.0, 1.0)] {
            let top = g_profile(t, sigma, t).unwrap();
            assert!(
                (top - PI / (2.0 * t * t)).abs() < 1e-13,
                "g(t) boundary value for t={t}, sigma={sigma}"
            );
        }
    }

    #[test]
    fn critical_profile_is_constant() {
        let sigma = 1.0;
        let t = bifurcation_point(sigma).unwrap();
        for &x in &[0.0, 0.3 * t, t] {
            assert!((g_profile(t, sigma, x).unwrap() - PI / (2.0 * t * t)).abs() < 1e-13);
        }
        assert_eq!(g_prime_at_top(t, sigma).unwrap(), 0.0);
        assert_eq!(mu(t, sigma).unwrap(), 0.0);
    }

    #[test]
    fn bifurcation_points_closed_form() {
        assert!((bifurcation_point(1.0).unwrap() - PI / 2.0).abs() < 1e-15);
        assert!((bifurcation_point(4.0).unwrap() - PI / 4.0).abs() < 1e-15);
        assert!((bifurcation_point(0.25).unwrap() - PI).abs() < 1e-15);
        assert!(bifurcation_point(-1.0).is_err());
    }

    #[test]
    fn crossing_slopes() {
        assert!((crossing_slope(1.0).unwrap() - 2.0).abs() < 1e-14);
        assert!((crossing_slope(4.0).unwrap() - 16.0).abs() < 1e-13);
    }

    #[test]
    fn mu_anchor_values() {
        // closed-form anchors on the interval of length pi, first mode
        let t1 = 3.0_f64.sqrt() * PI / 4.0;
        assert!((mu(t1, 1.0).unwrap() + 2.0 / 3.0).abs() < 1e-13);
        let t2 = PI / std::f64::consts::SQRT_2;
        let expect = 0.5 * (1.0 - 2.0 / (PI.exp() + 1.0));
        assert!((mu(t2, 1.0).unwrap() - expect).abs() < 1e-15);
        assert!((expect - 0.458576167834).abs() < 1e-12);
    }

    #[test]
    fn g_prime_anchor_values() {
        let t1 = 3.0_f64.sqrt() * PI / 4.0;
        assert!((g_prime_at_top(t1, 1.0).unwrap() - (-0.490070129264)).abs() < 1e-12);
        let t2 = PI / std::f64::consts::SQRT_2;
        assert!((g_prime_at_top(t2, 1.0).unwrap() - 0.206431803051).abs() < 1e-12);
    }

    #[test]
    fn supercritical_value_from_closed_form() {
        // frozen from the ODE-shooting oracle (see tests/dispersion_oracle.rs)
        let t = PI / std::f64::consts::SQRT_2;
        let g0 = g_profile(t, 1.0, 0.0).unwrap();
        assert!((g0 - 0.126858208330).abs() < 1e-12);
    }

    #[test]
    fn regime_continuity_at_crossing() {
        for &sigma in &[1.0, 4.0, 2.0] {
            let tk = bifurcation_point(sigma).unwrap();
            for &t in &[tk * (1.0 - 1e-8), tk * (1.0 + 1e-8)] {
                assert!(mu(t, sigma).unwrap().abs() <= 1e-6);
            }
        }
    }

    #[test]
    fn crossings_in_window() {
        let section = CrossSection::Interval { length: PI };
        // t_k = pi/(2k): all three of pi/2, pi/4, pi/6 lie inside (0.5, 2)
        let c = find_crossings(&section, 3, (0.5, 2.0)).unwrap();
        assert_eq!(c.len(), 3);
        assert!((c[0].t - PI / 2.0).abs() < 1e-14 && c[0].simple);
        assert!((c[1].t - PI / 4.0).abs() < 1e-14 && c[1].simple);
        assert!((c[2].t - PI / 6.0).abs() < 1e-14 && c[2].simple);
        // consistent two-crossing window
        let c2 = find_crossings(&section, 2, (0.7, 1.7)).unwrap();
        assert_eq!(c2.len(), 2);
        assert!(find_crossings(&section, 1, (2.0, 3.0)).unwrap().is_empty());
    }

    #[test]
    fn square_crossing_flagged_multiple() {
        let section = CrossSection::Rectangle { a: PI, b: PI };
        let c = find_crossings(&section, 2, (0.1, 10.0)).unwrap();
        assert!(c.iter().all(|x| !x.simple));
    }
}
