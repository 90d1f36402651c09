//! Bifurcation detection and numerical continuation of the nontrivial
//! solution branches: an amplitude-constrained Newton method on the
//! mode-projected overdetermined residual, plus per-point verification
//! reports and a bisection locator for the discrete critical height.

use crate::cross_section::{is_simple, neumann_spectrum, CrossSection, NeumannMode};
use crate::dispersion::{bifurcation_point, crossing_slope};
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::linalg::solve_dense;
use crate::operator::{first_eigenpair, SolveOptions};
use crate::overdetermined::{boundary_normal_derivative, frechet_difference, project_onto_mode};
use crate::profile::ProfileFunction;

/// Knobs for the branch Newton solver.
#[derive(Debug, Clone, Copy)]
pub struct NewtonOptions {
    /// Residual tolerance relative to the overdetermined constant.
    pub tol_rel: f64,
    pub max_iter: usize,
    /// Forward-difference step for the Jacobian columns.
    pub fd_step: f64,
    /// Positivity line search gives up after this many halvings.
    pub max_halvings: usize,
    pub solve: SolveOptions,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        NewtonOptions {
            tol_rel: 1e-9,
            max_iter: 15,
            fd_step: 1e-6,
            max_halvings: 10,
            solve: SolveOptions::default(),
        }
    }
}

/// A height where the linearized operator loses injectivity on one mode.
#[derive(Debug, Clone)]
pub struct BifurcationCandidate {
    pub k: usize,
    pub sigma: f64,
    pub t: f64,
    /// Simple eigenvalues satisfy the one-dimensional kernel hypothesis;
    /// only these are eligible for branching.
    pub simple: bool,
    /// Transversal crossing speed of the dispersion eigenvalue.
    pub slope: f64,
}

/// All candidate heights inside the window, eligible or not.
pub fn detect_bifurcations(
    section: &CrossSection,
    k_count: usize,
    window: (f64, f64),
) -> Result<Vec<BifurcationCandidate>> {
    if k_count == 0 {
        return Err(Error::InvalidInput("need at least one mode".into()));
    }
    if !(window.0 < window.1) || window.0 <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "window ({}, {}) is not an ordered positive interval",
            window.0, window.1
        )));
    }
    // one extra mode so the top of the list still sees a two-sided gap
    let spectrum = neumann_spectrum(section, k_count + 1)?;
    let mut out = Vec::new();
    for m in &spectrum[..k_count] {
        let t = bifurcation_point(m.sigma)?;
        if t > window.0 && t < window.1 {
            out.push(BifurcationCandidate {
                k: m.index,
                sigma: m.sigma,
                t,
                simple: is_simple(&spectrum, m.index, 1e-9)?,
                slope: crossing_slope(m.sigma)?,
            });
        }
    }
    Ok(out)
}

/// One accepted point of a bifurcating branch. The profile carries the
/// height and the deviation coefficients; the amplitude constraint holds
/// exactly because the constrained coefficient is never a Newton unknown.
#[derive(Debug, Clone)]
pub struct BranchPoint {
    pub s: f64,
    pub profile: ProfileFunction,
    pub lambda: f64,
    /// Mean normal derivative: the overdetermined constant.
    pub c: f64,
    pub residual_norm: f64,
    pub newton_iters: usize,
}

impl BranchPoint {
    pub fn t(&self) -> f64 {
        self.profile.t()
    }

    pub fn coefficients(&self) -> &[f64] {
        self.profile.coefficients()
    }
}

/// A traced branch through one bifurcation point, points ordered by `s`.
#[derive(Debug, Clone)]
pub struct Branch {
    pub mode_index: usize,
    pub t_star: f64,
    pub points: Vec<BranchPoint>,
    pub warnings: Vec<String>,
}

struct ProjectedResidual {
    proj: Vec<f64>,
    c: f64,
    lambda: f64,
}

fn eval_projected(
    section: &CrossSection,
    t: f64,
    coeffs: &[f64],
    grid: &Grid,
    spectrum: &[NeumannMode],
    solve: &SolveOptions,
) -> Result<ProjectedResidual> {
    let profile = ProfileFunction::new(*section, t, coeffs.to_vec())?;
    let pair = first_eigenpair(&profile, grid, solve)?;
    let raw = boundary_normal_derivative(&profile, &pair, grid)?;
    let centered: Vec<f64> = raw.values.iter().map(|v| v - raw.mean).collect();
    let proj = spectrum
        .iter()
        .map(|m| project_onto_mode(grid, &centered, m))
        .collect();
    Ok(ProjectedResidual {
        proj,
        c: raw.mean,
        lambda: pair.lambda,
    })
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum::<f64>().sqrt()
}

/// Solve the amplitude-constrained projected system at amplitude `s` on the
/// branch through mode `j`: the unknowns are the height and the coefficients
/// of every mode except `j`, whose coefficient is pinned to `s`; the
/// equations are the Neumann-mode projections of the overdetermined
/// residual. The Jacobian is assembled by forward differences, and steps are
/// shortened until the domain stays positive.
pub fn newton_solve(
    j: usize,
    s: f64,
    t_init: f64,
    coeffs_init: &[f64],
    grid: &Grid,
    k_count: usize,
    opts: &NewtonOptions,
) -> Result<BranchPoint> {
    if j == 0 || j > k_count {
        return Err(Error::InvalidInput(format!(
            "branch mode {j} outside truncation 1..={k_count}"
        )));
    }
    let section = grid.section();
    let spectrum = neumann_spectrum(&section, k_count)?;
    if !is_simple(&neumann_spectrum(&section, k_count + 1)?, j, 1e-9)? {
        return Err(Error::InvalidInput(format!(
            "mode {j} is not simple; branching is not defined"
        )));
    }

    // unknown vector z = (t, a_k for k != j); a_j is pinned to s
    let mut coeffs = vec![0.0; k_count];
    for (c, init) in coeffs.iter_mut().zip(coeffs_init) {
        *c = *init;
    }
    coeffs[j - 1] = s;
    let mut z = Vec::with_capacity(k_count);
    z.push(t_init);
    for (k, c) in coeffs.iter().enumerate() {
        if k != j - 1 {
            z.push(*c);
        }
    }
    let unpack = |z: &[f64]| -> (f64, Vec<f64>) {
        let mut coeffs = vec![0.0; k_count];
        coeffs[j - 1] = s;
        let mut it = z[1..].iter();
        for (k, c) in coeffs.iter_mut().enumerate() {
            if k != j - 1 {
                *c = *it.next().unwrap();
            }
        }
        (z[0], coeffs)
    };
    let admissible = |z: &[f64]| -> bool {
        let (t, coeffs) = unpack(z);
        match ProfileFunction::new(section, t, coeffs) {
            Ok(p) => p.min_v(512) > 1e-6 * t,
            Err(_) => false,
        }
    };

    let n = z.len();
    let mut iters = 0;
    loop {
        let (t, coeffs) = unpack(&z);
        let base = eval_projected(&section, t, &coeffs, grid, &spectrum, &opts.solve)?;
        let res = norm(&base.proj);
        let tol = opts.tol_rel * base.c.abs();
        if res <= tol {
            return Ok(BranchPoint {
                s,
                profile: ProfileFunction::new(section, t, coeffs)?,
                lambda: base.lambda,
                c: base.c,
                residual_norm: res,
                newton_iters: iters,
            });
        }
        if iters >= opts.max_iter {
            return Err(Error::NewtonFailed {
                residual: res,
                iters,
            });
        }

        let mut jac = vec![0.0; n * n];
        for col in 0..n {
            let mut zp = z.clone();
            zp[col] += opts.fd_step;
            let (tp, cp) = unpack(&zp);
            let pert = eval_projected(&section, tp, &cp, grid, &spectrum, &opts.solve)?;
            for row in 0..n {
                jac[row * n + col] = (pert.proj[row] - base.proj[row]) / opts.fd_step;
            }
        }
        let mut step: Vec<f64> = base.proj.iter().map(|r| -r).collect();
        solve_dense(&mut jac, &mut step, n)?;

        let mut scale = 1.0;
        let mut halvings = 0;
        loop {
            let znew: Vec<f64> = z
                .iter()
                .zip(&step)
                .map(|(zi, di)| zi + scale * di)
                .collect();
            if admissible(&znew) {
                z = znew;
                break;
            }
            halvings += 1;
            if halvings > opts.max_halvings {
                let (t, coeffs) = unpack(&znew);
                let min_v = ProfileFunction::new(section, t, coeffs)
                    .map(|p| p.min_v(512))
                    .unwrap_or(f64::NEG_INFINITY);
                return Err(Error::PositivityLost { min_v });
            }
            scale *= 0.5;
        }
        iters += 1;
    }
}

/// Trace the branch through the bifurcation point of mode `j`, marching the
/// amplitude symmetrically away from zero and seeding each solve with the
/// previous point. A Newton failure stops the march on that side only; the
/// partial branch is returned with a warning.
pub fn trace_branch(
    j: usize,
    s_max: f64,
    ds: f64,
    grid: &Grid,
    k_count: usize,
    opts: &NewtonOptions,
) -> Result<Branch> {
    if !(ds > 0.0) || !(s_max >= ds) {
        return Err(Error::InvalidInput(format!(
            "need 0 < ds <= s_max, got ds={ds}, s_max={s_max}"
        )));
    }
    let section = grid.section();
    let spectrum = neumann_spectrum(&section, k_count.max(j))?;
    let t_star = bifurcation_point(spectrum[j - 1].sigma)?;

    let trivial = ProfileFunction::new(section, t_star, vec![0.0; k_count])?;
    let pair = first_eigenpair(&trivial, grid, &opts.solve)?;
    let raw = boundary_normal_derivative(&trivial, &pair, grid)?;
    let centered: Vec<f64> = raw.values.iter().map(|v| v - raw.mean).collect();
    let res: Vec<f64> = spectrum[..k_count]
        .iter()
        .map(|m| project_onto_mode(grid, &centered, m))
        .collect();
    let origin = BranchPoint {
        s: 0.0,
        profile: trivial,
        lambda: pair.lambda,
        c: raw.mean,
        residual_norm: norm(&res),
        newton_iters: 0,
    };

    let steps = (s_max / ds + 1e-9).floor() as usize;
    let mut warnings = Vec::new();
    let march = |sign: f64, warnings: &mut Vec<String>| -> Vec<BranchPoint> {
        let mut side = Vec::new();
        let mut prev = origin.clone();
        for i in 1..=steps {
            let s = sign * ds * i as f64;
            match newton_solve(j, s, prev.t(), prev.coefficients(), grid, k_count, opts) {
                Ok(bp) => {
                    prev = bp.clone();
                    side.push(bp);
                }
                Err(e) => {
                    let msg = format!("march stopped at s = {s:.6}: {e}");
                    log::warn!("{msg}");
                    warnings.push(msg);
                    break;
                }
            }
        }
        side
    };
    let plus = march(1.0, &mut warnings);
    let minus = march(-1.0, &mut warnings);

    let mut points: Vec<BranchPoint> = minus.into_iter().rev().collect();
    points.push(origin);
    points.extend(plus);
    Ok(Branch {
        mode_index: j,
        t_star,
        points,
        warnings,
    })
}

/// Independent checks on one branch point, always produced in full.
#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub residual_norm: f64,
    /// Relative constancy of the normal derivative: stddev / |mean|.
    pub constancy: f64,
    pub c: f64,
    pub lambda: f64,
    /// Largest one-sided difference of the height profile along the outward
    /// cross direction at the lateral boundary (orthogonality of the free
    /// boundary to the cylinder wall).
    pub boundary_slope: f64,
    pub min_v: f64,
    pub phi_positive: bool,
    /// Deviation size per unit amplitude, for points with s != 0.
    pub nonconstancy: Option<f64>,
}

impl VerificationReport {
    /// Acceptance thresholds for a converged point at default resolution.
    pub fn constancy_ok(&self) -> bool {
        self.constancy <= 1e-5
    }

    pub fn shape_ok(&self) -> bool {
        self.min_v > 0.0 && self.phi_positive
    }
}

fn lateral_slope(profile: &ProfileFunction, grid: &Grid) -> f64 {
    let h = grid.cross_spacing();
    let one_sided = |p0: [f64; 2], dir: usize, hh: f64| -> f64 {
        let mut p1 = p0;
        p1[dir] += hh;
        let mut p2 = p0;
        p2[dir] += 2.0 * hh;
        (-3.0 * profile.v(p0) + 4.0 * profile.v(p1) - profile.v(p2)) / (2.0 * hh)
    };
    let mut worst = 0.0f64;
    match profile.section() {
        CrossSection::Interval { length } => {
            worst = worst.max(one_sided([0.0, 0.0], 0, h[0]).abs());
            worst = worst.max(one_sided([length, 0.0], 0, -h[0]).abs());
        }
        CrossSection::Rectangle { a, b } => {
            let n = grid.n_prime;
            for i in 0..n {
                let x0 = a * i as f64 / (n - 1) as f64;
                let x1 = b * i as f64 / (n - 1) as f64;
                worst = worst.max(one_sided([x0, 0.0], 1, h[1]).abs());
                worst = worst.max(one_sided([x0, b], 1, -h[1]).abs());
                worst = worst.max(one_sided([0.0, x1], 0, h[0]).abs());
                worst = worst.max(one_sided([a, x1], 0, -h[0]).abs());
            }
        }
    }
    worst
}

/// Re-solve the eigenproblem at the point's profile and measure every
/// defining property of an overdetermined solution.
pub fn verify_branch_point(
    bp: &BranchPoint,
    grid: &Grid,
    solve: &SolveOptions,
) -> Result<VerificationReport> {
    let profile = &bp.profile;
    let pair = first_eigenpair(profile, grid, solve)?;
    let raw = boundary_normal_derivative(profile, &pair, grid)?;
    let centered: Vec<f64> = raw.values.iter().map(|v| v - raw.mean).collect();
    let spectrum = neumann_spectrum(&profile.section(), profile.k_count().max(1))?;
    let proj: Vec<f64> = spectrum
        .iter()
        .map(|m| project_onto_mode(grid, &centered, m))
        .collect();
    let mut phi_positive = true;
    for c in 0..grid.n_cross() {
        for jj in 0..grid.n_axial - 1 {
            if pair.phi_at(c, jj) <= 0.0 {
                phi_positive = false;
            }
        }
    }
    Ok(VerificationReport {
        residual_norm: norm(&proj),
        constancy: raw.stddev(grid) / raw.mean.abs(),
        c: raw.mean,
        lambda: pair.lambda,
        boundary_slope: lateral_slope(profile, grid),
        min_v: profile.min_v(512),
        phi_positive,
        nonconstancy: if bp.s != 0.0 {
            Some(profile.w_norm() / bp.s.abs())
        } else {
            None
        },
    })
}

/// Height at which the finite-difference linearization of the projected
/// residual changes sign on mode `j`: the discrete counterpart of the
/// closed-form bifurcation point, located by bisection. The step `eps`
/// should sit well above solver noise; 1e-3 is a good default.
pub fn discrete_critical_height(
    j: usize,
    grid: &Grid,
    eps: f64,
    solve: &SolveOptions,
) -> Result<f64> {
    let section = grid.section();
    let spectrum = neumann_spectrum(&section, j)?;
    let t_star = bifurcation_point(spectrum[j - 1].sigma)?;
    let mut coeffs = vec![0.0; j];
    coeffs[j - 1] = 1.0;
    let dir = ProfileFunction::new(section, t_star, coeffs)?;
    let eval = |t: f64| -> Result<f64> {
        let fd = frechet_difference(t, &dir, eps, grid, solve)?;
        Ok(fd.modes.as_ref().expect("projections are always computed")[j - 1])
    };
    let (mut a, mut b) = (0.99 * t_star, 1.01 * t_star);
    let (fa, fb) = (eval(a)?, eval(b)?);
    if fa.signum() == fb.signum() {
        return Err(Error::VerificationFailed(format!(
            "no sign change of the discrete dispersion on [{a:.6}, {b:.6}]"
        )));
    }
    let increasing = fb > fa;
    while b - a > 1e-10 {
        let mid = 0.5 * (a + b);
        let fm = eval(mid)?;
        if (fm > 0.0) == increasing {
            b = mid;
        } else {
            a = mid;
        }
    }
    Ok(0.5 * (a + b))
}
