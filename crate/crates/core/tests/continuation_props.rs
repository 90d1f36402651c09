//! Branch-level properties: the trivial line is a fixed point of the
//! projected Newton solver, traced branches are tangent to the predicted
//! mode with pitchfork symmetry, the discrete critical height matches the
//! quadratic approach of the branch, and corrupted points are rejected.

use std::f64::consts::PI;
use std::sync::OnceLock;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use halfcyl::continuation::{
    detect_bifurcations, discrete_critical_height, newton_solve, trace_branch,
    verify_branch_point, Branch, BranchPoint, NewtonOptions,
};
use halfcyl::cross_section::CrossSection;
use halfcyl::dispersion::{crossing_slope, lambda_trivial};
use halfcyl::grid::Grid;
use halfcyl::profile::ProfileFunction;

fn interval() -> CrossSection {
    CrossSection::Interval { length: PI }
}

fn fine_grid() -> Grid {
    Grid::new(interval(), 48, 64).unwrap()
}

/// One branch through the first crossing, shared by the tests below.
fn traced() -> &'static Branch {
    static BRANCH: OnceLock<Branch> = OnceLock::new();
    BRANCH.get_or_init(|| {
        trace_branch(1, 0.04, 0.01, &fine_grid(), 8, &NewtonOptions::default()).unwrap()
    })
}

fn point_at(branch: &Branch, s: f64) -> &BranchPoint {
    branch
        .points
        .iter()
        .find(|p| (p.s - s).abs() < 1e-12)
        .unwrap_or_else(|| panic!("no branch point at s={s}"))
}

#[test]
fn trivial_line_is_fixed_by_newton() {
    let grid = Grid::new(interval(), 24, 32).unwrap();
    let opts = NewtonOptions::default();
    let t1 = PI / 2.0;
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..20 {
        let t = rng.gen_range(0.5 * t1..2.0 * t1);
        let bp = newton_solve(1, 0.0, t, &[0.0; 4], &grid, 4, &opts).unwrap();
        assert_eq!(bp.newton_iters, 0, "t={t}");
        assert_eq!(bp.t(), t);
        assert!(bp.coefficients().iter().all(|a| *a == 0.0));
        assert!(bp.residual_norm <= 1e-9 * bp.c.abs());
    }
}

#[test]
fn branch_points_satisfy_newton_tolerance() {
    let branch = traced();
    assert!(branch.warnings.is_empty(), "warnings: {:?}", branch.warnings);
    assert_eq!(branch.points.len(), 9);
    for p in &branch.points {
        assert!(
            p.residual_norm <= 1.0000001e-9 * p.c.abs(),
            "s={}: residual {:.3e} vs c {:.3e}",
            p.s,
            p.residual_norm,
            p.c
        );
        assert!((p.t() - PI / 2.0).abs() < 0.05);
    }
    let ss: Vec<f64> = branch.points.iter().map(|p| p.s).collect();
    for pair in ss.windows(2) {
        assert!(pair[0] < pair[1], "points not ordered: {ss:?}");
    }
}

#[test]
fn branch_is_tangent_to_the_first_mode() {
    let branch = traced();
    let tangency = |s: f64| -> f64 {
        let p = point_at(branch, s);
        let a = p.coefficients();
        let mut sum = 0.0;
        for (k, ak) in a.iter().enumerate() {
            if k != 0 {
                sum += (ak / s).powi(2);
            }
        }
        assert!((a[0] - s).abs() < 1e-14, "amplitude constraint broken");
        sum.sqrt()
    };
    let m4 = tangency(0.04);
    let m2 = tangency(0.02);
    let m1 = tangency(0.01);
    assert!(m4 > m2 && m2 > m1, "tangency not decreasing: {m4} {m2} {m1}");
    assert!(m1 <= 0.1, "tangency at s=0.01: {m1}");
}

#[test]
fn secondary_modes_stay_dominated() {
    let branch = traced();
    for p in &branch.points {
        if p.s == 0.0 || p.s.abs() > 0.02 + 1e-12 {
            continue;
        }
        let a = p.coefficients();
        for (k, ak) in a.iter().enumerate() {
            if k != 0 {
                assert!(
                    ak.abs() <= 0.2 * a[0].abs(),
                    "s={}: mode {} coefficient {ak:.3e} vs {:.3e}",
                    p.s,
                    k + 1,
                    a[0]
                );
            }
        }
    }
}

#[test]
fn pitchfork_symmetry_of_heights() {
    let branch = traced();
    for s in [0.01, 0.02] {
        let tp = point_at(branch, s).t();
        let tm = point_at(branch, -s).t();
        assert!((tp - tm).abs() <= 1e-3, "s={s}: t+ {tp} vs t- {tm}");
    }
}

#[test]
fn eigenvalue_follows_the_trivial_dispersion() {
    let branch = traced();
    let origin = point_at(branch, 0.0);
    let offset = (origin.lambda - lambda_trivial(branch.t_star).unwrap()).abs();
    for p in &branch.points {
        let reference = lambda_trivial(p.t()).unwrap();
        let gap = (p.lambda - reference).abs();
        assert!(
            gap <= 3.0 * offset + 0.5 * p.s * p.s,
            "s={}: lambda gap {gap:.3e} vs budget {:.3e}",
            p.s,
            3.0 * offset + 0.5 * p.s * p.s
        );
    }
}

#[test]
fn branch_approaches_the_discrete_critical_height_quadratically() {
    let grid = fine_grid();
    let t_h = discrete_critical_height(1, &grid, 1e-3, &NewtonOptions::default().solve).unwrap();
    assert!((t_h - PI / 2.0).abs() < 1e-3, "discrete height {t_h}");
    let branch = traced();
    let gap = |s: f64| (point_at(branch, s).t() - t_h).abs();
    let r1 = gap(0.04) / gap(0.02);
    let r2 = gap(0.02) / gap(0.01);
    assert!((3.0..=5.0).contains(&r1), "halving ratio {r1}");
    assert!((3.0..=5.0).contains(&r2), "halving ratio {r2}");
}

#[test]
fn verification_report_confirms_a_traced_point() {
    let grid = fine_grid();
    let branch = traced();
    let p = point_at(branch, 0.02);
    let report = verify_branch_point(p, &grid, &NewtonOptions::default().solve).unwrap();
    assert!(report.constancy_ok(), "constancy {:.3e}", report.constancy);
    assert!(report.shape_ok());
    // stencil truncation ~ h^3 |w|'''' for cosine profiles; tiny vs the
    // interior slope scale |w|' ~ 1.6e-2
    assert!(report.boundary_slope.abs() < 1e-5);
    assert!(report.c < 0.0);
    let nonconstancy = report.nonconstancy.unwrap();
    assert!(nonconstancy >= 0.5, "nonconstancy {nonconstancy}");
}

#[test]
fn corrupted_point_fails_verification() {
    let grid = fine_grid();
    let branch = traced();
    let good = point_at(branch, 0.02);
    let mut coeffs = good.coefficients().to_vec();
    coeffs[1] += 0.01;
    let corrupted = BranchPoint {
        s: good.s,
        profile: ProfileFunction::new(interval(), good.t(), coeffs).unwrap(),
        lambda: good.lambda,
        c: good.c,
        residual_norm: good.residual_norm,
        newton_iters: good.newton_iters,
    };
    let report = verify_branch_point(&corrupted, &grid, &NewtonOptions::default().solve).unwrap();
    assert!(
        report.constancy >= 1e-3,
        "corruption went unnoticed: constancy {:.3e}",
        report.constancy
    );
    assert!(!report.constancy_ok());
}

#[test]
fn oversized_step_leaves_a_warning_and_the_origin() {
    let grid = Grid::new(interval(), 24, 32).unwrap();
    let branch = trace_branch(1, 2.0, 2.0, &grid, 2, &NewtonOptions::default()).unwrap();
    assert!(!branch.warnings.is_empty());
    assert_eq!(branch.points.len(), 1);
    assert_eq!(branch.points[0].s, 0.0);
}

#[test]
fn detected_bifurcations_carry_closed_form_slopes() {
    let candidates = detect_bifurcations(&interval(), 3, (0.5, 2.0)).unwrap();
    assert_eq!(candidates.len(), 3);
    for c in &candidates {
        let expected_t = PI / (2.0 * (c.sigma).sqrt());
        assert!((c.t - expected_t).abs() < 1e-12);
        assert!(c.simple);
        let slope = crossing_slope(c.sigma).unwrap();
        assert!((c.slope - slope).abs() <= 1e-12 * slope.abs());
        assert!(c.slope > 0.0);
    }
}
