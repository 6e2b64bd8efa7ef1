//! Verification suites: each point computes one identity two independent
//! ways and reports the relative residual.
//!
//! * `closed`: the unipotent defining integral of the Whittaker function
//!   against its K-Bessel closed form, on a grid of (s, d, r).
//! * `kernel`: the Weyl-element Whittaker value against the integral of the
//!   Bessel kernel times the closed form, on a grid of (s, d) at a = 1.
//! * `measure`: one integral of a separable test function evaluated in the
//!   Iwasawa chart and in the Bruhat chart, testing the two Haar densities
//!   against each other.

use kuznetsov::group::{haar_weight_bruhat, haar_weight_iwasawa, BruhatCoords, GroupElement};
use kuznetsov::quad::{integrate_complex_plane, integrate_interval, QuadratureSpec};
use kuznetsov::rings::QuadField;
use kuznetsov::traceformula::{AnnularBump, GaussianEta};
use kuznetsov::whittaker::{
    jacquet_whittaker_closed, jacquet_whittaker_numeric, kernel_formula_residual, WhittakerParams,
};
use num_complex::Complex64;
use rayon::prelude::*;

pub const CLOSED_S: [f64; 3] = [0.15, 0.3, 0.45];
pub const CLOSED_D: [i32; 3] = [0, 1, 2];
pub const CLOSED_R: [f64; 2] = [0.5, 1.0];
pub const KERNEL_S: [f64; 3] = [0.1, 0.25, 0.4];
pub const KERNEL_D: [i32; 3] = [0, 1, 2];

pub const CLOSED_TOL: f64 = 1e-6;
pub const KERNEL_TOL: f64 = 1e-4;
pub const MEASURE_TOL: f64 = 1e-6;

#[derive(Clone, Debug)]
pub struct VerifyPoint {
    pub label: String,
    pub lhs: Option<Complex64>,
    pub rhs: Option<Complex64>,
    pub residual: Option<f64>,
    pub tol: f64,
    pub pass: bool,
    pub note: Option<String>,
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub name: &'static str,
    pub points: Vec<VerifyPoint>,
    pub passed: bool,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct GridFilter {
    pub s: Option<f64>,
    pub d: Option<i32>,
    pub r: Option<f64>,
}

fn relative_residual(lhs: Complex64, rhs: Complex64) -> f64 {
    let denom = lhs.norm().max(rhs.norm());
    if denom > 0.0 {
        (lhs - rhs).norm() / denom
    } else {
        0.0
    }
}

fn point_from_values(label: String, lhs: Complex64, rhs: Complex64, tol: f64) -> VerifyPoint {
    let residual = relative_residual(lhs, rhs);
    VerifyPoint {
        label,
        lhs: Some(lhs),
        rhs: Some(rhs),
        residual: Some(residual),
        tol,
        pass: residual <= tol,
        note: None,
    }
}

fn point_from_error(label: String, tol: f64, err: impl std::fmt::Display) -> VerifyPoint {
    VerifyPoint {
        label,
        lhs: None,
        rhs: None,
        residual: None,
        tol,
        pass: false,
        note: Some(format!("{err}")),
    }
}

fn seal(name: &'static str, points: Vec<VerifyPoint>) -> SuiteReport {
    let passed = points.iter().all(|p| p.pass);
    SuiteReport { name, points, passed }
}

fn axis<T: Copy + PartialEq>(grid: &[T], filter: Option<T>) -> Vec<T> {
    match filter {
        Some(v) => vec![v],
        None => grid.to_vec(),
    }
}

/// Whittaker closed form against the defining integral on the (s, d, r)
/// grid, at the first dual-basis character of the field.
pub fn closed_suite(field: QuadField, filter: GridFilter, tol: f64) -> SuiteReport {
    let omega = field.dual_basis().0;
    let spec = QuadratureSpec::with_tols(1e-9, 1e-12);
    let mut grid = Vec::new();
    for &s in &axis(&CLOSED_S, filter.s) {
        for &d in &axis(&CLOSED_D, filter.d) {
            for &r in &axis(&CLOSED_R, filter.r) {
                grid.push((s, d, r));
            }
        }
    }
    let points: Vec<VerifyPoint> = grid
        .par_iter()
        .map(|&(s, d, r)| {
            let label = format!("s={s} d={d} r={r}");
            let wp = match WhittakerParams::continuation(s, d, omega) {
                Ok(wp) => wp,
                Err(e) => return point_from_error(label, tol, e),
            };
            let numeric = jacquet_whittaker_numeric(&wp, GroupElement::a_r(r), &spec);
            let closed = jacquet_whittaker_closed(&wp, r, 0.0);
            match (numeric, closed) {
                (Ok(lhs), Ok(rhs)) => point_from_values(label, lhs, rhs, tol),
                (Err(e), _) | (_, Err(e)) => point_from_error(label, tol, e),
            }
        })
        .collect();
    seal("closed", points)
}

/// The kernel identity: W(a w) against the kernel-weighted integral of the
/// closed form, on the (s, d) grid at a = 1.
pub fn kernel_suite(field: QuadField, filter: GridFilter, tol: f64) -> SuiteReport {
    let omega = field.dual_basis().0;
    let spec = QuadratureSpec::with_tols(1e-8, 1e-11);
    let a = Complex64::new(1.0, 0.0);
    let mut grid = Vec::new();
    for &s in &axis(&KERNEL_S, filter.s) {
        for &d in &axis(&KERNEL_D, filter.d) {
            grid.push((s, d));
        }
    }
    let points: Vec<VerifyPoint> = grid
        .par_iter()
        .map(|&(s, d)| {
            let label = format!("s={s} d={d} a=1");
            let wp = match WhittakerParams::continuation(s, d, omega) {
                Ok(wp) => wp,
                Err(e) => return point_from_error(label, tol, e),
            };
            match kernel_formula_residual(&wp, a, &spec) {
                Ok(check) => point_from_values(label, check.lhs, check.rhs, tol),
                Err(e) => point_from_error(label, tol, e),
            }
        })
        .collect();
    seal("kernel", points)
}

/// Both chart integrals of the measure-consistency test function.
///
/// The test function is separable in Bruhat coordinates,
/// f(n(u1) w a(c) n(u2)) = eta1(u1) h(c) eta2(u2), with a Gaussian in u1
/// and radial bumps in c and u2. In the Bruhat chart the integral
/// factors into three plane integrals against the constant density of the
/// (u1, c, u2) chart. In the Iwasawa chart, translation invariance of the
/// u1 factor removes the z integral, and for radial bumps the two K angles
/// integrate out, leaving a 2D (r, theta) integral: on the Hopf chart
/// k = k(cos(theta) e^{i phi1}, sin(theta) e^{i phi2}) the probability
/// measure is (1/2 pi^2) sin(theta) cos(theta) and the Bruhat coordinates
/// of a(r) k have |u2| = cot(theta) and |c| = sin(theta)^2 / r, both
/// independent of the angles. The two densities enter through
/// haar_weight_iwasawa and haar_weight_bruhat, which is what makes the
/// comparison a test of their dictionary.
pub fn measure_point() -> Result<(Complex64, Complex64), kuznetsov::Error> {
    let eta1 = GaussianEta::new(1.0, Complex64::new(0.3, 0.2), 0.9)?;
    let eta2 = AnnularBump::new(0.5, 2.0)?;
    let h = AnnularBump::new(0.7, 1.8)?;
    let zero = Complex64::new(0.0, 0.0);

    let plane = QuadratureSpec::with_tols(1e-10, 1e-13);
    let i1 = integrate_complex_plane(
        |z| Complex64::new(eta1.eval(z), 0.0),
        &plane.with_radial(0.0, 10.0),
    )?;
    let i2 = integrate_complex_plane(|z| eta2.eval(z), &plane.with_radial(0.45, 2.1))?;
    // The stated Bruhat density lives on the (u1, u2', c) chart with
    // u2' = c u2; moving it to the (u1, c, u2) chart multiplies by the
    // doubled-measure Jacobian |c|^2 and leaves a constant.
    let i3 = integrate_complex_plane(
        |cc| {
            let bc = BruhatCoords { u1: zero, c: cc, u2: zero };
            h.eval(cc) * haar_weight_bruhat(&bc) * cc.norm_sqr()
        },
        &plane.with_radial(0.65, 1.9),
    )?;
    let bruhat = i1.value * i2.value * i3.value;

    // Support: cot(theta) in [0.5, 2] and sin(theta)^2 / r in [0.7, 1.8],
    // padded a little on each side.
    let theta_window = (0.5f64.atan() - 0.05, 2.0f64.atan() + 0.05);
    let r_window = (0.08, 1.25);
    let inner_spec = QuadratureSpec::with_tols(1e-10, 1e-13);
    let outer_spec = QuadratureSpec::with_tols(1e-9, 1e-12);
    let nan = Complex64::new(f64::NAN, 0.0);
    let angular = |theta: f64| -> Complex64 {
        let (sin_t, cos_t) = theta.sin_cos();
        let k = GroupElement::k(Complex64::new(cos_t, 0.0), Complex64::new(sin_t, 0.0));
        let radial = |r: f64| -> Complex64 {
            let g0 = GroupElement::a_r(r).mul(k);
            let (ic, bc) = match (g0.iwasawa_decompose(), g0.bruhat_decompose()) {
                (Ok(ic), Ok(bc)) => (ic, bc),
                _ => return nan,
            };
            eta2.eval(bc.u2) * h.eval(bc.c) * haar_weight_iwasawa(&ic)
        };
        let inner = match integrate_interval(radial, r_window.0, r_window.1, &inner_spec) {
            Ok(q) => q.value,
            Err(_) => nan,
        };
        inner * (2.0 * sin_t * cos_t)
    };
    let outer = integrate_interval(angular, theta_window.0, theta_window.1, &outer_spec)?;
    let iwasawa = i1.value * outer.value;

    Ok((iwasawa, bruhat))
}

pub fn measure_suite(tol: f64) -> SuiteReport {
    let label = "separable bump, Iwasawa vs Bruhat".to_string();
    let point = match measure_point() {
        Ok((lhs, rhs)) => point_from_values(label, lhs, rhs, tol),
        Err(e) => point_from_error(label, tol, e),
    };
    seal("measure", vec![point])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SuiteName {
    Closed,
    Kernel,
    Measure,
}

pub fn run_suites(
    which: &[SuiteName],
    field: QuadField,
    filter: GridFilter,
    tol_override: Option<f64>,
) -> Vec<SuiteReport> {
    which
        .iter()
        .map(|name| match name {
            SuiteName::Closed => closed_suite(field, filter, tol_override.unwrap_or(CLOSED_TOL)),
            SuiteName::Kernel => kernel_suite(field, filter, tol_override.unwrap_or(KERNEL_TOL)),
            SuiteName::Measure => measure_suite(tol_override.unwrap_or(MEASURE_TOL)),
        })
        .collect()
}
