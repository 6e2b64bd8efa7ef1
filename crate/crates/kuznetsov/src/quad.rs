//! Adaptive numerical integration.
//!
//! One-dimensional integrals use a globally adaptive 7-15 Gauss-Kronrod pair
//! with the usual rescaled error estimate; an infinite upper endpoint is
//! mapped to (0, 1] by x = a - ln t. Two-dimensional integrals over C or C*
//! are done in polar coordinates: the angular direction by the trapezoid
//! rule (spectrally accurate for the finitely-many-angular-modes integrands
//! that occur here), doubled until stable, and the radial direction by the
//! adaptive 1D kernel.
//!
//! Conventions: the planar measure dz is TWICE the Lebesgue measure of
//! C = R^2, and d*z = dz/|z|^2, so the annulus 1 <= |z| <= e has
//! multiplicative volume 4 pi. Every integral in this crate uses these
//! normalizations.

use crate::{Complex64, Error, Result};
use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

/// Tolerances and truncation settings for the integrators.
#[derive(Clone, Copy, Debug)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    /// Radial window for the polar integrators; `radial_max` may be
    /// infinite when the integrand decays.
    pub radial_min: f64,
    pub radial_max: f64,
}

impl Default for QuadratureSpec {
    fn default() -> QuadratureSpec {
        QuadratureSpec {
            rel_tol: 1e-10,
            abs_tol: 1e-13,
            max_subdivisions: 2000,
            radial_min: 0.0,
            radial_max: f64::INFINITY,
        }
    }
}

impl QuadratureSpec {
    pub fn with_tols(rel_tol: f64, abs_tol: f64) -> QuadratureSpec {
        QuadratureSpec { rel_tol, abs_tol, ..QuadratureSpec::default() }
    }

    pub fn with_radial(self, radial_min: f64, radial_max: f64) -> QuadratureSpec {
        QuadratureSpec { radial_min, radial_max, ..self }
    }

    fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(Error::InvalidParameter("tolerances must be positive"));
        }
        if !(self.radial_min >= 0.0 && self.radial_min < self.radial_max) {
            return Err(Error::InvalidParameter("radial window must satisfy 0 <= r_min < r_max"));
        }
        Ok(())
    }
}

/// Outcome of an integration: the value, a validated error estimate, and
/// work counters.
#[derive(Clone, Copy, Debug)]
pub struct QuadResult {
    pub value: Complex64,
    pub err_est: f64,
    pub evaluations: usize,
    pub segments: usize,
}

// 7-15 Gauss-Kronrod pair on [-1, 1]. Nodes xgk[1], xgk[3], xgk[5] and the
// centre are the Gauss points.
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

#[derive(Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: Complex64,
    err: f64,
}

/// One Gauss-Kronrod pass over [a, b]: (value, err, resabs).
fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64, evals: &mut usize) -> (Complex64, f64) {
    let hlgth = 0.5 * (b - a);
    let centre = 0.5 * (a + b);
    let fc = f(centre);
    *evals += 15;
    let mut resg = fc * WG[3];
    let mut resk = fc * WGK[7];
    let mut resabs = fc.norm() * WGK[7];
    let mut fv = [Complex64::new(0.0, 0.0); 14];
    for j in 0..7 {
        let absc = hlgth * XGK[j];
        fv[2 * j] = f(centre - absc);
        fv[2 * j + 1] = f(centre + absc);
        let fsum = fv[2 * j] + fv[2 * j + 1];
        resk += fsum * WGK[j];
        resabs += (fv[2 * j].norm() + fv[2 * j + 1].norm()) * WGK[j];
        if j % 2 == 1 {
            resg += fsum * WG[j / 2];
        }
    }
    let reskh = resk * 0.5;
    let mut resasc = WGK[7] * (fc - reskh).norm();
    for j in 0..7 {
        resasc += WGK[j] * ((fv[2 * j] - reskh).norm() + (fv[2 * j + 1] - reskh).norm());
    }
    let value = resk * hlgth;
    let resabs = resabs * hlgth.abs();
    let resasc = resasc * hlgth.abs();
    let mut err = ((resk - resg) * hlgth).norm();
    if resasc != 0.0 && err != 0.0 {
        let scaled = (200.0 * err / resasc).powf(1.5);
        err = resasc * scaled.min(1.0);
    }
    let uflow = f64::MIN_POSITIVE;
    let eps = f64::EPSILON;
    if resabs > uflow / (50.0 * eps) {
        err = err.max(50.0 * eps * resabs);
    }
    (value, err)
}

fn adaptive_finite<F: Fn(f64) -> Complex64>(
    f: &F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<QuadResult> {
    let mut evals = 0usize;
    let (v0, e0) = gk15(f, a, b, &mut evals);
    if !v0.is_finite() {
        return Err(Error::ConvergenceFailure("integrand produced a non-finite value"));
    }
    let mut segs: Vec<Segment> = Vec::new();
    segs.push(Segment { a, b, value: v0, err: e0 });
    loop {
        // Deterministic summation: accumulate in stored (left-endpoint)
        // order, which is independent of the refinement history.
        let mut order: Vec<usize> = (0..segs.len()).collect();
        order.sort_by(|&i, &j| segs[i].a.total_cmp(&segs[j].a));
        let mut total = Complex64::new(0.0, 0.0);
        let mut toterr = 0.0;
        for &i in &order {
            total += segs[i].value;
            toterr += segs[i].err;
        }
        let tol = spec.abs_tol.max(spec.rel_tol * total.norm());
        if toterr <= tol {
            return Ok(QuadResult { value: total, err_est: toterr, evaluations: evals, segments: segs.len() });
        }
        if segs.len() >= spec.max_subdivisions {
            return Err(Error::ToleranceNotMet { requested: tol, achieved: toterr, partial: total });
        }
        // Split the segment with the largest error (ties: smaller left
        // endpoint). A segment is splittable exactly when its midpoint is
        // representable strictly between the endpoints; an absolute width
        // floor would give up too early next to an endpoint singularity
        // at 0, where subdivision must run far into the denormal range.
        let mut worst = usize::MAX;
        for i in 0..segs.len() {
            let mid = 0.5 * (segs[i].a + segs[i].b);
            if !(segs[i].a < mid && mid < segs[i].b) {
                continue;
            }
            if worst == usize::MAX
                || segs[i].err > segs[worst].err
                || (segs[i].err == segs[worst].err && segs[i].a < segs[worst].a)
            {
                worst = i;
            }
        }
        if worst == usize::MAX {
            return Err(Error::ToleranceNotMet { requested: tol, achieved: toterr, partial: total });
        }
        let Segment { a: sa, b: sb, .. } = segs[worst];
        let mid = 0.5 * (sa + sb);
        let (vl, el) = gk15(f, sa, mid, &mut evals);
        let (vr, er) = gk15(f, mid, sb, &mut evals);
        if !(vl.is_finite() && vr.is_finite()) {
            return Err(Error::ConvergenceFailure("integrand produced a non-finite value"));
        }
        segs[worst] = Segment { a: sa, b: mid, value: vl, err: el };
        segs.push(Segment { a: mid, b: sb, value: vr, err: er });
    }
}

/// Integrate f over (a, b); b may be `f64::INFINITY`, in which case the
/// head (a, a+1) is kept in natural coordinates and the tail is mapped to
/// (0, 1] by x = a + 1 - ln t (the integrand is expected to decay at least
/// like e^{-x}, which holds for every Gaussian or K-Bessel tail in this
/// crate). Keeping the head unmapped matters when f has an integrable
/// endpoint singularity at a: under the log map that endpoint lands at
/// t = 1, where the float grid is too coarse to resolve it.
pub fn integrate_interval<F: Fn(f64) -> Complex64>(
    f: F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<QuadResult> {
    spec.validate()?;
    if !a.is_finite() || b <= a {
        return Err(Error::InvalidParameter("need finite a < b"));
    }
    if b.is_infinite() {
        let head = adaptive_finite(&f, a, a + 1.0, spec)?;
        let g = |t: f64| f(a + 1.0 - t.ln()) / t;
        let tail = adaptive_finite(&g, 0.0, 1.0, spec)?;
        Ok(QuadResult {
            value: head.value + tail.value,
            err_est: head.err_est + tail.err_est,
            evaluations: head.evaluations + tail.evaluations,
            segments: head.segments + tail.segments,
        })
    } else {
        adaptive_finite(&f, a, b, spec)
    }
}

fn integrate_polar<F: Fn(Complex64) -> Complex64>(
    f: &F,
    multiplicative: bool,
    spec: &QuadratureSpec,
) -> Result<QuadResult> {
    spec.validate()?;
    let inner = QuadratureSpec {
        rel_tol: (0.25 * spec.rel_tol).max(1e-14),
        abs_tol: 0.25 * spec.abs_tol,
        ..*spec
    };
    let mut evals = 0usize;
    let mut prev: Option<QuadResult> = None;
    let mut n = 16usize;
    let mut last_err = f64::INFINITY;
    let mut last_val = Complex64::new(0.0, 0.0);
    while n <= 8192 {
        let radial = |rho: f64| {
            let mut s = Complex64::new(0.0, 0.0);
            for k in 0..n {
                let th = 2.0 * PI * (k as f64) / (n as f64);
                s += f(Complex64::from_polar(rho, th));
            }
            let weight = if multiplicative { 1.0 / rho } else { rho };
            s * (2.0 * PI / (n as f64)) * weight
        };
        let r = integrate_interval(radial, spec.radial_min, spec.radial_max, &inner)?;
        evals += r.evaluations * n;
        let value = r.value * 2.0; // the doubled-Lebesgue convention
        last_val = value;
        if let Some(p) = prev {
            let delta = (value - p.value).norm();
            let tol = spec.abs_tol.max(spec.rel_tol * value.norm());
            last_err = delta + 2.0 * r.err_est;
            if delta <= tol {
                return Ok(QuadResult {
                    value,
                    err_est: last_err,
                    evaluations: evals,
                    segments: r.segments,
                });
            }
        }
        prev = Some(QuadResult { value, err_est: r.err_est, evaluations: evals, segments: r.segments });
        n *= 2;
    }
    Err(Error::ToleranceNotMet {
        requested: spec.abs_tol.max(spec.rel_tol * last_val.norm()),
        achieved: last_err,
        partial: last_val,
    })
}

/// Integral of f over C against dz (twice the Lebesgue measure), on the
/// radial window of `spec`.
pub fn integrate_complex_plane<F: Fn(Complex64) -> Complex64>(
    f: F,
    spec: &QuadratureSpec,
) -> Result<QuadResult> {
    integrate_polar(&f, false, spec)
}

/// Integral of f over C* against d*z = dz/|z|^2, on the radial window of
/// `spec`. The window's annulus 1 <= |z| <= e has volume 4 pi.
pub fn integrate_multiplicative<F: Fn(Complex64) -> Complex64>(
    f: F,
    spec: &QuadratureSpec,
) -> Result<QuadResult> {
    integrate_polar(&f, true, spec)
}

/// Gauss-Legendre nodes and weights on [-1, 1], ascending, by Newton
/// iteration on the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    assert!(n >= 1);
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_deriv(n, x);
            dp = d;
            let dx = -p / d;
            x += dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push((x, w));
    }
    out.sort_by(|u, v| u.0.total_cmp(&v.0));
    out
}

fn legendre_with_deriv(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 1..n {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0) * x * p1 - kf * p0) / (kf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    let dp = (n as f64) * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}
