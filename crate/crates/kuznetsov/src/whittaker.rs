//! The Jacquet-Whittaker function: the unipotent integral, its K-Bessel
//! closed form, and the kernel identity relating values across the Weyl
//! element.
//!
//! The function attached to (s, d) and a nonzero dual point omega is
//!
//! ```text
//! W(g) = integral over u in C of  psi_omega(u)^-1 phi_{s,d}(w n(u) g) du,
//! ```
//!
//! absolutely convergent for Re s > 0, with du twice the Lebesgue measure.
//! On the diagonal torus it collapses to an explicit K-Bessel expression;
//! the numeric integral here never touches Bessel functions, so the two
//! paths check each other. Across the Weyl element the two are linked by
//! the Bessel kernel:
//!
//! ```text
//! W(a w) = integral over b in C* of  kernel(s,d)(omega; a b) W(b) d*b ,
//! ```
//!
//! which `kernel_formula_residual` evaluates from both ends.
//!
//! The unipotent integrand decays only like |u|^(-4 Re s - 2), too slowly
//! to truncate, but its radial profile oscillates at the character
//! frequency once the angular integral is done. The integral is therefore
//! split into an adaptive head and half-period tail panels whose partial
//! sums are averaged down a triangle, which converges geometrically for
//! asymptotically alternating panel sums.

use crate::group::{AdditiveCharacter, GroupElement};
use crate::quad::{integrate_interval, integrate_multiplicative, QuadResult, QuadratureSpec};
use crate::rings::DualPoint;
use crate::specfun::{bessel_k, bessel_kernel_sd, gamma, recip_gamma, SpectralParameter};
use crate::{Complex64, Error, Result};
use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)] // float intrinsics come from the trait in no_std builds
use num_traits::Float;

/// Parameters of a Whittaker function: a spectral point (s, d) and the
/// additive character omega. Real s in (0, 1/2) with d != 0 lies outside
/// the unitary dual and is carried as a flagged analytic continuation.
#[derive(Clone, Copy, Debug)]
pub struct WhittakerParams {
    s: Complex64,
    d: i32,
    omega: DualPoint,
    continuation: bool,
}

impl WhittakerParams {
    /// Parameters at a point of the unitary dual.
    pub fn unitary(p: &SpectralParameter, omega: DualPoint) -> Result<WhittakerParams> {
        p.validate()?;
        if omega.is_zero() {
            return Err(Error::InvalidParameter("whittaker needs omega nonzero"));
        }
        Ok(WhittakerParams { s: p.s(), d: p.d(), omega, continuation: false })
    }

    /// Parameters at real s = t in (0, 1/2) with arbitrary d; for d != 0
    /// this is the continuation regime and is flagged as such.
    pub fn continuation(t: f64, d: i32, omega: DualPoint) -> Result<WhittakerParams> {
        if !(t > 0.0 && t < 0.5) {
            return Err(Error::InvalidParameter("continuation regime needs 0 < t < 1/2"));
        }
        if omega.is_zero() {
            return Err(Error::InvalidParameter("whittaker needs omega nonzero"));
        }
        Ok(WhittakerParams { s: Complex64::new(t, 0.0), d, omega, continuation: d != 0 })
    }

    pub fn s(&self) -> Complex64 {
        self.s
    }

    pub fn d(&self) -> i32 {
        self.d
    }

    pub fn omega(&self) -> DualPoint {
        self.omega
    }

    pub fn is_continuation(&self) -> bool {
        self.continuation
    }
}

/// The section phi_{s,d}(n(z) a(r) k_{v,w}) = r^(2s+1) v^(2d), with the
/// conjugate power conj(v)^(-2d) for d < 0. Left-equivariant under the
/// Borel: phi(u a g) = |a|^(2s+1) (a/|a|)^d phi(g).
pub fn phi_sd(s: Complex64, d: i32, g: GroupElement) -> Result<Complex64> {
    let ic = g.iwasawa_decompose()?;
    let radial = (Complex64::new(ic.r, 0.0)).powc(s * 2.0 + 1.0);
    let angular = if d >= 0 { ic.v.powi(2 * d) } else { ic.v.conj().powi(-2 * d) };
    Ok(radial * angular)
}

fn torus(a: Complex64) -> GroupElement {
    GroupElement::a(a)
}

/// One pass of the unipotent integral at a fixed angular resolution.
fn jacquet_radial(
    wp: &WhittakerParams,
    g: GroupElement,
    n_angular: usize,
    spec: &QuadratureSpec,
) -> Result<(Complex64, f64)> {
    let s = wp.s;
    let d = wp.d;
    let psi = AdditiveCharacter::new(wp.omega);
    let f = |rho: f64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..n_angular {
            let th = 2.0 * PI * (k as f64) / (n_angular as f64);
            let u = Complex64::from_polar(rho, th);
            let m = GroupElement::weyl().mul(GroupElement::n(u)).mul(g);
            let phi = phi_sd(s, d, m).unwrap_or(Complex64::new(f64::NAN, 0.0));
            acc += psi.eval_inverse(u) * phi;
        }
        acc * (2.0 * PI / (n_angular as f64)) * rho
    };

    let omega_abs = wp.omega.embed().norm();
    let head_end = 2.0 + 2.0 * matrix_scale(g);
    let delta = 1.0 / (4.0 * omega_abs);
    let panels = 64usize;

    let inner = QuadratureSpec {
        rel_tol: (0.05 * spec.rel_tol).max(1e-14),
        abs_tol: 0.01 * spec.abs_tol,
        ..*spec
    };
    let head = integrate_interval(&f, 0.0, head_end, &inner)?;
    let mut partial = Vec::with_capacity(panels);
    let mut acc = head.value;
    let mut err = head.err_est;
    for k in 0..panels {
        let a = head_end + delta * (k as f64);
        let p = integrate_interval(&f, a, a + delta, &inner)?;
        acc += p.value;
        err += p.err_est;
        partial.push(acc);
    }
    let full = triangle_average(&partial);
    let short = triangle_average(&partial[..panels - 8]);
    err += (full - short).norm();
    Ok((full * 2.0, 2.0 * err))
}

fn matrix_scale(g: GroupElement) -> f64 {
    let mut top: f64 = 0.0;
    for row in &g.m {
        for e in row {
            top = top.max(e.norm());
        }
    }
    let det = g.det().norm().sqrt();
    if det > 0.0 {
        top / det
    } else {
        top
    }
}

/// Repeated pairwise averaging of the partial sums of an asymptotically
/// alternating series; the apex of the triangle is the accelerated limit.
fn triangle_average(partial: &[Complex64]) -> Complex64 {
    let mut level: Vec<Complex64> = partial.into();
    while level.len() > 1 {
        for i in 0..level.len() - 1 {
            level[i] = (level[i] + level[i + 1]) * 0.5;
        }
        level.pop();
    }
    level[0]
}

/// The Whittaker function by its defining integral over the unipotent
/// group, valid for Re s > 0. The angular direction is a trapezoid at the
/// character band limit, doubled once to confirm.
pub fn jacquet_whittaker_numeric(
    wp: &WhittakerParams,
    g: GroupElement,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    if wp.s.re <= 0.0 {
        return Err(Error::InvalidParameter(
            "the unipotent integral converges only for Re s > 0",
        ));
    }
    let omega_abs = wp.omega.embed().norm();
    let rho_max = 2.0 + 2.0 * matrix_scale(g) + 16.0 / omega_abs;
    let band = 4.0 * PI * omega_abs * rho_max;
    let need = band + 12.0 * band.cbrt() + 2.0 * (wp.d.abs() as f64) + 40.0;
    let mut n = 32usize;
    while (n as f64) < need {
        n *= 2;
    }
    let (mut value, mut err) = jacquet_radial(wp, g, n, spec)?;
    loop {
        if n >= 8192 {
            return Err(Error::ToleranceNotMet {
                requested: spec.abs_tol.max(spec.rel_tol * value.norm()),
                achieved: err,
                partial: value,
            });
        }
        n *= 2;
        let (v2, e2) = jacquet_radial(wp, g, n, spec)?;
        let delta = (v2 - value).norm();
        let tol = spec.abs_tol.max(spec.rel_tol * v2.norm());
        value = v2;
        err = e2 + delta;
        if delta <= 0.5 * tol && err <= tol {
            return Ok(value);
        }
    }
}

/// The Whittaker function on the diagonal torus a = r e^{i phi} in closed
/// form:
///
/// ```text
/// 2 (-1)^d (2 pi)^(2s+|d|+1) / Gamma(2s+|d|+1)
///   * |omega|^(2s+|d|) r^(|d|+1) [omega^2 a]^d K_{|d|-2s}(4 pi |omega| r),
/// ```
///
/// valid at every s by continuation.
pub fn jacquet_whittaker_closed(wp: &WhittakerParams, r: f64, phi: f64) -> Result<Complex64> {
    if !(r > 0.0 && r.is_finite() && phi.is_finite()) {
        return Err(Error::InvalidParameter("torus coordinate needs finite r > 0"));
    }
    let ad = wp.d.abs() as f64;
    let s2 = wp.s * 2.0;
    let gamma_arg = s2 + (ad + 1.0);
    let rg = recip_gamma(gamma_arg);
    if rg.norm() < 1e-280 {
        return Err(Error::InvalidParameter("gamma pole in the closed form"));
    }
    let omega_c = wp.omega.embed();
    let omega_abs = omega_c.norm();
    let sign = if wp.d % 2 == 0 { 1.0 } else { -1.0 };
    let two_pi_pow = ((s2 + (ad + 1.0)) * (2.0 * PI).ln()).exp();
    let omega_pow = ((s2 + ad) * omega_abs.ln()).exp();
    let a = Complex64::from_polar(r, phi);
    let phase_base = omega_c * omega_c * a;
    let phase = (phase_base / phase_base.norm()).powi(wp.d);
    let k = bessel_k(Complex64::new(ad, 0.0) - s2, 4.0 * PI * omega_abs * r)?;
    Ok(two_pi_pow * rg * omega_pow * (2.0 * sign * r.powi(wp.d.abs() + 1)) * phase * k)
}

/// W evaluated at the Weyl translate a w of a torus point, by the
/// unipotent integral.
pub fn whittaker_at_a_w(
    wp: &WhittakerParams,
    a: Complex64,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    if a.norm() == 0.0 {
        return Err(Error::InvalidParameter("torus coordinate must be nonzero"));
    }
    jacquet_whittaker_numeric(wp, torus(a).mul(GroupElement::weyl()), spec)
}

/// Both sides of the kernel identity at the Weyl translate, and their
/// relative residual. The left side is the unipotent integral at a w; the
/// right side pairs the Bessel kernel with the closed torus values.
#[derive(Clone, Copy, Debug)]
pub struct KernelFormulaCheck {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub rel_residual: f64,
}

pub fn kernel_formula_residual(
    wp: &WhittakerParams,
    a: Complex64,
    spec: &QuadratureSpec,
) -> Result<KernelFormulaCheck> {
    if !(wp.s.im == 0.0 && wp.s.re > 0.0 && wp.s.re < 0.5) {
        return Err(Error::InvalidParameter(
            "kernel identity is evaluated at real s in (0, 1/2)",
        ));
    }
    if a.norm() == 0.0 {
        return Err(Error::InvalidParameter("torus coordinate must be nonzero"));
    }
    let lhs = whittaker_at_a_w(wp, a, spec)?;
    let omega_c = wp.omega.embed();
    let f = |b: Complex64| -> Complex64 {
        // The torus factor decays like exp(-4 pi |omega| |b|) while the
        // kernel grows at most like exp(8 pi sqrt(|a b|)), so wherever the
        // torus factor underflows to zero the product is zero; skipping the
        // kernel there keeps the tail free of overflow.
        let w = jacquet_whittaker_closed(wp, b.norm(), b.arg())
            .unwrap_or(Complex64::new(f64::NAN, 0.0));
        if w.re == 0.0 && w.im == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let kernel = bessel_kernel_sd(wp.s, wp.d, omega_c, a * b)
            .unwrap_or(Complex64::new(f64::NAN, 0.0));
        kernel * w
    };
    let rhs: QuadResult = integrate_multiplicative(f, spec)?;
    let denom = lhs.norm().max(rhs.value.norm());
    Ok(KernelFormulaCheck {
        lhs,
        rhs: rhs.value,
        rel_residual: if denom > 0.0 { (lhs - rhs.value).norm() / denom } else { 0.0 },
    })
}

/// The spectral weight G_{s,d}: 1 on the principal axis and
/// Gamma(1+2t)/Gamma(1-2t) on the complementary segment, continuous at
/// t = 0.
pub fn g_constant(p: &SpectralParameter) -> Result<f64> {
    p.validate()?;
    match *p {
        SpectralParameter::Principal { .. } => Ok(1.0),
        SpectralParameter::Complementary { t } => {
            let num = gamma(Complex64::new(1.0 + 2.0 * t, 0.0))?;
            let den = recip_gamma(Complex64::new(1.0 - 2.0 * t, 0.0));
            Ok((num * den).re)
        }
    }
}

/// The discrete-side constant pairing two Fourier coefficients:
///
/// ```text
/// |Lambda|^2 A_2 conj(A_1) / (2 pi (2|d|+1) G_{s,d} |omega_1 omega_2|).
/// ```
pub fn c_gamma_discrete(
    p: &SpectralParameter,
    omega1: DualPoint,
    omega2: DualPoint,
    a_omega1: Complex64,
    a_omega2: Complex64,
    lattice_area: f64,
) -> Result<Complex64> {
    if omega1.is_zero() || omega2.is_zero() {
        return Err(Error::InvalidParameter("coefficient constant needs omega nonzero"));
    }
    let g = g_constant(p)?;
    let d = p.d().abs() as f64;
    let denom = 2.0 * PI * (2.0 * d + 1.0) * g * (omega1.embed() * omega2.embed()).norm();
    Ok(a_omega2 * a_omega1.conj() * (lattice_area * lattice_area / denom))
}

/// Closed form of the K-Bessel product moment
/// int_0^inf x^(rho-1) K_nu(a x) K_mu(a x) dx as a ratio of Gamma values:
///
/// ```text
/// 2^(rho-3) / (a^rho Gamma(rho))
///   * Gamma((rho+nu+mu)/2) Gamma((rho-nu+mu)/2)
///   * Gamma((rho+nu-mu)/2) Gamma((rho-nu-mu)/2),
/// ```
///
/// valid for Re rho > |Re nu| + |Re mu|.
pub fn k_product_moment_closed(
    rho: Complex64,
    nu: Complex64,
    mu: Complex64,
    a: f64,
) -> Result<Complex64> {
    if !(a > 0.0) {
        return Err(Error::InvalidParameter("moment scale must be positive"));
    }
    if rho.re <= nu.re.abs() + mu.re.abs() {
        return Err(Error::InvalidParameter("moment integral diverges at this exponent"));
    }
    let half = Complex64::new(0.5, 0.0);
    let g1 = gamma((rho + nu + mu) * half)?;
    let g2 = gamma((rho - nu + mu) * half)?;
    let g3 = gamma((rho + nu - mu) * half)?;
    let g4 = gamma((rho - nu - mu) * half)?;
    let scale = ((rho - 3.0) * 2.0f64.ln() - rho * a.ln()).exp();
    Ok(scale * recip_gamma(rho) * g1 * g2 * g3 * g4)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::QuadField;
    use num_rational::Ratio;
    use rand::{Rng, SeedableRng};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn half_gaussian() -> DualPoint {
        let field = QuadField::new(1).unwrap();
        DualPoint::new(Ratio::new(1, 2), Ratio::new(0, 1), field).unwrap()
    }

    fn half_one_plus_i() -> DualPoint {
        let field = QuadField::new(1).unwrap();
        DualPoint::new(Ratio::new(1, 2), Ratio::new(1, 1), field).unwrap()
    }

    #[test]
    fn section_on_torus_and_identity() {
        let s = c(0.3, 0.4);
        for d in [-2, 0, 3] {
            let one = phi_sd(s, d, GroupElement::a_r(1.0)).unwrap();
            assert!((one - c(1.0, 0.0)).norm() <= 1e-14);
            let r = 1.7;
            let v = phi_sd(s, d, GroupElement::a_r(r)).unwrap();
            let want = c(r, 0.0).powc(s * 2.0 + 1.0);
            assert!((v - want).norm() <= 1e-13 * want.norm());
        }
    }

    #[test]
    fn section_is_borel_equivariant() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(71);
        let s = c(0.25, -0.6);
        for d in [-2, -1, 0, 1, 3] {
            for _ in 0..6 {
                let u = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                let a = Complex64::from_polar(
                    rng.gen_range(0.3..2.0),
                    rng.gen_range(-3.0..3.0),
                );
                let g = GroupElement::new([
                    [c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)), c(rng.gen_range(-1.0..1.0), 0.4)],
                    [c(0.9, rng.gen_range(-1.0..1.0)), c(rng.gen_range(-1.0..1.0), -0.3)],
                ]);
                if g.det().norm() < 0.05 {
                    continue;
                }
                let lhs = phi_sd(s, d, GroupElement::n(u).mul(GroupElement::a(a)).mul(g)).unwrap();
                let factor = c(a.norm(), 0.0).powc(s * 2.0 + 1.0) * (a / a.norm()).powi(d);
                let rhs = factor * phi_sd(s, d, g).unwrap();
                assert!(
                    (lhs - rhs).norm() <= 1e-12 * rhs.norm().max(1e-8),
                    "d={d} u={u} a={a}: {lhs} vs {rhs}"
                );
            }
        }
    }

    #[test]
    fn unipotent_integral_matches_closed_form() {
        let spec = QuadratureSpec::with_tols(1e-9, 1e-12);
        let cases = [
            (0.3, 0, half_gaussian(), 1.0, 0.0),
            (0.3, 1, half_gaussian(), 0.7, PI / 3.0),
            (0.15, 2, half_one_plus_i(), 0.5, -1.1),
            (0.45, -1, half_gaussian(), 1.2, 2.0),
        ];
        for &(t, d, omega, r, phi) in &cases {
            let wp = WhittakerParams::continuation(t, d, omega).unwrap();
            let a = Complex64::from_polar(r, phi);
            let num = jacquet_whittaker_numeric(&wp, GroupElement::a(a), &spec).unwrap();
            let cl = jacquet_whittaker_closed(&wp, r, phi).unwrap();
            assert!(
                (num - cl).norm() <= 1e-6 * cl.norm().max(1e-10),
                "t={t} d={d} r={r} phi={phi}: {num} vs {cl}"
            );
        }
    }

    #[test]
    fn radial_scaling_tracks_the_closed_form() {
        let spec = QuadratureSpec::with_tols(1e-9, 1e-12);
        let wp = WhittakerParams::continuation(0.3, 1, half_gaussian()).unwrap();
        let (r, phi) = (0.6, 0.9);
        let n1 = jacquet_whittaker_numeric(&wp, GroupElement::a(Complex64::from_polar(r, phi)), &spec).unwrap();
        let n2 = jacquet_whittaker_numeric(&wp, GroupElement::a(Complex64::from_polar(2.0 * r, phi)), &spec).unwrap();
        let c1 = jacquet_whittaker_closed(&wp, r, phi).unwrap();
        let c2 = jacquet_whittaker_closed(&wp, 2.0 * r, phi).unwrap();
        let got = n1 / n2;
        let want = c1 / c2;
        assert!((got - want).norm() <= 1e-5 * want.norm(), "{got} vs {want}");
    }

    #[test]
    fn closed_form_phase_rotation_is_exact() {
        let wp = WhittakerParams::continuation(0.2, 2, half_gaussian()).unwrap();
        let (r, phi, alpha) = (0.8, 0.4, 1.3);
        let base = jacquet_whittaker_closed(&wp, r, phi).unwrap();
        let rotated = jacquet_whittaker_closed(&wp, r, phi + alpha).unwrap();
        let want = base * Complex64::from_polar(1.0, 2.0 * alpha);
        assert!((rotated - want).norm() <= 1e-13 * want.norm(), "{rotated} vs {want}");
    }

    #[test]
    fn closed_form_d_zero_display() {
        // d = 0 reduction: 4 pi (2 pi |omega|)^(2s) / Gamma(2s+1) r K_{-2s}.
        let wp = WhittakerParams::continuation(0.35, 0, half_gaussian()).unwrap();
        let r = 1.4;
        let got = jacquet_whittaker_closed(&wp, r, 0.7).unwrap();
        let s2 = c(0.7, 0.0);
        let kv = bessel_k(-s2, 4.0 * PI * 0.5 * r).unwrap();
        let want = c(4.0 * PI, 0.0) * c(2.0 * PI * 0.5, 0.0).powc(s2) * recip_gamma(s2 + 1.0) * r * kv;
        assert!((got - want).norm() <= 1e-12 * want.norm(), "{got} vs {want}");
    }

    #[test]
    fn weyl_translate_consistency_and_conjugation() {
        let spec = QuadratureSpec::with_tols(1e-8, 1e-11);
        // With the w factor removed the integral is the closed torus value.
        let wp = WhittakerParams::continuation(0.3, 1, half_one_plus_i()).unwrap();
        let a = Complex64::from_polar(0.9, 0.5);
        let direct = jacquet_whittaker_numeric(&wp, GroupElement::a(a), &spec).unwrap();
        let cl = jacquet_whittaker_closed(&wp, 0.9, 0.5).unwrap();
        assert!((direct - cl).norm() <= 1e-6 * cl.norm());
        // Conjugating the integrand flips the character and the v-power:
        // conj W^{s,d}_omega = W^{s,-d}_{-omega} pointwise for real s.
        let lhs = whittaker_at_a_w(&wp, a, &spec).unwrap().conj();
        let flipped = WhittakerParams::continuation(0.3, -1, half_one_plus_i().neg()).unwrap();
        let rhs = whittaker_at_a_w(&flipped, a, &spec).unwrap();
        assert!(
            (lhs - rhs).norm() <= 1e-6 * rhs.norm().max(1e-10),
            "{lhs} vs {rhs}"
        );
    }

    #[test]
    fn kernel_identity_on_the_continuation_grid() {
        let spec = QuadratureSpec::with_tols(1e-8, 1e-11);
        let wp0 = WhittakerParams::continuation(0.25, 0, half_gaussian()).unwrap();
        let r0 = kernel_formula_residual(&wp0, c(1.0, 0.0), &spec).unwrap();
        assert!(r0.rel_residual <= 1e-4, "{r0:?}");
        let wp1 = WhittakerParams::continuation(0.25, 1, half_gaussian()).unwrap();
        let a = Complex64::from_polar(0.8, PI / 4.0);
        let r1 = kernel_formula_residual(&wp1, a, &spec).unwrap();
        assert!(r1.rel_residual <= 1e-4, "{r1:?}");
        // Negative control: a zeroed kernel cannot reproduce the left side.
        assert!(r0.lhs.norm() > 1e-3, "left side should be far from zero");
    }

    #[test]
    fn numeric_path_rejects_decay_free_parameters() {
        let p = SpectralParameter::Principal { t: 1.0, d: 1 };
        let wp = WhittakerParams::unitary(&p, half_gaussian()).unwrap();
        let spec = QuadratureSpec::default();
        assert!(matches!(
            jacquet_whittaker_numeric(&wp, GroupElement::a_r(1.0), &spec),
            Err(Error::InvalidParameter(_))
        ));
        // The closed form continues to the principal axis without trouble.
        assert!(jacquet_whittaker_closed(&wp, 1.0, 0.0).is_ok());
    }

    #[test]
    fn spectral_weight_values() {
        assert_eq!(g_constant(&SpectralParameter::Principal { t: 2.3, d: -4 }).unwrap(), 1.0);
        let half = g_constant(&SpectralParameter::Complementary { t: 0.25 }).unwrap();
        assert!((half - 0.5).abs() <= 1e-14, "{half}");
        let near0 = g_constant(&SpectralParameter::Complementary { t: 1e-7 }).unwrap();
        assert!((near0 - 1.0).abs() <= 1e-5, "{near0}");
    }

    #[test]
    fn coefficient_constant_formula() {
        let p = SpectralParameter::Principal { t: 1.0, d: 1 };
        let w1 = half_gaussian();
        let w2 = half_one_plus_i();
        let (a1, a2) = (c(0.4, -0.2), c(1.1, 0.6));
        let area = 2.0;
        let got = c_gamma_discrete(&p, w1, w2, a1, a2, area).unwrap();
        let want = a2 * a1.conj() * area * area
            / (2.0 * PI * 3.0 * 1.0 * (w1.embed() * w2.embed()).norm());
        assert!((got - want).norm() <= 1e-14 * want.norm());
    }

    #[test]
    fn k_moment_matches_quadrature() {
        // Reference values: the Gamma closed form, checked here against
        // direct quadrature of the product.
        let spec = QuadratureSpec::with_tols(1e-12, 1e-15);
        let cases = [
            (c(4.0, 0.0), c(1.0, -0.6), c(1.0, 0.6), 2.0 * PI),
            (c(3.0, 0.0), c(0.25, 1.0), c(0.25, -1.0), 4.0 * PI),
            (c(2.5, 0.5), c(0.5, 0.3), c(0.1, -0.8), 3.0),
        ];
        for &(rho, nu, mu, a) in &cases {
            let closed = k_product_moment_closed(rho, nu, mu, a).unwrap();
            let f = |x: f64| -> Complex64 {
                let k1 = bessel_k(nu, a * x).unwrap();
                let k2 = bessel_k(mu, a * x).unwrap();
                c(x, 0.0).powc(rho - 1.0) * k1 * k2
            };
            let q = integrate_interval(f, 1e-7, f64::INFINITY, &spec).unwrap();
            assert!(
                (q.value - closed).norm() <= 1e-8 * closed.norm(),
                "rho={rho} nu={nu} mu={mu}: {} vs {closed}",
                q.value
            );
        }
    }

    #[test]
    fn parameter_validation() {
        let field = QuadField::new(1).unwrap();
        let zero = DualPoint::zero(field);
        assert!(WhittakerParams::continuation(0.3, 1, zero).is_err());
        assert!(WhittakerParams::continuation(0.5, 1, half_gaussian()).is_err());
        assert!(WhittakerParams::continuation(0.0, 1, half_gaussian()).is_err());
        let p = SpectralParameter::Principal { t: 1.0, d: 0 };
        assert!(WhittakerParams::unitary(&p, zero).is_err());
        let wp = WhittakerParams::continuation(0.3, 2, half_gaussian()).unwrap();
        assert!(wp.is_continuation());
        let wp0 = WhittakerParams::continuation(0.3, 0, half_gaussian()).unwrap();
        assert!(!wp0.is_continuation());
        assert!(jacquet_whittaker_closed(&wp, 0.0, 0.0).is_err());
    }
}
