//! Assembly of the trace formula: the weight family, its transforms, and
//! the geometric, discrete, and continuous sides.
//!
//! The weight is built from two pieces with closed-form transforms:
//!
//! * a Gaussian `eta` on C (amplitude, center, width), whose Fourier
//!   transform against the character `psi_2` is again a Gaussian, and
//! * an annular bump `nu` on C*, a C-infinity radial plateau supported on
//!   [rho_1, rho_2] times a trigonometric polynomial in the angle.
//!
//! From these the seed function on the group is supported on the open
//! Bruhat cell, `psi_1(u_1) eta(c u_2) nu(c)` in the n(u1) w a(c) n(u2)
//! chart, and vanishes on the Borel subgroup. Pairing the seed against a
//! character of the opposite unipotent produces the Kloosterman-Jacquet
//! distribution `nu(c) eta_hat(1/c) / |c|^2`; both that closed form and the
//! defining unipotent integral are implemented so they can be checked
//! against each other.
//!
//! The weighted sum of Kloosterman sums appears in two normalizations that
//! differ by the reweighting `F(z) = A(z / omega_1 omega_2) |z / omega_1
//! omega_2|` with `A(z) = nu(1/z) eta_hat(z)`; the support of `nu` makes
//! both sums finite. On the spectral side, each term carries the Bessel
//! transform
//!
//! ```text
//! F_hat(s, d) = 1/sin(2 pi s)
//!               * integral of F(z) (J_{s,2d} - J_{-s,-2d})(4 pi sqrt z) d*z,
//! ```
//!
//! evaluated over the support annulus, with the removable s = 0 point
//! handled by the kernel's interpolation patch. The discrete side ingests
//! externally supplied Fourier coefficients (it never computes spectra);
//! the continuous side combines smoothed zeta truncations on a
//! Gauss-Legendre grid in t and is always labeled experimental.

use crate::group::{AdditiveCharacter, GroupElement, MultiplicativeCharacter};
use crate::kloosterman::{enumerate_moduli, kloosterman_sum_fast, zeta_series_smoothed};
use crate::quad::{
    gauss_legendre, integrate_complex_plane, integrate_multiplicative, QuadResult, QuadratureSpec,
};
use crate::rings::{AlgebraicInteger, DualPoint, QuadField};
use crate::specfun::{bessel_kernel_sd, SpectralParameter};
use crate::whittaker::g_constant;
use crate::{Complex64, Error, Result};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)] // float intrinsics come from the trait in no_std builds
use num_traits::Float;

/// The Gaussian family `amplitude * exp(-pi |u - center|^2 / width^2)`.
///
/// Fixing the Schwartz factor to this family keeps every transform in the
/// module in closed form while the amplitude, center, and width still
/// exercise linearity, modulation, and scaling.
#[derive(Clone, Copy, Debug)]
pub struct GaussianEta {
    pub amplitude: f64,
    pub center: Complex64,
    pub width: f64,
}

impl GaussianEta {
    pub fn new(amplitude: f64, center: Complex64, width: f64) -> Result<GaussianEta> {
        if !(width > 0.0) || !width.is_finite() || !amplitude.is_finite() || !center.is_finite() {
            return Err(Error::InvalidParameter("gaussian needs finite data and width > 0"));
        }
        Ok(GaussianEta { amplitude, center, width })
    }

    /// `exp(-pi |u|^2)`, the member with mass exactly 2 under the doubled
    /// measure.
    pub fn standard() -> GaussianEta {
        GaussianEta { amplitude: 1.0, center: Complex64::new(0.0, 0.0), width: 1.0 }
    }

    pub fn eval(&self, u: Complex64) -> f64 {
        let t = (u - self.center).norm_sqr() / (self.width * self.width);
        self.amplitude * (-PI * t).exp()
    }
}

/// C-infinity transition that is exactly 0 for x <= 0 and exactly 1 for
/// x >= 1.
fn smooth_step(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        let a = (-1.0 / x).exp();
        let b = (-1.0 / (1.0 - x)).exp();
        a / (a + b)
    }
}

/// A smooth bump on C*: a radial plateau supported exactly on
/// [rho_1, rho_2], times a trigonometric polynomial in the angle.
///
/// The radial factor rises from 0 to 1 across the first quarter of the
/// annulus width and falls back across the last quarter, so it equals 1 on
/// the middle half. A freshly built bump carries the single angular mode
/// k = 0 with coefficient 1.
#[derive(Clone, Debug)]
pub struct AnnularBump {
    rho1: f64,
    rho2: f64,
    modes: Vec<(i32, Complex64)>,
}

impl AnnularBump {
    pub fn new(rho1: f64, rho2: f64) -> Result<AnnularBump> {
        if !(rho1 > 0.0 && rho2 > rho1) || !rho2.is_finite() {
            return Err(Error::InvalidParameter("bump needs 0 < rho1 < rho2 < infinity"));
        }
        Ok(AnnularBump {
            rho1,
            rho2,
            modes: alloc::vec![(0, Complex64::new(1.0, 0.0))],
        })
    }

    pub fn with_modes(mut self, modes: Vec<(i32, Complex64)>) -> AnnularBump {
        self.modes = modes;
        self
    }

    pub fn support(&self) -> (f64, f64) {
        (self.rho1, self.rho2)
    }

    pub fn radial(&self, rho: f64) -> f64 {
        let w = 0.25 * (self.rho2 - self.rho1);
        smooth_step((rho - self.rho1) / w) * smooth_step((self.rho2 - rho) / w)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let r = self.radial(z.norm());
        if r == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let th = z.arg();
        let mut angular = Complex64::new(0.0, 0.0);
        for &(k, coeff) in &self.modes {
            angular += coeff * Complex64::from_polar(1.0, k as f64 * th);
        }
        angular * r
    }
}

/// The full weight data: the Gaussian, the bump, and the two characters
/// the formula is twisted by.
#[derive(Clone, Debug)]
pub struct WeightSpec {
    pub eta: GaussianEta,
    pub nu: AnnularBump,
    omega1: DualPoint,
    omega2: DualPoint,
}

impl WeightSpec {
    pub fn new(
        eta: GaussianEta,
        nu: AnnularBump,
        omega1: DualPoint,
        omega2: DualPoint,
    ) -> Result<WeightSpec> {
        if omega1.is_zero() || omega2.is_zero() {
            return Err(Error::InvalidParameter("weight needs nonzero characters"));
        }
        if omega1.field() != omega2.field() {
            return Err(Error::InvalidParameter("characters must share a field"));
        }
        Ok(WeightSpec { eta, nu, omega1, omega2 })
    }

    pub fn omega1(&self) -> DualPoint {
        self.omega1
    }

    pub fn omega2(&self) -> DualPoint {
        self.omega2
    }

    pub fn field(&self) -> QuadField {
        self.omega1.field()
    }

    /// The ratio kappa = omega_2 / omega_1, so that psi_2(z) = psi_1(kappa z).
    pub fn kappa(&self) -> Complex64 {
        self.omega2.embed() / self.omega1.embed()
    }

    pub fn omega_product(&self) -> Complex64 {
        self.omega1.embed() * self.omega2.embed()
    }

    /// Radii of the annulus carrying the reweighted function `F`.
    pub fn f_support(&self) -> (f64, f64) {
        let m = self.omega_product().norm();
        let (rho1, rho2) = self.nu.support();
        (m / rho2, m / rho1)
    }
}

/// Fourier transform of the Gaussian against psi_2, under the doubled
/// measure:
///
/// ```text
/// eta_hat(z) = integral of eta(u) psi_2^-1(u z) du
///            = 2 A width^2 psi_2^-1(center z) exp(-4 pi |omega_2 width z|^2).
/// ```
///
/// At z = 0 this is the total mass, 2 for the standard Gaussian.
pub fn eta_hat(ws: &WeightSpec, z: Complex64) -> Complex64 {
    let psi2 = AdditiveCharacter::new(ws.omega2);
    let s = ws.eta.width;
    let decay = (-4.0 * PI * (ws.omega2.embed() * z).norm_sqr() * s * s).exp();
    psi2.eval_inverse(ws.eta.center * z) * (2.0 * ws.eta.amplitude * s * s * decay)
}

/// The same transform by two-dimensional quadrature, as an oracle for the
/// closed form.
pub fn eta_hat_quadrature(ws: &WeightSpec, z: Complex64, spec: &QuadratureSpec) -> Result<QuadResult> {
    let psi2 = AdditiveCharacter::new(ws.omega2);
    integrate_complex_plane(|u| psi2.eval_inverse(u * z) * ws.eta.eval(u), spec)
}

/// The seed function on the group: `psi_1(u_1) eta(c u_2) nu(c)` through
/// the Bruhat coordinates of g, and 0 when g has no such coordinates
/// (elements of the Borel subgroup, in particular the identity).
pub fn f_eta_nu(ws: &WeightSpec, g: GroupElement) -> Result<Complex64> {
    let bc = match g.bruhat_decompose() {
        Ok(bc) => bc,
        Err(Error::BorelElement) => return Ok(Complex64::new(0.0, 0.0)),
        Err(e) => return Err(e),
    };
    let psi1 = AdditiveCharacter::new(ws.omega1);
    Ok(psi1.eval(bc.u1) * ws.nu.eval(bc.c) * ws.eta.eval(bc.c * bc.u2))
}

/// The Kloosterman-Jacquet distribution of the seed at modulus c, in
/// closed form: `nu(c) eta_hat(1/c) / |c|^2`.
pub fn kloosterman_jacquet(ws: &WeightSpec, c: Complex64) -> Result<Complex64> {
    if c.norm() == 0.0 {
        return Err(Error::InvalidParameter("distribution needs c nonzero"));
    }
    Ok(ws.nu.eval(c) * eta_hat(ws, c.inv()) / c.norm_sqr())
}

/// The defining unipotent integral of the same distribution,
///
/// ```text
/// integral over u in C of  f_eta_nu(w a(c) n(u)) psi_2^-1(u) du,
/// ```
///
/// evaluated through the actual group product and Bruhat decomposition so
/// that it is an independent check on the closed form.
pub fn kloosterman_jacquet_quadrature(
    ws: &WeightSpec,
    c: Complex64,
    spec: &QuadratureSpec,
) -> Result<QuadResult> {
    if c.norm() == 0.0 {
        return Err(Error::InvalidParameter("distribution needs c nonzero"));
    }
    let base = GroupElement::weyl().mul(GroupElement::a(c));
    let psi2 = AdditiveCharacter::new(ws.omega2);
    let r = integrate_complex_plane(
        |u| {
            let f = f_eta_nu(ws, base.mul(GroupElement::n(u)))
                .unwrap_or(Complex64::new(f64::NAN, 0.0));
            f * psi2.eval_inverse(u)
        },
        spec,
    )?;
    if r.value.re.is_nan() || r.value.im.is_nan() {
        return Err(Error::ConvergenceFailure("seed evaluation failed inside the integral"));
    }
    Ok(r)
}

/// The weight in its first normalization, `A(z) = nu(1/z) eta_hat(z)`.
pub fn weight_a(ws: &WeightSpec, z: Complex64) -> Complex64 {
    debug_assert!(z.norm() > 0.0);
    ws.nu.eval(z.inv()) * eta_hat(ws, z)
}

/// The reweighted function `F(z) = A(z / omega_1 omega_2) |z / omega_1
/// omega_2|` whose Bessel transform drives the spectral side.
pub fn weight_f(ws: &WeightSpec, z: Complex64) -> Complex64 {
    let y = z / ws.omega_product();
    weight_a(ws, y) * y.norm()
}

/// Bessel transform of a compactly supported weight at the character data
/// (s, d):
///
/// ```text
/// F_hat(s, d) = 1/sin(2 pi s)
///               * integral of F(z) (J_{s,2d} - J_{-s,-2d})(4 pi sqrt z) d*z
/// ```
///
/// over the support annulus. The integrand is assembled from the Bessel
/// kernel, which carries the removable s = 0 point, so the transform is
/// continuous across the principal/complementary junction.
pub fn bessel_transform_sd<W: Fn(Complex64) -> Complex64>(
    weight: W,
    support: (f64, f64),
    s: Complex64,
    d: i32,
    spec: &QuadratureSpec,
) -> Result<QuadResult> {
    let (lo, hi) = support;
    if !(lo > 0.0 && hi > lo) || !hi.is_finite() {
        return Err(Error::InvalidParameter("transform needs a bounded support annulus"));
    }
    let one = Complex64::new(1.0, 0.0);
    let inner = spec.with_radial(lo, hi);
    let r = integrate_multiplicative(
        |z| {
            // bessel_kernel_sd carries the extra factor 2 pi^2 |z| over the
            // bare kernel difference; divide it back out.
            let k = bessel_kernel_sd(s, d, one, z).unwrap_or(Complex64::new(f64::NAN, 0.0));
            weight(z) * k / (2.0 * PI * PI * z.norm())
        },
        &inner,
    )?;
    if r.value.re.is_nan() || r.value.im.is_nan() {
        return Err(Error::ConvergenceFailure("bessel kernel failed inside the transform"));
    }
    Ok(r)
}

/// The transform at a point of the unitary dual.
pub fn bessel_transform<W: Fn(Complex64) -> Complex64>(
    weight: W,
    support: (f64, f64),
    p: &SpectralParameter,
    spec: &QuadratureSpec,
) -> Result<QuadResult> {
    p.validate()?;
    bessel_transform_sd(weight, support, p.s(), p.d(), spec)
}

/// `F_hat(s, d)` for the weight attached to a [`WeightSpec`].
pub fn weight_transform(
    ws: &WeightSpec,
    s: Complex64,
    d: i32,
    spec: &QuadratureSpec,
) -> Result<QuadResult> {
    bessel_transform_sd(|z| weight_f(ws, z), ws.f_support(), s, d, spec)
}

/// Whether the characters of two dual points agree up to the action of
/// squared units, the stabilizer action on translations at the cusp.
pub fn same_character_orbit(omega1: DualPoint, omega2: DualPoint) -> bool {
    if omega1.field() != omega2.field() {
        return false;
    }
    omega1.field().units().iter().any(|&u| omega1.mul_ring(u * u) == omega2)
}

/// One modulus of a geometric sum.
#[derive(Clone, Debug)]
pub struct GeometricTerm {
    pub c_root: AlgebraicInteger,
    pub modulus: Complex64,
    pub kloosterman: Complex64,
    pub weight: Complex64,
    pub value: Complex64,
}

/// A finished geometric sum with its per-modulus table.
#[derive(Clone, Debug)]
pub struct GeometricSide {
    pub value: Complex64,
    /// The identity-motion term of the first normalization; identically 0
    /// because the seed vanishes on the Borel subgroup.
    pub delta_term: Complex64,
    pub terms: Vec<GeometricTerm>,
}

/// Moduli whose norm lands in the support of nu. The enumeration bound
/// carries one extra unit of slack; the support test is what truncates.
fn geometric_moduli(ws: &WeightSpec) -> Vec<AlgebraicInteger> {
    let (rho1, rho2) = ws.nu.support();
    let bound = rho2.floor() as i64 + 1;
    enumerate_moduli(ws.field(), bound)
        .into_iter()
        .filter(|c| {
            let n = c.norm() as f64;
            n >= rho1 && n <= rho2
        })
        .collect()
}

/// The geometric sum in the reweighted normalization,
/// `sum over c of Kl(c; psi_1, psi_2) / |c| * F(omega_1 omega_2 / c)`.
///
/// The support of F confines |c| to the support of nu, so the sum is
/// finite and enlarging the enumeration changes nothing.
pub fn geometric_side_main(ws: &WeightSpec) -> Result<GeometricSide> {
    let product = ws.omega_product();
    let mut terms = Vec::new();
    let mut value = Complex64::new(0.0, 0.0);
    for c_root in geometric_moduli(ws) {
        let rec = kloosterman_sum_fast(c_root, ws.omega1, ws.omega2)?;
        let weight = weight_f(ws, product / rec.modulus);
        let term = rec.value * weight / rec.modulus.norm();
        value += term;
        terms.push(GeometricTerm {
            c_root,
            modulus: rec.modulus,
            kloosterman: rec.value,
            weight,
            value: term,
        });
    }
    Ok(GeometricSide { value, delta_term: Complex64::new(0.0, 0.0), terms })
}

/// The geometric sum in the first normalization,
/// `sum over c of Kl(c; psi_1, psi_2) / |c|^2 * A(1/c)`, together with the
/// dropped identity-motion term `delta_{psi_1, psi_2} |Lambda| f(1)`.
///
/// The delta term is computed, not assumed: the seed is evaluated at the
/// identity through its Bruhat case split, which yields exactly 0.
pub fn geometric_side_first(ws: &WeightSpec) -> Result<GeometricSide> {
    let mut terms = Vec::new();
    let mut value = Complex64::new(0.0, 0.0);
    for c_root in geometric_moduli(ws) {
        let rec = kloosterman_sum_fast(c_root, ws.omega1, ws.omega2)?;
        let weight = weight_a(ws, rec.modulus.inv());
        let term = rec.value * weight / rec.modulus.norm_sqr();
        value += term;
        terms.push(GeometricTerm {
            c_root,
            modulus: rec.modulus,
            kloosterman: rec.value,
            weight,
            value: term,
        });
    }
    let delta_term = if same_character_orbit(ws.omega1, ws.omega2) {
        let seed_at_identity = f_eta_nu(ws, GroupElement::n(Complex64::new(0.0, 0.0)))?;
        seed_at_identity * ws.field().lattice_area()
    } else {
        Complex64::new(0.0, 0.0)
    };
    debug_assert_eq!(delta_term.norm(), 0.0);
    Ok(GeometricSide { value, delta_term, terms })
}

/// Externally supplied spectral data: a parameter point and the
/// renormalized Fourier coefficients that are known at it.
///
/// Coefficients are ingested, never computed; a record that lacks the
/// coefficient at one of the weight's characters is skipped with a
/// diagnostic, which is the normal state of affairs for published data.
#[derive(Clone, Debug)]
pub struct SpectralDatum {
    pub p: SpectralParameter,
    pub coefficients: Vec<(DualPoint, Complex64)>,
    pub provenance: String,
}

impl SpectralDatum {
    pub fn coefficient(&self, omega: DualPoint) -> Option<Complex64> {
        self.coefficients.iter().find(|(w, _)| *w == omega).map(|&(_, a)| a)
    }
}

/// One datum's contribution to the discrete side.
#[derive(Clone, Debug)]
pub struct DiscreteTerm {
    pub p: SpectralParameter,
    pub a_omega1: Complex64,
    pub a_omega2: Complex64,
    pub f_hat: Complex64,
    pub value: Complex64,
}

#[derive(Clone, Debug, Default)]
pub struct DiscreteSide {
    pub value: Complex64,
    pub terms: Vec<DiscreteTerm>,
    pub skipped: Vec<String>,
}

/// The discrete side over the supplied data:
///
/// ```text
/// pi |Lambda|^2 sum over data of
///     A_omega2 conj(A_omega1) / ((2|d|+1) G_{s,d}) * F_hat(s, d).
/// ```
pub fn discrete_side(
    ws: &WeightSpec,
    data: &[SpectralDatum],
    spec: &QuadratureSpec,
) -> Result<DiscreteSide> {
    let area = ws.field().lattice_area();
    let mut side = DiscreteSide::default();
    for (index, datum) in data.iter().enumerate() {
        datum.p.validate()?;
        let (a1, a2) = match (datum.coefficient(ws.omega1), datum.coefficient(ws.omega2)) {
            (Some(a1), Some(a2)) => (a1, a2),
            _ => {
                side.skipped.push(format!(
                    "datum {} ({}): missing a coefficient at omega1 or omega2",
                    index, datum.provenance
                ));
                continue;
            }
        };
        let g = g_constant(&datum.p)?;
        let f_hat = weight_transform(ws, datum.p.s(), datum.p.d(), spec)?.value;
        let denom = (2 * datum.p.d().abs() + 1) as f64 * g;
        let value = a2 * a1.conj() * f_hat * (PI * area * area / denom);
        side.value += value;
        side.terms.push(DiscreteTerm { p: datum.p, a_omega1: a1, a_omega2: a2, f_hat, value });
    }
    Ok(side)
}

/// Truncation knobs for the continuous side.
#[derive(Clone, Copy, Debug)]
pub struct ContinuousSettings {
    /// Largest |d| kept; only multiples of the field's unit action order
    /// contribute, and the grid visits exactly those.
    pub d_max: i32,
    /// Half-width of the Gauss-Legendre window in t.
    pub t_max: f64,
    /// Number of Gauss-Legendre nodes; 0 requests the empty grid.
    pub t_nodes: usize,
    /// Norm bound handed to the smoothed zeta truncations.
    pub zeta_norm_bound: i64,
}

impl ContinuousSettings {
    pub fn default_for(field: QuadField) -> ContinuousSettings {
        ContinuousSettings {
            d_max: 4 * field.unit_action_order() as i32,
            t_max: 2.0,
            t_nodes: 8,
            zeta_norm_bound: 400,
        }
    }

    pub fn empty() -> ContinuousSettings {
        ContinuousSettings { d_max: 0, t_max: 0.0, t_nodes: 0, zeta_norm_bound: 0 }
    }
}

/// The t-integral at one angular frequency d.
#[derive(Clone, Copy, Debug)]
pub struct ContinuousBand {
    pub d: i32,
    pub value: Complex64,
}

#[derive(Clone, Debug)]
pub struct ContinuousSide {
    pub value: Complex64,
    pub bands: Vec<ContinuousBand>,
    /// Always true: the zeta factors are smoothed truncations without an
    /// error certificate on the critical line.
    pub experimental: bool,
    /// |outermost band| / max |band|, a decay diagnostic for d_max.
    pub band_tail_ratio: f64,
}

/// The continuous side on a finite grid:
///
/// ```text
/// 1/(4 m |Lambda|) * sum over d in mZ, |d| <= d_max, of
///     integral over [-t_max, t_max] of
///         mu_{it,d}(kappa) Z(omega_2) conj(Z(omega_1)) F_hat(it, d) dt,
/// ```
///
/// with Z the smoothed zeta truncation and the t-integral evaluated on the
/// Gauss-Legendre grid. Frequencies d outside mZ are killed by the unit
/// average inside Z, so the grid skips them.
pub fn continuous_side(
    ws: &WeightSpec,
    settings: &ContinuousSettings,
    spec: &QuadratureSpec,
) -> Result<ContinuousSide> {
    let field = ws.field();
    let m = field.unit_action_order() as i32;
    let mut side = ContinuousSide {
        value: Complex64::new(0.0, 0.0),
        bands: Vec::new(),
        experimental: true,
        band_tail_ratio: 0.0,
    };
    if settings.t_nodes == 0 || settings.d_max < 0 {
        return Ok(side);
    }
    let nodes = gauss_legendre(settings.t_nodes);
    let kappa = ws.kappa();
    let k_max = settings.d_max / m;
    for k in -k_max..=k_max {
        let d = k * m;
        let mut band = Complex64::new(0.0, 0.0);
        for &(x, w) in &nodes {
            let t = x * settings.t_max;
            let s = Complex64::new(0.0, t);
            let mu = MultiplicativeCharacter::new(s, d);
            let z2 = zeta_series_smoothed(mu, ws.omega2, settings.zeta_norm_bound)?;
            let z1 = zeta_series_smoothed(mu, ws.omega1, settings.zeta_norm_bound)?;
            let f_hat = weight_transform(ws, s, d, spec)?.value;
            band += mu.eval(kappa)
                * z2.extrapolated
                * z1.extrapolated.conj()
                * f_hat
                * (w * settings.t_max);
        }
        side.bands.push(ContinuousBand { d, value: band });
        side.value += band;
    }
    side.value /= 4.0 * m as f64 * field.lattice_area();
    let peak = side.bands.iter().map(|b| b.value.norm()).fold(0.0, f64::max);
    if peak > 0.0 {
        let edge = side.bands.first().map(|b| b.value.norm()).unwrap_or(0.0);
        let edge2 = side.bands.last().map(|b| b.value.norm()).unwrap_or(0.0);
        side.band_tail_ratio = edge.max(edge2) / peak;
    }
    Ok(side)
}

/// Knobs for a full report.
#[derive(Clone, Copy, Debug)]
pub struct TraceSettings {
    pub continuous: ContinuousSettings,
    pub quadrature: QuadratureSpec,
}

impl TraceSettings {
    pub fn default_for(field: QuadField) -> TraceSettings {
        TraceSettings {
            continuous: ContinuousSettings::default_for(field),
            quadrature: QuadratureSpec::default(),
        }
    }

    /// Geometric side only: empty continuous grid.
    pub fn geometric_only() -> TraceSettings {
        TraceSettings {
            continuous: ContinuousSettings::empty(),
            quadrature: QuadratureSpec::default(),
        }
    }
}

/// Everything the assembly measured besides the three headline numbers.
#[derive(Clone, Debug)]
pub struct TraceDiagnostics {
    /// The geometric sum in the first normalization.
    pub geometric_first: Complex64,
    /// |main - first|; pure reweighting algebra over shared Kloosterman
    /// values, so this should sit at roundoff.
    pub reweighting_delta: f64,
    pub delta_term: Complex64,
    pub geometric_terms: Vec<GeometricTerm>,
    pub discrete_terms: Vec<DiscreteTerm>,
    pub discrete_skipped: Vec<String>,
    pub continuous_bands: Vec<ContinuousBand>,
    pub continuous_experimental: bool,
    pub band_tail_ratio: f64,
    pub data_count: usize,
    pub note: &'static str,
}

/// The three sides and their difference.
#[derive(Clone, Debug)]
pub struct TraceReport {
    pub geometric: Complex64,
    pub discrete: Complex64,
    pub continuous: Complex64,
    /// geometric - discrete - continuous, exactly as computed.
    pub residual: Complex64,
    pub diagnostics: TraceDiagnostics,
}

const RESIDUAL_NOTE: &str = "the residual tracks the spectral data's incompleteness; \
it is not expected to vanish unless the supplied coefficients exhaust the spectrum \
weighted by the transform";

/// Assembles the geometric, discrete, and continuous sides and their
/// residual. The residual is bookkeeping, not a verdict: with partial
/// spectral data (the normal state) it simply measures what is missing.
pub fn trace_report(
    ws: &WeightSpec,
    data: &[SpectralDatum],
    settings: &TraceSettings,
) -> Result<TraceReport> {
    let main = geometric_side_main(ws)?;
    let first = geometric_side_first(ws)?;
    let discrete = discrete_side(ws, data, &settings.quadrature)?;
    let continuous = continuous_side(ws, &settings.continuous, &settings.quadrature)?;
    let residual = main.value - discrete.value - continuous.value;
    Ok(TraceReport {
        geometric: main.value,
        discrete: discrete.value,
        continuous: continuous.value,
        residual,
        diagnostics: TraceDiagnostics {
            geometric_first: first.value,
            reweighting_delta: (main.value - first.value).norm(),
            delta_term: first.delta_term,
            geometric_terms: main.terms,
            discrete_terms: discrete.terms,
            discrete_skipped: discrete.skipped,
            continuous_bands: continuous.bands,
            continuous_experimental: continuous.experimental,
            band_tail_ratio: continuous.band_tail_ratio,
            data_count: data.len(),
            note: RESIDUAL_NOTE,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kloosterman::zeta_series_smoothed;
    use num_rational::Ratio;
    use num_traits::Zero;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn zi() -> QuadField {
        QuadField::new(1).unwrap()
    }

    fn half(field: QuadField) -> DualPoint {
        DualPoint::new(Ratio::new(1, 2), Ratio::zero(), field).unwrap()
    }

    fn half_i() -> DualPoint {
        DualPoint::new(Ratio::zero(), Ratio::new(1, 2), zi()).unwrap()
    }

    fn standard_ws() -> WeightSpec {
        WeightSpec::new(
            GaussianEta::standard(),
            AnnularBump::new(0.8, 4.5).unwrap(),
            half(zi()),
            half(zi()),
        )
        .unwrap()
    }

    fn quad_spec() -> QuadratureSpec {
        QuadratureSpec::with_tols(1e-11, 1e-13)
    }

    #[test]
    fn gaussian_transform_mass_and_linearity() {
        let ws = standard_ws();
        // Mass under the doubled measure.
        assert_eq!(eta_hat(&ws, c(0.0, 0.0)), c(2.0, 0.0));
        // At z = 1 the closed form collapses to 2 exp(-pi) for omega2 = 1/2.
        let v = eta_hat(&ws, c(1.0, 0.0));
        assert!((v - c(2.0 * (-PI).exp(), 0.0)).norm() < 1e-15);
        // Linearity in eta through the amplitude.
        let eta2 = GaussianEta::new(2.6, c(0.2, 0.1), 0.8).unwrap();
        let eta1 = GaussianEta::new(1.3, c(0.2, 0.1), 0.8).unwrap();
        let ws2 = WeightSpec::new(eta2, ws.nu.clone(), ws.omega1(), ws.omega2()).unwrap();
        let ws1 = WeightSpec::new(eta1, ws.nu.clone(), ws.omega1(), ws.omega2()).unwrap();
        let z = c(0.7, 0.3);
        assert!((eta_hat(&ws2, z) - eta_hat(&ws1, z) * 2.0).norm() < 1e-16);
    }

    #[test]
    fn gaussian_transform_matches_quadrature() {
        let spec = quad_spec();
        let ws = standard_ws();
        let q = eta_hat_quadrature(&ws, c(1.0, 0.0), &spec).unwrap();
        assert!((q.value - eta_hat(&ws, c(1.0, 0.0))).norm() < 1e-8);

        // A shifted, scaled, modulated member: every descriptor field active.
        let eta = GaussianEta::new(1.3, c(0.2, 0.1), 0.8).unwrap();
        let ws = WeightSpec::new(eta, ws.nu.clone(), half(zi()), half_i()).unwrap();
        for z in [c(0.0, 0.0), c(0.7, 0.3), c(-1.1, 0.4)] {
            let q = eta_hat_quadrature(&ws, z, &spec).unwrap();
            let closed = eta_hat(&ws, z);
            assert!(
                (q.value - closed).norm() < 1e-8,
                "eta_hat mismatch at {z}: {} vs {closed}",
                q.value
            );
        }
        // Mass of the general member: 2 A width^2.
        assert!((eta_hat(&ws, c(0.0, 0.0)) - c(2.0 * 1.3 * 0.64, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn seed_lives_on_the_big_cell() {
        let ws = standard_ws();
        let id = GroupElement::n(c(0.0, 0.0));
        assert_eq!(f_eta_nu(&ws, id).unwrap(), c(0.0, 0.0));
        let borel = GroupElement::n(c(0.4, -0.2)).mul(GroupElement::a(c(1.3, 0.0)));
        assert_eq!(f_eta_nu(&ws, borel).unwrap(), c(0.0, 0.0));

        // On the big cell the value is the advertised product of factors.
        let (x, cc, u) = (c(0.3, -0.5), c(1.1, 0.4), c(0.2, 0.6));
        let g = GroupElement::n(x)
            .mul(GroupElement::weyl())
            .mul(GroupElement::a(cc))
            .mul(GroupElement::n(u));
        let psi1 = AdditiveCharacter::new(ws.omega1());
        let direct = psi1.eval(x) * ws.nu.eval(cc) * ws.eta.eval(cc * u);
        let via_decomposition = f_eta_nu(&ws, g).unwrap();
        assert!((via_decomposition - direct).norm() < 1e-12 * direct.norm());
        assert!(direct.norm() > 0.0);

        // Left equivariance under the unipotent.
        let shift = c(-0.7, 0.25);
        let lhs = f_eta_nu(&ws, GroupElement::n(shift).mul(g)).unwrap();
        let rhs = psi1.eval(shift) * via_decomposition;
        assert!((lhs - rhs).norm() < 1e-12 * rhs.norm());

        // kappa really intertwines the two characters.
        let psi2 = AdditiveCharacter::new(ws.omega2());
        let z = c(0.37, -1.21);
        assert!((psi2.eval(z) - psi1.eval(ws.kappa() * z)).norm() < 1e-12);
    }

    #[test]
    fn distribution_closed_form_matches_defining_integral() {
        let ws = standard_ws();
        let spec = quad_spec();
        for cc in [c(1.0, 0.0), Complex64::from_polar(1.3, PI / 6.0)] {
            let closed = kloosterman_jacquet(&ws, cc).unwrap();
            let q = kloosterman_jacquet_quadrature(&ws, cc, &spec).unwrap();
            assert!(
                (q.value - closed).norm() < 1e-8,
                "distribution mismatch at c = {cc}: {} vs {closed}",
                q.value
            );
            assert!(closed.norm() > 1e-4, "test point should be inside the support");
        }
        // Outside the support of nu both sides vanish.
        let outside = c(6.0, 0.0);
        assert_eq!(kloosterman_jacquet(&ws, outside).unwrap(), c(0.0, 0.0));
        let q = kloosterman_jacquet_quadrature(&ws, outside, &spec).unwrap();
        assert!(q.value.norm() < 1e-10);
    }

    #[test]
    fn transform_is_linear_and_real_for_real_radial_weights() {
        // Keep the annulus small: the certificate floor is the J-series
        // cancellation noise exp(4 pi sqrt(rho2)) * eps.
        let spec = QuadratureSpec::with_tols(1e-11, 1e-13);
        let support = (0.02, 0.2);
        let bump = AnnularBump::new(0.02, 0.2).unwrap();
        let w1 = |z: Complex64| bump.eval(z);
        let mode = AnnularBump::new(0.02, 0.2)
            .unwrap()
            .with_modes(alloc::vec![(2, c(0.0, 0.7))]);
        let w2 = |z: Complex64| mode.eval(z);
        let p = SpectralParameter::Principal { t: 0.3, d: 1 };

        let f1 = bessel_transform(w1, support, &p, &spec).unwrap().value;
        let f2 = bessel_transform(w2, support, &p, &spec).unwrap().value;
        let f12 = bessel_transform(|z| w1(z) + w2(z), support, &p, &spec).unwrap().value;
        let scale = f1.norm().max(f2.norm());
        assert!((f12 - (f1 + f2)).norm() < 1e-12 * scale, "linearity: {f12} vs {}", f1 + f2);

        // Real radial weight at s on the imaginary axis: the kernel pairs
        // z with conj z, so the transform is real.
        assert!(f1.im.abs() < 1e-11 * f1.norm());

        // The kernel is invariant under (s, d) -> (-s, -d).
        let f1r = bessel_transform_sd(w1, support, c(0.0, -0.3), -1, &spec).unwrap().value;
        assert!((f1 - f1r).norm() < 1e-12 * f1.norm());
    }

    #[test]
    fn transform_is_continuous_across_t_zero() {
        // Looser certificates: near s = 0 the kernel goes through its
        // interpolation patch, whose own error sits around 1e-12.
        let spec = QuadratureSpec::with_tols(1e-9, 1e-11);
        let bump = AnnularBump::new(0.02, 0.2).unwrap();
        let w = |z: Complex64| bump.eval(z);
        let support = (0.02, 0.2);
        let at = |t: f64| bessel_transform_sd(w, support, c(0.0, t), 1, &spec).unwrap().value;
        let center = at(0.0);
        // Inside the interpolation patch the curve is a cubic through
        // nearby kernel values; across its edge only continuity of the
        // underlying function is claimed.
        assert!((at(1e-4) - center).norm() < 1e-6 * center.norm().max(1e-12));
        assert!((at(2e-3) - center).norm() < 5e-3 * center.norm().max(1e-12));
        assert!(center.norm() > 1e-9, "transform should not be trivially zero");
    }

    #[test]
    fn geometric_sides_agree_after_reweighting() {
        let ws = standard_ws();
        let main = geometric_side_main(&ws).unwrap();
        let first = geometric_side_first(&ws).unwrap();

        // Norms 1, 2, 4 inside [0.8, 4.5]: six root classes in Z[i].
        assert_eq!(main.terms.len(), 6);
        assert_eq!(first.terms.len(), 6);
        let scale = main.value.norm().max(1.0);
        assert!(
            (main.value - first.value).norm() <= 1e-14 * scale,
            "reweighting drift: {} vs {}",
            main.value,
            first.value
        );
        for (a, b) in main.terms.iter().zip(first.terms.iter()) {
            assert_eq!(a.c_root, b.c_root);
            assert!((a.value - b.value).norm() <= 1e-14 * (a.value.norm().max(1e-3)));
        }
        assert_eq!(first.delta_term, c(0.0, 0.0));

        // Enlarging the enumeration beyond the support changes nothing.
        let (rho1, rho2) = ws.nu.support();
        let slack: Vec<AlgebraicInteger> = enumerate_moduli(ws.field(), rho2.floor() as i64 + 8)
            .into_iter()
            .filter(|cr| {
                let n = cr.norm() as f64;
                n >= rho1 && n <= rho2
            })
            .collect();
        let roots: Vec<AlgebraicInteger> = main.terms.iter().map(|t| t.c_root).collect();
        assert_eq!(slack, roots);

        // An annulus that traps no norms sums to zero over no terms.
        let empty = WeightSpec::new(
            GaussianEta::standard(),
            AnnularBump::new(0.2, 0.8).unwrap(),
            half(zi()),
            half(zi()),
        )
        .unwrap();
        let side = geometric_side_main(&empty).unwrap();
        assert!(side.terms.is_empty());
        assert_eq!(side.value, c(0.0, 0.0));
    }

    #[test]
    fn single_modulus_annulus_reduces_to_the_unit_term() {
        // In D = 2 the only root class of norm 1 is 1 itself, so an annulus
        // around 1 leaves exactly the modulus c = 1 and the sum collapses
        // to F(omega1 omega2) = eta_hat(1).
        let field = QuadField::new(2).unwrap();
        let omega = half(field);
        let ws = WeightSpec::new(
            GaussianEta::standard(),
            AnnularBump::new(0.9, 1.3).unwrap(),
            omega,
            omega,
        )
        .unwrap();
        let side = geometric_side_main(&ws).unwrap();
        assert_eq!(side.terms.len(), 1);
        assert_eq!(side.terms[0].kloosterman, c(1.0, 0.0));
        let expected = eta_hat(&ws, c(1.0, 0.0));
        assert!((side.value - expected).norm() < 1e-13 * expected.norm());
    }

    #[test]
    fn discrete_side_plugs_in_supplied_data() {
        let ws = standard_ws();
        let spec = quad_spec();
        assert_eq!(discrete_side(&ws, &[], &spec).unwrap().value, c(0.0, 0.0));

        let p = SpectralParameter::Principal { t: 0.3, d: 1 };
        let datum = SpectralDatum {
            p,
            coefficients: alloc::vec![(half(zi()), c(1.0, 0.0))],
            provenance: String::from("synthetic"),
        };
        let side = discrete_side(&ws, &[datum], &spec).unwrap();
        let f_hat = weight_transform(&ws, c(0.0, 0.3), 1, &spec).unwrap().value;
        let area = zi().lattice_area();
        let expected = f_hat * (PI * area * area / 3.0);
        assert!((side.value - expected).norm() < 1e-13 * expected.norm());
        assert_eq!(side.terms.len(), 1);
        assert!(side.skipped.is_empty());

        // A record with no coefficient at the weight's characters is
        // skipped, with a diagnostic naming its provenance.
        let stranger = SpectralDatum {
            p: SpectralParameter::Complementary { t: 0.25 },
            coefficients: alloc::vec![(half_i(), c(0.4, 0.0))],
            provenance: String::from("catalogue row 7"),
        };
        let side = discrete_side(&ws, &[stranger], &spec).unwrap();
        assert_eq!(side.value, c(0.0, 0.0));
        assert_eq!(side.skipped.len(), 1);
        assert!(side.skipped[0].contains("catalogue row 7"));
    }

    #[test]
    fn discrete_side_is_hermitian_under_character_swap() {
        // |omega1| = |omega2| keeps F identical under the swap, so each
        // term should conjugate when F_hat is real.
        let spec = quad_spec();
        let eta = GaussianEta::standard();
        let nu = AnnularBump::new(0.8, 4.5).unwrap();
        let ws = WeightSpec::new(eta, nu.clone(), half(zi()), half_i()).unwrap();
        let swapped = WeightSpec::new(eta, nu, half_i(), half(zi())).unwrap();
        let datum = SpectralDatum {
            p: SpectralParameter::Principal { t: 0.2, d: 0 },
            coefficients: alloc::vec![
                (half(zi()), c(0.8, 0.3)),
                (half_i(), c(-0.2, 0.9)),
            ],
            provenance: String::from("synthetic"),
        };
        let v = discrete_side(&ws, core::slice::from_ref(&datum), &spec).unwrap().value;
        let w = discrete_side(&swapped, core::slice::from_ref(&datum), &spec).unwrap().value;
        assert!((w - v.conj()).norm() < 1e-9 * v.norm().max(1e-12));
        assert!(v.norm() > 1e-12);
    }

    #[test]
    fn continuous_side_structure() {
        let ws = standard_ws();
        let spec = quad_spec();
        let settings = ContinuousSettings {
            d_max: 2,
            t_max: 1.2,
            t_nodes: 2,
            zeta_norm_bound: 120,
        };
        let side = continuous_side(&ws, &settings, &spec).unwrap();
        assert!(side.experimental);
        // d runs over multiples of the unit action order 2 of Z[i].
        let ds: Vec<i32> = side.bands.iter().map(|b| b.d).collect();
        assert_eq!(ds, alloc::vec![-2, 0, 2]);
        // With omega1 = omega2 every t-node contributes
        // |Z|^2 F_hat(it, d) with F real radial, so the total is real.
        assert!(side.value.im.abs() < 1e-8 * side.value.norm().max(1e-12));
        assert!(side.value.norm() > 0.0);

        // Frequencies away from the unit lattice would be killed by the
        // unit average inside the zeta factor.
        let mu = MultiplicativeCharacter::new(c(0.0, 0.7), 1);
        let z = zeta_series_smoothed(mu, ws.omega1(), 120).unwrap();
        assert!(z.identically_zero);

        // The empty grid is the zero functional.
        let none = continuous_side(&ws, &ContinuousSettings::empty(), &spec).unwrap();
        assert_eq!(none.value, c(0.0, 0.0));
        assert!(none.bands.is_empty());
    }

    #[test]
    fn report_bookkeeping_is_exact() {
        let ws = standard_ws();
        // Geometric-only run: no data, empty continuous grid.
        let report = trace_report(&ws, &[], &TraceSettings::geometric_only()).unwrap();
        assert_eq!(report.discrete, c(0.0, 0.0));
        assert_eq!(report.continuous, c(0.0, 0.0));
        assert_eq!(report.residual, report.geometric);
        assert_eq!(report.diagnostics.delta_term, c(0.0, 0.0));
        let scale = report.geometric.norm().max(1.0);
        assert!(report.diagnostics.reweighting_delta <= 1e-14 * scale);
        assert!(!report.diagnostics.note.is_empty());
        assert_eq!(report.diagnostics.data_count, 0);

        // The zero weight kills every side exactly.
        let mute = WeightSpec::new(
            GaussianEta::new(0.0, c(0.0, 0.0), 1.0).unwrap(),
            AnnularBump::new(0.8, 4.5).unwrap(),
            half(zi()),
            half(zi()),
        )
        .unwrap();
        let settings = TraceSettings {
            continuous: ContinuousSettings { d_max: 0, t_max: 1.0, t_nodes: 2, zeta_norm_bound: 60 },
            quadrature: QuadratureSpec::default(),
        };
        let report = trace_report(&mute, &[], &settings).unwrap();
        assert_eq!(report.geometric, c(0.0, 0.0));
        assert_eq!(report.discrete, c(0.0, 0.0));
        assert_eq!(report.continuous, c(0.0, 0.0));
        assert_eq!(report.residual, c(0.0, 0.0));
    }

    #[test]
    fn weight_spec_validates_inputs() {
        assert!(GaussianEta::new(1.0, c(0.0, 0.0), 0.0).is_err());
        assert!(AnnularBump::new(0.0, 1.0).is_err());
        assert!(AnnularBump::new(1.0, 0.5).is_err());
        assert!(AnnularBump::new(1.0, f64::INFINITY).is_err());
        let zero = DualPoint::zero(zi());
        assert!(WeightSpec::new(
            GaussianEta::standard(),
            AnnularBump::new(0.5, 1.0).unwrap(),
            zero,
            half(zi())
        )
        .is_err());
        let other = DualPoint::new(Ratio::new(1, 2), Ratio::zero(), QuadField::new(2).unwrap())
            .unwrap();
        assert!(WeightSpec::new(
            GaussianEta::standard(),
            AnnularBump::new(0.5, 1.0).unwrap(),
            half(zi()),
            other
        )
        .is_err());
        // The bump vanishes identically off its annulus and reaches 1 on
        // the plateau.
        let bump = AnnularBump::new(1.0, 2.0).unwrap();
        assert_eq!(bump.radial(0.99), 0.0);
        assert_eq!(bump.radial(2.01), 0.0);
        assert_eq!(bump.radial(1.5), 1.0);
        assert!(bump.radial(1.1) > 0.0 && bump.radial(1.1) < 1.0);
    }
}
