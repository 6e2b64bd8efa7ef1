//! The Bessel kernel attached to a spectral parameter.
//!
//! The kernel acting at a spectral point (s, d) is
//!
//! ```text
//! (2 pi^2 / sin(2 pi s)) |a^2 z| (J_{s,2d} - J_{-s,-2d})(4 pi a sqrt(z)),
//! J_{s,2d}(w) = J_{-2s-d}(w) J_{-2s+d}(conj w),
//! ```
//!
//! real for unitary parameters, independent of the square-root branch, and
//! with a removable singularity at s = 0 that is filled in by Richardson
//! extrapolation from the four surrounding points (+-h, +-h/2) along the ray
//! through s.

use super::bessel_j::bessel_j;
use crate::{Complex64, Error, Result};
use core::f64::consts::PI;
#[allow(unused_imports)] // float intrinsics come from the trait in no_std builds
use num_traits::Float;

/// A spectral parameter of the unitary dual: s = it with any integer d on
/// the principal axis, or real s = t in (0, 1/2) with d = 0 on the
/// complementary segment.
#[derive(Clone, Copy, Debug)]
pub enum SpectralParameter {
    Principal { t: f64, d: i32 },
    Complementary { t: f64 },
}

impl SpectralParameter {
    pub fn validate(&self) -> Result<()> {
        match *self {
            SpectralParameter::Principal { t, .. } if t.is_finite() => Ok(()),
            SpectralParameter::Complementary { t } if t > 0.0 && t < 0.5 => Ok(()),
            _ => Err(Error::InvalidParameter(
                "spectral parameter outside the unitary dual",
            )),
        }
    }

    /// The complex parameter s: it on the principal axis, t on the segment.
    pub fn s(&self) -> Complex64 {
        match *self {
            SpectralParameter::Principal { t, .. } => Complex64::new(0.0, t),
            SpectralParameter::Complementary { t } => Complex64::new(t, 0.0),
        }
    }

    pub fn d(&self) -> i32 {
        match *self {
            SpectralParameter::Principal { d, .. } => d,
            SpectralParameter::Complementary { .. } => 0,
        }
    }
}

/// Equality respects the identification of (t, d) with (-t, -d) on the
/// principal axis.
impl PartialEq for SpectralParameter {
    fn eq(&self, other: &Self) -> bool {
        match (*self, *other) {
            (
                SpectralParameter::Principal { t: t1, d: d1 },
                SpectralParameter::Principal { t: t2, d: d2 },
            ) => (t1 == t2 && d1 == d2) || (t1 == -t2 && d1 == -d2),
            (
                SpectralParameter::Complementary { t: t1 },
                SpectralParameter::Complementary { t: t2 },
            ) => t1 == t2,
            _ => false,
        }
    }
}

/// J_{-2s-d}(w) J_{-2s+d}(conj w), the two-variable Bessel product.
pub fn kernel_j_sd(s: Complex64, d: i32, w: Complex64) -> Result<Complex64> {
    let df = d as f64;
    let j1 = bessel_j(-(s * 2.0) - df, w)?;
    let j2 = bessel_j(-(s * 2.0) + df, w.conj())?;
    let v = j1 * j2;
    // Each factor grows like exp(|Im w|), so the product can overflow even
    // when both factors are representable.
    if !v.is_finite() {
        return Err(Error::ConvergenceFailure("bessel product overflow"));
    }
    Ok(v)
}

/// The kernel away from s = 0, evaluated literally.
fn kernel_core(s: Complex64, d: i32, a: Complex64, z: Complex64) -> Result<Complex64> {
    let mut w = a * z.sqrt() * (4.0 * PI);
    if w.im == 0.0 && w.re < 0.0 {
        // Both square roots of z give the same kernel; on the negative real
        // axis only the positive choice keeps the pair (w, conj w) on
        // opposite sides of the branch cut, so flip to it.
        w = -w;
    }
    let num = kernel_j_sd(s, d, w)? - kernel_j_sd(-s, -d, w)?;
    let amp = (a * a * z).norm();
    let v = num * (2.0 * PI * PI * amp) / (s * 2.0 * PI).sin();
    if !v.is_finite() {
        return Err(Error::ConvergenceFailure("bessel kernel overflow"));
    }
    Ok(v)
}

fn lagrange4(nodes: &[Complex64; 4], vals: &[Complex64; 4], x: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..4 {
        let mut li = Complex64::new(1.0, 0.0);
        for j in 0..4 {
            if j != i {
                li = li * (x - nodes[j]) / (nodes[i] - nodes[j]);
            }
        }
        acc += vals[i] * li;
    }
    acc
}

/// The kernel at arbitrary complex s (the analytic continuation in s), with
/// the removable s = 0 singularity filled in by cubic interpolation through
/// s = (+-h, +-h/2) u along the unit ray u; at s = 0 this reduces to the
/// Richardson value (4 F(h/2) - F(h)) / 3 of the symmetrized averages.
pub fn bessel_kernel_sd(s: Complex64, d: i32, a: Complex64, z: Complex64) -> Result<Complex64> {
    if a.norm() == 0.0 || z.norm() == 0.0 {
        return Err(Error::InvalidParameter("bessel kernel needs a, z nonzero"));
    }
    let h = 1e-3;
    if s.norm() >= h {
        return kernel_core(s, d, a, z);
    }
    let u = if s.norm() == 0.0 { Complex64::i() } else { s / s.norm() };
    let nodes = [u * -h, u * (-h / 2.0), u * (h / 2.0), u * h];
    let mut vals = [Complex64::new(0.0, 0.0); 4];
    for (node, val) in nodes.iter().zip(vals.iter_mut()) {
        *val = kernel_core(*node, d, a, z)?;
    }
    for (node, val) in nodes.iter().zip(vals.iter()) {
        if (s - node).norm() <= 1e-9 * h {
            return Ok(*val);
        }
    }
    Ok(lagrange4(&nodes, &vals, s))
}

/// The kernel at a point of the unitary dual.
pub fn bessel_kernel(p: &SpectralParameter, a: Complex64, z: Complex64) -> Result<Complex64> {
    p.validate()?;
    bessel_kernel_sd(p.s(), p.d(), a, z)
}
