//! Coordinates and measures on G = GL2(C) acting projectively, i.e. on
//! PGL2(C) = PSL2(C).
//!
//! Two charts are used throughout:
//!
//! * Iwasawa: g = n(z) a(r) k, with n(z) upper unipotent, a(r) = diag(r, 1)
//!   for r > 0, and k in SU(2) (mod sign). The Haar measure in this chart is
//!   dg = 2 r^-3 dz dr dk with dz the doubled Lebesgue measure on C and dk
//!   the probability measure on K.
//! * Bruhat: g = n(u1) w a(c) n(u2) on the open cell (lower-left entry
//!   nonzero), with w = [[0, -1], [1, 0]]. For a matrix (a,b;c0,d) of
//!   determinant 1 the coordinates are u1 = a/c0, u2 = d/c0 and the torus
//!   coordinate is c = c0^2. The Haar measure on the cell is
//!   (1/4 pi^2) du1 du2' d*c, where u2' = c u2 is the unipotent coordinate
//!   of the n w n a factorization and d*c = dc/|c|^2; pushed to the
//!   (u1, c, u2) chart used here it is the constant density
//!   (1/4 pi^2) du1 dc du2.
//!
//! Both densities are normalized against the doubled Lebesgue measure; the
//! consistency of the two charts is checked by integration in the test
//! suite.

use crate::rings::DualPoint;
use crate::{Complex64, Error, Result};
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

/// An invertible 2x2 complex matrix, considered up to nonzero scalars.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GroupElement {
    pub m: [[Complex64; 2]; 2],
}

/// Iwasawa data (z, r, k_{v,w}): g ~ n(z) a(r) k.
#[derive(Clone, Copy, Debug)]
pub struct IwasawaCoords {
    pub z: Complex64,
    pub r: f64,
    pub v: Complex64,
    pub w: Complex64,
}

/// Bruhat data on the open cell: g ~ n(u1) w a(c) n(u2).
#[derive(Clone, Copy, Debug)]
pub struct BruhatCoords {
    pub u1: Complex64,
    pub c: Complex64,
    pub u2: Complex64,
}

impl GroupElement {
    pub fn new(m: [[Complex64; 2]; 2]) -> GroupElement {
        GroupElement { m }
    }

    /// Upper unipotent n(z) = [[1, z], [0, 1]].
    pub fn n(z: Complex64) -> GroupElement {
        GroupElement::new([
            [Complex64::new(1.0, 0.0), z],
            [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
        ])
    }

    /// Torus element a(c) = diag(c, 1).
    pub fn a(c: Complex64) -> GroupElement {
        GroupElement::new([
            [c, Complex64::new(0.0, 0.0)],
            [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
        ])
    }

    /// Positive torus element a(r) for real r > 0.
    pub fn a_r(r: f64) -> GroupElement {
        GroupElement::a(Complex64::new(r, 0.0))
    }

    /// k_{v,w} = [[v, w], [-conj(w), conj(v)]] in SU(2); |v|^2 + |w|^2 = 1.
    pub fn k(v: Complex64, w: Complex64) -> GroupElement {
        GroupElement::new([[v, w], [-w.conj(), v.conj()]])
    }

    /// The Weyl element w = [[0, -1], [1, 0]].
    pub fn weyl() -> GroupElement {
        GroupElement::new([
            [Complex64::new(0.0, 0.0), Complex64::new(-1.0, 0.0)],
            [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
        ])
    }

    pub fn mul(self, rhs: GroupElement) -> GroupElement {
        let a = &self.m;
        let b = &rhs.m;
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                *entry = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        GroupElement::new(out)
    }

    pub fn det(self) -> Complex64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    fn max_abs(self) -> f64 {
        let mut t: f64 = 0.0;
        for row in &self.m {
            for e in row {
                t = t.max(e.norm());
            }
        }
        t
    }

    /// Relative distance between self and other as projective elements:
    /// both are scaled so the entry where self has largest modulus becomes
    /// 1, then compared entrywise.
    pub fn projective_distance(self, other: GroupElement) -> f64 {
        let mut bi = 0;
        let mut bj = 0;
        let mut best = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                let t = self.m[i][j].norm();
                if t > best {
                    best = t;
                    bi = i;
                    bj = j;
                }
            }
        }
        if best == 0.0 || other.m[bi][bj].norm() == 0.0 {
            return f64::INFINITY;
        }
        let sa = self.m[bi][bj];
        let sb = other.m[bi][bj];
        let mut dist = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                dist = dist.max((self.m[i][j] / sa - other.m[i][j] / sb).norm());
            }
        }
        dist
    }

    /// Iwasawa decomposition. Requires det != 0.
    pub fn iwasawa_decompose(self) -> Result<IwasawaCoords> {
        let det = self.det();
        let scale = self.max_abs();
        if det.norm() <= 1e-28 * scale * scale {
            return Err(Error::InvalidParameter("matrix is singular"));
        }
        let (c, d) = (self.m[1][0], self.m[1][1]);
        let s = c.norm_sqr() + d.norm_sqr();
        let z = (self.m[0][0] * c.conj() + self.m[0][1] * d.conj()) / s;
        let r = det.norm() / s;
        // g = mu * n(z) a(r) k with mu^2 = det / r.
        let mu = (det / r).sqrt();
        let mut v = (d / mu).conj();
        let mut w = (-c / mu).conj();
        // Fix the SU(2) sign: first coordinate of (Re v, Im v, Re w, Im w)
        // that is clearly nonzero is made positive.
        let coords = [v.re, v.im, w.re, w.im];
        let amax = coords.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
        for &x in &coords {
            if x.abs() > 1e-12 * amax {
                if x < 0.0 {
                    v = -v;
                    w = -w;
                }
                break;
            }
        }
        Ok(IwasawaCoords { z, r, v, w })
    }

    /// Bruhat decomposition on the open cell; fails on the Borel subgroup
    /// (lower-left entry zero up to roundoff).
    pub fn bruhat_decompose(self) -> Result<BruhatCoords> {
        let det = self.det();
        let scale = self.max_abs();
        if det.norm() <= 1e-28 * scale * scale {
            return Err(Error::InvalidParameter("matrix is singular"));
        }
        let c = self.m[1][0];
        if c.norm() <= 1e-14 * scale {
            return Err(Error::BorelElement);
        }
        Ok(BruhatCoords {
            u1: self.m[0][0] / c,
            c: c * c / det,
            u2: self.m[1][1] / c,
        })
    }
}

impl IwasawaCoords {
    pub fn reconstruct(self) -> GroupElement {
        GroupElement::n(self.z)
            .mul(GroupElement::a_r(self.r))
            .mul(GroupElement::k(self.v, self.w))
    }
}

impl BruhatCoords {
    pub fn reconstruct(self) -> GroupElement {
        GroupElement::n(self.u1)
            .mul(GroupElement::weyl())
            .mul(GroupElement::a(self.c))
            .mul(GroupElement::n(self.u2))
    }
}

/// Haar density in the Iwasawa chart against dz dr dk: 2 r^-3.
pub fn haar_weight_iwasawa(ic: &IwasawaCoords) -> f64 {
    2.0 / (ic.r * ic.r * ic.r)
}

/// Haar density (1/4 pi^2) |c|^-2 against du1 du2' dc, the chart with the
/// unipotent coordinate u2' = c u2 in which the measure reads
/// (1/4 pi^2) du1 du2' d*c. Against the (u1, c, u2) chart of
/// [`BruhatCoords`] the density is the constant 1/4 pi^2.
pub fn haar_weight_bruhat(bc: &BruhatCoords) -> f64 {
    1.0 / (4.0 * PI * PI * bc.c.norm_sqr())
}

/// The additive character psi_w(z) = e(Tr(w z)) = exp(2 pi i (w z + conj(w z)))
/// attached to a dual lattice point w.
#[derive(Clone, Copy, Debug)]
pub struct AdditiveCharacter {
    omega: DualPoint,
    embedded: Complex64,
}

impl AdditiveCharacter {
    pub fn new(omega: DualPoint) -> AdditiveCharacter {
        AdditiveCharacter { omega, embedded: omega.embed() }
    }

    pub fn omega(&self) -> DualPoint {
        self.omega
    }

    pub fn omega_value(&self) -> Complex64 {
        self.embedded
    }

    /// psi_w(z); for the trace of a complex number, Tr(u) = 2 Re(u).
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let theta = 4.0 * PI * (self.embedded * z).re;
        Complex64::new(theta.cos(), theta.sin())
    }

    pub fn eval_inverse(&self, z: Complex64) -> Complex64 {
        self.eval(z).conj()
    }
}

/// The multiplicative character mu_{s,d}(z) = |z|^{2s} [z]^d with
/// [z] = z/|z|.
#[derive(Clone, Copy, Debug)]
pub struct MultiplicativeCharacter {
    pub s: Complex64,
    pub d: i32,
}

impl MultiplicativeCharacter {
    pub fn new(s: Complex64, d: i32) -> MultiplicativeCharacter {
        MultiplicativeCharacter { s, d }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        debug_assert!(z.norm() > 0.0);
        let ln_abs = z.norm().ln();
        let arg = z.arg();
        // |z|^{2s} e^{i d arg z}
        let expo = self.s * 2.0 * ln_abs + Complex64::new(0.0, self.d as f64 * arg);
        expo.exp()
    }
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

    #[test]
    fn iwasawa_of_unipotent() {
        let g = GroupElement::n(c(3.0, 4.0));
        let ic = g.iwasawa_decompose().unwrap();
        assert!((ic.z - c(3.0, 4.0)).norm() < 1e-14);
        assert!((ic.r - 1.0).abs() < 1e-14);
        assert!((ic.v - c(1.0, 0.0)).norm() < 1e-14);
        assert!(ic.w.norm() < 1e-14);
    }

    #[test]
    fn iwasawa_of_weyl() {
        let ic = GroupElement::weyl().iwasawa_decompose().unwrap();
        assert!(ic.z.norm() < 1e-14);
        assert!((ic.r - 1.0).abs() < 1e-14);
        // k is the Weyl rotation up to sign.
        assert!(ic.v.norm() < 1e-14);
        assert!((ic.w.norm() - 1.0).abs() < 1e-14);
        assert!(ic.w.im.abs() < 1e-14);
    }

    #[test]
    fn bruhat_examples() {
        let bc = GroupElement::weyl().bruhat_decompose().unwrap();
        assert!(bc.u1.norm() < 1e-14);
        assert!((bc.c - c(1.0, 0.0)).norm() < 1e-14);
        assert!(bc.u2.norm() < 1e-14);

        let g = GroupElement::new([[c(1.0, 0.0), c(0.0, 0.0)], [c(1.0, 0.0), c(1.0, 0.0)]]);
        let bc = g.bruhat_decompose().unwrap();
        assert!((bc.u1 - c(1.0, 0.0)).norm() < 1e-14);
        assert!((bc.c - c(1.0, 0.0)).norm() < 1e-14);
        assert!((bc.u2 - c(1.0, 0.0)).norm() < 1e-14);
        assert!(g.projective_distance(bc.reconstruct()) < 1e-14);

        let g = GroupElement::new([[c(2.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(1.0, 0.0)]]);
        let bc = g.bruhat_decompose().unwrap();
        assert!((bc.u1 - c(2.0, 0.0)).norm() < 1e-14);
        assert!((bc.c - c(1.0, 0.0)).norm() < 1e-14);
        assert!((bc.u2 - c(1.0, 0.0)).norm() < 1e-14);

        assert!(matches!(
            GroupElement::n(c(1.0, 2.0)).bruhat_decompose(),
            Err(Error::BorelElement)
        ));
    }

    #[test]
    fn decomposition_round_trips() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        let rand_c = |rng: &mut rand_chacha::ChaCha8Rng| {
            c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))
        };
        let mut tested = 0;
        while tested < 1000 {
            let g = GroupElement::new([
                [rand_c(&mut rng), rand_c(&mut rng)],
                [rand_c(&mut rng), rand_c(&mut rng)],
            ]);
            if g.det().norm() < 1e-3 {
                continue;
            }
            tested += 1;
            let ic = g.iwasawa_decompose().unwrap();
            assert!((ic.v.norm_sqr() + ic.w.norm_sqr() - 1.0).abs() < 1e-12);
            assert!(
                g.projective_distance(ic.reconstruct()) < 1e-12,
                "iwasawa roundtrip failed: {:?}",
                g
            );
            if let Ok(bc) = g.bruhat_decompose() {
                assert!(
                    g.projective_distance(bc.reconstruct()) < 1e-10,
                    "bruhat roundtrip failed: {:?}",
                    g
                );
            }
        }
    }

    #[test]
    fn bruhat_matches_det_one_formulas() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4242);
        for _ in 0..200 {
            let a = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let cc = c(rng.gen_range(0.2..2.0), rng.gen_range(-2.0..2.0));
            let d = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            // Choose b so the determinant is 1.
            let b = (a * d - c(1.0, 0.0)) / cc;
            let g = GroupElement::new([[a, b], [cc, d]]);
            let bc = g.bruhat_decompose().unwrap();
            assert!((bc.u1 - a / cc).norm() < 1e-12);
            assert!((bc.u2 - d / cc).norm() < 1e-12);
            assert!((bc.c - cc * cc).norm() < 1e-10);
        }
    }

    #[test]
    fn haar_weights() {
        let ic = IwasawaCoords { z: c(0.3, 0.1), r: 1.0, v: c(1.0, 0.0), w: c(0.0, 0.0) };
        assert!((haar_weight_iwasawa(&ic) - 2.0).abs() < 1e-15);
        let ic = IwasawaCoords { r: 2.0, ..ic };
        assert!((haar_weight_iwasawa(&ic) - 0.25).abs() < 1e-15);
        let bc = BruhatCoords { u1: c(0.0, 0.0), c: c(0.0, 1.0), u2: c(0.0, 0.0) };
        assert!((haar_weight_bruhat(&bc) - 1.0 / (4.0 * PI * PI)).abs() < 1e-15);
    }

    #[test]
    fn additive_character_values() {
        let field = QuadField::new(1).unwrap();
        let omega = DualPoint::new(Ratio::new(1, 2), Ratio::new(0, 1), field).unwrap();
        let psi = AdditiveCharacter::new(omega);
        assert!((psi.eval(c(0.0, 0.0)) - c(1.0, 0.0)).norm() < 1e-15);
        // psi(1) = e(Tr(1/2)) = e(1) = 1.
        assert!((psi.eval(c(1.0, 0.0)) - c(1.0, 0.0)).norm() < 1e-14);
        // psi(1/2) = e(1/2) = -1.
        assert!((psi.eval(c(0.5, 0.0)) - c(-1.0, 0.0)).norm() < 1e-14);
        // psi(i t) is 1 for all real t when omega is real: Tr(i t / 2) = 0.
        assert!((psi.eval(c(0.0, 7.3)) - c(1.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn additive_character_lattice_periodicity() {
        for field in crate::rings::FIELDS {
            let (g1, g2) = field.dual_basis();
            let wd = field.omega_embedding();
            for omega in [g1, g2] {
                let psi = AdditiveCharacter::new(omega);
                let z = c(0.37, -1.21);
                for lam in [c(1.0, 0.0), wd, c(3.0, 0.0) - wd * c(2.0, 0.0)] {
                    assert!((psi.eval(z + lam) - psi.eval(z)).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn mult_character_values() {
        let one = c(1.0, 0.0);
        assert!((MultiplicativeCharacter::new(c(0.3, -0.9), 5).eval(one) - one).norm() < 1e-15);
        // Pure angular character at i.
        let mu = MultiplicativeCharacter::new(c(0.0, 0.0), 1);
        assert!((mu.eval(c(0.0, 1.0)) - c(0.0, 1.0)).norm() < 1e-15);
        // |z|^2 at z = 2.
        let mu = MultiplicativeCharacter::new(c(1.0, 0.0), 0);
        assert!((mu.eval(c(2.0, 0.0)) - c(4.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn character_algebra_random() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let field = QuadField::new(3).unwrap();
        let (g1, _) = field.dual_basis();
        let psi = AdditiveCharacter::new(g1);
        let mu = MultiplicativeCharacter::new(c(0.3, 1.2), -3);
        for _ in 0..300 {
            let z1 = c(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
            let z2 = c(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
            assert!((psi.eval(z1 + z2) - psi.eval(z1) * psi.eval(z2)).norm() < 1e-13);
            assert!((psi.eval(z1) * psi.eval_inverse(z1) - c(1.0, 0.0)).norm() < 1e-14);
            if z1.norm() > 1e-3 && z2.norm() > 1e-3 {
                let lhs = mu.eval(z1 * z2);
                let rhs = mu.eval(z1) * mu.eval(z2);
                assert!((lhs - rhs).norm() < 1e-12 * rhs.norm().max(1.0));
            }
        }
        // Unitary on the principal line: |mu_{it,d}| = 1.
        let mu = MultiplicativeCharacter::new(c(0.0, 0.7), 4);
        assert!((mu.eval(c(1.3, -0.4)).norm() - 1.0).abs() < 1e-14);
    }
}
