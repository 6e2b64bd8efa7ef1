//! Arithmetic in the rings of integers of the five norm-Euclidean imaginary
//! quadratic fields Q(sqrt(-D)), D in {1, 2, 3, 7, 11}.
//!
//! Elements are stored exactly as coordinates over the integral basis
//! {1, w_D}, where w_D = sqrt(-D) for D = 1, 2 and w_D = (1 + sqrt(-D))/2 for
//! D = 3, 7, 11. These five rings are exactly the imaginary quadratic rings
//! in which division with remainder by a nearest lattice point always
//! strictly reduces the norm, which is what the residue systems, gcds, and
//! modular inverses below rely on.
//!
//! Additive characters of C/O_K are indexed by the trace-dual lattice
//! Lambda' = { w : Tr(w l) in Z for all l in O_K }, the inverse different.
//! [`DualPoint`] stores such a w by its rational coordinates over {1, w_D},
//! so that pairings like Tr(w a / c) can be evaluated as exact rationals.

use crate::{Complex64, Error, Result};
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};
use num_rational::Ratio;
// Float supplies sqrt/floor/... on f64 in no_std builds; under test the
// inherent methods shadow it.
#[allow(unused_imports)]
use num_traits::Float;
use num_traits::Zero;

/// One of the five norm-Euclidean imaginary quadratic fields, identified by
/// the squarefree D in Q(sqrt(-D)).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct QuadField {
    d: u8,
}

pub const FIELDS: [QuadField; 5] = [
    QuadField { d: 1 },
    QuadField { d: 2 },
    QuadField { d: 3 },
    QuadField { d: 7 },
    QuadField { d: 11 },
];

impl QuadField {
    pub fn new(d: u32) -> Result<QuadField> {
        match d {
            1 | 2 | 3 | 7 | 11 => Ok(QuadField { d: d as u8 }),
            _ => Err(Error::InvalidParameter("D must be one of 1, 2, 3, 7, 11")),
        }
    }

    pub fn d(self) -> u32 {
        self.d as u32
    }

    fn three_mod_four(self) -> bool {
        self.d % 4 == 3
    }

    /// Minimal polynomial of w_D as w^2 = t*w - n, returned as (t, n).
    fn omega_poly(self) -> (i64, i64) {
        if self.three_mod_four() {
            (1, (1 + self.d as i64) / 4)
        } else {
            (0, self.d as i64)
        }
    }

    /// Field discriminant: -4D for D = 1, 2 and -D for D = 3, 7, 11.
    pub fn discriminant(self) -> i64 {
        if self.three_mod_four() {
            -(self.d as i64)
        } else {
            -4 * self.d as i64
        }
    }

    /// Complex embedding of the basis element w_D (upper half plane).
    pub fn omega_embedding(self) -> Complex64 {
        let rd = (self.d as f64).sqrt();
        if self.three_mod_four() {
            Complex64::new(0.5, 0.5 * rd)
        } else {
            Complex64::new(0.0, rd)
        }
    }

    /// Covolume of O_K in C under the doubled Lebesgue measure, i.e. twice
    /// the Euclidean area of a fundamental parallelogram.
    pub fn lattice_area(self) -> f64 {
        2.0 * self.omega_embedding().im
    }

    /// The unit group as ring elements: {1, -1}, plus {i, -i} for D = 1 and
    /// the six sixth roots of unity for D = 3.
    pub fn units(self) -> Vec<AlgebraicInteger> {
        let mut out = Vec::new();
        let one = AlgebraicInteger::new(1, 0, self);
        out.push(one);
        out.push(-one);
        match self.d {
            1 => {
                let i = AlgebraicInteger::new(0, 1, self);
                out.push(i);
                out.push(-i);
            }
            3 => {
                let w = AlgebraicInteger::new(0, 1, self);
                let w2 = AlgebraicInteger::new(-1, 1, self);
                out.push(w);
                out.push(-w);
                out.push(w2);
                out.push(-w2);
            }
            _ => {}
        }
        out
    }

    /// Order of { u^2 : u a unit }, the group of multipliers by which the
    /// stabilizer of the cusp at infinity acts on translations: 2 for D = 1,
    /// 3 for D = 3, and 1 otherwise.
    pub fn unit_action_order(self) -> u32 {
        let mut squares: Vec<AlgebraicInteger> = Vec::new();
        for u in self.units() {
            let sq = u * u;
            if !squares.contains(&sq) {
                squares.push(sq);
            }
        }
        squares.len() as u32
    }

    /// A Z-basis of the trace-dual lattice Lambda', as rational coordinates
    /// over {1, w_D}. The columns of the inverse of the trace-form Gram
    /// matrix on the integral basis.
    pub fn dual_basis(self) -> (DualPoint, DualPoint) {
        let d = self.d as i64;
        if self.three_mod_four() {
            // Gram [[2, 1], [1, (1-D)/2]], determinant -D.
            let g1 = DualPoint::new(Ratio::new(d - 1, 2 * d), Ratio::new(1, d), self)
                .expect("dual basis element");
            let g2 = DualPoint::new(Ratio::new(1, d), Ratio::new(-2, d), self)
                .expect("dual basis element");
            (g1, g2)
        } else {
            // Gram [[2, 0], [0, -2D]], determinant -4D.
            let g1 = DualPoint::new(Ratio::new(1, 2), Ratio::zero(), self)
                .expect("dual basis element");
            let g2 = DualPoint::new(Ratio::zero(), Ratio::new(1, 2 * d), self)
                .expect("dual basis element");
            (g1, g2)
        }
    }
}

/// An element x + y*w_D of the ring of integers, stored exactly.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct AlgebraicInteger {
    pub x: i64,
    pub y: i64,
    field: QuadField,
}

impl AlgebraicInteger {
    pub fn new(x: i64, y: i64, field: QuadField) -> AlgebraicInteger {
        AlgebraicInteger { x, y, field }
    }

    pub fn zero(field: QuadField) -> AlgebraicInteger {
        AlgebraicInteger::new(0, 0, field)
    }

    pub fn one(field: QuadField) -> AlgebraicInteger {
        AlgebraicInteger::new(1, 0, field)
    }

    pub fn field(self) -> QuadField {
        self.field
    }

    pub fn is_zero(self) -> bool {
        self.x == 0 && self.y == 0
    }

    pub fn is_unit(self) -> bool {
        self.norm() == 1
    }

    /// Field norm N(x + y w). Always nonnegative.
    pub fn norm(self) -> i64 {
        let (x, y) = (self.x as i128, self.y as i128);
        let n = match self.field.omega_poly() {
            (0, d) => x * x + d as i128 * y * y,
            (1, q) => x * x + x * y + q as i128 * y * y,
            _ => unreachable!(),
        };
        i64::try_from(n).expect("norm overflow")
    }

    /// Field trace Tr(x + y w) = 2x + y Tr(w).
    pub fn trace(self) -> i64 {
        let (t, _) = self.field.omega_poly();
        2 * self.x + t * self.y
    }

    pub fn conj(self) -> AlgebraicInteger {
        let (t, _) = self.field.omega_poly();
        AlgebraicInteger::new(self.x + t * self.y, -self.y, self.field)
    }

    pub fn embed(self) -> Complex64 {
        let w = self.field.omega_embedding();
        Complex64::new(self.x as f64, 0.0) + w * self.y as f64
    }

    /// Division with remainder: returns (q, r) with self = q*b + r and
    /// N(r) < N(b). The quotient is a nearest lattice point to the exact
    /// field quotient; in these five rings some neighbor of the rounded
    /// coordinates always works, and the choice is deterministic.
    pub fn divrem(self, b: AlgebraicInteger) -> (AlgebraicInteger, AlgebraicInteger) {
        assert!(!b.is_zero(), "division by zero");
        let nb = b.norm() as i128;
        // self / b = self * conj(b) / N(b), coordinates as exact rationals.
        let num = mul_i128(self, b.conj());
        let px = Ratio::new(num.0, nb);
        let py = Ratio::new(num.1, nb);
        let rx = round_ratio(px);
        let ry = round_ratio(py);
        let mut best: Option<(i64, AlgebraicInteger, AlgebraicInteger)> = None;
        for dx in -1..=1i64 {
            for dy in -1..=1i64 {
                let q = AlgebraicInteger::new(
                    (rx + dx as i128) as i64,
                    (ry + dy as i128) as i64,
                    self.field,
                );
                let r = self - q * b;
                let nr = r.norm();
                let better = match &best {
                    None => true,
                    Some((bn, bq, _)) => {
                        nr < *bn || (nr == *bn && (q.x, q.y) < (bq.x, bq.y))
                    }
                };
                if better {
                    best = Some((nr, q, r));
                }
            }
        }
        let (nr, q, r) = best.unwrap();
        assert!(nr < b.norm(), "euclidean division failed");
        (q, r)
    }

    pub fn divides(self, a: AlgebraicInteger) -> bool {
        !self.is_zero() && a.divrem(self).1.is_zero()
    }

    /// Exact quotient if self divides a.
    pub fn exact_div(a: AlgebraicInteger, b: AlgebraicInteger) -> Option<AlgebraicInteger> {
        let (q, r) = a.divrem(b);
        r.is_zero().then_some(q)
    }

    /// A greatest common divisor (unique up to units).
    pub fn gcd(a: AlgebraicInteger, b: AlgebraicInteger) -> AlgebraicInteger {
        let (mut r0, mut r1) = (a, b);
        while !r1.is_zero() {
            let (_, r2) = r0.divrem(r1);
            r0 = r1;
            r1 = r2;
        }
        r0
    }

    /// Inverse of self modulo c, reduced by `res`, or None when not coprime.
    pub fn inverse_mod(self, res: &ResidueSystem) -> Option<AlgebraicInteger> {
        let c = res.modulus();
        let (mut r0, mut r1) = (self, c);
        let (mut s0, mut s1) = (AlgebraicInteger::one(self.field), AlgebraicInteger::zero(self.field));
        while !r1.is_zero() {
            let (q, r2) = r0.divrem(r1);
            r0 = r1;
            r1 = r2;
            let s2 = s0 - q * s1;
            s0 = s1;
            s1 = s2;
        }
        // r0 = s0 * self + t * c for some t.
        if r0.norm() != 1 {
            return None;
        }
        // r0 is a unit, so r0^-1 = conj(r0).
        Some(res.reduce(s0 * r0.conj()))
    }

    /// The lexicographically largest (x, y) among unit multiples; a
    /// deterministic representative of the associate class.
    pub fn canonical_associate(self) -> AlgebraicInteger {
        let mut best = self;
        for u in self.field.units() {
            let cand = self * u;
            if (cand.x, cand.y) > (best.x, best.y) {
                best = cand;
            }
        }
        best
    }

    /// Prime factorization up to units: pairwise non-associate primes with
    /// multiplicities, primes in canonical-associate form, sorted by
    /// (norm, x, y). Trial division by elements of increasing norm.
    pub fn factor(self) -> Vec<(AlgebraicInteger, u32)> {
        assert!(!self.is_zero(), "cannot factor zero");
        let mut rest = self;
        let mut out: Vec<(AlgebraicInteger, u32)> = Vec::new();
        while rest.norm() > 1 {
            let p = smallest_prime_divisor(rest);
            let mut e = 0u32;
            while let Some(q) = AlgebraicInteger::exact_div(rest, p) {
                rest = q;
                e += 1;
            }
            out.push((p.canonical_associate(), e));
        }
        out.sort_by_key(|(p, _)| (p.norm(), p.x, p.y));
        out
    }
}

/// Smallest-norm nonunit divisor of a, which is necessarily prime.
fn smallest_prime_divisor(a: AlgebraicInteger) -> AlgebraicInteger {
    let na = a.norm();
    for n in 2..=na {
        if na % n != 0 {
            // A divisor's norm divides N(a).
            continue;
        }
        if let Some(p) = elements_of_norm(a.field, n)
            .into_iter()
            .find(|p| p.divides(a))
        {
            return p;
        }
    }
    unreachable!("nonunit element has a prime divisor");
}

/// All ring elements of norm exactly n, sorted by (x, y).
pub fn elements_of_norm(field: QuadField, n: i64) -> Vec<AlgebraicInteger> {
    let mut out = Vec::new();
    if n < 0 {
        return out;
    }
    let d = field.d() as i64;
    let ymax = if field.three_mod_four() {
        // (x + y/2)^2 + D y^2/4 = n
        ((4 * n) as f64 / d as f64).sqrt().floor() as i64
    } else {
        (n as f64 / d as f64).sqrt().floor() as i64
    };
    for y in -ymax..=ymax {
        // Solve the norm form for x at fixed y.
        let (t, q) = field.omega_poly();
        // x^2 + t x y + q y^2 = n
        let c = q * y * y - n;
        let disc = (t * y) * (t * y) - 4 * c;
        if disc < 0 {
            continue;
        }
        let rd = (disc as f64).sqrt().round() as i64;
        for try_rd in [rd - 1, rd, rd + 1] {
            if try_rd >= 0 && try_rd * try_rd == disc {
                for sign in [-1i64, 1] {
                    let num = -t * y + sign * try_rd;
                    if num % 2 == 0 {
                        let x = num / 2;
                        let cand = AlgebraicInteger::new(x, y, field);
                        if cand.norm() == n && !out.contains(&cand) {
                            out.push(cand);
                        }
                    }
                }
                break;
            }
        }
    }
    out.sort_by_key(|a| (a.x, a.y));
    out
}

fn mul_i128(a: AlgebraicInteger, b: AlgebraicInteger) -> (i128, i128) {
    let (t, q) = a.field.omega_poly();
    let (ax, ay, bx, by) = (a.x as i128, a.y as i128, b.x as i128, b.y as i128);
    // (ax + ay w)(bx + by w) with w^2 = t w - q.
    let x = ax * bx - q as i128 * ay * by;
    let y = ax * by + ay * bx + t as i128 * ay * by;
    (x, y)
}

fn round_ratio(r: Ratio<i128>) -> i128 {
    (r + Ratio::new(1, 2)).floor().to_integer()
}

impl Add for AlgebraicInteger {
    type Output = AlgebraicInteger;
    fn add(self, rhs: AlgebraicInteger) -> AlgebraicInteger {
        assert_eq!(self.field, rhs.field);
        AlgebraicInteger::new(self.x + rhs.x, self.y + rhs.y, self.field)
    }
}

impl Sub for AlgebraicInteger {
    type Output = AlgebraicInteger;
    fn sub(self, rhs: AlgebraicInteger) -> AlgebraicInteger {
        assert_eq!(self.field, rhs.field);
        AlgebraicInteger::new(self.x - rhs.x, self.y - rhs.y, self.field)
    }
}

impl Mul for AlgebraicInteger {
    type Output = AlgebraicInteger;
    fn mul(self, rhs: AlgebraicInteger) -> AlgebraicInteger {
        assert_eq!(self.field, rhs.field);
        let (x, y) = mul_i128(self, rhs);
        AlgebraicInteger::new(
            i64::try_from(x).expect("coordinate overflow"),
            i64::try_from(y).expect("coordinate overflow"),
            self.field,
        )
    }
}

impl Neg for AlgebraicInteger {
    type Output = AlgebraicInteger;
    fn neg(self) -> AlgebraicInteger {
        AlgebraicInteger::new(-self.x, -self.y, self.field)
    }
}

impl fmt::Display for AlgebraicInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.y == 0 {
            write!(f, "{}", self.x)
        } else if self.x == 0 {
            write!(f, "{}w", self.y)
        } else {
            write!(f, "{}{:+}w", self.x, self.y)
        }
    }
}

/// A point of the trace-dual lattice Lambda', stored as exact rational
/// coordinates (p, q) over the integral basis: w = p + q w_D.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct DualPoint {
    p: Ratio<i64>,
    q: Ratio<i64>,
    field: QuadField,
}

impl DualPoint {
    /// Builds p + q w_D, checking membership in Lambda' (both Tr(w) and
    /// Tr(w w_D) must be integers).
    pub fn new(p: Ratio<i64>, q: Ratio<i64>, field: QuadField) -> Result<DualPoint> {
        let pt = DualPoint { p, q, field };
        let (t, qq) = field.omega_poly();
        // Tr(w) = 2p + t q; Tr(w w_D) = t p + (t^2 - 2 qq) q.
        let tr1 = p * 2 + q * t;
        let tr2 = p * t + q * (t * t - 2 * qq);
        if tr1.is_integer() && tr2.is_integer() {
            Ok(pt)
        } else {
            Err(Error::InvalidParameter("point is not in the trace-dual lattice"))
        }
    }

    pub fn zero(field: QuadField) -> DualPoint {
        DualPoint { p: Ratio::zero(), q: Ratio::zero(), field }
    }

    pub fn p(self) -> Ratio<i64> {
        self.p
    }

    pub fn q(self) -> Ratio<i64> {
        self.q
    }

    pub fn field(self) -> QuadField {
        self.field
    }

    pub fn is_zero(self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    pub fn embed(self) -> Complex64 {
        let w = self.field.omega_embedding();
        Complex64::new(ratio_f64(self.p), 0.0) + w * ratio_f64(self.q)
    }

    pub fn conj(self) -> DualPoint {
        let (t, _) = self.field.omega_poly();
        DualPoint { p: self.p + self.q * t, q: -self.q, field: self.field }
    }

    pub fn neg(self) -> DualPoint {
        DualPoint { p: -self.p, q: -self.q, field: self.field }
    }

    /// w * a for a ring element a; Lambda' is an O_K-module, so the result
    /// is again a dual point.
    pub fn mul_ring(self, a: AlgebraicInteger) -> DualPoint {
        assert_eq!(self.field, a.field());
        let (t, qq) = self.field.omega_poly();
        let (ax, ay) = (Ratio::from_integer(a.x), Ratio::from_integer(a.y));
        let p = self.p * ax - self.q * ay * qq;
        let q = self.p * ay + self.q * ax + self.q * ay * t;
        DualPoint { p, q, field: self.field }
    }

    /// Exact rational coordinates of w / c in the field (not necessarily a
    /// dual point).
    fn div_ring_coords(self, c: AlgebraicInteger) -> (Ratio<i64>, Ratio<i64>) {
        assert!(!c.is_zero());
        let scaled = self.mul_ring(c.conj());
        let n = c.norm();
        (scaled.p / n, scaled.q / n)
    }

    /// Whether w / c still lies in Lambda'.
    pub fn div_ring_is_dual(self, c: AlgebraicInteger) -> bool {
        let (p, q) = self.div_ring_coords(c);
        DualPoint::new(p, q, self.field).is_ok()
    }

    /// Tr(w a / c) as an exact rational.
    pub fn trace_quot(self, a: AlgebraicInteger, c: AlgebraicInteger) -> Ratio<i64> {
        let wa = self.mul_ring(a);
        let (p, q) = wa.div_ring_coords(c);
        let (t, _) = self.field.omega_poly();
        p * 2 + q * t
    }
}

pub fn ratio_f64(r: Ratio<i64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// e(x) = exp(2 pi i x) for an exact rational x, reduced mod 1 before
/// rounding to floating point.
pub fn e_of_rational(x: Ratio<i64>) -> Complex64 {
    let frac = x - x.floor();
    let theta = 2.0 * core::f64::consts::PI * ratio_f64(frac);
    Complex64::new(theta.cos(), theta.sin())
}

/// The residue system O_K / c O_K.
///
/// The sublattice c O_K is put in triangular form with basis (e, 0), (f, g)
/// over the integral coordinates, so representatives are the (x, y) with
/// 0 <= x < e, 0 <= y < g and reduction is exact integer arithmetic.
pub struct ResidueSystem {
    modulus: AlgebraicInteger,
    e: i64,
    f: i64,
    g: i64,
}

impl ResidueSystem {
    pub fn new(c: AlgebraicInteger) -> Result<ResidueSystem> {
        if c.is_zero() {
            return Err(Error::InvalidParameter("modulus must be nonzero"));
        }
        let (t, q) = c.field().omega_poly();
        // Images of the basis under multiplication by c, as columns.
        let b1 = (c.x, c.y);
        let b2 = (-q * c.y, c.x + t * c.y);
        // Combine columns so the second has y-coordinate gcd(c.y, b2.1) and
        // the first has y-coordinate 0.
        let (g, s, tt) = xgcd(b1.1, b2.1);
        let e2x = s * b1.0 + tt * b2.0;
        debug_assert_eq!(s * b1.1 + tt * b2.1, g);
        let (k1, k2) = (b2.1 / g, b1.1 / g);
        let e1x = k1 * b1.0 - k2 * b2.0;
        let e = e1x.abs();
        let nc = c.norm();
        if e == 0 || g == 0 {
            return Err(Error::InvalidParameter("degenerate modulus lattice"));
        }
        let g = g.abs();
        let f = e2x.rem_euclid(e);
        debug_assert_eq!(e * g, nc);
        Ok(ResidueSystem { modulus: c, e, f, g })
    }

    pub fn modulus(&self) -> AlgebraicInteger {
        self.modulus
    }

    pub fn count(&self) -> u64 {
        (self.e * self.g) as u64
    }

    /// Canonical representative of a mod c.
    pub fn reduce(&self, a: AlgebraicInteger) -> AlgebraicInteger {
        assert_eq!(a.field(), self.modulus.field());
        let k = a.y.div_euclid(self.g);
        let y = a.y.rem_euclid(self.g);
        let x = (a.x - k * self.f).rem_euclid(self.e);
        AlgebraicInteger::new(x, y, a.field())
    }

    /// All representatives in lexicographic (x, y) order.
    pub fn representatives(&self) -> Vec<AlgebraicInteger> {
        let mut out = Vec::with_capacity(self.count() as usize);
        for x in 0..self.e {
            for y in 0..self.g {
                out.push(AlgebraicInteger::new(x, y, self.modulus.field()));
            }
        }
        out
    }

    /// The invertible residues paired with their inverses, in lexicographic
    /// order of the residue. For a unit modulus this is [(0, 0)] by
    /// convention: the single class is the identity class.
    pub fn invertible_pairs(&self) -> Vec<(AlgebraicInteger, AlgebraicInteger)> {
        let field = self.modulus.field();
        if self.modulus.norm() == 1 {
            return alloc::vec![(AlgebraicInteger::zero(field), AlgebraicInteger::zero(field))];
        }
        let mut out = Vec::new();
        for a in self.representatives() {
            if let Some(inv) = a.inverse_mod(self) {
                out.push((a, inv));
            }
        }
        out
    }
}

fn xgcd(a: i64, b: i64) -> (i64, i64, i64) {
    // Returns (g, s, t) with s a + t b = g, g = gcd(a, b) up to sign of inputs.
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i64, 0i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// Euler totient of the modulus: the number of invertible residues.
pub fn euler_phi(c: AlgebraicInteger) -> Result<u64> {
    let res = ResidueSystem::new(c)?;
    if c.norm() == 1 {
        return Ok(1);
    }
    Ok(res.invertible_pairs().len() as u64)
}

/// Euler totient from the prime factorization:
/// phi(c) = prod N(p)^(e-1) (N(p) - 1).
pub fn euler_phi_factored(c: AlgebraicInteger) -> Result<u64> {
    if c.is_zero() {
        return Err(Error::InvalidParameter("totient of zero"));
    }
    let mut phi = 1u64;
    for (p, e) in c.factor() {
        let np = p.norm() as u64;
        phi *= np.pow(e - 1) * (np - 1);
    }
    Ok(phi)
}
