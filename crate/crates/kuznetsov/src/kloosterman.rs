//! Kloosterman sums, Ramanujan sums, and truncated zeta series over the
//! five class-number-one imaginary quadratic rings.
//!
//! The modulus set of the one-cusp lattice is parameterized by a root c in
//! (O_K \ 0) / {+-1}; the Bruhat torus coordinate of an integral
//! determinant-1 matrix with lower-left entry c is c^2, so the modulus
//! attached to a root is its square. Sums over residues use exact rational
//! phases (coordinates of Tr(w a / c) reduced mod 1) accumulated in sorted
//! order with pairwise summation, which makes the index-swap symmetry and
//! the c -> -c invariance bit-exact. The brute-force residue sum is the
//! semantic definition; the CRT factorization is an optimization that the
//! tests hold to the brute-force oracle.

use crate::group::MultiplicativeCharacter;
use crate::rings::{
    e_of_rational, elements_of_norm, AlgebraicInteger, DualPoint, QuadField,
    ResidueSystem,
};
use crate::{Complex64, Error, Result};
use alloc::vec::Vec;
use num_rational::Ratio;
#[allow(unused_imports)] // float intrinsics come from the trait in no_std builds
use num_traits::Float;

/// One Kloosterman sum Kl(c^2; psi_1, psi_2) together with its provenance.
#[derive(Clone, Copy, Debug)]
pub struct KloostermanRecord {
    pub c_root: AlgebraicInteger,
    /// The modulus c_root^2 as a complex number.
    pub modulus: Complex64,
    pub value: Complex64,
    /// Number of residue pairs summed; equals the Euler totient of c_root.
    pub term_count: u64,
}

/// A truncation of the zeta series Z(mu; 0, omega) = sum over moduli c of
/// Kl(c; 1, psi_omega) / (mu(c) delta(c)^{1/2}).
#[derive(Clone, Copy, Debug)]
pub struct ZetaTruncation {
    pub mu: MultiplicativeCharacter,
    pub omega: DualPoint,
    /// Every root with N(c_root) <= norm_bound is included.
    pub norm_bound: i64,
    pub value: Complex64,
    /// Bound on the omitted terms via |Kl| <= phi; infinite when the
    /// abscissa Re(s) <= 1/2 gives no absolute convergence.
    pub tail_estimate: f64,
    /// Set when the character is nontrivial on the unit stabilizer (its d
    /// is not a multiple of the unit action order) and the series vanishes
    /// identically.
    pub identically_zero: bool,
}

/// Abel-smoothed evaluation of the zeta series at abscissae without
/// absolute convergence: three exponentially damped truncations and their
/// quadratic extrapolation to zero damping. No accuracy certificate.
#[derive(Clone, Copy, Debug)]
pub struct SmoothedZeta {
    pub epsilons: [f64; 3],
    pub values: [Complex64; 3],
    pub extrapolated: Complex64,
    pub identically_zero: bool,
    pub experimental: bool,
}

pub const SMOOTHING_EPSILONS: [f64; 3] = [0.02, 0.01, 0.005];

/// Deterministic pairwise sum in the slice order.
fn pairwise_sum(vals: &[Complex64]) -> Complex64 {
    match vals.len() {
        0 => Complex64::new(0.0, 0.0),
        1 => vals[0],
        n => {
            let (a, b) = vals.split_at(n / 2);
            pairwise_sum(a) + pairwise_sum(b)
        }
    }
}

/// All roots c in (O_K \ 0) / {+-1} with N(c) <= norm_bound, ordered by
/// norm and then lexicographically by coordinates.
pub fn enumerate_moduli(field: QuadField, norm_bound: i64) -> Vec<AlgebraicInteger> {
    let mut out = Vec::new();
    for n in 1..=norm_bound.max(0) {
        for a in elements_of_norm(field, n) {
            // Keep the lexicographically larger of {a, -a}.
            if (a.x, a.y) < (-a.x, -a.y) {
                continue;
            }
            out.push(a);
        }
    }
    out
}

fn check_same_field(c: AlgebraicInteger, omegas: &[DualPoint]) -> Result<()> {
    if c.is_zero() {
        return Err(Error::InvalidParameter("zero modulus"));
    }
    if omegas.iter().any(|w| w.field() != c.field()) {
        return Err(Error::InvalidParameter("mixed fields"));
    }
    Ok(())
}

/// Sorted exact phases of e(Tr((w1 a + w2 a^-1)/c)) over invertible
/// residues a mod c.
fn residue_phases(
    c: AlgebraicInteger,
    omega1: DualPoint,
    omega2: DualPoint,
) -> Result<Vec<Ratio<i64>>> {
    let res = ResidueSystem::new(c)?;
    let mut phases: Vec<Ratio<i64>> = res
        .invertible_pairs()
        .into_iter()
        .map(|(a1, a2)| {
            let ph = omega1.trace_quot(a1, c) + omega2.trace_quot(a2, c);
            ph - ph.floor()
        })
        .collect();
    phases.sort_unstable();
    Ok(phases)
}

fn record_from_phases(c_root: AlgebraicInteger, phases: &[Ratio<i64>]) -> KloostermanRecord {
    let terms: Vec<Complex64> = phases.iter().map(|&p| e_of_rational(p)).collect();
    let e = c_root.embed();
    KloostermanRecord {
        c_root,
        modulus: e * e,
        value: pairwise_sum(&terms),
        term_count: terms.len() as u64,
    }
}

/// The Kloosterman sum by its definition: the full residue sum. This is
/// the oracle all optimizations answer to.
pub fn kloosterman_sum(
    c_root: AlgebraicInteger,
    omega1: DualPoint,
    omega2: DualPoint,
) -> Result<KloostermanRecord> {
    check_same_field(c_root, &[omega1, omega2])?;
    if omega1.is_zero() || omega2.is_zero() {
        return Err(Error::InvalidParameter(
            "kloosterman_sum needs nonzero characters; use ramanujan_sum",
        ));
    }
    let phases = residue_phases(c_root, omega1, omega2)?;
    Ok(record_from_phases(c_root, &phases))
}

/// Extended Euclid in O_K: (g, s, t) with s a + t b = g = gcd(a, b).
fn xgcd_ring(
    a: AlgebraicInteger,
    b: AlgebraicInteger,
) -> (AlgebraicInteger, AlgebraicInteger, AlgebraicInteger) {
    let field = a.field();
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (AlgebraicInteger::one(field), AlgebraicInteger::zero(field));
    let (mut t0, mut t1) = (AlgebraicInteger::zero(field), AlgebraicInteger::one(field));
    while !r1.is_zero() {
        let (q, r2) = r0.divrem(r1);
        r0 = r1;
        r1 = r2;
        let s2 = s0 - q * s1;
        s0 = s1;
        s1 = s2;
        let t2 = t0 - q * t1;
        t0 = t1;
        t1 = t2;
    }
    (r0, s0, t0)
}

/// Kloosterman sum via twisted multiplicativity: for coprime u, v with
/// p v + q u = 1, the residue sum mod uv splits as
/// Kl(uv; w1, w2) = Kl(u; p w1, p w2) Kl(v; q w1, q w2),
/// because 1/(uv) = p/u + q/v termwise in the phase. Each prime-power
/// block falls back to the brute-force sum.
pub fn kloosterman_sum_fast(
    c_root: AlgebraicInteger,
    omega1: DualPoint,
    omega2: DualPoint,
) -> Result<KloostermanRecord> {
    check_same_field(c_root, &[omega1, omega2])?;
    let fac = c_root.factor();
    if fac.len() <= 1 {
        return kloosterman_sum(c_root, omega1, omega2);
    }
    // Split off the first prime-power block; the cofactor keeps the unit.
    let (p1, e1) = fac[0];
    let mut u = AlgebraicInteger::one(c_root.field());
    for _ in 0..e1 {
        u = u * p1;
    }
    let v = AlgebraicInteger::exact_div(c_root, u)
        .expect("factor() produced a non-divisor");
    let (g, s, t) = xgcd_ring(u, v);
    debug_assert_eq!(g.norm(), 1, "prime-power blocks must be coprime");
    // g is a unit, so its inverse is its conjugate.
    let p = t * g.conj();
    let q = s * g.conj();
    let left = kloosterman_sum_fast(u, omega1.mul_ring(p), omega2.mul_ring(p))?;
    let right = kloosterman_sum_fast(v, omega1.mul_ring(q), omega2.mul_ring(q))?;
    let e = c_root.embed();
    Ok(KloostermanRecord {
        c_root,
        modulus: e * e,
        value: left.value * right.value,
        term_count: left.term_count * right.term_count,
    })
}

/// The Ramanujan sum: sum of e(Tr(w a / c)) over invertible residues. The
/// zero character is allowed and gives the totient.
pub fn ramanujan_sum(c_root: AlgebraicInteger, omega: DualPoint) -> Result<Complex64> {
    check_same_field(c_root, &[omega])?;
    let res = ResidueSystem::new(c_root)?;
    let mut phases: Vec<Ratio<i64>> = res
        .invertible_pairs()
        .into_iter()
        .map(|(a, _)| {
            let ph = omega.trace_quot(a, c_root);
            ph - ph.floor()
        })
        .collect();
    phases.sort_unstable();
    let terms: Vec<Complex64> = phases.iter().map(|&p| e_of_rational(p)).collect();
    Ok(pairwise_sum(&terms))
}

/// The Ramanujan sum by the divisor identity
/// sum over d | c of mobius(c/d) N(d) [w/d in the dual lattice],
/// which follows from detecting invertibility with the Mobius function and
/// collapsing full additive character sums. Integer-exact.
pub fn ramanujan_sum_fast(c_root: AlgebraicInteger, omega: DualPoint) -> Result<Complex64> {
    check_same_field(c_root, &[omega])?;
    let fac = c_root.factor();
    // Walk divisors d = prod p^j; mobius(c/d) vanishes unless every
    // exponent deficit is 0 or 1.
    let mut total: i64 = 0;
    let nblocks = fac.len();
    let mut choice = alloc::vec![0u8; nblocks]; // deficit per prime: 0 or 1
    loop {
        let mut d = AlgebraicInteger::one(c_root.field());
        let mut sign = 1i64;
        let mut valid = true;
        for (i, &(p, e)) in fac.iter().enumerate() {
            let deficit = choice[i] as u32;
            if deficit > e {
                valid = false;
                break;
            }
            if deficit == 1 {
                sign = -sign;
            }
            for _ in 0..(e - deficit) {
                d = d * p;
            }
        }
        if valid && omega.div_ring_is_dual(d) {
            total += sign * d.norm();
        }
        // Increment the binary choice vector.
        let mut i = 0;
        while i < nblocks {
            if choice[i] == 0 {
                choice[i] = 1;
                break;
            }
            choice[i] = 0;
            i += 1;
        }
        if i == nblocks {
            break;
        }
    }
    Ok(Complex64::new(total as f64, 0.0))
}

fn character_denominator(mu: &MultiplicativeCharacter, c: AlgebraicInteger) -> Complex64 {
    let e = c.embed();
    // mu(c^2) * delta(c^2)^{1/2}, and delta(c^2)^{1/2} = |c|^2 = N(c).
    mu.eval(e * e) * (c.norm() as f64)
}

fn unit_character_vanishes(mu: &MultiplicativeCharacter, field: QuadField) -> bool {
    mu.d.rem_euclid(field.unit_action_order() as i32) != 0
}

/// Truncation of the zeta series over moduli c_root^2 with
/// N(c_root) <= norm_bound, for characters with Re(s) large.
pub fn zeta_series(
    mu: MultiplicativeCharacter,
    omega: DualPoint,
    norm_bound: i64,
) -> Result<ZetaTruncation> {
    if omega.is_zero() {
        return Err(Error::InvalidParameter(
            "the omega = 0 zeta series has poles; only omega != 0 is supported",
        ));
    }
    let field = omega.field();
    if unit_character_vanishes(&mu, field) {
        return Ok(ZetaTruncation {
            mu,
            omega,
            norm_bound,
            value: Complex64::new(0.0, 0.0),
            tail_estimate: 0.0,
            identically_zero: true,
        });
    }
    let mut terms = Vec::new();
    for c in enumerate_moduli(field, norm_bound) {
        let r = ramanujan_sum_fast(c, omega)?;
        terms.push(r / character_denominator(&mu, c));
    }
    let value = pairwise_sum(&terms);
    let sigma = mu.s.re;
    // |term| <= phi(c)/N(c)^{1+2 sigma} <= N(c)^{-2 sigma}; the number of
    // roots of norm <= X is under 4X in every supported field, so partial
    // summation bounds the tail by 8 sigma B^{1-2 sigma} / (2 sigma - 1).
    let tail_estimate = if sigma > 0.5 {
        let b = norm_bound.max(1) as f64;
        8.0 * sigma * b.powf(1.0 - 2.0 * sigma) / (2.0 * sigma - 1.0)
    } else {
        f64::INFINITY
    };
    Ok(ZetaTruncation {
        mu,
        omega,
        norm_bound,
        value,
        tail_estimate,
        identically_zero: false,
    })
}

/// Abel-smoothed zeta series: each term is damped by exp(-eps N(c^2)) for
/// the three epsilons, and the damped values are extrapolated quadratically
/// to eps = 0. Experimental by construction: the extrapolation has no
/// error certificate at abscissae without absolute convergence.
pub fn zeta_series_smoothed(
    mu: MultiplicativeCharacter,
    omega: DualPoint,
    norm_bound: i64,
) -> Result<SmoothedZeta> {
    if omega.is_zero() {
        return Err(Error::InvalidParameter(
            "the omega = 0 zeta series has poles; only omega != 0 is supported",
        ));
    }
    let field = omega.field();
    if unit_character_vanishes(&mu, field) {
        return Ok(SmoothedZeta {
            epsilons: SMOOTHING_EPSILONS,
            values: [Complex64::new(0.0, 0.0); 3],
            extrapolated: Complex64::new(0.0, 0.0),
            identically_zero: true,
            experimental: true,
        });
    }
    let moduli = enumerate_moduli(field, norm_bound);
    let mut per_eps: [Vec<Complex64>; 3] = [Vec::new(), Vec::new(), Vec::new()];
    for c in moduli {
        let r = ramanujan_sum_fast(c, omega)?;
        let base = r / character_denominator(&mu, c);
        let nmod = (c.norm() * c.norm()) as f64;
        for (k, &eps) in SMOOTHING_EPSILONS.iter().enumerate() {
            per_eps[k].push(base * (-eps * nmod).exp());
        }
    }
    let values = [
        pairwise_sum(&per_eps[0]),
        pairwise_sum(&per_eps[1]),
        pairwise_sum(&per_eps[2]),
    ];
    // Quadratic Lagrange extrapolation of (eps, value) to eps = 0 for the
    // fixed epsilon triple (2h, h, h/2): weights 1/3, -2, 8/3.
    let extrapolated = values[0] / 3.0 - values[1] * 2.0 + values[2] * (8.0 / 3.0);
    Ok(SmoothedZeta {
        epsilons: SMOOTHING_EPSILONS,
        values,
        extrapolated,
        identically_zero: false,
        experimental: true,
    })
}
