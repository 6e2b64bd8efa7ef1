//! Building blocks for the Kuznetsov trace formula on PGL2 over an
//! imaginary quadratic field of class number one.
//!
//! The crate is organized bottom-up:
//!
//! * [`rings`]: exact arithmetic in the five norm-Euclidean rings of integers
//!   (D = 1, 2, 3, 7, 11), residue systems, and the trace-dual lattice that
//!   parameterizes additive characters.
//! * [`group`]: Iwasawa and Bruhat coordinates on GL2(C) together with the
//!   Haar densities in both charts, and the characters built on them.
//! * [`specfun`]: the complex-order special functions the formula runs on
//!   (gamma, J and K Bessel) and the two-variable Bessel kernel attached to a
//!   spectral parameter.
//! * [`quad`]: adaptive Gauss-Kronrod quadrature on intervals and, in polar
//!   form, over the complex plane with the doubled Lebesgue measure and the
//!   multiplicative measure.
//! * [`kloosterman`]: Kloosterman and Ramanujan sums over the ring, the
//!   enumeration of moduli, and truncated Kloosterman zeta series.
//! * [`whittaker`]: the Jacquet integral, its closed form, and the kernel
//!   formula relating Whittaker values across the Weyl element.
//! * [`traceformula`]: weight functions, the Bessel transform, and the
//!   geometric, discrete, and continuous sides assembled into a report.
//!
//! All complex-plane integrals use the measure that is twice the Lebesgue
//! measure of C = R^2; every constant in the crate is normalized against it.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod group;
pub mod kloosterman;
pub mod quad;
pub mod rings;
pub mod specfun;
pub mod traceformula;
pub mod whittaker;

pub use num_complex::Complex64;

use core::fmt;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A parameter is outside the documented domain of the operation.
    InvalidParameter(&'static str),
    /// The requested accuracy cannot be certified on these inputs. The best
    /// available value and its error estimate are carried along.
    ToleranceNotMet { requested: f64, achieved: f64, partial: Complex64 },
    /// Bruhat coordinates do not exist for elements of the Borel subgroup.
    BorelElement,
    /// An iteration failed to converge within its budget.
    ConvergenceFailure(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
            Error::ToleranceNotMet { requested, achieved, .. } => {
                write!(f, "tolerance not met: requested {requested:.3e}, achieved {achieved:.3e}")
            }
            Error::BorelElement => write!(f, "element lies in the Borel subgroup"),
            Error::ConvergenceFailure(what) => write!(f, "failed to converge: {what}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
