//! Complex-parameter special functions: the gamma function, Bessel J of
//! complex order and argument, Bessel K of complex order on the positive
//! axis, and the two-variable Bessel kernel attached to a spectral
//! parameter.

pub mod bessel_j;
pub mod bessel_k;
pub mod gamma;
pub mod kernel;

pub use bessel_j::bessel_j;
pub use bessel_k::bessel_k;
pub use gamma::{gamma, ln_gamma, recip_gamma};
pub use kernel::{bessel_kernel, bessel_kernel_sd, kernel_j_sd, SpectralParameter};
