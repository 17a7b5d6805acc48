//! Special functions, quadrature, and root finding used by the solvers.

pub mod airy;
pub mod quad;
pub mod roots;

pub use airy::{airy_ai, airy_ai_prime, airy_ai_with_prime, airy_zero};
pub use quad::{integrate, integrate_to_infinity, Estimate, Quadrature};
pub use roots::find_root;
