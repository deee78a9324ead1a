//! Special functions: Airy Ai, integer-order and generalized Bessel
//! functions by angular quadrature, and the Sinc family.

pub mod airy;
pub mod bessel;
pub mod quadrature;
pub mod sinc;

pub use airy::{airy_ai, airy_ai_complex, airy_ai_pair};
pub use bessel::{bessel_jn, bessel_jn_with, generalized_bessel, generalized_bessel_with};
pub use quadrature::{QuadratureRule, QuadratureSpec};
pub use sinc::box_sinc;
