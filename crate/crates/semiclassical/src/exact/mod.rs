//! Exact and high-precision arithmetic: scalars, dense polynomials, the
//! symbolic parameter algebra and combinatorial helpers.

pub mod combinat;
pub mod mpoly;
pub mod poly;
pub mod ring;
pub mod scalar;

pub use combinat::{
    elementary_symmetric, falling_factorial, pochhammer, pochhammer_multi, stirling_convert,
    BasisChange,
};
pub use mpoly::MPoly;
pub use poly::{BiPoly, Poly};
pub use ring::Ring;
pub use scalar::{Precision, Scalar};
