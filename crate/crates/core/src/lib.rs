//! Thermal operations, their perturbation-induced approximate variants, and
//! non-Markovianity measures on small system⊗bath models.
//!
//! The linear-algebra and optimization layers are generic over the real
//! scalar type ([`scalar::Real`]). The physics layers work in `f64`; the
//! aliases below name the concrete types used there.

pub mod error;
pub mod experiments;
pub mod linalg;
pub mod measures;
pub mod optimize;
pub mod scalar;
pub mod thermal;

pub use error::{Error, Result};

/// Double-precision complex matrix.
pub type ComplexMatrix = linalg::Matrix<f64>;
/// Double-precision density matrix.
pub type DensityMatrix = linalg::Density<f64>;
/// Double-precision unit ket.
pub type Ket = linalg::Ket<f64>;
/// Double-precision complex scalar.
pub type C64 = num_complex::Complex<f64>;
