//! Dirac brackets, induced dynamics and factorization solutions on the
//! cotangent bundle of a double Lie group, with SL(2,C) = SU(2)·B as the
//! shipped instance.

pub mod aks;
pub mod dirac;
pub mod error;
pub mod group;
pub mod linalg;
pub mod sampler;
pub mod sl2c;
pub mod sl2c_example;
pub mod verify;

pub use error::{Error, Result};
