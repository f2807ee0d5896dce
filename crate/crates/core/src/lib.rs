//! de la Vallée-Poussin means in the Möbius-phase Fourier basis
//! `{e^{ikθ_a}}`, with measurement in generalized Hölder spaces.

pub mod bounds;
pub mod cli;
pub mod corpus;
pub mod error;
pub mod holder;
pub mod phase;
pub mod sampling;
mod spectral;
pub mod summation;

pub use error::{Error, Result};
