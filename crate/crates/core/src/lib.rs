//! Spectral toolkit for `L = −i d/dx` on `[0, b]` under a nonlocal boundary
//! condition given by a boundary function σ.

pub mod boundary;
pub mod characteristic;
pub mod config;
pub mod convolution;
pub mod error;
pub mod expansion;
pub mod function_space;
pub mod io;
pub mod random;
pub mod resolvent;
pub mod spectrum;
pub mod verify;

pub use boundary::{SigmaKind, SigmaSpec};
pub use characteristic::CharacteristicFn;
pub use config::{Context, RunConfig, SigmaConfig};
pub use convolution::ConvolutionEngine;
pub use expansion::{Expansion, RootBasis, SequenceElement};
pub use error::{Error, Result};
pub use function_space::{make_grid, Grid, GridFunction, Segment};
pub use spectrum::{ContourSpec, Eigenvalue, SpectrumOptions};
