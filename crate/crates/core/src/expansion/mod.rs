//! Root functions, spectral projections, coefficient functionals and the
//! biorthogonal system, the sequence-space transform, partial sums and
//! remainder diagnostics.

use std::sync::{Arc, OnceLock};

use crate::characteristic::CharacteristicFn;
use crate::convolution::ConvolutionEngine;
use crate::error::{Error, Result};
use crate::function_space::Grid;

mod basis;
mod biorthogonal;
mod coefficients;
pub mod diagnostics;
mod project;
mod remainder;
mod sequence;

pub use basis::{build_root_basis, RootBasis};
pub use biorthogonal::{PairingConvention, PairingReport};
pub use coefficients::Calibration;
pub use diagnostics::{DiagnosticsReport, GramReport, MuckenhouptReport};
pub use remainder::{admissible_radius, weighted_remainder_norm, PartialSum};
pub use sequence::{cauchy_convolve, SequenceElement};

/// Everything the expansion machinery needs for one (σ, grid) pair.
#[derive(Debug)]
pub struct Expansion {
    engine: ConvolutionEngine,
    cf: CharacteristicFn,
    seed: u64,
    paranoid: bool,
    calibration: OnceLock<Calibration>,
}

impl Expansion {
    pub fn new(engine: ConvolutionEngine, cf: CharacteristicFn) -> Result<Self> {
        if engine.segment() != cf.segment() {
            return Err(Error::Config("engine and characteristic function disagree on the segment".into()));
        }
        Ok(Self {
            engine,
            cf,
            seed: 0,
            paranoid: false,
            calibration: OnceLock::new(),
        })
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Cross-check every projection against its contour-integral definition.
    pub fn with_paranoid(mut self, paranoid: bool) -> Self {
        self.paranoid = paranoid;
        self
    }

    pub fn engine(&self) -> &ConvolutionEngine {
        &self.engine
    }

    pub fn characteristic(&self) -> &CharacteristicFn {
        &self.cf
    }

    pub fn grid(&self) -> &Arc<Grid> {
        self.engine.grid()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}
