//! Run configuration and the built-in presets.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::boundary::{SigmaKind, SigmaSpec};
use crate::characteristic::CharacteristicFn;
use crate::convolution::ConvolutionEngine;
use crate::error::{Error, Result};
use crate::expansion::Expansion;
use crate::function_space::{make_grid, Grid, Segment, DEFAULT_NODES, MIN_NODES};
use crate::io::read_function_csv;
use crate::resolvent::{DEFAULT_TOL_BOUNDARY, DEFAULT_TOL_ZERO};
use crate::spectrum::{SpectrumOptions, DEFAULT_POINTS};

/// Parameters of the double-zero fixture: `Δ(i) = Δ′(i) = 0` for
/// `σ(x) = i(α + γx/π)` on `[0, π]`.
pub const DOUBLE_ALPHA: f64 = 0.8068986895614672;
pub const DOUBLE_GAMMA: f64 = 0.8723122531361567;

/// σ as it appears in a config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SigmaConfig {
    Zero,
    ConstantImag { alpha: f64 },
    IndicatorI { c: f64 },
    LinearImag { alpha: f64, gamma: f64 },
    /// CSV `x,re,im`, relative to the config file.
    Sampled { path: PathBuf },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub b: f64,
    pub sigma: SigmaConfig,
    /// Grid nodes.
    pub n: usize,
    /// Spectrum radius.
    pub radius: f64,
    pub tol_zero: f64,
    pub tol_boundary: f64,
    pub contour_points: usize,
    pub seed: u64,
    /// Cross-check projections against their contour form.
    pub paranoid: bool,
    #[serde(skip)]
    pub base_dir: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            b: std::f64::consts::PI,
            sigma: SigmaConfig::Zero,
            n: DEFAULT_NODES,
            radius: 20.0,
            tol_zero: DEFAULT_TOL_ZERO,
            tol_boundary: DEFAULT_TOL_BOUNDARY,
            contour_points: DEFAULT_POINTS,
            seed: 0,
            paranoid: false,
            base_dir: None,
        }
    }
}

pub const PRESETS: [&str; 4] = ["zero", "antiperiodic", "empty", "double"];

impl RunConfig {
    pub fn preset(name: &str) -> Result<Self> {
        let pi = std::f64::consts::PI;
        let base = Self::default();
        let cfg = match name {
            "zero" => Self { radius: 10.0, ..base },
            "antiperiodic" => Self {
                sigma: SigmaConfig::ConstantImag { alpha: 0.5 },
                radius: 21.0,
                ..base
            },
            "empty" => Self {
                sigma: SigmaConfig::IndicatorI { c: pi },
                radius: 100.0,
                ..base
            },
            "double" => Self {
                sigma: SigmaConfig::LinearImag {
                    alpha: DOUBLE_ALPHA,
                    gamma: DOUBLE_GAMMA,
                },
                radius: 10.0,
                ..base
            },
            other => {
                return Err(Error::Config(format!(
                    "unknown preset {other:?}; expected one of {}",
                    PRESETS.join(", ")
                )))
            }
        };
        Ok(cfg)
    }

    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut cfg: Self = serde_json::from_str(&text)?;
        cfg.base_dir = path.parent().map(Path::to_path_buf);
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("b", self.b),
            ("radius", self.radius),
            ("tol_zero", self.tol_zero),
            ("tol_boundary", self.tol_boundary),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        if self.n < MIN_NODES {
            return Err(Error::Config(format!("n must be at least {MIN_NODES}, got {}", self.n)));
        }
        if self.contour_points < 8 {
            return Err(Error::Config(format!("contour_points must be at least 8, got {}", self.contour_points)));
        }
        Ok(())
    }

    pub fn segment(&self) -> Result<Segment> {
        Segment::new(self.b)
    }

    pub fn grid(&self) -> Result<Arc<Grid>> {
        make_grid(self.segment()?, self.n)
    }

    pub fn sigma_spec(&self, grid: &Arc<Grid>) -> Result<SigmaSpec> {
        let kind = match &self.sigma {
            SigmaConfig::Zero => SigmaKind::Zero,
            SigmaConfig::ConstantImag { alpha } => SigmaKind::ConstantImag { alpha: *alpha },
            SigmaConfig::IndicatorI { c } => SigmaKind::IndicatorI { c: *c },
            SigmaConfig::LinearImag { alpha, gamma } => SigmaKind::LinearImag {
                alpha: *alpha,
                gamma: *gamma,
            },
            SigmaConfig::Sampled { path } => {
                let full = match &self.base_dir {
                    Some(dir) if path.is_relative() => dir.join(path),
                    _ => path.clone(),
                };
                SigmaKind::Sampled(read_function_csv(&full, grid)?)
            }
        };
        SigmaSpec::new(kind, self.segment()?)
    }

    pub fn spectrum_options(&self) -> SpectrumOptions {
        SpectrumOptions {
            tol_zero: self.tol_zero,
            points: self.contour_points,
            ..SpectrumOptions::default()
        }
    }

    /// Grid, σ, Δ, convolution engine and expansion built from this config.
    pub fn build(&self) -> Result<Context> {
        self.validate()?;
        let grid = self.grid()?;
        let sigma = self.sigma_spec(&grid)?;
        let cf = CharacteristicFn::new(sigma.clone());
        let engine = ConvolutionEngine::new(sigma.clone(), grid.clone())?.with_tol_zero(self.tol_zero);
        let expansion = Expansion::new(engine.clone(), cf.clone())?.with_seed(self.seed)
            .with_paranoid(self.paranoid);
        Ok(Context {
            config: self.clone(),
            grid,
            sigma,
            cf,
            engine,
            expansion,
        })
    }
}

/// Everything a run needs, built once.
#[derive(Debug)]
pub struct Context {
    pub config: RunConfig,
    pub grid: Arc<Grid>,
    pub sigma: SigmaSpec,
    pub cf: CharacteristicFn,
    pub engine: ConvolutionEngine,
    pub expansion: Expansion,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_json_forms() {
        let s: SigmaConfig = serde_json::from_str(r#"{"kind": "constant_imag", "alpha": 0.5}"#).unwrap();
        assert_eq!(s, SigmaConfig::ConstantImag { alpha: 0.5 });
        let s: SigmaConfig = serde_json::from_str(r#"{"kind": "indicator_i", "c": 2.5}"#).unwrap();
        assert_eq!(s, SigmaConfig::IndicatorI { c: 2.5 });
        let s: SigmaConfig = serde_json::from_str(r#"{"kind": "zero"}"#).unwrap();
        assert_eq!(s, SigmaConfig::Zero);
        let s: SigmaConfig = serde_json::from_str(r#"{"kind": "sampled", "path": "sigma.csv"}"#).unwrap();
        assert_eq!(s, SigmaConfig::Sampled { path: "sigma.csv".into() });
    }

    #[test]
    fn partial_config_takes_defaults() {
        let c: RunConfig = serde_json::from_str(r#"{"sigma": {"kind": "constant_imag", "alpha": 0.5}, "n": 64}"#).unwrap();
        assert_eq!(c.n, 64);
        assert_eq!(c.seed, 0);
        assert!(c.validate().is_ok());
    }

    #[test]
    fn rejects_bad_values() {
        let c = RunConfig { n: 4, ..RunConfig::default() };
        assert!(matches!(c.validate(), Err(Error::Config(_))));
        let c = RunConfig { tol_zero: 0.0, ..RunConfig::default() };
        assert!(matches!(c.validate(), Err(Error::Config(_))));
        assert!(RunConfig::preset("nope").is_err());
        assert!(serde_json::from_str::<RunConfig>(r#"{"bogus": 1}"#).is_err());
    }

    #[test]
    fn presets_build() {
        for p in PRESETS {
            let mut c = RunConfig::preset(p).unwrap();
            c.n = 16;
            c.build().unwrap();
        }
    }

    #[test]
    fn double_constants_match_fixture() {
        let text = include_str!("../tests/fixtures/double_zero.json");
        let v: serde_json::Value = serde_json::from_str(text).unwrap();
        assert_eq!(v["alpha"].as_f64().unwrap(), DOUBLE_ALPHA);
        assert_eq!(v["gamma"].as_f64().unwrap(), DOUBLE_GAMMA);
    }
}
