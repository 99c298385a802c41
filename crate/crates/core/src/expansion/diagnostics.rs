//! Observational proxies: coefficient `ℓ²` ratio, a Muckenhoupt quotient for
//! `ω = |Δ|²` on the real line, and Gram conditioning of the root functions.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{Expansion, RootBasis};
use crate::characteristic::CharacteristicFn;
use crate::error::Result;
use crate::function_space::gauss_legendre;
use crate::random::smooth_function;
use crate::spectrum::Eigenvalue;

#[derive(Debug, Clone, Serialize)]
pub struct MuckenhouptReport {
    /// Largest `(⟨ω⟩_I)(⟨ω^{-1}⟩_I)` over the scanned intervals.
    pub sup_quotient: f64,
    pub worst_center: f64,
    pub worst_length: f64,
    pub intervals: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct GramReport {
    /// Condition number of the Gram matrix of L²-normalized root functions.
    pub condition: f64,
    /// Smallest `σ_min/σ_max` of a single root block.
    pub min_block_ratio: f64,
    pub size: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct DiagnosticsReport {
    /// `max ‖f̂‖_ℓ² / ‖f‖_L²` over random smooth `f`.
    pub coefficient_ratio_max: f64,
    pub coefficient_ratio_mean: f64,
    pub samples: usize,
    pub muckenhoupt: MuckenhouptReport,
    pub gram: GramReport,
}

const PANEL_POINTS: usize = 16;

/// `ω(t) = |Δ(t)|²` scanned over intervals of length `b/32 · 2^p ≤ 32π/b`
/// centred on `[−64π/b, 64π/b]` in steps of half a length.
pub fn muckenhoupt_scan(cf: &CharacteristicFn) -> Result<MuckenhouptReport> {
    let b = cf.segment().length();
    let rule = gauss_legendre(PANEL_POINTS);
    let span = 64.0 * PI / b;
    let mut report = MuckenhouptReport {
        sup_quotient: 0.0,
        worst_center: 0.0,
        worst_length: 0.0,
        intervals: 0,
    };
    let mut len = b / 32.0;
    while len <= 32.0 * PI / b * (1.0 + 1e-12) {
        let panels = ((len * b / PI * 4.0).ceil() as usize).max(1);
        let step = 0.5 * len;
        let count = (2.0 * span / step).floor() as i64;
        for j in 0..=count {
            let center = -span + j as f64 * step;
            let (mut avg_w, mut avg_inv) = (0.0, 0.0);
            let h = len / panels as f64;
            for p in 0..panels {
                let a = center - 0.5 * len + p as f64 * h;
                for &(t, w) in rule {
                    let x = a + 0.5 * h * (t + 1.0);
                    let om = cf.delta(Complex64::new(x, 0.0))?.norm_sqr();
                    avg_w += 0.5 * h * w * om;
                    avg_inv += 0.5 * h * w / om;
                }
            }
            let q = (avg_w / len) * (avg_inv / len);
            report.intervals += 1;
            if !(q <= report.sup_quotient) {
                report.sup_quotient = q;
                report.worst_center = center;
                report.worst_length = len;
            }
        }
        len *= 2.0;
    }
    Ok(report)
}

fn singular_values(m: DMatrix<Complex64>) -> (f64, f64) {
    let s = m.singular_values();
    let max = s.iter().copied().fold(0.0, f64::max);
    let min = s.iter().copied().fold(f64::INFINITY, f64::min);
    (min, max)
}

/// Gram conditioning of the normalized root functions.
pub fn gram_report(bases: &[RootBasis]) -> Result<GramReport> {
    let funcs: Vec<_> = bases
        .iter()
        .flat_map(|b| b.functions.iter())
        .map(|u| u.scale(Complex64::new(1.0 / u.l2_norm().max(f64::MIN_POSITIVE), 0.0)))
        .collect();
    let n = funcs.len();
    if n == 0 {
        return Ok(GramReport {
            condition: 1.0,
            min_block_ratio: 1.0,
            size: 0,
        });
    }
    let mut g = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
    for i in 0..n {
        for j in 0..n {
            g[(i, j)] = funcs[i].inner(&funcs[j])?;
        }
    }
    let (min, max) = singular_values(g);
    let mut min_block_ratio = f64::INFINITY;
    for b in bases {
        let m = b.functions.len();
        let block = DMatrix::from_fn(m, m, |i, j| b.functions[i].inner(&b.functions[j]).expect("same grid"));
        let (lo, hi) = singular_values(block);
        min_block_ratio = min_block_ratio.min(lo / hi);
    }
    Ok(GramReport {
        condition: max / min,
        min_block_ratio,
        size: n,
    })
}

impl Expansion {
    /// `‖f̂‖_ℓ² / ‖f‖_L²` over `samples` seeded random smooth functions.
    pub fn coefficient_ratio(&self, spectrum: &[Eigenvalue], radius: f64, samples: usize) -> Result<(f64, f64)> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed.wrapping_add(1));
        let mut max: f64 = 0.0;
        let mut sum = 0.0;
        for _ in 0..samples {
            let f = smooth_function(self.grid(), &mut rng);
            let r = self.fourier_transform(spectrum, &f, radius)?.l2_norm() / f.l2_norm();
            max = max.max(r);
            sum += r;
        }
        Ok((max, sum / samples.max(1) as f64))
    }

    pub fn diagnostics(&self, spectrum: &[Eigenvalue], radius: f64, samples: usize) -> Result<DiagnosticsReport> {
        let (coefficient_ratio_max, coefficient_ratio_mean) = self.coefficient_ratio(spectrum, radius, samples)?;
        let bases = spectrum
            .iter()
            .filter(|ev| ev.lambda.norm() <= radius)
            .map(|ev| self.basis(ev))
            .collect::<Result<Vec<_>>>()?;
        Ok(DiagnosticsReport {
            coefficient_ratio_max,
            coefficient_ratio_mean,
            samples,
            muckenhoupt: muckenhoupt_scan(&self.cf)?,
            gram: gram_report(&bases)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::{SigmaKind, SigmaSpec};
    use crate::function_space::Segment;

    #[test]
    fn constant_weight_has_unit_quotient() {
        let cf = CharacteristicFn::new(SigmaSpec::zero(Segment::new(2.0).unwrap()));
        let r = muckenhoupt_scan(&cf).unwrap();
        assert!((r.sup_quotient - 1.0).abs() < 1e-12);
        assert!(r.intervals > 100);
    }

    #[test]
    fn vanishing_weight_is_flagged() {
        let cf = CharacteristicFn::new(SigmaSpec::new(SigmaKind::ConstantImag { alpha: 0.5 }, Segment::new(PI).unwrap()).unwrap());
        let r = muckenhoupt_scan(&cf).unwrap();
        assert!(r.sup_quotient > 1e3, "{r:?}");
    }
}
