use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::Expansion;
use crate::error::{Error, Result};
use crate::function_space::GridFunction;
use crate::spectrum::Eigenvalue;

/// A truncated element of `X = ∏ ℂ^{m_n}`: blocks `(C_0, …, C_{m_n−1})`
/// keyed by eigenvalue index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceElement {
    pub blocks: BTreeMap<usize, Vec<Complex64>>,
    /// Truncation radius.
    pub radius: f64,
}

impl SequenceElement {
    fn check_shape(&self, other: &SequenceElement) -> Result<()> {
        let same = self.blocks.len() == other.blocks.len()
            && self
                .blocks
                .iter()
                .zip(&other.blocks)
                .all(|((i, a), (j, b))| i == j && a.len() == b.len());
        if same {
            Ok(())
        } else {
            Err(Error::Config("sequence elements have different block structure".into()))
        }
    }

    pub fn add(&self, other: &SequenceElement) -> Result<SequenceElement> {
        self.check_shape(other)?;
        Ok(SequenceElement {
            blocks: self
                .blocks
                .iter()
                .map(|(&i, a)| (i, a.iter().zip(&other.blocks[&i]).map(|(x, y)| x + y).collect()))
                .collect(),
            radius: self.radius.min(other.radius),
        })
    }

    pub fn scale(&self, c: Complex64) -> SequenceElement {
        SequenceElement {
            blocks: self.blocks.iter().map(|(&i, a)| (i, a.iter().map(|x| x * c).collect())).collect(),
            radius: self.radius,
        }
    }

    pub fn max_diff(&self, other: &SequenceElement) -> Result<f64> {
        self.check_shape(other)?;
        Ok(self
            .blocks
            .iter()
            .flat_map(|(i, a)| a.iter().zip(&other.blocks[i]).map(|(x, y)| (x - y).norm()))
            .fold(0.0, f64::max))
    }

    /// `ℓ²` norm over all blocks.
    pub fn l2_norm(&self) -> f64 {
        self.blocks.values().flatten().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// Blockwise Cauchy product truncated at each block length.
pub fn cauchy_convolve(a: &SequenceElement, b: &SequenceElement) -> Result<SequenceElement> {
    a.check_shape(b)?;
    let blocks = a
        .blocks
        .iter()
        .map(|(&i, x)| {
            let y = &b.blocks[&i];
            let prod = (0..x.len()).map(|k| (0..=k).map(|p| x[p] * y[k - p]).sum()).collect();
            (i, prod)
        })
        .collect();
    Ok(SequenceElement {
        blocks,
        radius: a.radius.min(b.radius),
    })
}

impl Expansion {
    /// `f̂`: coefficient blocks for every eigenvalue with `|λₙ| ≤ radius`.
    pub fn fourier_transform(&self, spectrum: &[Eigenvalue], f: &GridFunction, radius: f64) -> Result<SequenceElement> {
        let mut blocks = BTreeMap::new();
        for (idx, ev) in spectrum.iter().enumerate() {
            if ev.lambda.norm() <= radius {
                blocks.insert(idx, self.coefficients(ev, f)?);
            }
        }
        Ok(SequenceElement { blocks, radius })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(blocks: &[Vec<Complex64>]) -> SequenceElement {
        SequenceElement {
            blocks: blocks.iter().cloned().enumerate().collect(),
            radius: 1.0,
        }
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn cauchy_examples() {
        let p = cauchy_convolve(&el(&[vec![c(2.0, 1.0)]]), &el(&[vec![c(0.0, 3.0)]])).unwrap();
        assert_eq!(p.blocks[&0], vec![c(2.0, 1.0) * c(0.0, 3.0)]);
        let a = c(0.5, -1.0);
        let b = c(2.0, 0.25);
        let p = cauchy_convolve(&el(&[vec![c(1.0, 0.0), c(0.0, 0.0)]]), &el(&[vec![a, b]])).unwrap();
        assert_eq!(p.blocks[&0], vec![a, b]);
        let e1 = el(&[vec![c(0.0, 0.0), c(1.0, 0.0)]]);
        let p = cauchy_convolve(&e1, &e1).unwrap();
        assert_eq!(p.blocks[&0], vec![c(0.0, 0.0), c(0.0, 0.0)]);
    }

    #[test]
    fn mismatched_blocks_are_rejected() {
        let a = el(&[vec![c(1.0, 0.0)]]);
        let b = el(&[vec![c(1.0, 0.0), c(0.0, 0.0)]]);
        assert!(matches!(cauchy_convolve(&a, &b), Err(Error::Config(_))));
    }
}
