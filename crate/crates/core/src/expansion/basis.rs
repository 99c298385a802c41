use std::sync::Arc;

use num_complex::Complex64;

use super::Expansion;
use crate::error::Result;
use crate::function_space::{Grid, GridFunction};
use crate::spectrum::Eigenvalue;

/// Root functions `u_s` (and, when requested, the biorthogonal `h_k`) at one
/// eigenvalue.
#[derive(Debug, Clone)]
pub struct RootBasis {
    pub eigenvalue: Eigenvalue,
    /// `u_0, …, u_{m−1}`; `(L − λ) u_{s+1} = u_s`.
    pub functions: Vec<GridFunction>,
    /// `h_0, …, h_{m−1}`; empty unless built with them.
    pub biorthogonal: Vec<GridFunction>,
}

impl RootBasis {
    /// `u_{m−1}`, the kernel of the projection.
    pub fn top(&self) -> &GridFunction {
        self.functions.last().expect("multiplicity is at least one")
    }

    pub fn multiplicity(&self) -> usize {
        self.eigenvalue.multiplicity
    }
}

/// `u_s(x) = −Σ_{j ≤ s} d_j/j! · (ix)^{s−j}/(s−j)! · exp(iλx)`.
///
/// The overall minus makes `u_{m−1} = −res exp(iλx)/Δ(λ)`, so that
/// `u_{m−1} ∗ f` is the spectral projection `−(1/2πi)∮ (L − λ)^{-1} f dλ`
/// under the `+i` convolution.
pub fn build_root_basis(grid: &Arc<Grid>, ev: &Eigenvalue) -> Result<RootBasis> {
    ev.validate()?;
    let m = ev.multiplicity;
    let mut fact = vec![1.0; m];
    for k in 1..m {
        fact[k] = fact[k - 1] * k as f64;
    }
    let i = Complex64::i();
    let functions = (0..m)
        .map(|s| {
            grid.sample(|x| {
                let ix = i * x;
                let p: Complex64 = (0..=s)
                    .map(|j| ev.taylor[j] / fact[j] * ix.powu((s - j) as u32) / fact[s - j])
                    .sum();
                -p * (i * ev.lambda * x).exp()
            })
        })
        .collect();
    Ok(RootBasis {
        eigenvalue: ev.clone(),
        functions,
        biorthogonal: Vec::new(),
    })
}

impl Expansion {
    pub fn basis(&self, ev: &Eigenvalue) -> Result<RootBasis> {
        build_root_basis(self.grid(), ev)
    }

    /// Root functions together with the biorthogonal system.
    pub fn full_basis(&self, ev: &Eigenvalue) -> Result<RootBasis> {
        let mut basis = self.basis(ev)?;
        basis.biorthogonal = self.biorthogonal(ev)?;
        Ok(basis)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::function_space::{make_grid, Segment};
    use std::f64::consts::PI;

    #[test]
    fn simple_zero_basis() {
        let g = make_grid(Segment::new(PI).unwrap(), 32).unwrap();
        let d0 = Complex64::new(0.0, 2.0 / PI);
        let ev = Eigenvalue {
            lambda: Complex64::new(1.0, 0.0),
            multiplicity: 1,
            taylor: vec![d0],
        };
        let b = build_root_basis(&g, &ev).unwrap();
        let want = g.sample(|x| -d0 * (Complex64::i() * x).exp());
        assert!(b.functions[0].max_diff(&want) < 1e-15);
    }

    #[test]
    fn double_zero_chain() {
        let g = make_grid(Segment::new(2.0).unwrap(), 48).unwrap();
        let l = Complex64::new(0.7, 0.3);
        let d = vec![Complex64::new(1.5, -0.5), Complex64::new(0.2, 0.9)];
        let ev = Eigenvalue {
            lambda: l,
            multiplicity: 2,
            taylor: d.clone(),
        };
        let b = build_root_basis(&g, &ev).unwrap();
        // u_1 = −(d_0 ix + d_1) exp(iλx)
        let want = g.sample(|x| -(d[0] * Complex64::i() * x + d[1]) * (Complex64::i() * l * x).exp());
        assert!(b.functions[1].max_diff(&want) < 1e-14);
        let lu1 = &b.functions[1].differentiate().scale(-Complex64::i()) - &b.functions[1].scale(l);
        assert!(lu1.max_diff(&b.functions[0]) < 1e-11);
        let lu0 = &b.functions[0].differentiate().scale(-Complex64::i()) - &b.functions[0].scale(l);
        assert!(lu0.max_abs() < 1e-11);
    }

    #[test]
    fn rejects_vanishing_leading_coefficient() {
        let g = make_grid(Segment::new(1.0).unwrap(), 16).unwrap();
        let ev = Eigenvalue {
            lambda: Complex64::new(1.0, 0.0),
            multiplicity: 1,
            taylor: vec![Complex64::new(0.0, 0.0)],
        };
        assert!(matches!(build_root_basis(&g, &ev), Err(Error::InvalidEigenvalue(_))));
    }
}
