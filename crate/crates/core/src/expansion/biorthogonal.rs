use num_complex::Complex64;
use serde::Serialize;

use super::Expansion;
use crate::error::{Error, Result};
use crate::function_space::{exp_degree, GridFunction};
use crate::spectrum::Eigenvalue;

/// How `C_k(f)` is realized as an integral against `h_k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PairingConvention {
    /// `∫ f h` rather than `∫ f h̄`.
    pub bilinear: bool,
    /// Whether `δ_{k0} σ̄` is added to `h_0`.
    pub extra_term: bool,
}

impl PairingConvention {
    pub const ADOPTED: PairingConvention = PairingConvention {
        bilinear: true,
        extra_term: true,
    };
}

/// Misfit of each pairing convention against the coefficient functionals.
#[derive(Debug, Clone, Serialize)]
pub struct PairingReport {
    pub misfits: Vec<(PairingConvention, f64)>,
    pub best: PairingConvention,
}

impl Expansion {
    /// `h_k(ξ) = ∫_ξ^b σ̄(μ) ∂_μ[(i(μ−ξ))^k/k! exp(iλ(μ−ξ))] dμ`, `k < m`.
    pub fn biorthogonal(&self, ev: &Eigenvalue) -> Result<Vec<GridFunction>> {
        let m = ev.multiplicity;
        let b = self.engine.segment().length();
        let degree = exp_degree(ev.lambda, b) + m;
        let i = Complex64::i();
        let il = i * ev.lambda;
        let mut fact = vec![1.0; m + 1];
        for k in 1..=m {
            fact[k] = fact[k - 1] * k as f64;
        }
        let kappa = |k: usize, t: f64| (i * t).powu(k as u32) / fact[k] * (il * t).exp();
        let grid = self.grid();
        let measures: Vec<_> = grid
            .nodes()
            .iter()
            .map(|&xi| self.engine.sigma().measure_on(xi, b, degree))
            .collect();
        Ok((0..m)
            .map(|k| {
                let values = grid
                    .nodes()
                    .iter()
                    .zip(&measures)
                    .map(|(&xi, meas)| {
                        meas.integrate(|mu| {
                            let t = mu - xi;
                            let mut d = il * kappa(k, t);
                            if k > 0 {
                                d += i * kappa(k - 1, t);
                            }
                            d
                        })
                    })
                    .collect();
                GridFunction::new(grid.clone(), values).expect("finite samples")
            })
            .collect())
    }

    fn pair(&self, f: &GridFunction, h: &GridFunction, k: usize, conv: PairingConvention) -> Result<Complex64> {
        let s = f.series();
        let sigma = self.engine.sigma();
        let (main, extra) = if conv.bilinear {
            (f.bilinear(h)?, sigma.measure(s.degree()).integrate(|mu| s.eval(mu)))
        } else {
            // the measure weights are w·σ̄ with w real, so their conjugates give ∫ f σ
            let sm = sigma.measure(s.degree());
            let extra = sm.points.iter().zip(&sm.weights).map(|(&mu, &w)| w.conj() * s.eval(mu)).sum();
            (f.inner(h)?, extra)
        };
        Ok(if conv.extra_term && k == 0 { main + extra } else { main })
    }

    /// `C_k(f)` through the biorthogonal functions, with the adopted pairing
    /// and the calibrated sign.
    pub fn biorthogonal_coefficients(&self, ev: &Eigenvalue, h: &[GridFunction], f: &GridFunction) -> Result<Vec<Complex64>> {
        if h.len() != ev.multiplicity {
            return Err(Error::Config("biorthogonal family does not match the multiplicity".into()));
        }
        let sign = self.calibration(ev)?.sign;
        h.iter()
            .enumerate()
            .map(|(k, hk)| Ok(sign * self.pair(f, hk, k, PairingConvention::ADOPTED)?))
            .collect()
    }

    /// Which pairing of `f` with `h_k` reproduces the coefficient functionals.
    pub fn pairing_report(&self, ev: &Eigenvalue, f: &GridFunction) -> Result<PairingReport> {
        let h = self.biorthogonal(ev)?;
        let target = self.coefficients(ev, f)?;
        let sign = self.calibration(ev)?.sign;
        let norm = target.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
        let mut misfits = Vec::new();
        for bilinear in [true, false] {
            for extra_term in [true, false] {
                let conv = PairingConvention { bilinear, extra_term };
                let mut err = 0.0;
                for (k, hk) in h.iter().enumerate() {
                    err += (sign * self.pair(f, hk, k, conv)? - target[k]).norm_sqr();
                }
                misfits.push((conv, err.sqrt() / norm));
            }
        }
        let best = misfits
            .iter()
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .map(|m| m.0)
            .expect("four candidates");
        Ok(PairingReport { misfits, best })
    }

    /// `M[(n,k),(p,l)] = dual_{p,l}(u_{k,n})` where `dual_{p,l} = C_{m_p−1−l,p}`
    /// realized through `h`; the identity for a biorthogonal system.
    pub fn pairing_matrix(&self, eigenvalues: &[Eigenvalue]) -> Result<Vec<Vec<Complex64>>> {
        let bases = eigenvalues.iter().map(|ev| self.full_basis(ev)).collect::<Result<Vec<_>>>()?;
        let mut rows = Vec::new();
        for bn in &bases {
            for u in &bn.functions {
                let mut row = Vec::new();
                for bp in &bases {
                    let c = self.biorthogonal_coefficients(&bp.eigenvalue, &bp.biorthogonal, u)?;
                    let m = c.len();
                    row.extend((0..m).map(|l| c[m - 1 - l]));
                }
                rows.push(row);
            }
        }
        Ok(rows)
    }
}
