use log::info;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::Expansion;
use crate::error::{Error, Result};
use crate::function_space::{exp_degree, gl_points_for_degree, integrate_gl, GridFunction};
use crate::random::smooth_function;
use crate::spectrum::Eigenvalue;

/// Largest relative misfit accepted when fixing the coefficient sign.
pub const CALIBRATION_TOL: f64 = 1e-6;

/// Outcome of fitting `P_n f` in the root basis against the literal
/// coefficient formula.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Calibration {
    /// Global factor applied to the literal formula (±1).
    pub sign: f64,
    /// Relative misfit with the chosen sign.
    pub misfit: f64,
    /// Relative misfit with the other sign.
    pub rejected_misfit: f64,
    pub eigenvalue: Complex64,
}

impl Expansion {
    /// `C_k = −i U_μ { ∫₀^μ f(ξ) (i(μ−ξ))^k/k! exp(iλ(μ−ξ)) dξ }`, literally.
    ///
    /// With `Φ_k(μ)` the inner integral, `Φ_k(0) = 0` and
    /// `Φ_k′ = δ_{k0} f + iΦ_{k−1} + iλΦ_k`, so `C_k = ∫ Φ_k′ σ̄`.
    pub fn literal_coefficients(&self, ev: &Eigenvalue, f: &GridFunction) -> Result<Vec<Complex64>> {
        self.engine.grid().same_family(f.grid()).then_some(()).ok_or_else(|| {
            Error::Config("function does not live on the expansion grid".into())
        })?;
        let m = ev.multiplicity;
        let lambda = ev.lambda;
        let b = f.segment().length();
        let s = f.series();
        let degree = s.degree() + exp_degree(lambda, b) + m;
        let points = gl_points_for_degree(degree);
        let i = Complex64::i();
        let il = i * lambda;
        let measure = self.engine.sigma().measure(degree);
        let mut out = vec![Complex64::new(0.0, 0.0); m];
        let mut fact = vec![1.0; m];
        for k in 1..m {
            fact[k] = fact[k - 1] * k as f64;
        }
        let mut phi = vec![Complex64::new(0.0, 0.0); m];
        for (&mu, &w) in measure.points.iter().zip(&measure.weights) {
            for (k, p) in phi.iter_mut().enumerate() {
                *p = integrate_gl(0.0, mu, points, |xi| {
                    let t = mu - xi;
                    s.eval(xi) * (i * t).powu(k as u32) / fact[k] * (il * t).exp()
                });
            }
            for k in 0..m {
                let mut d = il * phi[k];
                if k == 0 {
                    d += s.eval(mu);
                } else {
                    d += i * phi[k - 1];
                }
                out[k] += w * d;
            }
        }
        Ok(out)
    }

    /// Coefficient functionals `(C_0, …, C_{m−1})` with the calibrated sign;
    /// `P_n f = Σ_k C_{m−1−k} u_k`.
    pub fn coefficients(&self, ev: &Eigenvalue, f: &GridFunction) -> Result<Vec<Complex64>> {
        let sign = self.calibration(ev)?.sign;
        if self.paranoid {
            let check = self.calibrate(ev)?;
            if check.sign != sign {
                return Err(Error::Convention(format!(
                    "coefficient sign {} at {} disagrees with the recorded {}",
                    check.sign, ev.lambda, sign
                )));
            }
        }
        Ok(self.literal_coefficients(ev, f)?.into_iter().map(|c| c * sign).collect())
    }

    /// The recorded sign calibration, computed on first use.
    pub fn calibration(&self, ev: &Eigenvalue) -> Result<&Calibration> {
        if let Some(c) = self.calibration.get() {
            return Ok(c);
        }
        let c = self.calibrate(ev)?;
        if c.sign < 0.0 {
            info!(
                "literal coefficient formula carries a sign flip; using sign {} (misfit {:e} vs {:e})",
                c.sign, c.misfit, c.rejected_misfit
            );
        }
        Ok(self.calibration.get_or_init(|| c))
    }

    /// Fits `P_n f` for a seeded random `f` in the root basis and compares
    /// with the literal coefficients.
    pub fn calibrate(&self, ev: &Eigenvalue) -> Result<Calibration> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let f = smooth_function(self.grid(), &mut rng);
        let basis = self.basis(ev)?;
        let p = self.engine.convolve(basis.top(), &f)?;
        let fitted = least_squares(&basis.functions, &p)?;
        let literal = self.literal_coefficients(ev, &f)?;
        let m = ev.multiplicity;
        // u_k pairs with C_{m−1−k}
        let norm = fitted.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
        let misfit = |s: f64| {
            (0..m)
                .map(|k| (fitted[k] - literal[m - 1 - k] * s).norm_sqr())
                .sum::<f64>()
                .sqrt()
                / norm
        };
        let (plus, minus) = (misfit(1.0), misfit(-1.0));
        let (sign, best, other) = if plus <= minus { (1.0, plus, minus) } else { (-1.0, minus, plus) };
        if best > CALIBRATION_TOL {
            return Err(Error::Convention(format!(
                "neither sign reproduces the projection at {} (misfits {plus:e}, {minus:e})",
                ev.lambda
            )));
        }
        Ok(Calibration {
            sign,
            misfit: best,
            rejected_misfit: other,
            eigenvalue: ev.lambda,
        })
    }
}

/// Least-squares coefficients of `target` in the span of `columns`.
pub(crate) fn least_squares(columns: &[GridFunction], target: &GridFunction) -> Result<Vec<Complex64>> {
    let n = target.values().len();
    let a = DMatrix::from_fn(n, columns.len(), |r, c| columns[c].values()[r]);
    let rhs = DVector::from_column_slice(target.values());
    let svd = a.svd(true, true);
    let x = svd
        .solve(&rhs, 1e-14)
        .map_err(|e| Error::Convention(format!("least-squares fit failed: {e}")))?;
    Ok(x.iter().copied().collect())
}

#[cfg(test)]
mod tests {
    use crate::boundary::{SigmaKind, SigmaSpec};
    use crate::characteristic::CharacteristicFn;
    use crate::convolution::ConvolutionEngine;
    use crate::expansion::Expansion;
    use crate::function_space::{make_grid, Segment};
    use crate::spectrum::Eigenvalue;
    use num_complex::Complex64;
    use std::f64::consts::PI;

    fn ctx() -> Expansion {
        let s = Segment::new(PI).unwrap();
        let sigma = SigmaSpec::new(SigmaKind::ConstantImag { alpha: 0.5 }, s).unwrap();
        let engine = ConvolutionEngine::new(sigma.clone(), make_grid(s, 48).unwrap()).unwrap();
        Expansion::new(engine, CharacteristicFn::new(sigma)).unwrap()
    }

    fn ev(k: f64) -> Eigenvalue {
        Eigenvalue {
            lambda: Complex64::new(k, 0.0),
            multiplicity: 1,
            taylor: vec![Complex64::new(0.0, 2.0 / PI)],
        }
    }

    #[test]
    fn literal_formula_needs_no_flip() {
        let e = ctx();
        let f = e.grid().sample(|x| (Complex64::i() * x).exp());
        let lit = e.literal_coefficients(&ev(1.0), &f).unwrap();
        assert!((lit[0] - Complex64::new(0.0, PI / 2.0)).norm() < 1e-12);
        let cal = e.calibration(&ev(1.0)).unwrap();
        assert_eq!(cal.sign, 1.0);
        assert!(cal.misfit < 1e-10 && cal.rejected_misfit > 1.0);
    }

    #[test]
    fn coefficient_examples() {
        let e = ctx();
        let f = e.grid().sample(|x| (Complex64::i() * x).exp());
        let c = e.coefficients(&ev(1.0), &f).unwrap();
        // u_0 = −(2i/π) exp(ix), so exp(ix) = (iπ/2) u_0
        assert!((c[0] - Complex64::new(0.0, PI / 2.0)).norm() < 1e-12);
        let u = e.basis(&ev(3.0)).unwrap();
        let c = e.coefficients(&ev(3.0), &u.functions[0]).unwrap();
        assert!((c[0] - 1.0).norm() < 1e-12);
        let c = e.coefficients(&ev(5.0), &u.functions[0]).unwrap();
        assert!(c[0].norm() < 1e-12);
    }
}
