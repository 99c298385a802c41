//! The characteristic function `Δ(λ) = 1 − λ ∫₀ᵇ exp(iλx) σ̄(x) dx`.

use num_complex::Complex64;

use crate::boundary::{SigmaKind, SigmaSpec};
use crate::error::{Error, Result};
use crate::function_space::{exp_degree, gl_points_for_degree, integrate_gl, GridFunction, Segment};

/// `|Im λ| · b` above which `exp(iλx)` is considered out of range.
pub const OVERFLOW_GUARD: f64 = 700.0;

pub const MAX_DERIVATIVE_ORDER: usize = 12;

/// Closed forms available for the preset σ's.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClosedForm {
    /// Δ ≡ 1.
    One,
    /// σ = iα on `[0, c]`, zero beyond: Δ = (1 − α) + α exp(iλc).
    Step { alpha: f64, c: f64 },
    /// σ = i(α + γx/b).
    Linear { alpha: f64, gamma: f64, b: f64 },
}

#[derive(Debug, Clone)]
pub struct CharacteristicFn {
    sigma: SigmaSpec,
    closed_form: Option<ClosedForm>,
}

impl CharacteristicFn {
    pub fn new(sigma: SigmaSpec) -> Self {
        let b = sigma.segment().length();
        let closed_form = match *sigma.kind() {
            SigmaKind::Zero => Some(ClosedForm::One),
            SigmaKind::IndicatorI { c } => Some(ClosedForm::Step { alpha: 1.0, c }),
            SigmaKind::ConstantImag { alpha } => Some(ClosedForm::Step { alpha, c: b }),
            SigmaKind::LinearImag { alpha, gamma } => Some(ClosedForm::Linear { alpha, gamma, b }),
            SigmaKind::Sampled(_) => None,
        };
        Self { sigma, closed_form }
    }

    pub fn sigma(&self) -> &SigmaSpec {
        &self.sigma
    }

    pub fn segment(&self) -> Segment {
        self.sigma.segment()
    }

    pub fn closed_form(&self) -> Option<ClosedForm> {
        self.closed_form
    }

    fn guard(&self, lambda: Complex64) -> Result<()> {
        let b = self.segment().length();
        if !(lambda.re.is_finite() && lambda.im.is_finite()) || lambda.im.abs() * b > OVERFLOW_GUARD {
            return Err(Error::Range(format!("|Im lambda| * b too large at lambda = {lambda}")));
        }
        Ok(())
    }

    /// Δ(λ), by closed form when the σ preset has one.
    pub fn delta(&self, lambda: Complex64) -> Result<Complex64> {
        self.guard(lambda)?;
        Ok(match self.closed_form {
            Some(cf) => closed_delta(cf, lambda),
            None => self.quadrature_delta_unchecked(lambda),
        })
    }

    /// Δ(λ) by quadrature against σ̄, regardless of presets.
    pub fn delta_quadrature(&self, lambda: Complex64) -> Result<Complex64> {
        self.guard(lambda)?;
        Ok(self.quadrature_delta_unchecked(lambda))
    }

    fn quadrature_delta_unchecked(&self, lambda: Complex64) -> Complex64 {
        let b = self.segment().length();
        let measure = self.sigma.measure(exp_degree(lambda, b));
        let il = Complex64::i() * lambda;
        1.0 - lambda * measure.integrate(|mu| (il * mu).exp())
    }

    /// Size of the terms summed into Δ(λ); rounding in Δ is relative to it.
    pub fn delta_scale(&self, lambda: Complex64) -> Result<f64> {
        self.guard(lambda)?;
        let b = self.segment().length();
        Ok(match self.closed_form {
            Some(ClosedForm::One) => 1.0,
            Some(ClosedForm::Step { alpha, c }) => (1.0 - alpha).abs() + alpha.abs() * (-lambda.im * c).exp(),
            Some(ClosedForm::Linear { alpha, gamma, b }) => {
                let z = Complex64::new(0.0, b) * lambda;
                let e = z.exp().norm();
                1.0 + alpha.abs() * (e + 1.0) + gamma.abs() * (e + exprel(z).norm())
            }
            None => {
                let measure = self.sigma.measure(exp_degree(lambda, b));
                let il = Complex64::i() * lambda;
                1.0 + lambda.norm()
                    * measure
                        .points
                        .iter()
                        .zip(&measure.weights)
                        .map(|(&mu, w)| w.norm() * (il * mu).exp().norm())
                        .sum::<f64>()
            }
        })
    }

    /// j-th λ-derivative of Δ, `1 ≤ j ≤ 12`.
    pub fn delta_derivative(&self, lambda: Complex64, order: usize) -> Result<Complex64> {
        if order == 0 {
            return self.delta(lambda);
        }
        if order > MAX_DERIVATIVE_ORDER {
            return Err(Error::Config(format!(
                "derivative order {order} exceeds {MAX_DERIVATIVE_ORDER}"
            )));
        }
        self.guard(lambda)?;
        match self.closed_form {
            Some(ClosedForm::One) => Ok(Complex64::new(0.0, 0.0)),
            Some(ClosedForm::Step { alpha, c }) => {
                let ic = Complex64::new(0.0, c);
                Ok(alpha * ic.powu(order as u32) * (ic * lambda).exp())
            }
            _ => Ok(self.quadrature_derivative_unchecked(lambda, order)),
        }
    }

    /// j-th derivative by differentiating under the integral:
    /// `Δ⁽ʲ⁾ = −(λ M_j + j M_{j−1})`, `M_j = ∫ (ix)ʲ exp(iλx) σ̄ dx`.
    pub fn delta_derivative_quadrature(&self, lambda: Complex64, order: usize) -> Result<Complex64> {
        if order == 0 {
            return self.delta_quadrature(lambda);
        }
        if order > MAX_DERIVATIVE_ORDER {
            return Err(Error::Config(format!(
                "derivative order {order} exceeds {MAX_DERIVATIVE_ORDER}"
            )));
        }
        self.guard(lambda)?;
        Ok(self.quadrature_derivative_unchecked(lambda, order))
    }

    fn quadrature_derivative_unchecked(&self, lambda: Complex64, order: usize) -> Complex64 {
        let b = self.segment().length();
        let measure = self.sigma.measure(exp_degree(lambda, b) + order);
        let il = Complex64::i() * lambda;
        let j = order as u32;
        let (mj, mj1) = measure.points.iter().zip(&measure.weights).fold(
            (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)),
            |(a, c), (&mu, &w)| {
                let ix = Complex64::new(0.0, mu);
                let base = w * (il * mu).exp() * ix.powu(j - 1);
                (a + base * ix, c + base)
            },
        );
        -(lambda * mj + order as f64 * mj1)
    }

    /// `G(f; x, λ) = iΔ(λ) ∫₀ˣ f(ξ) exp(−iλξ) dξ`.
    pub fn g_function(&self, f: &GridFunction, x: f64, lambda: Complex64) -> Result<Complex64> {
        let b = self.segment().length();
        if !(0.0..=b).contains(&x) {
            return Err(Error::Domain { x, b });
        }
        let delta = self.delta(lambda)?;
        let s = f.series();
        let m = gl_points_for_degree(s.degree() + exp_degree(lambda, b));
        let il = Complex64::i() * lambda;
        let integral = integrate_gl(0.0, x, m, |xi| s.eval(xi) * (-il * xi).exp());
        Ok(Complex64::i() * delta * integral)
    }
}

/// `(exp(z) − 1) / z`, accurate near `z = 0`.
pub(crate) fn exprel(z: Complex64) -> Complex64 {
    if z.norm() < 0.5 {
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = term;
        for k in 2..30 {
            term *= z / k as f64;
            sum += term;
        }
        sum
    } else {
        (z.exp() - 1.0) / z
    }
}

fn closed_delta(cf: ClosedForm, lambda: Complex64) -> Complex64 {
    match cf {
        ClosedForm::One => Complex64::new(1.0, 0.0),
        ClosedForm::Step { alpha, c } => (1.0 - alpha) + alpha * (Complex64::new(0.0, c) * lambda).exp(),
        ClosedForm::Linear { alpha, gamma, b } => {
            let z = Complex64::new(0.0, b) * lambda;
            let e = z.exp();
            // 1 + α(e^z − 1) + γ(e^z − (e^z − 1)/z)
            1.0 + alpha * (e - 1.0) + gamma * (e - exprel(z))
        }
    }
}
