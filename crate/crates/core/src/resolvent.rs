//! `(L − λ)^{-1}` by the explicit formula, and `L` itself.

use log::warn;
use num_complex::Complex64;

use crate::boundary::SigmaSpec;
use crate::characteristic::CharacteristicFn;
use crate::convolution::SINGULAR_FACTOR;
use crate::error::{Error, Result};
use crate::function_space::{exp_degree, gl_points_for_degree, integrate_gl, GridFunction};

pub const DEFAULT_TOL_ZERO: f64 = 1e-11;
pub const DEFAULT_TOL_BOUNDARY: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct ResolventResult {
    pub y: GridFunction,
    /// `max |−i y′ − λ y − f|` over the grid.
    pub residual_ode: f64,
    /// `|U(y)|`.
    pub residual_boundary: f64,
}

pub fn apply_resolvent(cf: &CharacteristicFn, lambda: Complex64, f: &GridFunction) -> Result<ResolventResult> {
    apply_resolvent_with_tol(cf, lambda, f, DEFAULT_TOL_ZERO)
}

/// `y = i K(x) + exp(iλx)/Δ(λ) · (∫ f σ̄ + iλ ∫ K σ̄)`,
/// `K(x) = ∫₀ˣ exp(iλ(x − ξ)) f(ξ) dξ`.
pub fn apply_resolvent_with_tol(
    cf: &CharacteristicFn,
    lambda: Complex64,
    f: &GridFunction,
    tol_zero: f64,
) -> Result<ResolventResult> {
    let sigma = cf.sigma();
    if f.segment() != sigma.segment() {
        return Err(Error::Config("function and sigma live on different segments".into()));
    }
    let delta = cf.delta(lambda)?;
    if delta.norm() <= SINGULAR_FACTOR * tol_zero {
        return Err(Error::SingularResolvent {
            lambda,
            delta_abs: delta.norm(),
            nearest: nearest_zero(cf, lambda),
        });
    }
    let b = f.segment().length();
    let s = f.series();
    let il = Complex64::i() * lambda;
    let degree = s.degree() + exp_degree(lambda, b);
    let m = gl_points_for_degree(degree);
    let k = |x: f64| integrate_gl(0.0, x, m, |xi| (il * (x - xi)).exp() * s.eval(xi));

    let sf = sigma.measure(s.degree()).integrate(|mu| s.eval(mu));
    let sk = sigma.measure(degree).integrate(k);
    let c = (sf + Complex64::i() * lambda * sk) / delta;
    let y = f.grid().sample(|x| Complex64::i() * k(x) + (il * x).exp() * c);

    let residual_ode = (&(&y.differentiate().scale(-Complex64::i()) - &y.scale(lambda)) - f).max_abs();
    let residual_boundary = sigma.apply_u(&y)?.norm();
    Ok(ResolventResult {
        y,
        residual_ode,
        residual_boundary,
    })
}

/// Newton from `start` on Δ; the zero it settles on, if any.
fn nearest_zero(cf: &CharacteristicFn, start: Complex64) -> Option<Complex64> {
    let mut z = start;
    for _ in 0..50 {
        let d = cf.delta(z).ok()?;
        let d1 = cf.delta_derivative(z, 1).ok()?;
        if d1.norm() == 0.0 {
            return (d.norm() < DEFAULT_TOL_ZERO).then_some(z);
        }
        let step = d / d1;
        z -= step;
        if step.norm() < 1e-15 * (1.0 + z.norm()) {
            break;
        }
    }
    let d = cf.delta(z).ok()?;
    (d.norm() < DEFAULT_TOL_ZERO * cf.delta_derivative(z, 1).ok()?.norm().max(1.0)).then_some(z)
}

#[derive(Debug, Clone)]
pub struct LResult {
    /// `−i y′`.
    pub value: GridFunction,
    /// `|U(y)|`.
    pub boundary_defect: f64,
    /// Whether `|U(y)| < tol_boundary · max(‖y‖∞, 1)`.
    pub in_domain: bool,
}

/// `L y = −i y′`; warns when `y` violates the boundary condition.
pub fn apply_l(sigma: &SigmaSpec, y: &GridFunction) -> Result<LResult> {
    let defect = sigma.apply_u(y)?.norm();
    let in_domain = defect < DEFAULT_TOL_BOUNDARY * y.max_abs().max(1.0);
    if !in_domain {
        warn!("function is outside the domain of L: |U(y)| = {defect:e}");
    }
    Ok(LResult {
        value: y.differentiate().scale(-Complex64::i()),
        boundary_defect: defect,
        in_domain,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::SigmaKind;
    use crate::convolution::ConvolutionEngine;
    use crate::function_space::{make_grid, Segment};
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn cf(kind: SigmaKind, b: f64) -> CharacteristicFn {
        CharacteristicFn::new(SigmaSpec::new(kind, Segment::new(b).unwrap()).unwrap())
    }

    #[test]
    fn zero_sigma_inverse() {
        let cf = cf(SigmaKind::Zero, 1.0);
        let g = make_grid(cf.segment(), 16).unwrap();
        let r = apply_resolvent(&cf, c(0.0, 0.0), &g.constant(c(1.0, 0.0))).unwrap();
        assert!(r.y.max_diff(&g.sample(|x| c(0.0, x))) < 1e-14);
        assert!(r.residual_boundary < 1e-15);
        let l = apply_l(cf.sigma(), &r.y).unwrap();
        assert!(l.in_domain);
        assert!(l.value.max_diff(&g.constant(c(1.0, 0.0))) < 1e-12);
    }

    #[test]
    fn antiperiodic_inverse() {
        let cf = cf(SigmaKind::ConstantImag { alpha: 0.5 }, PI);
        let g = make_grid(cf.segment(), 32).unwrap();
        let r = apply_resolvent(&cf, c(0.0, 0.0), &g.constant(c(1.0, 0.0))).unwrap();
        assert!(r.y.max_diff(&g.sample(|x| c(0.0, x - PI / 2.0))) < 1e-13);
        let y = r.y.values();
        assert!((y[0] + y[y.len() - 1]).norm() < 1e-13);
        assert!(r.residual_ode < 1e-10);
    }

    #[test]
    fn singular_at_eigenvalue() {
        let cf = cf(SigmaKind::ConstantImag { alpha: 0.5 }, PI);
        let g = make_grid(cf.segment(), 32).unwrap();
        match apply_resolvent(&cf, c(1.0, 0.0), &g.constant(c(1.0, 0.0))) {
            Err(Error::SingularResolvent { nearest: Some(z), .. }) => assert!((z - 1.0).norm() < 1e-12),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn eigenfunction_and_out_of_domain() {
        let cf = cf(SigmaKind::ConstantImag { alpha: 0.5 }, PI);
        let g = make_grid(cf.segment(), 48).unwrap();
        let e = g.sample(|x| (c(0.0, 1.0) * x).exp());
        let l = apply_l(cf.sigma(), &e).unwrap();
        assert!(l.in_domain);
        assert!(l.value.max_diff(&e) < 1e-11);

        let zero = SigmaSpec::zero(cf.segment());
        let l = apply_l(&zero, &g.constant(c(1.0, 0.0))).unwrap();
        assert!(!l.in_domain);
        assert!((l.boundary_defect - 1.0).abs() < 1e-15);
        assert!(l.value.max_abs() < 1e-12);
    }

    #[test]
    fn matches_convolution_form() {
        let cf = cf(SigmaKind::ConstantImag { alpha: 0.5 }, PI);
        let g = make_grid(cf.segment(), 64).unwrap();
        let e = ConvolutionEngine::new(cf.sigma().clone(), g.clone()).unwrap();
        let f = g.sample(|x| c((2.0 * x).sin(), 1.0 - x));
        let l = c(0.3, 0.1);
        let a = apply_resolvent(&cf, l, &f).unwrap();
        let b = e.convolve_resolvent_form(&cf, l, &f).unwrap();
        assert!(a.y.max_diff(&b) < 1e-10);
        assert!(a.residual_ode < 1e-9 && a.residual_boundary < 1e-11);
    }
}
