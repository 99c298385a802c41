//! The boundary-dependent convolution
//! `(f ∗ g)(x) = i U_μ { ∫_μ^x f(ξ) g(x + μ − ξ) dξ }`.

use std::sync::Arc;

use num_complex::Complex64;

use crate::boundary::SigmaSpec;
use crate::characteristic::CharacteristicFn;
use crate::error::{Error, Result};
use crate::function_space::{gl_points_for_degree, integrate_gl, ChebSeries, Grid, GridFunction, Segment};

/// Below this |β − λ| the exponential identity is evaluated by its Taylor
/// expansion around β = λ.
pub const LIMIT_FORM_THRESHOLD: f64 = 1e-3;

/// Factor on `tol_zero` below which `|Δ(λ)|` makes the resolvent singular.
pub const SINGULAR_FACTOR: f64 = 1e3;

#[derive(Debug, Clone)]
pub struct ConvolutionEngine {
    sigma: SigmaSpec,
    grid: Arc<Grid>,
    tol_zero: f64,
}

/// `F(x, μ)` and `∂F/∂μ` for a fixed pair of series.
struct Kernel<'a> {
    f: &'a ChebSeries,
    g: &'a ChebSeries,
    dg: ChebSeries,
    points: usize,
    degree: usize,
}

impl<'a> Kernel<'a> {
    fn new(f: &'a ChebSeries, g: &'a ChebSeries) -> Self {
        let degree = f.degree() + g.degree() + 1;
        Self {
            f,
            g,
            dg: g.derivative(),
            points: gl_points_for_degree(degree),
            degree,
        }
    }

    #[inline]
    fn value(&self, x: f64, mu: f64) -> Complex64 {
        integrate_gl(mu, x, self.points, |xi| self.f.eval(xi) * self.g.eval(x + mu - xi))
    }

    /// Leibniz rule: `−f(μ) g(x) + ∫_μ^x f(ξ) g′(x + μ − ξ) dξ`.
    #[inline]
    fn d_mu(&self, x: f64, mu: f64) -> Complex64 {
        -self.f.eval(mu) * self.g.eval(x) + integrate_gl(mu, x, self.points, |xi| self.f.eval(xi) * self.dg.eval(x + mu - xi))
    }
}

impl ConvolutionEngine {
    pub fn new(sigma: SigmaSpec, grid: Arc<Grid>) -> Result<Self> {
        if sigma.segment() != grid.segment() {
            return Err(Error::Config("sigma and grid live on different segments".into()));
        }
        Ok(Self {
            sigma,
            grid,
            tol_zero: 1e-11,
        })
    }

    pub fn with_tol_zero(mut self, tol_zero: f64) -> Self {
        self.tol_zero = tol_zero;
        self
    }

    pub fn sigma(&self) -> &SigmaSpec {
        &self.sigma
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn segment(&self) -> Segment {
        self.grid.segment()
    }

    pub fn tol_zero(&self) -> f64 {
        self.tol_zero
    }

    fn check(&self, f: &GridFunction) -> Result<()> {
        if !f.grid().same_family(&self.grid) {
            return Err(Error::Config("function does not live on the engine grid".into()));
        }
        Ok(())
    }

    /// `(g ∘ f)(x, t) = ∫_t^x g(x + t − ξ) f(ξ) dξ`, signed.
    pub fn circ(&self, f: &GridFunction, g: &GridFunction, x: f64, t: f64) -> Result<Complex64> {
        let b = self.segment().length();
        for p in [x, t] {
            if !(0.0..=b).contains(&p) {
                return Err(Error::Domain { x: p, b });
            }
        }
        Ok(Kernel::new(f.series(), g.series()).value(x, t))
    }

    pub fn convolve(&self, f: &GridFunction, g: &GridFunction) -> Result<GridFunction> {
        self.check(f)?;
        self.check(g)?;
        let k = Kernel::new(f.series(), g.series());
        let u = self
            .sigma
            .apply_u_parametric(&self.grid, |x, mu| k.value(x, mu), |x, mu| k.d_mu(x, mu), k.degree)?;
        Ok(u.scale(Complex64::i()))
    }

    /// `(L − λ)^{-1} f` as `exp(iλx)/Δ(λ) ∗ f`.
    pub fn convolve_resolvent_form(&self, cf: &CharacteristicFn, lambda: Complex64, f: &GridFunction) -> Result<GridFunction> {
        let delta = cf.delta(lambda)?;
        if delta.norm() <= SINGULAR_FACTOR * self.tol_zero {
            return Err(Error::SingularResolvent {
                lambda,
                delta_abs: delta.norm(),
                nearest: None,
            });
        }
        let il = Complex64::i() * lambda;
        let kernel = self.grid.sample(|x| (il * x).exp() / delta);
        self.convolve(&kernel, f)
    }
}

/// `(exp(iβx) Δ(λ) − exp(iλx) Δ(β)) / (β − λ)` on the grid, by Taylor
/// expansion in `β − λ` when the two are close.
pub fn exponential_identity(cf: &CharacteristicFn, grid: &Arc<Grid>, lambda: Complex64, beta: Complex64) -> Result<GridFunction> {
    let dl = cf.delta(lambda)?;
    let h = beta - lambda;
    let i = Complex64::i();
    if h.norm() >= LIMIT_FORM_THRESHOLD {
        let db = cf.delta(beta)?;
        return Ok(grid.sample(|x| ((i * beta * x).exp() * dl - (i * lambda * x).exp() * db) / h));
    }
    // N(β) = e^{iβx}Δ(λ) − e^{iλx}Δ(β); N(β)/h = Σ_{k≥1} N⁽ᵏ⁾(λ) h^{k−1}/k!
    const TERMS: usize = 7;
    let derivs: Vec<Complex64> = (1..=TERMS).map(|k| cf.delta_derivative(lambda, k)).collect::<Result<_>>()?;
    Ok(grid.sample(|x| {
        let e = (i * lambda * x).exp();
        let ix = i * x;
        let mut sum = Complex64::new(0.0, 0.0);
        let mut hk = Complex64::new(1.0, 0.0);
        let mut fact = 1.0;
        for (k, dk) in derivs.iter().enumerate() {
            let k = k + 1;
            fact *= k as f64;
            sum += (ix.powu(k as u32) * dl - dk) * e * hk / fact;
            hk *= h;
        }
        sum
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::SigmaKind;
    use crate::function_space::make_grid;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn engine(kind: SigmaKind, b: f64, n: usize) -> ConvolutionEngine {
        let s = Segment::new(b).unwrap();
        ConvolutionEngine::new(SigmaSpec::new(kind, s).unwrap(), make_grid(s, n).unwrap()).unwrap()
    }

    fn half() -> ConvolutionEngine {
        engine(SigmaKind::ConstantImag { alpha: 0.5 }, PI, 48)
    }

    #[test]
    fn circ_examples() {
        let e = half();
        let g = e.grid().clone();
        let one = g.constant(c(1.0, 0.0));
        assert_eq!(e.circ(&one, &one, 1.3, 1.3).unwrap(), c(0.0, 0.0));
        assert!((e.circ(&one, &one, 2.0, 0.0).unwrap() - 2.0).norm() < 1e-14);
        assert!((e.circ(&one, &one, 0.5, 2.0).unwrap() + 1.5).norm() < 1e-14);
        let f = g.sample(|x| c(x.sin(), x * x));
        let h = g.sample(|x| (c(0.0, 1.3) * x).exp() + 0.2 * x);
        for (x, t) in [(0.3, 2.0), (3.0, 0.1), (1.7, 1.1)] {
            let a = e.circ(&f, &h, x, t).unwrap();
            let b = e.circ(&h, &f, x, t).unwrap();
            assert!((a - b).norm() < 1e-12);
        }
        assert!(matches!(e.circ(&one, &one, 4.0, 0.0), Err(Error::Domain { .. })));
    }

    #[test]
    fn zero_sigma_convolutions() {
        let e = engine(SigmaKind::Zero, 1.0, 32);
        let g = e.grid().clone();
        let one = g.constant(c(1.0, 0.0));
        let r = e.convolve(&one, &one).unwrap();
        assert!(r.max_diff(&g.sample(|x| c(0.0, x))) < 1e-14);
        let ex = g.sample(|x| (c(0.0, 2.0) * x).exp());
        let r = e.convolve(&one, &ex).unwrap();
        assert!(r.max_diff(&g.sample(|x| ((c(0.0, 2.0) * x).exp() - 1.0) / 2.0)) < 1e-14);
    }

    #[test]
    fn antiperiodic_exponential_example() {
        let e = half();
        let g = e.grid().clone();
        let one = g.constant(c(1.0, 0.0));
        let ex = g.sample(|x| (c(0.0, 2.0) * x).exp());
        let want = g.sample(|x| ((c(0.0, 2.0) * x).exp() - 1.0) / 2.0);
        assert!(e.convolve(&one, &ex).unwrap().max_diff(&want) < 1e-13);
        let cf = CharacteristicFn::new(e.sigma().clone());
        let id = exponential_identity(&cf, &g, c(0.0, 0.0), c(2.0, 0.0)).unwrap();
        assert!(id.max_diff(&want) < 1e-14);
    }

    #[test]
    fn resolvent_form_examples() {
        let e = engine(SigmaKind::Zero, 1.0, 16);
        let cf = CharacteristicFn::new(e.sigma().clone());
        let g = e.grid().clone();
        let one = g.constant(c(1.0, 0.0));
        let y = e.convolve_resolvent_form(&cf, c(0.0, 0.0), &one).unwrap();
        assert!(y.max_diff(&g.sample(|x| c(0.0, x))) < 1e-14);

        let e = half();
        let cf = CharacteristicFn::new(e.sigma().clone());
        let g = e.grid().clone();
        let one = g.constant(c(1.0, 0.0));
        let y = e.convolve_resolvent_form(&cf, c(0.0, 0.0), &one).unwrap();
        assert!(y.max_diff(&g.sample(|x| c(0.0, x - PI / 2.0))) < 1e-13);
        let r = e.convolve_resolvent_form(&cf, c(1.0, 0.0), &one);
        assert!(matches!(r, Err(Error::SingularResolvent { .. })));
    }

    #[test]
    fn algebra_on_a_sample() {
        let e = half();
        let g = e.grid().clone();
        let f = g.sample(|x| c(x.cos(), 0.3 * x));
        let h = g.sample(|x| (c(0.2, 0.7) * x).exp());
        let k = g.sample(|x| c(1.0 - x * x / 10.0, x.sin()));
        let fh = e.convolve(&f, &h).unwrap();
        let hf = e.convolve(&h, &f).unwrap();
        assert!(fh.max_diff(&hf) < 1e-12);
        let left = e.convolve(&fh, &k).unwrap();
        let right = e.convolve(&f, &e.convolve(&h, &k).unwrap()).unwrap();
        assert!(left.max_diff(&right) < 1e-10);
        let a = c(0.3, -1.2);
        let lin = e.convolve(&(&f.scale(a) + &k), &h).unwrap();
        let parts = &fh.scale(a) + &e.convolve(&k, &h).unwrap();
        assert!(lin.max_diff(&parts) < 1e-12);
    }

    #[test]
    fn one_convolved_is_the_inverse() {
        let e = half();
        let g = e.grid().clone();
        let f = g.sample(|x| c(x.sin(), x));
        let y = e.convolve(&g.constant(c(1.0, 0.0)), &f).unwrap();
        let back = y.differentiate().scale(-Complex64::i());
        assert!(back.max_diff(&f) < 1e-9);
        assert!(e.sigma().apply_u(&y).unwrap().norm() < 1e-12);
    }

    #[test]
    fn limit_form_is_continuous() {
        let e = half();
        let cf = CharacteristicFn::new(e.sigma().clone());
        let g = e.grid().clone();
        let l = c(0.4, 0.2);
        let near = exponential_identity(&cf, &g, l, l + c(9e-4, 2e-4)).unwrap();
        let far = exponential_identity(&cf, &g, l, l + c(1.1e-3, 2e-4)).unwrap();
        assert!(near.max_diff(&far) < 1e-3);
        let direct = g.sample(|x| {
            let h = c(9e-4, 2e-4);
            let b = l + h;
            let i = Complex64::i();
            ((i * b * x).exp() * cf.delta(l).unwrap() - (i * l * x).exp() * cf.delta(b).unwrap()) / h
        });
        assert!(near.max_diff(&direct) < 1e-10);
        let conv = e
            .convolve(&g.sample(|x| (Complex64::i() * l * x).exp()), &g.sample(|x| (Complex64::i() * (l + c(9e-4, 2e-4)) * x).exp()))
            .unwrap();
        assert!(conv.max_diff(&near) < 1e-12);
    }
}
