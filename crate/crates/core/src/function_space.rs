//! Functions on a segment `[0, b]`, sampled on Chebyshev–Gauss–Lobatto nodes.
//!
//! A [`GridFunction`] stores its node values together with the Chebyshev
//! series of the interpolating polynomial. Public point evaluation uses the
//! barycentric formula (exact at nodes); the quadrature-heavy kernels elsewhere
//! in the crate evaluate the truncated series instead, which represents the
//! same polynomial up to the truncation threshold.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Sub};
use std::sync::{Arc, OnceLock};

use gauss_quad::GaussLegendre;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub const MIN_NODES: usize = 8;
pub const DEFAULT_NODES: usize = 128;

/// Relative threshold below which trailing Chebyshev coefficients are dropped.
const SERIES_TRUNCATION: f64 = 2e-15;

/// Largest Gauss–Legendre rule handed out by [`gauss_legendre`].
pub const MAX_GL_POINTS: usize = 512;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    b: f64,
}

impl Segment {
    pub fn new(b: f64) -> Result<Self> {
        if !(b.is_finite() && b > 0.0) {
            return Err(Error::Config(format!("segment length must be finite and positive, got {b}")));
        }
        Ok(Self { b })
    }

    pub fn length(&self) -> f64 {
        self.b
    }

    pub fn contains(&self, x: f64) -> bool {
        (0.0..=self.b).contains(&x)
    }
}

/// A Chebyshev–Gauss–Lobatto node family on `[0, b]` together with the
/// operators every [`GridFunction`] on it shares.
pub struct Grid {
    segment: Segment,
    nodes: Vec<f64>,
    bary: Vec<f64>,
    cc_weights: Vec<f64>,
    /// Row-major differentiation matrix in `x`.
    diff: Vec<f64>,
    /// `cos(pi r / N)` for `r` in `0..2N`.
    cos_table: Vec<f64>,
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("b", &self.segment.b)
            .field("n", &self.nodes.len())
            .finish()
    }
}

/// Build the `n`-point node family on `segment`.
pub fn make_grid(segment: Segment, n: usize) -> Result<Arc<Grid>> {
    Grid::new(segment, n)
}

impl Grid {
    pub fn new(segment: Segment, n: usize) -> Result<Arc<Self>> {
        if n < MIN_NODES {
            return Err(Error::Config(format!("need at least {MIN_NODES} nodes, got {n}")));
        }
        let b = segment.b;
        let big_n = n - 1;
        // sin form keeps the node set exactly symmetric and the endpoints exact
        let t: Vec<f64> = (0..n)
            .map(|j| (PI * (2.0 * j as f64 - big_n as f64) / (2.0 * big_n as f64)).sin())
            .collect();
        let mut nodes: Vec<f64> = t.iter().map(|&tj| 0.5 * b * (1.0 + tj)).collect();
        nodes[0] = 0.0;
        nodes[big_n] = b;

        let bary: Vec<f64> = (0..n)
            .map(|j| {
                let s = if j % 2 == 0 { 1.0 } else { -1.0 };
                if j == 0 || j == big_n {
                    0.5 * s
                } else {
                    s
                }
            })
            .collect();

        let scale = 2.0 / b;
        let mut diff = vec![0.0; n * n];
        for i in 0..n {
            let mut row_sum = 0.0;
            for j in 0..n {
                if i != j {
                    let v = scale * (bary[j] / bary[i]) / (t[i] - t[j]);
                    diff[i * n + j] = v;
                    row_sum += v;
                }
            }
            diff[i * n + i] = -row_sum;
        }

        let cc_weights = clenshaw_curtis_weights(big_n).into_iter().map(|w| 0.5 * b * w).collect();
        let cos_table = (0..2 * big_n).map(|r| (PI * r as f64 / big_n as f64).cos()).collect();

        Ok(Arc::new(Self {
            segment,
            nodes,
            bary,
            cc_weights,
            diff,
            cos_table,
        }))
    }

    pub fn segment(&self) -> Segment {
        self.segment
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn quadrature(&self) -> QuadratureRule {
        QuadratureRule {
            nodes: self.nodes.clone(),
            weights: self.cc_weights.clone(),
            exact_degree: self.nodes.len() - 1,
        }
    }

    /// Same node family: same node count on the same segment.
    pub fn same_family(&self, other: &Grid) -> bool {
        std::ptr::eq(self, other) || (self.nodes.len() == other.nodes.len() && self.segment == other.segment)
    }

    pub fn sample(self: &Arc<Self>, f: impl Fn(f64) -> Complex64) -> GridFunction {
        let values = self.nodes.iter().map(|&x| f(x)).collect();
        GridFunction::from_parts(self.clone(), values)
    }

    pub fn constant(self: &Arc<Self>, c: Complex64) -> GridFunction {
        GridFunction::from_parts(self.clone(), vec![c; self.nodes.len()])
    }

    fn chebyshev_coefficients(&self, values: &[Complex64]) -> Vec<Complex64> {
        let big_n = self.nodes.len() - 1;
        let period = 2 * big_n;
        let mut coeffs = vec![ZERO; big_n + 1];
        for (k, ck) in coeffs.iter_mut().enumerate() {
            let mut acc = ZERO;
            for m in 0..=big_n {
                // node t = cos(pi m / N) is stored at index N - m
                let v = values[big_n - m];
                let w = if m == 0 || m == big_n { 0.5 } else { 1.0 };
                acc += v * (w * self.cos_table[(k * m) % period]);
            }
            let mut c = acc * (2.0 / big_n as f64);
            if k == 0 || k == big_n {
                c *= 0.5;
            }
            *ck = c;
        }
        coeffs
    }
}

/// Clenshaw–Curtis weights on `[-1, 1]` for the `N + 1` Lobatto nodes.
fn clenshaw_curtis_weights(big_n: usize) -> Vec<f64> {
    let nf = big_n as f64;
    let mut w = vec![0.0; big_n + 1];
    let theta = |k: usize| PI * k as f64 / nf;
    let mut v = vec![1.0; big_n.saturating_sub(1)];
    if big_n % 2 == 0 {
        w[0] = 1.0 / (nf * nf - 1.0);
        w[big_n] = w[0];
        for k in 1..big_n / 2 {
            let kf = k as f64;
            for (i, vi) in v.iter_mut().enumerate() {
                *vi -= 2.0 * (2.0 * kf * theta(i + 1)).cos() / (4.0 * kf * kf - 1.0);
            }
        }
        for (i, vi) in v.iter_mut().enumerate() {
            *vi -= (nf * theta(i + 1)).cos() / (nf * nf - 1.0);
        }
    } else {
        w[0] = 1.0 / (nf * nf);
        w[big_n] = w[0];
        for k in 1..=(big_n - 1) / 2 {
            let kf = k as f64;
            for (i, vi) in v.iter_mut().enumerate() {
                *vi -= 2.0 * (2.0 * kf * theta(i + 1)).cos() / (4.0 * kf * kf - 1.0);
            }
        }
    }
    for (i, vi) in v.into_iter().enumerate() {
        w[i + 1] = 2.0 * vi / nf;
    }
    w
}

/// Truncated Chebyshev series on `[0, b]`.
#[derive(Debug, Clone)]
pub struct ChebSeries {
    b: f64,
    coeffs: Vec<Complex64>,
}

impl ChebSeries {
    fn truncated(b: f64, mut coeffs: Vec<Complex64>) -> Self {
        let max = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let cut = SERIES_TRUNCATION * max;
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.norm() <= cut) {
            coeffs.pop();
        }
        Self { b, coeffs }
    }

    /// Polynomial degree after truncation.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Clenshaw evaluation; `x` is not range-checked.
    #[inline]
    pub fn eval(&self, x: f64) -> Complex64 {
        let t = 2.0 * x / self.b - 1.0;
        let two_t = 2.0 * t;
        let mut b1 = ZERO;
        let mut b2 = ZERO;
        for c in self.coeffs[1..].iter().rev() {
            let b0 = c + b1 * two_t - b2;
            b2 = b1;
            b1 = b0;
        }
        self.coeffs[0] + b1 * t - b2
    }

    pub fn derivative(&self) -> ChebSeries {
        let n = self.coeffs.len();
        if n <= 1 {
            return Self {
                b: self.b,
                coeffs: vec![ZERO],
            };
        }
        let mut d = vec![ZERO; n + 1];
        for k in (1..n).rev() {
            d[k - 1] = d[k + 1] + self.coeffs[k] * (2.0 * k as f64);
        }
        d[0] *= 0.5;
        d.truncate(n - 1);
        let scale = 2.0 / self.b;
        for c in &mut d {
            *c *= scale;
        }
        Self { b: self.b, coeffs: d }
    }
}

/// A complex-valued function on `[0, b]`, represented by its values on a
/// Chebyshev–Gauss–Lobatto node family.
#[derive(Clone)]
pub struct GridFunction {
    grid: Arc<Grid>,
    values: Vec<Complex64>,
    series: Arc<OnceLock<ChebSeries>>,
}

impl fmt::Debug for GridFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GridFunction")
            .field("grid", &self.grid)
            .field("max_abs", &self.max_abs())
            .finish()
    }
}

impl GridFunction {
    pub fn new(grid: Arc<Grid>, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Config(format!(
                "{} values supplied for a {}-node grid",
                values.len(),
                grid.len()
            )));
        }
        if values.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::Config("non-finite sample value".into()));
        }
        Ok(Self::from_parts(grid, values))
    }

    pub(crate) fn from_parts(grid: Arc<Grid>, values: Vec<Complex64>) -> Self {
        Self {
            grid,
            values,
            series: Arc::new(OnceLock::new()),
        }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn nodes(&self) -> &[f64] {
        &self.grid.nodes
    }

    pub fn segment(&self) -> Segment {
        self.grid.segment
    }

    /// Chebyshev series of the interpolant (computed once, then shared).
    pub fn series(&self) -> &ChebSeries {
        self.series
            .get_or_init(|| ChebSeries::truncated(self.grid.segment.b, self.grid.chebyshev_coefficients(&self.values)))
    }

    /// Barycentric interpolation; returns the stored sample at a node.
    pub fn evaluate(&self, x: f64) -> Result<Complex64> {
        let b = self.grid.segment.b;
        if !(x.is_finite() && (0.0..=b).contains(&x)) {
            return Err(Error::Domain { x, b });
        }
        let mut num = ZERO;
        let mut den = 0.0;
        for ((&xj, &wj), &fj) in self.grid.nodes.iter().zip(&self.grid.bary).zip(&self.values) {
            let d = x - xj;
            if d == 0.0 {
                return Ok(fj);
            }
            let c = wj / d;
            num += fj * c;
            den += c;
        }
        Ok(num / den)
    }

    /// Spectral derivative via the collocation differentiation matrix.
    pub fn differentiate(&self) -> GridFunction {
        let n = self.values.len();
        let d = &self.grid.diff;
        let values = (0..n)
            .map(|i| {
                let row = &d[i * n..(i + 1) * n];
                row.iter().zip(&self.values).fold(ZERO, |acc, (&dij, &v)| acc + v * dij)
            })
            .collect();
        Self::from_parts(self.grid.clone(), values)
    }

    /// Clenshaw–Curtis quadrature of the interpolant over `[0, b]`.
    pub fn integrate(&self) -> Complex64 {
        self.values
            .iter()
            .zip(&self.grid.cc_weights)
            .fold(ZERO, |acc, (&v, &w)| acc + v * w)
    }

    /// `∫₀ᵇ f · conj(g)`.
    pub fn inner(&self, other: &GridFunction) -> Result<Complex64> {
        self.check_family(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .zip(&self.grid.cc_weights)
            .fold(ZERO, |acc, ((&f, &g), &w)| acc + f * g.conj() * w))
    }

    /// `∫₀ᵇ f · g` (no conjugation).
    pub fn bilinear(&self, other: &GridFunction) -> Result<Complex64> {
        self.check_family(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .zip(&self.grid.cc_weights)
            .fold(ZERO, |acc, ((&f, &g), &w)| acc + f * g * w))
    }

    pub fn check_family(&self, other: &GridFunction) -> Result<()> {
        if self.grid.same_family(&other.grid) {
            Ok(())
        } else {
            Err(Error::Config("grid functions live on different node families".into()))
        }
    }

    pub fn map(&self, f: impl Fn(f64, Complex64) -> Complex64) -> GridFunction {
        let values = self.grid.nodes.iter().zip(&self.values).map(|(&x, &v)| f(x, v)).collect();
        Self::from_parts(self.grid.clone(), values)
    }

    pub fn scale(&self, c: Complex64) -> GridFunction {
        self.map(|_, v| v * c)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn l2_norm(&self) -> f64 {
        self.values
            .iter()
            .zip(&self.grid.cc_weights)
            .map(|(v, w)| v.norm_sqr() * w)
            .sum::<f64>()
            .sqrt()
    }

    /// `max |f - g|` over the nodes.
    pub fn max_diff(&self, other: &GridFunction) -> f64 {
        assert!(self.grid.same_family(&other.grid), "grid functions on different node families");
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Add for &GridFunction {
    type Output = GridFunction;

    fn add(self, rhs: &GridFunction) -> GridFunction {
        assert!(self.grid.same_family(&rhs.grid), "grid functions on different node families");
        let values = self.values.iter().zip(&rhs.values).map(|(a, b)| a + b).collect();
        GridFunction::from_parts(self.grid.clone(), values)
    }
}

impl Sub for &GridFunction {
    type Output = GridFunction;

    fn sub(self, rhs: &GridFunction) -> GridFunction {
        assert!(self.grid.same_family(&rhs.grid), "grid functions on different node families");
        let values = self.values.iter().zip(&rhs.values).map(|(a, b)| a - b).collect();
        GridFunction::from_parts(self.grid.clone(), values)
    }
}

impl Mul<Complex64> for &GridFunction {
    type Output = GridFunction;

    fn mul(self, rhs: Complex64) -> GridFunction {
        self.scale(rhs)
    }
}

/// Nodes and positive weights of a quadrature rule.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// Polynomials up to this degree are integrated exactly.
    pub exact_degree: usize,
}

impl QuadratureRule {
    /// `m`-point Gauss–Legendre rule mapped to `[a, c]`.
    pub fn gauss_legendre(a: f64, c: f64, m: usize) -> Self {
        let half = 0.5 * (c - a);
        let mid = 0.5 * (c + a);
        let (nodes, weights) = gauss_legendre(m).iter().map(|&(t, w)| (mid + half * t, half * w)).unzip();
        Self {
            nodes,
            weights,
            exact_degree: 2 * m - 1,
        }
    }

    pub fn integrate(&self, mut f: impl FnMut(f64) -> Complex64) -> Complex64 {
        self.nodes.iter().zip(&self.weights).fold(ZERO, |acc, (&x, &w)| acc + f(x) * w)
    }

    pub fn weight_sum(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// `m`-point Gauss–Legendre nodes and weights on `[-1, 1]`, cached per `m`.
pub fn gauss_legendre(m: usize) -> &'static [(f64, f64)] {
    static RULES: [OnceLock<Box<[(f64, f64)]>>; MAX_GL_POINTS + 1] = [const { OnceLock::new() }; MAX_GL_POINTS + 1];
    let m = m.clamp(1, MAX_GL_POINTS);
    RULES[m].get_or_init(|| {
        let degree = std::num::NonZeroUsize::new(m).expect("m >= 1");
        GaussLegendre::new(degree).into_node_weight_pairs()
    })
}

/// Number of Gauss–Legendre points that integrates a polynomial of the given
/// degree exactly, with a little headroom.
pub fn gl_points_for_degree(degree: usize) -> usize {
    (degree / 2 + 3).min(MAX_GL_POINTS)
}

/// Estimated Chebyshev degree needed to resolve `exp(i λ x)` on an interval
/// of the given length to machine precision.
pub fn exp_degree(lambda: Complex64, length: f64) -> usize {
    let omega = 0.5 * lambda.norm() * length;
    (omega + 10.0 * omega.cbrt() + 20.0).ceil() as usize
}

/// `∫ₐᶜ f` with an `m`-point Gauss–Legendre rule (signed when `c < a`).
#[inline]
pub(crate) fn integrate_gl(a: f64, c: f64, m: usize, mut f: impl FnMut(f64) -> Complex64) -> Complex64 {
    let half = 0.5 * (c - a);
    let mid = 0.5 * (c + a);
    let mut acc = ZERO;
    for &(t, w) in gauss_legendre(m) {
        acc += f(mid + half * t) * w;
    }
    acc * half
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn i() -> Complex64 {
        Complex64::i()
    }

    #[test]
    fn rejects_small_grids_and_bad_segments() {
        assert!(matches!(Grid::new(Segment::new(1.0).unwrap(), 7), Err(Error::Config(_))));
        assert!(Segment::new(0.0).is_err());
        assert!(Segment::new(f64::INFINITY).is_err());
    }

    #[test]
    fn endpoints_and_symmetry() {
        let g = make_grid(Segment::new(1.0).unwrap(), 8).unwrap();
        assert_eq!(g.len(), 8);
        assert_eq!(g.nodes()[0], 0.0);
        assert_eq!(g.nodes()[7], 1.0);

        let g = make_grid(Segment::new(PI).unwrap(), 64).unwrap();
        let n = g.len();
        for j in 0..n {
            assert_abs_diff_eq!(g.nodes()[j] + g.nodes()[n - 1 - j], PI, epsilon = 1e-14);
        }
        assert!(g.nodes().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn derivative_of_square_is_exact() {
        let g = make_grid(Segment::new(2.0).unwrap(), 33).unwrap();
        let f = g.sample(|x| Complex64::new(x * x, 0.0));
        let df = f.differentiate();
        for (&x, v) in g.nodes().iter().zip(df.values()) {
            assert!((v - 2.0 * x).norm() < 1e-10);
        }
    }

    #[test]
    fn differentiate_examples() {
        let g = make_grid(Segment::new(1.0).unwrap(), 32).unwrap();
        assert!(g.constant(Complex64::new(1.0, 0.0)).differentiate().max_abs() < 1e-12);
        let lin = g.sample(|x| Complex64::new(x, 0.0)).differentiate();
        assert!(lin.values().iter().all(|v| (v - 1.0).norm() < 1e-10));

        let g = make_grid(Segment::new(PI).unwrap(), 64).unwrap();
        let f = g.sample(|x| (3.0 * i() * x).exp());
        let exact = g.sample(|x| 3.0 * i() * (3.0 * i() * x).exp());
        assert!(f.differentiate().max_diff(&exact) < 1e-8);
    }

    #[test]
    fn evaluate_examples() {
        let g = make_grid(Segment::new(PI).unwrap(), 64).unwrap();
        let f = g.sample(|x| (i() * x).exp());
        for (j, &x) in g.nodes().iter().enumerate() {
            assert_eq!(f.evaluate(x).unwrap(), f.values()[j]);
        }
        let f2 = g.sample(|x| (2.0 * i() * x).exp());
        assert!((f2.evaluate(1.0).unwrap() - (2.0 * i()).exp()).norm() < 1e-10);
        assert!(matches!(f2.evaluate(-0.1), Err(Error::Domain { .. })));
        assert!(matches!(f2.evaluate(PI + 0.1), Err(Error::Domain { .. })));

        let g = make_grid(Segment::new(1.0).unwrap(), 16).unwrap();
        let lin = g.sample(|x| Complex64::new(x, 0.0));
        assert!((lin.evaluate(0.5).unwrap() - 0.5).norm() < 1e-12);
    }

    #[test]
    fn integrate_and_inner_examples() {
        let g = make_grid(Segment::new(2.5).unwrap(), 16).unwrap();
        assert_abs_diff_eq!(g.constant(Complex64::new(1.0, 0.0)).integrate().re, 2.5, epsilon = 1e-13);

        let g = make_grid(Segment::new(PI).unwrap(), 64).unwrap();
        let e1 = g.sample(|x| (i() * x).exp());
        assert_abs_diff_eq!(e1.inner(&e1).unwrap().re, PI, epsilon = 1e-12);

        let g = make_grid(Segment::new(2.0 * PI).unwrap(), 64).unwrap();
        let e1 = g.sample(|x| (i() * x).exp());
        let e2 = g.sample(|x| (2.0 * i() * x).exp());
        assert!(e1.inner(&e2).unwrap().norm() < 1e-10);

        let other = make_grid(Segment::new(2.0 * PI).unwrap(), 32).unwrap();
        let e3 = other.sample(|x| (i() * x).exp());
        assert!(matches!(e1.inner(&e3), Err(Error::Config(_))));
    }

    #[test]
    fn clenshaw_curtis_weights_sum_to_length() {
        for n in [8, 9, 33, 128] {
            let g = make_grid(Segment::new(1.7).unwrap(), n).unwrap();
            let q = g.quadrature();
            assert_abs_diff_eq!(q.weight_sum(), 1.7, epsilon = 1e-12 * 1.7);
            assert!(q.weights.iter().all(|&w| w > 0.0));
            // exact on x^(n-1)
            let d = q.exact_degree as i32;
            let got = q.integrate(|x| Complex64::new(x.powi(d), 0.0)).re;
            let exact = 1.7f64.powi(d + 1) / (d + 1) as f64;
            assert!((got - exact).abs() < 1e-10 * exact.max(1.0));
        }
    }

    #[test]
    fn gauss_legendre_exactness() {
        for m in [1, 5, 32, 100] {
            let q = QuadratureRule::gauss_legendre(0.3, 2.1, m);
            assert_abs_diff_eq!(q.weight_sum(), 1.8, epsilon = 1e-13);
            let d = q.exact_degree as i32;
            let got = q.integrate(|x| Complex64::new((x - 0.3).powi(d), 0.0)).re;
            let exact = 1.8f64.powi(d + 1) / (d + 1) as f64;
            assert!((got - exact).abs() < 1e-10 * exact.max(1.0), "m = {m}");
        }
    }

    #[test]
    fn series_matches_barycentric_and_derivative_matches_matrix() {
        let g = make_grid(Segment::new(PI).unwrap(), 64).unwrap();
        let f = g.sample(|x| (2.3 * i() * x).exp() * (1.0 + x * x));
        let s = f.series();
        assert!(s.degree() < 63);
        for x in [0.0, 0.37, 1.0, 2.9, PI] {
            assert!((s.eval(x) - f.evaluate(x).unwrap()).norm() < 1e-12);
        }
        let dm = f.differentiate();
        let ds = s.derivative();
        for (&x, v) in g.nodes().iter().zip(dm.values()) {
            assert!((ds.eval(x) - v).norm() < 1e-9);
        }
    }

    #[test]
    fn exponential_quadrature_matches_antiderivative() {
        let g = make_grid(Segment::new(PI).unwrap(), 64).unwrap();
        for k in [-16.0, -3.0, 0.5, 7.0, 16.0] {
            let f = g.sample(|x| (k * i() * x).exp());
            let exact = ((k * i() * PI).exp() - 1.0) / (k * i());
            assert!((f.integrate() - exact).norm() < 1e-10, "k = {k}");
        }
    }

    #[test]
    fn derivative_then_integral_reproduces_increment() {
        let g = make_grid(Segment::new(PI).unwrap(), 64).unwrap();
        let f = g.sample(|x| (1.7 * i() * x).exp() + x.cos());
        let ds = f.series().derivative();
        for (&x, &fx) in g.nodes().iter().zip(f.values()) {
            let inc = integrate_gl(0.0, x, 40, |t| ds.eval(t));
            assert!((inc - (fx - f.values()[0])).norm() < 1e-9);
        }
    }
}
