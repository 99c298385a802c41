//! The boundary function σ, the functional `U(y) = y(0) − ∫₀ᵇ(−i y′) σ̄ dx`,
//! and the structural checks on σ.

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::function_space::{gauss_legendre, gl_points_for_degree, Grid, GridFunction, Segment};
use crate::spectrum::Eigenvalue;

/// Threshold used when measuring the support of a sampled σ.
pub const SUPPORT_TOL: f64 = 1e-12;

const MEASURE_BUCKET: usize = 16;
const MEASURE_BUCKETS: usize = 64;

#[derive(Debug, Clone)]
pub enum SigmaKind {
    Zero,
    /// σ = i on `[0, c]`, 0 on `(c, b]`.
    IndicatorI { c: f64 },
    /// σ = iα on `[0, b]`.
    ConstantImag { alpha: f64 },
    /// σ(x) = i(α + γ x / b).
    LinearImag { alpha: f64, gamma: f64 },
    Sampled(GridFunction),
}

/// A maximal interval on which σ is nonzero and polynomial (or smooth).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Piece {
    pub start: f64,
    pub end: f64,
    /// Polynomial degree of σ on the piece.
    pub degree: usize,
}

/// Discrete measure `Σ_k W_k δ(μ − μ_k)` approximating `σ̄(μ) dμ`.
#[derive(Debug, Clone, Default)]
pub struct SigmaMeasure {
    pub points: Vec<f64>,
    pub weights: Vec<Complex64>,
}

impl SigmaMeasure {
    /// `Σ_k W_k h(μ_k) ≈ ∫ h σ̄`.
    #[inline]
    pub fn integrate(&self, mut h: impl FnMut(f64) -> Complex64) -> Complex64 {
        self.points
            .iter()
            .zip(&self.weights)
            .fold(Complex64::new(0.0, 0.0), |acc, (&mu, &w)| acc + w * h(mu))
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

struct MeasureCache([OnceLock<SigmaMeasure>; MEASURE_BUCKETS]);

#[derive(Clone)]
pub struct SigmaSpec {
    kind: SigmaKind,
    segment: Segment,
    measures: Arc<MeasureCache>,
}

impl fmt::Debug for SigmaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SigmaSpec")
            .field("kind", &self.kind)
            .field("b", &self.segment.length())
            .finish()
    }
}

impl SigmaSpec {
    pub fn new(kind: SigmaKind, segment: Segment) -> Result<Self> {
        let b = segment.length();
        match &kind {
            SigmaKind::IndicatorI { c } if !(c.is_finite() && (0.0..=b).contains(c)) => {
                return Err(Error::Config(format!("indicator endpoint c = {c} outside [0, {b}]")));
            }
            SigmaKind::ConstantImag { alpha } if !alpha.is_finite() => {
                return Err(Error::Config("non-finite alpha".into()));
            }
            SigmaKind::LinearImag { alpha, gamma } if !(alpha.is_finite() && gamma.is_finite()) => {
                return Err(Error::Config("non-finite linear sigma parameters".into()));
            }
            SigmaKind::Sampled(g) if g.segment() != segment => {
                return Err(Error::Config("sampled sigma lives on a different segment".into()));
            }
            _ => {}
        }
        Ok(Self {
            kind,
            segment,
            measures: Arc::new(MeasureCache(std::array::from_fn(|_| OnceLock::new()))),
        })
    }

    pub fn zero(segment: Segment) -> Self {
        Self::new(SigmaKind::Zero, segment).expect("zero sigma is always valid")
    }

    pub fn kind(&self) -> &SigmaKind {
        &self.kind
    }

    pub fn segment(&self) -> Segment {
        self.segment
    }

    pub fn value(&self, x: f64) -> Complex64 {
        let b = self.segment.length();
        match &self.kind {
            SigmaKind::Zero => Complex64::new(0.0, 0.0),
            SigmaKind::IndicatorI { c } => {
                if x <= *c {
                    Complex64::i()
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }
            SigmaKind::ConstantImag { alpha } => Complex64::new(0.0, *alpha),
            SigmaKind::LinearImag { alpha, gamma } => Complex64::new(0.0, alpha + gamma * x / b),
            SigmaKind::Sampled(g) => g.series().eval(x.clamp(0.0, b)),
        }
    }

    /// Intervals on which σ is nonzero and smooth.
    pub fn pieces(&self) -> Vec<Piece> {
        let b = self.segment.length();
        match &self.kind {
            SigmaKind::Zero => vec![],
            SigmaKind::IndicatorI { c } if *c > 0.0 => vec![Piece {
                start: 0.0,
                end: *c,
                degree: 0,
            }],
            SigmaKind::IndicatorI { .. } => vec![],
            SigmaKind::ConstantImag { alpha } if *alpha != 0.0 => vec![Piece {
                start: 0.0,
                end: b,
                degree: 0,
            }],
            SigmaKind::ConstantImag { .. } => vec![],
            SigmaKind::LinearImag { alpha, gamma } if *alpha != 0.0 || *gamma != 0.0 => vec![Piece {
                start: 0.0,
                end: b,
                degree: 1,
            }],
            SigmaKind::LinearImag { .. } => vec![],
            SigmaKind::Sampled(g) => vec![Piece {
                start: 0.0,
                end: b,
                degree: g.series().degree(),
            }],
        }
    }

    /// Measure for `σ̄ dμ` that is exact against polynomials of degree
    /// `extra_degree` (piecewise, up to the degree of σ itself). Cached in
    /// buckets of 16.
    pub fn measure(&self, extra_degree: usize) -> &SigmaMeasure {
        let bucket = extra_degree.div_ceil(MEASURE_BUCKET).min(MEASURE_BUCKETS - 1);
        self.measures.0[bucket].get_or_init(|| self.build_measure(0.0, self.segment.length(), bucket * MEASURE_BUCKET))
    }

    /// Uncached measure restricted to `[a, c]`.
    pub fn measure_on(&self, a: f64, c: f64, extra_degree: usize) -> SigmaMeasure {
        self.build_measure(a, c, extra_degree)
    }

    fn build_measure(&self, a: f64, c: f64, extra_degree: usize) -> SigmaMeasure {
        let mut out = SigmaMeasure::default();
        for piece in self.pieces() {
            let lo = piece.start.max(a);
            let hi = piece.end.min(c);
            if hi <= lo {
                continue;
            }
            let m = gl_points_for_degree(piece.degree + extra_degree);
            let half = 0.5 * (hi - lo);
            let mid = 0.5 * (hi + lo);
            for &(t, w) in gauss_legendre(m) {
                let mu = mid + half * t;
                out.points.push(mu);
                out.weights.push(self.value(mu).conj() * (w * half));
            }
        }
        out
    }

    /// `U(y) = y(0) − ∫₀ᵇ (−i y′) σ̄ dx`.
    pub fn apply_u(&self, y: &GridFunction) -> Result<Complex64> {
        if y.segment() != self.segment {
            return Err(Error::Config("function and sigma live on different segments".into()));
        }
        let dy = y.series().derivative();
        let measure = self.measure(dy.degree());
        let integral = measure.integrate(|mu| -Complex64::i() * dy.eval(mu));
        Ok(y.values()[0] - integral)
    }

    /// `U` applied in the second argument of `F(x, μ)`, for every grid `x`:
    /// `F(x, 0) − ∫₀ᵇ (−i ∂F/∂μ(x, μ)) σ̄(μ) dμ`.
    ///
    /// `mu_degree` is the polynomial degree of `∂F/∂μ` in μ the measure must
    /// integrate exactly.
    pub fn apply_u_parametric(
        &self,
        grid: &Arc<Grid>,
        f: impl Fn(f64, f64) -> Complex64,
        df_dmu: impl Fn(f64, f64) -> Complex64,
        mu_degree: usize,
    ) -> Result<GridFunction> {
        if grid.segment() != self.segment {
            return Err(Error::Config("grid and sigma live on different segments".into()));
        }
        let measure = self.measure(mu_degree);
        Ok(grid.sample(|x| f(x, 0.0) + Complex64::i() * measure.integrate(|mu| df_dmu(x, mu))))
    }

    /// Measured support extrema: `(min supp(σ − i), max supp(σ))`.
    pub fn support_extrema(&self) -> (Option<f64>, Option<f64>) {
        let b = self.segment.length();
        match &self.kind {
            SigmaKind::Zero => (Some(0.0), None),
            SigmaKind::IndicatorI { c } => ((*c < b).then_some(*c), (*c > 0.0).then_some(*c)),
            SigmaKind::ConstantImag { alpha } => ((*alpha != 1.0).then_some(0.0), (*alpha != 0.0).then_some(b)),
            SigmaKind::LinearImag { alpha, gamma } => (
                (*alpha != 1.0 || *gamma != 0.0).then_some(0.0),
                (*alpha != 0.0 || *gamma != 0.0).then_some(b),
            ),
            SigmaKind::Sampled(g) => {
                let nodes = g.nodes();
                let vals = g.values();
                let min = nodes
                    .iter()
                    .zip(vals)
                    .find(|(_, v)| (*v - Complex64::i()).norm() > SUPPORT_TOL)
                    .map(|(&x, _)| x);
                let max = nodes
                    .iter()
                    .zip(vals)
                    .rev()
                    .find(|(_, v)| v.norm() > SUPPORT_TOL)
                    .map(|(&x, _)| x);
                (min, max)
            }
        }
    }

    /// Support and spectral conditions, measured over a finite spectrum.
    pub fn check_conditions(&self, spectrum: &[Eigenvalue], radius: f64) -> ConditionReport {
        let b = self.segment.length();
        let (min_supp, max_supp) = self.support_extrema();
        let conminmax_holds = min_supp == Some(0.0) && max_supp == Some(b);
        let strip_bound = crate::spectrum::strip_diagnostic(spectrum);
        let separation = crate::spectrum::separation(spectrum);
        let max_multiplicity = spectrum.iter().map(|e| e.multiplicity).max().unwrap_or(0);
        ConditionReport {
            conminmax_holds,
            min_support_sigma_minus_i: min_supp,
            max_support_sigma: max_supp,
            strip_bound,
            separation,
            max_multiplicity,
            eigenvalue_count: spectrum.len(),
            observed_radius: radius,
        }
    }
}

/// Structural conditions on σ and on the spectrum it generates.
///
/// The support condition is `min supp(σ − i) = 0` and `max supp(σ) = b`.
/// A variant of it in the literature is written with `σ + i`; this report
/// uses `σ − i`, which is the form consistent with σ = i on `[0, c]` being
/// exactly the empty-spectrum case.
///
/// `strip_bound`, `separation` and `max_multiplicity` are observed over the
/// eigenvalues with `|λ| ≤ observed_radius` only; they are not suprema over
/// the full spectrum. With no eigenvalues they are vacuous (0, `None`, 0).
#[derive(Debug, Clone, Serialize)]
pub struct ConditionReport {
    pub conminmax_holds: bool,
    pub min_support_sigma_minus_i: Option<f64>,
    pub max_support_sigma: Option<f64>,
    pub strip_bound: f64,
    pub separation: Option<f64>,
    pub max_multiplicity: usize,
    pub eigenvalue_count: usize,
    pub observed_radius: f64,
}
