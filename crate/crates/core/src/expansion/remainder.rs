use std::f64::consts::PI;

use log::warn;
use num_complex::Complex64;

use super::Expansion;
use crate::error::{Error, Result};
use crate::function_space::GridFunction;
use crate::spectrum::Eigenvalue;

/// Eigenvalues closer than this to the circle `|λ| = R` move R outward.
pub const MIN_CONTOUR_DISTANCE: f64 = 0.05;

const MIN_TRAPEZOID: usize = 256;
const MAX_TRAPEZOID: usize = 1 << 17;

#[derive(Debug, Clone)]
pub struct PartialSum {
    pub value: GridFunction,
    /// Radius actually used (shifted outward if an eigenvalue sat on the circle).
    pub radius: f64,
    /// Number of eigenvalues summed.
    pub terms: usize,
}

/// `max_x √(x(b − x)) |Q(x)|` over the grid.
pub fn weighted_remainder_norm(q: &GridFunction) -> f64 {
    let b = q.segment().length();
    q.nodes()
        .iter()
        .zip(q.values())
        .map(|(&x, v)| (x * (b - x)).max(0.0).sqrt() * v.norm())
        .fold(0.0, f64::max)
}

/// Moves `radius` outward until no eigenvalue lies near `|λ| = radius`.
pub fn admissible_radius(spectrum: &[Eigenvalue], radius: f64) -> f64 {
    let mut r = radius;
    while spectrum
        .iter()
        .any(|ev| (ev.lambda.norm() - r).abs() < MIN_CONTOUR_DISTANCE)
    {
        r += MIN_CONTOUR_DISTANCE;
    }
    if r != radius {
        warn!("eigenvalue near |lambda| = {radius}; using R = {r}");
    }
    r
}

impl Expansion {
    /// `S_R f = Σ_{|λₙ| < R} P_n f`.
    pub fn partial_sum(&self, spectrum: &[Eigenvalue], f: &GridFunction, radius: f64) -> Result<PartialSum> {
        let r = admissible_radius(spectrum, radius);
        let mut value = f.scale(Complex64::new(0.0, 0.0));
        let mut terms = 0;
        for ev in spectrum.iter().filter(|ev| ev.lambda.norm() < r) {
            value = &value + &self.project(ev, f)?;
            terms += 1;
        }
        Ok(PartialSum { value, radius: r, terms })
    }

    /// `Q_R f = S_R f − f`.
    pub fn remainder(&self, spectrum: &[Eigenvalue], f: &GridFunction, radius: f64) -> Result<PartialSum> {
        let s = self.partial_sum(spectrum, f, radius)?;
        Ok(PartialSum {
            value: &s.value - f,
            ..s
        })
    }

    /// `Q_R(exp(iμx); x) = (Δ(μ)/2πi) ∮_{|λ|=R} exp(iλx)/Δ(λ) · dλ/(μ − λ)`,
    /// trapezoid rule with doubling until the samples agree.
    pub fn exponential_remainder_contour(&self, mu: Complex64, radius: f64) -> Result<GridFunction> {
        Ok(self.exponential_remainder_contour_with_condition(mu, radius)?.0)
    }

    /// As [`Self::exponential_remainder_contour`], also returning the largest
    /// mean modulus of the integrand over the grid (times `|Δ(μ)|`). Rounding
    /// limits the absolute accuracy to about `ε` times this number.
    pub fn exponential_remainder_contour_with_condition(&self, mu: Complex64, radius: f64) -> Result<(GridFunction, f64)> {
        let dmu = self.cf.delta(mu)?;
        let nodes = self.grid().nodes().to_vec();
        let i = Complex64::i();
        let mut n = MIN_TRAPEZOID;
        let zero = Complex64::new(0.0, 0.0);
        let mut acc = vec![zero; nodes.len()];
        let mut mag = vec![0.0; nodes.len()];
        // first pass: n points at offset 0; each doubling adds the midpoints
        let add = |acc: &mut Vec<Complex64>, mag: &mut Vec<f64>, n: usize, start: usize, step: usize| -> Result<()> {
            for k in (start..n).step_by(step) {
                let lambda = Complex64::from_polar(radius, 2.0 * PI * k as f64 / n as f64);
                let d = self.cf.delta(lambda)?;
                if d.norm() < 1e-8 * self.cf.delta_scale(lambda)? {
                    return Err(Error::ContourTooClose {
                        detail: format!("|Delta| = {:e} at lambda = {lambda} on the remainder contour", d.norm()),
                    });
                }
                let w = lambda / (d * (mu - lambda));
                for ((a, m), &x) in acc.iter_mut().zip(mag.iter_mut()).zip(&nodes) {
                    let term = (i * lambda * x).exp() * w;
                    *a += term;
                    *m += term.norm();
                }
            }
            Ok(())
        };
        add(&mut acc, &mut mag, n, 0, 1)?;
        let mut prev: Vec<Complex64> = acc.iter().map(|a| a / n as f64).collect();
        loop {
            if n >= MAX_TRAPEZOID {
                return Err(Error::ContourTooClose {
                    detail: format!("remainder contour |lambda| = {radius} did not converge"),
                });
            }
            let n2 = 2 * n;
            add(&mut acc, &mut mag, n2, 1, 2)?;
            n = n2;
            let cur: Vec<Complex64> = acc.iter().map(|a| a / n as f64).collect();
            let scale = cur.iter().map(|c| c.norm()).fold(0.0, f64::max);
            let floor = mag.iter().fold(0.0, |m: f64, &v| m.max(v)) / n as f64;
            let change = cur.iter().zip(&prev).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            prev = cur;
            if change <= 1e-13 * scale.max(1e-3) || change <= 1e3 * f64::EPSILON * floor {
                break;
            }
        }
        let floor = mag.iter().fold(0.0, |m: f64, &v| m.max(v)) / n as f64 * dmu.norm();
        let values = prev.into_iter().map(|v| v * dmu).collect();
        Ok((GridFunction::new(self.grid().clone(), values)?, floor))
    }
}
