//! Zeros of Δ: counting by the argument principle, localization by box
//! subdivision, multiplicities and Taylor data of `(λ − λₙ)^m / Δ(λ)`.

use std::f64::consts::PI;

use log::{debug, warn};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::characteristic::{CharacteristicFn, MAX_DERIVATIVE_ORDER, OVERFLOW_GUARD};
use crate::error::{Error, Result};
use crate::function_space::gauss_legendre;

/// One point of the spectrum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Eigenvalue {
    pub lambda: Complex64,
    pub multiplicity: usize,
    /// `d_j = j! · [j-th Taylor coefficient of (λ − λₙ)^m / Δ(λ)]`, `j < m`.
    pub taylor: Vec<Complex64>,
}

impl Eigenvalue {
    pub fn validate(&self) -> Result<()> {
        if self.multiplicity == 0 || self.taylor.len() != self.multiplicity {
            return Err(Error::InvalidEigenvalue(format!(
                "multiplicity {} with {} Taylor coefficients",
                self.multiplicity,
                self.taylor.len()
            )));
        }
        if self.taylor[0].norm() == 0.0 || !self.taylor[0].is_finite() {
            return Err(Error::InvalidEigenvalue(format!("d_0 = {} at {}", self.taylor[0], self.lambda)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ContourSpec {
    Circle {
        center: Complex64,
        radius: f64,
        /// Minimum number of quadrature nodes.
        points: usize,
    },
    Rectangle {
        re_min: f64,
        re_max: f64,
        im_min: f64,
        im_max: f64,
        points: usize,
    },
}

impl ContourSpec {
    pub fn circle(center: Complex64, radius: f64) -> Self {
        ContourSpec::Circle {
            center,
            radius,
            points: DEFAULT_POINTS,
        }
    }

    pub fn rectangle(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Self {
        ContourSpec::Rectangle {
            re_min,
            re_max,
            im_min,
            im_max,
            points: DEFAULT_POINTS,
        }
    }

    fn points(&self) -> usize {
        match *self {
            ContourSpec::Circle { points, .. } | ContourSpec::Rectangle { points, .. } => points,
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            ContourSpec::Circle { center, radius, .. } => center.is_finite() && radius.is_finite() && radius > 0.0,
            ContourSpec::Rectangle {
                re_min,
                re_max,
                im_min,
                im_max,
                ..
            } => [re_min, re_max, im_min, im_max].iter().all(|v| v.is_finite()) && re_min < re_max && im_min < im_max,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Config(format!("degenerate contour {self:?}")))
        }
    }

    fn paths(&self) -> Vec<Path> {
        match *self {
            ContourSpec::Circle { center, radius, .. } => vec![Path::Arc {
                center,
                radius,
                t0: 0.0,
                t1: 2.0 * PI,
            }],
            ContourSpec::Rectangle {
                re_min,
                re_max,
                im_min,
                im_max,
                ..
            } => {
                let c = [
                    Complex64::new(re_min, im_min),
                    Complex64::new(re_max, im_min),
                    Complex64::new(re_max, im_max),
                    Complex64::new(re_min, im_max),
                ];
                (0..4).map(|k| Path::Line { a: c[k], b: c[(k + 1) % 4] }).collect()
            }
        }
    }
}

pub const DEFAULT_POINTS: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumOptions {
    pub tol_zero: f64,
    /// Largest accepted distance of the winding integral from an integer.
    pub residual: f64,
    /// Quadrature nodes for contours and Cauchy coefficients.
    pub points: usize,
    /// Several zeros not separated by boxes of this size are one multiple zero.
    pub cluster: f64,
    /// Smallest |Δ| accepted on a contour, relative to the size of its terms.
    pub tol_edge: f64,
    pub max_iter: usize,
    /// Initial subdivisions per axis of the bounding box.
    pub initial_split: usize,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        Self {
            tol_zero: 1e-11,
            residual: 0.25,
            points: DEFAULT_POINTS,
            cluster: 1e-6,
            tol_edge: 1e-14,
            max_iter: 60,
            initial_split: 1,
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Path {
    Line { a: Complex64, b: Complex64 },
    Arc { center: Complex64, radius: f64, t0: f64, t1: f64 },
}

impl Path {
    /// Point and derivative at parameter `s ∈ [0, 1]`.
    fn at(&self, s: f64) -> (Complex64, Complex64) {
        match *self {
            Path::Line { a, b } => (a + (b - a) * s, b - a),
            Path::Arc { center, radius, t0, t1 } => {
                let t = t0 + (t1 - t0) * s;
                let e = Complex64::from_polar(radius, t);
                (center + e, Complex64::i() * e * (t1 - t0))
            }
        }
    }

    fn length(&self) -> f64 {
        match *self {
            Path::Line { a, b } => (b - a).norm(),
            Path::Arc { radius, t0, t1, .. } => radius * (t1 - t0).abs(),
        }
    }
}

/// Relative box size below which several zeros are tried as one cluster.
const CLUSTER_BOX: f64 = 1e-4;

const GL_PANEL: usize = 8;
const MAX_PANEL_DEPTH: u32 = 48;
const MAX_LOG_STEP: f64 = 0.5;

/// `(1/2πi) ∮ w(λ) Δ′(λ)/Δ(λ) dλ` with adaptive panels.
fn winding_integral(
    cf: &CharacteristicFn,
    contour: &ContourSpec,
    opts: &SpectrumOptions,
    weight: impl Fn(Complex64) -> Complex64,
) -> Result<Complex64> {
    contour.validate()?;
    let b = cf.segment().length();
    let paths = contour.paths();
    let perimeter: f64 = paths.iter().map(Path::length).sum();
    // Δ oscillates at most like exp(iλb) along the contour.
    let h = 0.5 / b.max(1e-6);
    let min_panels = (contour.points() / GL_PANEL).max(4);
    let rule = gauss_legendre(GL_PANEL);
    let too_close = |z: Complex64, d: Complex64| Error::ContourTooClose {
        detail: format!("|Delta| = {:e} at lambda = {z}", d.norm()),
    };

    let mut total = Complex64::new(0.0, 0.0);
    for path in paths {
        let share = path.length() / perimeter;
        let n0 = ((path.length() / h).ceil() as usize).max((min_panels as f64 * share).ceil() as usize).max(1);
        let eval = |s: f64| -> Result<Complex64> {
            let (z, _) = path.at(s);
            let d = cf.delta(z)?;
            if d.norm() < opts.tol_edge * cf.delta_scale(z)? || !d.is_finite() {
                return Err(too_close(z, d));
            }
            Ok(d)
        };
        for k in 0..n0 {
            let s0 = k as f64 / n0 as f64;
            let s1 = (k + 1) as f64 / n0 as f64;
            let mut stack = vec![(s0, s1, eval(s0)?, eval(s1)?, 0u32)];
            while let Some((a, c, da, dc, depth)) = stack.pop() {
                let m = 0.5 * (a + c);
                let dm = eval(m)?;
                let fine = (dm / da).ln().norm() <= MAX_LOG_STEP && (dc / dm).ln().norm() <= MAX_LOG_STEP;
                if !fine {
                    if depth >= MAX_PANEL_DEPTH {
                        return Err(Error::ContourTooClose {
                            detail: format!("panel refinement exhausted near lambda = {}", path.at(m).0),
                        });
                    }
                    stack.push((m, c, dm, dc, depth + 1));
                    stack.push((a, m, da, dm, depth + 1));
                    continue;
                }
                let half = 0.5 * (c - a);
                for &(t, w) in rule {
                    let (z, dz) = path.at(m + half * t);
                    let d = cf.delta(z)?;
                    if d.norm() < opts.tol_edge * cf.delta_scale(z)? {
                        return Err(too_close(z, d));
                    }
                    let d1 = cf.delta_derivative(z, 1)?;
                    total += weight(z) * d1 / d * dz * (w * half);
                }
            }
        }
    }
    Ok(total / Complex64::new(0.0, 2.0 * PI))
}

/// Number of zeros of Δ inside the contour, with multiplicity.
pub fn count_zeros(cf: &CharacteristicFn, contour: &ContourSpec) -> Result<usize> {
    count_zeros_with(cf, contour, &SpectrumOptions::default())
}

pub fn count_zeros_with(cf: &CharacteristicFn, contour: &ContourSpec, opts: &SpectrumOptions) -> Result<usize> {
    let w = winding_integral(cf, contour, opts, |_| Complex64::new(1.0, 0.0))?;
    let n = w.re.round();
    let residual = (w - n).norm();
    if residual >= opts.residual || n < 0.0 {
        return Err(Error::ContourTooClose {
            detail: format!("winding integral {w} is not near a non-negative integer"),
        });
    }
    Ok(n as usize)
}

#[derive(Debug, Clone, Copy)]
struct Rect {
    re_min: f64,
    re_max: f64,
    im_min: f64,
    im_max: f64,
}

impl Rect {
    fn contour(&self, points: usize) -> ContourSpec {
        ContourSpec::Rectangle {
            re_min: self.re_min,
            re_max: self.re_max,
            im_min: self.im_min,
            im_max: self.im_max,
            points,
        }
    }

    fn center(&self) -> Complex64 {
        Complex64::new(0.5 * (self.re_min + self.re_max), 0.5 * (self.im_min + self.im_max))
    }

    fn diameter(&self) -> f64 {
        (self.re_max - self.re_min).hypot(self.im_max - self.im_min)
    }

    fn contains(&self, z: Complex64, slack: f64) -> bool {
        z.re >= self.re_min - slack && z.re <= self.re_max + slack && z.im >= self.im_min - slack && z.im <= self.im_max + slack
    }

    fn split(&self, fx: f64, fy: f64) -> [Rect; 4] {
        let xm = self.re_min + fx * (self.re_max - self.re_min);
        let ym = self.im_min + fy * (self.im_max - self.im_min);
        [
            Rect { re_max: xm, im_max: ym, ..*self },
            Rect { re_min: xm, im_max: ym, ..*self },
            Rect { re_max: xm, im_min: ym, ..*self },
            Rect { re_min: xm, im_min: ym, ..*self },
        ]
    }

    fn error(&self) -> Error {
        Error::NonConvergence {
            re_min: self.re_min,
            re_max: self.re_max,
            im_min: self.im_min,
            im_max: self.im_max,
        }
    }
}

/// Deterministic split fractions near 1/2.
fn jitter(k: usize) -> (f64, f64) {
    const G1: f64 = 0.618_033_988_749_895;
    const G2: f64 = 0.754_877_666_246_693;
    let a = (k as f64 * G1 + 0.31).fract();
    let b = (k as f64 * G2 + 0.47).fract();
    (0.44 + 0.12 * a, 0.44 + 0.12 * b)
}

/// A located zero (or cluster) before multiplicity and Taylor data.
#[derive(Debug, Clone, Copy)]
struct Located {
    lambda: Complex64,
    count: usize,
}

struct Search<'a> {
    cf: &'a CharacteristicFn,
    opts: &'a SpectrumOptions,
    found: Vec<Located>,
    splits: usize,
}

impl Search<'_> {
    fn count(&self, r: &Rect) -> Result<usize> {
        count_zeros_with(self.cf, &r.contour(self.opts.points), self.opts)
    }

    fn process(&mut self, rect: Rect, count: usize) -> Result<()> {
        if count == 0 {
            return Ok(());
        }
        if count == 1 {
            if let Some(z) = self.newton(rect.center(), 0, &rect)? {
                if rect.contains(z, 1e-12 * (1.0 + z.norm())) {
                    self.found.push(Located { lambda: z, count: 1 });
                    return Ok(());
                }
            }
        } else if rect.diameter() < CLUSTER_BOX * (1.0 + rect.center().norm()) {
            if let Some(z) = self.cluster_center(&rect, count)? {
                self.found.push(Located { lambda: z, count });
                return Ok(());
            }
        }
        let floor = if count == 1 { 1e-13 } else { self.opts.cluster };
        if rect.diameter() < floor * (1.0 + rect.center().norm()) {
            return Err(rect.error());
        }
        self.subdivide(rect, count)
    }

    fn subdivide(&mut self, rect: Rect, count: usize) -> Result<()> {
        let mut last_err = None;
        for _ in 0..8 {
            self.splits += 1;
            let (fx, fy) = jitter(self.splits);
            let kids = rect.split(fx, fy);
            let counts: Result<Vec<usize>> = kids.iter().map(|k| self.count(k)).collect();
            match counts {
                Ok(c) if c.iter().sum::<usize>() == count => {
                    for (k, n) in kids.into_iter().zip(c) {
                        self.process(k, n)?;
                    }
                    return Ok(());
                }
                Ok(c) => {
                    debug!("box counts {c:?} do not add up to {count}; re-splitting");
                    last_err = Some(rect.error());
                }
                Err(e @ Error::ContourTooClose { .. }) => last_err = Some(e),
                Err(e) => return Err(e),
            }
        }
        Err(last_err.unwrap_or_else(|| rect.error()))
    }

    /// Newton on `Δ^(order)`, abandoned if it leaves a neighbourhood of `rect`.
    fn newton(&self, start: Complex64, order: usize, rect: &Rect) -> Result<Option<Complex64>> {
        let slack = rect.diameter();
        let mut z = start;
        for _ in 0..self.opts.max_iter {
            let (f, df) = match self.pair(z, order) {
                Ok(v) => v,
                Err(Error::Range(_)) => return Ok(None),
                Err(e) => return Err(e),
            };
            if df.norm() == 0.0 || !df.is_finite() {
                return Ok(None);
            }
            let step = f / df;
            z -= step;
            if !z.is_finite() || !rect.contains(z, slack) {
                return Ok(None);
            }
            if step.norm() <= 4.0 * f64::EPSILON * (1.0 + z.norm()) {
                break;
            }
        }
        let (f, df) = self.pair(z, order)?;
        Ok((f.norm() < self.opts.tol_zero * df.norm().max(1.0)).then_some(z))
    }

    fn pair(&self, z: Complex64, order: usize) -> Result<(Complex64, Complex64)> {
        Ok((self.cf.delta_derivative(z, order)?, self.cf.delta_derivative(z, order + 1)?))
    }

    /// Centre of a cluster of `count` zeros, if they behave as one zero of
    /// that multiplicity.
    fn cluster_center(&self, rect: &Rect, count: usize) -> Result<Option<Complex64>> {
        if count > MAX_DERIVATIVE_ORDER {
            return Ok(None);
        }
        let c = rect.center();
        let s1 = winding_integral(self.cf, &rect.contour(self.opts.points), self.opts, |z| z - c)?;
        let centroid = c + s1 / count as f64;
        let z = self.newton(centroid, count - 1, rect)?.unwrap_or(centroid);
        let d = self.cf.delta(z)?;
        let d1 = self.cf.delta_derivative(z, 1)?;
        Ok((rect.contains(z, 0.0) && d.norm() < self.opts.tol_zero * d1.norm().max(1.0)).then_some(z))
    }
}

/// All zeros of Δ with `|λ| ≤ radius`, sorted by `(Re λ, Im λ)`.
pub fn find_spectrum(cf: &CharacteristicFn, radius: f64, opts: &SpectrumOptions) -> Result<Vec<Eigenvalue>> {
    if !(radius.is_finite() && radius > 0.0) {
        return Err(Error::Config(format!("spectrum radius must be positive, got {radius}")));
    }
    let b = cf.segment().length();
    let im_cap = 0.95 * OVERFLOW_GUARD / b;
    let n_split = opts.initial_split.max(1);

    let mut last_err = None;
    for attempt in 0..6 {
        let (j1, j2) = jitter(attempt + 17);
        let margin = 0.5 + 0.013 * radius;
        let mut outer = Rect {
            re_min: -radius - margin * (1.0 + j1),
            re_max: radius + margin * (1.0 + j2),
            im_min: -radius - margin * (1.2 + j2),
            im_max: radius + margin * (0.9 + j1),
        };
        if outer.im_max > im_cap || outer.im_min < -im_cap {
            warn!("spectrum search clipped to |Im lambda| <= {im_cap:.3}");
            outer.im_max = outer.im_max.min(im_cap);
            outer.im_min = outer.im_min.max(-im_cap);
        }
        let mut search = Search {
            cf,
            opts,
            found: Vec::new(),
            splits: attempt * 101,
        };
        let result = (|| -> Result<usize> {
            let total = search.count(&outer)?;
            let dx = (outer.re_max - outer.re_min) / n_split as f64;
            let dy = (outer.im_max - outer.im_min) / n_split as f64;
            let mut sum = 0;
            for i in 0..n_split {
                for j in 0..n_split {
                    let r = Rect {
                        re_min: outer.re_min + i as f64 * dx,
                        re_max: if i + 1 == n_split { outer.re_max } else { outer.re_min + (i + 1) as f64 * dx },
                        im_min: outer.im_min + j as f64 * dy,
                        im_max: if j + 1 == n_split { outer.im_max } else { outer.im_min + (j + 1) as f64 * dy },
                    };
                    let n = if n_split == 1 { total } else { search.count(&r)? };
                    sum += n;
                    search.process(r, n)?;
                }
            }
            if sum != total {
                return Err(outer.error());
            }
            Ok(total)
        })();
        match result {
            Ok(total) => return finish(cf, opts, radius, merge(search.found, opts.cluster), total),
            Err(e @ (Error::ContourTooClose { .. } | Error::NonConvergence { .. })) => {
                debug!("spectrum attempt {attempt} failed: {e}");
                last_err = Some(e);
            }
            Err(e) => return Err(e),
        }
    }
    Err(last_err.expect("at least one attempt"))
}

/// Merges located zeros closer than `cluster`.
fn merge(mut found: Vec<Located>, cluster: f64) -> Vec<Located> {
    found.sort_by(|a, b| a.lambda.re.total_cmp(&b.lambda.re));
    let mut out: Vec<Located> = Vec::with_capacity(found.len());
    for z in found {
        if let Some(prev) = out.iter_mut().rev().take_while(|p| z.lambda.re - p.lambda.re < cluster).find(|p| (p.lambda - z.lambda).norm() < cluster) {
            let n = (prev.count + z.count) as f64;
            prev.lambda = (prev.lambda * prev.count as f64 + z.lambda * z.count as f64) / n;
            prev.count += z.count;
        } else {
            out.push(z);
        }
    }
    out
}

fn finish(
    cf: &CharacteristicFn,
    opts: &SpectrumOptions,
    radius: f64,
    found: Vec<Located>,
    total: usize,
) -> Result<Vec<Eigenvalue>> {
    let located: usize = found.iter().map(|z| z.count).sum();
    if located != total {
        return Err(Error::InvalidEigenvalue(format!("located {located} zeros, contour count {total}")));
    }
    let slack = 1e-9 * radius.max(1.0);
    let mut out = Vec::new();
    for (idx, z) in found.iter().enumerate() {
        if z.lambda.norm() > radius + slack {
            continue;
        }
        let sep = found
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != idx)
            .map(|(_, o)| (o.lambda - z.lambda).norm())
            .fold(f64::INFINITY, f64::min);
        let delta = (sep / 4.0).min(0.1);
        let ev = local_data(cf, z.lambda, delta, opts)?;
        if ev.multiplicity != z.count {
            return Err(Error::InvalidEigenvalue(format!(
                "tight circle at {} counts {} zeros, expected {}",
                z.lambda, ev.multiplicity, z.count
            )));
        }
        out.push(ev);
    }
    out.sort_by(|a, b| {
        a.lambda
            .re
            .total_cmp(&b.lambda.re)
            .then(a.lambda.im.total_cmp(&b.lambda.im))
    });
    Ok(out)
}

/// Multiplicity (tight-circle count) and Taylor data at a zero.
pub fn local_data(cf: &CharacteristicFn, lambda: Complex64, delta: f64, opts: &SpectrumOptions) -> Result<Eigenvalue> {
    let circle = ContourSpec::Circle {
        center: lambda,
        radius: delta,
        points: opts.points,
    };
    let m = count_zeros_with(cf, &circle, opts)?;
    if m == 0 {
        return Err(Error::InvalidEigenvalue(format!("no zero of Delta near {lambda}")));
    }
    let taylor = taylor_data(cf, lambda, m, delta, opts.points)?;
    let ev = Eigenvalue {
        lambda,
        multiplicity: m,
        taylor,
    };
    ev.validate()?;
    Ok(ev)
}

/// `d_j = j! a_j`, with `a_j` the Cauchy coefficients of `(λ − λₙ)^m / Δ`
/// on the circle of radius `delta`.
pub fn taylor_data(cf: &CharacteristicFn, lambda: Complex64, m: usize, delta: f64, points: usize) -> Result<Vec<Complex64>> {
    let n = points.max(2 * m + 8);
    let samples: Vec<(Complex64, Complex64)> = (0..n)
        .map(|k| {
            let w = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64);
            let h = w * delta;
            cf.delta(lambda + h).map(|d| (w, h.powu(m as u32) / d))
        })
        .collect::<Result<_>>()?;
    let mut fact = 1.0;
    Ok((0..m)
        .map(|j| {
            if j > 0 {
                fact *= j as f64;
            }
            let a: Complex64 = samples.iter().map(|&(w, g)| g * w.powu(j as u32).conj()).sum::<Complex64>()
                / (n as f64 * delta.powi(j as i32));
            a * fact
        })
        .collect())
}

/// `N(r)` for each radius.
pub fn counting_function(cf: &CharacteristicFn, radii: &[f64], opts: &SpectrumOptions) -> Result<Vec<(f64, usize)>> {
    radii
        .iter()
        .map(|&r| {
            let c = ContourSpec::Circle {
                center: Complex64::new(0.0, 0.0),
                radius: r,
                points: opts.points,
            };
            count_zeros_with(cf, &c, opts).map(|n| (r, n))
        })
        .collect()
}

/// `N(r) − (b/π) r`.
pub fn counting_defect(b: f64, r: f64, n: usize) -> f64 {
    n as f64 - b / PI * r
}

/// Largest `|Im λₙ|` (0 for an empty list).
pub fn strip_diagnostic(spectrum: &[Eigenvalue]) -> f64 {
    spectrum.iter().map(|e| e.lambda.im.abs()).fold(0.0, f64::max)
}

/// Smallest distance between distinct eigenvalues.
pub fn separation(spectrum: &[Eigenvalue]) -> Option<f64> {
    let mut best: Option<f64> = None;
    for (i, a) in spectrum.iter().enumerate() {
        for b in &spectrum[i + 1..] {
            let d = (a.lambda - b.lambda).norm();
            best = Some(best.map_or(d, |x: f64| x.min(d)));
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::{SigmaKind, SigmaSpec};
    use crate::function_space::Segment;

    fn cf(kind: SigmaKind, b: f64) -> CharacteristicFn {
        CharacteristicFn::new(SigmaSpec::new(kind, Segment::new(b).unwrap()).unwrap())
    }

    fn antiperiodic() -> CharacteristicFn {
        cf(SigmaKind::ConstantImag { alpha: 0.5 }, PI)
    }

    #[test]
    fn counts() {
        let z = Complex64::new(0.0, 0.0);
        assert_eq!(count_zeros(&cf(SigmaKind::Zero, 1.0), &ContourSpec::circle(z, 30.0)).unwrap(), 0);
        assert_eq!(count_zeros(&antiperiodic(), &ContourSpec::circle(z, 10.0)).unwrap(), 10);
        let empty = cf(SigmaKind::IndicatorI { c: 2.0 }, 2.0);
        assert_eq!(count_zeros(&empty, &ContourSpec::circle(z, 40.0)).unwrap(), 0);
        assert_eq!(count_zeros(&empty, &ContourSpec::rectangle(-5.0, 3.0, -2.0, 7.0)).unwrap(), 0);
    }

    #[test]
    fn contour_through_zero_is_rejected() {
        let r = count_zeros(&antiperiodic(), &ContourSpec::circle(Complex64::new(0.0, 0.0), 1.0));
        assert!(matches!(r, Err(Error::ContourTooClose { .. })), "{r:?}");
    }

    #[test]
    fn box_counts_are_additive() {
        let cf = antiperiodic();
        let whole = count_zeros(&cf, &ContourSpec::rectangle(-6.2, 5.3, -1.1, 0.9)).unwrap();
        let left = count_zeros(&cf, &ContourSpec::rectangle(-6.2, 0.4, -1.1, 0.9)).unwrap();
        let right = count_zeros(&cf, &ContourSpec::rectangle(0.4, 5.3, -1.1, 0.9)).unwrap();
        assert_eq!(whole, 6);
        assert_eq!(left + right, whole);
    }

    #[test]
    fn antiperiodic_spectrum() {
        let cf = antiperiodic();
        let spec = find_spectrum(&cf, 10.0, &SpectrumOptions::default()).unwrap();
        let want: Vec<f64> = [-9, -7, -5, -3, -1, 1, 3, 5, 7, 9].iter().map(|&k| k as f64).collect();
        assert_eq!(spec.len(), want.len());
        for (ev, w) in spec.iter().zip(want) {
            assert!((ev.lambda - w).norm() < 1e-10, "{} vs {w}", ev.lambda);
            assert_eq!(ev.multiplicity, 1);
            assert!((ev.taylor[0] - Complex64::new(0.0, 2.0 / PI)).norm() < 1e-9);
            let d1 = cf.delta_derivative(ev.lambda, 1).unwrap();
            assert!((ev.taylor[0] * d1 - 1.0).norm() < 1e-8);
        }
        assert_eq!(strip_diagnostic(&spec), spec.iter().map(|e| e.lambda.im.abs()).fold(0.0, f64::max));
        assert!(strip_diagnostic(&spec) < 1e-10);
        assert!((separation(&spec).unwrap() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn spectrum_independent_of_granularity() {
        let cf = antiperiodic();
        let a = find_spectrum(&cf, 8.0, &SpectrumOptions::default()).unwrap();
        let opts = SpectrumOptions {
            initial_split: 3,
            ..Default::default()
        };
        let b = find_spectrum(&cf, 8.0, &opts).unwrap();
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert!((x.lambda - y.lambda).norm() < 1e-9);
        }
    }

    #[test]
    fn empty_spectra() {
        assert!(find_spectrum(&cf(SigmaKind::Zero, 1.0), 100.0, &SpectrumOptions::default())
            .unwrap()
            .is_empty());
        assert!(find_spectrum(&cf(SigmaKind::IndicatorI { c: 1.0 }, 1.0), 60.0, &SpectrumOptions::default())
            .unwrap()
            .is_empty());
        assert_eq!(strip_diagnostic(&[]), 0.0);
        assert_eq!(separation(&[]), None);
    }

    #[test]
    fn counting_function_examples() {
        let cf = antiperiodic();
        let n = counting_function(&cf, &[4.0, 20.0, 50.0], &SpectrumOptions::default()).unwrap();
        assert_eq!(n, vec![(4.0, 4), (20.0, 20), (50.0, 50)]);
        assert_eq!(counting_defect(PI, 20.0, 20), 0.0);
    }

    #[test]
    fn taylor_data_of_simple_zero() {
        let cf = antiperiodic();
        let d = taylor_data(&cf, Complex64::new(3.0, 0.0), 1, 0.1, 256).unwrap();
        assert!((d[0] - Complex64::new(0.0, 2.0 / PI)).norm() < 1e-12);
    }

    #[test]
    fn eigenvalue_validation() {
        let ev = Eigenvalue {
            lambda: Complex64::new(1.0, 0.0),
            multiplicity: 1,
            taylor: vec![Complex64::new(0.0, 0.0)],
        };
        assert!(matches!(ev.validate(), Err(Error::InvalidEigenvalue(_))));
        let ev = Eigenvalue {
            taylor: vec![],
            ..ev
        };
        assert!(ev.validate().is_err());
    }
}
