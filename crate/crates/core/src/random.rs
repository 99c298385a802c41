//! Seeded random smooth functions for property checks.

use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;

use crate::characteristic::CharacteristicFn;
use crate::error::Result;
use crate::function_space::{Grid, GridFunction};
use crate::resolvent::apply_resolvent;

fn unit(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// A quartic in `x/b` plus one complex exponential of modest frequency.
pub fn smooth_function(grid: &Arc<Grid>, rng: &mut impl Rng) -> GridFunction {
    let b = grid.segment().length();
    let a: Vec<Complex64> = (0..5).map(|_| unit(rng)).collect();
    let c = unit(rng);
    let omega = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-0.5..0.5));
    grid.sample(|x| {
        let t = x / b;
        let p = a.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &ak| acc * t + ak);
        p + c * (Complex64::i() * omega * x).exp()
    })
}

/// A random element of the domain of L: the inverse of L applied to a random
/// smooth function.
pub fn domain_function(cf: &CharacteristicFn, grid: &Arc<Grid>, rng: &mut impl Rng) -> Result<GridFunction> {
    let w = smooth_function(grid, rng);
    Ok(apply_resolvent(cf, Complex64::new(0.0, 0.0), &w)?.y)
}

/// A non-spectral point drawn from the given rectangle.
pub fn nonspectral_point(
    cf: &CharacteristicFn,
    rng: &mut impl Rng,
    re: std::ops::Range<f64>,
    im: std::ops::Range<f64>,
    min_abs_delta: f64,
) -> Result<Complex64> {
    loop {
        let z = Complex64::new(rng.gen_range(re.clone()), rng.gen_range(im.clone()));
        if cf.delta(z)?.norm() > min_abs_delta {
            return Ok(z);
        }
    }
}
