use std::f64::consts::PI;

use log::warn;
use num_complex::Complex64;

use super::Expansion;
use crate::error::{Error, Result};
use crate::function_space::GridFunction;
use crate::resolvent::apply_resolvent;
use crate::spectrum::Eigenvalue;

/// Trapezoid nodes on the circle around an eigenvalue.
pub const PROJECTION_CONTOUR_POINTS: usize = 64;

/// Tolerance of the paranoid projection cross-check.
pub const PROJECTION_CHECK_TOL: f64 = 1e-7;

impl Expansion {
    /// `P_n f = u_{m−1} ∗ f`.
    pub fn project(&self, ev: &Eigenvalue, f: &GridFunction) -> Result<GridFunction> {
        let basis = self.basis(ev)?;
        let p = self.engine.convolve(basis.top(), f)?;
        if self.paranoid {
            let q = self.project_contour(ev, 0.1, f)?;
            let diff = p.max_diff(&q);
            let scale = f.max_abs().max(1.0);
            if diff > PROJECTION_CHECK_TOL * scale {
                warn!("projection at {} differs from its contour form by {diff:e}", ev.lambda);
                return Err(Error::InvalidEigenvalue(format!(
                    "projection at {} fails the contour cross-check ({diff:e})",
                    ev.lambda
                )));
            }
        }
        Ok(p)
    }

    /// `P_n f = −(1/2πi) ∮_{|λ−λₙ|=δ} (L − λ)^{-1} f dλ` by the trapezoid rule.
    pub fn project_contour(&self, ev: &Eigenvalue, delta: f64, f: &GridFunction) -> Result<GridFunction> {
        let n = PROJECTION_CONTOUR_POINTS;
        let mut acc = f.scale(Complex64::new(0.0, 0.0));
        for k in 0..n {
            let h = Complex64::from_polar(delta, 2.0 * PI * (k as f64 + 0.5) / n as f64);
            let y = apply_resolvent(&self.cf, ev.lambda + h, f)?.y;
            acc = &acc + &y.scale(h);
        }
        Ok(acc.scale(Complex64::new(-1.0 / n as f64, 0.0)))
    }
}
