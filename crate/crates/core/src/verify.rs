//! The invariant suite behind `nlbc verify`.
//!
//! Errors are relative to `max(1, ‖reference‖∞)` unless a check says
//! otherwise. Observational checks are reported but never fail the run.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::Context;
use crate::error::Result;
use crate::expansion::{cauchy_convolve, diagnostics::gram_report, weighted_remainder_norm, RootBasis};
use crate::function_space::GridFunction;
use crate::io::{
    function_rows, parse_function_csv, read_csv, read_json, write_csv, write_function_csv, write_json, CoefficientsFile,
    DeltaRow, SpectrumFile,
};
use crate::random::{domain_function, nonspectral_point, smooth_function};
use crate::resolvent::{apply_l, apply_resolvent};
use crate::spectrum::{count_zeros_with, find_spectrum, ContourSpec, Eigenvalue};
use crate::{convolution::exponential_identity, io::delta_table};

/// Radius of the remainder checks.
pub const REMAINDER_RADIUS: f64 = 10.0;
/// Exponents `μ` of the remainder contour check.
pub const REMAINDER_MUS: [f64; 3] = [0.5, 1.7, 2.3];
/// Radii of the weighted-remainder trend.
pub const TREND_RADII: [f64; 3] = [10.0, 20.0, 40.0];
/// Eigenvalues (nearest the origin) used by the per-eigenvalue checks.
pub const CHECKED_EIGENVALUES: usize = 5;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub group: &'static str,
    pub name: &'static str,
    pub passed: bool,
    pub observational: bool,
    /// Measured error (NaN if the check could not run).
    pub value: f64,
    pub tolerance: f64,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub eigenvalues: usize,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed || c.observational)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed && !c.observational)
    }
}

fn rel(diff: f64, scale: f64) -> f64 {
    diff / scale.max(1.0)
}

fn fdiff(a: &GridFunction, b: &GridFunction) -> f64 {
    rel(a.max_diff(b), b.max_abs())
}

struct Suite<'a> {
    ctx: &'a Context,
    rng: ChaCha8Rng,
    checks: Vec<Check>,
}

impl Suite<'_> {
    fn record(&mut self, group: &'static str, name: &'static str, tolerance: f64, result: Result<(f64, String)>) {
        self.push(group, name, tolerance, false, result);
    }

    fn observe(&mut self, group: &'static str, name: &'static str, tolerance: f64, result: Result<(f64, String)>) {
        self.push(group, name, tolerance, true, result);
    }

    fn push(&mut self, group: &'static str, name: &'static str, tolerance: f64, observational: bool, result: Result<(f64, String)>) {
        let (value, detail, passed) = match result {
            Ok((v, d)) => (v, d, v <= tolerance),
            Err(e) => (f64::NAN, e.to_string(), false),
        };
        self.checks.push(Check {
            group,
            name,
            passed,
            observational,
            value,
            tolerance,
            detail,
        });
    }

    fn smooth(&mut self) -> GridFunction {
        smooth_function(&self.ctx.grid, &mut self.rng)
    }

    fn domain(&mut self) -> Result<GridFunction> {
        domain_function(&self.ctx.cf, &self.ctx.grid, &mut self.rng)
    }

    fn nonspectral(&mut self) -> Result<Complex64> {
        let r = 0.5 * self.ctx.config.radius.min(20.0);
        nonspectral_point(&self.ctx.cf, &mut self.rng, -r..r, -1.0..1.0, 0.1)
    }
}

/// Runs every invariant for the configured σ and grid.
pub fn run_verify(ctx: &Context) -> VerifyReport {
    let mut s = Suite {
        ctx,
        rng: ChaCha8Rng::seed_from_u64(ctx.config.seed),
        checks: Vec::new(),
    };
    characteristic_checks(&mut s);
    let radius = ctx.config.radius.max(TREND_RADII[2] + 1.0);
    let spectrum = match find_spectrum(&ctx.cf, radius, &ctx.config.spectrum_options()) {
        Ok(sp) => Some(sp),
        Err(e) => {
            s.record("spectrum", "find_spectrum", 0.0, Err(e));
            None
        }
    };
    if let Some(sp) = &spectrum {
        spectrum_checks(&mut s, sp, radius);
    }
    resolvent_checks(&mut s);
    convolution_checks(&mut s);
    if let Some(sp) = &spectrum {
        expansion_checks(&mut s, sp);
        remainder_checks(&mut s, sp);
        io_checks(&mut s, sp);
    }
    VerifyReport {
        seed: ctx.config.seed,
        eigenvalues: spectrum.as_ref().map_or(0, Vec::len),
        checks: s.checks,
    }
}

fn characteristic_checks(s: &mut Suite) {
    let cf = &s.ctx.cf;
    let r = s.ctx.config.radius;
    let pts: Vec<Complex64> = (0..10)
        .map(|_| Complex64::new(s.rng.gen_range(-r..r), s.rng.gen_range(-2.0..2.0)))
        .collect();
    if cf.closed_form().is_some() {
        let res = pts.iter().try_fold(0.0_f64, |acc, &l| {
            let d = (cf.delta(l)? - cf.delta_quadrature(l)?).norm() / cf.delta_scale(l)?;
            Ok(acc.max(d))
        });
        s.record("characteristic", "closed_form_matches_quadrature", 1e-10, res.map(|v| (v, String::new())));
    }
    let res = pts.iter().try_fold(0.0_f64, |acc, &l| {
        Ok(acc.max((cf.delta(l.conj())? - cf.delta(-l)?.conj()).norm() / cf.delta_scale(l)?))
    });
    // σ purely imaginary makes Δ(λ̄) = conj Δ(−λ); otherwise observational
    let imaginary = s.ctx.grid.nodes().iter().all(|&x| s.ctx.sigma.value(x).re == 0.0);
    let res = res.map(|v| (v, String::new()));
    if imaginary {
        s.record("characteristic", "conjugate_symmetry", 1e-12, res);
    } else {
        s.observe("characteristic", "conjugate_symmetry", 1e-12, res);
    }
    let res = cf.delta(Complex64::new(0.0, 0.0)).map(|d| ((d - 1.0).norm(), String::new()));
    s.record("characteristic", "delta_at_origin_is_one", 1e-14, res);
}

fn spectrum_checks(s: &mut Suite, spectrum: &[Eigenvalue], radius: f64) {
    let cf = &s.ctx.cf;
    let opts = s.ctx.config.spectrum_options();
    let res = spectrum.iter().try_fold(0.0_f64, |acc, ev| {
        Ok(acc.max(cf.delta(ev.lambda)?.norm() / cf.delta_scale(ev.lambda)?))
    });
    s.record(
        "spectrum",
        "zeros_are_zeros",
        1e-10,
        res.map(|v| (v, format!("{} eigenvalues in |lambda| <= {radius}", spectrum.len()))),
    );
    let res = spectrum.iter().try_fold(0.0_f64, |acc, ev| {
        let m = ev.multiplicity;
        let fact: f64 = (1..=m).map(|k| k as f64).product();
        let lead = cf.delta_derivative(ev.lambda, m)? / fact;
        Ok(acc.max((ev.taylor[0] * lead - 1.0).norm()))
    });
    s.record("spectrum", "leading_taylor_coefficient", 1e-7, res.map(|v| (v, String::new())));

    // circle count against the located zeros
    let r = crate::expansion::admissible_radius(spectrum, 0.9 * radius);
    let inside: usize = spectrum.iter().filter(|e| e.lambda.norm() < r).map(|e| e.multiplicity).sum();
    let res = count_zeros_with(cf, &ContourSpec::circle(Complex64::new(0.0, 0.0), r), &opts).map(|n| {
        (n.abs_diff(inside) as f64, format!("N({r}) = {n}, located {inside}"))
    });
    s.record("spectrum", "circle_count_matches", 0.0, res);

    // additivity over four boxes, split lines off any symmetry axis
    let h = crate::spectrum::strip_diagnostic(spectrum) + 1.0 + 0.0123;
    let (x0, y0) = (0.0317 * radius.min(10.0), 0.0271);
    let rect = |a: f64, b: f64, c: f64, d: f64| ContourSpec::rectangle(a, b, c, d);
    let (lo, hi) = (-radius.min(10.0) - 0.0191, radius.min(10.0) + 0.0213);
    let res = (|| {
        let whole = count_zeros_with(cf, &rect(lo, hi, -h, h), &opts)?;
        let parts = [
            rect(lo, x0, -h, y0),
            rect(x0, hi, -h, y0),
            rect(lo, x0, y0, h),
            rect(x0, hi, y0, h),
        ]
        .iter()
        .map(|c| count_zeros_with(cf, c, &opts))
        .collect::<Result<Vec<_>>>()?;
        let sum: usize = parts.iter().sum();
        Ok((whole.abs_diff(sum) as f64, format!("whole {whole}, parts {parts:?}")))
    })();
    s.record("spectrum", "box_count_additivity", 0.0, res);

    let res = (|| {
        let again = find_spectrum(cf, radius, &opts)?;
        Ok((if again == spectrum { 0.0 } else { 1.0 }, String::new()))
    })();
    s.record("spectrum", "deterministic", 0.0, res);

    let report = s.ctx.sigma.check_conditions(spectrum, radius);
    let detail = serde_json::to_string(&report).unwrap_or_default();
    let value = if report.conminmax_holds { 0.0 } else { 1.0 };
    s.observe("boundary", "support_condition", 0.0, Ok((value, detail)));
}

fn resolvent_checks(s: &mut Suite) {
    let cf = s.ctx.cf.clone();
    let (mut ode, mut bc, mut forms, mut ident) = (0.0_f64, 0.0_f64, 0.0_f64, 0.0_f64);
    let res = (|| {
        for _ in 0..3 {
            let f = s.smooth();
            let fmax = f.max_abs();
            for _ in 0..5 {
                let l = s.nonspectral()?;
                let r = apply_resolvent(&cf, l, &f)?;
                ode = ode.max(r.residual_ode / ((1.0 + l.norm()) * fmax));
                bc = bc.max(r.residual_boundary / fmax);
                let conv = s.ctx.engine.convolve_resolvent_form(&cf, l, &f)?;
                forms = forms.max(fdiff(&conv, &r.y));
            }
            let (l, m) = (s.nonspectral()?, s.nonspectral()?);
            let rl = apply_resolvent(&cf, l, &f)?.y;
            let rm = apply_resolvent(&cf, m, &f)?.y;
            let rlrm = apply_resolvent(&cf, l, &rm)?.y;
            let lhs = &rl - &rm;
            ident = ident.max(fdiff(&lhs, &rlrm.scale(l - m)));
        }
        Ok(())
    })();
    match res {
        Ok(()) => {
            s.record("resolvent", "ode_residual", 1e-8, Ok((ode, "relative to (1+|lambda|) max|f|".into())));
            s.record("resolvent", "boundary_residual", 1e-8, Ok((bc, "relative to max|f|".into())));
            s.record("resolvent", "matches_convolution_form", 1e-8, Ok((forms, String::new())));
            s.record("resolvent", "resolvent_identity", 1e-7, Ok((ident, String::new())));
        }
        Err(e) => s.record("resolvent", "resolvent_checks", 0.0, Err(e)),
    }
    let f = s.smooth();
    let res = (|| {
        let y = apply_resolvent(&cf, Complex64::new(0.0, 0.0), &f)?.y;
        let ly = apply_l(&s.ctx.sigma, &y)?;
        Ok((fdiff(&ly.value, &f), String::new()))
    })();
    s.record("resolvent", "round_trip_through_l", 1e-8, res);
}

fn convolution_checks(s: &mut Suite) {
    let e = s.ctx.engine.clone();
    let b = s.ctx.grid.segment().length();
    let res = (|| {
        let mut worst = 0.0_f64;
        for _ in 0..4 {
            let (f, g) = (s.smooth(), s.smooth());
            for _ in 0..5 {
                let (x, t) = (s.rng.gen_range(0.0..b), s.rng.gen_range(0.0..b));
                let d = (e.circ(&f, &g, x, t)? - e.circ(&g, &f, x, t)?).norm();
                worst = worst.max(d / (f.max_abs() * g.max_abs() * b).max(1.0));
            }
        }
        Ok((worst, "20 (x, t) points".into()))
    })();
    s.record("convolution", "circ_symmetry", 1e-10, res);

    let res = (|| {
        let mut worst = 0.0_f64;
        for _ in 0..20 {
            let (f, g) = (s.smooth(), s.smooth());
            worst = worst.max(fdiff(&e.convolve(&f, &g)?, &e.convolve(&g, &f)?));
        }
        Ok((worst, "20 pairs".into()))
    })();
    s.record("convolution", "commutativity", 1e-9, res);

    let res = (|| {
        let mut worst = 0.0_f64;
        for _ in 0..10 {
            let (f, g, h) = (s.smooth(), s.smooth(), s.smooth());
            let left = e.convolve(&e.convolve(&f, &g)?, &h)?;
            let right = e.convolve(&f, &e.convolve(&g, &h)?)?;
            worst = worst.max(fdiff(&left, &right));
        }
        Ok((worst, "10 triples".into()))
    })();
    s.record("convolution", "associativity", 1e-7, res);

    let res = (|| {
        let (f1, f2, g) = (s.smooth(), s.smooth(), s.smooth());
        let a = Complex64::new(s.rng.gen_range(-2.0..2.0), s.rng.gen_range(-2.0..2.0));
        let lhs = e.convolve(&(&f1.scale(a) + &f2), &g)?;
        let rhs = &e.convolve(&f1, &g)?.scale(a) + &e.convolve(&f2, &g)?;
        Ok((fdiff(&lhs, &rhs), String::new()))
    })();
    s.record("convolution", "bilinearity", 1e-10, res);

    let res = (|| {
        let mut worst = 0.0_f64;
        for _ in 0..3 {
            let (f, g) = (s.domain()?, s.smooth());
            let lhs = e.convolve(&f, &g)?.differentiate();
            let rhs = e.convolve(&f.differentiate(), &g)?;
            worst = worst.max(fdiff(&lhs, &rhs));
        }
        Ok((worst, "f in the domain of L".into()))
    })();
    s.record("convolution", "derivative_rule", 1e-7, res);

    let one = s.ctx.grid.constant(Complex64::new(1.0, 0.0));
    let res = (|| {
        let mut worst = 0.0_f64;
        for _ in 0..3 {
            let f = s.smooth();
            let y = e.convolve(&one, &f)?;
            let back = y.differentiate().scale(-Complex64::i());
            worst = worst.max(fdiff(&back, &f)).max(rel(e.sigma().apply_u(&y)?.norm(), f.max_abs()));
        }
        Ok((worst, "-i (1*f)' = f and U(1*f) = 0".into()))
    })();
    s.record("convolution", "no_annihilators", 1e-8, res);

    let res = (|| {
        let mut worst = 0.0_f64;
        for _ in 0..3 {
            let (f, g) = (s.domain()?, s.smooth());
            let fg = e.convolve(&f, &g)?;
            worst = worst.max(rel(e.sigma().apply_u(&fg)?.norm(), fg.max_abs()));
        }
        Ok((worst, "|U(f*g)| with U(f) = 0".into()))
    })();
    s.record("convolution", "domain_closure", 1e-7, res);

    let res = (|| {
        let mut worst = 0.0_f64;
        let mut done = 0;
        while done < 10 {
            let l = Complex64::new(s.rng.gen_range(-5.0..5.0), s.rng.gen_range(-1.0..1.0));
            let beta = Complex64::new(s.rng.gen_range(-5.0..5.0), s.rng.gen_range(-1.0..1.0));
            if (l - beta).norm() <= 0.1 {
                continue;
            }
            let g = &s.ctx.grid;
            let direct = e.convolve(&g.sample(|x| (Complex64::i() * l * x).exp()), &g.sample(|x| (Complex64::i() * beta * x).exp()))?;
            worst = worst.max(fdiff(&direct, &exponential_identity(&s.ctx.cf, g, l, beta)?));
            done += 1;
        }
        Ok((worst, "10 (lambda, beta) pairs".into()))
    })();
    s.record("convolution", "exponential_identity", 1e-8, res);
}

/// Eigenvalues nearest the origin, at most `count`.
fn nearest(spectrum: &[Eigenvalue], count: usize) -> Vec<Eigenvalue> {
    let mut v = spectrum.to_vec();
    v.sort_by(|a, b| a.lambda.norm().total_cmp(&b.lambda.norm()));
    v.truncate(count);
    v
}

fn expansion_checks(s: &mut Suite, spectrum: &[Eigenvalue]) {
    if spectrum.is_empty() {
        return;
    }
    let ctx = s.ctx;
    let x = &ctx.expansion;
    let evs = nearest(spectrum, CHECKED_EIGENVALUES);
    let bases: Result<Vec<RootBasis>> = evs.iter().map(|ev| x.basis(ev)).collect();
    let bases = match bases {
        Ok(b) => b,
        Err(e) => {
            s.record("expansion", "root_basis", 0.0, Err(e));
            return;
        }
    };

    let res = (|| {
        let mut worst = 0.0_f64;
        for b in &bases {
            let l = b.eigenvalue.lambda;
            for (k, u) in b.functions.iter().enumerate() {
                let lu = &u.differentiate().scale(-Complex64::i()) - &u.scale(l);
                let want = if k == 0 { u.scale(Complex64::new(0.0, 0.0)) } else { b.functions[k - 1].clone() };
                worst = worst.max(rel(lu.max_diff(&want), u.max_abs()));
            }
        }
        Ok((worst, "(L - lambda) u_s = u_(s-1)".into()))
    })();
    s.record("expansion", "root_chain", 1e-7, res);

    let res = gram_report(&bases).map(|g| (g.min_block_ratio, format!("gram condition {:e}", g.condition)));
    // value is the smallest ratio; pass means it stays above 1e-8
    let res = res.map(|(v, d)| (if v > 1e-8 { 0.0 } else { 1.0 / v.max(f64::MIN_POSITIVE) }, format!("min block ratio {v:e}, {d}")));
    s.record("expansion", "root_blocks_independent", 0.0, res);

    let f = s.smooth();
    let res = (|| {
        let mut worst = 0.0_f64;
        let p: Vec<GridFunction> = evs.iter().map(|ev| x.project(ev, &f)).collect::<Result<_>>()?;
        for (i, ev) in evs.iter().enumerate() {
            for (j, pj) in p.iter().enumerate() {
                let q = x.project(ev, pj)?;
                let want = if i == j { pj.clone() } else { pj.scale(Complex64::new(0.0, 0.0)) };
                worst = worst.max(rel(q.max_diff(&want), f.max_abs()));
            }
        }
        Ok((worst, format!("{} eigenvalues", evs.len())))
    })();
    s.record("expansion", "projection_algebra", 1e-7, res);

    let sep = crate::spectrum::separation(spectrum).unwrap_or(1.0);
    let res = (|| {
        let mut worst = 0.0_f64;
        for ev in &evs {
            let d = (sep / 3.0).min(0.1);
            worst = worst.max(fdiff(&x.project(ev, &f)?, &x.project_contour(ev, d, &f)?));
        }
        Ok((worst, String::new()))
    })();
    s.record("expansion", "projection_matches_contour", 1e-7, res);

    let res = (|| {
        let mut worst = 0.0_f64;
        for b in &bases {
            let u = b.top();
            worst = worst.max(fdiff(&s.ctx.engine.convolve(u, u)?, u));
        }
        Ok((worst, String::new()))
    })();
    s.record("expansion", "idempotent_root_function", 1e-7, res);

    let multiple: Vec<&RootBasis> = bases.iter().filter(|b| b.multiplicity() > 1).collect();
    if !multiple.is_empty() {
        let res = (|| {
            let mut worst = 0.0_f64;
            for b in &multiple {
                let m = b.multiplicity();
                for p in 0..m {
                    for q in 0..m {
                        let prod = s.ctx.engine.convolve(&b.functions[p], &b.functions[q])?;
                        let want = if p + q < m - 1 {
                            prod.scale(Complex64::new(0.0, 0.0))
                        } else {
                            b.functions[p + q + 1 - m].clone()
                        };
                        worst = worst.max(rel(prod.max_diff(&want), b.functions[q].max_abs()));
                    }
                }
            }
            Ok((worst, "u_p * u_q".into()))
        })();
        s.record("expansion", "product_table", 1e-6, res);
    }

    let res = x.calibration(&evs[0]).map(|c| (c.misfit, format!("sign {}, other sign misfit {:e}", c.sign, c.rejected_misfit)));
    s.record("expansion", "coefficient_calibration", 1e-6, res);

    let res = (|| {
        let mut worst = 0.0_f64;
        let g = s.domain()?;
        let lg = apply_l(&s.ctx.sigma, &g)?.value;
        for ev in &evs {
            let shifted = &lg - &g.scale(ev.lambda);
            let a = x.coefficients(ev, &shifted)?;
            let c = x.coefficients(ev, &g)?;
            let scale = c.iter().map(|v| v.norm()).fold(1.0, f64::max);
            worst = worst.max(a[0].norm() / scale);
            for k in 1..a.len() {
                worst = worst.max((a[k] - c[k - 1]).norm() / scale);
            }
        }
        Ok((worst, "C_k((L - lambda) g) = C_(k-1)(g)".into()))
    })();
    s.record("expansion", "coefficient_shift", 1e-7, res);

    let res = (|| {
        let m = x.pairing_matrix(&evs)?;
        let mut worst = 0.0_f64;
        for (r, row) in m.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                let want = if r == c { 1.0 } else { 0.0 };
                worst = worst.max((v - want).norm());
            }
        }
        Ok((worst, format!("{0}x{0} pairing matrix", m.len())))
    })();
    s.record("expansion", "biorthogonality", 1e-6, res);

    let res = x.pairing_report(&evs[0], &f).map(|r| {
        let adopted = r
            .misfits
            .iter()
            .find(|(c, _)| *c == crate::expansion::PairingConvention::ADOPTED)
            .map_or(f64::NAN, |m| m.1);
        (adopted, serde_json::to_string(&r).unwrap_or_default())
    });
    s.record("expansion", "pairing_convention", 1e-8, res);

    let radius = s.ctx.config.radius;
    let (f, g) = (s.smooth(), s.smooth());
    let res = (|| {
        let fg = s.ctx.engine.convolve(&f, &g)?;
        let lhs = x.fourier_transform(spectrum, &fg, radius)?;
        let rhs = cauchy_convolve(&x.fourier_transform(spectrum, &f, radius)?, &x.fourier_transform(spectrum, &g, radius)?)?;
        Ok((rel(lhs.max_diff(&rhs)?, rhs.l2_norm()), format!("{} blocks", rhs.blocks.len())))
    })();
    s.record("expansion", "convolution_theorem", 1e-6, res);

    let res = (|| {
        let two = Complex64::new(2.0, 0.0);
        let lhs = x.fourier_transform(spectrum, &(&f.scale(two) + &g), radius)?;
        let rhs = x.fourier_transform(spectrum, &f, radius)?.scale(two).add(&x.fourier_transform(spectrum, &g, radius)?)?;
        Ok((rel(lhs.max_diff(&rhs)?, rhs.l2_norm()), String::new()))
    })();
    s.record("expansion", "fourier_linearity", 1e-10, res);
}

fn remainder_checks(s: &mut Suite, spectrum: &[Eigenvalue]) {
    let ctx = s.ctx;
    let x = &ctx.expansion;
    let g = s.ctx.grid.clone();
    let mut condition = 0.0_f64;
    let res = (|| {
        let mut worst = 0.0_f64;
        for mu in REMAINDER_MUS {
            let mu = Complex64::new(mu, 0.0);
            let f = g.sample(|t| (Complex64::i() * mu * t).exp());
            let q = x.remainder(spectrum, &f, REMAINDER_RADIUS)?;
            let (c, k) = x.exponential_remainder_contour_with_condition(mu, q.radius)?;
            condition = condition.max(k);
            worst = worst.max(fdiff(&q.value, &c));
        }
        Ok((worst, format!("mu in {REMAINDER_MUS:?}, R = {REMAINDER_RADIUS}, integrand modulus {condition:e}")))
    })();
    // an integrand that grows like exp(R b) leaves the contour form only
    // rounding-level accurate to ε·modulus; below 1e-6 it cannot decide
    if condition * f64::EPSILON * 1e3 > 1e-6 {
        s.observe("remainder", "sum_matches_contour", 1e-6, res);
    } else {
        s.record("remainder", "sum_matches_contour", 1e-6, res);
    }

    let res = (|| {
        let inside: Vec<&Eigenvalue> = spectrum.iter().filter(|e| e.lambda.norm() < REMAINDER_RADIUS - 1.0).collect();
        let mut f = g.constant(Complex64::new(0.0, 0.0));
        for (k, ev) in inside.iter().take(CHECKED_EIGENVALUES).enumerate() {
            let b = x.basis(ev)?;
            let c = Complex64::new(1.0 + k as f64, 0.5);
            f = &f + &b.functions[0].scale(c);
        }
        let q = x.remainder(spectrum, &f, REMAINDER_RADIUS)?;
        Ok((rel(q.value.max_abs(), f.max_abs()), String::new()))
    })();
    s.record("remainder", "reproduces_root_combinations", 1e-7, res);

    let b = g.segment().length();
    let f = g.sample(|t| Complex64::new(t * (b - t), 0.0));
    let res = (|| {
        let norms = TREND_RADII
            .iter()
            .map(|&r| x.remainder(spectrum, &f, r).map(|q| weighted_remainder_norm(&q.value)))
            .collect::<Result<Vec<_>>>()?;
        let decreasing = norms.windows(2).all(|w| w[1] < w[0]);
        Ok((if decreasing { 0.0 } else { 1.0 }, format!("weighted norms {norms:?} at R = {TREND_RADII:?}")))
    })();
    s.observe("remainder", "weighted_norm_trend", 0.0, res);
}

fn io_checks(s: &mut Suite, spectrum: &[Eigenvalue]) {
    let res = (|| {
        let file = SpectrumFile::new(spectrum, s.ctx.config.radius);
        let mut buf = Vec::new();
        write_json(&mut buf, &file)?;
        let back: SpectrumFile = read_json(&buf[..])?;
        Ok((if back == file && back.spectrum()? == spectrum { 0.0 } else { 1.0 }, String::new()))
    })();
    s.record("io", "spectrum_round_trip", 0.0, res);

    let f = s.smooth();
    let res = (|| {
        let mut buf = Vec::new();
        write_function_csv(&mut buf, &f)?;
        let back = parse_function_csv(&buf[..], &s.ctx.grid)?;
        Ok((if function_rows(&back) == function_rows(&f) { 0.0 } else { 1.0 }, String::new()))
    })();
    s.record("io", "function_round_trip", 0.0, res);

    let res = (|| {
        let rows = delta_table(&s.ctx.cf, &[-1.5, 0.25, 3.0], &[-0.5, 0.0, 0.5])?;
        let mut buf = Vec::new();
        write_csv(&mut buf, &rows)?;
        Ok((if read_csv::<DeltaRow>(&buf[..])? == rows { 0.0 } else { 1.0 }, String::new()))
    })();
    s.record("io", "delta_round_trip", 0.0, res);

    let res = (|| {
        let el = s.ctx.expansion.fourier_transform(spectrum, &f, REMAINDER_RADIUS)?;
        let file = CoefficientsFile::new(spectrum, &el)?;
        let mut buf = Vec::new();
        write_json(&mut buf, &file)?;
        let back: CoefficientsFile = read_json(&buf[..])?;
        Ok((if back.element() == el { 0.0 } else { 1.0 }, String::new()))
    })();
    s.record("io", "coefficients_round_trip", 0.0, res);
}
