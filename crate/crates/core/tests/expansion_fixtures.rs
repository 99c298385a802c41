use std::f64::consts::PI;

use nlbc_core::spectrum::find_spectrum;
use nlbc_core::{Eigenvalue, RunConfig};
use num_complex::Complex64;

fn i() -> Complex64 {
    Complex64::i()
}

fn double_zero(cfg: &nlbc_core::Context) -> Eigenvalue {
    let spec = find_spectrum(&cfg.cf, 2.0, &cfg.config.spectrum_options()).unwrap();
    spec.into_iter().find(|e| e.multiplicity == 2).expect("double zero near i")
}

fn context(preset: &str, n: usize) -> nlbc_core::Context {
    let mut c = RunConfig::preset(preset).unwrap();
    c.n = n;
    c.build().unwrap()
}

#[test]
fn double_zero_root_chain() {
    let ctx = context("double", 96);
    let ev = double_zero(&ctx);
    let basis = ctx.expansion.basis(&ev).unwrap();
    let (u0, u1) = (&basis.functions[0], &basis.functions[1]);
    // the x exp(iλx) part of u_1 is carried by d_0
    let want = ctx.grid.sample(|x| -(ev.taylor[0] * i() * x + ev.taylor[1]) * (i() * ev.lambda * x).exp());
    assert!(u1.max_diff(&want) < 1e-12);
    let shifted = &u1.differentiate().scale(-i()) - &u1.scale(ev.lambda);
    assert!(shifted.max_diff(u0) < 1e-7 * u0.max_abs());
    let killed = &u0.differentiate().scale(-i()) - &u0.scale(ev.lambda);
    assert!(killed.max_abs() < 1e-7 * u0.max_abs());
}

#[test]
fn double_zero_product_table() {
    let ctx = context("double", 96);
    let ev = double_zero(&ctx);
    let u = ctx.expansion.basis(&ev).unwrap().functions;
    let e = &ctx.engine;
    assert!(e.convolve(&u[0], &u[0]).unwrap().max_abs() < 1e-6 * u[0].max_abs());
    assert!(e.convolve(&u[0], &u[1]).unwrap().max_diff(&u[0]) < 1e-6 * u[0].max_abs());
    assert!(e.convolve(&u[1], &u[1]).unwrap().max_diff(&u[1]) < 1e-6 * u[1].max_abs());
}

#[test]
fn double_zero_projection_matches_contour() {
    let ctx = context("double", 96);
    let ev = double_zero(&ctx);
    let f = ctx.grid.sample(|x| Complex64::new(x.cos(), 0.3 * x));
    let p = ctx.expansion.project(&ev, &f).unwrap();
    let q = ctx.expansion.project_contour(&ev, 0.2, &f).unwrap();
    assert!(p.max_diff(&q) < 1e-7 * f.max_abs());
    // and the coefficients rebuild it
    let coef = ctx.expansion.coefficients(&ev, &f).unwrap();
    let u = ctx.expansion.basis(&ev).unwrap().functions;
    let rebuilt = &u[0].scale(coef[1]) + &u[1].scale(coef[0]);
    assert!(rebuilt.max_diff(&p) < 1e-7 * f.max_abs());
}

#[test]
fn antiperiodic_fourier_transform_of_an_eigenfunction() {
    let ctx = context("antiperiodic", 64);
    let spec = find_spectrum(&ctx.cf, 10.0, &ctx.config.spectrum_options()).unwrap();
    let f = ctx.grid.sample(|x| (i() * x).exp());
    let fhat = ctx.expansion.fourier_transform(&spec, &f, 10.0).unwrap();
    let at_one = spec.iter().position(|e| (e.lambda - 1.0).norm() < 1e-8).unwrap();
    for (k, block) in &fhat.blocks {
        let want = if *k == at_one { Complex64::new(0.0, PI / 2.0) } else { Complex64::new(0.0, 0.0) };
        assert!((block[0] - want).norm() < 1e-7, "block {k}: {}", block[0]);
    }
}

#[test]
fn remainder_vanishes_at_an_eigenvalue() {
    let ctx = context("antiperiodic", 64);
    let spec = find_spectrum(&ctx.cf, 12.0, &ctx.config.spectrum_options()).unwrap();
    let f = ctx.grid.sample(|x| (i() * 3.0 * x).exp());
    let q = ctx.expansion.remainder(&spec, &f, 10.0).unwrap();
    assert!(q.value.max_abs() < 1e-7);
    let c = ctx.expansion.exponential_remainder_contour(Complex64::new(3.0, 0.0), q.radius).unwrap();
    assert!(c.max_abs() < 1e-12);
}
