use std::f64::consts::PI;

use nlbc_core::spectrum::{count_zeros, find_spectrum, ContourSpec, SpectrumOptions};
use nlbc_core::{CharacteristicFn, SigmaKind, SigmaSpec, Segment};
use num_complex::Complex64;
use serde_json::Value;

fn fixture() -> Value {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/double_zero.json")).unwrap();
    serde_json::from_str(&text).unwrap()
}

fn c(v: &Value) -> Complex64 {
    Complex64::new(v[0].as_f64().unwrap(), v[1].as_f64().unwrap())
}

fn double_cf() -> (CharacteristicFn, Value) {
    let fx = fixture();
    let b = fx["b"].as_f64().unwrap();
    let kind = SigmaKind::LinearImag {
        alpha: fx["alpha"].as_f64().unwrap(),
        gamma: fx["gamma"].as_f64().unwrap(),
    };
    (CharacteristicFn::new(SigmaSpec::new(kind, Segment::new(b).unwrap()).unwrap()), fx)
}

#[test]
fn double_zero_is_found_with_its_taylor_data() {
    let (cf, fx) = double_cf();
    let star = Complex64::new(fx["lambda_re"].as_f64().unwrap(), fx["lambda_im"].as_f64().unwrap());
    assert!(cf.delta(star).unwrap().norm() < 1e-14);
    assert!(cf.delta_derivative(star, 1).unwrap().norm() < 1e-13);
    let dd = Complex64::new(
        fx["second_derivative_re"].as_f64().unwrap(),
        fx["second_derivative_im"].as_f64().unwrap(),
    );
    assert!((cf.delta_derivative(star, 2).unwrap() - dd).norm() < 1e-12);

    let spec = find_spectrum(&cf, 3.0, &SpectrumOptions::default()).unwrap();
    let double: Vec<_> = spec.iter().filter(|e| e.multiplicity == 2).collect();
    assert_eq!(double.len(), 1, "{spec:?}");
    let ev = double[0];
    assert!((ev.lambda - star).norm() < 1e-7, "{}", ev.lambda);
    let d = fx["d"].as_array().unwrap();
    for (got, want) in ev.taylor.iter().zip(d) {
        let want = c(want);
        assert!((got - want).norm() < 1e-7 * want.norm(), "{got} vs {want}");
    }
    let total: usize = spec.iter().map(|e| e.multiplicity).sum();
    let n = count_zeros(&cf, &ContourSpec::circle(Complex64::new(0.0, 0.0), 3.0)).unwrap();
    assert_eq!(total, n);
}

#[test]
fn double_fixture_counts_are_additive() {
    let (cf, _) = double_cf();
    let whole = count_zeros(&cf, &ContourSpec::rectangle(-4.1, 4.3, -3.2, 3.9)).unwrap();
    let parts = [
        (-4.1, 0.17, -3.2, 0.63),
        (0.17, 4.3, -3.2, 0.63),
        (-4.1, 0.17, 0.63, 3.9),
        (0.17, 4.3, 0.63, 3.9),
    ];
    let sum: usize = parts
        .iter()
        .map(|&(a, b, c, d)| count_zeros(&cf, &ContourSpec::rectangle(a, b, c, d)).unwrap())
        .sum();
    assert_eq!(sum, whole);
    assert!(whole >= 2);
}

#[test]
fn antiperiodic_counting_ratio_at_fifty() {
    let cf = CharacteristicFn::new(
        SigmaSpec::new(SigmaKind::ConstantImag { alpha: 0.5 }, Segment::new(PI).unwrap()).unwrap(),
    );
    let n = count_zeros(&cf, &ContourSpec::circle(Complex64::new(0.0, 0.0), 50.0)).unwrap();
    assert!((n as f64 / 50.0 - 1.0).abs() < 0.1);
}
