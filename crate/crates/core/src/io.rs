//! File formats: function samples, Δ tables, spectra, coefficient blocks and
//! remainder tables, each with its loader.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::characteristic::CharacteristicFn;
use crate::error::{Error, Result};
use crate::expansion::SequenceElement;
use crate::function_space::{Grid, GridFunction};
use crate::spectrum::Eigenvalue;

/// Largest Floater–Hormann blending degree used when resampling.
pub const RESAMPLE_DEGREE: usize = 8;

const NODE_MATCH: f64 = 1e-12;
const SPAN_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FunctionRow {
    pub x: f64,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaRow {
    pub re_lambda: f64,
    pub im_lambda: f64,
    pub re_delta: f64,
    pub im_delta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RemainderRow {
    #[serde(rename = "R")]
    pub radius: f64,
    pub weighted_norm: f64,
    pub sup_norm: f64,
    pub l2_norm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenvalueRecord {
    pub re: f64,
    pub im: f64,
    pub multiplicity: usize,
    pub d: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumFile {
    pub eigenvalues: Vec<EigenvalueRecord>,
    #[serde(rename = "N_of_R")]
    pub count: usize,
    #[serde(rename = "R")]
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientsFile {
    #[serde(rename = "R")]
    pub radius: f64,
    /// Eigenvalue behind each block.
    pub eigenvalues: BTreeMap<usize, [f64; 2]>,
    /// `(C_0, …, C_{m−1})` per eigenvalue index.
    pub blocks: BTreeMap<usize, Vec<[f64; 2]>>,
}

fn pair(c: Complex64) -> [f64; 2] {
    [c.re, c.im]
}

fn complex(p: [f64; 2]) -> Complex64 {
    Complex64::new(p[0], p[1])
}

impl From<&Eigenvalue> for EigenvalueRecord {
    fn from(ev: &Eigenvalue) -> Self {
        Self {
            re: ev.lambda.re,
            im: ev.lambda.im,
            multiplicity: ev.multiplicity,
            d: ev.taylor.iter().copied().map(pair).collect(),
        }
    }
}

impl EigenvalueRecord {
    pub fn to_eigenvalue(&self) -> Result<Eigenvalue> {
        let ev = Eigenvalue {
            lambda: Complex64::new(self.re, self.im),
            multiplicity: self.multiplicity,
            taylor: self.d.iter().copied().map(complex).collect(),
        };
        ev.validate()?;
        Ok(ev)
    }
}

impl SpectrumFile {
    pub fn new(spectrum: &[Eigenvalue], radius: f64) -> Self {
        Self {
            eigenvalues: spectrum.iter().map(EigenvalueRecord::from).collect(),
            count: spectrum.iter().map(|e| e.multiplicity).sum(),
            radius,
        }
    }

    pub fn spectrum(&self) -> Result<Vec<Eigenvalue>> {
        self.eigenvalues.iter().map(EigenvalueRecord::to_eigenvalue).collect()
    }
}

impl CoefficientsFile {
    pub fn new(spectrum: &[Eigenvalue], element: &SequenceElement) -> Result<Self> {
        let mut eigenvalues = BTreeMap::new();
        for &k in element.blocks.keys() {
            let ev = spectrum
                .get(k)
                .ok_or_else(|| Error::Config(format!("block {k} has no eigenvalue")))?;
            eigenvalues.insert(k, pair(ev.lambda));
        }
        Ok(Self {
            radius: element.radius,
            eigenvalues,
            blocks: element
                .blocks
                .iter()
                .map(|(&k, v)| (k, v.iter().copied().map(pair).collect()))
                .collect(),
        })
    }

    pub fn element(&self) -> SequenceElement {
        SequenceElement {
            blocks: self
                .blocks
                .iter()
                .map(|(&k, v)| (k, v.iter().copied().map(complex).collect()))
                .collect(),
            radius: self.radius,
        }
    }
}

pub fn write_csv<T: Serialize>(out: impl Write, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<T: DeserializeOwned>(input: impl Read) -> Result<Vec<T>> {
    let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    Ok(r.deserialize().collect::<std::result::Result<Vec<T>, _>>()?)
}

pub fn write_json<T: Serialize>(mut out: impl Write, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

pub fn read_json<T: DeserializeOwned>(input: impl Read) -> Result<T> {
    Ok(serde_json::from_reader(input)?)
}

pub fn function_rows(f: &GridFunction) -> Vec<FunctionRow> {
    f.nodes()
        .iter()
        .zip(f.values())
        .map(|(&x, v)| FunctionRow { x, re: v.re, im: v.im })
        .collect()
}

pub fn write_function_csv(out: impl Write, f: &GridFunction) -> Result<()> {
    write_csv(out, &function_rows(f))
}

pub fn parse_function_csv(input: impl Read, grid: &Arc<Grid>) -> Result<GridFunction> {
    resample(&read_csv::<FunctionRow>(input)?, grid)
}

pub fn read_function_csv(path: &Path, grid: &Arc<Grid>) -> Result<GridFunction> {
    let file = std::fs::File::open(path)
        .map_err(|e| Error::Config(format!("cannot open {}: {e}", path.display())))?;
    parse_function_csv(file, grid)
}

/// Puts samples onto `grid`: copied when the nodes coincide, otherwise
/// Floater–Hormann rational interpolation.
pub fn resample(rows: &[FunctionRow], grid: &Arc<Grid>) -> Result<GridFunction> {
    let b = grid.segment().length();
    if rows.len() < 2 {
        return Err(Error::Config("a function file needs at least two rows".into()));
    }
    if rows.windows(2).any(|w| !(w[0].x < w[1].x)) {
        return Err(Error::Config("function rows must be sorted by strictly increasing x".into()));
    }
    if rows.iter().any(|r| !(r.x.is_finite() && r.re.is_finite() && r.im.is_finite())) {
        return Err(Error::Config("function file contains non-finite entries".into()));
    }
    let (first, last) = (rows[0].x, rows[rows.len() - 1].x);
    if first.abs() > SPAN_TOL * b || (last - b).abs() > SPAN_TOL * b {
        return Err(Error::Config(format!("samples span [{first}, {last}], expected [0, {b}]")));
    }
    let nodes = grid.nodes();
    let values: Vec<Complex64> = if rows.len() == nodes.len()
        && rows.iter().zip(nodes).all(|(r, &x)| (r.x - x).abs() <= NODE_MATCH * b)
    {
        rows.iter().map(|r| Complex64::new(r.re, r.im)).collect()
    } else {
        let xs: Vec<f64> = rows.iter().map(|r| r.x).collect();
        let ys: Vec<Complex64> = rows.iter().map(|r| Complex64::new(r.re, r.im)).collect();
        let w = floater_hormann_weights(&xs, RESAMPLE_DEGREE.min(xs.len() - 1));
        nodes.iter().map(|&x| rational_eval(&xs, &ys, &w, x)).collect()
    };
    GridFunction::new(grid.clone(), values)
}

fn floater_hormann_weights(x: &[f64], d: usize) -> Vec<f64> {
    let n = x.len() - 1;
    (0..=n)
        .map(|k| {
            let lo = k.saturating_sub(d);
            let hi = k.min(n - d);
            let s: f64 = (lo..=hi)
                .map(|i| {
                    (i..=i + d)
                        .filter(|&j| j != k)
                        .map(|j| 1.0 / (x[k] - x[j]).abs())
                        .product::<f64>()
                })
                .sum();
            if (k + d) % 2 == 0 {
                s
            } else {
                -s
            }
        })
        .collect()
}

fn rational_eval(x: &[f64], y: &[Complex64], w: &[f64], t: f64) -> Complex64 {
    let mut num = Complex64::new(0.0, 0.0);
    let mut den = 0.0;
    for ((&xk, &yk), &wk) in x.iter().zip(y).zip(w) {
        let diff = t - xk;
        if diff == 0.0 {
            return yk;
        }
        let c = wk / diff;
        num += yk * c;
        den += c;
    }
    num / den
}

/// Δ on the rectangular λ-grid `re × im`, row-major in `im`.
pub fn delta_table(cf: &CharacteristicFn, re: &[f64], im: &[f64]) -> Result<Vec<DeltaRow>> {
    let mut rows = Vec::with_capacity(re.len() * im.len());
    for &x in re {
        for &y in im {
            let d = cf.delta(Complex64::new(x, y))?;
            rows.push(DeltaRow {
                re_lambda: x,
                im_lambda: y,
                re_delta: d.re,
                im_delta: d.im,
            });
        }
    }
    Ok(rows)
}

/// `count` equally spaced values on `[lo, hi]` (one value when `count = 1`).
pub fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..count)
            .map(|k| lo + (hi - lo) * k as f64 / (count - 1) as f64)
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::SigmaSpec;
    use crate::function_space::{make_grid, Segment};
    use std::f64::consts::PI;

    fn grid(n: usize) -> Arc<Grid> {
        make_grid(Segment::new(PI).unwrap(), n).unwrap()
    }

    #[test]
    fn function_round_trip_is_exact() {
        let g = grid(32);
        let f = g.sample(|x| Complex64::new(x.sin(), x * x / 3.0));
        let mut buf = Vec::new();
        write_function_csv(&mut buf, &f).unwrap();
        assert!(String::from_utf8_lossy(&buf).starts_with("x,re,im\n"));
        let back = parse_function_csv(&buf[..], &g).unwrap();
        assert_eq!(back.values(), f.values());
    }

    #[test]
    fn resampling_from_another_grid() {
        let f = grid(24).sample(|x| (Complex64::new(0.0, 1.5) * x).exp());
        let mut buf = Vec::new();
        write_function_csv(&mut buf, &f).unwrap();
        let g = grid(40);
        let back = parse_function_csv(&buf[..], &g).unwrap();
        let want = g.sample(|x| (Complex64::new(0.0, 1.5) * x).exp());
        assert!(back.max_diff(&want) < 1e-7, "{}", back.max_diff(&want));
    }

    #[test]
    fn resampling_from_uniform_samples() {
        let rows: Vec<_> = linspace(0.0, PI, 201)
            .into_iter()
            .map(|x| FunctionRow { x, re: x.cos(), im: 0.5 * x })
            .collect();
        let g = grid(32);
        let f = resample(&rows, &g).unwrap();
        let want = g.sample(|x| Complex64::new(x.cos(), 0.5 * x));
        assert!(f.max_diff(&want) < 1e-9, "{}", f.max_diff(&want));
    }

    #[test]
    fn rejects_malformed_samples() {
        let g = grid(16);
        let row = |x: f64| FunctionRow { x, re: 0.0, im: 0.0 };
        assert!(resample(&[row(0.0)], &g).is_err());
        assert!(resample(&[row(0.0), row(2.0), row(1.0), row(PI)], &g).is_err());
        assert!(resample(&[row(0.0), row(1.0)], &g).is_err());
        assert!(parse_function_csv("x,re\n0,1\n".as_bytes(), &g).is_err());
    }

    #[test]
    fn delta_table_for_zero_sigma() {
        let cf = CharacteristicFn::new(SigmaSpec::zero(Segment::new(1.0).unwrap()));
        let rows = delta_table(&cf, &linspace(-5.0, 5.0, 5), &linspace(-2.0, 2.0, 3)).unwrap();
        assert_eq!(rows.len(), 15);
        assert!(rows.iter().all(|r| r.re_delta == 1.0 && r.im_delta == 0.0));
        let mut buf = Vec::new();
        write_csv(&mut buf, &rows).unwrap();
        assert!(String::from_utf8_lossy(&buf).starts_with("re_lambda,im_lambda,re_delta,im_delta\n"));
        assert_eq!(read_csv::<DeltaRow>(&buf[..]).unwrap(), rows);
    }

    #[test]
    fn spectrum_round_trip() {
        let spec = vec![
            Eigenvalue {
                lambda: Complex64::new(1.0, 0.0),
                multiplicity: 1,
                taylor: vec![Complex64::new(0.0, 2.0 / PI)],
            },
            Eigenvalue {
                lambda: Complex64::new(0.0, 1.0),
                multiplicity: 2,
                taylor: vec![Complex64::new(-5.28, 0.0), Complex64::new(0.0, 7.48)],
            },
        ];
        let file = SpectrumFile::new(&spec, 10.0);
        assert_eq!(file.count, 3);
        let mut buf = Vec::new();
        write_json(&mut buf, &file).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.contains("\"N_of_R\": 3") && text.contains("\"multiplicity\": 2"));
        let back: SpectrumFile = read_json(&buf[..]).unwrap();
        assert_eq!(back, file);
        assert_eq!(back.spectrum().unwrap(), spec);
    }

    #[test]
    fn coefficients_round_trip() {
        let spec = vec![
            Eigenvalue {
                lambda: Complex64::new(-1.0, 0.0),
                multiplicity: 1,
                taylor: vec![Complex64::new(0.0, 1.0)],
            };
            12
        ];
        let mut blocks = BTreeMap::new();
        blocks.insert(2, vec![Complex64::new(0.25, -1.0)]);
        blocks.insert(10, vec![Complex64::new(3.0, 0.5)]);
        let el = SequenceElement { blocks, radius: 10.0 };
        let file = CoefficientsFile::new(&spec, &el).unwrap();
        let mut buf = Vec::new();
        write_json(&mut buf, &file).unwrap();
        let back: CoefficientsFile = read_json(&buf[..]).unwrap();
        assert_eq!(back.element(), el);
        assert!(CoefficientsFile::new(&spec[..5], &el).is_err());
    }

    #[test]
    fn remainder_round_trip() {
        let rows = vec![
            RemainderRow { radius: 10.0, weighted_norm: 0.1, sup_norm: 0.3, l2_norm: 0.2 },
            RemainderRow { radius: 20.0, weighted_norm: 0.05, sup_norm: 0.2, l2_norm: 0.1 },
        ];
        let mut buf = Vec::new();
        write_csv(&mut buf, &rows).unwrap();
        assert!(String::from_utf8_lossy(&buf).starts_with("R,weighted_norm,sup_norm,l2_norm\n"));
        assert_eq!(read_csv::<RemainderRow>(&buf[..]).unwrap(), rows);
    }
}
