use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::{info, warn};
use num_complex::Complex64;

use nlbc_core::config::PRESETS;
use nlbc_core::expansion::{admissible_radius, weighted_remainder_norm};
use nlbc_core::io::{
    delta_table, linspace, read_function_csv, read_json, write_csv, write_function_csv, write_json, CoefficientsFile,
    RemainderRow, SpectrumFile,
};
use nlbc_core::resolvent::apply_resolvent_with_tol;
use nlbc_core::spectrum::{counting_defect, counting_function, find_spectrum};
use nlbc_core::verify::{run_verify, VerifyReport};
use nlbc_core::{Context, Eigenvalue, Error, RunConfig};

const EXIT_CONFIG: u8 = 1;
const EXIT_NUMERICAL: u8 = 2;
const EXIT_VERIFY: u8 = 3;

/// Spectral toolkit for -i d/dx on [0, b] with a nonlocal boundary condition.
///
/// Exit codes: 0 success, 1 invalid configuration or input, 2 numerical
/// failure (non-convergence, singular resolvent), 3 verification failure.
#[derive(Parser)]
#[command(name = "nlbc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Log progress to stderr.
    #[arg(short, long, global = true)]
    verbose: bool,
}

#[derive(Args, Clone)]
struct Common {
    /// Built-in configuration: zero, antiperiodic, empty or double.
    /// Without --preset or --config the zero preset is used.
    #[arg(long, conflicts_with = "config")]
    preset: Option<String>,

    /// JSON run configuration; the flags below override its fields.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Grid nodes [default: 128].
    #[arg(long)]
    n: Option<usize>,

    /// Segment length b [default: pi].
    #[arg(long)]
    b: Option<f64>,

    /// Seed of randomized checks [default: 0].
    #[arg(long)]
    seed: Option<u64>,

    /// Threshold below which |Delta| counts as zero [default: 1e-11].
    #[arg(long)]
    tol_zero: Option<f64>,

    /// Boundary residual tolerance [default: 1e-8].
    #[arg(long)]
    tol_boundary: Option<f64>,

    /// Minimum nodes per argument-principle contour [default: 256].
    #[arg(long)]
    contour_points: Option<usize>,

    /// Cross-check every projection against its contour-integral form.
    #[arg(long)]
    paranoid: bool,

    /// Output file, or - for standard output.
    #[arg(long, default_value = "-")]
    out: String,
}

#[derive(Subcommand)]
enum Command {
    /// Sample Delta on a rectangular lambda grid (CSV).
    Delta {
        #[command(flatten)]
        common: Common,
        /// re_min,re_max,re_count,im_min,im_max,im_count
        /// [default: -R,R,201,-2,2,21 with R the configured radius].
        #[arg(long, value_parser = parse_delta_grid, allow_hyphen_values = true)]
        grid: Option<DeltaGrid>,
    },
    /// Locate the spectrum in |lambda| <= R (JSON).
    Spectrum {
        #[command(flatten)]
        common: Common,
        /// Radius R [default: from the configuration].
        #[arg(long)]
        radius: Option<f64>,
    },
    /// Apply (L - lambda)^{-1} to a sampled function (CSV).
    Resolve {
        #[command(flatten)]
        common: Common,
        /// lambda as re,im.
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        lambda: Complex64,
        /// Function samples, CSV x,re,im.
        #[arg(long)]
        f: PathBuf,
    },
    /// Boundary-dependent convolution f * g (CSV).
    Convolve {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        g: PathBuf,
    },
    /// Coefficient blocks of f for every eigenvalue in |lambda| <= R (JSON).
    Expand {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        f: PathBuf,
        /// Radius R [default: from the configuration].
        #[arg(long)]
        radius: Option<f64>,
        /// Spectrum file from `nlbc spectrum`; computed when absent.
        #[arg(long)]
        spectrum: Option<PathBuf>,
    },
    /// Norms of the expansion remainder S_R f - f (CSV).
    Remainder {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        f: PathBuf,
        /// Comma-separated radii.
        #[arg(long, value_delimiter = ',', default_value = "10,20,40")]
        radii: Vec<f64>,
    },
    /// Run the invariant suite; exit 0 iff every check passes.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Boundary conditions, counting function and basis diagnostics (JSON).
    Diagnose {
        #[command(flatten)]
        common: Common,
        /// Random functions in the coefficient-ratio estimate.
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Clone, Copy, Debug)]
struct DeltaGrid {
    re: (f64, f64, usize),
    im: (f64, f64, usize),
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |p: &str| p.parse::<f64>().map_err(|e| format!("{p:?}: {e}"));
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err("expected re,im".into()),
    }
}

fn parse_delta_grid(s: &str) -> Result<DeltaGrid, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 6 {
        return Err("expected re_min,re_max,re_count,im_min,im_max,im_count".into());
    }
    let num = |p: &str| p.parse::<f64>().map_err(|e| format!("{p:?}: {e}"));
    let count = |p: &str| p.parse::<usize>().map_err(|e| format!("{p:?}: {e}"));
    Ok(DeltaGrid {
        re: (num(parts[0])?, num(parts[1])?, count(parts[2])?),
        im: (num(parts[3])?, num(parts[4])?, count(parts[5])?),
    })
}

impl Common {
    fn config(&self) -> Result<RunConfig, Error> {
        let mut c = match (&self.preset, &self.config) {
            (Some(p), _) => RunConfig::preset(p)?,
            (None, Some(path)) => RunConfig::from_json_file(path)?,
            (None, None) => RunConfig::preset(PRESETS[0])?,
        };
        if let Some(v) = self.n {
            c.n = v;
        }
        if let Some(v) = self.b {
            c.b = v;
        }
        if let Some(v) = self.seed {
            c.seed = v;
        }
        if let Some(v) = self.tol_zero {
            c.tol_zero = v;
        }
        if let Some(v) = self.tol_boundary {
            c.tol_boundary = v;
        }
        if let Some(v) = self.contour_points {
            c.contour_points = v;
        }
        c.paranoid |= self.paranoid;
        c.validate()?;
        Ok(c)
    }

    fn context(&self, radius: Option<f64>) -> Result<Context, Error> {
        let mut c = self.config()?;
        if let Some(r) = radius {
            c.radius = r;
        }
        c.build()
    }
}

fn output(path: &str) -> Result<Box<dyn Write>, Error> {
    if path == "-" {
        Ok(Box::new(std::io::stdout().lock()))
    } else {
        let file = File::create(path).map_err(|e| Error::Config(format!("cannot create {path}: {e}")))?;
        Ok(Box::new(BufWriter::new(file)))
    }
}

fn load_f(ctx: &Context, path: &Path) -> Result<nlbc_core::GridFunction, Error> {
    read_function_csv(path, &ctx.grid)
}

fn spectrum_for(ctx: &Context, radius: f64) -> Result<Vec<Eigenvalue>, Error> {
    info!("locating zeros of Delta in |lambda| <= {radius}");
    let s = find_spectrum(&ctx.cf, radius, &ctx.config.spectrum_options())?;
    info!("found {} eigenvalues", s.len());
    Ok(s)
}

fn print_table(out: &mut dyn Write, report: &VerifyReport) -> std::io::Result<()> {
    for c in &report.checks {
        let status = match (c.observational, c.passed) {
            (true, _) => "OBS ",
            (false, true) => "PASS",
            (false, false) => "FAIL",
        };
        writeln!(
            out,
            "{status}  {:<44} {:>11.3e}  tol {:>8.1e}  {}",
            format!("{}/{}", c.group, c.name),
            c.value,
            c.tolerance,
            c.detail
        )?;
    }
    let failed = report.failures().count();
    writeln!(
        out,
        "{} checks, {} failed, {} eigenvalues, seed {}",
        report.checks.len(),
        failed,
        report.eigenvalues,
        report.seed
    )
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Delta { common, grid } => {
            let ctx = common.context(None)?;
            let r = ctx.config.radius;
            let g = grid.unwrap_or(DeltaGrid {
                re: (-r, r, 201),
                im: (-2.0, 2.0, 21),
            });
            let rows = delta_table(&ctx.cf, &linspace(g.re.0, g.re.1, g.re.2), &linspace(g.im.0, g.im.1, g.im.2))?;
            write_csv(output(&common.out)?, &rows)?;
        }
        Command::Spectrum { common, radius } => {
            let ctx = common.context(radius)?;
            let r = ctx.config.radius;
            let s = spectrum_for(&ctx, r)?;
            write_json(output(&common.out)?, &SpectrumFile::new(&s, r))?;
        }
        Command::Resolve { common, lambda, f } => {
            let ctx = common.context(None)?;
            let f = load_f(&ctx, &f)?;
            let res = apply_resolvent_with_tol(&ctx.cf, lambda, &f, ctx.config.tol_zero)?;
            info!(
                "ode residual {:e}, boundary residual {:e}",
                res.residual_ode, res.residual_boundary
            );
            if res.residual_boundary > ctx.config.tol_boundary * f.max_abs().max(1.0) {
                warn!("|U(y)| = {:e} exceeds the boundary tolerance", res.residual_boundary);
            }
            write_function_csv(output(&common.out)?, &res.y)?;
        }
        Command::Convolve { common, f, g } => {
            let ctx = common.context(None)?;
            let (f, g) = (load_f(&ctx, &f)?, load_f(&ctx, &g)?);
            write_function_csv(output(&common.out)?, &ctx.engine.convolve(&f, &g)?)?;
        }
        Command::Expand {
            common,
            f,
            radius,
            spectrum,
        } => {
            let ctx = common.context(radius)?;
            let r = ctx.config.radius;
            let f = load_f(&ctx, &f)?;
            let s = match spectrum {
                Some(path) => {
                    let file = File::open(&path)
                        .map_err(|e| Error::Config(format!("cannot open {}: {e}", path.display())))?;
                    let file: SpectrumFile = read_json(file)?;
                    if file.radius < r {
                        return Err(Error::Config(format!(
                            "spectrum file covers |lambda| <= {}, expansion needs {r}",
                            file.radius
                        )));
                    }
                    file.spectrum()?
                }
                None => spectrum_for(&ctx, r)?,
            };
            let el = ctx.expansion.fourier_transform(&s, &f, r)?;
            write_json(output(&common.out)?, &CoefficientsFile::new(&s, &el)?)?;
        }
        Command::Remainder { common, f, radii } => {
            let ctx = common.context(None)?;
            if radii.is_empty() || radii.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
                return Err(Error::Config("radii must be positive".into()));
            }
            let f = load_f(&ctx, &f)?;
            let top = radii.iter().copied().fold(0.0, f64::max);
            let s = spectrum_for(&ctx, top + 1.0)?;
            let mut rows = Vec::new();
            for r in radii {
                let q = ctx.expansion.remainder(&s, &f, r)?;
                rows.push(RemainderRow {
                    radius: q.radius,
                    weighted_norm: weighted_remainder_norm(&q.value),
                    sup_norm: q.value.max_abs(),
                    l2_norm: q.value.l2_norm(),
                });
            }
            write_csv(output(&common.out)?, &rows)?;
        }
        Command::Verify { common, format } => {
            let ctx = common.context(None)?;
            let report = run_verify(&ctx);
            let mut out = output(&common.out)?;
            match format {
                Format::Table => print_table(&mut out, &report)?,
                Format::Json => write_json(&mut out, &report)?,
            }
            out.flush()?;
            if !report.passed() {
                for c in report.failures() {
                    eprintln!("failed: {}/{} = {:e} (tolerance {:e}) {}", c.group, c.name, c.value, c.tolerance, c.detail);
                }
                return Ok(EXIT_VERIFY);
            }
        }
        Command::Diagnose { common, samples } => {
            let ctx = common.context(None)?;
            let r = ctx.config.radius;
            // one unit beyond R so counting circles can step off nearby zeros
            let wide = spectrum_for(&ctx, r + 1.0)?;
            let s: Vec<Eigenvalue> = wide.iter().filter(|e| e.lambda.norm() <= r).cloned().collect();
            let b = ctx.config.b;
            let radii: Vec<f64> = (1..=4).map(|k| admissible_radius(&wide, r * k as f64 / 4.0)).collect();
            let counting: Vec<serde_json::Value> = counting_function(&ctx.cf, &radii, &ctx.config.spectrum_options())?
                .into_iter()
                .map(|(radius, n)| {
                    serde_json::json!({
                        "R": radius,
                        "N": n,
                        "defect": counting_defect(b, radius, n),
                    })
                })
                .collect();
            let report = serde_json::json!({
                "conditions": ctx.sigma.check_conditions(&s, r),
                "counting": counting,
                "diagnostics": ctx.expansion.diagnostics(&s, r, samples)?,
            });
            write_json(output(&common.out)?, &report)?;
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(if cli.verbose { "info" } else { "warn" }))
        .init();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical() { EXIT_NUMERICAL } else { EXIT_CONFIG })
        }
    }
}
