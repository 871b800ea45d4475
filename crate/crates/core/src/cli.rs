//! The `ves` command line.
//!
//! Exit codes: 0 success, 1 parameters outside Φ or an Inada FAIL, 2 I/O,
//! parse or usage errors, 3 numeric failure.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::asymptotics::{relative_gap, summary, End};
use crate::calibrate::{fit, read_observations, FitOptions};
use crate::elasticity::{classify_regime, sigma_closed};
use crate::error::Error;
use crate::figures::{emit_figures, Case, FigureSpec};
use crate::format::num;
use crate::grid::{Grid, Spacing};
use crate::params::{RawParams, ValidatedParams, KEYS};
use crate::verify::{check_inada, check_inada_raw, InadaReport, ProbeConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REJECTED: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "ves",
    version,
    about = "Variable elasticity of substitution production function toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the parameters against every feasibility condition.
    Validate(ParamArgs),
    /// Tabulate k, f, f', f'', sigma and the capital share.
    Eval {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate the elasticity of substitution.
    Sigma {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Probe the Inada conditions numerically.
    Inada {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 1e-8)]
        kmin: f64,
        #[arg(long, default_value_t = 1e8)]
        kmax: f64,
        #[arg(long, default_value_t = 4)]
        points_per_decade: usize,
        #[arg(long, default_value_t = 1e3)]
        divergence_threshold: f64,
        #[arg(long, default_value_t = 1e-2)]
        vanishing_threshold: f64,
        /// Run the checks even if the parameters are outside Φ.
        #[arg(long)]
        raw: bool,
    },
    /// Cobb-Douglas limits at both ends and the convergence gaps.
    Asym {
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Write the CSV and SVG reproduction files for a benchmark case.
    Figures {
        #[arg(long = "case", value_parser = clap::value_parser!(u8).range(1..=2))]
        case: u8,
        #[arg(long)]
        outdir: PathBuf,
    },
    /// Calibrate the parameters to a `k,y` CSV file.
    Fit {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        init: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 200)]
        max_iterations: usize,
    },
}

#[derive(Args, Debug)]
struct ParamArgs {
    /// Parameter file with one `key=value` per line.
    #[arg(long)]
    params: Option<PathBuf>,
    #[arg(long = "A", allow_hyphen_values = true)]
    a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    psi: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    omega: Option<f64>,
}

#[derive(Args, Debug)]
struct GridArgs {
    /// Comma-separated capital levels.
    #[arg(long, conflicts_with_all = ["kmin", "kmax", "points"], allow_hyphen_values = true)]
    k: Option<String>,
    #[arg(long)]
    kmin: Option<f64>,
    #[arg(long)]
    kmax: Option<f64>,
    #[arg(long)]
    points: Option<usize>,
    /// Linear instead of logarithmic spacing.
    #[arg(long)]
    linear: bool,
}

/// A failure with the exit code it maps to.
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotInPhi(_) | Error::InitOutsidePhi(_) => EXIT_REJECTED,
            Error::Domain { .. } | Error::Overflow { .. } | Error::Numeric { .. } => EXIT_NUMERIC,
            _ => EXIT_IO,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e).into()
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_IO,
        message: message.into(),
    }
}

impl ParamArgs {
    /// File values first, inline flags on top.
    fn resolve(&self) -> Result<RawParams, Failure> {
        let mut raw = match &self.params {
            Some(path) => RawParams::from_file(path)?,
            None => RawParams::new(f64::NAN, f64::NAN, f64::NAN, f64::NAN, f64::NAN, f64::NAN),
        };
        let inline = [
            self.a, self.alpha, self.beta, self.theta, self.psi, self.omega,
        ];
        for (key, value) in KEYS.iter().zip(inline) {
            if let Some(v) = value {
                raw.set(key, v);
            }
        }
        let missing: Vec<&str> = KEYS
            .iter()
            .filter(|k| raw.get(k).is_some_and(f64::is_nan))
            .copied()
            .collect();
        if !missing.is_empty() {
            return Err(usage(format!(
                "missing parameters: {} (use --params <file> or inline flags)",
                missing.join(", ")
            )));
        }
        Ok(raw)
    }

    fn validated(&self) -> Result<ValidatedParams, Failure> {
        Ok(ValidatedParams::new(self.resolve()?)?)
    }
}

impl GridArgs {
    fn values(&self) -> Result<Vec<f64>, Failure> {
        if let Some(list) = &self.k {
            return list
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<f64>()
                        .map_err(|_| usage(format!("invalid --k value `{s}`")))
                })
                .collect();
        }
        let (Some(lo), Some(hi)) = (self.kmin, self.kmax) else {
            return Err(usage("give either --k or both --kmin and --kmax"));
        };
        let points = self.points.unwrap_or(if lo == hi { 1 } else { 50 });
        let spacing = if self.linear {
            Spacing::Linear
        } else {
            Spacing::Log
        };
        Ok(Grid::new(lo, hi, points, spacing)?.values())
    }
}

/// Header and one row per capital level.
pub fn emit_eval_csv(p: &ValidatedParams, ks: &[f64], sink: &mut impl Write) -> crate::Result<()> {
    writeln!(sink, "k,f,f_prime,f_double_prime,sigma,share")?;
    for &k in ks {
        let r = p.eval_row(k)?;
        writeln!(
            sink,
            "{},{},{},{},{},{}",
            num(r.k),
            num(r.f),
            num(r.f_prime),
            num(r.f_double_prime),
            num(r.sigma),
            num(r.share)
        )?;
    }
    Ok(())
}

fn emit_sigma_csv(p: &ValidatedParams, ks: &[f64], sink: &mut impl Write) -> crate::Result<()> {
    writeln!(sink, "k,sigma")?;
    for &k in ks {
        writeln!(sink, "{},{}", num(k), num(sigma_closed(p, k)?))?;
    }
    Ok(())
}

/// Renders an Inada report as `key=value` lines ending in a summary line.
pub fn render_inada(report: &InadaReport) -> String {
    let mut out = String::new();
    for (name, check) in report.checks() {
        out.push_str(&format!("{name}={}\n", check.verdict));
        out.push_str(&format!(
            "{name}.witness_log10_k={}\n",
            num(check.witness.log10_k)
        ));
        let key = if check.witness.log_scale {
            "witness_log10_value"
        } else {
            "witness_value"
        };
        out.push_str(&format!("{name}.{key}={}\n", num(check.witness.value)));
    }
    out.push_str(&format!(
        "share_limit_zero={}\n",
        num(report.share_limit_zero)
    ));
    out.push_str(&format!(
        "share_limit_infinity={}\n",
        num(report.share_limit_infinity)
    ));
    out.push_str(&format!(
        "slope_estimate_zero={}\n",
        num(report.slope_estimate_zero)
    ));
    out.push_str(&format!(
        "slope_estimate_infinity={}\n",
        num(report.slope_estimate_infinity)
    ));
    out.push_str(&format!("grids_used={}\n", report.grids_used));
    out.push_str(if report.all_pass() {
        "summary=PASS\n"
    } else {
        "summary=FAIL\n"
    });
    out
}

fn write_output(
    out: &Option<PathBuf>,
    body: &[u8],
    stdout: &mut impl Write,
) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, body)?,
        None => stdout.write_all(body)?,
    }
    Ok(())
}

fn dispatch(
    command: Command,
    stdout: &mut impl Write,
    stderr: &mut impl Write,
) -> Result<i32, Failure> {
    match command {
        Command::Validate(args) => {
            let raw = args.resolve()?;
            let report = raw.validate()?;
            for (name, ok) in report.flags() {
                writeln!(stdout, "{name}={ok}")?;
            }
            writeln!(stdout, "overall={}", report.overall)?;
            if report.overall {
                Ok(EXIT_OK)
            } else {
                writeln!(stderr, "failed: {}", report.failed().join(", "))?;
                Ok(EXIT_REJECTED)
            }
        }
        Command::Eval { params, grid, out } => {
            let p = params.validated()?;
            let ks = grid.values()?;
            let mut buf = Vec::new();
            emit_eval_csv(&p, &ks, &mut buf)?;
            write_output(&out, &buf, stdout)?;
            Ok(EXIT_OK)
        }
        Command::Sigma { params, grid, out } => {
            let p = params.validated()?;
            let ks = grid.values()?;
            let mut buf = Vec::new();
            emit_sigma_csv(&p, &ks, &mut buf)?;
            write_output(&out, &buf, stdout)?;
            writeln!(stderr, "regime={}", classify_regime(&p).tag())?;
            Ok(EXIT_OK)
        }
        Command::Inada {
            params,
            kmin,
            kmax,
            points_per_decade,
            divergence_threshold,
            vanishing_threshold,
            raw,
        } => {
            let cfg = ProbeConfig {
                k_min: kmin,
                k_max: kmax,
                points_per_decade,
                divergence_threshold,
                vanishing_threshold,
            };
            let report = if raw {
                let raw_params = params.resolve()?;
                raw_params.validate()?;
                check_inada_raw(&raw_params, &cfg)?
            } else {
                check_inada(&params.validated()?, &cfg)?
            };
            stdout.write_all(render_inada(&report).as_bytes())?;
            Ok(if report.all_pass() {
                EXIT_OK
            } else {
                EXIT_REJECTED
            })
        }
        Command::Asym { params } => {
            let p = params.validated()?;
            let s = summary(&p);
            writeln!(stdout, "alpha_z={}", num(s.alpha_z))?;
            writeln!(stdout, "beta_z={}", num(s.beta_z))?;
            writeln!(stdout, "A_z={}", num(s.a_z))?;
            writeln!(stdout, "B_z={}", num(s.b_z))?;
            writeln!(stdout, "psi_positive={}", s.psi_positive)?;
            writeln!(stdout)?;
            writeln!(stdout, "k,gap_zero,gap_infinity")?;
            for e in -6..=6 {
                let k = 10f64.powi(e);
                writeln!(
                    stdout,
                    "{},{},{}",
                    num(k),
                    num(relative_gap(&p, k, End::Zero)?),
                    num(relative_gap(&p, k, End::Infinity)?)
                )?;
            }
            Ok(EXIT_OK)
        }
        Command::Figures { case, outdir } => {
            let case = Case::from_id(case).ok_or_else(|| usage("--case must be 1 or 2"))?;
            let written = emit_figures(&FigureSpec { case }, &outdir)?;
            for path in written {
                writeln!(stdout, "{}", path.display())?;
            }
            Ok(EXIT_OK)
        }
        Command::Fit {
            data,
            init,
            out,
            max_iterations,
        } => {
            let file =
                fs::File::open(&data).map_err(|e| usage(format!("{}: {e}", data.display())))?;
            let observations = read_observations(file)?;
            let init = RawParams::from_file(&init)?;
            let opts = FitOptions {
                max_iterations,
                ..FitOptions::default()
            };
            let res = fit(&observations, &init, &opts)?;
            let mut body = res.params.raw().to_file_string();
            body.push_str(&format!("rmse={}\n", num(res.rmse)));
            body.push_str(&format!("iterations={}\n", res.iterations));
            body.push_str(&format!("converged={}\n", res.converged));
            body.push_str(&format!("gradient_norm={}\n", num(res.gradient_norm)));
            body.push_str(&format!("step_norm={}\n", num(res.step_norm)));
            write_output(&out, body.as_bytes(), stdout)?;
            Ok(EXIT_OK)
        }
    }
}

/// Parses `argv` (program name first) and runs one subcommand.
pub fn run<I, S>(argv: I, stdout: &mut impl Write, stderr: &mut impl Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(rendered.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = stderr.write_all(rendered.as_bytes());
                    EXIT_IO
                }
            };
        }
    };
    match dispatch(cli.command, stdout, stderr) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}
