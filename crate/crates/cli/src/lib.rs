//! The `dissipspec` command line.
//!
//! Exit codes: 0 success, 1 verification failure, 2 numerical failure,
//! 3 bad input.

use std::ffi::OsString;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use dissipspec_core::mode_family::ModeFamily;
use dissipspec_core::regions::{self, FitFamily, RegionSpec, RegionTemplate, ScalingCheck};
use dissipspec_core::rootfind::Contour;
use dissipspec_core::spectrum::{full_spectrum_with, SpectrumOptions, SpectrumReport};
use dissipspec_core::symbol_checks::{self, CheckReport, GridSpec};
use dissipspec_core::trace_count;
use dissipspec_core::Error;

pub mod output;
pub mod plot;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

pub const THREADS_VAR: &str = "DISSIPSPEC_THREADS";

#[derive(Debug, Parser)]
#[command(name = "dissipspec", version, about = "Eigenvalues of the dissipative wave generator on the exterior of the unit ball")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpectrumFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SymbolCase {
    #[value(name = "A")]
    A,
    #[value(name = "B")]
    B,
    Rho,
    Sqrtz,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute all eigenvalues for modes 0..=nmax.
    Spectrum {
        #[arg(long)]
        gamma: f64,
        #[arg(long, default_value_t = 16)]
        nmax: usize,
        /// Root-finding tolerance (backward error).
        #[arg(long, default_value = "1e-13")]
        tol: f64,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = SpectrumFormat::Json)]
        format: SpectrumFormat,
    },
    /// Check every eigenvalue against a region, fitting missing constants.
    ///
    /// Regions: lambda-eps:EPS[:C], rn:N[:C], disc-rn:R0:N[:C], sector,
    /// real-ray[:TOL].
    Verify {
        #[arg(long)]
        gamma: f64,
        #[arg(long, default_value_t = 16)]
        nmax: usize,
        #[arg(long, default_value = "1e-13")]
        tol: f64,
        #[arg(long)]
        region: String,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
    /// Compare the weighted winding count with the enumerated spectrum.
    Trace {
        #[arg(long)]
        gamma: f64,
        /// circle:CX,CY,R or rect:X0,Y0,X1,Y1, in Re λ < 0.
        #[arg(long, allow_hyphen_values = true)]
        contour: String,
        #[arg(long, default_value_t = 16)]
        ntrunc: usize,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
    /// Grid checks of the symbol inequalities.
    Symbols {
        #[arg(long = "case", value_enum)]
        case: SymbolCase,
        /// Required for cases A and B.
        #[arg(long)]
        gamma: Option<f64>,
        /// e.g. r0=0:100:200,h=1e-4:1e-1:20,t=0:1:16,delta=0.45,eps0=0.1
        #[arg(long, default_value = "")]
        grid: String,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
    /// SVG scatter of a spectrum report in the λ plane.
    Plot {
        /// JSON report written by `spectrum`.
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        svg: PathBuf,
        #[arg(long)]
        region: Option<String>,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Input(String),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_numerical() => EXIT_NUMERICAL,
            _ => EXIT_INPUT,
        }
    }
}

type CliResult = std::result::Result<i32, CliError>;

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(rendered.as_bytes()) } else { stdout.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    if let Err(e) = configure_threads() {
        let _ = writeln!(stderr, "error: {e}");
        return e.exit_code();
    }
    match dispatch(cli.command, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn configure_threads() -> std::result::Result<(), CliError> {
    let Ok(value) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| CliError::Input(format!("{THREADS_VAR} must be a positive integer, got {value:?}")))?;
    // A second call in the same process keeps the first pool.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(())
}

fn check_gamma(gamma: f64) -> std::result::Result<(), CliError> {
    if gamma > 0.0 && gamma.is_finite() {
        Ok(())
    } else {
        Err(CliError::Input(format!("gamma must be positive, got {gamma}")))
    }
}

fn dispatch(command: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult {
    match command {
        Command::Spectrum { gamma, nmax, tol, out, format } => {
            check_gamma(gamma)?;
            let report = full_spectrum_with(gamma, nmax, &SpectrumOptions { tol })?;
            for w in &report.warnings {
                writeln!(stderr, "warning: {w}")?;
            }
            let bytes = match format {
                SpectrumFormat::Json => output::to_json(&report)?,
                SpectrumFormat::Csv => output::spectrum_csv(&report)?,
            };
            output::emit(out.as_deref(), &bytes, stdout)?;
            Ok(EXIT_OK)
        }
        Command::Verify { gamma, nmax, tol, region, format } => {
            check_gamma(gamma)?;
            let template: RegionTemplate = region.parse()?;
            let report = full_spectrum_with(gamma, nmax, &SpectrumOptions { tol })?;
            let verdict = verify_report(&report, &template)?;
            match format {
                ReportFormat::Text => stdout.write_all(verdict.to_text().as_bytes())?,
                ReportFormat::Json => stdout.write_all(&output::to_json(&verdict)?)?,
            }
            Ok(if verdict.pass { EXIT_OK } else { EXIT_VERIFY })
        }
        Command::Trace { gamma, contour, ntrunc, format } => {
            check_gamma(gamma)?;
            let contour: Contour = contour.parse()?;
            let report = trace_count::count_in_contour(gamma, &contour, ntrunc)?;
            match format {
                ReportFormat::Text => {
                    writeln!(stdout, "contour: {}", report.contour)?;
                    writeln!(stdout, "gamma: {}", report.gamma)?;
                    writeln!(stdout, "n_trunc: {}", report.n_trunc)?;
                    let windings: Vec<String> = report.per_mode_winding.iter().map(i64::to_string).collect();
                    writeln!(stdout, "per_mode_winding: {}", windings.join(" "))?;
                    writeln!(stdout, "weighted_total: {}", report.weighted_total)?;
                    writeln!(stdout, "direct_count: {}", report.direct_count)?;
                    writeln!(stdout, "agree: {}", report.agree)?;
                    for w in &report.warnings {
                        writeln!(stdout, "warning: {w}")?;
                    }
                }
                ReportFormat::Json => stdout.write_all(&output::to_json(&report)?)?,
            }
            Ok(if report.agree { EXIT_OK } else { EXIT_VERIFY })
        }
        Command::Symbols { case, gamma, grid, format } => {
            let mut spec: GridSpec = grid.parse()?;
            match (case, gamma) {
                (SymbolCase::A | SymbolCase::B, None) => {
                    return Err(CliError::Input("cases A and B need --gamma".into()));
                }
                (_, Some(g)) => {
                    check_gamma(g)?;
                    spec = spec.with_gamma(g);
                }
                _ => {}
            }
            let report: CheckReport = match case {
                SymbolCase::A => symbol_checks::check_case_a(&spec)?,
                SymbolCase::B => symbol_checks::check_case_b(&spec)?,
                SymbolCase::Rho => symbol_checks::check_rho_bounds(&spec)?,
                SymbolCase::Sqrtz => symbol_checks::check_sqrtz_lower(&spec)?,
            };
            match format {
                ReportFormat::Text => write!(stdout, "{report}")?,
                ReportFormat::Json => stdout.write_all(&output::to_json(&report)?)?,
            }
            Ok(if report.pass { EXIT_OK } else { EXIT_VERIFY })
        }
        Command::Plot { input, svg, region } => {
            let text = std::fs::read_to_string(&input)
                .map_err(|e| CliError::Input(format!("cannot read {}: {e}", input.display())))?;
            let report: SpectrumReport = serde_json::from_str(&text)
                .map_err(|e| CliError::Input(format!("{} is not a spectrum report: {e}", input.display())))?;
            let region = match region {
                Some(r) => {
                    let template: RegionTemplate = r.parse()?;
                    Some(template.resolve(report.gamma, &report.eigenvalues)?.spec)
                }
                None => None,
            };
            output::write_atomic(&svg, plot::render(&report, region.as_ref()).as_bytes())?;
            Ok(EXIT_OK)
        }
    }
}

/// Outcome of `verify`.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct Verdict {
    pub gamma: f64,
    pub n_max: usize,
    pub region: String,
    pub eigenvalue_count: usize,
    pub total_multiplicity: usize,
    pub failures: Vec<num_complex::Complex64>,
    pub fitted_constants: Vec<(String, f64)>,
    /// Largest `Re` over the roots of `R_n`, `1 ≤ n ≤ n_max`.
    pub max_re_bessel_root: Option<f64>,
    pub max_abs_im_lambda: f64,
    pub scaling: Option<ScalingCheck>,
    pub warnings: Vec<String>,
    pub pass: bool,
}

impl Verdict {
    fn to_text(&self) -> String {
        let mut s = format!("region: {}\ngamma: {}\nn_max: {}\n", self.region, self.gamma, self.n_max);
        if self.eigenvalue_count == 0 {
            s.push_str("0 eigenvalues (vacuous pass)\n");
        } else {
            s.push_str(&format!(
                "{} eigenvalues (total multiplicity {})\n",
                self.eigenvalue_count, self.total_multiplicity
            ));
        }
        for (name, value) in &self.fitted_constants {
            s.push_str(&format!("fitted {name} = {}\n", output::full(*value)));
        }
        s.push_str(&format!("max |Im lambda| = {}\n", output::full(self.max_abs_im_lambda)));
        if let Some(re) = self.max_re_bessel_root {
            s.push_str(&format!("max Re z_j over Bessel roots = {}\n", output::full(re)));
        }
        match &self.scaling {
            Some(ScalingCheck::Fitted { slope, limit, pass }) => {
                s.push_str(&format!("scaling slope = {slope:.4} (limit {limit:.4}, {})\n", if *pass { "ok" } else { "exceeded" }));
            }
            Some(ScalingCheck::InsufficientData { usable }) => {
                s.push_str(&format!("scaling slope: insufficient data ({usable} usable points)\n"));
            }
            None => {}
        }
        for f in &self.failures {
            s.push_str(&format!("outside region: {} {:+}i\n", output::full(f.re), output::full(f.im)));
        }
        for w in &self.warnings {
            s.push_str(&format!("warning: {w}\n"));
        }
        s.push_str(if self.pass { "PASS\n" } else { "FAIL\n" });
        s
    }
}

pub fn verify_report(report: &SpectrumReport, template: &RegionTemplate) -> dissipspec_core::Result<Verdict> {
    let resolved = template.resolve(report.gamma, &report.eigenvalues)?;
    let mut fitted = resolved.fitted.clone();
    if let (RegionSpec::DiscPlusRn { n, c, .. }, false) = (resolved.spec, report.eigenvalues.is_empty()) {
        fitted.push(("R0".to_string(), regions::fit_disc_radius(n, c, &report.eigenvalues)?));
    }
    let failures = report
        .eigenvalues
        .iter()
        .filter(|e| !resolved.spec.contains(e.lambda))
        .map(|e| e.lambda)
        .collect::<Vec<_>>();
    let max_re_bessel_root = (1..=report.n_max)
        .map(|n| {
            ModeFamily::new(n, report.gamma)
                .map(|m| m.bessel_roots().iter().map(|r| r.value.re).fold(f64::NEG_INFINITY, f64::max))
        })
        .collect::<dissipspec_core::Result<Vec<f64>>>()?
        .into_iter()
        .reduce(f64::max);
    let scaling = match resolved.spec {
        RegionSpec::LambdaEps { eps, .. } => Some(regions::scaling_slope(&report.eigenvalues, eps)),
        _ => None,
    };
    // Keep the family fit visible even when C was given explicitly.
    if let RegionSpec::LambdaEps { eps, .. } = resolved.spec {
        if !report.eigenvalues.is_empty() && resolved.fitted.is_empty() {
            fitted.push(("C_data".into(), regions::fit_constant(FitFamily::LambdaEps { eps }, &report.eigenvalues)?));
        }
    }
    Ok(Verdict {
        gamma: report.gamma,
        n_max: report.n_max,
        region: resolved.spec.to_string(),
        eigenvalue_count: report.eigenvalues.len(),
        total_multiplicity: report.total_multiplicity(),
        pass: failures.is_empty(),
        failures,
        fitted_constants: fitted,
        max_re_bessel_root,
        max_abs_im_lambda: report.eigenvalues.iter().map(|e| e.lambda.im.abs()).fold(0.0, f64::max),
        scaling,
        warnings: report.warnings.clone(),
    })
}
