//! Command-line front end: evaluate the quantum dilogarithm, print system
//! spectra, run verification suites, and emit plot-ready weight data.
//!
//! - every run records a manifest (command, parameters, seed, output path,
//!   format) so outputs are reproducible;
//! - exit codes: 0 success, 1 input error, 2 mathematical-domain error,
//!   3 verification failure.

use clap::{Parser, Subcommand};
use idqm::qdilog::QDilogContext;
use idqm::systems::{CaseTag, GammaSpec, SystemError, SystemParams};
use idqm::verify::{
    self, reports_to_csv, reports_to_json, QuadratureConfig, VerificationReport,
};
use num_complex::Complex64;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_INPUT: u8 = 1;
const EXIT_DOMAIN: u8 = 2;
const EXIT_VERIFICATION: u8 = 3;

#[derive(Parser)]
#[command(
    name = "idqm",
    about = "Discrete quantum mechanics with pure imaginary shifts: \
             quantum dilogarithm, |q| = 1 orthogonal polynomials, spectra, \
             and numerical verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate Phi_gamma(z); optionally sample a rectangular grid to CSV.
    Qdilog {
        /// gamma as a decimal (generic series branch)
        #[arg(long, conflicts_with = "gamma_rational")]
        gamma: Option<f64>,
        /// gamma as an exact multiple M/N of pi (corrected series branch)
        #[arg(long, value_name = "M/N")]
        gamma_rational: Option<String>,
        /// evaluation point, e.g. "0.5-0.25i"
        #[arg(long, default_value = "0+0i", allow_hyphen_values = true)]
        z: String,
        /// grid spec "re_min:re_max:n_re,im_min:im_max:n_im"
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<String>,
        /// CSV output path for the grid (stdout when omitted)
        #[arg(long)]
        output: Option<PathBuf>,
        /// manifest seed, recorded in every output
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print n, E_n, conjectured h_n and n_max for a parameter file.
    Spectrum {
        /// UTF-8 lines "key = value"; keys: case, gamma | gamma_rational,
        /// alpha1, alpha2, beta1, beta2, K
        #[arg(long)]
        params_file: PathBuf,
    },
    /// Run a verification suite; exit 0 iff every report passed.
    Verify {
        /// one of: qdilog, polynomials, systems, oracle, quadrature,
        /// limits, all
        #[arg(long, default_value = "all")]
        suite: String,
        /// write the report collection as JSON to this path
        #[arg(long)]
        json: Option<PathBuf>,
        /// write the CSV summary to this path
        #[arg(long)]
        csv: Option<PathBuf>,
        /// manifest seed, recorded in every output
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Emit CSV samples of (x, phi_0(x)^2, P_n(eta(x))...) over a window
    /// covering at least six decay lengths each side.
    Weight {
        #[arg(long)]
        params_file: PathBuf,
        /// number of uniformly spaced samples
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// CSV output path (stdout when omitted)
        #[arg(long)]
        output: Option<PathBuf>,
        /// manifest seed, recorded in every output
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Reproducibility record embedded in every emitted artifact.
#[derive(Serialize)]
struct RunManifest {
    command: String,
    parameters: BTreeMap<String, String>,
    seed: u64,
    output_path: String,
    format: String,
}

impl RunManifest {
    fn new(
        command: &str,
        parameters: BTreeMap<String, String>,
        seed: u64,
        output: &Option<PathBuf>,
        format: &str,
    ) -> Self {
        RunManifest {
            command: command.to_string(),
            parameters,
            seed,
            output_path: output
                .as_ref()
                .map(|p| p.display().to_string())
                .unwrap_or_else(|| "-".to_string()),
            format: format.to_string(),
        }
    }

    fn comment_line(&self) -> String {
        format!(
            "# manifest {}\r\n",
            serde_json::to_string(self).expect("manifest serialization cannot fail")
        )
    }
}

struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn input(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }

    fn domain(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_DOMAIN,
            message: message.into(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Qdilog {
            gamma,
            gamma_rational,
            z,
            grid,
            output,
            seed,
        } => cmd_qdilog(gamma, gamma_rational, &z, grid.as_deref(), &output, seed),
        Command::Spectrum { params_file } => cmd_spectrum(&params_file),
        Command::Verify {
            suite,
            json,
            csv,
            seed,
        } => cmd_verify(&suite, &json, &csv, seed),
        Command::Weight {
            params_file,
            samples,
            output,
            seed,
        } => cmd_weight(&params_file, samples, &output, seed),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

/// "a", "a+bi" or "a-bi" -> Complex64.
fn parse_complex(s: &str) -> Result<Complex64, CliError> {
    let t = s.trim().trim_end_matches('i');
    let bare = s.trim();
    if !bare.ends_with('i') {
        return bare
            .parse::<f64>()
            .map(|re| Complex64::new(re, 0.0))
            .map_err(|_| CliError::input(format!("cannot parse complex number {s:?}")));
    }
    // split at the sign separating real and imaginary parts (skip a leading
    // sign and exponent signs)
    for (idx, ch) in t.char_indices().skip(1) {
        if (ch == '+' || ch == '-') && !matches!(&t[idx - 1..idx], "e" | "E") {
            let (re, im) = t.split_at(idx);
            let im = if im == "+" || im == "-" {
                format!("{im}1")
            } else {
                im.to_string()
            };
            return match (re.parse::<f64>(), im.parse::<f64>()) {
                (Ok(re), Ok(im)) => Ok(Complex64::new(re, im)),
                _ => Err(CliError::input(format!("cannot parse complex number {s:?}"))),
            };
        }
    }
    // pure imaginary
    let im = if t == "+" || t == "-" || t.is_empty() {
        format!("{t}1")
    } else {
        t.to_string()
    };
    im.parse::<f64>()
        .map(|im| Complex64::new(0.0, im))
        .map_err(|_| CliError::input(format!("cannot parse complex number {s:?}")))
}

/// "M/N" -> (M, N), coprime positive.
fn parse_rational(s: &str) -> Result<(u64, u64), CliError> {
    let (m, n) = s
        .split_once('/')
        .ok_or_else(|| CliError::input(format!("expected M/N, got {s:?}")))?;
    let m: u64 = m
        .trim()
        .parse()
        .map_err(|_| CliError::input(format!("bad numerator in {s:?}")))?;
    let n: u64 = n
        .trim()
        .parse()
        .map_err(|_| CliError::input(format!("bad denominator in {s:?}")))?;
    if m == 0 || n == 0 {
        return Err(CliError::input("M and N must be positive"));
    }
    Ok((m, n))
}

fn qdilog_context(
    gamma: Option<f64>,
    gamma_rational: Option<&str>,
) -> Result<QDilogContext, CliError> {
    let check = |g: f64| -> Result<(), CliError> {
        if g > 0.0 && g < std::f64::consts::PI {
            Ok(())
        } else {
            Err(CliError::domain(format!(
                "gamma = {g} outside the admissible strip range (0, pi)"
            )))
        }
    };
    match (gamma, gamma_rational) {
        (Some(g), None) => {
            check(g)?;
            Ok(QDilogContext::new(g))
        }
        (None, Some(r)) => {
            let (m, n) = parse_rational(r)?;
            check(m as f64 * std::f64::consts::PI / n as f64)?;
            Ok(QDilogContext::rational(m, n))
        }
        _ => Err(CliError::input(
            "exactly one of --gamma or --gamma-rational is required",
        )),
    }
}

fn write_or_print(output: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match output {
        Some(path) => fs::write(path, content)
            .map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn cmd_qdilog(
    gamma: Option<f64>,
    gamma_rational: Option<String>,
    z: &str,
    grid: Option<&str>,
    output: &Option<PathBuf>,
    seed: u64,
) -> Result<ExitCode, CliError> {
    let ctx = qdilog_context(gamma, gamma_rational.as_deref())?;
    let zv = parse_complex(z)?;
    let value = ctx
        .eval_qdilog(zv)
        .map_err(|e| CliError::domain(e.to_string()))?;
    println!(
        "Phi_gamma(z) at gamma = {}, z = {} + {}i:",
        ctx.gamma, zv.re, zv.im
    );
    println!("  re = {:+.15e}", value.re);
    println!("  im = {:+.15e}", value.im);
    println!("  |Phi| = {:.15e}", value.norm());

    if let Some(spec) = grid {
        let mut parameters = BTreeMap::new();
        parameters.insert("gamma".to_string(), ctx.gamma.to_string());
        parameters.insert("grid".to_string(), spec.to_string());
        let manifest = RunManifest::new("qdilog", parameters, seed, output, "CSV");
        let (re_axis, im_axis) = parse_grid(spec)?;
        let mut csv = manifest.comment_line();
        csv.push_str("re_z,im_z,re_phi,im_phi\r\n");
        for &im in &im_axis {
            for &re in &re_axis {
                let v = ctx
                    .eval_qdilog(Complex64::new(re, im))
                    .map_err(|e| CliError::domain(e.to_string()))?;
                csv.push_str(&format!("{re},{im},{},{}\r\n", v.re, v.im));
            }
        }
        write_or_print(output, &csv)?;
    }
    Ok(ExitCode::SUCCESS)
}

/// "re_min:re_max:n_re,im_min:im_max:n_im" -> the two sample axes.
fn parse_grid(spec: &str) -> Result<(Vec<f64>, Vec<f64>), CliError> {
    let axis = |part: &str| -> Result<Vec<f64>, CliError> {
        let fields: Vec<&str> = part.split(':').collect();
        if fields.len() != 3 {
            return Err(CliError::input(format!(
                "grid axis must be min:max:count, got {part:?}"
            )));
        }
        let lo: f64 = fields[0]
            .parse()
            .map_err(|_| CliError::input(format!("bad grid bound {:?}", fields[0])))?;
        let hi: f64 = fields[1]
            .parse()
            .map_err(|_| CliError::input(format!("bad grid bound {:?}", fields[1])))?;
        let n: usize = fields[2]
            .parse()
            .map_err(|_| CliError::input(format!("bad grid count {:?}", fields[2])))?;
        if n < 2 || !(hi > lo) {
            return Err(CliError::input("grid axis needs min < max and count >= 2"));
        }
        Ok((0..n)
            .map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
            .collect())
    };
    let (re, im) = spec
        .split_once(',')
        .ok_or_else(|| CliError::input("grid spec must be re_axis,im_axis"))?;
    Ok((axis(re)?, axis(im)?))
}

/// Parse a params-file into a built system. Malformed files are input
/// errors; range violations are mathematical-domain errors.
fn load_params(path: &PathBuf) -> Result<SystemParams, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
    let mut map: BTreeMap<String, String> = BTreeMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::input(format!("line {}: expected key = value", lineno + 1))
        })?;
        map.insert(key.trim().to_lowercase(), value.trim().to_string());
    }
    let case = match map
        .get("case")
        .ok_or_else(|| CliError::input("missing key: case"))?
        .to_lowercase()
        .as_str()
    {
        "v" => CaseTag::V,
        "vi" => CaseTag::VI,
        "vii" => CaseTag::VII,
        "viii" => CaseTag::VIII,
        other => return Err(CliError::input(format!("unknown case {other:?}"))),
    };
    let gamma = match (map.get("gamma"), map.get("gamma_rational")) {
        (Some(g), None) => GammaSpec::Value(
            g.parse()
                .map_err(|_| CliError::input(format!("bad gamma {g:?}")))?,
        ),
        (None, Some(r)) => {
            let (m, n) = parse_rational(r)?;
            GammaSpec::RationalPi { m, n }
        }
        _ => {
            return Err(CliError::input(
                "exactly one of gamma or gamma_rational is required",
            ))
        }
    };
    let float = |key: &str| -> Result<f64, CliError> {
        map.get(key)
            .ok_or_else(|| CliError::input(format!("missing key: {key}")))?
            .parse()
            .map_err(|_| CliError::input(format!("bad value for {key}")))
    };
    let k: i32 = match map.get("k") {
        Some(v) => v
            .parse()
            .map_err(|_| CliError::input(format!("bad value for K: {v:?}")))?,
        None => 1,
    };
    SystemParams::build(
        case,
        gamma,
        float("alpha1")?,
        float("alpha2")?,
        float("beta1")?,
        float("beta2")?,
        k,
    )
    .map_err(|e| match e {
        SystemError::RangeViolation(_)
        | SystemError::DegenerateParameters(_)
        | SystemError::EmptySpectrum => CliError::domain(e.to_string()),
        other => CliError::domain(other.to_string()),
    })
}

fn cmd_spectrum(params_file: &PathBuf) -> Result<ExitCode, CliError> {
    let sys = load_params(params_file)?;
    println!(
        "case {:?}  gamma = {:.12}  K = {}  n_max = {}",
        sys.case, sys.gamma, sys.k, sys.n_max
    );
    println!("{:>4}  {:>22}  {:>22}", "n", "E_n", "h_n");
    for n in 0..=sys.n_max {
        let e = sys.energy(n).map_err(|e| CliError::domain(e.to_string()))?;
        let h = sys
            .conjectured_norm(n)
            .map_err(|e| CliError::domain(e.to_string()))?;
        println!("{n:>4}  {e:>22.15e}  {:>22.15e}", h.re);
    }
    Ok(ExitCode::SUCCESS)
}

fn run_suite(suite: &str) -> Result<Vec<VerificationReport>, CliError> {
    let cfg = QuadratureConfig::default();
    Ok(match suite {
        "qdilog" => verify::suite_qdilog(),
        "polynomials" => verify::suite_polynomials(),
        "systems" => verify::suite_systems(),
        "oracle" => verify::suite_oracle(),
        "quadrature" => verify::suite_quadrature(&cfg),
        "limits" => verify::suite_limits(),
        "all" => verify::all_suites(&cfg),
        other => return Err(CliError::input(format!("unknown suite {other:?}"))),
    })
}

fn cmd_verify(
    suite: &str,
    json: &Option<PathBuf>,
    csv: &Option<PathBuf>,
    seed: u64,
) -> Result<ExitCode, CliError> {
    let reports = run_suite(suite)?;
    for r in &reports {
        println!(
            "[{}] {}  residual {:.3e}  tolerance {:.3e}",
            if r.passed { "PASS" } else { "FAIL" },
            r.check_id,
            r.residual,
            r.tolerance
        );
    }
    let passed = reports.iter().filter(|r| r.passed).count();
    println!("{passed}/{} checks passed", reports.len());

    let mut parameters = BTreeMap::new();
    parameters.insert("suite".to_string(), suite.to_string());
    if let Some(path) = json {
        let manifest = RunManifest::new("verify", parameters.clone(), seed, json, "JSON");
        let body = format!(
            "{{\n\"manifest\": {},\n\"reports\": {}\n}}\n",
            serde_json::to_string_pretty(&manifest).expect("manifest serialization cannot fail"),
            reports_to_json(&reports)
        );
        fs::write(path, body)
            .map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display())))?;
    }
    if let Some(path) = csv {
        let manifest = RunManifest::new("verify", parameters, seed, csv, "CSV");
        let body = format!("{}{}", manifest.comment_line(), reports_to_csv(&reports));
        fs::write(path, body)
            .map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display())))?;
    }
    if passed == reports.len() {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(EXIT_VERIFICATION))
    }
}

fn cmd_weight(
    params_file: &PathBuf,
    samples: usize,
    output: &Option<PathBuf>,
    seed: u64,
) -> Result<ExitCode, CliError> {
    if samples < 2 {
        return Err(CliError::input("need at least 2 samples"));
    }
    let sys = load_params(params_file)?;
    let (a, b) = verify::weight_window(&sys);
    let mut parameters = BTreeMap::new();
    parameters.insert("params_file".to_string(), params_file.display().to_string());
    parameters.insert("samples".to_string(), samples.to_string());
    parameters.insert("window".to_string(), format!("{a}..{b}"));
    let manifest = RunManifest::new("weight", parameters, seed, output, "CSV");
    let mut csv = manifest.comment_line();
    csv.push_str("x,phi0_sq");
    for n in 0..=sys.n_max {
        csv.push_str(&format!(",P{n}"));
    }
    csv.push_str("\r\n");
    for k in 0..samples {
        // keep strictly inside the half-line so the weight stays finite
        let t = (k as f64 + 0.5) / samples as f64;
        let x = a + (b - a) * t;
        let xc = Complex64::new(x, 0.0);
        let w = sys
            .groundstate(xc)
            .map_err(|e| CliError::domain(e.to_string()))?;
        csv.push_str(&format!("{x},{}", w.re * w.re));
        for n in 0..=sys.n_max {
            let p = sys
                .eigenpoly(n, sys.eta(xc))
                .map_err(|e| CliError::domain(e.to_string()))?;
            csv.push_str(&format!(",{}", p.re));
        }
        csv.push_str("\r\n");
    }
    write_or_print(output, &csv)?;
    Ok(ExitCode::SUCCESS)
}
