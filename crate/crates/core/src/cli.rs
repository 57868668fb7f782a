//! The `mop` command-line front end.
//!
//! Exit codes: 0 success, 1 verification failure, 2 invalid input,
//! 3 non-normal index or singular system.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rug::Rational;
use serde::Serialize;

use crate::analysis::{limit_check, orthogonality_check, zero_locate, ZeroReport};
use crate::constructors::{determinant_from_moments, determinant_tolerance, explicit, float_distance, moment_order, rodrigues, GUARD_BITS};
use crate::error::{Error, Result};
use crate::measures::{CharlierParams, FamilyParams, MeixnerParams, MomentTable};
use crate::numeric::{decimal_digits, format_float, parse_complex, parse_rational, Coeff, ExactScalar, PrecisionConfig, Scalar, DEFAULT_BITS, PRECISION_ENV};
use crate::poly::{monomial_to_pochhammer, MultiIndex, PolyT};
use crate::recurrence::{coeffs, recurrence_residual};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NON_NORMAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "mop", version, about = "Multiple orthogonal polynomials of Charlier and Meixner type on an r-star")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build P_n and report its coefficients in t = z^r.
    Poly(PolyArgs),
    /// Tabulate nearest-neighbor recurrence coefficients over a box of indices.
    Recurrence(RecurrenceArgs),
    /// Check orthogonality, pathway agreement and the recurrence.
    Verify(VerifyArgs),
    /// Locate the zeros of P_n in t and on the star.
    Zeros(ZerosArgs),
    /// Compare Meixner polynomials at gamma = a/(a+beta) with Charlier at a.
    Limit(LimitArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Charlier,
    Meixner,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Basis {
    #[value(name = "monomial_t")]
    MonomialT,
    Pochhammer,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PathwayArg {
    All,
    Explicit,
    Rodrigues,
    Determinant,
}

#[derive(Debug, Args)]
pub struct Common {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    /// Number of rays; inferred from --params when omitted.
    #[arg(long)]
    pub r: Option<usize>,
    /// Per-ray parameters (a for Charlier, c for Meixner): a JSON array of
    /// strings, numbers or [re, im] pairs, or a comma list such as `1/2,1+2i`.
    #[arg(long, allow_hyphen_values = true)]
    pub params: String,
    /// Meixner beta.
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<String>,
    #[arg(long = "precision-bits", env = PRECISION_ENV, default_value_t = DEFAULT_BITS)]
    pub precision_bits: u32,
    /// Tolerance for certified series truncation.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Write output here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PolyArgs {
    #[command(flatten)]
    pub common: Common,
    /// Multi-index, e.g. `1,1` or `[1,1]`.
    #[arg(long)]
    pub n: String,
    #[arg(long, value_enum, default_value = "monomial_t")]
    pub basis: Basis,
    /// Pathway whose coefficients are reported; `all` reports the explicit
    /// form after cross-checking the other two.
    #[arg(long, value_enum, default_value = "all")]
    pub pathway: PathwayArg,
}

#[derive(Debug, Args)]
pub struct RecurrenceArgs {
    #[command(flatten)]
    pub common: Common,
    /// Upper corner of the index box (inclusive), e.g. `2,2`.
    #[arg(long = "box", conflicts_with = "n")]
    pub upper: Option<String>,
    /// A single multi-index.
    #[arg(long)]
    pub n: Option<String>,
    /// Raised leg; all legs when omitted.
    #[arg(long)]
    pub leg: Option<usize>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: Common,
    /// A single multi-index; defaults to every index with |n| <= 3.
    #[arg(long, conflicts_with = "upper")]
    pub n: Option<String>,
    #[arg(long = "box")]
    pub upper: Option<String>,
    /// Add 1 to the constant coefficient before the orthogonality check.
    #[arg(long)]
    pub perturb: bool,
}

#[derive(Debug, Args)]
pub struct ZerosArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub n: String,
}

#[derive(Debug, Args)]
pub struct LimitArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub n: String,
    /// Increasing beta grid; defaults to 2^4 .. 2^12.
    #[arg(long, allow_hyphen_values = true)]
    pub betas: Option<String>,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli.command) {
        Ok((text, code)) => {
            let target = match &cli.command {
                Command::Poly(a) => &a.common.out,
                Command::Recurrence(a) => &a.common.out,
                Command::Verify(a) => &a.common.out,
                Command::Zeros(a) => &a.common.out,
                Command::Limit(a) => &a.common.out,
            };
            let written = match target {
                Some(path) => fs::write(path, &text).map_err(|e| e.to_string()),
                None => out.write_all(text.as_bytes()).map_err(|e| e.to_string()),
            };
            if let Err(e) = written {
                let _ = writeln!(err, "error: cannot write output: {e}");
                return EXIT_INPUT;
            }
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NonNormalIndex { .. } | Error::DegenerateDenominator { .. } => EXIT_NON_NORMAL,
        Error::NonConvergent { .. } => EXIT_VERIFY,
        _ => EXIT_INPUT,
    }
}

struct Job {
    params: FamilyParams<ExactScalar>,
    config: PrecisionConfig,
    /// Series truncation tolerance.
    tol: f64,
    format: Format,
}

impl Job {
    fn bits(&self) -> u32 {
        self.config.bits()
    }

    fn digits(&self) -> usize {
        decimal_digits(self.bits())
    }

    fn scalar_params(&self) -> FamilyParams<Scalar> {
        self.params.to_scalar(self.bits())
    }

    fn header(&self) -> Header {
        let (beta, ray) = match &self.params {
            FamilyParams::Charlier(p) => (None, p.a()),
            FamilyParams::Meixner(p) => (Some(self.pair(p.beta())), p.c()),
        };
        Header {
            family: self.params.family().name(),
            r: self.params.r(),
            beta,
            params: ray.iter().map(|v| self.pair(v)).collect(),
        }
    }

    fn pair<S: Coeff>(&self, v: &S) -> [String; 2] {
        let s = v.to_scalar(self.bits());
        [format_float(s.re(), self.digits()), format_float(s.im(), self.digits())]
    }

    fn check_index(&self, n: &MultiIndex) -> Result<()> {
        if n.r() != self.params.r() {
            return Err(Error::DimensionMismatch { expected: self.params.r(), got: n.r() });
        }
        Ok(())
    }
}

/// Smallest tolerance still representable with headroom in `f64`.
fn floor_tol(t: f64) -> f64 {
    t.max(1e-300)
}

/// Moment accuracy needed by the determinant solve at `bits`.
pub fn moment_tolerance(bits: u32) -> f64 {
    floor_tol(2f64.powi(-((bits + GUARD_BITS) as i32)))
}

/// Orthogonality pass threshold `10^-(0.2 bits)`.
pub fn orthogonality_threshold(bits: u32) -> f64 {
    floor_tol(10f64.powf(-0.2 * bits as f64))
}

fn default_series_tol(bits: u32) -> f64 {
    floor_tol(2f64.powf(-0.75 * bits as f64))
}

fn parse_value(v: &serde_json::Value) -> Result<ExactScalar> {
    let bad = |reason: &str| Error::Parse {
        input: v.to_string(),
        reason: reason.to_string(),
    };
    let real = |x: &serde_json::Value| -> Result<Rational> {
        match x {
            serde_json::Value::String(s) => parse_rational(s),
            serde_json::Value::Number(num) => parse_rational(&num.to_string()),
            _ => Err(bad("expected a number or decimal string")),
        }
    };
    match v {
        serde_json::Value::String(s) => parse_complex(s),
        serde_json::Value::Number(_) => Ok(ExactScalar::real(real(v)?)),
        serde_json::Value::Array(pair) if pair.len() == 2 => Ok(ExactScalar::new(real(&pair[0])?, real(&pair[1])?)),
        _ => Err(bad("expected a string, number or [re, im] pair")),
    }
}

/// JSON array or comma-separated list of complex values.
pub fn parse_values(input: &str) -> Result<Vec<ExactScalar>> {
    let trimmed = input.trim();
    let values = if trimmed.starts_with('[') {
        let json: serde_json::Value = serde_json::from_str(trimmed).map_err(|e| Error::Parse {
            input: input.to_string(),
            reason: e.to_string(),
        })?;
        match json {
            serde_json::Value::Array(items) => items.iter().map(parse_value).collect::<Result<Vec<_>>>()?,
            _ => unreachable!("input starts with '['"),
        }
    } else if trimmed.is_empty() {
        Vec::new()
    } else {
        trimmed.split(',').map(parse_complex).collect::<Result<Vec<_>>>()?
    };
    if values.is_empty() {
        return Err(Error::Parse {
            input: input.to_string(),
            reason: "no values".into(),
        });
    }
    Ok(values)
}

pub fn parse_index(input: &str) -> Result<MultiIndex> {
    let body = input.trim().trim_start_matches('[').trim_end_matches(']');
    let entries = if body.trim().is_empty() {
        Vec::new()
    } else {
        body.split(',')
            .map(|s| {
                s.trim().parse::<u32>().map_err(|e| Error::Parse {
                    input: input.to_string(),
                    reason: e.to_string(),
                })
            })
            .collect::<Result<Vec<_>>>()?
    };
    MultiIndex::new(entries)
}

fn job(common: &Common) -> Result<Job> {
    let config = PrecisionConfig::new(common.precision_bits)?;
    let ray = parse_values(&common.params)?;
    if let Some(r) = common.r {
        if r != ray.len() {
            return Err(Error::DimensionMismatch { expected: r, got: ray.len() });
        }
    }
    let params = match common.family {
        FamilyArg::Charlier => {
            if common.beta.is_some() {
                return Err(Error::Parameter("--beta applies to the Meixner family only".into()));
            }
            FamilyParams::Charlier(CharlierParams::new(ray)?)
        }
        FamilyArg::Meixner => {
            let beta = common
                .beta
                .as_deref()
                .ok_or_else(|| Error::Parameter("Meixner needs --beta".into()))?;
            FamilyParams::Meixner(MeixnerParams::new(parse_complex(beta)?, ray)?)
        }
    };
    let tol = match common.tol {
        Some(t) if t > 0.0 && t.is_finite() => t,
        Some(t) => return Err(Error::Parameter(format!("tolerance must be positive, got {t}"))),
        None => default_series_tol(config.bits()),
    };
    Ok(Job {
        params,
        config,
        tol,
        format: common.format,
    })
}

fn json_only(job: &Job) -> Result<()> {
    if job.format == Format::Csv {
        return Err(Error::Parameter("CSV output is available for recurrence tables only".into()));
    }
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable report");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct Header {
    family: &'static str,
    r: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    beta: Option<[String; 2]>,
    params: Vec<[String; 2]>,
}

fn execute(command: &Command) -> Result<(String, i32)> {
    match command {
        Command::Poly(a) => cmd_poly(a),
        Command::Recurrence(a) => cmd_recurrence(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Zeros(a) => cmd_zeros(a),
        Command::Limit(a) => cmd_limit(a),
    }
}

#[derive(Serialize)]
struct PolyOutput {
    #[serde(flatten)]
    header: Header,
    multi_index: Vec<u32>,
    basis: &'static str,
    coefficients: Vec<[String; 2]>,
    pathway: &'static str,
    agreement_max_delta: String,
    determinant_condition: String,
}

fn cmd_poly(args: &PolyArgs) -> Result<(String, i32)> {
    let job = job(&args.common)?;
    json_only(&job)?;
    let n = parse_index(&args.n)?;
    job.check_index(&n)?;
    let exact = explicit(&job.params, &n)?;
    let rod = rodrigues(&job.params, &n)?;
    let table = MomentTable::build(&job.params.to_scalar(job.bits() + GUARD_BITS), moment_order(&n), moment_tolerance(job.bits()))?;
    let det = determinant_from_moments(&table, &n, &job.config)?;
    let exact_delta = float_distance(&(&exact - &rod), &PolyT::zero(), job.bits());
    let det_delta = float_distance(&exact, &det.polynomial, job.bits());
    let chosen: PolyT<Scalar> = match args.pathway {
        PathwayArg::All | PathwayArg::Explicit => exact.to_scalar(job.bits()),
        PathwayArg::Rodrigues => rod.to_scalar(job.bits()),
        PathwayArg::Determinant => det.polynomial.clone(),
    };
    let (basis, coefficients) = match args.basis {
        Basis::MonomialT => ("monomial_t", chosen.coeffs().iter().map(|c| job.pair(c)).collect()),
        Basis::Pochhammer => {
            let coeffs: Vec<[String; 2]> = match args.pathway {
                PathwayArg::All | PathwayArg::Explicit => monomial_to_pochhammer(&exact).coeffs().iter().map(|c| job.pair(c)).collect(),
                PathwayArg::Rodrigues => monomial_to_pochhammer(&rod).coeffs().iter().map(|c| job.pair(c)).collect(),
                PathwayArg::Determinant => monomial_to_pochhammer(&chosen).coeffs().iter().map(|c| job.pair(c)).collect(),
            };
            ("pochhammer", coeffs)
        }
    };
    let pathway = match args.pathway {
        PathwayArg::All => "all",
        PathwayArg::Explicit => "explicit",
        PathwayArg::Rodrigues => "rodrigues",
        PathwayArg::Determinant => "determinant",
    };
    let output = PolyOutput {
        header: job.header(),
        multi_index: n.entries().to_vec(),
        basis,
        coefficients,
        pathway,
        agreement_max_delta: format!("{:e}", exact_delta.max(det_delta)),
        determinant_condition: format!("{:e}", det.condition_estimate.unwrap_or(f64::NAN)),
    };
    Ok((to_json(&output), EXIT_OK))
}

#[derive(Serialize)]
struct RecurrenceOutputRow {
    n: Vec<u32>,
    k: usize,
    b: [String; 2],
    d: Vec<[String; 2]>,
    residual_max_coeff: String,
}

#[derive(Serialize)]
struct RecurrenceOutput {
    #[serde(flatten)]
    header: Header,
    rows: Vec<RecurrenceOutputRow>,
}

fn cmd_recurrence(args: &RecurrenceArgs) -> Result<(String, i32)> {
    let job = job(&args.common)?;
    let indices = match (&args.upper, &args.n) {
        (Some(b), None) => {
            let upper = parse_index(b)?;
            job.check_index(&upper)?;
            MultiIndex::boxed(upper.entries())
        }
        (None, Some(n)) => {
            let n = parse_index(n)?;
            job.check_index(&n)?;
            vec![n]
        }
        _ => return Err(Error::Parameter("recurrence needs --box or --n".into())),
    };
    let r = job.params.r();
    let legs: Vec<usize> = match args.leg {
        Some(k) if k < r => vec![k],
        Some(k) => return Err(Error::Parameter(format!("leg {k} out of range for r = {r}"))),
        None => (0..r).collect(),
    };
    let mut rows = Vec::new();
    for n in &indices {
        for &k in &legs {
            let row = coeffs(&job.params, n, k)?;
            let residual = recurrence_residual(&job.params, n, k)?;
            rows.push(RecurrenceOutputRow {
                n: n.entries().to_vec(),
                k,
                b: job.pair(&row.b),
                d: row.d.iter().map(|v| job.pair(v)).collect(),
                residual_max_coeff: format_exact_magnitude(&residual, &job),
            });
        }
    }
    let text = match job.format {
        Format::Json => to_json(&RecurrenceOutput { header: job.header(), rows }),
        Format::Csv => {
            let mut header: Vec<String> = (0..r).map(|j| format!("n{j}")).collect();
            header.extend(["k".to_string(), "b_re".into(), "b_im".into()]);
            for j in 0..r {
                header.push(format!("d{j}_re"));
                header.push(format!("d{j}_im"));
            }
            header.push("residual_max_coeff".into());
            let mut text = header.join(",");
            text.push('\n');
            for row in rows {
                let mut cells: Vec<String> = row.n.iter().map(u32::to_string).collect();
                cells.push(row.k.to_string());
                cells.extend(row.b);
                for d in row.d {
                    cells.extend(d);
                }
                cells.push(row.residual_max_coeff);
                text.push_str(&cells.join(","));
                text.push('\n');
            }
            text
        }
    };
    Ok((text, EXIT_OK))
}

/// Largest coefficient modulus, printed exactly as `0` when it vanishes.
fn format_exact_magnitude(p: &PolyT<ExactScalar>, job: &Job) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let worst = p
        .coeffs()
        .iter()
        .map(|c| c.to_scalar(job.bits()).abs())
        .fold(rug::Float::new(job.bits()), |a, b| a.max(&b));
    format_float(&worst, job.digits())
}

#[derive(Serialize)]
struct CheckSummary {
    max_residual: String,
    threshold: String,
    pass: bool,
}

#[derive(Serialize)]
struct PathwaySummary {
    max_delta: String,
    exact_agree: bool,
    pass: bool,
}

#[derive(Serialize)]
struct VerifyOutput {
    #[serde(flatten)]
    header: Header,
    indices_checked: usize,
    perturbed: bool,
    orthogonality: CheckSummary,
    pathways: PathwaySummary,
    recurrence: CheckSummary,
    pass: bool,
}

fn cmd_verify(args: &VerifyArgs) -> Result<(String, i32)> {
    let job = job(&args.common)?;
    json_only(&job)?;
    let r = job.params.r();
    let indices = match (&args.n, &args.upper) {
        (Some(n), _) => {
            let n = parse_index(n)?;
            job.check_index(&n)?;
            vec![n]
        }
        (None, Some(b)) => {
            let upper = parse_index(b)?;
            job.check_index(&upper)?;
            MultiIndex::boxed(upper.entries())
        }
        (None, None) => MultiIndex::all_up_to(r, 3),
    };
    let bits = job.bits();
    let scalar_params = job.scalar_params();
    let max_order = indices.iter().map(moment_order).max().unwrap_or(0);
    let table = MomentTable::build(&job.params.to_scalar(bits + GUARD_BITS), max_order, moment_tolerance(bits))?;
    let threshold = orthogonality_threshold(bits);

    let mut orth_max = 0.0f64;
    let mut orth_pass = true;
    let mut path_max = 0.0f64;
    let mut exact_agree = true;
    let mut path_pass = true;
    let mut rec_max = 0.0f64;
    for n in &indices {
        let p = explicit(&job.params, n)?;
        let q = rodrigues(&job.params, n)?;
        exact_agree &= p == q;
        let det = determinant_from_moments(&table, n, &job.config)?;
        let p_float = p.to_scalar(bits);
        let delta = float_distance(&p, &det.polynomial, bits);
        path_max = path_max.max(delta);
        path_pass &= delta <= determinant_tolerance(det.condition_estimate.unwrap_or(f64::INFINITY), bits);

        let tested = if args.perturb && n.total() > 0 {
            &p_float + &PolyT::one()
        } else {
            p_float
        };
        let orth = orthogonality_check(&scalar_params, n, &tested, job.tol)?;
        orth_max = orth_max.max(orth.max_certified());
        orth_pass &= orth.passes(threshold);

        for k in 0..r {
            rec_max = rec_max.max(recurrence_residual(&job.params, n, k)?.max_abs_coeff());
        }
    }
    let rec_pass = rec_max == 0.0;
    path_pass &= exact_agree;
    let pass = orth_pass && path_pass && rec_pass;
    let output = VerifyOutput {
        header: job.header(),
        indices_checked: indices.len(),
        perturbed: args.perturb,
        orthogonality: CheckSummary {
            max_residual: format!("{orth_max:e}"),
            threshold: format!("{threshold:e}"),
            pass: orth_pass,
        },
        pathways: PathwaySummary {
            max_delta: format!("{path_max:e}"),
            exact_agree,
            pass: path_pass,
        },
        recurrence: CheckSummary {
            max_residual: format!("{rec_max:e}"),
            threshold: "0".into(),
            pass: rec_pass,
        },
        pass,
    };
    Ok((to_json(&output), if pass { EXIT_OK } else { EXIT_VERIFY }))
}

#[derive(Serialize)]
struct RootOutput {
    value: [String; 2],
    simple: bool,
}

#[derive(Serialize)]
struct StarZeroOutput {
    ray: usize,
    radius: String,
}

#[derive(Serialize)]
struct ZerosOutput {
    #[serde(flatten)]
    header: Header,
    multi_index: Vec<u32>,
    degree: usize,
    classified: bool,
    all_positive_real_simple: bool,
    t_roots: Vec<RootOutput>,
    star_zeros: Vec<StarZeroOutput>,
}

fn cmd_zeros(args: &ZerosArgs) -> Result<(String, i32)> {
    let job = job(&args.common)?;
    json_only(&job)?;
    let n = parse_index(&args.n)?;
    job.check_index(&n)?;
    if n.total() == 0 {
        return Err(Error::Parameter("P_0 = 1 has no zeros".into()));
    }
    let p = explicit(&job.params, &n)?.to_scalar(job.bits());
    let (report, classified): (ZeroReport, bool) = match zero_locate(&p, true, &job.config) {
        Ok(report) => (report, true),
        Err(Error::ClassificationUnavailable(report)) => (*report, false),
        Err(e) => return Err(e),
    };
    let report = report.with_star_zeros(job.params.r());
    let output = ZerosOutput {
        header: job.header(),
        multi_index: n.entries().to_vec(),
        degree: n.total() as usize,
        classified,
        all_positive_real_simple: report.all_positive_real_simple,
        t_roots: report
            .t_roots
            .iter()
            .map(|root| RootOutput {
                value: job.pair(&root.value),
                simple: root.simple,
            })
            .collect(),
        star_zeros: report
            .star_zeros
            .unwrap_or_default()
            .into_iter()
            .map(|z| StarZeroOutput {
                ray: z.ray,
                radius: format_float(&z.radius, job.digits()),
            })
            .collect(),
    };
    Ok((to_json(&output), EXIT_OK))
}

#[derive(Serialize)]
struct LimitOutput {
    #[serde(flatten)]
    header: Header,
    multi_index: Vec<u32>,
    beta_values: Vec<String>,
    coefficient_distances: Vec<String>,
    fitted_rate: Option<String>,
}

fn cmd_limit(args: &LimitArgs) -> Result<(String, i32)> {
    let job = job(&args.common)?;
    json_only(&job)?;
    let a = match &job.params {
        FamilyParams::Charlier(a) => a.clone(),
        FamilyParams::Meixner(_) => {
            return Err(Error::Parameter("limit takes Charlier parameters (--family charlier)".into()))
        }
    };
    let n = parse_index(&args.n)?;
    job.check_index(&n)?;
    let betas = match &args.betas {
        Some(s) => parse_values(s)?,
        None => (4..=12).map(|e| ExactScalar::from_i64(1 << e)).collect(),
    };
    let report = limit_check(&a, &n, &betas)?;
    let output = LimitOutput {
        header: job.header(),
        multi_index: n.entries().to_vec(),
        beta_values: betas.iter().map(|b| job.pair(b)[0].clone()).collect(),
        coefficient_distances: report.coefficient_distances.iter().map(|d| format!("{d:e}")).collect(),
        fitted_rate: report.fitted_rate.map(|v| format!("{v}")),
    };
    Ok((to_json(&output), EXIT_OK))
}
