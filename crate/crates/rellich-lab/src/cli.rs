//! Command-line front end: constants tables, verification runs, sharpness
//! sweeps, oracle comparisons, Schmincke ranges, and log-refinement checks,
//! emitted as JSON or CSV on standard output.
//!
//! Exit codes: 0 success/inequality holds, 1 inequality violated, 2 usage or
//! domain error, 3 unsupported case, 4 numerical failure.

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::constants::{self, Params, SchminckeCase, SchminckeVariant};
use crate::functionals::{
    sharpness_sweep, verify, FreeParams, InequalityReport, ModeFunction,
    MultiModeFunction, QuadratureConfig,
};
use crate::oracle::{discretize, min_quotient, Quotient, RadialGrid};
use crate::profiles::{random_profile, smooth_bump, trial_radial, RadialProfile, TrialFunction};
use crate::spectra::{eigenvalue, iterated_exp, ModeIndex};
use crate::{Error, Result};

#[derive(Parser)]
#[command(name = "rellich-lab", version, about = "Weighted Rellich/Hardy-type inequality laboratory")]
pub struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Target {
    A,
    C,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum QuotientArg {
    Rellich,
    #[value(name = "hardy-rellich")]
    HardyRellich,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    Sec2,
    Sec3,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form sharp constants for the chosen (n, gamma)
    Constants {
        #[arg(long)]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        gamma: f64,
        /// comma list of hardy, rellich, hardy-rellich, alpha:<j>
        #[arg(long)]
        which: Option<String>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Evaluate both sides of an inequality on a concrete test function
    Verify {
        #[arg(long)]
        ineq: String,
        #[arg(long)]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        gamma: f64,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        beta: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        tau: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        s: Option<f64>,
        #[arg(long = "N")]
        log_depth: Option<u32>,
        #[arg(long, allow_hyphen_values = true)]
        eta: Option<f64>,
        /// profile spec: bump:a,b | poly:seed,degree,a,b | trial:eps
        #[arg(long)]
        profile: String,
        /// mode index j, or j,j2 together with --profile2
        #[arg(long)]
        mode: String,
        #[arg(long)]
        profile2: Option<String>,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Rayleigh quotients of the near-extremal trial family along eps -> 0
    Sharpness {
        #[arg(long)]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        gamma: f64,
        #[arg(long)]
        j0: u32,
        #[arg(long = "R", default_value_t = 1.0)]
        radius: f64,
        #[arg(long = "eps-start", default_value_t = 0.5)]
        eps_start: f64,
        #[arg(long = "eps-steps", default_value_t = 10)]
        eps_steps: u32,
        #[arg(long, value_enum)]
        target: Option<Target>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Discretized minimal Rayleigh quotient versus the closed form
    Oracle {
        #[arg(long)]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        gamma: f64,
        #[arg(long)]
        j: u32,
        #[arg(long, value_enum)]
        quotient: QuotientArg,
        #[arg(long, default_value_t = 1e-3)]
        rmin: f64,
        #[arg(long, default_value_t = 1e3)]
        rmax: f64,
        #[arg(long, default_value_t = 1500)]
        points: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Admissible parameter range of the Schmincke-type inequalities
    Schmincke {
        #[arg(long)]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        gamma: f64,
        #[arg(long, value_enum)]
        variant: VariantArg,
        #[arg(long, allow_hyphen_values = true)]
        s: Option<f64>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Iterated-logarithm refined inequalities on a ball
    Logrefine {
        #[arg(long)]
        ineq: String,
        #[arg(long)]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        gamma: f64,
        #[arg(long = "N", default_value_t = 1)]
        log_depth: u32,
        #[arg(long = "R", default_value_t = 1.0)]
        radius: f64,
        /// "auto" picks the boundary value e_N * R
        #[arg(long, default_value = "auto")]
        eta: String,
        #[arg(long)]
        profile: String,
        #[arg(long)]
        mode: u32,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}

#[derive(Serialize)]
struct Envelope<I: Serialize, R: Serialize> {
    command: &'static str,
    inputs: I,
    results: R,
    versions: String,
    seed: Option<u64>,
}

fn versions() -> String {
    format!("{} {}", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION"))
}

fn emit<I: Serialize, R: Serialize>(env: &Envelope<I, R>, format: Format) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(env).expect("serializable")),
        Format::Csv => {
            let v = serde_json::to_value(env).expect("serializable");
            let mut rows = Vec::new();
            flatten("", &v, &mut rows);
            for (k, val) in rows {
                println!("{k},{val}");
            }
        }
    }
}

fn flatten(prefix: &str, v: &serde_json::Value, out: &mut Vec<(String, String)>) {
    let key = |s: &str| {
        if prefix.is_empty() {
            s.to_string()
        } else {
            format!("{prefix}.{s}")
        }
    };
    match v {
        serde_json::Value::Object(map) => {
            for (k, val) in map {
                flatten(&key(k), val, out);
            }
        }
        serde_json::Value::Array(items) => {
            for (i, val) in items.iter().enumerate() {
                flatten(&key(&i.to_string()), val, out);
            }
        }
        serde_json::Value::Number(x) => {
            let s = if let Some(f) = x.as_f64() {
                if x.is_i64() || x.is_u64() {
                    x.to_string()
                } else {
                    format!("{f:.16e}")
                }
            } else {
                x.to_string()
            };
            out.push((prefix.to_string(), s));
        }
        other => out.push((prefix.to_string(), other.to_string().trim_matches('"').to_string())),
    }
}

/// Parses the profile mini-language; returns the profile and, for seeded
/// families, the seed to echo in the envelope.
fn parse_profile(
    spec: &str,
    p: Params,
    j: ModeIndex,
    radius: f64,
) -> Result<(RadialProfile, Option<u64>)> {
    let (kind, rest) = spec
        .split_once(':')
        .ok_or_else(|| Error::Domain(format!("malformed profile spec {spec:?}")))?;
    let parts: Vec<&str> = rest.split(',').collect();
    let bad = || Error::Domain(format!("malformed profile spec {spec:?}"));
    match kind {
        "bump" => {
            if parts.len() != 2 {
                return Err(bad());
            }
            let a: f64 = parts[0].parse().map_err(|_| bad())?;
            let b: f64 = parts[1].parse().map_err(|_| bad())?;
            Ok((smooth_bump(a, b)?, None))
        }
        "poly" => {
            if parts.len() != 4 {
                return Err(bad());
            }
            let seed: u64 = parts[0].parse().map_err(|_| bad())?;
            let degree: u32 = parts[1].parse().map_err(|_| bad())?;
            let a: f64 = parts[2].parse().map_err(|_| bad())?;
            let b: f64 = parts[3].parse().map_err(|_| bad())?;
            Ok((random_profile(seed, a, b, degree)?, Some(seed)))
        }
        "trial" => {
            if parts.len() != 1 {
                return Err(bad());
            }
            let eps: f64 = parts[0].parse().map_err(|_| bad())?;
            let t = TrialFunction::new(p, j, eps, radius)?;
            Ok((trial_radial(t)?, None))
        }
        _ => Err(bad()),
    }
}

fn parse_modes(mode: &str) -> Result<Vec<u32>> {
    mode.split(',')
        .map(|m| {
            m.trim()
                .parse()
                .map_err(|_| Error::Domain(format!("bad mode index {m:?}")))
        })
        .collect()
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Unsupported(_) => 3,
        Error::Numerical(_) | Error::QuadratureConvergence { .. } => 4,
        _ => 2,
    }
}

#[derive(Serialize)]
struct MinOut {
    value: f64,
    argmin_j: u32,
    scan_bound_j: u32,
}

impl From<constants::MinimizerResult> for MinOut {
    fn from(m: constants::MinimizerResult) -> Self {
        Self {
            value: m.value,
            argmin_j: m.argmin_j.0,
            scan_bound_j: m.scan_bound.0,
        }
    }
}

pub fn run() -> i32 {
    let cli = Cli::parse();
    if let Some(threads) = std::env::var_os("RELLICH_LAB_THREADS") {
        match threads.to_str().and_then(|s| s.parse::<usize>().ok()) {
            Some(t) if t >= 1 => {} // accepted; all commands are single-threaded anyway
            _ => {
                eprintln!("RELLICH_LAB_THREADS must be a positive integer");
                return 2;
            }
        }
    }
    match dispatch(cli.cmd) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(cmd: Command) -> Result<i32> {
    match cmd {
        Command::Constants { n, gamma, which, format } => cmd_constants(n, gamma, which, format),
        Command::Verify {
            ineq,
            n,
            gamma,
            alpha,
            beta,
            tau,
            s,
            log_depth,
            eta,
            profile,
            mode,
            profile2,
            tol,
            format,
        } => cmd_verify(
            ineq, n, gamma, alpha, beta, tau, s, log_depth, eta, profile, mode, profile2, tol,
            format,
        ),
        Command::Sharpness {
            n,
            gamma,
            j0,
            radius,
            eps_start,
            eps_steps,
            target,
            format,
        } => cmd_sharpness(n, gamma, j0, radius, eps_start, eps_steps, target, format),
        Command::Oracle {
            n,
            gamma,
            j,
            quotient,
            rmin,
            rmax,
            points,
            format,
        } => cmd_oracle(n, gamma, j, quotient, rmin, rmax, points, format),
        Command::Schmincke { n, gamma, variant, s, format } => {
            cmd_schmincke(n, gamma, variant, s, format)
        }
        Command::Logrefine {
            ineq,
            n,
            gamma,
            log_depth,
            radius,
            eta,
            profile,
            mode,
            tol,
            format,
        } => cmd_logrefine(ineq, n, gamma, log_depth, radius, eta, profile, mode, tol, format),
    }
}

#[derive(Serialize)]
struct ConstantsInputs {
    n: u32,
    gamma: f64,
    which: String,
}

#[derive(Serialize, Default)]
struct ConstantsResults {
    #[serde(skip_serializing_if = "Option::is_none")]
    hardy: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rellich: Option<MinOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    hardy_rellich: Option<MinOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha: Option<AlphaOut>,
}

#[derive(Serialize)]
struct AlphaOut {
    j: u32,
    value: f64,
}

fn cmd_constants(n: u32, gamma: f64, which: Option<String>, format: Format) -> Result<i32> {
    let p = Params::new(n, gamma)?;
    let which = which.unwrap_or_else(|| "hardy,rellich,hardy-rellich".to_string());
    let mut results = ConstantsResults::default();
    for token in which.split(',') {
        match token.trim() {
            "hardy" => results.hardy = Some(constants::hardy_constant(p)),
            "rellich" => results.rellich = Some(constants::rellich_constant(p).into()),
            "hardy-rellich" => {
                results.hardy_rellich = Some(constants::hardy_rellich_constant(p).into())
            }
            other => {
                if let Some(j) = other.strip_prefix("alpha:") {
                    let j: u32 = j
                        .parse()
                        .map_err(|_| Error::Domain(format!("bad mode index in {other:?}")))?;
                    results.alpha = Some(AlphaOut {
                        j,
                        value: constants::hardy_rellich_alpha(p, ModeIndex(j)),
                    });
                } else {
                    return Err(Error::Domain(format!("unknown constant selector {other:?}")));
                }
            }
        }
    }
    emit(
        &Envelope {
            command: "constants",
            inputs: ConstantsInputs { n, gamma, which },
            results,
            versions: versions(),
            seed: None,
        },
        format,
    );
    Ok(0)
}

#[derive(Serialize)]
struct VerifyInputs {
    ineq: String,
    n: u32,
    gamma: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    beta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tau: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    log_depth: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    eta: Option<f64>,
    profile: String,
    mode: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    profile2: Option<String>,
    tol: f64,
}

#[derive(Serialize)]
struct ReportOut {
    ineq_id: String,
    lhs: f64,
    rhs: f64,
    margin: f64,
    ratio: Option<f64>,
    constant_used: f64,
    preconditions_met: bool,
    quadrature_tol: f64,
    holds: bool,
}

fn report_out(rep: &InequalityReport, tol: f64) -> ReportOut {
    ReportOut {
        ineq_id: rep.ineq_id.clone(),
        lhs: rep.lhs,
        rhs: rep.rhs,
        margin: rep.margin,
        ratio: rep.ratio,
        constant_used: rep.constant_used,
        preconditions_met: rep.preconditions_met,
        quadrature_tol: rep.quadrature_tol,
        holds: rep.margin >= -tol * rep.lhs.abs(),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    ineq: String,
    n: u32,
    gamma: f64,
    alpha: Option<f64>,
    beta: Option<f64>,
    tau: Option<f64>,
    s: Option<f64>,
    log_depth: Option<u32>,
    eta: Option<f64>,
    profile: String,
    mode: String,
    profile2: Option<String>,
    tol: f64,
    format: Format,
) -> Result<i32> {
    let p = Params::new(n, gamma)?;
    let modes = parse_modes(&mode)?;
    let specs: Vec<&String> = std::iter::once(&profile).chain(profile2.iter()).collect();
    if modes.len() != specs.len() {
        return Err(Error::Domain(format!(
            "{} mode indices but {} profiles",
            modes.len(),
            specs.len()
        )));
    }
    let mut seed = None;
    let mut terms = Vec::new();
    for (spec, &j) in specs.iter().zip(&modes) {
        let (prof, sd) = parse_profile(spec, p, ModeIndex(j), 1.0)?;
        seed = seed.or(sd);
        terms.push(ModeFunction {
            j: ModeIndex(j),
            profile: prof,
        });
    }
    let f = MultiModeFunction::new(terms)?;
    let free = FreeParams {
        alpha,
        beta,
        tau,
        s,
        log_depth,
        eta,
        radius: if matches!(ineq.as_str(), "3.48a" | "4.31") {
            Some(1.0)
        } else {
            None
        },
        abs_gamma_variant: false,
    };
    let rep = verify(&ineq, p, &free, &f, &QuadratureConfig::default())?;
    let out = report_out(&rep, tol);
    let holds = out.holds;
    emit(
        &Envelope {
            command: "verify",
            inputs: VerifyInputs {
                ineq,
                n,
                gamma,
                alpha,
                beta,
                tau,
                s,
                log_depth,
                eta,
                profile,
                mode,
                profile2,
                tol,
            },
            results: out,
            versions: versions(),
            seed,
        },
        format,
    );
    Ok(if holds { 0 } else { 1 })
}

#[derive(Serialize)]
struct SharpnessInputs {
    n: u32,
    gamma: f64,
    j0: u32,
    #[serde(rename = "R")]
    radius: f64,
    eps_start: f64,
    eps_steps: u32,
    target: Option<String>,
}

#[derive(Serialize)]
struct SharpnessRow {
    epsilon: f64,
    hardy_rellich_q: f64,
    rellich_q: f64,
}

#[derive(Serialize)]
struct SharpnessResults {
    table: Vec<SharpnessRow>,
    limit_hardy_rellich: f64,
    limit_rellich: f64,
    /// gap of the final row against the targeted limit: relative when the
    /// limit is positive, absolute when it vanishes
    #[serde(skip_serializing_if = "Option::is_none")]
    final_gap: Option<f64>,
}

#[allow(clippy::too_many_arguments)]
fn cmd_sharpness(
    n: u32,
    gamma: f64,
    j0: u32,
    radius: f64,
    eps_start: f64,
    eps_steps: u32,
    target: Option<Target>,
    format: Format,
) -> Result<i32> {
    let p = Params::new(n, gamma)?;
    let schedule = crate::profiles::nested_epsilon_schedule(eps_start, eps_steps)?;
    let certify_a = target == Some(Target::A);
    let points = sharpness_sweep(
        p,
        ModeIndex(j0),
        radius,
        &schedule,
        certify_a,
        &QuadratureConfig::sweep(),
    )?;
    let lambda = eigenvalue(n, ModeIndex(j0))?;
    let shift = constants::rellich_shift(p);
    let limit_c = (lambda + shift) * (lambda + shift);
    let limit_a = constants::hardy_rellich_alpha(p, ModeIndex(j0));
    let final_gap = points.last().map(|last| {
        let (value, limit) = match target {
            Some(Target::C) => (last.rellich_q, limit_c),
            _ => (last.hardy_rellich_q, limit_a),
        };
        if limit > 0.0 {
            (value - limit).abs() / limit
        } else {
            (value - limit).abs()
        }
    });
    emit(
        &Envelope {
            command: "sharpness",
            inputs: SharpnessInputs {
                n,
                gamma,
                j0,
                radius,
                eps_start,
                eps_steps,
                target: target.map(|t| match t {
                    Target::A => "A".to_string(),
                    Target::C => "C".to_string(),
                }),
            },
            results: SharpnessResults {
                table: points
                    .iter()
                    .map(|q| SharpnessRow {
                        epsilon: q.epsilon,
                        hardy_rellich_q: q.hardy_rellich_q,
                        rellich_q: q.rellich_q,
                    })
                    .collect(),
                limit_hardy_rellich: limit_a,
                limit_rellich: limit_c,
                final_gap,
            },
            versions: versions(),
            seed: None,
        },
        format,
    );
    Ok(0)
}

#[derive(Serialize)]
struct OracleInputs {
    n: u32,
    gamma: f64,
    j: u32,
    quotient: String,
    rmin: f64,
    rmax: f64,
    points: usize,
}

#[derive(Serialize)]
struct OracleResults {
    mu_min: f64,
    theory: f64,
    relative_gap: f64,
    residual_norm: f64,
}

#[allow(clippy::too_many_arguments)]
fn cmd_oracle(
    n: u32,
    gamma: f64,
    j: u32,
    quotient: QuotientArg,
    rmin: f64,
    rmax: f64,
    points: usize,
    format: Format,
) -> Result<i32> {
    let p = Params::new(n, gamma)?;
    let grid = RadialGrid::new(rmin, rmax, points)?;
    let (q, q_name) = match quotient {
        QuotientArg::Rellich => (Quotient::Rellich, "rellich"),
        QuotientArg::HardyRellich => (Quotient::HardyRellich, "hardy-rellich"),
    };
    let forms = discretize(p, ModeIndex(j), &grid, q)?;
    let res = min_quotient(&forms)?;
    let theory = match q {
        Quotient::Rellich => {
            let lambda = eigenvalue(n, ModeIndex(j))?;
            let c = constants::rellich_shift(p);
            (lambda + c) * (lambda + c)
        }
        Quotient::HardyRellich => constants::hardy_rellich_alpha(p, ModeIndex(j)),
    };
    let relative_gap = if theory.abs() > 0.0 {
        (res.mu_min - theory).abs() / theory.abs()
    } else {
        (res.mu_min - theory).abs()
    };
    emit(
        &Envelope {
            command: "oracle",
            inputs: OracleInputs {
                n,
                gamma,
                j,
                quotient: q_name.to_string(),
                rmin,
                rmax,
                points,
            },
            results: OracleResults {
                mu_min: res.mu_min,
                theory,
                relative_gap,
                residual_norm: res.residual_norm,
            },
            versions: versions(),
            seed: None,
        },
        format,
    );
    Ok(0)
}

#[derive(Serialize)]
struct SchminckeInputs {
    n: u32,
    gamma: f64,
    variant: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    s: Option<f64>,
}

#[derive(Serialize)]
struct SchminckeResults {
    s_min: f64,
    case: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    rhs_constant: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    admissible: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    k3: Option<f64>,
}

fn cmd_schmincke(
    n: u32,
    gamma: f64,
    variant: VariantArg,
    s: Option<f64>,
    format: Format,
) -> Result<i32> {
    let p = Params::new(n, gamma)?;
    let (v, v_name) = match variant {
        VariantArg::Sec2 => (SchminckeVariant::Sec2, "sec2"),
        VariantArg::Sec3 => (SchminckeVariant::Sec3, "sec3"),
    };
    let range = constants::schmincke_range(p, v);
    let case = match range.case {
        SchminckeCase::Sec2 => "sec2",
        SchminckeCase::Sec3CaseI => "i",
        SchminckeCase::Sec3CaseII => "ii",
    };
    let k3 = match (v, s) {
        (SchminckeVariant::Sec3, Some(s)) if n == 3 && gamma == 0.0 => constants::k3(s).ok(),
        _ => None,
    };
    emit(
        &Envelope {
            command: "schmincke",
            inputs: SchminckeInputs {
                n,
                gamma,
                variant: v_name.to_string(),
                s,
            },
            results: SchminckeResults {
                s_min: range.s_min,
                case: case.to_string(),
                rhs_constant: s.map(|s| constants::schmincke_rhs_constant(p, s)),
                admissible: s.map(|s| s >= range.s_min),
                k3,
            },
            versions: versions(),
            seed: None,
        },
        format,
    );
    Ok(0)
}

#[derive(Serialize)]
struct LogrefineInputs {
    ineq: String,
    n: u32,
    gamma: f64,
    #[serde(rename = "N")]
    log_depth: u32,
    #[serde(rename = "R")]
    radius: f64,
    eta: f64,
    profile: String,
    mode: u32,
    tol: f64,
}

#[allow(clippy::too_many_arguments)]
fn cmd_logrefine(
    ineq: String,
    n: u32,
    gamma: f64,
    log_depth: u32,
    radius: f64,
    eta: String,
    profile: String,
    mode: u32,
    tol: f64,
    format: Format,
) -> Result<i32> {
    if !matches!(ineq.as_str(), "3.48a" | "4.31") {
        return Err(Error::Unsupported(format!(
            "logrefine handles ids 3.48a and 4.31, got {ineq:?}"
        )));
    }
    let p = Params::new(n, gamma)?;
    let eta_val = if eta == "auto" {
        iterated_exp(log_depth)? * radius
    } else {
        eta.parse()
            .map_err(|_| Error::Domain(format!("bad eta {eta:?}")))?
    };
    let (prof, seed) = parse_profile(&profile, p, ModeIndex(mode), radius)?;
    let f = MultiModeFunction::single(ModeFunction {
        j: ModeIndex(mode),
        profile: prof,
    });
    let free = FreeParams {
        log_depth: Some(log_depth),
        eta: Some(eta_val),
        radius: Some(radius),
        ..Default::default()
    };
    let rep = verify(&ineq, p, &free, &f, &QuadratureConfig::default())?;
    let out = report_out(&rep, tol);
    let holds = out.holds;
    emit(
        &Envelope {
            command: "logrefine",
            inputs: LogrefineInputs {
                ineq,
                n,
                gamma,
                log_depth,
                radius,
                eta: eta_val,
                profile,
                mode,
                tol,
            },
            results: out,
            versions: versions(),
            seed,
        },
        format,
    );
    Ok(if holds { 0 } else { 1 })
}
