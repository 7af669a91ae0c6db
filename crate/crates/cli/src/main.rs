//! `nnmps` command-line front end.
//!
//! Exit codes: 0 success, 2 invalid input, 3 numerical failure, 4 a
//! catalogued state failed its zero-energy check.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use nnmps::classifier::{self, ClassifyError};
use nnmps::hamiltonian::{self, FamilyId, FamilyParams, HamiltonianError, DEFAULT_MAX_SITES};
use nnmps::io::{amplitudes, format_float, matrix_rows, parse_matrix, to_json_string, write_matrix_binary};
use nnmps::states::{self, MpsSpec, StateError, DEFAULT_MAX_STATE_SITES};
use nnmps::verifier::{self, SpectrumReport, VerifyError, KERNEL_TOL};
use nnmps::CSpace;

/// Residual bound for catalogued zero-energy states.
const MEMBER_TOL: f64 = 1e-9;

#[derive(Parser)]
#[command(name = "nnmps", version, about = "Matrix product ground states of two-state chains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Normal form of a constraint space given as {"basis": [quartet, ...]}.
    Classify {
        /// Inline JSON, `@path`, or `-` for stdin.
        #[arg(long, default_value = "-")]
        space: String,
    },
    /// Dense open-chain Hamiltonian of a family.
    BuildH {
        #[command(flatten)]
        job: FamilyJob,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Write here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Catalogued ground states of a family.
    GroundStates {
        #[command(flatten)]
        job: FamilyJob,
    },
    /// Contract a matrix product state.
    Mps {
        /// Square matrix as JSON rows of numbers or [re, im] pairs.
        #[arg(long)]
        a0: String,
        #[arg(long)]
        a1: String,
        #[arg(long)]
        n_sites: usize,
    },
    /// Diagonalize the chain and check every catalogued state.
    Verify {
        #[command(flatten)]
        job: FamilyJob,
        /// Relative cut for zero eigenvalues.
        #[arg(long, default_value_t = KERNEL_TOL)]
        tol: f64,
        /// How many low eigenvalues to report.
        #[arg(long, default_value_t = 8)]
        k: usize,
    },
    /// Verify over a grid of one real parameter; CSV on stdout.
    Sweep {
        #[command(flatten)]
        job: FamilyJob,
        /// `name:lo..hi:count`, inclusive of both ends.
        #[arg(long)]
        grid: String,
        #[arg(long, default_value_t = KERNEL_TOL)]
        tol: f64,
    },
}

#[derive(clap::Args)]
struct FamilyJob {
    #[arg(long)]
    family: String,
    /// JSON object with the family's parameters, or `@path`.
    #[arg(long)]
    params: String,
    #[arg(long)]
    n_sites: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Binary,
}

/// An error and the exit code it maps to.
#[derive(Debug)]
enum Failure {
    Validation(String),
    Numerical(String),
    Claim(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Validation(_) => 2,
            Failure::Numerical(_) => 3,
            Failure::Claim(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Validation(m) | Failure::Numerical(m) | Failure::Claim(m) => m,
        }
    }
}

impl From<HamiltonianError> for Failure {
    fn from(e: HamiltonianError) -> Self {
        Failure::Validation(e.to_string())
    }
}

impl From<StateError> for Failure {
    fn from(e: StateError) -> Self {
        Failure::Validation(e.to_string())
    }
}

impl From<VerifyError> for Failure {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::Hamiltonian(h) => h.into(),
            VerifyError::EigenFailure => Failure::Numerical(e.to_string()),
            other => Failure::Validation(other.to_string()),
        }
    }
}

impl From<ClassifyError> for Failure {
    fn from(e: ClassifyError) -> Self {
        match e {
            ClassifyError::Witness(_) | ClassifyError::InconsistentProfile(_) => Failure::Numerical(e.to_string()),
            other => Failure::Validation(other.to_string()),
        }
    }
}

fn io_err(e: io::Error) -> Failure {
    Failure::Validation(format!("i/o: {e}"))
}

fn json<T: Serialize>(value: &T) -> Result<String, Failure> {
    to_json_string(value).map_err(|e| Failure::Numerical(format!("serialization: {e}")))
}

fn env_max_sites() -> Result<Option<usize>, Failure> {
    match std::env::var("MPS_MAX_SITES") {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Failure::Validation(format!("MPS_MAX_SITES must be a positive integer, got {v:?}"))),
        Err(_) => Ok(None),
    }
}

/// Hamiltonian site limit, overridable through `MPS_MAX_SITES`.
fn max_sites() -> Result<usize, Failure> {
    Ok(env_max_sites()?.unwrap_or(DEFAULT_MAX_SITES))
}

fn read_text(arg: &str) -> Result<String, Failure> {
    match arg.strip_prefix('@') {
        Some(path) => fs::read_to_string(path).map_err(io_err),
        None => Ok(arg.to_string()),
    }
}

/// Parameter object with the family tag merged in.
fn params_value(family: FamilyId, params: &str) -> Result<serde_json::Map<String, Value>, Failure> {
    let text = read_text(params)?;
    let value: Value =
        serde_json::from_str(&text).map_err(|e| Failure::Validation(format!("--params is not JSON: {e}")))?;
    let Value::Object(mut map) = value else {
        return Err(Failure::Validation("--params must be a JSON object".into()));
    };
    match map.get("family") {
        Some(Value::String(f)) if f.eq_ignore_ascii_case(family.as_str()) => {}
        Some(other) => {
            return Err(Failure::Validation(format!(
                "--params names family {other} but --family is {family}"
            )))
        }
        None => {}
    }
    map.insert("family".into(), Value::String(family.as_str().into()));
    Ok(map)
}

fn parse_params(map: &serde_json::Map<String, Value>) -> Result<FamilyParams, Failure> {
    let text = serde_json::to_string(map).expect("map serializes");
    Ok(FamilyParams::from_json(&text)?)
}

fn family_id(name: &str) -> Result<FamilyId, Failure> {
    Ok(name.parse::<FamilyId>()?)
}

fn load_job(job: &FamilyJob) -> Result<FamilyParams, Failure> {
    parse_params(&params_value(family_id(&job.family)?, &job.params)?)
}

#[derive(Serialize)]
struct ClassifyOut<'a> {
    case_id: String,
    mu: Option<[f64; 2]>,
    gamma: [[[f64; 2]; 2]; 2],
    canonical_basis: &'a [nnmps::PauliQuartet],
    signature: classifier::InvariantSignature,
}

fn classify(space: &str) -> Result<String, Failure> {
    let text = if space == "-" {
        io::read_to_string(io::stdin()).map_err(io_err)?
    } else {
        read_text(space)?
    };
    let space: CSpace =
        serde_json::from_str(&text).map_err(|e| Failure::Validation(format!("constraint space JSON: {e}")))?;
    let r = classifier::classify(&space)?;
    let g = r.gamma.matrix();
    let pair = |z: C64| [z.re, z.im];
    json(&ClassifyOut {
        case_id: r.form.case().to_string(),
        mu: r.form.mu().map(pair),
        gamma: [[pair(g[(0, 0)]), pair(g[(0, 1)])], [pair(g[(1, 0)]), pair(g[(1, 1)])]],
        canonical_basis: r.canonical.basis(),
        signature: r.signature,
    })
}

#[derive(Serialize)]
struct MatrixOut {
    n_sites: usize,
    dim: usize,
    matrix: Vec<Vec<[f64; 2]>>,
}

fn build_h(job: &FamilyJob, format: Format, output: Option<&PathBuf>) -> Result<(), Failure> {
    let p = load_job(job)?;
    let h = hamiltonian::build_family(&p)?;
    let chain = hamiltonian::full_chain_with_limit(&h, job.n_sites, max_sites()?)?;
    let bytes = match format {
        Format::Json => {
            let mut s = json(&MatrixOut {
                n_sites: chain.n_sites(),
                dim: chain.dim(),
                matrix: matrix_rows(chain.matrix()),
            })?;
            s.push('\n');
            s.into_bytes()
        }
        Format::Binary => {
            let mut buf = Vec::new();
            write_matrix_binary(&mut buf, chain.n_sites() as u32, chain.matrix()).map_err(io_err)?;
            buf
        }
    };
    match output {
        Some(path) => fs::write(path, bytes).map_err(io_err),
        None => io::stdout().write_all(&bytes).map_err(io_err),
    }
}

#[derive(Serialize)]
struct LabelledState {
    label: String,
    amplitudes: Vec<[f64; 2]>,
}

/// State vectors are cheaper than dense matrices, so their own limit
/// applies unless the variable lowers it.
fn state_limit() -> Result<usize, Failure> {
    Ok(env_max_sites()?.map_or(DEFAULT_MAX_STATE_SITES, |m| m.min(DEFAULT_MAX_STATE_SITES)))
}

fn check_state_sites(n: usize) -> Result<(), Failure> {
    let max = state_limit()?;
    if n == 0 || n > max {
        return Err(Failure::Validation(format!("n-sites {n} outside 1..={max}")));
    }
    Ok(())
}

fn ground_states(job: &FamilyJob) -> Result<String, Failure> {
    let p = load_job(job)?;
    check_state_sites(job.n_sites)?;
    let list: Vec<LabelledState> = states::catalogue(&p, job.n_sites)?
        .into_iter()
        .map(|c| LabelledState {
            label: c.label,
            amplitudes: amplitudes(&c.state),
        })
        .collect();
    json(&list)
}

#[derive(Serialize)]
struct MpsOut {
    n_sites: usize,
    bond_dim: usize,
    z: f64,
    vanishing: bool,
    amplitudes: Vec<[f64; 2]>,
}

fn mps(a0: &str, a1: &str, n: usize) -> Result<String, Failure> {
    check_state_sites(n)?;
    let a0 = parse_matrix(&read_text(a0)?).map_err(Failure::Validation)?;
    let a1 = parse_matrix(&read_text(a1)?).map_err(Failure::Validation)?;
    let spec = MpsSpec::new(a0, a1)?;
    let c = states::mps_contract(&spec, n)?;
    json(&MpsOut {
        n_sites: n,
        bond_dim: spec.bond_dim(),
        z: c.z,
        vanishing: c.vanishing,
        amplitudes: amplitudes(&c.raw),
    })
}

/// Spectrum plus the residual of every catalogued state.
fn verify_params(p: &FamilyParams, n: usize, tol: f64, k: usize) -> Result<SpectrumReport, Failure> {
    let h = hamiltonian::build_family(p)?;
    let chain = hamiltonian::full_chain_with_limit(&h, n, max_sites()?)?;
    let mut report = verifier::spectrum_with_tol(&chain, k, tol)?;
    for c in states::catalogue(p, n)? {
        let r = match verifier::check_zero_member(&chain, &c.state) {
            Ok(r) => r,
            // an identically zero catalogued sum is not a ground state
            Err(VerifyError::ZeroState) => f64::INFINITY,
            Err(e) => return Err(e.into()),
        };
        report.residuals.insert(c.label, r);
    }
    Ok(report)
}

fn failing(report: &SpectrumReport) -> Vec<String> {
    report
        .residuals
        .iter()
        .filter(|(_, &r)| r.is_nan() || r > MEMBER_TOL)
        .map(|(l, r)| format!("{l} ({r:e})"))
        .collect()
}

/// Infinite residuals become `null`.
#[derive(Serialize)]
struct ReportOut<'a> {
    family: &'a str,
    n_sites: usize,
    ground_energy: f64,
    kernel_dim: usize,
    lowest_k_eigenvalues: &'a [f64],
    residuals: std::collections::BTreeMap<&'a str, Option<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    warning: Option<&'a str>,
}

fn verify(job: &FamilyJob, tol: f64, k: usize) -> Result<String, Failure> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Failure::Validation(format!("--tol must be positive, got {tol}")));
    }
    let p = load_job(job)?;
    let report = verify_params(&p, job.n_sites, tol, k)?;
    let out = json(&ReportOut {
        family: p.family().as_str(),
        n_sites: report.n_sites,
        ground_energy: report.ground_energy,
        kernel_dim: report.kernel_dim,
        lowest_k_eigenvalues: &report.lowest_k_eigenvalues,
        residuals: report
            .residuals
            .iter()
            .map(|(l, &r)| (l.as_str(), r.is_finite().then_some(r)))
            .collect(),
        warning: report.warning.as_deref(),
    })?;
    let bad = failing(&report);
    if bad.is_empty() {
        Ok(out)
    } else {
        println!("{out}");
        Err(Failure::Claim(format!(
            "catalogued states off the kernel: {}",
            bad.join(", ")
        )))
    }
}

struct Grid {
    field: String,
    values: Vec<f64>,
}

fn parse_grid(spec: &str) -> Result<Grid, Failure> {
    let bad = || Failure::Validation(format!("--grid must look like name:lo..hi:count, got {spec:?}"));
    let mut parts = spec.split(':');
    let (Some(field), Some(range), Some(count), None) = (parts.next(), parts.next(), parts.next(), parts.next()) else {
        return Err(bad());
    };
    let (lo, hi) = range.split_once("..").ok_or_else(bad)?;
    let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
    let count: usize = count.trim().parse().map_err(|_| bad())?;
    if field.is_empty() || field == "family" || count == 0 || !lo.is_finite() || !hi.is_finite() {
        return Err(bad());
    }
    let values = if count == 1 {
        vec![lo]
    } else {
        (0..count)
            .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
            .collect()
    };
    Ok(Grid {
        field: field.to_string(),
        values,
    })
}

fn sweep(job: &FamilyJob, grid: &str, tol: f64) -> Result<String, Failure> {
    let family = family_id(&job.family)?;
    let base = params_value(family, &job.params)?;
    let grid = parse_grid(grid)?;
    // validate every point before any work
    let points: Vec<FamilyParams> = grid
        .values
        .iter()
        .map(|&v| {
            let mut m = base.clone();
            m.insert(grid.field.clone(), serde_json::json!(v));
            parse_params(&m)
        })
        .collect::<Result<_, _>>()?;
    let rows: Vec<Result<SpectrumReport, Failure>> = points
        .par_iter()
        .map(|p| verify_params(p, job.n_sites, tol, 1))
        .collect();
    let mut csv = format!("{},ground_energy,kernel_dim,max_residual\n", grid.field);
    for (v, row) in grid.values.iter().zip(rows) {
        let r = row?;
        let max_res = r.max_residual();
        let max_res = if max_res.is_finite() {
            format_float(max_res)
        } else {
            "inf".into()
        };
        csv.push_str(&format!(
            "{},{},{},{}\n",
            format_float(*v),
            format_float(r.ground_energy),
            r.kernel_dim,
            max_res
        ));
    }
    Ok(csv)
}

fn run(cli: Cli) -> Result<(), Failure> {
    let text = match &cli.command {
        Command::Classify { space } => classify(space)?,
        Command::BuildH { job, format, output } => return build_h(job, *format, output.as_ref()),
        Command::GroundStates { job } => ground_states(job)?,
        Command::Mps { a0, a1, n_sites } => mps(a0, a1, *n_sites)?,
        Command::Verify { job, tol, k } => verify(job, *tol, *k)?,
        Command::Sweep { job, grid, tol } => {
            let csv = sweep(job, grid, *tol)?;
            return io::stdout().write_all(csv.as_bytes()).map_err(io_err);
        }
    };
    println!("{text}");
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
