//! Command-line front end: bound tables, model-to-RBM synthesis, exact
//! verification, coefficient-region sampling, and layer covers.
//!
//! Exit codes: 0 success, 2 input error, 3 synthesis precision/plan error.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use hm2rbm::covering::{
    covering_number_bound, emit_tables, greedy_layer_cover, BOUNDS_CSV_HEADER,
    DEFAULT_NODE_BUDGET,
};
use hm2rbm::error::Error;
use hm2rbm::files::{cover_to_json, format_g17, parse_model, parse_rbm, rbm_to_json};
use hm2rbm::models::{
    hierarchical_distribution, hierarchical_energy, kl_between_energies, rbm_free_energy,
    rbm_marginal, total_variation,
};
use hm2rbm::softplus::{edge_pair_feasible, top_coefficient};
use hm2rbm::subsetpoly::{mobius_transform, VarSet};
use hm2rbm::synth::{default_plan, synthesize_rbm};
use hm2rbm::MAX_ENUM_VARS;

#[derive(Parser)]
#[command(
    name = "hm2rbm",
    version,
    about = "Compile hierarchical-model energies into RBM parameters and verify them exactly"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit hidden-unit bound tables for 2 <= k <= v <= v_max as CSV.
    Bounds {
        /// Largest number of visible variables (2..=40).
        v_max: usize,
        /// Tighten cells with v <= 9 by exact branch-and-bound search.
        #[arg(long)]
        oracle: bool,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compile a model file into RBM parameters.
    Synthesize {
        /// Path to the model JSON file.
        model: PathBuf,
        /// Scale parameter shared by all units (escalated per unit as needed).
        #[arg(long, default_value_t = 60.0)]
        omega: f64,
        /// Largest acceptable residual coefficient magnitude.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Write the RBM JSON here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare a model's distribution against an RBM's visible marginal.
    Verify { model: PathBuf, rbm: PathBuf },
    /// Sample covering-pair coefficients of random units as CSV scatter data.
    Region {
        /// Size of the larger set B of the covering pair (1..=6).
        bsize: usize,
        /// Number of random units to draw.
        samples: usize,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// RNG seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Emit a star-tuple cover of the layer of j-subsets as JSON.
    Cover {
        /// Number of variables (j..=14).
        v: usize,
        /// Layer to cover (2..=v).
        j: usize,
    },
}

enum AppError {
    Core(Error),
    Io(String, std::io::Error),
    Input(String),
}

impl fmt::Display for AppError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AppError::Core(e) => write!(f, "{e}"),
            AppError::Io(path, e) => write!(f, "{path}: {e}"),
            AppError::Input(msg) => write!(f, "{msg}"),
        }
    }
}

impl From<Error> for AppError {
    fn from(e: Error) -> Self {
        AppError::Core(e)
    }
}

impl AppError {
    fn exit_code(&self) -> u8 {
        match self {
            AppError::Core(
                Error::ToleranceNotMet { .. }
                | Error::OmegaBelowFloor { .. }
                | Error::EscalationExhausted { .. }
                | Error::BracketFailed { .. }
                | Error::UncoveredInteraction { .. },
            ) => 3,
            _ => 2,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(command: Command) -> Result<(), AppError> {
    match command {
        Command::Bounds { v_max, oracle, out } => cmd_bounds(v_max, oracle, out.as_deref()),
        Command::Synthesize {
            model,
            omega,
            tol,
            out,
        } => cmd_synthesize(&model, omega, tol, out.as_deref()),
        Command::Verify { model, rbm } => cmd_verify(&model, &rbm),
        Command::Region {
            bsize,
            samples,
            out,
            seed,
        } => cmd_region(bsize, samples, out.as_deref(), seed),
        Command::Cover { v, j } => cmd_cover(v, j),
    }
}

fn read_file(path: &Path) -> Result<String, AppError> {
    fs::read_to_string(path).map_err(|e| AppError::Io(path.display().to_string(), e))
}

fn write_output(path: Option<&Path>, content: &str) -> Result<(), AppError> {
    match path {
        Some(p) => fs::write(p, content).map_err(|e| AppError::Io(p.display().to_string(), e)),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

/// Enumeration cap, lowered (never raised) by HM2RBM_MAX_V.
fn effective_v_cap() -> Result<usize, AppError> {
    match std::env::var("HM2RBM_MAX_V") {
        Err(_) => Ok(MAX_ENUM_VARS),
        Ok(raw) => {
            let parsed: usize = raw
                .parse()
                .map_err(|_| AppError::Input(format!("HM2RBM_MAX_V is not a number: {raw}")))?;
            Ok(parsed.min(MAX_ENUM_VARS))
        }
    }
}

fn check_v_cap(v: usize) -> Result<(), AppError> {
    let cap = effective_v_cap()?;
    if v > cap {
        return Err(AppError::Core(Error::TooLargeForExact { v, max: cap }));
    }
    Ok(())
}

fn cmd_bounds(v_max: usize, oracle: bool, out: Option<&Path>) -> Result<(), AppError> {
    let rows = emit_tables(v_max, oracle, DEFAULT_NODE_BUDGET)?;
    let mut csv = String::from(BOUNDS_CSV_HEADER);
    csv.push('\n');
    for row in rows {
        csv.push_str(&row.to_csv());
        csv.push('\n');
    }
    write_output(out, &csv)
}

fn cmd_synthesize(
    model_path: &Path,
    omega: f64,
    tol: f64,
    out: Option<&Path>,
) -> Result<(), AppError> {
    let spec = parse_model(&read_file(model_path)?)?;
    check_v_cap(spec.v())?;
    let plan = default_plan(&spec)?;
    let (params, report) = synthesize_rbm(&spec, &plan, omega, tol)?;
    let json = rbm_to_json(&params);
    let mut summary = format!(
        "h: {}\nresidual_max: {}\n",
        params.hidden_count(),
        format_g17(report.residual_max)
    );
    for (i, omega_used) in report.omega_used.iter().enumerate() {
        summary.push_str(&format!("omega[{i}]: {}\n", format_g17(*omega_used)));
    }
    match out {
        Some(path) => {
            write_output(Some(path), &json)?;
            print!("{summary}");
        }
        None => {
            print!("{json}");
            eprint!("{summary}");
        }
    }
    Ok(())
}

fn cmd_verify(model_path: &Path, rbm_path: &Path) -> Result<(), AppError> {
    let spec = parse_model(&read_file(model_path)?)?;
    let params = parse_rbm(&read_file(rbm_path)?)?;
    if spec.v() != params.v() {
        return Err(AppError::Core(Error::VariableCountMismatch {
            left: spec.v(),
            right: params.v(),
        }));
    }
    check_v_cap(spec.v())?;
    let target_energy = hierarchical_energy(&spec)?;
    let free_energy = rbm_free_energy(&params)?;
    let kl = kl_between_energies(&target_energy, &free_energy)?;
    let tv = total_variation(&hierarchical_distribution(&spec)?, &rbm_marginal(&params)?)?;
    let realized = mobius_transform(&free_energy);
    let target = spec.to_poly();
    let mut max_residual = 0.0f64;
    for bits in 0..(1u32 << spec.v()) {
        let s = VarSet::from_bits(bits).expect("within cap");
        if s.len() >= 2 {
            max_residual = max_residual.max((target.coeff(s) - realized.coeff(s)).abs());
        }
    }
    println!("kl: {}", format_g17(kl));
    println!("tv: {}", format_g17(tv));
    println!("max_residual: {}", format_g17(max_residual));
    Ok(())
}

fn cmd_region(
    bsize: usize,
    samples: usize,
    out: Option<&Path>,
    seed: u64,
) -> Result<(), AppError> {
    if !(1..=6).contains(&bsize) {
        return Err(AppError::Input(format!(
            "bsize must be between 1 and 6, got {bsize}"
        )));
    }
    let mut rng = StdRng::seed_from_u64(seed);
    let mut csv = String::from("k_b,k_bprime,feasible\n");
    for _ in 0..samples {
        let w: Vec<f64> = (0..bsize).map(|_| rng.random_range(-5.0..5.0)).collect();
        let c: f64 = rng.random_range(-5.0..5.0);
        let k_b = top_coefficient(&w, c);
        let k_bprime = top_coefficient(&w[..bsize - 1], c);
        let verdict = edge_pair_feasible(bsize, k_b, k_bprime)?;
        csv.push_str(&format!(
            "{},{},{}\n",
            format_g17(k_b),
            format_g17(k_bprime),
            verdict.feasible
        ));
    }
    write_output(out, &csv)
}

fn cmd_cover(v: usize, j: usize) -> Result<(), AppError> {
    if v > 14 {
        return Err(AppError::Input(format!(
            "layer covers are limited to v <= 14, got {v}"
        )));
    }
    let tuples = greedy_layer_cover(v, j)?;
    let bound = covering_number_bound(v, j)?;
    eprintln!(
        "cover size: {} (bound {} via {})",
        tuples.len(),
        bound.value,
        bound.method
    );
    print!("{}", cover_to_json(&tuples));
    Ok(())
}
