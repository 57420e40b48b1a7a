//! The `grover-sim` command line: run searches, scan trajectories, verify
//! the operator identities and amplitude guarantees, benchmark classical
//! versus quantum query counts, and run degeneracy-range searches.
//!
//! Every output is a deterministic function of the flag set (seed included);
//! repeated invocations produce byte-identical files. Exit codes: 0 success,
//! 1 verification failure, 2 usage/configuration error, 3 numerical
//! integrity error.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::analysis::{
    self, grover_iteration_model, verify_growth_bound, verify_sign_recovery, TwoLevelState,
    Verdict, Violation,
};
use crate::error::{Error, Result};
use crate::grover::{
    self, optimal_iterations, DegeneracyOptions, GroverConfig, IterationPolicy,
};
use crate::oracle::{OracleSpec, RecordTable};
use crate::statevec::{StateVector, DEFAULT_MAX_QUBITS};
use crate::transforms::{
    self, diffusion, diffusion_via_wrw, explicit_operator, ExplicitMatrix, OperatorKind,
};

/// Environment variable overriding the register-size cap.
pub const NMAX_ENV: &str = "GROVER_SIM_NMAX";

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTEGRITY: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "grover-sim",
    about = "State-vector search simulator: run, scan, verify, bench, degeneracy",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one search and report the sampled index as JSON.
    Run(RunArgs),
    /// Emit the per-iteration trajectory as CSV (`m,k,l,prob`).
    Scan(ScanArgs),
    /// Run the theorem-verification suite and report verdicts as JSON.
    Verify(VerifyArgs),
    /// Benchmark classical linear scan against the quantum schedule (CSV).
    Bench(BenchArgs),
    /// Search without knowing the target count; absence is a valid result.
    Degeneracy(DegeneracyArgs),
}

#[derive(Args, Debug, Clone)]
struct OracleArgs {
    /// Register size in qubits (the table size decides this for --table).
    #[arg(long)]
    n: Option<usize>,
    /// Marked basis index; repeat for multiple targets.
    #[arg(long = "target")]
    targets: Vec<usize>,
    /// Newline-delimited UTF-8 record file (one record per line).
    #[arg(long)]
    table: Option<PathBuf>,
    /// Record to search for in --table.
    #[arg(long)]
    query: Option<String>,
}

#[derive(Args, Debug)]
struct RunArgs {
    #[command(flatten)]
    oracle: OracleArgs,
    /// Iteration count, or "auto" for round(pi/4 sqrt(N/M)).
    #[arg(long, default_value = "auto")]
    iterations: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Capture the per-iteration trajectory into the report.
    #[arg(long)]
    trajectory: bool,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ScanArgs {
    #[command(flatten)]
    oracle: OracleArgs,
    /// Record the trajectory for iteration counts 0..=MAX.
    #[arg(long = "max-iterations")]
    max_iterations: usize,
    /// Also emit the reduced-model columns next to the simulated ones.
    #[arg(long)]
    both: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long = "n-min", default_value_t = 2)]
    n_min: usize,
    #[arg(long = "n-max", default_value_t = 12)]
    n_max: usize,
    /// Which check to run: 1, 2, 3, 2.1, 2.2, unitarity, or all.
    #[arg(long, default_value = "all")]
    theorem: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[arg(long = "n-min", default_value_t = 2)]
    n_min: usize,
    #[arg(long = "n-max", default_value_t = 10)]
    n_max: usize,
    /// Monte Carlo trials per row for the classical column.
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct DegeneracyArgs {
    #[command(flatten)]
    oracle: OracleArgs,
    /// Attempts per assumed-count range before moving on.
    #[arg(long, default_value_t = 3)]
    retries: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Parses `std::env::args` and runs; returns the process exit code.
pub fn run_from_env() -> i32 {
    run_from_args(std::env::args())
}

pub fn run_from_args<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap help/version are successes, everything else is usage
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_integrity() {
                EXIT_INTEGRITY
            } else {
                EXIT_USAGE
            }
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Scan(args) => cmd_scan(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Degeneracy(args) => cmd_degeneracy(args),
    }
}

fn qubit_cap() -> Result<usize> {
    match std::env::var(NMAX_ENV) {
        Ok(raw) => raw.trim().parse::<usize>().map_err(|_| {
            Error::InvalidInput(format!("{NMAX_ENV} must be a qubit count, got {raw:?}"))
        }),
        Err(_) => Ok(DEFAULT_MAX_QUBITS),
    }
}

/// Builds the oracle from either explicit targets or a table+query pair;
/// `allow_empty_flags` admits a bare `--n` (zero-target oracle) for the
/// degeneracy subcommand.
fn build_oracle(args: &OracleArgs, allow_empty_flags: bool) -> Result<OracleSpec> {
    let has_targets = !args.targets.is_empty();
    let has_table = args.table.is_some() || args.query.is_some();
    if has_targets && has_table {
        return Err(Error::InvalidInput(
            "give either --target or --table/--query, not both".to_string(),
        ));
    }
    if has_table {
        let (Some(table_path), Some(query)) = (&args.table, &args.query) else {
            return Err(Error::InvalidInput(
                "--table and --query must be supplied together".to_string(),
            ));
        };
        let table = RecordTable::load(table_path)?;
        if let Some(n) = args.n {
            if n != table.qubit_count() {
                return Err(Error::InvalidInput(format!(
                    "--n {n} conflicts with table size (needs {} qubits)",
                    table.qubit_count()
                )));
            }
        }
        return OracleSpec::from_table(&table, query.as_bytes());
    }
    let Some(n) = args.n else {
        return Err(Error::InvalidInput(
            "--n is required with explicit targets".to_string(),
        ));
    };
    if !has_targets && !allow_empty_flags {
        return Err(Error::InvalidInput(
            "supply at least one --target, or --table with --query".to_string(),
        ));
    }
    OracleSpec::from_targets(n, args.targets.iter().copied())
}

fn parse_policy(raw: &str) -> Result<IterationPolicy> {
    if raw.eq_ignore_ascii_case("auto") {
        return Ok(IterationPolicy::Auto);
    }
    raw.parse::<usize>()
        .map(IterationPolicy::Fixed)
        .map_err(|_| {
            Error::InvalidInput(format!(
                "--iterations must be \"auto\" or a count, got {raw:?}"
            ))
        })
}

fn emit(out: &Option<PathBuf>, payload: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, payload)?,
        None => print!("{payload}"),
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// run
// ---------------------------------------------------------------------------

fn cmd_run(args: RunArgs) -> Result<i32> {
    let oracle = build_oracle(&args.oracle, false)?;
    if oracle.target_count() == 0 {
        return Err(Error::EmptyTargets);
    }
    let policy = parse_policy(&args.iterations)?;
    let config = GroverConfig::new(oracle, policy, args.seed)
        .with_trajectory_capture(args.trajectory)
        .with_qubit_cap(qubit_cap()?);
    let report = grover::run(&config)?;
    let mut payload = serde_json::to_string_pretty(&report).expect("report serializes");
    payload.push('\n');
    emit(&args.out, &payload)?;
    Ok(EXIT_OK)
}

// ---------------------------------------------------------------------------
// scan
// ---------------------------------------------------------------------------

fn cmd_scan(args: ScanArgs) -> Result<i32> {
    let oracle = build_oracle(&args.oracle, false)?;
    if oracle.target_count() == 0 {
        return Err(Error::EmptyTargets);
    }
    if args.max_iterations < 1 {
        return Err(Error::InvalidInput(
            "--max-iterations must be at least 1".to_string(),
        ));
    }
    let points = grover::run_trajectory_with_cap(&oracle, args.max_iterations, qubit_cap()?)?;
    let mut csv = String::new();
    if args.both {
        csv.push_str("m,k,l,prob,k_model,l_model,prob_model\n");
        let mut model = TwoLevelState::uniform(
            oracle.state_count() as u64,
            oracle.target_count() as u64,
        )?;
        for p in &points {
            if p.m > 0 {
                model = grover_iteration_model(model);
            }
            csv.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                p.m,
                p.k,
                p.l,
                p.prob,
                model.marked,
                model.unmarked,
                model.success_probability()
            ));
        }
    } else {
        csv.push_str("m,k,l,prob\n");
        for p in &points {
            csv.push_str(&format!("{},{},{},{}\n", p.m, p.k, p.l, p.prob));
        }
    }
    emit(&args.out, &csv)?;
    Ok(EXIT_OK)
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

/// Which verification families to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckSelect {
    All,
    Factorization,
    TwoLevelExactness,
    GrowthBound,
    SignRecovery,
    Conservation,
    Unitarity,
}

impl CheckSelect {
    fn parse(raw: &str) -> Result<Self> {
        Ok(match raw {
            "all" => CheckSelect::All,
            "1" => CheckSelect::Factorization,
            "2" => CheckSelect::TwoLevelExactness,
            "3" => CheckSelect::GrowthBound,
            "2.1" => CheckSelect::SignRecovery,
            "2.2" => CheckSelect::Conservation,
            "unitarity" => CheckSelect::Unitarity,
            other => {
                return Err(Error::InvalidInput(format!(
                    "--theorem must be one of 1, 2, 3, 2.1, 2.2, unitarity, all; got {other:?}"
                )))
            }
        })
    }
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub n_min: usize,
    pub n_max: usize,
    pub select: CheckSelect,
    pub seed: u64,
}

#[derive(Serialize)]
pub struct VerifyReport {
    pub all_passed: bool,
    pub results: Vec<Verdict>,
}

fn random_register(qubits: usize, rng: &mut ChaCha8Rng) -> StateVector {
    use rand::Rng;
    let n = 1usize << qubits;
    let mut amps: Vec<num_complex::Complex64> = (0..n)
        .map(|_| num_complex::Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    for a in &mut amps {
        *a /= norm;
    }
    StateVector::from_amplitudes(amps).expect("well-formed register")
}

/// Compares the dense product `W·R·W` against the dense diffusion matrix.
/// Takes the matrices as inputs so a corrupted operator can be fed in by
/// negative-control tests.
pub fn verify_factorization_matrices(
    w: &ExplicitMatrix,
    r: &ExplicitMatrix,
    d: &ExplicitMatrix,
) -> Verdict {
    let product = w.matmul(r).matmul(w);
    let residual = product.max_abs_diff(d);
    let params = serde_json::json!({ "dim": d.dim(), "residual": residual });
    if residual <= 1e-12 {
        Verdict {
            theorem: "diffusion factorization".to_string(),
            passed: true,
            first_violation: None,
            params,
        }
    } else {
        Verdict {
            theorem: "diffusion factorization".to_string(),
            passed: false,
            first_violation: Some(Violation {
                detail: format!("W*R*W deviates from the diffusion matrix by {residual:.3e}"),
                record: None,
            }),
            params,
        }
    }
}

fn verify_factorization(opts: &VerifyOptions) -> Result<Vec<Verdict>> {
    let mut verdicts = Vec::new();
    // dense product identity, small registers
    let dense_max = opts.n_max.min(6);
    for qubits in opts.n_min.min(dense_max)..=dense_max {
        let w = explicit_operator(OperatorKind::WalshHadamard, qubits)?;
        let r = explicit_operator(OperatorKind::ReflectZero, qubits)?;
        let d = explicit_operator(OperatorKind::Diffusion, qubits)?;
        let mut verdict = verify_factorization_matrices(&w, &r, &d);
        verdict.params["qubits"] = serde_json::json!(qubits);
        if !verdict.passed {
            verdicts.push(verdict);
            return Ok(verdicts);
        }
        if qubits == dense_max {
            verdicts.push(verdict);
        }
    }
    // route agreement on random registers
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x5eed_0001);
    let route_max = opts.n_max.min(12);
    let mut worst = 0.0f64;
    for qubits in opts.n_min.min(route_max)..=route_max {
        let dense = (qubits <= transforms::DENSE_CAP_QUBITS)
            .then(|| explicit_operator(OperatorKind::Diffusion, qubits))
            .transpose()?;
        for _ in 0..200 {
            let original = random_register(qubits, &mut rng);
            let mut closed = original.clone();
            diffusion(&mut closed);
            let mut factored = original.clone();
            diffusion_via_wrw(&mut factored);
            let mut gap = closed
                .amplitudes()
                .iter()
                .zip(factored.amplitudes())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            if let Some(d) = &dense {
                let applied = d.apply(original.amplitudes());
                let dense_gap = closed
                    .amplitudes()
                    .iter()
                    .zip(&applied)
                    .map(|(a, b)| (a - b).norm())
                    .fold(0.0, f64::max);
                gap = gap.max(dense_gap);
            }
            worst = worst.max(gap);
            if gap > 1e-12 {
                verdicts.push(Verdict {
                    theorem: "diffusion route agreement".to_string(),
                    passed: false,
                    first_violation: Some(Violation {
                        detail: format!("routes disagree by {gap:.3e} at {qubits} qubits"),
                        record: None,
                    }),
                    params: serde_json::json!({ "qubits": qubits }),
                });
                return Ok(verdicts);
            }
        }
    }
    verdicts.push(Verdict {
        theorem: "diffusion route agreement".to_string(),
        passed: true,
        first_violation: None,
        params: serde_json::json!({
            "n_min": opts.n_min,
            "n_max": route_max,
            "vectors_per_size": 200,
            "worst_gap": worst,
        }),
    });
    Ok(verdicts)
}

fn verify_two_level_exactness(opts: &VerifyOptions) -> Result<Verdict> {
    let n_max = opts.n_max.min(12);
    let mut worst = 0.0f64;
    for qubits in opts.n_min.min(n_max)..=n_max {
        let states = 1u64 << qubits;
        let target = (states / 3) as usize;
        let oracle = OracleSpec::from_targets(qubits, [target])?;
        let iterations = (2.0 * (states as f64).sqrt()).ceil() as usize;
        match analysis::model_sim_trajectory(&oracle, iterations) {
            Ok(records) => {
                for r in records {
                    worst = worst
                        .max((r.k_model - r.k_sim).abs())
                        .max((r.l_model - r.l_sim).abs());
                }
            }
            Err(e) => {
                return Ok(Verdict {
                    theorem: "two-level model exactness".to_string(),
                    passed: false,
                    first_violation: Some(Violation {
                        detail: format!("{qubits} qubits: {e}"),
                        record: None,
                    }),
                    params: serde_json::json!({ "qubits": qubits }),
                })
            }
        }
    }
    Ok(Verdict {
        theorem: "two-level model exactness".to_string(),
        passed: true,
        first_violation: None,
        params: serde_json::json!({
            "n_min": opts.n_min, "n_max": n_max, "worst_gap": worst,
        }),
    })
}

fn verify_growth(opts: &VerifyOptions) -> Result<Verdict> {
    for qubits in opts.n_min..=opts.n_max {
        let states = 1u64 << qubits;
        let oracle = OracleSpec::from_targets(qubits, [0usize])?;
        let iterations = analysis::find_halfway_iteration(states)?;
        let records = analysis::model_sim_trajectory(&oracle, iterations)?;
        let verdict = verify_growth_bound(states, &records);
        if !verdict.passed {
            return Ok(verdict);
        }
    }
    Ok(Verdict {
        theorem: "amplitude growth bound".to_string(),
        passed: true,
        first_violation: None,
        params: serde_json::json!({ "n_min": opts.n_min, "n_max": opts.n_max }),
    })
}

fn verify_sign_recovery_sweep(opts: &VerifyOptions) -> Result<Verdict> {
    for qubits in opts.n_min..=opts.n_max {
        let states = 1u64 << qubits;
        let n = states as f64;
        // stay inside the guaranteed region: |k/l| below both sqrt(N) and
        // the interior bound (N-2)/2 that the small-N cases need
        let ratio_cap = n.sqrt().min((n - 2.0) / 2.0) * (1.0 - 1e-9);
        for fraction in [0.1, 0.5, 0.9, 0.999] {
            let unmarked = 0.3;
            let marked = -unmarked * ratio_cap * fraction;
            if marked >= 0.0 {
                continue;
            }
            let verdict = verify_sign_recovery(states, marked, unmarked)?;
            if !verdict.passed {
                return Ok(verdict);
            }
        }
        if states == 4 {
            // the documented boundary: one step sends (−1/2, 1/2) to (1, 0)
            let verdict = verify_sign_recovery(4, -0.5, 0.5)?;
            if !verdict.passed {
                return Ok(verdict);
            }
        }
    }
    Ok(Verdict {
        theorem: "sign recovery".to_string(),
        passed: true,
        first_violation: None,
        params: serde_json::json!({ "n_min": opts.n_min, "n_max": opts.n_max }),
    })
}

fn verify_conservation(opts: &VerifyOptions) -> Result<Verdict> {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x5eed_0002);
    let span = opts.n_max.saturating_sub(opts.n_min) + 1;
    let per_size = (10_000 / span).max(1);
    let mut worst = 0.0f64;
    for qubits in opts.n_min..=opts.n_max {
        let states = 1u64 << qubits;
        for _ in 0..per_size {
            let k = rng.gen::<f64>() * 1.8 - 0.9;
            let l_mag = ((1.0 - k * k) / (states - 1) as f64).sqrt();
            let l = if rng.gen::<bool>() { l_mag } else { -l_mag };
            let s = TwoLevelState::new(states, 1, k, l)?;
            let drift = (diffusion_step_form(s) - s.quadratic_form()).abs();
            worst = worst.max(drift);
            if drift > 1e-12 {
                return Ok(Verdict {
                    theorem: "quadratic conservation".to_string(),
                    passed: false,
                    first_violation: Some(Violation {
                        detail: format!(
                            "k²+(N−1)l² drifted by {drift:.3e} at N={states}, k={k}, l={l}"
                        ),
                        record: None,
                    }),
                    params: serde_json::json!({ "states": states }),
                });
            }
        }
    }
    Ok(Verdict {
        theorem: "quadratic conservation".to_string(),
        passed: true,
        first_violation: None,
        params: serde_json::json!({
            "n_min": opts.n_min, "n_max": opts.n_max,
            "samples_per_size": per_size, "worst_drift": worst,
        }),
    })
}

fn diffusion_step_form(s: TwoLevelState) -> f64 {
    analysis::diffusion_step(s).quadratic_form()
}

fn verify_unitarity(opts: &VerifyOptions) -> Result<Verdict> {
    let n_max = opts.n_max.min(6);
    let mut worst = 0.0f64;
    for qubits in opts.n_min.min(n_max)..=n_max {
        for kind in [OperatorKind::WalshHadamard, OperatorKind::Diffusion] {
            let m = explicit_operator(kind, qubits)?;
            let residual = m.unitarity_residual();
            worst = worst.max(residual);
            if residual > 1e-10 {
                return Ok(Verdict {
                    theorem: "unitarity".to_string(),
                    passed: false,
                    first_violation: Some(Violation {
                        detail: format!(
                            "{kind:?} at {qubits} qubits: M*M^H deviates from I by {residual:.3e}"
                        ),
                        record: None,
                    }),
                    params: serde_json::json!({ "qubits": qubits }),
                });
            }
        }
    }
    Ok(Verdict {
        theorem: "unitarity".to_string(),
        passed: true,
        first_violation: None,
        params: serde_json::json!({ "n_min": opts.n_min, "n_max": n_max, "worst_residual": worst }),
    })
}

/// Runs the selected verification families and collects their verdicts.
pub fn run_verification(opts: &VerifyOptions) -> Result<Vec<Verdict>> {
    if opts.n_min < 1 || opts.n_min > opts.n_max {
        return Err(Error::InvalidInput(format!(
            "bad qubit range {}..={}",
            opts.n_min, opts.n_max
        )));
    }
    let mut verdicts = Vec::new();
    let wants = |c: CheckSelect| opts.select == CheckSelect::All || opts.select == c;
    if wants(CheckSelect::Factorization) {
        verdicts.extend(verify_factorization(opts)?);
    }
    if wants(CheckSelect::Unitarity) {
        verdicts.push(verify_unitarity(opts)?);
    }
    if wants(CheckSelect::TwoLevelExactness) {
        verdicts.push(verify_two_level_exactness(opts)?);
    }
    if wants(CheckSelect::Conservation) {
        verdicts.push(verify_conservation(opts)?);
    }
    if wants(CheckSelect::GrowthBound) {
        verdicts.push(verify_growth(opts)?);
    }
    if wants(CheckSelect::SignRecovery) {
        verdicts.push(verify_sign_recovery_sweep(opts)?);
    }
    Ok(verdicts)
}

fn cmd_verify(args: VerifyArgs) -> Result<i32> {
    let opts = VerifyOptions {
        n_min: args.n_min,
        n_max: args.n_max,
        select: CheckSelect::parse(&args.theorem)?,
        seed: args.seed,
    };
    let results = run_verification(&opts)?;
    let report = VerifyReport {
        all_passed: results.iter().all(|v| v.passed),
        results,
    };
    let mut payload = serde_json::to_string_pretty(&report).expect("report serializes");
    payload.push('\n');
    emit(&args.out, &payload)?;
    Ok(if report.all_passed {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAILED
    })
}

// ---------------------------------------------------------------------------
// bench
// ---------------------------------------------------------------------------

fn cmd_bench(args: BenchArgs) -> Result<i32> {
    if args.n_min < 1 || args.n_min > args.n_max {
        return Err(Error::InvalidInput(format!(
            "bad qubit range {}..={}",
            args.n_min, args.n_max
        )));
    }
    if args.trials == 0 {
        return Err(Error::InvalidInput("--trials must be positive".to_string()));
    }
    let mut csv = String::from("n,N,classical_mean_probes,grover_iterations,success_prob\n");
    for qubits in args.n_min..=args.n_max {
        let states = 1usize << qubits;
        let oracle = OracleSpec::from_targets(qubits, [0usize])?;
        let mut rng = ChaCha8Rng::seed_from_u64(args.seed ^ qubits as u64);
        let mut probes_total = 0u64;
        for _ in 0..args.trials {
            probes_total += oracle.classical_linear_search(&mut rng)? as u64;
        }
        let classical_mean = probes_total as f64 / args.trials as f64;
        let iterations = optimal_iterations(states as u64, 1)?;
        let points = grover::run_trajectory(&oracle, iterations)?;
        let success_prob = points[iterations].prob;
        csv.push_str(&format!(
            "{qubits},{states},{classical_mean},{iterations},{success_prob}\n"
        ));
    }
    emit(&args.out, &csv)?;
    Ok(EXIT_OK)
}

// ---------------------------------------------------------------------------
// degeneracy
// ---------------------------------------------------------------------------

fn cmd_degeneracy(args: DegeneracyArgs) -> Result<i32> {
    let oracle = build_oracle(&args.oracle, true)?;
    let cap = qubit_cap()?;
    let options = DegeneracyOptions {
        retries: args.retries.max(1),
        seed: args.seed,
        max_qubits: cap,
    };
    let outcome = grover::degeneracy_search(&oracle, &options)?;
    let mut payload = serde_json::to_string_pretty(&outcome).expect("outcome serializes");
    payload.push('\n');
    emit(&args.out, &payload)?;
    Ok(EXIT_OK)
}
