//! The search driver: uniform initialization, the flip/diffuse loop,
//! iteration scheduling, Born-rule measurement, and the degeneracy-range
//! scheme for unknown target counts.
//!
//! The loop keeps every amplitude real (the uniform start is real and both
//! loop operators preserve realness), so the hot path runs on a plain `f64`
//! lane with the diffusion mean folded into the update pass: one read and
//! one write per amplitude per iteration. This is observationally identical
//! to driving [`crate::transforms`] on the complex register, which remains
//! available as [`reference_run_state`] for cross-checking.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::analysis::{grover_iteration_model, TwoLevelState};
use crate::error::{Error, Result};
use crate::oracle::OracleSpec;
use crate::statevec::{self, StateVector, DEFAULT_MAX_QUBITS, SAMPLE_NORM_TOLERANCE};
use crate::sum;
use crate::transforms;

/// Marked/unmarked amplitude classes must agree within this much for
/// trajectory capture; anything larger means the two-class reduction has
/// broken down and capture fails loudly.
pub const CLASS_UNIFORMITY_TOLERANCE: f64 = 1e-12;

/// How many loop iterations to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IterationPolicy {
    /// Exactly this many iterations.
    Fixed(usize),
    /// `round(π/4·√(N/M))` with the small-register carve-outs of
    /// [`optimal_iterations`]. Requires a non-empty target set.
    Auto,
    /// Scan iteration counts `0..=max` with the reduced model and run the
    /// first count with the highest success probability.
    Scan { max: usize },
}

/// Everything a run needs: the oracle, the schedule, the seed, and whether
/// to record the per-iteration trajectory.
#[derive(Clone, Debug)]
pub struct GroverConfig {
    oracle: OracleSpec,
    policy: IterationPolicy,
    seed: u64,
    capture_trajectory: bool,
    max_qubits: usize,
}

impl GroverConfig {
    pub fn new(oracle: OracleSpec, policy: IterationPolicy, seed: u64) -> Self {
        GroverConfig {
            oracle,
            policy,
            seed,
            capture_trajectory: false,
            max_qubits: DEFAULT_MAX_QUBITS,
        }
    }

    pub fn with_trajectory_capture(mut self, capture: bool) -> Self {
        self.capture_trajectory = capture;
        self
    }

    pub fn with_qubit_cap(mut self, cap: usize) -> Self {
        self.max_qubits = cap;
        self
    }

    pub fn oracle(&self) -> &OracleSpec {
        &self.oracle
    }

    pub fn policy(&self) -> IterationPolicy {
        self.policy
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn qubits(&self) -> usize {
        self.oracle.qubit_count()
    }

    pub fn qubit_cap(&self) -> usize {
        self.max_qubits
    }
}

/// One trajectory row: iteration index, the common marked amplitude `k`,
/// the common unmarked amplitude `l`, and the total marked probability.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TrajectoryPoint {
    pub m: usize,
    pub k: f64,
    pub l: f64,
    pub prob: f64,
}

/// Outcome of one run. `oracle_calls` always equals `iterations`: the
/// conditional flip touches the whole register in one unit-cost query.
#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub sampled_index: usize,
    pub success: bool,
    pub iterations: usize,
    pub oracle_calls: usize,
    pub success_probability: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trajectory: Option<Vec<TrajectoryPoint>>,
}

/// Schedule for a known (or assumed) target count: `round(π/4·√(N/M))`,
/// with two carve-outs. When `M ≥ N/2` the uniform state already succeeds
/// with probability ≥ 1/2, so zero iterations. For registers of at most 8
/// states the rounded formula can overshoot the peak (at `N=4, M=1` it says
/// 2 where 1 is exact), so the count is read off a reduced-model scan
/// instead.
pub fn optimal_iterations(states: u64, targets: u64) -> Result<usize> {
    if targets == 0 {
        return Err(Error::EmptyTargets);
    }
    if targets > states {
        return Err(Error::TooManyTargets { targets, states });
    }
    if 2 * targets >= states {
        return Ok(0);
    }
    if states <= 8 {
        return best_iteration_by_model_scan(states, targets);
    }
    let ratio = states as f64 / targets as f64;
    let ideal = std::f64::consts::FRAC_PI_4 * ratio.sqrt();
    Ok((ideal.round() as usize).max(1))
}

fn best_iteration_by_model_scan(states: u64, targets: u64) -> Result<usize> {
    let limit = (2.0 * states as f64).sqrt().ceil() as usize;
    let mut model = TwoLevelState::uniform(states, targets)?;
    let mut best = (0usize, model.success_probability());
    for m in 1..=limit {
        model = grover_iteration_model(model);
        let p = model.success_probability();
        if p > best.1 {
            best = (m, p);
        }
    }
    Ok(best.0)
}

fn resolve_iterations(config: &GroverConfig) -> Result<usize> {
    match config.policy {
        IterationPolicy::Fixed(m) => Ok(m),
        IterationPolicy::Auto => optimal_iterations(
            config.oracle.state_count() as u64,
            config.oracle.target_count() as u64,
        ),
        IterationPolicy::Scan { max } => {
            let states = config.oracle.state_count() as u64;
            let targets = config.oracle.target_count() as u64;
            if targets == 0 {
                return Err(Error::EmptyTargets);
            }
            let mut model = TwoLevelState::uniform(states, targets)?;
            let mut best = (0usize, model.success_probability());
            for m in 1..=max {
                model = grover_iteration_model(model);
                let p = model.success_probability();
                if p > best.1 {
                    best = (m, p);
                }
            }
            Ok(best.0)
        }
    }
}

// ---------------------------------------------------------------------------
// The real-lane kernel
// ---------------------------------------------------------------------------

/// Register restricted to the real lane, with the component sum carried
/// across iterations. The flip adjusts the sum in O(M); the fused diffusion
/// pass re-measures it pairwise from the freshly written values, so the
/// carried sum never accumulates drift.
struct RealKernel<'a> {
    values: Vec<f64>,
    running_sum: f64,
    oracle: &'a OracleSpec,
}

impl<'a> RealKernel<'a> {
    fn uniform(oracle: &'a OracleSpec, cap: usize) -> Result<Self> {
        // same cap semantics as StateVector::uniform_with_cap
        let qubits = oracle.qubit_count();
        if qubits > cap.min(statevec::ABSOLUTE_MAX_QUBITS) {
            return Err(Error::QubitCount {
                requested: qubits,
                cap: cap.min(statevec::ABSOLUTE_MAX_QUBITS),
            });
        }
        let n = oracle.state_count();
        let values = vec![1.0 / (n as f64).sqrt(); n];
        let running_sum = sum::pairwise_sum_f64(&values);
        Ok(RealKernel {
            values,
            running_sum,
            oracle,
        })
    }

    /// One flip + diffusion iteration.
    fn iterate(&mut self) {
        let mut flipped_mass = 0.0;
        for &t in self.oracle.targets() {
            flipped_mass += self.values[t];
            self.values[t] = -self.values[t];
        }
        self.running_sum -= 2.0 * flipped_mass;

        let average = self.running_sum / self.values.len() as f64;
        let two_a = 2.0 * average;
        self.running_sum = sum::map_and_sum_f64(&mut self.values, &move |v| two_a - v);
    }

    fn success_probability(&self) -> f64 {
        self.oracle
            .targets()
            .iter()
            .map(|&t| self.values[t] * self.values[t])
            .sum()
    }

    fn norm_sqr(&self) -> f64 {
        sum::pairwise_norm_sqr_f64(&self.values)
    }

    fn check_norm(&self) -> Result<()> {
        let deviation = (self.norm_sqr() - 1.0).abs();
        if deviation > SAMPLE_NORM_TOLERANCE {
            return Err(Error::NormDrift {
                deviation,
                limit: SAMPLE_NORM_TOLERANCE,
            });
        }
        Ok(())
    }

    fn sample(&self, seed: u64) -> usize {
        let u: f64 = ChaCha8Rng::seed_from_u64(seed).gen();
        statevec::sample_by_inverse_cdf(self.values.iter().map(|v| v * v), u)
    }

    /// Extracts the (marked, unmarked) class amplitudes, verifying that
    /// every state in a class sits within [`CLASS_UNIFORMITY_TOLERANCE`] of
    /// its representative.
    fn class_amplitudes(&self) -> Result<(f64, f64)> {
        class_amplitudes(&self.values, self.oracle)
    }

    fn trajectory_point(&self, m: usize) -> Result<TrajectoryPoint> {
        let (k, l) = self.class_amplitudes()?;
        Ok(TrajectoryPoint {
            m,
            k,
            l,
            prob: self.success_probability(),
        })
    }

    fn into_state_vector(self) -> StateVector {
        let amps: Vec<Complex64> = self
            .values
            .into_iter()
            .map(|v| Complex64::new(v, 0.0))
            .collect();
        StateVector::from_amplitudes(amps).expect("kernel register is well-formed")
    }
}

fn class_amplitudes(values: &[f64], oracle: &OracleSpec) -> Result<(f64, f64)> {
    let mut marked = 0.0;
    let mut unmarked = 0.0;
    let mut next_target = oracle.targets().iter().copied();
    let mut current_target = next_target.next();
    let mut seen_marked = false;
    let mut seen_unmarked = false;
    for (i, &v) in values.iter().enumerate() {
        let is_target = current_target == Some(i);
        if is_target {
            current_target = next_target.next();
            if !seen_marked {
                marked = v;
                seen_marked = true;
            } else if (v - marked).abs() > CLASS_UNIFORMITY_TOLERANCE {
                return Err(Error::Integrity(format!(
                    "marked amplitude at index {i} is {v}, expected {marked} \
                     (class uniformity broken)"
                )));
            }
        } else if !seen_unmarked {
            unmarked = v;
            seen_unmarked = true;
        } else if (v - unmarked).abs() > CLASS_UNIFORMITY_TOLERANCE {
            return Err(Error::Integrity(format!(
                "unmarked amplitude at index {i} is {v}, expected {unmarked} \
                 (class uniformity broken)"
            )));
        }
    }
    Ok((marked, unmarked))
}

// ---------------------------------------------------------------------------
// Run entry points
// ---------------------------------------------------------------------------

/// Executes the full search: uniform start, `m` flip/diffuse iterations,
/// one Born-rule sample. Rejects empty target sets up front.
pub fn run(config: &GroverConfig) -> Result<RunReport> {
    if config.oracle.target_count() == 0 {
        return Err(Error::EmptyTargets);
    }
    run_allowing_empty(config).map(|(report, _)| report)
}

/// As [`run`] but also hands back the final register, for callers that
/// want to inspect norm drift or the full amplitude pattern.
pub fn run_returning_state(config: &GroverConfig) -> Result<(RunReport, StateVector)> {
    if config.oracle.target_count() == 0 {
        return Err(Error::EmptyTargets);
    }
    let (report, kernel) = run_allowing_empty(config)?;
    Ok((report, kernel.into_state_vector()))
}

fn run_allowing_empty<'a>(config: &'a GroverConfig) -> Result<(RunReport, RealKernel<'a>)> {
    let iterations = resolve_iterations(config)?;
    let mut kernel = RealKernel::uniform(&config.oracle, config.max_qubits)?;
    let mut trajectory = if config.capture_trajectory {
        Some(vec![kernel.trajectory_point(0)?])
    } else {
        None
    };
    for m in 1..=iterations {
        kernel.iterate();
        if let Some(points) = trajectory.as_mut() {
            points.push(kernel.trajectory_point(m)?);
        }
    }
    let success_probability = kernel.success_probability();
    kernel.check_norm()?;
    let sampled_index = kernel.sample(config.seed);
    let success = kernel.oracle.is_target(sampled_index);
    let report = RunReport {
        sampled_index,
        success,
        iterations,
        oracle_calls: iterations,
        success_probability,
        trajectory,
    };
    Ok((report, kernel))
}

/// Simulates once and records `(m, k, l, prob)` after every iteration
/// `0..=iterations`. No sampling happens; the output is deterministic.
pub fn run_trajectory(oracle: &OracleSpec, iterations: usize) -> Result<Vec<TrajectoryPoint>> {
    run_trajectory_with_cap(oracle, iterations, DEFAULT_MAX_QUBITS)
}

/// As [`run_trajectory`] with a caller-chosen register-size cap.
pub fn run_trajectory_with_cap(
    oracle: &OracleSpec,
    iterations: usize,
    cap: usize,
) -> Result<Vec<TrajectoryPoint>> {
    let mut kernel = RealKernel::uniform(oracle, cap)?;
    let mut points = Vec::with_capacity(iterations + 1);
    points.push(kernel.trajectory_point(0)?);
    for m in 1..=iterations {
        kernel.iterate();
        points.push(kernel.trajectory_point(m)?);
    }
    Ok(points)
}

/// Success probability after every iteration count `0..=max_m`. The
/// sequence is not monotone: past the peak the probability oscillates.
pub fn trajectory_scan(config: &GroverConfig, max_m: usize) -> Result<Vec<(usize, f64)>> {
    if max_m < 1 {
        return Err(Error::InvalidInput(
            "trajectory scan needs at least one iteration".to_string(),
        ));
    }
    if config.oracle.target_count() == 0 {
        return Err(Error::EmptyTargets);
    }
    let points = run_trajectory(&config.oracle, max_m)?;
    Ok(points.into_iter().map(|p| (p.m, p.prob)).collect())
}

/// The complex-register reference path: drives [`crate::transforms`]
/// directly instead of the fused real-lane kernel. Exists so the two
/// implementations can be checked against each other.
pub fn reference_run_state(oracle: &OracleSpec, iterations: usize) -> Result<StateVector> {
    let mut state = StateVector::uniform(oracle.qubit_count())?;
    for _ in 0..iterations {
        transforms::oracle_flip(&mut state, oracle)?;
        transforms::diffusion(&mut state);
    }
    Ok(state)
}

// ---------------------------------------------------------------------------
// Degeneracy-range search
// ---------------------------------------------------------------------------

/// Options for [`degeneracy_search`]: how often to retry each assumed range
/// before moving on, and the master seed. Per-run seeds derive from the
/// master by `seed ^ range_index ^ (attempt << 32)`.
#[derive(Clone, Copy, Debug)]
pub struct DegeneracyOptions {
    pub retries: usize,
    pub seed: u64,
    pub max_qubits: usize,
}

impl DegeneracyOptions {
    pub fn new(seed: u64) -> Self {
        DegeneracyOptions {
            retries: 3,
            seed,
            max_qubits: DEFAULT_MAX_QUBITS,
        }
    }

    pub fn with_retries(mut self, retries: usize) -> Self {
        self.retries = retries.max(1);
        self
    }
}

/// What [`degeneracy_search`] did and found.
#[derive(Clone, Debug, Serialize)]
pub struct DegeneracyOutcome {
    pub found_index: Option<usize>,
    pub runs: usize,
    pub ranges_tried: usize,
}

/// Searches without knowing the target count, including the count-zero
/// case. For each assumed count `2^j`, `j = 0..n-1`, runs the loop with
/// that count's schedule and classically verifies the sampled index via
/// the oracle; the first verified hit wins. Absence (no hit across all
/// ranges) is a valid result — every candidate is checked, so no false
/// positive is possible.
pub fn degeneracy_search(
    oracle: &OracleSpec,
    options: &DegeneracyOptions,
) -> Result<DegeneracyOutcome> {
    let states = oracle.state_count() as u64;
    let mut runs = 0usize;
    let mut ranges_tried = 0usize;
    for range_index in 0..oracle.qubit_count() {
        let assumed = 1u64 << range_index;
        let iterations = optimal_iterations(states, assumed)?;
        ranges_tried += 1;
        for attempt in 0..options.retries.max(1) {
            let seed = options.seed ^ (range_index as u64) ^ ((attempt as u64) << 32);
            let config = GroverConfig::new(oracle.clone(), IterationPolicy::Fixed(iterations), seed)
                .with_qubit_cap(options.max_qubits);
            let (report, _) = run_allowing_empty(&config)?;
            runs += 1;
            if oracle.evaluate(report.sampled_index)? {
                return Ok(DegeneracyOutcome {
                    found_index: Some(report.sampled_index),
                    runs,
                    ranges_tried,
                });
            }
        }
    }
    Ok(DegeneracyOutcome {
        found_index: None,
        runs,
        ranges_tried,
    })
}
