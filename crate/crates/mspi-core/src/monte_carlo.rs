//! Logical error rate estimation over a binary symmetric channel.
//!
//! Trials are seeded counter-style: one ChaCha stream per (alpha index,
//! trial index) pair derived from the master seed, so a sweep's counts are
//! identical for any worker count or scheduling order. Outcomes are
//! classified up to degeneracy: an estimate is a success when the residual
//! `e ^ e_hat` lies in the rowspace of the same-type stabilizer matrix.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::code::TwoBlockCssCode;
use crate::decoder::{Decoder, DecoderConfig};
use crate::gf2::{BitMatrix, BitVector, RowSpace};
use crate::tanner::{TannerError, TannerGraph};

use std::fmt;

/// Errors from channel setup and sweep configuration.
#[derive(Debug)]
pub enum MonteCarloError {
    AlphaOutOfRange(f64),
    InvalidTrials,
    InvalidCounts { successes: u64, trials: u64 },
    InvalidConfidence(f64),
    Graph(TannerError),
    /// Trial index space is 2^40 per alpha.
    TooManyTrials(u64),
}

impl fmt::Display for MonteCarloError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MonteCarloError::AlphaOutOfRange(a) => {
                write!(f, "crossover probability {a} out of range (0, 0.5)")
            }
            MonteCarloError::InvalidTrials => write!(f, "trial count must be at least 1"),
            MonteCarloError::InvalidCounts { successes, trials } => {
                write!(f, "invalid counts: {successes} successes out of {trials} trials")
            }
            MonteCarloError::InvalidConfidence(c) => {
                write!(f, "confidence {c} out of range (0, 1)")
            }
            MonteCarloError::Graph(e) => write!(f, "{e}"),
            MonteCarloError::TooManyTrials(t) => write!(f, "trial count {t} exceeds 2^40"),
        }
    }
}

impl std::error::Error for MonteCarloError {}

impl From<TannerError> for MonteCarloError {
    fn from(e: TannerError) -> Self {
        MonteCarloError::Graph(e)
    }
}

// ---------------------------------------------------------------------------
// Channel
// ---------------------------------------------------------------------------

/// Binary symmetric channel with crossover probability `alpha` in (0, 1/2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BscChannel {
    alpha: f64,
}

impl BscChannel {
    pub fn new(alpha: f64) -> Result<Self, MonteCarloError> {
        if !(alpha > 0.0 && alpha < 0.5) {
            return Err(MonteCarloError::AlphaOutOfRange(alpha));
        }
        Ok(Self { alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Channel prior `ln((1 - alpha) / alpha)`.
    pub fn llr(&self) -> f64 {
        ((1.0 - self.alpha) / self.alpha).ln()
    }

    /// Draw `n` i.i.d. Bernoulli(alpha) bits from the stream.
    pub fn sample_error<R: Rng>(&self, n: usize, rng: &mut R) -> BitVector {
        let mut e = BitVector::zeros(n);
        for i in 0..n {
            if rng.gen::<f64>() < self.alpha {
                e.set(i, true);
            }
        }
        e
    }
}

/// The deterministic per-trial stream: master seed keys the cipher, the
/// (alpha, trial) pair selects the stream.
pub fn trial_rng(master_seed: u64, alpha_index: usize, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(((alpha_index as u64) << 40) | trial);
    rng
}

// ---------------------------------------------------------------------------
// Classification
// ---------------------------------------------------------------------------

/// Outcome of a single decoding trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrialOutcome {
    /// Syndrome matched and the residual is a stabilizer.
    DegenerateSuccess,
    /// Syndrome matched but the residual is outside the stabilizer rowspace.
    LogicalError,
    /// Iteration budget exhausted without matching the syndrome.
    NonConvergence,
}

/// Classify a finished trial against a prebuilt stabilizer rowspace.
pub fn classify_with(
    error: &BitVector,
    estimate: &BitVector,
    matched: bool,
    stabilizers: &RowSpace,
) -> TrialOutcome {
    assert_eq!(error.len(), estimate.len(), "error/estimate length mismatch");
    if !matched {
        return TrialOutcome::NonConvergence;
    }
    let residual = error.xor(estimate);
    if residual.is_zero() || stabilizers.contains(&residual) {
        TrialOutcome::DegenerateSuccess
    } else {
        TrialOutcome::LogicalError
    }
}

/// Classify a finished trial; `stabilizer_rows` is the same-type stabilizer
/// matrix (H_X when decoding X errors). Builds the rowspace on each call;
/// use [`classify_with`] in hot loops.
pub fn classify(
    error: &BitVector,
    estimate: &BitVector,
    matched: bool,
    stabilizer_rows: &BitMatrix,
) -> TrialOutcome {
    classify_with(error, estimate, matched, &stabilizer_rows.row_space())
}

// ---------------------------------------------------------------------------
// Wilson interval
// ---------------------------------------------------------------------------

/// Wilson score interval for a binomial proportion, robust at the very low
/// event counts typical near logical error rates of 1e-4.
pub fn wilson_interval(k: u64, n: u64, confidence: f64) -> Result<(f64, f64), MonteCarloError> {
    if n == 0 || k > n {
        return Err(MonteCarloError::InvalidCounts { successes: k, trials: n });
    }
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(MonteCarloError::InvalidConfidence(confidence));
    }
    use statrs::distribution::{ContinuousCDF, Normal};
    let normal = Normal::new(0.0, 1.0).expect("standard normal");
    let z = normal.inverse_cdf(1.0 - (1.0 - confidence) / 2.0);
    let n_f = n as f64;
    let p = k as f64 / n_f;
    let z2 = z * z;
    let denom = 1.0 + z2 / n_f;
    let center = (p + z2 / (2.0 * n_f)) / denom;
    let half = (z / denom) * (p * (1.0 - p) / n_f + z2 / (4.0 * n_f * n_f)).sqrt();
    Ok(((center - half).max(0.0), (center + half).min(1.0)))
}

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

/// Which Pauli error type the sweep decodes. X errors are decoded with H_Z
/// and classified against the rowspace of H_X; Z is the mirror image.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Side {
    X,
    Z,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::X => write!(f, "x"),
            Side::Z => write!(f, "z"),
        }
    }
}

/// Per-alpha aggregate of a sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub alpha: f64,
    pub trials: u64,
    pub degenerate_success: u64,
    pub logical_error: u64,
    pub nonconvergence: u64,
    /// `(logical_error + nonconvergence) / trials`.
    pub ler: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub mean_iters: f64,
}

/// Echo of the configuration that produced a sweep, for provenance.
#[derive(Debug, Clone, Serialize)]
pub struct SweepSettings {
    pub code: String,
    pub n: usize,
    pub k: usize,
    pub side: Side,
    pub variant: String,
    pub beta: f64,
    pub max_iters: usize,
    pub pi_assignment: String,
    pub trials: u64,
    pub master_seed: u64,
    pub confidence: f64,
}

/// Full sweep result with one row per alpha.
#[derive(Debug, Clone, Serialize)]
pub struct SweepResult {
    pub settings: SweepSettings,
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    /// CSV rendering, one row per alpha. Stable across runs and worker
    /// counts for identical inputs.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "alpha,trials,degenerate_success,logical_error,nonconvergence,ler,ci_low,ci_high,mean_iters,seed\n",
        );
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{}\n",
                r.alpha,
                r.trials,
                r.degenerate_success,
                r.logical_error,
                r.nonconvergence,
                r.ler,
                r.ci_low,
                r.ci_high,
                r.mean_iters,
                self.settings.master_seed
            ));
        }
        out
    }

    /// JSON mirror with the configuration echo.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("sweep result serializes")
    }
}

#[derive(Default, Clone, Copy)]
struct Tally {
    success: u64,
    logical: u64,
    nonconv: u64,
    iterations: u64,
}

impl Tally {
    fn add(mut self, other: Tally) -> Tally {
        self.success += other.success;
        self.logical += other.logical;
        self.nonconv += other.nonconv;
        self.iterations += other.iterations;
        self
    }
}

/// Run a seed-reproducible logical-error-rate sweep.
///
/// For each alpha and trial: sample an error on its own counter-derived
/// stream, compute its syndrome, decode, classify. Counts are independent of
/// `workers` because every trial is a pure function of
/// `(master_seed, alpha index, trial index)` and aggregation is a sum.
/// `workers = 0` uses the rayon default.
pub fn run_sweep(
    code: &TwoBlockCssCode,
    side: Side,
    config: &DecoderConfig,
    alphas: &[f64],
    trials: u64,
    master_seed: u64,
    workers: usize,
) -> Result<SweepResult, MonteCarloError> {
    if trials == 0 {
        return Err(MonteCarloError::InvalidTrials);
    }
    if trials >= 1u64 << 40 {
        return Err(MonteCarloError::TooManyTrials(trials));
    }
    let (h_dec, h_stab) = match side {
        Side::X => (code.h_z(), code.h_x()),
        Side::Z => (code.h_x(), code.h_z()),
    };
    let graph = TannerGraph::from_matrix(h_dec, code.block_size())?;
    let stabilizers = h_stab.row_space();
    let n = code.n();

    // Validate every alpha before burning cycles on any of them.
    let channels: Vec<BscChannel> = alphas
        .iter()
        .map(|&a| BscChannel::new(a))
        .collect::<Result<_, _>>()?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("thread pool");

    let confidence = 0.95;
    let mut rows = Vec::with_capacity(alphas.len());
    for (alpha_index, channel) in channels.iter().enumerate() {
        // The decoder prior follows the channel being swept, not the alpha
        // stored in the config.
        let cfg = reprior(config, channel.alpha());
        let tally = pool.install(|| {
            (0..trials)
                .into_par_iter()
                .map_init(
                    || Decoder::new(&graph, &cfg),
                    |decoder, trial| {
                        let mut rng = trial_rng(master_seed, alpha_index, trial);
                        let error = channel.sample_error(n, &mut rng);
                        let syndrome = h_dec.mul_vec_t(&error);
                        let summary = decoder.decode(&syndrome);
                        let outcome = classify_with(
                            &error,
                            decoder.estimate(),
                            summary.matched,
                            &stabilizers,
                        );
                        let mut t = Tally { iterations: summary.iterations_used as u64, ..Default::default() };
                        match outcome {
                            TrialOutcome::DegenerateSuccess => t.success = 1,
                            TrialOutcome::LogicalError => t.logical = 1,
                            TrialOutcome::NonConvergence => t.nonconv = 1,
                        }
                        t
                    },
                )
                .reduce(Tally::default, Tally::add)
        });
        let failures = tally.logical + tally.nonconv;
        let (ci_low, ci_high) = wilson_interval(failures, trials, confidence)?;
        rows.push(SweepRow {
            alpha: channel.alpha(),
            trials,
            degenerate_success: tally.success,
            logical_error: tally.logical,
            nonconvergence: tally.nonconv,
            ler: failures as f64 / trials as f64,
            ci_low,
            ci_high,
            mean_iters: tally.iterations as f64 / trials as f64,
        });
    }

    Ok(SweepResult {
        settings: SweepSettings {
            code: code.name().unwrap_or("custom").to_string(),
            n: code.n(),
            k: code.k(),
            side,
            variant: config.variant().to_string(),
            beta: config.beta(),
            max_iters: config.max_iters(),
            pi_assignment: config.pi_assignment().to_string(),
            trials,
            master_seed,
            confidence,
        },
        rows,
    })
}

/// Same decoder settings with the prior retargeted to a sweep alpha.
fn reprior(config: &DecoderConfig, alpha: f64) -> DecoderConfig {
    DecoderConfig::new(config.variant(), config.beta(), config.max_iters(), alpha)
        .expect("validated alpha")
        .with_pi_assignment(config.pi_assignment())
        .expect("assignment already validated")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::preset;

    #[test]
    fn channel_rejects_bad_alpha() {
        assert!(BscChannel::new(0.0).is_err());
        assert!(BscChannel::new(0.5).is_err());
        assert!(BscChannel::new(-0.1).is_err());
        assert!(BscChannel::new(0.1).is_ok());
    }

    #[test]
    fn near_zero_alpha_samples_are_empty() {
        let channel = BscChannel::new(1e-12).unwrap();
        for trial in 0..100 {
            let mut rng = trial_rng(1, 0, trial);
            assert_eq!(channel.sample_error(144, &mut rng).weight(), 0);
        }
    }

    #[test]
    fn near_half_alpha_mean_weight() {
        let channel = BscChannel::new(0.499).unwrap();
        let n = 100usize;
        let draws = 100_000u64;
        let mut total = 0usize;
        for trial in 0..draws {
            let mut rng = trial_rng(2, 0, trial);
            total += channel.sample_error(n, &mut rng).weight();
        }
        let mean = total as f64 / draws as f64;
        let expected = n as f64 * 0.499;
        // 3 sigma of the sample mean of Binomial(n, alpha).
        let sigma = (n as f64 * 0.499 * 0.501 / draws as f64).sqrt();
        assert!((mean - expected).abs() < 3.0 * sigma, "mean {mean} vs {expected}");
    }

    #[test]
    fn fixed_seed_reproduces_samples() {
        let channel = BscChannel::new(0.1).unwrap();
        let a = channel.sample_error(256, &mut trial_rng(7, 3, 41));
        let b = channel.sample_error(256, &mut trial_rng(7, 3, 41));
        assert_eq!(a, b);
        let c = channel.sample_error(256, &mut trial_rng(7, 3, 42));
        assert_ne!(a, c);
    }

    #[test]
    fn classify_exact_recovery_is_success() {
        let code = preset("bb-72").unwrap();
        let e = BitVector::from_support(72, &[5, 40]);
        assert_eq!(
            classify(&e, &e, true, code.h_x()),
            TrialOutcome::DegenerateSuccess
        );
    }

    #[test]
    fn classify_stabilizer_residual_is_success() {
        let code = preset("bb-72").unwrap();
        let e = BitVector::zeros(72);
        let e_hat = code.h_x().row(3);
        assert_eq!(
            classify(&e, &e_hat, true, code.h_x()),
            TrialOutcome::DegenerateSuccess
        );
    }

    #[test]
    fn classify_logical_residual_is_logical_error() {
        let code = preset("bb-144").unwrap();
        // A logical representative: in ker(H_Z) but outside rowspace(H_X).
        let rowspace = code.h_x().row_space();
        let logical = code
            .h_z()
            .nullspace()
            .into_iter()
            .find(|v| !rowspace.contains(v))
            .expect("k > 0 guarantees a logical representative");
        let e = BitVector::zeros(144);
        assert_eq!(
            classify(&e, &logical, true, code.h_x()),
            TrialOutcome::LogicalError
        );
    }

    #[test]
    fn classify_unmatched_is_nonconvergence() {
        let e = BitVector::zeros(8);
        let stab = BitMatrix::identity(8);
        assert_eq!(classify(&e, &e, false, &stab), TrialOutcome::NonConvergence);
    }

    #[test]
    fn classify_small_stabilizer_sums_never_logical() {
        let code = preset("bb-90").unwrap();
        let h_x = code.h_x();
        let space = h_x.row_space();
        let mut rng = trial_rng(11, 0, 0);
        for _ in 0..200 {
            let mut residual = BitVector::zeros(90);
            let picks = rng.gen_range(0..=3usize);
            for _ in 0..picks {
                let r = rng.gen_range(0..h_x.rows());
                residual.xor_assign(&h_x.row(r));
            }
            let e = BitVector::zeros(90);
            let outcome = classify_with(&e, &residual, true, &space);
            assert_eq!(outcome, TrialOutcome::DegenerateSuccess);
        }
    }

    #[test]
    fn wilson_frozen_values() {
        // Closed-form evaluation at z = Phi^{-1}(0.975).
        let (low, high) = wilson_interval(0, 100, 0.95).unwrap();
        assert_eq!(low, 0.0);
        assert!((high - 0.0369934982).abs() < 1e-9, "high = {high}");

        let (low, high) = wilson_interval(50, 100, 0.95).unwrap();
        assert!((0.5 - low - (high - 0.5)).abs() < 1e-12, "symmetric about 0.5");

        let (_, high) = wilson_interval(100, 100, 0.95).unwrap();
        assert_eq!(high, 1.0);
    }

    #[test]
    fn wilson_rejects_bad_counts() {
        assert!(wilson_interval(5, 4, 0.95).is_err());
        assert!(wilson_interval(0, 0, 0.95).is_err());
        assert!(wilson_interval(1, 2, 0.0).is_err());
    }

    #[test]
    fn sweep_is_worker_count_independent() {
        let code = preset("bb-72").unwrap();
        let config = DecoderConfig::nms(0.875, 50, 0.05).unwrap();
        let a = run_sweep(&code, Side::X, &config, &[0.05], 100, 99, 1).unwrap();
        let b = run_sweep(&code, Side::X, &config, &[0.05], 100, 99, 8).unwrap();
        assert_eq!(a.to_csv(), b.to_csv());
        let row = &a.rows[0];
        assert_eq!(
            row.degenerate_success + row.logical_error + row.nonconvergence,
            row.trials
        );
        assert_eq!(row.ler, (row.logical_error + row.nonconvergence) as f64 / 100.0);
    }

    #[test]
    fn sweep_rejects_zero_trials_and_bad_alpha() {
        let code = preset("bb-72").unwrap();
        let config = DecoderConfig::nms(0.875, 50, 0.05).unwrap();
        assert!(matches!(
            run_sweep(&code, Side::X, &config, &[0.05], 0, 1, 1),
            Err(MonteCarloError::InvalidTrials)
        ));
        assert!(matches!(
            run_sweep(&code, Side::X, &config, &[0.0], 10, 1, 1),
            Err(MonteCarloError::AlphaOutOfRange(_))
        ));
    }

    #[test]
    fn more_iterations_never_hurt_under_paired_seeds() {
        let code = preset("bb-72").unwrap();
        let short = DecoderConfig::nms(0.875, 10, 0.05).unwrap();
        let long = DecoderConfig::nms(0.875, 50, 0.05).unwrap();
        let a = run_sweep(&code, Side::X, &short, &[0.06], 400, 5, 0).unwrap();
        let b = run_sweep(&code, Side::X, &long, &[0.06], 400, 5, 0).unwrap();
        // Extra iterations can only convert nonconvergences; matched
        // outcomes are final, so LER cannot increase.
        assert!(b.rows[0].ler <= a.rows[0].ler);
        assert!(b.rows[0].nonconvergence <= a.rows[0].nonconvergence);
    }

    #[test]
    fn z_side_sweep_runs() {
        let code = preset("bb-72").unwrap();
        let config = DecoderConfig::nms(0.875, 50, 0.05).unwrap();
        let res = run_sweep(&code, Side::Z, &config, &[0.04], 50, 3, 0).unwrap();
        assert_eq!(res.rows.len(), 1);
        assert_eq!(res.rows[0].trials, 50);
    }
}
