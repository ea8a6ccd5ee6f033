//! Trial-level simulation of the three setups with the full negative-
//! measurement bookkeeping and an imperfect-detector model.
//!
//! Trials draw click patterns from the exact per-setup distributions computed
//! by [`crate::observables`] (coherent-state interference at the second
//! splitter has no classical per-photon sampling scheme), then push them
//! through the same assignment, discard, and noise logic an experiment would
//! apply to its raw counts.
//!
//! Randomness is counter-based: every trial seeds a ChaCha12 stream keyed by
//! the master seed, selects the per-setup stream, and jumps to its own word
//! offset. Accumulation is integer pattern counting. Together these make the
//! result bit-identical for a fixed seed regardless of how trials are
//! sharded across workers.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::analytic::detector_error_threshold;
use crate::error::{Error, Result};
use crate::fock::{FockCutoff, InputSpec, Mode};
use crate::observables::{
    pattern_distribution, CaseLabel, ClickPattern, CorrelatorReport, ExperimentConfig, McStats,
    PatternDistribution, QAssignment, Setup,
};

/// Words of ChaCha keystream reserved per trial: one pattern draw plus up to
/// three detector-error draws, two 32-bit words each.
const WORDS_PER_TRIAL: u128 = 8;

/// Parameters of a Monte-Carlo run. The interferometer is the standard 50:50
/// one (θ = π/2).
#[derive(Debug, Clone, Copy)]
pub struct RunConfig {
    pub input: InputSpec,
    /// Intermediate dephasing damping factor.
    pub gamma: f64,
    /// Per-detector error rate: each reading flips with this probability.
    pub epsilon: f64,
    /// Trials per setup.
    pub n_trials: u64,
    pub seed: u64,
    pub cutoff: FockCutoff,
    /// Contiguous trial ranges processed (possibly in parallel) and merged;
    /// the result does not depend on this.
    pub shards: usize,
}

impl RunConfig {
    pub fn new(input: InputSpec) -> Self {
        RunConfig {
            input,
            gamma: 1.0,
            epsilon: 0.0,
            n_trials: 100_000,
            seed: 0,
            cutoff: FockCutoff::default(),
            shards: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.gamma) {
            return Err(Error::invalid(
                "gamma",
                format!("{} outside [0, 1]", self.gamma),
            ));
        }
        if !(0.0..1.0).contains(&self.epsilon) {
            return Err(Error::invalid(
                "epsilon",
                format!("{} outside [0, 1)", self.epsilon),
            ));
        }
        if self.n_trials == 0 {
            return Err(Error::invalid("n_trials", "must be at least 1"));
        }
        if self.shards == 0 {
            return Err(Error::invalid("shards", "must be at least 1"));
        }
        Ok(())
    }

    fn experiment_config(&self) -> ExperimentConfig {
        ExperimentConfig {
            gamma: self.gamma,
            cutoff: self.cutoff,
            ..Default::default()
        }
    }
}

/// One sampled trial after detector noise and case classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TrialRecord {
    pub setup: Setup,
    /// The reported pattern, detector errors included.
    pub pattern: ClickPattern,
    pub q2: Option<i8>,
    pub q3: i8,
    pub discarded: bool,
    pub case_label: Option<CaseLabel>,
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn setup_stream(setup: Setup) -> u64 {
    match setup {
        Setup::NoDetector => 0,
        Setup::DetectorR => 1,
        Setup::DetectorL => 2,
    }
}

/// Random-access generator for one trial: master-seed key, per-setup stream,
/// per-trial word position.
fn trial_rng(seed: u64, setup: Setup, trial_index: u64) -> ChaCha12Rng {
    let mut state = seed;
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    let mut rng = ChaCha12Rng::from_seed(key);
    rng.set_stream(setup_stream(setup));
    rng.set_word_pos(u128::from(trial_index) * WORDS_PER_TRIAL);
    rng
}

fn uniform(rng: &mut ChaCha12Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / 9_007_199_254_740_992.0)
}

/// Draws one trial: samples the true pattern, flips each detector reading
/// independently with probability ε, and classifies the reported pattern.
pub fn sample_trial(
    config: &RunConfig,
    setup: Setup,
    dist: &PatternDistribution,
    trial_index: u64,
) -> TrialRecord {
    let mut rng = trial_rng(config.seed, setup, trial_index);
    let true_pattern = dist.sample(uniform(&mut rng));

    // Fixed draw layout per trial regardless of ε or setup.
    let flip_t2 = uniform(&mut rng) < config.epsilon;
    let flip_l = uniform(&mut rng) < config.epsilon;
    let flip_r = uniform(&mut rng) < config.epsilon;

    let pattern = ClickPattern {
        t2_click: true_pattern.t2_click.map(|c| c ^ flip_t2),
        t3_left_click: true_pattern.t3_left_click ^ flip_l,
        t3_right_click: true_pattern.t3_right_click ^ flip_r,
    };
    let assignment = QAssignment::from_pattern(&pattern, config.input.mode);
    TrialRecord {
        setup,
        pattern,
        q2: assignment.q2,
        q3: assignment.q3,
        discarded: pattern.discarded(),
        case_label: pattern.case_label(),
    }
}

fn pattern_slot(pattern: &ClickPattern) -> usize {
    let t2 = pattern.t2_click.unwrap_or(false) as usize;
    t2 * 4 + (pattern.t3_left_click as usize) * 2 + pattern.t3_right_click as usize
}

fn count_setup(config: &RunConfig, setup: Setup, dist: &PatternDistribution) -> [u64; 8] {
    let n = config.n_trials;
    let shards = config.shards as u64;
    let bounds: Vec<(u64, u64)> = (0..shards)
        .map(|i| (i * n / shards, (i + 1) * n / shards))
        .collect();
    let merge = |mut acc: [u64; 8], other: [u64; 8]| {
        for (a, b) in acc.iter_mut().zip(other) {
            *a += b;
        }
        acc
    };
    bounds
        .into_par_iter()
        .map(|(lo, hi)| {
            let mut counts = [0u64; 8];
            for trial in lo..hi {
                let record = sample_trial(config, setup, dist, trial);
                counts[pattern_slot(&record.pattern)] += 1;
            }
            counts
        })
        .reduce(|| [0u64; 8], merge)
}

struct SetupStats {
    /// Per-setup C12 contribution: frequency of case 1b among all trials.
    c12: f64,
    /// Per-setup Σ q2·q3 over non-discarded trials, against all trials.
    e23: f64,
    var_c12: f64,
    var_e23: f64,
    /// Variance of the combined per-trial statistic 1b + q2q3/2 that feeds K.
    var_k_part: f64,
    discarded: u64,
}

fn detector_setup_stats(counts: &[u64; 8], n: u64, input_mode: Mode) -> SetupStats {
    let mut c12 = 0.0;
    let mut e23 = 0.0;
    let mut sq_c12 = 0.0;
    let mut sq_e23 = 0.0;
    let mut k_part = 0.0;
    let mut sq_k_part = 0.0;
    let mut discarded = 0u64;
    for t2 in [false, true] {
        for left in [false, true] {
            for right in [false, true] {
                let pattern = ClickPattern::intermediate(t2, left, right);
                let freq = counts[pattern_slot(&pattern)] as f64 / n as f64;
                if pattern.discarded() {
                    discarded += counts[pattern_slot(&pattern)];
                    continue;
                }
                let is_1b = matches!(pattern.case_label(), Some(CaseLabel::OneB)) as u8 as f64;
                let q2q3 =
                    pattern.q2_value().unwrap_or(0) as f64 * pattern.q3_value(input_mode) as f64;
                let u = is_1b + 0.5 * q2q3;
                c12 += is_1b * freq;
                e23 += q2q3 * freq;
                k_part += u * freq;
                sq_c12 += is_1b * is_1b * freq;
                sq_e23 += q2q3 * q2q3 * freq;
                sq_k_part += u * u * freq;
            }
        }
    }
    SetupStats {
        c12,
        e23,
        var_c12: sq_c12 - c12 * c12,
        var_e23: sq_e23 - e23 * e23,
        var_k_part: sq_k_part - k_part * k_part,
        discarded,
    }
}

/// Runs `n_trials` per setup and assembles the statistical correlator report.
///
/// C13 is the mean Q3 of the no-detector setup. C23 = ½(E_R + E_L), each
/// setup contributing Σ q2·q3 over its non-discarded trials: the trials a
/// setup discards (case 2a) are the one-sided states its mirror setup
/// measures negatively as case 1b, so the pair of setups covers every sector
/// exactly once. C12 sums the two setups' case-1b frequencies for the same
/// reason. The violation flag is the conservative K − 3·stderr(K) > 1.
pub fn estimate_correlators(config: &RunConfig) -> Result<CorrelatorReport> {
    config.validate()?;
    let exp = config.experiment_config();
    let n = config.n_trials;

    let dist_r = pattern_distribution(&config.input, &exp, Setup::DetectorR)?;
    let dist_n = pattern_distribution(&config.input, &exp, Setup::NoDetector)?;
    let dist_l = pattern_distribution(&config.input, &exp, Setup::DetectorL)?;

    let counts_r = count_setup(config, Setup::DetectorR, &dist_r);
    let counts_n = count_setup(config, Setup::NoDetector, &dist_n);
    let counts_l = count_setup(config, Setup::DetectorL, &dist_l);

    if counts_r.iter().sum::<u64>() != n
        || counts_n.iter().sum::<u64>() != n
        || counts_l.iter().sum::<u64>() != n
    {
        return Err(Error::NoUsableTrials {
            setup: "internal count mismatch",
        });
    }

    let stats_r = detector_setup_stats(&counts_r, n, config.input.mode);
    let stats_l = detector_setup_stats(&counts_l, n, config.input.mode);

    // No-detector setup: mean and variance of Q3 over the four patterns.
    let mut c13 = 0.0;
    let mut sq13 = 0.0;
    for left in [false, true] {
        for right in [false, true] {
            let pattern = ClickPattern::final_only(left, right);
            let freq = counts_n[pattern_slot(&pattern)] as f64 / n as f64;
            let q3 = pattern.q3_value(config.input.mode) as f64;
            c13 += q3 * freq;
            sq13 += q3 * q3 * freq;
        }
    }
    let var_c13 = sq13 - c13 * c13;

    let c12 = stats_r.c12 + stats_l.c12;
    let c23 = 0.5 * (stats_r.e23 + stats_l.e23);
    let k = c12 + c23 - c13;

    let bessel = if n > 1 { (n - 1) as f64 } else { 1.0 };
    let stderr_c12 = ((stats_r.var_c12 + stats_l.var_c12) / bessel).sqrt();
    let stderr_c23 = (0.25 * (stats_r.var_e23 + stats_l.var_e23) / bessel).sqrt();
    let stderr_c13 = (var_c13 / bessel).sqrt();
    // C12 and C23 share the detector-setup trials; their covariance is
    // carried by the combined per-trial statistic.
    let stderr_k = ((stats_r.var_k_part + stats_l.var_k_part + var_c13) / bessel).sqrt();

    Ok(CorrelatorReport {
        c12,
        c23,
        c13,
        k,
        violated: k - 3.0 * stderr_k > 1.0,
        stats: Some(McStats {
            stderr_c12,
            stderr_c23,
            stderr_c13,
            stderr_k,
            n_trials_per_setup: n,
            n_discarded_detector_r: stats_r.discarded,
            n_discarded_detector_l: stats_l.discarded,
        }),
    })
}

/// One row of a detector-error study.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct NoisyKRow {
    pub epsilon: f64,
    /// Overall worst-case error fraction 1 − (1−ε)³.
    pub eta: f64,
    /// Macrorealist bound 1 + 2η under that error fraction.
    pub threshold: f64,
    pub measured_k: f64,
    pub stderr_k: f64,
    /// Whether the measured K still exceeds the shifted bound.
    pub exceeds_threshold: bool,
}

/// Measures K at each detector error rate and compares it against the
/// shifted macrorealist bound 1 + 2η.
pub fn noisy_k_study(base: &RunConfig, epsilons: &[f64]) -> Result<Vec<NoisyKRow>> {
    let mut rows = Vec::with_capacity(epsilons.len());
    for &epsilon in epsilons {
        let (eta, threshold) = detector_error_threshold(epsilon)?;
        let config = RunConfig { epsilon, ..*base };
        let report = estimate_correlators(&config)?;
        let stderr_k = report.stats.map(|s| s.stderr_k).unwrap_or(0.0);
        rows.push(NoisyKRow {
            epsilon,
            eta,
            threshold,
            measured_k: report.k,
            stderr_k,
            exceeds_threshold: report.k - 3.0 * stderr_k > threshold,
        });
    }
    Ok(rows)
}
