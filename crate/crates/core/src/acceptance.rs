//! Cross-validation gate: every headline number of the simulator checked at
//! its pinned tolerance, one criterion per claim. Ran by the `lgi check`
//! subcommand and by the `acceptance` integration-test target.

use std::time::{Duration, Instant};

use crate::analytic::{
    argmax_k, detector_error_threshold, golden_section_max, k_coherent, k_dephasing, k_thermal,
    AnalyticCurve,
};
use crate::fock::{FockCutoff, InputSpec, Mode, PhotonDistribution};
use crate::montecarlo::{estimate_correlators, RunConfig};
use crate::observables::{
    appendix_a_fixture, k_exact, projected_rho3, ExperimentConfig, FockBlock,
};

/// Result of one acceptance criterion.
#[derive(Debug, Clone)]
pub struct CriterionOutcome {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub details: Vec<String>,
    pub runtime: Duration,
}

impl std::fmt::Display for CriterionOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "criterion {:>2} [{}] {} ({:.2?})",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.runtime,
        )
    }
}

struct Gate {
    passed: bool,
    details: Vec<String>,
}

impl Gate {
    fn new() -> Self {
        Gate {
            passed: true,
            details: Vec::new(),
        }
    }

    fn require(&mut self, ok: bool, detail: String) {
        if !ok {
            self.passed = false;
            self.details.push(format!("FAIL {detail}"));
        }
    }

    fn note(&mut self, detail: String) {
        self.details.push(detail);
    }

    /// Wall-clock bounds describe the optimized build; unoptimized test runs
    /// record the time without failing on it.
    fn require_runtime(&mut self, elapsed: Duration, bound: Duration) {
        if cfg!(debug_assertions) {
            self.note(format!(
                "runtime {elapsed:.2?} (bound {bound:.2?} enforced in optimized builds only)"
            ));
        } else {
            self.require(
                elapsed < bound,
                format!("runtime {elapsed:.2?} exceeds {bound:.2?}"),
            );
        }
    }

    fn finish(self, id: usize, name: &'static str, started: Instant) -> CriterionOutcome {
        CriterionOutcome {
            id,
            name,
            passed: self.passed,
            details: self.details,
            runtime: started.elapsed(),
        }
    }
}

fn grid(min: f64, max: f64, steps: usize) -> Vec<f64> {
    (0..steps)
        .map(|i| min + (max - min) * i as f64 / (steps - 1) as f64)
        .collect()
}

const GAMMA_FAMILY: [f64; 6] = [0.0, 0.05, 0.1, 0.3, 0.5, 1.0];

/// Criterion 1: single photon gives C12 = 1, C23 = 0, C13 = −1, K = 2.
fn criterion_1() -> CriterionOutcome {
    let started = Instant::now();
    let mut gate = Gate::new();
    let report = k_exact(
        &InputSpec::new(PhotonDistribution::Fock { n: 1 }),
        &ExperimentConfig::default(),
    )
    .expect("single-photon evaluation");
    for (label, value, target) in [
        ("c12", report.c12, 1.0),
        ("c23", report.c23, 0.0),
        ("c13", report.c13, -1.0),
        ("k", report.k, 2.0),
    ] {
        gate.require(
            (value - target).abs() <= 1e-12,
            format!("{label} = {value:.15} expected {target} within 1e-12"),
        );
    }
    gate.require(report.violated, "violation flag not raised at K = 2".into());
    let elapsed = started.elapsed();
    gate.require_runtime(elapsed, Duration::from_secs(1));
    gate.note(format!("K = {:.15}, runtime {elapsed:.2?}", report.k));
    gate.finish(1, "single photon: K = 2 exactly", started)
}

/// Criterion 2: coherent K curve matches 1 + 4e^{−3x/4}sinh(x/4) on 101
/// points, and the maximum sits at x = 2 ln 2 with K = 1.5.
fn criterion_2() -> CriterionOutcome {
    let started = Instant::now();
    let mut gate = Gate::new();
    let config = ExperimentConfig::default();
    let mut worst = 0.0f64;
    for x in grid(0.0, 6.0, 101) {
        let input = InputSpec::new(PhotonDistribution::coherent_from_mean(x).unwrap());
        let engine = k_exact(&input, &config).unwrap();
        let target = k_coherent(x).unwrap();
        let tol = 1e-10 + input.dist.tail_mass(config.cutoff.n_max());
        let dev = (engine.k - target).abs();
        worst = worst.max(dev);
        gate.require(
            dev <= tol,
            format!("x = {x:.3}: |ΔK| = {dev:.3e} > {tol:.3e}"),
        );
    }
    gate.note(format!(
        "largest curve deviation {worst:.3e} over 101 points"
    ));

    let (x_gs, k_gs) = golden_section_max(|x| k_coherent(x).unwrap(), 1e-6, 10.0, 1e-10);
    let x_star = 2.0 * 2.0f64.ln();
    gate.require(
        (k_gs - 1.5).abs() <= 1e-9,
        format!("searched maximum {k_gs:.12} differs from 1.5 by more than 1e-9"),
    );
    gate.require(
        (x_gs - x_star).abs() <= 1e-4,
        format!("searched maximizer {x_gs:.8} vs 2 ln 2 = {x_star:.8}"),
    );
    gate.note(format!(
        "maximum {k_gs:.12} at x = {x_gs:.8} (closed form {x_star:.8})"
    ));

    gate.require_runtime(started.elapsed(), Duration::from_secs(30));
    gate.finish(2, "coherent K curve and its maximum 1.5 at 2 ln 2", started)
}

/// Criterion 3: the dephased-coherent input reproduces the same curve.
fn criterion_3() -> CriterionOutcome {
    let started = Instant::now();
    let mut gate = Gate::new();
    let config = ExperimentConfig::default();
    let mut worst = 0.0f64;
    for x in grid(0.0, 6.0, 101) {
        let input = InputSpec::new(PhotonDistribution::dephased_from_mean(x).unwrap());
        let engine = k_exact(&input, &config).unwrap();
        let target = k_coherent(x).unwrap();
        let dev = (engine.k - target).abs();
        worst = worst.max(dev);
        gate.require(
            dev <= 1e-10,
            format!("x = {x:.3}: |ΔK| = {dev:.3e} > 1e-10"),
        );
    }
    gate.note(format!(
        "largest deviation from the coherent curve {worst:.3e}"
    ));
    gate.finish(3, "dephased input reproduces the coherent curve", started)
}

/// Criterion 4: thermal curve matches 1 + 2(1−e^{−λ})/(2e^λ−1) on
/// λ ∈ [0.05, 5], with its maximum ≈ 1.343146 at λ = ln(1 + 1/√2).
fn criterion_4() -> CriterionOutcome {
    let started = Instant::now();
    let mut gate = Gate::new();
    let mut worst = 0.0f64;
    for lambda in grid(0.05, 5.0, 100) {
        let dist = PhotonDistribution::thermal(lambda).unwrap();
        let cutoff = FockCutoff::new(dist.required_cutoff(1e-12)).unwrap();
        let engine = k_exact(
            &InputSpec::new(dist),
            &ExperimentConfig::with_cutoff(cutoff),
        )
        .unwrap();
        let target = k_thermal(lambda).unwrap();
        let dev = (engine.k - target).abs();
        worst = worst.max(dev);
        gate.require(
            dev <= 1e-10,
            format!(
                "λ = {lambda:.4}: |ΔK| = {dev:.3e} > 1e-10 (cutoff {})",
                cutoff.n_max()
            ),
        );
    }
    gate.note(format!(
        "largest curve deviation {worst:.3e} over 100 points"
    ));

    let lambda_star = (1.0 + 1.0 / 2.0f64.sqrt()).ln();
    let k_star = 1.0 + 2.0 / (1.0 + 2.0f64.sqrt()).powi(2);
    match argmax_k(&AnalyticCurve::ThermalK) {
        Ok((l, k)) => {
            gate.require(
                (l - lambda_star).abs() <= 1e-9 && (k - k_star).abs() <= 1e-9,
                format!(
                    "argmax ({l:.10}, {k:.10}) vs closed form ({lambda_star:.10}, {k_star:.10})"
                ),
            );
            gate.note(format!("maximum {k:.10} at λ = {l:.10}"));
        }
        Err(e) => gate.require(false, format!("argmax verification failed: {e}")),
    }
    let dist = PhotonDistribution::thermal(lambda_star).unwrap();
    let cutoff = FockCutoff::new(dist.required_cutoff(1e-12)).unwrap();
    let engine = k_exact(
        &InputSpec::new(dist),
        &ExperimentConfig::with_cutoff(cutoff),
    )
    .unwrap();
    gate.require(
        (engine.k - k_star).abs() <= 1e-9,
        format!("engine at λ_M: {:.12} vs {k_star:.12}", engine.k),
    );
    gate.finish(4, "thermal K curve and its maximum 1.343146", started)
}

/// Criterion 5: the dephasing family K′(x, γ) on γ ∈ {0, 0.05, 0.1, 0.3,
/// 0.5, 1}: curve match at 1e-10, γ = 0 never above 1, and the per-γ maximum
/// checked against the stated target 1 + γ/(1+γ) at x = 2 ln(1+γ).
///
/// The stated maximum target is algebraically inconsistent with the stated
/// curve for γ strictly between 0 and 1: the curve's own maximum at
/// x = 2 ln(1+γ) evaluates to γ + 1/(1+γ) = 1 + γ²/(1+γ). The curve match,
/// the maximizer location, and the γ ∈ {0, 1} endpoints all hold; the value
/// check is asserted as stated and reports the discrepancy.
fn criterion_5() -> CriterionOutcome {
    let started = Instant::now();
    let mut gate = Gate::new();
    let config = ExperimentConfig::default();
    let mut worst_coherent = 0.0f64;
    let mut worst_dephased = 0.0f64;
    for &gamma in &GAMMA_FAMILY {
        for x in grid(0.0, 6.0, 41) {
            let input = InputSpec::new(PhotonDistribution::coherent_from_mean(x).unwrap());
            let engine = k_exact(&input, &config.gamma(gamma)).unwrap();
            let target = k_dephasing(x, gamma).unwrap();
            let tol = 1e-10 + input.dist.tail_mass(config.cutoff.n_max());
            let dev = (engine.k - target).abs();
            worst_coherent = worst_coherent.max(dev);
            gate.require(
                dev <= tol,
                format!("coherent x = {x:.3}, γ = {gamma}: |ΔK| = {dev:.3e} > {tol:.3e}"),
            );
            if gamma == 0.0 {
                gate.require(
                    engine.k <= 1.0 + 1e-12,
                    format!(
                        "γ = 0 engine curve above 1 at x = {x:.3}: K = {:.15}",
                        engine.k
                    ),
                );
            }
        }
        for x in grid(0.0, 6.0, 101) {
            let input = InputSpec::new(PhotonDistribution::dephased_from_mean(x).unwrap());
            let engine = k_exact(&input, &config.gamma(gamma)).unwrap();
            let dev = (engine.k - k_dephasing(x, gamma).unwrap()).abs();
            worst_dephased = worst_dephased.max(dev);
            gate.require(
                dev <= 1e-10,
                format!("dephased x = {x:.3}, γ = {gamma}: |ΔK| = {dev:.3e} > 1e-10"),
            );
        }
    }
    gate.note(format!(
        "largest curve deviation: coherent {worst_coherent:.3e}, dephased {worst_dephased:.3e}"
    ));

    for &gamma in &GAMMA_FAMILY {
        let x_star = 2.0 * (1.0 + gamma).ln();
        let stated = 1.0 + gamma / (1.0 + gamma);
        let bracket_lo = 1e-6;
        let (x_gs, k_gs) =
            golden_section_max(|x| k_dephasing(x, gamma).unwrap(), bracket_lo, 10.0, 1e-10);
        let loc_ok = (x_gs - x_star).abs() <= 1e-4 || (x_star < bracket_lo && x_gs <= 2e-6);
        gate.require(
            loc_ok,
            format!("γ = {gamma}: maximizer {x_gs:.8} vs 2 ln(1+γ) = {x_star:.8}"),
        );
        let value_dev = (k_gs - stated).abs();
        gate.require(
            value_dev <= 1e-9,
            format!(
                "γ = {gamma}: maximum {k_gs:.12} vs stated 1+γ/(1+γ) = {stated:.12} \
                 (curve maximum equals 1+γ²/(1+γ) = {:.12})",
                1.0 + gamma * gamma / (1.0 + gamma)
            ),
        );
        if value_dev <= 1e-9 {
            gate.note(format!("γ = {gamma}: maximum {k_gs:.12} at x = {x_gs:.6}"));
        }
    }
    gate.finish(
        5,
        "dephasing family: curves, γ=0 bound, per-γ maxima",
        started,
    )
}

/// Criterion 6: Tr(Q̂2 ρ2(n, γ)) = 2^{1−n}, γ-independent.
fn criterion_6() -> CriterionOutcome {
    let started = Instant::now();
    let mut gate = Gate::new();
    for gamma in [0.0, 0.3, 0.7, 1.0] {
        let vacuum = appendix_a_fixture(0, gamma).unwrap();
        gate.require(
            vacuum.abs() <= 1e-12,
            format!("n = 0, γ = {gamma}: fixture {vacuum:.3e} expected 0"),
        );
        for n in 1..=12usize {
            let expected = 2.0f64.powi(1 - n as i32);
            let value = appendix_a_fixture(n, gamma).unwrap();
            gate.require(
                (value - expected).abs() <= 1e-12,
                format!("n = {n}, γ = {gamma}: fixture {value:.15} expected {expected:.15}"),
            );
        }
    }
    gate.note("Tr(Q̂2 ρ2(n, γ)) = 2^{1−n} for n ∈ [1,12], γ ∈ {0, 0.3, 0.7, 1}".into());
    gate.finish(6, "intermediate-state Q2 trace identity", started)
}

/// Criterion 7: the projected output state ρ̃3(n): |0,n⟩⟨0,n| at γ = 1, and
/// the γ-damped submatrix with the (1/4ⁿ)C(2n,n) weight in general.
fn criterion_7() -> CriterionOutcome {
    let started = Instant::now();
    let mut gate = Gate::new();
    for n in 0..=12usize {
        // The undamped ρ3(n) is pure; check every element of the full block
        // against the projector onto |0,n⟩.
        let block = FockBlock::new(n, std::f64::consts::FRAC_PI_2, Mode::Left);
        let rho3 = block.rho3_block(1.0, std::f64::consts::FRAC_PI_2);
        let mut worst = 0.0f64;
        for j in 0..=n {
            for k in 0..=n {
                let expected = if j == 0 && k == 0 { 1.0 } else { 0.0 };
                worst = worst.max((rho3[(j, k)] - expected).abs());
            }
        }
        gate.require(
            worst <= 1e-12,
            format!("n = {n}: ρ3 deviates from |0,n⟩⟨0,n| by {worst:.3e}"),
        );
    }
    gate.note("ρ̃3(n) = |0,n⟩⟨0,n| for n ∈ [0,12] at γ = 1".into());

    for n in 0..=10usize {
        for gamma in [0.0, 0.5] {
            let state = projected_rho3(n, gamma).unwrap();
            if n == 0 {
                gate.require(
                    (state.element(0, 0, 0, 0).re - 1.0).abs() <= 1e-12,
                    format!("n = 0, γ = {gamma}: vacuum weight drifted"),
                );
                continue;
            }
            let binom: f64 = (1..=n).map(|j| (n + j) as f64 / j as f64).product();
            let coeff = binom / 4.0f64.powi(n as i32) * (1.0 - gamma);
            let top = state.element(n, 0, n, 0).re;
            let bottom = state.element(0, n, 0, n).re;
            gate.require(
                (top - coeff).abs() <= 1e-12,
                format!("n = {n}, γ = {gamma}: ⟨n,0| entry {top:.15} expected {coeff:.15}"),
            );
            gate.require(
                (bottom - (gamma + coeff)).abs() <= 1e-12,
                format!(
                    "n = {n}, γ = {gamma}: ⟨0,n| entry {bottom:.15} expected {:.15}",
                    gamma + coeff
                ),
            );
        }
    }
    gate.note("damped submatrix carries (1/4ⁿ)C(2n,n)(1−γ) for n ∈ [0,10], γ ∈ {0, 0.5}".into());
    gate.finish(7, "projected output-state identities", started)
}

/// Criterion 8: C23 vanishes and C12 ignores γ across every family and
/// parameter used by criteria 2–5.
fn criterion_8() -> CriterionOutcome {
    let started = Instant::now();
    let mut gate = Gate::new();
    let gammas = [0.0, 0.05, 0.3, 1.0];
    let mut worst_c23 = 0.0f64;
    let mut worst_spread = 0.0f64;

    let mut sweep = |label: &str, dist_for: &dyn Fn() -> PhotonDistribution, cutoff: FockCutoff| {
        let mut c12s = Vec::new();
        for &gamma in &gammas {
            let config = ExperimentConfig::with_cutoff(cutoff).gamma(gamma);
            let report = k_exact(&InputSpec::new(dist_for()), &config).unwrap();
            worst_c23 = worst_c23.max(report.c23.abs());
            gate.require(
                report.c23.abs() < 1e-12,
                format!("{label}: |C23| = {:.3e} at γ = {gamma}", report.c23.abs()),
            );
            c12s.push(report.c12);
        }
        let spread = c12s.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
            - c12s.iter().cloned().fold(f64::INFINITY, f64::min);
        worst_spread = worst_spread.max(spread);
        gate.require(
            spread < 1e-12,
            format!("{label}: C12 spread across γ = {spread:.3e}"),
        );
    };

    let cutoff40 = FockCutoff::default();
    for &x in &[0.5, 1.0, 2.0 * 2.0f64.ln(), 2.5, 4.0, 6.0] {
        sweep(
            &format!("coherent x = {x:.3}"),
            &|| PhotonDistribution::coherent_from_mean(x).unwrap(),
            cutoff40,
        );
        sweep(
            &format!("dephased x = {x:.3}"),
            &|| PhotonDistribution::dephased_from_mean(x).unwrap(),
            cutoff40,
        );
    }
    for &lambda in &[0.05, 0.3, 1.0, 2.0, 5.0] {
        let dist = PhotonDistribution::thermal(lambda).unwrap();
        let cutoff = FockCutoff::new(dist.required_cutoff(1e-12)).unwrap();
        sweep(
            &format!("thermal λ = {lambda:.2}"),
            &|| PhotonDistribution::thermal(lambda).unwrap(),
            cutoff,
        );
    }
    sweep(
        "fock n = 1",
        &|| PhotonDistribution::Fock { n: 1 },
        cutoff40,
    );

    gate.note(format!(
        "largest |C23| = {worst_c23:.3e}, largest C12 γ-spread = {worst_spread:.3e}"
    ));
    gate.finish(8, "C23 nullity and C12 γ-independence everywhere", started)
}

/// Criterion 9: Monte-Carlo consistency at 10⁶ trials per setup, the
/// single-photon discard fraction, and shard-count bit-exactness.
fn criterion_9() -> CriterionOutcome {
    let started = Instant::now();
    let mut gate = Gate::new();
    let x_star = 2.0 * 2.0f64.ln();
    let lambda_star = (1.0 + 1.0 / 2.0f64.sqrt()).ln();
    let thermal = PhotonDistribution::thermal(lambda_star).unwrap();
    let thermal_cutoff = FockCutoff::new(thermal.required_cutoff(1e-12)).unwrap();

    let cases: Vec<(&str, InputSpec, f64, FockCutoff)> = vec![
        (
            "fock(1)",
            InputSpec::new(PhotonDistribution::Fock { n: 1 }),
            1.0,
            FockCutoff::default(),
        ),
        (
            "coherent x = 2 ln 2, γ = 1",
            InputSpec::new(PhotonDistribution::coherent_from_mean(x_star).unwrap()),
            1.0,
            FockCutoff::default(),
        ),
        (
            "coherent x = 2 ln 2, γ = 0",
            InputSpec::new(PhotonDistribution::coherent_from_mean(x_star).unwrap()),
            0.0,
            FockCutoff::default(),
        ),
        ("thermal λ_M", InputSpec::new(thermal), 1.0, thermal_cutoff),
    ];

    for (i, (label, input, gamma, cutoff)) in cases.iter().enumerate() {
        let config = RunConfig {
            gamma: *gamma,
            n_trials: 1_000_000,
            seed: 20_260_810 + i as u64,
            cutoff: *cutoff,
            ..RunConfig::new(*input)
        };
        let report = estimate_correlators(&config).unwrap();
        let stats = report.stats.unwrap();
        let exact = k_exact(input, &ExperimentConfig::with_cutoff(*cutoff).gamma(*gamma)).unwrap();
        let dev = (report.k - exact.k).abs();
        gate.require(
            dev < 4.0 * stats.stderr_k,
            format!(
                "{label}: |K_mc − K_exact| = {dev:.3e} vs 4σ = {:.3e}",
                4.0 * stats.stderr_k
            ),
        );
        gate.note(format!(
            "{label}: K_mc = {:.6} ± {:.6}, K_exact = {:.6}",
            report.k, stats.stderr_k, exact.k
        ));

        if i == 0 {
            let n = config.n_trials as f64;
            let sigma = 0.5 / n.sqrt();
            for (side, discarded) in [
                ("R", stats.n_discarded_detector_r),
                ("L", stats.n_discarded_detector_l),
            ] {
                let frac = discarded as f64 / n;
                gate.require(
                    (frac - 0.5).abs() < 3.0 * sigma,
                    format!("fock(1) discard fraction {side} = {frac:.5} vs 0.5 ± 3σ"),
                );
            }
            gate.note(format!(
                "fock(1) discard fractions: R = {:.5}, L = {:.5}",
                stats.n_discarded_detector_r as f64 / n,
                stats.n_discarded_detector_l as f64 / n
            ));
        }
    }

    // Bit-exact reproducibility across shard counts.
    let base = RunConfig {
        n_trials: 100_000,
        seed: 424_242,
        epsilon: 0.05,
        ..RunConfig::new(InputSpec::new(
            PhotonDistribution::coherent_from_mean(x_star).unwrap(),
        ))
    };
    let reference = estimate_correlators(&base).unwrap();
    for shards in [4usize, 7] {
        let report = estimate_correlators(&RunConfig { shards, ..base }).unwrap();
        let same = report.k.to_bits() == reference.k.to_bits()
            && report.c12.to_bits() == reference.c12.to_bits()
            && report.c23.to_bits() == reference.c23.to_bits()
            && report.c13.to_bits() == reference.c13.to_bits()
            && report.stats.unwrap().stderr_k.to_bits()
                == reference.stats.unwrap().stderr_k.to_bits();
        gate.require(same, format!("shards = {shards} changed the report bits"));
    }
    gate.note("reports bit-identical for shard counts {1, 4, 7}".into());

    gate.require_runtime(started.elapsed(), Duration::from_secs(120));
    gate.finish(
        9,
        "Monte-Carlo consistency, discards, shard determinism",
        started,
    )
}

/// Criterion 10: detector-error threshold arithmetic and that both classical
/// maxima clear the ε = 5% bound.
fn criterion_10() -> CriterionOutcome {
    let started = Instant::now();
    let mut gate = Gate::new();
    let (eta, threshold) = detector_error_threshold(0.05).unwrap();
    gate.require(
        (eta - 0.142625).abs() <= 1e-15,
        format!("η = {eta:.17} expected 0.142625"),
    );
    gate.require(
        (threshold - 1.28525).abs() <= 1e-15,
        format!("threshold = {threshold:.17} expected 1.28525"),
    );
    gate.require(
        1.5 > threshold,
        "coherent maximum does not clear the bound".into(),
    );
    let thermal_max = 1.0 + 2.0 / (1.0 + 2.0f64.sqrt()).powi(2);
    gate.require(
        thermal_max > threshold,
        format!("thermal maximum {thermal_max:.6} does not clear the bound"),
    );
    gate.note(format!(
        "ε = 0.05 → η = {eta:.6}, bound {threshold:.6}; 1.5 and {thermal_max:.6} both exceed it"
    ));
    gate.finish(10, "detector-error thresholds", started)
}

/// Runs one criterion by id (1–10).
pub fn run_criterion(id: usize) -> CriterionOutcome {
    match id {
        1 => criterion_1(),
        2 => criterion_2(),
        3 => criterion_3(),
        4 => criterion_4(),
        5 => criterion_5(),
        6 => criterion_6(),
        7 => criterion_7(),
        8 => criterion_8(),
        9 => criterion_9(),
        10 => criterion_10(),
        _ => panic!("criterion ids run from 1 to 10"),
    }
}

/// Runs the whole gate in order.
pub fn run_acceptance() -> Vec<CriterionOutcome> {
    (1..=10).map(run_criterion).collect()
}
