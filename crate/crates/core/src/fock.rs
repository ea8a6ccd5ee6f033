//! Two-mode Fock space truncated by total photon number, and the photon-number
//! statistics of the supported input fields.
//!
//! The basis enumerates all |k, l⟩ with k + l ≤ n_max, grouped into blocks of
//! fixed total photon number S = k + l. Both physical transformations in this
//! crate conserve S, so truncation by total photon number loses no unitarity
//! inside the retained blocks; the only approximation is the dropped tail of
//! the input distribution, which is tracked exactly in `trace_deficit`.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Truncation cutoff: all basis states |k, l⟩ with k + l ≤ n_max are retained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FockCutoff {
    n_max: usize,
}

/// Default truncation used across the crate when nothing else is requested.
pub const DEFAULT_N_MAX: usize = 40;

/// Default upper bound on the photon-number mass allowed beyond the cutoff.
pub const DEFAULT_TAIL_TOLERANCE: f64 = 1e-12;

/// Largest cutoff for which dense two-mode density matrices are built.
/// Beyond this the block-diagonal path must be used (diagonal inputs only).
pub const DENSE_CUTOFF_LIMIT: usize = 80;

impl FockCutoff {
    pub fn new(n_max: usize) -> Result<Self> {
        if n_max < 1 {
            return Err(Error::invalid("n_max", "cutoff must be at least 1"));
        }
        Ok(FockCutoff { n_max })
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// Number of retained basis states, (n_max+1)(n_max+2)/2.
    pub fn basis_len(&self) -> usize {
        (self.n_max + 1) * (self.n_max + 2) / 2
    }

    /// Flat index of |k, l⟩: blocks ordered by S = k + l, entries by k.
    pub fn index_of(&self, k: usize, l: usize) -> usize {
        debug_assert!(k + l <= self.n_max);
        let s = k + l;
        s * (s + 1) / 2 + k
    }

    /// Inverse of `index_of`.
    pub fn state_at(&self, index: usize) -> (usize, usize) {
        debug_assert!(index < self.basis_len());
        // Largest s with s(s+1)/2 <= index.
        let mut s = ((((8 * index + 1) as f64).sqrt() - 1.0) / 2.0) as usize;
        while (s + 1) * (s + 2) / 2 <= index {
            s += 1;
        }
        while s * (s + 1) / 2 > index {
            s -= 1;
        }
        let k = index - s * (s + 1) / 2;
        (k, s - k)
    }

    /// Flat-index range of the block with total photon number s.
    pub fn block_range(&self, s: usize) -> std::ops::Range<usize> {
        debug_assert!(s <= self.n_max);
        let start = s * (s + 1) / 2;
        start..start + s + 1
    }

    /// All retained (k, l) pairs in flat-index order.
    pub fn basis_pairs(&self) -> Vec<(usize, usize)> {
        let mut pairs = Vec::with_capacity(self.basis_len());
        for s in 0..=self.n_max {
            for k in 0..=s {
                pairs.push((k, s - k));
            }
        }
        pairs
    }
}

impl Default for FockCutoff {
    fn default() -> Self {
        FockCutoff {
            n_max: DEFAULT_N_MAX,
        }
    }
}

/// One of the two field modes. The left mode is the first ket index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Mode {
    Left,
    Right,
}

impl Mode {
    pub fn other(self) -> Mode {
        match self {
            Mode::Left => Mode::Right,
            Mode::Right => Mode::Left,
        }
    }

    /// Occupation of this mode in the basis pair (k, l).
    pub fn occupation(self, pair: (usize, usize)) -> usize {
        match self {
            Mode::Left => pair.0,
            Mode::Right => pair.1,
        }
    }
}

/// Photon-number distribution of an input field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhotonDistribution {
    /// Coherent state |α⟩ (kept as a pure state).
    Coherent { alpha: Complex64 },
    /// Coherent state with all Fock-basis coherences removed.
    DephasedCoherent { alpha: Complex64 },
    /// Thermal field with dimensionless temperature parameter λ = ħω/kT.
    Thermal { lambda: f64 },
    /// Number state |n⟩.
    Fock { n: usize },
}

impl PhotonDistribution {
    /// Coherent state with the given mean photon number |α|² and zero phase.
    pub fn coherent_from_mean(mean_photons: f64) -> Result<Self> {
        if !mean_photons.is_finite() || mean_photons < 0.0 {
            return Err(Error::invalid("mean_photons", "must be >= 0"));
        }
        Ok(PhotonDistribution::Coherent {
            alpha: Complex64::new(mean_photons.sqrt(), 0.0),
        })
    }

    /// Dephased-coherent mixture with the given mean photon number.
    pub fn dephased_from_mean(mean_photons: f64) -> Result<Self> {
        if !mean_photons.is_finite() || mean_photons < 0.0 {
            return Err(Error::invalid("mean_photons", "must be >= 0"));
        }
        Ok(PhotonDistribution::DephasedCoherent {
            alpha: Complex64::new(mean_photons.sqrt(), 0.0),
        })
    }

    pub fn thermal(lambda: f64) -> Result<Self> {
        if !lambda.is_finite() || lambda <= 0.0 {
            return Err(Error::invalid(
                "lambda",
                "temperature parameter must be > 0",
            ));
        }
        Ok(PhotonDistribution::Thermal { lambda })
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            PhotonDistribution::Coherent { alpha }
            | PhotonDistribution::DephasedCoherent { alpha } => {
                if !alpha.re.is_finite() || !alpha.im.is_finite() {
                    return Err(Error::invalid("alpha", "must be finite"));
                }
            }
            PhotonDistribution::Thermal { lambda } => {
                if !lambda.is_finite() || lambda <= 0.0 {
                    return Err(Error::invalid(
                        "lambda",
                        "temperature parameter must be > 0",
                    ));
                }
            }
            PhotonDistribution::Fock { .. } => {}
        }
        Ok(())
    }

    /// Weight of photon number n.
    pub fn weight(&self, n: usize) -> f64 {
        match *self {
            PhotonDistribution::Coherent { alpha }
            | PhotonDistribution::DephasedCoherent { alpha } => poisson_weight(alpha, n),
            PhotonDistribution::Thermal { lambda } => thermal_weight(lambda, n).unwrap_or(0.0),
            PhotonDistribution::Fock { n: m } => {
                if n == m {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    /// Weights for n = 0..=n_max, evaluated by stable recurrences.
    pub fn weights(&self, n_max: usize) -> Vec<f64> {
        match *self {
            PhotonDistribution::Coherent { alpha }
            | PhotonDistribution::DephasedCoherent { alpha } => {
                let x = alpha.norm_sqr();
                let mut w = Vec::with_capacity(n_max + 1);
                let mut t = (-x).exp();
                for n in 0..=n_max {
                    w.push(t);
                    t *= x / (n + 1) as f64;
                }
                w
            }
            PhotonDistribution::Thermal { lambda } => {
                let r = (-lambda).exp();
                let mut w = Vec::with_capacity(n_max + 1);
                let mut t = 1.0 - r;
                for _ in 0..=n_max {
                    w.push(t);
                    t *= r;
                }
                w
            }
            PhotonDistribution::Fock { n } => {
                let mut w = vec![0.0; n_max + 1];
                if n <= n_max {
                    w[n] = 1.0;
                }
                w
            }
        }
    }

    /// Total weight beyond n_max, in closed form.
    pub fn tail_mass(&self, n_max: usize) -> f64 {
        match *self {
            PhotonDistribution::Coherent { alpha }
            | PhotonDistribution::DephasedCoherent { alpha } => {
                poisson_tail(alpha.norm_sqr(), n_max)
            }
            PhotonDistribution::Thermal { lambda } => (-((n_max + 1) as f64) * lambda).exp(),
            PhotonDistribution::Fock { n } => {
                if n > n_max {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    /// Smallest cutoff whose tail mass is at or below `tolerance`.
    pub fn required_cutoff(&self, tolerance: f64) -> usize {
        match *self {
            PhotonDistribution::Fock { n } => n.max(1),
            PhotonDistribution::Thermal { lambda } => {
                let mut m = ((-tolerance.ln() / lambda).ceil() as usize).max(1);
                while m > 1 && self.tail_mass(m - 1) <= tolerance {
                    m -= 1;
                }
                m
            }
            PhotonDistribution::Coherent { .. } | PhotonDistribution::DephasedCoherent { .. } => {
                let mut m = 1;
                while self.tail_mass(m) > tolerance {
                    m += 1;
                }
                m
            }
        }
    }
}

/// Input field plus the port it occupies at the first beam splitter.
///
/// `InputSpec::new` applies the conventional port for each family: coherent,
/// dephased-coherent, and Fock inputs enter on the left; thermal fields enter
/// on the right. The other mode starts in the vacuum. Correlator sign
/// conventions follow the input port, so the statistics are invariant under
/// the mirrored choice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InputSpec {
    pub dist: PhotonDistribution,
    pub mode: Mode,
}

impl InputSpec {
    pub fn new(dist: PhotonDistribution) -> Self {
        let mode = match dist {
            PhotonDistribution::Thermal { .. } => Mode::Right,
            _ => Mode::Left,
        };
        InputSpec { dist, mode }
    }

    pub fn with_mode(dist: PhotonDistribution, mode: Mode) -> Self {
        InputSpec { dist, mode }
    }
}

/// Poissonian weight e^{−|α|²} |α|^{2n} / n!, evaluated in the log domain so
/// large n does not overflow the factorial.
pub fn poisson_weight(alpha: Complex64, n: usize) -> f64 {
    let x = alpha.norm_sqr();
    if x == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    (-x + n as f64 * x.ln() - ln_factorial(n)).exp()
}

/// Thermal weight e^{−nλ}(1 − e^{−λ}) for λ > 0.
pub fn thermal_weight(lambda: f64, n: usize) -> Result<f64> {
    if !lambda.is_finite() || lambda <= 0.0 {
        return Err(Error::invalid(
            "lambda",
            "temperature parameter must be > 0",
        ));
    }
    Ok((-(n as f64) * lambda).exp() * (1.0 - (-lambda).exp()))
}

/// Tail Σ_{n > n_max} weight(n) of `dist`, in closed form.
pub fn tail_mass(dist: &PhotonDistribution, n_max: usize) -> f64 {
    dist.tail_mass(n_max)
}

fn ln_factorial(n: usize) -> f64 {
    (1..=n).map(|k| (k as f64).ln()).sum()
}

/// Upper Poisson tail Σ_{n > m} e^{−x} x^n / n!, summed forward from the first
/// dropped term so no cancellation against the bulk occurs.
fn poisson_tail(x: f64, m: usize) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let mut term = (-x + (m + 1) as f64 * x.ln() - ln_factorial(m + 1)).exp();
    let mut sum = 0.0;
    let mut n = m + 1;
    loop {
        sum += term;
        n += 1;
        term *= x / n as f64;
        if term < sum * 1e-18 + 1e-320 {
            break;
        }
    }
    sum
}

/// Density operator on the truncated two-mode space.
///
/// `trace_deficit` is the input mass lost to truncation; the physical state
/// satisfies trace + trace_deficit = 1. Projected (sub-normalized) states
/// returned by measurement updates carry the deficit of their parent.
#[derive(Debug, Clone)]
pub struct TwoModeState {
    pub cutoff: FockCutoff,
    pub matrix: Array2<Complex64>,
    pub trace_deficit: f64,
}

impl TwoModeState {
    pub fn zeros(cutoff: FockCutoff) -> Result<Self> {
        if cutoff.n_max() > DENSE_CUTOFF_LIMIT {
            return Err(Error::CutoffTooLargeForDense {
                n_max: cutoff.n_max(),
                limit: DENSE_CUTOFF_LIMIT,
            });
        }
        let d = cutoff.basis_len();
        Ok(TwoModeState {
            cutoff,
            matrix: Array2::zeros((d, d)),
            trace_deficit: 0.0,
        })
    }

    /// Rank-one density matrix |ψ⟩⟨ψ| from a (possibly sub-normalized) ket.
    pub fn from_pure(cutoff: FockCutoff, ket: &[Complex64], trace_deficit: f64) -> Result<Self> {
        let mut state = TwoModeState::zeros(cutoff)?;
        assert_eq!(ket.len(), cutoff.basis_len());
        for (i, a) in ket.iter().enumerate() {
            if a.norm_sqr() == 0.0 {
                continue;
            }
            for (j, b) in ket.iter().enumerate() {
                state.matrix[(i, j)] = a * b.conj();
            }
        }
        state.trace_deficit = trace_deficit;
        Ok(state)
    }

    pub fn element(&self, k: usize, l: usize, kp: usize, lp: usize) -> Complex64 {
        self.matrix[(self.cutoff.index_of(k, l), self.cutoff.index_of(kp, lp))]
    }

    pub fn trace(&self) -> f64 {
        self.matrix.diag().iter().map(|z| z.re).sum()
    }

    /// Checks hermiticity, real non-negative diagonal, and trace + deficit = 1.
    pub fn validate(&self) -> Result<()> {
        let d = self.cutoff.basis_len();
        for i in 0..d {
            let diag = self.matrix[(i, i)];
            if diag.im.abs() > 1e-12 || diag.re < -1e-12 {
                return Err(Error::invalid(
                    "state",
                    format!("bad diagonal at {i}: {diag}"),
                ));
            }
            for j in (i + 1)..d {
                let delta = self.matrix[(i, j)] - self.matrix[(j, i)].conj();
                if delta.norm() > 1e-12 {
                    return Err(Error::invalid(
                        "state",
                        format!("hermiticity violated at ({i},{j}) by {:.3e}", delta.norm()),
                    ));
                }
            }
        }
        let total = self.trace() + self.trace_deficit;
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::invalid(
                "state",
                format!("trace + deficit = {total}, expected 1"),
            ));
        }
        Ok(())
    }

    /// Diagonal weight aggregated over the four occupancy sectors.
    pub fn sector_weights(&self) -> SectorWeights {
        let mut w = SectorWeights::default();
        for (idx, (k, l)) in self.cutoff.basis_pairs().into_iter().enumerate() {
            let p = self.matrix[(idx, idx)].re;
            match (k, l) {
                (0, 0) => w.vacuum += p,
                (_, 0) => w.left_only += p,
                (0, _) => w.right_only += p,
                _ => w.both += p,
            }
        }
        w
    }
}

/// Diagonal mass split by which modes are occupied.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SectorWeights {
    pub vacuum: f64,
    pub left_only: f64,
    pub right_only: f64,
    pub both: f64,
}

impl SectorWeights {
    pub fn total(&self) -> f64 {
        self.vacuum + self.left_only + self.right_only + self.both
    }
}

/// Builds the input density matrix for `spec` on the given cutoff.
///
/// Pure coherent inputs become rank-one matrices; dephased-coherent and
/// thermal inputs become diagonal mixtures; Fock inputs a single diagonal
/// entry. The occupied mode follows `spec.mode`. Fails if the truncated tail
/// exceeds `DEFAULT_TAIL_TOLERANCE`; use `build_input_state_with_tolerance`
/// to override.
pub fn build_input_state(spec: &InputSpec, cutoff: FockCutoff) -> Result<TwoModeState> {
    build_input_state_with_tolerance(spec, cutoff, DEFAULT_TAIL_TOLERANCE)
}

pub fn build_input_state_with_tolerance(
    spec: &InputSpec,
    cutoff: FockCutoff,
    tail_tolerance: f64,
) -> Result<TwoModeState> {
    spec.dist.validate()?;
    let n_max = cutoff.n_max();
    if let PhotonDistribution::Fock { n } = spec.dist {
        if n > n_max {
            return Err(Error::FockExceedsCutoff { n, n_max });
        }
    }
    let tail = spec.dist.tail_mass(n_max);
    if tail > tail_tolerance {
        return Err(Error::TailMassAboveTolerance {
            tail,
            tolerance: tail_tolerance,
            n_max,
        });
    }

    let index_for = |n: usize| match spec.mode {
        Mode::Left => cutoff.index_of(n, 0),
        Mode::Right => cutoff.index_of(0, n),
    };

    match spec.dist {
        PhotonDistribution::Coherent { alpha } => {
            // Ket amplitudes e^{−|α|²/2} α^n / √(n!), by recurrence.
            let mut ket = vec![Complex64::new(0.0, 0.0); cutoff.basis_len()];
            let mut amp = Complex64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
            for n in 0..=n_max {
                ket[index_for(n)] = amp;
                amp *= alpha / ((n + 1) as f64).sqrt();
            }
            TwoModeState::from_pure(cutoff, &ket, tail)
        }
        PhotonDistribution::DephasedCoherent { .. }
        | PhotonDistribution::Thermal { .. }
        | PhotonDistribution::Fock { .. } => {
            let mut state = TwoModeState::zeros(cutoff)?;
            for (n, w) in spec.dist.weights(n_max).into_iter().enumerate() {
                let idx = index_for(n);
                state.matrix[(idx, idx)] = Complex64::new(w, 0.0);
            }
            state.trace_deficit = tail;
            Ok(state)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn cutoff_rejects_zero() {
        assert!(FockCutoff::new(0).is_err());
        assert!(FockCutoff::new(1).is_ok());
    }

    #[test]
    fn basis_len_matches_enumeration() {
        let cutoff = FockCutoff::new(7).unwrap();
        assert_eq!(cutoff.basis_len(), 36);
        assert_eq!(cutoff.basis_pairs().len(), 36);
    }

    #[test]
    fn poisson_weight_vacuum_and_unit_mean() {
        let zero = Complex64::new(0.0, 0.0);
        assert_eq!(poisson_weight(zero, 0), 1.0);
        assert_eq!(poisson_weight(zero, 3), 0.0);
        let one = Complex64::new(1.0, 0.0);
        assert_abs_diff_eq!(poisson_weight(one, 1), (-1.0f64).exp(), epsilon = 1e-15);
        assert_abs_diff_eq!(poisson_weight(one, 1), 0.367879441171, epsilon = 1e-12);
    }

    #[test]
    fn poisson_weight_survives_large_n() {
        let alpha = Complex64::new(20.0f64.sqrt(), 0.0);
        let w = poisson_weight(alpha, 400);
        assert!(w.is_finite() && (0.0..1e-200).contains(&w));
    }

    #[test]
    fn thermal_weight_examples() {
        // Zero-temperature limit is vacuum.
        assert_abs_diff_eq!(thermal_weight(50.0, 0).unwrap(), 1.0, epsilon = 1e-12);
        // λ = ln 2, n = 1: (1/2)(1/2).
        assert_abs_diff_eq!(
            thermal_weight(2.0f64.ln(), 1).unwrap(),
            0.25,
            epsilon = 1e-15
        );
        assert!(thermal_weight(0.0, 1).is_err());
        assert!(thermal_weight(-1.0, 0).is_err());
    }

    #[test]
    fn thermal_weights_sum_to_one() {
        let dist = PhotonDistribution::thermal(0.5).unwrap();
        let total: f64 = dist.weights(200).iter().sum::<f64>() + dist.tail_mass(200);
        assert_abs_diff_eq!(total, 1.0, epsilon = 1e-12);
        let direct: f64 = dist.weights(200).iter().sum();
        assert_abs_diff_eq!(direct, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn tail_mass_closed_forms() {
        assert_eq!(tail_mass(&PhotonDistribution::Fock { n: 3 }, 5), 0.0);
        assert_eq!(tail_mass(&PhotonDistribution::Fock { n: 6 }, 5), 1.0);
        let coh = PhotonDistribution::coherent_from_mean(1.0).unwrap();
        assert_abs_diff_eq!(tail_mass(&coh, 0), 1.0 - (-1.0f64).exp(), epsilon = 1e-14);
        let th = PhotonDistribution::thermal(1.0).unwrap();
        assert_abs_diff_eq!(tail_mass(&th, 0), (-1.0f64).exp(), epsilon = 1e-15);
    }

    #[test]
    fn required_cutoff_bounds_tail() {
        for dist in [
            PhotonDistribution::coherent_from_mean(4.0).unwrap(),
            PhotonDistribution::thermal(0.05).unwrap(),
            PhotonDistribution::thermal(3.0).unwrap(),
        ] {
            let m = dist.required_cutoff(1e-12);
            assert!(dist.tail_mass(m) <= 1e-12);
            if m > 1 {
                assert!(dist.tail_mass(m - 1) > 1e-12);
            }
        }
    }

    #[test]
    fn fock_input_is_single_entry() {
        let cutoff = FockCutoff::new(4).unwrap();
        let spec = InputSpec::new(PhotonDistribution::Fock { n: 1 });
        let state = build_input_state(&spec, cutoff).unwrap();
        assert_eq!(state.element(1, 0, 1, 0), Complex64::new(1.0, 0.0));
        assert_abs_diff_eq!(state.trace(), 1.0, epsilon = 1e-15);
        state.validate().unwrap();
    }

    #[test]
    fn fock_beyond_cutoff_is_rejected() {
        let cutoff = FockCutoff::new(4).unwrap();
        let spec = InputSpec::new(PhotonDistribution::Fock { n: 5 });
        assert!(matches!(
            build_input_state(&spec, cutoff),
            Err(Error::FockExceedsCutoff { .. })
        ));
    }

    #[test]
    fn coherent_vacuum_entry_matches_poisson() {
        let cutoff = FockCutoff::new(40).unwrap();
        let spec = InputSpec::new(PhotonDistribution::coherent_from_mean(2.0).unwrap());
        let state = build_input_state(&spec, cutoff).unwrap();
        assert_abs_diff_eq!(
            state.element(0, 0, 0, 0).re,
            (-2.0f64).exp(),
            epsilon = 1e-14
        );
        state.validate().unwrap();
    }

    #[test]
    fn dephased_input_has_no_coherences() {
        let cutoff = FockCutoff::new(30).unwrap();
        let spec = InputSpec::new(PhotonDistribution::dephased_from_mean(2.0).unwrap());
        let state = build_input_state(&spec, cutoff).unwrap();
        for n in 0..=30usize {
            assert_abs_diff_eq!(
                state.element(n, 0, n, 0).re,
                poisson_weight(Complex64::new(2.0f64.sqrt(), 0.0), n),
                epsilon = 1e-14
            );
            for m in 0..n {
                assert_eq!(state.element(n, 0, m, 0), Complex64::new(0.0, 0.0));
            }
        }
    }

    #[test]
    fn thermal_input_occupies_right_mode() {
        let cutoff = FockCutoff::new(60).unwrap();
        let spec = InputSpec::new(PhotonDistribution::thermal(0.5).unwrap());
        assert_eq!(spec.mode, Mode::Right);
        let state = build_input_state(&spec, cutoff).unwrap();
        assert_abs_diff_eq!(
            state.element(0, 1, 0, 1).re,
            thermal_weight(0.5, 1).unwrap(),
            epsilon = 1e-15
        );
        assert_eq!(state.element(1, 0, 1, 0), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn tail_above_tolerance_is_rejected_unless_overridden() {
        let cutoff = FockCutoff::new(10).unwrap();
        let spec = InputSpec::new(PhotonDistribution::thermal(0.05).unwrap());
        assert!(matches!(
            build_input_state(&spec, cutoff),
            Err(Error::TailMassAboveTolerance { .. })
        ));
        let state = build_input_state_with_tolerance(&spec, cutoff, 1.0).unwrap();
        assert_abs_diff_eq!(state.trace() + state.trace_deficit, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn input_states_are_positive_semidefinite() {
        // Diagonal families: non-negative diagonal. Coherent: rank one, so all
        // 2x2 principal minors vanish.
        let cutoff = FockCutoff::new(25).unwrap();
        for spec in [
            InputSpec::new(PhotonDistribution::dephased_from_mean(3.0).unwrap()),
            InputSpec::new(PhotonDistribution::thermal(1.0).unwrap()),
            InputSpec::new(PhotonDistribution::Fock { n: 4 }),
        ] {
            let state = build_input_state_with_tolerance(&spec, cutoff, 1e-9).unwrap();
            for i in 0..cutoff.basis_len() {
                assert!(state.matrix[(i, i)].re >= -1e-12);
            }
        }
        let spec = InputSpec::new(PhotonDistribution::Coherent {
            alpha: Complex64::new(1.0, 0.7),
        });
        let state = build_input_state(&spec, FockCutoff::new(40).unwrap()).unwrap();
        for i in 0..50 {
            for j in 0..50 {
                let minor = state.matrix[(i, i)].re * state.matrix[(j, j)].re
                    - state.matrix[(i, j)].norm_sqr();
                assert!(minor.abs() < 1e-12);
            }
        }
    }

    proptest! {
        #[test]
        fn basis_index_roundtrips(k in 0usize..40, l in 0usize..40) {
            prop_assume!(k + l <= 40);
            let cutoff = FockCutoff::new(40).unwrap();
            let idx = cutoff.index_of(k, l);
            prop_assert_eq!(cutoff.state_at(idx), (k, l));
            prop_assert!(idx < cutoff.basis_len());
        }

        #[test]
        fn trace_plus_deficit_is_one(mean in 0.0f64..8.0, lambda in 0.05f64..5.0, n in 0usize..30) {
            let cutoff = FockCutoff::new(60).unwrap();
            for spec in [
                InputSpec::new(PhotonDistribution::coherent_from_mean(mean).unwrap()),
                InputSpec::new(PhotonDistribution::dephased_from_mean(mean).unwrap()),
                InputSpec::new(PhotonDistribution::thermal(lambda).unwrap()),
                InputSpec::new(PhotonDistribution::Fock { n }),
            ] {
                let state = build_input_state_with_tolerance(&spec, cutoff, 1.0).unwrap();
                prop_assert!((state.trace() + state.trace_deficit - 1.0).abs() < 1e-12);
            }
        }
    }
}
