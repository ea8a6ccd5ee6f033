//! Observable assignment, exact correlators, and click-pattern statistics.
//!
//! The dichotomy-free assignment maps mode occupancies to values:
//!
//! | L      | R      | Q1 | Q2 | Q3 |
//! |--------|--------|----|----|----|
//! | vacuum | vacuum | +1 | 0  | −1 |
//! | vacuum | photons| —  | +1 | −1 |
//! | photons| vacuum | +1 | +1 | +1 |
//! | photons| photons| —  | 0  | 0  |
//!
//! Q1 = +1 by preparation. Q2 = +1 exactly when one intermediate mode is in
//! the vacuum and the other is not, which is what a negative (no-click)
//! measurement certifies. The Q3 sign convention follows the input port: the
//! bright output (where all flux arrives when nothing is measured in between)
//! reads −1, so a thermal field entering on the right is scored through the
//! mirrored operator.
//!
//! Correlators are computed two independent ways: a dense density-matrix
//! pipeline over the full truncated space, and a block pipeline that resolves
//! number-diagonal inputs into one total-photon-number block per Fock
//! component. Both share the beam-splitter block machinery; nothing here uses
//! the closed-form curves.

use ndarray::Array2;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::channels::{
    apply_beam_splitter, apply_dephasing, bs_block, bs_column, negative_measurement_update,
    BeamSplitter, DephasingChannel,
};
use crate::error::{Error, Result};
use crate::fock::{
    build_input_state_with_tolerance, FockCutoff, InputSpec, Mode, PhotonDistribution,
    TwoModeState, DEFAULT_TAIL_TOLERANCE,
};

/// Experiment parameters shared by the exact engines.
#[derive(Debug, Clone, Copy)]
pub struct ExperimentConfig {
    /// Off-diagonal damping of the intermediate dephasing channel; 1 = none.
    pub gamma: f64,
    /// Beam-splitter angle; π/2 gives the 50:50 splitter.
    pub theta: f64,
    pub cutoff: FockCutoff,
    /// Intermediate mode the dephasing acts on.
    pub dephasing_mode: Mode,
    /// Maximum input mass allowed beyond the cutoff.
    pub tail_tolerance: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            gamma: 1.0,
            theta: std::f64::consts::FRAC_PI_2,
            cutoff: FockCutoff::default(),
            dephasing_mode: Mode::Right,
            tail_tolerance: DEFAULT_TAIL_TOLERANCE,
        }
    }
}

impl ExperimentConfig {
    pub fn with_cutoff(cutoff: FockCutoff) -> Self {
        ExperimentConfig {
            cutoff,
            ..Default::default()
        }
    }

    pub fn gamma(mut self, gamma: f64) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.gamma) {
            return Err(Error::invalid(
                "gamma",
                format!("{} outside [0, 1]", self.gamma),
            ));
        }
        if !self.theta.is_finite() {
            return Err(Error::invalid("theta", "must be finite"));
        }
        if !self.tail_tolerance.is_finite() || self.tail_tolerance <= 0.0 {
            return Err(Error::invalid("tail_tolerance", "must be > 0"));
        }
        Ok(())
    }
}

/// A diagonal operator in the two-mode Fock basis.
#[derive(Debug, Clone)]
pub struct DiagonalObservable {
    cutoff: FockCutoff,
    values: Vec<f64>,
}

impl DiagonalObservable {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn eigenvalue(&self, k: usize, l: usize) -> f64 {
        self.values[self.cutoff.index_of(k, l)]
    }

    pub fn expectation(&self, state: &TwoModeState) -> Result<f64> {
        if state.cutoff != self.cutoff {
            return Err(Error::CutoffMismatch {
                state: state.cutoff.n_max(),
                operator: self.cutoff.n_max(),
            });
        }
        Ok(state
            .matrix
            .diag()
            .iter()
            .zip(&self.values)
            .map(|(z, v)| z.re * v)
            .sum())
    }
}

/// Q̂2 = Σ_{n≥1} |0,n⟩⟨0,n| + |n,0⟩⟨n,0|: +1 when all photons sit in one
/// mode, 0 on the vacuum and on doubly occupied states.
pub fn q2_operator(cutoff: FockCutoff) -> DiagonalObservable {
    let values = cutoff
        .basis_pairs()
        .into_iter()
        .map(|(k, l)| if (k == 0) != (l == 0) { 1.0 } else { 0.0 })
        .collect();
    DiagonalObservable { cutoff, values }
}

/// Q̂3 oriented for an input on `input_mode`.
///
/// For a left input: +1 on |n≥1, 0⟩, −1 on |0, n≥1⟩ and on the vacuum, 0 on
/// doubly occupied states. A right input mirrors the ±1 roles; the vacuum
/// keeps −1 either way.
pub fn q3_operator(cutoff: FockCutoff, input_mode: Mode) -> DiagonalObservable {
    let values = cutoff
        .basis_pairs()
        .into_iter()
        .map(|(k, l)| q3_value_for_occupancy(k, l, input_mode))
        .collect();
    DiagonalObservable { cutoff, values }
}

fn q3_value_for_occupancy(k: usize, l: usize, input_mode: Mode) -> f64 {
    let (dark, bright) = match input_mode {
        Mode::Left => (k, l),
        Mode::Right => (l, k),
    };
    match (dark, bright) {
        (0, 0) => -1.0,
        (_, 0) => 1.0,
        (0, _) => -1.0,
        _ => 0.0,
    }
}

/// Detector layout of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Setup {
    /// Intermediate detector on the right mode.
    DetectorR,
    /// No intermediate detection.
    NoDetector,
    /// Intermediate detector on the left mode.
    DetectorL,
}

impl Setup {
    pub fn label(&self) -> &'static str {
        match self {
            Setup::DetectorR => "detector-right",
            Setup::NoDetector => "no-detector",
            Setup::DetectorL => "detector-left",
        }
    }

    pub fn has_intermediate_detector(&self) -> bool {
        !matches!(self, Setup::NoDetector)
    }
}

/// Click pattern of one trial. `t2_click` is absent in the no-detector setup.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ClickPattern {
    pub t2_click: Option<bool>,
    pub t3_left_click: bool,
    pub t3_right_click: bool,
}

impl ClickPattern {
    pub fn intermediate(t2: bool, left: bool, right: bool) -> Self {
        ClickPattern {
            t2_click: Some(t2),
            t3_left_click: left,
            t3_right_click: right,
        }
    }

    pub fn final_only(left: bool, right: bool) -> Self {
        ClickPattern {
            t2_click: None,
            t3_left_click: left,
            t3_right_click: right,
        }
    }

    fn any_t3(&self) -> bool {
        self.t3_left_click || self.t3_right_click
    }

    /// Q3 read off the output clicks, with the ±1 roles following the input
    /// port (the dark port alone clicking scores +1).
    pub fn q3_value(&self, input_mode: Mode) -> i8 {
        let (dark, bright) = match input_mode {
            Mode::Left => (self.t3_left_click, self.t3_right_click),
            Mode::Right => (self.t3_right_click, self.t3_left_click),
        };
        match (dark, bright) {
            (true, true) => 0,
            (true, false) => 1,
            (false, _) => -1,
        }
    }

    /// Q2 for intermediate-detector setups, or None when unobservable.
    pub fn q2_value(&self) -> Option<i8> {
        self.t2_click.map(|t2| match (t2, self.any_t3()) {
            (false, false) => 0, // nothing anywhere: no photons at all
            (false, true) => 1,  // negative measurement: all photons opposite
            (true, false) => 1,  // direct click, nothing later (discarded)
            (true, true) => 0,   // photons on both sides
        })
    }

    pub fn case_label(&self) -> Option<CaseLabel> {
        self.t2_click.map(|t2| match (t2, self.any_t3()) {
            (false, false) => CaseLabel::OneA,
            (false, true) => CaseLabel::OneB,
            (true, false) => CaseLabel::TwoA,
            (true, true) => CaseLabel::TwoB,
        })
    }

    /// Only case 2a is discarded: a direct intermediate click with silent
    /// output detectors. Those trials reappear as case 1b of the mirrored
    /// setup.
    pub fn discarded(&self) -> bool {
        matches!(self.case_label(), Some(CaseLabel::TwoA))
    }
}

/// Case taxonomy of intermediate-detector trials.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CaseLabel {
    /// No t2 click, no t3 clicks: vacuum, Q2 = 0.
    OneA,
    /// No t2 click, t3 clicks: Q2 = +1 known negatively.
    OneB,
    /// t2 click, no t3 clicks: Q2 = +1 measured invasively; discarded.
    TwoA,
    /// t2 click and t3 clicks: Q2 = 0, invasiveness annihilated.
    TwoB,
}

impl std::fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CaseLabel::OneA => "1a",
            CaseLabel::OneB => "1b",
            CaseLabel::TwoA => "2a",
            CaseLabel::TwoB => "2b",
        })
    }
}

/// Assigned observable values of one trial; Q1 is +1 by preparation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct QAssignment {
    pub q1: i8,
    pub q2: Option<i8>,
    pub q3: i8,
}

impl QAssignment {
    pub fn from_pattern(pattern: &ClickPattern, input_mode: Mode) -> Self {
        QAssignment {
            q1: 1,
            q2: pattern.q2_value(),
            q3: pattern.q3_value(input_mode),
        }
    }
}

/// Monte-Carlo uncertainty attachments of a [`CorrelatorReport`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McStats {
    pub stderr_c12: f64,
    pub stderr_c23: f64,
    pub stderr_c13: f64,
    pub stderr_k: f64,
    pub n_trials_per_setup: u64,
    pub n_discarded_detector_r: u64,
    pub n_discarded_detector_l: u64,
}

/// The three temporal correlators and K = C12 + C23 − C13.
///
/// `violated` uses the strict bound K > 1 for exact reports and the
/// conservative K − 3·stderr(K) > 1 for Monte-Carlo reports.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorrelatorReport {
    pub c12: f64,
    pub c23: f64,
    pub c13: f64,
    pub k: f64,
    pub violated: bool,
    pub stats: Option<McStats>,
}

impl CorrelatorReport {
    pub(crate) fn exact(c12: f64, c23: f64, c13: f64) -> Self {
        let k = c12 + c23 - c13;
        CorrelatorReport {
            c12,
            c23,
            c13,
            k,
            violated: k > 1.0,
            stats: None,
        }
    }
}

// ---------------------------------------------------------------------------
// Dense pipeline
// ---------------------------------------------------------------------------

fn rho2_dense(
    input: &InputSpec,
    config: &ExperimentConfig,
    bs: &BeamSplitter,
) -> Result<TwoModeState> {
    let rho1 = build_input_state_with_tolerance(input, config.cutoff, config.tail_tolerance)?;
    let rho2 = apply_beam_splitter(&rho1, bs)?;
    let channel = DephasingChannel::new(config.gamma, config.dephasing_mode)?;
    Ok(apply_dephasing(&rho2, &channel))
}

/// Keeps only the sector with every photon in `occupied` (the other mode in
/// the vacuum on both sides, at least one photon present).
fn one_sided_sector(state: &TwoModeState, occupied: Mode) -> TwoModeState {
    let mut out = state.clone();
    let pairs = state.cutoff.basis_pairs();
    let keep: Vec<bool> = pairs
        .iter()
        .map(|&p| occupied.occupation(p) >= 1 && occupied.other().occupation(p) == 0)
        .collect();
    for (i, row) in out.matrix.rows_mut().into_iter().enumerate() {
        for (j, z) in row.into_iter().enumerate() {
            if !(keep[i] && keep[j]) {
                *z = Complex64::new(0.0, 0.0);
            }
        }
    }
    out
}

/// Exact correlators through the dense density-matrix pipeline. Works for
/// every input family (the only route for pure coherent inputs, whose
/// coherences between photon-number sectors a block engine cannot carry).
pub fn k_exact_dense(input: &InputSpec, config: &ExperimentConfig) -> Result<CorrelatorReport> {
    config.validate()?;
    let bs = BeamSplitter::new(config.theta, config.cutoff);
    let rho2 = rho2_dense(input, config, &bs)?;
    let q2 = q2_operator(config.cutoff);
    let q3 = q3_operator(config.cutoff, input.mode);

    let c12 = q2.expectation(&rho2)?;
    let rho3 = apply_beam_splitter(&rho2, &bs)?;
    let c13 = q3.expectation(&rho3)?;

    // C23 from the two one-sided sectors of ρ2: the left-only sector is the
    // negatively measured state of the detector-right setup, the right-only
    // sector of the detector-left setup; the two setups enter with weight ½.
    let left_sector = one_sided_sector(&rho2, Mode::Left);
    let right_sector = one_sided_sector(&rho2, Mode::Right);
    let e_detector_r = q3.expectation(&apply_beam_splitter(&left_sector, &bs)?)?;
    let e_detector_l = q3.expectation(&apply_beam_splitter(&right_sector, &bs)?)?;
    let c23 = 0.5 * (e_detector_r + e_detector_l);

    Ok(CorrelatorReport::exact(c12, c23, c13))
}

// ---------------------------------------------------------------------------
// Block pipeline for number-diagonal inputs
// ---------------------------------------------------------------------------

/// Exact per-block engine for a Fock component |n⟩ entering on `input_mode`.
///
/// The input lives entirely in the block of total photon number n, and every
/// later map stays there, so the evolution reduces to the block unitary
/// U^{(n)}. Only the rows and columns the diagonal observables read are
/// extracted: a row of U(θ) is a column of U(−θ) since the blocks are
/// orthogonal.
pub(crate) struct FockBlock {
    n: usize,
    input_mode: Mode,
    /// B acting on the input: column n (left input) or 0 (right input).
    u: Vec<f64>,
    /// B|n,0⟩ and B|0,n⟩: the one-sided sectors through the second splitter.
    col_top: Vec<f64>,
    col_bottom: Vec<f64>,
    /// Rows n and 0 of the block: ⟨n,0|B|·⟩ and ⟨0,n|B|·⟩.
    row_top: Vec<f64>,
    row_bottom: Vec<f64>,
}

impl FockBlock {
    pub(crate) fn new(n: usize, theta: f64, input_mode: Mode) -> Self {
        let col_top = bs_column(theta, n, n);
        let col_bottom = bs_column(theta, n, 0);
        let row_top = bs_column(-theta, n, n);
        let row_bottom = bs_column(-theta, n, 0);
        let u = match input_mode {
            Mode::Left => col_top.clone(),
            Mode::Right => col_bottom.clone(),
        };
        FockBlock {
            n,
            input_mode,
            u,
            col_top,
            col_bottom,
            row_top,
            row_bottom,
        }
    }

    /// Q3 eigenvalue at block index j (occupancy |j, n−j⟩).
    fn q3_at(&self, j: usize) -> f64 {
        q3_value_for_occupancy(j, self.n - j, self.input_mode)
    }

    /// Σ_j q3(j)·col[j]² — the Q3 expectation of a pure block state.
    fn q3_weighted(&self, col: &[f64]) -> f64 {
        if self.n == 0 {
            return -col[0] * col[0];
        }
        self.q3_at(self.n) * col[self.n] * col[self.n] + self.q3_at(0) * col[0] * col[0]
    }

    /// Diagonal of ρ3(n, γ) at the block index a row describes, using the
    /// Kraus split ρ2(γ) = γ·uu† + (1−γ)·diag(u²): the unitary image of the
    /// first term is rank one, of the second a mixture of the block columns.
    fn rho3_diag(&self, gamma: f64, row: &[f64]) -> f64 {
        let v: f64 = row.iter().zip(&self.u).map(|(r, u)| r * u).sum();
        let w: f64 = row
            .iter()
            .zip(&self.u)
            .map(|(r, u)| (r * r) * (u * u))
            .sum();
        gamma * v * v + (1.0 - gamma) * w
    }

    /// (C12, C23, C13) contributions of this Fock component.
    pub(crate) fn correlators(&self, gamma: f64) -> (f64, f64, f64) {
        let n = self.n;
        let d_bottom = self.rho3_diag(gamma, &self.row_bottom);
        if n == 0 {
            // The vacuum block: Q2 = 0, no one-sided sectors, Q3 = −1.
            return (0.0, 0.0, -d_bottom);
        }
        let d_top = self.rho3_diag(gamma, &self.row_top);
        let c12 = self.u[0] * self.u[0] + self.u[n] * self.u[n];
        // Negative-measurement sectors: detector-right keeps |n,0⟩ (diagonal
        // weight u_n², untouched by dephasing), detector-left keeps |0,n⟩.
        let e_detector_r = self.u[n] * self.u[n] * self.q3_weighted(&self.col_top);
        let e_detector_l = self.u[0] * self.u[0] * self.q3_weighted(&self.col_bottom);
        let c23 = 0.5 * (e_detector_r + e_detector_l);
        let c13 = self.q3_at(n) * d_top + self.q3_at(0) * d_bottom;
        (c12, c23, c13)
    }

    /// Full ρ2(n, γ) block, for fixtures and cross-checks.
    pub(crate) fn rho2_block(&self, gamma: f64) -> Array2<f64> {
        let n = self.n;
        let mut rho = Array2::zeros((n + 1, n + 1));
        for j in 0..=n {
            for k in 0..=n {
                let damping = if j == k { 1.0 } else { gamma };
                rho[(j, k)] = self.u[j] * self.u[k] * damping;
            }
        }
        rho
    }

    /// Full ρ3(n, γ) block via explicit conjugation with U^{(n)}.
    pub(crate) fn rho3_block(&self, gamma: f64, theta: f64) -> Array2<f64> {
        let block = bs_block(theta, self.n);
        let rho2 = self.rho2_block(gamma);
        block.dot(&rho2).dot(&block.t())
    }
}

fn check_diagonal_input(input: &InputSpec, config: &ExperimentConfig) -> Result<Vec<f64>> {
    config.validate()?;
    input.dist.validate()?;
    let n_max = config.cutoff.n_max();
    if let PhotonDistribution::Fock { n } = input.dist {
        if n > n_max {
            return Err(Error::FockExceedsCutoff { n, n_max });
        }
    }
    let tail = input.dist.tail_mass(n_max);
    if tail > config.tail_tolerance {
        return Err(Error::TailMassAboveTolerance {
            tail,
            tolerance: config.tail_tolerance,
            n_max,
        });
    }
    Ok(input.dist.weights(n_max))
}

fn k_exact_block_diagonal(
    input: &InputSpec,
    config: &ExperimentConfig,
) -> Result<CorrelatorReport> {
    let weights = check_diagonal_input(input, config)?;
    let occupied: Vec<usize> = (0..weights.len()).filter(|&n| weights[n] != 0.0).collect();
    let triples: Vec<(usize, (f64, f64, f64))> = occupied
        .into_par_iter()
        .map(|n| {
            (
                n,
                FockBlock::new(n, config.theta, input.mode).correlators(config.gamma),
            )
        })
        .collect();
    let mut c12 = 0.0;
    let mut c23 = 0.0;
    let mut c13 = 0.0;
    for (n, (a, b, c)) in triples {
        let w = weights[n];
        c12 += w * a;
        c23 += w * b;
        c13 += w * c;
    }
    Ok(CorrelatorReport::exact(c12, c23, c13))
}

/// Exact correlator report for any input.
///
/// Number-diagonal inputs (dephased-coherent, thermal, Fock) resolve into
/// independent total-photon-number blocks and scale to cutoffs far beyond
/// what a dense matrix can hold; pure coherent inputs take the dense route.
pub fn k_exact(input: &InputSpec, config: &ExperimentConfig) -> Result<CorrelatorReport> {
    match input.dist {
        PhotonDistribution::Coherent { .. } => k_exact_dense(input, config),
        _ => k_exact_block_diagonal(input, config),
    }
}

/// C12 = ⟨Q2⟩ on the dephased intermediate state; equals P(Q2 = +1).
pub fn correlator_c12(input: &InputSpec, config: &ExperimentConfig) -> Result<f64> {
    Ok(k_exact(input, config)?.c12)
}

/// C13 = ⟨Q3⟩ on the output state with no intermediate measurement.
pub fn correlator_c13(input: &InputSpec, config: &ExperimentConfig) -> Result<f64> {
    Ok(k_exact(input, config)?.c13)
}

/// C23 = ½(E_R + E_L) over the two intermediate-detector setups, each
/// contributing its negatively measured one-sided sector.
pub fn correlator_c23(input: &InputSpec, config: &ExperimentConfig) -> Result<f64> {
    Ok(k_exact(input, config)?.c23)
}

/// Submatrix of the evolved ρ3(n, γ) that the Q̂3 trace reads: the diagonal
/// entries at |n,0⟩, |0,n⟩, and the vacuum. Left-mode Fock input, θ = π/2.
///
/// The returned state is sub-normalized for n ≥ 1 and γ < 1; the projected-out
/// doubly-occupied mass is recorded in `trace_deficit`.
pub fn projected_rho3(n: usize, gamma: f64) -> Result<TwoModeState> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::invalid("gamma", format!("{gamma} outside [0, 1]")));
    }
    let theta = std::f64::consts::FRAC_PI_2;
    let block = FockBlock::new(n, theta, Mode::Left);
    let rho3 = block.rho3_block(gamma, theta);
    let cutoff = FockCutoff::new(n.max(1))?;
    let mut out = TwoModeState::zeros(cutoff)?;
    let top = cutoff.index_of(n, 0);
    let bottom = cutoff.index_of(0, n);
    out.matrix[(top, top)] = Complex64::new(rho3[(n, n)], 0.0);
    out.matrix[(bottom, bottom)] = Complex64::new(rho3[(0, 0)], 0.0);
    out.trace_deficit = 1.0 - out.trace();
    Ok(out)
}

/// Tr(Q̂2 ρ2(n, γ)) through the block engine; equals 2^{1−n} for n ≥ 1 and 0
/// for the vacuum, independent of γ because dephasing never touches the
/// diagonal Q̂2 reads.
pub fn appendix_a_fixture(n: usize, gamma: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::invalid("gamma", format!("{gamma} outside [0, 1]")));
    }
    let block = FockBlock::new(n, std::f64::consts::FRAC_PI_2, Mode::Left);
    let rho2 = block.rho2_block(gamma);
    let mut trace = 0.0;
    for j in 0..=n {
        let q2 = if n >= 1 && (j == 0 || j == n) {
            1.0
        } else {
            0.0
        };
        trace += q2 * rho2[(j, j)];
    }
    Ok(trace)
}

// ---------------------------------------------------------------------------
// Click-pattern distributions
// ---------------------------------------------------------------------------

/// Exact joint distribution over the click patterns of one setup.
#[derive(Debug, Clone)]
pub struct PatternDistribution {
    pub setup: Setup,
    entries: Vec<(ClickPattern, f64)>,
    cumulative: Vec<f64>,
}

impl PatternDistribution {
    fn new(setup: Setup, entries: Vec<(ClickPattern, f64)>) -> Result<Self> {
        let total: f64 = entries.iter().map(|(_, p)| p.max(0.0)).sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::invalid(
                "pattern distribution",
                format!("probabilities sum to {total}, expected 1"),
            ));
        }
        let mut cumulative = Vec::with_capacity(entries.len());
        let mut acc = 0.0;
        for (_, p) in &entries {
            acc += (p / total).max(0.0);
            cumulative.push(acc);
        }
        if let Some(last) = cumulative.last_mut() {
            *last = 1.0;
        }
        Ok(PatternDistribution {
            setup,
            entries,
            cumulative,
        })
    }

    pub fn probabilities(&self) -> &[(ClickPattern, f64)] {
        &self.entries
    }

    pub fn total(&self) -> f64 {
        self.entries.iter().map(|(_, p)| p).sum()
    }

    /// Pattern at quantile u ∈ [0, 1).
    pub fn sample(&self, u: f64) -> ClickPattern {
        let idx = self
            .cumulative
            .iter()
            .position(|&c| u < c)
            .unwrap_or(self.entries.len() - 1);
        self.entries[idx].0
    }
}

/// Occupancy-sector weights (vacuum, left-only, right-only, both) of a pure
/// block-m state with coefficients `col`.
fn sectors_of_column(col: &[f64]) -> [f64; 4] {
    let m = col.len() - 1;
    if m == 0 {
        return [col[0] * col[0], 0.0, 0.0, 0.0];
    }
    let left_only = col[m] * col[m];
    let right_only = col[0] * col[0];
    let both: f64 = col[1..m].iter().map(|c| c * c).sum();
    [0.0, left_only, right_only, both]
}

/// Sector weights of |k⟩ entering one port of the splitter, other port vacuum.
fn one_sided_through_bs(theta: f64, k: usize, port: Mode) -> [f64; 4] {
    let col = match port {
        Mode::Left => bs_column(theta, k, k),
        Mode::Right => bs_column(theta, k, 0),
    };
    sectors_of_column(&col)
}

fn detector_pattern_index(t2: bool, left: bool, right: bool) -> usize {
    (t2 as usize) * 4 + (left as usize) * 2 + (right as usize)
}

fn sectors_to_patterns(sectors: [f64; 4], t2: bool, weight: f64, probs: &mut [f64; 8]) {
    let [vac, lo, ro, both] = sectors;
    probs[detector_pattern_index(t2, false, false)] += weight * vac;
    probs[detector_pattern_index(t2, true, false)] += weight * lo;
    probs[detector_pattern_index(t2, false, true)] += weight * ro;
    probs[detector_pattern_index(t2, true, true)] += weight * both;
}

/// Per-Fock-component pattern probabilities for an intermediate-detector
/// setup, on the block engine. The branch weights are diagonal elements of
/// ρ2(n, γ), which dephasing leaves untouched, so γ drops out here.
fn block_detector_patterns(
    block: &FockBlock,
    detector: Mode,
    left_port: &[[f64; 4]],
    right_port: &[[f64; 4]],
    probs: &mut [f64; 8],
) {
    let n = block.n;
    if n == 0 {
        probs[detector_pattern_index(false, false, false)] += 1.0;
        return;
    }
    match detector {
        Mode::Right => {
            // No click: the right mode was empty, state |n,0⟩ survives.
            let kept = block.u[n] * block.u[n];
            sectors_to_patterns(sectors_of_column(&block.col_top), false, kept, probs);
            // Click: k photons continue in the left port, n−k ≥ 1 absorbed.
            for (k, sectors) in left_port.iter().enumerate().take(n) {
                let w = block.u[k] * block.u[k];
                sectors_to_patterns(*sectors, true, w, probs);
            }
        }
        Mode::Left => {
            let kept = block.u[0] * block.u[0];
            sectors_to_patterns(sectors_of_column(&block.col_bottom), false, kept, probs);
            for j in 1..=n {
                let w = block.u[j] * block.u[j];
                sectors_to_patterns(right_port[n - j], true, w, probs);
            }
        }
    }
}

fn pattern_distribution_diagonal(
    input: &InputSpec,
    config: &ExperimentConfig,
    setup: Setup,
) -> Result<PatternDistribution> {
    let weights = check_diagonal_input(input, config)?;
    let deficit: f64 = input.dist.tail_mass(config.cutoff.n_max());
    match setup {
        Setup::NoDetector => {
            let per_n: Vec<[f64; 4]> = (0..weights.len())
                .into_par_iter()
                .map(|n| {
                    let block = FockBlock::new(n, config.theta, input.mode);
                    if n == 0 {
                        return [1.0, 0.0, 0.0, 0.0];
                    }
                    let lo = block.rho3_diag(config.gamma, &block.row_top);
                    let ro = block.rho3_diag(config.gamma, &block.row_bottom);
                    [0.0, lo, ro, 1.0 - lo - ro]
                })
                .collect();
            let mut sectors = [0.0f64; 4];
            for (w, s) in weights.iter().zip(&per_n) {
                for (acc, v) in sectors.iter_mut().zip(s) {
                    *acc += w * v;
                }
            }
            // The truncated tail never clicks; fold it into the quiet pattern.
            sectors[0] += deficit;
            finalize_no_detector(sectors)
        }
        Setup::DetectorR | Setup::DetectorL => {
            let detector = if setup == Setup::DetectorR {
                Mode::Right
            } else {
                Mode::Left
            };
            let n_max = config.cutoff.n_max();
            let left_port: Vec<[f64; 4]> = (0..=n_max)
                .map(|k| one_sided_through_bs(config.theta, k, Mode::Left))
                .collect();
            let right_port: Vec<[f64; 4]> = (0..=n_max)
                .map(|k| one_sided_through_bs(config.theta, k, Mode::Right))
                .collect();
            let per_n: Vec<[f64; 8]> = (0..weights.len())
                .into_par_iter()
                .map(|n| {
                    let block = FockBlock::new(n, config.theta, input.mode);
                    let mut probs = [0.0f64; 8];
                    block_detector_patterns(&block, detector, &left_port, &right_port, &mut probs);
                    probs
                })
                .collect();
            let mut probs = [0.0f64; 8];
            for (w, p) in weights.iter().zip(&per_n) {
                for (acc, v) in probs.iter_mut().zip(p) {
                    *acc += w * v;
                }
            }
            finalize_detector(setup, probs, deficit)
        }
    }
}

fn finalize_no_detector(sectors: [f64; 4]) -> Result<PatternDistribution> {
    let [vac, lo, ro, both] = sectors;
    let entries = vec![
        (ClickPattern::final_only(false, false), vac),
        (ClickPattern::final_only(false, true), ro),
        (ClickPattern::final_only(true, false), lo),
        (ClickPattern::final_only(true, true), both),
    ];
    PatternDistribution::new(Setup::NoDetector, entries)
}

fn finalize_detector(
    setup: Setup,
    mut probs: [f64; 8],
    deficit: f64,
) -> Result<PatternDistribution> {
    probs[detector_pattern_index(false, false, false)] += deficit;
    let mut entries = Vec::with_capacity(8);
    for t2 in [false, true] {
        for left in [false, true] {
            for right in [false, true] {
                entries.push((
                    ClickPattern::intermediate(t2, left, right),
                    probs[detector_pattern_index(t2, left, right)],
                ));
            }
        }
    }
    PatternDistribution::new(setup, entries)
}

fn pattern_distribution_dense(
    input: &InputSpec,
    config: &ExperimentConfig,
    setup: Setup,
) -> Result<PatternDistribution> {
    config.validate()?;
    let bs = BeamSplitter::new(config.theta, config.cutoff);
    let rho2 = rho2_dense(input, config, &bs)?;
    let deficit = rho2.trace_deficit;
    match setup {
        Setup::NoDetector => {
            let rho3 = apply_beam_splitter(&rho2, &bs)?;
            let w = rho3.sector_weights();
            let mut sectors = [w.vacuum, w.left_only, w.right_only, w.both];
            sectors[0] += deficit;
            finalize_no_detector(sectors)
        }
        Setup::DetectorR | Setup::DetectorL => {
            let detector = if setup == Setup::DetectorR {
                Mode::Right
            } else {
                Mode::Left
            };
            let mut probs = [0.0f64; 8];

            let (kept, _) = negative_measurement_update(&rho2, detector);
            let kept3 = apply_beam_splitter(&kept, &bs)?;
            let w = kept3.sector_weights();
            sectors_to_patterns(
                [w.vacuum, w.left_only, w.right_only, w.both],
                false,
                1.0,
                &mut probs,
            );

            let clicked = clicked_branch(&rho2, detector)?;
            let clicked3 = apply_beam_splitter(&clicked, &bs)?;
            let w = clicked3.sector_weights();
            sectors_to_patterns(
                [w.vacuum, w.left_only, w.right_only, w.both],
                true,
                1.0,
                &mut probs,
            );

            finalize_detector(setup, probs, deficit)
        }
    }
}

/// State reaching the second splitter after the intermediate detector
/// clicked: the detector mode is traced out over its occupied sectors and
/// replaced by the vacuum, the surviving mode keeping its original port.
fn clicked_branch(rho2: &TwoModeState, detector: Mode) -> Result<TwoModeState> {
    let cutoff = rho2.cutoff;
    let pairs = cutoff.basis_pairs();
    let mut out = TwoModeState::zeros(cutoff)?;
    for (i, &pi) in pairs.iter().enumerate() {
        if detector.occupation(pi) == 0 {
            continue;
        }
        for (j, &pj) in pairs.iter().enumerate() {
            if detector.occupation(pj) != detector.occupation(pi) {
                continue;
            }
            let (si, sj) = (
                detector.other().occupation(pi),
                detector.other().occupation(pj),
            );
            let (a, b) = match detector {
                Mode::Right => (cutoff.index_of(si, 0), cutoff.index_of(sj, 0)),
                Mode::Left => (cutoff.index_of(0, si), cutoff.index_of(0, sj)),
            };
            out.matrix[(a, b)] += rho2.matrix[(i, j)];
        }
    }
    Ok(out)
}

/// Exact click-pattern distribution of `setup`, routed like [`k_exact`].
pub fn pattern_distribution(
    input: &InputSpec,
    config: &ExperimentConfig,
    setup: Setup,
) -> Result<PatternDistribution> {
    match input.dist {
        PhotonDistribution::Coherent { .. } => pattern_distribution_dense(input, config, setup),
        _ => pattern_distribution_diagonal(input, config, setup),
    }
}
