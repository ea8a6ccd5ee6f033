//! Physical transformations of the interferometer: the beam splitter
//! B = exp[(θ/2)(a†_L a_R − a_L a†_R)], the Fock-basis dephasing channel Δγ,
//! and the measurement update for a negative (no-click) intermediate
//! detection.
//!
//! B conserves total photon number, so it is stored and applied as one
//! orthogonal matrix per block of fixed S = k + l. At θ = π/2 the blocks
//! realize the 50:50 rules B a†_R B† = (a†_L + a†_R)/√2 and
//! B a†_L B† = (a†_L − a†_R)/√2.

use ndarray::{s, Array2};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{FockCutoff, Mode, TwoModeState};

/// Coefficients of B(θ)|k, s−k⟩ over the block-s basis |m, s−m⟩.
///
/// Built by applying the rotated creation operators
/// (cos(θ/2) a†_L − sin(θ/2) a†_R) k times and
/// (sin(θ/2) a†_L + cos(θ/2) a†_R) s−k times to the vacuum, renormalizing
/// after every factor so no factorial is ever materialized.
pub(crate) fn bs_column(theta: f64, s: usize, k: usize) -> Vec<f64> {
    debug_assert!(k <= s);
    let c = (theta / 2.0).cos();
    let sn = (theta / 2.0).sin();
    let mut psi = vec![1.0];
    for j in 1..=k {
        psi = apply_creation_factor(&psi, c, -sn, j);
    }
    for j in 1..=(s - k) {
        psi = apply_creation_factor(&psi, sn, c, j);
    }
    psi
}

/// Applies (a·a†_L + b·a†_R)/√norm_index to a block-t coefficient vector,
/// producing a block-(t+1) vector.
fn apply_creation_factor(psi: &[f64], a: f64, b: f64, norm_index: usize) -> Vec<f64> {
    let t = psi.len() - 1;
    let scale = 1.0 / (norm_index as f64).sqrt();
    let mut out = vec![0.0; t + 2];
    for (m, slot) in out.iter_mut().enumerate() {
        let mut v = 0.0;
        if m >= 1 {
            v += a * (m as f64).sqrt() * psi[m - 1];
        }
        if m <= t {
            v += b * ((t + 1 - m) as f64).sqrt() * psi[m];
        }
        *slot = v * scale;
    }
    out
}

/// One orthogonal block per total photon number: entry (m, k) of block s is
/// ⟨m, s−m| B |k, s−k⟩.
pub(crate) fn bs_block(theta: f64, s: usize) -> Array2<f64> {
    let mut block = Array2::zeros((s + 1, s + 1));
    for k in 0..=s {
        let col = bs_column(theta, s, k);
        for (m, v) in col.into_iter().enumerate() {
            block[(m, k)] = v;
        }
    }
    block
}

/// Beam splitter of angle θ on a truncated two-mode space, with the per-block
/// unitaries built once at construction.
#[derive(Debug, Clone)]
pub struct BeamSplitter {
    theta: f64,
    cutoff: FockCutoff,
    blocks: Vec<Array2<f64>>,
}

impl BeamSplitter {
    pub fn new(theta: f64, cutoff: FockCutoff) -> Self {
        let blocks = (0..=cutoff.n_max()).map(|sb| bs_block(theta, sb)).collect();
        BeamSplitter {
            theta,
            cutoff,
            blocks,
        }
    }

    /// 50:50 splitter, θ = π/2.
    pub fn balanced(cutoff: FockCutoff) -> Self {
        BeamSplitter::new(std::f64::consts::FRAC_PI_2, cutoff)
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn cutoff(&self) -> FockCutoff {
        self.cutoff
    }

    pub fn block(&self, s: usize) -> &Array2<f64> {
        &self.blocks[s]
    }
}

/// ρ ↦ BρB†, applied block-pair-wise so amplitude never crosses between
/// total-photon-number blocks. The blocks are real, so the conjugation acts
/// on the real and imaginary parts independently.
pub fn apply_beam_splitter(state: &TwoModeState, bs: &BeamSplitter) -> Result<TwoModeState> {
    if state.cutoff != bs.cutoff {
        return Err(Error::CutoffMismatch {
            state: state.cutoff.n_max(),
            operator: bs.cutoff.n_max(),
        });
    }
    let cutoff = state.cutoff;
    let n_max = cutoff.n_max();
    let d = cutoff.basis_len();

    let mut re = state.matrix.mapv(|z| z.re);
    let mut im = state.matrix.mapv(|z| z.im);
    let mut tmp = Array2::<f64>::zeros((d, d));
    for part in [&mut re, &mut im] {
        for sb in 0..=n_max {
            let r = cutoff.block_range(sb);
            let product = bs.blocks[sb].dot(&part.slice(s![r.clone(), ..]));
            tmp.slice_mut(s![r, ..]).assign(&product);
        }
        for sb in 0..=n_max {
            let r = cutoff.block_range(sb);
            let product = tmp.slice(s![.., r.clone()]).dot(&bs.blocks[sb].t());
            part.slice_mut(s![.., r]).assign(&product);
        }
    }

    let mut out = state.clone();
    ndarray::Zip::from(&mut out.matrix)
        .and(&re)
        .and(&im)
        .for_each(|z, &a, &b| *z = Complex64::new(a, b));
    Ok(out)
}

/// Dephasing channel Δγ on a single mode: Kraus set {√γ·1, √(1−γ)|n⟩⟨n|}.
/// γ = 1 is the identity; γ = 0 removes every coherence of the target mode.
#[derive(Debug, Clone, Copy)]
pub struct DephasingChannel {
    gamma: f64,
    target_mode: Mode,
}

impl DephasingChannel {
    pub fn new(gamma: f64, target_mode: Mode) -> Result<Self> {
        if !(0.0..=1.0).contains(&gamma) {
            return Err(Error::invalid("gamma", format!("{gamma} outside [0, 1]")));
        }
        Ok(DephasingChannel { gamma, target_mode })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn target_mode(&self) -> Mode {
        self.target_mode
    }
}

/// Scales every element whose target-mode occupations differ by γ; elements
/// with equal target-mode occupations (the whole diagonal included) are left
/// untouched, so the trace is preserved exactly.
pub fn apply_dephasing(state: &TwoModeState, channel: &DephasingChannel) -> TwoModeState {
    let mut out = state.clone();
    if channel.gamma == 1.0 {
        return out;
    }
    let pairs = state.cutoff.basis_pairs();
    let occ: Vec<usize> = pairs
        .iter()
        .map(|&p| channel.target_mode.occupation(p))
        .collect();
    let gamma = Complex64::new(channel.gamma, 0.0);
    for (i, row) in out.matrix.rows_mut().into_iter().enumerate() {
        let oi = occ[i];
        for (j, z) in row.into_iter().enumerate() {
            if occ[j] != oi {
                *z *= gamma;
            }
        }
    }
    out
}

/// Measurement update for "no click" of a detector watching `detector_mode`:
/// projects that mode onto its vacuum subspace, Π = |0⟩⟨0| ⊗ 1.
///
/// Returns the unnormalized kept state ΠρΠ together with its probability
/// tr(ΠρΠ), so the caller controls normalization explicitly.
pub fn negative_measurement_update(
    state: &TwoModeState,
    detector_mode: Mode,
) -> (TwoModeState, f64) {
    let mut kept = state.clone();
    let pairs = state.cutoff.basis_pairs();
    let occ: Vec<usize> = pairs.iter().map(|&p| detector_mode.occupation(p)).collect();
    for (i, row) in kept.matrix.rows_mut().into_iter().enumerate() {
        let keep_row = occ[i] == 0;
        for (j, z) in row.into_iter().enumerate() {
            if !(keep_row && occ[j] == 0) {
                *z = Complex64::new(0.0, 0.0);
            }
        }
    }
    let probability = kept.trace();
    (kept, probability)
}
