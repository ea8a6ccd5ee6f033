//! Two-mode bosonic simulator for Leggett-Garg tests with classical light.
//!
//! The crate evolves coherent, dephased-coherent, thermal, and Fock input
//! states through Mach-Zehnder setups on a total-photon-number-truncated Fock
//! space, applies the vacuum/photons observable assignment with its negative
//! (interaction-free) measurement protocol, and computes the temporal
//! correlators C12, C23, C13 and K = C12 + C23 − C13 three independent ways:
//!
//! * exact density-matrix evolution ([`observables`]),
//! * closed-form expressions ([`analytic`]),
//! * Monte-Carlo trial sampling with detector noise ([`montecarlo`]).
//!
//! The [`acceptance`] module cross-validates the three routes at pinned
//! tolerances.

pub mod acceptance;
pub mod analytic;
pub mod channels;
pub mod error;
pub mod fock;
pub mod montecarlo;
pub mod observables;

pub use error::{Error, Result};

pub use fock::{
    build_input_state, build_input_state_with_tolerance, poisson_weight, tail_mass, thermal_weight,
    FockCutoff, InputSpec, Mode, PhotonDistribution, SectorWeights, TwoModeState, DEFAULT_N_MAX,
    DEFAULT_TAIL_TOLERANCE, DENSE_CUTOFF_LIMIT,
};

pub use channels::{
    apply_beam_splitter, apply_dephasing, negative_measurement_update, BeamSplitter,
    DephasingChannel,
};

pub use observables::{
    appendix_a_fixture, correlator_c12, correlator_c13, correlator_c23, k_exact, k_exact_dense,
    pattern_distribution, projected_rho3, q2_operator, q3_operator, CaseLabel, ClickPattern,
    CorrelatorReport, DiagonalObservable, ExperimentConfig, McStats, PatternDistribution,
    QAssignment, Setup,
};

pub use analytic::{
    argmax_k, detector_error_threshold, golden_section_max, k_coherent, k_dephasing, k_thermal,
    single_photon_k, AnalyticCurve,
};

pub use montecarlo::{
    estimate_correlators, noisy_k_study, sample_trial, NoisyKRow, RunConfig, TrialRecord,
};

pub use acceptance::{run_acceptance, run_criterion, CriterionOutcome};
