//! Closed-form correlators, K curves, their maxima, and the detector-error
//! threshold. These expressions are the independent reference the exact and
//! Monte-Carlo engines are checked against; nothing here touches a density
//! matrix.
//!
//! All curves are parameterized by the mean photon number x = |α|² (or λ for
//! thermal fields), since every closed form depends on the intensity alone.

use serde::Serialize;

use crate::error::{Error, Result};

/// C12 = P(Q2 = +1) = 4e^{−3x/4} sinh(x/4) for coherent or dephased-coherent
/// input of mean photon number x; independent of intermediate dephasing.
pub fn c12_coherent(mean_photons: f64) -> f64 {
    4.0 * (-0.75 * mean_photons).exp() * (mean_photons / 4.0).sinh()
}

/// C12 = 2(1 − e^{−λ}) / (2e^{λ} − 1) for a thermal input.
pub fn c12_thermal(lambda: f64) -> f64 {
    2.0 * (1.0 - (-lambda).exp()) / (2.0 * lambda.exp() - 1.0)
}

/// C12 = 2^{1−n} for a Fock input |n⟩, n ≥ 1; the vacuum gives 0.
pub fn c12_fock(n: usize) -> f64 {
    if n == 0 {
        0.0
    } else {
        2.0f64.powi(1 - n as i32)
    }
}

/// C13 = −e^{−x} − γ(1 − e^{−x}) for coherent or dephased-coherent input
/// under intermediate dephasing γ; −1 when γ = 1.
pub fn c13_coherent(mean_photons: f64, gamma: f64) -> f64 {
    let vac = (-mean_photons).exp();
    -vac - gamma * (1.0 - vac)
}

/// C13 for a thermal input under intermediate dephasing: every n ≥ 1
/// component contributes −γ, the vacuum component −1.
pub fn c13_thermal(lambda: f64, gamma: f64) -> f64 {
    let vacuum_weight = 1.0 - (-lambda).exp();
    -vacuum_weight - gamma * (1.0 - vacuum_weight)
}

/// C13 = −γ for a Fock input |n⟩ with n ≥ 1; −1 for the vacuum.
pub fn c13_fock(n: usize, gamma: f64) -> f64 {
    if n == 0 {
        -1.0
    } else {
        -gamma
    }
}

/// K(α) = 1 + 4e^{−3x/4} sinh(x/4), the coherent-input correlation function;
/// the dephased-coherent input yields the identical curve.
pub fn k_coherent(mean_photons: f64) -> Result<f64> {
    if !mean_photons.is_finite() || mean_photons < 0.0 {
        return Err(Error::invalid("mean_photons", "must be >= 0"));
    }
    Ok(1.0 + c12_coherent(mean_photons))
}

/// K′(λ) = 1 + 2(1 − e^{−λ}) / (2e^{λ} − 1), the thermal-input curve.
pub fn k_thermal(lambda: f64) -> Result<f64> {
    if !lambda.is_finite() || lambda <= 0.0 {
        return Err(Error::invalid(
            "lambda",
            "temperature parameter must be > 0",
        ));
    }
    Ok(1.0 + c12_thermal(lambda))
}

/// K′(x, γ) = 4e^{−3x/4} sinh(x/4) + (1−γ)e^{−x} + γ, the coherent (or
/// Poissonian-mixture) curve under intermediate dephasing. Reduces to
/// [`k_coherent`] at γ = 1.
pub fn k_dephasing(mean_photons: f64, gamma: f64) -> Result<f64> {
    if !mean_photons.is_finite() || mean_photons < 0.0 {
        return Err(Error::invalid("mean_photons", "must be >= 0"));
    }
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::invalid("gamma", format!("{gamma} outside [0, 1]")));
    }
    Ok(c12_coherent(mean_photons) - c13_coherent(mean_photons, gamma))
}

/// K = 2 for the single-photon input: C12 = 1, C23 = 0, C13 = −1.
pub fn single_photon_k() -> f64 {
    2.0
}

/// One-parameter K curve family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum AnalyticCurve {
    /// Coherent input, no intermediate dephasing; parameter |α|².
    CoherentK,
    /// Dephased-coherent input; identical curve to `CoherentK`.
    DephasedK,
    /// Thermal input; parameter λ.
    ThermalK,
    /// Coherent input under intermediate dephasing γ; parameter |α|².
    DephasingK { gamma: f64 },
}

impl AnalyticCurve {
    pub fn evaluate(&self, param: f64) -> Result<f64> {
        match *self {
            AnalyticCurve::CoherentK | AnalyticCurve::DephasedK => k_coherent(param),
            AnalyticCurve::ThermalK => k_thermal(param),
            AnalyticCurve::DephasingK { gamma } => k_dephasing(param, gamma),
        }
    }

    pub fn label(&self) -> String {
        match *self {
            AnalyticCurve::CoherentK => "coherent".into(),
            AnalyticCurve::DephasedK => "dephased".into(),
            AnalyticCurve::ThermalK => "thermal".into(),
            AnalyticCurve::DephasingK { gamma } => format!("dephasing(gamma={gamma})"),
        }
    }
}

/// Golden-section search for the maximum of a unimodal function on [a, b].
pub fn golden_section_max(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let (mut lo, mut hi) = (a, b);
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        }
    }
    let x = 0.5 * (lo + hi);
    (x, f(x))
}

const ARGMAX_BRACKET: (f64, f64) = (1e-6, 10.0);
const ARGMAX_TOL: f64 = 1e-10;

/// Closed-form maximizer and maximum of a K curve, cross-checked by a
/// golden-section search over the curve itself; fails if the two disagree by
/// more than 1e-9 in value.
///
/// Closed forms: the coherent curve peaks at x = 2 ln 2 with K = 3/2; the
/// thermal curve at λ = ln(1 + 1/√2) with K = 1 + 2/(1+√2)²; the dephasing
/// curve at x = 2 ln(1+γ), where its value is γ + 1/(1+γ).
pub fn argmax_k(curve: &AnalyticCurve) -> Result<(f64, f64)> {
    let (x_star, k_star) = match *curve {
        AnalyticCurve::CoherentK | AnalyticCurve::DephasedK => {
            let x = 2.0 * 2.0f64.ln();
            (x, 1.5)
        }
        AnalyticCurve::ThermalK => {
            let lambda = (1.0 + 1.0 / 2.0f64.sqrt()).ln();
            let k = 1.0 + 2.0 / (1.0 + 2.0f64.sqrt()).powi(2);
            (lambda, k)
        }
        AnalyticCurve::DephasingK { gamma } => {
            if !(0.0..=1.0).contains(&gamma) {
                return Err(Error::invalid("gamma", format!("{gamma} outside [0, 1]")));
            }
            let x = 2.0 * (1.0 + gamma).ln();
            (x, curve.evaluate(x)?)
        }
    };

    let (a, b) = ARGMAX_BRACKET;
    let (_, k_searched) = golden_section_max(
        |x| curve.evaluate(x).unwrap_or(f64::NEG_INFINITY),
        a,
        b,
        ARGMAX_TOL,
    );
    if (k_searched - k_star).abs() > 1e-9 {
        return Err(Error::MaximumMismatch {
            family: curve.label(),
            closed_form: k_star,
            searched: k_searched,
        });
    }
    Ok((x_star, k_star))
}

/// Overall worst-case error rate η = 1 − (1−ε)³ of three detectors with
/// per-detector error ε, and the shifted macrorealist bound 1 + 2η.
pub fn detector_error_threshold(epsilon: f64) -> Result<(f64, f64)> {
    if !(0.0..1.0).contains(&epsilon) {
        return Err(Error::invalid(
            "epsilon",
            format!("{epsilon} outside [0, 1)"),
        ));
    }
    let eta = 1.0 - (1.0 - epsilon).powi(3);
    Ok((eta, 1.0 + 2.0 * eta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn coherent_curve_endpoints_and_maximum() {
        assert_abs_diff_eq!(k_coherent(0.0).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(k_coherent(2.0 * 2.0f64.ln()).unwrap(), 1.5, epsilon = 1e-14);
        // The curve decays back towards 1 at high intensity.
        assert!(k_coherent(20.0).unwrap() < 1.0 + 1e-3);
        assert!(k_coherent(20.0).unwrap() > 1.0);
        assert!(k_coherent(-0.5).is_err());
    }

    #[test]
    fn coherent_c12_equals_its_two_exponential_form() {
        for &x in &[0.2, 1.0, 2.0, 6.3] {
            assert_abs_diff_eq!(
                c12_coherent(x),
                2.0 * ((-x / 2.0).exp() - (-x).exp()),
                epsilon = 1e-15
            );
        }
    }

    #[test]
    fn thermal_curve_against_series_summation() {
        // Independent route: K′(λ) = 1 + Σ_{n≥1} 2^{1−n} e^{−nλ}(1 − e^{−λ}).
        for &lambda in &[0.05, 0.3, 1.0, 2.5, 5.0] {
            let mut series = 0.0;
            for n in 1..400 {
                series +=
                    2.0f64.powi(1 - n) * (-(n as f64) * lambda).exp() * (1.0 - (-lambda).exp());
            }
            assert_abs_diff_eq!(k_thermal(lambda).unwrap(), 1.0 + series, epsilon = 1e-14);
        }
        assert_abs_diff_eq!(k_thermal(50.0).unwrap(), 1.0, epsilon = 1e-12);
        assert!(k_thermal(0.0).is_err());
        assert!(k_thermal(-1.0).is_err());
    }

    #[test]
    fn thermal_maximum_value() {
        let lambda = (1.0 + 1.0 / 2.0f64.sqrt()).ln();
        let k = k_thermal(lambda).unwrap();
        assert_abs_diff_eq!(
            k,
            2.0 / (1.0 + 2.0f64.sqrt()).powi(2) + 1.0,
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(k, 1.3431457505076194, epsilon = 1e-12);
    }

    #[test]
    fn dephasing_curve_reduces_to_coherent_at_unit_gamma() {
        for &x in &[0.0, 0.7, 2.0, 5.5] {
            assert_abs_diff_eq!(
                k_dephasing(x, 1.0).unwrap(),
                k_coherent(x).unwrap(),
                epsilon = 1e-15
            );
        }
        assert_abs_diff_eq!(k_dephasing(0.0, 0.0).unwrap(), 1.0, epsilon = 1e-15);
        assert!(k_dephasing(1.0, 1.5).is_err());
        assert!(k_dephasing(-1.0, 0.5).is_err());
    }

    #[test]
    fn dephasing_curve_is_monotone_in_gamma() {
        // ∂K/∂γ = 1 − e^{−x} > 0 for x > 0.
        for &x in &[0.1, 1.0, 3.0] {
            let mut prev = k_dephasing(x, 0.0).unwrap();
            for g in 1..=10 {
                let next = k_dephasing(x, g as f64 / 10.0).unwrap();
                assert!(next > prev);
                prev = next;
            }
        }
    }

    #[test]
    fn completely_decohered_curve_never_violates() {
        for i in 0..=2000 {
            let x = i as f64 * 0.005;
            assert!(k_dephasing(x, 0.0).unwrap() <= 1.0 + 1e-12);
        }
        // Any γ > 0 still admits a violation at its maximizer.
        for &gamma in &[0.05f64, 0.3, 0.8] {
            let x = 2.0 * (1.0 + gamma).ln();
            assert!(k_dephasing(x, gamma).unwrap() > 1.0);
        }
    }

    #[test]
    fn classical_curves_stay_within_their_band() {
        for i in 1..=120 {
            let x = i as f64 * 0.05;
            let kc = k_coherent(x).unwrap();
            assert!((1.0..=1.5).contains(&kc));
            let kt = k_thermal(x).unwrap();
            assert!((1.0..=1.3431457505076196).contains(&kt));
        }
    }

    #[test]
    fn argmax_of_coherent_and_thermal_curves() {
        let (x, k) = argmax_k(&AnalyticCurve::CoherentK).unwrap();
        assert_abs_diff_eq!(x, 2.0 * 2.0f64.ln(), epsilon = 1e-14);
        assert_abs_diff_eq!(k, 1.5, epsilon = 1e-14);

        let (lambda, km) = argmax_k(&AnalyticCurve::ThermalK).unwrap();
        assert_abs_diff_eq!(lambda, (1.0 + 1.0 / 2.0f64.sqrt()).ln(), epsilon = 1e-14);
        assert_abs_diff_eq!(km, 1.3431457505076194, epsilon = 1e-12);
        assert_abs_diff_eq!(lambda, 0.5348, epsilon = 1e-4);
    }

    #[test]
    fn argmax_of_the_dephasing_family_sits_on_the_curve() {
        for &gamma in &[0.0f64, 0.05, 0.3, 0.5, 1.0] {
            let (x, k) = argmax_k(&AnalyticCurve::DephasingK { gamma }).unwrap();
            assert_abs_diff_eq!(x, 2.0 * (1.0 + gamma).ln(), epsilon = 1e-14);
            // The maximum lies on the curve and equals γ + 1/(1+γ).
            assert_abs_diff_eq!(k, k_dephasing(x, gamma).unwrap(), epsilon = 1e-15);
            assert_abs_diff_eq!(k, gamma + 1.0 / (1.0 + gamma), epsilon = 1e-14);
            // Nothing on a fine grid exceeds the claimed maximum.
            for i in 0..=1000 {
                let xi = i as f64 * 0.01;
                assert!(k_dephasing(xi, gamma).unwrap() <= k + 1e-12);
            }
        }
    }

    #[test]
    fn golden_section_matches_closed_maxima_tightly() {
        let (x, k) = golden_section_max(|x| k_coherent(x).unwrap(), 1e-6, 10.0, 1e-10);
        assert_abs_diff_eq!(k, 1.5, epsilon = 1e-12);
        assert!((x - 2.0 * 2.0f64.ln()).abs() < 1e-5);
        let (l, km) = golden_section_max(|x| k_thermal(x).unwrap(), 1e-6, 10.0, 1e-10);
        assert_abs_diff_eq!(km, 1.3431457505076194, epsilon = 1e-12);
        assert!((l - (1.0f64 + 1.0 / 2.0f64.sqrt()).ln()).abs() < 1e-5);
    }

    #[test]
    fn detector_error_threshold_values() {
        assert_eq!(detector_error_threshold(0.0).unwrap(), (0.0, 1.0));
        let (eta, threshold) = detector_error_threshold(0.05).unwrap();
        assert_abs_diff_eq!(eta, 0.142625, epsilon = 1e-15);
        assert_abs_diff_eq!(threshold, 1.28525, epsilon = 1e-15);
        // Both classical maxima clear the ε = 5% bound.
        assert!(1.5 > threshold);
        assert!(1.3431457505076194 > threshold);
        // At ε = 0.3 the bound moves beyond every classical-light maximum.
        let (_, high) = detector_error_threshold(0.3).unwrap();
        assert_abs_diff_eq!(high, 2.314, epsilon = 1e-12);
        assert!(high > 1.5);
        assert!(detector_error_threshold(1.0).is_err());
        assert!(detector_error_threshold(-0.1).is_err());
    }

    #[test]
    fn single_photon_constant() {
        assert_eq!(single_photon_k(), 2.0);
    }
}
