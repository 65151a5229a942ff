//! Analytic parametric gain of a single-pump fiber OPA with an undepleted pump.
//!
//! All quantities are SI: Δβ, k and g in m⁻¹, γ in W⁻¹·m⁻¹, lengths in m.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::{self, SPEED_OF_LIGHT};

/// Gains above this are reported as a range error rather than returned.
pub const MAX_GAIN_DB: f64 = 300.0;

/// |g²| below this fraction of (γP)² is classified as the degenerate regime.
pub const DEGENERATE_REL_TOL: f64 = 1e-14;

/// 10·log₁₀(1/4): the high-gain prefactor expressed in dB (≈ −6.02).
pub const HIGH_GAIN_OFFSET_DB: f64 = -6.020_599_913_279_624;

/// Wavelength plan entering the linear phase mismatch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseMatchInput {
    /// Zero-dispersion wavelength, µm.
    pub lambda0: f64,
    /// Pump wavelength, µm.
    pub lambda_p: f64,
    /// Signal wavelength, µm.
    pub lambda_s: f64,
    /// Dispersion slope at `lambda0`, ps/(nm²·km).
    pub disp_slope: f64,
}

impl PhaseMatchInput {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("lambda0", self.lambda0),
            ("lambda_p", self.lambda_p),
            ("lambda_s", self.lambda_s),
        ] {
            if !(v > 1.0 && v < 2.0) {
                return Err(Error::domain(format!(
                    "{name} = {v} µm is outside (1.0, 2.0) µm"
                )));
            }
        }
        if !(self.disp_slope > 0.0) {
            return Err(Error::domain(format!(
                "dispersion slope must be > 0, got {}",
                self.disp_slope
            )));
        }
        Ok(())
    }
}

/// Linear phase mismatch Δβ = −(2πc/λ₀²)·S₀·(λ_p − λ₀)·(λ_p − λ_s)², in m⁻¹.
pub fn phase_mismatch(input: &PhaseMatchInput) -> Result<f64> {
    input.validate()?;
    let l0 = units::um_to_m(input.lambda0);
    let lp = units::um_to_m(input.lambda_p);
    let ls = units::um_to_m(input.lambda_s);
    let slope = units::disp_slope_to_si(input.disp_slope);
    let prefactor = 2.0 * std::f64::consts::PI * SPEED_OF_LIGHT / (l0 * l0);
    let detune = lp - ls;
    Ok(-prefactor * slope * (lp - l0) * detune * detune)
}

/// Total phase mismatch and squared gain coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GainParameter {
    /// κ = Δβ + 2γP, m⁻¹.
    pub k: f64,
    /// g² = (γP)² − κ²/4, m⁻².
    pub g_squared: f64,
}

fn check_gain_inputs(gamma: f64, p_pump: f64) -> Result<()> {
    if !(gamma >= 0.0) || !gamma.is_finite() {
        return Err(Error::domain(format!("gamma must be >= 0, got {gamma}")));
    }
    if !(p_pump >= 0.0) || !p_pump.is_finite() {
        return Err(Error::domain(format!(
            "pump power must be >= 0 W, got {p_pump}"
        )));
    }
    Ok(())
}

/// κ = Δβ + 2γP and g² = −Δβ(Δβ/4 + γP).
///
/// The factored form of g² is used for evaluation because its sign is exact
/// at the band edges Δβ = 0 and Δβ = −4γP.
pub fn gain_parameter(delta_beta: f64, gamma: f64, p_pump: f64) -> Result<GainParameter> {
    check_gain_inputs(gamma, p_pump)?;
    if !delta_beta.is_finite() {
        return Err(Error::domain("phase mismatch must be finite"));
    }
    let gp = gamma * p_pump;
    Ok(GainParameter {
        k: delta_beta + 2.0 * gp,
        g_squared: -delta_beta * (delta_beta / 4.0 + gp),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    /// g² > 0: exponential gain.
    Hyperbolic,
    /// g² = 0: quadratic gain.
    Degenerate,
    /// g² < 0: bounded, oscillating gain.
    Oscillatory,
}

impl Regime {
    pub fn classify(g_squared: f64, gamma_p: f64) -> Regime {
        let tol = DEGENERATE_REL_TOL * gamma_p * gamma_p;
        if g_squared.abs() <= tol {
            Regime::Degenerate
        } else if g_squared > 0.0 {
            Regime::Hyperbolic
        } else {
            Regime::Oscillatory
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Regime::Hyperbolic => "hyperbolic",
            Regime::Degenerate => "degenerate",
            Regime::Oscillatory => "oscillatory",
        }
    }
}

/// Full decomposition of one analytic gain evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GainBreakdown {
    pub delta_beta: f64,
    pub k: f64,
    pub g_squared: f64,
    pub regime: Regime,
    pub gain_linear: f64,
    pub gain_db: f64,
}

fn guard_db(gain_linear: f64, what: &str) -> Result<f64> {
    let db = units::to_db(gain_linear);
    if !db.is_finite() || db > MAX_GAIN_DB {
        return Err(Error::Range(format!(
            "{what} exceeds {MAX_GAIN_DB} dB ({}); the inputs are unphysical for this model",
            if db.is_finite() {
                format!("{db:.1} dB")
            } else {
                "overflow".to_string()
            }
        )));
    }
    Ok(db)
}

/// Signal power gain G = 1 + (γP·h)², h = sinh(gL)/g, L or sin(|g|L)/|g|.
pub fn signal_gain(delta_beta: f64, gamma: f64, p_pump: f64, length: f64) -> Result<GainBreakdown> {
    if !(length >= 0.0) || !length.is_finite() {
        return Err(Error::domain(format!(
            "length must be >= 0 m, got {length}"
        )));
    }
    let GainParameter { k, g_squared } = gain_parameter(delta_beta, gamma, p_pump)?;
    let gp = gamma * p_pump;
    let regime = Regime::classify(g_squared, gp);
    let h = match regime {
        Regime::Degenerate => length,
        Regime::Hyperbolic => {
            let g = g_squared.sqrt();
            if g * length > 400.0 {
                return Err(Error::Range(format!(
                    "signal gain exceeds {MAX_GAIN_DB} dB (gL = {:.1}); the inputs are unphysical for this model",
                    g * length
                )));
            }
            (g * length).sinh() / g
        }
        Regime::Oscillatory => {
            let g = (-g_squared).sqrt();
            (g * length).sin() / g
        }
    };
    let amp = gp * h;
    let gain_linear = 1.0 + amp * amp;
    let gain_db = guard_db(gain_linear, "signal gain")?;
    Ok(GainBreakdown {
        delta_beta,
        k,
        g_squared,
        regime,
        gain_linear,
        gain_db,
    })
}

/// Truncated power-series form of the signal gain.
///
/// The bracket is the Maclaurin series of sinh(gL)/(gL) in (gL)², so with
/// g² < 0 it alternates and converges to the oscillatory form.
pub fn gain_series(
    delta_beta: f64,
    gamma: f64,
    p_pump: f64,
    length: f64,
    terms: usize,
) -> Result<f64> {
    if terms == 0 {
        return Err(Error::domain("series needs at least one term"));
    }
    if !(length >= 0.0) {
        return Err(Error::domain(format!(
            "length must be >= 0 m, got {length}"
        )));
    }
    let GainParameter { g_squared, .. } = gain_parameter(delta_beta, gamma, p_pump)?;
    let x = g_squared * length * length;
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 1..terms {
        // (gL)^{2n}/(2n+1)! from the previous term
        let m = (2 * n) as f64;
        term *= x / (m * (m + 1.0));
        sum += term;
    }
    let lead = gamma * p_pump * length;
    Ok(1.0 + lead * lead * sum * sum)
}

/// High-gain, phase-matched approximation G ≈ ¼·exp(2γPL).
///
/// Only meaningful for γPL ≫ 1; at γPL = 0 it returns 0.25.
pub fn high_gain_approx(gamma: f64, p_pump: f64, length: f64) -> Result<f64> {
    check_gain_inputs(gamma, p_pump)?;
    if !(length >= 0.0) {
        return Err(Error::domain(format!(
            "length must be >= 0 m, got {length}"
        )));
    }
    let g = 0.25 * (2.0 * gamma * p_pump * length).exp();
    guard_db(g, "high-gain approximation")?;
    Ok(g)
}

/// Gain in dB from the parametric gain slope: P·L·S_p + 10·log₁₀(¼).
///
/// `length_km` in km and `s_p` in dB/(W·km). Returns negative values when
/// P·L·S_p is small; the form is only valid in the high-gain regime.
pub fn gain_db_slope_form(p_pump: f64, length_km: f64, s_p: f64) -> Result<f64> {
    if !(p_pump > 0.0 && length_km > 0.0 && s_p > 0.0) {
        return Err(Error::domain(format!(
            "slope form needs P, L, S_p > 0 (got {p_pump}, {length_km}, {s_p})"
        )));
    }
    Ok(p_pump * length_km * s_p + HIGH_GAIN_OFFSET_DB)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    const HNLF_GAMMA: f64 = 15e-3;

    #[test]
    fn mismatch_vanishes_at_pump_or_zero_dispersion() {
        let base = PhaseMatchInput {
            lambda0: 1.55,
            lambda_p: 1.55,
            lambda_s: 1.58,
            disp_slope: 0.03,
        };
        assert_eq!(phase_mismatch(&base).unwrap(), 0.0);
        let same = PhaseMatchInput {
            lambda_p: 1.56,
            lambda_s: 1.56,
            ..base
        };
        assert_eq!(phase_mismatch(&same).unwrap(), 0.0);
    }

    #[test]
    fn mismatch_reference_value() {
        let input = PhaseMatchInput {
            lambda0: 1.55,
            lambda_p: 1.5505,
            lambda_s: 1.5755,
            disp_slope: 0.03,
        };
        // mpmath, 40 digits
        assert_relative_eq!(
            phase_mismatch(&input).unwrap(),
            -7.350_357_312_599_584e-3,
            max_relative = 1e-9
        );
    }

    #[test]
    fn mismatch_domain() {
        let bad = PhaseMatchInput {
            lambda0: 0.9,
            lambda_p: 1.55,
            lambda_s: 1.58,
            disp_slope: 0.03,
        };
        assert!(phase_mismatch(&bad).is_err());
        let bad = PhaseMatchInput {
            lambda0: 1.55,
            lambda_p: 1.55,
            lambda_s: 1.58,
            disp_slope: 0.0,
        };
        assert!(phase_mismatch(&bad).is_err());
    }

    #[test]
    fn gain_parameter_special_points() {
        let gp = HNLF_GAMMA * 1.0;
        let p = gain_parameter(0.0, HNLF_GAMMA, 1.0).unwrap();
        assert_eq!(p.k, 2.0 * gp);
        assert_eq!(p.g_squared, 0.0);

        let p = gain_parameter(-2.0 * gp, HNLF_GAMMA, 1.0).unwrap();
        assert_eq!(p.k, 0.0);
        assert_relative_eq!(p.g_squared.sqrt(), gp, max_relative = 1e-15);

        let p = gain_parameter(-4.0 * gp, HNLF_GAMMA, 1.0).unwrap();
        assert_eq!(p.g_squared, 0.0);
        let printed = gp * gp - p.k * p.k / 4.0;
        assert!(printed.abs() < 1e-18);
    }

    #[test]
    fn both_forms_of_g_squared_agree() {
        for i in 0..50 {
            let db = -0.08 + 0.1 * i as f64 / 49.0;
            for &p in &[0.0, 0.5, 1.0, 1.4] {
                let gp = gain_parameter(db, HNLF_GAMMA, p).unwrap();
                let other = (HNLF_GAMMA * p).powi(2) - gp.k * gp.k / 4.0;
                assert!((gp.g_squared - other).abs() <= 1e-15, "{db} {p}");
            }
        }
    }

    #[test]
    fn gain_parameter_rejects_negative_inputs() {
        assert!(gain_parameter(0.0, -1.0, 1.0).is_err());
        assert!(gain_parameter(0.0, 1.0, -1.0).is_err());
        assert!(gain_parameter(f64::NAN, 1.0, 1.0).is_err());
    }

    #[test]
    fn zero_length_is_unity_gain() {
        for &db in &[0.0, -0.01, -0.03, -0.1, 0.2] {
            let g = signal_gain(db, HNLF_GAMMA, 1.2, 0.0).unwrap();
            assert_eq!(g.gain_linear, 1.0);
            assert_eq!(g.gain_db, 0.0);
        }
    }

    #[test]
    fn perfect_phase_matching_example() {
        // γPL = 3 with κ = 0: G = 1 + sinh²(3)
        let gp = HNLF_GAMMA;
        let g = signal_gain(-2.0 * gp, HNLF_GAMMA, 1.0, 200.0).unwrap();
        assert_eq!(g.regime, Regime::Hyperbolic);
        assert_relative_eq!(g.gain_linear, 101.357_818_061_227_95, max_relative = 1e-12);
        assert_relative_eq!(g.gain_db, 20.058_572_528_800_41, max_relative = 1e-12);
    }

    #[test]
    fn degenerate_example() {
        let g = signal_gain(0.0, HNLF_GAMMA, 1.0, 100.0).unwrap();
        assert_eq!(g.regime, Regime::Degenerate);
        assert_relative_eq!(g.gain_linear, 3.25, max_relative = 1e-14);
        assert_relative_eq!(g.gain_db, 5.118_833_609_788_743, max_relative = 1e-12);
    }

    #[test]
    fn oscillatory_regime_is_bounded() {
        let gp = HNLF_GAMMA;
        let g = signal_gain(-6.0 * gp, HNLF_GAMMA, 1.0, 500.0).unwrap();
        assert_eq!(g.regime, Regime::Oscillatory);
        // g² = −Δβ(Δβ/4 + γP) = −(6γP)(−0.5γP) → |g| = √3 γP
        let mag = 3f64.sqrt() * gp;
        let bound = 1.0 + (gp / mag).powi(2);
        assert!(g.gain_linear >= 1.0 && g.gain_linear <= bound);
    }

    #[test]
    fn overflow_is_a_range_error() {
        // SMF, 1.4 W over 100 km
        let err = signal_gain(-2.0 * 1.8e-3 * 1.4, 1.8e-3, 1.4, 100e3).unwrap_err();
        assert!(matches!(err, Error::Range(_)), "{err}");
        assert!(matches!(
            high_gain_approx(1.8e-3, 1.4, 100e3),
            Err(Error::Range(_))
        ));
    }

    #[test]
    fn series_leading_term() {
        let g = gain_series(-0.01, HNLF_GAMMA, 1.0, 100.0, 1).unwrap();
        assert_relative_eq!(g, 1.0 + (HNLF_GAMMA * 100.0).powi(2), max_relative = 1e-15);
        assert!(gain_series(0.0, HNLF_GAMMA, 1.0, 1.0, 0).is_err());
    }

    #[test]
    fn series_three_terms_at_half() {
        // κ = 0, |g|L = 0.5
        let gp = HNLF_GAMMA;
        let len = 0.5 / gp;
        let exact = signal_gain(-2.0 * gp, HNLF_GAMMA, 1.0, len)
            .unwrap()
            .gain_linear;
        let series = gain_series(-2.0 * gp, HNLF_GAMMA, 1.0, len, 3).unwrap();
        assert!((series / exact - 1.0).abs() <= 1e-4);
    }

    #[test]
    fn series_converges_in_oscillatory_regime() {
        let gp = HNLF_GAMMA;
        let db = -5.0 * gp;
        let len = 150.0;
        let exact = signal_gain(db, HNLF_GAMMA, 1.0, len).unwrap();
        assert_eq!(exact.regime, Regime::Oscillatory);
        let mut prev_err = f64::INFINITY;
        for terms in 1..=12 {
            let s = gain_series(db, HNLF_GAMMA, 1.0, len, terms).unwrap();
            let err = (s / exact.gain_linear - 1.0).abs();
            assert!(err < prev_err || err < 1e-14);
            prev_err = err;
        }
        assert!(prev_err < 1e-9);
    }

    #[test]
    fn high_gain_examples() {
        let gp = HNLF_GAMMA;
        let at = |x: f64| high_gain_approx(HNLF_GAMMA, 1.0, x / gp).unwrap();
        assert_relative_eq!(at(3.0), 100.857_198_373_183_78, max_relative = 1e-12);
        assert!((at(3.0) / 3f64.sinh().powi(2) - 1.0).abs() < 0.01);
        assert!((at(5.0) / 5f64.sinh().powi(2) - 1.0).abs() < 1e-4);
        assert_eq!(high_gain_approx(HNLF_GAMMA, 1.0, 0.0).unwrap(), 0.25);
    }

    #[test]
    fn slope_form_examples() {
        let hnlf = gain_db_slope_form(1.0, 0.5, 131.0).unwrap();
        let smf = gain_db_slope_form(0.5, 1.0, 16.0).unwrap();
        assert_relative_eq!(hnlf, 59.479_400_086_720_376, max_relative = 1e-14);
        assert_relative_eq!(smf, 1.979_400_086_720_376, max_relative = 1e-12);
        assert!((hnlf - 59.5).abs() < 0.021 && (smf - 2.0).abs() < 0.021);
        assert!(gain_db_slope_form(0.0, 1.0, 16.0).is_err());
    }

    #[test]
    fn slope_form_is_log_of_high_gain() {
        for &(gamma_km, p, l_km) in &[(15.0, 1.0, 0.5), (1.8, 1.4, 2.0), (15.0, 0.5, 0.1)] {
            let sp = crate::fiber::parametric_gain_slope(gamma_km).unwrap();
            let slope = gain_db_slope_form(p, l_km, sp).unwrap();
            let direct = units::to_db(high_gain_approx(gamma_km * 1e-3, p, l_km * 1e3).unwrap());
            assert!((slope / direct - 1.0).abs() <= 1e-9, "{slope} vs {direct}");
        }
    }

    #[test]
    fn gain_band_sign_grid() {
        // 10³ (Δβ, γP) pairs
        for i in 0..40 {
            let gp = 1e-4 + 0.05 * i as f64 / 39.0;
            for j in 0..25 {
                let ratio = -6.0 + 8.0 * j as f64 / 24.0;
                let db = ratio * gp;
                let g2 = gain_parameter(db, gp, 1.0).unwrap().g_squared;
                let in_band = db > -4.0 * gp && db < 0.0;
                assert_eq!(g2 > 0.0, in_band, "Δβ/γP = {ratio}");
            }
        }
    }

    #[test]
    fn continuous_across_degenerate_boundary() {
        let gp = HNLF_GAMMA;
        let len = 300.0;
        let eps = 1e-12 * gp * gp;
        // Δβ slightly inside/outside the band near Δβ = 0, giving g² = ±ε
        let db_plus = -eps / gp;
        let db_minus = eps / gp;
        let a = signal_gain(db_plus, HNLF_GAMMA, 1.0, len).unwrap();
        let b = signal_gain(db_minus, HNLF_GAMMA, 1.0, len).unwrap();
        assert!(a.g_squared > 0.0 && b.g_squared < 0.0);
        assert!((a.gain_linear / b.gain_linear - 1.0).abs() <= 1e-6);
        let mid = signal_gain(0.0, HNLF_GAMMA, 1.0, len).unwrap();
        assert!((a.gain_linear / mid.gain_linear - 1.0).abs() <= 1e-6);
    }

    proptest! {
        #[test]
        fn gain_never_below_one(ratio in -8.0f64..2.0, gp in 1e-4f64..0.05, len in 0.0f64..500.0) {
            if let Ok(g) = signal_gain(ratio * gp, gp, 1.0, len) {
                prop_assert!(g.gain_linear >= 1.0);
                prop_assert!((g.gain_db - 10.0 * g.gain_linear.log10()).abs() < 1e-12);
            }
        }

        #[test]
        fn regime_matches_sign(ratio in -8.0f64..2.0, gp in 1e-4f64..0.05) {
            let g = signal_gain(ratio * gp, gp, 1.0, 10.0).unwrap();
            let expect = if g.g_squared.abs() <= DEGENERATE_REL_TOL * gp * gp {
                Regime::Degenerate
            } else if g.g_squared > 0.0 { Regime::Hyperbolic } else { Regime::Oscillatory };
            prop_assert_eq!(g.regime, expect);
        }

        #[test]
        fn phase_matched_gain_monotone(p in 0.1f64..1.4, dp in 0.001f64..0.5, len in 1.0f64..800.0, dl in 0.1f64..100.0) {
            let at = |p: f64, l: f64| signal_gain(-2.0 * HNLF_GAMMA * p, HNLF_GAMMA, p, l).unwrap().gain_db;
            prop_assert!(at(p + dp, len) > at(p, len));
            prop_assert!(at(p, len + dl) > at(p, len));
        }

        #[test]
        fn eight_term_series_matches(ratio in -6.0f64..2.0, gp in 1e-3f64..0.05, gl in 0.0f64..2.0) {
            let db = ratio * gp;
            let g2 = gain_parameter(db, gp, 1.0).unwrap().g_squared;
            prop_assume!(g2.abs() > 1e-30);
            let len = gl / g2.abs().sqrt();
            prop_assume!(len < 1e6);
            let exact = signal_gain(db, gp, 1.0, len).unwrap().gain_linear;
            let series = gain_series(db, gp, 1.0, len, 8).unwrap();
            prop_assert!((series / exact - 1.0).abs() <= 1e-6);
        }
    }
}
