//! Fiber physics primitives and the built-in SMF / HNLF presets.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::{self, DB_PER_NEPER_SQUARED};

/// Default zero-dispersion wavelength for both presets, µm.
pub const DEFAULT_LAMBDA0_UM: f64 = 1.55;
/// Default dispersion slope for standard single-mode fiber, ps/(nm²·km).
pub const SMF_DISP_SLOPE: f64 = 0.07;
/// Default dispersion slope for highly nonlinear fiber, ps/(nm²·km).
pub const HNLF_DISP_SLOPE: f64 = 0.03;

/// Physical parameters of one fiber type.
///
/// `s_p` is the parametric gain slope (dB per W·km), while `disp_slope` is the
/// dispersion slope at `lambda0` that enters the linear phase mismatch. The two
/// are unrelated quantities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiberProfile {
    pub name: String,
    /// Attenuation, dB/km.
    pub alpha_db: f64,
    /// Effective area, µm².
    pub a_eff: f64,
    /// Nonlinear coefficient, W⁻¹·km⁻¹.
    pub gamma: f64,
    /// Parametric gain slope, dB/(W·km).
    pub s_p: f64,
    /// Zero-dispersion wavelength, µm.
    pub lambda0: f64,
    /// Dispersion slope at `lambda0`, ps/(nm²·km).
    pub disp_slope: f64,
}

impl FiberProfile {
    pub fn validate(&self) -> Result<()> {
        let checks = [
            (self.alpha_db >= 0.0, "alpha_db must be >= 0"),
            (self.a_eff > 0.0, "a_eff must be > 0"),
            (self.gamma > 0.0, "gamma must be > 0"),
            (self.s_p > 0.0, "s_p must be > 0"),
            (self.lambda0 > 0.0, "lambda0 must be > 0"),
            (self.disp_slope.is_finite(), "disp_slope must be finite"),
        ];
        for (ok, msg) in checks {
            if !ok {
                return Err(Error::config(format!("fiber '{}': {msg}", self.name)));
            }
        }
        Ok(())
    }

    /// Nonlinear coefficient in W⁻¹·m⁻¹.
    pub fn gamma_si(&self) -> f64 {
        units::per_km_to_per_m(self.gamma)
    }

    pub fn alpha_linear(&self) -> f64 {
        self.alpha_db * std::f64::consts::LN_10 / 10.0
    }
}

/// The two fiber presets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FiberKind {
    #[serde(rename = "SMF")]
    Smf,
    #[serde(rename = "HNLF")]
    Hnlf,
}

impl FiberKind {
    pub const ALL: [FiberKind; 2] = [FiberKind::Smf, FiberKind::Hnlf];

    pub fn label(self) -> &'static str {
        match self {
            FiberKind::Smf => "SMF",
            FiberKind::Hnlf => "HNLF",
        }
    }
}

impl fmt::Display for FiberKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for FiberKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "SMF" => Ok(FiberKind::Smf),
            "HNLF" => Ok(FiberKind::Hnlf),
            other => Err(Error::config(format!(
                "unknown fiber preset '{other}' (expected SMF or HNLF)"
            ))),
        }
    }
}

/// Converts attenuation from dB/km to a linear rate in km⁻¹.
pub fn attenuation_db_to_linear(alpha_db: f64) -> Result<f64> {
    if !(alpha_db >= 0.0) {
        return Err(Error::domain(format!(
            "attenuation must be >= 0 dB/km, got {alpha_db}"
        )));
    }
    Ok(alpha_db * std::f64::consts::LN_10 / 10.0)
}

/// γ = 2π·n₂/(λ·A_eff), returned in W⁻¹·km⁻¹.
///
/// `n2` in m²/W, `lambda_um` in µm and `a_eff_um2` in µm².
pub fn nonlinear_coefficient(n2: f64, lambda_um: f64, a_eff_um2: f64) -> Result<f64> {
    if !(n2 > 0.0 && lambda_um > 0.0 && a_eff_um2 > 0.0) {
        return Err(Error::domain(format!(
            "n2, lambda and a_eff must all be > 0 (got {n2}, {lambda_um}, {a_eff_um2})"
        )));
    }
    let per_m = 2.0 * std::f64::consts::PI * n2 / (units::um_to_m(lambda_um) * a_eff_um2 * 1e-12);
    Ok(units::per_m_to_per_km(per_m))
}

/// Loss-weighted interaction length (1 − e^{−αL})/α in km.
///
/// The lossless case returns `length_km` exactly.
pub fn effective_length(alpha_db: f64, length_km: f64) -> Result<f64> {
    let alpha = attenuation_db_to_linear(alpha_db)?;
    if !(length_km >= 0.0) {
        return Err(Error::domain(format!(
            "length must be >= 0 km, got {length_km}"
        )));
    }
    if alpha == 0.0 {
        return Ok(length_km);
    }
    // -expm1(-x) keeps precision when αL is small.
    Ok(-(-alpha * length_km).exp_m1() / alpha)
}

/// S_p = 10·log₁₀(e²)·γ in dB/(W·km), for γ in W⁻¹·km⁻¹.
pub fn parametric_gain_slope(gamma: f64) -> Result<f64> {
    if !(gamma > 0.0) {
        return Err(Error::domain(format!("gamma must be > 0, got {gamma}")));
    }
    Ok(DB_PER_NEPER_SQUARED * gamma)
}

/// Tabulated fiber parameters at 1.55 µm.
pub fn table1_profile(kind: FiberKind) -> FiberProfile {
    match kind {
        FiberKind::Smf => FiberProfile {
            name: "SMF".into(),
            alpha_db: 0.2,
            a_eff: 85.0,
            gamma: 1.8,
            s_p: 16.0,
            lambda0: DEFAULT_LAMBDA0_UM,
            disp_slope: SMF_DISP_SLOPE,
        },
        FiberKind::Hnlf => FiberProfile {
            name: "HNLF".into(),
            alpha_db: 0.7,
            a_eff: 12.0,
            gamma: 15.0,
            s_p: 131.0,
            lambda0: DEFAULT_LAMBDA0_UM,
            disp_slope: HNLF_DISP_SLOPE,
        },
    }
}

/// Looks a preset up by name ("SMF" / "HNLF", case-insensitive).
pub fn profile_by_name(name: &str) -> Result<FiberProfile> {
    Ok(table1_profile(name.parse()?))
}
