//! Physical constants and unit conversions.
//!
//! Models compute in SI (metres, seconds, watts). The user-facing units are
//! km for fiber length, µm for wavelength, W⁻¹·km⁻¹ for the nonlinear
//! coefficient, ps/(nm²·km) for the dispersion slope and ns for pulse widths.

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// 10·log₁₀(e²): dB per neper of field gain squared, ≈ 8.6859.
pub const DB_PER_NEPER_SQUARED: f64 = 20.0 * std::f64::consts::LOG10_E;

pub const M_PER_KM: f64 = 1e3;
pub const M_PER_UM: f64 = 1e-6;
pub const S_PER_NS: f64 = 1e-9;
pub const S_PER_PS: f64 = 1e-12;

#[inline]
pub fn km_to_m(km: f64) -> f64 {
    km * M_PER_KM
}

#[inline]
pub fn m_to_km(m: f64) -> f64 {
    m / M_PER_KM
}

#[inline]
pub fn um_to_m(um: f64) -> f64 {
    um * M_PER_UM
}

/// W⁻¹·km⁻¹ → W⁻¹·m⁻¹.
#[inline]
pub fn per_km_to_per_m(x: f64) -> f64 {
    x / M_PER_KM
}

/// W⁻¹·m⁻¹ → W⁻¹·km⁻¹.
#[inline]
pub fn per_m_to_per_km(x: f64) -> f64 {
    x * M_PER_KM
}

/// Dispersion slope ps/(nm²·km) → s/m³.
#[inline]
pub fn disp_slope_to_si(ps_per_nm2_km: f64) -> f64 {
    // 1 ps/(nm²·km) = 1e-12 s / (1e-18 m² · 1e3 m) = 1e3 s/m³
    ps_per_nm2_km * 1e3
}

#[inline]
pub fn s_to_ns(s: f64) -> f64 {
    s / S_PER_NS
}

#[inline]
pub fn ns_to_s(ns: f64) -> f64 {
    ns * S_PER_NS
}

#[inline]
pub fn s_to_ps(s: f64) -> f64 {
    s / S_PER_PS
}

/// Power ratio → dB.
#[inline]
pub fn to_db(ratio: f64) -> f64 {
    10.0 * ratio.log10()
}

/// dB → power ratio.
#[inline]
pub fn from_db(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn db_per_neper_matches_log_of_e_squared() {
        let direct = 10.0 * (2.0f64).exp().log10();
        assert!((DB_PER_NEPER_SQUARED - direct).abs() < 1e-13);
        assert!((DB_PER_NEPER_SQUARED - 8.685_889_638).abs() < 1e-9);
    }

    #[test]
    fn disp_slope_conversion() {
        // 0.03 ps/(nm²·km) = 0.03e-12 / (1e-18 · 1e3) s/m³ = 30 s/m³
        assert!((disp_slope_to_si(0.03) - 30.0).abs() < 1e-12);
    }

    #[test]
    fn db_round_trip() {
        for &x in &[1e-6, 0.5, 1.0, 2.0, 1e12] {
            assert!((from_db(to_db(x)) / x - 1.0).abs() < 1e-12);
        }
    }
}
