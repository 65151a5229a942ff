//! The parametric amplifier as a pulse source: with a sinusoidally modulated
//! pump the high-gain output is approximately a chirped Gaussian whose width
//! follows from the curvature of the pump power at its peak.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gain::{self, MAX_GAIN_DB};

/// Pump power P(t) = P₀·cos²(ω_m·t).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PumpModulation {
    /// Peak pump power, W.
    pub p0: f64,
    /// Modulation angular frequency, rad/s.
    pub omega_m: f64,
}

impl PumpModulation {
    pub fn new(p0: f64, omega_m: f64) -> Result<Self> {
        let m = PumpModulation { p0, omega_m };
        m.validate()?;
        Ok(m)
    }

    /// Builds the modulation from a frequency in Hz.
    pub fn from_frequency(p0: f64, f_hz: f64) -> Result<Self> {
        Self::new(p0, 2.0 * std::f64::consts::PI * f_hz)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p0 > 0.0) || !self.p0.is_finite() {
            return Err(Error::domain(format!(
                "peak pump power must be > 0 W, got {}",
                self.p0
            )));
        }
        if !(self.omega_m > 0.0) || !self.omega_m.is_finite() {
            return Err(Error::domain(format!(
                "modulation frequency must be > 0, got {} rad/s",
                self.omega_m
            )));
        }
        Ok(())
    }

    pub fn power_at(&self, t: f64) -> f64 {
        let c = (self.omega_m * t).cos();
        self.p0 * c * c
    }
}

/// Closed-form pulse parameters. `t0` in s, `g0` in m⁻¹.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PulseParams {
    pub g0: f64,
    pub t0: f64,
    pub a0: f64,
    pub chirp_c: f64,
}

/// Gain coefficient at the pump peak, g₀ = √(−Δβ(Δβ/4 + γP₀)).
pub fn peak_gain_param(delta_beta: f64, gamma: f64, p0: f64) -> Result<f64> {
    let edge = -4.0 * gamma * p0;
    if !(delta_beta <= 0.0 && delta_beta >= edge) {
        return Err(Error::domain(format!(
            "Δβ = {delta_beta:e} m⁻¹ is outside the gain band [{edge:e}, 0] m⁻¹"
        )));
    }
    let g2 = gain::gain_parameter(delta_beta, gamma, p0)?.g_squared;
    Ok(g2.max(0.0).sqrt())
}

/// Second time derivative of the pump power at its peak, W/s².
pub fn pump_curvature(modulation: &PumpModulation) -> f64 {
    -2.0 * modulation.p0 * modulation.omega_m * modulation.omega_m
}

/// Pulse width T₀ = √(2g₀ / (Δβ·γ·P₀''·L)) in seconds.
pub fn pulse_width(
    delta_beta: f64,
    gamma: f64,
    modulation: &PumpModulation,
    length: f64,
) -> Result<f64> {
    modulation.validate()?;
    if !(length > 0.0) {
        return Err(Error::domain(format!("length must be > 0 m, got {length}")));
    }
    if !(delta_beta < 0.0) {
        return Err(Error::domain(format!(
            "pulse width needs Δβ < 0, got {delta_beta:e} m⁻¹"
        )));
    }
    let g0 = peak_gain_param(delta_beta, gamma, modulation.p0)?;
    let curvature = pump_curvature(modulation);
    let denom = delta_beta * gamma * curvature * length;
    let radicand = 2.0 * g0 / denom;
    if !(radicand > 0.0) || !radicand.is_finite() {
        let sign = |x: f64| {
            if x > 0.0 {
                "+"
            } else if x < 0.0 {
                "-"
            } else {
                "0"
            }
        };
        return Err(Error::Numerical(format!(
            "pulse width radicand is {radicand:e}: signs g0 {}, Δβ {}, γ {}, P0'' {}, L {}",
            sign(g0),
            sign(delta_beta),
            sign(gamma),
            sign(curvature),
            sign(length)
        )));
    }
    Ok(radicand.sqrt())
}

/// Pulse amplitude A₀ = exp(g₀L)/g₀.
pub fn pulse_amplitude(g0: f64, length: f64) -> Result<f64> {
    if !(g0 > 0.0) {
        return Err(Error::domain(format!("g0 must be > 0, got {g0}")));
    }
    if !(length >= 0.0) {
        return Err(Error::domain(format!(
            "length must be >= 0 m, got {length}"
        )));
    }
    // power gain e^{2g₀L} in dB
    let db = 20.0 * g0 * length * std::f64::consts::LOG10_E;
    if db > MAX_GAIN_DB {
        return Err(Error::Range(format!(
            "pulse gain e^(2g0L) = {db:.1} dB exceeds {MAX_GAIN_DB} dB"
        )));
    }
    Ok((g0 * length).exp() / g0)
}

/// Evaluates g₀, T₀ and A₀ together.
pub fn pulse_params(
    delta_beta: f64,
    gamma: f64,
    modulation: &PumpModulation,
    length: f64,
    chirp_c: f64,
) -> Result<PulseParams> {
    let t0 = pulse_width(delta_beta, gamma, modulation, length)?;
    let g0 = peak_gain_param(delta_beta, gamma, modulation.p0)?;
    let a0 = pulse_amplitude(g0, length)?;
    Ok(PulseParams {
        g0,
        t0,
        a0,
        chirp_c,
    })
}

/// Chirped Gaussian A(t) = A₀·exp(−(1 + iC)/2·(t/T₀)²).
pub fn gaussian_envelope(params: &PulseParams, t: f64) -> Complex64 {
    let x = t / params.t0;
    let arg = Complex64::new(1.0, params.chirp_c) * (-0.5 * x * x);
    params.a0 * arg.exp()
}

/// Full width at half maximum of |A(t)|², 2√(ln 2)·T₀.
pub fn intensity_fwhm(t0: f64) -> f64 {
    2.0 * std::f64::consts::LN_2.sqrt() * t0
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const GAMMA: f64 = 15e-3;

    fn ten_ghz() -> PumpModulation {
        PumpModulation::from_frequency(1.0, 1e10).unwrap()
    }

    #[test]
    fn peak_gain_examples() {
        assert_eq!(peak_gain_param(0.0, GAMMA, 1.0).unwrap(), 0.0);
        assert_relative_eq!(
            peak_gain_param(-2.0 * GAMMA, GAMMA, 1.0).unwrap(),
            GAMMA,
            max_relative = 1e-15
        );
        assert_eq!(peak_gain_param(-4.0 * GAMMA, GAMMA, 1.0).unwrap(), 0.0);
        assert!(matches!(
            peak_gain_param(-4.1 * GAMMA, GAMMA, 1.0),
            Err(Error::Domain(_))
        ));
        assert!(peak_gain_param(1e-6, GAMMA, 1.0).is_err());
    }

    #[test]
    fn peak_gain_matches_gain_parameter() {
        for i in 1..40 {
            let db = -4.0 * GAMMA * 1.3 * i as f64 / 40.0;
            let g0 = peak_gain_param(db, GAMMA, 1.3).unwrap();
            let g = gain::gain_parameter(db, GAMMA, 1.3)
                .unwrap()
                .g_squared
                .sqrt();
            assert!((g0 - g).abs() <= 1e-12 * g);
        }
    }

    #[test]
    fn curvature_analytic_and_finite_difference() {
        let m = ten_ghz();
        let c = pump_curvature(&m);
        assert_relative_eq!(c, -7.895_683_520_871_487e21, max_relative = 1e-12);
        // central second difference at Δt = 1e-15 s
        let dt = 1e-15;
        let fd = (m.power_at(dt) - 2.0 * m.power_at(0.0) + m.power_at(-dt)) / (dt * dt);
        assert!((fd / c - 1.0).abs() < 1e-3, "fd {fd} vs {c}");
        let fast = PumpModulation::new(1.0, 2.0 * m.omega_m).unwrap();
        assert_relative_eq!(pump_curvature(&fast), 4.0 * c, max_relative = 1e-15);
        assert!(c < 0.0);
    }

    #[test]
    fn pulse_width_reference() {
        let t0 = pulse_width(-2.0 * GAMMA, GAMMA, &ten_ghz(), 500.0).unwrap();
        assert_relative_eq!(t0, 4.109_362_960_409_999e-12, max_relative = 1e-10);
    }

    #[test]
    fn pulse_width_inverse_length() {
        let m = ten_ghz();
        let a = pulse_width(-2.0 * GAMMA, GAMMA, &m, 400.0).unwrap();
        let b = pulse_width(-2.0 * GAMMA, GAMMA, &m, 800.0).unwrap();
        assert!(((b * b) / (a * a) - 0.5).abs() < 1e-9);
    }

    #[test]
    fn pulse_width_shrinks_near_zero_mismatch() {
        let m = ten_ghz();
        let near = pulse_width(-1e-12, GAMMA, &m, 500.0).unwrap();
        let far = pulse_width(-1e-3, GAMMA, &m, 500.0).unwrap();
        assert!(near > far);
        // T₀² = 2g₀/(ΔβγP''L) with g₀ ∝ √|Δβ| → T₀ ∝ |Δβ|^{-1/4} as Δβ → 0⁻;
        // at the band edge g₀ → 0 and the radicand vanishes.
        assert!(matches!(
            pulse_width(-4.0 * GAMMA, GAMMA, &m, 500.0),
            Err(Error::Numerical(_))
        ));
        assert!(pulse_width(0.0, GAMMA, &m, 500.0).is_err());
        assert!(pulse_width(-0.01, GAMMA, &m, 0.0).is_err());
    }

    #[test]
    fn amplitude_examples() {
        assert_eq!(pulse_amplitude(1.0, 0.0).unwrap(), 1.0);
        assert_relative_eq!(
            pulse_amplitude(0.015, 500.0).unwrap(),
            120_536.160_963_737_55,
            max_relative = 1e-12
        );
        assert!(pulse_amplitude(0.015, 600.0).unwrap() > pulse_amplitude(0.015, 500.0).unwrap());
        assert!(matches!(pulse_amplitude(0.015, 1e5), Err(Error::Range(_))));
        assert!(pulse_amplitude(0.0, 1.0).is_err());
    }

    #[test]
    fn envelope_shape() {
        for &c in &[0.0, 1.5, -3.0] {
            let p = PulseParams {
                g0: 0.015,
                t0: 4e-12,
                a0: 2.5,
                chirp_c: c,
            };
            assert_eq!(gaussian_envelope(&p, 0.0), Complex64::new(2.5, 0.0));
            assert_relative_eq!(
                gaussian_envelope(&p, p.t0).norm(),
                2.5 * (-0.5f64).exp(),
                max_relative = 1e-14
            );
            for &t in &[1e-13, 3e-12, 9e-12] {
                let a = gaussian_envelope(&p, t);
                let b = gaussian_envelope(&p, -t);
                assert!((a - b).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn fwhm_by_bisection() {
        let p = PulseParams {
            g0: 0.015,
            t0: 4.1e-12,
            a0: 1.0,
            chirp_c: 0.7,
        };
        let half = 0.5 * gaussian_envelope(&p, 0.0).norm_sqr();
        let (mut lo, mut hi) = (0.0, 10.0 * p.t0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if gaussian_envelope(&p, mid).norm_sqr() > half {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert_relative_eq!(2.0 * lo, intensity_fwhm(p.t0), max_relative = 1e-12);
    }

    #[test]
    fn power_law_exponents() {
        // least-squares slope of log T₀ against log L and log ω over a decade
        fn slope(xs: &[f64], ys: &[f64]) -> (f64, f64) {
            let n = xs.len() as f64;
            let mx = xs.iter().sum::<f64>() / n;
            let my = ys.iter().sum::<f64>() / n;
            let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
            let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
            let b = sxy / sxx;
            let resid = xs
                .iter()
                .zip(ys)
                .map(|(x, y)| (y - my - b * (x - mx)).abs())
                .fold(0.0, f64::max);
            (b, resid)
        }
        let lengths: Vec<f64> = (0..=10)
            .map(|i| 100.0 * 10f64.powf(i as f64 / 10.0))
            .collect();
        let (xs, ys): (Vec<f64>, Vec<f64>) = lengths
            .iter()
            .map(|&l| {
                (
                    l.ln(),
                    pulse_width(-0.02, GAMMA, &ten_ghz(), l).unwrap().ln(),
                )
            })
            .unzip();
        let (b, r) = slope(&xs, &ys);
        assert!((b + 0.5).abs() < 1e-9 && r < 1e-9, "{b} {r}");

        let freqs: Vec<f64> = (0..=10)
            .map(|i| 1e9 * 10f64.powf(i as f64 / 10.0))
            .collect();
        let (xs, ys): (Vec<f64>, Vec<f64>) = freqs
            .iter()
            .map(|&f| {
                let m = PumpModulation::from_frequency(1.0, f).unwrap();
                (f.ln(), pulse_width(-0.02, GAMMA, &m, 500.0).unwrap().ln())
            })
            .unzip();
        let (b, r) = slope(&xs, &ys);
        assert!((b + 1.0).abs() < 1e-9 && r < 1e-9, "{b} {r}");
    }

    #[test]
    fn modulation_validation() {
        assert!(PumpModulation::new(0.0, 1.0).is_err());
        assert!(PumpModulation::new(1.0, -1.0).is_err());
    }
}
