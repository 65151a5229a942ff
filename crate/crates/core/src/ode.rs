//! Numerical integration of the coupled pump / signal / idler amplitude
//! equations. This is the independent check on the closed-form gain: it keeps
//! pump depletion, self- and cross-phase modulation and the full FWM coupling.
//!
//! Units are SI: amplitudes in √W, γ in W⁻¹·m⁻¹, z in m.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Fixed-step RK4 uses `length / DEFAULT_STEPS` unless a step is given.
pub const DEFAULT_STEPS: usize = 4096;

/// Complex amplitudes of the three waves at position `z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThreeWaveState {
    pub a_p: Complex64,
    pub a_s: Complex64,
    pub a_i: Complex64,
    pub z: f64,
}

impl ThreeWaveState {
    /// Real-valued seed at z = 0 from powers in W.
    pub fn from_powers(p_pump: f64, p_signal: f64, p_idler: f64) -> Self {
        ThreeWaveState {
            a_p: Complex64::new(p_pump.sqrt(), 0.0),
            a_s: Complex64::new(p_signal.sqrt(), 0.0),
            a_i: Complex64::new(p_idler.sqrt(), 0.0),
            z: 0.0,
        }
    }

    pub fn pump_power(&self) -> f64 {
        self.a_p.norm_sqr()
    }

    pub fn signal_power(&self) -> f64 {
        self.a_s.norm_sqr()
    }

    pub fn idler_power(&self) -> f64 {
        self.a_i.norm_sqr()
    }

    /// |A_p|² + |A_s|² + |A_i|²; conserved by the lossless equations.
    pub fn total_power(&self) -> f64 {
        self.pump_power() + self.signal_power() + self.idler_power()
    }

    /// Multiplies every amplitude by e^{iφ}.
    pub fn rotated(&self, phase: f64) -> Self {
        let r = Complex64::from_polar(1.0, phase);
        ThreeWaveState {
            a_p: self.a_p * r,
            a_s: self.a_s * r,
            a_i: self.a_i * r,
            z: self.z,
        }
    }

    fn as_array(&self) -> [Complex64; 3] {
        [self.a_p, self.a_s, self.a_i]
    }

    fn from_array(y: [Complex64; 3], z: f64) -> Self {
        ThreeWaveState {
            a_p: y[0],
            a_s: y[1],
            a_i: y[2],
            z,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OdeMethod {
    /// Classical fourth-order Runge–Kutta on a uniform grid.
    FixedRk4,
    /// Dormand–Prince 5(4) with step-size control.
    Adaptive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OdeConfig {
    pub method: OdeMethod,
    /// Fixed step in m; `None` means `length / 4096`.
    pub step: Option<f64>,
    /// Relative tolerance for the adaptive method.
    pub rel_tol: f64,
    pub max_steps: usize,
}

impl Default for OdeConfig {
    fn default() -> Self {
        OdeConfig {
            method: OdeMethod::FixedRk4,
            step: None,
            rel_tol: 1e-10,
            max_steps: 1_000_000,
        }
    }
}

impl OdeConfig {
    pub fn fixed(step: f64) -> Self {
        OdeConfig {
            step: Some(step),
            ..Default::default()
        }
    }

    pub fn adaptive(rel_tol: f64) -> Self {
        OdeConfig {
            method: OdeMethod::Adaptive,
            rel_tol,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(h) = self.step {
            if !(h > 0.0) || !h.is_finite() {
                return Err(Error::config(format!("ODE step must be > 0, got {h}")));
            }
        }
        if !(self.rel_tol > 0.0) {
            return Err(Error::config(format!(
                "ODE tolerance must be > 0, got {}",
                self.rel_tol
            )));
        }
        if self.max_steps == 0 {
            return Err(Error::config("ODE max_steps must be >= 1"));
        }
        Ok(())
    }
}

struct Coupled {
    gamma: f64,
    delta_beta: f64,
}

impl Coupled {
    fn rhs(&self, z: f64, y: &[Complex64; 3]) -> [Complex64; 3] {
        let [ap, as_, ai] = *y;
        let (pp, ps, pi) = (ap.norm_sqr(), as_.norm_sqr(), ai.norm_sqr());
        let phase = Complex64::from_polar(1.0, self.delta_beta * z);
        let ap2 = ap * ap;
        let ig = Complex64::new(0.0, self.gamma);
        [
            ig * ((pp + 2.0 * (ps + pi)) * ap + 2.0 * as_ * ai * ap.conj() * phase),
            ig * ((ps + 2.0 * (pp + pi)) * as_ + ai.conj() * ap2 * phase.conj()),
            ig * ((pi + 2.0 * (pp + ps)) * ai + as_.conj() * ap2 * phase.conj()),
        ]
    }
}

#[inline]
fn axpy(y: &[Complex64; 3], h: f64, terms: &[(f64, &[Complex64; 3])]) -> [Complex64; 3] {
    let mut out = *y;
    for (c, k) in terms {
        for j in 0..3 {
            out[j] += k[j] * (h * c);
        }
    }
    out
}

fn rk4_step(sys: &Coupled, z: f64, y: &[Complex64; 3], h: f64) -> [Complex64; 3] {
    let k1 = sys.rhs(z, y);
    let k2 = sys.rhs(z + 0.5 * h, &axpy(y, h, &[(0.5, &k1)]));
    let k3 = sys.rhs(z + 0.5 * h, &axpy(y, h, &[(0.5, &k2)]));
    let k4 = sys.rhs(z + h, &axpy(y, h, &[(1.0, &k3)]));
    axpy(
        y,
        h,
        &[
            (1.0 / 6.0, &k1),
            (1.0 / 3.0, &k2),
            (1.0 / 3.0, &k3),
            (1.0 / 6.0, &k4),
        ],
    )
}

fn propagate_fixed(
    sys: &Coupled,
    initial: &ThreeWaveState,
    length: f64,
    config: &OdeConfig,
) -> Result<ThreeWaveState> {
    let n = match config.step {
        Some(h) => ((length / h).ceil() as usize).max(1),
        None => DEFAULT_STEPS,
    };
    let h = length / n as f64;
    let mut y = initial.as_array();
    let z0 = initial.z;
    for i in 0..n {
        if i == config.max_steps {
            return Err(Error::StepBudget {
                achieved_z: h * i as f64,
                target_z: length,
            });
        }
        y = rk4_step(sys, z0 + h * i as f64, &y, h);
    }
    Ok(ThreeWaveState::from_array(y, z0 + length))
}

// Dormand–Prince 5(4) tableau.
const DP_C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const DP_A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const DP_B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const DP_B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

fn propagate_adaptive(
    sys: &Coupled,
    initial: &ThreeWaveState,
    length: f64,
    config: &OdeConfig,
) -> Result<ThreeWaveState> {
    let rtol = config.rel_tol;
    let z0 = initial.z;
    let z_end = z0 + length;
    let mut y = initial.as_array();
    let mut z = z0;
    let mut h = config.step.unwrap_or(length / 64.0).min(length);
    let mut steps = 0usize;

    while z < z_end {
        if steps == config.max_steps {
            return Err(Error::StepBudget {
                achieved_z: z - z0,
                target_z: length,
            });
        }
        steps += 1;
        let last = z + h >= z_end;
        if last {
            h = z_end - z;
        }
        let mut k = [[Complex64::new(0.0, 0.0); 3]; 7];
        for s in 0..7 {
            let mut ys = y;
            for (r, a) in DP_A[s].iter().enumerate().take(s) {
                for j in 0..3 {
                    ys[j] += k[r][j] * (h * a);
                }
            }
            k[s] = sys.rhs(z + DP_C[s] * h, &ys);
        }
        let mut y5 = y;
        let mut y4 = y;
        for s in 0..7 {
            for j in 0..3 {
                y5[j] += k[s][j] * (h * DP_B5[s]);
                y4[j] += k[s][j] * (h * DP_B4[s]);
            }
        }
        let scale_floor = rtol
            * 1e-12
            * y.iter()
                .map(|a| a.norm())
                .sum::<f64>()
                .max(f64::MIN_POSITIVE);
        let err = (0..3)
            .map(|j| {
                let sc = scale_floor + rtol * y[j].norm().max(y5[j].norm());
                (y5[j] - y4[j]).norm() / sc
            })
            .fold(0.0, f64::max);

        if err <= 1.0 || !err.is_finite() && h <= f64::EPSILON * z_end.abs() {
            y = y5;
            z = if last { z_end } else { z + h };
        }
        let factor = if err == 0.0 {
            5.0
        } else {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        };
        if !factor.is_finite() {
            return Err(Error::Numerical(format!(
                "adaptive step collapsed at z = {z} m"
            )));
        }
        h *= factor;
        if h <= f64::EPSILON * z_end.abs().max(1.0) {
            return Err(Error::Numerical(format!(
                "adaptive step underflow at z = {z} m"
            )));
        }
    }
    Ok(ThreeWaveState::from_array(y, z_end))
}

/// Integrates the three coupled amplitude equations over `length` metres.
///
/// The signal and idler equations couple to the conjugate of the partner
/// wave, with the linear mismatch entering as e^{∓iΔβz}.
pub fn propagate(
    initial: &ThreeWaveState,
    gamma: f64,
    delta_beta: f64,
    length: f64,
    config: &OdeConfig,
) -> Result<ThreeWaveState> {
    config.validate()?;
    if !(length >= 0.0) || !length.is_finite() {
        return Err(Error::domain(format!(
            "length must be >= 0 m, got {length}"
        )));
    }
    if !gamma.is_finite() || !delta_beta.is_finite() {
        return Err(Error::domain("gamma and delta_beta must be finite"));
    }
    if length == 0.0 {
        return Ok(*initial);
    }
    let sys = Coupled { gamma, delta_beta };
    let out = match config.method {
        OdeMethod::FixedRk4 => propagate_fixed(&sys, initial, length, config)?,
        OdeMethod::Adaptive => propagate_adaptive(&sys, initial, length, config)?,
    };
    if !out.total_power().is_finite() {
        return Err(Error::Numerical(format!(
            "integration diverged before z = {length} m; reduce the step"
        )));
    }
    Ok(out)
}

/// Signal gain |A_s(L)|²/|A_s(0)|² from a real-phase seed with no idler.
pub fn gain_oracle(
    p_pump: f64,
    p_signal0: f64,
    gamma: f64,
    delta_beta: f64,
    length: f64,
    config: &OdeConfig,
) -> Result<f64> {
    if !(p_signal0 > 0.0) {
        return Err(Error::domain(format!(
            "seed signal power must be > 0 W, got {p_signal0}"
        )));
    }
    if !(p_pump >= 0.0) {
        return Err(Error::domain(format!(
            "pump power must be >= 0 W, got {p_pump}"
        )));
    }
    let seed = ThreeWaveState::from_powers(p_pump, p_signal0, 0.0);
    let out = propagate(&seed, gamma, delta_beta, length, config)?;
    Ok(out.signal_power() / seed.signal_power())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gain::signal_gain;
    use approx::assert_relative_eq;

    const GAMMA: f64 = 15e-3;

    #[test]
    fn no_coupling_leaves_state_unchanged() {
        let s = ThreeWaveState {
            a_p: Complex64::new(1.0, 0.2),
            a_s: Complex64::new(0.01, -0.03),
            a_i: Complex64::new(0.0, 0.02),
            z: 0.0,
        };
        for &l in &[1.0, 250.0, 1e4] {
            let out = propagate(&s, 0.0, 0.01, l, &OdeConfig::default()).unwrap();
            assert_eq!((out.a_p, out.a_s, out.a_i), (s.a_p, s.a_s, s.a_i));
            assert_eq!(out.z, l);
        }
    }

    #[test]
    fn lone_pump_only_acquires_self_phase() {
        let p = 1.0;
        let len = 200.0;
        let s = ThreeWaveState::from_powers(p, 0.0, 0.0);
        let out = propagate(&s, GAMMA, -0.02, len, &OdeConfig::default()).unwrap();
        assert_relative_eq!(out.a_p.norm(), 1.0, max_relative = 1e-12);
        let expected = Complex64::from_polar(p.sqrt(), GAMMA * p * len);
        assert!((out.a_p - expected).norm() < 1e-10);
        assert_eq!(out.signal_power(), 0.0);
        assert_eq!(out.idler_power(), 0.0);
    }

    #[test]
    fn phase_matched_oracle_matches_closed_form() {
        let p = 1.0;
        let len = 200.0;
        let db = -2.0 * GAMMA * p;
        let oracle = gain_oracle(p, 1e-8, GAMMA, db, len, &OdeConfig::default()).unwrap();
        let analytic = signal_gain(db, GAMMA, p, len).unwrap().gain_linear;
        assert!(
            (oracle / analytic - 1.0).abs() < 0.01,
            "{oracle} vs {analytic}"
        );
        assert_relative_eq!(analytic, 101.357_818_061_227_95, max_relative = 1e-12);
    }

    #[test]
    fn depletion_lowers_gain() {
        let p = 1.0;
        let len = 200.0;
        let db = -2.0 * GAMMA * p;
        let cfg = OdeConfig::fixed(len / 16384.0);
        let oracle = gain_oracle(p, 0.1, GAMMA, db, len, &cfg).unwrap();
        let analytic = signal_gain(db, GAMMA, p, len).unwrap().gain_linear;
        assert!(oracle < analytic);
    }

    #[test]
    fn zero_length_gain_is_exactly_one() {
        assert_eq!(
            gain_oracle(1.0, 1e-8, GAMMA, 0.0, 0.0, &OdeConfig::default()).unwrap(),
            1.0
        );
        assert_eq!(
            gain_oracle(1.0, 3e-7, 0.0, -0.03, 500.0, &OdeConfig::default()).unwrap(),
            1.0
        );
    }

    #[test]
    fn step_budget_reports_progress() {
        let cfg = OdeConfig {
            max_steps: 10,
            ..OdeConfig::fixed(1.0)
        };
        let s = ThreeWaveState::from_powers(1.0, 1e-8, 0.0);
        match propagate(&s, GAMMA, 0.0, 100.0, &cfg) {
            Err(Error::StepBudget {
                achieved_z,
                target_z,
            }) => {
                assert_relative_eq!(achieved_z, 10.0, max_relative = 1e-12);
                assert_eq!(target_z, 100.0);
            }
            other => panic!("expected step budget error, got {other:?}"),
        }
        let cfg = OdeConfig {
            max_steps: 3,
            ..OdeConfig::adaptive(1e-12)
        };
        assert!(matches!(
            propagate(&s, GAMMA, 0.0, 500.0, &cfg),
            Err(Error::StepBudget { .. })
        ));
    }

    #[test]
    fn invalid_config_rejected() {
        let s = ThreeWaveState::from_powers(1.0, 1e-8, 0.0);
        assert!(propagate(&s, GAMMA, 0.0, 1.0, &OdeConfig::fixed(0.0)).is_err());
        assert!(propagate(&s, GAMMA, 0.0, 1.0, &OdeConfig::adaptive(-1.0)).is_err());
        assert!(propagate(&s, GAMMA, 0.0, -1.0, &OdeConfig::default()).is_err());
        assert!(gain_oracle(1.0, 0.0, GAMMA, 0.0, 1.0, &OdeConfig::default()).is_err());
    }

    #[test]
    fn adaptive_agrees_with_fixed() {
        let s = ThreeWaveState::from_powers(1.0, 1e-4, 0.0);
        let db = -GAMMA;
        let a = propagate(&s, GAMMA, db, 300.0, &OdeConfig::default()).unwrap();
        let b = propagate(&s, GAMMA, db, 300.0, &OdeConfig::adaptive(1e-11)).unwrap();
        assert!((a.signal_power() / b.signal_power() - 1.0).abs() < 1e-8);
        let c = propagate(&s, GAMMA, db, 300.0, &OdeConfig::adaptive(1e-12)).unwrap();
        assert!((c.signal_power() / b.signal_power() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn conserves_power_and_is_phase_covariant() {
        let s = ThreeWaveState {
            a_p: Complex64::new(0.9, 0.1),
            a_s: Complex64::new(0.05, 0.02),
            a_i: Complex64::new(0.01, -0.04),
            z: 0.0,
        };
        let out = propagate(&s, GAMMA, -0.01, 400.0, &OdeConfig::default()).unwrap();
        assert!((out.total_power() / s.total_power() - 1.0).abs() < 1e-6);
        let phi = 0.731;
        let rot = propagate(&s.rotated(phi), GAMMA, -0.01, 400.0, &OdeConfig::default()).unwrap();
        let expect = out.rotated(phi);
        for (a, b) in [
            (rot.a_p, expect.a_p),
            (rot.a_s, expect.a_s),
            (rot.a_i, expect.a_i),
        ] {
            assert!((a - b).norm() < 1e-9);
        }
    }

    #[test]
    fn deterministic() {
        let s = ThreeWaveState::from_powers(1.2, 1e-6, 0.0);
        let a = propagate(&s, GAMMA, -0.02, 333.0, &OdeConfig::default()).unwrap();
        let b = propagate(&s, GAMMA, -0.02, 333.0, &OdeConfig::default()).unwrap();
        assert_eq!(a, b);
    }
}
