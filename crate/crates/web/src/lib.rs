//! Browser bindings for the demo page in `www/`.
//!
//! Every export returns a JSON string; failures come back as
//! `{"error": "..."}` so the page can show them inline.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use parapon_core::capacity;
use parapon_core::fiber;
use parapon_core::gain::{self, PhaseMatchInput};
use parapon_core::pulse::{self, PumpModulation};
use parapon_core::sweep::{self, Execution, FigureId, ParamValue, SweptAxis, Target};
use parapon_core::units;

const MAX_POINTS: usize = 4096;

#[derive(Debug, Serialize)]
pub struct GainSpectrum {
    pub lambda_s_um: Vec<f64>,
    /// `None` where the gain exceeds the representable range.
    pub gain_db: Vec<Option<f64>>,
    pub phase_matched_db: f64,
}

#[derive(Debug, Serialize)]
pub struct PulseShape {
    pub t_ps: Vec<f64>,
    /// |A(t)|² normalised to the peak.
    pub intensity: Vec<f64>,
    /// Instantaneous frequency shift −C·t/(2π T₀²), GHz.
    pub chirp_ghz: Vec<f64>,
    pub t0_ps: f64,
    pub fwhm_ps: f64,
    pub peak_gain_db: f64,
    pub bit_rate_channel_gbps: f64,
}

#[derive(Debug, Serialize)]
pub struct BitRates {
    pub n_links: Vec<u32>,
    pub t0_ps: Vec<f64>,
    pub channel_gbps: Vec<f64>,
    pub link_gbps: Vec<f64>,
    pub core_tbps: Vec<f64>,
}

fn check_points(points: usize) -> parapon_core::Result<()> {
    if !(2..=MAX_POINTS).contains(&points) {
        return Err(parapon_core::Error::Config(format!(
            "points must lie in 2..={MAX_POINTS}, got {points}"
        )));
    }
    Ok(())
}

/// Signal gain across a wavelength window for a CW pump at `lambda_p_um`.
pub fn gain_spectrum(
    fiber_name: &str,
    pump_w: f64,
    length_km: f64,
    lambda_p_um: f64,
    lambda0_um: f64,
    span_nm: f64,
    points: usize,
) -> parapon_core::Result<GainSpectrum> {
    check_points(points)?;
    if span_nm.is_nan() || span_nm <= 0.0 {
        return Err(parapon_core::Error::Config(format!(
            "span must be > 0 nm, got {span_nm}"
        )));
    }
    let profile = fiber::profile_by_name(fiber_name)?;
    let gamma = profile.gamma_si();
    let length = units::km_to_m(length_km);
    let start = lambda_p_um + 1e-4;
    let step = span_nm * 1e-3 / (points - 1) as f64;

    let mut lambda_s_um = Vec::with_capacity(points);
    let mut gain_db = Vec::with_capacity(points);
    for i in 0..points {
        let ls = start + i as f64 * step;
        let db = gain::phase_mismatch(&PhaseMatchInput {
            lambda0: lambda0_um,
            lambda_p: lambda_p_um,
            lambda_s: ls,
            disp_slope: profile.disp_slope,
        })?;
        let g = match gain::signal_gain(db, gamma, pump_w, length) {
            Ok(b) => Some(b.gain_db),
            Err(parapon_core::Error::Range(_)) => None,
            Err(e) => return Err(e),
        };
        lambda_s_um.push(ls);
        gain_db.push(g);
    }
    let phase_matched_db = gain::signal_gain(-2.0 * gamma * pump_w, gamma, pump_w, length)?.gain_db;
    Ok(GainSpectrum {
        lambda_s_um,
        gain_db,
        phase_matched_db,
    })
}

/// Gaussian pulse carved by a cos²-modulated pump, phase matched at the peak.
pub fn pulse_shape(
    fiber_name: &str,
    p0_w: f64,
    fm_ghz: f64,
    length_km: f64,
    chirp: f64,
    points: usize,
) -> parapon_core::Result<PulseShape> {
    check_points(points)?;
    let profile = fiber::profile_by_name(fiber_name)?;
    let gamma = profile.gamma_si();
    let modulation = PumpModulation::from_frequency(p0_w, fm_ghz * 1e9)?;
    let length = units::km_to_m(length_km);
    let params = pulse::pulse_params(-2.0 * gamma * p0_w, gamma, &modulation, length, chirp)?;

    let half = 3.0 * params.t0;
    let peak = params.a0 * params.a0;
    let mut t_ps = Vec::with_capacity(points);
    let mut intensity = Vec::with_capacity(points);
    let mut chirp_ghz = Vec::with_capacity(points);
    for i in 0..points {
        let t = -half + 2.0 * half * i as f64 / (points - 1) as f64;
        t_ps.push(units::s_to_ps(t));
        intensity.push(pulse::gaussian_envelope(&params, t).norm_sqr() / peak);
        chirp_ghz.push(-chirp * t / (2.0 * std::f64::consts::PI * params.t0 * params.t0) * 1e-9);
    }
    Ok(PulseShape {
        t_ps,
        intensity,
        chirp_ghz,
        t0_ps: units::s_to_ps(params.t0),
        fwhm_ps: units::s_to_ps(pulse::intensity_fwhm(params.t0)),
        peak_gain_db: units::to_db(peak),
        bit_rate_channel_gbps: capacity::mtdm_bit_rate_channel(units::s_to_ns(params.t0))?,
    })
}

/// MTDM bit rates against the number of links, using the preset band plan.
pub fn bit_rates(
    fiber_name: &str,
    p0_w: f64,
    length_km: f64,
    n_channels: u32,
    max_links: u32,
) -> parapon_core::Result<BitRates> {
    let kind: fiber::FiberKind = fiber_name.parse()?;
    let id = match kind {
        fiber::FiberKind::Hnlf => 7,
        fiber::FiberKind::Smf => 13,
    };
    let mut spec = sweep::figure_preset(FigureId::new(id)?);
    spec.series = None;
    spec.swept = SweptAxis {
        param: "n_links".into(),
        min: 1.0,
        max: max_links as f64,
        steps: max_links as usize,
    };
    spec.fixed.insert("p0_w".into(), ParamValue::Number(p0_w));
    spec.fixed
        .insert("length_km".into(), ParamValue::Number(length_km));
    spec.fixed
        .insert("n_channels".into(), ParamValue::Number(n_channels as f64));
    debug_assert_eq!(spec.target, Target::MtdmBitRateChannel);

    let set = sweep::run_sweep_with(&spec, Execution::Serial)?;
    let t0_col = set
        .columns
        .iter()
        .position(|c| c.starts_with("t0 "))
        .expect("t0 column");
    let mut out = BitRates {
        n_links: Vec::new(),
        t0_ps: Vec::new(),
        channel_gbps: Vec::new(),
        link_gbps: Vec::new(),
        core_tbps: Vec::new(),
    };
    for (row, t0_ps) in set.rows.iter().zip(set.column(t0_col)) {
        let n_links = row[0].as_number().unwrap_or(0.0) as u32;
        let t0_ns = t0_ps * 1e-3;
        out.n_links.push(n_links);
        out.t0_ps.push(t0_ps);
        out.channel_gbps
            .push(row[set.value_column].as_number().unwrap_or(f64::NAN));
        out.link_gbps
            .push(capacity::mtdm_bit_rate_link(t0_ns, n_channels)?);
        out.core_tbps
            .push(capacity::mtdm_bit_rate_core(t0_ns, n_links, n_channels)? * 1e-6);
    }
    Ok(out)
}

fn to_json<T: Serialize>(r: parapon_core::Result<T>) -> String {
    let v = match r {
        Ok(v) => serde_json::to_value(v)
            .unwrap_or_else(|e| serde_json::json!({ "error": e.to_string() })),
        Err(e) => serde_json::json!({ "error": e.to_string() }),
    };
    v.to_string()
}

#[wasm_bindgen(js_name = gainSpectrum)]
pub fn gain_spectrum_js(
    fiber: &str,
    pump_w: f64,
    length_km: f64,
    lambda_p_um: f64,
    lambda0_um: f64,
    span_nm: f64,
    points: usize,
) -> String {
    to_json(gain_spectrum(
        fiber,
        pump_w,
        length_km,
        lambda_p_um,
        lambda0_um,
        span_nm,
        points,
    ))
}

#[wasm_bindgen(js_name = pulseShape)]
pub fn pulse_shape_js(
    fiber: &str,
    p0_w: f64,
    fm_ghz: f64,
    length_km: f64,
    chirp: f64,
    points: usize,
) -> String {
    to_json(pulse_shape(fiber, p0_w, fm_ghz, length_km, chirp, points))
}

#[wasm_bindgen(js_name = bitRates)]
pub fn bit_rates_js(
    fiber: &str,
    p0_w: f64,
    length_km: f64,
    n_channels: u32,
    max_links: u32,
) -> String {
    to_json(bit_rates(fiber, p0_w, length_km, n_channels, max_links))
}
