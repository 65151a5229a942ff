//! Named sweep parameters and point evaluation of each sweep target.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::capacity::{self, PonConfig, SpectralPlan};
use crate::error::{Error, Result};
use crate::fiber::{self, FiberKind, FiberProfile};
use crate::gain::{self, PhaseMatchInput};
use crate::pulse::{self, PumpModulation};
use crate::units;

/// A parameter value: numeric, or a label (only `fiber` takes labels).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Number(f64),
    Label(String),
}

impl ParamValue {
    pub fn as_number(&self) -> Option<f64> {
        match self {
            ParamValue::Number(x) => Some(*x),
            ParamValue::Label(_) => None,
        }
    }
}

impl From<f64> for ParamValue {
    fn from(x: f64) -> Self {
        ParamValue::Number(x)
    }
}

impl From<&str> for ParamValue {
    fn from(s: &str) -> Self {
        ParamValue::Label(s.to_string())
    }
}

impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamValue::Number(x) => write!(f, "{x}"),
            ParamValue::Label(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Kind {
    Real,
    Count,
    Label,
}

/// (name, unit, kind)
pub(crate) const PARAMS: &[(&str, &str, Kind)] = &[
    ("k_lasers", "-", Kind::Count),
    ("n_in", "-", Kind::Count),
    ("m_out", "-", Kind::Count),
    ("w_users", "-", Kind::Count),
    ("data_rate_gbps", "Gbit/s", Kind::Real),
    ("slot_us", "us", Kind::Real),
    ("t_laser_us", "us", Kind::Real),
    ("rho", "-", Kind::Real),
    ("t_tx_us", "us", Kind::Real),
    ("fiber", "-", Kind::Label),
    ("gamma_per_w_km", "1/(W km)", Kind::Real),
    ("pump_power_w", "W", Kind::Real),
    ("p0_w", "W", Kind::Real),
    ("fm_ghz", "GHz", Kind::Real),
    ("length_km", "km", Kind::Real),
    ("use_effective_length", "-", Kind::Count),
    ("delta_beta_per_m", "1/m", Kind::Real),
    ("lambda0_um", "um", Kind::Real),
    ("lambda_p_um", "um", Kind::Real),
    ("lambda_s_um", "um", Kind::Real),
    ("disp_slope", "ps/(nm^2 km)", Kind::Real),
    ("pump_detuning_nm", "nm", Kind::Real),
    ("lambda_start_um", "um", Kind::Real),
    ("lambda_end_um", "um", Kind::Real),
    ("n_links", "-", Kind::Count),
    ("n_channels", "-", Kind::Count),
];

pub(crate) fn lookup(name: &str) -> Option<(&'static str, Kind)> {
    PARAMS
        .iter()
        .find(|(n, _, _)| *n == name)
        .map(|(_, u, k)| (*u, *k))
}

pub(crate) fn column_name(name: &str, unit: &str) -> String {
    format!("{name} [{unit}]")
}

pub(crate) fn check_value(name: &str, value: &ParamValue) -> Result<()> {
    let (_, kind) =
        lookup(name).ok_or_else(|| Error::config(format!("unknown parameter '{name}'")))?;
    match (kind, value) {
        (Kind::Label, ParamValue::Label(s)) => s.parse::<FiberKind>().map(|_| ()),
        (Kind::Label, ParamValue::Number(_)) => {
            Err(Error::config(format!("parameter '{name}' takes a label")))
        }
        (_, ParamValue::Label(_)) => Err(Error::config(format!("parameter '{name}' is numeric"))),
        (Kind::Real, ParamValue::Number(x)) if x.is_finite() => Ok(()),
        (Kind::Count, ParamValue::Number(x)) if x.is_finite() && *x >= 0.0 && x.fract() == 0.0 => {
            Ok(())
        }
        (_, ParamValue::Number(x)) => Err(Error::config(format!(
            "parameter '{name}' = {x} is not a valid {}",
            if kind == Kind::Count {
                "count"
            } else {
                "real number"
            }
        ))),
    }
}

/// What a sweep computes at each grid point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    BandwidthPerUser,
    NetworkDelay,
    SignalGain,
    MtdmBitRateChannel,
    MtdmBitRateLink,
    MtdmBitRateCore,
}

impl Target {
    pub fn as_str(self) -> &'static str {
        match self {
            Target::BandwidthPerUser => "bandwidth_per_user",
            Target::NetworkDelay => "network_delay",
            Target::SignalGain => "signal_gain",
            Target::MtdmBitRateChannel => "mtdm_bit_rate_channel",
            Target::MtdmBitRateLink => "mtdm_bit_rate_link",
            Target::MtdmBitRateCore => "mtdm_bit_rate_core",
        }
    }

    pub fn required(self) -> &'static [&'static str] {
        match self {
            Target::BandwidthPerUser => &[
                "k_lasers",
                "n_in",
                "m_out",
                "data_rate_gbps",
                "slot_us",
                "t_laser_us",
            ],
            Target::NetworkDelay => &["rho", "w_users", "t_tx_us", "t_laser_us"],
            Target::SignalGain => &["fiber", "pump_power_w", "length_km"],
            Target::MtdmBitRateChannel => &["fiber", "p0_w", "fm_ghz", "length_km"],
            Target::MtdmBitRateLink => &["fiber", "p0_w", "fm_ghz", "length_km", "n_channels"],
            Target::MtdmBitRateCore => &[
                "fiber",
                "p0_w",
                "fm_ghz",
                "length_km",
                "n_links",
                "n_channels",
            ],
        }
    }

    /// Output columns; the last one is the headline value.
    pub fn outputs(self) -> &'static [(&'static str, &'static str)] {
        match self {
            Target::BandwidthPerUser => &[("bw_per_user", "Gbit/s")],
            Target::NetworkDelay => &[("delay", "ms")],
            Target::SignalGain => &[
                ("delta_beta", "1/m"),
                ("g_squared", "1/m^2"),
                ("gain", "dB"),
            ],
            Target::MtdmBitRateChannel => &[
                ("delta_beta", "1/m"),
                ("t0", "ps"),
                ("bit_rate_channel", "Gbit/s"),
            ],
            Target::MtdmBitRateLink => &[
                ("delta_beta", "1/m"),
                ("t0", "ps"),
                ("bit_rate_link", "Gbit/s"),
            ],
            Target::MtdmBitRateCore => &[
                ("delta_beta", "1/m"),
                ("t0", "ps"),
                ("bit_rate_core", "Mbit/s"),
            ],
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Resolved parameters at one grid point.
pub(crate) struct Point<'a>(pub BTreeMap<&'a str, &'a ParamValue>);

impl Point<'_> {
    fn num(&self, name: &str) -> Result<f64> {
        self.opt(name)?
            .ok_or_else(|| Error::config(format!("missing parameter '{name}'")))
    }

    fn opt(&self, name: &str) -> Result<Option<f64>> {
        match self.0.get(name) {
            None => Ok(None),
            Some(ParamValue::Number(x)) => Ok(Some(*x)),
            Some(ParamValue::Label(_)) => {
                Err(Error::config(format!("parameter '{name}' is numeric")))
            }
        }
    }

    fn count(&self, name: &str) -> Result<u32> {
        let x = self.num(name)?;
        if x < 0.0 || x > u32::MAX as f64 || x.fract() != 0.0 {
            return Err(Error::config(format!(
                "parameter '{name}' = {x} is not a count"
            )));
        }
        Ok(x as u32)
    }

    fn fiber(&self) -> Result<FiberProfile> {
        let label = match self.0.get("fiber") {
            Some(ParamValue::Label(s)) => s.as_str(),
            Some(_) => return Err(Error::config("parameter 'fiber' takes a label")),
            None => return Err(Error::config("missing parameter 'fiber'")),
        };
        let mut profile = fiber::profile_by_name(label)?;
        if let Some(g) = self.opt("gamma_per_w_km")? {
            profile.gamma = g;
        }
        if let Some(l0) = self.opt("lambda0_um")? {
            profile.lambda0 = l0;
        }
        if let Some(s) = self.opt("disp_slope")? {
            profile.disp_slope = s;
        }
        profile.validate()?;
        Ok(profile)
    }

    fn pon(&self) -> PonConfig {
        let d = PonConfig::default();
        let get = |n: &str, dflt: f64| self.opt(n).ok().flatten().unwrap_or(dflt);
        let cnt = |n: &str, dflt: u32| self.count(n).unwrap_or(dflt);
        PonConfig {
            k_lasers: cnt("k_lasers", d.k_lasers),
            n_in: cnt("n_in", d.n_in),
            m_out: cnt("m_out", d.m_out),
            w_users: cnt("w_users", d.w_users),
            data_rate_d: get("data_rate_gbps", d.data_rate_d),
            slot_t: get("slot_us", d.slot_t * 1e6) * 1e-6,
            t_laser: get("t_laser_us", d.t_laser * 1e6) * 1e-6,
            utilization_rho: get("rho", d.utilization_rho),
            t_tx: get("t_tx_us", d.t_tx * 1e6) * 1e-6,
        }
    }

    fn length_m(&self, profile: &FiberProfile) -> Result<f64> {
        let km = self.num("length_km")?;
        let use_leff = self.opt("use_effective_length")?.unwrap_or(0.0) != 0.0;
        let km = if use_leff {
            fiber::effective_length(profile.alpha_db, km)?
        } else {
            km
        };
        Ok(units::km_to_m(km))
    }

    /// Δβ in m⁻¹: explicit, from a wavelength trio, from the spectral plan
    /// (outermost link centre), or the phase-matched value −2γP.
    fn delta_beta(&self, profile: &FiberProfile, p_pump: f64) -> Result<f64> {
        if let Some(db) = self.opt("delta_beta_per_m")? {
            return Ok(db);
        }
        let lambda_s = if let Some(ls) = self.opt("lambda_s_um")? {
            Some(ls)
        } else if self.opt("pump_detuning_nm")?.is_some() {
            let defaults = SpectralPlan::default();
            let plan = SpectralPlan {
                lambda_start: self
                    .opt("lambda_start_um")?
                    .unwrap_or(defaults.lambda_start),
                lambda_end: self.opt("lambda_end_um")?.unwrap_or(defaults.lambda_end),
                n_links: self.count("n_links")?,
                n_channels: 1,
            };
            Some(plan.link_center(plan.n_links - 1)?)
        } else {
            None
        };
        match lambda_s {
            None => Ok(-2.0 * profile.gamma_si() * p_pump),
            Some(lambda_s) => {
                let lambda_p = self.num("lambda_p_um")?;
                let lambda0 = match self.opt("pump_detuning_nm")? {
                    Some(nm) => lambda_p - nm * 1e-3,
                    None => profile.lambda0,
                };
                gain::phase_mismatch(&PhaseMatchInput {
                    lambda0,
                    lambda_p,
                    lambda_s,
                    disp_slope: profile.disp_slope,
                })
            }
        }
    }

    pub(crate) fn evaluate(&self, target: Target) -> Result<Vec<f64>> {
        match target {
            Target::BandwidthPerUser => Ok(vec![capacity::bandwidth_per_user(&self.pon())?]),
            Target::NetworkDelay => Ok(vec![capacity::network_delay(&self.pon())? * 1e3]),
            Target::SignalGain => {
                let profile = self.fiber()?;
                let p = self.num("pump_power_w")?;
                let db = self.delta_beta(&profile, p)?;
                let len = self.length_m(&profile)?;
                let g = gain::signal_gain(db, profile.gamma_si(), p, len)?;
                Ok(vec![db, g.g_squared, g.gain_db])
            }
            Target::MtdmBitRateChannel | Target::MtdmBitRateLink | Target::MtdmBitRateCore => {
                let profile = self.fiber()?;
                let modulation =
                    PumpModulation::from_frequency(self.num("p0_w")?, self.num("fm_ghz")? * 1e9)?;
                let db = self.delta_beta(&profile, modulation.p0)?;
                let len = self.length_m(&profile)?;
                let t0 = pulse::pulse_width(db, profile.gamma_si(), &modulation, len)?;
                let t0_ns = units::s_to_ns(t0);
                let rate = match target {
                    Target::MtdmBitRateChannel => capacity::mtdm_bit_rate_channel(t0_ns)?,
                    Target::MtdmBitRateLink => {
                        capacity::mtdm_bit_rate_link(t0_ns, self.count("n_channels")?)?
                    }
                    _ => capacity::mtdm_bit_rate_core(
                        t0_ns,
                        self.count("n_links")?,
                        self.count("n_channels")?,
                    )?,
                };
                Ok(vec![db, units::s_to_ps(t0), rate])
            }
        }
    }
}
