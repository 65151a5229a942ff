//! Hybrid WDM/TDM PON figures of merit: per-user bandwidth, service window,
//! network delay, per-link spectral width and MTDM bit rates.
//!
//! Times are in seconds and data rates in Gbit/s unless a name says otherwise.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Network dimensioning parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PonConfig {
    /// Lasers at the OLT (K).
    pub k_lasers: u32,
    /// AWG input ports (N).
    pub n_in: u32,
    /// AWG output ports (M).
    pub m_out: u32,
    /// Users (W).
    pub w_users: u32,
    /// Line data rate d, Gbit/s.
    pub data_rate_d: f64,
    /// Slot assigned to each ONU, s.
    pub slot_t: f64,
    /// Laser switching time, s.
    pub t_laser: f64,
    /// Network utilization ρ ∈ [0, 1].
    pub utilization_rho: f64,
    /// Average slot per user, s.
    pub t_tx: f64,
}

impl Default for PonConfig {
    fn default() -> Self {
        PonConfig {
            k_lasers: 16,
            n_in: 16,
            m_out: 16,
            w_users: 256,
            data_rate_d: 2.5,
            slot_t: 100e-6,
            t_laser: 25e-6,
            utilization_rho: 0.8,
            t_tx: 100e-6,
        }
    }
}

impl PonConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("k_lasers", self.k_lasers),
            ("n_in", self.n_in),
            ("m_out", self.m_out),
            ("w_users", self.w_users),
        ] {
            if v < 1 {
                return Err(Error::config(format!("{name} must be >= 1")));
            }
        }
        if !(self.utilization_rho >= 0.0 && self.utilization_rho <= 1.0) {
            return Err(Error::config(format!(
                "utilization must lie in [0, 1], got {}",
                self.utilization_rho
            )));
        }
        for (name, v) in [
            ("slot_t", self.slot_t),
            ("t_laser", self.t_laser),
            ("t_tx", self.t_tx),
        ] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::config(format!("{name} must be >= 0 s, got {v}")));
            }
        }
        if !(self.data_rate_d > 0.0) || !self.data_rate_d.is_finite() {
            return Err(Error::config(format!(
                "data rate must be > 0 Gbit/s, got {}",
                self.data_rate_d
            )));
        }
        Ok(())
    }
}

/// Wavelength band shared by the links of one fiber core.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SpectralPlan {
    /// Band start λ_i, µm.
    pub lambda_start: f64,
    /// Band end λ_f, µm.
    pub lambda_end: f64,
    /// Links per core (N_L).
    pub n_links: u32,
    /// Channels per link (N_ch).
    pub n_channels: u32,
}

impl Default for SpectralPlan {
    fn default() -> Self {
        SpectralPlan {
            lambda_start: 1.5,
            lambda_end: 1.65,
            n_links: 24,
            n_channels: 16,
        }
    }
}

impl SpectralPlan {
    pub fn validate(&self) -> Result<()> {
        if !(self.lambda_end > self.lambda_start) || !(self.lambda_start > 0.0) {
            return Err(Error::config(format!(
                "spectral plan needs 0 < lambda_start < lambda_end (got {} .. {})",
                self.lambda_start, self.lambda_end
            )));
        }
        if self.n_links < 1 || self.n_channels < 1 {
            return Err(Error::config("n_links and n_channels must be >= 1"));
        }
        Ok(())
    }

    /// Centre wavelength of link `index` (0-based), µm.
    pub fn link_center(&self, index: u32) -> Result<f64> {
        self.validate()?;
        if index >= self.n_links {
            return Err(Error::domain(format!(
                "link {index} out of range for {} links",
                self.n_links
            )));
        }
        let width = channel_spacing(self)?;
        Ok(self.lambda_start + (index as f64 + 0.5) * width)
    }
}

/// BW_user = K·d·T / (N·M·(T + T_Laser)), Gbit/s.
pub fn bandwidth_per_user(cfg: &PonConfig) -> Result<f64> {
    cfg.validate()?;
    let period = cfg.slot_t + cfg.t_laser;
    if !(period > 0.0) {
        return Err(Error::domain("slot_t + t_laser must be > 0"));
    }
    let k = cfg.k_lasers as f64;
    let nm = cfg.n_in as f64 * cfg.m_out as f64;
    Ok(k * cfg.data_rate_d * cfg.slot_t / (nm * period))
}

/// T_window = (N·M/K)·(T + T_Laser), s.
pub fn service_window(cfg: &PonConfig) -> Result<f64> {
    cfg.validate()?;
    let nm = cfg.n_in as f64 * cfg.m_out as f64;
    Ok(nm / cfg.k_lasers as f64 * (cfg.slot_t + cfg.t_laser))
}

/// Average network delay ρ·(W/2)·(T_tx + T_Laser), s.
pub fn network_delay(cfg: &PonConfig) -> Result<f64> {
    cfg.validate()?;
    Ok(cfg.utilization_rho * (cfg.w_users as f64 / 2.0) * (cfg.t_tx + cfg.t_laser))
}

/// Spectral width per link Δλ₀ = (λ_f − λ_i)/N_L, µm.
pub fn channel_spacing(plan: &SpectralPlan) -> Result<f64> {
    plan.validate()?;
    Ok((plan.lambda_end - plan.lambda_start) / plan.n_links as f64)
}

fn check_t0(t0_ns: f64) -> Result<()> {
    if !(t0_ns > 0.0) || !t0_ns.is_finite() {
        return Err(Error::domain(format!(
            "pulse width must be > 0 ns, got {t0_ns}"
        )));
    }
    Ok(())
}

/// MTDM bit rate per channel 1/(4T₀), Gbit/s for T₀ in ns.
pub fn mtdm_bit_rate_channel(t0_ns: f64) -> Result<f64> {
    check_t0(t0_ns)?;
    Ok(0.25 / t0_ns)
}

/// MTDM bit rate per link, Gbit/s.
pub fn mtdm_bit_rate_link(t0_ns: f64, n_channels: u32) -> Result<f64> {
    check_t0(t0_ns)?;
    if n_channels < 1 {
        return Err(Error::domain("n_channels must be >= 1"));
    }
    Ok(0.25 * n_channels as f64 / t0_ns)
}

/// MTDM bit rate per fiber core, Mbit/s.
pub fn mtdm_bit_rate_core(t0_ns: f64, n_links: u32, n_channels: u32) -> Result<f64> {
    check_t0(t0_ns)?;
    if n_links < 1 || n_channels < 1 {
        return Err(Error::domain("n_links and n_channels must be >= 1"));
    }
    Ok(0.25 * 1000.0 * n_links as f64 * n_channels as f64 / t0_ns)
}

/// Parameters outside the ranges the model was studied over. These are
/// reported, never rejected.
pub fn range_warnings(
    lambda_s_um: Option<f64>,
    lambda_p_um: Option<f64>,
    n_links: Option<u32>,
    p_pump_w: Option<f64>,
) -> Vec<String> {
    let mut out = Vec::new();
    if let Some(ls) = lambda_s_um {
        if !(1.5..=1.65).contains(&ls) {
            out.push(format!("signal wavelength {ls} µm outside [1.5, 1.65] µm"));
        }
    }
    if let Some(lp) = lambda_p_um {
        if !(1.4..=1.55).contains(&lp) {
            out.push(format!("pump wavelength {lp} µm outside [1.4, 1.55] µm"));
        }
    }
    if let Some(nl) = n_links {
        if nl > 24 {
            out.push(format!("{nl} links exceeds 24"));
        }
    }
    if let Some(p) = p_pump_w {
        if !(0.5..=1.4).contains(&p) {
            out.push(format!("pump power {p} W outside [0.5, 1.4] W"));
        }
    }
    out
}
