//! Tool configuration file (JSON). Unknown keys are rejected; missing sections
//! take their defaults.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::capacity::{PonConfig, SpectralPlan};
use crate::error::{Error, Result};
use crate::fiber::{self, FiberKind, FiberProfile};
use crate::ode::OdeConfig;
use crate::pulse::PumpModulation;

/// Environment variable naming the default config file.
pub const CONFIG_ENV: &str = "PARAPON_CONFIG";

/// A preset name or a full inline profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FiberChoice {
    Preset(FiberKind),
    Inline(FiberProfile),
}

impl FiberChoice {
    pub fn profile(&self) -> FiberProfile {
        match self {
            FiberChoice::Preset(kind) => fiber::table1_profile(*kind),
            FiberChoice::Inline(p) => p.clone(),
        }
    }
}

impl Default for FiberChoice {
    fn default() -> Self {
        FiberChoice::Preset(FiberKind::Hnlf)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub path: PathBuf,
    pub format: OutputFormat,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            path: PathBuf::from("out"),
            format: OutputFormat::Csv,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ToolConfig {
    pub fiber: FiberChoice,
    pub pon: PonConfig,
    pub plan: SpectralPlan,
    pub pump: PumpModulation,
    pub ode: OdeConfig,
    pub output: OutputConfig,
}

impl Default for ToolConfig {
    fn default() -> Self {
        ToolConfig {
            fiber: FiberChoice::default(),
            pon: PonConfig::default(),
            plan: SpectralPlan::default(),
            pump: PumpModulation {
                p0: 1.0,
                omega_m: 2.0 * std::f64::consts::PI * 10e9,
            },
            ode: OdeConfig::default(),
            output: OutputConfig::default(),
        }
    }
}

impl ToolConfig {
    pub fn validate(&self) -> Result<()> {
        self.fiber.profile().validate()?;
        self.pon.validate()?;
        self.plan.validate()?;
        self.pump
            .validate()
            .map_err(|e| Error::Config(e.to_string()))?;
        self.ode.validate()?;
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ToolConfig =
            serde_json::from_str(text).map_err(|e| Error::Config(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_object_is_default() {
        assert_eq!(ToolConfig::from_json("{}").unwrap(), ToolConfig::default());
    }

    #[test]
    fn partial_sections_and_presets() {
        let cfg = ToolConfig::from_json(r#"{"fiber": "SMF", "pon": {"k_lasers": 8}}"#).unwrap();
        assert_eq!(cfg.fiber, FiberChoice::Preset(FiberKind::Smf));
        assert_eq!(cfg.pon.k_lasers, 8);
        assert_eq!(cfg.pon.n_in, 16);
    }

    #[test]
    fn inline_fiber() {
        let cfg = ToolConfig::from_json(
            r#"{"fiber": {"name": "custom", "alpha_db": 0.5, "a_eff": 20, "gamma": 10,
                "s_p": 87, "lambda0": 1.56, "disp_slope": 0.02}}"#,
        )
        .unwrap();
        assert_eq!(cfg.fiber.profile().gamma, 10.0);
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(matches!(
            ToolConfig::from_json(r#"{"fibre": "SMF"}"#),
            Err(Error::Config(_))
        ));
        assert!(ToolConfig::from_json(r#"{"pon": {"lasers": 3}}"#).is_err());
        assert!(ToolConfig::from_json(r#"{"fiber": "DSF"}"#).is_err());
    }

    #[test]
    fn nested_invariants_checked() {
        assert!(ToolConfig::from_json(r#"{"pon": {"utilization_rho": 2}}"#).is_err());
        assert!(ToolConfig::from_json(r#"{"ode": {"max_steps": 0}}"#).is_err());
        assert!(ToolConfig::from_json(r#"{"pump": {"p0": -1, "omega_m": 1}}"#).is_err());
    }

    #[test]
    fn round_trip() {
        let cfg = ToolConfig::default();
        let text = serde_json::to_string(&cfg).unwrap();
        assert_eq!(ToolConfig::from_json(&text).unwrap(), cfg);
    }
}
