//! Sweep presets for the figure families: capacity (2–4), parametric gain
//! (5–6) and MTDM bit rates for HNLF (7–12) and SMF (13–18).
//!
//! The presets fix the axes and the curve families. Fixed values not given
//! by the model's parameter ranges are documented defaults.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use super::params::{ParamValue, Target};
use super::{SeriesAxis, SweepSpec, SweptAxis};
use crate::error::{Error, Result};
use crate::fiber::FiberKind;

/// Pump wavelength used by the wavelength-driven presets, µm.
pub const PRESET_PUMP_UM: f64 = 1.55;
/// λ₀ sits this far below the pump in the bit-rate presets, nm.
pub const HNLF_PUMP_DETUNING_NM: f64 = 0.1;
pub const SMF_PUMP_DETUNING_NM: f64 = 0.005;
pub const PRESET_FM_GHZ: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FigureId(u8);

impl FigureId {
    pub const FIRST: u8 = 2;
    pub const LAST: u8 = 18;

    pub fn new(n: u8) -> Result<Self> {
        if (Self::FIRST..=Self::LAST).contains(&n) {
            Ok(FigureId(n))
        } else {
            Err(Error::config(format!(
                "unknown preset 'fig{n}' (expected fig{}..fig{})",
                Self::FIRST,
                Self::LAST
            )))
        }
    }

    pub fn all() -> impl Iterator<Item = FigureId> {
        (Self::FIRST..=Self::LAST).map(FigureId)
    }

    pub fn number(self) -> u8 {
        self.0
    }

    pub fn describe(self) -> &'static str {
        match self.0 {
            2 => "BW per user vs data rate, curves per laser switching time",
            3 | 4 => "network delay vs utilization, curves per service class",
            5 => "parametric gain vs pump power, SMF and HNLF",
            6 => "parametric gain vs pump power, curves per signal wavelength (HNLF)",
            7 | 8 => "MTDM bit rate per channel vs links, HNLF",
            9 | 10 => "MTDM bit rate per link vs links, HNLF",
            11 | 12 => "MTDM bit rate per core vs links, HNLF",
            13 | 14 => "MTDM bit rate per channel vs links, SMF",
            15 | 16 => "MTDM bit rate per link vs links, SMF",
            _ => "MTDM bit rate per core vs links, SMF",
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "fig{}", self.0)
    }
}

impl FromStr for FigureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let digits = s.trim().strip_prefix("fig").unwrap_or(s.trim());
        let n: u8 = digits
            .parse()
            .map_err(|_| Error::config(format!("unknown preset '{s}'")))?;
        FigureId::new(n)
    }
}

fn fixed(entries: &[(&str, ParamValue)]) -> BTreeMap<String, ParamValue> {
    entries
        .iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect()
}

fn nums(values: &[f64]) -> Vec<ParamValue> {
    values.iter().copied().map(ParamValue::Number).collect()
}

fn bit_rate_preset(target: Target, fiber: FiberKind, p0: f64) -> SweepSpec {
    let (detuning, lengths) = match fiber {
        FiberKind::Hnlf => (HNLF_PUMP_DETUNING_NM, [0.1, 0.25, 0.5]),
        FiberKind::Smf => (SMF_PUMP_DETUNING_NM, [1.0, 2.0, 5.0]),
    };
    SweepSpec {
        target,
        swept: SweptAxis {
            param: "n_links".into(),
            min: 1.0,
            max: 24.0,
            steps: 24,
        },
        series: Some(SeriesAxis {
            param: "length_km".into(),
            values: nums(&lengths),
        }),
        fixed: fixed(&[
            ("fiber", fiber.label().into()),
            ("p0_w", p0.into()),
            ("fm_ghz", PRESET_FM_GHZ.into()),
            ("lambda_p_um", PRESET_PUMP_UM.into()),
            ("pump_detuning_nm", detuning.into()),
            ("n_channels", 16.0.into()),
        ]),
    }
}

/// The preconfigured sweep for one figure.
pub fn figure_preset(id: FigureId) -> SweepSpec {
    let service_classes = nums(&[5.0, 25.0, 50.0]);
    match id.0 {
        2 => SweepSpec {
            target: Target::BandwidthPerUser,
            swept: SweptAxis {
                param: "data_rate_gbps".into(),
                min: 1.0,
                max: 10.0,
                steps: 10,
            },
            series: Some(SeriesAxis {
                param: "t_laser_us".into(),
                values: service_classes,
            }),
            fixed: fixed(&[
                ("k_lasers", 16.0.into()),
                ("n_in", 16.0.into()),
                ("m_out", 16.0.into()),
                ("slot_us", 100.0.into()),
            ]),
        },
        3 | 4 => SweepSpec {
            target: Target::NetworkDelay,
            swept: SweptAxis {
                param: "rho".into(),
                min: 0.1,
                max: 1.0,
                steps: 10,
            },
            series: Some(SeriesAxis {
                param: "t_laser_us".into(),
                values: service_classes,
            }),
            fixed: fixed(&[
                ("w_users", 256.0.into()),
                ("t_tx_us", if id.0 == 3 { 100.0 } else { 250.0 }.into()),
            ]),
        },
        5 => SweepSpec {
            target: Target::SignalGain,
            swept: SweptAxis {
                param: "pump_power_w".into(),
                min: 0.5,
                max: 1.4,
                steps: 10,
            },
            series: Some(SeriesAxis {
                param: "fiber".into(),
                values: vec!["SMF".into(), "HNLF".into()],
            }),
            fixed: fixed(&[("length_km", 0.5.into())]),
        },
        6 => SweepSpec {
            target: Target::SignalGain,
            swept: SweptAxis {
                param: "pump_power_w".into(),
                min: 0.5,
                max: 1.4,
                steps: 10,
            },
            series: Some(SeriesAxis {
                param: "lambda_s_um".into(),
                values: nums(&[1.555, 1.56, 1.565]),
            }),
            fixed: fixed(&[
                ("fiber", "HNLF".into()),
                ("length_km", 0.5.into()),
                ("lambda_p_um", PRESET_PUMP_UM.into()),
                ("lambda0_um", 1.548.into()),
            ]),
        },
        n => {
            let fiber = if n <= 12 {
                FiberKind::Hnlf
            } else {
                FiberKind::Smf
            };
            let p0 = if n % 2 == 1 { 1.0 } else { 1.4 };
            let target = match (n - 7) % 6 {
                0 | 1 => Target::MtdmBitRateChannel,
                2 | 3 => Target::MtdmBitRateLink,
                _ => Target::MtdmBitRateCore,
            };
            bit_rate_preset(target, fiber, p0)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sweep::run_sweep;

    #[test]
    fn parse_ids() {
        assert_eq!("fig7".parse::<FigureId>().unwrap().number(), 7);
        assert_eq!("18".parse::<FigureId>().unwrap().number(), 18);
        assert!(matches!("fig99".parse::<FigureId>(), Err(Error::Config(_))));
        assert!("fig1".parse::<FigureId>().is_err());
        assert!("figx".parse::<FigureId>().is_err());
        assert_eq!(FigureId::all().count(), 17);
    }

    #[test]
    fn fig7_axes() {
        let s = figure_preset(FigureId::new(7).unwrap());
        assert_eq!(s.target, Target::MtdmBitRateChannel);
        assert_eq!(
            (s.swept.param.as_str(), s.swept.min, s.swept.max),
            ("n_links", 1.0, 24.0)
        );
    }

    #[test]
    fn fig5_axes_and_rows() {
        let s = figure_preset(FigureId::new(5).unwrap());
        assert_eq!(
            (s.swept.param.as_str(), s.swept.min, s.swept.max),
            ("pump_power_w", 0.5, 1.4)
        );
        let cs = run_sweep(&s).unwrap();
        assert_eq!(cs.rows.len(), 20);
        assert_eq!(cs.metadata.fibers, vec!["SMF", "HNLF"]);
        for curve in cs.curves() {
            let g: Vec<f64> = curve
                .iter()
                .map(|r| r[cs.value_column].as_number().unwrap())
                .collect();
            assert!(g.windows(2).all(|w| w[1] > w[0]));
        }
    }

    #[test]
    fn fig5_matches_gain_model_directly() {
        let cs = run_sweep(&figure_preset(FigureId::new(5).unwrap())).unwrap();
        for row in &cs.rows {
            let p = row[0].as_number().unwrap();
            let kind: FiberKind = match &row[1] {
                ParamValue::Label(s) => s.parse().unwrap(),
                _ => unreachable!(),
            };
            let gamma = crate::fiber::table1_profile(kind).gamma_si();
            let g = crate::gain::signal_gain(-2.0 * gamma * p, gamma, p, 500.0).unwrap();
            assert_eq!(row[cs.value_column].as_number().unwrap(), g.gain_db);
        }
    }

    #[test]
    fn every_preset_runs() {
        for id in FigureId::all() {
            let s = figure_preset(id);
            s.validate().unwrap();
            let cs = run_sweep(&s).unwrap_or_else(|e| panic!("{id}: {e}"));
            let series = s.series.as_ref().map_or(1, |x| x.values.len());
            assert_eq!(cs.rows.len(), s.swept.steps * series);
        }
    }
}
