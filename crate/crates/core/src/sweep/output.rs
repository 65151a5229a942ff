//! CSV and JSON serialization of sweep results.
//!
//! CSV: header of column names with units, LF line endings, numbers in
//! scientific notation with 12 significant digits, quoting only where needed.

use std::io::Write;

use serde::Serialize;

use super::{CurveSet, ParamValue};
use crate::error::Result;

/// Formats with 12 significant digits, independent of locale.
pub fn format_number(x: f64) -> String {
    if x == 0.0 {
        // avoid "-0"
        return "0.00000000000e0".to_string();
    }
    format!("{x:.11e}")
}

pub fn write_csv<W: Write>(curves: &CurveSet, out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .quote_style(csv::QuoteStyle::Necessary)
        .from_writer(out);
    w.write_record(&curves.columns)?;
    for row in &curves.rows {
        w.write_record(row.iter().map(|v| match v {
            ParamValue::Number(x) => format_number(*x),
            ParamValue::Label(s) => s.clone(),
        }))?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct Sidecar<'a, E: Serialize> {
    #[serde(flatten)]
    metadata: &'a super::CurveMetadata,
    columns: &'a [String],
    rows: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    config: Option<&'a E>,
}

impl CurveSet {
    /// Pretty JSON sidecar: spec echo, tool version, preset id, columns,
    /// row count and, optionally, the effective tool configuration.
    pub fn metadata_json<E: Serialize>(&self, config: Option<&E>) -> Result<String> {
        let side = Sidecar {
            metadata: &self.metadata,
            columns: &self.columns,
            rows: self.rows.len(),
            config,
        };
        let mut s = serde_json::to_string_pretty(&side)?;
        s.push('\n');
        Ok(s)
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        write_csv(self, &mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sweep::{figure_preset, run_sweep, FigureId};

    #[test]
    fn number_format() {
        assert_eq!(format_number(0.125), "1.25000000000e-1");
        assert_eq!(format_number(-0.0), "0.00000000000e0");
        assert_eq!(format_number(23_361_285.173_608), "2.33612851736e7");
    }

    #[test]
    fn csv_layout() {
        let cs = run_sweep(&figure_preset(FigureId::new(5).unwrap())).unwrap();
        let text = cs.to_csv_string().unwrap();
        assert!(!text.contains('\r'));
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "pump_power_w [W],fiber [-],delta_beta [1/m],g_squared [1/m^2],gain [dB]"
        );
        assert_eq!(text.lines().count(), 21);
        assert!(text
            .lines()
            .nth(1)
            .unwrap()
            .starts_with("5.00000000000e-1,SMF,"));
        assert!(text.ends_with('\n'));
    }

    #[test]
    fn header_with_comma_is_quoted() {
        let mut cs = run_sweep(&figure_preset(FigureId::new(2).unwrap())).unwrap();
        cs.columns[0] = "a,b".into();
        assert!(cs.to_csv_string().unwrap().starts_with("\"a,b\","));
    }

    #[test]
    fn sidecar_contents() {
        let mut cs = run_sweep(&figure_preset(FigureId::new(7).unwrap())).unwrap();
        cs.metadata.preset = Some("fig7".into());
        let v: serde_json::Value = serde_json::from_str(
            &cs.metadata_json(Some(&serde_json::json!({"k": 1})))
                .unwrap(),
        )
        .unwrap();
        assert_eq!(v["preset"], "fig7");
        assert_eq!(v["target"], "mtdm_bit_rate_channel");
        assert_eq!(v["rows"], 72);
        assert_eq!(v["config"]["k"], 1);
        assert_eq!(v["spec"]["swept"]["param"], "n_links");
        assert!(v["tool_version"].is_string());
    }
}
