//! Parameter sweeps over the closed-form models, and the figure presets.
//!
//! A [`SweepSpec`] names a target, one swept parameter on a uniform grid, an
//! optional series parameter (one curve per value) and fixed values for the
//! rest. [`run_sweep`] evaluates the grid into a [`CurveSet`] whose row order
//! depends only on the sweep spec: series values in declaration order, swept values
//! ascending.

mod output;
mod params;
mod presets;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use output::{format_number, write_csv};
pub use params::{ParamValue, Target};
pub use presets::{figure_preset, FigureId};

use params::{check_value, column_name, lookup, Point};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweptAxis {
    pub param: String,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl SweptAxis {
    pub fn values(&self) -> Vec<f64> {
        let n = self.steps;
        (0..n)
            .map(|i| {
                if i + 1 == n {
                    self.max
                } else {
                    self.min + (self.max - self.min) * i as f64 / (n - 1) as f64
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesAxis {
    pub param: String,
    pub values: Vec<ParamValue>,
}

/// A parameter-sweep request.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub target: Target,
    pub swept: SweptAxis,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub series: Option<SeriesAxis>,
    #[serde(default)]
    pub fixed: BTreeMap<String, ParamValue>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        let sw = &self.swept;
        if sw.steps < 2 {
            return Err(Error::config(format!(
                "swept '{}' needs steps >= 2",
                sw.param
            )));
        }
        if !(sw.min < sw.max) || !sw.min.is_finite() || !sw.max.is_finite() {
            return Err(Error::config(format!(
                "swept '{}' needs min < max (got {} .. {})",
                sw.param, sw.min, sw.max
            )));
        }
        for v in sw.values() {
            check_value(&sw.param, &ParamValue::Number(v))?;
        }
        let mut covered: BTreeSet<&str> = BTreeSet::new();
        covered.insert(&sw.param);
        if let Some(series) = &self.series {
            if series.param == sw.param {
                return Err(Error::config(format!(
                    "'{}' cannot be both swept and series",
                    sw.param
                )));
            }
            if series.values.is_empty() {
                return Err(Error::config("series needs at least one value"));
            }
            for v in &series.values {
                check_value(&series.param, v)?;
            }
            covered.insert(&series.param);
        }
        for (name, value) in &self.fixed {
            if covered.contains(name.as_str()) {
                return Err(Error::config(format!(
                    "'{name}' is both fixed and swept/series"
                )));
            }
            check_value(name, value)?;
            covered.insert(name);
        }
        for req in self.target.required() {
            if !covered.contains(req) {
                return Err(Error::config(format!(
                    "target {} needs parameter '{req}'",
                    self.target
                )));
            }
        }
        Ok(())
    }

    fn series_values(&self) -> Vec<Option<&ParamValue>> {
        match &self.series {
            Some(s) => s.values.iter().map(Some).collect(),
            None => vec![None],
        }
    }

    /// Fiber presets referenced anywhere in the sweep spec.
    pub fn fibers(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        let mut push = |v: &ParamValue| {
            if let ParamValue::Label(s) = v {
                let s = s.to_ascii_uppercase();
                if !out.contains(&s) {
                    out.push(s);
                }
            }
        };
        if let Some(v) = self.fixed.get("fiber") {
            push(v);
        }
        if let Some(s) = self.series.as_ref().filter(|s| s.param == "fiber") {
            s.values.iter().for_each(&mut push);
        }
        out
    }
}

/// Descriptive metadata carried alongside the table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveMetadata {
    pub target: Target,
    pub spec: SweepSpec,
    pub tool_version: String,
    pub fibers: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
}

/// The labeled result table of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveSet {
    /// Column names with units, e.g. `length_km [km]`.
    pub columns: Vec<String>,
    pub rows: Vec<Vec<ParamValue>>,
    /// Index of the headline output column.
    pub value_column: usize,
    /// Index of the series column, when the sweep spec has one.
    pub series_column: Option<usize>,
    pub metadata: CurveMetadata,
}

impl CurveSet {
    /// Numeric values of one column.
    pub fn column(&self, index: usize) -> Vec<f64> {
        self.rows
            .iter()
            .map(|r| r[index].as_number().unwrap_or(f64::NAN))
            .collect()
    }

    /// Rows grouped by series value, in order.
    pub fn curves(&self) -> Vec<&[Vec<ParamValue>]> {
        let per = self.metadata.spec.swept.steps;
        self.rows.chunks(per).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Serial,
    /// Uses the rayon pool when the `parallel` feature is on; serial otherwise.
    #[default]
    Parallel,
}

/// Evaluates `spec` on its full grid.
pub fn run_sweep(spec: &SweepSpec) -> Result<CurveSet> {
    run_sweep_with(spec, Execution::default())
}

pub fn run_sweep_with(spec: &SweepSpec, execution: Execution) -> Result<CurveSet> {
    spec.validate()?;
    let swept = spec.swept.values();
    let series = spec.series_values();
    let grid: Vec<(Option<&ParamValue>, f64)> = series
        .iter()
        .flat_map(|s| swept.iter().map(move |&x| (*s, x)))
        .collect();

    let eval = |&(s, x): &(Option<&ParamValue>, f64)| -> Result<Vec<ParamValue>> {
        let xv = ParamValue::Number(x);
        let mut point: BTreeMap<&str, &ParamValue> =
            spec.fixed.iter().map(|(k, v)| (k.as_str(), v)).collect();
        point.insert(&spec.swept.param, &xv);
        if let (Some(axis), Some(v)) = (&spec.series, s) {
            point.insert(&axis.param, v);
        }
        let outputs = Point(point).evaluate(spec.target).map_err(|e| {
            let at = match (&spec.series, s) {
                (Some(axis), Some(v)) => {
                    format!("{} = {x}, {} = {v}", spec.swept.param, axis.param)
                }
                _ => format!("{} = {x}", spec.swept.param),
            };
            annotate(e, &at)
        })?;
        if let Some(bad) = outputs.iter().find(|v| !v.is_finite()) {
            return Err(Error::Numerical(format!(
                "non-finite output {bad} at {} = {x}",
                spec.swept.param
            )));
        }
        let mut row = Vec::with_capacity(outputs.len() + 2);
        row.push(xv);
        if let Some(v) = s {
            row.push(v.clone());
        }
        row.extend(outputs.into_iter().map(ParamValue::Number));
        Ok(row)
    };

    // Collect every point before inspecting errors so the reported failure is
    // the first one in grid order, whatever the evaluation order was.
    let results: Vec<Result<Vec<ParamValue>>> = match execution {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            grid.par_iter().map(eval).collect()
        }
        _ => grid.iter().map(eval).collect(),
    };
    let rows = results.into_iter().collect::<Result<Vec<_>>>()?;

    let mut columns = Vec::new();
    let unit = |p: &str| lookup(p).map(|(u, _)| u).unwrap_or("-");
    columns.push(column_name(&spec.swept.param, unit(&spec.swept.param)));
    let series_column = spec.series.as_ref().map(|s| {
        columns.push(column_name(&s.param, unit(&s.param)));
        1
    });
    for (name, u) in spec.target.outputs() {
        columns.push(column_name(name, u));
    }
    Ok(CurveSet {
        value_column: columns.len() - 1,
        columns,
        rows,
        series_column,
        metadata: CurveMetadata {
            target: spec.target,
            spec: spec.clone(),
            tool_version: TOOL_VERSION.to_string(),
            fibers: spec.fibers(),
            preset: None,
        },
    })
}

fn annotate(e: Error, at: &str) -> Error {
    match e {
        Error::Domain(m) => Error::Domain(format!("{m} (at {at})")),
        Error::Config(m) => Error::Config(format!("{m} (at {at})")),
        Error::Range(m) => Error::Range(format!("{m} (at {at})")),
        Error::Numerical(m) => Error::Numerical(format!("{m} (at {at})")),
        other => other,
    }
}
