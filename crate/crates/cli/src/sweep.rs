//! One-parameter sweeps and their CSV representation.

use std::collections::BTreeSet;
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use rayon::prelude::*;
use ssop_core::{
    estimate_ssop_mean, pattern_area_approx, pattern_area_exact, ssop_mean, ssop_upper,
    ssop_upper_approx, ArrayConfig, McConfig, McEstimate, QuadratureSpec, RicianK, SystemParams,
};

use crate::error::{CliError, Result};
use crate::format::{fmt_float, fmt_opt, parse_float};

pub const CSV_HEADER: [&str; 12] = [
    "sweep_var",
    "value",
    "a0",
    "p_mean",
    "p_upper",
    "eta",
    "mc_p_hat",
    "mc_ci_low",
    "mc_ci_high",
    "seed",
    "trace",
    "error",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SweepVar {
    /// Direction of emission, degrees.
    ThetaB,
    NElements,
    RicianK,
    Pathloss,
}

impl SweepVar {
    pub const ALL: [SweepVar; 4] = [
        SweepVar::ThetaB,
        SweepVar::NElements,
        SweepVar::RicianK,
        SweepVar::Pathloss,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SweepVar::ThetaB => "theta_b",
            SweepVar::NElements => "n_elements",
            SweepVar::RicianK => "rician_k",
            SweepVar::Pathloss => "pathloss",
        }
    }
}

impl fmt::Display for SweepVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepVar {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        SweepVar::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| {
                CliError::usage("vary", format!("unknown sweep variable {s:?}; expected theta_b, n_elements, rician_k or pathloss"))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Output {
    A0,
    PMean,
    PUpper,
    Eta,
    Mc,
}

impl Output {
    pub const ALL: [Output; 5] = [Output::A0, Output::PMean, Output::PUpper, Output::Eta, Output::Mc];

    pub fn name(self) -> &'static str {
        match self {
            Output::A0 => "a0",
            Output::PMean => "p_mean",
            Output::PUpper => "p_upper",
            Output::Eta => "eta",
            Output::Mc => "mc_estimate",
        }
    }
}

impl FromStr for Output {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        if s == "mc" {
            return Ok(Output::Mc);
        }
        Output::ALL
            .into_iter()
            .find(|o| o.name() == s)
            .ok_or_else(|| CliError::usage("outputs", format!("unknown output {s:?}")))
    }
}

/// A sweep over one parameter with everything else held fixed.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    /// Written to the `trace` column so several sweeps can share one table.
    pub label: String,
    pub vary: SweepVar,
    /// Degrees for `theta_b`; `f64::INFINITY` stands for K = ∞.
    pub values: Vec<f64>,
    pub array: ArrayConfig,
    pub params: SystemParams,
    pub quadrature: QuadratureSpec,
    pub mc: Option<McConfig>,
    pub outputs: BTreeSet<Output>,
    /// Replace `A₀` by its first `n` series terms in `a0` and `p_upper`.
    pub approx_terms: Option<usize>,
}

impl SweepSpec {
    pub fn new(label: impl Into<String>, vary: SweepVar, values: Vec<f64>) -> Self {
        SweepSpec {
            label: label.into(),
            vary,
            values,
            array: ArrayConfig::default(),
            params: SystemParams::default(),
            quadrature: QuadratureSpec::default(),
            mc: None,
            outputs: [Output::A0, Output::PMean, Output::PUpper, Output::Eta].into(),
            approx_terms: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(CliError::usage("values", "must not be empty"));
        }
        let rising = self.values.windows(2).all(|w| w[0] < w[1]);
        let falling = self.values.windows(2).all(|w| w[0] > w[1]);
        if !(rising || falling) {
            return Err(CliError::usage("values", "must be strictly increasing or strictly decreasing"));
        }
        if self.outputs.is_empty() {
            return Err(CliError::usage("outputs", "must not be empty"));
        }
        if self.outputs.contains(&Output::Mc) && self.mc.is_none() {
            return Err(CliError::usage("mc", "mc_estimate output requested without an [mc] section"));
        }
        if let Some(mc) = &self.mc {
            mc.validate().map_err(|e| CliError::usage("mc", e.to_string()))?;
        }
        if self.approx_terms == Some(0) {
            return Err(CliError::usage("approx_terms", "must be >= 1"));
        }
        self.quadrature
            .validate()
            .map_err(|e| CliError::usage("quadrature", e.to_string()))?;
        for &v in &self.values {
            let (cfg, params) = self.point(v)?;
            params
                .validate()
                .map_err(|e| CliError::usage(self.vary.name(), e.to_string()))?;
            if self.approx_terms.is_some() {
                ssop_upper_approx(&cfg, &params, 1)
                    .map_err(|e| CliError::usage("approx_terms", e.to_string()))?;
            }
        }
        Ok(())
    }

    /// Array and system parameters at one sweep value.
    pub fn point(&self, value: f64) -> Result<(ArrayConfig, SystemParams)> {
        let bad = |detail: String| CliError::usage(self.vary.name(), detail);
        let mut cfg = self.array;
        let mut params = self.params;
        match self.vary {
            SweepVar::ThetaB => {
                cfg = cfg.with_doe_angle(value.to_radians()).map_err(|e| bad(e.to_string()))?;
            }
            SweepVar::NElements => {
                if value < 1.0 || value.fract() != 0.0 || value > u32::MAX as f64 {
                    return Err(bad(format!("{value} is not a positive integer")));
                }
                cfg = cfg.with_n_elements(value as usize).map_err(|e| bad(e.to_string()))?;
            }
            SweepVar::RicianK => {
                params.rician_k = if value == f64::INFINITY {
                    RicianK::Infinite
                } else {
                    RicianK::new(value).map_err(|e| bad(e.to_string()))?
                };
            }
            SweepVar::Pathloss => params.pathloss_exp = value,
        }
        Ok((cfg, params))
    }
}

/// One table row. Outputs that were not requested are `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub sweep_var: String,
    pub value: f64,
    pub a0: Option<f64>,
    pub p_mean: Option<f64>,
    pub p_upper: Option<f64>,
    pub eta: Option<f64>,
    pub mc: Option<McEstimate>,
    pub seed: Option<u64>,
    pub trace: String,
    pub error: Option<String>,
}

impl SweepRow {
    fn empty(spec: &SweepSpec, value: f64) -> Self {
        SweepRow {
            sweep_var: spec.vary.name().to_string(),
            value,
            a0: None,
            p_mean: None,
            p_upper: None,
            eta: None,
            mc: None,
            seed: None,
            trace: spec.label.clone(),
            error: None,
        }
    }
}

fn evaluate_row(spec: &SweepSpec, value: f64) -> SweepRow {
    let mut row = SweepRow::empty(spec, value);
    if let Err(e) = fill_row(spec, value, &mut row) {
        row.error = Some(e.to_string());
    }
    row
}

fn fill_row(spec: &SweepSpec, value: f64, row: &mut SweepRow) -> Result<()> {
    let (cfg, params) = spec.point(value)?;
    let want = |o| spec.outputs.contains(&o);
    if want(Output::A0) {
        row.a0 = Some(match spec.approx_terms {
            Some(n) => pattern_area_approx(&cfg, n)?,
            None => pattern_area_exact(&cfg),
        });
    }
    if want(Output::PUpper) || want(Output::Eta) {
        row.p_upper = Some(match spec.approx_terms {
            Some(n) => ssop_upper_approx(&cfg, &params, n)?,
            None => ssop_upper(&cfg, &params)?,
        });
    }
    if want(Output::PMean) || want(Output::Eta) {
        row.p_mean = Some(ssop_mean(&cfg, &params, &spec.quadrature)?);
    }
    if want(Output::Eta) {
        let (up, mean) = (row.p_upper.unwrap_or(0.0), row.p_mean.unwrap_or(0.0));
        row.eta = (mean > 0.0).then(|| up / mean);
    }
    if !want(Output::PUpper) {
        row.p_upper = None;
    }
    if !want(Output::PMean) {
        row.p_mean = None;
    }
    if let (true, Some(mc)) = (want(Output::Mc), &spec.mc) {
        row.mc = Some(estimate_ssop_mean(&cfg, &params, mc)?);
        row.seed = Some(mc.root_seed);
    }
    Ok(())
}

/// Evaluates every sweep value in parallel; rows come back in input order.
/// Numerical failures are reported in the row's `error` field.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    Ok(spec
        .values
        .par_iter()
        .map(|&v| evaluate_row(spec, v))
        .collect())
}

pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        let mc = r.mc.as_ref();
        w.write_record([
            r.sweep_var.clone(),
            fmt_float(r.value),
            fmt_opt(r.a0),
            fmt_opt(r.p_mean),
            fmt_opt(r.p_upper),
            fmt_opt(r.eta),
            fmt_opt(mc.map(|m| m.p_hat)),
            fmt_opt(mc.map(|m| m.ci_low)),
            fmt_opt(mc.map(|m| m.ci_high)),
            r.seed.map(|s| s.to_string()).unwrap_or_default(),
            r.trace.clone(),
            r.error.clone().unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn field_f64(record: &csv::StringRecord, i: usize, line: u64) -> Result<Option<f64>> {
    let s = record.get(i).unwrap_or("");
    if s.is_empty() {
        return Ok(None);
    }
    parse_float(s)
        .map(Some)
        .ok_or_else(|| CliError::usage(CSV_HEADER[i], format!("line {line}: not a number: {s:?}")))
}

/// Reads a table written by [`write_csv`].
pub fn read_csv<R: Read>(input: R) -> Result<Vec<SweepRow>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    let header = rdr.headers()?.clone();
    if header.iter().ne(CSV_HEADER) {
        return Err(CliError::usage("header", format!("unexpected columns {:?}", header.iter().collect::<Vec<_>>())));
    }
    let mut rows = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let record = record?;
        let line = i as u64 + 2;
        let get = |i: usize| record.get(i).unwrap_or("").to_string();
        let value = field_f64(&record, 1, line)?
            .ok_or_else(|| CliError::usage("value", format!("line {line}: missing")))?;
        let mc = match (
            field_f64(&record, 6, line)?,
            field_f64(&record, 7, line)?,
            field_f64(&record, 8, line)?,
        ) {
            (Some(p_hat), Some(ci_low), Some(ci_high)) => Some(McEstimate {
                p_hat,
                ci_low,
                ci_high,
                n_samples: 0,
            }),
            _ => None,
        };
        let seed = match get(9).as_str() {
            "" => None,
            s => Some(s.parse().map_err(|_| CliError::usage("seed", format!("line {line}: {s:?}")))?),
        };
        let error = Some(get(11)).filter(|s| !s.is_empty());
        rows.push(SweepRow {
            sweep_var: get(0),
            value,
            a0: field_f64(&record, 2, line)?,
            p_mean: field_f64(&record, 3, line)?,
            p_upper: field_f64(&record, 4, line)?,
            eta: field_f64(&record, 5, line)?,
            mc,
            seed,
            trace: get(10),
            error,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> QuadratureSpec {
        QuadratureSpec::new(256, 16, 1e-9).unwrap()
    }

    #[test]
    fn rows_follow_input_order() {
        let mut spec = SweepSpec::new("t", SweepVar::ThetaB, vec![90.0, 60.0, 30.0, 0.0]);
        spec.quadrature = quick();
        let rows = run_sweep(&spec).unwrap();
        let values: Vec<f64> = rows.iter().map(|r| r.value).collect();
        assert_eq!(values, spec.values);
        assert!(rows[0].a0.unwrap() > rows[3].a0.unwrap());
    }

    #[test]
    fn rejects_unordered_values() {
        let spec = SweepSpec::new("t", SweepVar::ThetaB, vec![0.0, 30.0, 10.0]);
        assert!(matches!(spec.validate(), Err(CliError::Usage { field, .. }) if field == "values"));
        let spec = SweepSpec::new("t", SweepVar::ThetaB, vec![]);
        assert!(spec.validate().is_err());
    }

    #[test]
    fn rejects_bad_values_by_field() {
        let spec = SweepSpec::new("t", SweepVar::NElements, vec![1.0, 2.5]);
        assert!(matches!(spec.validate(), Err(CliError::Usage { field, .. }) if field == "n_elements"));
        let spec = SweepSpec::new("t", SweepVar::RicianK, vec![-1.0, 0.0]);
        assert!(matches!(spec.validate(), Err(CliError::Usage { field, .. }) if field == "rician_k"));
        let mut spec = SweepSpec::new("t", SweepVar::ThetaB, vec![0.0]);
        spec.outputs.insert(Output::Mc);
        assert!(matches!(spec.validate(), Err(CliError::Usage { field, .. }) if field == "mc"));
    }

    #[test]
    fn unrequested_outputs_stay_empty() {
        let mut spec = SweepSpec::new("t", SweepVar::Pathloss, vec![2.0, 3.0]);
        spec.outputs = [Output::Eta].into();
        spec.quadrature = quick();
        let rows = run_sweep(&spec).unwrap();
        assert!(rows.iter().all(|r| r.eta.is_some() && r.p_mean.is_none() && r.p_upper.is_none() && r.a0.is_none()));
    }

    #[test]
    fn infinite_k_round_trips() {
        let mut spec = SweepSpec::new("k", SweepVar::RicianK, vec![0.0, 1.0, f64::INFINITY]);
        spec.quadrature = quick();
        let rows = run_sweep(&spec).unwrap();
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.lines().nth(3).unwrap().starts_with("rician_k,inf,"));
        let again = read_csv(buf.as_slice()).unwrap();
        let mut buf2 = Vec::new();
        write_csv(&again, &mut buf2).unwrap();
        assert_eq!(buf, buf2);
    }

    #[test]
    fn error_column_round_trips() {
        let spec = SweepSpec::new("x", SweepVar::Pathloss, vec![2.0]);
        let mut row = SweepRow::empty(&spec, 2.0);
        row.error = Some("numerical failure in x: y, \"z\"".into());
        let mut buf = Vec::new();
        write_csv(&[row.clone()], &mut buf).unwrap();
        assert_eq!(read_csv(buf.as_slice()).unwrap()[0].error, row.error);
    }

    #[test]
    fn parses_names() {
        for v in SweepVar::ALL {
            assert_eq!(v.name().parse::<SweepVar>().unwrap(), v);
        }
        assert_eq!("mc".parse::<Output>().unwrap(), Output::Mc);
        assert!("theta".parse::<SweepVar>().is_err());
    }
}
