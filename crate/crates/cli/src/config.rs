//! TOML run configuration with `section.key=value` command-line overrides.
//!
//! Angles are degrees here and converted to radians when the core types are
//! built. `rician_k` and sweep values accept `inf` for the deterministic
//! channel.

use std::path::Path;

use serde::Deserialize;
use ssop_core::{
    ArrayConfig, FadingDraw, McConfig, QuadratureSpec, RicianK, SystemParams,
};

use crate::error::{CliError, Result};
use crate::sweep::{Output, SweepSpec, SweepVar};

/// A number, or `inf` spelled as a TOML float or a string.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Real {
    Num(f64),
    Text(#[serde(deserialize_with = "de_inf")] f64),
}

fn de_inf<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    let s = String::deserialize(d)?;
    crate::format::parse_float(&s)
        .ok_or_else(|| serde::de::Error::custom(format!("expected a number or \"inf\", got {s:?}")))
}

impl Real {
    pub fn get(self) -> f64 {
        match self {
            Real::Num(x) | Real::Text(x) => x,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RangeSection {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ArraySection {
    pub n_elements: usize,
    pub spacing: f64,
    pub theta_b_deg: f64,
}

impl Default for ArraySection {
    fn default() -> Self {
        ArraySection {
            n_elements: 8,
            spacing: 0.5,
            theta_b_deg: 0.0,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SystemSection {
    pub snr_db: f64,
    pub rate_codeword: f64,
    pub rate_secrecy: f64,
    pub eve_density: f64,
    pub pathloss: f64,
    pub rician_k: Real,
}

impl Default for SystemSection {
    fn default() -> Self {
        let p = SystemParams::default();
        SystemSection {
            snr_db: p.snr_budget_db,
            rate_codeword: p.rate_codeword,
            rate_secrecy: p.rate_secrecy,
            eve_density: p.eve_density,
            pathloss: p.pathloss_exp,
            rician_k: Real::Num(p.rician_k.as_f64()),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureSection {
    pub angular_nodes: usize,
    pub hermite_nodes: usize,
    pub abs_tol: f64,
}

impl Default for QuadratureSection {
    fn default() -> Self {
        let q = QuadratureSpec::default();
        QuadratureSection {
            angular_nodes: q.angular_nodes,
            hermite_nodes: q.hermite_nodes,
            abs_tol: q.abs_tol,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct McSection {
    pub draws: u64,
    pub ppp_trials: u64,
    pub seed: u64,
    pub confidence: f64,
}

impl Default for McSection {
    fn default() -> Self {
        let m = McConfig::default();
        McSection {
            draws: m.n_fading_draws,
            ppp_trials: m.n_ppp_trials_per_draw,
            seed: m.root_seed,
            confidence: m.confidence,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FadingSection {
    pub g_re: f64,
    pub g_im: f64,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub label: Option<String>,
    pub vary: Option<String>,
    pub values: Option<Vec<Real>>,
    pub range: Option<RangeSection>,
    pub outputs: Option<Vec<String>>,
    pub approx_terms: Option<usize>,
    pub array: ArraySection,
    pub system: SystemSection,
    pub quadrature: QuadratureSection,
    pub mc: Option<McSection>,
    pub fading: Option<FadingSection>,
}

/// Parses the TOML text of an override's right-hand side, falling back to a
/// bare string so `vary=theta_b` works without quotes.
fn override_value(raw: &str) -> toml::Value {
    match toml::from_str::<toml::Table>(&format!("v = {raw}")) {
        Ok(mut t) => t.remove("v").unwrap_or_else(|| toml::Value::String(raw.to_string())),
        Err(_) => toml::Value::String(raw.to_string()),
    }
}

/// Applies `a.b.c=value` to a parsed document.
pub fn apply_override(table: &mut toml::Table, assignment: &str) -> Result<()> {
    let (path, raw) = assignment
        .split_once('=')
        .ok_or_else(|| CliError::usage("--set", format!("expected key=value, got {assignment:?}")))?;
    let keys: Vec<&str> = path.trim().split('.').collect();
    if keys.iter().any(|k| k.is_empty()) {
        return Err(CliError::usage("--set", format!("bad key {path:?}")));
    }
    let (last, parents) = keys.split_last().expect("non-empty key path");
    let mut node = table;
    for k in parents {
        let entry = node
            .entry(k.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()));
        node = match entry {
            toml::Value::Table(t) => t,
            _ => return Err(CliError::usage("--set", format!("{k} is not a section"))),
        };
    }
    node.insert(last.to_string(), override_value(raw.trim()));
    Ok(())
}

impl RunConfig {
    pub fn parse(text: &str, overrides: &[String]) -> Result<Self> {
        let mut table: toml::Table =
            toml::from_str(text).map_err(|e| CliError::usage("config", e.to_string()))?;
        for o in overrides {
            apply_override(&mut table, o)?;
        }
        table
            .try_into()
            .map_err(|e: toml::de::Error| CliError::usage("config", e.to_string()))
    }

    pub fn load(path: Option<&Path>, overrides: &[String]) -> Result<Self> {
        let text = match path {
            Some(p) => std::fs::read_to_string(p)
                .map_err(|e| CliError::usage("--config", format!("{}: {e}", p.display())))?,
            None => String::new(),
        };
        Self::parse(&text, overrides)
    }

    pub fn array_config(&self) -> Result<ArrayConfig> {
        let a = &self.array;
        ArrayConfig::from_degrees(a.n_elements, a.spacing, a.theta_b_deg)
            .map_err(|e| CliError::usage("array", e.to_string()))
    }

    pub fn system_params(&self) -> Result<SystemParams> {
        let s = &self.system;
        let k = s.rician_k.get();
        let rician_k = if k == f64::INFINITY {
            RicianK::Infinite
        } else {
            RicianK::new(k).map_err(|e| CliError::usage("system.rician_k", e.to_string()))?
        };
        let p = SystemParams {
            snr_budget_db: s.snr_db,
            rate_codeword: s.rate_codeword,
            rate_secrecy: s.rate_secrecy,
            eve_density: s.eve_density,
            pathloss_exp: s.pathloss,
            rician_k,
        };
        p.validate().map_err(|e| CliError::usage("system", e.to_string()))?;
        Ok(p)
    }

    pub fn quadrature_spec(&self) -> Result<QuadratureSpec> {
        let q = &self.quadrature;
        QuadratureSpec::new(q.angular_nodes, q.hermite_nodes, q.abs_tol)
            .map_err(|e| CliError::usage("quadrature", e.to_string()))
    }

    pub fn mc_config(&self) -> Option<McConfig> {
        self.mc.as_ref().map(|m| McConfig {
            n_fading_draws: m.draws,
            n_ppp_trials_per_draw: m.ppp_trials,
            root_seed: m.seed,
            confidence: m.confidence,
        })
    }

    pub fn fading_draw(&self) -> Option<FadingDraw> {
        self.fading.as_ref().map(|f| FadingDraw::new(f.g_re, f.g_im))
    }

    fn sweep_values(&self) -> Result<Vec<f64>> {
        match (&self.values, &self.range) {
            (Some(v), None) => Ok(v.iter().map(|r| r.get()).collect()),
            (None, Some(r)) => range_values(r.start, r.stop, r.step),
            (Some(_), Some(_)) => Err(CliError::usage("values", "give either values or range, not both")),
            (None, None) => Err(CliError::usage("values", "missing; give values = [...] or a [range] section")),
        }
    }

    pub fn sweep_spec(&self) -> Result<SweepSpec> {
        let vary: SweepVar = self
            .vary
            .as_deref()
            .ok_or_else(|| CliError::usage("vary", "missing"))?
            .parse()?;
        let mut spec = SweepSpec::new(self.label.clone().unwrap_or_else(|| "config".into()), vary, self.sweep_values()?);
        spec.array = self.array_config()?;
        spec.params = self.system_params()?;
        spec.quadrature = self.quadrature_spec()?;
        spec.mc = self.mc_config();
        if let Some(outputs) = &self.outputs {
            spec.outputs = outputs.iter().map(|s| s.parse::<Output>()).collect::<Result<_>>()?;
        } else if spec.mc.is_some() {
            spec.outputs.insert(Output::Mc);
        }
        spec.approx_terms = self.approx_terms;
        spec.validate()?;
        Ok(spec)
    }
}

/// `start, start + step, …` up to and including `stop` (within rounding).
pub fn range_values(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !start.is_finite() || !stop.is_finite() || stop < start {
        return Err(CliError::usage("range", format!("need start <= stop and step > 0, got {start}..{stop} step {step}")));
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    if n > 1_000_000 {
        return Err(CliError::usage("range", "more than a million points"));
    }
    Ok((0..=n).map(|i| start + i as f64 * step).collect())
}
