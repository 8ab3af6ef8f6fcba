//! Tables outside the sweep schema: pattern-area series terms and exposure
//! region contours.

use std::f64::consts::TAU;
use std::io::Write;

use ssop_core::{bessel_j0, er_radius, pattern_area_term, q_series, ArrayConfig, FadingDraw, SystemParams};

use crate::error::{CliError, Result};
use crate::format::fmt_float;

pub const TERMS_HEADER: [&str; 5] = ["theta_b", "n", "j0", "q_n", "a0_term"];
pub const CONTOUR_HEADER: [&str; 2] = ["theta_deg", "radius"];

/// Series terms `J₀(k Δd n)`, `q_n` and `A₀,ₙ` for `n = 1..=max_n`.
#[derive(Debug, Clone)]
pub struct TermsSpec {
    pub n_elements: usize,
    pub spacing: f64,
    pub theta_b_deg: Vec<f64>,
    pub max_n: usize,
}

impl TermsSpec {
    pub fn validate(&self) -> Result<()> {
        if self.max_n == 0 {
            return Err(CliError::usage("max_n", "must be >= 1"));
        }
        if self.theta_b_deg.is_empty() {
            return Err(CliError::usage("theta_b", "must not be empty"));
        }
        for &deg in &self.theta_b_deg {
            ArrayConfig::from_degrees(self.n_elements, self.spacing, deg)
                .map_err(|e| CliError::usage("array", e.to_string()))?;
        }
        Ok(())
    }
}

fn writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out)
}

/// `A₀,ₙ` is only defined for `n < N`; later rows leave it empty.
pub fn write_terms<W: Write>(spec: &TermsSpec, out: W) -> Result<()> {
    spec.validate()?;
    let mut w = writer(out);
    w.write_record(TERMS_HEADER)?;
    for &deg in &spec.theta_b_deg {
        let cfg = ArrayConfig::from_degrees(spec.n_elements, spec.spacing, deg)?;
        for n in 1..=spec.max_n {
            let j0 = bessel_j0(cfg.k_spacing() * n as f64)?;
            let term = if n < spec.n_elements {
                fmt_float(pattern_area_term(n, &cfg)?)
            } else {
                String::new()
            };
            w.write_record([
                fmt_float(deg),
                n.to_string(),
                fmt_float(j0),
                fmt_float(q_series(n, &cfg)?),
                term,
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Samples `D(θ)` at `points` equally spaced angles.
pub fn write_contour<W: Write>(
    cfg: &ArrayConfig,
    params: &SystemParams,
    draw: FadingDraw,
    points: usize,
    out: W,
) -> Result<()> {
    if points == 0 {
        return Err(CliError::usage("points", "must be >= 1"));
    }
    let mut w = writer(out);
    w.write_record(CONTOUR_HEADER)?;
    for i in 0..points {
        let theta = i as f64 * TAU / points as f64;
        let d = er_radius(theta, cfg, params, draw)?;
        w.write_record([fmt_float(theta.to_degrees()), fmt_float(d)])?;
    }
    w.flush()?;
    Ok(())
}
