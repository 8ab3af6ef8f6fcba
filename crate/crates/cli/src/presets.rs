//! Named sweeps that regenerate the published figure data.

use ssop_core::{ArrayConfig, McConfig, RicianK, SystemParams};

use crate::config::range_values;
use crate::sweep::{Output, SweepSpec, SweepVar};
use crate::tables::TermsSpec;

/// What a preset produces.
#[derive(Debug, Clone)]
pub enum Preset {
    /// Rows in the sweep CSV schema, one sweep per trace.
    Sweep(Vec<SweepSpec>),
    /// Per-term table of the pattern-area series.
    Terms(TermsSpec),
}

pub const PRESET_NAMES: [&str; 11] = [
    "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9", "fig10", "fig11", "k-sweep", "eta-doe",
];

/// Seed used when a preset with a Monte-Carlo column is run without `--seed`.
pub const DEFAULT_SEED: u64 = 1;

const K_SET: [(f64, &str); 4] = [
    (0.0, "K=0"),
    (1.0, "K=1"),
    (10.0, "K=10"),
    (f64::INFINITY, "K=inf"),
];

fn k(value: f64) -> RicianK {
    if value.is_infinite() {
        RicianK::Infinite
    } else {
        RicianK::Finite(value)
    }
}

fn degrees(start: f64, stop: f64, step: f64) -> Vec<f64> {
    range_values(start, stop, step).expect("static range")
}

fn counts(lo: usize, hi: usize) -> Vec<f64> {
    (lo..=hi).map(|n| n as f64).collect()
}

fn outputs(list: &[Output]) -> std::collections::BTreeSet<Output> {
    list.iter().copied().collect()
}

fn sweep(
    label: String,
    vary: SweepVar,
    values: Vec<f64>,
    array: ArrayConfig,
    params: SystemParams,
    out: &[Output],
) -> SweepSpec {
    let mut s = SweepSpec::new(label, vary, values);
    s.array = array;
    s.params = params;
    s.outputs = outputs(out);
    s
}

fn doe(deg: f64) -> ArrayConfig {
    ArrayConfig::from_degrees(8, 0.5, deg).expect("static array")
}

fn base(kv: f64, beta: f64) -> SystemParams {
    SystemParams::default().with_k(k(kv)).with_pathloss(beta)
}

/// Looks up a preset by name.
pub fn preset(name: &str) -> Option<Preset> {
    use Output::*;
    let p = match name {
        // J₀(nπ) and the weighted series terms for N = 8 at broadside.
        "fig3" => Preset::Terms(TermsSpec {
            n_elements: 8,
            spacing: 0.5,
            theta_b_deg: vec![0.0],
            max_n: 7,
        }),
        // Exact bound against its 1-, 2- and 3-term truncations.
        "fig4" => {
            let mut specs = vec![sweep(
                "exact".into(),
                SweepVar::ThetaB,
                degrees(0.0, 90.0, 1.0),
                doe(0.0),
                base(f64::INFINITY, 2.0),
                &[A0, PUpper],
            )];
            for n in 1..=3 {
                let mut s = specs[0].clone();
                s.label = format!("approx-{n}");
                s.approx_terms = Some(n);
                specs.push(s);
            }
            Preset::Sweep(specs)
        }
        // q_n sequences for three emission angles.
        "fig5" => Preset::Terms(TermsSpec {
            n_elements: 64,
            spacing: 0.5,
            theta_b_deg: vec![0.0, 30.0, 60.0],
            max_n: 40,
        }),
        // Bound against K at 40 dB for the three reference pattern areas.
        "fig6" => {
            let ks = vec![0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0];
            let mut specs = Vec::new();
            for deg in [0.0, 48.35, 90.0] {
                for beta in [2.0, 3.0, 4.0, 5.0, 6.0] {
                    let params = SystemParams {
                        snr_budget_db: 40.0,
                        ..base(0.0, beta)
                    };
                    specs.push(sweep(
                        format!("theta_b={deg} beta={beta}"),
                        SweepVar::RicianK,
                        ks.clone(),
                        doe(deg),
                        params,
                        &[A0, PUpper],
                    ));
                }
            }
            Preset::Sweep(specs)
        }
        // Bound against N for three emission angles.
        "fig7" => Preset::Sweep(
            [0.0, 30.0, 60.0]
                .into_iter()
                .map(|deg| {
                    sweep(
                        format!("theta_b={deg}"),
                        SweepVar::NElements,
                        counts(1, 64),
                        doe(deg),
                        base(f64::INFINITY, 2.0),
                        &[A0, PUpper],
                    )
                })
                .collect(),
        ),
        // Averaged SSOP against its Monte-Carlo estimate.
        "fig8" => {
            let mut s = sweep(
                "K=10 beta=3".into(),
                SweepVar::ThetaB,
                degrees(0.0, 90.0, 5.0),
                doe(0.0),
                base(10.0, 3.0),
                &[A0, PMean, Mc],
            );
            s.mc = Some(McConfig {
                n_fading_draws: 10_000,
                root_seed: DEFAULT_SEED,
                ..McConfig::default()
            });
            Preset::Sweep(vec![s])
        }
        // Averaged SSOP and bound against θ_B for several K at β = 3.
        "fig9" => Preset::Sweep(
            K_SET
                .iter()
                .map(|&(kv, label)| {
                    sweep(
                        label.into(),
                        SweepVar::ThetaB,
                        degrees(0.0, 90.0, 5.0),
                        doe(0.0),
                        base(kv, 3.0),
                        &[A0, PMean, PUpper, Eta],
                    )
                })
                .collect(),
        ),
        // Averaged SSOP and bound against N for several K at β = 3.
        "fig10" => Preset::Sweep(
            K_SET
                .iter()
                .map(|&(kv, label)| {
                    sweep(
                        label.into(),
                        SweepVar::NElements,
                        counts(1, 32),
                        doe(0.0),
                        base(kv, 3.0),
                        &[A0, PMean, PUpper, Eta],
                    )
                })
                .collect(),
        ),
        // Tightness ratio against N for the two extreme channels.
        "fig11" => Preset::Sweep(extreme_channels(SweepVar::NElements, counts(1, 32))),
        // Averaged SSOP and bound against K for every path-loss exponent.
        "k-sweep" => {
            let ks = vec![0.0, 0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0, f64::INFINITY];
            Preset::Sweep(
                [2.0, 3.0, 4.0, 5.0, 6.0]
                    .into_iter()
                    .map(|beta| {
                        sweep(
                            format!("beta={beta}"),
                            SweepVar::RicianK,
                            ks.clone(),
                            doe(0.0),
                            base(0.0, beta),
                            &[PMean, PUpper, Eta],
                        )
                    })
                    .collect(),
            )
        }
        // Tightness ratio against θ_B for the two extreme channels.
        "eta-doe" => Preset::Sweep(extreme_channels(SweepVar::ThetaB, degrees(0.0, 90.0, 5.0))),
        _ => return None,
    };
    Some(p)
}

fn extreme_channels(vary: SweepVar, values: Vec<f64>) -> Vec<SweepSpec> {
    let mut specs = Vec::new();
    for (kv, klabel) in [(0.0, "K=0"), (f64::INFINITY, "K=inf")] {
        for beta in [2.0, 3.0, 4.0, 5.0, 6.0] {
            specs.push(sweep(
                format!("{klabel} beta={beta}"),
                vary,
                values.clone(),
                doe(0.0),
                base(kv, beta),
                &[Output::PMean, Output::PUpper, Output::Eta],
            ));
        }
    }
    specs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_name_resolves_and_validates() {
        for name in PRESET_NAMES {
            match preset(name).unwrap_or_else(|| panic!("{name}")) {
                Preset::Sweep(specs) => {
                    assert!(!specs.is_empty());
                    for s in specs {
                        s.validate().unwrap_or_else(|e| panic!("{name}/{}: {e}", s.label));
                    }
                }
                Preset::Terms(t) => t.validate().unwrap(),
            }
        }
        assert!(preset("fig12").is_none());
    }

    #[test]
    fn fig6_carries_its_own_snr() {
        let Some(Preset::Sweep(specs)) = preset("fig6") else { panic!() };
        assert!(specs.iter().all(|s| s.params.snr_budget_db == 40.0));
        let Some(Preset::Sweep(specs)) = preset("fig7") else { panic!() };
        assert!(specs.iter().all(|s| s.params.snr_budget_db == 15.0));
    }
}
