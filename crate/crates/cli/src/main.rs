use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ssop_cli::config::RunConfig;
use ssop_cli::presets::{preset, Preset, DEFAULT_SEED, PRESET_NAMES};
use ssop_cli::selftest::run_selftest;
use ssop_cli::sweep::{run_sweep, write_csv, SweepRow};
use ssop_cli::tables::{write_contour, write_terms, TermsSpec};
use ssop_cli::{CliError, Result};
use ssop_core::sample_fading;

/// Spatial secrecy outage of exposure-region beamforming: sweeps, contours
/// and self-checks.
#[derive(Debug, Parser)]
#[command(name = "ssop", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a parameter sweep and write a CSV table.
    Sweep(SweepArgs),
    /// Run the built-in oracle and invariant checks.
    Selftest,
    /// Emit the exposure-region contour D(θ) for one fading draw.
    Contour(ContourArgs),
    /// Emit the pattern-area series terms J₀(kΔd n), q_n and A₀,ₙ.
    Terms(TermsArgs),
    /// List the available presets.
    Presets,
}

#[derive(Debug, Args)]
struct Common {
    /// TOML configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override a configuration key, e.g. `--set system.rician_k=inf`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Named figure preset (see `ssop presets`).
    #[arg(long, conflicts_with = "config", required_unless_present = "config")]
    preset: Option<String>,
    #[command(flatten)]
    common: Common,
    /// Root seed for Monte-Carlo columns.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; defaults to the number of cores.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Debug, Args)]
struct ContourArgs {
    #[command(flatten)]
    common: Common,
    /// Number of equally spaced angles.
    #[arg(long, default_value_t = 360)]
    points: usize,
    /// Seed for the fading draw when the config has no [fading] section.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Args)]
struct TermsArgs {
    #[arg(long, default_value_t = 8)]
    n_elements: usize,
    /// Element spacing in wavelengths.
    #[arg(long, default_value_t = 0.5)]
    spacing: f64,
    /// Emission angles in degrees.
    #[arg(long, value_delimiter = ',', default_value = "0")]
    theta_b: Vec<f64>,
    /// Largest series index.
    #[arg(long, default_value_t = 7)]
    max_n: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn output(path: Option<&PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn sweep(args: SweepArgs) -> Result<()> {
    if let Some(n) = args.threads {
        if n == 0 {
            return Err(CliError::usage("--threads", "must be >= 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::usage("--threads", e.to_string()))?;
    }
    let preset = match &args.preset {
        Some(name) => preset(name).ok_or_else(|| {
            CliError::usage("--preset", format!("unknown preset {name:?}; one of {}", PRESET_NAMES.join(", ")))
        })?,
        None => {
            let cfg = RunConfig::load(args.common.config.as_deref(), &args.common.overrides)?;
            Preset::Sweep(vec![cfg.sweep_spec()?])
        }
    };
    let mut out = output(args.common.out.as_ref())?;
    let specs = match preset {
        Preset::Terms(t) => return write_terms(&t, out),
        Preset::Sweep(specs) => specs,
    };
    let mut rows: Vec<SweepRow> = Vec::new();
    for mut spec in specs {
        if let Some(mc) = spec.mc.as_mut() {
            mc.root_seed = args.seed.unwrap_or(if args.preset.is_some() { DEFAULT_SEED } else { mc.root_seed });
        }
        rows.extend(run_sweep(&spec)?);
    }
    write_csv(&rows, &mut out)?;
    out.flush()?;
    let failed = rows.iter().filter(|r| r.error.is_some()).count();
    if failed > 0 {
        return Err(CliError::Core(ssop_core::Error::Numerical {
            context: "sweep",
            detail: format!("{failed} row(s) failed; see the error column"),
        }));
    }
    Ok(())
}

fn contour(args: ContourArgs) -> Result<()> {
    let cfg = RunConfig::load(args.common.config.as_deref(), &args.common.overrides)?;
    let draw = match cfg.fading_draw() {
        Some(d) => d,
        None => {
            let seed = args.seed.or(cfg.mc.as_ref().map(|m| m.seed)).unwrap_or(0);
            let d = sample_fading(&mut ChaCha8Rng::seed_from_u64(seed));
            eprintln!("fading draw from seed {seed}: g_re={} g_im={}", d.g_re, d.g_im);
            d
        }
    };
    let out = output(args.common.out.as_ref())?;
    write_contour(&cfg.array_config()?, &cfg.system_params()?, draw, args.points, out)
}

fn terms(args: TermsArgs) -> Result<()> {
    let spec = TermsSpec {
        n_elements: args.n_elements,
        spacing: args.spacing,
        theta_b_deg: args.theta_b,
        max_n: args.max_n,
    };
    write_terms(&spec, output(args.out.as_ref())?)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Sweep(a) => sweep(a),
        Command::Contour(a) => contour(a),
        Command::Terms(a) => terms(a),
        Command::Presets => {
            for name in PRESET_NAMES {
                println!("{name}");
            }
            Ok(())
        }
        Command::Selftest => {
            let report = run_selftest();
            print!("{}", report.render());
            match report.failures().count() {
                0 => Ok(()),
                n => Err(CliError::SelfTest(n)),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
