use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use log::{info, warn};

use resit_core::harness::config::{parse_estimators, parse_i_values, parse_models, ConfigFile, Profile};
use resit_core::harness::{
    emit_csv, emit_diagnostics, emit_plots, render_tables, run_sweep_with_progress, summarize_ranges, write_csv,
    CubicFit, SweepConfig,
};
use resit_core::EstimatorKind;

#[derive(Debug, Parser)]
#[command(name = "resit", version, about = "Causal-direction accuracy sweeps for RESIT on additive noise models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run an accuracy sweep and write CSV, plots and range tables.
    Sweep(SweepArgs),
    /// List the available models and estimators.
    List,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Starting configuration: paper, desk or custom.
    #[arg(long)]
    profile: Option<Profile>,
    /// TOML file with sweep settings; command-line options override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// `all` or a comma-separated list such as `linear:N+U,cubic:L+L`.
    #[arg(long)]
    models: Option<String>,
    /// `all` or a comma-separated list of estimator names.
    #[arg(long)]
    estimators: Option<String>,
    /// `grid`, `grid:LO:HI` or a comma-separated list of i-factors.
    #[arg(long = "i")]
    i_values: Option<String>,
    #[arg(long)]
    reps: Option<u64>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    workers: Option<usize>,
    /// Cubic regression mode: cubed-cause, cbrt, identity or cube.
    #[arg(long)]
    cubic_fit: Option<CubicFit>,
    #[arg(long)]
    out_csv: Option<PathBuf>,
    /// Directory for one SVG chart per model.
    #[arg(long)]
    plots: Option<PathBuf>,
    /// Markdown file for the >= 90% range tables.
    #[arg(long)]
    summary: Option<PathBuf>,
    /// Where to list errored cells (default: next to the CSV when any cell errored).
    #[arg(long)]
    diagnostics: Option<PathBuf>,
    /// Only print warnings and errors.
    #[arg(long, short)]
    quiet: bool,
}

impl SweepArgs {
    fn build(&self) -> Result<SweepConfig> {
        let file = match &self.config {
            Some(p) => ConfigFile::load(p)?,
            None => ConfigFile::default(),
        };
        let profile = match self.profile {
            Some(p) => p,
            None => file.profile()?.unwrap_or(Profile::Paper),
        };
        let mut c = profile.sweep();
        file.apply(&mut c)?;
        if let Some(m) = &self.models {
            c.models = parse_models(m)?;
        }
        if let Some(e) = &self.estimators {
            c.estimators = parse_estimators(e)?;
        }
        if let Some(i) = &self.i_values {
            c.i_values = parse_i_values(i)?;
        }
        if let Some(r) = self.reps {
            c.repetitions = r;
        }
        if let Some(n) = self.samples {
            c.n_samples = n;
        }
        if let Some(s) = self.seed {
            c.base_seed = s;
        }
        if let Some(w) = self.workers {
            c.workers = w;
        }
        if let Some(f) = self.cubic_fit {
            c.options.cubic = f;
        }
        c.options.split.train_len(c.n_samples)?;
        c.validate()?;
        Ok(c)
    }
}

fn default_diagnostics(csv: Option<&Path>) -> PathBuf {
    match csv {
        Some(p) => p.with_extension("errors.csv"),
        None => PathBuf::from("sweep.errors.csv"),
    }
}

fn sweep(args: &SweepArgs) -> Result<ExitCode> {
    let config = args.build()?;
    info!(
        "{} models x {} i-factors x {} estimators, {} repetitions of {} samples, seed {}, {} workers, cubic fit {}",
        config.models.len(),
        config.i_values.len(),
        config.estimators.len(),
        config.repetitions,
        config.n_samples,
        config.base_seed,
        config.workers,
        config.options.cubic
    );
    let step = (config.trial_count() as usize / 20).max(1);
    let records = run_sweep_with_progress(&config, |done, total| {
        if done % step == 0 || done == total {
            info!("{done}/{total} trials");
        }
    })?;

    if let Some(p) = &args.out_csv {
        emit_csv(&records, p)?;
        info!("wrote {}", p.display());
    }
    if let Some(dir) = &args.plots {
        let files = emit_plots(&records, dir)?;
        info!("wrote {} plots to {}", files.len(), dir.display());
    }
    let tables = render_tables(&summarize_ranges(&records, 0.9, 0.1));
    if let Some(p) = &args.summary {
        std::fs::write(p, &tables).with_context(|| format!("writing {}", p.display()))?;
        info!("wrote {}", p.display());
    }
    if args.out_csv.is_none() && args.plots.is_none() && args.summary.is_none() {
        write_csv(&records, std::io::stdout().lock())?;
    }

    let errored = records.iter().filter(|r| r.errors > 0).count();
    if errored > 0 || args.diagnostics.is_some() {
        let path = args.diagnostics.clone().unwrap_or_else(|| default_diagnostics(args.out_csv.as_deref()));
        emit_diagnostics(&records, &path)?;
        if errored > 0 {
            warn!("{errored} cells had failing trials; see {}", path.display());
        }
    }
    Ok(if errored > 0 { ExitCode::from(2) } else { ExitCode::SUCCESS })
}

fn main() -> Result<ExitCode> {
    let cli = Cli::parse();
    let quiet = matches!(&cli.command, Command::Sweep(a) if a.quiet);
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(if quiet { "warn" } else { "info" }))
        .format_target(false)
        .init();
    match cli.command {
        Command::Sweep(args) => sweep(&args),
        Command::List => {
            println!("models:");
            for m in resit_core::harness::ModelKey::all() {
                println!("  {m}");
            }
            println!("estimators:");
            for e in EstimatorKind::ALL {
                let family = if e.is_entropy() { "entropy" } else { "dependence" };
                println!("  {e:<14} {family}");
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
