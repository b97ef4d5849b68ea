use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lsa_sim::engine::{self, SimulationConfig};
use lsa_sim::manifest::{sha256_file, RunManifest};
use lsa_sim::{config, output, Error, Result};

#[derive(Parser)]
#[command(name = "lsa-sim", version, about = "Emergency spectrum sharing impact simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse raw datasets and write profiles, distributions and a report.
    Ingest {
        #[arg(long)]
        traffic: Option<PathBuf>,
        #[arg(long)]
        events: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Run the simulation and write a self-describing run directory.
    Run {
        #[command(flatten)]
        common: Common,
    },
    /// Write gnuplot data files from a run directory (`--out`).
    ExportFigures {
        #[arg(long)]
        out: PathBuf,
    },
    /// Check a config and its inputs, or a run directory against its manifest.
    Validate {
        #[command(flatten)]
        common: Common,
        /// Also re-run from the manifest and compare every output digest.
        #[arg(long)]
        rerun: bool,
    },
}

#[derive(Args)]
struct Common {
    /// Config file; built-in defaults when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    days: Option<u32>,
    /// Year list, e.g. `1-5` or `1,3`.
    #[arg(long)]
    years: Option<String>,
    #[arg(long)]
    peak_fraction: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    shift_hours: Option<i64>,
}

impl Common {
    fn config(&self) -> Result<SimulationConfig> {
        let mut c = match &self.config {
            Some(path) => config::load(path)?,
            None => SimulationConfig::default(),
        };
        if let Some(v) = self.seed {
            c.master_seed = v;
        }
        if let Some(v) = self.workers {
            c.workers = v;
        }
        if let Some(v) = self.days {
            c.n_days = v;
        }
        if let Some(v) = &self.years {
            c.years = config::parse_years(v)?;
        }
        if let Some(v) = self.peak_fraction {
            c.peak_fraction = v;
        }
        if let Some(v) = self.shift_hours {
            c.shift_hours = v;
        }
        c.validate()?;
        Ok(c)
    }

    fn out(&self) -> Result<&Path> {
        self.out.as_deref().ok_or_else(|| Error::Config("`--out` is required".into()))
    }
}

fn run_into(config: SimulationConfig, dir: &Path) -> Result<()> {
    let (sim, out) = engine::run(config)?;
    output::write_run(dir, &sim, &out)?;
    for s in out.summaries() {
        println!(
            "year {}: {} events, {} covered, mean daily impact fraction {:.3e}",
            s.year,
            s.total_events,
            s.covered_events,
            s.mean_daily_fraction()
        );
    }
    Ok(())
}

fn rerun_check(run_dir: &Path, manifest: &RunManifest) -> Result<()> {
    let scratch = std::env::temp_dir().join(format!("lsa-sim-rerun-{}", std::process::id()));
    let result = engine::run(manifest.config()?).and_then(|(sim, out)| {
        output::write_run(&scratch, &sim, &out)?;
        for entry in &manifest.outputs {
            let found = sha256_file(&scratch.join(&entry.path))?;
            if found != entry.sha256 {
                return Err(Error::DigestMismatch {
                    path: run_dir.join(&entry.path).display().to_string(),
                    expected: entry.sha256.clone(),
                    found,
                });
            }
        }
        Ok(())
    });
    let _ = std::fs::remove_dir_all(&scratch);
    result
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Ingest { traffic, events, common } => {
            let report = output::ingest(traffic.as_deref(), events.as_deref(), &common.config()?, common.out()?)?;
            print!("{}", report.to_text());
        }
        Command::Run { common } => run_into(common.config()?, common.out()?)?,
        Command::ExportFigures { out } => {
            for path in output::export_figures(&out)? {
                println!("{}", path.display());
            }
        }
        Command::Validate { common, rerun } => match &common.out {
            Some(dir) => {
                let manifest = output::validate_run(dir)?;
                if rerun {
                    rerun_check(dir, &manifest)?;
                }
                println!("{}: {} outputs verified", dir.display(), manifest.outputs.len());
            }
            None => {
                let c = common.config()?;
                output::validate_config(&c)?;
                println!("config ok");
            }
        },
    }
    Ok(())
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
