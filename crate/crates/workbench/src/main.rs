use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use riscap_workbench::presets::{self, DEFAULT_SEED, DEFAULT_TRIALS};
use riscap_workbench::run::{format_report, run_scenario, McOptions, RunOptions};
use riscap_workbench::scenario::{ModeSetting, ScenarioFile};
use riscap_workbench::sweep::{parse_outputs, parse_values, run_sweep, SweepOptions, SweepSpec};
use riscap_workbench::{table, Error, Result};

#[derive(Parser)]
#[command(name = "riscap", version, about = "Ergodic capacity of RIS-aided links under outdated CSI")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Propagation formula: auto, near or far (overrides the file).
    #[arg(long, value_parser = parse_mode)]
    mode: Option<ModeSetting>,
    /// Skip the Monte Carlo estimate.
    #[arg(long)]
    no_mc: bool,
    /// Worker threads for the Monte Carlo oracle.
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Analytic report (and Monte Carlo estimate) for one scenario.
    Analyze {
        scenario: PathBuf,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
    /// One-parameter sweep written as CSV.
    Sweep {
        scenario: PathBuf,
        /// One of P, rho, rho0, My, d1, cell_size, K0, x.
        #[arg(long)]
        var: String,
        /// Comma-separated list or inclusive range start:step:stop.
        #[arg(long, allow_hyphen_values = true)]
        values: String,
        /// Comma-separated subset of approx, ub, lb, mc.
        #[arg(long, default_value = "approx,ub,lb,mc")]
        outputs: String,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Figure-reproduction preset written as multi-series CSV.
    Preset {
        /// fig2 .. fig8.
        name: String,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print the preset's scenarios and sweeps as TOML instead of running it.
        #[arg(long)]
        print_config: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Monte Carlo estimate only.
    Mc {
        scenario: PathBuf,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Propagation formula: auto, near or far (overrides the file).
        #[arg(long, value_parser = parse_mode)]
        mode: Option<ModeSetting>,
        #[arg(long)]
        workers: Option<usize>,
    },
}

fn parse_mode(s: &str) -> std::result::Result<ModeSetting, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| Error::Io {
                    path: PathBuf::from("<stdout>"),
                    source,
                })
        }
    }
}

fn warn(warnings: &[String]) {
    for w in warnings {
        eprintln!("warning: {w}");
    }
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Analyze {
            scenario,
            trials,
            seed,
            common,
        } => {
            let file = ScenarioFile::load(&scenario)?;
            let mc = (!common.no_mc).then_some(McOptions {
                trials: trials.unwrap_or(file.monte_carlo.trials),
                seed: seed.unwrap_or(file.monte_carlo.seed),
                workers: common.workers,
            });
            let report = run_scenario(&file, &RunOptions { mode: common.mode, mc })?;
            warn(&report.warnings);
            emit(&format_report(&report), None)
        }
        Command::Sweep {
            scenario,
            var,
            values,
            outputs,
            trials,
            seed,
            out,
            common,
        } => {
            let file = ScenarioFile::load(&scenario)?;
            let mut spec = SweepSpec {
                var: var.parse()?,
                values: parse_values(&values)?,
                outputs: parse_outputs(&outputs)?,
                trials: trials.unwrap_or(file.monte_carlo.trials),
                seed: seed.unwrap_or(file.monte_carlo.seed),
            };
            if common.no_mc {
                spec = spec.without_mc();
            }
            let opts = SweepOptions {
                mode: common.mode,
                workers: common.workers,
            };
            let result = run_sweep(&file, &spec, &opts)?;
            warn(&result.warnings);
            emit(&table::to_csv(result.var, &result.rows), out.as_deref())
        }
        Command::Preset {
            name,
            trials,
            seed,
            out,
            print_config,
            common,
        } => {
            let mut preset = presets::preset(&name, trials, seed)?;
            if common.no_mc {
                preset = preset.without_mc();
            }
            if print_config {
                return emit(&preset.to_toml()?, out.as_deref());
            }
            let opts = SweepOptions {
                mode: common.mode,
                workers: common.workers,
            };
            let results = preset.run(&opts)?;
            for r in &results {
                for w in &r.result.warnings {
                    eprintln!("warning: [{}] {w}", r.label);
                }
            }
            emit(&presets::to_csv(&preset, &results), out.as_deref())
        }
        Command::Mc {
            scenario,
            trials,
            seed,
            mode,
            workers,
        } => {
            let file = ScenarioFile::load(&scenario)?;
            let mc = McOptions {
                trials: trials.unwrap_or(file.monte_carlo.trials),
                seed: seed.unwrap_or(file.monte_carlo.seed),
                workers,
            };
            let report = run_scenario(&file, &RunOptions { mode, mc: Some(mc) })?;
            warn(&report.warnings);
            let est = report.mc.expect("requested");
            let text = format!(
                "mode = \"{}\"\ngamma_teff = {}\nec_mc = {}\nmc_stderr = {}\nmc_trials = {}\nseed = {}\n",
                report.mode.as_str(),
                report.capacity.gamma_teff,
                est.mean_ec,
                est.std_error,
                est.trials,
                mc.seed
            );
            emit(&text, None)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
