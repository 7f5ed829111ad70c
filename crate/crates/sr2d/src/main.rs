use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand};
use sr2d::harness::{fit_boundary_slope, run_phase_transition, BatchSummary, ExperimentConfig, Mode, FULL_SCALE_TRIALS};
use sr2d::io::{read_grid, read_json, write_grid, write_json, DetectionFile, RecoveryFile, SimulationConfig};
use sr2d::report::{write_csv, write_svg};
use sr2d::verify::{run_suite, write_reports_csv, SuiteSelection};
use sr2d_core::detect::{detect_count_fixed_s, detect_count_sweep, DetectionParams};
use sr2d_core::music::TestGrid;
use sr2d_core::recover::{recover_sources, RecoveryOptions};

#[derive(Parser)]
#[command(name = "sr2d", version, about = "Two-dimensional super-resolution by coordinate combination")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Forward-simulate a measurement grid from a source file.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Estimate the number of sources in a grid.
    Detect {
        #[arg(long)]
        grid: PathBuf,
        /// Noise level; defaults to the level stored in the grid.
        #[arg(long)]
        noise_level: Option<f64>,
        /// Threshold at this half order only instead of sweeping.
        #[arg(long)]
        s: Option<usize>,
        #[arg(long, value_delimiter = ',', num_args = 2, default_values_t = [0.0, std::f64::consts::FRAC_PI_2])]
        translation: Vec<f64>,
        #[arg(long, default_value_t = 1.0)]
        threshold_scale: f64,
        #[arg(long, default_value_t = 2)]
        patience: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recover source locations from a grid given the source number.
    Recover {
        #[arg(long)]
        grid: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',', num_args = 2, default_values_t = [0.0, std::f64::consts::FRAC_PI_2])]
        translation: Vec<f64>,
        /// MUSIC test grid step.
        #[arg(long, default_value_t = 0.005)]
        step: f64,
        #[arg(long)]
        amplitudes: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte-Carlo phase transition in the SRF / noise plane.
    PhaseTransition {
        #[arg(long, value_enum)]
        mode: Mode,
        /// JSON file with experiment settings; flags override it.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        trials: Option<usize>,
        /// Use the full-scale trial count.
        #[arg(long, conflicts_with = "trials")]
        full_scale: bool,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out_csv: Option<PathBuf>,
        #[arg(long)]
        out_plot: Option<PathBuf>,
    },
    /// Randomized checks of the underlying inequalities.
    VerifyTheory {
        #[arg(long, value_enum, default_value_t = SuiteSelection::All)]
        suite: SuiteSelection,
        /// Instances per check; defaults to each check's own batch size.
        #[arg(long)]
        instances: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out_csv: Option<PathBuf>,
    },
}

fn emit<T: serde::Serialize>(value: &T, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(p) => write_json(p, value),
        None => {
            println!("{}", serde_json::to_string_pretty(value)?);
            Ok(())
        }
    }
}

fn point(v: &[f64]) -> [f64; 2] {
    [v[0], v[1]]
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Simulate { config, out } => {
            let cfg: SimulationConfig = read_json(&config)?;
            let grid = cfg.simulate().map_err(|e| anyhow!("{e}"))?;
            write_grid(&out, &grid)?;
            Ok(true)
        }
        Command::Detect { grid, noise_level, s, translation, threshold_scale, patience, out } => {
            let g = read_grid(&grid)?;
            let params = DetectionParams::new(noise_level.unwrap_or(g.noise_level()))
                .with_translation(point(&translation))
                .with_threshold_scale(threshold_scale)
                .with_patience(patience);
            let file = match s {
                Some(s) => DetectionFile::from(&detect_count_fixed_s(&g, &params, s)?),
                None => DetectionFile::from(&detect_count_sweep(&g, &params)?),
            };
            emit(&file, out.as_ref())?;
            Ok(true)
        }
        Command::Recover { grid, n, translation, step, amplitudes, out } => {
            let g = read_grid(&grid)?;
            let mut options = RecoveryOptions::new(TestGrid::new(2.0, step)?);
            options.estimate_amplitudes = amplitudes;
            let result = recover_sources(&g, n, point(&translation), &options)?;
            emit(&RecoveryFile::from(&result), out.as_ref())?;
            Ok(true)
        }
        Command::PhaseTransition { mode, config, n, trials, full_scale, seed, out_csv, out_plot } => {
            let mut cfg: ExperimentConfig = match &config {
                Some(p) => read_json(p)?,
                None => ExperimentConfig::default(),
            };
            if let Some(n) = n {
                cfg.n_true = n;
            }
            if let Some(t) = trials {
                cfg.trials = t;
            }
            if full_scale {
                cfg.trials = FULL_SCALE_TRIALS;
            }
            if let Some(s) = seed {
                cfg.seed = s;
            }
            let batch = run_phase_transition(&cfg, mode).map_err(|e| anyhow!(e))?;
            for id in &batch.skipped {
                eprintln!("trial {id} skipped: no admissible configuration within the attempt limit");
            }
            let summary = BatchSummary::of(&batch, mode, cfg.omega);
            let fit = fit_boundary_slope(&batch.records);
            println!(
                "trials {} successes {} ({:.1}%) skipped {}",
                summary.trials,
                summary.successes,
                100.0 * summary.success_rate(),
                summary.skipped
            );
            println!(
                "above theoretical threshold: {} trials, {} failures",
                summary.above_threshold, summary.above_threshold_failures
            );
            match &fit {
                Ok(f) => println!("boundary slope {:.3} intercept {:.3} ({} bins)", f.slope, f.intercept, f.points.len()),
                Err(e) => println!("boundary fit declined: {e}"),
            }
            if let Some(p) = &out_csv {
                write_csv(&batch.records, p)?;
            }
            if let Some(p) = &out_plot {
                let title = format!("{mode:?} recovery, n = {}, omega = {}", cfg.n_true, cfg.omega);
                write_svg(&batch.records, fit.as_ref().ok(), &title, p)?;
            }
            Ok(summary.above_threshold_failures == 0)
        }
        Command::VerifyTheory { suite, instances, seed, out_csv } => {
            let runs = run_suite(suite, seed, instances);
            let mut ok = true;
            for r in &runs {
                let s = r.summary;
                println!(
                    "{:<20} held {:>7} violated {:>4} not-applicable {:>6} errors {:>4}",
                    r.kind.name(),
                    s.held,
                    s.violated,
                    s.not_applicable,
                    s.errors
                );
                for e in r.errors.iter().take(3) {
                    eprintln!("  {}: {e}", r.kind.name());
                }
                ok &= s.passed();
            }
            if let Some(p) = &out_csv {
                write_reports_csv(&runs, p).context("writing report CSV")?;
            }
            println!("{}", if ok { "PASS" } else { "FAIL" });
            Ok(ok)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
