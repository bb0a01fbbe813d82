use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use wavepacket_rabi::oracle::OdeSettings;
use wavepacket_rabi::scenario::{self, load_scenario_with};
use wavepacket_rabi::{output, presets, Result};

#[derive(Parser)]
#[command(version, about = "Two-level atom wave packets in a travelling wave")]
struct Cli {
    /// worker threads for the per-family maps (0 = all cores)
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve a scenario and write the observable series, snapshots and summary.
    Run {
        scenario: PathBuf,
        /// output directory (overrides [output].dir)
        #[arg(long)]
        out: Option<PathBuf>,
        /// run even if grid adequacy or time validity rules are violated
        #[arg(long)]
        override_validity: bool,
    },
    /// Compare the closed-form propagator against the Runge-Kutta oracle.
    Verify {
        scenario: PathBuf,
        /// fixed oracle step
        #[arg(long, conflicts_with = "tolerance")]
        step: Option<f64>,
        /// adaptive oracle with this per-step tolerance
        #[arg(long)]
        tolerance: Option<f64>,
        #[arg(long)]
        override_validity: bool,
    },
    /// List the built-in presets.
    Presets,
    /// Print or write a preset's scenario file.
    Preset {
        name: String,
        /// emit the scenario file
        #[arg(long)]
        emit: bool,
        /// write to this path instead of stdout
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build() {
        Ok(pool) => pool,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    };
    match pool.install(|| execute(cli.command)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn execute(command: Command) -> Result<ExitCode> {
    match command {
        Command::Run { scenario, out, override_validity } => {
            let sc = load_scenario_with(&scenario, override_validity)?;
            let result = scenario::run(&sc)?;
            let dir = out.unwrap_or_else(|| sc.file.output.dir.clone());
            for path in output::write_run(&sc, &result, &dir)? {
                println!("wrote {}", path.display());
            }
            println!(
                "max residuals: norm {:.3e}, momentum {:.3e}",
                result.residuals.norm_drift, result.residuals.momentum_drift
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { scenario, step, tolerance, override_validity } => {
            let sc = load_scenario_with(&scenario, override_validity)?;
            let settings = match (step, tolerance) {
                (Some(step), _) => Some(OdeSettings::Fixed { step }),
                (None, Some(tolerance)) => Some(OdeSettings::Adaptive { tolerance }),
                (None, None) => None,
            };
            let report = scenario::verify(&sc, settings)?;
            println!("tau            {}", report.tau);
            println!(
                "max |analytic - oracle|  {:.3e}  (limit {:.0e})",
                report.max_error,
                scenario::VERIFY_MAX_ERROR
            );
            println!(
                "norm drift               {:.3e}  (limit {:.0e})",
                report.residuals.norm_drift,
                scenario::VERIFY_MAX_NORM_DRIFT
            );
            println!(
                "momentum drift           {:.3e}  (limit {:.0e})",
                report.residuals.momentum_drift,
                scenario::VERIFY_MAX_MOMENTUM_DRIFT
            );
            println!("{}", if report.passed { "PASS" } else { "FAIL" });
            Ok(if report.passed { ExitCode::SUCCESS } else { ExitCode::from(2) })
        }
        Command::Presets => {
            for line in presets::list_presets() {
                println!("{line}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Preset { name, emit, output } => {
            let preset = presets::find(&name)?;
            if !emit {
                println!("{}: {}", preset.name, preset.description);
                println!("(use --emit to print the scenario file)");
                return Ok(ExitCode::SUCCESS);
            }
            let text = preset.scenario_file().to_toml();
            match output {
                Some(path) => {
                    std::fs::write(&path, text)?;
                    println!("wrote {}", path.display());
                }
                None => print!("{text}"),
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
