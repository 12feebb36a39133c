use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use wavesource::commands;
use wavesource::{CliError, Experiment, ExperimentConfig, Overrides};

#[derive(Parser)]
#[command(version, about = "Inverse source reconstruction from contrast-agent measurements")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Experiment configuration (TOML).
    #[arg(long, global = true, default_value = "wavesource.toml")]
    config: PathBuf,

    /// Worker threads for lattice sweeps (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Output directory, overriding `output.dir`.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Noise seed, overriding `noise.seed`.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Relative noise amplitude, overriding `noise.amplitude`.
    #[arg(long, global = true)]
    noise: Option<f64>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Write the resonance mode table.
    Eigs,
    /// Sample the background field at the configured points.
    Forward,
    /// Synthesize measurement windows.
    Simulate,
    /// Reconstruct the internal field (and source) from stored windows.
    Reconstruct,
    /// Simulate and reconstruct in one pass and summarize the errors.
    Roundtrip,
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let config = ExperimentConfig::load(&cli.config)?;
    let overrides = Overrides {
        output: cli.output.clone(),
        seed: cli.seed,
        noise: cli.noise,
    };
    let exp = Experiment::new(config, &overrides)?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(CliError::Config("--jobs must be at least 1".into()));
        }
        pool = pool.num_threads(jobs);
    }
    let pool = pool.build().map_err(|e| CliError::Config(format!("--jobs: {e}")))?;
    pool.install(|| match cli.command {
        Command::Eigs => {
            let modes = commands::eigs(&exp)?;
            println!("wrote {} modes to {}", modes.len(), exp.out_dir().join("modes.json").display());
            Ok(())
        }
        Command::Forward => {
            let report = commands::forward(&exp)?;
            for t in &report.traces {
                println!("{}: max |V| = {:.6e}", t.file, t.max_abs);
            }
            if let Some(r) = report.residual {
                println!("wave-equation residual {:.3e} (relative to |J|)", r.relative);
            }
            Ok(())
        }
        Command::Simulate => {
            let s = commands::simulate_cmd(&exp)?;
            println!(
                "window at t~ = {:.6}, tail bound {:.3e}, {} lattice windows",
                s.window.window.t_tilde, s.window.window.tail_bound, s.lattice_windows
            );
            Ok(())
        }
        Command::Reconstruct => {
            let s = commands::reconstruct_cmd(&exp)?;
            match s.record.residual {
                Some(r) => println!("N = {}, cond = {:.3e}, residual_V = {r:.3e}", s.record.n, s.record.cond),
                None => println!("N = {}, cond = {:.3e}", s.record.n, s.record.cond),
            }
            if let Some(src) = s.source {
                println!("source relative error {:.3e}", src.relative_error);
            }
            Ok(())
        }
        Command::Roundtrip => {
            let s = commands::roundtrip(&exp)?;
            println!("{}", serde_json::to_string_pretty(&s).expect("summary serializes"));
            Ok(())
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
