use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fracac_core::analysis::WindowConstant;
use fracac_core::config::{parse_config, ExperimentKind, InitialCondition, RunManifest};
use fracac_core::study::{amplification_sweep, run_convergence, run_simulation, window_report};
use fracac_core::SpatialOrder;

type CliResult<T> = Result<T, Box<dyn std::error::Error>>;

#[derive(Parser)]
#[command(name = "fracac", version, about = "Fractional Allen-Cahn splitting/ADI solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// key=value run manifest
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory (overrides `out` in the manifest)
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Seed for random initial data
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker threads for the sweeps (results do not depend on this)
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Spatial order of the difference operator
    #[arg(long, global = true, value_parser = ["2", "4"])]
    order: Option<String>,

    /// Richardson-extrapolate the final state with a 2dt run
    #[arg(long, global = true)]
    extrapolate: bool,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Refinement study on the manufactured solution (CSV + table)
    Convergence,
    /// Random-data run with snapshots and a max-norm trace
    Simulate,
    /// Maximum-principle time-step window
    Window,
    /// Largest von Neumann amplification factor over sampled phases
    Amplification,
}

impl Command {
    fn kind(self) -> ExperimentKind {
        match self {
            Self::Convergence => ExperimentKind::Convergence,
            Self::Simulate => ExperimentKind::Simulate,
            Self::Window => ExperimentKind::Window,
            Self::Amplification => ExperimentKind::Amplification,
        }
    }
}

fn has_kind(text: &str) -> bool {
    text.lines().any(|line| {
        let content = line.split('#').next().unwrap_or("");
        content.split_once('=').is_some_and(|(k, _)| k.trim() == "kind")
    })
}

fn load_manifest(cli: &Cli) -> CliResult<RunManifest> {
    let path = cli.config.as_ref().ok_or("--config <path> is required")?;
    let mut text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let kind = cli.command.kind();
    if !has_kind(&text) {
        text = format!("kind={}\n{text}", kind.name());
    }
    let mut manifest = parse_config(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    if manifest.kind != kind {
        return Err(format!(
            "{} describes a {} run, not {}",
            path.display(),
            manifest.kind.name(),
            kind.name()
        )
        .into());
    }
    if let Some(seed) = cli.seed {
        manifest.solver.seed = seed;
        if let InitialCondition::Random(spec) = &mut manifest.initial {
            spec.seed = seed;
        }
    }
    if let Some(order) = &cli.order {
        manifest.solver.order = SpatialOrder::from_int(order.parse()?)?;
    }
    if cli.extrapolate {
        manifest.solver.extrapolate = true;
    }
    if let Some(out) = &cli.out {
        manifest.out_dir = Some(out.clone());
    }
    manifest.validate()?;
    Ok(manifest)
}

fn convergence(manifest: &RunManifest) -> CliResult<()> {
    let table = run_convergence(manifest)?;
    match &manifest.out_dir {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            let path = dir.join("convergence.csv");
            fs::write(&path, table.to_csv())?;
            print!("{}", table.to_pretty());
            println!("wrote {}", path.display());
        }
        None => {
            print!("{}", table.to_csv());
            eprint!("{}", table.to_pretty());
        }
    }
    Ok(())
}

fn simulate(manifest: &RunManifest) -> CliResult<()> {
    let dir: &Path = manifest
        .out_dir
        .as_deref()
        .ok_or("simulate needs an output directory (--out or `out` in the config)")?;
    let summary = run_simulation(manifest, dir)?;
    println!("{summary}");
    for path in &summary.snapshots {
        println!("snapshot {}", path.display());
    }
    Ok(())
}

fn window(manifest: &RunManifest) -> CliResult<()> {
    let w = window_report(manifest)?;
    let name = match w.constant {
        WindowConstant::Conservative => "conservative",
        WindowConstant::Relaxed => "relaxed",
    };
    println!(
        "dt_min={:.4} dt_max={:.4} constant={name} nonempty={}",
        w.dt_min,
        w.dt_max,
        !w.is_empty()
    );
    Ok(())
}

fn amplification(manifest: &RunManifest) -> CliResult<()> {
    let sweep = amplification_sweep(manifest)?;
    for axis in 0..sweep.betas.len() {
        println!(
            "axis {axis}: beta={:.6e} max_factor={:.15} nyquist_factor={:.6e}",
            sweep.betas[axis], sweep.axis_max[axis], sweep.axis_nyquist[axis]
        );
    }
    println!(
        "max_factor={:.15} bounded={}",
        sweep.max_factor,
        sweep.max_factor <= 1.0 + 1e-12
    );
    Ok(())
}

fn execute(cli: &Cli) -> CliResult<()> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    let manifest = load_manifest(cli)?;
    match cli.command {
        Command::Convergence => convergence(&manifest),
        Command::Simulate => simulate(&manifest),
        Command::Window => window(&manifest),
        Command::Amplification => amplification(&manifest),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
