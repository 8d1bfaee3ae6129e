use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use sgphonon::{MaterialModel, PhysicalConstants};
use sgphonon_cli::golden::{
    build_golden, check_golden_text, default_golden_path, GOLDEN_TOLERANCE,
};
use sgphonon_cli::scenario::default_jobs;
use sgphonon_cli::sweep::parse_channel_list;
use sgphonon_cli::{
    contrast_csv, run_scenario, sweep, CliError, CliResult, MaterialSel, RunOptions,
    ScenarioConfig, SweepGrid,
};
use sgphonon_oracle::GoldenGrid;

#[derive(Parser)]
#[command(
    name = "sgphonon",
    version,
    about = "Phonon-induced contrast loss in Stern-Gerlach interferometers"
)]
struct Cli {
    /// Material preset name or JSON file.
    #[arg(long, global = true)]
    material: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario config.
    Run {
        config: PathBuf,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Sweep a grid file over channels and write `sweep.csv`.
    Sweep {
        #[arg(long)]
        grid: PathBuf,
        #[arg(long, default_value = "spin,dia")]
        channels: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Oracle-built golden values.
    Golden {
        #[command(subcommand)]
        action: GoldenAction,
    },
}

#[derive(Subcommand)]
enum GoldenAction {
    /// Rebuild the golden file with the oracle.
    Build {
        #[arg(long)]
        out: Option<PathBuf>,
        /// Grid JSON; defaults to the contrast-curve grid.
        #[arg(long)]
        grid: Option<PathBuf>,
    },
    /// Recompute the golden rows with the closed forms.
    Check {
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long, default_value_t = GOLDEN_TOLERANCE)]
        tolerance: f64,
    },
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn material(sel: &Option<String>) -> CliResult<Option<MaterialModel>> {
    sel.as_ref()
        .map(|s| MaterialSel::Named(s.clone()).resolve(Path::new(".")))
        .transpose()
}

fn execute(cli: Cli) -> CliResult<i32> {
    let material = material(&cli.material)?;
    match cli.command {
        Command::Run { config, jobs } => {
            let cfg = ScenarioConfig::from_file(&config)?;
            let base_dir = config.parent().map(Path::to_path_buf).unwrap_or_default();
            let summary = run_scenario(
                &cfg,
                &RunOptions {
                    material,
                    jobs,
                    base_dir,
                },
            )?;
            println!("{}", serde_json::to_string_pretty(&summary)?);
            Ok(0)
        }
        Command::Sweep {
            grid,
            channels,
            out,
            jobs,
        } => {
            let g = SweepGrid::from_json(&read(&grid)?)?;
            let chans = parse_channel_list(&channels, g.eta_e)?;
            std::fs::create_dir_all(&out).map_err(|e| CliError::io(&out, e))?;
            let m = material.unwrap_or_else(MaterialModel::diamond);
            let reports = sweep(
                &g,
                &chans,
                &m,
                &PhysicalConstants::default(),
                jobs.unwrap_or_else(default_jobs),
            )?;
            let path = out.join("sweep.csv");
            std::fs::write(&path, contrast_csv(&reports)).map_err(|e| CliError::io(&path, e))?;
            let unconverged = reports.iter().filter(|r| !r.converged).count();
            eprintln!(
                "{} rows -> {} ({} sums stopped at the mode cap)",
                reports.len(),
                path.display(),
                unconverged
            );
            Ok(0)
        }
        Command::Golden { action } => {
            let m = material.unwrap_or_else(MaterialModel::diamond);
            match action {
                GoldenAction::Build { out, grid } => {
                    let g = match grid {
                        Some(p) => serde_json::from_str::<GoldenGrid>(&read(&p)?)?,
                        None => GoldenGrid::contrast_curves(),
                    };
                    let text = build_golden(&g, &m)?;
                    let path = out.unwrap_or_else(default_golden_path);
                    if let Some(dir) = path.parent() {
                        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
                    }
                    std::fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
                    eprintln!("wrote {}", path.display());
                    Ok(0)
                }
                GoldenAction::Check { file, tolerance } => {
                    let path = file.unwrap_or_else(default_golden_path);
                    let check = check_golden_text(&read(&path)?, &m, tolerance)?;
                    println!(
                        "{} rows, max relative drift {:e}, {} beyond {:e}",
                        check.rows,
                        check.max_rel_err,
                        check.failures.len(),
                        tolerance
                    );
                    for (row, golden, current) in &check.failures {
                        println!("row {row}: golden {golden:e}, current {current:e}");
                    }
                    Ok(if check.passed() { 0 } else { 1 })
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
