//! `spa-sim` command-line front end.
//!
//! Exit codes: 0 success, 1 configuration or usage error, 2 a scenario ran
//! but one of its checks failed.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use spa_sim::config::Config;
use spa_sim::ppm::{read_ppm, write_ppm};
use spa_sim::render::{draw, rasterize};
use spa_sim::scenario::{
    run_fertigation_comparison, run_growth_experiment, run_monitoring_trace, Check,
};
use spa_sim::vision::analyze;
use spa_sim::{Execution, SimTime};

#[derive(Parser, Debug)]
#[command(
    name = "spa-sim",
    version,
    about = "Wilt-triggered fertigation simulator"
)]
struct Cli {
    /// Config file (`section.key = value` lines); defaults apply otherwise.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Overrides `run.seed`.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output directory for scenario files.
    #[arg(long, global = true, value_name = "DIR", default_value = "out")]
    out: PathBuf,

    /// Print the effective configuration and exit.
    #[arg(long, global = true)]
    dump_defaults: bool,

    /// Run every stage on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Height development of three nutrient-band groups.
    Growth,
    /// One-day trace of the wilt controller on a single plant.
    Monitor {
        /// Also write each sample's camera frame as PPM under `<out>/frames`.
        #[arg(long)]
        frames: bool,
    },
    /// Timer versus wilt-triggered fertigation over the regime timeline.
    Compare,
    /// Render one plant silhouette to a PPM file.
    RenderFrame {
        #[arg(long, value_name = "CM")]
        height: f64,
        #[arg(long, value_name = "CM")]
        width: f64,
        #[arg(long, value_name = "CM")]
        distance: f64,
        #[arg(long, value_name = "PATH")]
        output: PathBuf,
        #[arg(long, default_value_t = 0)]
        noise_seed: u64,
    },
    /// Measure plant height and width in a PPM frame.
    MeasureImage {
        file: PathBuf,
        #[arg(long, value_name = "CM")]
        distance: f64,
    },
}

enum Failure {
    Usage(String),
    Checks,
}

impl From<spa_sim::Error> for Failure {
    fn from(e: spa_sim::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Checks) => ExitCode::from(2),
    }
}

fn load_config(cli: &Cli) -> Result<Config, Failure> {
    let mut cfg = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn report(checks: &[Check]) -> Result<(), Failure> {
    for c in checks {
        println!("{}", c.line());
    }
    if checks.iter().all(|c| c.passed) {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

fn wrote(dir: &Path) {
    println!("outputs written to {}", dir.display());
}

fn run(cli: Cli) -> Result<(), Failure> {
    let cfg = load_config(&cli)?;
    if cli.dump_defaults {
        print!("{}", cfg.dump());
        return Ok(());
    }
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::default()
    };
    let Some(command) = cli.command else {
        return Err(Failure::Usage(
            "missing subcommand (growth, monitor, compare, render-frame, measure-image); see --help".into(),
        ));
    };
    match command {
        Command::Growth => {
            let r = run_growth_experiment(&cfg, exec)?;
            r.write_outputs(&cli.out)?;
            println!("capture days: {:?}", r.capture_days);
            if let Some(d) = r.overlap_day {
                println!("canopy overlap from day {d}");
            }
            wrote(&cli.out);
            report(&r.checks)
        }
        Command::Monitor { frames } => {
            let r = run_monitoring_trace(&cfg)?;
            r.write_outputs(&cli.out)?;
            if frames {
                r.write_frames(&cfg, &cli.out.join("frames"))?;
            }
            println!("pump events at minutes: {:?}", r.event_minutes());
            wrote(&cli.out);
            report(&r.checks)
        }
        Command::Compare => {
            let r = run_fertigation_comparison(&cfg, exec)?;
            r.write_outputs(&cli.out)?;
            wrote(&cli.out);
            report(&r.checks)
        }
        Command::RenderFrame {
            height,
            width,
            distance,
            output,
            noise_seed,
        } => {
            let sil = rasterize(height, width, &cfg.camera, distance)?;
            let gt = sil.ground_truth();
            let frame = draw(&sil, &cfg.camera, distance, SimTime(0), noise_seed);
            write_ppm(&frame, &output)?;
            println!("height_px {}", gt.height_px);
            println!("width_px {}", gt.width_px);
            println!("plant_pixels {}", gt.plant_pixel_count);
            Ok(())
        }
        Command::MeasureImage { file, distance } => {
            let frame = read_ppm(&file, distance)?;
            let m = analyze(&frame, &cfg.camera, &cfg.vision)?;
            println!("height_cm {:.4}", m.height_cm);
            println!("width_cm {:.4}", m.width_cm);
            println!("height_px {}", m.height_px);
            println!("width_px {}", m.width_px);
            Ok(())
        }
    }
}
