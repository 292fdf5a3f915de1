use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ipf_track::config::Config;
use ipf_track::harness::{self, load_frames, load_gray_frames, TrackReport};
use ipf_track::Result;

/// Markerless body tracking from silhouettes with interval particle filtering.
#[derive(Debug, Parser)]
#[command(name = "ipf-track", version)]
struct Cli {
    /// TOML config; keys it omits take the built-in defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Overrides the tracker seed from the config.
    #[arg(long, global = true, env = "IPF_SEED")]
    seed: Option<u64>,

    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Render the configured trajectory to frames plus truth.csv.
    Synth {
        /// Write gray frames over a backdrop (with background.pgm) instead of masks.
        #[arg(long)]
        raw: bool,
    },
    /// Track a frame directory and write track.csv.
    Track {
        /// Directory holding cam{i}/frame_NNNN.{pgm,png}.
        #[arg(long)]
        frames: PathBuf,
    },
    /// Compare a report with ground truth; writes errors.csv and summary.csv.
    Eval {
        #[arg(long)]
        report: PathBuf,
        #[arg(long)]
        truth: PathBuf,
    },
    /// Draw the estimated model outline over the frames of one camera.
    Overlay {
        #[arg(long)]
        report: PathBuf,
        #[arg(long)]
        frames: PathBuf,
        #[arg(long, default_value_t = 0)]
        camera: usize,
    },
    /// Print the effective configuration.
    Config,
}

fn load_config(cli: &Cli) -> Result<Config> {
    let mut cfg = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.tracker.seed = seed;
    }
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<()> {
    let cfg = load_config(cli)?;
    let out: &Path = &cli.out;
    match &cli.command {
        Command::Synth { raw } => {
            let spec = cfg.skeleton()?;
            let cameras = cfg.camera_models()?;
            let tracked = cfg.tracked_indices(&spec)?;
            let truth = harness::generate_synthetic(
                &spec,
                &cameras,
                &cfg.trajectory,
                &tracked,
                cfg.tracker.half_width,
                out,
                *raw,
            )?;
            println!("wrote {} frames for {} camera(s) to {}", truth.len(), cameras.len(), out.display());
        }
        Command::Track { frames } => {
            let masks = load_frames(frames, cfg.cameras.len(), &cfg.segmentation)?;
            let report = harness::run_tracker(&cfg, &masks)?;
            std::fs::create_dir_all(out)?;
            let path = out.join("track.csv");
            report.write_csv(&path)?;
            let lost = report.frames.iter().filter(|f| f.lost).count();
            println!("tracked {} frames ({lost} lost), wrote {}", report.len(), path.display());
        }
        Command::Eval { report, truth } => {
            let spec = cfg.skeleton()?;
            let ev = harness::evaluate(&TrackReport::read_csv(report)?, &TrackReport::read_csv(truth)?)?;
            std::fs::create_dir_all(out)?;
            ev.write_series_csv(&out.join("errors.csv"))?;
            ev.write_summary_csv(&spec, &out.join("summary.csv"))?;
            let tracked = cfg.tracked_indices(&spec)?;
            for &i in &tracked {
                println!("{:<14} MAE {:8.3} deg", spec.dofs()[i].name, ev.dof_mae[i]);
            }
            println!("tracked dofs   MAE {:8.3} deg", ev.mean_dof_mae(&tracked));
            println!("all joints     mean error {:.4} m", ev.mean_joint_error(&(0..spec.joints().len()).collect::<Vec<_>>()));
            println!("origin         mean error {:.4} m", ev.origin_error);
        }
        Command::Overlay { report, frames, camera } => {
            let spec = cfg.skeleton()?;
            let cameras = cfg.camera_models()?;
            let cam = cameras.get(*camera).ok_or_else(|| {
                ipf_track::Error::Config(format!("camera {camera} not in config ({} cameras)", cameras.len()))
            })?;
            let report = TrackReport::read_csv(report)?;
            let gray = if report.is_empty() { Vec::new() } else { load_gray_frames(frames, *camera)? };
            let written = harness::render_overlay(&spec, &report, &gray, cam, out)?;
            println!("wrote {} overlay image(s) to {}", written.len(), out.display());
        }
        Command::Config => print!("{}", cfg.to_toml_string()),
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
