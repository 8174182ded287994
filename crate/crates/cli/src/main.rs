use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use orbitherm::cartography::{map_image, map_table, resonance_center, run_map};
use orbitherm::config::Config;
use orbitherm::coupling::{Checkpoint, CoupledRun};
use orbitherm::model::{mean_motion, BodyPhysical};
use orbitherm::output::{csv_table, read_file, write_file, Stamp};
use orbitherm::rheology::{love_number_k2, q_curve, RheologyModel, RheologyParams};
use orbitherm::thermal::{initial_profiles, MixtureProps, RadiogenicInventory};
use orbitherm::tides::estimate_grid;
use orbitherm::{Error, Result};

#[derive(Parser)]
#[command(name = "orbitherm", version, about = "Coupled orbital-thermal evolution near the Miranda-Umbriel 3:1 resonance")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// TOML configuration; defaults describe the nominal scenario
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Worker threads for map runs (0 = all cores)
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,
    /// Scenario preset applied before the config file
    #[arg(long, global = true, value_parser = ["nominal", "extremal-burgers", "extremal-andrade"])]
    preset: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Warm and cold radiogenic temperature profiles for both satellites
    Profile,
    /// Run the coupled orbital-thermal scenario
    Simulate {
        /// Write a checkpoint here every `--checkpoint-every` macro-steps and at the end
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        #[arg(long, default_value_t = 1000)]
        checkpoint_every: u64,
        /// Continue from a checkpoint written with the same configuration
        #[arg(long)]
        resume: Option<PathBuf>,
    },
    /// Phase-space map of Δa₅ over (M₅, a₅)
    Map,
    /// e²/Q tidal heating estimate over an (e, Q) grid
    Estimate,
    /// Q against melting temperature for each rheology
    Rheology,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Config(_) => ExitCode::from(2),
                _ => ExitCode::FAILURE,
            }
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let text = match &cli.common.config {
        Some(path) => String::from_utf8(read_file(path)?)
            .map_err(|_| Error::Config(format!("{} is not UTF-8", path.display())))?,
        None => String::new(),
    };
    let cfg = Config::from_toml(&text, cli.common.preset.as_deref())?;
    let stamp = Stamp::new(cfg.digest());
    let out = &cli.common.out;
    match cli.command {
        Command::Profile => profile(&cfg, &stamp, out),
        Command::Simulate { checkpoint, checkpoint_every, resume } => {
            let ck = CheckpointOpts { path: checkpoint, every: checkpoint_every, resume, digest: cfg.checkpoint_digest() };
            simulate(&cfg, &stamp, out, &ck)
        }
        Command::Map => map(&cfg, &stamp, out, cli.common.workers),
        Command::Estimate => estimate(&cfg, &stamp, out),
        Command::Rheology => rheology(&cfg, &stamp, out),
    }
}

fn written(path: &Path) {
    println!("wrote {}", path.display());
}

fn profile(cfg: &Config, stamp: &Stamp, out: &Path) -> Result<()> {
    let s = &cfg.scenario;
    let mixtures = s.mixtures()?;
    let t_surf = s.surface_temperatures();
    let inventory = RadiogenicInventory::default();
    for (i, (name, body)) in [("miranda", &s.inner), ("umbriel", &s.outer)].into_iter().enumerate() {
        let (warm, cold) = initial_profiles(body, &mixtures[i], &inventory, t_surf[i], &s.profile)?;
        for (kind, grid) in [("warm", warm), ("cold", cold)] {
            let rows = grid.profile_rows().into_iter().map(|(r, t)| [r / 1e3, t]);
            let path = out.join(format!("profile_{name}_{kind}.csv"));
            write_file(&path, csv_table(stamp, &["r_km", "t_k"], rows))?;
            written(&path);
        }
    }
    Ok(())
}

const SIM_COLUMNS: [&str; 17] = [
    "t_yr", "librating", "theta_rad", "a5_km", "e5", "i5_deg", "tmean5_k", "q5", "k2q5", "power5_w", "a2_km", "e2", "i2_deg",
    "tmean2_k", "q2", "k2q2", "power2_w",
];

struct CheckpointOpts {
    path: Option<PathBuf>,
    every: u64,
    resume: Option<PathBuf>,
    digest: String,
}

fn simulate(cfg: &Config, stamp: &Stamp, out: &Path, ck: &CheckpointOpts) -> Result<()> {
    let s = &cfg.scenario;
    let mut run = match &ck.resume {
        Some(path) => {
            let bytes = read_file(path)?;
            let saved: Checkpoint = serde_json::from_slice(&bytes)
                .map_err(|e| Error::Checkpoint(format!("{}: {e}", path.display())))?;
            CoupledRun::from_checkpoint(s, &saved, &ck.digest)?
        }
        None => CoupledRun::new(s)?,
    };
    let save = |run: &CoupledRun| -> Result<()> {
        if let Some(path) = &ck.path {
            let json = serde_json::to_vec(&run.checkpoint(&ck.digest))
                .map_err(|e| Error::Checkpoint(e.to_string()))?;
            write_file(path, json)?;
        }
        Ok(())
    };
    let mut steps = 0u64;
    while !run.finished() {
        let result = run.step_macro();
        if let Err(e) = result {
            save(&run)?;
            return Err(e);
        }
        steps += 1;
        if steps.is_multiple_of(ck.every.max(1)) {
            save(&run)?;
        }
    }
    save(&run)?;

    let rec = run.record();
    let rows = rec.rows.iter().map(|r| {
        let mut v = vec![r.t, f64::from(u8::from(r.librating)), r.theta];
        for sat in &r.sats {
            v.extend([sat.a, sat.e, sat.inc, sat.t_mean, sat.q, sat.k2q, sat.power]);
        }
        v
    });
    let path = out.join("simulation.csv");
    write_file(&path, csv_table(stamp, &SIM_COLUMNS, rows))?;
    written(&path);

    let summary = rec.summary();
    let rows = summary.iter().map(|s| {
        [
            s.final_e_inner,
            s.max_e_inner,
            s.delta_t_mean_inner,
            s.min_q_inner,
            s.libration_start.unwrap_or(f64::NAN),
            s.libration_end.unwrap_or(f64::NAN),
        ]
    });
    let cols = ["final_e5", "max_e5", "delta_tmean5_k", "min_q5", "libration_start_yr", "libration_end_yr"];
    let path = out.join("summary.csv");
    write_file(&path, csv_table(stamp, &cols, rows))?;
    written(&path);
    if let Some(s) = summary {
        println!("final e5 {:.4}, max e5 {:.4}, dT_mean {:+.3} K, min Q {:.3e}", s.final_e_inner, s.max_e_inner, s.delta_t_mean_inner, s.min_q_inner);
    }
    Ok(())
}

fn map(cfg: &Config, stamp: &Stamp, out: &Path, workers: usize) -> Result<()> {
    let result = run_map(&cfg.map, &cfg.map_base, workers)?;
    let path = out.join("map.csv");
    write_file(&path, map_table(&result, stamp))?;
    written(&path);
    let path = out.join("map.ppm");
    write_file(&path, map_image(&result, stamp, cfg.map.color)?)?;
    written(&path);
    if result.failed_cells() > 0 {
        eprintln!("warning: {} cells failed", result.failed_cells());
    }
    match resonance_center(&result) {
        Some(a) => println!("resonance centre a5 = {a:.2} km"),
        None => println!("no resonance band found"),
    }
    Ok(())
}

fn elastic_k2(body: &BodyPhysical, mu: f64) -> Result<f64> {
    Ok(love_number_k2(mu.into(), body.density, body.surface_gravity(), body.radius_m())?.norm())
}

fn estimate(cfg: &Config, stamp: &Stamp, out: &Path) -> Result<()> {
    let e = &cfg.estimate;
    let s = &cfg.scenario;
    let k2 = match e.k2 {
        Some(k) => k,
        None => elastic_k2(&s.inner, s.rheology_inner.mu_elastic)?,
    };
    let grid = estimate_grid(&e.e_values, &e.q_values, k2, &s.inner, &s.planet, e.a, e.cp)?;
    let rows = grid.iter().map(|r| [r.e, r.q_factor, r.power, r.dt_per_myr, r.log10_dt]);
    let path = out.join("estimate.csv");
    write_file(&path, csv_table(stamp, &["e", "q", "power_w", "dt_per_myr_k", "log10_dt"], rows))?;
    written(&path);
    Ok(())
}

fn rheology(cfg: &Config, stamp: &Stamp, out: &Path) -> Result<()> {
    let s = &cfg.scenario;
    let sweep = &cfg.rheology_sweep;
    let t_mean = match sweep.t_mean {
        Some(t) => t,
        None => {
            let inventory = RadiogenicInventory::default();
            let (warm, _) =
                initial_profiles(&s.inner, &MixtureProps::miranda(), &inventory, s.surface_temperatures()[0], &s.profile)?;
            warm.mean_temperature()
        }
    };
    let omega = mean_motion(s.inner_elements.a, &s.planet)?;
    for model in [RheologyModel::Maxwell, RheologyModel::Burgers, RheologyModel::Andrade] {
        let params = RheologyParams { model, ..s.rheology_inner };
        let curve = q_curve(t_mean, omega, &s.inner, &params, sweep.t_melt_values())?;
        let path = out.join(format!("q_{}.csv", model.name()));
        write_file(&path, csv_table(stamp, &["t_melt_k", "q"], curve.into_iter().map(|(t, q)| [t, q])))?;
        written(&path);
    }
    Ok(())
}
