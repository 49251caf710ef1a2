use std::net::TcpListener;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use omninav::config::{load_config, Config};
use omninav::episode::Scorers;
use omninav::export::export_artifacts;
use omninav::gateway::{
    port_from_env, serve_scorer_endpoint, serve_session, GatewayScorer, ScorerRegistry, SessionConfig,
    DEFAULT_SCORER_PORT, DEFAULT_SESSION_PORT,
};
use omninav::harness::{run_comparison, run_trials, summarize};
use omninav::scenario::{load_scenario, load_suite};
use omninav::{Error, Result};
use omninav_core::panorama::{crop_band, stitch_pair, FisheyePair};
use omninav_core::sim::{ObjectOracle, Pose, RegionOracle};
use omninav_core::Strategy;

#[derive(Parser)]
#[command(name = "omninav", version, about = "Omnidirectional reflex navigation: simulator, stitcher and gateway")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Default)]
struct Settings {
    /// key=value configuration file
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override one configuration key (repeatable), e.g. `gate.cone=0.6`
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

impl Settings {
    fn load(&self) -> Result<Config> {
        let mut cfg = match &self.config {
            Some(p) => load_config(p)?,
            None => Config::default(),
        };
        for kv in &self.set {
            cfg.assign(kv)?;
        }
        Ok(cfg)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run the trials of one scenario and export trajectories
    Run {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long, value_parser = parse_strategy)]
        strategy: Option<Strategy>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[command(flatten)]
        settings: Settings,
    },
    /// Run every scenario of a suite under every strategy
    Compare {
        #[arg(long)]
        suite: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[command(flatten)]
        settings: Settings,
    },
    /// Stitch a front/rear fisheye pair into a cropped panorama
    Stitch {
        #[arg(long)]
        front: PathBuf,
        #[arg(long)]
        rear: PathBuf,
        #[arg(long)]
        cps: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Panorama width; the full sphere is width x width/2 before cropping
        #[arg(long, default_value_t = 2000)]
        width: usize,
        /// Keep the full sphere instead of the horizon band
        #[arg(long)]
        no_crop: bool,
        #[command(flatten)]
        settings: Settings,
    },
    /// Live session server with the scorer endpoint attached
    Serve {
        #[arg(long)]
        world: PathBuf,
        /// Origin, schedule and reflex settings come from here when given
        #[arg(long)]
        scenario: Option<PathBuf>,
        /// Session (WebSocket) port; also OMNINAV_SESSION_PORT
        #[arg(long)]
        port: Option<u16>,
        /// Scorer endpoint port; also OMNINAV_SCORER_PORT
        #[arg(long)]
        scorer_port: Option<u16>,
        #[command(flatten)]
        settings: Settings,
    },
}

fn parse_strategy(s: &str) -> std::result::Result<Strategy, String> {
    Strategy::parse(s).ok_or_else(|| format!("expected all, clip or detic, got {s:?}"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("omninav: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn dispatch(cmd: Command) -> Result<()> {
    match cmd {
        Command::Run { scenario, strategy, trials, seed, out, settings } => {
            let cfg = settings.load()?;
            let mut s = load_scenario(&scenario)?;
            cfg.apply_reflex(&mut s.reflex);
            if let Some(st) = strategy {
                s = s.with_strategy(st);
            }
            if let Some(n) = trials {
                s.trials = n;
            }
            if let Some(seed) = seed {
                s.seed = seed;
            }
            s.validate()?;
            let world = omninav::world_file::load_world(&s.world)?;
            let results = run_trials(&s, &world, &mut Scorers::oracles())?;
            for r in &results {
                println!(
                    "{} {} trial {}: {} after {:.1} s, final error {:.3} m",
                    r.scenario,
                    r.strategy.name(),
                    r.trial,
                    r.termination,
                    r.duration,
                    r.final_error
                );
            }
            let row = summarize(&results, &s.target.label);
            println!("mean {:.3} m, variance {:.4} m^2", row.mean_error, row.var_error);
            report(&export_artifacts(&out, &[(s, world)], &results, &[row])?);
        }
        Command::Compare { suite, out, settings } => {
            let cfg = settings.load()?;
            let mut suite = load_suite(&suite)?;
            for s in &mut suite.scenarios {
                cfg.apply_reflex(&mut s.reflex);
                s.validate()?;
            }
            let cmp = run_comparison(&suite, Scorers::oracles)?;
            println!("{:<20} {:<6} {:>8} {:>9} {:>5} {:>5}", "scenario", "mode", "mean_m", "var_m2", "coll", "tout");
            for r in &cmp.rows {
                println!(
                    "{:<20} {:<6} {:>8.3} {:>9.4} {:>5} {:>5}",
                    r.scenario,
                    r.strategy.name(),
                    r.mean_error,
                    r.var_error,
                    r.collisions,
                    r.timeouts
                );
            }
            let mut pairs = Vec::new();
            for s in &suite.scenarios {
                pairs.push((s.clone(), omninav::world_file::load_world(&s.world)?));
            }
            report(&export_artifacts(&out, &pairs, &cmp.trials, &cmp.rows)?);
        }
        Command::Stitch { front, rear, cps, out, width, no_crop, settings } => {
            let cfg = settings.load()?;
            let front_img = omninav::imageio::read_png(&front)?;
            let rear_img = omninav::imageio::read_png(&rear)?;
            let cps = omninav::cps::load_control_points(&cps)?;
            if width < 2 || width % 2 != 0 {
                return Err(Error::Scenario(format!("panorama width must be even, got {width}")));
            }
            let pair = FisheyePair {
                lens: cfg.lens(front_img.width()),
                vignette: cfg.vignette,
                front: front_img,
                rear: rear_img,
            };
            let stitched = stitch_pair(&pair, &cps, width, width / 2)?;
            let pano = if no_crop {
                stitched.panorama
            } else {
                match (cfg.crop_top, cfg.crop_height) {
                    (None, None) => stitched.panorama.crop_centered()?,
                    (top, rows) => {
                        let (t0, h0) = omninav_core::panorama::centered_band(stitched.panorama.height());
                        crop_band(&stitched.panorama, top.unwrap_or(t0), rows.unwrap_or(h0))?
                    }
                }
            };
            let a = &stitched.alignment;
            println!(
                "alignment: yaw {:.5} rad, residual {:.5} rad{}",
                a.rotation.yaw_angle(),
                a.residual_rms,
                if a.degenerate { " (yaw-only fit)" } else { "" }
            );
            omninav::imageio::write_png(pano.image(), &out)?;
            println!("wrote {} ({}x{})", out.display(), pano.width(), pano.height());
        }
        Command::Serve { world, scenario, port, scorer_port, settings } => {
            let cfg = settings.load()?;
            let world = omninav::world_file::load_world(&world)?;
            let mut session = match &scenario {
                Some(p) => {
                    let s = load_scenario(p)?;
                    let mut c = SessionConfig::new(world, s.origin.into());
                    c.reflex = s.reflex;
                    c.schedule = s.schedule;
                    c
                }
                None => {
                    let b = world.bounds;
                    let centre = Pose::new((b.min.x + b.max.x) * 0.5, (b.min.y + b.max.y) * 0.5, 0.0);
                    SessionConfig::new(world, centre)
                }
            };
            cfg.apply_reflex(&mut session.reflex);
            let scorer_port = scorer_port.unwrap_or_else(|| port_from_env("OMNINAV_SCORER_PORT", DEFAULT_SCORER_PORT));
            let session_port = port.unwrap_or_else(|| port_from_env("OMNINAV_SESSION_PORT", DEFAULT_SESSION_PORT));
            let bind = |p: u16| TcpListener::bind(("0.0.0.0", p)).map_err(Error::Net);
            let registry = ScorerRegistry::new();
            let scorer_listener = bind(scorer_port)?;
            let scorer_addr = scorer_listener.local_addr().map_err(Error::Net)?;
            let session_listener = bind(session_port)?;
            let scorers = Scorers {
                clip: Box::new(GatewayScorer::new(Box::new(RegionOracle), Arc::clone(&registry))),
                detic: Box::new(GatewayScorer::new(Box::new(ObjectOracle), Arc::clone(&registry))),
            };
            let _endpoint = serve_scorer_endpoint(scorer_listener, registry);
            let handle = serve_session(session_listener, session, scorers)?;
            println!("scorer endpoint on {scorer_addr}, session on {}", handle.addr());
            handle.join();
        }
    }
    Ok(())
}

fn report(paths: &[PathBuf]) {
    let dir = paths.first().and_then(|p| p.parent()).unwrap_or(Path::new("."));
    println!("wrote {} files to {}", paths.len(), dir.display());
}
