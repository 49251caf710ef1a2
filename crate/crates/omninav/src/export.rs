//! Trajectory CSVs, summary CSV and SVG plots.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use omninav_core::sim::{Shape, WorldModel};
use omninav_core::{Strategy, Vec2};

use crate::episode::TickRecord;
use crate::error::{Error, Result};
use crate::harness::{SummaryRow, TrialResult};
use crate::scenario::Scenario;

pub fn episode_header(n_split: usize) -> String {
    let mut h = String::from("t,x,y,yaw,linear,rotate,theta,gated");
    for i in 1..=n_split {
        let _ = write!(h, ",e_{i}");
    }
    h
}

pub fn episode_row(r: &TickRecord) -> String {
    let mut row = format!(
        "{:.3},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{}",
        r.t,
        r.pose.x,
        r.pose.y,
        r.pose.yaw,
        r.velocity.linear,
        r.velocity.rotate,
        r.theta,
        u8::from(r.velocity.gated)
    );
    for e in &r.e {
        let _ = write!(row, ",{e:.6}");
    }
    row
}

/// One row per tick, pose after the step.
pub fn episode_csv(ticks: &[TickRecord], n_split: usize) -> String {
    let mut out = episode_header(n_split);
    out.push('\n');
    for t in ticks {
        out.push_str(&episode_row(t));
        out.push('\n');
    }
    out
}

pub fn summary_csv(rows: &[SummaryRow]) -> String {
    let mut out = String::from("scenario,target,strategy,trials,mean_error,var_error,collisions,timeouts\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{:.6},{:.6},{},{}",
            r.scenario,
            r.target,
            r.strategy.name(),
            r.trials,
            r.mean_error,
            r.var_error,
            r.collisions,
            r.timeouts
        );
    }
    out
}

pub fn trajectory_file_name(r: &TrialResult) -> String {
    format!("{}_{}_trial{}.csv", r.scenario, r.strategy.name(), r.trial)
}

const PX_PER_M: f64 = 200.0;
const MARGIN: f64 = 20.0;

fn strategy_color(s: Strategy) -> &'static str {
    match s {
        Strategy::All => "#d62728",
        Strategy::Clip => "#1f77b4",
        Strategy::Detic => "#2ca02c",
    }
}

fn points(world: &WorldModel, pts: impl IntoIterator<Item = Vec2>) -> String {
    let b = world.bounds;
    let mut s = String::new();
    for p in pts {
        let x = MARGIN + (p.x - b.min.x) * PX_PER_M;
        let y = MARGIN + (b.max.y - p.y) * PX_PER_M;
        let _ = write!(s, "{x:.1},{y:.1} ");
    }
    s.trim_end().to_owned()
}

/// World outline, regions, entities, origin and target markers and one
/// polyline per trial colored by strategy.
pub fn trajectory_svg(world: &WorldModel, scenario: &Scenario, results: &[TrialResult]) -> String {
    let b = world.bounds;
    let (w, h) = (b.width() * PX_PER_M, b.height() * PX_PER_M);
    let map = |p: Vec2| (MARGIN + (p.x - b.min.x) * PX_PER_M, MARGIN + (b.max.y - p.y) * PX_PER_M);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{:.0}" height="{:.0}" font-family="sans-serif" font-size="11">"#,
        w + 2.0 * MARGIN,
        h + 2.0 * MARGIN
    );
    let _ = writeln!(
        s,
        r##"<rect id="bounds" x="{MARGIN}" y="{MARGIN}" width="{w:.1}" height="{h:.1}" fill="#fafafa" stroke="#444"/>"##
    );
    for r in &world.regions {
        let c = map(r.centroid());
        let _ = writeln!(
            s,
            r##"<polygon points="{}" fill="#ffe9b3" fill-opacity="0.6" stroke="#c90"/><text x="{:.1}" y="{:.1}" fill="#960">{}</text>"##,
            points(world, r.polygon.iter().copied()),
            c.0,
            c.1,
            r.name
        );
    }
    for e in &world.entities {
        let c = map(e.shape.centroid());
        match &e.shape {
            Shape::Disc { radius, .. } => {
                let _ = write!(s, r##"<circle cx="{:.1}" cy="{:.1}" r="{:.1}" fill="#bbb"/>"##, c.0, c.1, radius * PX_PER_M);
            }
            Shape::Polygon { vertices } => {
                let _ = write!(s, r##"<polygon points="{}" fill="#bbb"/>"##, points(world, vertices.iter().copied()));
            }
        }
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}">{}</text>"#, c.0, c.1, e.label);
    }
    for wall in &world.walls {
        let (a, c) = (map(wall.a), map(wall.b));
        let _ = writeln!(
            s,
            r##"<line x1="{:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="#222" stroke-width="3"/>"##,
            a.0, a.1, c.0, c.1
        );
    }
    for r in results {
        let _ = writeln!(
            s,
            r#"<polyline class="trial" points="{}" fill="none" stroke="{}" stroke-width="1.5"/>"#,
            points(world, r.path()),
            strategy_color(r.strategy)
        );
    }
    let o = map(scenario.origin.into_position());
    let t = map(scenario.target.point);
    let _ = writeln!(s, r##"<circle id="origin" cx="{:.1}" cy="{:.1}" r="5" fill="#000"/>"##, o.0, o.1);
    let _ = writeln!(
        s,
        r##"<path id="target" d="M{:.1} {:.1}l12 12m0 -12l-12 12" stroke="#e00" stroke-width="3" transform="translate(-6 -6)"/>"##,
        t.0, t.1
    );
    s.push_str("</svg>\n");
    s
}

impl crate::scenario::PoseSpec {
    fn into_position(self) -> Vec2 {
        Vec2::new(self.x, self.y)
    }
}

/// Write trajectory CSVs, `summary.csv` and one SVG per scenario. Returns
/// the written paths.
pub fn export_artifacts(
    out: &Path,
    scenarios: &[(Scenario, WorldModel)],
    results: &[TrialResult],
    rows: &[SummaryRow],
) -> Result<Vec<PathBuf>> {
    if results.is_empty() {
        return Err(Error::Scenario("no results to export".into()));
    }
    fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    let mut written = Vec::new();
    let mut write = |name: String, body: String| -> Result<()> {
        let p = out.join(name);
        fs::write(&p, body).map_err(|e| Error::io(&p, e))?;
        written.push(p);
        Ok(())
    };
    for r in results {
        let n = scenarios
            .iter()
            .find(|(s, _)| s.name == r.scenario)
            .map_or(r.ticks.first().map_or(0, |t| t.e.len()), |(s, _)| s.reflex.n_split);
        write(trajectory_file_name(r), episode_csv(&r.ticks, n))?;
    }
    write("summary.csv".into(), summary_csv(rows))?;
    for (s, world) in scenarios {
        let mine: Vec<TrialResult> = results.iter().filter(|r| r.scenario == s.name).cloned().collect();
        if !mine.is_empty() {
            write(format!("{}.svg", s.name), trajectory_svg(world, s, &mine))?;
        }
    }
    Ok(written)
}
