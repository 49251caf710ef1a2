//! Control point files: one pair per line, `front_x front_y rear_x rear_y`
//! in unwarped-panorama pixels. `#` starts a comment; blank lines are
//! skipped.

use std::fs;
use std::path::Path;

use omninav_core::panorama::ControlPointSet;

use crate::error::{Error, Result};

pub fn parse_control_points(text: &str, origin: &Path) -> Result<ControlPointSet> {
    let mut pairs = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<f64> = line
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|f| !f.is_empty())
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Parse {
                path: origin.to_path_buf(),
                line: i + 1,
                column: 1,
                message: format!("{e}"),
            })?;
        if fields.len() != 4 || fields.iter().any(|v| !v.is_finite()) {
            return Err(Error::Parse {
                path: origin.to_path_buf(),
                line: i + 1,
                column: 1,
                message: format!("expected 4 finite numbers, got {}", fields.len()),
            });
        }
        pairs.push(([fields[0], fields[1]], [fields[2], fields[3]]));
    }
    Ok(ControlPointSet::new(pairs))
}

pub fn load_control_points(path: impl AsRef<Path>) -> Result<ControlPointSet> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_control_points(&text, path)
}

pub fn format_control_points(cps: &ControlPointSet) -> String {
    let mut out = String::from("# front_x front_y rear_x rear_y\n");
    for (f, r) in &cps.pairs {
        out.push_str(&format!("{} {} {} {}\n", f[0], f[1], r[0], r[1]));
    }
    out
}
