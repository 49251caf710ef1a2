//! `key=value` configuration files. `#` starts a comment. Later entries
//! override earlier ones; `--set key=value` on the command line goes through
//! the same path.

use std::fs;
use std::path::Path;

use omninav_core::panorama::{LensModel, Projection, Vignette};
use omninav_core::ReflexConfig;

use crate::error::{Error, Result};

pub const KEYS: &[&str] = &[
    "lens.fov_deg",
    "lens.focal",
    "lens.projection",
    "vignette.c2",
    "vignette.c4",
    "crop.top",
    "crop.height",
    "slices.n",
    "slices.overlap",
    "control.n_extract",
    "control.c_thre",
    "control.k",
    "control.tick_s",
    "gate.stop_dist",
    "gate.cone",
];

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Config {
    pub fov_deg: Option<f64>,
    pub focal: Option<f64>,
    pub projection: Option<Projection>,
    pub vignette: Vignette,
    pub crop_top: Option<usize>,
    pub crop_height: Option<usize>,
    pub n_split: Option<usize>,
    pub overlap: Option<f64>,
    pub n_extract: Option<usize>,
    pub c_thre: Option<f64>,
    pub k: Option<f64>,
    pub tick_s: Option<f64>,
    pub stop_dist: Option<f64>,
    pub cone: Option<f64>,
}

impl Config {
    pub fn set(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
        fn num<T: std::str::FromStr>(v: &str) -> std::result::Result<T, String> {
            v.parse().map_err(|_| format!("not a number: {v:?}"))
        }
        match key {
            "lens.fov_deg" => self.fov_deg = Some(num(value)?),
            "lens.focal" => self.focal = Some(num(value)?),
            "lens.projection" => {
                self.projection = Some(match value {
                    "equidistant" => Projection::Equidistant,
                    "equisolid" => Projection::Equisolid,
                    _ => return Err(format!("unknown projection {value:?}")),
                })
            }
            "vignette.c2" => self.vignette.c2 = num(value)?,
            "vignette.c4" => self.vignette.c4 = num(value)?,
            "crop.top" => self.crop_top = Some(num(value)?),
            "crop.height" => self.crop_height = Some(num(value)?),
            "slices.n" => self.n_split = Some(num(value)?),
            "slices.overlap" => self.overlap = Some(num(value)?),
            "control.n_extract" => self.n_extract = Some(num(value)?),
            "control.c_thre" => self.c_thre = Some(num(value)?),
            "control.k" => self.k = Some(num(value)?),
            "control.tick_s" => self.tick_s = Some(num(value)?),
            "gate.stop_dist" => self.stop_dist = Some(num(value)?),
            "gate.cone" => self.cone = Some(num(value)?),
            _ => return Err(format!("unknown key {key:?}")),
        }
        Ok(())
    }

    /// Apply one `key=value` assignment.
    pub fn assign(&mut self, kv: &str) -> Result<()> {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| Error::Scenario(format!("expected key=value, got {kv:?}")))?;
        self.set(k.trim(), v.trim()).map_err(Error::Scenario)
    }

    /// Overlay the control, gate and slice keys that were given.
    pub fn apply_reflex(&self, r: &mut ReflexConfig) {
        let put = |dst: &mut f64, src: Option<f64>| {
            if let Some(v) = src {
                *dst = v;
            }
        };
        if let Some(n) = self.n_split {
            r.n_split = n;
        }
        if let Some(n) = self.n_extract {
            r.n_extract = n;
        }
        put(&mut r.overlap_frac, self.overlap);
        put(&mut r.c_thre, self.c_thre);
        put(&mut r.k, self.k);
        put(&mut r.tick_s, self.tick_s);
        put(&mut r.stop_dist, self.stop_dist);
        put(&mut r.cone, self.cone);
    }

    /// Lens for fisheye images of side `size`: fitted to the image circle
    /// unless a focal length is given.
    pub fn lens(&self, size: usize) -> LensModel {
        let fov = self.fov_deg.unwrap_or(LensModel::DEFAULT_FOV_DEG).to_radians();
        let mut lens = LensModel::fitted(size, fov);
        if let Some(f) = self.focal {
            lens.focal = f;
        }
        if let Some(p) = self.projection {
            lens.projection = p;
        }
        lens
    }
}

pub fn parse_config(text: &str, origin: &Path) -> Result<Config> {
    let mut cfg = Config::default();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| Error::Parse {
            path: origin.to_path_buf(),
            line: i + 1,
            column: 1,
            message,
        };
        let (k, v) = line.split_once('=').ok_or_else(|| err("expected key=value".into()))?;
        cfg.set(k.trim(), v.trim()).map_err(err)?;
    }
    Ok(cfg)
}

pub fn load_config(path: impl AsRef<Path>) -> Result<Config> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config(&text, path)
}
