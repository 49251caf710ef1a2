//! JSON world files.
//!
//! ```json
//! {
//!   "bounds": { "min": [0, 0], "max": [2.5, 1.6] },
//!   "walls": [ { "a": [0, 0], "b": [2.5, 0] } ],
//!   "entities": [
//!     { "label": "microwave oven", "height": "tall",
//!       "shape": { "kind": "polygon", "vertices": [[0.5, 1.3], [0.9, 1.3], [0.9, 1.6], [0.5, 1.6]] } },
//!     { "label": "stool", "shape": { "kind": "disc", "center": [1.8, 0.5], "radius": 0.15 } }
//!   ],
//!   "regions": [ { "name": "kitchen", "polygon": [[0, 0], [0.45, 0], [0.45, 1.6], [0, 1.6]],
//!                  "vocab": ["kitchen", "sink"] } ],
//!   "background": ["room", "wall", "floor"]
//! }
//! ```
//!
//! Unknown fields are ignored. Walls may overlap.

use std::fs;
use std::path::Path;

use omninav_core::sim::WorldModel;

use crate::error::{Error, Result};

pub fn parse_world(text: &str, origin: &Path) -> Result<WorldModel> {
    let world: WorldModel = serde_json::from_str(text).map_err(|e| Error::parse(origin, &e))?;
    world.validate()?;
    Ok(world)
}

pub fn load_world(path: impl AsRef<Path>) -> Result<WorldModel> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_world(&text, path)
}

pub fn world_to_string(world: &WorldModel) -> String {
    serde_json::to_string_pretty(world).expect("world serializes")
}

pub fn save_world(world: &WorldModel, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, world_to_string(world) + "\n").map_err(|e| Error::io(path, e))
}
