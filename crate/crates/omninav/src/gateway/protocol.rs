//! Message schemas shared by the scorer endpoint (length-prefixed frames over
//! TCP) and the session endpoint (WebSocket text messages). Every message is
//! a JSON object with a `type` tag; unknown fields are ignored.
//!
//! Scorer side, byte-exact examples:
//!
//! ```text
//! {"type":"hello","v":1,"scorer_id":"clip"}
//! {"type":"score_req","id":7,"instruction":"Go to the kitchen","n_split":2,"payload":{"kind":"pixels","slices":["iVBORw0K...","iVBORw0K..."]}}
//! {"type":"score_resp","id":7,"scores":[0.21,0.18],"scorer_id":"clip","latency_ms":12.5}
//! {"type":"error","id":7,"message":"model not loaded"}
//! ```
//!
//! Session side:
//!
//! ```text
//! {"type":"hello","v":1}
//! {"type":"command","id":3,"command":{"op":"set_instruction","text":"Check the microwave oven"}}
//! {"type":"command","id":4,"command":{"op":"set_strategy","strategy":"clip"}}
//! {"type":"ack","id":3}
//! {"type":"snapshot","seq":12,"epoch":0,"t":1.2,"pose":{"x":1.25,"y":0.8,"yaw":0.0},...}
//! ```

use omninav_core::{Pose, Strategy, VisibilitySummary, WorldModel};
use serde::{Deserialize, Serialize};

pub const PROTOCOL_VERSION: u32 = 1;

/// Per-slice input shipped to an external scorer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SlicePayload {
    /// One base64-encoded PNG per slice.
    Pixels { slices: Vec<String> },
    Visibility { summary: VisibilitySummary },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ScorerMessage {
    Hello {
        v: u32,
        scorer_id: String,
    },
    ScoreReq {
        id: u64,
        instruction: String,
        n_split: usize,
        payload: SlicePayload,
    },
    ScoreResp {
        id: u64,
        scores: Vec<f64>,
        scorer_id: String,
        latency_ms: f64,
    },
    Error {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        id: Option<u64>,
        message: String,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Command {
    SetInstruction { text: String },
    Pause,
    Resume,
    Reset,
    SetStrategy { strategy: Strategy },
}

/// Greeting. The server's carries the session description; a client's
/// only needs `v`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionHello {
    pub v: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub world: Option<WorldModel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub origin: Option<Pose>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_split: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tick_s: Option<f64>,
}

impl SessionHello {
    pub fn client() -> Self {
        SessionHello {
            v: PROTOCOL_VERSION,
            world: None,
            origin: None,
            n_split: None,
            tick_s: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScorerView {
    pub scorer_id: String,
    pub raw: Vec<f64>,
    /// Transformed scores `a`.
    pub a: Vec<f64>,
    pub stale: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    /// Strictly increasing per session.
    pub seq: u64,
    /// Bumped by every reset; `t` is monotone within an epoch.
    pub epoch: u64,
    pub t: f64,
    pub pose: Pose,
    pub linear: f64,
    pub rotate: f64,
    pub theta: f64,
    pub gated: bool,
    pub e: Vec<f64>,
    pub scores: Vec<ScorerView>,
    pub contributors: Vec<(usize, f64)>,
    pub instruction: Option<String>,
    pub strategy: Strategy,
    pub paused: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum SessionMessage {
    Hello(SessionHello),
    Snapshot(Snapshot),
    Command { id: u64, command: Command },
    Ack { id: u64 },
    Error {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        id: Option<u64>,
        message: String,
    },
}

impl SessionMessage {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("session messages always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}
