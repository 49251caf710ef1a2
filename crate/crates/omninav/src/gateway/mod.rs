//! Network boundary: external scorers and live session observers.

pub mod frame;
pub mod protocol;
pub mod scorer;
pub mod session;

pub use protocol::{Command, ScorerMessage, SessionHello, SessionMessage, SlicePayload, Snapshot, PROTOCOL_VERSION};
pub use scorer::{serve_scorer_endpoint, GatewayScorer, ScorerRegistry, DEFAULT_SCORER_PORT};
pub use session::{serve_session, SessionConfig, SessionHandle, DEFAULT_SESSION_PORT};

/// Port from `var` if set and valid, else `default`.
pub fn port_from_env(var: &str, default: u16) -> u16 {
    std::env::var(var).ok().and_then(|v| v.trim().parse().ok()).unwrap_or(default)
}
