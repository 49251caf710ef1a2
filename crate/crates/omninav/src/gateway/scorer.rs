//! Scorer endpoint: external scorers connect, introduce themselves with a
//! `hello`, then answer `score_req` frames. [`GatewayScorer`] routes a
//! control-loop scoring call to the registered connection for its id and
//! falls back to a local scorer on timeout, error or absence.

use std::collections::HashMap;
use std::io::{BufReader, BufWriter};
use std::net::{Shutdown, SocketAddr, TcpListener, TcpStream};
use std::sync::atomic::{AtomicU32, AtomicU64, Ordering};
use std::sync::mpsc::{self, Receiver, RecvTimeoutError, Sender};
use std::sync::{Arc, Mutex};
use std::thread;
use std::time::{Duration, Instant};

use base64::Engine;
use omninav_core::{Scorer, ScorerError, SliceContext};

use super::frame::{read_frame, write_frame, FrameError};
use super::protocol::{ScorerMessage, SlicePayload, PROTOCOL_VERSION};
use crate::imageio::encode_png;

pub const DEFAULT_SCORER_PORT: u16 = 7471;
pub const DEFAULT_TIMEOUT: Duration = Duration::from_millis(100);
/// Consecutive timeouts after which a connection is dropped.
pub const MAX_MISSES: u32 = 3;
const HELLO_TIMEOUT: Duration = Duration::from_secs(2);

/// One registered external scorer connection.
pub struct RemoteScorer {
    id: String,
    peer: Option<SocketAddr>,
    writer: Mutex<BufWriter<TcpStream>>,
    responses: Mutex<Receiver<ScorerMessage>>,
    next_id: AtomicU64,
    misses: AtomicU32,
}

#[derive(Debug)]
enum RemoteError {
    Timeout,
    Gone,
    Refused(String),
    BadLength(usize),
}

impl std::fmt::Display for RemoteError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RemoteError::Timeout => f.write_str("timed out"),
            RemoteError::Gone => f.write_str("connection lost"),
            RemoteError::Refused(m) => write!(f, "scorer error: {m}"),
            RemoteError::BadLength(n) => write!(f, "wrong score count {n}"),
        }
    }
}

impl RemoteScorer {
    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn peer(&self) -> Option<SocketAddr> {
        self.peer
    }

    fn score(&self, instruction: &str, payload: SlicePayload, n: usize, timeout: Duration) -> Result<Vec<f64>, RemoteError> {
        let deadline = Instant::now() + timeout;
        let id = self.next_id.fetch_add(1, Ordering::Relaxed);
        let req = ScorerMessage::ScoreReq {
            id,
            instruction: instruction.to_owned(),
            n_split: n,
            payload,
        };
        write_frame(&mut *self.writer.lock().unwrap(), &req).map_err(|_| RemoteError::Gone)?;
        let rx = self.responses.lock().unwrap();
        loop {
            let left = deadline.saturating_duration_since(Instant::now());
            match rx.recv_timeout(left) {
                Ok(ScorerMessage::ScoreResp { id: rid, scores, .. }) if rid == id => {
                    return if scores.len() == n {
                        Ok(scores)
                    } else {
                        Err(RemoteError::BadLength(scores.len()))
                    };
                }
                Ok(ScorerMessage::Error { id: Some(rid), message }) if rid == id => {
                    return Err(RemoteError::Refused(message));
                }
                // late answer to an earlier request, or chatter
                Ok(_) => continue,
                Err(RecvTimeoutError::Timeout) => return Err(RemoteError::Timeout),
                Err(RecvTimeoutError::Disconnected) => return Err(RemoteError::Gone),
            }
        }
    }

    fn close(&self) {
        if let Ok(w) = self.writer.lock() {
            let _ = w.get_ref().shutdown(Shutdown::Both);
        }
    }
}

/// Live external scorers by id. A new registration replaces the old one.
#[derive(Default)]
pub struct ScorerRegistry {
    conns: Mutex<HashMap<String, Arc<RemoteScorer>>>,
}

impl ScorerRegistry {
    pub fn new() -> Arc<Self> {
        Arc::new(Self::default())
    }

    pub fn get(&self, id: &str) -> Option<Arc<RemoteScorer>> {
        self.conns.lock().unwrap().get(id).cloned()
    }

    pub fn ids(&self) -> Vec<String> {
        let mut ids: Vec<String> = self.conns.lock().unwrap().keys().cloned().collect();
        ids.sort();
        ids
    }

    fn insert(&self, remote: Arc<RemoteScorer>) {
        if let Some(old) = self.conns.lock().unwrap().insert(remote.id.clone(), remote) {
            old.close();
        }
    }

    /// Drop `remote` if it is still the registered connection for its id.
    pub fn evict(&self, remote: &Arc<RemoteScorer>) {
        let mut conns = self.conns.lock().unwrap();
        if conns.get(&remote.id).is_some_and(|r| Arc::ptr_eq(r, remote)) {
            conns.remove(&remote.id);
        }
        drop(conns);
        remote.close();
    }
}

/// Accept scorer connections on `listener` forever, on a background thread.
pub fn serve_scorer_endpoint(listener: TcpListener, registry: Arc<ScorerRegistry>) -> thread::JoinHandle<()> {
    thread::spawn(move || {
        for stream in listener.incoming() {
            let Ok(stream) = stream else { continue };
            let registry = registry.clone();
            thread::spawn(move || {
                let _ = handshake(stream, &registry);
            });
        }
    })
}

fn reject(stream: &TcpStream, message: String) {
    let mut w = stream;
    let _ = write_frame(&mut w, &ScorerMessage::Error { id: None, message });
    let _ = stream.shutdown(Shutdown::Both);
}

fn handshake(stream: TcpStream, registry: &Arc<ScorerRegistry>) -> std::io::Result<()> {
    stream.set_nodelay(true)?;
    stream.set_read_timeout(Some(HELLO_TIMEOUT))?;
    let mut reader = BufReader::new(stream.try_clone()?);
    let scorer_id = match read_frame::<ScorerMessage>(&mut reader) {
        Ok(ScorerMessage::Hello { v, scorer_id }) if v == PROTOCOL_VERSION => scorer_id,
        Ok(ScorerMessage::Hello { v, .. }) => {
            reject(&stream, format!("unsupported protocol version {v}, expected {PROTOCOL_VERSION}"));
            return Ok(());
        }
        Ok(_) => {
            reject(&stream, "expected hello".into());
            return Ok(());
        }
        Err(e) => {
            reject(&stream, e.to_string());
            return Ok(());
        }
    };
    stream.set_read_timeout(None)?;
    let mut w = &stream;
    write_frame(
        &mut w,
        &ScorerMessage::Hello {
            v: PROTOCOL_VERSION,
            scorer_id: "gateway".into(),
        },
    )
    .map_err(|e| std::io::Error::other(e.to_string()))?;

    let (tx, rx) = mpsc::channel();
    let remote = Arc::new(RemoteScorer {
        id: scorer_id,
        peer: stream.peer_addr().ok(),
        writer: Mutex::new(BufWriter::new(stream.try_clone()?)),
        responses: Mutex::new(rx),
        next_id: AtomicU64::new(1),
        misses: AtomicU32::new(0),
    });
    registry.insert(remote.clone());
    pump(reader, tx, &stream);
    registry.evict(&remote);
    Ok(())
}

/// Forward frames to the waiting scorer until EOF or a malformed frame.
fn pump(mut reader: BufReader<TcpStream>, tx: Sender<ScorerMessage>, stream: &TcpStream) {
    loop {
        match read_frame::<ScorerMessage>(&mut reader) {
            Ok(msg) => {
                if tx.send(msg).is_err() {
                    return;
                }
            }
            Err(FrameError::Io(_)) => return,
            Err(e) => {
                reject(stream, e.to_string());
                return;
            }
        }
    }
}

/// Encode what the scorer should look at.
pub fn payload_for(ctx: &SliceContext<'_>) -> SlicePayload {
    match ctx {
        SliceContext::Visibility(v) => SlicePayload::Visibility { summary: (*v).clone() },
        SliceContext::Pixels { crops, .. } => SlicePayload::Pixels {
            slices: crops
                .iter()
                .map(|img| base64::engine::general_purpose::STANDARD.encode(encode_png(img)))
                .collect(),
        },
    }
}

/// Scorer that prefers the registered external scorer with the same id and
/// otherwise answers with `fallback`. A fallback answer after a failed
/// remote call reports `degraded`, so the profile is flagged stale.
pub struct GatewayScorer {
    fallback: Box<dyn Scorer + Send>,
    registry: Arc<ScorerRegistry>,
    timeout: Duration,
    degraded: bool,
    /// Why the last remote call failed, if it did.
    pub last_failure: Option<String>,
}

impl GatewayScorer {
    pub fn new(fallback: Box<dyn Scorer + Send>, registry: Arc<ScorerRegistry>) -> Self {
        GatewayScorer {
            fallback,
            registry,
            timeout: DEFAULT_TIMEOUT,
            degraded: false,
            last_failure: None,
        }
    }

    pub fn with_timeout(mut self, timeout: Duration) -> Self {
        self.timeout = timeout;
        self
    }
}

impl Scorer for GatewayScorer {
    fn id(&self) -> &str {
        self.fallback.id()
    }

    fn raw_scores(&mut self, instruction: &str, ctx: &SliceContext<'_>) -> Result<Vec<f64>, ScorerError> {
        self.degraded = false;
        if let Some(remote) = self.registry.get(self.fallback.id()) {
            match remote.score(instruction, payload_for(ctx), ctx.n_slices(), self.timeout) {
                Ok(scores) => {
                    remote.misses.store(0, Ordering::Relaxed);
                    self.last_failure = None;
                    return Ok(scores);
                }
                Err(err) => {
                    let evict = match err {
                        RemoteError::Timeout => remote.misses.fetch_add(1, Ordering::Relaxed) + 1 >= MAX_MISSES,
                        RemoteError::Gone => true,
                        RemoteError::Refused(_) | RemoteError::BadLength(_) => false,
                    };
                    if evict {
                        self.registry.evict(&remote);
                    }
                    self.last_failure = Some(err.to_string());
                    self.degraded = true;
                }
            }
        }
        self.fallback.raw_scores(instruction, ctx)
    }

    fn degraded(&self) -> bool {
        self.degraded
    }
}
