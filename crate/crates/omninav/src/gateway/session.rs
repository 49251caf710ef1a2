//! Live session: one control loop owns the episode and ticks at a fixed real
//! rate; WebSocket observers get a snapshot per tick and may send commands,
//! which are applied at the next tick boundary and acknowledged once.

use std::collections::VecDeque;
use std::io;
use std::net::{SocketAddr, TcpListener, TcpStream};
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::mpsc::{self, Receiver, Sender};
use std::sync::{Arc, Mutex};
use std::thread;
use std::time::{Duration, Instant};

use omninav_core::{Pose, ReflexConfig, ScoreProfile, WorldModel};
use tungstenite::{Message, WebSocket};

use super::protocol::{Command, ScorerView, SessionHello, SessionMessage, Snapshot, PROTOCOL_VERSION};
use crate::episode::{Episode, Scorers, TickRecord};
use crate::scenario::{schedule_instruction, ScheduleEntry};

pub const DEFAULT_SESSION_PORT: u16 = 7472;
/// Snapshots queued per observer before new ones are dropped.
const SNAPSHOT_QUEUE: usize = 2;
const POLL: Duration = Duration::from_millis(5);
const PERIOD_HISTORY: usize = 256;

#[derive(Debug, Clone)]
pub struct SessionConfig {
    pub world: WorldModel,
    pub reflex: ReflexConfig,
    pub origin: Pose,
    /// Timed instructions; an operator `set_instruction` overrides them.
    pub schedule: Vec<ScheduleEntry>,
    /// Real-time loop period.
    pub period: Duration,
}

impl SessionConfig {
    pub fn new(world: WorldModel, origin: Pose) -> Self {
        SessionConfig {
            world,
            reflex: ReflexConfig::default(),
            origin,
            schedule: Vec::new(),
            period: Duration::from_millis(100),
        }
    }
}

/// Outbound queue of one observer. Acks always go in; snapshots only while
/// fewer than `SNAPSHOT_QUEUE` are waiting, so order is kept and a slow
/// reader loses snapshots, never acks.
#[derive(Clone)]
struct Outbox {
    tx: Sender<Arc<str>>,
    pending_snapshots: Arc<AtomicUsize>,
}

impl Outbox {
    fn control(&self, msg: String) {
        let _ = self.tx.send(msg.into());
    }

    /// False once the observer is gone.
    fn snapshot(&self, msg: &Arc<str>) -> bool {
        if self.pending_snapshots.load(Ordering::Acquire) >= SNAPSHOT_QUEUE {
            return true;
        }
        self.pending_snapshots.fetch_add(1, Ordering::AcqRel);
        self.tx.send(msg.clone()).is_ok()
    }
}

enum Outgoing {
    Control,
    Snapshot,
}

fn kind(msg: &str) -> Outgoing {
    if msg.starts_with(r#"{"type":"snapshot""#) {
        Outgoing::Snapshot
    } else {
        Outgoing::Control
    }
}

struct Shared {
    stop: AtomicBool,
    observers: Mutex<Vec<Outbox>>,
    periods: Mutex<VecDeque<Duration>>,
}

pub struct SessionHandle {
    addr: SocketAddr,
    shared: Arc<Shared>,
    threads: Vec<thread::JoinHandle<()>>,
}

impl SessionHandle {
    pub fn addr(&self) -> SocketAddr {
        self.addr
    }

    /// Recent measured loop periods, oldest first.
    pub fn periods(&self) -> Vec<Duration> {
        self.shared.periods.lock().unwrap().iter().copied().collect()
    }

    pub fn observers(&self) -> usize {
        self.shared.observers.lock().unwrap().len()
    }

    /// Block until the session is stopped from elsewhere (never, for the CLI).
    pub fn join(mut self) {
        for t in self.threads.drain(..) {
            let _ = t.join();
        }
    }

    pub fn stop(mut self) {
        self.shutdown();
    }

    fn shutdown(&mut self) {
        self.shared.stop.store(true, Ordering::SeqCst);
        for t in self.threads.drain(..) {
            let _ = t.join();
        }
    }
}

impl Drop for SessionHandle {
    fn drop(&mut self) {
        self.shutdown();
    }
}

/// Start the control loop and accept observers on `listener`.
pub fn serve_session(listener: TcpListener, cfg: SessionConfig, scorers: Scorers) -> crate::Result<SessionHandle> {
    let addr = listener.local_addr()?;
    listener.set_nonblocking(true)?;
    let episode = Episode::new(cfg.world.clone(), cfg.reflex, cfg.origin).map_err(crate::Error::Geometry)?;
    let hello = SessionMessage::Hello(SessionHello {
        v: PROTOCOL_VERSION,
        world: Some(cfg.world.clone()),
        origin: Some(cfg.origin),
        n_split: Some(cfg.reflex.n_split),
        tick_s: Some(cfg.reflex.tick_s),
    })
    .to_json();
    let shared = Arc::new(Shared {
        stop: AtomicBool::new(false),
        observers: Mutex::new(Vec::new()),
        periods: Mutex::new(VecDeque::with_capacity(PERIOD_HISTORY)),
    });
    let (cmd_tx, cmd_rx) = mpsc::channel();

    let accept = {
        let shared = shared.clone();
        thread::spawn(move || accept_loop(listener, shared, cmd_tx, hello))
    };
    let control = {
        let shared = shared.clone();
        let mut lp = ControlLoop {
            episode,
            scorers,
            schedule: cfg.schedule,
            operator_instruction: None,
            paused: false,
            seq: 0,
            epoch: 0,
            last: None,
        };
        let period = cfg.period;
        thread::spawn(move || lp.run(&shared, cmd_rx, period))
    };
    Ok(SessionHandle {
        addr,
        shared,
        threads: vec![accept, control],
    })
}

type Queued = (Outbox, u64, Command);

fn accept_loop(listener: TcpListener, shared: Arc<Shared>, cmd_tx: Sender<Queued>, hello: String) {
    while !shared.stop.load(Ordering::SeqCst) {
        match listener.accept() {
            Ok((stream, _)) => {
                let shared = shared.clone();
                let cmd_tx = cmd_tx.clone();
                let hello = hello.clone();
                thread::spawn(move || {
                    let _ = observer(stream, shared, cmd_tx, hello);
                });
            }
            Err(e) if e.kind() == io::ErrorKind::WouldBlock => thread::sleep(POLL),
            Err(_) => thread::sleep(POLL),
        }
    }
}

fn is_timeout(e: &tungstenite::Error) -> bool {
    matches!(e, tungstenite::Error::Io(io) if matches!(io.kind(), io::ErrorKind::WouldBlock | io::ErrorKind::TimedOut))
}

fn observer(stream: TcpStream, shared: Arc<Shared>, cmd_tx: Sender<Queued>, hello: String) -> Result<(), tungstenite::Error> {
    stream.set_nonblocking(false)?;
    stream.set_nodelay(true)?;
    let mut ws = tungstenite::accept(stream).map_err(|e| match e {
        tungstenite::HandshakeError::Failure(e) => e,
        tungstenite::HandshakeError::Interrupted(_) => tungstenite::Error::ConnectionClosed,
    })?;
    ws.get_ref().set_read_timeout(Some(POLL))?;
    ws.send(Message::text(hello))?;

    let (tx, rx) = mpsc::channel();
    let outbox = Outbox {
        tx,
        pending_snapshots: Arc::new(AtomicUsize::new(0)),
    };
    shared.observers.lock().unwrap().push(outbox.clone());
    let result = observer_loop(&mut ws, &shared, &cmd_tx, &outbox, &rx);
    let _ = ws.close(None);
    let _ = ws.flush();
    result
}

fn observer_loop(
    ws: &mut WebSocket<TcpStream>,
    shared: &Shared,
    cmd_tx: &Sender<Queued>,
    outbox: &Outbox,
    rx: &Receiver<Arc<str>>,
) -> Result<(), tungstenite::Error> {
    while !shared.stop.load(Ordering::SeqCst) {
        while let Ok(m) = rx.try_recv() {
            if let Outgoing::Snapshot = kind(&m) {
                outbox.pending_snapshots.fetch_sub(1, Ordering::AcqRel);
            }
            ws.send(Message::text(&*m))?;
        }
        match ws.read() {
            Ok(Message::Text(text)) => {
                let reply = match SessionMessage::from_json(&text) {
                    Ok(SessionMessage::Command { id, command }) => {
                        let _ = cmd_tx.send((outbox.clone(), id, command));
                        None
                    }
                    Ok(SessionMessage::Hello(h)) if h.v != PROTOCOL_VERSION => {
                        let msg = SessionMessage::Error {
                            id: None,
                            message: format!("unsupported protocol version {}, expected {PROTOCOL_VERSION}", h.v),
                        };
                        ws.send(Message::text(msg.to_json()))?;
                        return Ok(());
                    }
                    Ok(SessionMessage::Hello(_)) => None,
                    Ok(_) => Some("only hello and command are accepted from observers".to_owned()),
                    Err(e) => Some(format!("malformed message: {e}")),
                };
                if let Some(message) = reply {
                    ws.send(Message::text(SessionMessage::Error { id: None, message }.to_json()))?;
                }
            }
            Ok(Message::Close(_)) => return Ok(()),
            Ok(_) => {}
            Err(e) if is_timeout(&e) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(())
}

struct ControlLoop {
    episode: Episode,
    scorers: Scorers,
    schedule: Vec<ScheduleEntry>,
    operator_instruction: Option<String>,
    paused: bool,
    seq: u64,
    epoch: u64,
    last: Option<TickRecord>,
}

fn view(p: &Option<ScoreProfile>) -> Option<ScorerView> {
    p.as_ref().map(|p| ScorerView {
        scorer_id: p.scorer_id.clone(),
        raw: p.raw.clone(),
        a: p.transformed.clone(),
        stale: p.stale,
    })
}

impl ControlLoop {
    fn instruction(&self) -> Option<String> {
        self.operator_instruction
            .clone()
            .or_else(|| schedule_instruction(&self.schedule, self.episode.t()).map(str::to_owned))
    }

    fn apply(&mut self, command: Command) {
        match command {
            Command::SetInstruction { text } => self.operator_instruction = Some(text),
            Command::Pause => self.paused = true,
            Command::Resume => self.paused = false,
            Command::Reset => {
                self.episode.reset();
                self.last = None;
                self.epoch += 1;
            }
            Command::SetStrategy { strategy } => self.episode.config.strategy = strategy,
        }
    }

    fn snapshot(&mut self) -> Snapshot {
        self.seq += 1;
        let n = self.episode.slices.len();
        let (linear, rotate, theta, gated, e, scores, contributors) = match &self.last {
            Some(r) => (
                r.velocity.linear,
                r.velocity.rotate,
                r.theta,
                r.velocity.gated,
                r.e.clone(),
                [view(&r.clip), view(&r.detic)].into_iter().flatten().collect(),
                r.contributors.clone(),
            ),
            None => (0.0, 0.0, self.episode.reflex.previous_theta, false, vec![1.0; n], Vec::new(), Vec::new()),
        };
        Snapshot {
            seq: self.seq,
            epoch: self.epoch,
            t: self.episode.t(),
            pose: self.episode.state.pose,
            linear,
            rotate,
            theta,
            gated,
            e,
            scores,
            contributors,
            instruction: self.instruction(),
            strategy: self.episode.config.strategy,
            paused: self.paused,
        }
    }

    fn run(&mut self, shared: &Shared, commands: Receiver<Queued>, period: Duration) {
        let mut next = Instant::now();
        let mut prev: Option<Instant> = None;
        while !shared.stop.load(Ordering::SeqCst) {
            let now = Instant::now();
            if let Some(p) = prev {
                let mut periods = shared.periods.lock().unwrap();
                if periods.len() == PERIOD_HISTORY {
                    periods.pop_front();
                }
                periods.push_back(now - p);
            }
            prev = Some(now);

            while let Ok((reply, id, command)) = commands.try_recv() {
                self.apply(command);
                reply.control(SessionMessage::Ack { id }.to_json());
            }
            if !self.paused {
                let instruction = self.instruction();
                match self.episode.tick(instruction.as_deref(), &mut self.scorers) {
                    Ok(rec) => self.last = Some(rec),
                    Err(e) => {
                        let msg = SessionMessage::Error {
                            id: None,
                            message: e.to_string(),
                        }
                        .to_json();
                        for o in shared.observers.lock().unwrap().iter() {
                            o.control(msg.clone());
                        }
                    }
                }
            }
            let snap: Arc<str> = SessionMessage::Snapshot(self.snapshot()).to_json().into();
            broadcast(shared, snap);

            next += period;
            let now = Instant::now();
            if next > now {
                thread::sleep(next - now);
            } else {
                // overran: realign rather than burst
                next = now;
            }
        }
    }
}

fn broadcast(shared: &Shared, msg: Arc<str>) {
    shared.observers.lock().unwrap().retain(|o| o.snapshot(&msg));
}
