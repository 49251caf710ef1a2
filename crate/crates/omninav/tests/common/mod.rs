#![allow(dead_code)]

use std::net::{SocketAddr, TcpListener, TcpStream};
use std::sync::Arc;
use std::thread;
use std::time::{Duration, Instant};

use omninav::gateway::frame::{read_frame, write_frame};
use omninav::gateway::{serve_scorer_endpoint, ScorerMessage, ScorerRegistry, SessionMessage, SlicePayload};
use tungstenite::{Message, WebSocket};

pub fn manifest(rel: &str) -> String {
    format!("{}/{rel}", env!("CARGO_MANIFEST_DIR"))
}

pub fn scorer_endpoint() -> (SocketAddr, Arc<ScorerRegistry>) {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let addr = listener.local_addr().unwrap();
    let registry = ScorerRegistry::new();
    serve_scorer_endpoint(listener, registry.clone());
    (addr, registry)
}

/// Connect as scorer `id`, complete the hello exchange, and return the stream.
pub fn stub_connect(addr: SocketAddr, id: &str) -> TcpStream {
    let mut s = TcpStream::connect(addr).unwrap();
    write_frame(
        &mut s,
        &ScorerMessage::Hello {
            v: 1,
            scorer_id: id.into(),
        },
    )
    .unwrap();
    match read_frame::<ScorerMessage>(&mut s).unwrap() {
        ScorerMessage::Hello { .. } => s,
        other => panic!("unexpected {other:?}"),
    }
}

/// External scorer answering every request with `answer(instruction, payload,
/// n)` after `delay`. Runs until the gateway closes the connection.
pub fn spawn_stub<F>(addr: SocketAddr, id: &str, delay: Duration, answer: F) -> thread::JoinHandle<usize>
where
    F: Fn(&str, &SlicePayload, usize) -> Vec<f64> + Send + 'static,
{
    let mut s = stub_connect(addr, id);
    let id = id.to_owned();
    thread::spawn(move || {
        let mut served = 0;
        while let Ok(msg) = read_frame::<ScorerMessage>(&mut s) {
            if let ScorerMessage::ScoreReq {
                id: rid,
                instruction,
                n_split,
                payload,
            } = msg
            {
                thread::sleep(delay);
                let resp = ScorerMessage::ScoreResp {
                    id: rid,
                    scores: answer(&instruction, &payload, n_split),
                    scorer_id: id.clone(),
                    latency_ms: delay.as_secs_f64() * 1e3,
                };
                if write_frame(&mut s, &resp).is_err() {
                    break;
                }
                served += 1;
            }
        }
        served
    })
}

pub fn wait_until(mut cond: impl FnMut() -> bool) {
    let deadline = Instant::now() + Duration::from_secs(5);
    while !cond() {
        assert!(Instant::now() < deadline, "condition not reached in 5 s");
        thread::sleep(Duration::from_millis(5));
    }
}

pub type Ws = WebSocket<TcpStream>;

pub fn ws_connect(addr: SocketAddr) -> Ws {
    let stream = TcpStream::connect(addr).unwrap();
    let (ws, _) = tungstenite::client(format!("ws://{addr}/"), stream).unwrap();
    ws
}

pub fn ws_recv(ws: &mut Ws) -> SessionMessage {
    loop {
        match ws.read().unwrap() {
            Message::Text(t) => return SessionMessage::from_json(&t).unwrap(),
            _ => continue,
        }
    }
}

pub fn ws_send(ws: &mut Ws, msg: &SessionMessage) {
    ws.send(Message::text(msg.to_json())).unwrap();
}
