//! Client side of the `GS1` line protocol.
//!
//! ```text
//! engine  -> adapter   GS1 <d>
//! adapter -> engine    OK <k>
//! engine  -> adapter   P <m>
//!                      <m lines of d space-separated floats>
//! adapter -> engine    <m space-separated integer labels>
//! engine  -> adapter   QUIT
//! ```
//!
//! Labels are `-1`/`1` when `k = 2`, otherwise `0..k`.

use std::io::{BufRead, BufReader, Write};
use std::process::{Child, ChildStdin, Command, Stdio};
use std::sync::mpsc::{self, Receiver, RecvTimeoutError};
use std::sync::Mutex;
use std::thread;
use std::time::{Duration, Instant};

use log::debug;

use super::Classifier;
use crate::error::ClassifierError;
use crate::types::{FeatureVector, Label};

/// Largest number of points sent in one `P` request.
pub const MAX_BATCH: usize = 65_536;

pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(30);

struct Session {
    child: Child,
    stdin: Option<ChildStdin>,
    lines: Receiver<std::io::Result<String>>,
    // Set once the pipe can no longer be trusted.
    broken: Option<String>,
}

impl Session {
    fn send(&mut self, payload: &str) -> Result<(), ClassifierError> {
        let stdin = self
            .stdin
            .as_mut()
            .ok_or_else(|| ClassifierError::ProcessDead("stdin closed".into()))?;
        stdin
            .write_all(payload.as_bytes())
            .and_then(|_| stdin.flush())
            .map_err(|e| self.fail(ClassifierError::ProcessDead(format!("write failed: {e}"))))
    }

    fn recv(&mut self, timeout: Duration) -> Result<String, ClassifierError> {
        match self.lines.recv_timeout(timeout) {
            Ok(Ok(line)) => Ok(line),
            Ok(Err(e)) => Err(self.fail(ClassifierError::ProcessDead(format!("read failed: {e}")))),
            Err(RecvTimeoutError::Timeout) => Err(self.fail(ClassifierError::Timeout(timeout))),
            Err(RecvTimeoutError::Disconnected) => {
                let status = self.child.wait().ok();
                Err(self.fail(ClassifierError::ProcessDead(match status {
                    Some(s) => format!("adapter exited ({s})"),
                    None => "adapter closed its output".into(),
                })))
            }
        }
    }

    fn fail(&mut self, err: ClassifierError) -> ClassifierError {
        self.broken = Some(err.to_string());
        err
    }

    fn shutdown(&mut self) {
        let healthy = self.broken.is_none() && self.send("QUIT\n").is_ok();
        self.stdin.take();
        let grace = if healthy { Duration::from_secs(2) } else { Duration::ZERO };
        let deadline = Instant::now() + grace;
        loop {
            match self.child.try_wait() {
                Ok(Some(_)) => return,
                Ok(None) if Instant::now() < deadline => thread::sleep(Duration::from_millis(5)),
                _ => break,
            }
        }
        let _ = self.child.kill();
        let _ = self.child.wait();
    }
}

/// A classifier served by a child process. Requests are serialized, so the
/// handle is not concurrent-safe; spawn one process per worker instead.
pub struct ExternalClassifier {
    dimension: usize,
    labels: Vec<Label>,
    timeout: Duration,
    session: Mutex<Session>,
}

impl ExternalClassifier {
    /// Starts `program` and performs the `GS1` handshake.
    pub fn spawn<S: AsRef<str>>(
        program: &str,
        args: &[S],
        dimension: usize,
        timeout: Duration,
    ) -> Result<Self, ClassifierError> {
        let mut child = Command::new(program)
            .args(args.iter().map(|a| a.as_ref()))
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::inherit())
            .spawn()
            .map_err(|e| ClassifierError::Spawn(format!("{program}: {e}")))?;
        let stdin = child.stdin.take();
        let stdout = child.stdout.take().expect("piped stdout");
        let (tx, rx) = mpsc::channel();
        thread::spawn(move || {
            for line in BufReader::new(stdout).lines() {
                if tx.send(line).is_err() {
                    break;
                }
            }
        });
        let mut session = Session {
            child,
            stdin,
            lines: rx,
            broken: None,
        };

        let handshake = (|| {
            session.send(&format!("GS1 {dimension}\n"))?;
            let reply = session.recv(timeout)?;
            parse_handshake(&reply)
        })();
        let labels = match handshake {
            Ok(labels) => labels,
            Err(e) => {
                session.broken.get_or_insert_with(|| e.to_string());
                session.shutdown();
                return Err(e);
            }
        };
        debug!("adapter {program} ready: d={dimension}, labels={labels:?}");

        Ok(Self {
            dimension,
            labels,
            timeout,
            session: Mutex::new(session),
        })
    }

    fn request(&self, session: &mut Session, chunk: &[FeatureVector]) -> Result<Vec<Label>, ClassifierError> {
        let mut payload = format!("P {}\n", chunk.len());
        for v in chunk {
            let mut first = true;
            for x in v.iter() {
                if !first {
                    payload.push(' ');
                }
                first = false;
                payload.push_str(&x.to_string());
            }
            payload.push('\n');
        }
        session.send(&payload)?;
        let reply = session.recv(self.timeout)?;
        let labels = parse_labels(&reply, chunk.len(), &self.labels);
        if let Err(e) = &labels {
            session.broken = Some(e.to_string());
        }
        labels
    }
}

fn parse_handshake(reply: &str) -> Result<Vec<Label>, ClassifierError> {
    let violation = || ClassifierError::ProtocolViolation(format!("bad handshake reply {reply:?}"));
    let k: i64 = reply
        .strip_prefix("OK ")
        .and_then(|k| k.parse().ok())
        .ok_or_else(violation)?;
    match k {
        2 => Ok(vec![Label(-1), Label(1)]),
        k if k > 2 => Ok((0..k).map(Label).collect()),
        _ => Err(violation()),
    }
}

fn parse_labels(reply: &str, expected: usize, allowed: &[Label]) -> Result<Vec<Label>, ClassifierError> {
    let labels = reply
        .split(' ')
        .map(|tok| {
            tok.parse::<i64>()
                .map(Label)
                .map_err(|_| ClassifierError::ProtocolViolation(format!("bad label token {tok:?}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if labels.len() != expected {
        return Err(ClassifierError::ProtocolViolation(format!(
            "expected {expected} labels, got {}",
            labels.len()
        )));
    }
    if let Some(l) = labels.iter().find(|l| !allowed.contains(l)) {
        return Err(ClassifierError::ProtocolViolation(format!("label {l} outside the declared set")));
    }
    Ok(labels)
}

impl Classifier for ExternalClassifier {
    fn dimension(&self) -> usize {
        self.dimension
    }

    fn labels(&self) -> &[Label] {
        &self.labels
    }

    fn concurrent_safe(&self) -> bool {
        false
    }

    fn predict(&self, batch: &[FeatureVector]) -> Result<Vec<Label>, ClassifierError> {
        if let Some(v) = batch.iter().find(|v| v.len() != self.dimension) {
            return Err(ClassifierError::DimensionMismatch {
                expected: self.dimension,
                actual: v.len(),
            });
        }
        let mut session = self.session.lock().unwrap_or_else(|p| p.into_inner());
        if let Some(reason) = &session.broken {
            return Err(ClassifierError::ProcessDead(reason.clone()));
        }
        let mut out = Vec::with_capacity(batch.len());
        for chunk in batch.chunks(MAX_BATCH) {
            out.extend(self.request(&mut session, chunk)?);
        }
        Ok(out)
    }
}

impl Drop for ExternalClassifier {
    fn drop(&mut self) {
        let session = self.session.get_mut().unwrap_or_else(|p| p.into_inner());
        session.shutdown();
    }
}
