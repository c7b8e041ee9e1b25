//! Client side of the line-oriented LID protocol (version 1).
//!
//! The backend prints `LIDPROTO 1` once at startup. Each request is one line
//! of space-separated words; the answer is one line with exactly one `ID` or
//! `EN` label per word. Closing the request stream ends the session.

use std::io::{BufRead, BufReader, Write};
use std::process::{Child, ChildStdin, ChildStdout, Command, Stdio};

use super::{LabelSource, LanguageTag, LidBackend, WordVerdict};
use crate::error::{Error, Result};
use crate::textnorm::Token;

pub const PROTOCOL_HANDSHAKE: &str = "LIDPROTO 1";

/// A session with an external LID backend.
///
/// Generic over the streams so tests can drive it in memory; [`spawn`]
/// builds the usual child-process session.
///
/// [`spawn`]: ExternalSession::spawn
pub struct ExternalSession<R = BufReader<ChildStdout>, W = ChildStdin> {
    reader: R,
    writer: Option<W>,
    child: Option<Child>,
    line: String,
}

impl ExternalSession {
    /// Starts `program` with `args` and completes the handshake.
    pub fn spawn<S: AsRef<str>>(program: &str, args: &[S]) -> Result<Self> {
        let mut child = Command::new(program)
            .args(args.iter().map(AsRef::as_ref))
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::inherit())
            .spawn()
            .map_err(|e| Error::Transport(format!("cannot start {program:?}: {e}")))?;
        let stdin = child.stdin.take().expect("piped stdin");
        let stdout = child.stdout.take().expect("piped stdout");
        let mut session = ExternalSession::from_streams(BufReader::new(stdout), stdin);
        session.child = Some(child);
        session.handshake()?;
        Ok(session)
    }
}

impl<R: BufRead, W: Write> ExternalSession<R, W> {
    /// Wraps already-connected streams. Call [`handshake`] before use.
    ///
    /// [`handshake`]: ExternalSession::handshake
    pub fn from_streams(reader: R, writer: W) -> Self {
        ExternalSession {
            reader,
            writer: Some(writer),
            child: None,
            line: String::new(),
        }
    }

    /// Reads and checks the backend's greeting line.
    pub fn handshake(&mut self) -> Result<()> {
        self.line.clear();
        let n = self
            .reader
            .read_line(&mut self.line)
            .map_err(|e| Error::Handshake(format!("reading greeting: {e}")))?;
        if n == 0 {
            return Err(Error::Handshake("backend closed before greeting".into()));
        }
        let greeting = self.line.trim_end_matches(['\n', '\r']);
        if greeting != PROTOCOL_HANDSHAKE {
            return Err(Error::Handshake(format!(
                "expected {PROTOCOL_HANDSHAKE:?}, got {greeting:?}"
            )));
        }
        Ok(())
    }

    /// Sends one request line and parses the labels of the reply.
    pub fn request(&mut self, words: &[&str]) -> Result<Vec<LanguageTag>> {
        if let Some(bad) = words.iter().find(|w| w.is_empty() || w.contains(char::is_whitespace)) {
            return Err(Error::Input(format!("cannot send word {bad:?} over the protocol")));
        }
        let writer = self
            .writer
            .as_mut()
            .ok_or_else(|| Error::Transport("session already closed".into()))?;
        let mut request = words.join(" ");
        request.push('\n');
        writer
            .write_all(request.as_bytes())
            .and_then(|_| writer.flush())
            .map_err(|e| Error::Transport(format!("writing request: {e}")))?;

        self.line.clear();
        let n = self
            .reader
            .read_line(&mut self.line)
            .map_err(|e| Error::Transport(format!("reading response: {e}")))?;
        if n == 0 {
            return Err(Error::Transport("backend closed the session".into()));
        }
        let reply = self.line.trim_end_matches(['\n', '\r']);
        let labels = reply
            .split(' ')
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse::<LanguageTag>()
                    .map_err(|_| Error::Protocol(format!("unknown label {s:?} in reply {reply:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if labels.len() != words.len() {
            return Err(Error::Protocol(format!(
                "{} labels for {} words in reply {reply:?}",
                labels.len(),
                words.len()
            )));
        }
        Ok(labels)
    }

    /// Labels the word tokens of `tokens`. Punctuation and numerals are not
    /// sent.
    pub fn roundtrip(&mut self, tokens: &[Token]) -> Result<Vec<LanguageTag>> {
        let words: Vec<&str> = tokens
            .iter()
            .filter(|t| t.is_word())
            .map(|t| t.surface.as_str())
            .collect();
        if words.is_empty() {
            return Ok(Vec::new());
        }
        self.request(&words)
    }

    /// Closes the request stream and waits for the backend to exit.
    pub fn close(&mut self) -> Result<()> {
        self.writer.take();
        if let Some(mut child) = self.child.take() {
            child
                .wait()
                .map_err(|e| Error::Transport(format!("waiting for backend: {e}")))?;
        }
        Ok(())
    }
}

impl<R, W> Drop for ExternalSession<R, W> {
    fn drop(&mut self) {
        self.writer.take();
        if let Some(mut child) = self.child.take() {
            let _ = child.wait();
        }
    }
}

impl<R: BufRead, W: Write> LidBackend for ExternalSession<R, W> {
    fn label_words(&mut self, words: &[&str]) -> Result<Vec<WordVerdict>> {
        Ok(self
            .request(words)?
            .into_iter()
            .map(|lang| WordVerdict::Decided {
                lang,
                confidence: 1.0,
                source: LabelSource::External,
            })
            .collect())
    }
}
