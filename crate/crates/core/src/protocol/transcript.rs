use super::PermutationTag;
use crate::error::Result;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::io::Write;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Noverify,
    Verify,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sender {
    Alice,
    Bob,
}

/// Run metadata carried on the first line of a transcript file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunMeta {
    pub config_hash: String,
    pub version: String,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Event {
    pub round: u64,
    pub sender: Sender,
    pub kind: String,
    pub payload_hash: String,
    pub alice_private: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub meta: Option<RunMeta>,
}

pub fn payload_hash(payload: &str) -> String {
    hex::encode(Sha256::digest(payload.as_bytes()))
}

/// Alice's secrets; never part of what Bob sees.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AliceSecrets {
    pub permutation: Option<PermutationTag>,
    /// Final Phase-1 frame as interleaved (x, z) bits per position.
    pub q: Option<Vec<bool>>,
    pub outcomes: Vec<u8>,
    pub flag: Option<u8>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Transcript {
    pub variant: Variant,
    pub n_qubits: usize,
    pub seed: u64,
    pub events: Vec<Event>,
    pub secrets: AliceSecrets,
}

impl Transcript {
    pub fn new(variant: Variant, n_qubits: usize, seed: u64) -> Self {
        Self { variant, n_qubits, seed, events: Vec::new(), secrets: AliceSecrets::default() }
    }

    fn push(&mut self, sender: Sender, kind: &str, payload: &str, alice_private: bool) {
        let round = self.events.len() as u64;
        self.events.push(Event {
            round,
            sender,
            kind: kind.to_string(),
            payload_hash: payload_hash(payload),
            alice_private,
            meta: None,
        });
    }

    /// Bob sends a qubit; `label` is Bob's own name for it.
    pub fn bob_send(&mut self, label: &str) {
        self.push(Sender::Bob, "send", label, false);
    }

    /// Bob's own local action (preparation, attack), visible to him.
    pub fn bob_local(&mut self, kind: &str, payload: &str) {
        self.push(Sender::Bob, kind, payload, false);
    }

    pub fn alice_private(&mut self, kind: &str, payload: &str) {
        self.push(Sender::Alice, kind, payload, true);
    }

    pub fn bob_view(&self) -> BobView {
        BobView { n_qubits_sent: self.sends(), events: self.events.iter().filter(|e| !e.alice_private).cloned().collect() }
    }

    fn sends(&self) -> usize {
        self.events.iter().filter(|e| e.kind == "send").count()
    }

    /// JSON lines: a metadata line, then one event per line.
    pub fn write_jsonl<W: Write>(&self, meta: &RunMeta, out: &mut W) -> Result<()> {
        let header = Event {
            round: 0,
            sender: Sender::Alice,
            kind: "run".into(),
            payload_hash: meta.config_hash.clone(),
            alice_private: true,
            meta: Some(meta.clone()),
        };
        writeln!(out, "{}", serde_json::to_string(&header)?)?;
        for e in &self.events {
            writeln!(out, "{}", serde_json::to_string(e)?)?;
        }
        Ok(())
    }
}

/// Everything Bob can ever hold about a run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BobView {
    pub n_qubits_sent: usize,
    pub events: Vec<Event>,
}

impl BobView {
    pub fn write_jsonl<W: Write>(&self, out: &mut W) -> Result<()> {
        for e in &self.events {
            writeln!(out, "{}", serde_json::to_string(e)?)?;
        }
        Ok(())
    }
}

pub fn bob_view(transcript: &Transcript) -> BobView {
    transcript.bob_view()
}
