use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    BobToAlice,
    AliceToBob,
}

/// One qubit handed from Bob to Alice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SendEvent {
    pub round: u64,
    /// Bob's name for the qubit, e.g. `"G:b1(0,1)"` or `"out:3"`.
    pub label: String,
}

/// The quantum channel resource: Bob sends, Alice receives, nothing else.
///
/// There is deliberately no method that carries anything back to Bob:
///
/// ```compile_fail
/// let mut ch = blindsim::protocol::OneWayChannel::new();
/// ch.alice_send("anything");
/// ```
#[derive(Clone, Debug, Default)]
pub struct OneWayChannel {
    log: Vec<SendEvent>,
    delivered: usize,
}

impl OneWayChannel {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_direction(direction: Direction) -> Result<Self> {
        match direction {
            Direction::BobToAlice => Ok(Self::new()),
            Direction::AliceToBob => Err(Error::Protocol("the channel only runs from Bob to Alice".into())),
        }
    }

    pub fn direction(&self) -> Direction {
        Direction::BobToAlice
    }

    /// Bob puts one qubit on the channel.
    pub fn send(&mut self, label: impl Into<String>) -> u64 {
        let round = self.log.len() as u64;
        self.log.push(SendEvent { round, label: label.into() });
        round
    }

    /// Alice takes the next qubit off the channel.
    pub fn receive(&mut self) -> Option<SendEvent> {
        let ev = self.log.get(self.delivered).cloned();
        if ev.is_some() {
            self.delivered += 1;
        }
        ev
    }

    pub fn pending(&self) -> usize {
        self.log.len() - self.delivered
    }

    pub fn log(&self) -> &[SendEvent] {
        &self.log
    }
}
