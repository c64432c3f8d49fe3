//! The hierarchical splitting protocol: channel and secret preparation,
//! Alice's Bell measurement, helper measurements, correction lookup and
//! end-to-end runs.

mod correction;
mod run;
mod secret;
mod states;
pub mod verify;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use crate::qmath::{Basis as HelperBasis, BellOutcome};
pub use correction::{correction_bob, correction_diana_x, correction_diana_zz, Correction, Gate};
pub use run::{run_protocol, HelperEvent, OutcomeSource, Plan, ProtocolTranscript, Scenario};
pub use secret::SecretSpec;
pub use states::{
    alice_bell_measure, analytic_collapse, build_chi, build_secret, channel_branches,
    compose_system, reduced_state, OutcomeClass,
};

use crate::qmath::QmathError;

/// Label of the dealer's secret qubit.
pub const SECRET_QUBIT: char = 'S';

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProtocolError {
    #[error("invalid coalition: {0}")]
    InvalidCoalition(String),
    #[error("{agent} is not a helper when {receiver} receives")]
    NotAHelper { agent: Agent, receiver: Agent },
    #[error("Bob and Charlie reported different X outcomes ({bob} vs {charlie})")]
    XOutcomeDisagreement { bob: u8, charlie: u8 },
    #[error("invalid secret: {0}")]
    InvalidSecret(String),
    #[error("invalid correction: {0}")]
    InvalidCorrection(String),
    #[error(transparent)]
    Qmath(#[from] QmathError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Agent {
    Alice,
    Bob,
    Charlie,
    Diana,
}

impl Agent {
    /// Agents that can receive the secret.
    pub const RECEIVERS: [Agent; 3] = [Agent::Bob, Agent::Charlie, Agent::Diana];

    /// Label of the channel qubit this agent holds.
    pub fn qubit(self) -> char {
        match self {
            Agent::Alice => 'A',
            Agent::Bob => 'B',
            Agent::Charlie => 'C',
            Agent::Diana => 'D',
        }
    }

    pub fn from_qubit(label: char) -> Option<Agent> {
        match label {
            'A' => Some(Agent::Alice),
            'B' => Some(Agent::Bob),
            'C' => Some(Agent::Charlie),
            'D' => Some(Agent::Diana),
            _ => None,
        }
    }

    /// The two agents other than `self` among Bob, Charlie and Diana, in
    /// register order.
    pub fn helpers_of(self) -> [Agent; 2] {
        match self {
            Agent::Bob => [Agent::Charlie, Agent::Diana],
            Agent::Charlie => [Agent::Bob, Agent::Diana],
            Agent::Diana | Agent::Alice => [Agent::Bob, Agent::Charlie],
        }
    }

    /// Swap Bob and Charlie; fixes Alice and Diana.
    pub fn swap_bob_charlie(self) -> Agent {
        match self {
            Agent::Bob => Agent::Charlie,
            Agent::Charlie => Agent::Bob,
            other => other,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Agent::Alice => "Alice",
            Agent::Bob => "Bob",
            Agent::Charlie => "Charlie",
            Agent::Diana => "Diana",
        }
    }
}

impl fmt::Display for Agent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
