use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{
    alice_bell_measure, build_chi, build_secret, compose_system, correction_bob,
    correction_diana_x, correction_diana_zz, Agent, Correction, ProtocolError, SecretSpec,
    SECRET_QUBIT,
};
use crate::qmath::{Basis, BellOutcome, Selector};

/// Who receives, how each helper measures, and whose messages arrive.
///
/// Helpers are the two non-receiver agents among Bob, Charlie and Diana, in
/// register order (see [`Agent::helpers_of`]).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scenario {
    receiver: Agent,
    bases: [Basis; 2],
    delivered: [bool; 2],
}

/// Which correction table a valid scenario uses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Plan {
    /// Bob or Charlie receives; both other agents report Z outcomes.
    BobCharlieZ,
    /// Diana receives; Bob and Charlie both report Z outcomes.
    DianaZZ,
    /// Diana receives; every delivered helper measured in X.
    DianaX { sources: Vec<Agent> },
}

impl Scenario {
    /// All helpers measure in Z and every message is delivered.
    pub fn new(receiver: Agent) -> Self {
        Self {
            receiver,
            bases: [Basis::Z; 2],
            delivered: [true; 2],
        }
    }

    fn slot(&self, agent: Agent) -> Result<usize, ProtocolError> {
        self.helpers()
            .iter()
            .position(|&a| a == agent)
            .filter(|_| self.receiver != Agent::Alice)
            .ok_or(ProtocolError::NotAHelper {
                agent,
                receiver: self.receiver,
            })
    }

    pub fn with_basis(mut self, agent: Agent, basis: Basis) -> Result<Self, ProtocolError> {
        let i = self.slot(agent)?;
        self.bases[i] = basis;
        Ok(self)
    }

    pub fn with_dropped(mut self, agent: Agent) -> Result<Self, ProtocolError> {
        let i = self.slot(agent)?;
        self.delivered[i] = false;
        Ok(self)
    }

    pub fn receiver(&self) -> Agent {
        self.receiver
    }

    pub fn helpers(&self) -> [Agent; 2] {
        self.receiver.helpers_of()
    }

    pub fn bases(&self) -> [Basis; 2] {
        self.bases
    }

    pub fn delivered(&self) -> [bool; 2] {
        self.delivered
    }

    /// Check the scenario against the access structure and pick a table.
    pub fn plan(&self) -> Result<Plan, ProtocolError> {
        let [h0, h1] = self.helpers();
        match self.receiver {
            Agent::Alice => Err(ProtocolError::InvalidCoalition(
                "Alice is the dealer and cannot be the receiver".into(),
            )),
            Agent::Bob | Agent::Charlie => {
                if let Some(i) = (0..2).find(|&i| !self.delivered[i]) {
                    return Err(ProtocolError::InvalidCoalition(format!(
                        "{} needs both {h0} and {h1} to cooperate, but {}'s outcome was not delivered",
                        self.receiver,
                        self.helpers()[i]
                    )));
                }
                if let Some(i) = (0..2).find(|&i| self.bases[i] != Basis::Z) {
                    return Err(ProtocolError::InvalidCoalition(format!(
                        "{} needs Z-basis outcomes from {h0} and {h1}, but {} measured in {}",
                        self.receiver,
                        self.helpers()[i],
                        self.bases[i]
                    )));
                }
                Ok(Plan::BobCharlieZ)
            }
            Agent::Diana => {
                let delivered: Vec<usize> = (0..2).filter(|&i| self.delivered[i]).collect();
                match delivered.as_slice() {
                    [] => Err(ProtocolError::InvalidCoalition(
                        "Diana needs at least one of Bob or Charlie to cooperate, but no outcome was delivered"
                            .into(),
                    )),
                    [i] => {
                        if self.bases[*i] == Basis::X {
                            Ok(Plan::DianaX {
                                sources: vec![self.helpers()[*i]],
                            })
                        } else {
                            Err(ProtocolError::InvalidCoalition(format!(
                                "with only {}'s outcome delivered, Diana needs it measured in X, not Z",
                                self.helpers()[*i]
                            )))
                        }
                    }
                    _ => match self.bases {
                        [Basis::Z, Basis::Z] => Ok(Plan::DianaZZ),
                        [Basis::X, Basis::X] => Ok(Plan::DianaX {
                            sources: vec![h0, h1],
                        }),
                        _ => Err(ProtocolError::InvalidCoalition(
                            "Diana has no correction table for one Z and one X outcome; use matching bases or drop the Z outcome"
                                .into(),
                        )),
                    },
                }
            }
        }
    }
}

/// Where measurement outcomes come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutcomeSource {
    /// Post-select one branch: Alice's outcome plus one bit per helper in
    /// register order (X basis: 0 = `+`).
    Forced { bell: BellOutcome, helpers: [u8; 2] },
    /// Born-rule sampling from a `ChaCha8Rng` with this seed.
    Seeded(u64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HelperEvent {
    pub agent: Agent,
    pub basis: Basis,
    pub outcome: u8,
    pub delivered: bool,
}

/// Full record of one protocol run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtocolTranscript {
    pub receiver: Agent,
    pub secret: SecretSpec,
    pub bell: BellOutcome,
    pub helper_events: Vec<HelperEvent>,
    pub correction: Correction,
    pub fidelity: f64,
    pub branch_probability: f64,
    pub rng_seed: Option<u64>,
}

/// Execute the protocol end to end: compose, Bell-measure, measure helpers,
/// correct the receiver's qubit and score it against the secret.
pub fn run_protocol(
    scenario: &Scenario,
    spec: &SecretSpec,
    source: OutcomeSource,
) -> Result<ProtocolTranscript, ProtocolError> {
    let plan = scenario.plan()?;
    let secret = build_secret(spec)?;
    let system = compose_system(&secret, &build_chi())?;

    let (mut rng, rng_seed) = match source {
        OutcomeSource::Seeded(seed) => (Some(ChaCha8Rng::seed_from_u64(seed)), Some(seed)),
        OutcomeSource::Forced { .. } => (None, None),
    };

    let bell_selector = match (&source, rng.as_mut()) {
        (OutcomeSource::Forced { bell, .. }, _) => Selector::Forced(*bell),
        (_, Some(r)) => Selector::Sample(r as &mut dyn RngCore),
        (OutcomeSource::Seeded(_), None) => unreachable!("seeded source always has an rng"),
    };
    let (bell, p_bell, mut state) = alice_bell_measure(&system, bell_selector)?;
    let mut branch_probability = p_bell;

    let mut helper_events = Vec::with_capacity(2);
    let mut outcomes = [0u8; 2];
    for (i, agent) in scenario.helpers().into_iter().enumerate() {
        let selector = match (&source, rng.as_mut()) {
            (OutcomeSource::Forced { helpers, .. }, _) => Selector::Forced(helpers[i]),
            (_, Some(r)) => Selector::Sample(r as &mut dyn RngCore),
            (OutcomeSource::Seeded(_), None) => unreachable!("seeded source always has an rng"),
        };
        let m = state.measure(agent.qubit(), scenario.bases[i], selector)?;
        branch_probability *= m.prob;
        outcomes[i] = m.outcome;
        state = m.collapsed;
        helper_events.push(HelperEvent {
            agent,
            basis: scenario.bases[i],
            outcome: m.outcome,
            delivered: scenario.delivered[i],
        });
    }

    let correction = match &plan {
        Plan::BobCharlieZ => correction_bob(bell, outcomes[0], outcomes[1]),
        Plan::DianaZZ => correction_diana_zz(bell, outcomes[0], outcomes[1]),
        Plan::DianaX { sources } => {
            let reported: Vec<u8> = sources
                .iter()
                .map(|a| outcomes[scenario.helpers().iter().position(|h| h == a).unwrap()])
                .collect();
            if let [b, c] = reported[..] {
                if b != c {
                    return Err(ProtocolError::XOutcomeDisagreement { bob: b, charlie: c });
                }
            }
            correction_diana_x(bell, reported[0])
        }
    };

    let receiver_qubit = scenario.receiver.qubit();
    let recovered = state
        .apply_single(receiver_qubit, &correction.matrix())?
        .relabel(receiver_qubit, SECRET_QUBIT)?;
    let fidelity = recovered.fidelity_pure(&secret)?;

    Ok(ProtocolTranscript {
        receiver: scenario.receiver,
        secret: *spec,
        bell,
        helper_events,
        correction,
        fidelity,
        branch_probability,
        rng_seed,
    })
}
