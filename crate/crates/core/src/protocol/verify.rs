//! Exhaustive branch suites and closed-form oracles.
//!
//! Every suite post-selects each reachable `(bell, helper outcomes)` branch
//! for every secret and checks the corrected receiver qubit against it.

use serde::{Deserialize, Serialize};

use super::{
    alice_bell_measure, analytic_collapse, build_chi, build_secret, compose_system, reduced_state,
    run_protocol, Agent, OutcomeClass, OutcomeSource, ProtocolError, Scenario, SecretSpec,
};
use crate::qmath::{Basis, BellOutcome, Selector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Bob,
    Charlie,
    DianaZz,
    /// Both helpers measure in X; only `delivered`'s outcome reaches Diana.
    DianaX {
        delivered: Agent,
    },
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Bob,
        Suite::Charlie,
        Suite::DianaZz,
        Suite::DianaX {
            delivered: Agent::Bob,
        },
        Suite::DianaX {
            delivered: Agent::Charlie,
        },
    ];

    pub fn label(self) -> &'static str {
        match self {
            Suite::Bob => "Bob",
            Suite::Charlie => "Charlie",
            Suite::DianaZz => "Diana-ZZ",
            Suite::DianaX {
                delivered: Agent::Bob,
            } => "Diana-X (B delivered)",
            Suite::DianaX { .. } => "Diana-X (C delivered)",
        }
    }

    pub fn scenario(self) -> Scenario {
        let built = match self {
            Suite::Bob => Ok(Scenario::new(Agent::Bob)),
            Suite::Charlie => Ok(Scenario::new(Agent::Charlie)),
            Suite::DianaZz => Ok(Scenario::new(Agent::Diana)),
            Suite::DianaX { delivered } => {
                let dropped = if delivered == Agent::Bob {
                    Agent::Charlie
                } else {
                    Agent::Bob
                };
                Scenario::new(Agent::Diana)
                    .with_basis(Agent::Bob, Basis::X)
                    .and_then(|s| s.with_basis(Agent::Charlie, Basis::X))
                    .and_then(|s| s.with_dropped(dropped))
            }
        };
        built.expect("suite scenarios are valid")
    }

    /// Helper outcome pairs with nonzero probability. X outcomes of Bob and
    /// Charlie always agree.
    fn helper_outcomes(self) -> Vec<[u8; 2]> {
        match self {
            Suite::DianaX { .. } => vec![[0, 0], [1, 1]],
            _ => vec![[0, 0], [0, 1], [1, 0], [1, 1]],
        }
    }

    pub fn branches_per_secret(self) -> usize {
        4 * self.helper_outcomes().len()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchFailure {
    pub receiver: Agent,
    pub bell: BellOutcome,
    pub outcomes: [u8; 2],
    pub secret_index: usize,
    pub fidelity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checked: usize,
    pub passed: usize,
    /// Largest `|1 - fidelity|` seen.
    pub max_deviation: f64,
    pub first_failure: Option<BranchFailure>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.passed == self.checked
    }
}

/// Run one suite over `secrets`; a branch passes when `|1 - F| <= tolerance`.
pub fn run_suite(
    suite: Suite,
    secrets: &[SecretSpec],
    tolerance: f64,
) -> Result<SuiteReport, ProtocolError> {
    let scenario = suite.scenario();
    let mut report = SuiteReport {
        suite,
        checked: 0,
        passed: 0,
        max_deviation: 0.0,
        first_failure: None,
    };
    for (i, secret) in secrets.iter().enumerate() {
        for bell in BellOutcome::ALL {
            for helpers in suite.helper_outcomes() {
                let t = run_protocol(&scenario, secret, OutcomeSource::Forced { bell, helpers })?;
                let dev = (1.0 - t.fidelity).abs();
                report.checked += 1;
                report.max_deviation = report.max_deviation.max(dev);
                if dev <= tolerance {
                    report.passed += 1;
                } else if report.first_failure.is_none() {
                    report.first_failure = Some(BranchFailure {
                        receiver: scenario.receiver(),
                        bell,
                        outcomes: helpers,
                        secret_index: i,
                        fidelity: t.fidelity,
                    });
                }
            }
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub name: String,
    pub checked: usize,
    pub passed: usize,
    pub max_deviation: f64,
}

impl OracleReport {
    fn new(name: &str) -> Self {
        Self {
            name: name.into(),
            checked: 0,
            passed: 0,
            max_deviation: 0.0,
        }
    }

    fn record(&mut self, dev: f64, tolerance: f64) {
        self.checked += 1;
        self.max_deviation = self.max_deviation.max(dev);
        if dev <= tolerance {
            self.passed += 1;
        }
    }

    pub fn ok(&self) -> bool {
        self.passed == self.checked
    }
}

fn collapse(
    secret: &SecretSpec,
    bell: BellOutcome,
) -> Result<crate::qmath::StateVector, ProtocolError> {
    let system = compose_system(&build_secret(secret)?, &build_chi())?;
    Ok(alice_bell_measure(&system, Selector::Forced(bell))?.2)
}

/// Simulated Bell collapse against the closed-form `B, C, D` states, up to
/// global phase. One check per `(secret, outcome)`.
pub fn collapse_oracle(
    secrets: &[SecretSpec],
    tolerance: f64,
) -> Result<OracleReport, ProtocolError> {
    let mut r = OracleReport::new("collapse");
    for secret in secrets {
        for bell in BellOutcome::ALL {
            let dev = collapse(secret, bell)?
                .max_deviation_up_to_phase(&analytic_collapse(bell, secret))?;
            r.record(dev, tolerance);
        }
    }
    Ok(r)
}

/// Partial traces of the collapse states against the closed-form reduced
/// states of Bob, Charlie and Diana. One check per `(secret, outcome, agent)`.
pub fn density_oracle(
    secrets: &[SecretSpec],
    tolerance: f64,
) -> Result<OracleReport, ProtocolError> {
    let mut r = OracleReport::new("density");
    for secret in secrets {
        for bell in BellOutcome::ALL {
            let state = collapse(secret, bell)?;
            for agent in Agent::RECEIVERS {
                let simulated = state.partial_trace(&[agent.qubit()])?;
                let expected = reduced_state(OutcomeClass::of(bell), secret, agent)?;
                r.record(simulated.max_abs_diff(&expected), tolerance);
            }
        }
    }
    Ok(r)
}

/// Same magnitudes as `secret` with both amplitudes real, so `λ` is real.
pub fn real_lambda_variant(secret: &SecretSpec) -> SecretSpec {
    SecretSpec::from_amplitudes(secret.alpha().norm().into(), secret.beta().norm().into())
        .expect("magnitudes of a normalized secret are normalizable")
}
