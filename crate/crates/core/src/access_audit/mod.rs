//! Access-structure audit.
//!
//! For a coalition (receiver plus cooperating helpers) the audit searches
//! over helper measurement bases in `{Z, X}` and outcome-conditioned
//! recovery unitaries for the best average reconstruction fidelity. Helpers
//! outside the coalition send nothing, so their qubits are traced out.

mod optimize;
mod persistency;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::parallel::Execution;
use crate::protocol::{
    build_chi, build_secret, compose_system, Agent, ProtocolError, SecretSpec, SECRET_QUBIT,
};
use crate::qmath::{
    Basis, BellOutcome, DensityMatrix, EulerAngles, QmathError, Selector, SingleQubitOp,
    IMPOSSIBLE_PROB,
};
use crate::rng::stream;

pub use optimize::{INITIAL_STEP, MAX_EVALS, MIN_STEP};
pub use persistency::{persistency_check, PersistencyRecord, PersistencyReport};

use optimize::{branch_objective, maximize, BranchSample};

/// Smallest secret sample accepted by [`audit_access`].
pub const MIN_SECRETS: usize = 32;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AuditError {
    #[error("invalid coalition: {0}")]
    InvalidCoalition(String),
    #[error("audit needs at least {MIN_SECRETS} secrets, got {0}")]
    TooFewSecrets(usize),
    #[error("strategy gives no basis for helper {0}")]
    MissingBasis(Agent),
    #[error("strategy has no recovery for branch {bell} with helper outcomes {outcomes:?}")]
    UncoveredBranch {
        bell: BellOutcome,
        outcomes: Vec<u8>,
    },
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
    #[error(transparent)]
    Qmath(#[from] QmathError),
}

/// A receiver and the helpers who send it their outcomes. Alice's Bell
/// outcome is always available.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Coalition {
    receiver: Agent,
    helpers: BTreeSet<Agent>,
}

impl Coalition {
    pub fn new(
        receiver: Agent,
        helpers: impl IntoIterator<Item = Agent>,
    ) -> Result<Self, AuditError> {
        if receiver == Agent::Alice {
            return Err(AuditError::InvalidCoalition("Alice cannot receive".into()));
        }
        let helpers: BTreeSet<Agent> = helpers.into_iter().collect();
        let allowed = receiver.helpers_of();
        if let Some(bad) = helpers.iter().find(|h| !allowed.contains(h)) {
            return Err(AuditError::InvalidCoalition(format!(
                "{bad} cannot help {receiver}"
            )));
        }
        Ok(Self { receiver, helpers })
    }

    /// All 12 coalitions: three receivers, each with every subset of its
    /// two possible helpers.
    pub fn all() -> Vec<Coalition> {
        Agent::RECEIVERS
            .iter()
            .flat_map(|&r| {
                let [h0, h1] = r.helpers_of();
                [vec![], vec![h0], vec![h1], vec![h0, h1]]
                    .into_iter()
                    .map(move |hs| Coalition::new(r, hs).expect("valid by construction"))
            })
            .collect()
    }

    pub fn receiver(&self) -> Agent {
        self.receiver
    }

    /// Helpers in register order.
    pub fn helpers(&self) -> Vec<Agent> {
        self.helpers.iter().copied().collect()
    }

    pub fn is_subset_of(&self, other: &Coalition) -> bool {
        self.receiver == other.receiver && self.helpers.is_subset(&other.helpers)
    }

    pub fn swap_bob_charlie(&self) -> Coalition {
        Coalition {
            receiver: self.receiver.swap_bob_charlie(),
            helpers: self.helpers.iter().map(|a| a.swap_bob_charlie()).collect(),
        }
    }
}

impl fmt::Display for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let hs: Vec<String> = self.helpers.iter().map(|a| a.qubit().to_string()).collect();
        write!(f, "({}, {{{}}})", self.receiver, hs.join(", "))
    }
}

/// Recovery unitary for one outcome branch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchRecovery {
    pub bell: BellOutcome,
    /// One bit per coalition helper, in register order.
    pub helper_outcomes: Vec<u8>,
    pub angles: EulerAngles,
}

/// Helper bases plus a recovery unitary per outcome branch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Strategy {
    pub bases: Vec<(Agent, Basis)>,
    pub recovery: Vec<BranchRecovery>,
}

impl Strategy {
    /// Build a strategy from a function giving the recovery unitary for each
    /// `(bell, helper outcomes)` branch; every combination is filled in.
    pub fn from_fn(
        bases: Vec<(Agent, Basis)>,
        f: impl Fn(BellOutcome, &[u8]) -> SingleQubitOp,
    ) -> Self {
        let k = bases.len();
        let recovery = BellOutcome::ALL
            .iter()
            .flat_map(|&bell| {
                (0..1usize << k).map(move |m| {
                    let outs: Vec<u8> = (0..k).map(|j| ((m >> (k - 1 - j)) & 1) as u8).collect();
                    (bell, outs)
                })
            })
            .map(|(bell, outs)| BranchRecovery {
                bell,
                angles: f(bell, &outs).euler_angles(),
                helper_outcomes: outs,
            })
            .collect();
        Self { bases, recovery }
    }

    pub fn basis_of(&self, agent: Agent) -> Option<Basis> {
        self.bases
            .iter()
            .find(|(a, _)| *a == agent)
            .map(|(_, b)| *b)
    }

    pub fn recovery_for(&self, bell: BellOutcome, outcomes: &[u8]) -> Option<SingleQubitOp> {
        self.recovery
            .iter()
            .find(|r| r.bell == bell && r.helper_outcomes == outcomes)
            .map(|r| SingleQubitOp::from_euler(r.angles))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditResult {
    pub coalition: Coalition,
    pub best_avg_fidelity: f64,
    pub best_strategy: Strategy,
    pub n_secret_samples: usize,
    pub optimizer_iterations: usize,
}

/// The receiver's reduced state in one outcome branch.
#[derive(Debug, Clone)]
struct Branch {
    bell: BellOutcome,
    outcomes: Vec<u8>,
    weight: f64,
    rho: DensityMatrix,
}

/// Enumerate every reachable branch for one secret: Alice's four outcomes
/// times each coalition helper's two outcomes.
fn branches(
    coalition: &Coalition,
    bases: &[(Agent, Basis)],
    secret: &SecretSpec,
) -> Result<Vec<Branch>, AuditError> {
    let system = compose_system(&build_secret(secret)?, &build_chi())?;
    let receiver = coalition.receiver.qubit();
    let mut out = Vec::new();
    for bell in BellOutcome::ALL {
        let m = system.measure_bell(SECRET_QUBIT, Agent::Alice.qubit(), Selector::Forced(bell))?;
        let mut frontier = vec![(m.collapsed, m.prob, Vec::new())];
        for &(agent, basis) in bases {
            let mut next = Vec::new();
            for (state, p, outs) in frontier {
                let probs = state.outcome_probabilities(agent.qubit(), basis)?;
                for bit in 0..2u8 {
                    if probs[usize::from(bit)] <= IMPOSSIBLE_PROB {
                        continue;
                    }
                    let mm = state.measure(agent.qubit(), basis, Selector::Forced(bit))?;
                    let mut o: Vec<u8> = outs.clone();
                    o.push(bit);
                    next.push((mm.collapsed, p * mm.prob, o));
                }
            }
            frontier = next;
        }
        for (state, weight, outcomes) in frontier {
            out.push(Branch {
                bell,
                outcomes,
                weight,
                rho: state.partial_trace(&[receiver])?,
            });
        }
    }
    Ok(out)
}

fn resolve_bases(
    coalition: &Coalition,
    strategy: &Strategy,
) -> Result<Vec<(Agent, Basis)>, AuditError> {
    coalition
        .helpers()
        .into_iter()
        .map(|a| {
            strategy
                .basis_of(a)
                .map(|b| (a, b))
                .ok_or(AuditError::MissingBasis(a))
        })
        .collect()
}

/// Mean over `secrets` of the Born-weighted branch fidelity
/// `⟨ξ| U ρ U† |ξ⟩` achieved by `strategy`.
pub fn avg_fidelity(
    coalition: &Coalition,
    strategy: &Strategy,
    secrets: &[SecretSpec],
) -> Result<f64, AuditError> {
    let bases = resolve_bases(coalition, strategy)?;
    let mut total = 0.0;
    for secret in secrets {
        let target = [secret.alpha(), secret.beta()];
        for br in branches(coalition, &bases, secret)? {
            let u = strategy
                .recovery_for(br.bell, &br.outcomes)
                .ok_or_else(|| AuditError::UncoveredBranch {
                    bell: br.bell,
                    outcomes: br.outcomes.clone(),
                })?;
            total += br.weight * br.rho.conjugate_by(&u).expectation(&target);
        }
    }
    Ok(total / secrets.len() as f64)
}

/// The secret sample an audit with this seed uses.
pub fn audit_secrets(n_secrets: usize, seed: u64) -> Vec<SecretSpec> {
    SecretSpec::haar_batch(&mut stream(seed, 0), n_secrets)
}

fn basis_configurations(helpers: &[Agent]) -> Vec<Vec<(Agent, Basis)>> {
    let k = helpers.len();
    (0..1usize << k)
        .map(|m| {
            helpers
                .iter()
                .enumerate()
                .map(|(j, &a)| (a, Basis::ALL[(m >> (k - 1 - j)) & 1]))
                .collect()
        })
        .collect()
}

fn as_array(rho: &DensityMatrix) -> [[C64; 2]; 2] {
    [
        [rho.get(0, 0), rho.get(0, 1)],
        [rho.get(1, 0), rho.get(1, 1)],
    ]
}

/// Best average fidelity for a coalition over `{Z, X}` helper bases and
/// per-branch recovery unitaries. Deterministic in `(coalition, n_secrets, seed)`.
pub fn audit_access(
    coalition: &Coalition,
    n_secrets: usize,
    seed: u64,
) -> Result<AuditResult, AuditError> {
    if n_secrets < MIN_SECRETS {
        return Err(AuditError::TooFewSecrets(n_secrets));
    }
    let secrets = audit_secrets(n_secrets, seed);
    let mut best: Option<(f64, Strategy, usize)> = None;

    for bases in basis_configurations(&coalition.helpers()) {
        let mut grouped: BTreeMap<(BellOutcome, Vec<u8>), Vec<BranchSample>> = BTreeMap::new();
        for secret in &secrets {
            let target = [secret.alpha(), secret.beta()];
            for br in branches(coalition, &bases, secret)? {
                let rho = as_array(&br.rho);
                grouped
                    .entry((br.bell, br.outcomes))
                    .or_default()
                    .push(BranchSample {
                        weight: br.weight,
                        rho,
                        target,
                    });
            }
        }

        let mut total = 0.0;
        let mut evals = 0;
        let mut recovery = Vec::with_capacity(grouped.len());
        for ((bell, outcomes), samples) in grouped {
            let opt = maximize(|u| branch_objective(&samples, u));
            total += opt.value;
            evals += opt.evaluations;
            recovery.push(BranchRecovery {
                bell,
                helper_outcomes: outcomes,
                angles: opt.angles,
            });
        }
        let value = total / n_secrets as f64;
        if best.as_ref().is_none_or(|(v, _, _)| value > *v) {
            best = Some((value, Strategy { bases, recovery }, evals));
        }
    }

    let (best_avg_fidelity, best_strategy, optimizer_iterations) =
        best.expect("at least one basis configuration");
    Ok(AuditResult {
        coalition: coalition.clone(),
        best_avg_fidelity,
        best_strategy,
        n_secret_samples: n_secrets,
        optimizer_iterations,
    })
}

/// Audit of all 12 coalitions, ranked by fidelity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HierarchyReport {
    pub n_secrets: usize,
    pub seed: u64,
    pub results: Vec<AuditResult>,
}

/// Fidelity treated as "reconstructs" when at least this close to 1.
pub const RECONSTRUCTS_TOL: f64 = 1e-6;
/// Fidelity ceiling for coalitions that must not reconstruct.
pub const NEGATIVE_CEILING: f64 = 0.95;

pub fn hierarchy_report(
    n_secrets: usize,
    seed: u64,
    exec: Execution,
) -> Result<HierarchyReport, AuditError> {
    let coalitions = Coalition::all();
    let results: Vec<AuditResult> = exec
        .map_slice(&coalitions, |c| audit_access(c, n_secrets, seed))
        .into_iter()
        .collect::<Result<_, _>>()?;
    let mut ranked: Vec<(usize, AuditResult)> = results.into_iter().enumerate().collect();
    // ties within 1e-9 keep coalition order
    ranked.sort_by(|(ia, a), (ib, b)| {
        let qa = (a.best_avg_fidelity * 1e9).round();
        let qb = (b.best_avg_fidelity * 1e9).round();
        qb.total_cmp(&qa).then(ia.cmp(ib))
    });
    Ok(HierarchyReport {
        n_secrets,
        seed,
        results: ranked.into_iter().map(|(_, r)| r).collect(),
    })
}

impl HierarchyReport {
    pub fn get(&self, coalition: &Coalition) -> Option<&AuditResult> {
        self.results.iter().find(|r| &r.coalition == coalition)
    }

    /// Whether a coalition is expected to reconstruct: Diana with at least
    /// one helper, or Bob/Charlie with both.
    pub fn expected_to_reconstruct(coalition: &Coalition) -> bool {
        match coalition.receiver() {
            Agent::Diana => !coalition.helpers.is_empty(),
            _ => coalition.helpers.len() == 2,
        }
    }

    /// Rows that contradict the access structure or monotonicity.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for r in &self.results {
            let f = r.best_avg_fidelity;
            if Self::expected_to_reconstruct(&r.coalition) {
                if f < 1.0 - RECONSTRUCTS_TOL {
                    out.push(format!(
                        "{} should reconstruct, best fidelity {f:.9}",
                        r.coalition
                    ));
                }
            } else if f > NEGATIVE_CEILING {
                out.push(format!(
                    "{} should not reconstruct, best fidelity {f:.9}",
                    r.coalition
                ));
            }
        }
        for a in &self.results {
            for b in &self.results {
                if a.coalition != b.coalition
                    && a.coalition.is_subset_of(&b.coalition)
                    && b.best_avg_fidelity < a.best_avg_fidelity - 1e-9
                {
                    out.push(format!(
                        "monotonicity: {} = {:.9} exceeds superset {} = {:.9}",
                        a.coalition, a.best_avg_fidelity, b.coalition, b.best_avg_fidelity
                    ));
                }
            }
        }
        out
    }
}
