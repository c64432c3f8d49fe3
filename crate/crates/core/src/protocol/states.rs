use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::{Agent, ProtocolError, SecretSpec, SECRET_QUBIT};
use crate::qmath::{BellOutcome, DensityMatrix, Selector, StateVector};

/// The two three-qubit branches of the channel, on `(B, C, D)`:
/// returns `(phi0, phi1)`.
pub fn channel_branches() -> ([C64; 8], [C64; 8]) {
    let q = C64::new(0.5, 0.0);
    let z = C64::new(0.0, 0.0);
    // index = 4b + 2c + d
    let phi0 = [q, z, z, -q, z, -q, q, z];
    let phi1 = [z, q, q, z, q, z, z, q];
    (phi0, phi1)
}

fn bcd_labels() -> Vec<char> {
    vec![
        Agent::Bob.qubit(),
        Agent::Charlie.qubit(),
        Agent::Diana.qubit(),
    ]
}

/// Four-qubit channel `(|0>|phi0> + |1>|phi1>)/√2` on `A, B, C, D`.
pub fn build_chi() -> StateVector {
    let (phi0, phi1) = channel_branches();
    let amps = phi0.iter().chain(phi1.iter()).copied().collect();
    let mut labels = vec![Agent::Alice.qubit()];
    labels.extend(bcd_labels());
    StateVector::from_amplitudes(labels, amps).expect("channel state is well formed")
}

/// The secret on qubit `S`.
pub fn build_secret(spec: &SecretSpec) -> Result<StateVector, ProtocolError> {
    if !spec.is_normalized() {
        return Err(ProtocolError::InvalidSecret(
            "secret is not normalized".into(),
        ));
    }
    Ok(StateVector::from_amplitudes(
        vec![SECRET_QUBIT],
        vec![spec.alpha(), spec.beta()],
    )?)
}

/// `secret ⊗ channel`, labels `S, A, B, C, D`.
pub fn compose_system(
    secret: &StateVector,
    channel: &StateVector,
) -> Result<StateVector, ProtocolError> {
    Ok(secret.tensor(channel)?)
}

/// Alice's Bell measurement on `(S, A)`; returns the outcome, its
/// probability and the collapsed state on `B, C, D`.
pub fn alice_bell_measure(
    system: &StateVector,
    selector: Selector<'_, BellOutcome>,
) -> Result<(BellOutcome, f64, StateVector), ProtocolError> {
    let m = system.measure_bell(SECRET_QUBIT, Agent::Alice.qubit(), selector)?;
    Ok((m.outcome, m.prob, m.collapsed))
}

/// Closed-form post-measurement state of `B, C, D` for a Bell outcome:
/// `Psi± -> alpha phi0 ± beta phi1`, `Phi± -> alpha phi1 ± beta phi0`.
pub fn analytic_collapse(outcome: BellOutcome, spec: &SecretSpec) -> StateVector {
    let (phi0, phi1) = channel_branches();
    let (a, b) = (spec.alpha(), spec.beta());
    let (first, second, sign) = match outcome {
        BellOutcome::PsiPlus => (&phi0, &phi1, 1.0),
        BellOutcome::PsiMinus => (&phi0, &phi1, -1.0),
        BellOutcome::PhiPlus => (&phi1, &phi0, 1.0),
        BellOutcome::PhiMinus => (&phi1, &phi0, -1.0),
    };
    let amps = first
        .iter()
        .zip(second.iter())
        .map(|(x, y)| a * x + b * y * sign)
        .collect();
    StateVector::from_amplitudes(bcd_labels(), amps).expect("collapse states are normalized")
}

/// Which of the two single-particle states Diana holds after Alice's
/// announcement: `Plus` for `Psi+`/`Phi-`, `Minus` for `Psi-`/`Phi+`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutcomeClass {
    Plus,
    Minus,
}

impl OutcomeClass {
    pub fn of(outcome: BellOutcome) -> Self {
        match outcome {
            BellOutcome::PsiPlus | BellOutcome::PhiMinus => OutcomeClass::Plus,
            BellOutcome::PsiMinus | BellOutcome::PhiPlus => OutcomeClass::Minus,
        }
    }

    fn sign(self) -> f64 {
        match self {
            OutcomeClass::Plus => 1.0,
            OutcomeClass::Minus => -1.0,
        }
    }
}

/// Closed-form single-agent density matrix before any helper cooperates.
///
/// Bob and Charlie hold `I/2`. Diana holds
/// `I/2 ± i k (|1><0| - |0><1|)` with `k = Im(λ)/(1+|λ|²)`.
pub fn reduced_state(
    class: OutcomeClass,
    spec: &SecretSpec,
    agent: Agent,
) -> Result<DensityMatrix, ProtocolError> {
    match agent {
        Agent::Bob | Agent::Charlie => Ok(DensityMatrix::maximally_mixed_qubit()),
        Agent::Diana => {
            let k = class.sign() * spec.im_lambda_weight();
            let h = C64::new(0.5, 0.0);
            Ok(DensityMatrix::new(
                2,
                vec![h, C64::new(0.0, -k), C64::new(0.0, k), h],
            )?)
        }
        Agent::Alice => Err(ProtocolError::InvalidCoalition(
            "Alice holds no share after her Bell measurement".into(),
        )),
    }
}
