//! Exact dense linear algebra for registers of at most a handful of qubits.
//!
//! Qubit order is most-significant-first: bit `n - 1 - i` of an amplitude
//! index belongs to `labels[i]`.

mod density;
mod eigen;
mod ops;
mod state;

use std::fmt;

use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use density::DensityMatrix;
pub use ops::{EulerAngles, SingleQubitOp};
pub use state::{BellMeasurement, Measurement, StateVector};

/// Tolerance for identities that hold exactly in exact arithmetic.
pub const EXACT_TOL: f64 = 1e-12;

/// Outcomes with a Born probability at or below this are treated as impossible.
pub const IMPOSSIBLE_PROB: f64 = 1e-15;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QmathError {
    #[error("duplicate qubit label '{0}'")]
    DuplicateLabel(char),
    #[error("unknown qubit label '{0}'")]
    UnknownLabel(char),
    #[error("{qubits} qubit(s) need {expected} amplitudes, got {got}")]
    LengthMismatch {
        qubits: usize,
        expected: usize,
        got: usize,
    },
    #[error("state has zero norm")]
    ZeroNorm,
    #[error("non-finite amplitude or operator entry")]
    NonFinite,
    #[error("outcome {outcome} has probability {prob:e} and cannot occur")]
    ImpossibleOutcome { outcome: String, prob: f64 },
    #[error("invalid subsystem: {0}")]
    InvalidSubsystem(String),
    #[error("registers differ: {0:?} vs {1:?}")]
    RegisterMismatch(Vec<char>, Vec<char>),
}

/// Single-qubit projective measurement basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    /// `{|0>, |1>}`
    Z,
    /// `{|+>, |->}`, outcome 0 is `|+>`
    X,
}

impl Basis {
    pub const ALL: [Basis; 2] = [Basis::Z, Basis::X];

    /// Basis kets; index is the outcome bit.
    pub fn kets(self) -> [[num_complex::Complex64; 2]; 2] {
        use num_complex::Complex64 as C;
        match self {
            Basis::Z => [
                [C::new(1.0, 0.0), C::new(0.0, 0.0)],
                [C::new(0.0, 0.0), C::new(1.0, 0.0)],
            ],
            Basis::X => {
                let h = std::f64::consts::FRAC_1_SQRT_2;
                [
                    [C::new(h, 0.0), C::new(h, 0.0)],
                    [C::new(h, 0.0), C::new(-h, 0.0)],
                ]
            }
        }
    }

    /// Human-readable symbol for an outcome in this basis.
    pub fn outcome_symbol(self, bit: u8) -> &'static str {
        match (self, bit) {
            (Basis::Z, 0) => "0",
            (Basis::Z, _) => "1",
            (Basis::X, 0) => "+",
            (Basis::X, _) => "-",
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Basis::Z => "Z",
            Basis::X => "X",
        })
    }
}

/// Two-qubit Bell basis.
///
/// `Psi±` pair equal bits, `Phi±` pair unequal bits:
/// `Psi± = (|00> ± |11>)/√2`, `Phi± = (|01> ± |10>)/√2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BellOutcome {
    #[serde(rename = "Psi+")]
    PsiPlus,
    #[serde(rename = "Psi-")]
    PsiMinus,
    #[serde(rename = "Phi+")]
    PhiPlus,
    #[serde(rename = "Phi-")]
    PhiMinus,
}

impl BellOutcome {
    pub const ALL: [BellOutcome; 4] = [
        BellOutcome::PsiPlus,
        BellOutcome::PsiMinus,
        BellOutcome::PhiPlus,
        BellOutcome::PhiMinus,
    ];

    /// Amplitudes over `|00>, |01>, |10>, |11>`.
    pub fn ket(self) -> [num_complex::Complex64; 4] {
        use num_complex::Complex64 as C;
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let (z, p, m) = (C::new(0.0, 0.0), C::new(h, 0.0), C::new(-h, 0.0));
        match self {
            BellOutcome::PsiPlus => [p, z, z, p],
            BellOutcome::PsiMinus => [p, z, z, m],
            BellOutcome::PhiPlus => [z, p, p, z],
            BellOutcome::PhiMinus => [z, p, m, z],
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn symbol(self) -> &'static str {
        match self {
            BellOutcome::PsiPlus => "Psi+",
            BellOutcome::PsiMinus => "Psi-",
            BellOutcome::PhiPlus => "Phi+",
            BellOutcome::PhiMinus => "Phi-",
        }
    }
}

impl fmt::Display for BellOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// How a measurement picks its outcome.
pub enum Selector<'r, T> {
    /// Post-select this outcome; fails if it has (numerically) zero probability.
    Forced(T),
    /// Draw from the Born distribution.
    Sample(&'r mut dyn RngCore),
}

impl<T: Copy + PartialEq> Selector<'_, T> {
    /// Resolve against outcome probabilities listed in `outcomes` order.
    pub(crate) fn choose(
        &mut self,
        outcomes: &[T],
        probs: &[f64],
        describe: impl Fn(T) -> String,
    ) -> Result<(T, f64), QmathError> {
        match self {
            Selector::Forced(t) => {
                let t = *t;
                let prob = outcomes
                    .iter()
                    .position(|o| *o == t)
                    .map_or(0.0, |i| probs[i]);
                if prob <= IMPOSSIBLE_PROB {
                    return Err(QmathError::ImpossibleOutcome {
                        outcome: describe(t),
                        prob,
                    });
                }
                Ok((t, prob))
            }
            Selector::Sample(rng) => {
                let u: f64 = rng.random();
                let total: f64 = probs.iter().sum();
                let mut acc = 0.0;
                let mut last = None;
                for (i, &p) in probs.iter().enumerate() {
                    if p <= IMPOSSIBLE_PROB {
                        continue;
                    }
                    acc += p / total;
                    last = Some(i);
                    if u < acc {
                        return Ok((outcomes[i], p));
                    }
                }
                let i = last.ok_or(QmathError::ZeroNorm)?;
                Ok((outcomes[i], probs[i]))
            }
        }
    }
}
