//! Receiver correction tables.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::ProtocolError;
use crate::qmath::{BellOutcome, SingleQubitOp};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gate {
    I,
    /// σx
    X,
    /// σz
    Z,
    /// Hadamard
    H,
}

impl Gate {
    pub fn matrix(self) -> SingleQubitOp {
        match self {
            Gate::I => SingleQubitOp::identity(),
            Gate::X => SingleQubitOp::pauli_x(),
            Gate::Z => SingleQubitOp::pauli_z(),
            Gate::H => SingleQubitOp::hadamard(),
        }
    }

    fn symbol(self) -> char {
        match self {
            Gate::I => 'I',
            Gate::X => 'X',
            Gate::Z => 'Z',
            Gate::H => 'H',
        }
    }
}

/// A word over `{I, X, Z, H}` written left to right and applied right to
/// left, so `XZH` means H first, then Z, then X.
///
/// Two corrections are equivalent when their matrices agree up to a global
/// phase; `PartialEq` compares the literal word.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Correction {
    word: Vec<Gate>,
}

impl Correction {
    pub fn new(word: Vec<Gate>) -> Self {
        if word.is_empty() {
            Self {
                word: vec![Gate::I],
            }
        } else {
            Self { word }
        }
    }

    pub fn identity() -> Self {
        Self::new(vec![Gate::I])
    }

    pub fn word(&self) -> &[Gate] {
        &self.word
    }

    pub fn matrix(&self) -> SingleQubitOp {
        self.word
            .iter()
            .fold(SingleQubitOp::identity(), |acc, g| acc * g.matrix())
    }

    pub fn equiv(&self, other: &Correction) -> bool {
        self.matrix().equiv_up_to_phase(&other.matrix(), 1e-12)
    }

    pub fn ends_in_hadamard(&self) -> bool {
        self.word.last() == Some(&Gate::H)
    }
}

impl fmt::Display for Correction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.word {
            write!(f, "{}", g.symbol())?;
        }
        Ok(())
    }
}

impl FromStr for Correction {
    type Err = ProtocolError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let word = s
            .chars()
            .map(|ch| match ch {
                'I' => Ok(Gate::I),
                'X' => Ok(Gate::X),
                'Z' => Ok(Gate::Z),
                'H' => Ok(Gate::H),
                other => Err(ProtocolError::InvalidCorrection(format!(
                    "unknown generator '{other}' in \"{s}\""
                ))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        if word.is_empty() {
            return Err(ProtocolError::InvalidCorrection("empty word".into()));
        }
        Ok(Self::new(word))
    }
}

impl From<Correction> for String {
    fn from(c: Correction) -> String {
        c.to_string()
    }
}

impl TryFrom<String> for Correction {
    type Error = ProtocolError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

fn word(s: &str) -> Correction {
    s.parse().expect("table words are well formed")
}

/// Bob's correction after Charlie and Diana report Z outcomes `(c, d)`.
/// Also Charlie's table with Bob's outcome in place of `c`.
pub fn correction_bob(bell: BellOutcome, c_out: u8, d_out: u8) -> Correction {
    use BellOutcome::*;
    let w = match (bell, c_out & 1, d_out & 1) {
        (PsiPlus, 0, 0) => "I",
        (PsiPlus, 0, 1) => "XZ",
        (PsiPlus, 1, 0) => "X",
        (PsiPlus, 1, 1) => "Z",
        (PsiMinus, 0, 0) => "Z",
        (PsiMinus, 0, 1) => "X",
        (PsiMinus, 1, 0) => "XZ",
        (PsiMinus, 1, 1) => "I",
        (PhiPlus, 0, 0) => "X",
        (PhiPlus, 0, 1) => "Z",
        (PhiPlus, 1, 0) => "I",
        (PhiPlus, 1, 1) => "XZ",
        (PhiMinus, 0, 0) => "XZ",
        (PhiMinus, 0, 1) => "I",
        (PhiMinus, 1, 0) => "Z",
        (PhiMinus, 1, 1) => "X",
        _ => unreachable!("outcome bits are masked to 0 or 1"),
    };
    word(w)
}

/// Diana's correction when Bob and Charlie both report Z outcomes; only the
/// parity `b ⊕ c` matters.
pub fn correction_diana_zz(bell: BellOutcome, b_out: u8, c_out: u8) -> Correction {
    use BellOutcome::*;
    let differ = (b_out ^ c_out) & 1 == 1;
    let w = match (bell, differ) {
        (PsiPlus, false) => "I",
        (PsiPlus, true) => "XZ",
        (PsiMinus, false) => "Z",
        (PsiMinus, true) => "X",
        (PhiPlus, false) => "X",
        (PhiPlus, true) => "Z",
        (PhiMinus, false) => "XZ",
        (PhiMinus, true) => "I",
    };
    word(w)
}

/// Diana's correction from a single X-basis outcome (0 = `+`, 1 = `-`) of
/// either Bob or Charlie.
pub fn correction_diana_x(bell: BellOutcome, x_out: u8) -> Correction {
    use BellOutcome::*;
    let minus = x_out & 1 == 1;
    let w = match (bell, minus) {
        (PsiPlus, false) => "XH",
        (PsiPlus, true) => "ZH",
        (PsiMinus, false) => "XZH",
        (PsiMinus, true) => "H",
        (PhiPlus, false) => "H",
        (PhiPlus, true) => "XZH",
        (PhiMinus, false) => "ZH",
        (PhiMinus, true) => "XH",
    };
    word(w)
}
