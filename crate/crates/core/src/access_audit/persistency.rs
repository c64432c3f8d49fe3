//! Single-measurement disentanglement test: the channel state versus a
//! four-qubit GHZ state.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64 as C64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::AuditError;
use crate::protocol::build_chi;
use crate::qmath::{Basis, Selector, StateVector, IMPOSSIBLE_PROB};
use crate::rng::stream;

/// Residual entanglement threshold (bits) the channel must keep.
pub const PERSISTENT_ENTROPY: f64 = 0.5;
/// Entropy below which a GHZ residual counts as a product state.
pub const PRODUCT_ENTROPY: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PersistencyRecord {
    pub state: String,
    pub qubit: char,
    /// `"Z"` or `"haar-<k>"`.
    pub basis: String,
    pub outcome: u8,
    pub prob: f64,
    /// Largest entropy over all bipartitions of the residual.
    pub max_entropy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PersistencyReport {
    pub n_random_bases: usize,
    pub seed: u64,
    pub chi: Vec<PersistencyRecord>,
    pub ghz: Vec<PersistencyRecord>,
    /// Minimum over all channel measurements of the residual's max entropy.
    pub chi_min_max_entropy: f64,
    /// Maximum entropy over all GHZ residual bipartitions.
    pub ghz_max_entropy: f64,
    pub chi_stays_entangled: bool,
    pub ghz_disentangled: bool,
}

pub fn ghz4() -> StateVector {
    let mut amps = vec![C64::new(0.0, 0.0); 16];
    amps[0] = C64::new(FRAC_1_SQRT_2, 0.0);
    amps[15] = C64::new(FRAC_1_SQRT_2, 0.0);
    StateVector::from_amplitudes(vec!['1', '2', '3', '4'], amps).expect("GHZ state is normalized")
}

/// Haar-random orthonormal single-qubit basis.
fn haar_basis<R: Rng + ?Sized>(rng: &mut R) -> [[C64; 2]; 2] {
    loop {
        let mut g = || -> f64 { rng.sample(StandardNormal) };
        let a = C64::new(g(), g());
        let b = C64::new(g(), g());
        let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
        if n > 1e-12 {
            let (a, b) = (a / n, b / n);
            return [[a, b], [-b.conj(), a.conj()]];
        }
    }
}

fn residual_records(
    name: &str,
    state: &StateVector,
    qubit: char,
    basis: &str,
    kets: [[C64; 2]; 2],
) -> Result<Vec<PersistencyRecord>, AuditError> {
    let probs = state.projective_probabilities(qubit, kets)?;
    let mut out = Vec::new();
    for bit in 0..2u8 {
        if probs[usize::from(bit)] <= IMPOSSIBLE_PROB {
            continue;
        }
        let m = state.measure_projective(qubit, kets, Selector::Forced(bit))?;
        let max_entropy = m
            .collapsed
            .bipartite_entropies()?
            .into_iter()
            .map(|(_, e)| e)
            .fold(0.0, f64::max);
        out.push(PersistencyRecord {
            state: name.to_string(),
            qubit,
            basis: basis.to_string(),
            outcome: bit,
            prob: m.prob,
            max_entropy,
        });
    }
    Ok(out)
}

/// Measure each qubit of the channel once, in Z and in `n_random_bases`
/// Haar-random bases, and check the residual stays entangled; measure each
/// GHZ qubit in Z and check the residual is a product state.
pub fn persistency_check(
    n_random_bases: usize,
    seed: u64,
) -> Result<PersistencyReport, AuditError> {
    let chi = build_chi();
    let mut rng = stream(seed, 0);
    let mut chi_records = Vec::new();
    for &q in chi.labels() {
        chi_records.extend(residual_records("chi", &chi, q, "Z", Basis::Z.kets())?);
        for k in 0..n_random_bases {
            let kets = haar_basis(&mut rng);
            chi_records.extend(residual_records(
                "chi",
                &chi,
                q,
                &format!("haar-{k}"),
                kets,
            )?);
        }
    }

    let ghz = ghz4();
    let mut ghz_records = Vec::new();
    for &q in ghz.labels() {
        ghz_records.extend(residual_records("ghz", &ghz, q, "Z", Basis::Z.kets())?);
    }

    let chi_min_max_entropy = chi_records
        .iter()
        .map(|r| r.max_entropy)
        .fold(f64::INFINITY, f64::min);
    let ghz_max_entropy = ghz_records
        .iter()
        .map(|r| r.max_entropy)
        .fold(0.0, f64::max);
    Ok(PersistencyReport {
        n_random_bases,
        seed,
        chi_stays_entangled: chi_min_max_entropy > PERSISTENT_ENTROPY,
        ghz_disentangled: ghz_max_entropy < PRODUCT_ENTROPY,
        chi: chi_records,
        ghz: ghz_records,
        chi_min_max_entropy,
        ghz_max_entropy,
    })
}
