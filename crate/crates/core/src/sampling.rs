//! Monte Carlo sampling of the protocol's measurement statistics.
//!
//! Each shot draws a Haar secret, samples Alice's Bell outcome and then,
//! on two copies of the collapsed state, samples Charlie and Diana in Z and
//! Bob then Charlie in X.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::parallel::Execution;
use crate::protocol::{
    alice_bell_measure, build_chi, build_secret, compose_system, Agent, SecretSpec,
};
use crate::qmath::{Basis, BellOutcome, QmathError, Selector};
use crate::rng::stream;

/// Pearson statistic against a uniform distribution, with its p-value
/// (`counts.len() - 1` degrees of freedom).
pub fn chi_square_uniform(counts: &[u64]) -> (f64, f64) {
    let total: u64 = counts.iter().sum();
    if counts.len() < 2 || total == 0 {
        return (0.0, 1.0);
    }
    let expected = total as f64 / counts.len() as f64;
    let stat: f64 = counts
        .iter()
        .map(|&o| {
            let d = o as f64 - expected;
            d * d / expected
        })
        .sum();
    (stat, chi_square_p_value(stat, counts.len() - 1))
}

pub fn chi_square_p_value(stat: f64, dof: usize) -> f64 {
    let dist = ChiSquared::new(dof as f64).expect("positive degrees of freedom");
    (1.0 - dist.cdf(stat)).clamp(0.0, 1.0)
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
struct Tally {
    bell: [u64; 4],
    /// `[bell][2 c + d]` for Z outcomes of Charlie and Diana.
    zz: [[u64; 4]; 4],
    x_same: u64,
    x_opposite: u64,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        for i in 0..4 {
            self.bell[i] += other.bell[i];
            for j in 0..4 {
                self.zz[i][j] += other.zz[i][j];
            }
        }
        self.x_same += other.x_same;
        self.x_opposite += other.x_opposite;
        self
    }
}

fn one_shot(seed: u64, shot: u64) -> Result<Tally, QmathError> {
    let mut rng = stream(seed, shot);
    let secret = SecretSpec::haar(&mut rng);
    let system = compose_system(
        &build_secret(&secret).expect("haar secrets are normalized"),
        &build_chi(),
    )
    .expect("disjoint registers");
    let (bell, _, bcd) =
        alice_bell_measure(&system, Selector::Sample(&mut rng)).map_err(|e| match e {
            crate::protocol::ProtocolError::Qmath(q) => q,
            other => unreachable!("Bell measurement only fails in qmath: {other}"),
        })?;

    let mut t = Tally::default();
    t.bell[bell.index()] += 1;

    let c = bcd.measure(Agent::Charlie.qubit(), Basis::Z, Selector::Sample(&mut rng))?;
    let d = c
        .collapsed
        .measure(Agent::Diana.qubit(), Basis::Z, Selector::Sample(&mut rng))?;
    t.zz[bell.index()][usize::from(2 * c.outcome + d.outcome)] += 1;

    let b = bcd.measure(Agent::Bob.qubit(), Basis::X, Selector::Sample(&mut rng))?;
    let cx = b
        .collapsed
        .measure(Agent::Charlie.qubit(), Basis::X, Selector::Sample(&mut rng))?;
    if b.outcome == cx.outcome {
        t.x_same += 1;
    } else {
        t.x_opposite += 1;
    }
    Ok(t)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleReport {
    pub shots: u64,
    pub seed: u64,
    pub bell_counts: BTreeMap<BellOutcome, u64>,
    pub bell_frequencies: BTreeMap<BellOutcome, f64>,
    pub bell_chi_square: f64,
    pub bell_p_value: f64,
    /// Per Bell outcome, counts of Charlie/Diana Z outcomes `00, 01, 10, 11`.
    pub zz_counts: BTreeMap<BellOutcome, [u64; 4]>,
    /// Pearson statistic of the Z outcomes against uniform within each Bell
    /// outcome (12 degrees of freedom).
    pub zz_chi_square: f64,
    pub zz_p_value: f64,
    /// Shots where Bob and Charlie got equal X outcomes.
    pub x_correlated: u64,
    /// Shots with `(+, -)` or `(-, +)`.
    pub x_anticorrelated: u64,
}

impl SampleReport {
    pub fn passes_uniformity(&self, significance: f64) -> bool {
        self.bell_p_value > significance && self.zz_p_value > significance
    }
}

/// Sample `shots` independent protocol rounds. Shot `k` uses the stream
/// `(seed, k)`, so the result does not depend on `exec`.
pub fn sample_shots(shots: u64, seed: u64, exec: Execution) -> Result<SampleReport, QmathError> {
    let tally = exec.map_reduce(
        shots as usize,
        || Ok(Tally::default()),
        |k| one_shot(seed, k as u64),
        |a, b| Ok(a?.merge(b?)),
    )?;

    let bell_counts: BTreeMap<BellOutcome, u64> = BellOutcome::ALL
        .iter()
        .map(|&o| (o, tally.bell[o.index()]))
        .collect();
    let bell_frequencies = BellOutcome::ALL
        .iter()
        .map(|&o| (o, tally.bell[o.index()] as f64 / shots.max(1) as f64))
        .collect();
    let (bell_chi_square, bell_p_value) = chi_square_uniform(&tally.bell);

    let mut zz_chi_square = 0.0;
    for row in &tally.zz {
        zz_chi_square += chi_square_uniform(row).0;
    }
    let zz_p_value = chi_square_p_value(zz_chi_square, 12);

    Ok(SampleReport {
        shots,
        seed,
        bell_counts,
        bell_frequencies,
        bell_chi_square,
        bell_p_value,
        zz_counts: BellOutcome::ALL
            .iter()
            .map(|&o| (o, tally.zz[o.index()]))
            .collect(),
        zz_chi_square,
        zz_p_value,
        x_correlated: tally.x_same,
        x_anticorrelated: tally.x_opposite,
    })
}
