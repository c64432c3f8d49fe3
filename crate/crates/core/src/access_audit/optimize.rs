//! Per-branch recovery search: best single-qubit Clifford, then coordinate
//! search over ZYZ Euler angles with a shrinking step.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::qmath::{EulerAngles, SingleQubitOp};

pub const INITIAL_STEP: f64 = PI / 8.0;
pub const MIN_STEP: f64 = 1e-6;
pub const MAX_EVALS: usize = 2000;

/// One secret's contribution to a branch: Born weight, the receiver's
/// normalized state in that branch, and the secret's amplitudes.
#[derive(Debug, Clone)]
pub(crate) struct BranchSample {
    pub weight: f64,
    pub rho: [[C64; 2]; 2],
    pub target: [C64; 2],
}

/// `Σ w ⟨ξ| U ρ U† |ξ⟩` over all samples.
pub(crate) fn branch_objective(samples: &[BranchSample], u: &SingleQubitOp) -> f64 {
    let e = u.entries();
    samples
        .iter()
        .map(|s| {
            // v = U† ξ
            let v = [
                e[0][0].conj() * s.target[0] + e[1][0].conj() * s.target[1],
                e[0][1].conj() * s.target[0] + e[1][1].conj() * s.target[1],
            ];
            let r0 = s.rho[0][0] * v[0] + s.rho[0][1] * v[1];
            let r1 = s.rho[1][0] * v[0] + s.rho[1][1] * v[1];
            s.weight * (v[0].conj() * r0 + v[1].conj() * r1).re
        })
        .sum()
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct BranchOptimum {
    pub angles: EulerAngles,
    pub value: f64,
    pub evaluations: usize,
}

/// Maximize `objective` over single-qubit unitaries.
pub(crate) fn maximize<F: Fn(&SingleQubitOp) -> f64>(objective: F) -> BranchOptimum {
    let mut evaluations = 0usize;
    let mut seed = SingleQubitOp::identity();
    let mut seed_value = f64::NEG_INFINITY;
    for c in SingleQubitOp::clifford_group() {
        let v = objective(&c);
        evaluations += 1;
        if v > seed_value {
            seed_value = v;
            seed = c;
        }
    }

    let eval = |x: [f64; 3]| objective(&SingleQubitOp::from_euler(EulerAngles::from_array(x)));
    let mut x = seed.euler_angles().as_array();
    let mut fx = eval(x);
    evaluations += 1;
    let mut step = INITIAL_STEP;
    // refinement budget, counted separately from the Clifford seeding
    let mut spent = 1usize;
    'outer: while step >= MIN_STEP {
        let mut improved = false;
        for k in 0..3 {
            for dir in [1.0, -1.0] {
                if spent >= MAX_EVALS {
                    break 'outer;
                }
                let mut trial = x;
                trial[k] += dir * step;
                let ft = eval(trial);
                spent += 1;
                evaluations += 1;
                if ft > fx {
                    x = trial;
                    fx = ft;
                    improved = true;
                    break;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }

    BranchOptimum {
        angles: EulerAngles::from_array(x),
        value: fx,
        evaluations,
    }
}
