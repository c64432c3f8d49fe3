use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::ops::Mul;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::{QmathError, EXACT_TOL};

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// A 2x2 complex operator acting on one qubit.
///
/// The `unitary` flag is computed on construction and is only set when
/// `U†U = I` holds within [`EXACT_TOL`].
#[derive(Clone, Copy, PartialEq)]
pub struct SingleQubitOp {
    entries: [[C64; 2]; 2],
    unitary: bool,
}

/// ZYZ Euler angles: `U = Rz(phi) Ry(theta) Rz(lambda)` up to global phase.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EulerAngles {
    pub theta: f64,
    pub phi: f64,
    pub lambda: f64,
}

impl EulerAngles {
    pub fn as_array(&self) -> [f64; 3] {
        [self.theta, self.phi, self.lambda]
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Self {
            theta: a[0],
            phi: a[1],
            lambda: a[2],
        }
    }
}

impl SingleQubitOp {
    pub fn new(entries: [[C64; 2]; 2]) -> Result<Self, QmathError> {
        if entries
            .iter()
            .flatten()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(QmathError::NonFinite);
        }
        Ok(Self::from_entries_unchecked(entries))
    }

    fn from_entries_unchecked(entries: [[C64; 2]; 2]) -> Self {
        let mut op = Self {
            entries,
            unitary: false,
        };
        op.unitary = op.unitarity_defect() <= EXACT_TOL;
        op
    }

    pub fn identity() -> Self {
        Self::from_entries_unchecked([[ONE, ZERO], [ZERO, ONE]])
    }

    pub fn pauli_x() -> Self {
        Self::from_entries_unchecked([[ZERO, ONE], [ONE, ZERO]])
    }

    pub fn pauli_y() -> Self {
        let i = C64::i();
        Self::from_entries_unchecked([[ZERO, -i], [i, ZERO]])
    }

    pub fn pauli_z() -> Self {
        Self::from_entries_unchecked([[ONE, ZERO], [ZERO, -ONE]])
    }

    pub fn hadamard() -> Self {
        let h = C64::new(FRAC_1_SQRT_2, 0.0);
        Self::from_entries_unchecked([[h, h], [h, -h]])
    }

    /// Phase gate `diag(1, i)`.
    pub fn phase_s() -> Self {
        Self::from_entries_unchecked([[ONE, ZERO], [ZERO, C64::i()]])
    }

    /// `Rz(phi) Ry(theta) Rz(lambda)` with the global phase chosen so that the
    /// top-left entry is real and non-negative.
    pub fn from_euler(angles: EulerAngles) -> Self {
        let EulerAngles { theta, phi, lambda } = angles;
        let (s, c) = (theta / 2.0).sin_cos();
        Self::from_entries_unchecked([
            [C64::new(c, 0.0), -C64::from_polar(s, lambda)],
            [C64::from_polar(s, phi), C64::from_polar(c, phi + lambda)],
        ])
    }

    /// Inverse of [`SingleQubitOp::from_euler`] up to global phase.
    ///
    /// Only meaningful for unitary operators.
    pub fn euler_angles(&self) -> EulerAngles {
        let [[u00, u01], [u10, u11]] = self.entries;
        let theta = 2.0 * u10.norm().atan2(u00.norm());
        let (phi, lambda) = if u00.norm() < 1e-12 {
            // cos(theta/2) = 0: only phi - lambda is fixed; pin phi to zero
            (0.0, (-u01).arg() - u10.arg())
        } else if u10.norm() < 1e-12 {
            (u11.arg() - u00.arg(), 0.0)
        } else {
            let g = u00.arg();
            (u10.arg() - g, (-u01).arg() - g)
        };
        EulerAngles { theta, phi, lambda }
    }

    pub fn entries(&self) -> &[[C64; 2]; 2] {
        &self.entries
    }

    pub fn is_unitary(&self) -> bool {
        self.unitary
    }

    /// Largest entrywise deviation of `U†U` from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        let p = self.adjoint().matmul(self);
        let mut worst = 0.0f64;
        for r in 0..2 {
            for c in 0..2 {
                let target = if r == c { ONE } else { ZERO };
                worst = worst.max((p.entries[r][c] - target).norm());
            }
        }
        worst
    }

    pub fn adjoint(&self) -> Self {
        let e = &self.entries;
        Self {
            entries: [
                [e[0][0].conj(), e[1][0].conj()],
                [e[0][1].conj(), e[1][1].conj()],
            ],
            unitary: self.unitary,
        }
    }

    fn matmul(&self, rhs: &Self) -> Self {
        let (a, b) = (&self.entries, &rhs.entries);
        let mut out = [[ZERO; 2]; 2];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, cell) in row.iter_mut().enumerate() {
                *cell = a[r][0] * b[0][c] + a[r][1] * b[1][c];
            }
        }
        Self {
            entries: out,
            unitary: false,
        }
    }

    pub fn apply(&self, v: [C64; 2]) -> [C64; 2] {
        let e = &self.entries;
        [
            e[0][0] * v[0] + e[0][1] * v[1],
            e[1][0] * v[0] + e[1][1] * v[1],
        ]
    }

    /// True when `self = e^{iθ} other` for some θ, within `tol` entrywise.
    pub fn equiv_up_to_phase(&self, other: &Self, tol: f64) -> bool {
        // align on the largest entry of `self`
        let (mut k, mut best) = ((0, 0), -1.0);
        for r in 0..2 {
            for c in 0..2 {
                let m = self.entries[r][c].norm();
                if m > best + 1e-12 {
                    best = m;
                    k = (r, c);
                }
            }
        }
        let a = self.entries[k.0][k.1];
        let b = other.entries[k.0][k.1];
        if b.norm() < 1e-300 {
            return false;
        }
        let phase = (a / a.norm()) * (b / b.norm()).conj();
        (0..2).all(|r| {
            (0..2).all(|c| (self.entries[r][c] - phase * other.entries[r][c]).norm() <= tol)
        })
    }

    /// The 24 single-qubit Clifford operations, one representative per
    /// global-phase class, generated from H and S.
    pub fn clifford_group() -> Vec<SingleQubitOp> {
        let generators = [Self::hadamard(), Self::phase_s()];
        let mut group = vec![Self::identity()];
        let mut frontier = 0;
        while frontier < group.len() {
            let g = group[frontier];
            frontier += 1;
            for h in &generators {
                let candidate = *h * g;
                if !group.iter().any(|e| e.equiv_up_to_phase(&candidate, 1e-9)) {
                    group.push(candidate);
                }
            }
        }
        group
    }
}

impl Mul for SingleQubitOp {
    type Output = SingleQubitOp;

    fn mul(self, rhs: SingleQubitOp) -> SingleQubitOp {
        let mut p = self.matmul(&rhs);
        p.unitary = p.unitarity_defect() <= EXACT_TOL;
        p
    }
}

impl fmt::Debug for SingleQubitOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = &self.entries;
        write!(
            f,
            "[[{:.6}, {:.6}], [{:.6}, {:.6}]]{}",
            e[0][0],
            e[0][1],
            e[1][0],
            e[1][1],
            if self.unitary { " (unitary)" } else { "" }
        )
    }
}
