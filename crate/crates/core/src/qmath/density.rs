use num_complex::Complex64 as C64;

use super::eigen::hermitian_eigenvalues;
use super::{QmathError, SingleQubitOp, StateVector, EXACT_TOL};

/// Density matrix of a small subsystem, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dim: usize,
    entries: Vec<C64>,
}

impl DensityMatrix {
    pub(crate) fn from_entries_unchecked(dim: usize, entries: Vec<C64>) -> Self {
        debug_assert_eq!(entries.len(), dim * dim);
        Self { dim, entries }
    }

    /// Validating constructor: square, power-of-two dimension, Hermitian,
    /// unit trace and positive semidefinite, all within [`EXACT_TOL`].
    pub fn new(dim: usize, entries: Vec<C64>) -> Result<Self, QmathError> {
        if !dim.is_power_of_two() || entries.len() != dim * dim {
            return Err(QmathError::InvalidSubsystem(format!(
                "{} entries do not form a power-of-two square matrix",
                entries.len()
            )));
        }
        if entries
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(QmathError::NonFinite);
        }
        let rho = Self { dim, entries };
        if rho.hermiticity_defect() > EXACT_TOL
            || (rho.trace().re - 1.0).abs() > EXACT_TOL
            || rho.eigenvalues().first().is_some_and(|&e| e < -EXACT_TOL)
        {
            return Err(QmathError::InvalidSubsystem(
                "matrix is not a valid density matrix".into(),
            ));
        }
        Ok(rho)
    }

    pub fn from_pure(state: &StateVector) -> Self {
        let a = state.amplitudes();
        let dim = a.len();
        let entries = (0..dim * dim)
            .map(|k| a[k / dim] * a[k % dim].conj())
            .collect();
        Self { dim, entries }
    }

    /// Maximally mixed state on one qubit.
    pub fn maximally_mixed_qubit() -> Self {
        let h = C64::new(0.5, 0.0);
        let z = C64::new(0.0, 0.0);
        Self {
            dim: 2,
            entries: vec![h, z, z, h],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.entries[row * self.dim + col]
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..self.dim {
            for c in r..self.dim {
                worst = worst.max((self.get(r, c) - self.get(c, r).conj()).norm());
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(self.dim, &self.entries)
    }

    /// Von Neumann entropy in bits; tiny negative eigenvalues are clamped to 0.
    pub fn von_neumann_entropy(&self) -> f64 {
        let s: f64 = self
            .eigenvalues()
            .into_iter()
            .map(|p| p.max(0.0))
            .filter(|&p| p > 0.0)
            .map(|p| -p * p.log2())
            .sum();
        s.max(0.0)
    }

    /// `<psi|rho|psi>` for a vector of matching dimension.
    pub fn expectation(&self, psi: &[C64]) -> f64 {
        assert_eq!(psi.len(), self.dim, "dimension mismatch");
        let mut acc = C64::new(0.0, 0.0);
        for r in 0..self.dim {
            let row: C64 = (0..self.dim).map(|c| self.get(r, c) * psi[c]).sum();
            acc += psi[r].conj() * row;
        }
        acc.re
    }

    /// `U rho U†` for a single-qubit density matrix.
    pub fn conjugate_by(&self, op: &SingleQubitOp) -> DensityMatrix {
        assert_eq!(
            self.dim, 2,
            "single-qubit operator on a {}-dim matrix",
            self.dim
        );
        let u = op.entries();
        let mut out = vec![C64::new(0.0, 0.0); 4];
        for r in 0..2 {
            for c in 0..2 {
                let mut acc = C64::new(0.0, 0.0);
                for i in 0..2 {
                    for j in 0..2 {
                        acc += u[r][i] * self.get(i, j) * u[c][j].conj();
                    }
                }
                out[r * 2 + c] = acc;
            }
        }
        DensityMatrix {
            dim: 2,
            entries: out,
        }
    }

    /// Entrywise weighted sum.
    #[cfg(test)]
    pub(crate) fn scaled_add(&mut self, other: &DensityMatrix, weight: f64) {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        for (a, b) in self.entries.iter_mut().zip(&other.entries) {
            *a += b * weight;
        }
    }

    #[cfg(test)]
    pub(crate) fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![C64::new(0.0, 0.0); dim * dim],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn maximally_mixed_entropy_is_one_bit() {
        let rho = DensityMatrix::maximally_mixed_qubit();
        assert!((rho.von_neumann_entropy() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn pure_state_has_zero_entropy() {
        let s = StateVector::from_amplitudes(
            vec!['a', 'b'],
            vec![
                C64::new(0.3, 0.1),
                C64::new(-0.2, 0.5),
                C64::new(0.0, 0.7),
                C64::new(0.1, 0.0),
            ],
        )
        .unwrap();
        let rho = DensityMatrix::from_pure(&s);
        assert!(rho.von_neumann_entropy().abs() < 1e-10);
        assert!(DensityMatrix::new(4, rho.entries().to_vec()).is_ok());
    }

    #[test]
    fn validation_rejects_bad_trace() {
        let z = C64::new(0.0, 0.0);
        let one = C64::new(1.0, 0.0);
        assert!(DensityMatrix::new(2, vec![one, z, z, one]).is_err());
        assert!(DensityMatrix::new(3, vec![one; 9]).is_err());
    }

    #[test]
    fn conjugation_by_x_swaps_populations() {
        let z = C64::new(0.0, 0.0);
        let rho =
            DensityMatrix::new(2, vec![C64::new(0.8, 0.0), z, z, C64::new(0.2, 0.0)]).unwrap();
        let flipped = rho.conjugate_by(&SingleQubitOp::pauli_x());
        assert!((flipped.get(0, 0).re - 0.2).abs() < 1e-15);
        assert!((flipped.get(1, 1).re - 0.8).abs() < 1e-15);
    }
}
