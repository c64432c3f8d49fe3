use num_complex::Complex64 as C64;

use super::{
    Basis, BellOutcome, DensityMatrix, QmathError, Selector, SingleQubitOp, IMPOSSIBLE_PROB,
};

/// Normalized pure state over an ordered, labelled qubit register.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    labels: Vec<char>,
    amps: Vec<C64>,
}

/// Result of a single-qubit projective measurement.
#[derive(Debug, Clone)]
pub struct Measurement {
    pub outcome: u8,
    pub prob: f64,
    /// Post-measurement state with the measured qubit removed.
    pub collapsed: StateVector,
}

#[derive(Debug, Clone)]
pub struct BellMeasurement {
    pub outcome: BellOutcome,
    pub prob: f64,
    /// Post-measurement state with both measured qubits removed.
    pub collapsed: StateVector,
}

fn check_labels(labels: &[char]) -> Result<(), QmathError> {
    for (i, l) in labels.iter().enumerate() {
        if labels[..i].contains(l) {
            return Err(QmathError::DuplicateLabel(*l));
        }
    }
    Ok(())
}

fn norm_sqr(amps: &[C64]) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum()
}

impl StateVector {
    /// Build a state from raw amplitudes, normalizing them.
    pub fn from_amplitudes(labels: Vec<char>, amps: Vec<C64>) -> Result<Self, QmathError> {
        check_labels(&labels)?;
        let expected = 1usize << labels.len();
        if amps.len() != expected {
            return Err(QmathError::LengthMismatch {
                qubits: labels.len(),
                expected,
                got: amps.len(),
            });
        }
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(QmathError::NonFinite);
        }
        let n2 = norm_sqr(&amps);
        if n2 <= IMPOSSIBLE_PROB * IMPOSSIBLE_PROB {
            return Err(QmathError::ZeroNorm);
        }
        let inv = 1.0 / n2.sqrt();
        Ok(Self {
            labels,
            amps: amps.into_iter().map(|a| a * inv).collect(),
        })
    }

    /// Computational basis state; `bits[i]` is the value of `labels[i]`.
    pub fn basis_state(labels: Vec<char>, bits: &[u8]) -> Result<Self, QmathError> {
        if bits.len() != labels.len() {
            return Err(QmathError::LengthMismatch {
                qubits: labels.len(),
                expected: labels.len(),
                got: bits.len(),
            });
        }
        let idx = bits
            .iter()
            .fold(0usize, |acc, &b| (acc << 1) | usize::from(b & 1));
        let mut amps = vec![C64::new(0.0, 0.0); 1 << labels.len()];
        amps[idx] = C64::new(1.0, 0.0);
        Self::from_amplitudes(labels, amps)
    }

    pub fn labels(&self) -> &[char] {
        &self.labels
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn num_qubits(&self) -> usize {
        self.labels.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.amps)
    }

    /// Amplitude of the basis state given as one bit per label, in register order.
    pub fn amplitude(&self, bits: &[u8]) -> C64 {
        assert_eq!(bits.len(), self.labels.len(), "one bit per qubit");
        let idx = bits
            .iter()
            .fold(0usize, |acc, &b| (acc << 1) | usize::from(b & 1));
        self.amps[idx]
    }

    fn position(&self, label: char) -> Result<usize, QmathError> {
        self.labels
            .iter()
            .position(|&l| l == label)
            .ok_or(QmathError::UnknownLabel(label))
    }

    fn shift(&self, pos: usize) -> usize {
        self.labels.len() - 1 - pos
    }

    /// Rename one qubit.
    pub fn relabel(&self, from: char, to: char) -> Result<Self, QmathError> {
        let pos = self.position(from)?;
        let mut labels = self.labels.clone();
        labels[pos] = to;
        check_labels(&labels)?;
        Ok(Self {
            labels,
            amps: self.amps.clone(),
        })
    }

    /// Same state with the register permuted into `order`.
    pub fn reordered(&self, order: &[char]) -> Result<Self, QmathError> {
        if order.len() != self.labels.len() {
            return Err(QmathError::RegisterMismatch(
                self.labels.clone(),
                order.to_vec(),
            ));
        }
        check_labels(order)?;
        let shifts: Vec<usize> = order
            .iter()
            .map(|&l| self.position(l).map(|p| self.shift(p)))
            .collect::<Result<_, _>>()?;
        let n = order.len();
        let mut amps = vec![C64::new(0.0, 0.0); self.amps.len()];
        for (new_idx, slot) in amps.iter_mut().enumerate() {
            let mut old_idx = 0usize;
            for (k, &s) in shifts.iter().enumerate() {
                let bit = (new_idx >> (n - 1 - k)) & 1;
                old_idx |= bit << s;
            }
            *slot = self.amps[old_idx];
        }
        Ok(Self {
            labels: order.to_vec(),
            amps,
        })
    }

    /// Tensor product `self ⊗ other`; labels are concatenated.
    pub fn tensor(&self, other: &StateVector) -> Result<Self, QmathError> {
        let mut labels = self.labels.clone();
        labels.extend_from_slice(&other.labels);
        check_labels(&labels)?;
        let amps = self
            .amps
            .iter()
            .flat_map(|a| other.amps.iter().map(move |b| a * b))
            .collect();
        Ok(Self { labels, amps })
    }

    /// Apply `op` to qubit `label`. Non-unitary operators are followed by
    /// renormalization.
    pub fn apply_single(&self, label: char, op: &SingleQubitOp) -> Result<Self, QmathError> {
        let s = self.shift(self.position(label)?);
        let mask = 1usize << s;
        let mut amps = self.amps.clone();
        for i in 0..amps.len() {
            if i & mask == 0 {
                let [a0, a1] = op.apply([self.amps[i], self.amps[i | mask]]);
                amps[i] = a0;
                amps[i | mask] = a1;
            }
        }
        if op.is_unitary() {
            Ok(Self {
                labels: self.labels.clone(),
                amps,
            })
        } else {
            Self::from_amplitudes(self.labels.clone(), amps)
        }
    }

    /// Contract the qubits at `positions` with the bra `<v|`, where `v` is
    /// indexed most-significant-first over those qubits. Returns the
    /// unnormalized remainder.
    fn contract(&self, positions: &[usize], v: &[C64]) -> (Vec<char>, Vec<C64>) {
        let n = self.labels.len();
        let k = positions.len();
        debug_assert_eq!(v.len(), 1 << k);
        let rest: Vec<usize> = (0..n).filter(|p| !positions.contains(p)).collect();
        let labels = rest.iter().map(|&p| self.labels[p]).collect();
        let mut out = vec![C64::new(0.0, 0.0); 1 << rest.len()];
        for (r, slot) in out.iter_mut().enumerate() {
            let mut base = 0usize;
            for (j, &p) in rest.iter().enumerate() {
                let bit = (r >> (rest.len() - 1 - j)) & 1;
                base |= bit << self.shift(p);
            }
            let mut acc = C64::new(0.0, 0.0);
            for (m, vm) in v.iter().enumerate() {
                if vm.norm_sqr() == 0.0 {
                    continue;
                }
                let mut idx = base;
                for (j, &p) in positions.iter().enumerate() {
                    let bit = (m >> (k - 1 - j)) & 1;
                    idx |= bit << self.shift(p);
                }
                acc += vm.conj() * self.amps[idx];
            }
            *slot = acc;
        }
        (labels, out)
    }

    /// Born probabilities of the two outcomes of measuring `label` in `basis`.
    pub fn outcome_probabilities(&self, label: char, basis: Basis) -> Result<[f64; 2], QmathError> {
        self.projective_probabilities(label, basis.kets())
    }

    /// Born probabilities for an arbitrary orthonormal single-qubit basis.
    pub fn projective_probabilities(
        &self,
        label: char,
        kets: [[C64; 2]; 2],
    ) -> Result<[f64; 2], QmathError> {
        let pos = self.position(label)?;
        let p = |k: [C64; 2]| norm_sqr(&self.contract(&[pos], &k).1);
        Ok([p(kets[0]), p(kets[1])])
    }

    pub fn measure(
        &self,
        label: char,
        basis: Basis,
        selector: Selector<'_, u8>,
    ) -> Result<Measurement, QmathError> {
        self.measure_projective(label, basis.kets(), selector)
    }

    /// Measure `label` in the orthonormal basis `kets` (outcome `b` ↔ `kets[b]`).
    pub fn measure_projective(
        &self,
        label: char,
        kets: [[C64; 2]; 2],
        mut selector: Selector<'_, u8>,
    ) -> Result<Measurement, QmathError> {
        let pos = self.position(label)?;
        let branches = [
            self.contract(&[pos], &kets[0]),
            self.contract(&[pos], &kets[1]),
        ];
        let probs = [norm_sqr(&branches[0].1), norm_sqr(&branches[1].1)];
        let (outcome, prob) = selector.choose(&[0u8, 1u8], &probs, |b| format!("{label}={b}"))?;
        let (labels, amps) = branches[usize::from(outcome)].clone();
        Ok(Measurement {
            outcome,
            prob,
            collapsed: Self::from_amplitudes(labels, amps)?,
        })
    }

    /// Probabilities of the four Bell outcomes on `(first, second)`, in
    /// [`BellOutcome::ALL`] order.
    pub fn bell_probabilities(&self, first: char, second: char) -> Result<[f64; 4], QmathError> {
        let positions = self.pair_positions(first, second)?;
        let mut out = [0.0; 4];
        for (slot, o) in out.iter_mut().zip(BellOutcome::ALL) {
            *slot = norm_sqr(&self.contract(&positions, &o.ket()).1);
        }
        Ok(out)
    }

    fn pair_positions(&self, first: char, second: char) -> Result<[usize; 2], QmathError> {
        if first == second {
            return Err(QmathError::InvalidSubsystem(format!(
                "Bell measurement needs two distinct qubits, got '{first}' twice"
            )));
        }
        Ok([self.position(first)?, self.position(second)?])
    }

    pub fn measure_bell(
        &self,
        first: char,
        second: char,
        mut selector: Selector<'_, BellOutcome>,
    ) -> Result<BellMeasurement, QmathError> {
        let positions = self.pair_positions(first, second)?;
        let branches: Vec<_> = BellOutcome::ALL
            .iter()
            .map(|o| self.contract(&positions, &o.ket()))
            .collect();
        let probs: Vec<f64> = branches.iter().map(|b| norm_sqr(&b.1)).collect();
        let (outcome, prob) = selector.choose(&BellOutcome::ALL, &probs, |o| o.to_string())?;
        let (labels, amps) = branches[outcome.index()].clone();
        Ok(BellMeasurement {
            outcome,
            prob,
            collapsed: Self::from_amplitudes(labels, amps)?,
        })
    }

    /// Reduced density matrix on `keep`, in the order given.
    pub fn partial_trace(&self, keep: &[char]) -> Result<DensityMatrix, QmathError> {
        if keep.is_empty() {
            return Err(QmathError::InvalidSubsystem("keep-set is empty".into()));
        }
        check_labels(keep)?;
        let kept: Vec<usize> = keep
            .iter()
            .map(|&l| self.position(l).map(|p| self.shift(p)))
            .collect::<Result<_, _>>()?;
        let env: Vec<usize> = (0..self.labels.len())
            .map(|p| self.shift(p))
            .filter(|s| !kept.contains(s))
            .collect();
        let dk = 1usize << kept.len();
        let de = 1usize << env.len();
        // rows: kept index, columns: environment index
        let mut m = vec![C64::new(0.0, 0.0); dk * de];
        for (idx, a) in self.amps.iter().enumerate() {
            let gather = |shifts: &[usize]| {
                shifts
                    .iter()
                    .fold(0usize, |acc, &s| (acc << 1) | ((idx >> s) & 1))
            };
            m[gather(&kept) * de + gather(&env)] = *a;
        }
        let mut rho = vec![C64::new(0.0, 0.0); dk * dk];
        for r in 0..dk {
            for c in r..dk {
                let v: C64 = (0..de).map(|e| m[r * de + e] * m[c * de + e].conj()).sum();
                rho[r * dk + c] = v;
                rho[c * dk + r] = v.conj();
            }
            rho[r * dk + r].im = 0.0;
        }
        Ok(DensityMatrix::from_entries_unchecked(dk, rho))
    }

    /// Inner product `<self|other>` after aligning `other` to this register order.
    pub fn inner(&self, other: &StateVector) -> Result<C64, QmathError> {
        let other = self.align(other)?;
        Ok(self
            .amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    fn align(&self, other: &StateVector) -> Result<StateVector, QmathError> {
        let same_set = self.labels.len() == other.labels.len()
            && self.labels.iter().all(|l| other.labels.contains(l));
        if !same_set {
            return Err(QmathError::RegisterMismatch(
                self.labels.clone(),
                other.labels.clone(),
            ));
        }
        if self.labels == other.labels {
            Ok(other.clone())
        } else {
            other.reordered(&self.labels)
        }
    }

    /// `|<self|other>|²`.
    pub fn fidelity_pure(&self, other: &StateVector) -> Result<f64, QmathError> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// Largest amplitude difference after removing the global phase.
    ///
    /// Both states are rotated so that the amplitude at the largest-magnitude
    /// index of `self` is real and positive.
    pub fn max_deviation_up_to_phase(&self, other: &StateVector) -> Result<f64, QmathError> {
        let other = self.align(other)?;
        let k = self
            .amps
            .iter()
            .enumerate()
            .fold((0, -1.0), |best, (i, a)| {
                if a.norm() > best.1 + 1e-12 {
                    (i, a.norm())
                } else {
                    best
                }
            })
            .0;
        let unit = |z: C64| {
            if z.norm() > 0.0 {
                z / z.norm()
            } else {
                C64::new(1.0, 0.0)
            }
        };
        let pa = unit(self.amps[k]).conj();
        let pb = unit(other.amps[k]).conj();
        Ok(self
            .amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| (a * pa - b * pb).norm())
            .fold(0.0, f64::max))
    }

    pub fn equal_up_to_phase(&self, other: &StateVector, tol: f64) -> Result<bool, QmathError> {
        Ok(self.max_deviation_up_to_phase(other)? <= tol)
    }

    /// Von Neumann entropy (bits) of the reduced state on `cut`.
    pub fn entanglement_entropy(&self, cut: &[char]) -> Result<f64, QmathError> {
        if cut.is_empty() || cut.len() >= self.labels.len() {
            return Err(QmathError::InvalidSubsystem(format!(
                "cut {cut:?} is not a proper nonempty subset of {:?}",
                self.labels
            )));
        }
        Ok(self.partial_trace(cut)?.von_neumann_entropy())
    }

    /// Entropies across every bipartition `{cut | complement}` with the cut
    /// not containing the last qubit, so each bipartition appears once.
    pub fn bipartite_entropies(&self) -> Result<Vec<(Vec<char>, f64)>, QmathError> {
        let n = self.labels.len();
        let mut out = Vec::new();
        if n < 2 {
            return Ok(out);
        }
        for mask in 1usize..(1 << (n - 1)) {
            let cut: Vec<char> = (0..n - 1)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| self.labels[i])
                .collect();
            let e = self.entanglement_entropy(&cut)?;
            out.push((cut, e));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn ket0(l: char) -> StateVector {
        StateVector::basis_state(vec![l], &[0]).unwrap()
    }

    fn plus(l: char) -> StateVector {
        StateVector::from_amplitudes(vec![l], vec![c(1., 0.), c(1., 0.)]).unwrap()
    }

    fn psi_plus() -> StateVector {
        StateVector::from_amplitudes(vec!['a', 'b'], BellOutcome::PsiPlus.ket().to_vec()).unwrap()
    }

    #[test]
    fn tensor_of_zeros() {
        let s = ket0('a').tensor(&ket0('b')).unwrap();
        assert_eq!(s.amplitudes()[0], c(1.0, 0.0));
        assert_eq!(s.labels(), &['a', 'b']);
    }

    #[test]
    fn tensor_separable_expansion() {
        let s = plus('S').tensor(&ket0('x')).unwrap();
        let h = FRAC_1_SQRT_2;
        let want = [c(h, 0.), c(0., 0.), c(h, 0.), c(0., 0.)];
        for (a, b) in s.amplitudes().iter().zip(want) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn tensor_rejects_duplicate_labels() {
        assert_eq!(
            ket0('a').tensor(&ket0('a')),
            Err(QmathError::DuplicateLabel('a'))
        );
    }

    #[test]
    fn pauli_x_flips() {
        let s = ket0('q')
            .apply_single('q', &SingleQubitOp::pauli_x())
            .unwrap();
        assert_eq!(s.amplitude(&[1]), c(1.0, 0.0));
        assert_eq!(
            ket0('q').apply_single('z', &SingleQubitOp::pauli_x()),
            Err(QmathError::UnknownLabel('z'))
        );
    }

    #[test]
    fn hadamard_makes_plus() {
        let s = ket0('q')
            .apply_single('q', &SingleQubitOp::hadamard())
            .unwrap();
        assert!(s.max_deviation_up_to_phase(&plus('q')).unwrap() < 1e-15);
    }

    #[test]
    fn xz_restores_bob_branch() {
        // (|1> - λ|0>) --XZ--> (|0> + λ|1>) up to sign
        let lam = c(0.3, -1.7);
        let bad = StateVector::from_amplitudes(vec!['B'], vec![-lam, c(1., 0.)]).unwrap();
        let good = StateVector::from_amplitudes(vec!['B'], vec![c(1., 0.), lam]).unwrap();
        let xz = SingleQubitOp::pauli_x() * SingleQubitOp::pauli_z();
        let fixed = bad.apply_single('B', &xz).unwrap();
        assert!(fixed.max_deviation_up_to_phase(&good).unwrap() < 1e-15);
    }

    #[test]
    fn measure_plus_in_z() {
        let m = plus('q')
            .measure('q', Basis::Z, Selector::Forced(0))
            .unwrap();
        assert!((m.prob - 0.5).abs() < 1e-15);
        assert_eq!(m.collapsed.num_qubits(), 0);
        let px = plus('q').outcome_probabilities('q', Basis::X).unwrap();
        assert!((px[0] - 1.0).abs() < 1e-15 && px[1].abs() < 1e-15);
    }

    #[test]
    fn forcing_impossible_outcome_fails() {
        let err = ket0('q')
            .measure('q', Basis::Z, Selector::Forced(1))
            .unwrap_err();
        assert!(matches!(err, QmathError::ImpossibleOutcome { .. }));
    }

    #[test]
    fn sampled_measurement_is_seeded() {
        let draw = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..32)
                .map(|_| {
                    plus('q')
                        .measure('q', Basis::Z, Selector::Sample(&mut rng))
                        .unwrap()
                        .outcome
                })
                .collect::<Vec<_>>()
        };
        assert_eq!(draw(3), draw(3));
        assert!(draw(3).contains(&0) && draw(3).contains(&1));
    }

    #[test]
    fn bell_eigenstate() {
        let m = psi_plus()
            .measure_bell('a', 'b', Selector::Forced(BellOutcome::PsiPlus))
            .unwrap();
        assert!((m.prob - 1.0).abs() < 1e-15);
        assert!(matches!(
            psi_plus().measure_bell('a', 'a', Selector::Forced(BellOutcome::PsiPlus)),
            Err(QmathError::InvalidSubsystem(_))
        ));
    }

    #[test]
    fn partial_trace_full_is_projector() {
        let rho = psi_plus().partial_trace(&['a', 'b']).unwrap();
        let want = DensityMatrix::from_pure(&psi_plus());
        assert!(rho.max_abs_diff(&want) < 1e-15);
        assert!(psi_plus().partial_trace(&[]).is_err());
        assert!(psi_plus().partial_trace(&['z']).is_err());
    }

    #[test]
    fn fidelity_basics() {
        let one = StateVector::basis_state(vec!['q'], &[1]).unwrap();
        assert_eq!(ket0('q').fidelity_pure(&ket0('q')).unwrap(), 1.0);
        assert_eq!(ket0('q').fidelity_pure(&one).unwrap(), 0.0);
        assert!(ket0('q').fidelity_pure(&ket0('r')).is_err());
    }

    #[test]
    fn entropy_examples() {
        assert!((psi_plus().entanglement_entropy(&['a']).unwrap() - 1.0).abs() < 1e-12);
        let prod = ket0('a').tensor(&plus('b')).unwrap();
        assert!(prod.entanglement_entropy(&['a']).unwrap().abs() < 1e-12);
        assert!(prod.entanglement_entropy(&['a', 'b']).is_err());
    }

    #[test]
    fn reorder_round_trip() {
        let s = StateVector::from_amplitudes(
            vec!['a', 'b', 'c'],
            (0..8).map(|k| c(k as f64, 1.0 - k as f64)).collect(),
        )
        .unwrap();
        let r = s.reordered(&['c', 'a', 'b']).unwrap();
        // |a=1,b=0,c=1> is index 5 in abc order, index 0b110 = 6 in cab order
        assert_eq!(r.amplitudes()[6], s.amplitudes()[5]);
        assert_eq!(r.reordered(&['a', 'b', 'c']).unwrap(), s);
    }
}
