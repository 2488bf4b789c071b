use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_complex::Complex64;
use rand::Rng;

use super::{BasisState, DiagonalProjector, StateError, YMarginal};
use crate::boolnet::VarId;
use crate::fmt_f64;

/// Amplitudes below this magnitude are dropped.
pub const PRUNE_EPS: f64 = 1e-15;
/// Allowed deviation of the squared norm from 1.
pub const NORM_TOL: f64 = 1e-12;

/// A normalized pure state with sparse complex amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: BTreeMap<BasisState, Complex64>,
}

impl StateVector {
    pub fn basis(b: BasisState) -> Self {
        let n_qubits = b.len();
        let mut amps = BTreeMap::new();
        amps.insert(b, Complex64::new(1.0, 0.0));
        Self { n_qubits, amps }
    }

    /// Builds a state from (basis, amplitude) pairs. Repeated labels add up;
    /// the result is pruned and normalized.
    pub fn from_amplitudes(
        n_qubits: usize,
        entries: impl IntoIterator<Item = (BasisState, Complex64)>,
    ) -> Result<Self, StateError> {
        let mut amps: BTreeMap<BasisState, Complex64> = BTreeMap::new();
        for (b, a) in entries {
            if b.len() != n_qubits {
                return Err(StateError::QubitMismatch {
                    expected: n_qubits,
                    got: b.len(),
                });
            }
            *amps.entry(b).or_default() += a;
        }
        Self::normalized(n_qubits, amps)
    }

    fn normalized(n_qubits: usize, mut amps: BTreeMap<BasisState, Complex64>) -> Result<Self, StateError> {
        amps.retain(|_, a| a.norm() >= PRUNE_EPS);
        let norm = amps.values().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(StateError::ZeroNorm);
        }
        for a in amps.values_mut() {
            *a /= norm;
        }
        amps.retain(|_, a| a.norm() >= PRUNE_EPS);
        Ok(Self { n_qubits, amps })
    }

    /// For callers that have already normalized `amps`; only prunes.
    pub(crate) fn from_normalized_map(n_qubits: usize, mut amps: BTreeMap<BasisState, Complex64>) -> Self {
        amps.retain(|_, a| a.norm() >= PRUNE_EPS);
        debug_assert!((amps.values().map(|a| a.norm_sqr()).sum::<f64>() - 1.0).abs() < 1e-9);
        Self { n_qubits, amps }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn amplitude(&self, b: &BasisState) -> Complex64 {
        self.amps.get(b).copied().unwrap_or_default()
    }

    /// Nonzero amplitudes in basis order.
    pub fn iter(&self) -> impl Iterator<Item = (&BasisState, &Complex64)> {
        self.amps.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &BasisState> {
        self.amps.keys()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.values().map(|a| a.norm_sqr()).sum()
    }

    /// `<self|other>`
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps
            .iter()
            .filter_map(|(b, a)| other.amps.get(b).map(|c| a.conj() * c))
            .sum()
    }

    pub fn fidelity(&self, other: &StateVector) -> f64 {
        self.inner(other).norm_sqr()
    }

    /// Largest per-basis-state amplitude difference.
    pub fn max_abs_diff(&self, other: &StateVector) -> f64 {
        let mut worst: f64 = 0.0;
        for (b, a) in &self.amps {
            worst = worst.max((a - other.amplitude(b)).norm());
        }
        for (b, c) in &other.amps {
            if !self.amps.contains_key(b) {
                worst = worst.max(c.norm());
            }
        }
        worst
    }

    fn check_qubit(&self, q: VarId) -> Result<(), StateError> {
        if q.0 < self.n_qubits {
            Ok(())
        } else {
            Err(StateError::QubitOutOfRange {
                qubit: q.0,
                n_qubits: self.n_qubits,
            })
        }
    }

    fn check_width(&self, p: &DiagonalProjector) -> Result<(), StateError> {
        if p.n_qubits() == self.n_qubits {
            Ok(())
        } else {
            Err(StateError::QubitMismatch {
                expected: self.n_qubits,
                got: p.n_qubits(),
            })
        }
    }

    /// Squared norm of the component inside the projector's subspace.
    pub fn weight_in(&self, p: &DiagonalProjector) -> Result<f64, StateError> {
        self.check_width(p)?;
        Ok(self
            .amps
            .iter()
            .filter(|(b, _)| p.contains(b))
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    /// `||(1 - P) psi||`
    pub fn violation_norm(&self, p: &DiagonalProjector) -> Result<f64, StateError> {
        self.check_width(p)?;
        Ok(self
            .amps
            .iter()
            .filter(|(b, _)| !p.contains(b))
            .map(|(_, a)| a.norm_sqr())
            .sum::<f64>()
            .sqrt())
    }

    /// Projects onto the admissible subspace. Returns the renormalized
    /// in-subspace state and the survival probability.
    pub fn project(&self, p: &DiagonalProjector) -> Result<(StateVector, f64), StateError> {
        self.check_width(p)?;
        let kept: BTreeMap<BasisState, Complex64> = self
            .amps
            .iter()
            .filter(|(b, _)| p.contains(b))
            .map(|(b, a)| (b.clone(), *a))
            .collect();
        let survival: f64 = kept.values().map(|a| a.norm_sqr()).sum();
        if kept.is_empty() {
            return Err(StateError::ZeroSurvival);
        }
        Ok((Self::normalized(self.n_qubits, kept)?, survival))
    }

    /// The renormalized component outside the subspace, with its weight.
    pub fn project_complement(&self, p: &DiagonalProjector) -> Result<(StateVector, f64), StateError> {
        self.check_width(p)?;
        let kept: BTreeMap<BasisState, Complex64> = self
            .amps
            .iter()
            .filter(|(b, _)| !p.contains(b))
            .map(|(b, a)| (b.clone(), *a))
            .collect();
        let weight: f64 = kept.values().map(|a| a.norm_sqr()).sum();
        if kept.is_empty() {
            return Err(StateError::ZeroSurvival);
        }
        Ok((Self::normalized(self.n_qubits, kept)?, weight))
    }

    /// Real rotation of qubit `y`: `|0> -> cos|0> + sin|1>`,
    /// `|1> -> -sin|0> + cos|1>`.
    pub fn rotate_y(&self, y: VarId, angle: f64) -> Result<StateVector, StateError> {
        self.check_qubit(y)?;
        let (s, c) = angle.sin_cos();
        let mut out: BTreeMap<BasisState, Complex64> = BTreeMap::new();
        for (b, &a) in &self.amps {
            let b0 = b.with(y.0, false);
            let b1 = b.with(y.0, true);
            if b.get(y) {
                *out.entry(b0).or_default() -= a * s;
                *out.entry(b1).or_default() += a * c;
            } else {
                *out.entry(b0).or_default() += a * c;
                *out.entry(b1).or_default() += a * s;
            }
        }
        out.retain(|_, a| a.norm() >= PRUNE_EPS);
        Ok(Self {
            n_qubits: self.n_qubits,
            amps: out,
        })
    }

    /// Squared norm of the amplitudes whose qubit `y` equals `bit`.
    pub fn sector_weight(&self, y: VarId, bit: bool) -> Result<f64, StateError> {
        self.check_qubit(y)?;
        Ok(self
            .amps
            .iter()
            .filter(|(b, _)| b.get(y) == bit)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    /// Diagonal of the reduced density matrix of qubit `y`.
    pub fn y_marginal(&self, y: VarId) -> Result<YMarginal, StateError> {
        let p0 = self.sector_weight(y, false)?;
        let p1 = self.sector_weight(y, true)?;
        let total = p0 + p1;
        Ok(YMarginal {
            p0: p0 / total,
            p1: p1 / total,
        })
    }

    fn check_subset(&self, qubits: &[VarId]) -> Result<(), StateError> {
        if qubits.is_empty() {
            return Err(StateError::EmptySubset);
        }
        for (i, q) in qubits.iter().enumerate() {
            self.check_qubit(*q)?;
            if qubits[..i].contains(q) {
                return Err(StateError::DuplicateQubit(q.0));
            }
        }
        Ok(())
    }

    /// Born probabilities of each bit pattern on `qubits`.
    pub fn outcome_distribution(&self, qubits: &[VarId]) -> Result<BTreeMap<Vec<bool>, f64>, StateError> {
        self.check_subset(qubits)?;
        let mut dist: BTreeMap<Vec<bool>, f64> = BTreeMap::new();
        for (b, a) in &self.amps {
            let key: Vec<bool> = qubits.iter().map(|&q| b.get(q)).collect();
            *dist.entry(key).or_default() += a.norm_sqr();
        }
        Ok(dist)
    }

    /// Restricts to basis states showing `outcome` on `qubits`; returns the
    /// renormalized state and the outcome probability.
    pub fn condition(&self, qubits: &[VarId], outcome: &[bool]) -> Result<(StateVector, f64), StateError> {
        self.check_subset(qubits)?;
        if outcome.len() != qubits.len() {
            return Err(StateError::InvalidOutcome);
        }
        let kept: BTreeMap<BasisState, Complex64> = self
            .amps
            .iter()
            .filter(|(b, _)| qubits.iter().zip(outcome).all(|(&q, &v)| b.get(q) == v))
            .map(|(b, a)| (b.clone(), *a))
            .collect();
        let prob: f64 = kept.values().map(|a| a.norm_sqr()).sum();
        if kept.is_empty() {
            return Err(StateError::InvalidOutcome);
        }
        Ok((Self::normalized(self.n_qubits, kept)?, prob))
    }

    /// Measures `qubits` in the computational basis.
    pub fn partial_measure<R: Rng + ?Sized>(
        &self,
        qubits: &[VarId],
        rng: &mut R,
    ) -> Result<(Vec<bool>, StateVector), StateError> {
        let dist = self.outcome_distribution(qubits)?;
        let outcome = sample(dist.iter().map(|(k, p)| (k, *p)), rng).clone();
        let (post, _) = self.condition(qubits, &outcome)?;
        Ok((outcome, post))
    }

    /// Measures every qubit.
    pub fn measure_all<R: Rng + ?Sized>(&self, rng: &mut R) -> BasisState {
        sample(self.amps.iter().map(|(b, a)| (b, a.norm_sqr())), rng).clone()
    }

    /// One line per basis state: `bitstring re im`, sorted by bitstring.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for (b, a) in &self.amps {
            let _ = writeln!(s, "{b} {} {}", fmt_f64(a.re), fmt_f64(a.im));
        }
        s
    }
}

/// Inverse-CDF draw over weights in iteration order.
fn sample<'a, T: 'a, R: Rng + ?Sized>(items: impl Iterator<Item = (&'a T, f64)> + Clone, rng: &mut R) -> &'a T {
    let total: f64 = items.clone().map(|(_, w)| w).sum();
    let target = rng.random::<f64>() * total;
    let mut acc = 0.0;
    let mut last = None;
    for (item, w) in items {
        if w <= 0.0 {
            continue;
        }
        acc += w;
        last = Some(item);
        if target < acc {
            return item;
        }
    }
    last.expect("sampling from an empty distribution")
}
