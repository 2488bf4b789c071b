use std::collections::BTreeSet;

use super::{BasisState, StateError};
use crate::boolnet::{BoolNetwork, Constraint, NetworkError, VarId};

/// Largest register for which a projector is enumerated: `2^20` states.
pub const DEFAULT_REGISTER_CAP_BITS: usize = 20;

/// A projector diagonal in the computational basis, stored as its set of
/// admissible basis states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalProjector {
    n_qubits: usize,
    admissible: BTreeSet<BasisState>,
}

impl DiagonalProjector {
    pub fn new(n_qubits: usize, states: impl IntoIterator<Item = BasisState>) -> Result<Self, StateError> {
        let mut admissible = BTreeSet::new();
        for b in states {
            if b.len() != n_qubits {
                return Err(StateError::QubitMismatch {
                    expected: n_qubits,
                    got: b.len(),
                });
            }
            admissible.insert(b);
        }
        Ok(Self { n_qubits, admissible })
    }

    /// The projector onto basis states satisfying one gate, wire or pin,
    /// over a register of `n_qubits`. Enumerates the whole register.
    pub fn for_constraint(n_qubits: usize, c: &Constraint) -> Result<Self, StateError> {
        if n_qubits > DEFAULT_REGISTER_CAP_BITS {
            return Err(StateError::RegisterTooLarge {
                bits: n_qubits,
                cap: DEFAULT_REGISTER_CAP_BITS,
            });
        }
        if let Some(v) = c.vars().into_iter().find(|v| v.0 >= n_qubits) {
            return Err(StateError::QubitOutOfRange { qubit: v.0, n_qubits });
        }
        let admissible = (0..1u64 << n_qubits)
            .map(|m| {
                let bits: Vec<bool> = (0..n_qubits).map(|i| (m >> i) & 1 == 1).collect();
                BasisState::from_bits(&bits)
            })
            .filter(|b| c.holds(|v| b.get(v)))
            .collect();
        Ok(Self { n_qubits, admissible })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn len(&self) -> usize {
        self.admissible.len()
    }

    pub fn is_empty(&self) -> bool {
        self.admissible.is_empty()
    }

    pub fn contains(&self, b: &BasisState) -> bool {
        self.admissible.contains(b)
    }

    pub fn iter(&self) -> impl Iterator<Item = &BasisState> {
        self.admissible.iter()
    }

    /// Product of two diagonal projectors.
    pub fn intersect(&self, other: &DiagonalProjector) -> Result<Self, StateError> {
        if other.n_qubits != self.n_qubits {
            return Err(StateError::QubitMismatch {
                expected: self.n_qubits,
                got: other.n_qubits,
            });
        }
        Ok(Self {
            n_qubits: self.n_qubits,
            admissible: self.admissible.intersection(&other.admissible).cloned().collect(),
        })
    }

    /// Keeps only basis states with qubit `q` equal to `value`.
    pub fn restrict(&self, q: VarId, value: bool) -> Self {
        Self {
            n_qubits: self.n_qubits,
            admissible: self.admissible.iter().filter(|b| b.get(q) == value).cloned().collect(),
        }
    }
}

/// Projector onto the constrained subspace of an open network: every basis
/// state consistent with all gates, wires and input pins. With
/// `include_output_pin` the output is additionally required to be 1.
///
/// The register is every variable of the network, internal gate outputs
/// included. Internal bits are functions of the free inputs, so the
/// subspace has dimension `2^m` for `m` free inputs.
pub fn constraint_projector(net: &BoolNetwork, include_output_pin: bool) -> Result<DiagonalProjector, StateError> {
    let m = net.free_vars().len();
    if net.form() != crate::boolnet::Form::Open {
        return Err(NetworkError::WrongForm {
            expected: crate::boolnet::Form::Open,
        }
        .into());
    }
    if m > DEFAULT_REGISTER_CAP_BITS {
        return Err(StateError::RegisterTooLarge {
            bits: m,
            cap: DEFAULT_REGISTER_CAP_BITS,
        });
    }
    let y = net.output();
    let mut admissible = BTreeSet::new();
    for index in 0..1u64 << m {
        let a = net.evaluate_index(index)?;
        if include_output_pin && !y.is_some_and(|y| a.get(y)) {
            continue;
        }
        admissible.insert(BasisState::from_assignment(&a));
    }
    Ok(DiagonalProjector {
        n_qubits: net.n_vars(),
        admissible,
    })
}
