use num_complex::Complex64;
use rand::Rng;

use super::ProtocolError;
use crate::boolnet::VarId;
use crate::hilbert::{BasisState, StateVector};

/// Magnitudes in a measured branch count as equal within this tolerance.
pub const AMPLITUDE_TOL: f64 = 1e-12;

/// A periodic function on `0..2p`, stored as its table.
///
/// The argument register holds `n` qubits with qubit 0 as the most
/// significant bit; the value register follows with just enough qubits for
/// the largest table entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimonInstance {
    n: usize,
    p: u64,
    table: Vec<u64>,
    value_bits: usize,
}

impl SimonInstance {
    pub fn new(n: usize, p: u64, table: Vec<u64>) -> Result<Self, ProtocolError> {
        let bad = |m: String| Err(ProtocolError::InvalidSimon(m));
        if n == 0 || n > 20 {
            return bad(format!("argument width {n} must be in 1..=20"));
        }
        if p == 0 {
            return bad("period must be at least 1".into());
        }
        if 2 * p > 1 << n {
            return bad(format!("two periods ({}) do not fit in {n} qubits", 2 * p));
        }
        if table.len() as u64 != 2 * p {
            return bad(format!("table has {} entries, expected {}", table.len(), 2 * p));
        }
        let pu = p as usize;
        if let Some(x) = (0..pu).find(|&x| table[x] != table[x + pu]) {
            return bad(format!("f({x}) != f({})", x + pu));
        }
        let mut first = table[..pu].to_vec();
        first.sort_unstable();
        if first.windows(2).any(|w| w[0] == w[1]) {
            return bad("f repeats a value within one period".into());
        }
        let max = table.iter().copied().max().unwrap_or(0);
        let value_bits = (64 - max.leading_zeros() as usize).max(1);
        Ok(Self {
            n,
            p,
            table,
            value_bits,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn table(&self) -> &[u64] {
        &self.table
    }

    pub fn n_qubits(&self) -> usize {
        self.n + self.value_bits
    }

    pub fn value_register(&self) -> Vec<VarId> {
        (self.n..self.n_qubits()).map(VarId).collect()
    }

    /// Equal superposition of `|x>|f(x)>` over the table's domain.
    pub fn prepared_state(&self) -> StateVector {
        let amp = Complex64::new((self.table.len() as f64).sqrt().recip(), 0.0);
        let entries = self.table.iter().enumerate().map(|(x, &fx)| {
            let mut b = BasisState::zeros(self.n_qubits());
            write_uint(&mut b, 0, self.n, x as u64);
            write_uint(&mut b, self.n, self.value_bits, fx);
            (b, amp)
        });
        StateVector::from_amplitudes(self.n_qubits(), entries).expect("table is nonempty and widths match")
    }

    /// Distinct values of `f`, ascending.
    pub fn values(&self) -> Vec<u64> {
        let mut v = self.table[..self.p as usize].to_vec();
        v.sort_unstable();
        v
    }

    /// The two arguments with `f(x) = k`, or `None` if `k` is not a value.
    pub fn preimage(&self, k: u64) -> Option<[u64; 2]> {
        let x = self.table[..self.p as usize].iter().position(|&v| v == k)? as u64;
        Some([x, x + self.p])
    }
}

fn write_uint(b: &mut BasisState, start: usize, width: usize, value: u64) {
    for i in 0..width {
        b.set(start + i, (value >> (width - 1 - i)) & 1 == 1);
    }
}

#[derive(Debug, Clone)]
pub struct SimonOutcome {
    /// Value read from the second register.
    pub k: u64,
    pub probability: f64,
    /// Arguments left in superposition, ascending.
    pub support: Vec<u64>,
    pub amplitudes_equal: bool,
    pub prepared: StateVector,
    pub post: StateVector,
}

fn outcome(inst: &SimonInstance, prepared: StateVector, post: StateVector, probability: f64) -> SimonOutcome {
    let mut support: Vec<u64> = post.support().map(|b| b.read_uint(0..inst.n)).collect();
    support.sort_unstable();
    support.dedup();
    let mags: Vec<f64> = post.iter().map(|(_, a)| a.norm()).collect();
    let amplitudes_equal = mags.iter().all(|m| (m - mags[0]).abs() <= AMPLITUDE_TOL);
    let k = post
        .support()
        .next()
        .map_or(0, |b| b.read_uint(inst.n..inst.n_qubits()));
    SimonOutcome {
        k,
        probability,
        support,
        amplitudes_equal,
        prepared,
        post,
    }
}

/// Prepares the two-register state and measures the value register.
pub fn simon_demo<R: Rng + ?Sized>(inst: &SimonInstance, rng: &mut R) -> Result<SimonOutcome, ProtocolError> {
    let prepared = inst.prepared_state();
    let (bits, post) = prepared.partial_measure(&inst.value_register(), rng)?;
    let k = bits.iter().fold(0u64, |acc, &b| (acc << 1) | u64::from(b));
    let probability = post_probability(inst, k);
    Ok(outcome(inst, prepared, post, probability))
}

/// The post-measurement branch for a chosen value `k`.
pub fn simon_branch(inst: &SimonInstance, k: u64) -> Result<SimonOutcome, ProtocolError> {
    let prepared = inst.prepared_state();
    let w = inst.value_bits;
    if w < 64 && k >> w != 0 {
        return Err(ProtocolError::InvalidSimon(format!(
            "value {k} does not fit the value register"
        )));
    }
    let bits: Vec<bool> = (0..w).map(|i| (k >> (w - 1 - i)) & 1 == 1).collect();
    let (post, probability) = prepared.condition(&inst.value_register(), &bits)?;
    Ok(outcome(inst, prepared, post, probability))
}

/// Every branch, in ascending `k`.
pub fn simon_branches(inst: &SimonInstance) -> Result<Vec<SimonOutcome>, ProtocolError> {
    inst.values().into_iter().map(|k| simon_branch(inst, k)).collect()
}

fn post_probability(inst: &SimonInstance, k: u64) -> f64 {
    inst.table.iter().filter(|&&v| v == k).count() as f64 / inst.table.len() as f64
}
