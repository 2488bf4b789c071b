use std::fmt;

use smallvec::SmallVec;

use crate::boolnet::{Assignment, VarId};

/// A computational-basis label. Bit `i` is the eigenvalue of qubit `i`.
///
/// Bits are packed most-significant-first, so the derived ordering matches
/// the lexicographic ordering of the bitstring written qubit 0 first.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisState {
    words: SmallVec<[u64; 2]>,
    len: usize,
}

impl BasisState {
    pub fn zeros(n: usize) -> Self {
        Self {
            words: SmallVec::from_elem(0, n.div_ceil(64)),
            len: n,
        }
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut s = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            s.set(i, b);
        }
        s
    }

    pub fn from_assignment(a: &Assignment) -> Self {
        Self::from_bits(&a.bits)
    }

    /// Parses a `0`/`1` string, qubit 0 first.
    pub fn parse(s: &str) -> Option<Self> {
        let bits: Option<Vec<bool>> = s
            .chars()
            .map(|c| match c {
                '0' => Some(false),
                '1' => Some(true),
                _ => None,
            })
            .collect();
        bits.map(|b| Self::from_bits(&b))
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    fn mask(i: usize) -> (usize, u64) {
        (i / 64, 1u64 << (63 - i % 64))
    }

    #[inline]
    pub fn bit(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        let (w, m) = Self::mask(i);
        self.words[w] & m != 0
    }

    pub fn get(&self, v: VarId) -> bool {
        self.bit(v.0)
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "qubit {i} out of range for {} qubits", self.len);
        let (w, m) = Self::mask(i);
        if value {
            self.words[w] |= m;
        } else {
            self.words[w] &= !m;
        }
    }

    pub fn with(&self, i: usize, value: bool) -> Self {
        let mut s = self.clone();
        s.set(i, value);
        s
    }

    pub fn bits(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.bit(i))
    }

    pub fn to_assignment(&self) -> Assignment {
        Assignment::new(self.bits().collect())
    }

    /// Reads qubits `range` as a big-endian unsigned integer.
    pub fn read_uint(&self, range: std::ops::Range<usize>) -> u64 {
        range.fold(0, |acc, i| (acc << 1) | u64::from(self.bit(i)))
    }
}

impl fmt::Display for BasisState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.bits() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BasisState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{self}>")
    }
}
