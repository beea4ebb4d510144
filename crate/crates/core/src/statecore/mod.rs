//! Exact sparse multi-qudit pure states.

mod amplitude;
mod dense;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

pub(crate) use amplitude::lcm;
pub use amplitude::{unit_phase, Amplitude};
pub use dense::{dense_inner, MAX_DENSE_DIM, MAX_SCHMIDT_SIDE};

use crate::{Error, Rational, Result};

/// Default phase order: multiples of π/4.
pub const DEFAULT_PHASE_ORDER: u32 = 8;

/// Computational basis label, most significant (leftmost ket symbol) first.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisIndex(Vec<u32>);

impl BasisIndex {
    pub fn new(digits: Vec<u32>) -> Self {
        BasisIndex(digits)
    }

    /// Parses a concatenated digit string such as `"0101"` (digits 0-9 only).
    pub fn from_str_digits(s: &str) -> Result<Self> {
        s.chars()
            .map(|ch| {
                ch.to_digit(10)
                    .ok_or_else(|| Error::InvalidBasisIndex(s.to_string()))
            })
            .collect::<Result<Vec<_>>>()
            .map(BasisIndex)
    }

    pub fn zeros(len: usize) -> Self {
        BasisIndex(vec![0; len])
    }

    pub fn repeated(digit: u32, len: usize) -> Self {
        BasisIndex(vec![digit; len])
    }

    pub fn digits(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &BasisIndex) -> BasisIndex {
        let mut d = Vec::with_capacity(self.len() + other.len());
        d.extend_from_slice(&self.0);
        d.extend_from_slice(&other.0);
        BasisIndex(d)
    }

    /// Digits read as a base-`local_dim` integer.
    pub fn value(&self, local_dim: u32) -> usize {
        self.0
            .iter()
            .fold(0usize, |acc, &d| acc * local_dim as usize + d as usize)
    }

    pub(crate) fn digits_mut(&mut self) -> &mut Vec<u32> {
        &mut self.0
    }
}

impl fmt::Display for BasisIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().all(|&d| d < 10) {
            for d in &self.0 {
                write!(f, "{d}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
            write!(f, "{}", parts.join(","))
        }
    }
}

/// Optional record of how a state was produced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Provenance {
    pub family: String,
    pub c: u64,
    pub s: u64,
    pub n: u64,
}

/// Sparse pure state over `num_qudits` qudits of local dimension `local_dim`.
///
/// Only nonzero entries are stored. All amplitudes share the state's phase
/// order. Equality compares the vectors exactly (after promoting both to a
/// common phase order) and ignores provenance.
#[derive(Clone, Debug)]
pub struct SparseState {
    local_dim: u32,
    num_qudits: usize,
    phase_order: u32,
    entries: BTreeMap<BasisIndex, Amplitude>,
    provenance: Option<Provenance>,
}

impl SparseState {
    /// The zero vector.
    pub fn empty(local_dim: u32, num_qudits: usize, phase_order: u32) -> Result<Self> {
        if local_dim < 2 {
            return Err(Error::InvalidParams(format!(
                "local dimension must be at least 2, got {local_dim}"
            )));
        }
        if phase_order == 0 || !phase_order.is_multiple_of(2) {
            return Err(Error::InvalidPhaseOrder(phase_order));
        }
        Ok(SparseState {
            local_dim,
            num_qudits,
            phase_order,
            entries: BTreeMap::new(),
            provenance: None,
        })
    }

    /// A computational basis state with amplitude 1.
    pub fn basis(local_dim: u32, index: BasisIndex) -> Result<Self> {
        let mut st = Self::empty(local_dim, index.len(), DEFAULT_PHASE_ORDER)?;
        st.check_index(&index)?;
        st.entries.insert(index, Amplitude::one());
        Ok(st)
    }

    /// Builds a state from explicit entries; rejects duplicates and bad digits.
    pub fn from_entries(
        local_dim: u32,
        num_qudits: usize,
        phase_order: u32,
        entries: impl IntoIterator<Item = (BasisIndex, Amplitude)>,
    ) -> Result<Self> {
        let mut st = Self::empty(local_dim, num_qudits, phase_order)?;
        for (idx, amp) in entries {
            st.check_index(&idx)?;
            let phase = amp.phase();
            let amp = amp.with_phase(phase, phase_order);
            if st.entries.insert(idx.clone(), amp).is_some() {
                return Err(Error::InvalidBasisIndex(format!("duplicate index {idx}")));
            }
        }
        Ok(st)
    }

    /// `(1/√norm) Σ ±|x⟩` from signed digit strings such as `"+0101"` / `"-1010"`
    /// (an unsigned string counts as `+`). Digits 0-9 only.
    pub fn ket(local_dim: u32, norm: u64, terms: &[&str]) -> Result<Self> {
        let Some(first) = terms.first() else {
            return Err(Error::InvalidParams("ket needs at least one term".into()));
        };
        let q = first.trim_start_matches(['+', '-']).len();
        let scale = Amplitude::inv_sqrt(norm);
        let r = DEFAULT_PHASE_ORDER;
        let entries = terms
            .iter()
            .map(|t| {
                let neg = t.starts_with('-');
                let idx = BasisIndex::from_str_digits(t.trim_start_matches(['+', '-']))?;
                let amp = if neg { scale.negated(r) } else { scale.clone() };
                Ok((idx, amp))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_entries(local_dim, q, r, entries)
    }

    pub fn local_dim(&self) -> u32 {
        self.local_dim
    }

    pub fn num_qudits(&self) -> usize {
        self.num_qudits
    }

    pub fn phase_order(&self) -> u32 {
        self.phase_order
    }

    pub fn provenance(&self) -> Option<&Provenance> {
        self.provenance.as_ref()
    }

    pub fn with_provenance(mut self, provenance: Option<Provenance>) -> Self {
        self.provenance = provenance;
        self
    }

    pub fn entries(&self) -> impl ExactSizeIterator<Item = (&BasisIndex, &Amplitude)> {
        self.entries.iter()
    }

    pub fn amplitude(&self, index: &BasisIndex) -> Option<&Amplitude> {
        self.entries.get(index)
    }

    pub fn support_size(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Same vector re-expressed with phase order `order` (a multiple of the current one).
    pub fn promoted(&self, order: u32) -> SparseState {
        if order == self.phase_order {
            return self.clone();
        }
        let from = self.phase_order;
        SparseState {
            phase_order: order,
            entries: self
                .entries
                .iter()
                .map(|(k, a)| (k.clone(), a.promote(from, order)))
                .collect(),
            ..self.clone()
        }
    }

    /// Every amplitude multiplied by `amp` (given in this state's phase order).
    pub fn scaled(&self, amp: &Amplitude) -> SparseState {
        let r = self.phase_order;
        SparseState {
            entries: self
                .entries
                .iter()
                .map(|(k, a)| (k.clone(), a.mul(amp, r)))
                .collect(),
            ..self.clone()
        }
    }

    /// `self ⊗ other`: digit strings concatenate, amplitudes multiply.
    pub fn tensor(&self, other: &SparseState) -> Result<SparseState> {
        if self.local_dim != other.local_dim {
            return Err(Error::LocalDimMismatch(self.local_dim, other.local_dim));
        }
        let r = lcm(self.phase_order, other.phase_order);
        let a = self.promoted(r);
        let b = other.promoted(r);
        let mut entries = BTreeMap::new();
        for (x, ax) in &a.entries {
            for (y, by) in &b.entries {
                entries.insert(x.concat(y), ax.mul(by, r));
            }
        }
        Ok(SparseState {
            local_dim: self.local_dim,
            num_qudits: self.num_qudits + other.num_qudits,
            phase_order: r,
            entries,
            provenance: None,
        })
    }

    /// Exact `Σ |a_x|²`.
    pub fn norm_squared(&self) -> Rational {
        self.entries
            .values()
            .fold(Rational::zero(), |acc, a| acc + a.squared_magnitude())
    }

    /// Born-rule probability of computational outcome `x` (0 if absent).
    pub fn outcome_probability(&self, x: &BasisIndex) -> Result<Rational> {
        if x.len() != self.num_qudits {
            return Err(Error::QuditCountMismatch(x.len(), self.num_qudits));
        }
        Ok(self
            .entries
            .get(x)
            .map(Amplitude::squared_magnitude)
            .unwrap_or_else(Rational::zero))
    }

    /// Toggles the digit at `position` in every entry (qubits only).
    pub fn apply_bit_flip(&self, position: usize) -> Result<SparseState> {
        self.check_qubit_position(position)?;
        let entries = self
            .entries
            .iter()
            .map(|(k, a)| {
                let mut k = k.clone();
                k.digits_mut()[position] ^= 1;
                (k, a.clone())
            })
            .collect();
        Ok(SparseState {
            entries,
            ..self.clone()
        })
    }

    /// Negates entries with digit 1 at `position` (qubits only).
    pub fn apply_sigma_z(&self, position: usize) -> Result<SparseState> {
        self.check_qubit_position(position)?;
        let r = self.phase_order;
        let entries = self
            .entries
            .iter()
            .map(|(k, a)| {
                let a = if k.digits()[position] == 1 {
                    a.negated(r)
                } else {
                    a.clone()
                };
                (k.clone(), a)
            })
            .collect();
        Ok(SparseState {
            entries,
            ..self.clone()
        })
    }

    /// Applies `map` to every basis index. Fails if two indices collide.
    pub(crate) fn map_indices(
        &self,
        num_qudits: usize,
        mut map: impl FnMut(&BasisIndex) -> BasisIndex,
    ) -> Option<SparseState> {
        let mut entries = BTreeMap::new();
        for (k, a) in &self.entries {
            if entries.insert(map(k), a.clone()).is_some() {
                return None;
            }
        }
        Some(SparseState {
            num_qudits,
            entries,
            ..self.clone()
        })
    }

    fn check_index(&self, idx: &BasisIndex) -> Result<()> {
        if idx.len() != self.num_qudits {
            return Err(Error::QuditCountMismatch(idx.len(), self.num_qudits));
        }
        if idx.digits().iter().any(|&d| d >= self.local_dim) {
            return Err(Error::InvalidBasisIndex(format!(
                "{idx} has a digit >= {}",
                self.local_dim
            )));
        }
        Ok(())
    }

    fn check_qubit_position(&self, position: usize) -> Result<()> {
        if self.local_dim != 2 {
            return Err(Error::NotQubit(self.local_dim));
        }
        if position >= self.num_qudits {
            return Err(Error::PositionOutOfRange {
                position,
                num_qudits: self.num_qudits,
            });
        }
        Ok(())
    }
}

impl PartialEq for SparseState {
    fn eq(&self, other: &Self) -> bool {
        if self.local_dim != other.local_dim || self.num_qudits != other.num_qudits {
            return false;
        }
        if self.phase_order == other.phase_order {
            return self.entries == other.entries;
        }
        let r = lcm(self.phase_order, other.phase_order);
        self.promoted(r).entries == other.promoted(r).entries
    }
}

impl Eq for SparseState {}

/// Exact linear combination `Σ e^{2πi·r_k/R} ψ_k` without renormalization.
///
/// Colliding amplitudes combine exactly when they share a magnitude and their
/// phases differ by 0 or π (so the sum is an integer multiple of one of them);
/// any other collision is [`Error::RingOverflow`].
pub fn superpose(terms: &[(u32, &SparseState)]) -> Result<SparseState> {
    let Some((_, first)) = terms.first() else {
        return Err(Error::InvalidParams(
            "superpose needs at least one term".into(),
        ));
    };
    let mut r = first.phase_order;
    for (_, t) in terms {
        if t.local_dim != first.local_dim {
            return Err(Error::LocalDimMismatch(first.local_dim, t.local_dim));
        }
        if t.num_qudits != first.num_qudits {
            return Err(Error::QuditCountMismatch(first.num_qudits, t.num_qudits));
        }
        r = lcm(r, t.phase_order);
    }
    let mut acc = Accumulator::new(r);
    for (phase, t) in terms {
        // term phases are relative to the term's own phase order
        let shift = Amplitude::one().with_phase(*phase * (r / t.phase_order), r);
        for (k, a) in &t.promoted(r).entries {
            acc.add(k.clone(), a.mul(&shift, r))?;
        }
    }
    Ok(SparseState {
        local_dim: first.local_dim,
        num_qudits: first.num_qudits,
        phase_order: r,
        entries: acc.finish(),
        provenance: None,
    })
}

/// Collects amplitudes per basis index, combining collisions exactly.
pub(crate) struct Accumulator {
    order: u32,
    sums: BTreeMap<BasisIndex, (Amplitude, i64)>,
}

impl Accumulator {
    pub(crate) fn new(order: u32) -> Self {
        Accumulator {
            order,
            sums: BTreeMap::new(),
        }
    }

    pub(crate) fn add(&mut self, index: BasisIndex, amp: Amplitude) -> Result<()> {
        use std::collections::btree_map::Entry;
        match self.sums.entry(index) {
            Entry::Vacant(v) => {
                v.insert((amp, 1));
            }
            Entry::Occupied(mut o) => {
                let (base, net) = o.get_mut();
                if *net == 0 {
                    *base = amp;
                    *net = 1;
                } else if !base.same_magnitude(&amp) {
                    return Err(Error::RingOverflow);
                } else if base.phase() == amp.phase() {
                    *net += 1;
                } else if (base.phase() + self.order / 2) % self.order == amp.phase() {
                    *net -= 1;
                } else {
                    return Err(Error::RingOverflow);
                }
            }
        }
        Ok(())
    }

    pub(crate) fn finish(self) -> BTreeMap<BasisIndex, Amplitude> {
        let r = self.order;
        self.sums
            .into_iter()
            .filter(|(_, (_, net))| *net != 0)
            .map(|(k, (base, net))| {
                let signed = if net < 0 { base.negated(r) } else { base };
                let amp = if net.unsigned_abs() == 1 {
                    signed
                } else {
                    signed.mul(&Amplitude::integer(net.unsigned_abs()), r)
                };
                (k, amp)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests;
