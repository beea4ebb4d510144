//! Concatenated repetition (bit-flip) and Bell-pair encoders, digit-flip
//! error injection, and coherent multi-level majority decoding.
//!
//! Decoding acts componentwise on basis strings: each 3-digit block is
//! replaced by its majority digit, level by level from the innermost code
//! outward. This matches syndrome-based recovery on the flip patterns the
//! repetition code corrects and keeps everything exact.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::constructors::{MAX_QUDITS, MAX_SUPPORT};
use crate::statecore::{Accumulator, Amplitude, BasisIndex, SparseState};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CodeKind {
    /// `|0⟩ ↦ |000⟩`, `|1⟩ ↦ |111⟩`.
    BitFlip,
    /// `|0⟩ ↦ |Ψ+⟩`, `|1⟩ ↦ |Ψ−⟩`.
    BellPair,
}

/// A code applied to itself `levels` times.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CodeSpec {
    kind: CodeKind,
    levels: u32,
}

impl CodeSpec {
    pub fn new(kind: CodeKind, levels: u32) -> Result<Self> {
        if levels < 1 {
            return Err(Error::InvalidParams("code needs at least one level".into()));
        }
        Ok(CodeSpec { kind, levels })
    }

    pub fn bitflip(levels: u32) -> Result<Self> {
        Self::new(CodeKind::BitFlip, levels)
    }

    pub fn bellpair(levels: u32) -> Result<Self> {
        Self::new(CodeKind::BellPair, levels)
    }

    pub fn kind(&self) -> CodeKind {
        self.kind
    }

    pub fn levels(&self) -> u32 {
        self.levels
    }

    /// Physical qubits per logical qubit at one level.
    pub fn block_arity(&self) -> usize {
        match self.kind {
            CodeKind::BitFlip => 3,
            CodeKind::BellPair => 2,
        }
    }

    /// Physical qubits per logical qubit after all levels.
    pub fn expansion(&self) -> Option<usize> {
        (self.block_arity()).checked_pow(self.levels)
    }
}

/// `bitflip:L` or `bellpair:L`.
impl FromStr for CodeSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, levels) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidParams(format!("code spec {s:?} is not KIND:LEVELS")))?;
        let levels: u32 = levels
            .parse()
            .map_err(|_| Error::InvalidParams(format!("bad level count {levels:?}")))?;
        match kind {
            "bitflip" => Self::bitflip(levels),
            "bellpair" => Self::bellpair(levels),
            _ => Err(Error::InvalidParams(format!("unknown code kind {kind:?}"))),
        }
    }
}

impl fmt::Display for CodeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            CodeKind::BitFlip => "bitflip",
            CodeKind::BellPair => "bellpair",
        };
        write!(f, "{kind}:{}", self.levels)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecodeReport {
    pub decoded: SparseState,
    /// `(level, block)` for every non-unanimous block, level 1 innermost.
    pub corrections: Vec<(u32, usize)>,
    pub success: bool,
}

fn require_qubits(state: &SparseState) -> Result<()> {
    if state.local_dim() != 2 {
        return Err(Error::NotQubit(state.local_dim()));
    }
    Ok(())
}

/// Applies the concatenated encoder to every basis component.
pub fn encode(state: &SparseState, spec: &CodeSpec) -> Result<SparseState> {
    require_qubits(state)?;
    let physical = spec
        .expansion()
        .and_then(|e| e.checked_mul(state.num_qudits()))
        .filter(|&q| q <= MAX_QUDITS)
        .ok_or_else(|| {
            Error::guard(format!(
                "encoding {} qubits with {spec}",
                state.num_qudits()
            ))
        })?;
    match spec.kind {
        CodeKind::BitFlip => {
            let rep = physical / state.num_qudits();
            let out = state
                .map_indices(physical, |k| {
                    BasisIndex::new(
                        k.digits()
                            .iter()
                            .flat_map(|&d| std::iter::repeat_n(d, rep))
                            .collect(),
                    )
                })
                .expect("repetition is injective");
            Ok(out)
        }
        CodeKind::BellPair => {
            let mut cur = state.clone();
            for _ in 0..spec.levels {
                cur = encode_bell_level(&cur)?;
            }
            Ok(cur)
        }
    }
}

fn encode_bell_level(state: &SparseState) -> Result<SparseState> {
    let q = state.num_qudits();
    let r = state.phase_order();
    let per_entry = 1usize.checked_shl(q as u32).unwrap_or(usize::MAX);
    if state.support_size().saturating_mul(per_entry) > MAX_SUPPORT * 2 {
        return Err(Error::guard(format!(
            "Bell-pair encoding of {} entries over {q} qubits",
            state.support_size()
        )));
    }
    let h = Amplitude::inv_sqrt(2);
    let mut acc = Accumulator::new(r);
    for (k, a) in state.entries() {
        let mut partial: Vec<(Vec<u32>, Amplitude)> = vec![(Vec::with_capacity(2 * q), a.clone())];
        for &d in k.digits() {
            let mut next = Vec::with_capacity(partial.len() * 2);
            for (digits, amp) in partial {
                let base = amp.mul(&h, r);
                let mut d01 = digits.clone();
                d01.extend_from_slice(&[0, 1]);
                let mut d10 = digits;
                d10.extend_from_slice(&[1, 0]);
                let second = if d == 1 {
                    base.negated(r)
                } else {
                    base.clone()
                };
                next.push((d01, base));
                next.push((d10, second));
            }
            partial = next;
        }
        for (digits, amp) in partial {
            acc.add(BasisIndex::new(digits), amp)?;
        }
    }
    let out = SparseState::from_entries(2, 2 * q, r, acc.finish())?;
    if out.support_size() > MAX_SUPPORT {
        return Err(Error::guard(format!(
            "encoded support {}",
            out.support_size()
        )));
    }
    Ok(out)
}

/// Flips the digit at each position.
pub fn inject_errors(state: &SparseState, positions: &[usize]) -> Result<SparseState> {
    require_qubits(state)?;
    let mut seen = BTreeSet::new();
    let mut out = state.clone();
    for &p in positions {
        if !seen.insert(p) {
            return Err(Error::InvalidParams(format!("error position {p} repeated")));
        }
        out = out.apply_bit_flip(p)?;
    }
    Ok(out)
}

fn majority_level(state: &SparseState, level: u32) -> Result<(SparseState, Vec<(u32, usize)>)> {
    let blocks = state.num_qudits() / 3;
    let mut common: Option<Vec<usize>> = None;
    let mut consistent = true;
    let decoded = state.map_indices(blocks, |k| {
        let mut fixed = Vec::new();
        let digits = k
            .digits()
            .chunks(3)
            .enumerate()
            .map(|(b, w)| {
                let ones = w.iter().filter(|&&d| d == 1).count();
                if ones != 0 && ones != 3 {
                    fixed.push(b);
                }
                u32::from(ones >= 2)
            })
            .collect();
        match &common {
            None => common = Some(fixed),
            Some(c) if *c != fixed => consistent = false,
            _ => {}
        }
        BasisIndex::new(digits)
    });
    match decoded {
        Some(d) if consistent => Ok((
            d,
            common
                .unwrap_or_default()
                .into_iter()
                .map(|b| (level, b))
                .collect(),
        )),
        _ => Err(Error::InconsistentCorrections),
    }
}

/// Majority-decodes a concatenated bit-flip register back to its logical qubits.
pub fn decode_majority(state: &SparseState, spec: &CodeSpec) -> Result<DecodeReport> {
    if spec.kind != CodeKind::BitFlip {
        return Err(Error::UnsupportedCode(format!(
            "no majority decoder for {spec}"
        )));
    }
    require_qubits(state)?;
    let expansion = spec.expansion().unwrap_or(usize::MAX);
    if !state.num_qudits().is_multiple_of(expansion) {
        return Err(Error::InvalidParams(format!(
            "{} qubits is not a multiple of {expansion}",
            state.num_qudits()
        )));
    }
    let mut cur = state.clone().with_provenance(None);
    let mut corrections = Vec::new();
    for level in 1..=spec.levels {
        let (next, fixed) = majority_level(&cur, level)?;
        corrections.extend(fixed);
        cur = next;
    }
    let success = cur.num_qudits() == state.num_qudits() / expansion;
    Ok(DecodeReport {
        decoded: cur,
        corrections,
        success,
    })
}

/// `decode(inject(encode(state), errors)) == state`, exactly.
pub fn roundtrip_check(
    state: &SparseState,
    spec: &CodeSpec,
    error_positions: &[usize],
) -> Result<bool> {
    let encoded = encode(state, spec)?;
    let damaged = inject_errors(&encoded, error_positions)?;
    let report = decode_majority(&damaged, spec)?;
    Ok(report.success && report.decoded == *state)
}
