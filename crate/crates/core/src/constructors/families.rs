use crate::statecore::{
    superpose, Amplitude, BasisIndex, Provenance, SparseState, DEFAULT_PHASE_ORDER,
};
use crate::{Error, Result, C64};

use super::{checked_pow, FractalParams, MAX_QUDITS, MAX_SUPPORT};

/// Relative sign between the two terms of a Bell pair or gem step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// Phase index of this sign for phase order `order`.
    pub fn phase(self, order: u32) -> u32 {
        match self {
            Sign::Plus => 0,
            Sign::Minus => order / 2,
        }
    }
}

impl std::str::FromStr for Sign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "+" | "plus" => Ok(Sign::Plus),
            "-" | "minus" => Ok(Sign::Minus),
            _ => Err(Error::InvalidParams(format!("unknown sign {s:?}"))),
        }
    }
}

fn provenance(family: &str, c: u64, s: u64, n: u64) -> Option<Provenance> {
    Some(Provenance {
        family: family.into(),
        c,
        s,
        n,
    })
}

/// `|0⟩` in `C^N`.
pub fn build_initial(local_dim: u32) -> Result<SparseState> {
    SparseState::basis(local_dim, BasisIndex::zeros(1))
}

/// `(1/√s) Σ_{j<s} |j…j⟩` over `qudits` qudits.
pub fn diagonal_block(s: u64, qudits: usize, local_dim: u32) -> Result<SparseState> {
    if s as u128 > local_dim as u128 {
        return Err(Error::InvalidParams(format!(
            "local dimension {local_dim} is smaller than s = {s}"
        )));
    }
    let amp = Amplitude::inv_sqrt(s);
    SparseState::from_entries(
        local_dim,
        qudits,
        DEFAULT_PHASE_ORDER,
        (0..s as u32).map(|j| (BasisIndex::repeated(j, qudits), amp.clone())),
    )
}

/// Representative state at scale `n`: `Φ(m+1) = Φ(m) ⊗ (1/√s) Σ_j |j…j⟩`,
/// the appended block spanning `(c−1)·c^m` qudits, starting from `|0⟩`.
pub fn build_representative(c: u64, s: u64, n: u64, local_dim: u32) -> Result<SparseState> {
    let params = FractalParams::new(c, s, n)?;
    if (local_dim as u64) < s {
        return Err(Error::InvalidParams(format!(
            "local dimension {local_dim} is smaller than s = {s}"
        )));
    }
    params
        .qudits()
        .ok_or_else(|| Error::guard(format!("{c}^{n} qudits exceeds {MAX_QUDITS}")))?;
    checked_pow(s, n, MAX_SUPPORT as u64)
        .ok_or_else(|| Error::guard(format!("support {s}^{n} exceeds {MAX_SUPPORT}")))?;
    let mut state = build_initial(local_dim)?;
    let mut width = 1usize;
    for _ in 0..n {
        let block = diagonal_block(s, (c as usize - 1) * width, local_dim)?;
        state = state.tensor(&block)?;
        width *= c as usize;
    }
    Ok(state.with_provenance(provenance("representative", c, s, n)))
}

/// Representative state with the Cantor parameters `(c, s) = (2, 3)` on qutrits.
pub fn build_cantor(n: u64) -> Result<SparseState> {
    let st = build_representative(2, 3, n, 3)?;
    Ok(st.with_provenance(provenance("cantor", 2, 3, n)))
}

/// `(1/√2)(|01⟩ ± |10⟩)`.
pub fn build_bell_pair(sign: Sign) -> SparseState {
    let r = DEFAULT_PHASE_ORDER;
    let h = Amplitude::inv_sqrt(2);
    SparseState::from_entries(
        2,
        2,
        r,
        [
            (BasisIndex::new(vec![0, 1]), h.clone()),
            (BasisIndex::new(vec![1, 0]), h.with_phase(sign.phase(r), r)),
        ],
    )
    .expect("fixed entries")
}

/// `(1/√2)(|i⟩|j⟩ ± |j⟩|i⟩)` for orthogonal qubit states of equal size.
pub fn build_gem_step(i: &SparseState, j: &SparseState, sign: Sign) -> Result<SparseState> {
    if i.local_dim() != 2 {
        return Err(Error::NotQubit(i.local_dim()));
    }
    if j.local_dim() != 2 {
        return Err(Error::NotQubit(j.local_dim()));
    }
    if i.num_qudits() != j.num_qudits() {
        return Err(Error::QuditCountMismatch(i.num_qudits(), j.num_qudits()));
    }
    let ip: C64 = i.inner_product(j)?;
    if i == j || ip.norm() > 1e-9 {
        return Err(Error::NonOrthogonal(ip.norm()));
    }
    if 2 * i.num_qudits() > MAX_QUDITS {
        return Err(Error::guard(format!("{} qubits", 2 * i.num_qudits())));
    }
    if 2usize
        .saturating_mul(i.support_size())
        .saturating_mul(j.support_size())
        > MAX_SUPPORT
    {
        return Err(Error::guard(format!(
            "gem step support {}·{}·2 exceeds {MAX_SUPPORT}",
            i.support_size(),
            j.support_size()
        )));
    }
    let h = Amplitude::inv_sqrt(2);
    let ij = i.tensor(j)?.scaled(&h);
    let ji = j.tensor(i)?.scaled(&h);
    superpose(&[(0, &ij), (sign.phase(ji.phase_order()), &ji)])
}

/// Canonical gem pair at level `m`: level 1 is `(Ψ+, Ψ−)`, and level `k`
/// is `gem_step(G+, G−, ±)` of level `k−1`.
pub fn build_gem_sequence(levels: u32) -> Result<(SparseState, SparseState)> {
    if levels < 1 {
        return Err(Error::InvalidParams(
            "gem sequence needs at least one level".into(),
        ));
    }
    let mut plus = build_bell_pair(Sign::Plus);
    let mut minus = build_bell_pair(Sign::Minus);
    for _ in 1..levels {
        let p = build_gem_step(&plus, &minus, Sign::Plus)?;
        let m = build_gem_step(&plus, &minus, Sign::Minus)?;
        plus = p;
        minus = m;
    }
    let prov = provenance("bellgem", 2, 2, levels as u64 - 1);
    Ok((
        plus.with_provenance(prov.clone()),
        minus.with_provenance(prov),
    ))
}

/// `|i⟩^{⊗3^n}`.
pub fn build_bitflip_state(n: u64, logical: u32) -> Result<SparseState> {
    if logical > 1 {
        return Err(Error::InvalidParams(format!(
            "logical value must be 0 or 1, got {logical}"
        )));
    }
    let q = checked_pow(3, n, MAX_QUDITS as u64)
        .ok_or_else(|| Error::guard(format!("3^{n} qubits exceeds {MAX_QUDITS}")))?;
    let st = SparseState::basis(2, BasisIndex::repeated(logical, q as usize))?;
    Ok(st.with_provenance(provenance("bitflip", 3, 1, n)))
}

/// Linear cluster state `2^{-N/2} ⊗_a (|0⟩σ_z^{a+1} + |1⟩)` with `σ_z^{N+1} = I`.
///
/// Every string is present; string `x` carries sign `(−1)^{#{a : x_a = 0, x_{a+1} = 1}}`.
pub fn build_cluster(qubits: usize) -> Result<SparseState> {
    if !(1..=14).contains(&qubits) {
        return Err(Error::guard(format!(
            "cluster size {qubits} outside 1..=14"
        )));
    }
    let r = DEFAULT_PHASE_ORDER;
    let mag = Amplitude::inv_sqrt(1u64 << qubits);
    let entries = (0..1usize << qubits).map(|v| {
        let digits: Vec<u32> = (0..qubits)
            .map(|p| ((v >> (qubits - 1 - p)) & 1) as u32)
            .collect();
        let flips = digits.windows(2).filter(|w| w[0] == 0 && w[1] == 1).count();
        let amp = if flips % 2 == 1 {
            mag.negated(r)
        } else {
            mag.clone()
        };
        (BasisIndex::new(digits), amp)
    });
    let st = SparseState::from_entries(2, qubits, r, entries)?;
    // chains of 2·2^n qubits sit at scale n of the c = s = 2 sequence
    let prov = (qubits >= 2 && qubits.is_power_of_two())
        .then(|| provenance("cluster", 2, 2, (qubits.trailing_zeros() - 1) as u64))
        .flatten();
    Ok(st.with_provenance(prov))
}
