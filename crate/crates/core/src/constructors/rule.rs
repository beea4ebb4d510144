use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_traits::One;

use crate::statecore::{superpose, Amplitude, BasisIndex, Provenance, SparseState};
use crate::{Error, Rational, Result, C64};

use super::{MAX_QUDITS, MAX_SUPPORT};

/// One entry of a slot table.
#[derive(Clone, Debug, PartialEq)]
pub enum SlotVector {
    /// The state at the previous scale.
    Predecessor,
    /// A computational basis vector with the predecessor's qudit count.
    Basis(BasisIndex),
    /// A caller-supplied state with the predecessor's qudit count.
    Named(Arc<SparseState>),
}

/// A nonzero coefficient: magnitude `1/√s` (implicit) and phase `e^{2πi·phase/R}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coefficient {
    pub indices: Vec<usize>,
    pub phase: u32,
}

impl Coefficient {
    pub fn new(indices: Vec<usize>, phase: u32) -> Self {
        Coefficient { indices, phase }
    }
}

/// One scale step: `Σ_k α_k |Ψ_{k,1}⟩…|Ψ_{k,c}⟩` with exactly `s` nonzero
/// coefficients of magnitude `1/√s`.
///
/// Fields are public so that malformed rules can be represented (and
/// reported on by `verify_scale_step`); `apply_scale_rule` validates.
#[derive(Clone, Debug, PartialEq)]
pub struct ScaleRule {
    pub c: usize,
    pub s: usize,
    pub phase_order: u32,
    /// `slots[j]` maps index values to vectors for tensor slot `j` (0-based).
    pub slots: Vec<BTreeMap<usize, SlotVector>>,
    pub coefficients: Vec<Coefficient>,
}

/// Slot tables with every referenced entry resolved to a state.
pub type ResolvedSlots = Vec<BTreeMap<usize, Arc<SparseState>>>;

impl ScaleRule {
    /// Builds a rule and checks its structural invariants.
    pub fn new(
        c: usize,
        s: usize,
        phase_order: u32,
        slots: Vec<BTreeMap<usize, SlotVector>>,
        coefficients: Vec<Coefficient>,
    ) -> Result<Self> {
        let rule = ScaleRule {
            c,
            s,
            phase_order,
            slots,
            coefficients,
        };
        rule.check_coefficients()?;
        rule.check_slot_tables()?;
        Ok(rule)
    }

    /// The representative step from a state on `prev_qudits` qudits: the
    /// predecessor in slot 1, `|i…i⟩` in every other slot, diagonal coefficients.
    pub fn representative(c: usize, s: usize, prev_qudits: usize) -> Result<Self> {
        if c < 2 || s < 1 {
            return Err(Error::InvalidParams(format!(
                "need c > 1 and s >= 1, got ({c}, {s})"
            )));
        }
        let mut slots = vec![(0..s).map(|i| (i, SlotVector::Predecessor)).collect()];
        for _ in 1..c {
            slots.push(
                (0..s)
                    .map(|i| {
                        (
                            i,
                            SlotVector::Basis(BasisIndex::repeated(i as u32, prev_qudits)),
                        )
                    })
                    .collect(),
            );
        }
        let coefficients = (0..s).map(|i| Coefficient::new(vec![i; c], 0)).collect();
        Self::new(
            c,
            s,
            crate::statecore::DEFAULT_PHASE_ORDER,
            slots,
            coefficients,
        )
    }

    /// The Cantor step `(c, s) = (2, 3)`.
    pub fn cantor(prev_qudits: usize) -> Result<Self> {
        Self::representative(2, 3, prev_qudits)
    }

    /// The repetition step `|i⟩^{⊗m} ↦ |i⟩^{⊗3m}`: `c = 3`, `s = 1`.
    pub fn bitflip(logical: u32, prev_qudits: usize) -> Result<Self> {
        if logical > 1 {
            return Err(Error::InvalidParams(format!(
                "logical value must be 0 or 1, got {logical}"
            )));
        }
        let mut slots = vec![BTreeMap::from([(0, SlotVector::Predecessor)])];
        for _ in 1..3 {
            slots.push(BTreeMap::from([(
                0,
                SlotVector::Basis(BasisIndex::repeated(logical, prev_qudits)),
            )]));
        }
        Self::new(
            3,
            1,
            crate::statecore::DEFAULT_PHASE_ORDER,
            slots,
            vec![Coefficient::new(vec![0, 0, 0], 0)],
        )
    }

    /// The gem step with the minus sibling as predecessor:
    /// index 0 is `plus`, index 1 the predecessor, coefficients on `(0,1)` and `(1,0)`
    /// with relative sign `sign`.
    pub fn gem(plus: SparseState, sign: super::Sign) -> Result<Self> {
        let r = crate::statecore::DEFAULT_PHASE_ORDER;
        let plus = Arc::new(plus);
        let table: BTreeMap<usize, SlotVector> = BTreeMap::from([
            (0, SlotVector::Named(plus.clone())),
            (1, SlotVector::Predecessor),
        ]);
        Self::new(
            2,
            2,
            r,
            vec![table.clone(), table],
            vec![
                Coefficient::new(vec![0, 1], 0),
                Coefficient::new(vec![1, 0], sign.phase(r)),
            ],
        )
    }

    /// Exactly `s` records, indices in `[0, s)`, arity `c`, no repeated tuple.
    pub fn check_coefficients(&self) -> Result<()> {
        if self.c < 2 || self.s < 1 {
            return Err(Error::InvalidRule(format!(
                "need c > 1 and s >= 1, got ({}, {})",
                self.c, self.s
            )));
        }
        if self.phase_order == 0 || !self.phase_order.is_multiple_of(2) {
            return Err(Error::InvalidPhaseOrder(self.phase_order));
        }
        if self.coefficients.len() != self.s {
            return Err(Error::InvalidRule(format!(
                "expected exactly s = {} coefficients, found {}",
                self.s,
                self.coefficients.len()
            )));
        }
        let mut seen = BTreeSet::new();
        for coef in &self.coefficients {
            if coef.indices.len() != self.c {
                return Err(Error::InvalidRule(format!(
                    "coefficient {:?} does not have c = {} indices",
                    coef.indices, self.c
                )));
            }
            if let Some(i) = coef.indices.iter().find(|&&i| i >= self.s) {
                return Err(Error::InvalidRule(format!(
                    "index {i} outside [0, {})",
                    self.s
                )));
            }
            if !seen.insert(&coef.indices) {
                return Err(Error::InvalidRule(format!(
                    "coefficient {:?} listed twice",
                    coef.indices
                )));
            }
        }
        Ok(())
    }

    /// Exact `Σ |α|²`, which is `len · (1/s)`.
    pub fn coefficient_weight(&self) -> Rational {
        Rational::new(
            (self.coefficients.len() as i64).into(),
            (self.s.max(1) as i64).into(),
        )
    }

    /// `c` tables, each covering every index a coefficient uses in that slot.
    pub fn check_slot_tables(&self) -> Result<()> {
        if self.slots.len() != self.c {
            return Err(Error::InvalidRule(format!(
                "expected {} slot tables, found {}",
                self.c,
                self.slots.len()
            )));
        }
        for coef in &self.coefficients {
            for (j, i) in coef.indices.iter().enumerate() {
                if !self.slots[j].contains_key(i) {
                    return Err(Error::SlotResolution(format!(
                        "slot {} has no entry for index {i}",
                        j + 1
                    )));
                }
            }
        }
        Ok(())
    }

    /// `(slot, index)` pairs referenced by some coefficient.
    fn used_entries(&self) -> BTreeSet<(usize, usize)> {
        self.coefficients
            .iter()
            .flat_map(|c| c.indices.iter().copied().enumerate())
            .collect()
    }

    /// Resolves every referenced slot entry against `prev`.
    pub fn resolve(&self, prev: &SparseState) -> Result<ResolvedSlots> {
        self.check_slot_tables()?;
        let prev_arc = Arc::new(prev.clone());
        let mut out: ResolvedSlots = vec![BTreeMap::new(); self.c];
        for (j, i) in self.used_entries() {
            let st = match &self.slots[j][&i] {
                SlotVector::Predecessor => prev_arc.clone(),
                SlotVector::Basis(idx) => {
                    if idx.len() != prev.num_qudits() {
                        return Err(Error::SlotResolution(format!(
                            "slot {} index {i}: basis vector has {} digits, predecessor has {} qudits",
                            j + 1,
                            idx.len(),
                            prev.num_qudits()
                        )));
                    }
                    Arc::new(
                        SparseState::basis(prev.local_dim(), idx.clone()).map_err(|e| {
                            Error::SlotResolution(format!("slot {} index {i}: {e}", j + 1))
                        })?,
                    )
                }
                SlotVector::Named(st) => {
                    if st.num_qudits() != prev.num_qudits() || st.local_dim() != prev.local_dim() {
                        return Err(Error::SlotResolution(format!(
                            "slot {} index {i}: named state shape ({}, {}) differs from predecessor ({}, {})",
                            j + 1,
                            st.local_dim(),
                            st.num_qudits(),
                            prev.local_dim(),
                            prev.num_qudits()
                        )));
                    }
                    st.clone()
                }
            };
            out[j].insert(i, st);
        }
        Ok(out)
    }

    /// Whether some referenced entry is the predecessor (directly, or a named
    /// state exactly equal to it).
    pub fn references_predecessor(&self, prev: &SparseState) -> bool {
        self.used_entries().into_iter().any(|(j, i)| {
            match self.slots.get(j).and_then(|t| t.get(&i)) {
                Some(SlotVector::Predecessor) => true,
                Some(SlotVector::Named(st)) => **st == *prev,
                _ => false,
            }
        })
    }

    /// Distinct vectors used within each slot must be normalized and mutually
    /// orthogonal to within `1e-9`.
    pub fn check_orthonormal(&self, resolved: &ResolvedSlots) -> Result<()> {
        const TOL: f64 = 1e-9;
        for (j, table) in resolved.iter().enumerate() {
            let mut distinct: Vec<&SparseState> = Vec::new();
            for st in table.values() {
                if !distinct.iter().any(|d| **d == **st) {
                    distinct.push(st);
                }
            }
            for (a, x) in distinct.iter().enumerate() {
                if x.norm_squared() != Rational::one() {
                    return Err(Error::Orthonormality(format!(
                        "slot {} has a vector with norm squared {}",
                        j + 1,
                        x.norm_squared()
                    )));
                }
                for y in &distinct[a + 1..] {
                    let ip: C64 = x.inner_product(y)?;
                    if ip.norm() > TOL {
                        return Err(Error::Orthonormality(format!(
                            "slot {} has vectors with overlap {:e}",
                            j + 1,
                            ip.norm()
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Product vectors `|Ψ_{k,1}⟩…|Ψ_{k,c}⟩`, one per coefficient, unscaled.
    pub fn slot_products(&self, resolved: &ResolvedSlots) -> Result<Vec<SparseState>> {
        let mut qudits = 0usize;
        for table in resolved {
            qudits += table.values().next().map_or(0, |s| s.num_qudits());
        }
        if qudits > MAX_QUDITS {
            return Err(Error::guard(format!(
                "scale step output has {qudits} qudits"
            )));
        }
        self.coefficients
            .iter()
            .map(|coef| {
                let mut support = 1usize;
                for (j, i) in coef.indices.iter().enumerate() {
                    support = support.saturating_mul(resolved[j][i].support_size());
                }
                if support > MAX_SUPPORT {
                    return Err(Error::guard(format!("slot product support {support}")));
                }
                let mut it = coef.indices.iter().enumerate();
                let (j0, i0) = it.next().expect("c >= 2");
                let mut acc = (*resolved[j0][i0]).clone();
                for (j, i) in it {
                    acc = acc.tensor(&resolved[j][i])?;
                }
                Ok(acc)
            })
            .collect()
    }
}

/// One scale step: `Σ_k (e^{2πi r_k/R}/√s) ⊗_j Ψ_{k,j}`.
///
/// Validates the rule against `prev` first. The result has `c · Q` qudits and
/// exact norm 1, and its provenance scale index is one more than `prev`'s.
pub fn apply_scale_rule(prev: &SparseState, rule: &ScaleRule) -> Result<SparseState> {
    rule.check_coefficients()?;
    let resolved = rule.resolve(prev)?;
    if !rule.references_predecessor(prev) {
        return Err(Error::InvalidRule(
            "no referenced slot vector is the predecessor".into(),
        ));
    }
    rule.check_orthonormal(&resolved)?;
    let products = rule.slot_products(&resolved)?;
    let scale = Amplitude::inv_sqrt(rule.s as u64);
    let scaled: Vec<SparseState> = products
        .iter()
        .map(|p| p.promoted(crate::statecore::lcm(p.phase_order(), rule.phase_order)))
        .map(|p| p.scaled(&scale))
        .collect();
    let terms: Vec<(u32, &SparseState)> = rule
        .coefficients
        .iter()
        .zip(&scaled)
        .map(|(coef, p)| (coef.phase * (p.phase_order() / rule.phase_order), p))
        .collect();
    let out = superpose(&terms)?;
    let norm = out.norm_squared();
    if norm != Rational::one() {
        return Err(Error::NotNormalized(norm.to_string()));
    }
    let provenance = match prev.provenance() {
        Some(p) => Provenance {
            n: p.n + 1,
            ..p.clone()
        },
        None => Provenance {
            family: "rule".into(),
            c: rule.c as u64,
            s: rule.s as u64,
            n: 1,
        },
    };
    Ok(out.with_provenance(Some(provenance)))
}
