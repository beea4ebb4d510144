//! Fractal characterization: dimension, scale-step verification, scaling
//! reports, Schmidt-rank cuts and local-Clifford equivalence.

mod clifford;
mod step;

pub use clifford::{
    lu_equivalent_by_local_clifford, single_qubit_cliffords, LocalClifford, SingleQubitClifford,
    MAX_LU_QUBITS,
};
pub use step::{rule_basis_probabilities, verify_scale_step, StepCheck, StepReport};

use std::fmt;

use num_traits::Zero;

use crate::statecore::SparseState;
use crate::{Error, Rational, Real, Result};

/// `d = ln c / ln s`, with `d = log2 c` at the bounding scale `s = 1`.
pub fn fractal_dimension<T: Real>(c: u64, s: u64) -> Result<T> {
    if c < 2 || s < 1 {
        return Err(Error::InvalidParams(format!(
            "need c > 1 and s >= 1, got ({c}, {s})"
        )));
    }
    let cf = T::lit(c as f64);
    if s == 1 {
        return Ok(num_traits::Float::log2(cf));
    }
    let sf = T::lit(s as f64);
    Ok(num_traits::Float::ln(cf) / num_traits::Float::ln(sf))
}

/// Computational-basis probabilities across a sequence of scales.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalingReport {
    /// Common outcome probability `p^{(k)}` at each scale.
    pub per_scale_probabilities: Vec<Rational>,
    /// `p^{(k)} / p^{(k+1)}`.
    pub ratios: Vec<Rational>,
    pub uniform: bool,
}

impl fmt::Display for ScalingReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "basis: computational")?;
        writeln!(f, "uniform: {}", self.uniform)?;
        for (k, p) in self.per_scale_probabilities.iter().enumerate() {
            writeln!(f, "p[{k}] = {p}")?;
        }
        for (k, r) in self.ratios.iter().enumerate() {
            writeln!(f, "ratio[{k}] = {r}")?;
        }
        Ok(())
    }
}

/// The common squared amplitude of a state uniform over its support.
pub fn uniform_probability(state: &SparseState) -> Option<Rational> {
    let mut it = state.entries().map(|(_, a)| a.squared_magnitude());
    let first = it.next()?;
    it.all(|p| p == first).then_some(first)
}

/// Outcome probability at each scale and the ratio between consecutive scales.
pub fn probability_scaling_ratio(sequence: &[SparseState]) -> Result<ScalingReport> {
    let probs = sequence
        .iter()
        .map(|s| uniform_probability(s).ok_or(Error::NonUniform))
        .collect::<Result<Vec<_>>>()?;
    let ratios = probs
        .windows(2)
        .map(|w| {
            debug_assert!(!w[1].is_zero());
            &w[0] / &w[1]
        })
        .collect();
    Ok(ScalingReport {
        per_scale_probabilities: probs,
        ratios,
        uniform: true,
    })
}

/// Schmidt rank at each requested prefix cut.
pub fn product_cut_report(state: &SparseState, cuts: &[usize]) -> Result<Vec<(usize, usize)>> {
    cuts.iter()
        .map(|&k| Ok((k, state.schmidt_rank::<f64>(k)?)))
        .collect()
}
