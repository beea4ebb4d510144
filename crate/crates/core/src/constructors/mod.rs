//! Scale-rule engine and the state families built on it.

mod families;
mod rule;

pub use families::{
    build_bell_pair, build_bitflip_state, build_cantor, build_cluster, build_gem_sequence,
    build_gem_step, build_initial, build_representative, diagonal_block, Sign,
};
pub use rule::{apply_scale_rule, Coefficient, ResolvedSlots, ScaleRule, SlotVector};

use crate::{Error, Result};

/// Largest support a constructor will produce.
pub const MAX_SUPPORT: usize = 1_000_000;
/// Largest qudit count a constructor will produce.
pub const MAX_QUDITS: usize = 10_000;

/// `(c, s, n)`: subsystems per scale change, probability scaling factor, scale index.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FractalParams {
    c: u64,
    s: u64,
    n: u64,
}

impl FractalParams {
    pub fn new(c: u64, s: u64, n: u64) -> Result<Self> {
        if c < 2 {
            return Err(Error::InvalidParams(format!("c must exceed 1, got {c}")));
        }
        if s < 1 {
            return Err(Error::InvalidParams("s must be at least 1".into()));
        }
        Ok(FractalParams { c, s, n })
    }

    pub fn c(&self) -> u64 {
        self.c
    }

    pub fn s(&self) -> u64 {
        self.s
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// `ln c / ln s`, or `log2 c` when `s == 1`.
    pub fn dimension(&self) -> f64 {
        crate::analysis::fractal_dimension::<f64>(self.c, self.s).expect("validated params")
    }

    /// Qudit count `c^n` of the scale-n state, if it fits the guard.
    pub fn qudits(&self) -> Option<usize> {
        checked_pow(self.c, self.n, MAX_QUDITS as u64).map(|v| v as usize)
    }
}

pub fn checked_pow(base: u64, exp: u64, limit: u64) -> Option<u64> {
    let mut v: u64 = 1;
    for _ in 0..exp {
        v = v.checked_mul(base)?;
        if v > limit {
            return None;
        }
    }
    Some(v)
}
