use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_traits::Zero;

use super::SparseState;
use crate::{Complex, DenseVector, Error, Real, Result};

/// Largest dense vector length (`N^Q`).
pub const MAX_DENSE_DIM: usize = 1 << 14;
/// Largest side of a Schmidt coefficient matrix (`N^k`, `N^{Q-k}`).
pub const MAX_SCHMIDT_SIDE: usize = 4096;

fn checked_dim(local_dim: u32, qudits: usize, limit: usize) -> Option<usize> {
    let mut d: usize = 1;
    for _ in 0..qudits {
        d = d.checked_mul(local_dim as usize)?;
        if d > limit {
            return None;
        }
    }
    Some(d)
}

impl SparseState {
    /// Dense amplitudes; index is the base-N value of the digit string.
    pub fn to_dense<T: Real>(&self) -> Result<DenseVector<T>> {
        let dim = checked_dim(self.local_dim, self.num_qudits, MAX_DENSE_DIM).ok_or_else(|| {
            Error::guard(format!(
                "dense vector {}^{} exceeds {MAX_DENSE_DIM}",
                self.local_dim, self.num_qudits
            ))
        })?;
        let mut v = vec![Complex::<T>::zero(); dim];
        for (k, a) in &self.entries {
            v[k.value(self.local_dim)] = a.to_complex(self.phase_order);
        }
        Ok(v)
    }

    /// `⟨self|other⟩` summed over the common support.
    pub fn inner_product<T: Real>(&self, other: &SparseState) -> Result<Complex<T>> {
        if self.local_dim != other.local_dim {
            return Err(Error::LocalDimMismatch(self.local_dim, other.local_dim));
        }
        if self.num_qudits != other.num_qudits {
            return Err(Error::QuditCountMismatch(self.num_qudits, other.num_qudits));
        }
        let (small, large, flip) = if self.entries.len() <= other.entries.len() {
            (self, other, false)
        } else {
            (other, self, true)
        };
        let mut acc = Complex::<T>::zero();
        for (k, a) in &small.entries {
            if let Some(b) = large.entries.get(k) {
                let a = a.to_complex::<T>(small.phase_order);
                let b = b.to_complex::<T>(large.phase_order);
                acc += a.conj() * b;
            }
        }
        Ok(if flip { acc.conj() } else { acc })
    }

    /// Numerical Schmidt rank across the cut after the first `cut` qudits.
    ///
    /// Counts singular values above `1e-9` times the largest. Rows and columns
    /// of the coefficient matrix that are identically zero are dropped before
    /// the SVD; they do not change the rank.
    pub fn schmidt_rank<T: Real>(&self, cut: usize) -> Result<usize> {
        if cut == 0 || cut >= self.num_qudits {
            return Err(Error::InvalidParams(format!(
                "cut must satisfy 0 < k < {}, got {cut}",
                self.num_qudits
            )));
        }
        for side in [cut, self.num_qudits - cut] {
            if checked_dim(self.local_dim, side, MAX_SCHMIDT_SIDE).is_none() {
                return Err(Error::guard(format!(
                    "Schmidt matrix side {}^{side} exceeds {MAX_SCHMIDT_SIDE}",
                    self.local_dim
                )));
            }
        }
        if self.entries.is_empty() {
            return Ok(0);
        }
        let mut rows: BTreeMap<&[u32], usize> = BTreeMap::new();
        let mut cols: BTreeMap<&[u32], usize> = BTreeMap::new();
        for k in self.entries.keys() {
            let (l, r) = k.digits().split_at(cut);
            let n = rows.len();
            rows.entry(l).or_insert(n);
            let n = cols.len();
            cols.entry(r).or_insert(n);
        }
        let mut m = DMatrix::<Complex<T>>::zeros(rows.len(), cols.len());
        for (k, a) in &self.entries {
            let (l, r) = k.digits().split_at(cut);
            m[(rows[l], cols[r])] = a.to_complex(self.phase_order);
        }
        Ok(numerical_rank(m, T::tol(1e-9)))
    }
}

fn numerical_rank<T: Real>(m: DMatrix<Complex<T>>, rel_tol: T) -> usize {
    let sv = m.singular_values();
    let largest = sv
        .iter()
        .copied()
        .fold(T::zero(), |a, b| if b > a { b } else { a });
    if largest <= T::zero() {
        return 0;
    }
    sv.iter().filter(|&&x| x > rel_tol * largest).count()
}

/// `⟨a|b⟩` for dense vectors.
pub fn dense_inner<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> Complex<T> {
    a.iter()
        .zip(b)
        .fold(Complex::zero(), |acc, (x, y)| acc + x.conj() * y)
}
