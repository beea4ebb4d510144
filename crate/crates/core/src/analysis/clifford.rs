use std::fmt;

use num_traits::{One, Zero};

use crate::statecore::{dense_inner, SparseState};
use crate::{Complex, Error, Real, Result};

/// Largest register the brute-force Clifford search accepts.
pub const MAX_LU_QUBITS: usize = 5;

/// A single-qubit Clifford unitary, labelled by the H/S word that generated it.
///
/// The word is read left to right as the order of application, so `"HS"` is
/// the matrix `S·H`. The identity has the empty word.
#[derive(Clone, Debug, PartialEq)]
pub struct SingleQubitClifford<T: Real> {
    pub index: usize,
    pub word: String,
    pub matrix: [[Complex<T>; 2]; 2],
}

impl<T: Real> fmt::Display for SingleQubitClifford<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            write!(f, "I")
        } else {
            write!(f, "{}", self.word)
        }
    }
}

/// A product of single-qubit Cliffords, one per qubit, with the fidelity it achieves.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalClifford<T: Real> {
    pub gates: Vec<SingleQubitClifford<T>>,
    pub fidelity: T,
}

impl<T: Real> fmt::Display for LocalClifford<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let words: Vec<String> = self.gates.iter().map(|g| g.to_string()).collect();
        write!(f, "({}) fidelity {}", words.join(", "), self.fidelity)
    }
}

type Mat2<T> = [[Complex<T>; 2]; 2];

fn matmul<T: Real>(a: &Mat2<T>, b: &Mat2<T>) -> Mat2<T> {
    let mut out = [[Complex::zero(); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

/// `|tr(A†B)| = 2` exactly when unitaries A and B agree up to a global phase.
fn same_up_to_phase<T: Real>(a: &Mat2<T>, b: &Mat2<T>) -> bool {
    let mut tr = Complex::<T>::zero();
    for i in 0..2 {
        for k in 0..2 {
            tr += a[k][i].conj() * b[k][i];
        }
    }
    num_traits::Float::abs(tr.norm() - T::lit(2.0)) < T::tol(1e-9)
}

/// The 24 single-qubit Cliffords modulo global phase, in breadth-first order
/// over words in `H` and `S` (identity first).
pub fn single_qubit_cliffords<T: Real>() -> Vec<SingleQubitClifford<T>> {
    let o = Complex::<T>::zero();
    let one = Complex::<T>::one();
    let r = Complex::new(T::lit(std::f64::consts::FRAC_1_SQRT_2), T::zero());
    let h: Mat2<T> = [[r, r], [r, -r]];
    let s: Mat2<T> = [[one, o], [o, Complex::new(T::zero(), T::one())]];
    let identity: Mat2<T> = [[one, o], [o, one]];

    let mut out: Vec<SingleQubitClifford<T>> = vec![SingleQubitClifford {
        index: 0,
        word: String::new(),
        matrix: identity,
    }];
    let mut frontier = 0;
    while frontier < out.len() {
        for (g, name) in [(&h, 'H'), (&s, 'S')] {
            let m = matmul(g, &out[frontier].matrix);
            if !out.iter().any(|c| same_up_to_phase(&c.matrix, &m)) {
                let mut word = out[frontier].word.clone();
                word.push(name);
                out.push(SingleQubitClifford {
                    index: out.len(),
                    word,
                    matrix: m,
                });
            }
        }
        frontier += 1;
    }
    out
}

fn apply_on_qubit<T: Real>(
    v: &[Complex<T>],
    u: &Mat2<T>,
    q: usize,
    nq: usize,
    out: &mut [Complex<T>],
) {
    let stride = 1usize << (nq - 1 - q);
    for base in 0..v.len() {
        if base & stride != 0 {
            continue;
        }
        let (a0, a1) = (v[base], v[base | stride]);
        out[base] = u[0][0] * a0 + u[0][1] * a1;
        out[base | stride] = u[1][0] * a0 + u[1][1] * a1;
    }
}

/// Searches all products of single-qubit Cliffords for one taking `a` to `b`
/// with `|⟨b|U a⟩| > 1 − 1e-9`; tuples are tried in lexicographic order of
/// Clifford index (qubit 0 most significant) and the first hit is returned.
pub fn lu_equivalent_by_local_clifford<T: Real>(
    a: &SparseState,
    b: &SparseState,
) -> Result<Option<LocalClifford<T>>> {
    for st in [a, b] {
        if st.local_dim() != 2 {
            return Err(Error::NotQubit(st.local_dim()));
        }
    }
    if a.num_qudits() != b.num_qudits() {
        return Err(Error::QuditCountMismatch(a.num_qudits(), b.num_qudits()));
    }
    let nq = a.num_qudits();
    if nq > MAX_LU_QUBITS {
        return Err(Error::guard(format!(
            "Clifford search over {nq} qubits exceeds {MAX_LU_QUBITS}"
        )));
    }
    let cliffords = single_qubit_cliffords::<T>();
    let va = a.to_dense::<T>()?;
    let vb = b.to_dense::<T>()?;
    let threshold = T::one() - T::tol(1e-9);

    // buffers[q] holds the vector after gates on qubits 0..q
    let mut buffers = vec![va.clone(); nq + 1];
    let mut choice = vec![0usize; nq];
    let found = search(&cliffords, &vb, nq, 0, &mut buffers, &mut choice, threshold);
    Ok(found.map(|fidelity| LocalClifford {
        gates: choice.iter().map(|&i| cliffords[i].clone()).collect(),
        fidelity,
    }))
}

fn search<T: Real>(
    cliffords: &[SingleQubitClifford<T>],
    target: &[Complex<T>],
    nq: usize,
    q: usize,
    buffers: &mut [Vec<Complex<T>>],
    choice: &mut [usize],
    threshold: T,
) -> Option<T> {
    if q == nq {
        let f = dense_inner(target, &buffers[nq]).norm();
        return (f > threshold).then_some(f);
    }
    for (i, c) in cliffords.iter().enumerate() {
        let (done, rest) = buffers.split_at_mut(q + 1);
        apply_on_qubit(&done[q], &c.matrix, q, nq, &mut rest[0]);
        choice[q] = i;
        if let Some(f) = search(cliffords, target, nq, q + 1, buffers, choice, threshold) {
            return Some(f);
        }
    }
    None
}
