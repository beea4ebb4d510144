//! Exact construction, verification and analysis of self-similar
//! ("fractal") multi-qudit pure states.
//!
//! States are held sparsely with exact amplitudes (a root-of-unity phase
//! times a product of inverse square roots of primes), so every state in
//! the worked families compares bit-exactly against its hand-written ket.
//! Numerical work (inner products, Schmidt ranks, Clifford searches) runs
//! on a dense path that is generic over the float type through [`Real`].
//!
//! Module map:
//! - [`statecore`]: amplitudes, sparse states, tensor/superpose, dense path.
//! - [`constructors`]: the scale-rule engine and the state families.
//! - [`analysis`]: dimension, step verification, scaling reports, LU search.
//! - [`codes`]: concatenated repetition and Bell-pair encoders, majority decode.
//! - [`io`]: state/rule file formats and support rendering.
//! - [`cli`]: the `qfs` command-line front end.

pub mod analysis;
pub mod cli;
pub mod codes;
pub mod constructors;
pub mod error;
pub mod io;
pub mod scalar;
pub mod statecore;

pub use error::{Error, Result};
pub use scalar::Real;
pub use statecore::{Amplitude, BasisIndex, Provenance, SparseState};

/// Exact probabilities and squared norms.
pub type Rational = num_rational::BigRational;

/// Complex scalar used by the dense path.
pub type Complex<T> = num_complex::Complex<T>;
pub type C64 = Complex<f64>;
pub type C32 = Complex<f32>;

/// Dense state vector, index = digits read base-N, most significant first.
pub type DenseVector<T> = Vec<Complex<T>>;
pub type DenseVector64 = DenseVector<f64>;
pub type DenseVector32 = DenseVector<f32>;

pub type LocalClifford64 = analysis::LocalClifford<f64>;
