use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow};

use crate::{Complex, Rational, Real};

/// Exact amplitude `e^{2πi·phase/R} · Π p^{-e_p/2}`.
///
/// The phase order `R` lives on the owning state, so arithmetic that touches
/// the phase takes it as an argument. Magnitude bases are always stored as
/// primes with nonzero exponents, which makes derived equality exact value
/// equality for a fixed `R`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Amplitude {
    phase: u32,
    mag: BTreeMap<u32, i32>,
}

impl Amplitude {
    pub fn one() -> Self {
        Amplitude {
            phase: 0,
            mag: BTreeMap::new(),
        }
    }

    /// Builds an amplitude from `(base, exponent)` pairs. Composite bases are
    /// split into primes; zero exponents vanish. `phase` is taken mod `order`.
    pub fn new(phase: u32, order: u32, factors: impl IntoIterator<Item = (u32, i32)>) -> Self {
        let mut amp = Amplitude {
            phase: phase % order,
            mag: BTreeMap::new(),
        };
        for (base, exp) in factors {
            amp.add_exponent(base, exp);
        }
        amp
    }

    /// `1/√s`.
    pub fn inv_sqrt(s: u64) -> Self {
        let mut amp = Self::one();
        for (p, k) in factorize(s) {
            amp.add_exponent_prime(p, k as i32);
        }
        amp
    }

    /// The positive integer `k` as a magnitude (`p^{-e/2}` with `e = -2 v_p(k)`).
    pub fn integer(k: u64) -> Self {
        let mut amp = Self::one();
        for (p, m) in factorize(k) {
            amp.add_exponent_prime(p, -2 * m as i32);
        }
        amp
    }

    pub fn phase(&self) -> u32 {
        self.phase
    }

    /// Prime bases and exponents, bases strictly increasing.
    pub fn exponents(&self) -> impl Iterator<Item = (u32, i32)> + '_ {
        self.mag.iter().map(|(&b, &e)| (b, e))
    }

    pub fn is_unit_magnitude(&self) -> bool {
        self.mag.is_empty()
    }

    pub fn same_magnitude(&self, other: &Amplitude) -> bool {
        self.mag == other.mag
    }

    pub fn with_phase(mut self, phase: u32, order: u32) -> Self {
        self.phase = phase % order;
        self
    }

    /// Product of two amplitudes sharing phase order `order`.
    pub fn mul(&self, other: &Amplitude, order: u32) -> Amplitude {
        let mut out = self.clone();
        out.phase = ((self.phase as u64 + other.phase as u64) % order as u64) as u32;
        for (&b, &e) in &other.mag {
            out.add_exponent_prime(b, e);
        }
        out
    }

    pub fn negated(&self, order: u32) -> Amplitude {
        let mut out = self.clone();
        out.phase = (self.phase + order / 2) % order;
        out
    }

    pub fn conj(&self, order: u32) -> Amplitude {
        let mut out = self.clone();
        out.phase = (order - self.phase) % order;
        out
    }

    /// Re-expresses the phase index from order `from` to order `to`
    /// (`to` must be a multiple of `from`).
    pub(crate) fn promote(&self, from: u32, to: u32) -> Amplitude {
        debug_assert_eq!(to % from, 0);
        let mut out = self.clone();
        out.phase = self.phase * (to / from);
        out
    }

    /// `|a|² = Π p^{-e_p}` as an exact rational.
    pub fn squared_magnitude(&self) -> Rational {
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for (&b, &e) in &self.mag {
            let pow: BigInt = Pow::pow(BigInt::from(b), e.unsigned_abs());
            if e > 0 {
                den *= pow;
            } else {
                num *= pow;
            }
        }
        Rational::new(num, den)
    }

    pub fn magnitude<T: Real>(&self) -> T {
        self.mag.iter().fold(T::one(), |acc, (&b, &e)| {
            acc * num_traits::Float::powf(T::lit(b as f64), T::lit(-(e as f64) / 2.0))
        })
    }

    pub fn to_complex<T: Real>(&self, order: u32) -> Complex<T> {
        unit_phase::<T>(self.phase, order) * self.magnitude::<T>()
    }

    fn add_exponent(&mut self, base: u32, exp: i32) {
        for (p, k) in factorize(base as u64) {
            self.add_exponent_prime(p, exp * k as i32);
        }
    }

    fn add_exponent_prime(&mut self, p: u32, exp: i32) {
        if exp == 0 {
            return;
        }
        let e = self.mag.entry(p).or_insert(0);
        *e += exp;
        if *e == 0 {
            self.mag.remove(&p);
        }
    }
}

/// `e^{2πi·r/R}` with exact values at multiples of a quarter turn.
pub fn unit_phase<T: Real>(r: u32, order: u32) -> Complex<T> {
    let r = r % order;
    if (4 * r).is_multiple_of(order) {
        return match 4 * r / order {
            0 => Complex::new(T::one(), T::zero()),
            1 => Complex::new(T::zero(), T::one()),
            2 => Complex::new(-T::one(), T::zero()),
            _ => Complex::new(T::zero(), -T::one()),
        };
    }
    let theta = T::lit(2.0 * std::f64::consts::PI * r as f64 / order as f64);
    Complex::new(num_traits::Float::cos(theta), num_traits::Float::sin(theta))
}

/// Prime factorization by trial division, primes ascending.
pub(crate) fn factorize(mut n: u64) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        let mut k = 0;
        while n.is_multiple_of(p) {
            n /= p;
            k += 1;
        }
        if k > 0 {
            out.push((p as u32, k));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n as u32, 1));
    }
    out
}

pub(crate) fn lcm(a: u32, b: u32) -> u32 {
    a.lcm(&b)
}

impl fmt::Display for Amplitude {
    /// Renders as `<phase> <base:exp,...>` (or `<phase> 1` for unit magnitude).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ", self.phase)?;
        if self.mag.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.mag.iter().map(|(b, e)| format!("{b}:{e}")).collect();
        write!(f, "{}", parts.join(","))
    }
}
