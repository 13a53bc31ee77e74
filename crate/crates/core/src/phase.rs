//! Rational phases and affine phase entries.
//!
//! A `RationalPhase` `q` stands for the unimodular complex number
//! `exp(2*pi*i*q)`; adding phases multiplies those values. An `AffineEntry`
//! extends this with an integer linear form in free real parameters, so an
//! entry `(q, c)` at the parameter point `x` has the value
//! `exp(i*(2*pi*q + c.x))`. Bases are measured in turns, parameters in
//! radians.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_complex::Complex64;
use num_integer::Integer;
use num_rational::Rational64;

use crate::error::{Error, Result};

/// A rational number in `[0, 1)` representing `exp(2*pi*i*q)`.
/// Stored reduced; arithmetic wraps mod 1.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct RationalPhase {
    num: i64,
    den: i64,
}

impl Ord for RationalPhase {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.num as i128 * other.den as i128).cmp(&(other.num as i128 * self.den as i128))
    }
}

impl PartialOrd for RationalPhase {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl RationalPhase {
    pub const ZERO: RationalPhase = RationalPhase { num: 0, den: 1 };
    pub const HALF: RationalPhase = RationalPhase { num: 1, den: 2 };
    pub const QUARTER: RationalPhase = RationalPhase { num: 1, den: 4 };
    pub const THREE_QUARTERS: RationalPhase = RationalPhase { num: 3, den: 4 };

    /// Builds `num/den` reduced mod 1. Fails only on a zero denominator.
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidPhase("zero denominator".into()));
        }
        let (num, den) = if den < 0 {
            (-(num as i128), -(den as i128))
        } else {
            (num as i128, den as i128)
        };
        Ok(Self::reduced(num, den))
    }

    /// Internal constructor over wide integers; reduces mod 1 and normalizes.
    /// Phase denominators stay tiny in every supported workflow, so a reduced
    /// value that does not fit `i64` is treated as a usage error.
    fn reduced(num: i128, den: i128) -> Self {
        debug_assert!(den > 0);
        let num = num.rem_euclid(den);
        let g = num.gcd(&den);
        let (num, den) = (num / g, den / g);
        RationalPhase {
            num: i64::try_from(num).expect("phase numerator out of range"),
            den: i64::try_from(den).expect("phase denominator out of range"),
        }
    }

    pub fn numer(self) -> i64 {
        self.num
    }

    pub fn denom(self) -> i64 {
        self.den
    }

    pub fn as_ratio(self) -> Rational64 {
        Rational64::new_raw(self.num, self.den)
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }

    /// The phase as a fraction of a full turn, in `[0, 1)`.
    pub fn turns(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// The angle in radians, in `[0, 2*pi)`.
    pub fn radians(self) -> f64 {
        2.0 * std::f64::consts::PI * self.turns()
    }

    /// The unimodular value `exp(2*pi*i*q)`.
    pub fn to_complex(self) -> Complex64 {
        Complex64::from_polar(1.0, self.radians())
    }
}

impl Add for RationalPhase {
    type Output = RationalPhase;
    fn add(self, rhs: Self) -> Self {
        let (an, ad) = (self.num as i128, self.den as i128);
        let (bn, bd) = (rhs.num as i128, rhs.den as i128);
        Self::reduced(an * bd + bn * ad, ad * bd)
    }
}

impl Sub for RationalPhase {
    type Output = RationalPhase;
    fn sub(self, rhs: Self) -> Self {
        let (an, ad) = (self.num as i128, self.den as i128);
        let (bn, bd) = (rhs.num as i128, rhs.den as i128);
        Self::reduced(an * bd - bn * ad, ad * bd)
    }
}

impl Neg for RationalPhase {
    type Output = RationalPhase;
    fn neg(self) -> Self {
        Self::reduced(-(self.num as i128), self.den as i128)
    }
}

impl fmt::Display for RationalPhase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.num == 0 {
            write!(f, "0")
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl fmt::Debug for RationalPhase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for RationalPhase {
    type Err = Error;

    /// Accepts `p/q` or a bare integer (which reduces to phase 0).
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad phase {s:?}"));
        match s.split_once('/') {
            Some((p, q)) => {
                let p: i64 = p.trim().parse().map_err(|_| bad())?;
                let q: i64 = q.trim().parse().map_err(|_| bad())?;
                RationalPhase::new(p, q)
            }
            None => {
                let p: i64 = s.trim().parse().map_err(|_| bad())?;
                RationalPhase::new(p, 1)
            }
        }
    }
}

/// An integer linear form in a fixed number of real parameters.
/// Forms belonging to one matrix all share the same arity.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LinearForm(Vec<i64>);

impl LinearForm {
    pub fn zero(arity: usize) -> Self {
        LinearForm(vec![0; arity])
    }

    /// The single-variable form `+x_idx`.
    pub fn unit(arity: usize, idx: usize) -> Self {
        let mut c = vec![0; arity];
        c[idx] = 1;
        LinearForm(c)
    }

    pub fn from_coeffs(coeffs: Vec<i64>) -> Self {
        LinearForm(coeffs)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn add_at(&mut self, idx: usize, delta: i64) {
        self.0[idx] += delta;
    }

    /// Evaluates the form at a parameter point (radians).
    pub fn dot(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.0.len());
        self.0.iter().zip(x).map(|(&c, &v)| c as f64 * v).sum()
    }
}

impl Add for &LinearForm {
    type Output = LinearForm;
    fn add(self, rhs: &LinearForm) -> LinearForm {
        assert_eq!(self.0.len(), rhs.0.len(), "linear form arity mismatch");
        LinearForm(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &LinearForm {
    type Output = LinearForm;
    fn sub(self, rhs: &LinearForm) -> LinearForm {
        assert_eq!(self.0.len(), rhs.0.len(), "linear form arity mismatch");
        LinearForm(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &LinearForm {
    type Output = LinearForm;
    fn neg(self) -> LinearForm {
        LinearForm(self.0.iter().map(|a| -a).collect())
    }
}

/// One matrix entry of an affine family: `exp(i*(2*pi*base + form.x))`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct AffineEntry {
    pub base: RationalPhase,
    pub form: LinearForm,
}

impl AffineEntry {
    pub fn constant(base: RationalPhase, arity: usize) -> Self {
        AffineEntry {
            base,
            form: LinearForm::zero(arity),
        }
    }

    pub fn is_constant(&self) -> bool {
        self.form.is_zero()
    }

    /// The entry's unimodular value at the parameter point `x` (radians).
    pub fn value(&self, x: &[f64]) -> Complex64 {
        Complex64::from_polar(1.0, self.base.radians() + self.form.dot(x))
    }
}

impl Add for &AffineEntry {
    type Output = AffineEntry;
    fn add(self, rhs: &AffineEntry) -> AffineEntry {
        AffineEntry {
            base: self.base + rhs.base,
            form: &self.form + &rhs.form,
        }
    }
}

impl Sub for &AffineEntry {
    type Output = AffineEntry;
    fn sub(self, rhs: &AffineEntry) -> AffineEntry {
        AffineEntry {
            base: self.base - rhs.base,
            form: &self.form - &rhs.form,
        }
    }
}
