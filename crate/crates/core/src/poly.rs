//! Polynomials in `y` with exact rational coefficients.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::combinum::BigRat;

/// Dense polynomial in `y`, `coeffs[k]` the coefficient of `y^k`.
/// Trailing zeros are always trimmed, so the zero polynomial is empty.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct YPoly {
    coeffs: Vec<BigRat>,
}

impl YPoly {
    pub fn new(mut coeffs: Vec<BigRat>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(
            coeffs
                .iter()
                .map(|&c| BigRat::from_integer(BigInt::from(c)))
                .collect(),
        )
    }

    pub fn constant(c: BigRat) -> Self {
        Self::new(vec![c])
    }

    pub fn monomial(c: BigRat, k: usize) -> Self {
        let mut coeffs = vec![BigRat::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigRat::one())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> BigRat {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRat::zero)
    }

    pub fn coeffs(&self) -> &[BigRat] {
        &self.coeffs
    }

    /// The constant value, if the polynomial does not depend on `y`.
    pub fn as_constant(&self) -> Option<BigRat> {
        match self.coeffs.len() {
            0 => Some(BigRat::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn scale(&self, c: &BigRat) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Coefficients reversed within degree `d`: `y^d p(1/y)`.
    pub fn reflect(&self, d: usize) -> Self {
        Self::new((0..=d).map(|k| self.coeff(d - k)).collect())
    }
}

impl Add for &YPoly {
    type Output = YPoly;
    fn add(self, rhs: &YPoly) -> YPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        YPoly::new((0..len).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl AddAssign<&YPoly> for YPoly {
    fn add_assign(&mut self, rhs: &YPoly) {
        *self = &*self + rhs;
    }
}

impl Sub for &YPoly {
    type Output = YPoly;
    fn sub(self, rhs: &YPoly) -> YPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        YPoly::new((0..len).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Neg for &YPoly {
    type Output = YPoly;
    fn neg(self) -> YPoly {
        YPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &YPoly {
    type Output = YPoly;
    fn mul(self, rhs: &YPoly) -> YPoly {
        if self.is_zero() || rhs.is_zero() {
            return YPoly::zero();
        }
        let mut out = vec![BigRat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        YPoly::new(out)
    }
}

impl fmt::Display for YPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})y")?,
                _ => write!(f, "({c})y^{k}")?,
            }
        }
        Ok(())
    }
}
