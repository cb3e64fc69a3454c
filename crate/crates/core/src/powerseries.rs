//! Truncated bivariate power series in `x` with coefficients in `Q[y]`.
//!
//! Coefficients are stored raw: row `n` is the polynomial multiplying `x^n`,
//! not the EGF-normalised `n!`-scaled value. Counts are extracted with
//! [`BivariateSeries::count_coefficient`].

use num_bigint::BigInt;
use num_traits::Zero;

use crate::combinum::{factorial, factorial_rat, sign, BigRat};
use crate::error::{Error, Result};
use crate::poly::YPoly;

pub const DEFAULT_ORDER: usize = 12;

/// `sum_n rows[n](y) x^n + O(x^{order+1})` with `deg_y rows[n] <= n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BivariateSeries {
    rows: Vec<YPoly>,
}

/// `sum_n coeffs[n] x^n + O(x^{order+1})`, the inner series of compositions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnivariateSeries {
    coeffs: Vec<BigRat>,
}

fn rat(v: i64) -> BigRat {
    BigRat::from_integer(BigInt::from(v))
}

impl UnivariateSeries {
    pub fn new(coeffs: Vec<BigRat>) -> Self {
        assert!(!coeffs.is_empty(), "series needs at least a constant term");
        Self { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> BigRat {
        self.coeffs.get(n).cloned().unwrap_or_else(BigRat::zero)
    }

    pub fn x(order: usize) -> Self {
        Self::new((0..=order).map(|n| rat(i64::from(n == 1))).collect())
    }

    /// `e^x`.
    pub fn exp(order: usize) -> Self {
        Self::new(
            (0..=order)
                .map(|n| factorial_rat(n as i64).recip())
                .collect(),
        )
    }

    /// `e^x - 1`.
    pub fn exp_minus_one(order: usize) -> Self {
        let mut s = Self::exp(order);
        s.coeffs[0] = BigRat::zero();
        s
    }

    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let mut out = vec![BigRat::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }
}

impl BivariateSeries {
    /// Builds a series from its rows, checking `deg_y rows[n] <= n`.
    pub fn from_rows(rows: Vec<YPoly>) -> Result<Self> {
        assert!(!rows.is_empty(), "series needs at least a constant row");
        for (n, row) in rows.iter().enumerate() {
            if let Some(degree) = row.degree() {
                if degree > n {
                    return Err(Error::YDegreeExceeded { n, degree });
                }
            }
        }
        Ok(Self { rows })
    }

    // Callers guarantee the degree invariant.
    fn from_rows_unchecked(rows: Vec<YPoly>) -> Self {
        debug_assert!(rows
            .iter()
            .enumerate()
            .all(|(n, r)| r.degree().is_none_or(|d| d <= n)));
        Self { rows }
    }

    pub fn zero(order: usize) -> Self {
        Self::from_rows_unchecked(vec![YPoly::zero(); order + 1])
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.rows[0] = YPoly::one();
        s
    }

    pub fn x(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.rows[1] = YPoly::one();
        }
        s
    }

    /// Lifts a univariate series (no `y` dependence).
    pub fn from_univariate(u: &UnivariateSeries) -> Self {
        Self::from_rows_unchecked(u.coeffs.iter().cloned().map(YPoly::constant).collect())
    }

    /// The series `sum counts[n][k] y^k x^n / n!` for an EGF count triangle
    /// whose first row is `first_n`. Rows before `first_n` are zero.
    pub fn from_egf_counts(first_n: usize, rows: &[Vec<BigInt>], order: usize) -> Result<Self> {
        let mut out = vec![YPoly::zero(); order + 1];
        for (i, row) in rows.iter().enumerate() {
            let n = first_n + i;
            if n > order {
                break;
            }
            let scale = factorial_rat(n as i64).recip();
            out[n] = YPoly::new(
                row.iter()
                    .map(|c| BigRat::from_integer(c.clone()) * &scale)
                    .collect(),
            );
        }
        Self::from_rows(out)
    }

    pub fn order(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn row(&self, n: usize) -> &YPoly {
        &self.rows[n]
    }

    pub fn rows(&self) -> &[YPoly] {
        &self.rows
    }

    /// Raw coefficient of `y^k x^n`; zero past the stored order.
    pub fn coeff(&self, n: usize, k: usize) -> BigRat {
        self.rows.get(n).map_or_else(BigRat::zero, |r| r.coeff(k))
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::from_rows_unchecked(self.rows.iter().take(order + 1).cloned().collect())
    }

    /// First `(n, k)` up to the common order where the two series differ.
    pub fn first_difference(&self, other: &Self) -> Option<(usize, usize)> {
        let order = self.order().min(other.order());
        for n in 0..=order {
            let (a, b) = (&self.rows[n], &other.rows[n]);
            if a != b {
                let k = (0..=n).find(|&k| a.coeff(k) != b.coeff(k)).unwrap_or(0);
                return Some((n, k));
            }
        }
        None
    }

    /// Equality of all coefficients up to the common order.
    pub fn agrees_with(&self, other: &Self) -> bool {
        self.first_difference(other).is_none()
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        Self::from_rows_unchecked(
            (0..=order)
                .map(|n| &self.rows[n] + &other.rows[n])
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        Self::from_rows_unchecked(
            (0..=order)
                .map(|n| &self.rows[n] - &other.rows[n])
                .collect(),
        )
    }

    pub fn scale(&self, c: &BigRat) -> Self {
        Self::from_rows_unchecked(self.rows.iter().map(|r| r.scale(c)).collect())
    }

    /// Multiplies every coefficient by the polynomial `p`. Fails if the
    /// degree invariant would break.
    pub fn scale_poly(&self, p: &YPoly) -> Result<Self> {
        Self::from_rows(self.rows.iter().map(|r| r * p).collect())
    }

    /// Cauchy product truncated at the smaller order.
    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let mut out = vec![YPoly::zero(); order + 1];
        for i in 0..=order {
            if self.rows[i].is_zero() {
                continue;
            }
            for j in 0..=order - i {
                if !other.rows[j].is_zero() {
                    out[i + j] += &(&self.rows[i] * &other.rows[j]);
                }
            }
        }
        Self::from_rows_unchecked(out)
    }

    /// `exp(f)` via `n g_n = sum_{i=1}^n i f_i g_{n-i}`.
    pub fn exp(&self) -> Result<Self> {
        if !self.rows[0].is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let order = self.order();
        let mut g = vec![YPoly::one()];
        for n in 1..=order {
            let mut acc = YPoly::zero();
            for i in 1..=n {
                if !self.rows[i].is_zero() {
                    acc += &(&self.rows[i] * &g[n - i]).scale(&rat(i as i64));
                }
            }
            g.push(acc.scale(&rat(n as i64).recip()));
        }
        Ok(Self::from_rows_unchecked(g))
    }

    /// `log(f)` via `n g_n = n f_n - sum_{i=1}^{n-1} i g_i f_{n-i}`.
    pub fn log(&self) -> Result<Self> {
        if self.rows[0] != YPoly::one() {
            return Err(Error::ConstantTermNotOne);
        }
        let order = self.order();
        let mut g = vec![YPoly::zero()];
        for n in 1..=order {
            let mut acc = self.rows[n].scale(&rat(n as i64));
            for i in 1..n {
                if !g[i].is_zero() {
                    acc = &acc - &(&g[i] * &self.rows[n - i]).scale(&rat(i as i64));
                }
            }
            g.push(acc.scale(&rat(n as i64).recip()));
        }
        Ok(Self::from_rows_unchecked(g))
    }

    /// Substitutes `inner(x)` for `x`, leaving `y` alone.
    pub fn compose_x(&self, inner: &UnivariateSeries) -> Result<Self> {
        if !inner.coeff(0).is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let order = self.order().min(inner.order());
        let mut out = vec![YPoly::zero(); order + 1];
        let mut power =
            UnivariateSeries::new((0..=order).map(|n| rat(i64::from(n == 0))).collect());
        for n in 0..=order {
            let row = &self.rows[n];
            if !row.is_zero() {
                for (m, slot) in out.iter_mut().enumerate() {
                    let c = power.coeff(m);
                    if !c.is_zero() {
                        *slot += &row.scale(&c);
                    }
                }
            }
            power = power.mul(inner);
        }
        Ok(Self::from_rows_unchecked(out))
    }

    /// `sum_n self_n(y) inner(x, y)^n`; both arguments carry `y`.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.rows[0].is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let order = self.order().min(inner.order());
        let inner = inner.truncate(order);
        let mut out = vec![YPoly::zero(); order + 1];
        let mut power = Self::one(order);
        for n in 0..=order {
            let row = &self.rows[n];
            if !row.is_zero() {
                for (m, slot) in out.iter_mut().enumerate() {
                    *slot += &(row * &power.rows[m]);
                }
            }
            power = power.mul(&inner);
        }
        Self::from_rows(out)
    }

    /// Antiderivative in `x` with zero constant term. The order grows by one.
    pub fn integrate_x(&self) -> Self {
        let mut out = vec![YPoly::zero()];
        for (n, row) in self.rows.iter().enumerate() {
            out.push(row.scale(&rat(n as i64 + 1).recip()));
        }
        Self::from_rows_unchecked(out)
    }

    fn linear_coefficient(&self) -> Result<BigRat> {
        if !self.rows[0].is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        match self.rows.get(1).and_then(YPoly::as_constant) {
            Some(a) if !a.is_zero() => Ok(a),
            _ => Err(Error::BadLinearCoefficient),
        }
    }

    /// Compositional inverse in `x` by order-by-order solving of
    /// `g(f(x, y), y) = x`.
    pub fn reverse_x(&self) -> Result<Self> {
        let a = self.linear_coefficient()?;
        let order = self.order();
        // powers[m] = f^m
        let mut powers = vec![Self::one(order)];
        for m in 1..order {
            let next = powers[m - 1].mul(self);
            powers.push(next);
        }
        let mut g = vec![YPoly::zero(); order + 1];
        if order >= 1 {
            g[1] = YPoly::constant(a.recip());
        }
        let mut a_pow = a.clone();
        for n in 2..=order {
            a_pow = &a_pow * &a;
            let mut acc = YPoly::zero();
            for m in 1..n {
                acc += &(&g[m] * &powers[m].rows[n]);
            }
            g[n] = (-&acc).scale(&a_pow.recip());
        }
        Self::from_rows(g)
    }

    /// Compositional inverse in `x` through the explicit Lagrange formula
    /// `G_n = F_1^{-n} sum_k (-1)^k (n+k-1)!/k! sum prod hatF_{j_i}/j_i!`
    /// with `hatF_j = F_{j+1} / ((j+1) F_1)`, in EGF normalisation.
    pub fn lagrange_invert(&self) -> Result<Self> {
        self.lagrange_with_sign(true)
    }

    /// The same formula with the factor `(-1)^k` dropped, as in the
    /// rising-factorial/Bell-polynomial display of the theorem. Only used to
    /// document that this reading does not invert `f`.
    pub fn lagrange_invert_without_sign(&self) -> Result<Self> {
        self.lagrange_with_sign(false)
    }

    fn lagrange_with_sign(&self, alternating: bool) -> Result<Self> {
        let a = self.linear_coefficient()?;
        let order = self.order();
        // EGF coefficients F_n(y) = n! [x^n] f.
        let big_f = |n: usize| self.rows[n].scale(&factorial_rat(n as i64));
        // weights[j] = hatF_j / j!
        let mut weights = vec![YPoly::zero(); order];
        for (j, w) in weights.iter_mut().enumerate().skip(1) {
            let hat = big_f(j + 1).scale(&(rat(j as i64 + 1) * &a).recip());
            *w = hat.scale(&factorial_rat(j as i64).recip());
        }
        let max_s = order.saturating_sub(1);
        // comp[k][s]: sum over compositions of s into k parts of prod weights.
        let mut comp = vec![vec![YPoly::zero(); max_s + 1]];
        comp[0][0] = YPoly::one();
        for k in 1..=max_s {
            let prev = &comp[k - 1];
            let mut next = vec![YPoly::zero(); max_s + 1];
            for (s, acc) in prev.iter().enumerate() {
                if acc.is_zero() {
                    continue;
                }
                for j in 1..=max_s - s {
                    if !weights[j].is_zero() {
                        next[s + j] += &(acc * &weights[j]);
                    }
                }
            }
            comp.push(next);
        }

        let mut g = vec![YPoly::zero(); order + 1];
        if order >= 1 {
            g[1] = YPoly::constant(a.recip());
        }
        for n in 2..=order {
            let mut big_g = YPoly::zero();
            for k in 1..n {
                let mut c =
                    BigRat::from_integer(factorial((n + k - 1) as i64)) / factorial_rat(k as i64);
                if alternating {
                    c *= rat(sign(k as i64));
                }
                big_g += &comp[k][n - 1].scale(&c);
            }
            let a_pow = num_traits::Pow::pow(a.clone(), n as u64);
            g[n] = big_g.scale(&(a_pow * factorial_rat(n as i64)).recip());
        }
        Self::from_rows(g)
    }

    /// `n! [y^k x^n]`, which must be an integer for count series.
    pub fn count_coefficient(&self, n: usize, k: usize) -> Result<BigInt> {
        if n > self.order() {
            return Err(Error::BeyondOrder {
                n,
                k,
                order: self.order(),
            });
        }
        let value = self.coeff(n, k) * factorial_rat(n as i64);
        if value.is_integer() {
            Ok(value.to_integer())
        } else {
            Err(Error::NonIntegral {
                n,
                k,
                value: value.to_string(),
            })
        }
    }

    /// All counts `n! [y^k x^n]` for `first_n <= n <= order`, `0 <= k <= n`.
    pub fn count_rows(&self, first_n: usize) -> Result<Vec<Vec<BigInt>>> {
        (first_n..=self.order())
            .map(|n| (0..=n).map(|k| self.count_coefficient(n, k)).collect())
            .collect()
    }
}

/// `F(x, y) = (1/y) log(1 + xy) + log(1 + x) - x`, truncated at `order`:
/// `F_1 = 1` and `F_n(y) = (-1)^{n-1} (n-1)! (1 + y^{n-1})` in EGF form.
pub fn build_f(order: usize) -> BivariateSeries {
    assert!(order >= 1, "F needs order >= 1");
    let mut rows = vec![YPoly::zero(), YPoly::one()];
    for n in 2..=order {
        let c = rat(sign(n as i64 - 1)) / rat(n as i64);
        rows.push(&YPoly::constant(c.clone()) + &YPoly::monomial(c, n - 1));
    }
    BivariateSeries::from_rows_unchecked(rows)
}

/// The inverse `G` of `F`: `G(F(x, y), y) = x`.
pub fn build_g(order: usize) -> Result<BivariateSeries> {
    build_f(order).reverse_x()
}
