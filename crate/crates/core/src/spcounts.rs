//! Count formulas for series-parallel matroids and the conversions between
//! the four families.
//!
//! * `E(n, k)`: simple series-parallel matroids on `[n]` of rank `k`
//! * `C(n, k)`: series-parallel matroids
//! * `A(n, k)`: quasi series-parallel matroids (direct sums, possibly empty)
//! * `S(n, k)`: simple quasi series-parallel matroids
//! * `G(n, l)`: coefficients of the compositional inverse of
//!   `F(x, y) = (1/y) log(1 + xy) + log(1 + x) - x`, with `C(n+1, l+1) = G(n, l)`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::combinum::{
    assoc_stirling1, binomial, double_factorial, factorial, factorial_rat, pow_signed, sign,
    stirling2, BigRat,
};
use crate::error::{Error, Result};
use crate::powerseries::BivariateSeries;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    E,
    C,
    A,
    S,
    G,
}

impl Family {
    pub const ALL: [Family; 5] = [Family::E, Family::C, Family::A, Family::S, Family::G];

    /// Smallest ground-set size with a row. A and S include the empty matroid.
    pub fn first_n(self) -> usize {
        match self {
            Family::A | Family::S => 0,
            Family::E | Family::C | Family::G => 1,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Family::E => 'E',
            Family::C => 'C',
            Family::A => 'A',
            Family::S => 'S',
            Family::G => 'G',
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "E" | "e" => Ok(Family::E),
            "C" | "c" => Ok(Family::C),
            "A" | "a" => Ok(Family::A),
            "S" | "s" => Ok(Family::S),
            "G" | "g" => Ok(Family::G),
            other => Err(Error::UnknownFamily(other.to_string())),
        }
    }
}

/// A count family as a triangle: row `n` (from `first_n` to `max_n`) holds
/// the values for ranks `0..=n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangularCountTable {
    pub family: Family,
    pub first_n: usize,
    pub rows: Vec<Vec<BigInt>>,
}

impl TriangularCountTable {
    pub fn from_fn(family: Family, max_n: usize, f: impl Fn(usize, usize) -> BigInt) -> Self {
        let first_n = family.first_n();
        let rows = (first_n..=max_n)
            .map(|n| (0..=n).map(|k| f(n, k)).collect())
            .collect();
        Self {
            family,
            first_n,
            rows,
        }
    }

    pub fn max_n(&self) -> usize {
        self.first_n + self.rows.len() - 1
    }

    pub fn row(&self, n: usize) -> Option<&[BigInt]> {
        n.checked_sub(self.first_n)
            .and_then(|i| self.rows.get(i))
            .map(Vec::as_slice)
    }

    /// Entry `(n, k)`, zero outside the table.
    pub fn get(&self, n: usize, k: usize) -> BigInt {
        self.row(n)
            .and_then(|r| r.get(k))
            .cloned()
            .unwrap_or_default()
    }

    /// `(n, k, value)` in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> {
        self.rows.iter().enumerate().flat_map(move |(i, row)| {
            row.iter()
                .enumerate()
                .map(move |(k, v)| (self.first_n + i, k, v))
        })
    }

    /// The EGF `sum value * y^k x^n / n!` truncated at `order`.
    pub fn to_series(&self, order: usize) -> Result<BivariateSeries> {
        BivariateSeries::from_egf_counts(self.first_n, &self.rows, order)
    }

    /// First coordinate where the two tables differ over their common rows.
    pub fn first_difference(&self, other: &Self) -> Option<(usize, usize)> {
        let lo = self.first_n.max(other.first_n);
        let hi = self.max_n().min(other.max_n());
        (lo..=hi)
            .flat_map(|n| (0..=n).map(move |k| (n, k)))
            .find(|&(n, k)| self.get(n, k) != other.get(n, k))
    }

    pub fn all_nonnegative(&self) -> bool {
        self.rows.iter().flatten().all(|v| !v.is_negative())
    }
}

fn expect_integer(q: BigRat, what: &str, n: i64, k: i64) -> BigInt {
    assert!(q.is_integer(), "{what}({n}, {k}) = {q} is not an integer");
    q.to_integer()
}

/// `E(n, k)` from the closed double sum, with `r = 2k - n`:
/// `sum_{p=1}^r d(2k-p-1, k-p) sum_{i=0}^{r-p} (-1)^{i+p+1} (2k-p-i)^{k-p-1} / (i! (r-p-i)!)`.
///
/// Zero when `k = 0`, `k > n`, or `n >= 2k`.
pub fn e_closed(n: i64, k: i64) -> BigInt {
    expect_integer(e_closed_exact(n, k), "E", n, k)
}

/// The closed sum for `E(n, k)` before the integrality check.
pub fn e_closed_exact(n: i64, k: i64) -> BigRat {
    if k <= 0 || k > n || n >= 2 * k {
        return BigRat::zero();
    }
    let r = 2 * k - n;
    let mut total = BigRat::zero();
    for p in 1..=r {
        let d = assoc_stirling1(2 * k - p - 1, k - p);
        // Skipping zero factors also skips every non-positive exponent except 1^{-1} at k = 1.
        if d.is_zero() {
            continue;
        }
        let m = r - p;
        let inner = if p < k {
            // sum_i (-1)^i C(m, i) base^e, then one division by m!.
            let mut acc = BigInt::zero();
            for i in 0..=m {
                let power = BigInt::from(2 * k - p - i).pow((k - p - 1) as u32);
                acc += binomial(m, i) * power * sign(i);
            }
            BigRat::new(acc * sign(p + 1), factorial(m))
        } else {
            let mut acc = BigRat::zero();
            for i in 0..=m {
                let term = pow_signed(2 * k - p - i, k - p - 1)
                    / (factorial_rat(i) * factorial_rat(m - i));
                acc += term * BigRat::from_integer(sign(i + p + 1).into());
            }
            acc
        };
        total += inner * BigRat::from_integer(d);
    }
    total
}

/// `C(n, l)`: for `n >= 2` the sum
/// `sum_{k=0}^{l-1} (-1)^{k+l-1} d(k+l-1, k) S2(n-1+k, k+l)`;
/// `C(1, 0) = C(1, 1) = 1` (single loop and single coloop).
pub fn c_closed(n: i64, l: i64) -> BigInt {
    if n < 1 || l < 0 || l > n {
        return BigInt::zero();
    }
    if n == 1 {
        return BigInt::one();
    }
    let mut total = BigInt::zero();
    for k in 0..l {
        let term = assoc_stirling1(k + l - 1, k) * stirling2(n - 1 + k, k + l);
        total += term * sign(k + l - 1);
    }
    total
}

/// `G(n, l) = sum_{j=0}^{l} (-1)^{j+l} d(j+l, j) S2(n+j, j+l+1)`, zero unless
/// `0 <= l <= n-1`.
pub fn g_closed(n: i64, l: i64) -> BigInt {
    if n < 1 || l < 0 || l > n - 1 {
        return BigInt::zero();
    }
    let mut total = BigInt::zero();
    for j in 0..=l {
        let term = assoc_stirling1(j + l, j) * stirling2(n + j, j + l + 1);
        total += term * sign(j + l);
    }
    total
}

/// Solves `C(n, l) = sum_{m=l}^{n} S2(n, m) E(m, l)` for `E` by forward
/// substitution, with `C` from [`c_closed`]. Row 1 is `(0, 1)`: the loop
/// is not simple and the identity only holds from `n = 2`.
pub fn e_from_c(max_n: usize) -> Result<TriangularCountTable> {
    if max_n < 1 {
        return Err(Error::TableTooSmall {
            family: 'E',
            min: 1,
        });
    }
    let mut rows: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(), BigInt::one()]];
    for n in 2..=max_n {
        let row = (0..=n)
            .map(|l| {
                let mut acc = c_closed(n as i64, l as i64);
                for m in l.max(1)..n {
                    acc -= stirling2(n as i64, m as i64)
                        * rows[m - 1].get(l).cloned().unwrap_or_default();
                }
                acc
            })
            .collect();
        rows.push(row);
    }
    Ok(TriangularCountTable {
        family: Family::E,
        first_n: 1,
        rows,
    })
}

/// The printed special-case closed forms for `E(2k - r, k)`, `r = 1, 2, 3`,
/// transcribed literally as exact rationals. The `r = 2` form carries a `+`
/// on its last term and disagrees with [`e_closed`] (e.g. 5 vs 1 at
/// `k = 3`); see [`e_special_r2_minus`].
pub fn e_special(n: i64, k: i64, r: u32) -> Result<BigRat> {
    let ri = i64::from(r);
    if !(1..=3).contains(&r) || k < ri || n != 2 * k - ri {
        return Err(Error::SpecialCaseDomain { r, k });
    }
    let q = |v: i64| BigRat::from_integer(BigInt::from(v));
    let frac = |p: i64, d: i64| BigRat::new(BigInt::from(p), BigInt::from(d));
    let value = match r {
        1 => BigRat::from_integer(double_factorial(2 * k - 1)?) * pow_signed(2 * k - 1, k - 3),
        2 => {
            let bracket = pow_signed(2 * k - 1, k - 2) - pow_signed(2 * k - 2, k - 2)
                + frac(2, 3) * q(k - 2) * pow_signed(2 * k - 2, k - 3);
            BigRat::from_integer(double_factorial(2 * k - 3)?) * bracket
        }
        _ => {
            let bracket = frac(1, 2) * pow_signed(2 * k - 1, k - 2) - pow_signed(2 * k - 2, k - 2)
                + frac(1, 2) * pow_signed(2 * k - 3, k - 2)
                + frac(2, 3)
                    * q(k - 2)
                    * (pow_signed(2 * k - 3, k - 3) - pow_signed(2 * k - 2, k - 3))
                + frac(1, 9) * q(4 * k - 7) * q(k - 2) * q(k - 3) * pow_signed(2 * k - 3, k - 5);
            BigRat::from_integer(double_factorial(2 * k - 3)?) * bracket
        }
    };
    Ok(value)
}

/// The `r = 2` special case with a minus sign on the `(2/3)(k-2)` term, the
/// reading that agrees with [`e_closed`].
pub fn e_special_r2_minus(k: i64) -> Result<BigRat> {
    if k < 2 {
        return Err(Error::SpecialCaseDomain { r: 2, k });
    }
    let bracket = pow_signed(2 * k - 1, k - 2)
        - pow_signed(2 * k - 2, k - 2)
        - BigRat::new(BigInt::from(2 * (k - 2)), BigInt::from(3)) * pow_signed(2 * k - 2, k - 3);
    Ok(BigRat::from_integer(double_factorial(2 * k - 3)?) * bracket)
}

/// The generating series of `family` truncated at `order`. E, C and G come
/// from their closed forms; `S = exp(E)` and `A = exp(C)`.
pub fn family_series(family: Family, order: usize) -> Result<BivariateSeries> {
    match family {
        Family::E | Family::C | Family::G => {
            let table = closed_table(family, order.max(1));
            table.to_series(order)
        }
        Family::S => family_series(Family::E, order)?.exp(),
        Family::A => family_series(Family::C, order)?.exp(),
    }
}

fn closed_table(family: Family, max_n: usize) -> TriangularCountTable {
    let f: fn(i64, i64) -> BigInt = match family {
        Family::E => e_closed,
        Family::C => c_closed,
        Family::G => g_closed,
        Family::A | Family::S => unreachable!("A and S have no closed form here"),
    };
    TriangularCountTable::from_fn(family, max_n, |n, k| f(n as i64, k as i64))
}

/// Builds the count table of `family` for `n <= max_n`.
pub fn build_table(family: Family, max_n: usize) -> Result<TriangularCountTable> {
    match family {
        Family::E | Family::C | Family::G => {
            if max_n < 1 {
                return Err(Error::TableTooSmall {
                    family: family.letter(),
                    min: 1,
                });
            }
            Ok(closed_table(family, max_n))
        }
        Family::A | Family::S => {
            let series = family_series(family, max_n)?;
            Ok(TriangularCountTable {
                family,
                first_n: 0,
                rows: series.count_rows(0)?,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn q(v: i64) -> BigRat {
        BigRat::from_integer(BigInt::from(v))
    }

    #[test]
    fn e_closed_examples() {
        assert_eq!(e_closed(5, 3), BigInt::from(15));
        assert_eq!(e_closed(7, 4), BigInt::from(735));
        assert_eq!(e_closed(4, 3), BigInt::from(1));
        assert_eq!(e_closed(1, 1), BigInt::from(1));
        assert_eq!(e_closed(3, 2), BigInt::from(1));
        assert_eq!(e_closed(4, 2), BigInt::zero());
        assert_eq!(e_closed(3, 0), BigInt::zero());
        assert_eq!(e_closed(2, 3), BigInt::zero());
        assert_eq!(e_closed(2, 2), BigInt::zero());
    }

    #[test]
    fn c_closed_examples() {
        assert_eq!(c_closed(4, 2), BigInt::from(6));
        assert_eq!(c_closed(3, 1), BigInt::from(1));
        assert_eq!(c_closed(5, 2), BigInt::from(25));
        assert_eq!(c_closed(1, 0), BigInt::from(1));
        assert_eq!(c_closed(1, 1), BigInt::from(1));
        for n in 2..15 {
            assert_eq!(c_closed(n, n), BigInt::zero());
            assert_eq!(c_closed(n, 0), BigInt::zero());
        }
    }

    #[test]
    fn g_closed_examples() {
        assert_eq!(g_closed(2, 0), BigInt::from(1));
        assert_eq!(g_closed(2, 1), BigInt::from(1));
        assert_eq!(g_closed(3, 1), BigInt::from(6));
        assert_eq!(g_closed(3, 3), BigInt::zero());
        assert_eq!(g_closed(3, -1), BigInt::zero());
    }

    #[test]
    fn e_from_c_rows() {
        let t = e_from_c(6).unwrap();
        assert_eq!(t.row(3).unwrap(), ints(&[0, 0, 1, 0]).as_slice());
        assert_eq!(t.row(4).unwrap(), ints(&[0, 0, 0, 1, 0]).as_slice());
        assert_eq!(t.get(5, 3), BigInt::from(15));
        assert!(e_from_c(0).is_err());
    }

    #[test]
    fn e_special_examples() {
        assert_eq!(e_special(7, 4, 1).unwrap(), q(735));
        assert_eq!(e_special(3, 3, 3).unwrap(), q(0));
        assert_eq!(e_special(4, 3, 2).unwrap(), q(5));
        assert_eq!(e_special_r2_minus(3).unwrap(), q(1));
        assert!(e_special(5, 3, 2).is_err());
        assert!(e_special(1, 2, 3).is_err());
    }

    #[test]
    fn tables_small_rows() {
        let a = build_table(Family::A, 2).unwrap();
        assert_eq!(a.row(0).unwrap(), ints(&[1]).as_slice());
        assert_eq!(a.row(2).unwrap(), ints(&[1, 3, 1]).as_slice());
        let s = build_table(Family::S, 4).unwrap();
        assert_eq!(s.row(4).unwrap(), ints(&[0, 0, 0, 5, 1]).as_slice());
        assert_eq!(s.row(3).unwrap(), ints(&[0, 0, 1, 1]).as_slice());
        let c = build_table(Family::C, 4).unwrap();
        assert_eq!(c.row(4).unwrap(), ints(&[0, 1, 6, 1, 0]).as_slice());
        assert!(build_table(Family::E, 0).is_err());
    }

    #[test]
    fn family_parsing() {
        assert_eq!("C".parse::<Family>().unwrap(), Family::C);
        assert_eq!("g".parse::<Family>().unwrap(), Family::G);
        assert!(matches!(
            "Q".parse::<Family>(),
            Err(Error::UnknownFamily(_))
        ));
    }
}
