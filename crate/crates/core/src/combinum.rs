//! Exact combinatorial numbers: factorials, binomials, Stirling numbers of
//! the second kind, unsigned associated Stirling numbers of the first kind,
//! the reciprocal composition sums `H(m, k)`, and partial Bell polynomials.
//!
//! Index arguments are signed so that formula transcriptions can be literal:
//! any index outside the natural domain yields zero instead of an error.

use std::sync::Mutex;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

use crate::error::{Error, Result};

pub type BigRat = BigRational;

/// Grow-only cache of triangle rows. Row `n` is produced from rows `0..n` by
/// `next_row` and never changes once stored.
pub struct MemoTable2D<T> {
    rows: Mutex<Vec<Vec<T>>>,
    next_row: fn(&[Vec<T>], usize) -> Vec<T>,
}

impl<T: Clone + Zero> MemoTable2D<T> {
    pub const fn new(next_row: fn(&[Vec<T>], usize) -> Vec<T>) -> Self {
        Self {
            rows: Mutex::new(Vec::new()),
            next_row,
        }
    }

    /// Entry `(n, k)`, or zero when `k` lies past the stored row.
    pub fn get(&self, n: usize, k: usize) -> T {
        let mut rows = self.rows.lock().unwrap_or_else(|e| e.into_inner());
        while rows.len() <= n {
            let next = (self.next_row)(&rows, rows.len());
            rows.push(next);
        }
        rows[n].get(k).cloned().unwrap_or_else(T::zero)
    }

    /// A copy of row `n`.
    pub fn row(&self, n: usize) -> Vec<T> {
        self.get(n, 0);
        let rows = self.rows.lock().unwrap_or_else(|e| e.into_inner());
        rows[n].clone()
    }
}

fn factorial_row(rows: &[Vec<BigInt>], n: usize) -> Vec<BigInt> {
    match n {
        0 => vec![BigInt::one()],
        _ => vec![&rows[n - 1][0] * BigInt::from(n)],
    }
}

fn stirling2_row(rows: &[Vec<BigInt>], n: usize) -> Vec<BigInt> {
    if n == 0 {
        return vec![BigInt::one()];
    }
    let prev = &rows[n - 1];
    let at = |k: usize| prev.get(k).cloned().unwrap_or_default();
    (0..=n)
        .map(|k| {
            if k == 0 {
                BigInt::zero()
            } else {
                BigInt::from(k) * at(k) + at(k - 1)
            }
        })
        .collect()
}

// d(n, k) = (n-1) d(n-2, k-1) + (n-1) d(n-1, k); row n stores k = 0..=n/2.
fn assoc_stirling1_row(rows: &[Vec<BigInt>], n: usize) -> Vec<BigInt> {
    match n {
        0 => return vec![BigInt::one()],
        1 => return vec![BigInt::zero()],
        _ => {}
    }
    let m = BigInt::from(n - 1);
    let at = |row: usize, k: usize| rows[row].get(k).cloned().unwrap_or_default();
    (0..=n / 2)
        .map(|k| {
            let two_back = if k == 0 {
                BigInt::zero()
            } else {
                at(n - 2, k - 1)
            };
            &m * (two_back + at(n - 1, k))
        })
        .collect()
}

// Row m holds H(m, k) for k = 0..=m, filled by
// (m+k) H(m, k) = k H(m-1, k-1) + (m+k-1) H(m-1, k).
fn h_row(rows: &[Vec<BigRat>], m: usize) -> Vec<BigRat> {
    if m == 0 {
        return vec![BigRat::one()];
    }
    let prev = &rows[m - 1];
    let at = |k: usize| prev.get(k).cloned().unwrap_or_else(BigRat::zero);
    (0..=m)
        .map(|k| {
            let n = m + k;
            let left = if k == 0 {
                BigRat::zero()
            } else {
                at(k - 1) * BigRat::from_integer(BigInt::from(k))
            };
            let right = at(k) * BigRat::from_integer(BigInt::from(n - 1));
            (left + right) / BigRat::from_integer(BigInt::from(n))
        })
        .collect()
}

static FACTORIALS: MemoTable2D<BigInt> = MemoTable2D::new(factorial_row);
static STIRLING2: MemoTable2D<BigInt> = MemoTable2D::new(stirling2_row);
static ASSOC_STIRLING1: MemoTable2D<BigInt> = MemoTable2D::new(assoc_stirling1_row);
static H_NUMBERS: MemoTable2D<BigRat> = MemoTable2D::new(h_row);

fn index(n: i64) -> Option<usize> {
    usize::try_from(n).ok()
}

/// `n!`, zero for negative `n`.
pub fn factorial(n: i64) -> BigInt {
    match index(n) {
        Some(n) => FACTORIALS.get(n, 0),
        None => BigInt::zero(),
    }
}

/// `n!` as a rational, handy inside rational sums.
pub fn factorial_rat(n: i64) -> BigRat {
    BigRat::from_integer(factorial(n))
}

pub fn binomial(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 || k > n {
        return BigInt::zero();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// `n!!` with `0!! = (-1)!! = 1`.
pub fn double_factorial(n: i64) -> Result<BigInt> {
    if n < -1 {
        return Err(Error::DoubleFactorialDomain(n));
    }
    let mut acc = BigInt::one();
    let mut m = n;
    while m > 1 {
        acc *= m;
        m -= 2;
    }
    Ok(acc)
}

/// Stirling number of the second kind: partitions of `[n]` into `k` blocks.
pub fn stirling2(n: i64, k: i64) -> BigInt {
    match (index(n), index(k)) {
        (Some(n), Some(k)) if k <= n => STIRLING2.get(n, k),
        _ => BigInt::zero(),
    }
}

/// Unsigned associated Stirling number of the first kind: derangements of
/// `[n]` with exactly `k` cycles. Vanishes for `n < 2k`.
pub fn assoc_stirling1(n: i64, k: i64) -> BigInt {
    match (index(n), index(k)) {
        (Some(n), Some(k)) if 2 * k <= n => ASSOC_STIRLING1.get(n, k),
        _ => BigInt::zero(),
    }
}

/// `H(m, k)`: the sum of `1 / ((j_1+1) ... (j_k+1))` over compositions of
/// `m` into `k` positive parts.
pub fn h_value(m: i64, k: i64) -> BigRat {
    match (index(m), index(k)) {
        (Some(m), Some(k)) if k <= m => H_NUMBERS.get(m, k),
        _ => BigRat::zero(),
    }
}

/// Partial Bell polynomial `B_{n,k}(t_1, ..., t_{n-k+1})` evaluated at `t`
/// (`t[0]` is `t_1`), as `n!/k!` times the sum over compositions of `n` into
/// `k` positive parts of `prod t_{j_i} / j_i!`.
pub fn bell_partial(n: usize, k: usize, t: &[BigRat]) -> Result<BigRat> {
    if k == 0 || k > n {
        return Err(Error::BellIndex { n, k });
    }
    let needed = n - k + 1;
    if t.len() < needed {
        return Err(Error::BellArguments {
            n,
            k,
            needed,
            got: t.len(),
        });
    }
    // weights[j] = t_j / j!; parts are at most n-k+1.
    let mut weights = vec![BigRat::zero(); needed + 1];
    for j in 1..=needed {
        weights[j] = &t[j - 1] / factorial_rat(j as i64);
    }
    // sums[s] after `parts` rounds: sum over compositions of s into `parts` parts.
    let mut sums = vec![BigRat::zero(); n + 1];
    sums[0] = BigRat::one();
    for _ in 0..k {
        let mut next = vec![BigRat::zero(); n + 1];
        for (s, acc) in sums.iter().enumerate() {
            if acc.is_zero() {
                continue;
            }
            for j in 1..=needed.min(n - s) {
                next[s + j] += acc * &weights[j];
            }
        }
        sums = next;
    }
    Ok(&sums[n] * factorial_rat(n as i64) / factorial_rat(k as i64))
}

/// `base^exp` as an exact rational; negative exponents invert.
///
/// Panics on `0^exp` with `exp < 0`.
pub fn pow_signed(base: i64, exp: i64) -> BigRat {
    let b = BigRat::from_integer(BigInt::from(base));
    if exp >= 0 {
        Pow::pow(b, exp as u64)
    } else {
        assert!(base != 0, "0 raised to negative power {exp}");
        Pow::pow(b.recip(), exp.unsigned_abs())
    }
}

/// `(-1)^e` as an integer sign.
pub fn sign(e: i64) -> i64 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// The integer value of `q`, if it has one.
pub fn to_integer(q: &BigRat) -> Option<BigInt> {
    q.is_integer().then(|| q.to_integer())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn rat(p: i64, q: i64) -> BigRat {
        BigRat::new(int(p), int(q))
    }

    // Restricted-growth strings enumerate set partitions of [n].
    fn brute_stirling2(n: usize, k: usize) -> u64 {
        fn go(pos: usize, n: usize, blocks: usize, k: usize) -> u64 {
            if pos == n {
                return u64::from(blocks == k);
            }
            let mut total = 0;
            for b in 0..=blocks {
                let opened = if b == blocks { blocks + 1 } else { blocks };
                if opened <= k {
                    total += go(pos + 1, n, opened, k);
                }
            }
            total
        }
        go(0, n, 0, k)
    }

    // Walk all permutations, keep derangements, bucket by cycle count.
    fn brute_derangement_cycles(n: usize) -> Vec<u64> {
        let mut counts = vec![0u64; n + 1];
        let mut perm: Vec<usize> = (0..n).collect();
        fn visit(perm: &mut Vec<usize>, start: usize, counts: &mut [u64]) {
            let n = perm.len();
            if start == n {
                if perm.iter().enumerate().any(|(i, &p)| i == p) {
                    return;
                }
                let mut seen = vec![false; n];
                let mut cycles = 0;
                for i in 0..n {
                    if !seen[i] {
                        cycles += 1;
                        let mut j = i;
                        while !seen[j] {
                            seen[j] = true;
                            j = perm[j];
                        }
                    }
                }
                counts[cycles] += 1;
                return;
            }
            for i in start..n {
                perm.swap(start, i);
                visit(perm, start + 1, counts);
                perm.swap(start, i);
            }
        }
        visit(&mut perm, 0, &mut counts);
        counts
    }

    fn composition_h(m: usize, k: usize) -> BigRat {
        fn go(left: usize, parts: usize, acc: BigRat) -> BigRat {
            if parts == 0 {
                return if left == 0 { acc } else { BigRat::zero() };
            }
            (1..=left)
                .map(|j| {
                    go(
                        left - j,
                        parts - 1,
                        &acc / BigRat::from_integer(BigInt::from(j + 1)),
                    )
                })
                .fold(BigRat::zero(), |a, b| a + b)
        }
        go(m, k, BigRat::one())
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial(5, 2), int(10));
        assert_eq!(binomial(4, 0), int(1));
        assert_eq!(binomial(3, 5), int(0));
        assert_eq!(binomial(3, -1), int(0));
    }

    #[test]
    fn double_factorial_examples() {
        assert_eq!(double_factorial(5).unwrap(), int(15));
        assert_eq!(double_factorial(-1).unwrap(), int(1));
        assert_eq!(double_factorial(0).unwrap(), int(1));
        assert_eq!(double_factorial(7).unwrap(), int(105));
        assert!(matches!(
            double_factorial(-2),
            Err(Error::DoubleFactorialDomain(-2))
        ));
    }

    #[test]
    fn stirling2_examples() {
        assert_eq!(stirling2(4, 2), int(brute_stirling2(4, 2) as i64));
        assert_eq!(stirling2(4, 2), int(7));
        for n in 0..10 {
            assert_eq!(stirling2(n, n), int(1));
        }
        assert_eq!(stirling2(3, 0), int(0));
        assert_eq!(stirling2(0, 0), int(1));
        assert_eq!(stirling2(2, 3), int(0));
        assert_eq!(stirling2(-1, 0), int(0));
    }

    #[test]
    fn stirling2_matches_enumeration() {
        for n in 0..=9usize {
            for k in 0..=n {
                assert_eq!(
                    stirling2(n as i64, k as i64),
                    int(brute_stirling2(n, k) as i64),
                    "S2({n},{k})"
                );
            }
        }
    }

    #[test]
    fn assoc_stirling1_examples() {
        assert_eq!(assoc_stirling1(4, 2), int(3));
        assert_eq!(assoc_stirling1(5, 2), int(20));
        assert_eq!(assoc_stirling1(6, 2), int(130));
        assert_eq!(assoc_stirling1(0, 0), int(1));
        assert_eq!(assoc_stirling1(3, 2), int(0));
    }

    #[test]
    fn assoc_stirling1_matches_derangements() {
        for n in 0..=9usize {
            let counts = brute_derangement_cycles(n);
            for k in 0..=n {
                assert_eq!(
                    assoc_stirling1(n as i64, k as i64),
                    int(counts[k] as i64),
                    "d({n},{k})"
                );
            }
        }
    }

    #[test]
    fn h_value_examples() {
        assert_eq!(h_value(2, 1), rat(1, 3));
        assert_eq!(h_value(2, 2), rat(1, 4));
        assert_eq!(h_value(3, 2), rat(1, 3));
        assert_eq!(h_value(0, 0), rat(1, 1));
        assert_eq!(h_value(3, 0), rat(0, 1));
        assert_eq!(h_value(2, 3), rat(0, 1));
    }

    #[test]
    fn h_value_matches_composition_sum() {
        for m in 0..=10usize {
            for k in 0..=10usize {
                assert_eq!(
                    h_value(m as i64, k as i64),
                    composition_h(m, k),
                    "H({m},{k})"
                );
            }
        }
    }

    #[test]
    fn bell_partial_examples() {
        let t: Vec<BigRat> = (1..=6).map(|v| rat(v * v + 1, v)).collect();
        // B_{n,1}(t) = t_n
        for n in 1..=6 {
            assert_eq!(bell_partial(n, 1, &t).unwrap(), t[n - 1]);
        }
        assert_eq!(bell_partial(3, 2, &t).unwrap(), rat(3, 1) * &t[0] * &t[1]);
        let t1 = t[0].clone();
        assert_eq!(bell_partial(4, 4, &t).unwrap(), &t1 * &t1 * &t1 * &t1);
    }

    #[test]
    fn bell_partial_all_ones_gives_stirling2() {
        let ones = vec![BigRat::one(); 10];
        for n in 1..=10usize {
            for k in 1..=n {
                assert_eq!(
                    bell_partial(n, k, &ones).unwrap(),
                    BigRat::from_integer(stirling2(n as i64, k as i64))
                );
            }
        }
    }

    #[test]
    fn bell_partial_rejects_bad_input() {
        let t = vec![BigRat::one(); 2];
        assert!(matches!(
            bell_partial(2, 3, &t),
            Err(Error::BellIndex { .. })
        ));
        assert!(matches!(
            bell_partial(3, 0, &t),
            Err(Error::BellIndex { .. })
        ));
        assert!(matches!(
            bell_partial(5, 1, &t),
            Err(Error::BellArguments {
                needed: 5,
                got: 2,
                ..
            })
        ));
    }

    #[test]
    fn pow_signed_handles_negative_exponents() {
        assert_eq!(pow_signed(3, -2), rat(1, 9));
        assert_eq!(pow_signed(1, -1), rat(1, 1));
        assert_eq!(pow_signed(0, 0), rat(1, 1));
        assert_eq!(pow_signed(-2, 3), rat(-8, 1));
    }

    #[test]
    fn memo_table_is_consistent_across_threads() {
        let handles: Vec<_> = (0..4)
            .map(|t| {
                std::thread::spawn(move || {
                    (0..30)
                        .map(|n| stirling2(n, (n + t) / 2))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for (t, h) in handles.into_iter().enumerate() {
            let got = h.join().unwrap();
            for (n, v) in got.into_iter().enumerate() {
                assert_eq!(v, stirling2(n as i64, ((n + t) / 2) as i64));
            }
        }
    }
}
