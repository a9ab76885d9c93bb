//! Stirling numbers of the first and second kind.
//!
//! Out-of-range indices follow the usual total conventions: `S(0,0) = s(0,0) = 1`,
//! `S(n,0) = s(n,0) = 0` for `n >= 1`, zero for `k > n` and for `k < 0`.
//! Every downstream sum relies on these silently.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

static ZERO: BigInt = BigInt::ZERO;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    /// Signed Stirling numbers of the first kind `s(n,k)`.
    First,
    /// Stirling numbers of the second kind `S(n,k)`.
    Second,
}

/// Immutable triangular table `t[n][k]`, `0 <= k <= n <= max_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StirlingTable {
    kind: Kind,
    rows: Vec<Vec<BigInt>>,
}

impl StirlingTable {
    pub fn new(kind: Kind, max_n: usize) -> Self {
        let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(max_n + 1);
        rows.push(vec![BigInt::one()]);
        for n in 1..=max_n {
            let prev = &rows[n - 1];
            let mut row = vec![BigInt::zero(); n + 1];
            for (k, slot) in row.iter_mut().enumerate().skip(1) {
                let diag = &prev[k - 1];
                let same = prev.get(k).unwrap_or(&ZERO);
                *slot = match kind {
                    // S(n,k) = S(n-1,k-1) + k S(n-1,k)
                    Kind::Second => diag + same * BigInt::from(k),
                    // s(n,k) = s(n-1,k-1) - (n-1) s(n-1,k)
                    Kind::First => diag - same * BigInt::from(n - 1),
                };
            }
            rows.push(row);
        }
        StirlingTable { kind, rows }
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn max_n(&self) -> usize {
        self.rows.len() - 1
    }

    /// Entry with the boundary conventions applied.
    ///
    /// Panics if `n` exceeds the table size.
    pub fn get(&self, n: i64, k: i64) -> &BigInt {
        if n < 0 || k < 0 || k > n {
            return &ZERO;
        }
        let n = n as usize;
        assert!(
            n <= self.max_n(),
            "Stirling table built up to {} but row {} requested",
            self.max_n(),
            n
        );
        &self.rows[n][k as usize]
    }

    /// Row `n` as a slice of length `n + 1`.
    pub fn row(&self, n: usize) -> &[BigInt] {
        &self.rows[n]
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }
}

fn check_n(n: i64) -> Result<usize> {
    if n < 0 {
        return Err(Error::InvalidInput(format!("Stirling index n = {n} must be >= 0")));
    }
    Ok(n as usize)
}

/// `S(n,k)` by the triangular recursion.
pub fn stirling_second(n: i64, k: i64) -> Result<BigInt> {
    let n_idx = check_n(n)?;
    if k < 0 || k > n {
        return Ok(BigInt::zero());
    }
    Ok(StirlingTable::new(Kind::Second, n_idx).get(n, k).clone())
}

/// `s(n,k)` by the recursion `s(n+1,k) = s(n,k-1) - n s(n,k)`.
pub fn stirling_first(n: i64, k: i64) -> Result<BigInt> {
    let n_idx = check_n(n)?;
    if k < 0 || k > n {
        return Ok(BigInt::zero());
    }
    Ok(StirlingTable::new(Kind::First, n_idx).get(n, k).clone())
}

/// `S(n,k) = (1/k!) Σ_{m=1}^{k} (-1)^{k-m} C(k,m) m^n`, for `1 <= k <= n`.
pub fn stirling_second_closed(n: i64, k: i64) -> Result<BigInt> {
    if k < 1 || k > n {
        return Err(Error::IndexOutOfRange(format!(
            "closed form needs 1 <= k <= n, got (n, k) = ({n}, {k})"
        )));
    }
    let exp = u32::try_from(n).map_err(|_| Error::InvalidInput(format!("n = {n} too large")))?;
    let mut acc = BigInt::zero();
    for m in 1..=k {
        let term = binomial(k, m) * BigInt::from(m).pow(exp);
        if (k - m) % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    let kf = factorial(k as u64);
    let (q, r) = (&acc / &kf, &acc % &kf);
    if !r.is_zero() {
        return Err(Error::Internal(format!(
            "inexact division in closed-form S({n},{k}): {acc} / {kf}"
        )));
    }
    Ok(q)
}

/// Coefficients of `(t)_n = t(t-1)...(t-n+1)` in the monomial basis, low degree first.
pub fn falling_factorial_coeffs(n: usize) -> Vec<BigInt> {
    let mut coeffs = vec![BigInt::one()];
    for i in 0..n {
        // multiply by (t - i)
        let i = BigInt::from(i);
        let mut next = vec![BigInt::zero(); coeffs.len() + 1];
        for (d, a) in coeffs.iter().enumerate() {
            next[d + 1] += a;
            next[d] -= a * &i;
        }
        coeffs = next;
    }
    coeffs
}

/// `|s(n,k)|`.
pub fn stirling_first_unsigned(n: i64, k: i64) -> Result<BigInt> {
    stirling_first(n, k).map(|v| v.abs())
}

/// Binomial coefficient with `C(n,k) = 0` for `k < 0` or `k > n`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= BigInt::from(n - i);
        acc /= BigInt::from(i + 1);
    }
    acc
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}
