//! Auxiliary coefficient families for the derivative formula
//! `f^(n) = A_n f + B_n` and the coefficient constraint on `L(f)`.
//!
//! `ζ_{n,k,j}` and `ε_{n,k,j}` are defined for `n >= 1`, `0 <= k <= n-1`,
//! `0 <= j <= n-k`. Two independent routes are provided: the direct
//! definitions ([`zeta_direct`], [`eps_direct`]) and the recursive
//! construction ([`zeta_eps_recursive`]). Empty sums are zero throughout.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::stirling::{binomial, Kind, StirlingTable};
use crate::symalg::{ExpPoly, Monomial, RingElem};
use crate::Rat;

static ZERO: BigInt = BigInt::ZERO;

fn check_nkj(n: i64, k: i64, j: i64) -> Result<()> {
    if n < 1 || k < 0 || k > n - 1 || j < 0 || j > n - k {
        return Err(Error::IndexOutOfRange(format!(
            "(n, k, j) = ({n}, {k}, {j}) outside n >= 1, 0 <= k <= n-1, 0 <= j <= n-k"
        )));
    }
    Ok(())
}

fn zeta_with(s2: &StirlingTable, n: i64, k: i64, j: i64) -> BigInt {
    if j == n - k {
        return BigInt::zero();
    }
    match j {
        0 => {
            if k == n - 1 {
                BigInt::one()
            } else {
                BigInt::zero()
            }
        }
        1 => binomial(n - 1, k + 1),
        _ => (0..=n - 1 - k - j)
            .map(|m| {
                BigInt::from(j).pow(m as u32) * binomial(k + m, k) * s2.get(n - 1 - k - m, j)
            })
            .sum(),
    }
}

fn eps_with(s2: &StirlingTable, n: i64, k: i64, j: i64) -> BigInt {
    if j == n - k {
        return BigInt::one();
    }
    match j {
        0 => BigInt::zero(),
        1 => binomial(n - 1, k),
        _ => (0..=n - k - j)
            .map(|m| {
                BigInt::from(j).pow(m as u32) * binomial(k + m, k) * s2.get(n - 1 - k - m, j - 1)
            })
            .sum(),
    }
}

/// `ζ_{n,k,j}` from its defining sums and special cases. `n = 0` gives 0.
pub fn zeta_direct(n: i64, k: i64, j: i64) -> Result<BigInt> {
    if n == 0 {
        return Ok(BigInt::zero());
    }
    check_nkj(n, k, j)?;
    let s2 = StirlingTable::new(Kind::Second, n as usize);
    Ok(zeta_with(&s2, n, k, j))
}

/// `ε_{n,k,j}` from its defining sums and special cases. `n = 0` gives 0.
pub fn eps_direct(n: i64, k: i64, j: i64) -> Result<BigInt> {
    if n == 0 {
        return Ok(BigInt::zero());
    }
    check_nkj(n, k, j)?;
    let s2 = StirlingTable::new(Kind::Second, n as usize);
    Ok(eps_with(&s2, n, k, j))
}

/// `ζ` and `ε` for all `1 <= n <= max_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZetaEpsTable {
    // [n][k][j], n = 0 row empty
    zeta: Vec<Vec<Vec<BigInt>>>,
    eps: Vec<Vec<Vec<BigInt>>>,
}

/// One table entry for serialization: `[n, k, j, value]`.
pub type TableEntry = (usize, usize, usize, String);

impl ZetaEpsTable {
    fn empty(max_n: usize) -> Self {
        let shape = |n: usize| -> Vec<Vec<BigInt>> {
            (0..n).map(|k| vec![BigInt::zero(); n - k + 1]).collect()
        };
        ZetaEpsTable {
            zeta: (0..=max_n).map(shape).collect(),
            eps: (0..=max_n).map(shape).collect(),
        }
    }

    /// Table filled from the direct definitions.
    pub fn direct(max_n: usize) -> Self {
        let s2 = StirlingTable::new(Kind::Second, max_n);
        let mut t = ZetaEpsTable::empty(max_n);
        for n in 1..=max_n {
            for k in 0..n {
                for j in 0..=n - k {
                    let (ni, ki, ji) = (n as i64, k as i64, j as i64);
                    t.zeta[n][k][j] = zeta_with(&s2, ni, ki, ji);
                    t.eps[n][k][j] = eps_with(&s2, ni, ki, ji);
                }
            }
        }
        t
    }

    pub fn max_n(&self) -> usize {
        self.zeta.len() - 1
    }

    /// `ζ_{n,k,j}`, zero outside the declared range.
    pub fn zeta(&self, n: i64, k: i64, j: i64) -> &BigInt {
        Self::lookup(&self.zeta, n, k, j)
    }

    /// `ε_{n,k,j}`, zero outside the declared range.
    pub fn eps(&self, n: i64, k: i64, j: i64) -> &BigInt {
        Self::lookup(&self.eps, n, k, j)
    }

    fn lookup(v: &[Vec<Vec<BigInt>>], n: i64, k: i64, j: i64) -> &BigInt {
        if n < 1 || k < 0 || j < 0 || k > n - 1 || j > n - k {
            return &ZERO;
        }
        let n = n as usize;
        assert!(n < v.len(), "ζ/ε table built up to {} but n = {} requested", v.len() - 1, n);
        &v[n][k as usize][j as usize]
    }

    /// `(n, k, j, ζ)` in ascending index order, values as decimal strings.
    pub fn zeta_entries(&self) -> Vec<TableEntry> {
        Self::entries(&self.zeta)
    }

    pub fn eps_entries(&self) -> Vec<TableEntry> {
        Self::entries(&self.eps)
    }

    fn entries(v: &[Vec<Vec<BigInt>>]) -> Vec<TableEntry> {
        let mut out = Vec::new();
        for (n, rows) in v.iter().enumerate() {
            for (k, row) in rows.iter().enumerate() {
                for (j, val) in row.iter().enumerate() {
                    out.push((n, k, j, val.to_string()));
                }
            }
        }
        out
    }
}

/// Builds both tables from the `n = 1` seed by the three-term recursions
/// `ζ_{n+1,k,j} = j ζ_{n,k,j} + ζ_{n,k-1,j}` (same for `ε`) and the `k = 0`
/// forms `ζ_{n+1,0,j} = j ζ_{n,0,j} + S(n,j)`, `ε_{n+1,0,j} = j ε_{n,0,j} + S(n,j-1)`.
pub fn zeta_eps_recursive(max_n: usize) -> Result<ZetaEpsTable> {
    if max_n < 1 {
        return Err(Error::InvalidInput("ζ/ε table needs N >= 1".into()));
    }
    let s2 = StirlingTable::new(Kind::Second, max_n);
    let mut t = ZetaEpsTable::empty(max_n);
    t.zeta[1][0] = vec![BigInt::one(), BigInt::zero()];
    t.eps[1][0] = vec![BigInt::zero(), BigInt::one()];
    for n in 1..max_n {
        let ni = n as i64;
        let mut zeta_next = Vec::with_capacity(n + 1);
        let mut eps_next = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let ki = k as i64;
            let mut zrow = Vec::with_capacity(n + 2 - k);
            let mut erow = Vec::with_capacity(n + 2 - k);
            for j in 0..=(n + 1 - k) {
                let ji = j as i64;
                let jb = BigInt::from(j);
                let (z_extra, e_extra) = if k == 0 {
                    (s2.get(ni, ji).clone(), s2.get(ni, ji - 1).clone())
                } else {
                    (t.zeta(ni, ki - 1, ji).clone(), t.eps(ni, ki - 1, ji).clone())
                };
                zrow.push(&jb * t.zeta(ni, ki, ji) + z_extra);
                erow.push(&jb * t.eps(ni, ki, ji) + e_extra);
            }
            zeta_next.push(zrow);
            eps_next.push(erow);
        }
        t.zeta[n + 1] = zeta_next;
        t.eps[n + 1] = eps_next;
    }
    Ok(t)
}

/// `b_{n,k} = S(n,k) λ^k c^{n-k}`, for `1 <= k <= n`.
pub fn b_coeff(n: i64, k: i64) -> Result<RingElem> {
    if k < 1 || k > n {
        return Err(Error::IndexOutOfRange(format!("b_(n,k) needs 1 <= k <= n, got ({n}, {k})")));
    }
    let s2 = StirlingTable::new(Kind::Second, n as usize);
    Ok(b_with(&s2, n, k))
}

pub(crate) fn b_with(s2: &StirlingTable, n: i64, k: i64) -> RingElem {
    RingElem::term(
        Monomial::new((n - k) as i32, k as u32, 0),
        Rat::from_integer(s2.get(n, k).clone()),
    )
}

/// `β_{n,k} = Σ_{j=0}^{n-k} (ζ_{n,k,j} - c ε_{n,k,j}) c^{n-k-j-1} λ^j e^{jcz}`.
pub fn beta_coeff(n: i64, k: i64) -> Result<ExpPoly> {
    if n < 1 || k < 0 || k > n - 1 {
        return Err(Error::IndexOutOfRange(format!(
            "β_(n,k) needs n >= 1, 0 <= k <= n-1, got ({n}, {k})"
        )));
    }
    let s2 = StirlingTable::new(Kind::Second, n as usize);
    Ok(beta_with(&s2, n, k))
}

pub(crate) fn beta_with(s2: &StirlingTable, n: i64, k: i64) -> ExpPoly {
    let mut out = ExpPoly::zero();
    for j in 0..=n - k {
        let e = (n - k - j - 1) as i32;
        let zeta = Rat::from_integer(zeta_with(s2, n, k, j));
        let eps = Rat::from_integer(eps_with(s2, n, k, j));
        let mut r = RingElem::term(Monomial::new(e, j as u32, 0), zeta);
        r.add_term(Monomial::new(e + 1, j as u32, 0), -eps);
        out.add_term(j as u32, &r);
    }
    out
}

/// Coefficients `a_1..a_n` of `L(f)` forced by the sharing relations, with
/// the auxiliary magnitudes `d_1..d_n` (`a_k = (-1)^{n-k} a_n c^{n-k} d_k`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LahiriCoeffs {
    pub n: usize,
    /// `a[j-1] = a_j`.
    pub a: Vec<RingElem>,
    /// `d[k-1] = d_k`.
    pub d: Vec<BigInt>,
}

impl LahiriCoeffs {
    /// `a_j` for `1 <= j <= n`; `a_0 = 0`.
    pub fn a(&self, j: usize) -> RingElem {
        match j {
            0 => RingElem::zero(),
            j => self.a[j - 1].clone(),
        }
    }

    pub fn d(&self, k: usize) -> &BigInt {
        &self.d[k - 1]
    }

    pub fn record(&self) -> LahiriRecord {
        LahiriRecord {
            n: self.n,
            a: self
                .a
                .iter()
                .enumerate()
                .map(|(i, r)| LahiriTerm { j: i + 1, coeff: r.clone() })
                .collect(),
            d: self.d.iter().map(|v| v.to_string()).collect(),
        }
    }
}

/// Serialized form of [`LahiriCoeffs`].
#[derive(Clone, Debug, Serialize)]
pub struct LahiriRecord {
    pub n: usize,
    pub a: Vec<LahiriTerm>,
    pub d: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LahiriTerm {
    pub j: usize,
    pub coeff: RingElem,
}

/// `a_j = a_n c^{n-j} s(n,j)`, with `d_k` obtained independently by
/// back-substitution in `Σ_{j=p}^{n} a_j S(j,p) c^{j-p} = 0` and checked
/// against `|s(n,k)|`.
pub fn lahiri_coefficients(n: usize) -> Result<LahiriCoeffs> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("L(f) coefficients need n >= 2, got {n}")));
    }
    let s1 = StirlingTable::new(Kind::First, n);
    let s2 = StirlingTable::new(Kind::Second, n);
    let ni = n as i64;

    // d_p = (-1)^{n-p+1} S(n,p) - Σ_{j=p+1}^{n-1} (-1)^{j-p} S(j,p) d_j
    let mut d = vec![BigInt::zero(); n + 1];
    d[n] = BigInt::one();
    for p in (1..n).rev() {
        let pi = p as i64;
        let mut v = s2.get(ni, pi).clone();
        if (ni - pi + 1) % 2 != 0 {
            v = -v;
        }
        for j in (p + 1)..n {
            let term = s2.get(j as i64, pi) * &d[j];
            if (j - p) % 2 == 0 {
                v -= term;
            } else {
                v += term;
            }
        }
        d[p] = v;
    }
    for k in 1..=n {
        let want = s1.get(ni, k as i64).abs();
        if d[k] != want {
            return Err(Error::Internal(format!(
                "d_{k} = {} but |s({n},{k})| = {want}",
                d[k]
            )));
        }
    }

    let a = (1..=n)
        .map(|j| {
            RingElem::term(
                Monomial::new((n - j) as i32, 0, 1),
                Rat::from_integer(s1.get(ni, j as i64).clone()),
            )
        })
        .collect();
    Ok(LahiriCoeffs {
        n,
        a,
        d: d.into_iter().skip(1).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn an_c(c_pow: i32, v: i64) -> RingElem {
        RingElem::term(Monomial::new(c_pow, 0, 1), Rat::from_integer(v.into()))
    }

    #[test]
    fn zeta_examples() {
        assert_eq!(zeta_direct(1, 0, 0).unwrap(), big(1));
        assert_eq!(zeta_direct(4, 1, 1).unwrap(), big(3));
        assert_eq!(zeta_direct(4, 1, 2).unwrap(), big(1));
        assert_eq!(zeta_direct(3, 1, 2).unwrap(), big(0));
        assert_eq!(zeta_direct(0, 3, 7).unwrap(), big(0));
    }

    #[test]
    fn eps_examples() {
        assert_eq!(eps_direct(1, 0, 1).unwrap(), big(1));
        assert_eq!(eps_direct(3, 1, 1).unwrap(), big(2));
        assert_eq!(eps_direct(5, 2, 0).unwrap(), big(0));
    }

    #[test]
    fn out_of_range_rejected() {
        for (n, k, j) in [(3, 3, 0), (3, -1, 0), (3, 1, 3), (3, 0, -1), (-1, 0, 0)] {
            assert!(matches!(zeta_direct(n, k, j), Err(Error::IndexOutOfRange(_))), "{n},{k},{j}");
            assert!(matches!(eps_direct(n, k, j), Err(Error::IndexOutOfRange(_))), "{n},{k},{j}");
        }
        assert!(b_coeff(2, 0).is_err());
        assert!(b_coeff(2, 3).is_err());
        assert!(beta_coeff(2, 2).is_err());
        assert!(beta_coeff(0, 0).is_err());
    }

    #[test]
    fn recursive_seed_table() {
        let t = zeta_eps_recursive(1).unwrap();
        assert_eq!(t.zeta_entries(), vec![(1, 0, 0, "1".into()), (1, 0, 1, "0".into())]);
        assert_eq!(t.eps_entries(), vec![(1, 0, 0, "0".into()), (1, 0, 1, "1".into())]);
        assert!(zeta_eps_recursive(0).is_err());
    }

    #[test]
    fn recursive_matches_direct_small() {
        let t = zeta_eps_recursive(4).unwrap();
        assert_eq!(t.zeta(4, 1, 1), &zeta_direct(4, 1, 1).unwrap());
        assert_eq!(t.eps(4, 0, 4), &big(1));
        assert_eq!(t, ZetaEpsTable::direct(4));
    }

    #[test]
    fn definitional_invariants() {
        let t = ZetaEpsTable::direct(12);
        for n in 1..=12i64 {
            assert_eq!(t.zeta(n, n - 1, 0), &big(1));
            assert_eq!(t.zeta(n, n - 1, 1), &big(0));
            for k in 0..n {
                assert_eq!(t.zeta(n, k, n - k), &big(0));
                assert_eq!(t.eps(n, k, n - k), &big(1));
                assert_eq!(t.eps(n, k, 0), &big(0));
                if k <= n - 2 {
                    assert_eq!(t.zeta(n, k, 0), &big(0));
                }
                assert_eq!(t.zeta(n, k, 1), &binomial(n - 1, k + 1));
                assert_eq!(t.eps(n, k, 1), &binomial(n - 1, k));
            }
        }
    }

    #[test]
    fn b_coeff_examples() {
        assert_eq!(b_coeff(1, 1).unwrap(), RingElem::lambda());
        assert_eq!(b_coeff(2, 1).unwrap(), &RingElem::c() * &RingElem::lambda());
        assert_eq!(b_coeff(2, 2).unwrap(), RingElem::lambda_pow(2));
    }

    #[test]
    fn beta_coeff_examples() {
        // β_{1,0} = 1 - λE
        assert_eq!(beta_coeff(1, 0).unwrap(), ExpPoly::one_minus_e());

        // Independent oracle: B_2 = A_1 (1 - E) α + B_1' with A_1 = E, B_1 = (1 - E) α,
        // expanded by hand: α-coefficient E(1 - E) + (1 - E)' = E - E² - cE,
        // α'-coefficient 1 - E.
        let e = ExpPoly::e_pow(1);
        let e2 = ExpPoly::e_pow(2);
        let ce = e.scale(&RingElem::c());
        let want0 = &(&e - &e2) - &ce;
        assert_eq!(beta_coeff(2, 0).unwrap(), want0);
        assert_eq!(beta_coeff(2, 1).unwrap(), ExpPoly::one_minus_e());
    }

    #[test]
    fn lahiri_examples() {
        let l2 = lahiri_coefficients(2).unwrap();
        assert_eq!(l2.d, vec![big(1), big(1)]);
        assert_eq!(l2.a(1), an_c(1, -1));
        assert_eq!(l2.a(2), RingElem::an());
        assert!(l2.a(0).is_zero());

        let l3 = lahiri_coefficients(3).unwrap();
        assert_eq!(l3.d, vec![big(2), big(3), big(1)]);
        assert_eq!(l3.a(2), an_c(1, -3));
        assert_eq!(l3.a(1), an_c(2, 2));

        // a_{n-2} = a_n c^2 n(n-1)(n-2)(3n-1)/24 at n = 4 gives 11 c^2 a_4
        let l4 = lahiri_coefficients(4).unwrap();
        assert_eq!(l4.a(2), an_c(2, 4 * 3 * 2 * 11 / 24));
        assert_eq!(l4.a(2), an_c(2, 11));

        assert!(lahiri_coefficients(1).is_err());
    }

    #[test]
    fn lahiri_record_serializes() {
        let rec = lahiri_coefficients(2).unwrap().record();
        let v = serde_json::to_value(&rec).unwrap();
        assert_eq!(v["a"][0]["coeff"][0]["rational"], "-1/1");
        assert_eq!(v["a"][0]["coeff"][0]["c_pow"], 1);
        assert_eq!(v["d"], serde_json::json!(["1", "1"]));
    }
}
