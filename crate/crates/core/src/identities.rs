//! Exact identity sweeps over the Stirling, `ζ/ε`, jet and ODE machinery.
//!
//! Each sweep returns a [`FamilyReport`]. Symbolic families are capped at
//! [`SYMBOLIC_MAX_N`] regardless of the requested bound.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::coefftab::{lahiri_coefficients, zeta_eps_recursive, ZetaEpsTable};
use crate::error::{Error, Result};
use crate::stirling::{
    binomial, falling_factorial_coeffs, stirling_second_closed, Kind, StirlingTable,
};
use crate::symalg::{
    assemble_ab_closed, build_ab, build_alpha_ode, build_c1, x_coefficient, ExpPoly, Method,
    Monomial, RingElem,
};
use crate::Rat;

/// Largest `n` used by the symbolic (jet and ODE) families.
pub const SYMBOLIC_MAX_N: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyReport {
    pub family: String,
    pub n_min: usize,
    pub n_max: usize,
    pub checks: usize,
    pub failures: usize,
    /// Description of the first failing case.
    pub first_failure: Option<String>,
}

impl FamilyReport {
    fn new(family: &str, n_min: usize, n_max: usize) -> Self {
        FamilyReport {
            family: family.into(),
            n_min,
            n_max,
            checks: 0,
            failures: 0,
            first_failure: None,
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(what());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    /// `"<family>: n=a..b PASS (k checks)"`.
    pub fn line(&self) -> String {
        let range = if self.n_min == self.n_max {
            format!("n={}", self.n_min)
        } else {
            format!("n={}..{}", self.n_min, self.n_max)
        };
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        let mut s = format!("{}: {range} {verdict} ({} checks", self.family, self.checks);
        if self.failures > 0 {
            s.push_str(&format!(", {} failures", self.failures));
        }
        s.push(')');
        if let Some(f) = &self.first_failure {
            s.push_str(&format!(" first failure: {f}"));
        }
        s
    }
}

fn delta(a: usize, b: usize) -> BigInt {
    if a == b {
        BigInt::one()
    } else {
        BigInt::zero()
    }
}

/// Recursion vs closed form for `S`, recursion vs falling-factorial
/// expansion for `s`, `1 <= k <= n <= max_n`.
pub fn stirling_dual_route(max_n: usize) -> Result<FamilyReport> {
    let s1 = StirlingTable::new(Kind::First, max_n);
    let s2 = StirlingTable::new(Kind::Second, max_n);
    let mut rep = FamilyReport::new("Stirling dual route", 1, max_n);
    for n in 1..=max_n {
        let ff = falling_factorial_coeffs(n);
        for k in 1..=n {
            let (ni, ki) = (n as i64, k as i64);
            let closed = stirling_second_closed(ni, ki)?;
            rep.check(s2.get(ni, ki) == &closed, || format!("S({n},{k})"));
            rep.check(s1.get(ni, ki) == &ff[k], || format!("s({n},{k})"));
        }
    }
    Ok(rep)
}

/// `Σ_r s(n,r) S(r,k) = δ_{nk}` and `Σ_r S(n,r) s(r,k) = δ_{nk}`.
pub fn stirling_orthogonality(max_n: usize) -> FamilyReport {
    let s1 = StirlingTable::new(Kind::First, max_n);
    let s2 = StirlingTable::new(Kind::Second, max_n);
    let mut rep = FamilyReport::new("Stirling orthogonality", 0, max_n);
    for n in 0..=max_n {
        for k in 0..=n {
            let (ni, ki) = (n as i64, k as i64);
            let a: BigInt = (ki..=ni).map(|r| s1.get(ni, r) * s2.get(r, ki)).sum();
            let b: BigInt = (ki..=ni).map(|r| s2.get(ni, r) * s1.get(r, ki)).sum();
            rep.check(a == delta(n, k), || format!("Σ s(n,r)S(r,k) at ({n},{k}) = {a}"));
            rep.check(b == delta(n, k), || format!("Σ S(n,r)s(r,k) at ({n},{k}) = {b}"));
        }
    }
    rep
}

/// `|s(n,k)| = (-1)^{n-k} s(n,k)` for nonzero entries.
pub fn stirling_sign_law(max_n: usize) -> FamilyReport {
    let s1 = StirlingTable::new(Kind::First, max_n);
    let mut rep = FamilyReport::new("Stirling sign law", 0, max_n);
    for n in 0..=max_n as i64 {
        for k in 0..=n {
            let v = s1.get(n, k);
            if v.is_zero() {
                continue;
            }
            let signed = if (n - k) % 2 == 0 { v.clone() } else { -v };
            rep.check(signed == v.abs() && signed.is_positive(), || format!("s({n},{k}) = {v}"));
        }
    }
    rep
}

/// `Σ_{k=1}^n s(n,k) = 0` for `n >= 2`.
pub fn stirling_row_sum(max_n: usize) -> FamilyReport {
    let s1 = StirlingTable::new(Kind::First, max_n);
    let mut rep = FamilyReport::new("Stirling row sum", 2, max_n);
    for n in 2..=max_n {
        let sum: BigInt = s1.row(n).iter().skip(1).sum();
        rep.check(sum.is_zero(), || format!("Σ_k s({n},k) = {sum}"));
    }
    rep
}

/// `s(n,n) = 1`, `s(n,n-1) = -n(n-1)/2`, `S(n,n-1) = n(n-1)/2`.
pub fn stirling_diagonals(max_n: usize) -> FamilyReport {
    let s1 = StirlingTable::new(Kind::First, max_n);
    let s2 = StirlingTable::new(Kind::Second, max_n);
    let mut rep = FamilyReport::new("Stirling diagonals", 0, max_n);
    for n in 0..=max_n as i64 {
        rep.check(s1.get(n, n).is_one(), || format!("s({n},{n})"));
        if n >= 1 {
            let t = BigInt::from(n * (n - 1) / 2);
            rep.check(s1.get(n, n - 1) == &-&t, || format!("s({n},{})", n - 1));
            rep.check(s2.get(n, n - 1) == &t, || format!("S({n},{})", n - 1));
        }
    }
    rep
}

/// Recursive and direct `ζ/ε` tables agree entrywise.
pub fn zeta_eps_dual_route(max_n: usize) -> Result<FamilyReport> {
    let direct = ZetaEpsTable::direct(max_n);
    let rec = zeta_eps_recursive(max_n)?;
    let mut rep = FamilyReport::new("zeta/eps dual route", 1, max_n);
    for n in 1..=max_n as i64 {
        for k in 0..n {
            for j in 0..=n - k {
                rep.check(direct.zeta(n, k, j) == rec.zeta(n, k, j), || format!("ζ({n},{k},{j})"));
                rep.check(direct.eps(n, k, j) == rec.eps(n, k, j), || format!("ε({n},{k},{j})"));
            }
        }
    }
    Ok(rep)
}

/// The three `s(n,j)`-weighted sums of `ζ` and `ε` over `j`.
pub fn weighted_sums(max_n: usize) -> FamilyReport {
    let t = ZetaEpsTable::direct(max_n);
    let s1 = StirlingTable::new(Kind::First, max_n);
    let mut rep = FamilyReport::new("zeta/eps weighted sums", 1, max_n);
    for n in 1..=max_n as i64 {
        for k in 0..n {
            for p in 0..=n - k {
                let zs: BigInt = (p + k..=n).map(|j| s1.get(n, j) * t.zeta(j, k, p)).sum();
                // the j = k term at p = 0 needs ε_{k,k,0} = 1, the j = n-k
                // carve-out taken at n = k; the table itself stores 0 there
                let mut es: BigInt = (p + k..=n).map(|j| s1.get(n, j) * t.eps(j, k, p)).sum();
                if p == 0 && k >= 1 {
                    es += s1.get(n, k);
                }
                let z_want = if p <= n - k - 1 { s1.get(n - p, k + 1).clone() } else { BigInt::zero() };
                rep.check(zs == z_want, || format!("ζ-sum at (n,k,p) = ({n},{k},{p})"));
                rep.check(&es == s1.get(n - p, k), || format!("ε-sum at (n,k,p) = ({n},{k},{p})"));
            }
        }
    }
    rep
}

/// `ζ_{n,k,1} = C(n-1,k+1)` and `ε_{n,k,1} = C(n-1,k)` obey Pascal's rule in `n`.
pub fn pascal_consistency(max_n: usize) -> FamilyReport {
    let t = ZetaEpsTable::direct(max_n);
    let mut rep = FamilyReport::new("zeta/eps Pascal rule", 2, max_n);
    for n in 2..=max_n as i64 {
        for k in 0..n {
            rep.check(t.zeta(n, k, 1) == &binomial(n - 1, k + 1), || format!("ζ({n},{k},1)"));
            rep.check(t.eps(n, k, 1) == &binomial(n - 1, k), || format!("ε({n},{k},1)"));
            // C(n-1,m) = C(n-2,m) + C(n-2,m-1) with the n-1 row read from the table
            let zp = t.zeta(n - 1, k, 1) + binomial(n - 2, k);
            let ep = t.eps(n - 1, k, 1) + binomial(n - 2, k - 1);
            rep.check(t.zeta(n, k, 1) == &zp, || format!("ζ Pascal at ({n},{k})"));
            rep.check(t.eps(n, k, 1) == &ep, || format!("ε Pascal at ({n},{k})"));
        }
    }
    rep
}

/// `ζ_{n,n-1,1} = 0`.
pub fn zeta_edge(max_n: usize) -> FamilyReport {
    let t = ZetaEpsTable::direct(max_n);
    let mut rep = FamilyReport::new("zeta edge", 1, max_n);
    for n in 1..=max_n as i64 {
        rep.check(t.zeta(n, n - 1, 1).is_zero(), || format!("ζ({n},{},1)", n - 1));
    }
    rep
}

/// `Σ_k (-1)^k d_k = 0` for the back-substituted `d_k`.
pub fn d_alternating_sum(max_n: usize) -> Result<FamilyReport> {
    let mut rep = FamilyReport::new("d alternating sum", 2, max_n);
    for n in 2..=max_n {
        let lc = lahiri_coefficients(n)?;
        let sum: BigInt = (1..=n)
            .map(|k| if k % 2 == 0 { lc.d(k).clone() } else { -lc.d(k) })
            .sum();
        rep.check(sum.is_zero(), || format!("n = {n}: {sum}"));
    }
    Ok(rep)
}

/// `a_{n-1} = -(n(n-1)/2) c a_n` and `a_{n-2} = a_n c^2 n(n-1)(n-2)(3n-1)/24`.
pub fn lahiri_low_terms(max_n: usize) -> Result<FamilyReport> {
    let mut rep = FamilyReport::new("a_(n-1), a_(n-2) closed forms", 2, max_n);
    for n in 2..=max_n {
        let lc = lahiri_coefficients(n)?;
        let ni = n as i64;
        let want1 = RingElem::term(Monomial::new(1, 0, 1), Rat::from_integer((-ni * (ni - 1) / 2).into()));
        rep.check(lc.a(n - 1) == want1, || format!("a_(n-1) at n = {n}"));
        let q = Rat::new((ni * (ni - 1) * (ni - 2) * (3 * ni - 1)).into(), 24.into());
        let want2 = RingElem::term(Monomial::new(2, 0, 1), q);
        rep.check(lc.a(n - 2) == want2, || format!("a_(n-2) at n = {n}"));
    }
    Ok(rep)
}

fn sym_cap(max_n: usize) -> usize {
    max_n.min(SYMBOLIC_MAX_N)
}

/// Derivative jets by recursion vs the `b`/`β` assembly.
pub fn jet_route_equivalence(max_n: usize) -> Result<FamilyReport> {
    let cap = sym_cap(max_n);
    let mut rep = FamilyReport::new("f^(n) jet routes", 1, cap);
    for n in 1..=cap {
        rep.check(build_ab(n)? == assemble_ab_closed(n)?, || format!("n = {n}"));
    }
    Ok(rep)
}

/// Differentiating the jet of `f^(n)` gives the jet of `f^(n+1)`.
pub fn jet_consistency(max_n: usize) -> Result<FamilyReport> {
    let cap = sym_cap(max_n);
    let mut rep = FamilyReport::new("jet derivative consistency", 1, cap.saturating_sub(1).max(1));
    for n in 1..cap {
        rep.check(build_ab(n)?.derive() == assemble_ab_closed(n + 1)?, || format!("n = {n}"));
    }
    Ok(rep)
}

pub fn c1_vanishes(max_n: usize) -> Result<FamilyReport> {
    let cap = sym_cap(max_n);
    let mut rep = FamilyReport::new("C1 vanishes", 2, cap);
    for n in 2..=cap {
        rep.check(build_c1(&lahiri_coefficients(n)?)?.is_zero(), || format!("n = {n}"));
    }
    Ok(rep)
}

/// Assembled and closed ODE agree; top and bottom coefficients have their
/// specialized forms.
pub fn ode_routes(max_n: usize) -> Result<FamilyReport> {
    let cap = sym_cap(max_n);
    let mut rep = FamilyReport::new("alpha-ODE routes", 2, cap);
    for n in 2..=cap {
        let a = build_alpha_ode(n, Method::Assembled)?;
        let c = build_alpha_ode(n, Method::Closed)?;
        rep.check(a == c, || format!("routes differ at n = {n}"));

        let top = -ExpPoly::one_minus_e().scale(&RingElem::an());
        rep.check(a.coeff(n - 1) == &top, || format!("top coefficient at n = {n}"));
        let x_top = ExpPoly::one_minus_e().scale(&RingElem::c_pow(1 - n as i32));
        rep.check(x_coefficient(n, n - 1)? == x_top, || format!("X_(n-1) at n = {n}"));

        let mut bottom = ExpPoly::one();
        for p in 0..n {
            let m = n - p - 1;
            let mut v = crate::stirling::factorial(m as u64);
            if m % 2 == 1 {
                v = -v;
            }
            let r = RingElem::term(Monomial::new(m as i32, p as u32, 1), -Rat::from_integer(v));
            bottom.add_term(p as u32, &r);
        }
        rep.check(a.coeff(0) == &bottom, || format!("order-0 coefficient at n = {n}"));
    }
    Ok(rep)
}

/// Every family, in a fixed order.
pub fn run_all(max_n: usize) -> Result<Vec<FamilyReport>> {
    if max_n < 2 {
        return Err(Error::InvalidInput(format!("identity sweep needs N >= 2, got {max_n}")));
    }
    Ok(vec![
        stirling_dual_route(max_n)?,
        stirling_orthogonality(max_n),
        stirling_sign_law(max_n),
        stirling_row_sum(max_n),
        stirling_diagonals(max_n),
        zeta_eps_dual_route(max_n)?,
        weighted_sums(max_n),
        pascal_consistency(max_n),
        zeta_edge(max_n),
        d_alternating_sum(max_n)?,
        lahiri_low_terms(max_n)?,
        jet_route_equivalence(max_n)?,
        jet_consistency(max_n)?,
        c1_vanishes(max_n)?,
        ode_routes(max_n)?,
    ])
}
