//! Exact exponential-polynomial algebra and the symbolic constructions built
//! on it: `A_n`, `B_n`, the constraint `C_1`, and the ODE for `α`.

mod expoly;
mod jet;
mod ring;

pub use expoly::{ExpPoly, ExpTerm};
pub use jet::{AlphaJet, OdeSpec};
pub use ring::{parse_rat, rat_to_string, Monomial, MonomialRecord, RingElem};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::coefftab::{b_with, beta_with, lahiri_coefficients, LahiriCoeffs, ZetaEpsTable};
use crate::error::{Error, Result};
use crate::stirling::{factorial, Kind, StirlingTable};
use crate::Rat;

/// Jet of `f^(n)` obtained from `f' = E f + (1 - E) α` by repeated
/// differentiation.
pub fn build_ab(n: usize) -> Result<AlphaJet> {
    if n < 1 {
        return Err(Error::InvalidInput("f^(n) needs n >= 1".into()));
    }
    let mut jet = AlphaJet::f().derive();
    for _ in 1..n {
        jet = jet.derive();
    }
    Ok(jet)
}

/// Jet of `f^(n)` assembled from `b_{n,k}` and `β_{n,k}` directly.
pub fn assemble_ab_closed(n: usize) -> Result<AlphaJet> {
    if n < 1 {
        return Err(Error::InvalidInput("f^(n) needs n >= 1".into()));
    }
    let s2 = StirlingTable::new(Kind::Second, n);
    let ni = n as i64;
    let mut jet = AlphaJet::default();
    for k in 1..=ni {
        jet.fpart.add_term(k as u32, &b_with(&s2, ni, k));
    }
    for k in 0..ni {
        jet.add_alpha(k as usize, &beta_with(&s2, ni, k));
    }
    Ok(jet)
}

/// `C_1 = -a_n E^n + Σ_j a_j A_j` for the given coefficients of `L(f)`.
pub fn build_c1(coeffs: &LahiriCoeffs) -> Result<ExpPoly> {
    let n = coeffs.n;
    if n < 2 || coeffs.a.len() != n {
        return Err(Error::InvalidInput(format!(
            "C_1 needs n >= 2 and n coefficients, got n = {n} with {}",
            coeffs.a.len()
        )));
    }
    let an = coeffs.a(n);
    let mut out = -ExpPoly::e_pow(n as u32).scale(&an);
    let mut jet = AlphaJet::f();
    for j in 1..=n {
        jet = jet.derive();
        out += &jet.fpart.scale(&coeffs.a(j));
    }
    Ok(out)
}

/// Which construction [`build_alpha_ode`] uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// `C_2 = (1 - a_n E^n) α - Σ_j a_j B_j` from the derivative jets.
    Assembled,
    /// The three-line closed formula with Stirling numbers of the first kind.
    Closed,
}

/// The order `n - 1` linear ODE satisfied by `α`.
pub fn build_alpha_ode(n: usize, method: Method) -> Result<OdeSpec> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("α-ODE needs n >= 2, got {n}")));
    }
    match method {
        Method::Assembled => ode_assembled(n),
        Method::Closed => ode_closed(n),
    }
}

fn ode_assembled(n: usize) -> Result<OdeSpec> {
    let lc = lahiri_coefficients(n)?;
    let lead = &ExpPoly::one() - &ExpPoly::e_pow(n as u32).scale(&lc.a(n));
    let mut c2 = AlphaJet::alpha(0).scale(&lead);
    let mut jet = AlphaJet::f();
    for j in 1..=n {
        jet = jet.derive();
        let bj = AlphaJet {
            fpart: ExpPoly::zero(),
            apart: jet.apart.clone(),
        };
        c2 = c2.sub(&bj.scale(&ExpPoly::constant(lc.a(j))));
    }
    OdeSpec::from_jet(n, &c2)
}

fn ode_closed(n: usize) -> Result<OdeSpec> {
    let an = RingElem::an();
    let ni = n as i64;
    let s1 = StirlingTable::new(Kind::First, n);

    // α: 1 - a_n Σ_{p=0}^{n-1} c^{n-p-1} λ^p e^{pcz} (-1)^{n-p-1} (n-p-1)!
    let mut sum = ExpPoly::zero();
    for p in 0..n {
        let m = n - p - 1;
        let mut v = factorial(m as u64);
        if m % 2 == 1 {
            v = -v;
        }
        let r = RingElem::term(Monomial::new(m as i32, p as u32, 0), Rat::from_integer(v));
        sum.add_term(p as u32, &r);
    }
    let mut coeffs = vec![&ExpPoly::one() - &sum.scale(&an)];

    // α^(k), 1 <= k <= n-2
    for k in 1..n.saturating_sub(1) {
        coeffs.push(-x_with(&s1, ni, k as i64).scale(&(&an * &RingElem::c_pow(ni as i32 - 1))));
    }

    // α^(n-1): -a_n (1 - E)
    coeffs.push(-ExpPoly::one_minus_e().scale(&an));
    OdeSpec::new(n, coeffs)
}

// c^{-k} (s(n,k+1) + Σ_{p=1}^{n-k} (λ/c)^p e^{pcz} (s(n-p,k+1) - c s(n-p,k)))
fn x_with(s1: &StirlingTable, n: i64, k: i64) -> ExpPoly {
    let mut out = ExpPoly::constant(RingElem::int(s1.get(n, k + 1).clone()).shift_c(-k as i32));
    for p in 1..=n - k {
        let e = (-k - p) as i32;
        let mut r = RingElem::term(
            Monomial::new(e, p as u32, 0),
            Rat::from_integer(s1.get(n - p, k + 1).clone()),
        );
        r.add_term(
            Monomial::new(e + 1, p as u32, 0),
            -Rat::from_integer(s1.get(n - p, k).clone()),
        );
        out.add_term(p as u32, &r);
    }
    out
}

/// `X_k` in the simplified Stirling form, `0 <= k <= n-1`.
pub fn x_coefficient(n: usize, k: usize) -> Result<ExpPoly> {
    check_x(n, k)?;
    let s1 = StirlingTable::new(Kind::First, n);
    Ok(x_with(&s1, n as i64, k as i64))
}

/// `X_k` as the unsimplified double sum
/// `c^{-k} Σ_p (λ/c)^p e^{pcz} Σ_j s(n,j) (ζ_{j,k,p} - c ε_{j,k,p})`.
pub fn x_coefficient_sum(n: usize, k: usize, table: &ZetaEpsTable) -> Result<ExpPoly> {
    check_x(n, k)?;
    if table.max_n() < n {
        return Err(Error::InvalidInput(format!(
            "ζ/ε table built up to {} but n = {n}",
            table.max_n()
        )));
    }
    let s1 = StirlingTable::new(Kind::First, n);
    let (ni, ki) = (n as i64, k as i64);
    let mut out = ExpPoly::zero();
    for p in 0..=ni - ki {
        let mut zsum = BigInt::ZERO;
        let mut esum = BigInt::ZERO;
        for j in (ki + 1).max(p + ki)..=ni {
            zsum += s1.get(ni, j) * table.zeta(j, ki, p);
            esum += s1.get(ni, j) * table.eps(j, ki, p);
        }
        let e = (-ki - p) as i32;
        let mut r = RingElem::term(Monomial::new(e, p as u32, 0), Rat::from_integer(zsum));
        r.add_term(Monomial::new(e + 1, p as u32, 0), -Rat::from_integer(esum));
        out.add_term(p as u32, &r);
    }
    Ok(out)
}

fn check_x(n: usize, k: usize) -> Result<()> {
    if n < 1 || k >= n {
        return Err(Error::IndexOutOfRange(format!("X_k needs 0 <= k <= n-1, got n = {n}, k = {k}")));
    }
    Ok(())
}

/// Numerator obtained by eliminating `α` between the two sharing relations,
/// `E(1 - a_n E^{n-1}) f + (a_1 (1 - E) - (1 - a_n E^n)) f'`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EliminationReport {
    pub n: usize,
    pub f_coeff: ExpPoly,
    pub fprime_coeff: ExpPoly,
    /// The numerator with `f'` rewritten through `f' = E f + (1 - E) α`.
    pub as_jet: AlphaJet,
    /// Both coefficients at `E = 0`.
    pub at_e_zero: (RingElem, RingElem),
    /// Both coefficients at `λe^{cz} = 1`.
    pub at_unit_e: (RingElem, RingElem),
    /// Common factor at `λe^{cz} = 1`: the numerator there is `factor · (f - f')`.
    pub unit_factor: RingElem,
    pub conditions: Vec<String>,
}

pub fn eliminate_alpha(n: usize) -> Result<EliminationReport> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("elimination needs n >= 2, got {n}")));
    }
    let lc = lahiri_coefficients(n)?;
    let an = lc.a(n);
    let e = ExpPoly::e_pow(1);
    let en = ExpPoly::e_pow(n as u32).scale(&an);

    let f_coeff = &e - &en;
    let fprime_coeff = &ExpPoly::one_minus_e().scale(&lc.a(1)) - &(&ExpPoly::one() - &en);

    let fprime = AlphaJet::f().derive();
    let as_jet = AlphaJet {
        fpart: f_coeff.clone(),
        apart: Default::default(),
    }
    .add(&fprime.scale(&fprime_coeff));

    let unit = |x: &ExpPoly| {
        x.at_unit_e()
            .ok_or_else(|| Error::Internal("coefficient not reducible at λe^{cz} = 1".into()))
    };
    let at_unit_e = (unit(&f_coeff)?, unit(&fprime_coeff)?);
    let unit_factor = &RingElem::one() - &an;
    if at_unit_e.0 != unit_factor || at_unit_e.1 != -&unit_factor {
        return Err(Error::Internal(format!(
            "numerator at λe^(cz) = 1 is ({})·f + ({})·f', expected a multiple of f - f'",
            at_unit_e.0, at_unit_e.1
        )));
    }
    Ok(EliminationReport {
        n,
        at_e_zero: (f_coeff.at_e_zero(), fprime_coeff.at_e_zero()),
        f_coeff,
        fprime_coeff,
        as_jet,
        at_unit_e,
        unit_factor,
        conditions: vec![
            "condition (1) a_n = 1".into(),
            "condition (2) f'(z~) = f(z~) at every z~ with λe^(cz~) = 1".into(),
        ],
    })
}
