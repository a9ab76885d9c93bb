//! Exponential polynomials `Σ_p q_p e^{pcz}` over the parameter ring.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use super::ring::{forward_owned, write_signed_term, RingElem};
use crate::Rat;

/// `Σ_p q_p e^{pcz}` with `p >= 0`. Powers of `λ` always live inside `q_p`,
/// so `E = λe^{cz}` is the term `p = 1` with coefficient `λ`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "Vec<ExpTerm>", try_from = "Vec<ExpTerm>")]
pub struct ExpPoly {
    terms: BTreeMap<u32, RingElem>,
}

impl ExpPoly {
    pub fn zero() -> Self {
        ExpPoly::default()
    }

    pub fn one() -> Self {
        ExpPoly::constant(RingElem::one())
    }

    pub fn constant(r: RingElem) -> Self {
        ExpPoly::term(0, r)
    }

    /// `r · e^{pcz}`.
    pub fn term(p: u32, r: RingElem) -> Self {
        let mut out = ExpPoly::zero();
        out.add_term(p, &r);
        out
    }

    /// `E^p = λ^p e^{pcz}`.
    pub fn e_pow(p: u32) -> Self {
        ExpPoly::term(p, RingElem::lambda_pow(p))
    }

    /// `1 - E`.
    pub fn one_minus_e() -> Self {
        &ExpPoly::one() - &ExpPoly::e_pow(1)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending `e`-power.
    pub fn terms(&self) -> impl Iterator<Item = (u32, &RingElem)> {
        self.terms.iter().map(|(p, r)| (*p, r))
    }

    pub fn coeff(&self, p: u32) -> RingElem {
        self.terms.get(&p).cloned().unwrap_or_default()
    }

    pub fn max_power(&self) -> Option<u32> {
        self.terms.keys().next_back().copied()
    }

    pub fn an_degree(&self) -> u32 {
        self.terms.values().map(RingElem::an_degree).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, p: u32, r: &RingElem) {
        if r.is_zero() {
            return;
        }
        let slot = self.terms.entry(p).or_default();
        *slot += r;
        if slot.is_zero() {
            self.terms.remove(&p);
        }
    }

    pub fn scale(&self, r: &RingElem) -> ExpPoly {
        let mut out = ExpPoly::zero();
        for (p, q) in &self.terms {
            out.add_term(*p, &(q * r));
        }
        out
    }

    pub fn scale_rat(&self, q: &Rat) -> ExpPoly {
        self.scale(&RingElem::rat(q.clone()))
    }

    /// `d/dz`: the term `e^{pcz}` picks up the factor `pc`.
    pub fn derive(&self) -> ExpPoly {
        let mut out = ExpPoly::zero();
        for (p, q) in &self.terms {
            if *p == 0 {
                continue;
            }
            let factor = RingElem::c().scale_int(&(*p).into());
            out.add_term(*p, &(q * &factor));
        }
        out
    }

    /// Substitute `E = 0`, i.e. keep the `p = 0` term.
    pub fn at_e_zero(&self) -> RingElem {
        self.coeff(0)
    }

    /// Substitute `λe^{cz} = 1`, i.e. `e^{pcz} = λ^{-p}`. Returns `None` if
    /// some coefficient is not divisible by the matching power of `λ`.
    pub fn at_unit_e(&self) -> Option<RingElem> {
        let mut out = RingElem::zero();
        for (p, q) in &self.terms {
            out += &q.divide_lambda(*p)?;
        }
        Some(out)
    }

    pub(crate) fn write_with(&self, f: &mut fmt::Formatter<'_>, latex: bool) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (p, q) in &self.terms {
            for (m, v) in q.terms() {
                write_signed_term(f, first, v, m, latex)?;
                first = false;
                match (*p, latex) {
                    (0, _) => {}
                    (1, true) => write!(f, " e^{{cz}}")?,
                    (p, true) => write!(f, " e^{{{p}cz}}")?,
                    (1, false) => write!(f, "·e^(cz)")?,
                    (p, false) => write!(f, "·e^({p}cz)")?,
                }
            }
        }
        Ok(())
    }

    pub fn latex(&self) -> String {
        struct L<'a>(&'a ExpPoly);
        impl fmt::Display for L<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                self.0.write_with(f, true)
            }
        }
        L(self).to_string()
    }
}

impl fmt::Display for ExpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_with(f, false)
    }
}

impl<'a> Add<&'a ExpPoly> for &ExpPoly {
    type Output = ExpPoly;
    fn add(self, rhs: &'a ExpPoly) -> ExpPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<'a> Sub<&'a ExpPoly> for &ExpPoly {
    type Output = ExpPoly;
    fn sub(self, rhs: &'a ExpPoly) -> ExpPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<'a> Mul<&'a ExpPoly> for &ExpPoly {
    type Output = ExpPoly;
    fn mul(self, rhs: &'a ExpPoly) -> ExpPoly {
        let mut out = ExpPoly::zero();
        for (pa, qa) in &self.terms {
            for (pb, qb) in &rhs.terms {
                out.add_term(pa + pb, &(qa * qb));
            }
        }
        out
    }
}

impl Neg for &ExpPoly {
    type Output = ExpPoly;
    fn neg(self) -> ExpPoly {
        ExpPoly {
            terms: self.terms.iter().map(|(p, q)| (*p, -q)).collect(),
        }
    }
}

impl Neg for ExpPoly {
    type Output = ExpPoly;
    fn neg(self) -> ExpPoly {
        -&self
    }
}

impl<'a> AddAssign<&'a ExpPoly> for ExpPoly {
    fn add_assign(&mut self, rhs: &'a ExpPoly) {
        for (p, q) in &rhs.terms {
            self.add_term(*p, q);
        }
    }
}

impl<'a> SubAssign<&'a ExpPoly> for ExpPoly {
    fn sub_assign(&mut self, rhs: &'a ExpPoly) {
        for (p, q) in &rhs.terms {
            self.add_term(*p, &-q);
        }
    }
}

forward_owned!(ExpPoly, Add::add, Sub::sub, Mul::mul);

/// Serialized form of one `e`-power.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpTerm {
    pub e_pow: u32,
    pub coeff: RingElem,
}

impl From<ExpPoly> for Vec<ExpTerm> {
    fn from(x: ExpPoly) -> Self {
        x.terms
            .into_iter()
            .map(|(e_pow, coeff)| ExpTerm { e_pow, coeff })
            .collect()
    }
}

impl TryFrom<Vec<ExpTerm>> for ExpPoly {
    type Error = crate::Error;
    fn try_from(v: Vec<ExpTerm>) -> crate::Result<Self> {
        let mut out = ExpPoly::zero();
        for t in v {
            out.add_term(t.e_pow, &t.coeff);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symalg::ring::Monomial;

    #[test]
    fn ring_operations() {
        let x = ExpPoly::e_pow(1);
        assert_eq!(&ExpPoly::zero() + &x, x);
        assert_eq!(&x * &x, ExpPoly::e_pow(2));
        let cx = ExpPoly::constant(RingElem::c());
        assert_eq!(cx.scale(&RingElem::c_pow(-1)), ExpPoly::one());
        assert!((&x - &x).is_zero());
    }

    #[test]
    fn derivative_rule() {
        assert!(ExpPoly::one().derive().is_zero());
        assert_eq!(
            ExpPoly::e_pow(1).derive(),
            ExpPoly::term(1, &RingElem::c() * &RingElem::lambda())
        );
        assert_eq!(
            ExpPoly::e_pow(2).derive(),
            ExpPoly::term(2, (&RingElem::c() * &RingElem::lambda_pow(2)).scale_int(&2.into()))
        );
    }

    #[test]
    fn substitutions() {
        // 1 - E at E = 0 and at λe^{cz} = 1
        let x = ExpPoly::one_minus_e();
        assert!(x.at_e_zero().is_one());
        assert!(x.at_unit_e().unwrap().is_zero());
        // c e^{cz} has no λ to absorb e^{cz} = 1/λ
        assert!(ExpPoly::term(1, RingElem::c()).at_unit_e().is_none());
    }

    #[test]
    fn text_rendering() {
        let x = &ExpPoly::constant(RingElem::int(2)) - &ExpPoly::e_pow(2);
        assert_eq!(x.to_string(), "2 - λ^2·e^(2cz)");
        assert_eq!(x.latex(), "2 - \\lambda^{2} e^{2cz}");
        let y = ExpPoly::term(1, RingElem::term(Monomial::new(-1, 1, 0), Rat::from_integer(3.into())));
        assert_eq!(y.to_string(), "3·c^-1·λ·e^(cz)");
    }
}
