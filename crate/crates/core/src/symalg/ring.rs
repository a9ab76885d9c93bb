//! The parameter ring `Q[c, c^-1, λ, a_n]`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Rat;

/// Monomial `c^c_pow λ^lambda_pow a_n^an_pow`.
///
/// Ordered lexicographically on `(c_pow, lambda_pow, an_pow)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub c_pow: i32,
    pub lambda_pow: u32,
    pub an_pow: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { c_pow: 0, lambda_pow: 0, an_pow: 0 };

    pub fn new(c_pow: i32, lambda_pow: u32, an_pow: u32) -> Self {
        Monomial { c_pow, lambda_pow, an_pow }
    }

    fn times(self, other: Monomial) -> Monomial {
        Monomial {
            c_pow: self.c_pow + other.c_pow,
            lambda_pow: self.lambda_pow + other.lambda_pow,
            an_pow: self.an_pow + other.an_pow,
        }
    }

    fn is_one(&self) -> bool {
        *self == Monomial::ONE
    }
}

/// Exact element of the parameter ring, stored as a canonical sparse map
/// monomial → nonzero rational. Map equality is mathematical equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "Vec<MonomialRecord>", try_from = "Vec<MonomialRecord>")]
pub struct RingElem {
    terms: BTreeMap<Monomial, Rat>,
}

impl RingElem {
    pub fn zero() -> Self {
        RingElem::default()
    }

    pub fn one() -> Self {
        RingElem::term(Monomial::ONE, Rat::one())
    }

    pub fn term(m: Monomial, q: Rat) -> Self {
        let mut r = RingElem::zero();
        r.add_term(m, q);
        r
    }

    pub fn rat(q: Rat) -> Self {
        RingElem::term(Monomial::ONE, q)
    }

    pub fn int(v: impl Into<BigInt>) -> Self {
        RingElem::rat(Rat::from_integer(v.into()))
    }

    /// `c^e`, negative `e` allowed.
    pub fn c_pow(e: i32) -> Self {
        RingElem::term(Monomial::new(e, 0, 0), Rat::one())
    }

    pub fn c() -> Self {
        RingElem::c_pow(1)
    }

    pub fn lambda_pow(e: u32) -> Self {
        RingElem::term(Monomial::new(0, e, 0), Rat::one())
    }

    pub fn lambda() -> Self {
        RingElem::lambda_pow(1)
    }

    pub fn an() -> Self {
        RingElem::term(Monomial::new(0, 0, 1), Rat::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&Monomial::ONE).is_some_and(|q| q.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    /// Highest power of `a_n` present (0 for the zero element).
    pub fn an_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.an_pow).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, m: Monomial, q: Rat) {
        if q.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(slot) => {
                *slot += q;
                if slot.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, q);
            }
        }
    }

    pub fn scale(&self, q: &Rat) -> RingElem {
        if q.is_zero() {
            return RingElem::zero();
        }
        RingElem {
            terms: self.terms.iter().map(|(m, v)| (*m, v * q)).collect(),
        }
    }

    pub fn scale_int(&self, v: &BigInt) -> RingElem {
        self.scale(&Rat::from_integer(v.clone()))
    }

    /// Multiply by the monomial `c^e`.
    pub fn shift_c(&self, e: i32) -> RingElem {
        RingElem {
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (Monomial::new(m.c_pow + e, m.lambda_pow, m.an_pow), v.clone()))
                .collect(),
        }
    }

    /// Divide by `λ^e`; fails if some term has a smaller `λ` power.
    pub fn divide_lambda(&self, e: u32) -> Option<RingElem> {
        let mut out = RingElem::zero();
        for (m, v) in &self.terms {
            let lp = m.lambda_pow.checked_sub(e)?;
            out.add_term(Monomial::new(m.c_pow, lp, m.an_pow), v.clone());
        }
        Some(out)
    }

    /// Substitute `a_n := value` (exact).
    pub fn substitute_an(&self, value: &Rat) -> RingElem {
        let mut out = RingElem::zero();
        for (m, v) in &self.terms {
            let mut q = v.clone();
            for _ in 0..m.an_pow {
                q *= value;
            }
            out.add_term(Monomial::new(m.c_pow, m.lambda_pow, 0), q);
        }
        out
    }

    fn write_with(&self, f: &mut fmt::Formatter<'_>, latex: bool) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, q)) in self.terms.iter().enumerate() {
            write_signed_term(f, i == 0, q, m, latex)?;
        }
        Ok(())
    }

    /// LaTeX rendering.
    pub fn latex(&self) -> String {
        struct L<'a>(&'a RingElem);
        impl fmt::Display for L<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                self.0.write_with(f, true)
            }
        }
        L(self).to_string()
    }
}

pub(crate) fn write_signed_term(
    f: &mut fmt::Formatter<'_>,
    first: bool,
    q: &Rat,
    m: &Monomial,
    latex: bool,
) -> fmt::Result {
    let neg = q.is_negative();
    match (first, neg) {
        (true, true) => write!(f, "-")?,
        (true, false) => {}
        (false, true) => write!(f, " - ")?,
        (false, false) => write!(f, " + ")?,
    }
    let mag = q.abs();
    let unit = mag.is_one();
    let mut parts: Vec<String> = Vec::new();
    if !unit || m.is_one() {
        parts.push(if latex && !mag.is_integer() {
            format!("\\frac{{{}}}{{{}}}", mag.numer(), mag.denom())
        } else {
            mag.to_string()
        });
    }
    if m.c_pow != 0 {
        parts.push(match (latex, m.c_pow) {
            (_, 1) => "c".to_string(),
            (true, e) => format!("c^{{{e}}}"),
            (false, e) => format!("c^{e}"),
        });
    }
    if m.lambda_pow != 0 {
        let sym = if latex { "\\lambda" } else { "λ" };
        parts.push(match (latex, m.lambda_pow) {
            (_, 1) => sym.to_string(),
            (true, e) => format!("{sym}^{{{e}}}"),
            (false, e) => format!("{sym}^{e}"),
        });
    }
    if m.an_pow != 0 {
        parts.push(match (latex, m.an_pow) {
            (_, 1) => "a_n".to_string(),
            (true, e) => format!("a_n^{{{e}}}"),
            (false, e) => format!("a_n^{e}"),
        });
    }
    let sep = if latex { " " } else { "·" };
    write!(f, "{}", parts.join(sep))
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_with(f, false)
    }
}

impl<'a> Add<&'a RingElem> for &RingElem {
    type Output = RingElem;
    fn add(self, rhs: &'a RingElem) -> RingElem {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<'a> Sub<&'a RingElem> for &RingElem {
    type Output = RingElem;
    fn sub(self, rhs: &'a RingElem) -> RingElem {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<'a> Mul<&'a RingElem> for &RingElem {
    type Output = RingElem;
    fn mul(self, rhs: &'a RingElem) -> RingElem {
        let mut out = RingElem::zero();
        for (ma, qa) in &self.terms {
            for (mb, qb) in &rhs.terms {
                out.add_term(ma.times(*mb), qa * qb);
            }
        }
        out
    }
}

impl Neg for &RingElem {
    type Output = RingElem;
    fn neg(self) -> RingElem {
        RingElem {
            terms: self.terms.iter().map(|(m, q)| (*m, -q)).collect(),
        }
    }
}

impl<'a> AddAssign<&'a RingElem> for RingElem {
    fn add_assign(&mut self, rhs: &'a RingElem) {
        for (m, q) in &rhs.terms {
            self.add_term(*m, q.clone());
        }
    }
}

impl<'a> SubAssign<&'a RingElem> for RingElem {
    fn sub_assign(&mut self, rhs: &'a RingElem) {
        for (m, q) in &rhs.terms {
            self.add_term(*m, -q);
        }
    }
}

macro_rules! forward_owned {
    ($ty:ty, $($tr:ident :: $f:ident),*) => {$(
        impl $tr<$ty> for $ty {
            type Output = $ty;
            fn $f(self, rhs: $ty) -> $ty {
                (&self).$f(&rhs)
            }
        }
        impl<'a> $tr<&'a $ty> for $ty {
            type Output = $ty;
            fn $f(self, rhs: &'a $ty) -> $ty {
                (&self).$f(rhs)
            }
        }
    )*};
}
pub(crate) use forward_owned;

forward_owned!(RingElem, Add::add, Sub::sub, Mul::mul);

impl Neg for RingElem {
    type Output = RingElem;
    fn neg(self) -> RingElem {
        -&self
    }
}

/// Serialized form of one ring term.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialRecord {
    pub c_pow: i32,
    pub lambda_pow: u32,
    pub an_pow: u32,
    pub rational: String,
}

impl From<RingElem> for Vec<MonomialRecord> {
    fn from(r: RingElem) -> Self {
        r.terms
            .into_iter()
            .map(|(m, q)| MonomialRecord {
                c_pow: m.c_pow,
                lambda_pow: m.lambda_pow,
                an_pow: m.an_pow,
                rational: rat_to_string(&q),
            })
            .collect()
    }
}

impl TryFrom<Vec<MonomialRecord>> for RingElem {
    type Error = Error;
    fn try_from(records: Vec<MonomialRecord>) -> Result<Self> {
        let mut out = RingElem::zero();
        for r in records {
            out.add_term(Monomial::new(r.c_pow, r.lambda_pow, r.an_pow), parse_rat(&r.rational)?);
        }
        Ok(out)
    }
}

/// Always `p/q`, including `q = 1`.
pub fn rat_to_string(q: &Rat) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Accepts `p/q` or a bare integer.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let bad = || Error::InvalidInput(format!("not a rational: {s:?}"));
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rat::new(p, q))
        }
        None => Ok(Rat::from_integer(s.parse().map_err(|_| bad())?)),
    }
}
