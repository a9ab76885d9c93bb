//! Linear expressions in `f` and the derivatives of `α`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::expoly::ExpPoly;
use crate::error::{Error, Result};

/// `fpart · f + Σ_k apart[k] · α^(k)` with exponential-polynomial coefficients.
///
/// Closed under `d/dz` through the rewrite `f' = E f + (1 - E) α`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphaJet {
    pub fpart: ExpPoly,
    pub apart: BTreeMap<usize, ExpPoly>,
}

impl AlphaJet {
    /// The expression `f`.
    pub fn f() -> Self {
        AlphaJet {
            fpart: ExpPoly::one(),
            apart: BTreeMap::new(),
        }
    }

    /// The expression `α^(k)`.
    pub fn alpha(k: usize) -> Self {
        let mut j = AlphaJet::default();
        j.add_alpha(k, &ExpPoly::one());
        j
    }

    pub fn add_alpha(&mut self, k: usize, x: &ExpPoly) {
        if x.is_zero() {
            return;
        }
        let slot = self.apart.entry(k).or_default();
        *slot += x;
        if slot.is_zero() {
            self.apart.remove(&k);
        }
    }

    pub fn alpha_coeff(&self, k: usize) -> ExpPoly {
        self.apart.get(&k).cloned().unwrap_or_default()
    }

    /// Highest `α` derivative present.
    pub fn alpha_order(&self) -> Option<usize> {
        self.apart.keys().next_back().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.fpart.is_zero() && self.apart.is_empty()
    }

    pub fn scale(&self, x: &ExpPoly) -> AlphaJet {
        let mut out = AlphaJet {
            fpart: &self.fpart * x,
            apart: BTreeMap::new(),
        };
        for (k, a) in &self.apart {
            out.add_alpha(*k, &(a * x));
        }
        out
    }

    pub fn add(&self, other: &AlphaJet) -> AlphaJet {
        let mut out = self.clone();
        out.fpart += &other.fpart;
        for (k, a) in &other.apart {
            out.add_alpha(*k, a);
        }
        out
    }

    pub fn sub(&self, other: &AlphaJet) -> AlphaJet {
        self.add(&other.scale(&-ExpPoly::one()))
    }

    /// `d/dz`, applying `f' = E f + (1 - E) α`.
    pub fn derive(&self) -> AlphaJet {
        let e = ExpPoly::e_pow(1);
        let mut out = AlphaJet {
            fpart: &self.fpart.derive() + &(&self.fpart * &e),
            apart: BTreeMap::new(),
        };
        out.add_alpha(0, &(&self.fpart * &ExpPoly::one_minus_e()));
        for (k, a) in &self.apart {
            out.add_alpha(*k, &a.derive());
            out.add_alpha(k + 1, a);
        }
        out
    }

    /// Multi-line text rendering: `f` line first, then ascending `k`.
    pub fn render(&self, latex: bool) -> String {
        let show = |x: &ExpPoly| if latex { x.latex() } else { x.to_string() };
        let mut lines = vec![format!("f: {}", show(&self.fpart))];
        for (k, a) in &self.apart {
            lines.push(format!("{}: {}", alpha_symbol(*k, latex), show(a)));
        }
        lines.join("\n")
    }
}

pub(crate) fn alpha_symbol(k: usize, latex: bool) -> String {
    match (latex, k) {
        (true, 0) => "\\alpha".into(),
        (true, 1) => "\\alpha'".into(),
        (true, 2) => "\\alpha''".into(),
        (true, k) => format!("\\alpha^{{({k})}}"),
        (false, k) => format!("α^({k})"),
    }
}

impl fmt::Display for AlphaJet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(false))
    }
}

/// `Σ_{k=0}^{n-1} coeffs[k] · α^(k) = 0`, the order `n - 1` equation for `α`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OdeSpec {
    n: usize,
    coeffs: Vec<ExpPoly>,
}

impl OdeSpec {
    pub fn new(n: usize, coeffs: Vec<ExpPoly>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidInput(format!("ODE needs n >= 2, got {n}")));
        }
        if coeffs.len() != n {
            return Err(Error::InvalidInput(format!(
                "ODE for n = {n} needs {n} coefficients, got {}",
                coeffs.len()
            )));
        }
        Ok(OdeSpec { n, coeffs })
    }

    /// Collect the `α` part of a jet; the `f` part must vanish.
    pub fn from_jet(n: usize, jet: &AlphaJet) -> Result<Self> {
        if !jet.fpart.is_zero() {
            return Err(Error::Internal("α-equation still depends on f".into()));
        }
        if jet.alpha_order().is_some_and(|k| k >= n) {
            return Err(Error::Internal(format!(
                "α-equation for n = {n} has order {:?}",
                jet.alpha_order()
            )));
        }
        OdeSpec::new(n, (0..n).map(|k| jet.alpha_coeff(k)).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Differential order `n - 1`.
    pub fn order(&self) -> usize {
        self.n - 1
    }

    pub fn coeffs(&self) -> &[ExpPoly] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &ExpPoly {
        &self.coeffs[k]
    }

    pub fn negated(&self) -> OdeSpec {
        OdeSpec {
            n: self.n,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    /// One line per derivative order, ascending.
    pub fn render_text(&self) -> String {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| format!("{}: {}", alpha_symbol(k, false), c))
            .collect::<Vec<_>>()
            .join("\n")
    }

    /// `0 = (...)\alpha + (...)\alpha' + ...`, one derivative per line.
    pub fn render_latex(&self) -> String {
        let body = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| format!("  \\left({}\\right) {}", c.latex(), alpha_symbol(k, true)))
            .collect::<Vec<_>>()
            .join(" \\\\\n  &+ ");
        format!("0 &= {}", body.trim_start())
    }
}

impl fmt::Display for OdeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_text())
    }
}
