//! Closed forms: the `n = 2` solution family and the `n = 3` reduction to
//! `B'' + A(z) B = 0`.

use num_complex::Complex;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{AlphaSource, Params};
use crate::scalar::{cfmt, Real};

fn one<F: Real>() -> Complex<F> {
    Complex::new(F::one(), F::zero())
}

fn tiny<F: Real>(x: Complex<F>) -> bool {
    x.norm() <= F::epsilon() * F::lit(64.0)
}

fn require_nonzero<F: Real>(name: &str, v: Complex<F>) -> Result<()> {
    if v.is_zero() {
        return Err(Error::InvalidParameters(format!("{name} must be nonzero")));
    }
    if !(v.re.is_finite() && v.im.is_finite()) {
        return Err(Error::InvalidParameters(format!("{name} must be finite")));
    }
    Ok(())
}

/// Binomial row `C(k, 0..=k)`.
fn binomial_row<F: Real>(k: usize) -> Vec<F> {
    let mut row = vec![F::one(); k + 1];
    for i in 1..k {
        row[i] = row[i - 1] * F::lit((k + 1 - i) as f64) / F::lit(i as f64);
    }
    row
}

/// Whether `∫ e^{v} v^{m-1-s+1/c} dv` is elementary for every `0 <= m <= s`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum N2Integrability<F: Real> {
    /// `1/c = ν` is an integer `>= s + 1`; then `a_2 = ν/(ν - s)`.
    Explicit { nu: u64, a2: F },
    IncompleteGamma,
}

pub fn n2_explicit_integrability<F: Real>(s: u32, c: Complex<F>) -> N2Integrability<F> {
    if c.is_zero() || !tiny(Complex::new(F::zero(), c.im / c.norm())) {
        return N2Integrability::IncompleteGamma;
    }
    let nu = F::one() / c.re;
    let r = nu.round();
    if (nu - r).abs() > F::lit(1e-9) * r.abs().max(F::one()) || r < F::lit(f64::from(s) + 1.0) {
        return N2Integrability::IncompleteGamma;
    }
    match r.to_u64() {
        Some(nu) => N2Integrability::Explicit {
            nu,
            a2: F::lit(nu as f64) / F::lit((nu - u64::from(s)) as f64),
        },
        None => N2Integrability::IncompleteGamma,
    }
}

/// `α(z) = C̃ e^{ℓz} (λe^{cz} - 1)^{s-1}` with `ℓ = (1 + 1/(a_2 c)) c`,
/// solving `a_2(1 - λe^{cz})α' - (1 + a_2 c - a_2 λe^{cz})α = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct N2Solution<F: Real> {
    pub s: u32,
    pub c: Complex<F>,
    pub lambda: Complex<F>,
    pub a2: Complex<F>,
    pub a1: Complex<F>,
    pub exp_lin: Complex<F>,
    pub outer_pow: Complex<F>,
    pub c_tilde: Complex<F>,
}

/// `a_2 = 1/(1 - sc)`; `sc = 1` is excluded.
pub fn solve_n2<F: Real>(s: u32, c: Complex<F>, lambda: Complex<F>) -> Result<N2Solution<F>> {
    require_nonzero("c", c)?;
    require_nonzero("λ", lambda)?;
    let sf = F::lit(f64::from(s));
    let denom = one::<F>() - c * sf;
    if tiny(denom) {
        return Err(Error::InvalidParameters(format!("s·c = 1 (s = {s}, c = {}) is excluded", cfmt(c))));
    }
    let a2 = one::<F>() / denom;
    let inv = one::<F>() / (a2 * c);
    Ok(N2Solution {
        s,
        c,
        lambda,
        a2,
        a1: -a2 * c,
        exp_lin: (one::<F>() + inv) * c,
        outer_pow: -one::<F>() + one::<F>() / c - inv,
        c_tilde: one(),
    })
}

/// Recovers `s = (1 - 1/a_2)/c` and rejects anything that is not a
/// non-negative integer.
pub fn s_from_a2<F: Real>(a2: Complex<F>, c: Complex<F>) -> Result<u32> {
    require_nonzero("a_2", a2)?;
    require_nonzero("c", c)?;
    let s = (one::<F>() - one::<F>() / a2) / c;
    let r = s.re.round();
    let tol = F::lit(1e-9) * r.abs().max(F::one());
    if (s.re - r).abs() > tol || s.im.abs() > tol || r < F::zero() {
        return Err(Error::InvalidParameters(format!(
            "(1 - 1/a_2)/c = {} is not a non-negative integer; (1 - λe^(cz))α would not be entire",
            cfmt(s)
        )));
    }
    r.to_u32()
        .ok_or_else(|| Error::InvalidParameters(format!("s = {r} out of range")))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct N2Report<F: Real> {
    pub s: u32,
    pub c: Complex<F>,
    pub lambda: Complex<F>,
    pub a2: Complex<F>,
    pub a1: Complex<F>,
    pub exp_lin: Complex<F>,
    pub outer_pow: Complex<F>,
    pub c_tilde: Complex<F>,
    pub alpha: String,
    pub integrability: N2Integrability<F>,
}

impl<F: Real> N2Solution<F> {
    pub fn with_c_tilde(mut self, c_tilde: Complex<F>) -> Self {
        self.c_tilde = c_tilde;
        self
    }

    pub fn params(&self) -> Result<Params<F>> {
        Params::new(2, self.c, self.lambda, self.a2)
    }

    /// `e^{ℓz}`; exact `e^z` when `s = 1`.
    fn lin(&self, z: Complex<F>) -> Complex<F> {
        if self.s == 1 {
            z.exp()
        } else {
            (self.exp_lin * z).exp()
        }
    }

    fn ell(&self) -> Complex<F> {
        if self.s == 1 {
            one()
        } else {
            self.exp_lin
        }
    }

    pub fn formula(&self) -> String {
        let pre = if self.c_tilde == one() {
            String::new()
        } else {
            format!("({})·", cfmt(self.c_tilde))
        };
        match self.s {
            1 => format!("{pre}e^z"),
            s => format!(
                "{pre}e^(({})z)·(({})e^(({})z) - 1)^{}",
                cfmt(self.ell()),
                cfmt(self.lambda),
                cfmt(self.c),
                i64::from(s) - 1
            ),
        }
    }

    pub fn report(&self) -> N2Report<F> {
        N2Report {
            s: self.s,
            c: self.c,
            lambda: self.lambda,
            a2: self.a2,
            a1: self.a1,
            exp_lin: self.exp_lin,
            outer_pow: self.outer_pow,
            c_tilde: self.c_tilde,
            alpha: self.formula(),
            integrability: n2_explicit_integrability(self.s, self.c),
        }
    }

    /// `|a_2(1 - E)α' - (1 + a_2 c - a_2 E)α|` divided by the sum of the two
    /// term magnitudes.
    pub fn eq3_residual(&self, z: Complex<F>) -> Result<F> {
        let j = self.jet(z, 1)?;
        let e = self.lambda * (self.c * z).exp();
        let t1 = self.a2 * (one::<F>() - e) * j[1];
        let t2 = (one::<F>() + self.a2 * self.c - self.a2 * e) * j[0];
        let scale = t1.norm() + t2.norm();
        Ok(if scale.is_zero() { F::zero() } else { (t1 - t2).norm() / scale })
    }
}

impl<F: Real> AlphaSource<F> for N2Solution<F> {
    fn jet(&self, z: Complex<F>, order: usize) -> Result<Vec<Complex<F>>> {
        let ell = self.ell();
        let ecz = (self.c * z).exp();
        let e = self.lambda * ecz;
        if self.s == 0 {
            // α(E - 1) = C̃e^{ℓz}, differentiated by Leibniz
            let em1 = e - one::<F>();
            if em1.is_zero() {
                return Err(Error::SingularProximity { at: cfmt(z) });
            }
            let h = self.c_tilde * self.lin(z);
            let mut out: Vec<Complex<F>> = Vec::with_capacity(order + 1);
            let mut ellk = one::<F>();
            for k in 0..=order {
                let binom = binomial_row::<F>(k);
                let mut acc = ellk * h;
                let mut ci = one::<F>();
                for i in 1..=k {
                    ci = ci * self.c;
                    acc = acc - ci * e * out[k - i] * binom[i];
                }
                out.push(acc / em1);
                ellk = ellk * ell;
            }
            return Ok(out);
        }
        // (E - 1)^{s-1} = Σ_m C(s-1, m) λ^m (-1)^{s-1-m} e^{mcz}
        let p = (self.s - 1) as usize;
        let binom = binomial_row::<F>(p);
        let mut out = vec![Complex::zero(); order + 1];
        let base = self.c_tilde * self.lin(z);
        let mut lm = one::<F>();
        let mut em = one::<F>();
        for (m, b) in binom.iter().enumerate() {
            let sign = if (p - m) % 2 == 0 { F::one() } else { -F::one() };
            let mu = ell + self.c * F::lit(m as f64);
            let mut t = base * lm * em * (*b * sign);
            for slot in out.iter_mut() {
                *slot = *slot + t;
                t = t * mu;
            }
            lm = lm * self.lambda;
            em = em * ecz;
        }
        Ok(out)
    }

    /// `-C̃ e^{ℓz} (λe^{cz} - 1)^s`, evaluated without dividing.
    fn g(&self, z: Complex<F>, p: &Params<F>) -> Result<Complex<F>> {
        let _ = p;
        let e = self.lambda * (self.c * z).exp();
        Ok(-self.c_tilde * self.lin(z) * (e - one::<F>()).powu(self.s))
    }
}

/// `A(z) = Σ_p q_p e^{pcz} + κ/(λe^{cz} - 1)` in `B'' + A B = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PotentialSpec<F: Real> {
    pub poly_part: [Complex<F>; 3],
    pub pole_coeff: Complex<F>,
    pub c: Complex<F>,
    pub lambda: Complex<F>,
    pub a3: Complex<F>,
}

pub fn n3_normal_form<F: Real>(c: Complex<F>, lambda: Complex<F>, a3: Complex<F>) -> Result<PotentialSpec<F>> {
    require_nonzero("c", c)?;
    require_nonzero("λ", lambda)?;
    require_nonzero("a_3", a3)?;
    let quarter = F::lit(0.25);
    Ok(PotentialSpec {
        poly_part: [-one::<F>() - c * c * quarter, -lambda, -lambda * lambda * quarter],
        pole_coeff: one::<F>() / a3 - one::<F>(),
        c,
        lambda,
        a3,
    })
}

impl<F: Real> PotentialSpec<F> {
    fn e(&self, z: Complex<F>) -> Complex<F> {
        self.lambda * (self.c * z).exp()
    }

    pub fn potential(&self, z: Complex<F>) -> Complex<F> {
        let ecz = (self.c * z).exp();
        let e = self.lambda * ecz;
        self.poly_part[0] + self.poly_part[1] * ecz + self.poly_part[2] * ecz * ecz + self.pole_coeff / (e - one::<F>())
    }

    /// `a_1(z)` in `α'' + a_1 α' + a_0 α = 0`.
    pub fn a1(&self, z: Complex<F>) -> Complex<F> {
        let (c, e) = (self.c, self.e(z));
        (c * F::lit(-3.0) + (one::<F>() + c) * e - e * e) / (one::<F>() - e)
    }

    pub fn a0(&self, z: Complex<F>) -> Complex<F> {
        let (c, e) = (self.c, self.e(z));
        -(one::<F>() / self.a3 - c * c * F::lit(2.0) + c * e - e * e) / (one::<F>() - e)
    }

    /// `M(z) = (λe^{cz} - 1) e^{-3cz/2} e^{λe^{cz}/(2c)}`, so `B = M α`.
    pub fn m(&self, z: Complex<F>) -> Complex<F> {
        let e = self.e(z);
        let half = F::lit(0.5);
        (e - one::<F>()) * (self.c * z * F::lit(-1.5) + e / self.c * half).exp()
    }

    /// `M'/M = a_1/2` and its derivative.
    fn log_m(&self, z: Complex<F>) -> (Complex<F>, Complex<F>) {
        let (c, e) = (self.c, self.e(z));
        let w = e - one::<F>();
        let half = F::lit(0.5);
        let l = c * e / w - c * F::lit(1.5) + e * half;
        let dl = -c * c * e / (w * w) + c * e * half;
        (l, dl)
    }

    /// `[α, α', α''] -> [B, B', B'']`.
    pub fn to_b(&self, z: Complex<F>, alpha: &[Complex<F>; 3]) -> [Complex<F>; 3] {
        let m = self.m(z);
        let (l, dl) = self.log_m(z);
        let two = F::lit(2.0);
        [
            m * alpha[0],
            m * (alpha[1] + l * alpha[0]),
            m * (alpha[2] + l * alpha[1] * two + (dl + l * l) * alpha[0]),
        ]
    }

    /// Inverse of [`Self::to_b`].
    pub fn from_b(&self, z: Complex<F>, b: &[Complex<F>; 3]) -> [Complex<F>; 3] {
        let m = self.m(z);
        let (l, dl) = self.log_m(z);
        let a0 = b[0] / m;
        let a1 = b[1] / m - l * a0;
        let a2 = b[2] / m - l * a1 * F::lit(2.0) - (dl + l * l) * a0;
        [a0, a1, a2]
    }

    pub fn residual_alpha1(&self, z: Complex<F>, alpha: &[Complex<F>; 3]) -> Complex<F> {
        alpha[2] + self.a1(z) * alpha[1] + self.a0(z) * alpha[0]
    }

    pub fn residual_b1(&self, z: Complex<F>, b: &[Complex<F>; 3]) -> Complex<F> {
        b[2] + self.potential(z) * b[0]
    }
}

/// What the simple-pole argument forces on `g = (1 - λe^{cz})α` at the
/// points where `λe^{cz} = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PoleCondition {
    /// `a_3 = 1`: no constraint from this argument.
    NoConstraint,
    /// `a_3 != 1`: `(1 - 1/a_3) g = 0`, so `g` vanishes and `α` is entire.
    GVanishes,
}

pub fn n3_pole_vanishing_condition<F: Real>(a3: Complex<F>) -> Result<PoleCondition> {
    require_nonzero("a_3", a3)?;
    Ok(if tiny(a3 - one::<F>()) {
        PoleCondition::NoConstraint
    } else {
        PoleCondition::GVanishes
    })
}

impl PoleCondition {
    pub fn describe(&self) -> &'static str {
        match self {
            PoleCondition::NoConstraint => "no constraint from this argument",
            PoleCondition::GVanishes => "g = (1 - λe^(cz))α must vanish wherever λe^(cz) = 1, hence α is entire",
        }
    }

    /// `|g(z̃)|` at each root `|z̃| <= radius`, and whether the condition
    /// holds to `tol`.
    pub fn check<F: Real, A: AlphaSource<F> + ?Sized>(
        &self,
        alpha: &A,
        p: &Params<F>,
        radius: F,
        tol: F,
    ) -> Result<(Vec<(Complex<F>, F)>, bool)> {
        let vals = p
            .singular_roots(radius)
            .into_iter()
            .map(|z| Ok((z, alpha.g(z, p)?.norm())))
            .collect::<Result<Vec<_>>>()?;
        let ok = match self {
            PoleCondition::NoConstraint => true,
            PoleCondition::GVanishes => vals.iter().all(|(_, g)| *g < tol),
        };
        Ok((vals, ok))
    }
}

/// `α(z) = e^{-z} exp((2λ/3) e^{-3z/2})`, the explicit solution for
/// `c = -3/2`, `a_3 = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpecialN3Alpha<F: Real> {
    pub lambda: Complex<F>,
}

impl<F: Real> SpecialN3Alpha<F> {
    pub fn new(lambda: Complex<F>) -> Result<Self> {
        require_nonzero("λ", lambda)?;
        Ok(SpecialN3Alpha { lambda })
    }

    pub fn params(&self) -> Result<Params<F>> {
        Params::new(3, Complex::new(F::lit(-1.5), F::zero()), self.lambda, one())
    }
}

impl<F: Real> AlphaSource<F> for SpecialN3Alpha<F> {
    fn jet(&self, z: Complex<F>, order: usize) -> Result<Vec<Complex<F>>> {
        let k3 = F::lit(-1.5);
        let u = self.lambda * F::lit(2.0 / 3.0) * (z * k3).exp();
        let alpha = (-z + u).exp();
        // R = (log α)' = -1 - 3u/2,  R^(i) = (-3/2)^{i+1} u
        let mut r = Vec::with_capacity(order);
        let mut kp = k3;
        for i in 0..order {
            let ri = u * kp;
            r.push(if i == 0 { ri - one::<F>() } else { ri });
            kp = kp * k3;
        }
        let mut out = vec![alpha];
        for k in 0..order {
            let binom = binomial_row::<F>(k);
            let next = (0..=k).fold(Complex::zero(), |acc, i| acc + r[i] * out[k - i] * binom[i]);
            out.push(next);
        }
        Ok(out)
    }
}
