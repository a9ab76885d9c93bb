//! Numerical evaluation in the complex plane: parameter substitution into the
//! exact objects, quadrature for `f`, Runge–Kutta propagation for `α`, and
//! the value-sharing residuals.

mod ode;
mod quad;
mod sharing;

pub use ode::{solve_alpha_ode, AlphaTrajectory, OdeOptions};
pub use quad::{gauss_kronrod, integrate_f, FNode, FSolution, QuadOptions};
pub use sharing::{
    finite_diff_jet, necessary_condition_check, sharing_residuals, sharing_samples, FdMethod,
    NecessaryReport, ResidualOptions, ResidualReport, ResidualRow, RootCheck, SharingSample,
    SkippedPoint, Verdict,
};

use num_complex::Complex;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::coefftab::lahiri_coefficients;
use crate::error::{Error, Result};
use crate::scalar::{cfmt, Real};
use crate::symalg::{build_ab, AlphaJet, ExpPoly, OdeSpec, RingElem};

/// Numeric values for `c`, `λ`, `a_n` and the order `n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Params<F: Real> {
    pub n: usize,
    pub c: Complex<F>,
    pub lambda: Complex<F>,
    pub an: Complex<F>,
}

impl<F: Real> Params<F> {
    /// Rejects `n < 2` and zero `c`, `λ`, `a_n`.
    pub fn new(n: usize, c: Complex<F>, lambda: Complex<F>, an: Complex<F>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameters(format!("n must be >= 2, got {n}")));
        }
        for (name, v) in [("c", c), ("λ", lambda), ("a_n", an)] {
            if v.is_zero() {
                return Err(Error::InvalidParameters(format!("{name} must be nonzero")));
            }
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(Error::InvalidParameters(format!("{name} must be finite")));
            }
        }
        Ok(Params { n, c, lambda, an })
    }

    /// `e^{cz}`.
    pub fn ecz(&self, z: Complex<F>) -> Complex<F> {
        (self.c * z).exp()
    }

    /// `E = λe^{cz}`.
    pub fn e(&self, z: Complex<F>) -> Complex<F> {
        self.lambda * self.ecz(z)
    }

    /// Distance `|λe^{cz} - 1|` to the singular set in value space.
    pub fn singular_distance(&self, z: Complex<F>) -> F {
        (self.e(z) - Complex::new(F::one(), F::zero())).norm()
    }

    /// Roots of `λe^{cz} = 1` with `|z| <= radius`, principal branch first,
    /// then by increasing `|k|` (positive before negative).
    pub fn singular_roots(&self, radius: F) -> Vec<Complex<F>> {
        let base = (Complex::new(F::one(), F::zero()) / self.lambda).ln();
        let two_pi_i = Complex::new(F::zero(), F::TAU());
        let root = |k: i64| (base + two_pi_i * F::lit(k as f64)) / self.c;
        // |z_k| grows like 2π|k|/|c|
        let kmax = ((radius * self.c.norm() + base.norm()) / F::TAU()).ceil() + F::one();
        let kmax = kmax.to_i64().unwrap_or(0).clamp(0, 100_000);
        let mut out = Vec::new();
        for m in 0..=kmax {
            let ks: &[i64] = if m == 0 { &[0] } else { &[m, -m] };
            for &k in ks {
                let z = root(k);
                if z.norm() <= radius {
                    out.push(z);
                }
            }
        }
        out
    }
}

fn rat_to<F: Real>(q: &crate::Rat) -> F {
    F::lit(q.to_f64().unwrap_or(f64::NAN))
}

/// Value of a parameter-ring element at numeric `c`, `λ`, `a_n`.
pub fn eval_ring<F: Real>(r: &RingElem, p: &Params<F>) -> Result<Complex<F>> {
    let mut acc = Complex::zero();
    for (m, q) in r.terms() {
        if m.c_pow < 0 && p.c.is_zero() {
            return Err(Error::InvalidParameters("c = 0 with a negative power of c".into()));
        }
        let mut t = Complex::new(rat_to::<F>(q), F::zero());
        t = t * p.c.powi(m.c_pow) * p.lambda.powu(m.lambda_pow) * p.an.powu(m.an_pow);
        acc = acc + t;
    }
    Ok(acc)
}

/// Value of an exponential polynomial at `z`.
pub fn eval_expoly<F: Real>(x: &ExpPoly, z: Complex<F>, p: &Params<F>) -> Result<Complex<F>> {
    Ok(CompiledExpPoly::new(x, p)?.eval(p.ecz(z)))
}

/// An [`ExpPoly`] with its coefficients already evaluated.
#[derive(Clone, Debug, PartialEq)]
pub struct CompiledExpPoly<F: Real> {
    terms: Vec<(u32, Complex<F>)>,
}

impl<F: Real> CompiledExpPoly<F> {
    pub fn new(x: &ExpPoly, p: &Params<F>) -> Result<Self> {
        let terms = x
            .terms()
            .map(|(k, r)| Ok((k, eval_ring(r, p)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(CompiledExpPoly { terms })
    }

    /// Evaluate at a precomputed `e^{cz}`.
    pub fn eval(&self, ecz: Complex<F>) -> Complex<F> {
        let mut acc = Complex::zero();
        let mut pow = Complex::new(F::one(), F::zero());
        let mut k = 0;
        for (p, q) in &self.terms {
            while k < *p {
                pow = pow * ecz;
                k += 1;
            }
            acc = acc + *q * pow;
        }
        acc
    }
}

/// An [`AlphaJet`] with evaluated coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct CompiledJet<F: Real> {
    fpart: CompiledExpPoly<F>,
    apart: Vec<(usize, CompiledExpPoly<F>)>,
}

impl<F: Real> CompiledJet<F> {
    pub fn new(j: &AlphaJet, p: &Params<F>) -> Result<Self> {
        Ok(CompiledJet {
            fpart: CompiledExpPoly::new(&j.fpart, p)?,
            apart: j
                .apart
                .iter()
                .map(|(k, x)| Ok((*k, CompiledExpPoly::new(x, p)?)))
                .collect::<Result<Vec<_>>>()?,
        })
    }

    /// Highest `α` derivative needed.
    pub fn alpha_order(&self) -> usize {
        self.apart.last().map_or(0, |(k, _)| *k)
    }

    /// `fpart · f + Σ apart_k · alpha[k]`; `alpha` must reach [`Self::alpha_order`].
    pub fn eval(&self, ecz: Complex<F>, f: Complex<F>, alpha: &[Complex<F>]) -> Complex<F> {
        let mut acc = self.fpart.eval(ecz) * f;
        for (k, x) in &self.apart {
            acc = acc + x.eval(ecz) * alpha[*k];
        }
        acc
    }
}

/// An [`OdeSpec`] with evaluated coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct CompiledOde<F: Real> {
    coeffs: Vec<CompiledExpPoly<F>>,
}

impl<F: Real> CompiledOde<F> {
    pub fn new(ode: &OdeSpec, p: &Params<F>) -> Result<Self> {
        Ok(CompiledOde {
            coeffs: ode
                .coeffs()
                .iter()
                .map(|x| CompiledExpPoly::new(x, p))
                .collect::<Result<Vec<_>>>()?,
        })
    }

    /// Number of coefficients, `n`.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, k: usize, ecz: Complex<F>) -> Complex<F> {
        self.coeffs[k].eval(ecz)
    }

    /// `Σ_k coeff_k α^(k)` for `alpha = [α, ..., α^(n-1)]`.
    pub fn residual(&self, ecz: Complex<F>, alpha: &[Complex<F>]) -> Complex<F> {
        self.coeffs
            .iter()
            .zip(alpha)
            .fold(Complex::zero(), |acc, (c, a)| acc + c.eval(ecz) * *a)
    }

    /// `α^(n-1)` from the lower derivatives.
    pub fn top_derivative(&self, ecz: Complex<F>, lower: &[Complex<F>]) -> Complex<F> {
        let n = self.coeffs.len();
        let lead = self.coeffs[n - 1].eval(ecz);
        -self.residual(ecz, &lower[..n - 1]) / lead
    }
}

/// Evaluated `f^(j)` jets for `j = 1..=n` and the coefficients `a_1..a_n`.
#[derive(Clone, Debug)]
pub struct DerivativeTable<F: Real> {
    jets: Vec<CompiledJet<F>>,
    a: Vec<Complex<F>>,
}

impl<F: Real> DerivativeTable<F> {
    pub fn new(p: &Params<F>) -> Result<Self> {
        let lc = lahiri_coefficients(p.n)?;
        let mut jets = Vec::with_capacity(p.n);
        let mut jet = build_ab(1)?;
        for _ in 0..p.n {
            jets.push(CompiledJet::new(&jet, p)?);
            jet = jet.derive();
        }
        let a = (1..=p.n)
            .map(|j| eval_ring(&lc.a(j), p))
            .collect::<Result<Vec<_>>>()?;
        Ok(DerivativeTable { jets, a })
    }

    /// `f^(j)`; `alpha` must reach `α^(j-1)`.
    pub fn derivative(&self, j: usize, ecz: Complex<F>, f: Complex<F>, alpha: &[Complex<F>]) -> Complex<F> {
        match j {
            0 => f,
            j => self.jets[j - 1].eval(ecz, f, alpha),
        }
    }

    /// `L(f) = Σ_j a_j f^(j)`; `alpha` must reach `α^(n-1)`.
    pub fn lf(&self, ecz: Complex<F>, f: Complex<F>, alpha: &[Complex<F>]) -> Complex<F> {
        (1..=self.a.len()).fold(Complex::zero(), |acc, j| {
            acc + self.a[j - 1] * self.derivative(j, ecz, f, alpha)
        })
    }

    /// Numeric `a_j`, `0 <= j <= n`; `a_0 = 0`.
    pub fn a(&self, j: usize) -> Complex<F> {
        match j {
            0 => Complex::zero(),
            j => self.a[j - 1],
        }
    }
}

/// Straight segment from `start` to `end`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PathSpec<F: Real> {
    pub start: Complex<F>,
    pub end: Complex<F>,
    pub max_step: F,
    /// Minimum allowed `|λe^{cz} - 1|` on the path; `None` when `α` is
    /// entire and the singular set needs no avoiding.
    pub pole_clearance: Option<F>,
}

impl<F: Real> PathSpec<F> {
    /// Segment with `max_step = 0.25` and no clearance requirement.
    pub fn segment(start: Complex<F>, end: Complex<F>) -> Self {
        PathSpec {
            start,
            end,
            max_step: F::lit(0.25),
            pole_clearance: None,
        }
    }

    pub fn with_clearance(mut self, clearance: F) -> Self {
        self.pole_clearance = Some(clearance);
        self
    }

    pub fn with_max_step(mut self, h: F) -> Self {
        self.max_step = h;
        self
    }

    pub fn length(&self) -> F {
        (self.end - self.start).norm()
    }

    pub fn at(&self, t: F) -> Complex<F> {
        self.start + (self.end - self.start) * t
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if !(self.max_step > F::zero() && self.max_step.is_finite()) {
            return Err(Error::InvalidInput(format!("max_step must be positive, got {}", self.max_step)));
        }
        if let Some(c) = self.pole_clearance {
            if !(c > F::zero()) {
                return Err(Error::InvalidInput(format!("pole clearance must be positive, got {c}")));
            }
        }
        Ok(())
    }

    /// Rejects the path if it passes within `pole_clearance` of the singular set.
    pub fn check_clearance(&self, p: &Params<F>) -> Result<()> {
        self.validate()?;
        let Some(clear) = self.pole_clearance else {
            return Ok(());
        };
        // sample finer than both the step and the local scale 1/|c| of e^{cz}
        let scale = F::one() / p.c.norm();
        let h = self.max_step.min(scale) * F::lit(0.01);
        let m = (self.length() / h).ceil().to_usize().unwrap_or(1).clamp(1, 1_000_000);
        for i in 0..=m {
            let z = self.at(F::lit(i as f64) / F::lit(m as f64));
            let d = p.singular_distance(z);
            if d < clear {
                return Err(Error::ClearanceViolated {
                    at: cfmt(z),
                    distance: d.to_f64_lossy(),
                    clearance: clear.to_f64_lossy(),
                });
            }
        }
        Ok(())
    }
}

/// Sample points in the plane.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SampleGrid<F: Real> {
    /// `count` equally spaced points on `|z - center| = radius`, starting at angle 0.
    Circle { center: Complex<F>, radius: F, count: usize },
    /// The center plus `rings` concentric circles of `per_ring` points each.
    Disk { center: Complex<F>, radius: F, rings: usize, per_ring: usize },
    Points(Vec<Complex<F>>),
}

impl<F: Real> SampleGrid<F> {
    pub fn circle(radius: F, count: usize) -> Self {
        SampleGrid::Circle {
            center: Complex::zero(),
            radius,
            count,
        }
    }

    pub fn points(&self) -> Vec<Complex<F>> {
        let ring = |c: Complex<F>, r: F, m: usize, phase: F| -> Vec<Complex<F>> {
            (0..m)
                .map(|i| {
                    let th = F::TAU() * (F::lit(i as f64) + phase) / F::lit(m as f64);
                    c + Complex::from_polar(r, th)
                })
                .collect()
        };
        match self {
            SampleGrid::Circle { center, radius, count } => ring(*center, *radius, *count, F::zero()),
            SampleGrid::Disk { center, radius, rings, per_ring } => {
                let mut out = vec![*center];
                for i in 1..=*rings {
                    let r = *radius * F::lit(i as f64) / F::lit(*rings as f64);
                    // stagger alternate rings
                    let phase = if i % 2 == 0 { F::lit(0.5) } else { F::zero() };
                    out.extend(ring(*center, r, *per_ring, phase));
                }
                out
            }
            SampleGrid::Points(v) => v.clone(),
        }
    }
}

/// A function `α` that can report its derivatives at a point.
pub trait AlphaSource<F: Real> {
    /// `[α(z), α'(z), ..., α^(order)(z)]`.
    fn jet(&self, z: Complex<F>, order: usize) -> Result<Vec<Complex<F>>>;

    fn value(&self, z: Complex<F>) -> Result<Complex<F>> {
        Ok(self.jet(z, 0)?[0])
    }

    /// `(1 - λe^{cz}) α(z)`, the entire combination that drives `f`.
    fn g(&self, z: Complex<F>, p: &Params<F>) -> Result<Complex<F>> {
        Ok((Complex::new(F::one(), F::zero()) - p.e(z)) * self.value(z)?)
    }
}

/// Wraps a plain closure `z -> α(z)`; derivatives are unavailable.
pub struct AlphaFn<G>(pub G);

impl<F: Real, G: Fn(Complex<F>) -> Complex<F>> AlphaSource<F> for AlphaFn<G> {
    fn jet(&self, z: Complex<F>, order: usize) -> Result<Vec<Complex<F>>> {
        if order > 0 {
            return Err(Error::InvalidInput("closure α provides no derivatives".into()));
        }
        Ok(vec![(self.0)(z)])
    }
}

/// `α = Σ_i w_i e^{μ_i z}`, a finite exponential sum with exact derivatives.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExpSum<F: Real> {
    pub terms: Vec<(Complex<F>, Complex<F>)>,
}

impl<F: Real> AlphaSource<F> for ExpSum<F> {
    fn jet(&self, z: Complex<F>, order: usize) -> Result<Vec<Complex<F>>> {
        let mut out = vec![Complex::zero(); order + 1];
        for (w, mu) in &self.terms {
            let mut t = *w * (*mu * z).exp();
            for slot in out.iter_mut() {
                *slot = *slot + t;
                t = t * *mu;
            }
        }
        Ok(out)
    }
}

impl<F: Real, A: AlphaSource<F> + ?Sized> AlphaSource<F> for &A {
    fn jet(&self, z: Complex<F>, order: usize) -> Result<Vec<Complex<F>>> {
        (**self).jet(z, order)
    }
    fn g(&self, z: Complex<F>, p: &Params<F>) -> Result<Complex<F>> {
        (**self).g(z, p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symalg::{build_alpha_ode, Method};

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn params(n: usize) -> Params<f64> {
        Params::new(n, c(0.5, 0.0), c(1.0, 0.0), c(2.0, 0.0)).unwrap()
    }

    #[test]
    fn params_validation() {
        assert!(Params::new(1, c(1., 0.), c(1., 0.), c(1., 0.)).is_err());
        assert!(Params::new(2, c(0., 0.), c(1., 0.), c(1., 0.)).is_err());
        assert!(Params::new(2, c(1., 0.), c(0., 0.), c(1., 0.)).is_err());
        assert!(Params::new(2, c(1., 0.), c(1., 0.), c(0., 0.)).is_err());
        assert!(Params::new(2, c(f64::NAN, 0.), c(1., 0.), c(1., 0.)).is_err());
    }

    #[test]
    fn expoly_evaluation() {
        let p = params(2);
        assert_eq!(eval_expoly(&ExpPoly::zero(), c(0.3, 0.1), &p).unwrap(), c(0., 0.));
        let p = Params::new(2, c(0.7, 0.2), c(1.5, -0.5), c(1., 0.)).unwrap();
        assert!((eval_expoly(&ExpPoly::e_pow(1), c(0., 0.), &p).unwrap() - p.lambda).norm() < 1e-15);
    }

    #[test]
    fn ode_coefficient_at_e_equal_two() {
        // λe^{cz} = 2 at z = ln 2 / c
        let p = Params::new(3, c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)).unwrap();
        let z = c(2f64.ln(), 0.0);
        let ode = build_alpha_ode(3, Method::Closed).unwrap();
        let v = eval_expoly(ode.coeff(2), z, &p).unwrap();
        assert!((v - c(1.0, 0.0)).norm() < 1e-14, "{v}");
    }

    #[test]
    fn negative_c_power_needs_nonzero_c() {
        let p = Params { n: 2, c: c(0., 0.), lambda: c(1., 0.), an: c(1., 0.) };
        assert!(eval_ring(&RingElem::c_pow(-1), &p).is_err());
        assert!(eval_ring(&RingElem::c(), &p).is_ok());
    }

    #[test]
    fn derivative_table_on_exponential() {
        // f = e^{(λ/c) e^{cz}} solves f' = E f with α = 0
        let p = Params::new(3, c(0.5, 0.1), c(0.8, 0.3), c(1.0, 0.0)).unwrap();
        let dt = DerivativeTable::new(&p).unwrap();
        let z = c(0.2, -0.4);
        let ecz = p.ecz(z);
        let f = (p.lambda / p.c * ecz).exp();
        let zero = [c(0., 0.); 3];
        let e = p.e(z);
        let f1 = dt.derivative(1, ecz, f, &zero);
        assert!((f1 - e * f).norm() < 1e-13);
        // f'' = (cE + E^2) f
        let f2 = dt.derivative(2, ecz, f, &zero);
        assert!((f2 - (p.c * e + e * e) * f).norm() < 1e-13);
    }

    #[test]
    fn singular_roots_principal_first() {
        let p = params(2);
        let roots = p.singular_roots(10.0);
        assert_eq!(roots.len(), 1);
        assert!(roots[0].norm() < 1e-15);
        let p = Params::new(3, c(-1.5, 0.), c(1., 0.), c(1., 0.)).unwrap();
        let roots = p.singular_roots(10.0);
        assert_eq!(roots.len(), 5);
        for r in &roots {
            assert!(p.singular_distance(*r) < 1e-12);
        }
    }

    #[test]
    fn clearance_check() {
        let p = params(2);
        let path = PathSpec::segment(c(-1., 0.), c(1., 0.)).with_clearance(0.1);
        assert!(matches!(path.check_clearance(&p), Err(Error::ClearanceViolated { .. })));
        let away = PathSpec::segment(c(-1., 2.), c(1., 2.)).with_clearance(0.1);
        assert!(away.check_clearance(&p).is_ok());
        assert!(PathSpec::segment(c(-1., 0.), c(1., 0.)).check_clearance(&p).is_ok());
        assert!(PathSpec::segment(c(0., 0.), c(1., 0.)).with_max_step(0.0).validate().is_err());
    }

    #[test]
    fn grids() {
        let g = SampleGrid::<f64>::circle(1.0, 4);
        let pts = g.points();
        assert_eq!(pts.len(), 4);
        assert!((pts[1] - c(0., 1.)).norm() < 1e-15);
        let d = SampleGrid::Disk { center: c(0., 0.), radius: 1.0, rings: 2, per_ring: 3 };
        assert_eq!(d.points().len(), 7);
        assert!(d.points().iter().all(|z| z.norm() <= 1.0 + 1e-15));
    }

    #[test]
    fn exp_sum_jet() {
        let a = ExpSum { terms: vec![(c(2., 0.), c(0., 1.))] };
        let j = a.jet(c(0., 0.), 2).unwrap();
        assert_eq!(j, vec![c(2., 0.), c(0., 2.), c(-2., 0.)]);
        assert!(AlphaFn(|z: Complex<f64>| z).jet(c(0., 0.), 1).is_err());
    }
}
