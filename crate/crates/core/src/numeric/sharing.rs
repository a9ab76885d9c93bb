//! Value-sharing residuals, difference-based derivative estimates and the
//! necessary condition at the singular set.

use num_complex::Complex;
use num_traits::Zero;
use serde::ser::SerializeTuple;
use serde::{Serialize, Serializer};

use super::{AlphaSource, DerivativeTable, Params, SampleGrid};
use crate::error::{Error, Result};
use crate::scalar::{cfmt, Real};

/// `f` and `α, ..., α^(n-1)` at one point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SharingSample<F: Real> {
    pub z: Complex<F>,
    pub f: Complex<F>,
    pub alpha: Vec<Complex<F>>,
}

/// Collects [`SharingSample`]s over a grid from `f` and an `α` source.
pub fn sharing_samples<F: Real, A: AlphaSource<F> + ?Sized>(
    f: &dyn Fn(Complex<F>) -> Result<Complex<F>>,
    alpha: &A,
    p: &Params<F>,
    grid: &SampleGrid<F>,
) -> Result<Vec<SharingSample<F>>> {
    grid.points()
        .into_iter()
        .map(|z| {
            Ok(SharingSample {
                z,
                f: f(z)?,
                alpha: alpha.jet(z, p.n - 1)?,
            })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ResidualOptions<F: Real> {
    /// Skip points with `|f - α| <= threshold · (1 + |f|)`.
    pub f_alpha_threshold: F,
    /// Skip points with `|1 - λe^{cz}| < clearance`.
    pub singular_clearance: F,
}

impl<F: Real> Default for ResidualOptions<F> {
    fn default() -> Self {
        ResidualOptions {
            f_alpha_threshold: F::lit(1e-8),
            singular_clearance: F::lit(1e-6),
        }
    }
}

/// One sample: serialized as `[re z, im z, r1, r2]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResidualRow<F: Real> {
    pub z: Complex<F>,
    pub r1: F,
    pub r2: F,
}

impl<F: Real> Serialize for ResidualRow<F> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut t = s.serialize_tuple(4)?;
        t.serialize_element(&self.z.re)?;
        t.serialize_element(&self.z.im)?;
        t.serialize_element(&self.r1)?;
        t.serialize_element(&self.r2)?;
        t.end()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SkippedPoint<F: Real> {
    pub z: Complex<F>,
    pub reason: String,
}

/// `r1 = |(f' - α)/(f - α) - λe^{cz}|` and
/// `r2 = |(L(f) - α)/(f - α) - a_n λ^n e^{ncz}|` over a sample set.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualReport<F: Real> {
    pub params: Params<F>,
    pub samples: Vec<ResidualRow<F>>,
    pub max_r1: F,
    pub max_r2: F,
    pub skipped: Vec<SkippedPoint<F>>,
}

impl<F: Real> ResidualReport<F> {
    pub fn passes(&self, tol: F) -> bool {
        self.max_r1 < tol && self.max_r2 < tol
    }
}

/// Computes the residuals. `f^(j)` come from the derivative jets evaluated
/// with the supplied `α` derivatives; nothing is differenced.
pub fn sharing_residuals<F: Real>(
    samples: &[SharingSample<F>],
    p: &Params<F>,
    opts: &ResidualOptions<F>,
) -> Result<ResidualReport<F>> {
    if samples.is_empty() {
        return Err(Error::InvalidInput("no sample points".into()));
    }
    for s in samples {
        if s.alpha.len() < p.n {
            return Err(Error::InvalidInput(format!(
                "sample at {} carries {} α derivatives, n = {} needs {}",
                cfmt(s.z),
                s.alpha.len(),
                p.n,
                p.n
            )));
        }
    }
    let max_a = samples.iter().fold(F::zero(), |m, s| m.max(s.alpha[0].norm()));
    let max_d = samples.iter().fold(F::zero(), |m, s| m.max(s.alpha[1].norm()));
    if max_d <= F::epsilon() * F::lit(64.0) * max_a {
        return Err(Error::Degenerate("α is constant on the sample set; α must be non-constant".into()));
    }

    let table = DerivativeTable::new(p)?;
    let one = Complex::new(F::one(), F::zero());
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for s in samples {
        let ecz = p.ecz(s.z);
        let e = p.lambda * ecz;
        if (one - e).norm() < opts.singular_clearance {
            skipped.push(SkippedPoint { z: s.z, reason: "near λe^(cz) = 1".into() });
            continue;
        }
        let d = s.f - s.alpha[0];
        if d.norm() <= opts.f_alpha_threshold * (F::one() + s.f.norm()) {
            skipped.push(SkippedPoint { z: s.z, reason: "near a zero of f - α".into() });
            continue;
        }
        let f1 = table.derivative(1, ecz, s.f, &s.alpha);
        let lf = table.lf(ecz, s.f, &s.alpha);
        let r1 = ((f1 - s.alpha[0]) / d - e).norm();
        let r2 = ((lf - s.alpha[0]) / d - p.an * e.powu(p.n as u32)).norm();
        rows.push(ResidualRow { z: s.z, r1, r2 });
    }
    if rows.is_empty() {
        return Err(Error::InvalidInput("every sample point was excluded".into()));
    }
    let max_r1 = rows.iter().fold(F::zero(), |m, r| m.max(r.r1));
    let max_r2 = rows.iter().fold(F::zero(), |m, r| m.max(r.r2));
    Ok(ResidualReport {
        params: *p,
        samples: rows,
        max_r1,
        max_r2,
        skipped,
    })
}

/// Stencil for [`finite_diff_jet`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FdMethod {
    /// Central differences, `O(h^2)`.
    Central,
    /// Trapezoidal Cauchy integral on the circle of radius `max(order, 1)·h`;
    /// converges geometrically in `points`.
    CauchyRing { points: usize },
}

/// `[f(z), f'(z), ..., f^(order)(z)]` from samples of `f` near `z`.
pub fn finite_diff_jet<F: Real>(
    f: &dyn Fn(Complex<F>) -> Result<Complex<F>>,
    z: Complex<F>,
    order: usize,
    h: F,
    method: FdMethod,
) -> Result<Vec<Complex<F>>> {
    if !(h > F::zero() && h.is_finite()) {
        return Err(Error::IllConditioned(format!("step h = {h} must be positive")));
    }
    let f0 = f(z)?;
    if order == 0 {
        return Ok(vec![f0]);
    }
    match method {
        FdMethod::Central => {
            // rounding amplification 2^m eps / h^m
            let amp = F::lit(2f64.powi(order as i32)) * F::epsilon() / h.powi(order as i32);
            if !(amp < F::lit(1e-2)) {
                return Err(Error::IllConditioned(format!(
                    "central stencil of order {order} with h = {h} amplifies rounding by {amp}"
                )));
            }
            let mut out = vec![f0];
            for m in 1..=order {
                // δ^m f(z) = Σ_i (-1)^i C(m,i) f(z + (m/2 - i) h)
                let mut acc = Complex::zero();
                let mut binom = 1f64;
                for i in 0..=m {
                    let off = h * F::lit(m as f64 / 2.0 - i as f64);
                    let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                    acc = acc + f(z + Complex::new(off, F::zero()))? * F::lit(sign * binom);
                    binom = binom * (m - i) as f64 / (i + 1) as f64;
                }
                out.push(acc / h.powi(m as i32));
            }
            Ok(out)
        }
        FdMethod::CauchyRing { points } => {
            if points < order + 2 {
                return Err(Error::IllConditioned(format!(
                    "{points} ring points cannot resolve order {order}"
                )));
            }
            let r = h * F::lit(order.max(1) as f64);
            let mut fact = F::one();
            let amp = (1..=order).fold(F::one(), |a, k| a * F::lit(k as f64)) * F::epsilon() / r.powi(order as i32);
            if !(amp < F::lit(1e-2)) {
                return Err(Error::IllConditioned(format!("ring radius {r} too small for order {order}")));
            }
            let vals = (0..points)
                .map(|j| {
                    let w = Complex::from_polar(F::one(), F::TAU() * F::lit(j as f64) / F::lit(points as f64));
                    Ok((w, f(z + w * r)?))
                })
                .collect::<Result<Vec<_>>>()?;
            let mut out = vec![f0];
            for m in 1..=order {
                fact = fact * F::lit(m as f64);
                let s = vals
                    .iter()
                    .fold(Complex::zero(), |acc, (w, v)| acc + *v / w.powu(m as u32));
                out.push(s * fact / (F::lit(points as f64) * r.powi(m as i32)));
            }
            Ok(out)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RootCheck<F: Real> {
    pub z: Complex<F>,
    pub f: Complex<F>,
    pub fprime: Complex<F>,
    /// `|f' - f| / (1 + |f|)`.
    pub gap: F,
}

/// At points where `λe^{cz} = 1` either `a_n = 1` or `f' = f`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NecessaryReport<F: Real> {
    pub an_gap: F,
    pub roots: Vec<RootCheck<F>>,
    pub max_gap: Option<F>,
    pub condition1: bool,
    pub condition2: bool,
    pub tol: F,
    pub verdict: Verdict,
}

/// Evaluates both conditions at every root with `|z| <= radius`. `f'` is
/// taken from a Cauchy ring of radius `h` around each root, independently of
/// the relation defining `f`.
pub fn necessary_condition_check<F: Real>(
    f: &dyn Fn(Complex<F>) -> Result<Complex<F>>,
    p: &Params<F>,
    tol: F,
    radius: F,
    h: F,
) -> Result<NecessaryReport<F>> {
    let an_gap = (p.an - Complex::new(F::one(), F::zero())).norm();
    let zs = p.singular_roots(radius);
    let mut roots = Vec::with_capacity(zs.len());
    for z in zs {
        let j = finite_diff_jet(f, z, 1, h, FdMethod::CauchyRing { points: 32 })?;
        let gap = (j[1] - j[0]).norm() / (F::one() + j[0].norm());
        roots.push(RootCheck { z, f: j[0], fprime: j[1], gap });
    }
    let max_gap = roots.iter().map(|r| r.gap).reduce(|a, b| a.max(b));
    let condition1 = an_gap < tol;
    let condition2 = max_gap.is_some_and(|g| g < tol);
    let verdict = if roots.is_empty() {
        Verdict::NotApplicable
    } else if condition1 || condition2 {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(NecessaryReport {
        an_gap,
        roots,
        max_gap,
        condition1,
        condition2,
        tol,
        verdict,
    })
}
