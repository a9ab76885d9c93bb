//! Adaptive Gauss–Kronrod quadrature along segments and the integral
//! representation of `f`.

use num_complex::Complex;
use num_traits::Zero;
use serde::Serialize;

use super::{AlphaSource, Params, PathSpec};
use crate::error::{Error, Result};
use crate::scalar::Real;

// 15-point Kronrod abscissae on [-1, 1] (non-negative half, descending)
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
// 7-point Gauss weights at XGK[1], XGK[3], XGK[5], XGK[7]
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Tolerances for [`gauss_kronrod`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QuadOptions<F: Real> {
    pub rel_tol: F,
    pub abs_tol: F,
    pub max_intervals: usize,
}

impl<F: Real> Default for QuadOptions<F> {
    fn default() -> Self {
        let eps = F::epsilon();
        QuadOptions {
            rel_tol: F::lit(1e-13).max(eps * F::lit(50.0)),
            abs_tol: F::lit(1e-15).max(eps * F::lit(1e-2)),
            max_intervals: 4000,
        }
    }
}

fn gk15<F: Real>(
    g: &mut dyn FnMut(Complex<F>) -> Result<Complex<F>>,
    a: Complex<F>,
    b: Complex<F>,
) -> Result<(Complex<F>, F)> {
    let mid = (a + b) * F::lit(0.5);
    let half = (b - a) * F::lit(0.5);
    let fc = g(mid)?;
    let mut kron = fc * F::lit(WGK[7]);
    let mut gauss = fc * F::lit(WG[3]);
    for i in 0..7 {
        let dx = half * F::lit(XGK[i]);
        let s = g(mid - dx)? + g(mid + dx)?;
        kron = kron + s * F::lit(WGK[i]);
        if i % 2 == 1 {
            gauss = gauss + s * F::lit(WG[i / 2]);
        }
    }
    Ok((kron * half, ((kron - gauss) * half).norm()))
}

/// `∫_a^b g(ζ) dζ` along the straight segment, with the final error estimate.
pub fn gauss_kronrod<F: Real>(
    g: &mut dyn FnMut(Complex<F>) -> Result<Complex<F>>,
    a: Complex<F>,
    b: Complex<F>,
    opts: &QuadOptions<F>,
) -> Result<(Complex<F>, F)> {
    if a == b {
        return Ok((Complex::zero(), F::zero()));
    }
    let (v, e) = gk15(g, a, b)?;
    let mut parts = vec![(a, b, v, e)];
    loop {
        let total: Complex<F> = parts.iter().fold(Complex::zero(), |s, p| s + p.2);
        let err = parts.iter().fold(F::zero(), |s, p| s + p.3);
        let tol = opts.abs_tol.max(opts.rel_tol * total.norm());
        if err <= tol {
            return Ok((total, err));
        }
        if parts.len() >= opts.max_intervals || !err.is_finite() {
            return Err(Error::QuadratureNonConvergence {
                estimate: err.to_f64_lossy(),
            });
        }
        // bisect the worst interval
        let (i, _) = parts
            .iter()
            .enumerate()
            .fold((0, F::neg_infinity()), |best, (i, p)| if p.3 > best.1 { (i, p.3) } else { best });
        let (pa, pb, _, _) = parts.swap_remove(i);
        let pm = (pa + pb) * F::lit(0.5);
        let (v1, e1) = gk15(g, pa, pm)?;
        let (v2, e2) = gk15(g, pm, pb)?;
        parts.push((pa, pm, v1, e1));
        parts.push((pm, pb, v2, e2));
    }
}

/// `f`, `f'` and `α` at one point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FNode<F: Real> {
    pub z: Complex<F>,
    pub f: Complex<F>,
    /// From `f' = λe^{cz} f + (1 - λe^{cz}) α`, not by differencing.
    pub fprime: Complex<F>,
    /// Accumulated quadrature error estimate for the integral part.
    pub err: F,
}

/// `f` determined by `α`, a base point `z_s` and `f(z_s)` through
/// `f(z) = e^{(λ/c)e^{cz}} (e^{-(λ/c)e^{cz_s}} f(z_s) + ∫_{z_s}^z e^{-(λ/c)e^{cζ}} g(ζ) dζ)`
/// with `g = (1 - λe^{cz}) α`. Each evaluation integrates along the straight
/// segment from the base point.
pub struct FSolution<'a, F: Real, A: AlphaSource<F> + ?Sized> {
    pub params: Params<F>,
    pub alpha: &'a A,
    pub base: Complex<F>,
    pub f_base: Complex<F>,
    pub opts: QuadOptions<F>,
}

impl<'a, F: Real, A: AlphaSource<F> + ?Sized> FSolution<'a, F, A> {
    pub fn new(params: Params<F>, alpha: &'a A, base: Complex<F>, f_base: Complex<F>) -> Self {
        FSolution {
            params,
            alpha,
            base,
            f_base,
            opts: QuadOptions::default(),
        }
    }

    fn phase(&self, z: Complex<F>) -> Complex<F> {
        self.params.lambda / self.params.c * self.params.ecz(z)
    }

    /// `(f(z), error estimate)` via the integral from the base point.
    pub fn eval_with_err(&self, z: Complex<F>) -> Result<(Complex<F>, F)> {
        let p = self.params;
        let mut g = |w: Complex<F>| -> Result<Complex<F>> { Ok((-self.phase(w)).exp() * self.alpha.g(w, &p)?) };
        let (integral, err) = gauss_kronrod(&mut g, self.base, z, &self.opts)?;
        let scale = self.phase(z).exp();
        let v = scale * ((-self.phase(self.base)).exp() * self.f_base + integral);
        Ok((v, err * scale.norm()))
    }

    pub fn eval(&self, z: Complex<F>) -> Result<Complex<F>> {
        Ok(self.eval_with_err(z)?.0)
    }

    /// `f(z)` and `f'(z)` with `f'` from the defining relation.
    pub fn node(&self, z: Complex<F>) -> Result<FNode<F>> {
        let (f, err) = self.eval_with_err(z)?;
        let e = self.params.e(z);
        let fprime = e * f + self.alpha.g(z, &self.params)?;
        Ok(FNode { z, f, fprime, err })
    }
}

/// `f` at the nodes of `path` (spacing at most `max_step`), integrating
/// piecewise from `path.start` where `f = f0`. The clearance is enforced
/// when set.
pub fn integrate_f<F: Real, A: AlphaSource<F> + ?Sized>(
    alpha: &A,
    p: &Params<F>,
    f0: Complex<F>,
    path: &PathSpec<F>,
) -> Result<Vec<FNode<F>>> {
    path.check_clearance(p)?;
    let opts = QuadOptions::default();
    let m = (path.length() / path.max_step).ceil().to_usize_lossy().max(1);
    let phase = |z: Complex<F>| p.lambda / p.c * p.ecz(z);

    // accumulate I(z) = e^{-phase(z_s)} f0 + ∫_{z_s}^{z} e^{-phase} g
    let mut acc = (-phase(path.start)).exp() * f0;
    let mut err = F::zero();
    let mut nodes = Vec::with_capacity(m + 1);
    let push = |nodes: &mut Vec<FNode<F>>, z: Complex<F>, acc: Complex<F>, err: F| -> Result<()> {
        let scale = phase(z).exp();
        let f = scale * acc;
        let fprime = p.e(z) * f + alpha.g(z, p)?;
        nodes.push(FNode { z, f, fprime, err: err * scale.norm() });
        Ok(())
    };
    push(&mut nodes, path.start, acc, err)?;
    let mut g = |w: Complex<F>| -> Result<Complex<F>> { Ok((-phase(w)).exp() * alpha.g(w, p)?) };
    for i in 1..=m {
        let a = path.at(F::lit((i - 1) as f64) / F::lit(m as f64));
        let b = path.at(F::lit(i as f64) / F::lit(m as f64));
        let (v, e) = gauss_kronrod(&mut g, a, b, &opts)?;
        acc = acc + v;
        err = err + e;
        push(&mut nodes, b, acc, err)?;
    }
    Ok(nodes)
}

trait ToUsizeLossy {
    fn to_usize_lossy(self) -> usize;
}

impl<F: Real> ToUsizeLossy for F {
    fn to_usize_lossy(self) -> usize {
        self.to_usize().unwrap_or(1).min(1_000_000)
    }
}
