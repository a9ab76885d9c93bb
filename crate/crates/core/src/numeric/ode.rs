//! Dormand–Prince 5(4) propagation of the `α`-ODE along a segment, with
//! continuous (dense) output.

use num_complex::Complex;
use num_traits::Zero;
use serde::Serialize;

use super::{AlphaSource, CompiledOde, Params, PathSpec};
use crate::error::{Error, Result};
use crate::scalar::{cfmt, Real};
use crate::symalg::OdeSpec;

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

/// Step-size control for [`solve_alpha_ode`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OdeOptions<F: Real> {
    /// Local relative tolerance.
    pub rtol: F,
    pub atol: F,
    pub max_steps: usize,
}

impl<F: Real> Default for OdeOptions<F> {
    fn default() -> Self {
        let eps = F::epsilon();
        OdeOptions {
            rtol: F::lit(1e-12).max(eps * F::lit(100.0)),
            atol: F::lit(1e-14).max(eps),
            max_steps: 200_000,
        }
    }
}

#[derive(Clone, Debug)]
struct Step<F: Real> {
    t0: F,
    h: F,
    // per component: 5 dense-output coefficients
    rcont: Vec<[Complex<F>; 5]>,
}

/// The propagated state `(α, ..., α^(n-2))` along one segment.
#[derive(Clone, Debug)]
pub struct AlphaTrajectory<F: Real> {
    ode: CompiledOde<F>,
    params: Params<F>,
    path: PathSpec<F>,
    steps: Vec<Step<F>>,
    end_state: Vec<Complex<F>>,
}

impl<F: Real> AlphaTrajectory<F> {
    pub fn path(&self) -> &PathSpec<F> {
        &self.path
    }

    pub fn steps(&self) -> usize {
        self.steps.len()
    }

    /// `(α, ..., α^(n-2))` at the end of the segment.
    pub fn end_state(&self) -> &[Complex<F>] {
        &self.end_state
    }

    /// Arc-length parameter of `z` if it lies on the segment.
    fn locate(&self, z: Complex<F>) -> Result<F> {
        let d = self.path.end - self.path.start;
        let len = d.norm();
        let t = ((z - self.path.start) * d.conj()).re / len;
        let off = (self.path.start + d * (t / len) - z).norm();
        let slack = F::lit(1e-9) * (F::one() + len);
        if off > slack || t < -slack || t > len + slack {
            return Err(Error::InvalidInput(format!(
                "z = {} is not on the integration segment",
                cfmt(z)
            )));
        }
        Ok(t.max(F::zero()).min(len))
    }

    /// Dense-output state at arc length `t`.
    fn state_at(&self, t: F) -> Vec<Complex<F>> {
        let i = self.steps.partition_point(|s| s.t0 + s.h < t).min(self.steps.len() - 1);
        let s = &self.steps[i];
        let th = ((t - s.t0) / s.h).max(F::zero()).min(F::one());
        let th1 = F::one() - th;
        s.rcont
            .iter()
            .map(|r| r[0] + (r[1] + (r[2] + (r[3] + r[4] * th1) * th) * th1) * th)
            .collect()
    }
}

impl<F: Real> AlphaSource<F> for AlphaTrajectory<F> {
    /// Orders up to `n - 1`; the top one comes from the ODE itself.
    fn jet(&self, z: Complex<F>, order: usize) -> Result<Vec<Complex<F>>> {
        let n = self.ode.len();
        if order > n - 1 {
            return Err(Error::InvalidInput(format!(
                "trajectory of an order {} ODE provides derivatives up to {}, asked for {order}",
                n - 1,
                n - 1
            )));
        }
        let mut y = if self.steps.is_empty() {
            self.end_state.clone()
        } else {
            self.state_at(self.locate(z)?)
        };
        if order == n - 1 {
            y.push(self.ode.top_derivative(self.params.ecz(z), &y));
        }
        y.truncate(order + 1);
        Ok(y)
    }
}

/// Propagates `Σ_k coeff_k α^(k) = 0` from `path.start`, where
/// `init = (α, ..., α^(n-2))`, to `path.end`. The path is rejected if it
/// violates its clearance; step-size collapse is reported as proximity to
/// a singular point.
pub fn solve_alpha_ode<F: Real>(
    ode: &OdeSpec,
    p: &Params<F>,
    init: &[Complex<F>],
    path: &PathSpec<F>,
    opts: &OdeOptions<F>,
) -> Result<AlphaTrajectory<F>> {
    let n = ode.n();
    if init.len() != n - 1 {
        return Err(Error::InvalidInput(format!(
            "order {} ODE needs {} initial values, got {}",
            n - 1,
            n - 1,
            init.len()
        )));
    }
    path.check_clearance(p)?;
    let comp = CompiledOde::new(ode, p)?;
    let len = path.length();
    let dir = if len > F::zero() {
        (path.end - path.start) / len
    } else {
        Complex::zero()
    };
    let m = n - 1;

    let rhs = |t: F, y: &[Complex<F>]| -> Vec<Complex<F>> {
        let z = path.start + dir * t;
        let ecz = p.ecz(z);
        let mut d: Vec<Complex<F>> = y[1..].to_vec();
        d.push(comp.top_derivative(ecz, y));
        d.into_iter().map(|v| v * dir).collect()
    };

    let mut traj = AlphaTrajectory {
        ode: comp.clone(),
        params: *p,
        path: *path,
        steps: Vec::new(),
        end_state: init.to_vec(),
    };
    if len == F::zero() {
        return Ok(traj);
    }

    let axpy = |y: &[Complex<F>], terms: &[(f64, &Vec<Complex<F>>)], h: F| -> Vec<Complex<F>> {
        let mut out = y.to_vec();
        for (c, k) in terms {
            if *c == 0.0 {
                continue;
            }
            let w = h * F::lit(*c);
            for (o, kv) in out.iter_mut().zip(k.iter()) {
                *o = *o + *kv * w;
            }
        }
        out
    };

    let mut t = F::zero();
    let mut y = init.to_vec();
    let mut k1 = rhs(t, &y);
    let mut h = path.max_step.min(len) * F::lit(0.05);
    let h_floor = len * F::lit(1e-12);
    let mut steps = 0usize;
    let mut reject_prev = false;

    while t < len {
        if steps >= opts.max_steps {
            return Err(Error::SingularProximity {
                at: cfmt(path.start + dir * t),
            });
        }
        steps += 1;
        let last = t + h >= len;
        if last {
            h = len - t;
        }
        let k2 = rhs(t + h * F::lit(C2), &axpy(&y, &[(A21, &k1)], h));
        let k3 = rhs(t + h * F::lit(C3), &axpy(&y, &[(A31, &k1), (A32, &k2)], h));
        let k4 = rhs(t + h * F::lit(C4), &axpy(&y, &[(A41, &k1), (A42, &k2), (A43, &k3)], h));
        let k5 = rhs(
            t + h * F::lit(C5),
            &axpy(&y, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)], h),
        );
        let k6 = rhs(
            t + h,
            &axpy(&y, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)], h),
        );
        let y1 = axpy(&y, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)], h);
        let k7 = rhs(t + h, &y1);

        let mut err = F::zero();
        for i in 0..m {
            let e = (k1[i] * F::lit(E1)
                + k3[i] * F::lit(E3)
                + k4[i] * F::lit(E4)
                + k5[i] * F::lit(E5)
                + k6[i] * F::lit(E6)
                + k7[i] * F::lit(E7))
                * h;
            let sc = opts.atol + opts.rtol * y[i].norm().max(y1[i].norm());
            err = err.max(e.norm() / sc);
        }
        if !err.is_finite() {
            err = F::lit(1e10);
        }

        if err <= F::one() {
            let rcont = (0..m)
                .map(|i| {
                    let ydiff = y1[i] - y[i];
                    let bspl = k1[i] * h - ydiff;
                    [
                        y[i],
                        ydiff,
                        bspl,
                        ydiff - k7[i] * h - bspl,
                        (k1[i] * F::lit(D1)
                            + k3[i] * F::lit(D3)
                            + k4[i] * F::lit(D4)
                            + k5[i] * F::lit(D5)
                            + k6[i] * F::lit(D6)
                            + k7[i] * F::lit(D7))
                            * h,
                    ]
                })
                .collect();
            traj.steps.push(Step { t0: t, h, rcont });
            t = if last { len } else { t + h };
            y = y1;
            k1 = k7;
            let mut fac = F::lit(0.9) * err.max(F::lit(1e-10)).powf(F::lit(-0.2));
            fac = fac.min(if reject_prev { F::one() } else { F::lit(5.0) });
            h = (h * fac.max(F::lit(0.2))).min(path.max_step);
            reject_prev = false;
        } else {
            h = h * (F::lit(0.9) * err.powf(F::lit(-0.2))).max(F::lit(0.1));
            reject_prev = true;
        }
        if h < h_floor && t < len {
            return Err(Error::SingularProximity {
                at: cfmt(path.start + dir * t),
            });
        }
    }
    traj.end_state = y;
    Ok(traj)
}
