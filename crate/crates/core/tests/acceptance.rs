//! Acceptance suite. Runs without the libtest harness so every criterion
//! prints one PASS/FAIL line; exits nonzero if any criterion fails.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use valshare::closedform::{n3_normal_form, solve_n2, N2Solution, SpecialN3Alpha};
use valshare::coefftab::{lahiri_coefficients, zeta_eps_recursive, ZetaEpsTable};
use valshare::identities::{self, FamilyReport};
use valshare::numeric::{
    finite_diff_jet, necessary_condition_check, sharing_residuals, sharing_samples, solve_alpha_ode, AlphaSource,
    DerivativeTable, FSolution, FdMethod, OdeOptions, Params, PathSpec, ResidualOptions, SampleGrid, Verdict,
};
use valshare::stirling::{Kind, StirlingTable};
use valshare::symalg::{build_ab, build_alpha_ode, build_c1, ExpPoly, Method, Monomial, OdeSpec, RingElem};

type Outcome = Result<String, String>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn families(reps: &[FamilyReport]) -> Result<usize, String> {
    let mut checks = 0;
    for r in reps {
        ensure(r.passed(), || r.line())?;
        checks += r.checks;
    }
    Ok(checks)
}

fn binom(n: i64, k: i64) -> BigInt {
    if k < 0 || k > n {
        return BigInt::zero();
    }
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

fn fact(n: i64) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, i| a * i)
}

/// Coefficients of t(t-1)...(t-n+1), ascending.
fn falling_factorial(n: usize) -> Vec<BigInt> {
    let mut p = vec![BigInt::one()];
    for i in 0..n {
        let mut q = vec![BigInt::zero(); p.len() + 1];
        for (k, a) in p.iter().enumerate() {
            q[k + 1] += a;
            q[k] -= a * BigInt::from(i);
        }
        p = q;
    }
    p
}

/// S(n,k) = (1/k!) Σ_i (-1)^i C(k,i) (k-i)^n.
fn second_kind(n: i64, k: i64) -> BigInt {
    let sum: BigInt = (0..=k)
        .map(|i| {
            let t = binom(k, i) * BigInt::from(k - i).pow(n as u32);
            if i % 2 == 0 {
                t
            } else {
                -t
            }
        })
        .sum();
    sum / fact(k)
}

fn criterion_1() -> Outcome {
    const N: usize = 30;
    let s1 = StirlingTable::new(Kind::First, N);
    let s2 = StirlingTable::new(Kind::Second, N);
    let mut checks = 0usize;
    for n in 0..=N as i64 {
        let ff = falling_factorial(n as usize);
        for k in 0..=n {
            ensure(s1.get(n, k) == &ff[k as usize], || format!("s({n},{k})"))?;
            ensure(s2.get(n, k) == &second_kind(n, k), || format!("S({n},{k})"))?;
            // sign law
            ensure(s1.get(n, k).is_zero() || (s1.get(n, k).is_positive() == ((n - k) % 2 == 0)), || {
                format!("sign of s({n},{k})")
            })?;
            ensure(!s2.get(n, k).is_negative(), || format!("S({n},{k}) < 0"))?;
            // orthogonality both ways
            let o1: BigInt = (k..=n).map(|j| s1.get(n, j) * s2.get(j, k)).sum();
            let o2: BigInt = (k..=n).map(|j| s2.get(n, j) * s1.get(j, k)).sum();
            let d = if n == k { BigInt::one() } else { BigInt::zero() };
            ensure(o1 == d && o2 == d, || format!("orthogonality at ({n},{k})"))?;
            checks += 5;
        }
        if n >= 2 {
            let row: BigInt = (0..=n).map(|k| s1.get(n, k).clone()).sum();
            ensure(row.is_zero(), || format!("row sum n = {n}"))?;
            checks += 1;
        }
        if n >= 1 {
            let c2 = binom(n, 2);
            ensure(s2.get(n, n - 1) == &c2 && s1.get(n, n - 1) == &-c2, || format!("subdiagonal n = {n}"))?;
            let sign = if n % 2 == 1 { BigInt::one() } else { -BigInt::one() };
            ensure(s2.get(n, 1) == &BigInt::one() && s1.get(n, 1) == &(sign * fact(n - 1)), || {
                format!("first column n = {n}")
            })?;
            checks += 2;
        }
    }
    checks += families(&[
        identities::stirling_dual_route(N).map_err(|e| e.to_string())?,
        identities::stirling_orthogonality(N),
        identities::stirling_sign_law(N),
        identities::stirling_row_sum(N),
        identities::stirling_diagonals(N),
    ])?;
    Ok(format!("{checks} exact checks, n <= {N}"))
}

fn criterion_2() -> Outcome {
    const N: usize = 20;
    let direct = ZetaEpsTable::direct(N);
    let rec = zeta_eps_recursive(N).map_err(|e| e.to_string())?;
    ensure(direct == rec, || "recursive and direct ζ/ε tables differ".into())?;
    let s1 = StirlingTable::new(Kind::First, N);
    let mut counts = [0usize; 3];
    for n in 1..=N as i64 {
        for k in 0..n {
            for p in 0..=n - k {
                let zs: BigInt = (p + k..=n).map(|j| s1.get(n, j) * direct.zeta(j, k, p)).sum();
                if p <= n - k - 1 {
                    ensure(&zs == s1.get(n - p, k + 1), || format!("ζ-sum at ({n},{k},{p})"))?;
                    counts[0] += 1;
                } else {
                    ensure(zs.is_zero(), || format!("ζ-sum at p = n-k, ({n},{k})"))?;
                    counts[2] += 1;
                }
                // ε_{k,k,0} read as 1 at the j = k boundary (see the decisions ledger)
                let mut es: BigInt = (p + k..=n).map(|j| s1.get(n, j) * direct.eps(j, k, p)).sum();
                if p == 0 && k >= 1 {
                    es += s1.get(n, k);
                }
                ensure(&es == s1.get(n - p, k), || format!("ε-sum at ({n},{k},{p})"))?;
                counts[1] += 1;
            }
        }
    }
    families(&[
        identities::zeta_eps_dual_route(N).map_err(|e| e.to_string())?,
        identities::weighted_sums(N),
    ])?;
    Ok(format!(
        "tables equal; ζ-sums {}, ε-sums {}, vanishing ζ-sums {}, n <= {N}",
        counts[0], counts[1], counts[2]
    ))
}

fn criterion_3() -> Outcome {
    const N: usize = 12;
    for n in 1..=N {
        let rec = build_ab(n).map_err(|e| e.to_string())?;
        let closed = valshare::symalg::assemble_ab_closed(n).map_err(|e| e.to_string())?;
        ensure(rec == closed, || format!("f^({n}) routes differ"))?;
        if n < N {
            let next = build_ab(n + 1).map_err(|e| e.to_string())?;
            ensure(rec.derive() == next, || format!("derivative of the f^({n}) jet"))?;
        }
    }
    families(&[
        identities::jet_route_equivalence(N).map_err(|e| e.to_string())?,
        identities::jet_consistency(N).map_err(|e| e.to_string())?,
    ])?;
    Ok(format!("jets equal for n <= {N}"))
}

fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(num.into(), den.into())
}

fn criterion_4() -> Outcome {
    const N: usize = 12;
    for n in 2..=N {
        let lc = lahiri_coefficients(n).map_err(|e| e.to_string())?;
        let c1 = build_c1(&lc).map_err(|e| e.to_string())?;
        ensure(c1.is_zero(), || format!("C1 != 0 at n = {n}"))?;
        let s1 = StirlingTable::new(Kind::First, n);
        for j in 1..=n {
            let want = RingElem::term(
                Monomial::new((n - j) as i32, 0, 1),
                BigRational::from_integer(s1.get(n as i64, j as i64).clone()),
            );
            ensure(lc.a(j) == want, || format!("a_{j} at n = {n}"))?;
        }
        let ni = n as i64;
        ensure(
            lc.a(n - 1) == RingElem::term(Monomial::new(1, 0, 1), rat(-ni * (ni - 1), 2)),
            || format!("a_(n-1) at n = {n}"),
        )?;
        if n >= 3 {
            let q = rat(ni * (ni - 1) * (ni - 2) * (3 * ni - 1), 24);
            ensure(lc.a(n - 2) == RingElem::term(Monomial::new(2, 0, 1), q), || format!("a_(n-2) at n = {n}"))?;
        }
        let alt: BigInt = (1..=n).map(|k| if k % 2 == 0 { lc.d(k).clone() } else { -lc.d(k) }).sum();
        ensure(alt.is_zero(), || format!("Σ(-1)^k d_k at n = {n}"))?;
        for k in 1..=n {
            ensure(lc.d(k) == &s1.get(ni, k as i64).abs(), || format!("d_{k} = |s(n,k)| at n = {n}"))?;
        }
    }
    families(&[
        identities::c1_vanishes(N).map_err(|e| e.to_string())?,
        identities::lahiri_low_terms(N).map_err(|e| e.to_string())?,
        identities::d_alternating_sum(N).map_err(|e| e.to_string())?,
    ])?;
    Ok(format!("n <= {N}"))
}

/// `Σ coeff · c^cp λ^lp a_n^ap e^{p cz}` from `(p, cp, lp, ap, num)`.
fn expoly(terms: &[(u32, i32, u32, u32, i64)]) -> ExpPoly {
    let mut x = ExpPoly::zero();
    for &(p, cp, lp, ap, num) in terms {
        x.add_term(p, &RingElem::term(Monomial::new(cp, lp, ap), rat(num, 1)));
    }
    x
}

fn criterion_5() -> Outcome {
    const N: usize = 12;
    for n in 2..=N {
        let a = build_alpha_ode(n, Method::Assembled).map_err(|e| e.to_string())?;
        let b = build_alpha_ode(n, Method::Closed).map_err(|e| e.to_string())?;
        ensure(a == b, || format!("routes differ at n = {n}"))?;
    }
    // a_2(1 - E)α' - (1 + a_2 c - a_2 E)α, negated
    let eq3 = OdeSpec::new(
        2,
        vec![
            expoly(&[(0, 0, 0, 0, -1), (0, 1, 0, 1, -1), (1, 0, 1, 1, 1)]),
            expoly(&[(0, 0, 0, 1, 1), (1, 0, 1, 1, -1)]),
        ],
    )
    .map_err(|e| e.to_string())?;
    ensure(build_alpha_ode(2, Method::Closed).unwrap() == eq3.negated(), || "n = 2 is not -1 × the n = 2 equation".into())?;
    let a4 = OdeSpec::new(
        3,
        vec![
            expoly(&[(0, 0, 0, 0, 1), (0, 2, 0, 1, -2), (1, 1, 1, 1, 1), (2, 0, 2, 1, -1)]),
            expoly(&[(0, 1, 0, 1, 3), (1, 0, 1, 1, -1), (1, 1, 1, 1, -1), (2, 0, 2, 1, 1)]),
            expoly(&[(0, 0, 0, 1, -1), (1, 0, 1, 1, 1)]),
        ],
    )
    .map_err(|e| e.to_string())?;
    let got = build_alpha_ode(3, Method::Closed).unwrap();
    for k in 0..3 {
        ensure(got.coeff(k) == a4.coeff(k), || format!("n = 3 coefficient of α^({k}): {}", got.coeff(k)))?;
    }
    families(&[identities::ode_routes(N).map_err(|e| e.to_string())?])?;
    Ok(format!("routes equal for n <= {N}; n = 2, 3 match termwise"))
}

fn criterion_6() -> Outcome {
    let p = Params::new(2, c(0.5, 0.), c(1., 0.), c(2., 0.)).map_err(|e| e.to_string())?;
    let alpha = solve_n2(1, c(0.5, 0.), c(1., 0.)).map_err(|e| e.to_string())?;
    ensure(alpha.a2 == c(2., 0.), || format!("a_2 = {}", alpha.a2))?;
    let exact = |z: Complex64| -> valshare::Result<Complex64> { Ok((2.0 * (z / 2.0).exp()).exp() + z.exp()) };
    let e2 = std::f64::consts::E.powi(2);
    let fs = FSolution::new(p, &alpha, c(0., 0.), c(e2 + 1.0, 0.));
    let grid = SampleGrid::circle(1.0, 64);
    let mut quad_err = 0.0f64;
    for z in grid.points() {
        let (q, x) = (fs.eval(z).map_err(|e| e.to_string())?, exact(z).unwrap());
        quad_err = quad_err.max((q - x).norm() / x.norm().max(1.0));
    }
    ensure(quad_err < 1e-9, || format!("quadrature f vs exact f: {quad_err:e}"))?;
    let mut worst = (0.0f64, 0.0f64);
    let quad_f = |z| fs.eval(z);
    for f in [&exact as &dyn Fn(Complex64) -> valshare::Result<Complex64>, &quad_f] {
        let s = sharing_samples(f, &alpha, &p, &grid).map_err(|e| e.to_string())?;
        let rep = sharing_residuals(&s, &p, &ResidualOptions::default()).map_err(|e| e.to_string())?;
        ensure(rep.samples.len() == 64, || format!("{} points skipped", rep.skipped.len()))?;
        ensure(rep.max_r1 < 1e-9 && rep.max_r2 < 1e-9, || format!("r1 {:e}, r2 {:e}", rep.max_r1, rep.max_r2))?;
        worst = (worst.0.max(rep.max_r1), worst.1.max(rep.max_r2));
    }
    let nec = necessary_condition_check(&quad_f, &p, 1e-8, 10.0, 1e-2).map_err(|e| e.to_string())?;
    ensure(nec.verdict == Verdict::Pass && nec.condition2 && !nec.condition1, || format!("{nec:?}"))?;
    ensure(nec.roots.len() == 1 && nec.roots[0].z.norm() < 1e-15, || format!("roots {:?}", nec.roots))?;
    Ok(format!(
        "max r1 {:.1e}, max r2 {:.1e}, |f'(0) - f(0)|/(1+|f|) {:.1e}",
        worst.0,
        worst.1,
        nec.max_gap.unwrap_or(f64::NAN)
    ))
}

/// Direct formulas: α' = Rα, α'' = (R^2 + (9/4)u)α with R = -1 - 3u/2.
fn special_alpha_oracle(lambda: Complex64, z: Complex64) -> [Complex64; 3] {
    let u = lambda * (2.0 / 3.0) * (-1.5 * z).exp();
    let a = (-z + u).exp();
    let r = -1.0 - 1.5 * u;
    [a, r * a, (r * r + 2.25 * u) * a]
}

fn criterion_7() -> Outcome {
    let lambda = c(1., 0.);
    let cc = -1.5;
    let alpha = SpecialN3Alpha::new(lambda).map_err(|e| e.to_string())?;
    let p = alpha.params().map_err(|e| e.to_string())?;
    let disk = SampleGrid::Disk { center: c(0., 0.), radius: 1.0, rings: 8, per_ring: 24 };
    let (mut worst_a4, mut worst_alpha1, mut worst_jet) = (0.0f64, 0.0f64, 0.0f64);
    for z in disk.points() {
        let o = special_alpha_oracle(lambda, z);
        let lib = alpha.jet(z, 2).map_err(|e| e.to_string())?;
        for k in 0..3 {
            worst_jet = worst_jet.max((lib[k] - o[k]).norm() / o[k].norm().max(1e-300));
        }
        let e = lambda * (cc * z).exp();
        // a_3 = 1: (1 - (2c^2 - cE + E^2))α - (-3c + (1+c)E - E^2)α' - (1 - E)α''
        let t = [
            (1.0 - (2.0 * cc * cc - cc * e + e * e)) * o[0],
            -(-3.0 * cc + (1.0 + cc) * e - e * e) * o[1],
            -(1.0 - e) * o[2],
        ];
        let scale: f64 = t.iter().map(|v| v.norm()).sum();
        worst_a4 = worst_a4.max((t[0] + t[1] + t[2]).norm() / scale);
        if (1.0 - e).norm() > 1e-3 {
            let a1 = (-3.0 * cc + (1.0 + cc) * e - e * e) / (1.0 - e);
            let a0 = -(1.0 - 2.0 * cc * cc + cc * e - e * e) / (1.0 - e);
            let u = [o[2], a1 * o[1], a0 * o[0]];
            let sc: f64 = u.iter().map(|v| v.norm()).sum();
            worst_alpha1 = worst_alpha1.max((u[0] + u[1] + u[2]).norm() / sc);
        }
    }
    ensure(worst_jet < 1e-12, || format!("library jet vs direct formula {worst_jet:e}"))?;
    ensure(worst_a4 < 1e-8 && worst_alpha1 < 1e-8, || format!("α-equation residual {worst_a4:e} / {worst_alpha1:e}"))?;

    // L(f) = 2c^2 a_3 f' - 3c a_3 f'' + a_3 f'''
    let table = DerivativeTable::new(&p).map_err(|e| e.to_string())?;
    let want = [c(0., 0.), c(2.0 * cc * cc, 0.), c(-3.0 * cc, 0.), c(1., 0.)];
    for (j, w) in want.iter().enumerate() {
        ensure((table.a(j) - w).norm() < 1e-15, || format!("a_{j} = {}", table.a(j)))?;
    }
    let f0 = alpha.value(c(0., 0.)).unwrap() + (lambda / cc).exp();
    let fs = FSolution::new(p, &alpha, c(0., 0.), f0);
    let f = |z| fs.eval(z);
    let grid = SampleGrid::circle(1.0, 32);
    let s = sharing_samples(&f, &alpha, &p, &grid).map_err(|e| e.to_string())?;
    let rep = sharing_residuals(&s, &p, &ResidualOptions::default()).map_err(|e| e.to_string())?;
    ensure(rep.samples.len() == 32, || format!("{} points skipped", rep.skipped.len()))?;
    ensure(rep.max_r2 < 1e-6, || format!("max r2 {:e}", rep.max_r2))?;
    // jet-route f''' against differences of the quadrature f
    let mut worst_fd = 0.0f64;
    for z in SampleGrid::circle(0.7, 4).points() {
        let fd = finite_diff_jet(&f, z, 3, 0.05, FdMethod::CauchyRing { points: 48 }).map_err(|e| e.to_string())?;
        let aj = alpha.jet(z, 2).unwrap();
        let ecz = p.ecz(z);
        for (j, d) in fd.iter().enumerate().skip(1) {
            let jet = table.derivative(j, ecz, fd[0], &aj);
            worst_fd = worst_fd.max((jet - d).norm() / d.norm().max(1.0));
        }
    }
    ensure(worst_fd < 1e-5, || format!("jet vs differences {worst_fd:e}"))?;
    Ok(format!(
        "α-equation residual {:.1e}, max r1 {:.1e}, max r2 {:.1e}, jet/difference gap {:.1e}",
        worst_a4.max(worst_alpha1),
        rep.max_r1,
        rep.max_r2,
        worst_fd
    ))
}

fn random_unit(rng: &mut ChaCha8Rng, rmin: f64, rmax: f64) -> Complex64 {
    Complex64::from_polar(rng.gen_range(rmin..rmax), rng.gen_range(-3.1..3.1))
}

/// `(α, α')` straight from `C̃ e^{ℓz}(λe^{cz} - 1)^{s-1}`.
fn n2_oracle(sol: &N2Solution<f64>, z: Complex64) -> (Complex64, Complex64) {
    let s = sol.s as i32;
    let ell = 1.0 + sol.c * (1.0 - f64::from(s));
    let e = sol.lambda * (sol.c * z).exp();
    let a = (ell * z).exp() * (e - 1.0).powi(s - 1);
    (a, a * (ell + f64::from(s - 1) * sol.c * e / (e - 1.0)))
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0008);
    let mut worst_eq3 = 0.0f64;
    let mut worst_ode = 0.0f64;
    let mut cases = 0;
    for s in 0..=3u32 {
        let mut found = 0;
        while found < 10 {
            let cc = random_unit(&mut rng, 0.2, 1.2);
            let lambda = random_unit(&mut rng, 0.1, 3.0);
            if (1.0 - f64::from(s) * cc).norm() < 0.1 {
                continue;
            }
            let sol = solve_n2(s, cc, lambda).map_err(|e| e.to_string())?;
            let p = sol.params().map_err(|e| e.to_string())?;
            // keep the singular set well outside the unit disk
            if !p.singular_roots(1.5).is_empty() {
                continue;
            }
            found += 1;
            cases += 1;
            let ode = build_alpha_ode(2, Method::Closed).map_err(|e| e.to_string())?;
            let init = [n2_oracle(&sol, c(0., 0.)).0];
            for z in SampleGrid::circle(1.0, 32).points() {
                let (a, da) = n2_oracle(&sol, z);
                let e = lambda * (cc * z).exp();
                let t1 = sol.a2 * (1.0 - e) * da;
                let t2 = (1.0 + sol.a2 * cc - sol.a2 * e) * a;
                worst_eq3 = worst_eq3.max((t1 - t2).norm() / (t1.norm() + t2.norm()));
                let lib = sol.jet(z, 1).map_err(|e| e.to_string())?;
                ensure((lib[0] - a).norm() <= 1e-12 * a.norm() && (lib[1] - da).norm() <= 1e-11 * (da.norm() + a.norm()), || {
                    format!("s = {s}: library α differs from the closed form at {z}")
                })?;
                ensure(sol.eq3_residual(z).map_err(|e| e.to_string())? < 1e-10, || format!("library eq3 residual at {z}"))?;
                let path = PathSpec::segment(c(0., 0.), z).with_clearance(1e-2);
                let traj = solve_alpha_ode(&ode, &p, &init, &path, &OdeOptions::default()).map_err(|e| e.to_string())?;
                worst_ode = worst_ode.max((traj.end_state()[0] - a).norm() / a.norm());
            }
        }
    }
    ensure(worst_eq3 < 1e-10, || format!("eq3 residual {worst_eq3:e}"))?;
    ensure(worst_ode < 1e-8, || format!("ODE vs closed form {worst_ode:e}"))?;
    Ok(format!("{cases} cases; eq3 residual {worst_eq3:.1e}, ODE gap {worst_ode:.1e}"))
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0009);
    let (mut worst_rt, mut worst_b1, mut worst_pot) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..5 {
        let cc = random_unit(&mut rng, 0.3, 1.5);
        let lambda = random_unit(&mut rng, 0.3, 1.5);
        let a3 = random_unit(&mut rng, 0.3, 2.0);
        let ps = n3_normal_form(cc, lambda, a3).map_err(|e| e.to_string())?;
        let disk = SampleGrid::Disk { center: c(0., 0.), radius: 1.0, rings: 3, per_ring: 12 };
        for z in disk.points() {
            let e = lambda * (cc * z).exp();
            if (e - 1.0).norm() < 1e-2 {
                continue;
            }
            let beta = [random_unit(&mut rng, 0.1, 2.0), random_unit(&mut rng, 0.1, 2.0), random_unit(&mut rng, 0.1, 2.0)];
            let b = ps.to_b(z, &beta);
            let back = ps.from_b(z, &b);
            for k in 0..3 {
                worst_rt = worst_rt.max((back[k] - beta[k]).norm() / beta[k].norm());
            }
            let lhs = ps.residual_b1(z, &b);
            let rhs = ps.m(z) * ps.residual_alpha1(z, &beta);
            worst_b1 = worst_b1.max((lhs - rhs).norm() / (lhs.norm() + rhs.norm()).max(1e-300));
            // A = a0 - a1^2/4 - a1'/2 with a1 = N/(1 - E)
            let n = -3.0 * cc + (1.0 + cc) * e - e * e;
            let dn = cc * (1.0 + cc) * e - 2.0 * cc * e * e;
            let a1 = n / (1.0 - e);
            let da1 = (dn * (1.0 - e) + n * cc * e) / ((1.0 - e) * (1.0 - e));
            let a0 = -(1.0 / a3 - 2.0 * cc * cc + cc * e - e * e) / (1.0 - e);
            let a = a0 - a1 * a1 / 4.0 - da1 / 2.0;
            worst_pot = worst_pot.max((a - ps.potential(z)).norm() / a.norm().max(1.0));
        }
        let unit = n3_normal_form(cc, lambda, c(1., 0.)).map_err(|e| e.to_string())?;
        ensure(unit.pole_coeff == c(0., 0.), || format!("pole coefficient {} at a_3 = 1", unit.pole_coeff))?;
        let want = [-1.0 - cc * cc / 4.0, -lambda, -lambda * lambda / 4.0];
        ensure(unit.poly_part == want, || format!("{:?} vs {want:?}", unit.poly_part))?;
    }
    ensure(worst_rt < 1e-12, || format!("round trip {worst_rt:e}"))?;
    ensure(worst_b1 < 1e-9, || format!("(alpha1) vs (B1) {worst_b1:e}"))?;
    ensure(worst_pot < 1e-9, || format!("potential vs classical formula {worst_pot:e}"))?;
    Ok(format!("round trip {worst_rt:.1e}, ODE agreement {worst_b1:.1e}, potential {worst_pot:.1e}"))
}

fn main() {
    type Crit = (u32, &'static str, fn() -> Outcome, Option<Duration>);
    let criteria: [Crit; 9] = [
        (1, "exact Stirling suite", criterion_1, Some(Duration::from_secs(10))),
        (2, "ζ/ε routes and weighted sums", criterion_2, Some(Duration::from_secs(30))),
        (3, "derivative jet routes", criterion_3, None),
        (4, "coefficient constraint suite", criterion_4, None),
        (5, "α-ODE route equivalence", criterion_5, None),
        (6, "n = 2, s = 1 worked example", criterion_6, Some(Duration::from_secs(5))),
        (7, "n = 3 special α, 2c = -3", criterion_7, None),
        (8, "n = 2 closed form vs ODE", criterion_8, None),
        (9, "n = 3 normal form", criterion_9, None),
    ];
    let mut failed = 0;
    for (id, name, run, limit) in criteria {
        let t0 = Instant::now();
        let res = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let dt = t0.elapsed();
        let res = match (res, limit) {
            (Ok(_), Some(l)) if dt > l => Err(format!("took {dt:.2?}, limit {l:?}")),
            (r, _) => r,
        };
        match res {
            Ok(msg) => println!("criterion {id} ({name}): PASS [{dt:.2?}] {msg}"),
            Err(msg) => {
                failed += 1;
                println!("criterion {id} ({name}): FAIL [{dt:.2?}] {msg}");
            }
        }
    }
    println!("acceptance: {} of 9 criteria passed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
