use std::fmt::Write as _;
use std::io::Write as _;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use valshare::closedform::{solve_n2, SpecialN3Alpha};
use valshare::coefftab::{zeta_eps_recursive, ZetaEpsTable};
use valshare::identities::run_all;
use valshare::numeric::{
    necessary_condition_check, sharing_residuals, solve_alpha_ode, AlphaSource, FSolution, OdeOptions, Params,
    PathSpec, ResidualOptions, SampleGrid, SharingSample,
};
use valshare::stirling::{Kind, StirlingTable};
use valshare::symalg::{build_alpha_ode, Method};
use valshare::Error;

#[derive(Parser)]
#[command(name = "valshare", version, about = "Stirling tables, α-ODEs and value-sharing checks")]
struct Cli {
    /// Tolerance for verification commands (overrides per-command defaults).
    #[arg(long, global = true, env = "VALSHARE_TOL")]
    tol: Option<f64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Dump Stirling or ζ/ε tables.
    Tables(TablesArgs),
    /// Print the linear ODE satisfied by α.
    Ode(OdeArgs),
    /// Exact verification sweeps.
    Verify {
        #[command(subcommand)]
        what: VerifyCmd,
    },
    /// Closed-form n = 2 solution.
    SolveN2(SolveN2Args),
    /// End-to-end sharing residuals for f and α.
    VerifySharing(SharingArgs),
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Run every exact identity family up to N.
    Identities {
        #[arg(long, default_value_t = 20)]
        max_n: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Latex,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StirlingKind {
    First,
    Second,
}

#[derive(Args)]
#[command(group(ArgGroup::new("kind").required(true).args(["stirling", "zeta_eps"])))]
struct TablesArgs {
    #[arg(long, value_enum)]
    stirling: Option<StirlingKind>,
    #[arg(long)]
    zeta_eps: bool,
    #[arg(long, default_value_t = 10)]
    max_n: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Closed,
    Assembled,
}

#[derive(Args)]
struct OdeArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value_t = MethodArg::Closed)]
    method: MethodArg,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Also compare the assembled and closed routes.
    #[arg(long)]
    check_routes: bool,
}

#[derive(Args)]
struct SolveN2Args {
    #[arg(long)]
    s: u32,
    /// `re` or `re,im`.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    c: Complex64,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    lambda: Complex64,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    c_tilde: Option<Complex64>,
    /// Residual sample count on |z| = radius.
    #[arg(long, default_value_t = 32)]
    samples: usize,
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AlphaFormula {
    /// n = 2 closed form from the entireness condition.
    Closed,
    /// e^{-z} exp((2λ/3) e^{-3z/2}) for n = 3, c = -3/2, a_3 = 1.
    Special,
    /// Propagate the α-ODE from initial values at 0.
    Ode,
}

#[derive(Args)]
struct SharingArgs {
    #[arg(long)]
    n: usize,
    /// Entireness index for the n = 2 closed form.
    #[arg(long, default_value_t = 1)]
    s: u32,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    c: Complex64,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    lambda: Complex64,
    /// Leading coefficient a_n (for n = 2 it is fixed by s and c).
    #[arg(long, alias = "a3", value_parser = parse_complex, allow_hyphen_values = true)]
    an: Option<Complex64>,
    #[arg(long, value_enum)]
    alpha_formula: Option<AlphaFormula>,
    /// Initial values α(0), α'(0), ... for the ODE route; missing ones are 0,
    /// α(0) defaults to 1.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    alpha_init: Vec<Complex64>,
    /// f(0); defaults to α(0) + e^{λ/c}.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    f0: Option<Complex64>,
    #[arg(long, default_value_t = 32)]
    samples: usize,
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
    /// Roots of λe^{cz} = 1 are scanned up to this modulus.
    #[arg(long, default_value_t = 10.0)]
    root_radius: f64,
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| -> Result<f64, String> {
        let v: f64 = t.parse().map_err(|_| format!("'{t}' is not a number"))?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(format!("'{t}' is not finite"))
        }
    };
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err(format!("expected 're' or 're,im', got '{s}'")),
    }
}

struct Failure {
    code: u8,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidInput(_)
            | Error::InvalidParameters(_)
            | Error::IndexOutOfRange(_)
            | Error::Degenerate(_)
            | Error::ClearanceViolated { .. } => 2,
            _ => 1,
        };
        Failure { code, msg: e.to_string() }
    }
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure { code: 2, msg: msg.into() }
}

/// Output text and whether every check passed.
type Outcome = Result<(String, bool), Failure>;

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("report serializes")
}

fn cjson(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn cmd_tables(a: &TablesArgs) -> Outcome {
    if let Some(kind) = a.stirling {
        let kind = match kind {
            StirlingKind::First => Kind::First,
            StirlingKind::Second => Kind::Second,
        };
        let t = StirlingTable::new(kind, a.max_n);
        let rows: Vec<Vec<String>> = t.rows().iter().map(|r| r.iter().map(|v| v.to_string()).collect()).collect();
        let out = match a.format {
            Format::Json => to_json(&json!({ "kind": kind, "max_n": a.max_n, "rows": rows })),
            Format::Text => {
                let w = rows.iter().flatten().map(String::len).max().unwrap_or(1);
                let nw = a.max_n.to_string().len();
                let mut s = String::new();
                for (n, r) in rows.iter().enumerate() {
                    let cells: Vec<String> = r.iter().map(|v| format!("{v:>w$}")).collect();
                    let _ = writeln!(s, "{n:>nw$} | {}", cells.join(" "));
                }
                s.trim_end().to_string()
            }
            Format::Latex => return Err(invalid("tables support json and text output")),
        };
        return Ok((out, true));
    }
    if a.max_n < 1 {
        return Err(invalid("ζ/ε tables need --max-n >= 1"));
    }
    let t: ZetaEpsTable = zeta_eps_recursive(a.max_n)?;
    let zeta = t.zeta_entries();
    let eps = t.eps_entries();
    let out = match a.format {
        Format::Json => to_json(&json!({ "max_n": a.max_n, "zeta": zeta, "eps": eps })),
        Format::Text => {
            let w = zeta.iter().chain(&eps).map(|e| e.3.len()).max().unwrap_or(1).max(4);
            let mut s = format!("{:>3} {:>3} {:>3} {:>w$} {:>w$}\n", "n", "k", "j", "zeta", "eps");
            for (z, e) in zeta.iter().zip(&eps) {
                let _ = writeln!(s, "{:>3} {:>3} {:>3} {:>w$} {:>w$}", z.0, z.1, z.2, z.3, e.3);
            }
            s.trim_end().to_string()
        }
        Format::Latex => return Err(invalid("tables support json and text output")),
    };
    Ok((out, true))
}

fn cmd_ode(a: &OdeArgs) -> Outcome {
    if a.n < 2 {
        return Err(invalid(format!("--n must be >= 2, got {}", a.n)));
    }
    let method = match a.method {
        MethodArg::Closed => Method::Closed,
        MethodArg::Assembled => Method::Assembled,
    };
    let ode = build_alpha_ode(a.n, method)?;
    let routes = if a.check_routes {
        Some(build_alpha_ode(a.n, Method::Assembled)? == build_alpha_ode(a.n, Method::Closed)?)
    } else {
        None
    };
    let mut out = match a.format {
        Format::Json => to_json(&json!({
            "n": a.n,
            "method": method,
            "order": ode.order(),
            "coeffs": ode.coeffs(),
            "routes_equal": routes,
        })),
        Format::Text => ode.render_text(),
        Format::Latex => ode.render_latex(),
    };
    if a.format != Format::Json {
        if let Some(eq) = routes {
            let _ = write!(out, "\nroutes assembled = closed: {}", if eq { "PASS" } else { "FAIL" });
        }
    }
    Ok((out, routes.unwrap_or(true)))
}

fn cmd_verify_identities(max_n: usize, format: Format) -> Outcome {
    if max_n < 2 {
        return Err(invalid(format!("--max-n must be >= 2, got {max_n}")));
    }
    let reps = run_all(max_n)?;
    let ok = reps.iter().all(|r| r.passed());
    let out = match format {
        Format::Json => to_json(&json!({ "max_n": max_n, "families": reps, "passed": ok })),
        _ => {
            let mut s: Vec<String> = reps.iter().map(|r| r.line()).collect();
            s.push(format!("overall: {}", if ok { "PASS" } else { "FAIL" }));
            s.join("\n")
        }
    };
    Ok((out, ok))
}

fn circle(radius: f64, count: usize) -> Result<SampleGrid<f64>, Failure> {
    if count == 0 || !(radius > 0.0 && radius.is_finite()) {
        return Err(invalid("sample grid needs --samples >= 1 and --radius > 0"));
    }
    Ok(SampleGrid::circle(radius, count))
}

fn cmd_solve_n2(a: &SolveN2Args, tol: Option<f64>) -> Outcome {
    let mut sol = solve_n2(a.s, a.c, a.lambda)?;
    if let Some(ct) = a.c_tilde {
        if ct == Complex64::new(0.0, 0.0) {
            return Err(invalid("--c-tilde must be nonzero"));
        }
        sol = sol.with_c_tilde(ct);
    }
    let tol = tol.unwrap_or(1e-10);
    let p = sol.params()?;
    let mut max = 0.0f64;
    let mut used = 0usize;
    let mut skipped = Vec::new();
    for z in circle(a.radius, a.samples)?.points() {
        if p.singular_distance(z) < 1e-6 {
            skipped.push(cjson(z));
            continue;
        }
        max = max.max(sol.eq3_residual(z)?);
        used += 1;
    }
    let ok = used > 0 && max < tol;
    let out = to_json(&json!({
        "solution": sol.report(),
        "residual": {
            "points": used,
            "radius": a.radius,
            "max": max,
            "tol": tol,
            "skipped": skipped,
            "pass": ok,
        }
    }));
    Ok((out, ok))
}

struct SharingRun {
    p: Params<f64>,
    alpha: String,
    samples: Vec<SharingSample<f64>>,
    necessary: Value,
}

fn necessary_json(f: &dyn Fn(Complex64) -> valshare::Result<Complex64>, p: &Params<f64>, radius: f64) -> Value {
    match necessary_condition_check(f, p, 1e-8, radius, 1e-2) {
        Ok(r) => serde_json::to_value(r).expect("report serializes"),
        Err(e) => json!({ "error": e.to_string() }),
    }
}

/// α known everywhere: f by quadrature from 0.
fn global_alpha_run<A: AlphaSource<f64>>(
    src: &A,
    p: Params<f64>,
    alpha: String,
    a: &SharingArgs,
    grid: &SampleGrid<f64>,
) -> Result<SharingRun, Failure> {
    let zero = Complex64::new(0.0, 0.0);
    let f0 = match a.f0 {
        Some(v) => v,
        None => src.value(zero)? + (a.lambda / a.c).exp(),
    };
    let fs = FSolution::new(p, src, zero, f0);
    let samples = grid
        .points()
        .into_iter()
        .map(|z| Ok(SharingSample { z, f: fs.eval(z)?, alpha: src.jet(z, p.n - 1)? }))
        .collect::<valshare::Result<Vec<_>>>()?;
    let necessary = necessary_json(&|z| fs.eval(z), &p, a.root_radius);
    Ok(SharingRun { p, alpha, samples, necessary })
}

/// α propagated from 0 along the segment to each point, then f by quadrature.
fn ode_run(a: &SharingArgs, grid: &SampleGrid<f64>) -> Result<SharingRun, Failure> {
    let zero = Complex64::new(0.0, 0.0);
    let an = a.an.ok_or_else(|| invalid("the ODE route needs --an"))?;
    let p = Params::new(a.n, a.c, a.lambda, an)?;
    if a.alpha_init.len() > a.n - 1 {
        return Err(invalid(format!("--alpha-init takes at most {} values", a.n - 1)));
    }
    let mut init = a.alpha_init.clone();
    if init.is_empty() {
        init.push(Complex64::new(1.0, 0.0));
    }
    init.resize(a.n - 1, zero);
    let ode = build_alpha_ode(a.n, Method::Closed)?;
    let opts = OdeOptions::default();
    let f0 = a.f0.unwrap_or(init[0] + (a.lambda / a.c).exp());
    let f_at = |z: Complex64, clearance: Option<f64>| -> valshare::Result<(Complex64, Vec<Complex64>)> {
        let mut path = PathSpec::segment(zero, z);
        path.pole_clearance = clearance;
        let traj = solve_alpha_ode(&ode, &p, &init, &path, &opts)?;
        let f = FSolution::new(p, &traj, zero, f0).eval(z)?;
        Ok((f, traj.jet(z, a.n - 1)?))
    };
    let samples = grid
        .points()
        .into_iter()
        .map(|z| {
            let (f, alpha) = f_at(z, Some(1e-3))?;
            Ok(SharingSample { z, f, alpha })
        })
        .collect::<valshare::Result<Vec<_>>>()?;
    let necessary = necessary_json(&|z| Ok(f_at(z, None)?.0), &p, a.root_radius);
    let alpha = "numerical solution of the α-ODE from the initial values at 0".to_string();
    Ok(SharingRun { p, alpha, samples, necessary })
}

fn cmd_verify_sharing(a: &SharingArgs, tol: Option<f64>) -> Outcome {
    let grid = circle(a.radius, a.samples)?;
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    if a.n < 2 {
        return Err(invalid(format!("--n must be >= 2, got {}", a.n)));
    }
    if a.c == zero || a.lambda == zero || a.an == Some(zero) {
        return Err(invalid("c, λ and a_n must be nonzero"));
    }
    let formula = a.alpha_formula.unwrap_or(if a.n == 2 { AlphaFormula::Closed } else { AlphaFormula::Ode });
    let run = match formula {
        AlphaFormula::Closed => {
            if a.n != 2 {
                return Err(invalid("--alpha-formula closed needs --n 2"));
            }
            let sol = solve_n2(a.s, a.c, a.lambda)?;
            if let Some(an) = a.an {
                if (an - sol.a2).norm() > 1e-9 * sol.a2.norm() {
                    return Err(invalid(format!("a_2 = {an} contradicts 1/(1 - sc) = {}", sol.a2)));
                }
            }
            global_alpha_run(&sol, sol.params()?, sol.formula(), a, &grid)?
        }
        AlphaFormula::Special => {
            if a.n != 3 || (a.c - Complex64::new(-1.5, 0.0)).norm() > 1e-12 || (a.an.unwrap_or(one) - one).norm() > 1e-12
            {
                return Err(invalid("--alpha-formula special needs --n 3 --c -1.5 --a3 1"));
            }
            let src = SpecialN3Alpha::new(a.lambda)?;
            global_alpha_run(&src, src.params()?, "e^(-z) exp((2λ/3) e^(-3z/2))".into(), a, &grid)?
        }
        AlphaFormula::Ode => ode_run(a, &grid)?,
    };
    let tol = tol.unwrap_or(if formula == AlphaFormula::Ode { 1e-6 } else { 1e-8 });
    let rep = sharing_residuals(&run.samples, &run.p, &ResidualOptions::default())?;
    let ok = rep.passes(tol);
    let out = to_json(&json!({
        "n": a.n,
        "alpha": run.alpha,
        "tol": tol,
        "residuals": rep,
        "necessary_condition": run.necessary,
        "verdict": if ok { "PASS" } else { "FAIL" },
    }));
    Ok((out, ok))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.tol {
        if !(t > 0.0 && t.is_finite()) {
            eprintln!("error: tolerance must be positive, got {t}");
            return ExitCode::from(2);
        }
    }
    let res = match &cli.cmd {
        Cmd::Tables(a) => cmd_tables(a),
        Cmd::Ode(a) => cmd_ode(a),
        Cmd::Verify { what: VerifyCmd::Identities { max_n, format } } => cmd_verify_identities(*max_n, *format),
        Cmd::SolveN2(a) => cmd_solve_n2(a, cli.tol),
        Cmd::VerifySharing(a) => cmd_verify_sharing(a, cli.tol),
    };
    match res {
        Ok((out, ok)) => {
            // a closed pipe is not a verification failure
            let _ = writeln!(std::io::stdout().lock(), "{out}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
