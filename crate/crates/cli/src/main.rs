use clap::{Args, Parser, Subcommand, ValueEnum};
use ecw_core::cartan::{elliptic_thom_form, CartanConvention, ThomGroup};
use ecw_core::fgl::{
    additive_coordinate, cubical_verify_variant, fgl_check, fgl_from_coordinate, multiplicative_coordinate, sigma_coordinate, upsilon_coordinate, Variant,
};
use ecw_core::finite::{
    builtin_group, coboundary_check, commuting_pairs, devoto_report, fq_descent_check, orbit_decomposition, zn_cocycle, Action, Cocycle3, FiniteGroup,
    VerifiedCocycle,
};
use ecw_core::loopchar::{euler_section, looijenga_shift_check, Family, GroupTag, Level};
use ecw_core::modular::{delta_qexp, eisenstein_qexp, ModularForm};
use ecw_core::qseries::{QExp, Rational, Ring};
use ecw_core::theta::{sigma_eisenstein, sigma_product, sigma_qexp, upsilon, witten_series, TauPoint};
use ecw_core::tolerances::Tolerances;
use ecw_core::verify::{run_suite, GroupChoice, Suite, SuiteParams};
use num_complex::Complex64;
use serde_json::{json, Value};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "ecw", version, about = "Equivariant elliptic cohomology computations and verification suites")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// q-expansion of a modular form.
    Modular(ModularArgs),
    /// Evaluate sigma or upsilon, or expand them as q-series (`theta qexp`).
    Theta(ThetaArgs),
    /// Twisted Euler class of a torus representation.
    Euler(EulerArgs),
    /// Residual of the Looijenga shift law.
    LooijengaCheck(LooijengaArgs),
    /// Elliptic Thom form as a table of terms, or its restriction to the origin.
    Thom(ThomArgs),
    /// Formal group law of a coordinate.
    Fgl(FglArgs),
    /// Cubical-structure residuals at seeded random points.
    Cubical(CubicalArgs),
    /// Commuting pairs, orbits and Freed-Quinn checks for a finite group.
    Finite(FiniteArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct ModularArgs {
    /// c4, c6, delta, or e<k> for an even k >= 2.
    #[arg(long = "gen")]
    generator: String,
    /// Highest q-power to emit.
    #[arg(long, default_value_t = 20)]
    order: i64,
}

#[derive(Clone, Copy, ValueEnum)]
enum ThetaFn {
    Sigma,
    Upsilon,
    Witten,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Product,
    Eisenstein,
}

#[derive(Args)]
#[command(args_conflicts_with_subcommands = true)]
struct ThetaArgs {
    #[command(subcommand)]
    sub: Option<ThetaSub>,
    #[arg(long = "fn", value_enum, default_value = "sigma")]
    func: ThetaFn,
    /// `RE,IM`
    #[arg(long, allow_hyphen_values = true)]
    tau: Option<String>,
    /// `RE,IM`
    #[arg(long, allow_hyphen_values = true)]
    z: Option<String>,
    #[arg(long, value_enum, default_value = "product")]
    method: Method,
    /// Product factors.
    #[arg(long, default_value_t = 60)]
    terms: usize,
    #[arg(long, default_value_t = 40)]
    zorder: usize,
    #[arg(long, default_value_t = 60)]
    qorder: usize,
}

#[derive(Subcommand)]
enum ThetaSub {
    /// Formal expansion in `w = 2 pi i z` with rational q-series coefficients.
    Qexp {
        #[arg(long = "fn", value_enum, default_value = "sigma")]
        func: ThetaFn,
        #[arg(long, default_value_t = 8)]
        zorder: usize,
        #[arg(long, default_value_t = 8)]
        qorder: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GroupFamily {
    #[value(name = "U")]
    U,
    #[value(name = "SU")]
    Su,
    #[value(name = "Spin")]
    Spin,
}

impl GroupFamily {
    fn family(self) -> Family {
        match self {
            GroupFamily::U => Family::U,
            GroupFamily::Su => Family::SU,
            GroupFamily::Spin => Family::SpinEven,
        }
    }
}

#[derive(Args)]
struct EulerArgs {
    #[arg(long, value_enum)]
    group: GroupFamily,
    /// Rank of the maximal torus.
    #[arg(long)]
    n: usize,
    #[arg(long, allow_hyphen_values = true)]
    tau: String,
    /// `z1re,z1im;z2re,z2im;...`
    #[arg(long, allow_hyphen_values = true)]
    z: String,
    #[arg(long, default_value_t = 60)]
    terms: usize,
}

#[derive(Args)]
struct LooijengaArgs {
    #[arg(long, value_enum)]
    group: GroupFamily,
    #[arg(long)]
    n: usize,
    /// JSON Gram matrix, either `[[..],..]` or `{"gram": [[..],..]}`; identity if absent.
    #[arg(long)]
    gram: Option<String>,
    /// `m1,..;n1,..`
    #[arg(long, allow_hyphen_values = true)]
    shift: String,
    #[arg(long, allow_hyphen_values = true, default_value = "0.1,1.0")]
    tau: String,
    /// `z1re,z1im;...`; defaults to a fixed generic point.
    #[arg(long, allow_hyphen_values = true)]
    z: Option<String>,
    #[arg(long, default_value_t = 60)]
    terms: usize,
    #[arg(long, default_value_t = Tolerances::default().looijenga)]
    tol: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum ThomFamily {
    #[value(name = "U")]
    U,
    #[value(name = "Spin")]
    Spin,
}

#[derive(Args)]
struct ThomArgs {
    #[arg(long, value_enum)]
    group: ThomFamily,
    #[arg(long)]
    n: usize,
    /// Planes carrying a Thom factor; the rest carry shifted sigma factors.
    #[arg(long)]
    k: Option<usize>,
    /// `h1,h2;...` rationals with `0 <= h2 < 1`, one per shifted plane.
    #[arg(long, allow_hyphen_values = true, default_value = "")]
    shifts: String,
    #[arg(long, allow_hyphen_values = true)]
    tau: String,
    #[arg(long, default_value_t = 6)]
    zorder: u32,
    #[arg(long, default_value_t = 6)]
    qorder: usize,
    /// Emit the restriction to the origin instead of the full form.
    #[arg(long)]
    restrict: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum CoordinateKind {
    Additive,
    Multiplicative,
    Sigma,
    Upsilon,
}

#[derive(Args)]
struct FglArgs {
    #[arg(long, value_enum)]
    coordinate: CoordinateKind,
    /// Total degree of the law.
    #[arg(long, default_value_t = 8)]
    order: u32,
    /// q-order for sigma and upsilon coefficients.
    #[arg(long, default_value_t = 6)]
    qorder: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Sigma,
    Upsilon,
}

#[derive(Args)]
struct CubicalArgs {
    #[arg(long, allow_hyphen_values = true)]
    tau: String,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, value_enum, default_value = "sigma")]
    variant: VariantArg,
    #[arg(long, default_value_t = 60)]
    terms: usize,
    #[arg(long, default_value_t = Tolerances::default().cubical)]
    tol: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum FiniteOp {
    Pairs,
    Orbits,
    FqCheck,
    Devoto,
}

#[derive(Clone, Copy, ValueEnum)]
enum ActionArg {
    Conj,
    Sl2,
    Both,
}

#[derive(Args)]
struct FiniteArgs {
    #[arg(value_enum)]
    op: FiniteOp,
    /// JSON group file, or `builtin:<name>` (z<n>, d<m>, s3, s4, a4, q8, z2xz2, z2xz6).
    #[arg(long)]
    group: String,
    /// `zn:n,k`; trivial if absent.
    #[arg(long)]
    cocycle: Option<String>,
    #[arg(long, value_enum, default_value = "both")]
    action: ActionArg,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Cubical samples per tau.
    #[arg(long, default_value_t = 100)]
    samples: usize,
    /// q-order of the modular relation.
    #[arg(long, default_value_t = 30)]
    order: i64,
    #[arg(long, default_value_t = 60)]
    terms: usize,
    /// Group for the finite suite (file or `builtin:<name>`).
    #[arg(long)]
    group: Option<String>,
    /// `zn:n,k` for the finite suite.
    #[arg(long)]
    cocycle: Option<String>,
    /// Omit timing and timestamp fields.
    #[arg(long)]
    deterministic: bool,
    #[arg(long)]
    tol_sigma_cross: Option<f64>,
    #[arg(long)]
    tol_sigma_laws: Option<f64>,
    #[arg(long)]
    tol_looijenga: Option<f64>,
    #[arg(long)]
    tol_fgl_addition: Option<f64>,
    #[arg(long)]
    tol_cubical: Option<f64>,
}

/// Command failure: `Usage` exits 2, `Check` exits 1.
enum Failure {
    Usage(String),
    Check(Value),
}

type Outcome = Result<Value, Failure>;

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn parse_complex(s: &str) -> Result<Complex64, Failure> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [re] => re.parse().map(|r| Complex64::new(r, 0.0)).map_err(|_| usage(format!("bad complex number '{s}'"))),
        [re, im] => match (re.parse(), im.parse()) {
            (Ok(r), Ok(i)) => Ok(Complex64::new(r, i)),
            _ => Err(usage(format!("bad complex number '{s}'"))),
        },
        _ => Err(usage(format!("expected RE,IM, got '{s}'"))),
    }
}

fn parse_complex_list(s: &str) -> Result<Vec<Complex64>, Failure> {
    s.split(';').filter(|p| !p.trim().is_empty()).map(parse_complex).collect()
}

fn parse_ints(s: &str) -> Result<Vec<i64>, Failure> {
    s.split(',').filter(|p| !p.trim().is_empty()).map(|p| p.trim().parse().map_err(|_| usage(format!("bad integer '{p}'")))).collect()
}

fn tau_point(s: &str) -> Result<TauPoint, Failure> {
    TauPoint::new(parse_complex(s)?).map_err(usage)
}

fn c(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn rational_coeffs(f: &QExp<Rational>) -> Value {
    Value::Array(
        f.terms()
            .filter(|(_, v)| !v.is_zero())
            .map(|(e, v)| json!({ "exp": e, "num": v.numer().to_string(), "den": v.denom().to_string() }))
            .collect(),
    )
}

fn modular(a: &ModularArgs) -> Outcome {
    let order = a.order + 1;
    let g = a.generator.to_ascii_lowercase();
    let f: ModularForm = match g.as_str() {
        "c4" => eisenstein_qexp(4, order).map_err(usage)?,
        "c6" => eisenstein_qexp(6, order).map_err(usage)?,
        "delta" => delta_qexp(order),
        _ => match g.strip_prefix('e').and_then(|k| k.parse::<i64>().ok()) {
            Some(k) => eisenstein_qexp(k, order).map_err(usage)?,
            None => return Err(usage(format!("unknown generator '{}'", a.generator))),
        },
    };
    Ok(json!({ "weight": f.weight, "degree": f.degree, "coeffs": rational_coeffs(&f.qexp) }))
}

fn theta(a: &ThetaArgs) -> Outcome {
    if let Some(ThetaSub::Qexp { func, zorder, qorder }) = &a.sub {
        let (name, s) = match func {
            ThetaFn::Sigma => ("sigma", sigma_qexp(*zorder, *qorder)),
            ThetaFn::Witten => ("witten", witten_series(*zorder, *qorder)),
            ThetaFn::Upsilon => return Err(usage("qexp supports sigma and witten")),
        };
        let table: Vec<Value> = (0..*zorder).map(|j| json!({ "w_power": j, "coeffs": rational_coeffs(&s.coeff(j)) })).collect();
        return Ok(json!({ "fn": name, "variable": "w = 2 pi i z", "z_order": zorder, "q_order": qorder, "table": table }));
    }
    let tp = tau_point(a.tau.as_deref().ok_or_else(|| usage("--tau is required"))?)?;
    let z = parse_complex(a.z.as_deref().ok_or_else(|| usage("--z is required"))?)?;
    let v = match (a.func, a.method) {
        (ThetaFn::Sigma, Method::Product) => sigma_product(&tp, z, a.terms),
        (ThetaFn::Sigma, Method::Eisenstein) => sigma_eisenstein(&tp, z, a.zorder, a.qorder),
        (ThetaFn::Upsilon, Method::Product) => upsilon(&tp, z, a.terms),
        _ => return Err(usage("only sigma has an Eisenstein method; witten is formal (use `theta qexp`)")),
    }
    .map_err(usage)?;
    serde_json::to_value(v).map_err(usage)
}

fn group_tag(f: GroupFamily, n: usize) -> Result<GroupTag, Failure> {
    GroupTag::new(f.family(), n).map_err(usage)
}

fn euler(a: &EulerArgs) -> Outcome {
    let g = group_tag(a.group, a.n)?;
    let tp = tau_point(&a.tau)?;
    let z = parse_complex_list(&a.z)?;
    let v = euler_section(&g, &tp, &z, a.terms).map_err(usage)?;
    Ok(json!({ "value": c(v.value), "degree": v.degree, "beta_power": v.beta_power, "group": v.group }))
}

fn read_gram(path: &str) -> Result<Vec<Vec<i64>>, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{path}: {e}")))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| usage(format!("{path}: {e}")))?;
    let m = v.get("gram").cloned().unwrap_or(v);
    serde_json::from_value(m).map_err(|e| usage(format!("{path}: {e}")))
}

fn looijenga(a: &LooijengaArgs) -> Outcome {
    let g = group_tag(a.group, a.n)?;
    let level = match &a.gram {
        Some(p) => Level { gram: read_gram(p)? },
        None => Level::identity(a.n),
    };
    let (m, n) = a.shift.split_once(';').ok_or_else(|| usage("--shift must be m1,..;n1,.."))?;
    let (m, n) = (parse_ints(m)?, parse_ints(n)?);
    let tp = tau_point(&a.tau)?;
    let z = match &a.z {
        Some(s) => parse_complex_list(s)?,
        None => {
            let mut z: Vec<Complex64> = (0..a.n).map(|j| Complex64::new(0.11 + 0.07 * j as f64, 0.03 - 0.02 * j as f64)).collect();
            if g.family == Family::SU {
                let s: Complex64 = z[..a.n - 1].iter().sum();
                z[a.n - 1] = -s;
            }
            z
        }
    };
    let r = looijenga_shift_check(&g, &level, &tp, &z, &m, &n, a.terms).map_err(usage)?;
    let out = json!({ "residual": r, "threshold": a.tol, "pass": r <= a.tol, "m": m, "n": n });
    if r <= a.tol {
        Ok(out)
    } else {
        Err(Failure::Check(out))
    }
}

fn parse_shifts(s: &str) -> Result<Vec<(Rational, Rational)>, Failure> {
    s.split(';')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            let (a, b) = p.split_once(',').ok_or_else(|| usage(format!("shift '{p}' must be h1,h2")))?;
            let r = |x: &str| x.trim().parse::<Rational>().map_err(|_| usage(format!("bad rational '{x}'")));
            Ok((r(a)?, r(b)?))
        })
        .collect()
}

fn thom(a: &ThomArgs) -> Outcome {
    let k = a.k.unwrap_or(a.n);
    let shifts = parse_shifts(&a.shifts)?;
    let tau = parse_complex(&a.tau)?;
    TauPoint::new(tau).map_err(usage)?;
    let group = match a.group {
        ThomFamily::U => ThomGroup::U,
        ThomFamily::Spin => ThomGroup::SpinEven,
    };
    let conv = CartanConvention::default();
    let form = elliptic_thom_form(group, a.n, k, &shifts, a.zorder, a.qorder, &conv).map_err(usage)?;
    let note = "coefficient of pi^pi_pow beta^beta_pow z^lie, q-series evaluated at tau";
    if a.restrict {
        let res = form.restrict_origin();
        let terms: Vec<Value> = res
            .terms
            .iter()
            .map(|(key, v)| json!({ "beta_pow": key.beta_pow, "pi_pow": key.pi_pow, "lie": key.lie, "value": c(v.eval_at_tau(tau)) }))
            .collect();
        return Ok(json!({ "n": a.n, "k": k, "restricted": true, "note": note, "terms": terms }));
    }
    let terms: Vec<Value> = form
        .terms()
        .iter()
        .map(|(key, v)| {
            json!({
                "beta_pow": key.beta_pow, "pi_pow": key.pi_pow, "lie": key.lie, "coord": key.coord,
                "gauss": key.gauss, "ext": key.ext, "value": c(v.eval_at_tau(tau)),
            })
        })
        .collect();
    Ok(json!({ "n": a.n, "k": k, "restricted": false, "degree": form.degree(), "note": note, "terms": terms }))
}

fn fgl(a: &FglArgs) -> Outcome {
    let o = a.order as usize;
    let table = |law: &ecw_core::fgl::Fgl<QExp<Rational>>| -> Vec<Value> {
        law.f.terms().iter().map(|(k, v)| json!({ "x": k[0], "y": k[1], "coeffs": rational_coeffs(v) })).collect()
    };
    let (terms, residuals) = match a.coordinate {
        CoordinateKind::Additive | CoordinateKind::Multiplicative => {
            let f = if matches!(a.coordinate, CoordinateKind::Additive) { additive_coordinate(o) } else { multiplicative_coordinate(o) };
            let law = fgl_from_coordinate(&f, a.order).map_err(usage)?;
            let terms = law.f.terms().iter().map(|(k, v)| json!({ "x": k[0], "y": k[1], "num": v.numer().to_string(), "den": v.denom().to_string() })).collect();
            (terms, fgl_check(&law).map_err(usage)?)
        }
        CoordinateKind::Sigma | CoordinateKind::Upsilon => {
            let f = if matches!(a.coordinate, CoordinateKind::Sigma) { sigma_coordinate(o, a.qorder) } else { upsilon_coordinate(o, a.qorder) };
            let law = fgl_from_coordinate(&f, a.order).map_err(usage)?;
            (table(&law), fgl_check(&law).map_err(usage)?)
        }
    };
    Ok(json!({ "order": a.order, "terms": terms, "residuals": residuals }))
}

fn cubical(a: &CubicalArgs) -> Outcome {
    let tau = parse_complex(&a.tau)?;
    let variant = match a.variant {
        VariantArg::Sigma => Variant::Sigma,
        VariantArg::Upsilon => Variant::Upsilon,
    };
    let r = cubical_verify_variant(tau, a.samples, a.seed, a.terms, variant).map_err(usage)?;
    let pass = r.max_residual() <= a.tol;
    let mut v = serde_json::to_value(&r).map_err(usage)?;
    v["threshold"] = json!(a.tol);
    v["pass"] = json!(pass);
    if pass {
        Ok(v)
    } else {
        Err(Failure::Check(v))
    }
}

fn load_group(spec: &str) -> Result<GroupChoice, Failure> {
    let group = match spec.strip_prefix("builtin:") {
        Some(name) => builtin_group(name).ok_or_else(|| usage(format!("unknown built-in group '{name}'")))?,
        None => {
            let text = std::fs::read_to_string(spec).map_err(|e| usage(format!("{spec}: {e}")))?;
            FiniteGroup::from_json(&text).map_err(usage)?
        }
    };
    Ok(GroupChoice { label: spec.to_string(), group })
}

fn parse_cocycle(s: &str) -> Result<(usize, i64), Failure> {
    let rest = s.strip_prefix("zn:").ok_or_else(|| usage(format!("cocycle must be zn:n,k, got '{s}'")))?;
    let (n, k) = rest.split_once(',').ok_or_else(|| usage(format!("cocycle must be zn:n,k, got '{s}'")))?;
    match (n.trim().parse(), k.trim().parse()) {
        (Ok(n), Ok(k)) => Ok((n, k)),
        _ => Err(usage(format!("cocycle must be zn:n,k, got '{s}'"))),
    }
}

fn finite(a: &FiniteArgs) -> Outcome {
    let choice = load_group(&a.group)?;
    let g = &choice.group;
    match a.op {
        FiniteOp::Pairs => {
            let pairs = commuting_pairs(g);
            Ok(json!({ "group": choice.label, "order": g.order(), "count": pairs.len(), "pairs": pairs.iter().map(|p| [p.h1, p.h2]).collect::<Vec<_>>() }))
        }
        FiniteOp::Orbits => {
            let action = match a.action {
                ActionArg::Conj => Action::Conj,
                ActionArg::Sl2 => Action::Sl2,
                ActionArg::Both => Action::Both,
            };
            serde_json::to_value(orbit_decomposition(g, action)).map_err(usage)
        }
        FiniteOp::Devoto => serde_json::to_value(devoto_report(g)).map_err(usage),
        FiniteOp::FqCheck => {
            let l = match &a.cocycle {
                Some(s) => {
                    let (n, k) = parse_cocycle(s)?;
                    if n != g.order() {
                        return Err(usage(format!("zn:{n},{k} does not match group order {}", g.order())));
                    }
                    zn_cocycle(n, k).map_err(usage)?
                }
                None => Cocycle3::trivial(g.order()),
            };
            let cob = coboundary_check(&l, g).map_err(usage)?;
            let mut out = json!({ "group": choice.label, "coboundary": cob });
            match VerifiedCocycle::new(l, g) {
                Ok(v) => {
                    let d = fq_descent_check(&v, g);
                    let ok = d.ok;
                    out["descent"] = serde_json::to_value(d).map_err(usage)?;
                    out["pass"] = json!(ok);
                    if ok {
                        Ok(out)
                    } else {
                        Err(Failure::Check(out))
                    }
                }
                Err(e) => {
                    out["error"] = json!(e.to_string());
                    out["pass"] = json!(false);
                    Err(Failure::Check(out))
                }
            }
        }
    }
}

fn verify(a: &VerifyArgs) -> Outcome {
    let suite: Suite = a.suite.parse().map_err(usage)?;
    let mut tol = Tolerances::default();
    for (slot, v) in [
        (&mut tol.sigma_cross, a.tol_sigma_cross),
        (&mut tol.sigma_laws, a.tol_sigma_laws),
        (&mut tol.looijenga, a.tol_looijenga),
        (&mut tol.fgl_addition, a.tol_fgl_addition),
        (&mut tol.cubical, a.tol_cubical),
    ] {
        if let Some(v) = v {
            *slot = v;
        }
    }
    if a.samples == 0 {
        return Err(usage("--samples must be positive"));
    }
    let params = SuiteParams {
        seed: a.seed,
        samples: a.samples,
        order: a.order,
        n_terms: a.terms,
        group: a.group.as_deref().map(load_group).transpose()?,
        cocycle: a.cocycle.as_deref().map(parse_cocycle).transpose()?,
        tolerances: tol,
    };
    let mut report = run_suite(suite, &params);
    if a.deterministic {
        report.strip_timing();
    }
    let failed: Vec<&str> = report.failures().map(|c| c.name.as_str()).collect();
    eprintln!("{} suite '{}': {} checks, {} failed", if report.pass { "PASS" } else { "FAIL" }, suite, report.checks.len(), failed.len());
    for name in &failed {
        eprintln!("  failed: {name}");
    }
    let mut v = serde_json::to_value(&report).map_err(usage)?;
    if !a.deterministic {
        let now = std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        v["timestamp"] = json!(now);
    }
    if report.pass {
        Ok(v)
    } else {
        Err(Failure::Check(v))
    }
}

fn init_threads() -> Result<(), Failure> {
    if let Ok(s) = std::env::var("ECW_THREADS") {
        let n: usize = s.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| usage(format!("ECW_THREADS must be a positive integer, got '{s}'")))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(usage)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = init_threads().and_then(|_| match &cli.cmd {
        Command::Modular(a) => modular(a),
        Command::Theta(a) => theta(a),
        Command::Euler(a) => euler(a),
        Command::LooijengaCheck(a) => looijenga(a),
        Command::Thom(a) => thom(a),
        Command::Fgl(a) => fgl(a),
        Command::Cubical(a) => cubical(a),
        Command::Finite(a) => finite(a),
        Command::Verify(a) => verify(a),
    });
    match result {
        Ok(v) => {
            println!("{v}");
            ExitCode::SUCCESS
        }
        Err(Failure::Check(v)) => {
            println!("{v}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
