//! Deterministic verification suites. Each check reports a residual (or a
//! count of exact mismatches) against a threshold from [`Tolerances`].

use crate::cartan::{elliptic_thom_form_spin, mq_thom_form, CartanConvention, EqForm, LieSeries};
use crate::fgl::{additive_coordinate, cubical_verify, fgl_check, fgl_from_coordinate, multiplicative_coordinate, sigma_addition_residual, sigma_coordinate};
use crate::finite::{
    builtin_group, coboundary_check, commuting_pairs, conj_act, fq_descent_check, sl2_act, zn_cocycle, Cocycle3, FiniteGroup, Sl2Mod, Sl2Z,
    VerifiedCocycle,
};
use crate::loopchar::{char_lu1_qexp, char_spin2_qexp, looijenga_shift_check, spin2_char_to_w_series, Family, GroupTag, Level};
use crate::modular::{eisenstein_qexp, mf_relation_residual};
use crate::qseries::{rat, rat_int, MultiSeries, QExp, Rational, Ring, YPoly};
use crate::theta::{check_modularity, check_quasiperiodicity, eisenstein_from_sigma, sigma_eisenstein, sigma_product, sigma_qexp, TauPoint};
use crate::tolerances::Tolerances;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    All,
    Modular,
    Theta,
    Looijenga,
    Cubical,
    Thom,
    Finite,
}

impl Suite {
    pub const PARTS: [Suite; 6] = [Suite::Modular, Suite::Theta, Suite::Looijenga, Suite::Cubical, Suite::Thom, Suite::Finite];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Modular => "modular",
            Suite::Theta => "theta",
            Suite::Looijenga => "looijenga",
            Suite::Cubical => "cubical",
            Suite::Thom => "thom",
            Suite::Finite => "finite",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownSuite(pub String);

impl fmt::Display for UnknownSuite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown suite '{}' (expected all|modular|theta|looijenga|cubical|thom|finite)", self.0)
    }
}

impl std::error::Error for UnknownSuite {}

impl FromStr for Suite {
    type Err = UnknownSuite;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [Suite::All].iter().chain(Suite::PARTS.iter()).find(|x| x.name() == s).copied().ok_or_else(|| UnknownSuite(s.to_string()))
    }
}

/// A finite group chosen for the `finite` suite, with the label it came from.
#[derive(Debug, Clone)]
pub struct GroupChoice {
    pub label: String,
    pub group: FiniteGroup,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteParams {
    pub seed: u64,
    /// Cubical samples per tau.
    pub samples: usize,
    /// q-order for the modular relation.
    pub order: i64,
    /// Product factors for numeric sigma.
    pub n_terms: usize,
    #[serde(serialize_with = "ser_group")]
    pub group: Option<GroupChoice>,
    /// `(n, k)` for `zn_cocycle`.
    pub cocycle: Option<(usize, i64)>,
    pub tolerances: Tolerances,
}

fn ser_group<S: serde::Serializer>(g: &Option<GroupChoice>, s: S) -> Result<S::Ok, S::Error> {
    match g {
        Some(g) => s.serialize_some(&g.label),
        None => s.serialize_none(),
    }
}

impl Default for SuiteParams {
    fn default() -> Self {
        Self { seed: 42, samples: 100, order: 30, n_terms: 60, group: None, cocycle: None, tolerances: Tolerances::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    /// Numeric residual, or the number of failures for exact checks.
    pub residual: f64,
    pub threshold: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    pub fn residual(name: impl Into<String>, residual: f64, threshold: f64) -> Self {
        Self { name: name.into(), residual, threshold, pass: residual <= threshold, detail: None }
    }

    /// Exact check: residual is the mismatch count, threshold zero.
    pub fn exact(name: impl Into<String>, mismatches: usize) -> Self {
        Self::residual(name, mismatches as f64, 0.0)
    }

    pub fn failed(name: impl Into<String>, threshold: f64, err: impl fmt::Display) -> Self {
        Self { name: name.into(), residual: f64::INFINITY, threshold, pass: false, detail: Some(err.to_string()) }
    }

    fn with_detail(mut self, d: impl Into<String>) -> Self {
        self.detail = Some(d.into());
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub pass: bool,
    pub seed: u64,
    pub params: SuiteParams,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_s: Option<f64>,
}

impl SuiteReport {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    /// Drop timing so that reports are byte-identical across runs.
    pub fn strip_timing(&mut self) {
        self.wall_time_s = None;
    }
}

/// Run a suite. Checks run in parallel; the report is sorted by check name.
pub fn run_suite(suite: Suite, params: &SuiteParams) -> SuiteReport {
    let t0 = Instant::now();
    let parts: Vec<Suite> = if suite == Suite::All { Suite::PARTS.to_vec() } else { vec![suite] };
    let mut checks: Vec<Check> = parts.par_iter().flat_map(|s| run_part(*s, params)).collect();
    checks.sort_by(|a, b| a.name.cmp(&b.name));
    SuiteReport {
        suite,
        pass: checks.iter().all(|c| c.pass),
        seed: params.seed,
        params: params.clone(),
        checks,
        wall_time_s: Some(t0.elapsed().as_secs_f64()),
    }
}

fn run_part(s: Suite, p: &SuiteParams) -> Vec<Check> {
    match s {
        Suite::Modular => modular_checks(p),
        Suite::Theta => theta_checks(p),
        Suite::Looijenga => looijenga_checks(p),
        Suite::Cubical => cubical_checks(p),
        Suite::Thom => thom_checks(p),
        Suite::Finite => finite_checks(p),
        Suite::All => unreachable!(),
    }
}

fn nonzero_count(f: &QExp<Rational>) -> usize {
    f.coeffs().iter().filter(|c| !c.is_zero()).count()
}

/// Coefficient mismatches below `q^order`.
fn qexp_mismatches(a: &QExp<Rational>, b: &QExp<Rational>, order: i64) -> usize {
    (0..order).filter(|&n| a.coeff(n) != b.coeff(n)).count()
}

fn modular_checks(p: &SuiteParams) -> Vec<Check> {
    let name = format!("modular.c4^3-c6^2-1728delta.q{}", p.order);
    vec![match mf_relation_residual(p.order + 1) {
        Ok(r) => Check::exact(name, nonzero_count(&r)),
        Err(e) => Check::failed(name, 0.0, e),
    }]
}

/// Seeded `(tau, z)` with `Im tau` in `[0.8, 2]`, `|Re tau| <= 0.5`, `|z| <= 0.3`.
fn random_tau_z(rng: &mut ChaCha8Rng) -> (Complex64, Complex64) {
    let tau = Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(0.8..2.0));
    let z = Complex64::from_polar(rng.gen_range(0.02..0.3), rng.gen_range(0.0..std::f64::consts::TAU));
    (tau, z)
}

/// The 5x5 grid for the sigma cross-method check.
pub fn sigma_grid() -> Vec<(Complex64, Complex64)> {
    let taus = (0..5).map(|k| Complex64::new(-0.4 + 0.2 * k as f64, 0.8 + 0.3 * k as f64));
    let zs: Vec<Complex64> = (0..5).map(|k| Complex64::from_polar(0.06 * (k + 1) as f64, 0.3 + 1.3 * k as f64)).collect();
    taus.flat_map(|t| zs.iter().map(move |&z| (t, z))).collect()
}

fn theta_checks(p: &SuiteParams) -> Vec<Check> {
    let tol = &p.tolerances;
    let mut out = Vec::new();

    let cross: Result<f64, crate::theta::ThetaError> = sigma_grid()
        .par_iter()
        .map(|&(tau, z)| {
            let tp = TauPoint::new(tau)?;
            let a = sigma_product(&tp, z, p.n_terms)?.value;
            let b = sigma_eisenstein(&tp, z, 40, 60)?.value;
            Ok((a - b).norm())
        })
        .try_reduce(|| 0.0, |a, b| Ok(a.max(b)));
    out.push(match cross {
        Ok(r) => Check::residual("theta.sigma_product_vs_eisenstein.grid5x5", r, tol.sigma_cross),
        Err(e) => Check::failed("theta.sigma_product_vs_eisenstein.grid5x5", tol.sigma_cross, e),
    });

    let q_order = 16;
    let from_sigma = eisenstein_from_sigma(3, q_order);
    for (k, got) in from_sigma.iter().enumerate() {
        let weight = 2 * (k as i64 + 1);
        let name = format!("theta.eisenstein_from_log_sigma.e{weight}");
        out.push(match eisenstein_qexp(weight, q_order as i64) {
            Ok(want) => Check::exact(name, qexp_mismatches(got, &want.qexp, q_order as i64)),
            Err(e) => Check::failed(name, 0.0, e),
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let points: Vec<(Complex64, Complex64)> = (0..20).map(|_| random_tau_z(&mut rng)).collect();
    let laws: Result<[f64; 4], crate::theta::ThetaError> = points
        .par_iter()
        .map(|&(tau, z)| {
            let tp = TauPoint::new(tau)?;
            let q = check_quasiperiodicity(&tp, z, p.n_terms)?;
            let s = check_modularity(&tp, z, &Sl2Z::S, p.n_terms)?;
            let t = check_modularity(&tp, z, &Sl2Z::T, p.n_terms)?;
            Ok([q.res_shift1, q.res_shift_tau, s, t])
        })
        .try_reduce(|| [0.0; 4], |a, b| Ok([0, 1, 2, 3].map(|i| a[i].max(b[i]))));
    let names = ["theta.sigma_shift_1", "theta.sigma_shift_tau", "theta.sigma_modular_S", "theta.sigma_modular_T"];
    match laws {
        Ok(r) => out.extend(names.iter().zip(r).map(|(n, v)| Check::residual(*n, v, tol.sigma_laws).with_detail("max over 20 seeded points"))),
        Err(e) => out.extend(names.iter().map(|n| Check::failed(*n, tol.sigma_laws, &e))),
    }
    out
}

/// Mismatching coefficients of `char_lu1 + y^{1/2} char_spin2` below `q^order`.
pub fn lu1_spin2_mismatches(order: i64) -> usize {
    let lu1 = char_lu1_qexp(order);
    let spin = char_spin2_qexp(order).scale_by(&YPoly::y_pow(1, 0, 1).neg());
    (0..order).filter(|&n| lu1.coeff(n) != spin.coeff(n)).count()
}

/// Mismatching `(w^j, q^n)` coefficients of `char_spin2 / prod (1 - q^n)^2`
/// against `sigma_qexp`.
pub fn spin2_sigma_mismatches(z_order: usize, order: i64) -> usize {
    let lhs = spin2_char_to_w_series(&char_spin2_qexp(order), z_order);
    let rhs = sigma_qexp(z_order, order as usize);
    (0..z_order).map(|j| qexp_mismatches(&lhs.coeff(j), &rhs.coeff(j), order)).sum()
}

/// Seeded lattice vector of `group` with entries in `-2..=2`.
fn random_lattice_vector(rng: &mut ChaCha8Rng, group: &GroupTag) -> Vec<i64> {
    loop {
        let mut v: Vec<i64> = (0..group.n).map(|_| rng.gen_range(-2..=2)).collect();
        if group.family == Family::SU {
            let s: i64 = v[..group.n - 1].iter().sum();
            v[group.n - 1] = -s;
        }
        if group.in_lattice(&v) {
            return v;
        }
    }
}

fn random_point(rng: &mut ChaCha8Rng, group: &GroupTag) -> Vec<Complex64> {
    let mut z: Vec<Complex64> = (0..group.n).map(|_| Complex64::new(rng.gen_range(-0.4..0.4), rng.gen_range(-0.3..0.3))).collect();
    if group.family == Family::SU {
        let s: Complex64 = z[..group.n - 1].iter().sum();
        z[group.n - 1] = -s;
    }
    z
}

/// Max relative Looijenga residual over seeded samples.
pub fn looijenga_samples(group: &GroupTag, level: &Level, samples: usize, seed: u64, n_terms: usize) -> Result<f64, crate::loopchar::LoopError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tp = TauPoint::new(Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(0.8..1.5)))?;
    let draws: Vec<(Vec<Complex64>, Vec<i64>, Vec<i64>)> =
        (0..samples).map(|_| (random_point(&mut rng, group), random_lattice_vector(&mut rng, group), random_lattice_vector(&mut rng, group))).collect();
    draws
        .par_iter()
        .map(|(z, m, n)| looijenga_shift_check(group, level, &tp, z, m, n, n_terms))
        .try_reduce(|| 0.0, |a, b| Ok(a.max(b)))
}

fn looijenga_checks(p: &SuiteParams) -> Vec<Check> {
    let tol = p.tolerances.looijenga;
    let mut out = vec![
        Check::exact("looijenga.char_lu1_eq_minus_sqrt_y_char_spin2.q12", lu1_spin2_mismatches(13)),
        Check::exact("looijenga.char_spin2_over_eta_sq_eq_sigma_qexp.q12", spin2_sigma_mismatches(10, 13)),
    ];
    let spin4 = GroupTag::new(Family::SpinEven, 2).expect("Spin(4)");
    let su2 = GroupTag::new(Family::SU, 2).expect("SU(2)");
    for (label, g) in [("spin4", spin4), ("su2", su2)] {
        let name = format!("looijenga.{label}.shift");
        out.push(match looijenga_samples(&g, &Level::identity(2), 10, p.seed, p.n_terms) {
            Ok(r) => Check::residual(name, r, tol).with_detail("max over 10 seeded samples"),
            Err(e) => Check::failed(name, tol, e),
        });
    }
    let tp = TauPoint::new(Complex64::new(0.1, 1.0)).expect("tau");
    let z = [Complex64::new(0.13, 0.05), Complex64::new(-0.21, 0.02)];
    let name = "looijenga.spin4.zero_shift";
    out.push(match looijenga_shift_check(&spin4, &Level::identity(2), &tp, &z, &[0, 0], &[0, 0], p.n_terms) {
        Ok(r) => Check::residual(name, r, 0.0),
        Err(e) => Check::failed(name, 0.0, e),
    });
    out
}

fn cubical_checks(p: &SuiteParams) -> Vec<Check> {
    let tol = &p.tolerances;
    let mut out = Vec::new();
    let x = MultiSeries::<Rational>::var(2, 12, 0);
    let y = MultiSeries::<Rational>::var(2, 12, 1);
    match fgl_from_coordinate(&additive_coordinate(12), 12) {
        Ok(l) => out.push(Check::exact("fgl.additive.x+y.o12", usize::from(l.f != x.add(&y)))),
        Err(e) => out.push(Check::failed("fgl.additive.x+y.o12", 0.0, e)),
    }
    match fgl_from_coordinate(&multiplicative_coordinate(12), 12) {
        Ok(l) => out.push(Check::exact("fgl.multiplicative.x+y-xy.o12", usize::from(l.f != x.add(&y).sub(&x.mul(&y))))),
        Err(e) => out.push(Check::failed("fgl.multiplicative.x+y-xy.o12", 0.0, e)),
    }
    match fgl_from_coordinate(&sigma_coordinate(10, 8), 10) {
        Ok(law) => {
            match fgl_check(&law) {
                Ok(r) => {
                    out.push(Check::residual("fgl.sigma.unit.o10", r.unit_res, 0.0));
                    out.push(Check::residual("fgl.sigma.commutativity.o10", r.comm_res, 0.0));
                    out.push(Check::residual("fgl.sigma.associativity.o10", r.assoc_res, 0.0));
                }
                Err(e) => out.push(Check::failed("fgl.sigma.axioms.o10", 0.0, e)),
            }
        }
        Err(e) => out.push(Check::failed("fgl.sigma.axioms.o10", 0.0, e)),
    }
    let name = "fgl.sigma.addition_oracle";
    let addition = fgl_from_coordinate(&sigma_coordinate(12, 8), 12).map_err(|e| e.to_string()).and_then(|law| {
        let tp = TauPoint::new(Complex64::new(0.0, 1.0)).map_err(|e| e.to_string())?;
        sigma_addition_residual(&law, &tp, Complex64::new(0.05, 0.0), Complex64::new(0.07, 0.0), p.n_terms).map_err(|e| e.to_string())
    });
    out.push(match addition {
        Ok(r) => Check::residual(name, r, tol.fgl_addition),
        Err(e) => Check::failed(name, tol.fgl_addition, e),
    });

    for (label, tau) in [("tau=i", Complex64::new(0.0, 1.0)), ("tau=0.3+1.1i", Complex64::new(0.3, 1.1))] {
        match cubical_verify(tau, p.samples, p.seed, p.n_terms) {
            Ok(r) => {
                let detail = format!("{} samples, {} redrawn", r.samples, r.rejected);
                for (k, v) in [
                    ("rigid", r.rigid),
                    ("symmetric", r.symmetric),
                    ("cocycle", r.cocycle),
                    ("sigma_eq_upsilon", r.sigma_upsilon),
                    ("string", r.string),
                    ("sl2_S", r.sl2_s),
                    ("sl2_T", r.sl2_t),
                ] {
                    out.push(Check::residual(format!("cubical.{label}.{k}"), v, tol.cubical).with_detail(detail.clone()));
                }
            }
            Err(e) => out.push(Check::failed(format!("cubical.{label}"), tol.cubical, e)),
        }
    }
    out
}

fn rand_rat(rng: &mut ChaCha8Rng) -> Rational {
    rat(rng.gen_range(-5..=5), rng.gen_range(1..=3))
}

/// Random rotation-invariant form on `n` planes.
pub fn random_invariant_form(rng: &mut ChaCha8Rng, n: usize) -> EqForm<Rational> {
    type F = EqForm<Rational>;
    let w = |a: &F, b: &F| a.wedge(b).expect("same planes");
    let mut f = F::zero(n);
    for _ in 0..rng.gen_range(1..5) {
        let mut t = F::constant(n, rand_rat(rng));
        for _ in 0..rng.gen_range(0..4) {
            let j = rng.gen_range(0..n);
            let (x, y) = (F::coord(n, 2 * j), F::coord(n, 2 * j + 1));
            let (dx, dy) = (F::dcoord(n, 2 * j), F::dcoord(n, 2 * j + 1));
            let g = match rng.gen_range(0..7) {
                0 => w(&x, &x).add(&w(&y, &y)),
                1 => Ok(w(&dx, &dy)),
                2 => w(&x, &dx).add(&w(&y, &dy)),
                3 => w(&x, &dy).sub(&w(&y, &dx)),
                4 => Ok(F::gaussian(n, j, 1)),
                5 => Ok(F::lie_var(n, j)),
                _ => Ok(F::beta(n, -1)),
            }
            .expect("same planes");
            t = w(&t, &g);
        }
        f = f.add(&t).expect("same planes");
    }
    f
}

/// Mismatches between the restriction of the spin elliptic Thom form on one
/// plane and `sigma / (2 pi i)` from `sigma_qexp`, through `z^{z_order - 1}`.
pub fn thom_restriction_mismatches(z_order: u32, q_order: usize, conv: &CartanConvention) -> usize {
    let res = elliptic_thom_form_spin(1, z_order, q_order, conv).restrict_origin();
    let s = sigma_qexp(z_order as usize, q_order);
    let mut bad = 0;
    for j in 0..z_order as usize {
        // w = 2 pi i z: the z^j coefficient is s_j (2i)^j pi^j / (2 pi i) = s_j (2i)^{j-1} pi^{j-1}
        let got = res.coeff(-1, j as i32 - 1, &[j as u32]);
        let want = if j % 2 == 1 {
            s.coeff(j).scale_rational(&Rational::from_integer(num_bigint::BigInt::from(-4).pow(((j - 1) / 2) as u32)))
        } else {
            QExp::zero()
        };
        bad += usize::from(!got.sub(&want).is_zero());
    }
    bad
}

fn thom_checks(p: &SuiteParams) -> Vec<Check> {
    let conv = CartanConvention::default();
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let forms: Vec<EqForm<Rational>> = (0..50).map(|i| random_invariant_form(&mut rng, 1 + i % 2)).collect();
    let q2 = forms
        .par_iter()
        .filter(|f| match f.cartan_q(&conv).and_then(|q| q.cartan_q(&conv)) {
            Ok(qq) => !qq.is_zero(),
            Err(_) => true,
        })
        .count();
    let mut out = vec![Check::exact("thom.q_squared.random50", q2)];
    for n in 1..=3 {
        let u = mq_thom_form(n, &conv);
        let closed = match u.cartan_q(&conv) {
            Ok(q) => usize::from(!q.is_zero()),
            Err(_) => 1,
        };
        out.push(Check::exact(format!("thom.mq.n{n}.closed"), closed));
        let want = LieSeries::monomial(n, -(n as i32), 0, vec![1; n], rat_int(1));
        out.push(Check::exact(format!("thom.mq.n{n}.restriction"), usize::from(u.restrict_origin().terms != want.terms)));
    }
    out.push(Check::exact("thom.elliptic_spin.restriction.z7", thom_restriction_mismatches(8, 6, &conv)));
    let closed = match elliptic_thom_form_spin(1, 8, 6, &conv).cartan_q(&conv) {
        Ok(q) => usize::from(!q.is_zero()),
        Err(_) => 1,
    };
    out.push(Check::exact("thom.elliptic_spin.closed", closed));
    out
}

fn double_loop_pairs(g: &FiniteGroup) -> usize {
    let n = g.order();
    (0..n).map(|a| (0..n).filter(|&b| g.mul(a, b) == g.mul(b, a)).count()).sum()
}

/// Violations of the left-action and conjugation-commutation laws on
/// generators of `SL2(Z/N)`.
pub fn action_violations(g: &FiniteGroup) -> usize {
    let n = g.exponent() as i64;
    let gens = [Sl2Z::S, Sl2Z::T, Sl2Z::S.inverse(), Sl2Z::T.inverse()].map(|m| Sl2Mod::reduce(&m, n));
    let mut bad = 0;
    for h in commuting_pairs(g) {
        for a in &gens {
            for b in &gens {
                bad += usize::from(sl2_act(g, &a.mul(b), h) != sl2_act(g, a, sl2_act(g, b, h)));
            }
            for x in 0..g.order() {
                bad += usize::from(sl2_act(g, a, conj_act(g, x, h)) != conj_act(g, x, sl2_act(g, a, h)));
            }
        }
    }
    bad
}

fn cocycle_checks(prefix: &str, g: &FiniteGroup, l: Cocycle3) -> Vec<Check> {
    let mut out = Vec::new();
    match coboundary_check(&l, g) {
        Ok(r) => {
            let c = Check::exact(format!("{prefix}.coboundary"), usize::from(!r.ok));
            out.push(match r.violation {
                Some(q) => c.with_detail(format!("violation at {q:?}")),
                None => c,
            });
        }
        Err(e) => out.push(Check::failed(format!("{prefix}.coboundary"), 0.0, e)),
    }
    match VerifiedCocycle::new(l, g) {
        Ok(v) => {
            let r = fq_descent_check(&v, g);
            let c = Check::exact(format!("{prefix}.fq_descent"), usize::from(!r.ok));
            out.push(match r.violation {
                Some(q) => c.with_detail(format!("violation at {q:?}")),
                None => c,
            });
        }
        Err(e) => out.push(Check::failed(format!("{prefix}.fq_descent"), 0.0, e)),
    }
    out
}

fn group_checks(label: &str, g: &FiniteGroup) -> Vec<Check> {
    let pairs = commuting_pairs(g).len();
    vec![
        Check::exact(format!("finite.{label}.pair_count"), pairs.abs_diff(double_loop_pairs(g))).with_detail(format!("{pairs} pairs")),
        Check::exact(format!("finite.{label}.sl2_action"), action_violations(g)),
    ]
}

fn finite_checks(p: &SuiteParams) -> Vec<Check> {
    if let Some(choice) = &p.group {
        let g = &choice.group;
        let mut out = group_checks(&choice.label, g);
        let l = match p.cocycle {
            Some((n, k)) if n == g.order() => zn_cocycle(n, k),
            Some((n, _)) => Err(crate::finite::FiniteError::OrderMismatch { cochain: n, group: g.order() }),
            None => Ok(Cocycle3::trivial(g.order())),
        };
        let prefix = format!("finite.{}.cocycle", choice.label);
        match l {
            Ok(l) => out.extend(cocycle_checks(&prefix, g, l)),
            Err(e) => out.push(Check::failed(prefix, 0.0, e)),
        }
        return out;
    }
    let names = ["z2", "z3", "z4", "z5", "z6", "s3", "d4", "q8", "z2xz2", "a4", "d6", "z2xz6"];
    let mut out: Vec<Check> = names.par_iter().flat_map(|n| group_checks(n, &builtin_group(n).expect("built-in"))).collect();
    for (name, want) in [("z2", 4), ("s3", 18), ("q8", 40)] {
        let got = commuting_pairs(&builtin_group(name).expect("built-in")).len();
        out.push(Check::exact(format!("finite.{name}.pair_count_expected"), got.abs_diff(want)));
    }
    let zn: Vec<Check> = (2..=6usize)
        .into_par_iter()
        .flat_map(|n| {
            let g = FiniteGroup::cyclic(n);
            (0..n as i64).flat_map(|k| cocycle_checks(&format!("finite.z{n}.zn_cocycle_k{k}"), &g, zn_cocycle(n, k).expect("n >= 2"))).collect::<Vec<_>>()
        })
        .collect();
    out.extend(zn);
    let q8 = FiniteGroup::quaternion();
    let phi = [0, 0, 0, 0, 1, 1, 1, 1];
    let pulled = zn_cocycle(2, 1).expect("n = 2").pullback(&phi);
    out.extend(cocycle_checks("finite.q8.pullback_z2", &q8, pulled));
    out
}
