//! Formal group laws from coordinates, and the cubical structure of the
//! sigma line.
//!
//! The cubical section is built from the normalized factor
//! `sigma~(a) = sigma(a) / (sigma'(0) a)`, so the `sigma(tau, 0)` entry of the
//! cube ratio reads as `sigma~(0) = 1` and the linear parts cancel.

use crate::finite::Sl2Z;
use crate::qseries::{rat, rat_int, BiSeries, MultiSeries, PowerSeries, QExp, QSeriesError, Rational, Ring};
use crate::theta::{sigma_normalized_ratio, sigma_qexp, TauPoint, ThetaError};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FglError {
    #[error(transparent)]
    Series(#[from] QSeriesError),
    #[error(transparent)]
    Theta(#[from] ThetaError),
    #[error("factor {factor} is within {distance:e} of a nonzero lattice point")]
    Pole { factor: &'static str, distance: f64 },
    #[error("at least one sample is required")]
    NoSamples,
}

/// `F(x, y)` known below total degree `order`.
#[derive(Debug, Clone, PartialEq)]
pub struct Fgl<R> {
    pub f: BiSeries<R>,
    pub order: u32,
}

impl<R: Ring> Fgl<R> {
    /// `F(a, b)` for series `a`, `b` in a common set of variables.
    pub fn apply(&self, a: &MultiSeries<R>, b: &MultiSeries<R>) -> Result<MultiSeries<R>, QSeriesError> {
        self.f.substitute(&[a.clone(), b.clone()])
    }
}

/// `F(x, y) = f(f^{-1}(x) + f^{-1}(y))`.
pub fn fgl_from_coordinate<R: Ring>(f: &PowerSeries<R>, order: u32) -> Result<Fgl<R>, QSeriesError> {
    let f = f.truncate(order as usize);
    let g = f.revert()?;
    let x = MultiSeries::var(2, order, 0);
    let y = MultiSeries::var(2, order, 1);
    let sum = x.compose_into(&g)?.add(&y.compose_into(&g)?);
    let big_f = sum.compose_into(&f)?;
    let order = big_f.order();
    Ok(Fgl { f: big_f, order })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Coordinate {
    Additive,
    Multiplicative,
    Sigma,
    Upsilon,
}

/// `f(x) = x`.
pub fn additive_coordinate(order: usize) -> PowerSeries<Rational> {
    PowerSeries::var(order)
}

/// `f(x) = 1 - e^{-x}`.
pub fn multiplicative_coordinate(order: usize) -> PowerSeries<Rational> {
    let mut c = vec![rat_int(0); order];
    let mut t = rat_int(1);
    for (k, slot) in c.iter_mut().enumerate().skip(1) {
        t = t / rat_int(k as i64);
        *slot = if k % 2 == 1 { t.clone() } else { -t.clone() };
    }
    PowerSeries::new(c)
}

/// `sigma` in `w = 2 pi i z`, coefficients exact q-series.
pub fn sigma_coordinate(order: usize, q_order: usize) -> PowerSeries<QExp<Rational>> {
    sigma_qexp(order, q_order)
}

/// `upsilon = -e^{w/2} sigma`.
pub fn upsilon_coordinate(order: usize, q_order: usize) -> PowerSeries<QExp<Rational>> {
    let mut e = Vec::with_capacity(order);
    let mut t = rat_int(-1);
    for k in 0..order {
        if k > 0 {
            t = t * rat(1, 2 * k as i64);
        }
        e.push(QExp::constant(t.clone()));
    }
    PowerSeries::new(e).mul(&sigma_qexp(order, q_order))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FglResiduals {
    pub unit_res: f64,
    pub comm_res: f64,
    pub assoc_res: f64,
}

impl FglResiduals {
    pub fn max(&self) -> f64 {
        self.unit_res.max(self.comm_res).max(self.assoc_res)
    }
}

pub fn fgl_check<R: Ring>(law: &Fgl<R>) -> Result<FglResiduals, QSeriesError> {
    let o = law.order;
    let x = MultiSeries::var(2, o, 0);
    let y = MultiSeries::var(2, o, 1);
    let zero = MultiSeries::zero(2, o);
    let unit_x = law.apply(&x, &zero)?.sub(&x);
    let unit_y = law.apply(&zero, &y)?.sub(&y);
    let unit_res = unit_x.max_magnitude().max(unit_y.max_magnitude());
    let comm_res = law.f.sub(&law.f.swap_vars(0, 1)).max_magnitude();
    let a = MultiSeries::var(3, o, 0);
    let b = MultiSeries::var(3, o, 1);
    let c = MultiSeries::var(3, o, 2);
    let left = law.apply(&law.apply(&a, &b)?, &c)?;
    let right = law.apply(&a, &law.apply(&b, &c)?)?;
    Ok(FglResiduals { unit_res, comm_res, assoc_res: left.sub(&right).max_magnitude() })
}

/// Residual of `F_{g o f}(x, y) = g(F_f(g^{-1} x, g^{-1} y))`.
pub fn conjugation_residual<R: Ring>(f: &PowerSeries<R>, g: &PowerSeries<R>, order: u32) -> Result<f64, QSeriesError> {
    let gf = g.compose(f)?;
    let lhs = fgl_from_coordinate(&gf, order)?;
    let base = fgl_from_coordinate(f, order)?;
    let ginv = g.truncate(order as usize).revert()?;
    let x = MultiSeries::var(2, order, 0).compose_into(&ginv)?;
    let y = MultiSeries::var(2, order, 1).compose_into(&ginv)?;
    let rhs = base.apply(&x, &y)?.compose_into(&g.truncate(order as usize))?;
    Ok(lhs.f.sub(&rhs).max_magnitude())
}

/// Evaluate a law with q-series coefficients at `(tau, x, y)`.
pub fn eval_fgl(law: &Fgl<QExp<Rational>>, tau: Complex64, x: Complex64, y: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, c) in law.f.terms() {
        acc += c.eval_at_tau(tau) * x.powu(k[0]) * y.powu(k[1]);
    }
    acc
}

/// `|F(sigma(z1), sigma(z2)) - sigma(z1 + z2)|` with the literal numeric sigma.
pub fn sigma_addition_residual(
    law: &Fgl<QExp<Rational>>,
    tp: &TauPoint,
    z1: Complex64,
    z2: Complex64,
    n_terms: usize,
) -> Result<f64, ThetaError> {
    let s = |z| crate::theta::sigma_product(tp, z, n_terms).map(|v| v.value);
    let lhs = eval_fgl(law, tp.tau(), s(z1)?, s(z2)?);
    Ok((lhs - s(z1 + z2)?).norm())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Sigma,
    Upsilon,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CubicalSample {
    pub tau: TauPoint,
    pub x: Complex64,
    pub y: Complex64,
    pub z: Complex64,
    pub variant: Variant,
}

/// Distance from `a` to the nearest nonzero lattice point `m + n tau`.
fn nonzero_lattice_distance(tp: &TauPoint, a: Complex64) -> f64 {
    let t = tp.tau();
    let n0 = (a.im / t.im).round() as i64;
    let mut best = f64::INFINITY;
    for n in n0 - 1..=n0 + 1 {
        let r = a - t * n as f64;
        let m0 = r.re.round() as i64;
        for m in m0 - 1..=m0 + 1 {
            if m == 0 && n == 0 {
                continue;
            }
            best = best.min((r - m as f64).norm());
        }
    }
    best
}

const POLE_TOL: f64 = 1e-8;

fn normalized_factor(tp: &TauPoint, a: Complex64, variant: Variant, n_terms: usize) -> Complex64 {
    let s = sigma_normalized_ratio(tp, a, n_terms);
    match variant {
        Variant::Sigma => s,
        Variant::Upsilon => (Complex64::new(0.0, PI) * a).exp() * s,
    }
}

/// `sigma(x+y) sigma(x+z) sigma(y+z) sigma(0) / (sigma(x+y+z) sigma(x) sigma(y) sigma(z))`
/// with every factor normalized by its linear term.
pub fn cubical_s(sample: &CubicalSample, n_terms: usize) -> Result<Complex64, FglError> {
    let (x, y, z) = (sample.x, sample.y, sample.z);
    let args: [(&'static str, Complex64); 7] =
        [("x", x), ("y", y), ("z", z), ("x+y", x + y), ("x+z", x + z), ("y+z", y + z), ("x+y+z", x + y + z)];
    for (name, a) in args {
        let d = nonzero_lattice_distance(&sample.tau, a);
        if d < POLE_TOL {
            return Err(FglError::Pole { factor: name, distance: d });
        }
    }
    let f = |a| normalized_factor(&sample.tau, a, sample.variant, n_terms);
    Ok(f(x + y) * f(x + z) * f(y + z) / (f(x + y + z) * f(x) * f(y) * f(z)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CubicalReport {
    pub tau: [f64; 2],
    pub variant: Variant,
    pub samples: usize,
    pub seed: u64,
    pub n_terms: usize,
    pub rejected: usize,
    pub rigid: f64,
    pub symmetric: f64,
    pub cocycle: f64,
    pub sigma_upsilon: f64,
    pub string: f64,
    pub sl2_s: f64,
    pub sl2_t: f64,
}

impl CubicalReport {
    pub fn max_residual(&self) -> f64 {
        [self.rigid, self.symmetric, self.cocycle, self.sigma_upsilon, self.string, self.sl2_s, self.sl2_t]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

/// Margin from nonzero lattice points used when drawing random samples.
const SAMPLE_MARGIN: f64 = 0.05;

#[derive(Debug, Clone, Copy)]
struct Draw {
    w: Complex64,
    x: Complex64,
    y: Complex64,
    z: Complex64,
}

fn draw_ok(tp: &TauPoint, d: &Draw) -> bool {
    let Draw { w, x, y, z } = *d;
    let args = [
        w, x, y, z,
        x + y, x + z, y + z, x + y + z,
        w + x, w + x + y, w + x + z, w + y, w + z, w + x + y + z,
        x + y + z, -x - y,
    ];
    let gammas = [Sl2Z::S, Sl2Z::T];
    args.iter().all(|&a| {
        nonzero_lattice_distance(tp, a) > SAMPLE_MARGIN
            && gammas.iter().all(|g| match tp.act(g) {
                Ok(gt) => nonzero_lattice_distance(&gt, a / tp.automorphy(g)) > SAMPLE_MARGIN * 0.5,
                Err(_) => false,
            })
    })
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

#[derive(Debug, Clone, Copy, Default)]
struct SampleResiduals {
    rigid: f64,
    symmetric: f64,
    cocycle: f64,
    sigma_upsilon: f64,
    string: f64,
    sl2_s: f64,
    sl2_t: f64,
}

fn evaluate_draw(tp: &TauPoint, d: &Draw, n_terms: usize, v: Variant) -> Result<SampleResiduals, FglError> {
    let s = |tp: &TauPoint, x, y, z, variant| cubical_s(&CubicalSample { tau: *tp, x, y, z, variant }, n_terms);
    let Draw { w, x, y, z } = *d;
    let base = s(tp, x, y, z, v)?;
    let eps = x / x.norm() * 1e-4;
    let rigid = (s(tp, eps, eps, eps, v)? - 1.0).norm();
    let perms = [(x, z, y), (y, x, z), (y, z, x), (z, x, y), (z, y, x)];
    let mut symmetric: f64 = 0.0;
    for (a, b, c) in perms {
        symmetric = symmetric.max(rel(s(tp, a, b, c, v)?, base));
    }
    let lhs = s(tp, w + x, y, z, v)? * s(tp, w, x, z, v)?;
    let rhs = s(tp, w, x + y, z, v)? * base;
    let cocycle = rel(lhs, rhs);
    let other = match v {
        Variant::Sigma => Variant::Upsilon,
        Variant::Upsilon => Variant::Sigma,
    };
    let sigma_upsilon = rel(s(tp, x, y, z, other)?, base);
    let string = (s(tp, x, y, -x - y, v)? - 1.0).norm();
    let sl2 = |g: &Sl2Z| -> Result<f64, FglError> {
        let j = tp.automorphy(g);
        let gt = tp.act(g)?;
        Ok(rel(s(&gt, x / j, y / j, z / j, v)?, base))
    };
    Ok(SampleResiduals { rigid, symmetric, cocycle, sigma_upsilon, string, sl2_s: sl2(&Sl2Z::S)?, sl2_t: sl2(&Sl2Z::T)? })
}

/// Random sample coordinate with real part in `[-0.45, 0.45]` and imaginary
/// part in `[-0.45, 0.45] * Im tau`.
fn draw_point(rng: &mut ChaCha8Rng, tp: &TauPoint) -> Complex64 {
    let re = rng.gen_range(-0.45..0.45);
    let im = rng.gen_range(-0.45..0.45) * tp.tau().im;
    Complex64::new(re, im)
}

pub fn cubical_verify(tau: Complex64, samples: usize, seed: u64, n_terms: usize) -> Result<CubicalReport, FglError> {
    cubical_verify_variant(tau, samples, seed, n_terms, Variant::Sigma)
}

/// [`cubical_verify`] with `variant` as the base section; `sigma_upsilon`
/// then compares against the other variant.
pub fn cubical_verify_variant(tau: Complex64, samples: usize, seed: u64, n_terms: usize, variant: Variant) -> Result<CubicalReport, FglError> {
    if samples == 0 {
        return Err(FglError::NoSamples);
    }
    let tp = TauPoint::new(tau)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draws = Vec::with_capacity(samples);
    let mut rejected = 0;
    while draws.len() < samples {
        let d = Draw {
            w: draw_point(&mut rng, &tp),
            x: draw_point(&mut rng, &tp),
            y: draw_point(&mut rng, &tp),
            z: draw_point(&mut rng, &tp),
        };
        if draw_ok(&tp, &d) {
            draws.push(d);
        } else {
            rejected += 1;
        }
    }
    let results: Vec<Result<SampleResiduals, FglError>> = draws.par_iter().map(|d| evaluate_draw(&tp, d, n_terms, variant)).collect();
    let mut acc = SampleResiduals::default();
    for r in results {
        let r = r?;
        acc.rigid = acc.rigid.max(r.rigid);
        acc.symmetric = acc.symmetric.max(r.symmetric);
        acc.cocycle = acc.cocycle.max(r.cocycle);
        acc.sigma_upsilon = acc.sigma_upsilon.max(r.sigma_upsilon);
        acc.string = acc.string.max(r.string);
        acc.sl2_s = acc.sl2_s.max(r.sl2_s);
        acc.sl2_t = acc.sl2_t.max(r.sl2_t);
    }
    Ok(CubicalReport {
        tau: [tau.re, tau.im],
        variant,
        samples,
        seed,
        n_terms,
        rejected,
        rigid: acc.rigid,
        symmetric: acc.symmetric,
        cocycle: acc.cocycle,
        sigma_upsilon: acc.sigma_upsilon,
        string: acc.string,
        sl2_s: acc.sl2_s,
        sl2_t: acc.sl2_t,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn additive_is_sum() {
        let law = fgl_from_coordinate(&additive_coordinate(8), 8).unwrap();
        let want = MultiSeries::var(2, 8, 0).add(&MultiSeries::var(2, 8, 1));
        assert_eq!(law.f, want);
    }

    #[test]
    fn multiplicative_closed_form() {
        let law = fgl_from_coordinate(&multiplicative_coordinate(12), 12).unwrap();
        let x = MultiSeries::<Rational>::var(2, 12, 0);
        let y = MultiSeries::var(2, 12, 1);
        assert_eq!(law.f, x.add(&y).sub(&x.mul(&y)));
        assert_eq!(fgl_check(&law).unwrap().max(), 0.0);
    }

    #[test]
    fn pole_rejected() {
        let tp = TauPoint::new(Complex64::new(0.0, 1.0)).unwrap();
        let smp = CubicalSample {
            tau: tp,
            x: Complex64::new(1.0, 0.0),
            y: Complex64::new(0.1, 0.0),
            z: Complex64::new(0.2, 0.0),
            variant: Variant::Sigma,
        };
        assert!(matches!(cubical_s(&smp, 30), Err(FglError::Pole { factor: "x", .. })));
    }

    #[test]
    fn cube_small_batch() {
        let r = cubical_verify(Complex64::new(0.0, 1.0), 5, 1, 40).unwrap();
        assert!(r.max_residual() < 1e-9, "{r:?}");
    }
}
