//! Weierstrass-type sigma and upsilon functions.
//!
//! Conventions: `q = e^{2 pi i tau}`, `y = e^{2 pi i z}`, and `y^{1/2}` is
//! always `e^{pi i z}` computed from `z` directly.
//!
//! The numeric `sigma_product` is the literal product
//! `(y^{1/2} - y^{-1/2}) prod (1 - q^n y)(1 - q^n / y) / (1 - q^n)^2`,
//! whose derivative at `z = 0` is `2 pi i`. The Eisenstein route reproduces
//! it as
//!
//! ```text
//! sigma(tau, z) = 2 pi i z exp( - sum_{k>=1} G_{2k}(tau) z^{2k} / (2k) )
//! ```
//!
//! with `G_{2k} = 2 zeta(2k) e_{2k}` the raw lattice sums (`G_2` taken in its
//! holomorphic q-expansion form). Formal expansions use `w = 2 pi i z`, in
//! which every coefficient is a rational q-series:
//!
//! ```text
//! sigma = w exp( sum_{k>=1} B_{2k} e_{2k}(q) w^{2k} / (2k (2k)!) )
//! ```
//!
//! The coefficient of `w^j` is the coefficient of `z^j` of the normalized
//! function `sigma / (2 pi i)` divided by `(2 pi i)^{j-1}`.

use crate::finite::Sl2Z;
use crate::modular::{eisenstein_qexp, raw_factor};
use crate::qseries::{bernoulli_numbers, factorial, rat_int, rat_to_f64, PowerSeries, QExp, Rational, Ring};
use num_complex::Complex64;
use serde::Serialize;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ThetaError {
    #[error("tau must lie in the upper half-plane, got {0}")]
    NotInUpperHalfPlane(Complex64),
    #[error("at least one product term is required")]
    NoTerms,
    #[error("z-series does not converge: term {index} has size {size:e}")]
    Divergent { index: usize, size: f64 },
    #[error("product and exponential forms of upsilon disagree: relative residual {0:e}")]
    Consistency(f64),
    #[error("germ extraction needs k_max >= 0 and radius > 0")]
    BadGermRequest,
}

/// A point of the upper half-plane together with `q = e^{2 pi i tau}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TauPoint {
    tau: Complex64,
    q: Complex64,
}

impl TauPoint {
    pub fn new(tau: Complex64) -> Result<Self, ThetaError> {
        if !(tau.im > 0.0) || !tau.re.is_finite() || !tau.im.is_finite() {
            return Err(ThetaError::NotInUpperHalfPlane(tau));
        }
        Ok(Self { tau, q: (Complex64::new(0.0, 2.0 * PI) * tau).exp() })
    }

    pub fn tau(&self) -> Complex64 {
        self.tau
    }

    pub fn q(&self) -> Complex64 {
        self.q
    }

    /// `gamma . tau = (a tau + b) / (c tau + d)`.
    pub fn act(&self, g: &Sl2Z) -> Result<Self, ThetaError> {
        let num = self.tau * g.a as f64 + g.b as f64;
        let den = self.tau * g.c as f64 + g.d as f64;
        Self::new(num / den)
    }

    /// `c tau + d`.
    pub fn automorphy(&self, g: &Sl2Z) -> Complex64 {
        self.tau * g.c as f64 + g.d as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Product,
    Eisenstein,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
pub struct Truncation {
    pub product_terms: Option<usize>,
    pub z_order: Option<usize>,
    pub q_order: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThetaValue {
    pub value: Complex64,
    pub method: Method,
    pub truncation: Truncation,
    /// Estimated truncation error.
    pub error_bound: f64,
    /// For `upsilon`: relative difference between its two formulas.
    pub consistency_residual: Option<f64>,
}

fn two_pi_i() -> Complex64 {
    Complex64::new(0.0, 2.0 * PI)
}

/// `prod_{n=1}^{N} (1 - q^n y)(1 - q^n / y) / (1 - q^n)^2`, with `y` and
/// `1/y` computed by separate exponentials.
fn theta_tail_product(tp: &TauPoint, z: Complex64, n_terms: usize) -> Complex64 {
    let y = (two_pi_i() * z).exp();
    let yi = (-two_pi_i() * z).exp();
    let mut acc = Complex64::new(1.0, 0.0);
    let mut qn = Complex64::new(1.0, 0.0);
    for _ in 0..n_terms {
        qn *= tp.q;
        let one_minus = Complex64::new(1.0, 0.0) - qn;
        let num = (Complex64::new(1.0, 0.0) - qn * y) * (Complex64::new(1.0, 0.0) - qn * yi);
        acc *= num / (one_minus * one_minus);
    }
    acc
}

/// Geometric estimate of the relative error from dropping factors `n > N`.
fn product_tail_bound(tp: &TauPoint, z: Complex64, n_terms: usize) -> f64 {
    let aq = tp.q.norm();
    let m = (2.0 * PI * z.im).exp().max((-2.0 * PI * z.im).exp());
    let t = 2.0 * (m + 2.0) * aq.powi(n_terms as i32 + 1) / (1.0 - aq).powi(3);
    t.exp_m1()
}

/// Literal product form of sigma.
pub fn sigma_product(tp: &TauPoint, z: Complex64, n_terms: usize) -> Result<ThetaValue, ThetaError> {
    if n_terms == 0 {
        return Err(ThetaError::NoTerms);
    }
    let half = Complex64::new(0.0, PI) * z;
    let pre = half.exp() - (-half).exp();
    let value = pre * theta_tail_product(tp, z, n_terms);
    Ok(ThetaValue {
        value,
        method: Method::Product,
        truncation: Truncation { product_terms: Some(n_terms), ..Default::default() },
        error_bound: value.norm() * product_tail_bound(tp, z, n_terms),
        consistency_residual: None,
    })
}

/// `sin(x) / x`, stable near zero.
fn sinc(x: Complex64) -> Complex64 {
    if x.norm() < 1e-4 {
        let x2 = x * x;
        Complex64::new(1.0, 0.0) - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// `sigma(tau, z) / (2 pi i z)`, continuous at `z = 0` with value one.
pub fn sigma_normalized_ratio(tp: &TauPoint, z: Complex64, n_terms: usize) -> Complex64 {
    sinc(z * PI) * theta_tail_product(tp, z, n_terms)
}

type EisCache = Mutex<HashMap<(usize, usize), Arc<Vec<Vec<f64>>>>>;

/// f64 coefficients of `e_2, e_4, ..., e_{2K}` up to `q^{q_order}`.
fn eisenstein_f64_table(kmax: usize, q_order: usize) -> Arc<Vec<Vec<f64>>> {
    static CACHE: OnceLock<EisCache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = cache.lock().unwrap().get(&(kmax, q_order)) {
        return t.clone();
    }
    let table: Vec<Vec<f64>> = (1..=kmax)
        .map(|k| {
            let e = eisenstein_qexp(2 * k as i64, q_order as i64).expect("valid weight");
            (0..q_order as i64).map(|n| rat_to_f64(&e.qexp.coeff(n).expect("within order"))).collect()
        })
        .collect();
    let table = Arc::new(table);
    cache.lock().unwrap().insert((kmax, q_order), table.clone());
    table
}

/// Eisenstein-exponential form of sigma.
pub fn sigma_eisenstein(tp: &TauPoint, z: Complex64, z_order: usize, q_order: usize) -> Result<ThetaValue, ThetaError> {
    let trunc = Truncation { product_terms: None, z_order: Some(z_order), q_order: Some(q_order) };
    if z == Complex64::new(0.0, 0.0) {
        return Ok(ThetaValue { value: z, method: Method::Eisenstein, truncation: trunc, error_bound: 0.0, consistency_residual: None });
    }
    let kmax = z_order / 2;
    let table = eisenstein_f64_table(kmax.max(1), q_order.max(1));
    let z2 = z * z;
    let mut zp = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut sizes = Vec::with_capacity(kmax);
    for k in 1..=kmax {
        zp *= z2;
        // e_{2k}(q) summed in increasing powers of q
        let mut ev = Complex64::new(0.0, 0.0);
        let mut qn = Complex64::new(1.0, 0.0);
        for c in &table[k - 1] {
            ev += qn * *c;
            qn *= tp.q;
        }
        let term = raw_factor(2 * k as i64) * ev * zp / (2 * k) as f64;
        sum += term;
        sizes.push(term.norm());
    }
    let last = sizes.last().copied().unwrap_or(0.0);
    if sizes.len() >= 2 {
        let before = sizes[sizes.len() - 2];
        if last > 1e-6 * sum.norm().max(1.0) && last >= before {
            return Err(ThetaError::Divergent { index: 2 * kmax, size: last });
        }
    }
    let value = two_pi_i() * z * (-sum).exp();
    Ok(ThetaValue { value, method: Method::Eisenstein, truncation: trunc, error_bound: value.norm() * last, consistency_residual: None })
}

/// `upsilon = (1 - y) prod (1 - q^n y)(1 - q^n / y) / (1 - q^n)^2 = -y^{1/2} sigma`.
pub fn upsilon(tp: &TauPoint, z: Complex64, n_terms: usize) -> Result<ThetaValue, ThetaError> {
    if n_terms == 0 {
        return Err(ThetaError::NoTerms);
    }
    let y = (two_pi_i() * z).exp();
    let value = (Complex64::new(1.0, 0.0) - y) * theta_tail_product(tp, z, n_terms);
    let s = sigma_product(tp, z, n_terms)?;
    let alt = -(Complex64::new(0.0, PI) * z).exp() * s.value;
    let scale = value.norm().max(alt.norm()).max(1e-14);
    let residual = (value - alt).norm() / scale;
    if residual > 1e-8 {
        return Err(ThetaError::Consistency(residual));
    }
    Ok(ThetaValue {
        value,
        method: Method::Product,
        truncation: Truncation { product_terms: Some(n_terms), ..Default::default() },
        error_bound: value.norm() * product_tail_bound(tp, z, n_terms),
        consistency_residual: Some(residual),
    })
}

/// Scalar `B_{2k} / (2k (2k)!)` multiplying `e_{2k} w^{2k}` in `log(sigma / w)`.
pub fn sigma_log_scalar(k: u32) -> Rational {
    let b = bernoulli_numbers(2 * k as usize)[2 * k as usize].clone();
    b / (rat_int(2 * k as i64) * Rational::from_integer(factorial(2 * k)))
}

/// Formal product expansion of sigma in `w = 2 pi i z`:
/// `2 sinh(w/2) prod_n (1 - c_n (cosh w - 1))` with `c_n = 2 q^n / (1 - q^n)^2`.
///
/// Returns the coefficients of `w^0 .. w^{z_order-1}`, each a rational
/// q-series known below `q^{q_order}`.
pub fn sigma_qexp(z_order: usize, q_order: usize) -> PowerSeries<QExp<Rational>> {
    let q_order_i = q_order as i64;
    let mut pre = vec![QExp::zero(); z_order];
    // 2 sinh(w/2) = sum_j w^{2j+1} / (4^j (2j+1)!)
    let mut j = 0u32;
    while ((2 * j + 1) as usize) < z_order {
        let c = Rational::new(1.into(), num_bigint::BigInt::from(4u64).pow(j) * factorial(2 * j + 1));
        pre[(2 * j + 1) as usize] = QExp::constant(c);
        j += 1;
    }
    let mut acc = PowerSeries::new(pre);
    for n in 1..q_order_i {
        // c_n = 2 sum_{m>=1} m q^{nm}
        let mut cn = vec![rat_int(0); q_order];
        let mut m = 1;
        while n * m < q_order_i {
            cn[(n * m) as usize] = rat_int(2 * m);
            m += 1;
        }
        let cn = QExp::from_coeffs(cn, q_order_i);
        let mut f = vec![QExp::zero(); z_order];
        if z_order > 0 {
            f[0] = QExp::<Rational>::one().truncate(q_order_i);
        }
        let mut i = 2u32;
        while (i as usize) < z_order {
            f[i as usize] = cn.scale_rational(&Rational::new((-1).into(), factorial(i)));
            i += 2;
        }
        acc = acc.mul(&PowerSeries::new(f));
    }
    acc
}

/// Witten-genus series `w / sigma(w)`: even powers only, constant term one.
pub fn witten_series(z_order: usize, q_order: usize) -> PowerSeries<QExp<Rational>> {
    // sigma / w known to one order less
    let s = sigma_qexp(z_order + 1, q_order);
    let ratio = s.shift_down(1).expect("sigma vanishes at the origin");
    ratio.inverse().expect("constant term is a unit")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuasiResiduals {
    pub res_shift1: f64,
    pub res_shift_tau: f64,
}

/// Residuals of `sigma(z+1) = -sigma(z)` and
/// `sigma(z+tau) = -q^{-1/2} y^{-1} sigma(z)`.
pub fn check_quasiperiodicity(tp: &TauPoint, z: Complex64, n_terms: usize) -> Result<QuasiResiduals, ThetaError> {
    let s = sigma_product(tp, z, n_terms)?.value;
    let s1 = sigma_product(tp, z + 1.0, n_terms)?.value;
    let st = sigma_product(tp, z + tp.tau, n_terms)?.value;
    let factor = -(Complex64::new(0.0, -PI) * tp.tau).exp() * (-two_pi_i() * z).exp();
    Ok(QuasiResiduals { res_shift1: (s1 + s).norm(), res_shift_tau: (st - factor * s).norm() })
}

/// Residual of the weight -1, index 1/2 law
/// `sigma(gamma tau, z/(c tau + d)) = (c tau + d)^{-1} e^{pi i c z^2/(c tau + d)} sigma(tau, z)`.
pub fn check_modularity(tp: &TauPoint, z: Complex64, gamma: &Sl2Z, n_terms: usize) -> Result<f64, ThetaError> {
    let j = tp.automorphy(gamma);
    let gt = tp.act(gamma)?;
    let lhs = sigma_product(&gt, z / j, n_terms)?.value;
    let rhs = (Complex64::new(0.0, PI) * gamma.c as f64 * z * z / j).exp() / j * sigma_product(tp, z, n_terms)?.value;
    Ok((lhs - rhs).norm())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Germ {
    /// Taylor coefficients `c_0 .. c_{k_max}` at `z = 0`.
    pub coeffs: Vec<Complex64>,
    pub points: usize,
    pub sample_radius: f64,
    /// Bound on the aliasing error of the worst coefficient, from the
    /// maximum of `|f|` on the full radius.
    pub aliasing_bound: f64,
    /// Set when the scaled high coefficients do not decay.
    pub radius_warning: bool,
}

/// Taylor germ at `z = 0` by a discrete Cauchy integral on `|z| = r/2`.
/// `f` must be analytic on the disc of radius `r`.
pub fn germ_at_zero<F>(f: F, tp: &TauPoint, k_max: usize, r: f64) -> Result<Germ, ThetaError>
where
    F: Fn(&TauPoint, Complex64) -> Complex64,
{
    if !(r > 0.0) {
        return Err(ThetaError::BadGermRequest);
    }
    let m = (4 * (k_max + 1)).max(32);
    let rho = r / 2.0;
    let samples: Vec<Complex64> = (0..m)
        .map(|j| {
            let w = Complex64::from_polar(rho, 2.0 * PI * j as f64 / m as f64);
            f(tp, w)
        })
        .collect();
    let mut coeffs = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, v) in samples.iter().enumerate() {
            let ang = -2.0 * PI * ((j * k) % m) as f64 / m as f64;
            acc += v * Complex64::from_polar(1.0, ang);
        }
        coeffs.push(acc / m as f64 / rho.powi(k as i32));
    }
    let outer = (0..m)
        .map(|j| f(tp, Complex64::from_polar(r, 2.0 * PI * (j as f64 + 0.5) / m as f64)).norm())
        .fold(0.0, f64::max);
    let tail = 0.5f64.powi(m as i32) / (1.0 - 0.5f64.powi(m as i32));
    let aliasing_bound = outer * r.powi(-(k_max as i32)).max(1.0) * tail;
    let scaled: Vec<f64> = coeffs.iter().enumerate().map(|(k, c)| c.norm() * rho.powi(k as i32)).collect();
    let peak = scaled.iter().cloned().fold(0.0, f64::max);
    let top = scaled.iter().skip((3 * (k_max + 1)) / 4).cloned().fold(0.0, f64::max);
    let radius_warning = k_max >= 3 && peak > 0.0 && top > 0.5 * peak;
    Ok(Germ { coeffs, points: m, sample_radius: rho, aliasing_bound, radius_warning })
}

/// Coefficients of `w^{2k}` in `log(sigma / w)` divided by the scalar
/// `B_{2k} / (2k (2k)!)`, for `k = 1..=kmax`. These reproduce `e_{2k}`.
pub fn eisenstein_from_sigma(kmax: u32, q_order: usize) -> Vec<QExp<Rational>> {
    let n = 2 * kmax as usize + 1;
    let s = sigma_qexp(n + 1, q_order);
    let log = s.shift_down(1).expect("odd series").log().expect("constant term one");
    (1..=kmax).map(|k| log.coeff(2 * k as usize).scale_rational(&sigma_log_scalar(k).recip())).collect()
}

/// The power of `2 pi i` relating the `w^j` coefficient of [`sigma_qexp`] to
/// the `z^j` coefficient of `sigma / (2 pi i)`.
pub fn two_pi_i_power(j: usize) -> i64 {
    j as i64 - 1
}
