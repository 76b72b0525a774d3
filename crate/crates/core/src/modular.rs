//! Level-one modular forms as exact q-expansions.
//!
//! Grading follows the doubled, dualized convention: a weight-`k` form sits
//! in degree `-2k`. In cocycle language a weight-`k` function `f` is the
//! element `f * beta^k` with `|beta| = -2`.

use crate::qseries::{bernoulli_numbers, euler_product_power, factorial, rat_int, rat_to_f64, QExp, Rational, Ring};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::Pow;
use serde::Serialize;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModularError {
    #[error("weight {0} must be even and at least 2")]
    BadWeight(i64),
    #[error("weight 2 lattice sum is only conditionally convergent; use eisenstein_qexp")]
    ConditionalConvergence,
    #[error("lattice cutoff {0} is below the minimum of 10")]
    CutoffTooSmall(i64),
    #[error("order must be at least {min}, got {got}")]
    OrderTooSmall { min: i64, got: i64 },
    #[error("tau must lie in the upper half-plane")]
    NotInUpperHalfPlane,
    #[error("form is not invertible: {0}")]
    NotInvertible(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModularForm {
    pub weight: i64,
    pub degree: i64,
    pub qexp: QExp<Rational>,
}

impl ModularForm {
    pub fn new(weight: i64, qexp: QExp<Rational>) -> Self {
        Self { weight, degree: -2 * weight, qexp }
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(self.weight + o.weight, self.qexp.mul(&o.qexp))
    }

    pub fn pow(&self, e: u32) -> Self {
        Self::new(self.weight * e as i64, self.qexp.pow(e))
    }

    pub fn inverse(&self) -> Result<Self, ModularError> {
        let inv = self.qexp.inverse().map_err(|e| ModularError::NotInvertible(e.to_string()))?;
        Ok(Self::new(-self.weight, inv))
    }

    /// The cocycle `f * beta^weight` representing this form.
    pub fn as_cocycle(&self) -> BetaGraded {
        BetaGraded { function: self.qexp.clone(), beta_pow: self.weight }
    }
}

/// A holomorphic function on the upper half-plane (degree 0) times a power of
/// `beta` (degree -2).
#[derive(Debug, Clone, PartialEq)]
pub struct BetaGraded {
    pub function: QExp<Rational>,
    pub beta_pow: i64,
}

impl BetaGraded {
    pub fn degree(&self) -> i64 {
        -2 * self.beta_pow
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self { function: self.function.mul(&o.function), beta_pow: self.beta_pow + o.beta_pow }
    }
}

fn divisor_power_sum(n: u64, p: u32) -> BigInt {
    let mut s = BigInt::from(0);
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            s += Pow::pow(BigInt::from(d), p);
            let e = n / d;
            if e != d {
                s += Pow::pow(BigInt::from(e), p);
            }
        }
        d += 1;
    }
    s
}

/// Normalized Eisenstein series `e_k = 1 - (2k / B_k) sum sigma_{k-1}(n) q^n`
/// up to `q^order`.
pub fn eisenstein_qexp(k: i64, order: i64) -> Result<ModularForm, ModularError> {
    if k < 2 || k % 2 != 0 {
        return Err(ModularError::BadWeight(k));
    }
    if order < 1 {
        return Err(ModularError::OrderTooSmall { min: 1, got: order });
    }
    let b = bernoulli_numbers(k as usize)[k as usize].clone();
    let factor = -rat_int(2 * k) / b;
    let mut coeffs = Vec::with_capacity(order as usize);
    coeffs.push(rat_int(1));
    for n in 1..order {
        let s = Rational::from_integer(divisor_power_sum(n as u64, (k - 1) as u32));
        coeffs.push(&factor * s);
    }
    Ok(ModularForm::new(k, QExp::from_coeffs(coeffs, order)))
}

/// `2 zeta(k) = -(2 pi i)^k B_k / k!`, the factor between `e_k` and the
/// lattice sum `G_k`.
pub fn raw_factor(k: i64) -> Complex64 {
    let b = &bernoulli_numbers(k as usize)[k as usize];
    let tpi = Complex64::new(0.0, 2.0 * PI).powi(k as i32);
    let ratio = rat_to_f64(&(b / Rational::from_integer(factorial(k as u32))));
    -tpi * ratio
}

#[derive(Debug, Clone, Serialize)]
pub struct LatticeSum {
    /// Square partial sum over `0 < max(|m|,|n|) <= M`.
    pub partial_sum: [f64; 2],
    /// Partial sum plus the integral of the summand outside the square of
    /// half-side `M + 1/2`.
    pub value: [f64; 2],
    /// Bound `8 c^{-k} M^{2-k} / (k-2)` on the partial sum's tail.
    pub error_bound: f64,
    pub cutoff: i64,
}

impl LatticeSum {
    pub fn value_c(&self) -> Complex64 {
        Complex64::new(self.value[0], self.value[1])
    }
    pub fn partial_c(&self) -> Complex64 {
        Complex64::new(self.partial_sum[0], self.partial_sum[1])
    }
}

/// Smallest `|s tau + t|` over the boundary `max(|s|,|t|) = 1`.
fn square_boundary_min(tau: Complex64) -> f64 {
    // sides s = +-1: min_t |tau + t| over t in [-1,1]
    let side_s = if tau.re.abs() <= 1.0 { tau.im } else { ((tau.re.abs() - 1.0).powi(2) + tau.im.powi(2)).sqrt() };
    // sides t = +-1: min_s |s tau + 1| over s in [-1,1]
    let n2 = tau.norm_sqr();
    let s_star = -tau.re / n2;
    let side_t = if s_star.abs() <= 1.0 {
        tau.im / tau.norm()
    } else {
        let s = s_star.signum();
        (tau * s + 1.0).norm()
    };
    side_s.min(side_t)
}

/// Raw lattice sum `G_k(tau) = sum' (m tau + n)^{-k}` by a square cutoff.
pub fn eisenstein_lattice_numeric(k: i64, tau: Complex64, cutoff: i64) -> Result<LatticeSum, ModularError> {
    if k == 2 {
        return Err(ModularError::ConditionalConvergence);
    }
    if k < 4 || k % 2 != 0 {
        return Err(ModularError::BadWeight(k));
    }
    if cutoff < 10 {
        return Err(ModularError::CutoffTooSmall(cutoff));
    }
    if tau.im <= 0.0 {
        return Err(ModularError::NotInUpperHalfPlane);
    }
    let kk = k as i32;
    let mut sum = Complex64::new(0.0, 0.0);
    // (m,n) and (-m,-n) contribute equally for even k
    for m in 0..=cutoff {
        let nstart = if m == 0 { 1 } else { -cutoff };
        let mut row = Complex64::new(0.0, 0.0);
        for n in nstart..=cutoff {
            let w = tau * m as f64 + n as f64;
            row += w.powi(-kk);
        }
        sum += row;
    }
    sum *= 2.0;
    let r = cutoff as f64 + 0.5;
    let e = 1 - kk;
    let ef = e as f64;
    let mut j = Complex64::new(0.0, 0.0);
    for s in [-1.0, 1.0] {
        j += ((tau * s + 1.0).powi(e) - (tau * s - 1.0).powi(e)) / ef;
    }
    for t in [-1.0, 1.0] {
        j += ((tau + t).powi(e) - (-tau + t).powi(e)) / (ef * tau);
    }
    let tail = j * r.powi(2 - kk) / (k - 2) as f64;
    let value = sum + tail;
    let c = square_boundary_min(tau);
    let bound = 8.0 * c.powi(-kk) * (cutoff as f64).powi(2 - kk) / (k - 2) as f64;
    Ok(LatticeSum { partial_sum: [sum.re, sum.im], value: [value.re, value.im], error_bound: bound, cutoff })
}

#[derive(Debug, Clone)]
pub struct RingGenerators {
    pub c4: ModularForm,
    pub c6: ModularForm,
    pub delta: ModularForm,
}

/// Discriminant `q prod (1 - q^n)^24` up to `q^order`.
pub fn delta_qexp(order: i64) -> ModularForm {
    let p = euler_product_power::<Rational>(24, order - 1);
    ModularForm::new(12, p.shift(1, 1))
}

pub fn ring_generators(order: i64) -> Result<RingGenerators, ModularError> {
    if order < 2 {
        return Err(ModularError::OrderTooSmall { min: 2, got: order });
    }
    Ok(RingGenerators { c4: eisenstein_qexp(4, order)?, c6: eisenstein_qexp(6, order)?, delta: delta_qexp(order) })
}

/// `c4^3 - c6^2 - 1728 Delta` up to `q^order`.
pub fn mf_relation_residual(order: i64) -> Result<QExp<Rational>, ModularError> {
    let g = ring_generators(order)?;
    Ok(g.c4.qexp.pow(3).sub(&g.c6.qexp.pow(2)).sub(&g.delta.qexp.scale(&rat_int(1728))))
}

/// Evaluate a rational q-expansion at `tau`.
pub fn eval(f: &ModularForm, tau: Complex64) -> Complex64 {
    f.qexp.eval_at_tau(tau)
}
