//! Loop-group vacuum characters and twisted elliptic Euler classes.
//!
//! `U(n)` sections are products of `upsilon`, `Spin(2n)` sections products of
//! `sigma`, both in maximal-torus coordinates. Spin cocharacters are the
//! even-sum sublattice of `Z^n`; `SU(n)` cocharacters are the trace-zero
//! sublattice.

use crate::qseries::{euler_product_power, rat_int, MultiSeries, PowerSeries, QExp, Rational, Ring, YPoly};
use crate::theta::{sigma_product, upsilon, witten_series, TauPoint, ThetaError};
use num_complex::Complex64;
use serde::Serialize;
use std::collections::BTreeMap;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LoopError {
    #[error("rank must be at least 1")]
    ZeroRank,
    #[error("expected {expected} coordinates, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("SU(n) requires sum of z_j = 0, got {0}")]
    NotTraceless(Complex64),
    #[error("lattice vector {0:?} is not a cocharacter of the group")]
    NotInLattice(Vec<i64>),
    #[error("invalid level: {0}")]
    InvalidLevel(String),
    #[error(transparent)]
    Theta(#[from] ThetaError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Family {
    U,
    SU,
    SpinEven,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GroupTag {
    pub family: Family,
    pub n: usize,
}

impl GroupTag {
    pub fn new(family: Family, n: usize) -> Result<Self, LoopError> {
        if n == 0 {
            return Err(LoopError::ZeroRank);
        }
        Ok(Self { family, n })
    }

    /// Whether `v` lies in the cocharacter lattice.
    pub fn in_lattice(&self, v: &[i64]) -> bool {
        if v.len() != self.n {
            return false;
        }
        let s: i64 = v.iter().sum();
        match self.family {
            Family::U => true,
            Family::SU => s == 0,
            Family::SpinEven => s.rem_euclid(2) == 0,
        }
    }

    /// A basis of the cocharacter lattice.
    pub fn lattice_basis(&self) -> Vec<Vec<i64>> {
        let n = self.n;
        let unit = |i: usize| {
            let mut v = vec![0; n];
            v[i] = 1;
            v
        };
        match self.family {
            Family::U => (0..n).map(unit).collect(),
            Family::SU => (0..n.saturating_sub(1))
                .map(|i| {
                    let mut v = unit(i);
                    v[i + 1] = -1;
                    v
                })
                .collect(),
            Family::SpinEven => {
                if n == 1 {
                    return vec![vec![2]];
                }
                let mut b: Vec<Vec<i64>> = (0..n - 1)
                    .map(|i| {
                        let mut v = unit(i);
                        v[i + 1] = -1;
                        v
                    })
                    .collect();
                let mut last = vec![0; n];
                last[n - 2] = 1;
                last[n - 1] = 1;
                b.push(last);
                b
            }
        }
    }
}

/// Symmetric integer bilinear form on the cocharacter lattice.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Level {
    pub gram: Vec<Vec<i64>>,
}

impl Level {
    pub fn identity(n: usize) -> Self {
        Self { gram: (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect() }
    }

    pub fn pair(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut s = 0;
        for (i, ai) in a.iter().enumerate() {
            for (j, bj) in b.iter().enumerate() {
                s += ai * self.gram[i][j] * bj;
            }
        }
        s
    }

    /// Checks symmetry, positive definiteness and evenness on the lattice.
    pub fn validate(&self, group: &GroupTag) -> Result<(), LoopError> {
        let n = group.n;
        if self.gram.len() != n || self.gram.iter().any(|r| r.len() != n) {
            return Err(LoopError::InvalidLevel(format!("gram must be {n}x{n}")));
        }
        for i in 0..n {
            for j in 0..n {
                if self.gram[i][j] != self.gram[j][i] {
                    return Err(LoopError::InvalidLevel("gram is not symmetric".into()));
                }
            }
        }
        // leading principal minors via exact fraction-free elimination
        let mut a: Vec<Vec<Rational>> = self.gram.iter().map(|r| r.iter().map(|&x| rat_int(x)).collect()).collect();
        for k in 0..n {
            if a[k][k] <= rat_int(0) {
                return Err(LoopError::InvalidLevel("gram is not positive definite".into()));
            }
            for i in k + 1..n {
                let f = &a[i][k] / &a[k][k];
                for j in k..n {
                    let t = &f * &a[k][j];
                    a[i][j] -= t;
                }
            }
        }
        for b in group.lattice_basis() {
            if self.pair(&b, &b).rem_euclid(2) != 0 {
                return Err(LoopError::InvalidLevel(format!("l(v,v) is odd for lattice vector {b:?}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CharValue {
    pub value: Complex64,
    pub group: GroupTag,
    pub degree: i64,
    pub beta_power: i64,
}

fn yq_factor(n: i64, q_order: i64) -> QExp<YPoly> {
    // 1 - q^n y
    let mut c = vec![YPoly::zero(); (n + 1) as usize];
    c[0] = YPoly::one();
    c[n as usize] = YPoly::y_pow(1, 0, 2).neg();
    QExp::from_coeffs(c, q_order)
}

fn yq_factor_inv(n: i64, q_order: i64) -> QExp<YPoly> {
    // 1 - q^n y^{-1}
    let mut c = vec![YPoly::zero(); (n + 1) as usize];
    c[0] = YPoly::one();
    c[n as usize] = YPoly::y_pow(1, 0, -2).neg();
    QExp::from_coeffs(c, q_order)
}

fn char_with_prefactor(pre: YPoly, q_order: i64) -> QExp<YPoly> {
    let mut acc = QExp::constant(pre).truncate(q_order);
    for n in 1..q_order {
        acc = acc.mul(&yq_factor(n, q_order)).mul(&yq_factor_inv(n, q_order));
    }
    acc
}

/// `(y^{1/2} - y^{-1/2}) prod_{n>0} (1 - q^n y)(1 - q^n y^{-1})` below `q^{q_order}`.
pub fn char_spin2_qexp(q_order: i64) -> QExp<YPoly> {
    char_with_prefactor(YPoly::y_pow(1, 0, 1).sub(&YPoly::y_pow(1, 0, -1)), q_order)
}

/// `(1 - y) prod_{n>0} (1 - q^n y)(1 - q^n y^{-1})` below `q^{q_order}`.
pub fn char_lu1_qexp(q_order: i64) -> QExp<YPoly> {
    char_with_prefactor(YPoly::one().sub(&YPoly::y_pow(1, 0, 2)), q_order)
}

/// Substitute `y^{1/2} = e^{w/2}` into a character and divide by
/// `prod (1 - q^n)^2`, giving a power series in `w` with q-series coefficients.
pub fn spin2_char_to_w_series(chi: &QExp<YPoly>, z_order: usize) -> PowerSeries<QExp<Rational>> {
    let order = chi.order().expect("characters are truncated");
    assert_eq!(chi.denom(), 1);
    let mut table: Vec<Vec<Rational>> = vec![vec![rat_int(0); order.max(0) as usize]; z_order];
    for (e, poly) in chi.terms() {
        let w = poly.exp_substitute(z_order);
        for (j, row) in table.iter_mut().enumerate() {
            row[e as usize] = w.coeff(j);
        }
    }
    let inv = euler_product_power::<Rational>(-2, order);
    PowerSeries::new(table.into_iter().map(|row| QExp::from_coeffs(row, order).mul(&inv)).collect())
}

fn check_len(group: &GroupTag, got: usize) -> Result<(), LoopError> {
    if got != group.n {
        return Err(LoopError::WrongLength { expected: group.n, got });
    }
    Ok(())
}

/// Canonical multiplication order: by `|re|`, then `|im|`. Invariant under
/// permuting the inputs and under negating any of them.
fn ordered_product(mut v: Vec<Complex64>) -> Complex64 {
    v.sort_by(|a, b| a.re.abs().total_cmp(&b.re.abs()).then(a.im.abs().total_cmp(&b.im.abs())));
    v.into_iter().fold(Complex64::new(1.0, 0.0), |acc, x| acc * x)
}

/// Twisted Euler class `beta^{-n} sigma_G(tau, z)` evaluated numerically.
pub fn euler_section(group: &GroupTag, tp: &TauPoint, z: &[Complex64], n_terms: usize) -> Result<CharValue, LoopError> {
    check_len(group, z.len())?;
    if group.family == Family::SU {
        let s: Complex64 = z.iter().sum();
        if s.norm() > 1e-12 {
            return Err(LoopError::NotTraceless(s));
        }
    }
    let mut factors = Vec::with_capacity(z.len());
    for &zj in z {
        let v = match group.family {
            Family::SpinEven => sigma_product(tp, zj, n_terms)?.value,
            Family::U | Family::SU => upsilon(tp, zj, n_terms)?.value,
        };
        factors.push(v);
    }
    Ok(CharValue { value: ordered_product(factors), group: *group, degree: 2 * group.n as i64, beta_power: -(group.n as i64) })
}

/// Relative residual of the first Looijenga law
/// `f(z + m + n tau) = exp(-pi i (2 l(n, z) + l(n, n) tau)) f(z)`, scaled by
/// the larger of the two sides.
pub fn looijenga_shift_check(
    group: &GroupTag,
    level: &Level,
    tp: &TauPoint,
    z: &[Complex64],
    m: &[i64],
    n: &[i64],
    n_terms: usize,
) -> Result<f64, LoopError> {
    check_len(group, z.len())?;
    level.validate(group)?;
    for v in [m, n] {
        if !group.in_lattice(v) {
            return Err(LoopError::NotInLattice(v.to_vec()));
        }
    }
    if m.iter().all(|&x| x == 0) && n.iter().all(|&x| x == 0) {
        return Ok(0.0);
    }
    let shifted: Vec<Complex64> = z.iter().enumerate().map(|(j, &zj)| zj + m[j] as f64 + tp.tau() * n[j] as f64).collect();
    let lhs = euler_section(group, tp, &shifted, n_terms)?.value;
    let f = euler_section(group, tp, z, n_terms)?.value;
    // l(n, z) with complex z
    let mut lnz = Complex64::new(0.0, 0.0);
    for (i, ni) in n.iter().enumerate() {
        for (j, zj) in z.iter().enumerate() {
            lnz += zj * (ni * level.gram[i][j]) as f64;
        }
    }
    let lnn = level.pair(n, n) as f64;
    let factor = (Complex64::new(0.0, -PI) * (lnz * 2.0 + tp.tau() * lnn)).exp();
    let rhs = factor * f;
    Ok((lhs - rhs).norm() / lhs.norm().max(rhs.norm()).max(f64::MIN_POSITIVE))
}

/// E_2-coefficient of `log prod_j Wit(x_j)` for Chern roots given as linear
/// forms in base variables.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnomalyReport {
    /// Quadratic form (monomial exponent vector -> coefficient) multiplying
    /// `e_2(q) w^2` in the logarithm.
    pub quadratic: BTreeMap<Vec<u32>, String>,
    /// Whether every degree-two coefficient is an exact rational multiple of
    /// `e_2` to the computed q-order.
    pub pure_e2: bool,
    /// `p_1 = sum x_j^2` as a quadratic form.
    pub p1: BTreeMap<Vec<u32>, String>,
    /// `lambda` with quadratic = lambda * p_1, when proportional.
    pub lambda: Option<String>,
    /// Whether the anomaly vanishes once `p_1 = 0` is imposed.
    pub vanishes_on_p1_locus: bool,
    pub is_zero: bool,
}

pub fn modular_anomaly(roots: &[Vec<Rational>], z_order: u32, q_order: usize) -> AnomalyReport {
    let order = z_order.max(3);
    let nv = roots.first().map_or(1, |r| r.len()).max(1);
    let wit = witten_series(order as usize, q_order);
    let mut prod = MultiSeries::one(nv, order);
    let mut p1: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
    for root in roots {
        let mut lin = MultiSeries::zero(nv, order);
        for (i, a) in root.iter().enumerate() {
            lin = lin.add(&MultiSeries::var(nv, order, i).scale(a));
        }
        prod = prod.mul(&lin.compose_into(&wit).expect("linear form vanishes at 0"));
        for (i, a) in root.iter().enumerate() {
            for (j, b) in root.iter().enumerate() {
                let mut e = vec![0u32; nv];
                e[i] += 1;
                e[j] += 1;
                *p1.entry(e).or_insert_with(|| rat_int(0)) += a * b;
            }
        }
    }
    p1.retain(|_, v| !v.is_zero());
    let log = prod.log().expect("constant term one");
    let e2 = crate::modular::eisenstein_qexp(2, q_order as i64).expect("weight 2").qexp;
    let mut quad: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
    let mut pure = true;
    for (k, c) in log.homogeneous(2) {
        let lam = c.coeff(0).unwrap_or_else(|| rat_int(0));
        if !c.sub(&e2.scale_rational(&lam)).is_zero() {
            pure = false;
        }
        if !lam.is_zero() {
            quad.insert(k, lam);
        }
    }
    let lambda = if quad.is_empty() {
        Some(rat_int(0))
    } else {
        p1.iter().next().and_then(|(k0, v0)| {
            let l = quad.get(k0).cloned().unwrap_or_else(|| rat_int(0)) / v0;
            let prop = quad.keys().chain(p1.keys()).all(|k| {
                let a = quad.get(k).cloned().unwrap_or_else(|| rat_int(0));
                let b = p1.get(k).cloned().unwrap_or_else(|| rat_int(0));
                a == &l * b
            });
            prop.then_some(l)
        })
    };
    let fmt = |m: &BTreeMap<Vec<u32>, Rational>| m.iter().map(|(k, v)| (k.clone(), v.to_string())).collect();
    AnomalyReport {
        quadratic: fmt(&quad),
        pure_e2: pure,
        p1: fmt(&p1),
        vanishes_on_p1_locus: lambda.is_some(),
        is_zero: quad.is_empty(),
        lambda: lambda.map(|l| l.to_string()),
    }
}
