use super::form::{CartanConvention, CartanError, EqForm, TermKey};
use crate::qseries::{euler_product_power, rat_int, PowerSeries, QExp, Rational, Ring};
use crate::theta::sigma_qexp;
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

type CQ = QExp<Complex64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ThomGroup {
    U,
    SpinEven,
}

fn key(n: usize) -> TermKey {
    TermKey { beta_pow: 0, pi_pow: 0, lie: vec![0; n], coord: vec![0; 2 * n], gauss: vec![0; n], ext: 0 }
}

/// `u_j = e^{-pi r_j^2} (beta^{-1} z_j + B dx_j ^ dy_j)` with `B = 2 pi / c`.
pub fn plane_u<R: Ring>(n: usize, j: usize, conv: &CartanConvention) -> EqForm<R> {
    let mut a = key(n);
    a.beta_pow = -1;
    a.lie[j] = 1;
    a.gauss[j] = 1;
    let (b, b_pi) = conv.mq_top();
    let mut top = key(n);
    top.gauss[j] = 1;
    top.pi_pow = b_pi;
    top.ext = 0b11 << (2 * j);
    EqForm::from_key(n, a, R::one()).add(&EqForm::from_key(n, top, R::from_rational(&b))).expect("same space")
}

/// Mathai-Quillen Thom form `prod_j u_j`.
pub fn mq_thom_form(n: usize, conv: &CartanConvention) -> EqForm<Rational> {
    (0..n).fold(EqForm::one(n), |acc, j| acc.wedge(&plane_u(n, j, conv)).expect("same space"))
}

/// Lie series in `z_j` from a series in `w = 2 pi i z_j`: the `w^m`
/// coefficient `c` becomes `c (2i)^m pi^{m + pi_shift}` on `z_j^m`.
fn plane_from_w<R: Ring>(n: usize, j: usize, w: &PowerSeries<R>, beta_pow: i32, pi_shift: i32, unit: impl Fn(usize) -> Option<R>) -> EqForm<R> {
    let mut out = EqForm::zero(n);
    for (m, c) in w.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let u = unit(m).expect("odd powers of 2i need complex coefficients");
        let mut k = key(n);
        k.beta_pow = beta_pow;
        k.lie[j] = m as u32;
        k.pi_pow = m as i32 + pi_shift;
        out.insert(k, c.mul(&u));
    }
    out
}

fn rational_unit(m: usize) -> Option<QExp<Rational>> {
    (m % 2 == 0).then(|| QExp::constant(Rational::from_integer(num_bigint::BigInt::from(-4).pow((m / 2) as u32))))
}

fn complex_unit(m: usize) -> Option<CQ> {
    Some(QExp::constant(Complex64::new(0.0, 2.0).powu(m as u32)))
}

/// Thom form with every plane in the fixed block:
/// `prod_j u_j sigma(z_j) / z_j` with exact coefficients, `sigma` normalized
/// to `sigma'(0) = 1` in the Lie variable.
pub fn elliptic_thom_form_spin(n: usize, z_order: u32, q_order: usize, conv: &CartanConvention) -> EqForm<QExp<Rational>> {
    let phi = sigma_qexp(z_order as usize + 1, q_order).shift_down(1).expect("sigma vanishes at 0");
    let mut acc = EqForm::one(n).with_lie_order(z_order);
    for j in 0..n {
        let factor = plane_u(n, j, conv).wedge(&plane_from_w(n, j, &phi, 0, 0, rational_unit)).expect("same space");
        acc = acc.wedge(&factor).expect("same space");
    }
    acc
}

fn exp_series(c: Complex64, order: usize, q_order: i64) -> PowerSeries<CQ> {
    let mut out = Vec::with_capacity(order);
    let mut t = Complex64::new(1.0, 0.0);
    for m in 0..order {
        if m > 0 {
            t = t * c / m as f64;
        }
        out.push(QExp::constant(t).truncate(q_order));
    }
    PowerSeries::new(out)
}

/// `q^{num/den} c` as a constant power series.
fn q_mono(c: Complex64, num: i64, den: i64, order: usize, q_order: i64) -> PowerSeries<CQ> {
    PowerSeries::constant(QExp::monomial(c, num, den).truncate(q_order), order)
}

/// `sigma(tau, z + h1 - tau h2)` (literal product, or `upsilon` when
/// `upsilon` is set) as a series in `w = 2 pi i z`. Requires `0 <= h2 < 1`.
pub fn sigma_w_series_shifted(h1: &Rational, h2: &Rational, upsilon: bool, z_order: usize, q_order: usize) -> Result<PowerSeries<CQ>, CartanError> {
    if *h2 < rat_int(0) || *h2 >= rat_int(1) {
        return Err(CartanError::Invalid(format!("h2 = {h2} must lie in [0, 1)")));
    }
    if h2.numer() == &0.into() && h1.is_integer() {
        return Err(CartanError::LatticeShift { plane: 0 });
    }
    let qo = q_order as i64;
    let num = i64::try_from(h2.numer()).map_err(|_| CartanError::Invalid("h2 too large".into()))?;
    let den = i64::try_from(h2.denom()).map_err(|_| CartanError::Invalid("h2 too large".into()))?;
    let h1f = crate::qseries::rat_to_f64(h1);
    let e = |t: f64| Complex64::new(0.0, t).exp();
    let a = e(2.0 * PI * h1f);
    let one = PowerSeries::constant(QExp::<Complex64>::one().truncate(qo), z_order);
    let ew = exp_series(Complex64::new(1.0, 0.0), z_order, qo);
    let ewi = exp_series(Complex64::new(-1.0, 0.0), z_order, qo);
    let half = exp_series(Complex64::new(0.5, 0.0), z_order, qo);
    let halfi = exp_series(Complex64::new(-0.5, 0.0), z_order, qo);
    // y_s^{1/2} - y_s^{-1/2}
    let mut acc = q_mono(e(PI * h1f), -num, 2 * den, z_order, qo)
        .mul(&half)
        .sub(&q_mono(e(-PI * h1f), num, 2 * den, z_order, qo).mul(&halfi));
    for n in 1..=qo {
        let f1 = one.sub(&q_mono(a, n * den - num, den, z_order, qo).mul(&ew));
        let f2 = one.sub(&q_mono(a.inv(), n * den + num, den, z_order, qo).mul(&ewi));
        acc = acc.mul(&f1).mul(&f2);
    }
    let inv = euler_product_power::<Complex64>(-2, qo);
    acc = acc.map(|c| c.mul(&inv));
    if upsilon {
        acc = q_mono(-e(PI * h1f), -num, 2 * den, z_order, qo).mul(&half).mul(&acc);
    }
    Ok(acc)
}

/// Elliptic Thom form: planes `0..k` carry `u_j phi(z_j) / z_j`, planes
/// `k..n` carry `beta^{-1} phi(z_j + h1_j - tau h2_j)`, where `phi` is
/// sigma (Spin) or upsilon (U), normalized by `1 / (2 pi i)`.
///
/// Coefficients are q-expansions; factors are multiplied in a canonical order
/// so that permuting planes within a block permutes the result exactly.
pub fn elliptic_thom_form(
    group: ThomGroup,
    n: usize,
    k: usize,
    shifts: &[(Rational, Rational)],
    z_order: u32,
    q_order: usize,
    conv: &CartanConvention,
) -> Result<EqForm<CQ>, CartanError> {
    if k > n || shifts.len() != n - k {
        return Err(CartanError::Invalid(format!("need k <= n and {} shifts", n.saturating_sub(k))));
    }
    let zo = z_order as usize;
    let ups = group == ThomGroup::U;
    let sig = sigma_qexp(zo + 1, q_order).shift_down(1).expect("sigma vanishes at 0");
    let fixed: PowerSeries<CQ> = {
        let base = sig.map(|c| c.map(|r| Complex64::from_rational(r)));
        if ups {
            exp_series(Complex64::new(0.5, 0.0), zo, q_order as i64).neg().mul(&base)
        } else {
            base
        }
    };
    let mut factors: Vec<((u8, Rational, Rational), EqForm<CQ>)> = Vec::with_capacity(n);
    for j in 0..k {
        let f = plane_u(n, j, conv).wedge(&plane_from_w(n, j, &fixed, 0, 0, complex_unit)).expect("same space");
        factors.push(((0, rat_int(0), rat_int(0)), f));
    }
    for (i, (h1, h2)) in shifts.iter().enumerate() {
        let j = k + i;
        let w = sigma_w_series_shifted(h1, h2, ups, zo, q_order).map_err(|e| match e {
            CartanError::LatticeShift { .. } => CartanError::LatticeShift { plane: j },
            other => other,
        })?;
        // sigma / (2 pi i): divide by 2i and one power of pi
        let w = w.map(|c| c.scale_by(&Complex64::new(0.0, -0.5)));
        factors.push(((1, h1.clone(), h2.clone()), plane_from_w(n, j, &w, -1, -1, complex_unit)));
    }
    Ok(disjoint_product(n, factors).with_lie_order(z_order))
}

/// Plane-independent description of a single-plane term.
type LocalSig = (i32, i32, u32, u32, u32, u32, u32);

fn local_sig(k: &TermKey, j: usize) -> LocalSig {
    (k.beta_pow, k.pi_pow, k.lie[j], k.coord[2 * j], k.coord[2 * j + 1], k.gauss[j], (k.ext >> (2 * j)) & 0b11)
}

/// Product of factors each supported on its own plane. Every output
/// coefficient is multiplied in the order of (factor label, local term
/// shape), so relabeling planes inside a block gives bit-identical values.
fn disjoint_product(n: usize, factors: Vec<((u8, Rational, Rational), EqForm<CQ>)>) -> EqForm<CQ> {
    type Item<'a> = ((u8, Rational, Rational), LocalSig, &'a CQ);
    let mut per: Vec<Vec<(usize, &TermKey, &CQ, &(u8, Rational, Rational))>> = Vec::new();
    for (label, f) in &factors {
        let plane = f
            .terms()
            .keys()
            .flat_map(|k| (0..n).filter(move |&j| k.lie[j] + k.coord[2 * j] + k.coord[2 * j + 1] + k.gauss[j] > 0 || (k.ext >> (2 * j)) & 3 != 0))
            .next()
            .unwrap_or(0);
        per.push(f.terms().iter().map(|(k, c)| (plane, k, c, label)).collect());
    }
    let mut out = EqForm::zero(n);
    let mut idx = vec![0usize; per.len()];
    if per.iter().any(|p| p.is_empty()) {
        return out;
    }
    loop {
        let mut key = key(n);
        let mut items: Vec<Item> = Vec::with_capacity(per.len());
        let mut swaps = 0u32;
        for (f, &i) in idx.iter().enumerate() {
            let (plane, k, c, label) = per[f][i];
            key.beta_pow += k.beta_pow;
            key.pi_pow += k.pi_pow;
            for j in 0..n {
                key.lie[j] += k.lie[j];
                key.gauss[j] += k.gauss[j];
            }
            for (a, b) in key.coord.iter_mut().zip(&k.coord) {
                *a += b;
            }
            let mut rest = k.ext;
            while rest != 0 {
                let b = rest.trailing_zeros();
                rest &= rest - 1;
                swaps += (key.ext >> (b + 1)).count_ones();
            }
            key.ext |= k.ext;
            items.push((label.clone(), local_sig(k, plane), c));
        }
        items.sort_by(|a, b| (&a.0, a.1).cmp(&(&b.0, b.1)));
        let mut coeff = items[0].2.clone();
        for it in &items[1..] {
            coeff = coeff.mul(it.2);
        }
        if swaps % 2 == 1 {
            coeff = coeff.neg();
        }
        out.insert(key, coeff);
        // next multi-index
        let mut f = 0;
        loop {
            if f == per.len() {
                return out;
            }
            idx[f] += 1;
            if idx[f] < per[f].len() {
                break;
            }
            idx[f] = 0;
            f += 1;
        }
    }
}
