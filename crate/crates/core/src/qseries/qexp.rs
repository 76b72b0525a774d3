use super::ring::{rat_int, rat_to_f64, Rational, Ring};
use super::QSeriesError;
use num_complex::Complex64;
use num_integer::Integer;
use std::f64::consts::PI;

/// Truncated Laurent series in `q^(1/D)`.
///
/// Coefficient `coeffs[i]` belongs to `q^((min_exp + i)/D)`. A truncated
/// series stores every exponent from `min_exp` up to (not including) `order`.
/// An exact series (`order == None`) is a Laurent polynomial.
///
/// Values are kept in a canonical form: leading zeros are stripped, exact
/// series drop trailing zeros, and `D` is the smallest denominator that
/// represents every nonzero exponent and the truncation order.
#[derive(Clone, Debug, PartialEq)]
pub struct QExp<R> {
    denom: i64,
    min_exp: i64,
    coeffs: Vec<R>,
    order: Option<i64>,
}

impl<R: Ring> QExp<R> {
    /// Exact Laurent polynomial `sum coeffs[i] q^((min_exp+i)/denom)`.
    pub fn exact(denom: i64, min_exp: i64, coeffs: Vec<R>) -> Self {
        assert!(denom >= 1, "denominator must be positive");
        Self { denom, min_exp, coeffs, order: None }.normalize()
    }

    /// Series known up to (not including) `q^(order/denom)`.
    /// Coefficients past the order are dropped, missing ones are zero.
    pub fn truncated(denom: i64, min_exp: i64, mut coeffs: Vec<R>, order: i64) -> Self {
        assert!(denom >= 1, "denominator must be positive");
        let want = (order - min_exp).max(0) as usize;
        coeffs.resize(want, R::zero());
        let min_exp = min_exp.min(order);
        Self { denom, min_exp, coeffs, order: Some(order) }.normalize()
    }

    /// Integer-exponent series `c_0 + c_1 q + ...` truncated at `q^order`.
    pub fn from_coeffs(coeffs: Vec<R>, order: i64) -> Self {
        Self::truncated(1, 0, coeffs, order)
    }

    pub fn constant(c: R) -> Self {
        Self::exact(1, 0, vec![c])
    }

    /// `c q^(num/den)`.
    pub fn monomial(c: R, num: i64, den: i64) -> Self {
        Self::exact(den, num, vec![c])
    }

    /// `O(q^(num/den))`, a series with no known nonzero coefficients.
    pub fn big_o(num: i64, den: i64) -> Self {
        Self::truncated(den, num, vec![], num)
    }

    pub fn denom(&self) -> i64 {
        self.denom
    }

    pub fn min_exp(&self) -> i64 {
        self.min_exp
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    /// Truncation order numerator (over `denom`), `None` when exact.
    pub fn order(&self) -> Option<i64> {
        self.order
    }

    pub fn is_exact(&self) -> bool {
        self.order.is_none()
    }

    /// Truncation order as a rational exponent of q.
    pub fn order_q(&self) -> Option<Rational> {
        self.order.map(|o| Rational::new(o.into(), self.denom.into()))
    }

    /// Lowest exponent with a nonzero coefficient (or the truncation order
    /// when nothing is known), as a numerator over `denom`.
    pub fn valuation(&self) -> Option<i64> {
        if self.coeffs.is_empty() {
            self.order
        } else {
            Some(self.min_exp)
        }
    }

    /// Coefficient of `q^(num/den)`; `None` at or beyond truncation.
    pub fn coeff_frac(&self, num: i64, den: i64) -> Option<R> {
        // exponent num/den in units of 1/self.denom
        let scaled = num * self.denom;
        if let Some(o) = self.order {
            if scaled >= o * den {
                return None;
            }
        }
        if scaled % den != 0 {
            return Some(R::zero());
        }
        let e = scaled / den;
        let idx = e - self.min_exp;
        if idx < 0 || idx as usize >= self.coeffs.len() {
            Some(R::zero())
        } else {
            Some(self.coeffs[idx as usize].clone())
        }
    }

    /// Coefficient of `q^n`; `None` at or beyond truncation.
    pub fn coeff(&self, n: i64) -> Option<R> {
        self.coeff_frac(n, 1)
    }

    /// Iterator over `(exponent numerator, coefficient)` of stored entries.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &R)> {
        self.coeffs.iter().enumerate().map(move |(i, c)| (self.min_exp + i as i64, c))
    }

    fn normalize(mut self) -> Self {
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.min_exp += lead as i64;
        }
        match self.order {
            None => {
                while self.coeffs.last().is_some_and(|c| c.is_zero()) {
                    self.coeffs.pop();
                }
                if self.coeffs.is_empty() {
                    self.min_exp = 0;
                    self.denom = 1;
                }
            }
            Some(o) => {
                if self.coeffs.is_empty() {
                    self.min_exp = o;
                }
            }
        }
        self.reduce_denom()
    }

    fn reduce_denom(mut self) -> Self {
        if self.denom == 1 {
            return self;
        }
        let mut g = self.denom;
        if let Some(o) = self.order {
            g = g.gcd(&o);
        }
        for (e, c) in self.terms() {
            if g == 1 {
                break;
            }
            if !c.is_zero() {
                g = g.gcd(&e);
            }
        }
        if self.coeffs.is_empty() {
            g = g.gcd(&self.min_exp);
        }
        if g <= 1 {
            return self;
        }
        let min_exp = self.min_exp / g;
        let mut coeffs = Vec::with_capacity(self.coeffs.len() / g as usize + 1);
        for (i, c) in self.coeffs.drain(..).enumerate() {
            if i as i64 % g == 0 {
                coeffs.push(c);
            }
        }
        if let Some(o) = self.order {
            coeffs.truncate((o / g - min_exp).max(0) as usize);
        }
        self.denom /= g;
        self.min_exp = min_exp;
        self.order = self.order.map(|o| o / g);
        self.coeffs = coeffs;
        self
    }

    /// Same series written over the denominator `l` (a multiple of `denom`).
    fn rescaled(&self, l: i64) -> (i64, Vec<R>, Option<i64>) {
        let f = l / self.denom;
        if f == 1 {
            return (self.min_exp, self.coeffs.clone(), self.order);
        }
        let mut out = Vec::new();
        if !self.coeffs.is_empty() {
            out = vec![R::zero(); (self.coeffs.len() - 1) * f as usize + 1];
            for (i, c) in self.coeffs.iter().enumerate() {
                out[i * f as usize] = c.clone();
            }
        }
        let order = self.order.map(|o| o * f);
        if let Some(o) = order {
            out.resize((o - self.min_exp * f).max(0) as usize, R::zero());
        }
        (self.min_exp * f, out, order)
    }

    /// Drop everything at or beyond `q^(num/den)`.
    pub fn truncate_frac(&self, num: i64, den: i64) -> Self {
        let l = self.denom.lcm(&den);
        let (m, c, o) = self.rescaled(l);
        let new_o = num * (l / den);
        let o = o.map_or(new_o, |x| x.min(new_o));
        Self::truncated(l, m, c, o)
    }

    /// Drop everything at or beyond `q^order`.
    pub fn truncate(&self, order: i64) -> Self {
        self.truncate_frac(order, 1)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, true)
    }

    fn combine(&self, other: &Self, negate: bool) -> Self {
        let l = self.denom.lcm(&other.denom);
        let (ma, ca, oa) = self.rescaled(l);
        let (mb, cb, ob) = other.rescaled(l);
        let order = match (oa, ob) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, None) => x,
            (None, y) => y,
        };
        let lo = if ca.is_empty() { mb } else if cb.is_empty() { ma } else { ma.min(mb) };
        let lo = match order {
            Some(o) => lo.min(o),
            None => lo,
        };
        let hi = match order {
            Some(o) => o,
            None => (ma + ca.len() as i64).max(mb + cb.len() as i64),
        };
        let mut out = vec![R::zero(); (hi - lo).max(0) as usize];
        for (i, c) in ca.iter().enumerate() {
            let e = ma + i as i64;
            if e < hi {
                out[(e - lo) as usize] = c.clone();
            }
        }
        for (i, c) in cb.iter().enumerate() {
            let e = mb + i as i64;
            if e < hi {
                let slot = &mut out[(e - lo) as usize];
                *slot = if negate { slot.sub(c) } else { slot.add(c) };
            }
        }
        Self { denom: l, min_exp: lo, coeffs: out, order }.normalize()
    }

    pub fn neg(&self) -> Self {
        Self {
            denom: self.denom,
            min_exp: self.min_exp,
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
            order: self.order,
        }
    }

    /// Multiply every coefficient by `c`.
    pub fn scale_by(&self, c: &R) -> Self {
        Self {
            denom: self.denom,
            min_exp: self.min_exp,
            coeffs: self.coeffs.iter().map(|x| x.mul(c)).collect(),
            order: self.order,
        }
        .normalize()
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        Self {
            denom: self.denom,
            min_exp: self.min_exp,
            coeffs: self.coeffs.iter().map(|x| x.scale(r)).collect(),
            order: self.order,
        }
        .normalize()
    }

    /// Multiply by `q^(num/den)`.
    pub fn shift(&self, num: i64, den: i64) -> Self {
        let l = self.denom.lcm(&den);
        let (m, c, o) = self.rescaled(l);
        let s = num * (l / den);
        Self { denom: l, min_exp: m + s, coeffs: c, order: o.map(|x| x + s) }.normalize()
    }

    pub fn mul(&self, other: &Self) -> Self {
        if (self.is_exact() && self.coeffs.is_empty()) || (other.is_exact() && other.coeffs.is_empty()) {
            return Self::exact(1, 0, vec![]);
        }
        let l = self.denom.lcm(&other.denom);
        let (ma, ca, oa) = self.rescaled(l);
        let (mb, cb, ob) = other.rescaled(l);
        // valuations in the common denominator
        let va = if ca.is_empty() { oa.unwrap_or(ma) } else { ma };
        let vb = if cb.is_empty() { ob.unwrap_or(mb) } else { mb };
        let order = match (oa, ob) {
            (None, None) => None,
            (Some(x), None) => Some(x + vb),
            (None, Some(y)) => Some(y + va),
            (Some(x), Some(y)) => Some((x + vb).min(y + va)),
        };
        let lo = ma + mb;
        let full = if ca.is_empty() || cb.is_empty() { 0 } else { ca.len() + cb.len() - 1 };
        let len = match order {
            Some(o) => (o - lo).max(0) as usize,
            None => full,
        };
        let mut out = vec![R::zero(); len];
        for (i, x) in ca.iter().enumerate() {
            if i >= len {
                break;
            }
            if x.is_zero() {
                continue;
            }
            for (j, y) in cb.iter().enumerate().take(len - i) {
                if y.is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].add(&x.mul(y));
            }
        }
        let min_exp = match order {
            Some(o) => lo.min(o),
            None => lo,
        };
        if min_exp != lo {
            out.clear();
        }
        Self { denom: l, min_exp, coeffs: out, order }.normalize()
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(R::one());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Multiplicative inverse. Exact series must be monomials; truncated
    /// series keep their relative precision.
    pub fn inverse(&self) -> Result<Self, QSeriesError> {
        if self.coeffs.is_empty() {
            return Err(QSeriesError::NotInvertible("series has no nonzero leading coefficient".into()));
        }
        let lead_inv = self.coeffs[0]
            .inverse()
            .ok_or_else(|| QSeriesError::NotInvertible("leading coefficient is not a unit".into()))?;
        let v = self.min_exp;
        match self.order {
            None => {
                if self.coeffs.len() != 1 {
                    return Err(QSeriesError::NeedsOrder);
                }
                Ok(Self::exact(self.denom, -v, vec![lead_inv]))
            }
            Some(o) => {
                let p = (o - v) as usize;
                let a = &self.coeffs;
                let mut inv: Vec<R> = Vec::with_capacity(p);
                inv.push(lead_inv.clone());
                for k in 1..p {
                    let mut s = R::zero();
                    for j in 1..=k.min(a.len() - 1) {
                        if !a[j].is_zero() {
                            s = s.add(&a[j].mul(&inv[k - j]));
                        }
                    }
                    inv.push(s.mul(&lead_inv).neg());
                }
                Ok(Self { denom: self.denom, min_exp: -v, coeffs: inv, order: Some(-v + p as i64) }.normalize())
            }
        }
    }

    /// Inverse of this series regarded as known only below `q^order`.
    pub fn inv_to(&self, order: i64) -> Result<Self, QSeriesError> {
        self.truncate(order).inverse()
    }

    /// `self / other`. When `other` is an exact non-monomial the dividend's
    /// precision decides how far `other` is expanded.
    pub fn div(&self, other: &Self) -> Result<Self, QSeriesError> {
        if other.coeffs.is_empty() {
            return Err(QSeriesError::NotInvertible("division by a series with zero leading coefficient".into()));
        }
        if other.is_exact() && other.coeffs.len() > 1 {
            let Some(oa) = self.order else {
                return Err(QSeriesError::NeedsOrder);
            };
            let l = self.denom.lcm(&other.denom);
            let fa = l / self.denom;
            let va = self.valuation().unwrap_or(oa) * fa;
            let vb = other.min_exp * (l / other.denom);
            let b = other.truncate_frac(vb + (oa * fa - va), l);
            return Ok(self.mul(&b.inverse()?));
        }
        Ok(self.mul(&other.inverse()?))
    }

    /// Divide by an exact series, expanding the quotient up to `q^order`.
    pub fn div_to(&self, other: &Self, order: i64) -> Result<Self, QSeriesError> {
        let num = self.truncate(order);
        num.div(other)
    }

    /// `q d/dq`.
    pub fn theta(&self) -> Self {
        let d = rat_int(self.denom);
        Self {
            denom: self.denom,
            min_exp: self.min_exp,
            coeffs: self
                .terms()
                .map(|(e, c)| c.scale(&(rat_int(e) / d.clone())))
                .collect(),
            order: self.order,
        }
        .normalize()
    }

    fn require_truncated(&self) -> Result<i64, QSeriesError> {
        self.order.ok_or(QSeriesError::NeedsOrder)
    }

    /// `exp(f)` for a series with only positive exponents.
    pub fn exp(&self) -> Result<Self, QSeriesError> {
        if !self.coeffs.is_empty() && self.min_exp <= 0 {
            return Err(QSeriesError::ConstantTerm { expected: "zero constant term and no negative powers" });
        }
        if self.coeffs.is_empty() {
            return Ok(match self.order {
                None => Self::constant(R::one()),
                Some(o) => Self::truncated(self.denom, 0, vec![R::one()], o.max(0)),
            });
        }
        let o = self.require_truncated()?;
        let n = o.max(0) as usize;
        // n E_n = sum_k k f_k E_{n-k}, indices are exponent numerators
        let f: Vec<R> = (0..n as i64).map(|e| self.coeff_num(e)).collect();
        let mut e_out: Vec<R> = Vec::with_capacity(n);
        if n > 0 {
            e_out.push(R::one());
        }
        for m in 1..n {
            let mut s = R::zero();
            for k in 1..=m {
                if !f[k].is_zero() {
                    s = s.add(&f[k].mul(&e_out[m - k]).scale(&rat_int(k as i64)));
                }
            }
            e_out.push(s.scale(&Rational::new(1.into(), (m as i64).into())));
        }
        Ok(Self::truncated(self.denom, 0, e_out, o))
    }

    /// `log(f)` for a series `1 + (positive powers)`.
    pub fn log(&self) -> Result<Self, QSeriesError> {
        let ok = !self.coeffs.is_empty() && self.min_exp == 0 && self.coeffs[0].is_one();
        if !ok {
            return Err(QSeriesError::ConstantTerm { expected: "constant term one and no negative powers" });
        }
        if self.is_exact() && self.coeffs.len() == 1 {
            return Ok(Self::exact(1, 0, vec![]));
        }
        let o = self.require_truncated()?;
        let g = self.theta().mul(&self.inverse()?);
        let coeffs: Vec<R> = (0..o.max(0))
            .map(|e| {
                if e == 0 {
                    R::zero()
                } else {
                    g.coeff_num(e).scale(&Rational::new(1.into(), e.into()))
                }
            })
            .collect();
        Ok(Self::truncated(self.denom, 0, coeffs, o))
    }

    /// Coefficient at exponent numerator `e` over the current denominator,
    /// zero when not stored.
    fn coeff_num(&self, e: i64) -> R {
        let idx = e - self.min_exp;
        if idx < 0 || idx as usize >= self.coeffs.len() {
            R::zero()
        } else {
            self.coeffs[idx as usize].clone()
        }
    }

    /// Apply `f` to every coefficient.
    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> QExp<S> {
        QExp { denom: self.denom, min_exp: self.min_exp, coeffs: self.coeffs.iter().map(f).collect(), order: self.order }
            .normalize()
    }

    /// Largest coefficient magnitude among the stored entries.
    pub fn max_magnitude(&self) -> f64 {
        self.coeffs.iter().map(|c| c.magnitude()).fold(0.0, f64::max)
    }
}

/// Coefficients that can be evaluated as complex numbers.
pub trait ToComplex {
    fn to_c64(&self) -> Complex64;
}

impl ToComplex for Rational {
    fn to_c64(&self) -> Complex64 {
        Complex64::new(rat_to_f64(self), 0.0)
    }
}

impl ToComplex for Complex64 {
    fn to_c64(&self) -> Complex64 {
        *self
    }
}

impl<R: Ring + ToComplex> QExp<R> {
    /// Evaluate at `q = exp(2 pi i tau)` using `q^(e/D) = exp(2 pi i tau e / D)`.
    /// Summation runs in increasing exponent order.
    pub fn eval_at_tau(&self, tau: Complex64) -> Complex64 {
        let step = (Complex64::new(0.0, 2.0 * PI) * tau / self.denom as f64).exp();
        let mut qp = (Complex64::new(0.0, 2.0 * PI) * tau * (self.min_exp as f64 / self.denom as f64)).exp();
        let mut acc = Complex64::new(0.0, 0.0);
        for c in &self.coeffs {
            if !c.is_zero() {
                acc += c.to_c64() * qp;
            }
            qp *= step;
        }
        acc
    }
}

impl<R: Ring> Ring for QExp<R> {
    fn zero() -> Self {
        Self::exact(1, 0, vec![])
    }
    fn one() -> Self {
        Self::constant(R::one())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn add(&self, o: &Self) -> Self {
        QExp::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        QExp::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        QExp::mul(self, o)
    }
    fn neg(&self) -> Self {
        QExp::neg(self)
    }
    fn from_rational(r: &Rational) -> Self {
        Self::constant(R::from_rational(r))
    }
    fn inverse(&self) -> Option<Self> {
        QExp::inverse(self).ok()
    }
    fn magnitude(&self) -> f64 {
        self.max_magnitude()
    }
    fn scale(&self, r: &Rational) -> Self {
        self.scale_rational(r)
    }
    fn is_one(&self) -> bool {
        self.is_exact() && self.min_exp == 0 && self.coeffs.len() == 1 && self.coeffs[0].is_one()
            || (!self.is_exact() && QExp::sub(self, &Self::one()).coeffs.is_empty())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::ring::rat;

    fn q(coeffs: &[i64], order: i64) -> QExp<Rational> {
        QExp::from_coeffs(coeffs.iter().map(|&c| rat_int(c)).collect(), order)
    }

    #[test]
    fn product_of_conjugates() {
        let a = QExp::exact(1, 0, vec![rat_int(1), rat_int(1)]);
        let b = QExp::exact(1, 0, vec![rat_int(1), rat_int(-1)]);
        let p = a.mul(&b);
        assert_eq!(p, QExp::exact(1, 0, vec![rat_int(1), rat_int(0), rat_int(-1)]));
        let pt = a.truncate(3).mul(&b.truncate(3));
        assert_eq!(pt.order(), Some(3));
        assert_eq!(pt.coeff(2), Some(rat_int(-1)));
        assert_eq!(pt.coeff(3), None);
    }

    #[test]
    fn geometric_series() {
        let one = QExp::<Rational>::one().truncate(6);
        let g = one.div(&QExp::exact(1, 0, vec![rat_int(1), rat_int(-1)])).unwrap();
        assert_eq!(g, q(&[1, 1, 1, 1, 1, 1], 6));
    }

    #[test]
    fn half_powers_normalize() {
        let h = QExp::monomial(rat_int(1), 1, 2);
        let p = h.mul(&h);
        assert_eq!(p.denom(), 1);
        assert_eq!(p, QExp::monomial(rat_int(1), 1, 1));
    }

    #[test]
    fn product_order_rule() {
        // (q + O(q^4)) * (q^2 + O(q^3)) has order min(4+2, 3+1) = 4
        let a = QExp::truncated(1, 1, vec![rat_int(1)], 4);
        let b = QExp::truncated(1, 2, vec![rat_int(1)], 3);
        assert_eq!(a.mul(&b).order(), Some(4));
    }

    #[test]
    fn mixed_denominators() {
        let a = QExp::truncated(2, 1, vec![rat_int(1)], 5); // q^(1/2) + O(q^(5/2))
        let b = QExp::truncated(3, 0, vec![rat_int(1), rat_int(1)], 6); // 1 + q^(1/3) + O(q^2)
        let s = a.add(&b);
        assert_eq!(s.denom(), 6);
        assert_eq!(s.order_q(), Some(rat(2, 1)));
        assert_eq!(s.coeff_frac(1, 2), Some(rat_int(1)));
        assert_eq!(s.coeff_frac(1, 3), Some(rat_int(1)));
        assert_eq!(s.coeff_frac(5, 6), Some(rat_int(0)));
    }

    #[test]
    fn mercator() {
        let l = q(&[1, 1], 6).log().unwrap();
        assert_eq!(l.coeff(1), Some(rat(1, 1)));
        assert_eq!(l.coeff(2), Some(rat(-1, 2)));
        assert_eq!(l.coeff(3), Some(rat(1, 3)));
        assert_eq!(l.coeff(5), Some(rat(1, 5)));
        assert!(QExp::<Rational>::zero().exp().unwrap().is_one());
    }

    #[test]
    fn exp_needs_positive_exponents() {
        assert!(q(&[1, 1], 5).exp().is_err());
        assert!(q(&[2, 1], 5).log().is_err());
        assert!(QExp::exact(1, 0, vec![rat_int(0), rat_int(1)]).exp().is_err());
    }

    #[test]
    fn laurent_inverse() {
        let d = QExp::truncated(1, 1, vec![rat_int(1), rat_int(-24), rat_int(252)], 4);
        let inv = d.inverse().unwrap();
        assert_eq!(inv.min_exp(), -1);
        let one = d.mul(&inv);
        assert!(one.is_one());
        assert_eq!(one.order(), Some(3));
    }

    #[test]
    fn zero_leading_division_errors() {
        let z = QExp::<Rational>::big_o(3, 1);
        assert!(q(&[1], 3).div(&z).is_err());
    }

    #[test]
    fn eval_matches_direct() {
        let s = QExp::truncated(2, -1, vec![rat_int(1), rat_int(2), rat_int(3)], 2);
        let tau = Complex64::new(0.1, 1.2);
        let qh = (Complex64::new(0.0, PI) * tau).exp();
        let direct = qh.inv() + 2.0 + 3.0 * qh;
        assert!((s.eval_at_tau(tau) - direct).norm() < 1e-14);
    }
}
