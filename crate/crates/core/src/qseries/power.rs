use super::ring::{rat, Rational, Ring};
use super::QSeriesError;

/// Power series `c_0 + c_1 x + ... + c_{N-1} x^{N-1} + O(x^N)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerSeries<R> {
    coeffs: Vec<R>,
}

impl<R: Ring> PowerSeries<R> {
    /// Series whose truncation order is the number of coefficients given.
    pub fn new(coeffs: Vec<R>) -> Self {
        Self { coeffs }
    }

    pub fn with_order(mut coeffs: Vec<R>, order: usize) -> Self {
        coeffs.resize(order, R::zero());
        Self { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self { coeffs: vec![R::zero(); order] }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(R::one(), order)
    }

    pub fn constant(c: R, order: usize) -> Self {
        let mut s = Self::zero(order);
        if order > 0 {
            s.coeffs[0] = c;
        }
        s
    }

    /// The variable `x`.
    pub fn var(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order > 1 {
            s.coeffs[1] = R::one();
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<R> {
        self.coeffs
    }

    /// Coefficient of `x^i`. Panics when `i` is at or beyond the order.
    pub fn coeff(&self, i: usize) -> R {
        assert!(i < self.coeffs.len(), "coefficient x^{i} is beyond truncation order {}", self.coeffs.len());
        self.coeffs[i].clone()
    }

    pub fn truncate(&self, order: usize) -> Self {
        let n = order.min(self.order());
        Self { coeffs: self.coeffs[..n].to_vec() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.order().min(o.order());
        Self { coeffs: (0..n).map(|i| self.coeffs[i].add(&o.coeffs[i])).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.order().min(o.order());
        Self { coeffs: (0..n).map(|i| self.coeffs[i].sub(&o.coeffs[i])).collect() }
    }

    pub fn neg(&self) -> Self {
        self.map(|c| c.neg())
    }

    pub fn scale(&self, r: &Rational) -> Self {
        self.map(|c| c.scale(r))
    }

    pub fn scale_by(&self, c: &R) -> Self {
        self.map(|x| x.mul(c))
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> PowerSeries<S> {
        PowerSeries { coeffs: self.coeffs.iter().map(f).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.order().min(o.order());
        let mut out = vec![R::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate().take(n) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(n - i) {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Self { coeffs: out }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.order());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiply by `x^k`, keeping the order.
    pub fn shift_up(&self, k: usize) -> Self {
        let n = self.order();
        let mut out = vec![R::zero(); n];
        for i in 0..n.saturating_sub(k) {
            out[i + k] = self.coeffs[i].clone();
        }
        Self { coeffs: out }
    }

    /// Divide by `x^k`; the lowest `k` coefficients must vanish.
    pub fn shift_down(&self, k: usize) -> Result<Self, QSeriesError> {
        if self.coeffs.iter().take(k).any(|c| !c.is_zero()) {
            return Err(QSeriesError::NotInvertible(format!("series is not divisible by x^{k}")));
        }
        Ok(Self { coeffs: self.coeffs.iter().skip(k).cloned().collect() })
    }

    pub fn derivative(&self) -> Self {
        let n = self.order();
        Self {
            coeffs: (1..n).map(|i| self.coeffs[i].scale(&rat(i as i64, 1))).collect(),
        }
    }

    pub fn inverse(&self) -> Result<Self, QSeriesError> {
        let n = self.order();
        if n == 0 {
            return Ok(self.clone());
        }
        let c0 = self.coeffs[0]
            .inverse()
            .ok_or_else(|| QSeriesError::NotInvertible("constant term is not a unit".into()))?;
        let mut inv = Vec::with_capacity(n);
        inv.push(c0.clone());
        for k in 1..n {
            let mut s = R::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    s = s.add(&self.coeffs[j].mul(&inv[k - j]));
                }
            }
            inv.push(s.mul(&c0).neg());
        }
        Ok(Self { coeffs: inv })
    }

    pub fn exp(&self) -> Result<Self, QSeriesError> {
        let n = self.order();
        if n == 0 {
            return Ok(self.clone());
        }
        if !self.coeffs[0].is_zero() {
            return Err(QSeriesError::ConstantTerm { expected: "zero constant term" });
        }
        let mut e = Vec::with_capacity(n);
        e.push(R::one());
        for m in 1..n {
            let mut s = R::zero();
            for k in 1..=m {
                if !self.coeffs[k].is_zero() {
                    s = s.add(&self.coeffs[k].mul(&e[m - k]).scale(&rat(k as i64, 1)));
                }
            }
            e.push(s.scale(&rat(1, m as i64)));
        }
        Ok(Self { coeffs: e })
    }

    pub fn log(&self) -> Result<Self, QSeriesError> {
        let n = self.order();
        if n == 0 {
            return Ok(self.clone());
        }
        if !self.coeffs[0].is_one() {
            return Err(QSeriesError::ConstantTerm { expected: "constant term one" });
        }
        let q = self.derivative().mul(&self.truncate(n - 1).inverse()?);
        let mut out = vec![R::zero(); n];
        for m in 1..n {
            out[m] = q.coeffs[m - 1].scale(&rat(1, m as i64));
        }
        Ok(Self { coeffs: out })
    }

    /// `self(g(x))` for `g(0) = 0`, truncated at the smaller order.
    pub fn compose(&self, g: &Self) -> Result<Self, QSeriesError> {
        let n = self.order().min(g.order());
        if n == 0 {
            return Ok(Self::zero(0));
        }
        if !g.coeffs[0].is_zero() {
            return Err(QSeriesError::NonZeroAtOrigin);
        }
        let g = g.truncate(n);
        let mut acc = Self::constant(self.coeffs[n - 1].clone(), n);
        for i in (0..n - 1).rev() {
            acc = acc.mul(&g);
            acc.coeffs[0] = acc.coeffs[0].add(&self.coeffs[i]);
        }
        Ok(acc)
    }

    /// Compositional inverse by Lagrange inversion:
    /// `[x^n] f^{-1} = (1/n) [w^(n-1)] (w / f(w))^n`.
    pub fn revert(&self) -> Result<Self, QSeriesError> {
        let n = self.order();
        if n < 2 {
            return Ok(self.clone());
        }
        if !self.coeffs[0].is_zero() {
            return Err(QSeriesError::NonZeroAtOrigin);
        }
        if self.coeffs[1].inverse().is_none() {
            return Err(QSeriesError::NonInvertibleLinear);
        }
        // f(w)/w has order n-1, which is enough for the coefficients below
        let phi = self.shift_down(1)?.inverse()?;
        let mut out = vec![R::zero(); n];
        let mut p = PowerSeries::one(n - 1);
        for k in 1..n {
            p = p.mul(&phi);
            out[k] = p.coeffs[k - 1].scale(&rat(1, k as i64));
        }
        Ok(Self { coeffs: out })
    }

    /// Largest coefficient magnitude, used for residual reports.
    pub fn max_magnitude(&self) -> f64 {
        self.coeffs.iter().map(|c| c.magnitude()).fold(0.0, f64::max)
    }
}
