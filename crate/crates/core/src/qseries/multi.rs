use super::power::PowerSeries;
use super::ring::{rat, Rational, Ring};
use super::QSeriesError;
use std::collections::BTreeMap;

/// Multivariate power series truncated in total degree: every monomial of
/// total degree `< order` is known.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiSeries<R> {
    nvars: usize,
    order: u32,
    terms: BTreeMap<Vec<u32>, R>,
}

/// Bivariate series `F(x, y)`.
pub type BiSeries<R> = MultiSeries<R>;

impl<R: Ring> MultiSeries<R> {
    pub fn zero(nvars: usize, order: u32) -> Self {
        Self { nvars, order, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, order: u32, c: R) -> Self {
        let mut s = Self::zero(nvars, order);
        s.insert(vec![0; nvars], c);
        s
    }

    pub fn one(nvars: usize, order: u32) -> Self {
        Self::constant(nvars, order, R::one())
    }

    /// The `i`-th variable.
    pub fn var(nvars: usize, order: u32, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(nvars, order, e, R::one())
    }

    pub fn monomial(nvars: usize, order: u32, exps: Vec<u32>, c: R) -> Self {
        let mut s = Self::zero(nvars, order);
        s.insert(exps, c);
        s
    }

    /// Embed a univariate series as a function of variable `i`.
    pub fn from_univariate(nvars: usize, order: u32, f: &PowerSeries<R>, i: usize) -> Self {
        let mut s = Self::zero(nvars, order.min(f.order() as u32));
        for (k, c) in f.coeffs().iter().enumerate() {
            let mut e = vec![0; nvars];
            e[i] = k as u32;
            s.insert(e, c.clone());
        }
        s
    }

    fn insert(&mut self, exps: Vec<u32>, c: R) {
        let deg: u32 = exps.iter().sum();
        if deg >= self.order || c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exps) {
            Some(v) => {
                *v = v.add(&c);
                if v.is_zero() {
                    self.terms.remove(&exps);
                }
            }
            None => {
                self.terms.insert(exps, c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, R> {
        &self.terms
    }

    /// Coefficient of a monomial. Panics when beyond the truncation order.
    pub fn coeff(&self, exps: &[u32]) -> R {
        assert!(exps.iter().sum::<u32>() < self.order, "monomial beyond truncation order");
        self.terms.get(exps).cloned().unwrap_or_else(R::zero)
    }

    pub fn constant_term(&self) -> R {
        self.terms.get(&vec![0; self.nvars]).cloned().unwrap_or_else(R::zero)
    }

    pub fn truncate(&self, order: u32) -> Self {
        let order = order.min(self.order);
        Self {
            nvars: self.nvars,
            order,
            terms: self.terms.iter().filter(|(k, _)| k.iter().sum::<u32>() < order).map(|(k, v)| (k.clone(), v.clone())).collect(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.nvars, o.nvars);
        let mut s = self.truncate(o.order);
        for (k, v) in &o.terms {
            s.insert(k.clone(), v.clone());
        }
        s
    }

    pub fn neg(&self) -> Self {
        self.map(|c| c.neg())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, r: &Rational) -> Self {
        self.map(|c| c.scale(r))
    }

    pub fn scale_by(&self, c: &R) -> Self {
        self.map(|x| x.mul(c))
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> MultiSeries<S> {
        let mut out = MultiSeries::zero(self.nvars, self.order);
        for (k, v) in &self.terms {
            out.insert(k.clone(), f(v));
        }
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.nvars, o.nvars);
        let order = self.order.min(o.order);
        let mut out = Self::zero(self.nvars, order);
        for (ka, va) in &self.terms {
            let da: u32 = ka.iter().sum();
            if da >= order {
                continue;
            }
            for (kb, vb) in &o.terms {
                let db: u32 = kb.iter().sum();
                if da + db >= order {
                    continue;
                }
                let k: Vec<u32> = ka.iter().zip(kb).map(|(x, y)| x + y).collect();
                out.insert(k, va.mul(vb));
            }
        }
        out
    }

    /// Homogeneous component of total degree `d`.
    pub fn homogeneous(&self, d: u32) -> BTreeMap<Vec<u32>, R> {
        self.terms.iter().filter(|(k, _)| k.iter().sum::<u32>() == d).map(|(k, v)| (k.clone(), v.clone())).collect()
    }

    /// `f(self)` for a univariate `f` and `self` without constant term.
    pub fn compose_into(&self, f: &PowerSeries<R>) -> Result<Self, QSeriesError> {
        if !self.constant_term().is_zero() {
            return Err(QSeriesError::NonZeroAtOrigin);
        }
        let n = f.order();
        let order = self.order.min(n as u32);
        if n == 0 {
            return Ok(Self::zero(self.nvars, 0));
        }
        let g = self.truncate(order);
        let mut acc = Self::constant(self.nvars, order, f.coeff(n - 1));
        for i in (0..n - 1).rev() {
            acc = acc.mul(&g).add(&Self::constant(self.nvars, order, f.coeff(i)));
        }
        Ok(acc)
    }

    /// `self(args[0], ..., args[k-1])` where every argument is a series in a
    /// common set of variables with zero constant term.
    pub fn substitute(&self, args: &[MultiSeries<R>]) -> Result<MultiSeries<R>, QSeriesError> {
        assert_eq!(args.len(), self.nvars, "one argument per variable");
        let m = args[0].nvars;
        let mut order = self.order;
        for a in args {
            if !a.constant_term().is_zero() {
                return Err(QSeriesError::NonZeroAtOrigin);
            }
            order = order.min(a.order);
        }
        // powers[i][p] = args[i]^p
        let maxdeg = self.order as usize;
        let powers: Vec<Vec<MultiSeries<R>>> = args
            .iter()
            .map(|a| {
                let a = a.truncate(order);
                let mut v = vec![MultiSeries::one(m, order)];
                for p in 1..maxdeg {
                    let next = v[p - 1].mul(&a);
                    v.push(next);
                }
                v
            })
            .collect();
        let mut out = MultiSeries::zero(m, order);
        for (k, c) in &self.terms {
            let mut t = MultiSeries::constant(m, order, c.clone());
            for (i, &e) in k.iter().enumerate() {
                if e > 0 {
                    t = t.mul(&powers[i][e as usize]);
                }
            }
            out = out.add(&t);
        }
        Ok(out)
    }

    /// `log(self)` for constant term one.
    pub fn log(&self) -> Result<Self, QSeriesError> {
        if !self.constant_term().is_one() {
            return Err(QSeriesError::ConstantTerm { expected: "constant term one" });
        }
        let n = self.order as usize;
        let h = self.sub(&Self::one(self.nvars, self.order));
        let mut l = vec![Rational::from_integer(0.into()); n];
        for (k, slot) in l.iter_mut().enumerate().skip(1) {
            *slot = rat(if k % 2 == 1 { 1 } else { -1 }, k as i64);
        }
        h.compose_into(&PowerSeries::new(l.iter().map(R::from_rational).collect()))
    }

    /// `exp(self)` for zero constant term.
    pub fn exp(&self) -> Result<Self, QSeriesError> {
        let n = self.order as usize;
        let mut c = Vec::with_capacity(n);
        let mut f = Rational::from_integer(1.into());
        for k in 0..n {
            if k > 0 {
                f /= Rational::from_integer((k as i64).into());
            }
            c.push(R::from_rational(&f));
        }
        self.compose_into(&PowerSeries::new(c))
    }

    /// Exchange two variables.
    pub fn swap_vars(&self, i: usize, j: usize) -> Self {
        let mut out = Self::zero(self.nvars, self.order);
        for (k, v) in &self.terms {
            let mut k = k.clone();
            k.swap(i, j);
            out.insert(k, v.clone());
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_magnitude(&self) -> f64 {
        self.terms.values().map(|c| c.magnitude()).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::ring::rat_int;

    #[test]
    fn substitute_additive_law() {
        let o = 6;
        let x = MultiSeries::<Rational>::var(2, o, 0);
        let y = MultiSeries::<Rational>::var(2, o, 1);
        let f = x.add(&y).sub(&x.mul(&y));
        // f(f(x,y),z) for the multiplicative law expands to the symmetric form
        let x3 = MultiSeries::var(3, o, 0);
        let y3 = MultiSeries::var(3, o, 1);
        let z3 = MultiSeries::var(3, o, 2);
        let inner = f.substitute(&[x3.clone(), y3.clone()]).unwrap();
        let lhs = f.substitute(&[inner, z3.clone()]).unwrap();
        assert_eq!(lhs.coeff(&[1, 1, 1]), rat_int(1));
        assert_eq!(lhs.coeff(&[1, 1, 0]), rat_int(-1));
    }

    #[test]
    fn log_exp_roundtrip() {
        let o = 7;
        let x = MultiSeries::<Rational>::var(2, o, 0);
        let y = MultiSeries::<Rational>::var(2, o, 1);
        let h = x.scale(&rat(3, 2)).add(&x.mul(&y)).sub(&y.mul(&y));
        let back = h.exp().unwrap().log().unwrap();
        assert_eq!(back, h);
    }
}
