use super::power::PowerSeries;
use super::qexp::QExp;
use super::ring::{rat, rat_int, Rational, Ring};
use std::collections::BTreeMap;

/// Laurent polynomial in half-integer powers of `y_1, ..., y_n`.
///
/// Exponent vectors are stored doubled: the key `[3, -1]` means
/// `y_1^(3/2) y_2^(-1/2)`. Zero coefficients are never stored. Values with
/// fewer variables are padded with zero exponents when combined.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct YPoly {
    nvars: usize,
    terms: BTreeMap<Vec<i32>, Rational>,
}

impl YPoly {
    pub fn new(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    /// Single term `c * prod y_j^(twice[j]/2)`.
    pub fn term(c: Rational, twice: Vec<i32>) -> Self {
        let mut p = Self::new(twice.len());
        if !c.is_zero() {
            p.terms.insert(twice, c);
        }
        p
    }

    /// `y_j^(twice/2)` in `nvars` variables.
    pub fn y_pow(nvars: usize, j: usize, twice: i32) -> Self {
        let mut e = vec![0; nvars];
        e[j] = twice;
        Self::term(rat_int(1), e)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<i32>, Rational> {
        &self.terms
    }

    /// Coefficient at a doubled exponent vector.
    pub fn coeff(&self, twice: &[i32]) -> Rational {
        let mut k = twice.to_vec();
        k.resize(self.nvars.max(k.len()), 0);
        self.terms.get(&k).cloned().unwrap_or_else(Rational::zero)
    }

    fn padded(&self, n: usize) -> BTreeMap<Vec<i32>, Rational> {
        if n == self.nvars {
            return self.terms.clone();
        }
        self.terms
            .iter()
            .map(|(k, v)| {
                let mut k = k.clone();
                k.resize(n, 0);
                (k, v.clone())
            })
            .collect()
    }

    fn insert_add(map: &mut BTreeMap<Vec<i32>, Rational>, k: Vec<i32>, v: Rational) {
        *map.entry(k).or_insert_with(Rational::zero) += v;
    }

    fn cleaned(nvars: usize, mut terms: BTreeMap<Vec<i32>, Rational>) -> Self {
        terms.retain(|_, v| !v.is_zero());
        Self { nvars, terms }
    }

    /// Evaluate with every `y_j = 1`.
    pub fn at_one(&self) -> Rational {
        self.terms.values().fold(Rational::zero(), |a, b| a + b)
    }

    /// Substitute `y_j^(1/2) = exp(w_j / 2)` for a single variable and expand
    /// as a power series in `w` up to `w^(order-1)`.
    pub fn exp_substitute(&self, order: usize) -> PowerSeries<Rational> {
        assert!(self.nvars <= 1, "exp_substitute handles one variable");
        let mut out = vec![Rational::zero(); order];
        for (k, c) in &self.terms {
            let e = k.first().copied().unwrap_or(0);
            // exp(e w / 2) = sum (e/2)^m w^m / m!
            let half = rat(e as i64, 2);
            let mut t = c.clone();
            for (m, slot) in out.iter_mut().enumerate() {
                if m > 0 {
                    t = t * &half / rat_int(m as i64);
                }
                *slot += &t;
            }
        }
        PowerSeries::new(out)
    }
}

impl Ring for YPoly {
    fn zero() -> Self {
        Self::new(0)
    }
    fn one() -> Self {
        Self::term(rat_int(1), vec![])
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, o: &Self) -> Self {
        let n = self.nvars.max(o.nvars);
        let mut t = self.padded(n);
        for (k, v) in o.padded(n) {
            Self::insert_add(&mut t, k, v);
        }
        Self::cleaned(n, t)
    }
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    fn mul(&self, o: &Self) -> Self {
        let n = self.nvars.max(o.nvars);
        let a = self.padded(n);
        let b = o.padded(n);
        let mut t = BTreeMap::new();
        for (ka, va) in &a {
            for (kb, vb) in &b {
                let k: Vec<i32> = ka.iter().zip(kb).map(|(x, y)| x + y).collect();
                Self::insert_add(&mut t, k, va * vb);
            }
        }
        Self::cleaned(n, t)
    }
    fn neg(&self) -> Self {
        Self { nvars: self.nvars, terms: self.terms.iter().map(|(k, v)| (k.clone(), -v)).collect() }
    }
    fn from_rational(r: &Rational) -> Self {
        Self::term(r.clone(), vec![])
    }
    fn inverse(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (k, v) = self.terms.iter().next()?;
        if v.is_zero() {
            return None;
        }
        Some(Self::term(v.recip(), k.iter().map(|e| -e).collect()))
    }
    fn magnitude(&self) -> f64 {
        self.terms.values().map(|v| v.magnitude()).fold(0.0, f64::max)
    }
}

/// Evaluate every coefficient at `y = 1`.
pub fn qexp_at_y_one(f: &QExp<YPoly>) -> QExp<Rational> {
    f.map(|p| p.at_one())
}
