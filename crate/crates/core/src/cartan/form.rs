use crate::qseries::{rat, rat_int, Rational, Ring};
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CartanError {
    #[error("forms live on different spaces: {0} vs {1} planes")]
    PlaneMismatch(usize, usize),
    #[error("form is not rotation invariant (plane {plane})")]
    NotInvariant { plane: usize },
    #[error("plane {0} integrand has no Gaussian factor")]
    NotIntegrable(usize),
    #[error("shift for plane {plane} is a lattice point")]
    LatticeShift { plane: usize },
    #[error("invalid input: {0}")]
    Invalid(String),
}

/// Normalization of the rotation fields `V_j = c (x_j d/dy_j - y_j d/dx_j)`
/// with `c = scale * pi^pi_pow`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CartanConvention {
    pub scale: i64,
    pub pi_pow: i32,
}

impl Default for CartanConvention {
    /// `c = 2 pi`: the period-one rotation.
    fn default() -> Self {
        Self { scale: 2, pi_pow: 1 }
    }
}

impl CartanConvention {
    /// `c = 2`.
    pub fn integer() -> Self {
        Self { scale: 2, pi_pow: 0 }
    }

    /// Coefficient `B = 2 pi / c` of `dx ^ dy` in the Q-closed Thom form.
    pub fn mq_top(&self) -> (Rational, i32) {
        (rat(2, self.scale), 1 - self.pi_pow)
    }
}

/// One monomial: `pi^pi_pow beta^beta_pow z^lie x^coord e^{-pi sum g_j r_j^2} dxi^ext`.
///
/// Coordinates are ordered `x_1, y_1, x_2, y_2, ...`; bit `2j` of `ext` is
/// `dx_{j+1}` and bit `2j+1` is `dy_{j+1}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct TermKey {
    pub beta_pow: i32,
    pub pi_pow: i32,
    pub lie: Vec<u32>,
    pub coord: Vec<u32>,
    pub gauss: Vec<u32>,
    pub ext: u32,
}

impl TermKey {
    fn unit(n: usize) -> Self {
        Self { beta_pow: 0, pi_pow: 0, lie: vec![0; n], coord: vec![0; 2 * n], gauss: vec![0; n], ext: 0 }
    }

    /// `|ext| - 2 beta_pow`; Lie variables have degree zero.
    pub fn degree(&self) -> i64 {
        self.ext.count_ones() as i64 - 2 * self.beta_pow as i64
    }
}

fn sign(odd: u32) -> Rational {
    if odd % 2 == 0 {
        rat_int(1)
    } else {
        rat_int(-1)
    }
}

/// Sign of `a ^ b` brought to ascending order, or `None` if they overlap.
fn merge_sign(a: u32, b: u32) -> Option<u32> {
    if a & b != 0 {
        return None;
    }
    let mut swaps = 0;
    let mut rest = b;
    while rest != 0 {
        let k = rest.trailing_zeros();
        rest &= rest - 1;
        swaps += (a >> (k + 1)).count_ones();
    }
    Some(swaps)
}

fn below(ext: u32, k: usize) -> u32 {
    (ext & ((1u32 << k) - 1)).count_ones()
}

/// Equivariant form on `R^{2n}` with polynomial-times-Gaussian coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct EqForm<R> {
    n: usize,
    /// Terms with any Lie exponent at or above this are dropped.
    lie_order: Option<u32>,
    terms: BTreeMap<TermKey, R>,
}

impl<R: Ring> EqForm<R> {
    pub fn zero(n: usize) -> Self {
        Self { n, lie_order: None, terms: BTreeMap::new() }
    }

    pub fn from_key(n: usize, key: TermKey, c: R) -> Self {
        let mut f = Self::zero(n);
        f.insert(key, c);
        f
    }

    pub fn constant(n: usize, c: R) -> Self {
        Self::from_key(n, TermKey::unit(n), c)
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, R::one())
    }

    /// `z_j` (zero-based plane index).
    pub fn lie_var(n: usize, j: usize) -> Self {
        let mut k = TermKey::unit(n);
        k.lie[j] = 1;
        Self::from_key(n, k, R::one())
    }

    pub fn beta(n: usize, p: i32) -> Self {
        let mut k = TermKey::unit(n);
        k.beta_pow = p;
        Self::from_key(n, k, R::one())
    }

    pub fn pi(n: usize, p: i32) -> Self {
        let mut k = TermKey::unit(n);
        k.pi_pow = p;
        Self::from_key(n, k, R::one())
    }

    /// Coordinate function `xi_idx`, `idx = 2j` for `x_j`, `2j+1` for `y_j`.
    pub fn coord(n: usize, idx: usize) -> Self {
        let mut k = TermKey::unit(n);
        k.coord[idx] = 1;
        Self::from_key(n, k, R::one())
    }

    /// `d xi_idx`.
    pub fn dcoord(n: usize, idx: usize) -> Self {
        let mut k = TermKey::unit(n);
        k.ext = 1 << idx;
        Self::from_key(n, k, R::one())
    }

    /// `e^{-g pi r_j^2}`.
    pub fn gaussian(n: usize, j: usize, g: u32) -> Self {
        let mut k = TermKey::unit(n);
        k.gauss[j] = g;
        Self::from_key(n, k, R::one())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lie_order(&self) -> Option<u32> {
        self.lie_order
    }

    pub fn terms(&self) -> &BTreeMap<TermKey, R> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Truncate every Lie variable below `order`.
    pub fn with_lie_order(&self, order: u32) -> Self {
        let o = self.lie_order.map_or(order, |x| x.min(order));
        let mut out = Self { n: self.n, lie_order: Some(o), terms: BTreeMap::new() };
        for (k, c) in &self.terms {
            out.insert(k.clone(), c.clone());
        }
        out
    }

    pub(crate) fn insert(&mut self, key: TermKey, c: R) {
        if c.is_zero() {
            return;
        }
        if let Some(o) = self.lie_order {
            if key.lie.iter().any(|&e| e >= o) {
                return;
            }
        }
        match self.terms.get_mut(&key) {
            Some(v) => {
                let s = v.add(&c);
                if s.is_zero() {
                    self.terms.remove(&key);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    fn empty_like(&self, o: &Self) -> Result<Self, CartanError> {
        if self.n != o.n {
            return Err(CartanError::PlaneMismatch(self.n, o.n));
        }
        let lie_order = match (self.lie_order, o.lie_order) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        Ok(Self { n: self.n, lie_order, terms: BTreeMap::new() })
    }

    pub fn add(&self, o: &Self) -> Result<Self, CartanError> {
        let mut out = self.empty_like(o)?;
        for (k, c) in self.terms.iter().chain(&o.terms) {
            out.insert(k.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        self.map(|c| c.neg())
    }

    pub fn sub(&self, o: &Self) -> Result<Self, CartanError> {
        self.add(&o.neg())
    }

    pub fn scale(&self, r: &Rational) -> Self {
        self.map(|c| c.scale(r))
    }

    pub fn scale_by(&self, s: &R) -> Self {
        self.map(|c| c.mul(s))
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> EqForm<S> {
        let mut out = EqForm { n: self.n, lie_order: self.lie_order, terms: BTreeMap::new() };
        for (k, c) in &self.terms {
            out.insert(k.clone(), f(c));
        }
        out
    }

    /// Graded-commutative product with Koszul signs.
    pub fn wedge(&self, o: &Self) -> Result<Self, CartanError> {
        let mut out = self.empty_like(o)?;
        for (ka, ca) in &self.terms {
            for (kb, cb) in &o.terms {
                let Some(swaps) = merge_sign(ka.ext, kb.ext) else { continue };
                let key = TermKey {
                    beta_pow: ka.beta_pow + kb.beta_pow,
                    pi_pow: ka.pi_pow + kb.pi_pow,
                    lie: ka.lie.iter().zip(&kb.lie).map(|(a, b)| a + b).collect(),
                    coord: ka.coord.iter().zip(&kb.coord).map(|(a, b)| a + b).collect(),
                    gauss: ka.gauss.iter().zip(&kb.gauss).map(|(a, b)| a + b).collect(),
                    ext: ka.ext | kb.ext,
                };
                out.insert(key, ca.mul(cb).scale(&sign(swaps)));
            }
        }
        Ok(out)
    }

    fn blank(&self) -> Self {
        Self { n: self.n, lie_order: self.lie_order, terms: BTreeMap::new() }
    }

    /// Exterior derivative; differentiates both the polynomial and the
    /// Gaussian factor.
    pub fn d(&self) -> Self {
        let mut out = self.blank();
        for (k, c) in &self.terms {
            for idx in 0..2 * self.n {
                if k.ext & (1 << idx) != 0 {
                    continue;
                }
                let s = sign(below(k.ext, idx));
                let mut base = k.clone();
                base.ext |= 1 << idx;
                let e = k.coord[idx];
                if e > 0 {
                    let mut key = base.clone();
                    key.coord[idx] -= 1;
                    out.insert(key, c.scale(&(&s * rat_int(e as i64))));
                }
                let g = k.gauss[idx / 2];
                if g > 0 {
                    // d e^{-g pi r^2} = -2 g pi xi dxi e^{-g pi r^2}
                    let mut key = base;
                    key.coord[idx] += 1;
                    key.pi_pow += 1;
                    out.insert(key, c.scale(&(&s * rat_int(-2 * g as i64))));
                }
            }
        }
        out
    }

    /// Contraction with `V_j` alone (no Lie variable).
    pub fn contract_plane(&self, j: usize, conv: &CartanConvention) -> Self {
        let mut out = self.blank();
        for (k, c) in &self.terms {
            for (idx, partner, sgn) in [(2 * j, 2 * j + 1, -1i64), (2 * j + 1, 2 * j, 1)] {
                if k.ext & (1 << idx) == 0 {
                    continue;
                }
                // i_V dx = -c y, i_V dy = c x
                let s = sign(below(k.ext, idx)) * rat_int(sgn * conv.scale);
                let mut key = k.clone();
                key.ext &= !(1 << idx);
                key.coord[partner] += 1;
                key.pi_pow += conv.pi_pow;
                out.insert(key, c.scale(&s));
            }
        }
        out
    }

    /// Contraction with `X(z) = sum_j z_j V_j`.
    pub fn contract(&self, conv: &CartanConvention) -> Self {
        let mut out = self.blank();
        for j in 0..self.n {
            for (k, c) in self.contract_plane(j, conv).terms {
                let mut key = k;
                key.lie[j] += 1;
                out.insert(key, c);
            }
        }
        out
    }

    /// `L_{V_j} = d i_{V_j} + i_{V_j} d`.
    pub fn lie_derivative(&self, j: usize, conv: &CartanConvention) -> Self {
        let a = self.contract_plane(j, conv).d();
        let b = self.d().contract_plane(j, conv);
        a.add(&b).expect("same space")
    }

    pub fn invariance_defect(&self, conv: &CartanConvention) -> Option<usize> {
        (0..self.n).find(|&j| !self.lie_derivative(j, conv).is_zero())
    }

    pub fn is_invariant(&self, conv: &CartanConvention) -> bool {
        self.invariance_defect(conv).is_none()
    }

    /// `Q = d - beta^{-1} i_X`.
    pub fn cartan_q(&self, conv: &CartanConvention) -> Result<Self, CartanError> {
        if let Some(plane) = self.invariance_defect(conv) {
            return Err(CartanError::NotInvariant { plane });
        }
        Ok(self.cartan_q_unchecked(conv))
    }

    pub(crate) fn cartan_q_unchecked(&self, conv: &CartanConvention) -> Self {
        let mut out = self.d();
        for (k, c) in self.contract(conv).terms {
            let mut key = k;
            key.beta_pow -= 1;
            out.insert(key, c.neg());
        }
        out
    }

    /// Degrees of all terms, ascending.
    pub fn degrees(&self) -> Vec<i64> {
        let mut d: Vec<i64> = self.terms.keys().map(TermKey::degree).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    /// Degree of a homogeneous nonzero form.
    pub fn degree(&self) -> Option<i64> {
        match self.degrees().as_slice() {
            [d] => Some(*d),
            _ => None,
        }
    }

    /// Value at the origin of the degree-zero-in-`dxi` part.
    pub fn restrict_origin(&self) -> LieSeries<R> {
        let mut out = LieSeries { n: self.n, lie_order: self.lie_order, terms: BTreeMap::new() };
        for (k, c) in &self.terms {
            if k.ext == 0 && k.coord.iter().all(|&e| e == 0) {
                let key = LieKey { beta_pow: k.beta_pow, pi_pow: k.pi_pow, lie: k.lie.clone() };
                let v = out.terms.entry(key.clone()).or_insert_with(R::zero).add(c);
                if v.is_zero() {
                    out.terms.remove(&key);
                } else {
                    out.terms.insert(key, v);
                }
            }
        }
        out
    }

    /// Integrate over plane `j` with orientation `dx_j ^ dy_j`. Terms without
    /// the full plane volume form integrate to zero.
    pub fn integrate_plane(&self, j: usize) -> Result<Self, CartanError> {
        let mut out = self.blank();
        let vol = 0b11u32 << (2 * j);
        for (k, c) in &self.terms {
            if k.ext & vol != vol {
                continue;
            }
            let g = k.gauss[j];
            if g == 0 {
                return Err(CartanError::NotIntegrable(j));
            }
            let (a, b) = (k.coord[2 * j], k.coord[2 * j + 1]);
            let Some((val, pi)) = gaussian_moment(a, b, g) else { continue };
            let mut key = k.clone();
            key.ext &= !vol;
            key.coord[2 * j] = 0;
            key.coord[2 * j + 1] = 0;
            key.gauss[j] = 0;
            key.pi_pow += pi;
            // the volume pair is even, so moving it to the front is sign-free
            out.insert(key, c.scale(&val));
        }
        Ok(out)
    }

    /// Relabel planes: plane `j` becomes plane `perm[j]`.
    pub fn permute_planes(&self, perm: &[usize]) -> Result<Self, CartanError> {
        let mut seen = vec![false; self.n];
        if perm.len() != self.n || perm.iter().any(|&p| p >= self.n || std::mem::replace(&mut seen[p], true)) {
            return Err(CartanError::Invalid(format!("{perm:?} is not a permutation of {} planes", self.n)));
        }
        let mut out = self.blank();
        for (k, c) in &self.terms {
            let mut key = k.clone();
            let mut ext_list = Vec::new();
            for (j, &p) in perm.iter().enumerate() {
                key.lie[p] = k.lie[j];
                key.gauss[p] = k.gauss[j];
                key.coord[2 * p] = k.coord[2 * j];
                key.coord[2 * p + 1] = k.coord[2 * j + 1];
            }
            for idx in 0..2 * self.n {
                if k.ext & (1 << idx) != 0 {
                    ext_list.push(2 * perm[idx / 2] + idx % 2);
                }
            }
            let mut inversions = 0;
            for a in 0..ext_list.len() {
                for b in a + 1..ext_list.len() {
                    if ext_list[a] > ext_list[b] {
                        inversions += 1;
                    }
                }
            }
            key.ext = ext_list.iter().fold(0, |m, &i| m | (1 << i));
            out.insert(key, c.scale(&sign(inversions)));
        }
        Ok(out)
    }
}

fn double_factorial_odd(a: u32) -> i64 {
    // (a-1)!! for even a
    (1..a as i64).step_by(2).product()
}

/// `int_{R^2} x^a y^b e^{-g pi (x^2 + y^2)} dx dy` as `(rational, pi power)`,
/// or `None` when it vanishes by parity.
pub fn gaussian_moment(a: u32, b: u32, g: u32) -> Option<(Rational, i32)> {
    if a % 2 == 1 || b % 2 == 1 {
        return None;
    }
    let h = (a + b) / 2;
    let num = double_factorial_odd(a) * double_factorial_odd(b);
    let den = num_bigint::BigInt::from(2 * g as i64).pow(h) * g as i64;
    Some((Rational::new(num.into(), den), -(h as i32)))
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct LieKey {
    pub beta_pow: i32,
    pub pi_pow: i32,
    pub lie: Vec<u32>,
}

/// Polynomial (or truncated series) in the Lie variables with `pi` and
/// `beta` powers recorded per term.
#[derive(Debug, Clone, PartialEq)]
pub struct LieSeries<R> {
    pub n: usize,
    pub lie_order: Option<u32>,
    pub terms: BTreeMap<LieKey, R>,
}

impl<R: Ring> LieSeries<R> {
    /// Monomial `pi^pi_pow beta^beta_pow z^lie`.
    pub fn monomial(n: usize, beta_pow: i32, pi_pow: i32, lie: Vec<u32>, c: R) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(LieKey { beta_pow, pi_pow, lie }, c);
        }
        Self { n, lie_order: None, terms }
    }

    pub fn coeff(&self, beta_pow: i32, pi_pow: i32, lie: &[u32]) -> R {
        self.terms.get(&LieKey { beta_pow, pi_pow, lie: lie.to_vec() }).cloned().unwrap_or_else(R::zero)
    }
}
