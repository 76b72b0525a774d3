//! `U(1)` rotating `S^2` about an axis, in the coordinates height `h` and the
//! angular 1-form `drot` with `i_V drot = 1`, `i_V dh = 0`.
//!
//! Terms may carry an angular Fourier mode `e^{i m theta}`; a form is
//! rotation invariant exactly when every mode is zero.

use super::form::CartanError;
use crate::qseries::{rat_int, Rational, Ring};
use serde::Serialize;
use std::collections::BTreeMap;

const DH: u8 = 1;
const DROT: u8 = 2;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct S2Key {
    pub beta_pow: i32,
    pub lie: u32,
    pub h_pow: u32,
    pub mode: i32,
    /// Bit 0: `dh`, bit 1: `drot`.
    pub ext: u8,
}

#[derive(Debug, Clone, PartialEq)]
pub struct S2Form<R> {
    terms: BTreeMap<S2Key, R>,
}

impl<R: Ring> S2Form<R> {
    pub fn zero() -> Self {
        Self { terms: BTreeMap::new() }
    }

    pub fn term(key: S2Key, c: R) -> Self {
        let mut f = Self::zero();
        f.insert(key, c);
        f
    }

    pub fn constant(c: R) -> Self {
        Self::term(S2Key { beta_pow: 0, lie: 0, h_pow: 0, mode: 0, ext: 0 }, c)
    }

    /// `p(h)` for coefficients `p_0, p_1, ...`.
    pub fn poly_h(coeffs: &[R]) -> Self {
        let mut f = Self::zero();
        for (i, c) in coeffs.iter().enumerate() {
            f.insert(S2Key { beta_pow: 0, lie: 0, h_pow: i as u32, mode: 0, ext: 0 }, c.clone());
        }
        f
    }

    pub fn z() -> Self {
        Self::term(S2Key { beta_pow: 0, lie: 1, h_pow: 0, mode: 0, ext: 0 }, R::one())
    }

    pub fn beta(p: i32) -> Self {
        Self::term(S2Key { beta_pow: p, lie: 0, h_pow: 0, mode: 0, ext: 0 }, R::one())
    }

    pub fn dh() -> Self {
        Self::term(S2Key { beta_pow: 0, lie: 0, h_pow: 0, mode: 0, ext: DH }, R::one())
    }

    pub fn drot() -> Self {
        Self::term(S2Key { beta_pow: 0, lie: 0, h_pow: 0, mode: 0, ext: DROT }, R::one())
    }

    pub fn terms(&self) -> &BTreeMap<S2Key, R> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn insert(&mut self, key: S2Key, c: R) {
        if c.is_zero() {
            return;
        }
        let v = self.terms.remove(&key).map_or(c.clone(), |v| v.add(&c));
        if !v.is_zero() {
            self.terms.insert(key, v);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &o.terms {
            out.insert(k.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self { terms: self.terms.iter().map(|(k, c)| (k.clone(), c.neg())).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn wedge(&self, o: &Self) -> Self {
        let mut out = Self::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &o.terms {
                if a.ext & b.ext != 0 {
                    continue;
                }
                let flip = a.ext == DROT && b.ext == DH;
                let key = S2Key {
                    beta_pow: a.beta_pow + b.beta_pow,
                    lie: a.lie + b.lie,
                    h_pow: a.h_pow + b.h_pow,
                    mode: a.mode + b.mode,
                    ext: a.ext | b.ext,
                };
                let c = ca.mul(cb);
                out.insert(key, if flip { c.neg() } else { c });
            }
        }
        out
    }

    pub fn is_invariant(&self) -> bool {
        self.terms.keys().all(|k| k.mode == 0)
    }

    /// Exterior derivative of an invariant form (`drot` is closed).
    fn d_invariant(&self) -> Self {
        let mut out = Self::zero();
        for (k, c) in &self.terms {
            if k.h_pow == 0 || k.ext & DH != 0 {
                continue;
            }
            let key = S2Key { h_pow: k.h_pow - 1, ext: k.ext | DH, ..k.clone() };
            out.insert(key, c.scale(&rat_int(k.h_pow as i64)));
        }
        out
    }

    /// `i_X` with `X = z V`.
    fn contract(&self) -> Self {
        let mut out = Self::zero();
        for (k, c) in &self.terms {
            if k.ext & DROT == 0 {
                continue;
            }
            // drot sits last, so removing it from dh ^ drot costs a sign
            let s = if k.ext & DH != 0 { -1 } else { 1 };
            let key = S2Key { lie: k.lie + 1, ext: k.ext & !DROT, ..k.clone() };
            out.insert(key, c.scale(&rat_int(s)));
        }
        out
    }

    /// `Q = d - beta^{-1} i_X` on invariant forms.
    pub fn cartan_q(&self) -> Result<Self, CartanError> {
        if !self.is_invariant() {
            return Err(CartanError::NotInvariant { plane: 0 });
        }
        let mut out = self.d_invariant();
        for (k, c) in self.contract().terms {
            out.insert(S2Key { beta_pow: k.beta_pow - 1, ..k }, c.neg());
        }
        Ok(out)
    }

    /// Degree-zero, mode-zero part at `h = +1` (`pole = 0`) or `h = -1`
    /// (`pole = 1`), as `(beta_pow, z power) -> coefficient`.
    pub fn pole_restriction(&self, pole: usize) -> BTreeMap<(i32, u32), R> {
        let mut out: BTreeMap<(i32, u32), R> = BTreeMap::new();
        for (k, c) in &self.terms {
            if k.ext != 0 || k.mode != 0 {
                continue;
            }
            let neg = pole == 1 && k.h_pow % 2 == 1;
            let v = if neg { c.neg() } else { c.clone() };
            let e = out.entry((k.beta_pow, k.lie)).or_insert_with(R::zero);
            *e = e.add(&v);
        }
        out.retain(|_, v| !v.is_zero());
        out
    }
}

/// A section on `S^2`: the Borel-side form and the germs at the two poles.
#[derive(Debug, Clone, PartialEq)]
pub struct S2Section<R> {
    pub borel_part: S2Form<R>,
    /// Taylor coefficients in `z` at `h = +1` and `h = -1`.
    pub pole_values: [Vec<R>; 2],
    /// Translation `z -> z + shift` applied to the pole germs.
    pub shift: R,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct S2Check {
    pub invariant: bool,
    pub analytic: bool,
    /// `false` whenever the form is not invariant, where `Q` is undefined.
    pub closed: bool,
}

fn binomial(n: u32, k: u32) -> Rational {
    let mut r = rat_int(1);
    for i in 0..k {
        r = r * rat_int((n - i) as i64) / rat_int((i + 1) as i64);
    }
    r
}

/// `g(z + s)` truncated to the length of `g`.
fn translate<R: Ring>(g: &[R], s: &R) -> Vec<R> {
    let mut out = vec![R::zero(); g.len()];
    for (k, c) in g.iter().enumerate() {
        let mut sp = R::one();
        for m in (0..=k).rev() {
            // term c C(k, m) s^{k-m} z^m
            out[m] = out[m].add(&c.mul(&sp).scale(&binomial(k as u32, m as u32)));
            sp = sp.mul(s);
        }
    }
    out
}

pub fn s2_section_check<R: Ring>(s: &S2Section<R>) -> Result<S2Check, CartanError> {
    if s.pole_values.iter().any(|v| v.is_empty()) {
        return Err(CartanError::Invalid("pole germs need at least one coefficient".into()));
    }
    let invariant = s.borel_part.is_invariant();
    let closed = invariant && s.borel_part.cartan_q()?.is_zero();
    let mut analytic = true;
    for pole in 0..2 {
        let res = s.borel_part.pole_restriction(pole);
        let germ = translate(&s.pole_values[pole], &s.shift);
        // away from the origin sections are z-constant at the fixed points
        let constant = res.keys().all(|&(b, m)| b == 0 && m == 0);
        let c0 = res.get(&(0, 0)).cloned().unwrap_or_else(R::zero);
        let matches = c0 == germ[0] && germ[1..].iter().all(|c| c.is_zero());
        analytic &= constant && matches;
    }
    Ok(S2Check { invariant, analytic, closed })
}
