use super::group::FiniteGroup;
use super::orbits::{commuting_pairs, CommutingPair};
use super::FiniteError;
use crate::qseries::{rat, rat_int, rat_to_f64, Rational};
use num_complex::Complex64;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

/// Reduce a turn fraction into `[0, 1)`.
fn frac(x: Rational) -> Rational {
    let f = x.floor();
    x - f
}

/// U(1)-valued 3-cochain stored as turns: `l(a,b,c) = exp(2 pi i t(a,b,c))`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cocycle3 {
    order: usize,
    #[serde(serialize_with = "ser_turns")]
    turns: Vec<Rational>,
}

fn ser_turns<S: serde::Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|r| r.to_string()))
}

impl Cocycle3 {
    pub fn from_fn(order: usize, f: impl Fn(usize, usize, usize) -> Rational) -> Self {
        let mut turns = Vec::with_capacity(order.pow(3));
        for a in 0..order {
            for b in 0..order {
                for c in 0..order {
                    turns.push(frac(f(a, b, c)));
                }
            }
        }
        Self { order, turns }
    }

    pub fn trivial(order: usize) -> Self {
        Self::from_fn(order, |_, _, _| rat_int(0))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn turns(&self, a: usize, b: usize, c: usize) -> &Rational {
        &self.turns[(a * self.order + b) * self.order + c]
    }

    pub fn value(&self, a: usize, b: usize, c: usize) -> Complex64 {
        turns_to_complex(self.turns(a, b, c))
    }

    /// Pointwise product.
    pub fn mul(&self, o: &Self) -> Self {
        Self::from_fn(self.order, |a, b, c| self.turns(a, b, c) + o.turns(a, b, c))
    }

    /// `phi^* l` for a homomorphism `phi: G -> H` given as an index map.
    pub fn pullback(&self, phi: &[usize]) -> Self {
        Self::from_fn(phi.len(), |a, b, c| self.turns(phi[a], phi[b], phi[c]).clone())
    }
}

pub fn turns_to_complex(t: &Rational) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * rat_to_f64(t))
}

/// `omega(a, b, c) = k a floor((b + c) / n) / n` turns on `Z/n`.
pub fn zn_cocycle(n: usize, k: i64) -> Result<Cocycle3, FiniteError> {
    if n < 2 {
        return Err(FiniteError::Invalid(format!("zn_cocycle needs n >= 2, got {n}")));
    }
    Ok(Cocycle3::from_fn(n, |a, b, c| rat(k * a as i64 * ((b + c) / n) as i64, n as i64)))
}

/// `delta l` in turns at a quadruple.
fn coboundary_turns(g: &FiniteGroup, l: &Cocycle3, q: [usize; 4]) -> Rational {
    let [g1, g2, g3, g4] = q;
    let t = |a, b, c| l.turns(a, b, c).clone();
    frac(t(g2, g3, g4) + t(g1, g.mul(g2, g3), g4) + t(g1, g2, g3) - t(g.mul(g1, g2), g3, g4) - t(g1, g2, g.mul(g3, g4)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoboundaryReport {
    pub ok: bool,
    pub checked: usize,
    /// First violating quadruple in lexicographic order.
    pub violation: Option<[usize; 4]>,
    /// `|delta l - 1|` at that quadruple.
    pub worst_residual: f64,
}

pub fn coboundary_check(l: &Cocycle3, g: &FiniteGroup) -> Result<CoboundaryReport, FiniteError> {
    let n = g.order();
    if l.order() != n {
        return Err(FiniteError::OrderMismatch { cochain: l.order(), group: n });
    }
    let bad: Vec<Option<([usize; 4], f64)>> = (0..n)
        .into_par_iter()
        .map(|g1| {
            for g2 in 0..n {
                for g3 in 0..n {
                    for g4 in 0..n {
                        let t = coboundary_turns(g, l, [g1, g2, g3, g4]);
                        if t != rat_int(0) {
                            return Some(([g1, g2, g3, g4], (turns_to_complex(&t) - 1.0).norm()));
                        }
                    }
                }
            }
            None
        })
        .collect();
    let first = bad.into_iter().flatten().next();
    Ok(CoboundaryReport {
        ok: first.is_none(),
        checked: n.pow(4),
        violation: first.map(|f| f.0),
        worst_residual: first.map_or(0.0, |f| f.1),
    })
}

/// A cochain that passed [`coboundary_check`] against a specific group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifiedCocycle {
    cocycle: Cocycle3,
}

impl VerifiedCocycle {
    pub fn new(l: Cocycle3, g: &FiniteGroup) -> Result<Self, FiniteError> {
        let r = coboundary_check(&l, g)?;
        match r.violation {
            None => Ok(Self { cocycle: l }),
            Some(q) => Err(FiniteError::NotCocycle(q)),
        }
    }

    pub fn cocycle(&self) -> &Cocycle3 {
        &self.cocycle
    }
}

/// The six-factor ratio
/// `l(g,h1,h2) l(gh2g^-1,g,h1) l(gh1g^-1,gh2g^-1,g) / [l(g,h2,h1) l(gh1g^-1,g,h2) l(gh2g^-1,gh1g^-1,g)]`
/// in turns.
pub fn fq_cocycle(l: &VerifiedCocycle, g: &FiniteGroup, h: CommutingPair, x: usize) -> Result<Rational, FiniteError> {
    if !g.commute(h.h1, h.h2) {
        return Err(FiniteError::NotCommuting(h));
    }
    let l = &l.cocycle;
    let (h1, h2) = (h.h1, h.h2);
    let (c1, c2) = (g.conj(x, h1), g.conj(x, h2));
    let t = |a, b, c| l.turns(a, b, c).clone();
    Ok(frac(t(x, h1, h2) + t(c2, x, h1) + t(c1, c2, x) - t(x, h2, h1) - t(c1, x, h2) - t(c2, c1, x)))
}

/// [`fq_cocycle`] for an unchecked cochain: verifies it first.
pub fn fq_cocycle_checked(l: &Cocycle3, g: &FiniteGroup, h: CommutingPair, x: usize) -> Result<Rational, FiniteError> {
    fq_cocycle(&VerifiedCocycle::new(l.clone(), g)?, g, h, x)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DescentReport {
    pub ok: bool,
    pub checked: usize,
    /// `(h1, h2, g1, g2)` of the first violation.
    pub violation: Option<[usize; 4]>,
    pub worst_residual: f64,
}

/// Exhaustive check of `c(h; g2 g1) = c(g1 . h; g2) c(h; g1)`.
pub fn fq_descent_check(l: &VerifiedCocycle, g: &FiniteGroup) -> DescentReport {
    let pairs = commuting_pairs(g);
    let n = g.order();
    let found: Vec<Option<([usize; 4], f64)>> = pairs
        .par_iter()
        .map(|&h| {
            for g1 in 0..n {
                let moved = CommutingPair { h1: g.conj(g1, h.h1), h2: g.conj(g1, h.h2) };
                let c1 = fq_cocycle(l, g, h, g1).expect("commuting");
                for g2 in 0..n {
                    let lhs = fq_cocycle(l, g, h, g.mul(g2, g1)).expect("commuting");
                    let rhs = fq_cocycle(l, g, moved, g2).expect("commuting") + &c1;
                    let d = frac(lhs - rhs);
                    if d != rat_int(0) {
                        return Some(([h.h1, h.h2, g1, g2], (turns_to_complex(&d) - 1.0).norm()));
                    }
                }
            }
            None
        })
        .collect();
    let first = found.into_iter().flatten().next();
    DescentReport {
        ok: first.is_none(),
        checked: pairs.len() * n * n,
        violation: first.map(|f| f.0),
        worst_residual: first.map_or(0.0, |f| f.1),
    }
}

/// Random normalized 2-cochain `mu` (values in `1/denom` turns, zero when an
/// argument is the identity) and its coboundary
/// `(delta mu)(a,b,c) = mu(b,c) - mu(ab,c) + mu(a,bc) - mu(a,b)`.
pub fn random_coboundary(g: &FiniteGroup, denom: i64, seed: u64) -> Cocycle3 {
    let n = g.order();
    let e = g.identity();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mu = vec![rat_int(0); n * n];
    for a in 0..n {
        for b in 0..n {
            if a != e && b != e {
                mu[a * n + b] = rat(rng.gen_range(0..denom), denom);
            }
        }
    }
    let m = |a: usize, b: usize| mu[a * n + b].clone();
    Cocycle3::from_fn(n, |a, b, c| m(b, c) - m(g.mul(a, b), c) + m(a, g.mul(b, c)) - m(a, b))
}

/// Order of `l` as an element of the cochain group (lcm of denominators).
pub fn cochain_torsion(l: &Cocycle3) -> num_bigint::BigInt {
    l.turns.iter().fold(num_bigint::BigInt::from(1), |acc, t| acc.lcm(t.denom()))
}
