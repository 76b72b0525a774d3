use super::group::FiniteGroup;
use super::sl2::Sl2Z;
use serde::Serialize;
use std::collections::BTreeSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CommutingPair {
    pub h1: usize,
    pub h2: usize,
}

/// All ordered commuting pairs in lexicographic order.
pub fn commuting_pairs(g: &FiniteGroup) -> Vec<CommutingPair> {
    let n = g.order();
    (0..n).flat_map(|h1| (0..n).filter(move |&h2| g.commute(h1, h2)).map(move |h2| CommutingPair { h1, h2 })).collect()
}

/// Element of `SL2(Z/N)` with entries in `0..N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Sl2Mod {
    pub n: i64,
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl Sl2Mod {
    pub fn reduce(g: &Sl2Z, n: i64) -> Self {
        let r = |x: i64| x.rem_euclid(n);
        Self { n, a: r(g.a), b: r(g.b), c: r(g.c), d: r(g.d) }
    }

    pub fn identity(n: i64) -> Self {
        Self::reduce(&Sl2Z::IDENTITY, n)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let r = |x: i64| x.rem_euclid(self.n);
        Self {
            n: self.n,
            a: r(self.a * o.a + self.b * o.c),
            b: r(self.a * o.b + self.b * o.d),
            c: r(self.c * o.a + self.d * o.c),
            d: r(self.c * o.b + self.d * o.d),
        }
    }

    /// Every element, in lexicographic order of `(a, b, c, d)`.
    pub fn enumerate(n: i64) -> Vec<Self> {
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        if (a * d - b * c - 1).rem_euclid(n) == 0 {
                            out.push(Self { n, a, b, c, d });
                        }
                    }
                }
            }
        }
        out
    }

    pub fn entries(&self) -> [i64; 4] {
        [self.a, self.b, self.c, self.d]
    }
}

/// Left action `(h1, h2) -> (h1^d h2^{-c}, h1^{-b} h2^a)` of `[[a, b], [c, d]]`.
pub fn sl2_act(g: &FiniteGroup, m: &Sl2Mod, h: CommutingPair) -> CommutingPair {
    let p = |x: usize, k: i64| g.pow(x, k);
    CommutingPair { h1: g.mul(p(h.h1, m.d), p(h.h2, -m.c)), h2: g.mul(p(h.h1, -m.b), p(h.h2, m.a)) }
}

/// Integer version of [`sl2_act`].
pub fn sl2z_act(g: &FiniteGroup, m: &Sl2Z, h: CommutingPair) -> CommutingPair {
    sl2_act(g, &Sl2Mod::reduce(m, g.exponent() as i64), h)
}

pub fn conj_act(g: &FiniteGroup, x: usize, h: CommutingPair) -> CommutingPair {
    CommutingPair { h1: g.conj(x, h.h1), h2: g.conj(x, h.h2) }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Action {
    Conj,
    Sl2,
    Both,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Stabilizer {
    pub order: usize,
    /// Generators as `[a, b, c, d]` mod `N`.
    pub generators: Vec<[i64; 4]>,
    pub index: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Orbit {
    pub representative: CommutingPair,
    pub size: usize,
    pub pairs: Vec<CommutingPair>,
    pub stabilizer: Option<Stabilizer>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitReport {
    pub action: Action,
    pub modulus: i64,
    pub group_order: usize,
    pub pair_count: usize,
    pub orbits: Vec<Orbit>,
}

fn closure(elems: &[Sl2Mod], gens: &[Sl2Mod], n: i64) -> BTreeSet<Sl2Mod> {
    let mut set = BTreeSet::from([Sl2Mod::identity(n)]);
    let mut frontier = vec![Sl2Mod::identity(n)];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = x.mul(g);
            if set.insert(y) {
                frontier.push(y);
            }
        }
    }
    debug_assert!(set.iter().all(|x| elems.contains(x)));
    set
}

/// Greedy generating set of a subgroup, scanning elements in order.
fn generators_of(sub: &[Sl2Mod], n: i64) -> Vec<Sl2Mod> {
    let mut gens = Vec::new();
    let mut span = BTreeSet::from([Sl2Mod::identity(n)]);
    for x in sub {
        if !span.contains(x) {
            gens.push(*x);
            span = closure(sub, &gens, n);
        }
    }
    gens
}

/// Orbits of `C^2(G)` under conjugation, `SL2(Z)` (through `SL2(Z/N)`,
/// `N` the exponent) or both. For `sl2` and `both`, the stabilizer of an
/// orbit is `{gamma : gamma . h` lies in the conjugation orbit of `h}` for
/// `both`, and the pointwise stabilizer for `sl2`.
pub fn orbit_decomposition(g: &FiniteGroup, action: Action) -> OrbitReport {
    let pairs = commuting_pairs(g);
    let n = g.exponent() as i64;
    let index = |h: CommutingPair| pairs.binary_search(&h).expect("commuting pair");
    let s = Sl2Mod::reduce(&Sl2Z::S, n);
    let t = Sl2Mod::reduce(&Sl2Z::T, n);
    let mut seen = vec![false; pairs.len()];
    let mut orbits = Vec::new();
    let conj_orbit = |h: CommutingPair| -> BTreeSet<CommutingPair> { (0..g.order()).map(|x| conj_act(g, x, h)).collect() };
    let sl2_all = if action == Action::Conj { Vec::new() } else { Sl2Mod::enumerate(n) };
    for start in 0..pairs.len() {
        if seen[start] {
            continue;
        }
        let mut members = BTreeSet::from([pairs[start]]);
        let mut frontier = vec![pairs[start]];
        seen[start] = true;
        while let Some(h) = frontier.pop() {
            let mut next: Vec<CommutingPair> = Vec::new();
            if action != Action::Sl2 {
                next.extend((0..g.order()).map(|x| conj_act(g, x, h)));
            }
            if action != Action::Conj {
                next.push(sl2_act(g, &s, h));
                next.push(sl2_act(g, &t, h));
            }
            for y in next {
                let i = index(y);
                if !seen[i] {
                    seen[i] = true;
                    members.insert(y);
                    frontier.push(y);
                }
            }
        }
        let rep = pairs[start];
        let stabilizer = (action != Action::Conj).then(|| {
            let target = if action == Action::Both { conj_orbit(rep) } else { BTreeSet::from([rep]) };
            let sub: Vec<Sl2Mod> = sl2_all.iter().copied().filter(|m| target.contains(&sl2_act(g, m, rep))).collect();
            Stabilizer {
                order: sub.len(),
                generators: generators_of(&sub, n).iter().map(Sl2Mod::entries).collect(),
                index: sl2_all.len() / sub.len(),
            }
        });
        orbits.push(Orbit { representative: rep, size: members.len(), pairs: members.into_iter().collect(), stabilizer });
    }
    OrbitReport { action, modulus: n, group_order: g.order(), pair_count: pairs.len(), orbits }
}

/// Orbits of `G x SL2(Z)` on `C^2(G)` with their `SL2(Z/N)` stabilizers:
/// the indexing data of the Devoto model over a point.
pub fn devoto_report(g: &FiniteGroup) -> OrbitReport {
    orbit_decomposition(g, Action::Both)
}
