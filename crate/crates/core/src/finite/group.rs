use super::FiniteError;
use serde::{Deserialize, Serialize};

/// A finite group given by its multiplication table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiniteGroup {
    order: usize,
    mul: Vec<Vec<usize>>,
    inv: Vec<usize>,
    id: usize,
    names: Option<Vec<String>>,
}

#[derive(Deserialize)]
struct GroupFile {
    order: usize,
    mul: Vec<Vec<usize>>,
    #[serde(default)]
    names: Option<Vec<String>>,
}

impl FiniteGroup {
    /// Validate closure, associativity, identity and inverses.
    pub fn from_table(mul: Vec<Vec<usize>>, names: Option<Vec<String>>) -> Result<Self, FiniteError> {
        let n = mul.len();
        if n == 0 {
            return Err(FiniteError::InvalidGroup("empty table".into()));
        }
        if mul.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(FiniteError::InvalidGroup("table is not closed".into()));
        }
        if let Some(ns) = &names {
            if ns.len() != n {
                return Err(FiniteError::InvalidGroup("names length differs from order".into()));
            }
        }
        let id = (0..n)
            .find(|&e| (0..n).all(|g| mul[e][g] == g && mul[g][e] == g))
            .ok_or_else(|| FiniteError::InvalidGroup("no identity".into()))?;
        let mut inv = Vec::with_capacity(n);
        for g in 0..n {
            let i = (0..n)
                .find(|&h| mul[g][h] == id && mul[h][g] == id)
                .ok_or_else(|| FiniteError::InvalidGroup(format!("element {g} has no inverse")))?;
            inv.push(i);
        }
        for a in 0..n {
            for b in 0..n {
                let ab = mul[a][b];
                for c in 0..n {
                    if mul[ab][c] != mul[a][mul[b][c]] {
                        return Err(FiniteError::InvalidGroup(format!("associativity fails at ({a},{b},{c})")));
                    }
                }
            }
        }
        Ok(Self { order: n, mul, inv, id, names })
    }

    /// JSON `{order, mul, names}`.
    pub fn from_json(s: &str) -> Result<Self, FiniteError> {
        let f: GroupFile = serde_json::from_str(s).map_err(|e| FiniteError::InvalidGroup(e.to_string()))?;
        if f.order != f.mul.len() {
            return Err(FiniteError::InvalidGroup("order does not match table size".into()));
        }
        Self::from_table(f.mul, f.names)
    }

    pub fn to_json(&self) -> String {
        serde_json::json!({ "order": self.order, "mul": self.mul, "names": self.names }).to_string()
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    pub fn cyclic(n: usize) -> Self {
        let mul = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::from_table(mul, None).expect("cyclic group")
    }

    /// Group generated by a list of permutations of `0..m`, by closure.
    pub fn from_permutations(gens: &[Vec<usize>]) -> Result<Self, FiniteError> {
        let m = gens.first().map_or(0, |g| g.len());
        let idp: Vec<usize> = (0..m).collect();
        let mut elems = vec![idp];
        let mut i = 0;
        while i < elems.len() {
            for g in gens {
                let p: Vec<usize> = (0..m).map(|x| g[elems[i][x]]).collect();
                if !elems.contains(&p) {
                    elems.push(p);
                }
            }
            i += 1;
        }
        elems.sort();
        let index = |p: &Vec<usize>| elems.binary_search(p).expect("closed");
        // (p q)(x) = p(q(x))
        let mul = elems
            .iter()
            .map(|p| elems.iter().map(|q| index(&(0..m).map(|x| p[q[x]]).collect())).collect())
            .collect();
        Self::from_table(mul, None)
    }

    pub fn symmetric(m: usize) -> Self {
        if m < 2 {
            return Self::trivial();
        }
        let mut swap: Vec<usize> = (0..m).collect();
        swap.swap(0, 1);
        let cycle: Vec<usize> = (0..m).map(|x| (x + 1) % m).collect();
        Self::from_permutations(&[swap, cycle]).expect("symmetric group")
    }

    pub fn alternating4() -> Self {
        Self::from_permutations(&[vec![1, 2, 0, 3], vec![1, 0, 3, 2]]).expect("A4")
    }

    /// Dihedral group of order `2m`, elements `r^k` (index k) and `s r^k`
    /// (index m + k).
    pub fn dihedral(m: usize) -> Self {
        let mul = (0..2 * m)
            .map(|a| {
                (0..2 * m)
                    .map(|b| {
                        let (sa, ka) = (a / m, a % m);
                        let (sb, kb) = (b / m, b % m);
                        // s^sa r^ka s^sb r^kb = s^{sa+sb} r^{(-1)^sb ka + kb}
                        let k = (if sb == 1 { (m - ka) % m + kb } else { ka + kb }) % m;
                        ((sa + sb) % 2) * m + k
                    })
                    .collect()
            })
            .collect();
        Self::from_table(mul, None).expect("dihedral group")
    }

    /// Quaternion group: indices `0..8` are `1, -1, i, -i, j, -j, k, -k`.
    pub fn quaternion() -> Self {
        // unit quaternions as (sign, axis) with axis 0 = 1, 1 = i, 2 = j, 3 = k
        let decode = |x: usize| (if x % 2 == 0 { 1i32 } else { -1 }, x / 2);
        let encode = |s: i32, a: usize| 2 * a + usize::from(s < 0);
        let table = |a: usize, b: usize| -> (i32, usize) {
            match (a, b) {
                (0, x) | (x, 0) => (1, x),
                (x, y) if x == y => (-1, 0),
                (1, 2) => (1, 3),
                (2, 3) => (1, 1),
                (3, 1) => (1, 2),
                (2, 1) => (-1, 3),
                (3, 2) => (-1, 1),
                (1, 3) => (-1, 2),
                _ => unreachable!(),
            }
        };
        let mul = (0..8)
            .map(|x| {
                (0..8)
                    .map(|y| {
                        let (sx, ax) = decode(x);
                        let (sy, ay) = decode(y);
                        let (s, a) = table(ax, ay);
                        encode(sx * sy * s, a)
                    })
                    .collect()
            })
            .collect();
        let names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"].iter().map(|s| s.to_string()).collect();
        Self::from_table(mul, Some(names)).expect("quaternion group")
    }

    /// `(a, b)` has index `a * |B| + b`.
    pub fn direct_product(a: &Self, b: &Self) -> Self {
        let (na, nb) = (a.order, b.order);
        let mul = (0..na * nb)
            .map(|x| (0..na * nb).map(|y| a.mul[x / nb][y / nb] * nb + b.mul[x % nb][y % nb]).collect())
            .collect();
        Self::from_table(mul, None).expect("direct product")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.id
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    /// `g h g^{-1}`.
    pub fn conj(&self, g: usize, h: usize) -> usize {
        self.mul[self.mul[g][h]][self.inv[g]]
    }

    pub fn pow(&self, g: usize, k: i64) -> usize {
        let base = if k < 0 { self.inv[g] } else { g };
        let mut acc = self.id;
        for _ in 0..k.unsigned_abs() {
            acc = self.mul[acc][base];
        }
        acc
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != self.id {
            x = self.mul[x][g];
            k += 1;
        }
        k
    }

    /// Least common multiple of element orders.
    pub fn exponent(&self) -> usize {
        (0..self.order).map(|g| self.element_order(g)).fold(1, num_integer::lcm)
    }

    pub fn is_homomorphism_to(&self, target: &Self, phi: &[usize]) -> bool {
        phi.len() == self.order
            && phi.iter().all(|&x| x < target.order)
            && (0..self.order).all(|a| (0..self.order).all(|b| phi[self.mul[a][b]] == target.mul[phi[a]][phi[b]]))
    }

    pub fn commute(&self, a: usize, b: usize) -> bool {
        self.mul[a][b] == self.mul[b][a]
    }
}
