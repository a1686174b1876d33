//! Finite groups as Cayley tables, with the standard small families.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteGroup {
    pub name: String,
    labels: Vec<String>,
    /// `mul[a * n + b] = ab`
    mul: Vec<u32>,
    identity: u32,
    inverse: Vec<u32>,
}

impl FiniteGroup {
    /// Validate a Cayley table: closure, associativity, identity, inverses.
    pub fn from_table(name: impl Into<String>, labels: Vec<String>, mul: Vec<u32>) -> Result<Self> {
        let n = labels.len();
        if n == 0 || mul.len() != n * n || mul.iter().any(|&v| v as usize >= n) {
            return Err(Error::Invalid("Cayley table has the wrong shape".into()));
        }
        let m = |a: usize, b: usize| mul[a * n + b] as usize;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if m(m(a, b), c) != m(a, m(b, c)) {
                        return Err(Error::Invalid(format!("not associative at ({a},{b},{c})")));
                    }
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| m(e, a) == a && m(a, e) == a))
            .ok_or_else(|| Error::Invalid("no identity element".into()))?;
        let mut inverse = Vec::with_capacity(n);
        for a in 0..n {
            let inv = (0..n).find(|&b| m(a, b) == identity).ok_or_else(|| Error::Invalid(format!("element {a} has no inverse")))?;
            inverse.push(inv as u32);
        }
        let mut sorted = labels.clone();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Invalid("duplicate group labels".into()));
        }
        Ok(FiniteGroup { name: name.into(), labels, mul, identity: identity as u32, inverse })
    }

    /// Closure of permutations of `0..degree`, elements sorted in one-line notation.
    pub fn from_permutations(name: impl Into<String>, degree: usize, gens: &[Vec<u32>]) -> Result<Self> {
        let id: Vec<u32> = (0..degree as u32).collect();
        for g in gens {
            let mut s = g.clone();
            s.sort_unstable();
            if s != id {
                return Err(Error::Invalid("generator is not a permutation".into()));
            }
        }
        let mut elems: BTreeSet<Vec<u32>> = BTreeSet::new();
        elems.insert(id.clone());
        let mut frontier = vec![id];
        while let Some(p) = frontier.pop() {
            for g in gens {
                // p then g
                let q: Vec<u32> = p.iter().map(|&i| g[i as usize]).collect();
                if elems.insert(q.clone()) {
                    frontier.push(q);
                }
            }
        }
        let elems: Vec<Vec<u32>> = elems.into_iter().collect();
        let index: HashMap<&Vec<u32>, u32> = elems.iter().enumerate().map(|(i, p)| (p, i as u32)).collect();
        let n = elems.len();
        let mut mul = vec![0u32; n * n];
        for (a, p) in elems.iter().enumerate() {
            for (b, q) in elems.iter().enumerate() {
                let r: Vec<u32> = p.iter().map(|&i| q[i as usize]).collect();
                mul[a * n + b] = index[&r];
            }
        }
        let wide = degree > 10;
        let labels = elems
            .iter()
            .map(|p| if wide { crate::sset_core::join_label(p) } else { p.iter().map(|d| char::from(b'0' + *d as u8)).collect() })
            .collect();
        FiniteGroup::from_table(name, labels, mul)
    }

    pub fn trivial() -> Self {
        FiniteGroup::cyclic(1)
    }

    pub fn cyclic(n: usize) -> Self {
        let labels = (0..n).map(|i| i.to_string()).collect();
        let mul = (0..n * n).map(|k| ((k / n + k % n) % n) as u32).collect();
        FiniteGroup::from_table(format!("Z{n}"), labels, mul).expect("cyclic group")
    }

    pub fn symmetric(n: usize) -> Self {
        let mut gens = Vec::new();
        if n >= 2 {
            let mut t: Vec<u32> = (0..n as u32).collect();
            t.swap(0, 1);
            gens.push(t);
            gens.push((0..n as u32).map(|i| (i + 1) % n as u32).collect());
        }
        FiniteGroup::from_permutations(format!("S{n}"), n.max(1), &gens).expect("symmetric group")
    }

    /// Symmetries of the regular n-gon, order `2n`.
    pub fn dihedral(n: usize) -> Self {
        let r: Vec<u32> = (0..n as u32).map(|i| (i + 1) % n as u32).collect();
        let s: Vec<u32> = (0..n as u32).map(|i| (n as u32 - i) % n as u32).collect();
        FiniteGroup::from_permutations(format!("D{n}"), n, &[r, s]).expect("dihedral group")
    }

    pub fn alternating4() -> Self {
        FiniteGroup::from_permutations("A4", 4, &[vec![1, 2, 0, 3], vec![1, 0, 3, 2]]).expect("A4")
    }

    /// Dicyclic group of order `4n`: `a^k x^j` with `a^{2n} = 1`, `x^2 = a^n`,
    /// `x a x^{-1} = a^{-1}`. `n = 2` is the quaternion group.
    pub fn dicyclic(n: usize) -> Self {
        let m = 2 * n;
        let size = 2 * m;
        let elem = |k: usize, j: usize| (j * m + k % m) as u32;
        let mut mul = vec![0u32; size * size];
        for j1 in 0..2 {
            for k1 in 0..m {
                for j2 in 0..2 {
                    for k2 in 0..m {
                        let prod = match (j1, j2) {
                            (0, _) => elem(k1 + k2, j2),
                            (1, 0) => elem(k1 + m - k2, 1),
                            _ => elem(k1 + m - k2 + n, 0),
                        };
                        mul[elem(k1, j1) as usize * size + elem(k2, j2) as usize] = prod;
                    }
                }
            }
        }
        let labels = (0..size).map(|e| if e < m { format!("a{e}") } else { format!("a{}x", e - m) }).collect();
        let name = if n == 2 { "Q8".to_string() } else { format!("Dic{n}") };
        FiniteGroup::from_table(name, labels, mul).expect("dicyclic group")
    }

    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Self {
        let (na, nb) = (a.order(), b.order());
        let mut labels = Vec::with_capacity(na * nb);
        for x in 0..na {
            for y in 0..nb {
                labels.push(format!("({},{})", a.labels[x], b.labels[y]));
            }
        }
        let n = na * nb;
        let mut mul = vec![0u32; n * n];
        for p in 0..n {
            for q in 0..n {
                mul[p * n + q] = a.mul(p / nb, q / nb) * nb as u32 + b.mul(p % nb, q % nb);
            }
        }
        FiniteGroup::from_table(format!("{}x{}", a.name, b.name), labels, mul).expect("product group")
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn identity(&self) -> usize {
        self.identity as usize
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> u32 {
        self.mul[a * self.order() + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }

    pub fn table(&self) -> &[u32] {
        &self.mul
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order()).all(|a| (0..self.order()).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Subgroup generated by `gens`, sorted.
    pub fn generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut set: BTreeSet<usize> = BTreeSet::from([self.identity()]);
        let mut frontier = vec![self.identity()];
        while let Some(a) = frontier.pop() {
            for &g in gens {
                let b = self.mul(a, g) as usize;
                if set.insert(b) {
                    frontier.push(b);
                }
            }
        }
        set.into_iter().collect()
    }

    pub fn is_subgroup(&self, k: &[usize]) -> bool {
        !k.is_empty()
            && k.iter().all(|&a| a < self.order())
            && k.iter().all(|&a| k.iter().all(|&b| k.contains(&(self.mul(a, self.inv(b)) as usize))))
    }

    /// Left cosets `gK`, each sorted, ordered by smallest element.
    pub fn left_cosets(&self, k: &[usize]) -> Result<Vec<Vec<usize>>> {
        if !self.is_subgroup(k) {
            return Err(Error::Invalid("not a subgroup".into()));
        }
        let mut seen = vec![false; self.order()];
        let mut out = Vec::new();
        for g in 0..self.order() {
            if seen[g] {
                continue;
            }
            let mut c: Vec<usize> = k.iter().map(|&h| self.mul(g, h) as usize).collect();
            c.sort_unstable();
            for &x in &c {
                seen[x] = true;
            }
            out.push(c);
        }
        Ok(out)
    }

    /// Double cosets `KgK`, each sorted, ordered by smallest element.
    pub fn double_cosets(&self, k: &[usize]) -> Result<Vec<Vec<usize>>> {
        if !self.is_subgroup(k) {
            return Err(Error::Invalid("not a subgroup".into()));
        }
        let mut seen = vec![false; self.order()];
        let mut out = Vec::new();
        for g in 0..self.order() {
            if seen[g] {
                continue;
            }
            let mut c: BTreeSet<usize> = BTreeSet::new();
            for &a in k {
                for &b in k {
                    c.insert(self.mul(self.mul(a, g) as usize, b) as usize);
                }
            }
            for &x in &c {
                seen[x] = true;
            }
            out.push(c.into_iter().collect());
        }
        Ok(out)
    }

    /// Left multiplication on `G/K`: `action[g][c]` is the coset `g·c`.
    pub fn coset_action(&self, k: &[usize]) -> Result<Vec<Vec<u32>>> {
        let cosets = self.left_cosets(k)?;
        let mut which = vec![0u32; self.order()];
        for (i, c) in cosets.iter().enumerate() {
            for &x in c {
                which[x] = i as u32;
            }
        }
        Ok((0..self.order()).map(|g| cosets.iter().map(|c| which[self.mul(g, c[0]) as usize]).collect()).collect())
    }
}

/// One representative of each isomorphism class of groups of order `<= 12`,
/// up to `max_order`.
pub fn small_groups(max_order: usize) -> Vec<FiniteGroup> {
    let z = FiniteGroup::cyclic;
    let mut out = vec![z(1)];
    let mut push = |order: usize, g: FiniteGroup| {
        if order <= max_order {
            out.push(g);
        }
    };
    push(2, z(2));
    push(3, z(3));
    push(4, z(4));
    push(4, FiniteGroup::direct_product(&z(2), &z(2)));
    push(5, z(5));
    push(6, z(6));
    push(6, FiniteGroup::symmetric(3));
    push(7, z(7));
    push(8, z(8));
    push(8, FiniteGroup::direct_product(&z(4), &z(2)));
    push(8, FiniteGroup::direct_product(&FiniteGroup::direct_product(&z(2), &z(2)), &z(2)));
    push(8, FiniteGroup::dihedral(4));
    push(8, FiniteGroup::dicyclic(2));
    push(9, z(9));
    push(9, FiniteGroup::direct_product(&z(3), &z(3)));
    push(10, z(10));
    push(10, FiniteGroup::dihedral(5));
    push(11, z(11));
    push(12, z(12));
    push(12, FiniteGroup::direct_product(&z(6), &z(2)));
    push(12, FiniteGroup::dihedral(6));
    push(12, FiniteGroup::alternating4());
    push(12, FiniteGroup::dicyclic(3));
    out
}
