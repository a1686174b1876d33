//! One-vertex 2-Segal sets as colored cooperads in `(Set, ×)`.
//!
//! Colors are the edges `X_1`; `n`-ary operations are `X_n` with colors
//! `π_0 = ∂_{0,n}` and `π_i = ∂_{i-1,i}`. The cocomposition `f_{m_1..m_n}`
//! restricts an `N`-simplex (`N = Σ m_i`) to the outer polygon on
//! `0, s_1, …, s_n` and to the inner polygons `s_{i-1}, …, s_i`.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par;
use crate::sset_core::TruncatedSimplicialSet;

/// The image of one cocomposition, indexed by the source operation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cocomposition {
    pub arity: Vec<usize>,
    /// `(outer ∈ Q(n), [inner_i ∈ Q(m_i)])` per element of `Q(N)`.
    pub images: Vec<(u32, Vec<u32>)>,
}

impl Cocomposition {
    pub fn total(&self) -> usize {
        self.arity.iter().sum()
    }

    /// Inverse lookup, built on demand: the operadic composition of an
    /// invertible cooperad.
    pub fn inverse(&self) -> HashMap<(u32, Vec<u32>), u32> {
        self.images.iter().enumerate().map(|(x, img)| (img.clone(), x as u32)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredCooperadData {
    pub colors: Vec<String>,
    /// `operations[n]` labels `Q(n) = X_n` for `1 <= n <= up_to`; entry 0 is empty.
    pub operations: Vec<Vec<String>>,
    /// `projections[n][i][x] = π_i(x)`.
    pub projections: Vec<Vec<Vec<u32>>>,
    /// Keyed by `(m_1, …, m_n)` with every `m_i >= 1` and `Σ m_i <= up_to`.
    pub cocompositions: BTreeMap<Vec<usize>, Cocomposition>,
    pub up_to: usize,
}

impl ColoredCooperadData {
    pub fn arity_size(&self, n: usize) -> usize {
        self.operations.get(n).map_or(0, |o| o.len())
    }

    /// `Q(b_1, …, b_n | b_0)` as indices into `Q(n)`.
    pub fn operations_with_colors(&self, inputs: &[u32], output: u32) -> Vec<u32> {
        let n = inputs.len();
        (0..self.arity_size(n) as u32)
            .filter(|&x| self.projections[n][0][x as usize] == output && (1..=n).all(|i| self.projections[n][i][x as usize] == inputs[i - 1]))
            .collect()
    }
}

/// Compositions of every `N <= up_to` into positive parts, by `N` then
/// lexicographically.
pub fn compositions(up_to: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for m in 1..=rest {
            cur.push(m);
            go(rest - m, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    for total in 1..=up_to {
        go(total, &mut Vec::new(), &mut out);
    }
    out
}

pub fn extract_cooperad(x: &TruncatedSimplicialSet, up_to: usize) -> Result<ColoredCooperadData> {
    if x.level_size(0) != 1 {
        return Err(Error::Invalid(format!("cooperad extraction needs a single vertex, found {}", x.level_size(0))));
    }
    if up_to > x.truncation() {
        return Err(Error::InsufficientTruncation { needed: up_to, available: x.truncation() });
    }
    let mut operations = vec![Vec::new()];
    let mut projections = vec![Vec::new()];
    for n in 1..=up_to {
        operations.push(x.labels(n).to_vec());
        let mut proj = vec![restriction(x, n, &[0, n])];
        proj.extend((1..=n).map(|i| restriction(x, n, &[i - 1, i])));
        projections.push(proj);
    }
    let arities = compositions(up_to);
    let cocomps = par::map(&arities, |m| {
        let total: usize = m.iter().sum();
        let cuts: Vec<usize> = std::iter::once(0).chain(m.iter().scan(0, |s, &k| { *s += k; Some(*s) })).collect();
        let outer = TruncatedSimplicialSet::restriction_path(total, &cuts);
        let inner: Vec<_> = cuts.windows(2).map(|w| TruncatedSimplicialSet::restriction_path(total, &(w[0]..=w[1]).collect::<Vec<_>>())).collect();
        let images = (0..x.level_size(total) as u32).map(|s| (x.follow(&outer, s), inner.iter().map(|p| x.follow(p, s)).collect())).collect();
        Cocomposition { arity: m.clone(), images }
    });
    Ok(ColoredCooperadData {
        colors: x.labels(1).to_vec(),
        operations,
        projections,
        cocompositions: arities.into_iter().zip(cocomps).collect(),
        up_to,
    })
}

fn restriction(x: &TruncatedSimplicialSet, n: usize, keep: &[usize]) -> Vec<u32> {
    let path = TruncatedSimplicialSet::restriction_path(n, keep);
    (0..x.level_size(n) as u32).map(|s| x.follow(&path, s)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InvertibilityFailure {
    Counit { color: String, size: usize },
    /// A cocomposition image leaves the colored fiber product.
    Uncolored { arity: Vec<usize>, operation: String },
    NotInjective { arity: Vec<usize>, first: String, second: String },
    NotSurjective { arity: Vec<usize>, image: usize, target: u128 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvertibilityVerdict {
    pub holds: bool,
    pub up_to: usize,
    pub failure: Option<InvertibilityFailure>,
}

/// Counits singletons and every `f_{m_1..m_n}` with `Σ m_i <= up_to`
/// bijective onto its colored fiber product.
pub fn check_invertibility(d: &ColoredCooperadData, up_to: usize) -> Result<InvertibilityVerdict> {
    if up_to > d.up_to {
        return Err(Error::InsufficientTruncation { needed: up_to, available: d.up_to });
    }
    let verdict = |failure: Option<InvertibilityFailure>| InvertibilityVerdict { holds: failure.is_none(), up_to, failure };
    if up_to >= 1 {
        for b in 0..d.colors.len() as u32 {
            let size = d.operations_with_colors(&[b], b).len();
            if size != 1 {
                return Ok(verdict(Some(InvertibilityFailure::Counit { color: d.colors[b as usize].clone(), size })));
            }
        }
    }
    let arities: Vec<&Cocomposition> = d.cocompositions.values().filter(|c| c.total() <= up_to).collect();
    let mut arities = arities;
    arities.sort_by(|a, b| (a.total(), &a.arity).cmp(&(b.total(), &b.arity)));
    let failure = par::find_map_first(&arities, |c| cocomposition_failure(d, c));
    Ok(verdict(failure))
}

fn cocomposition_failure(d: &ColoredCooperadData, c: &Cocomposition) -> Option<InvertibilityFailure> {
    let n = c.arity.len();
    let total = c.total();
    let label = |x: u32| d.operations[total][x as usize].clone();
    let proj = |k: usize, i: usize, x: u32| d.projections[k][i][x as usize];
    for (x, (outer, inner)) in c.images.iter().enumerate() {
        if (0..n).any(|i| proj(n, i + 1, *outer) != proj(c.arity[i], 0, inner[i])) {
            return Some(InvertibilityFailure::Uncolored { arity: c.arity.clone(), operation: label(x as u32) });
        }
    }
    let mut seen: HashMap<&(u32, Vec<u32>), u32> = HashMap::with_capacity(c.images.len());
    for (x, img) in c.images.iter().enumerate() {
        if let Some(&y) = seen.get(img) {
            return Some(InvertibilityFailure::NotInjective { arity: c.arity.clone(), first: label(y), second: label(x as u32) });
        }
        seen.insert(img, x as u32);
    }
    // |Q(n) ×_{B^n} Π Q(m_i)| = Σ_y Π_i #{z ∈ Q(m_i) : π_0 z = π_i y}
    let mut by_output: HashMap<usize, Vec<u128>> = HashMap::new();
    for &m in &c.arity {
        by_output.entry(m).or_insert_with(|| {
            let mut counts = vec![0u128; d.colors.len()];
            for &b in &d.projections[m][0] {
                counts[b as usize] += 1;
            }
            counts
        });
    }
    let target: u128 = (0..d.arity_size(n) as u32)
        .map(|y| (0..n).map(|i| by_output[&c.arity[i]][proj(n, i + 1, y) as usize]).fold(1u128, |a, b| a.saturating_mul(b)))
        .fold(0u128, |a, b| a.saturating_add(b));
    (c.images.len() as u128 != target).then(|| InvertibilityFailure::NotSurjective { arity: c.arity.clone(), image: c.images.len(), target })
}
