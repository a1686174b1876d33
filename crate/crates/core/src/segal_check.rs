//! 1-Segal, 2-Segal and unitality verdicts, path spaces and suspensions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par;
use crate::polygeom::{boundary_pair_collection, boundary_pairs, enumerate_triangulations};
use crate::sset_core::{check_segal_bijective, IndexCollection, Kind, MapFailure, TruncatedSimplicialSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    OneSegal,
    TwoSegal,
    Unital,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    #[default]
    AllTriangulations,
    BoundaryPairs,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessContext {
    /// Maximal members of the failing index collection.
    Collection(Vec<Vec<usize>>),
    /// Unitality square for the degeneracy `s_i: X_{n-1} → X_n`.
    Square { i: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Failure {
    NotInjective { first: String, second: String },
    /// Labels of the membrane values on the context's members.
    NotSurjective { membrane: Vec<String> },
    /// An n-simplex over a degenerate edge that is not a degeneracy.
    NotPullback { element: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub level: usize,
    pub context: WitnessContext,
    pub failure: Failure,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegalVerdict {
    pub property: Property,
    pub up_to_level: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strategy: Option<Strategy>,
    pub holds: bool,
    /// Empty iff `holds`; otherwise the first failure in canonical order.
    pub witnesses: Vec<Witness>,
}

impl SegalVerdict {
    fn from_witness(property: Property, up_to_level: usize, strategy: Option<Strategy>, w: Option<Witness>) -> Self {
        SegalVerdict { property, up_to_level, strategy, holds: w.is_none(), witnesses: w.into_iter().collect() }
    }
}

fn witness(x: &TruncatedSimplicialSet, n: usize, maximal: Vec<Vec<usize>>, f: MapFailure) -> Witness {
    let failure = match f {
        MapFailure::NotInjective { first, second } => {
            Failure::NotInjective { first: x.label(n, first).to_string(), second: x.label(n, second).to_string() }
        }
        MapFailure::NotSurjective { membrane } => Failure::NotSurjective {
            membrane: membrane.values.iter().zip(&maximal).map(|(&v, s)| x.label(s.len() - 1, v).to_string()).collect(),
        },
    };
    Witness { level: n, context: WitnessContext::Collection(maximal), failure }
}

fn need(x: &TruncatedSimplicialSet, up_to: usize) -> Result<()> {
    if up_to > x.truncation() {
        return Err(Error::InsufficientTruncation { needed: up_to, available: x.truncation() });
    }
    Ok(())
}

/// First failing collection, levels in increasing order and collections in
/// the given order within a level.
fn first_failure(x: &TruncatedSimplicialSet, per_level: impl Iterator<Item = (usize, Vec<IndexCollection>)>) -> Result<Option<Witness>> {
    for (n, colls) in per_level {
        let found = par::find_map_first(&colls, |c| match check_segal_bijective(x, c) {
            Ok(None) => None,
            Ok(Some((maximal, f))) => Some(Ok(witness(x, n, maximal, f))),
            Err(e) => Some(Err(e)),
        });
        if let Some(r) = found {
            return r.map(Some);
        }
    }
    Ok(None)
}

/// `X_n → X_1 ×_{X_0} ⋯ ×_{X_0} X_1` bijective for `2 <= n <= up_to`.
pub fn is_1segal(x: &TruncatedSimplicialSet, up_to: usize) -> Result<SegalVerdict> {
    need(x, up_to)?;
    let w = first_failure(x, (2..=up_to).map(|n| (n, vec![IndexCollection::intervals(n)])))?;
    Ok(SegalVerdict::from_witness(Property::OneSegal, up_to, None, w))
}

/// The 2-Segal maps for `3 <= n <= up_to`.
pub fn is_2segal(x: &TruncatedSimplicialSet, up_to: usize, strategy: Strategy) -> Result<SegalVerdict> {
    need(x, up_to)?;
    let mut levels = Vec::new();
    for n in 3..=up_to {
        let colls: Vec<IndexCollection> = match strategy {
            Strategy::AllTriangulations => enumerate_triangulations(n)?.iter().map(|t| t.to_collection()).collect(),
            Strategy::BoundaryPairs => {
                boundary_pairs(n).into_iter().map(|(i, j)| boundary_pair_collection(n, i, j)).collect::<Result<_>>()?
            }
        };
        levels.push((n, colls));
    }
    let w = first_failure(x, levels.into_iter())?;
    Ok(SegalVerdict::from_witness(Property::TwoSegal, up_to, Some(strategy), w))
}

/// Squares `X_{n-1} → X_n` over `s_0: X_0 → X_1` on the edge `{i, i+1}` are
/// pullbacks of sets for `2 <= n <= up_to`, `0 <= i < n`.
pub fn is_unital(x: &TruncatedSimplicialSet, up_to: usize) -> Result<SegalVerdict> {
    if x.kind() != Kind::Simplicial {
        return Err(Error::UnitalityUndefined);
    }
    need(x, up_to)?;
    let degenerate_edge: Vec<bool> = {
        let mut d = vec![false; x.level_size(1)];
        for a in 0..x.level_size(0) as u32 {
            d[x.degeneracy(0, 0, a).unwrap() as usize] = true;
        }
        d
    };
    for n in 2..=up_to {
        let squares: Vec<usize> = (0..n).collect();
        let found = par::find_map_first(&squares, |&i| {
            // image of s_i: X_{n-1} → X_n
            let mut hit = vec![false; x.level_size(n)];
            let mut dup = None;
            for z in 0..x.level_size(n - 1) as u32 {
                let y = x.degeneracy(n - 1, i, z).unwrap() as usize;
                if hit[y] && dup.is_none() {
                    dup = Some((y, z));
                }
                hit[y] = true;
            }
            if let Some((y, z)) = dup {
                let first = (0..z).find(|&w| x.degeneracy(n - 1, i, w).unwrap() as usize == y).unwrap();
                return Some(Witness {
                    level: n,
                    context: WitnessContext::Square { i },
                    failure: Failure::NotInjective { first: x.label(n - 1, first).into(), second: x.label(n - 1, z).into() },
                });
            }
            let edge = [i, i + 1];
            let path = TruncatedSimplicialSet::restriction_path(n, &edge);
            (0..x.level_size(n) as u32).find(|&y| degenerate_edge[x.follow(&path, y) as usize] && !hit[y as usize]).map(|y| Witness {
                level: n,
                context: WitnessContext::Square { i },
                failure: Failure::NotPullback { element: x.label(n, y).to_string() },
            })
        });
        if let Some(w) = found {
            return Ok(SegalVerdict::from_witness(Property::Unital, up_to, None, Some(w)));
        }
    }
    Ok(SegalVerdict::from_witness(Property::Unital, up_to, None, None))
}

fn shifted(x: &TruncatedSimplicialSet, initial: bool) -> Result<TruncatedSimplicialSet> {
    let top = x.truncation();
    if top == 0 {
        return Err(Error::InsufficientTruncation { needed: 1, available: 0 });
    }
    let labels: Vec<Vec<String>> = (1..=top).map(|n| x.labels(n).to_vec()).collect();
    let mut faces = vec![Vec::new()];
    for n in 1..top {
        // level n of P is level n+1 of X
        faces.push((0..=n).map(|i| x.face_map(n + 1, if initial { i + 1 } else { i }).to_vec()).collect());
    }
    let mut degens = Vec::new();
    if x.is_simplicial() {
        for n in 0..top - 1 {
            degens.push((0..=n).map(|i| x.degeneracy_map(n + 1, if initial { i + 1 } else { i }).unwrap().to_vec()).collect());
        }
    }
    TruncatedSimplicialSet::from_tables(x.kind(), labels, faces, degens)
}

/// `(P^◁X)_n = X_{n+1}` with `∂_i = ∂_{i+1}`, `s_i = s_{i+1}`.
pub fn path_space_initial(x: &TruncatedSimplicialSet) -> Result<TruncatedSimplicialSet> {
    shifted(x, true)
}

/// `(P^▷X)_n = X_{n+1}` with `∂_i = ∂_i`, `s_i = s_i` for `i <= n`.
pub fn path_space_final(x: &TruncatedSimplicialSet) -> Result<TruncatedSimplicialSet> {
    shifted(x, false)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrosscheckReport {
    pub truncation: usize,
    /// Truncation of both path spaces (one less than the input).
    pub path_truncation: usize,
    pub up_to: usize,
    pub two_segal: SegalVerdict,
    pub initial_one_segal: SegalVerdict,
    pub final_one_segal: SegalVerdict,
    /// `two_segal.holds == (initial && final)`.
    pub agree: bool,
}

/// Compare `is_2segal(X, up_to)` with 1-Segality of both path spaces up to
/// `up_to - 1`.
pub fn path_criterion_crosscheck(x: &TruncatedSimplicialSet, up_to: usize) -> Result<CrosscheckReport> {
    if x.truncation() < up_to + 1 {
        return Err(Error::InsufficientTruncation { needed: up_to + 1, available: x.truncation() });
    }
    if up_to == 0 {
        return Err(Error::Invalid("crosscheck needs up_to >= 1".into()));
    }
    let two = is_2segal(x, up_to, Strategy::AllTriangulations)?;
    let pi = path_space_initial(x)?;
    let pf = path_space_final(x)?;
    let a = is_1segal(&pi, up_to - 1)?;
    let b = is_1segal(&pf, up_to - 1)?;
    let agree = two.holds == (a.holds && b.holds);
    Ok(CrosscheckReport {
        truncation: x.truncation(),
        path_truncation: pi.truncation(),
        up_to,
        two_segal: two,
        initial_one_segal: a,
        final_one_segal: b,
        agree,
    })
}

fn suspension(x: &TruncatedSimplicialSet, left: bool) -> Result<TruncatedSimplicialSet> {
    let top = x.truncation();
    let mut labels = vec![vec!["*".to_string()]];
    labels.extend((0..=top).map(|n| x.labels(n).to_vec()));
    let mut faces = vec![Vec::new(), vec![vec![0u32; x.level_size(0)]; 2]];
    for n in 2..=top + 1 {
        // level n of the suspension is level n-1 of X
        let m = n - 1;
        let maps = (0..=n)
            .map(|i| {
                let j = if left { i.saturating_sub(1) } else { i.min(m) };
                x.face_map(m, j).to_vec()
            })
            .collect();
        faces.push(maps);
    }
    TruncatedSimplicialSet::from_tables(Kind::SemiSimplicial, labels, faces, Vec::new())
}

/// `Σ^◁(X)_0 = pt`, `Σ^◁(X)_n = X_{n-1}` with faces `(∂_0, ∂_0, ∂_1, …, ∂_{n-1})`.
pub fn suspension_left(x: &TruncatedSimplicialSet) -> Result<TruncatedSimplicialSet> {
    suspension(x, true)
}

/// `Σ^▷(X)_0 = pt`, `Σ^▷(X)_n = X_{n-1}` with faces `(∂_0, …, ∂_{n-1}, ∂_{n-1})`.
pub fn suspension_right(x: &TruncatedSimplicialSet) -> Result<TruncatedSimplicialSet> {
    suspension(x, false)
}
