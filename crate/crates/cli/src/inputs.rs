//! Input file formats and named groups.

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use serde::Deserialize;

use segal_core::constructions::{CategoryJson, FiniteCategory, ZPlusPoset};
use segal_core::group::FiniteGroup;
use segal_core::pentagon::PentagonSolution;
use segal_core::sset_core::LevelAction;
use segal_core::{Error, Result, TruncatedSimplicialSet};

pub fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
}

fn parse<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    serde_json::from_str(&read(path)?).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
}

pub fn simplicial_set(path: &Path) -> Result<TruncatedSimplicialSet> {
    TruncatedSimplicialSet::from_json(&read(path)?)
}

pub fn category(path: &Path) -> Result<FiniteCategory> {
    FiniteCategory::from_json_value(&parse::<CategoryJson>(path)?)
}

pub fn pentagon_solution(path: &Path) -> Result<PentagonSolution> {
    PentagonSolution::from_json(&read(path)?)
}

/// `{"labels": [...], "less_equal": [["a", "b"], ...], "shift": ["F(a)", ...]}`;
/// the order is the reflexive-transitive closure of `less_equal`.
#[derive(Deserialize)]
struct PosetFile {
    labels: Vec<String>,
    #[serde(default)]
    less_equal: Vec<[String; 2]>,
    shift: Vec<String>,
}

fn position(labels: &[String], s: &str) -> Result<usize> {
    labels.iter().position(|l| l == s).ok_or_else(|| Error::Invalid(format!("unknown label {s}")))
}

pub fn zposet(path: &Path) -> Result<ZPlusPoset> {
    let f: PosetFile = parse(path)?;
    let n = f.labels.len();
    let mut le = vec![false; n * n];
    for i in 0..n {
        le[i * n + i] = true;
    }
    for [a, b] in &f.less_equal {
        le[position(&f.labels, a)? * n + position(&f.labels, b)?] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if le[i * n + k] && le[k * n + j] {
                    le[i * n + j] = true;
                }
            }
        }
    }
    let shift = f.shift.iter().map(|s| position(&f.labels, s).map(|i| i as u32)).collect::<Result<_>>()?;
    ZPlusPoset::new(f.labels, le, shift)
}

/// `{"vertices": [...], "edges": [["f", "source", "target"], ...]}`.
#[derive(Deserialize)]
struct GraphFile {
    vertices: Vec<String>,
    edges: Vec<[String; 3]>,
}

pub fn graph(path: &Path) -> Result<(Vec<String>, Vec<(String, u32, u32)>)> {
    let f: GraphFile = parse(path)?;
    let edges = f
        .edges
        .iter()
        .map(|[l, s, t]| Ok((l.clone(), position(&f.vertices, s)? as u32, position(&f.vertices, t)? as u32)))
        .collect::<Result<_>>()?;
    Ok((f.vertices, edges))
}

/// `{"identity": 0, "perms": [[[...level 0...], [...level 1...]], ...]}`.
#[derive(Deserialize)]
struct ActionFile {
    identity: usize,
    perms: Vec<Vec<Vec<u32>>>,
}

pub fn action(path: &Path) -> Result<LevelAction> {
    let f: ActionFile = parse(path)?;
    Ok(LevelAction { perms: f.perms, identity: f.identity })
}

/// `Z<n>`, `S<n>`, `D<n>`, `Q8`, `Dic<n>`, `A4` and products `GxH`.
pub fn group(name: &str) -> Result<FiniteGroup> {
    let parts: Vec<&str> = name.split('x').collect();
    let mut groups = parts.iter().map(|p| factor(p)).collect::<Result<Vec<_>>>()?.into_iter();
    let first = groups.next().ok_or_else(|| Error::Invalid("empty group name".into()))?;
    Ok(groups.fold(first, |acc, g| FiniteGroup::direct_product(&acc, &g)))
}

fn factor(name: &str) -> Result<FiniteGroup> {
    let bad = || Error::Invalid(format!("unknown group {name}"));
    let num = |s: &str| s.parse::<usize>().ok().filter(|&n| n >= 1).ok_or_else(bad);
    match name {
        "Q8" => Ok(FiniteGroup::dicyclic(2)),
        "A4" => Ok(FiniteGroup::alternating4()),
        _ if name.starts_with("Dic") => Ok(FiniteGroup::dicyclic(num(&name[3..])?)),
        _ if name.starts_with('Z') => Ok(FiniteGroup::cyclic(num(&name[1..])?)),
        _ if name.starts_with('S') && num(&name[1..])? <= 6 => Ok(FiniteGroup::symmetric(num(&name[1..])?)),
        _ if name.starts_with('D') && num(&name[1..])? >= 3 => Ok(FiniteGroup::dihedral(num(&name[1..])?)),
        _ => Err(bad()),
    }
}

/// A subgroup of `g`: either `S<m>` inside `S<n>` (permutations fixing the
/// last `n - m` points) or a comma-separated list of generator labels.
pub fn subgroup(g: &FiniteGroup, text: &str) -> Result<Vec<usize>> {
    if let (Some(m), Some(n)) = (text.strip_prefix('S'), g.name.strip_prefix('S')) {
        if let (Ok(m), Ok(n)) = (m.parse::<usize>(), n.parse::<usize>()) {
            if m <= n {
                let fixed: String = (m..n).map(|i| i.to_string()).collect();
                return Ok((0..g.order()).filter(|&a| g.label(a).ends_with(&fixed)).collect());
            }
        }
    }
    let index: HashMap<&str, usize> = (0..g.order()).map(|a| (g.label(a), a)).collect();
    let gens = text
        .split(',')
        .filter(|s| !s.is_empty())
        .map(|s| index.get(s).copied().ok_or_else(|| Error::Invalid(format!("{s} is not an element of {}", g.name))))
        .collect::<Result<Vec<_>>>()?;
    Ok(g.generated(&gens))
}
