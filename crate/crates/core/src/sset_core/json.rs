use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Kind, TruncatedSimplicialSet};
use crate::error::{Error, Result};

/// Interchange form. `faces[n-1][i]` maps labels of level `n` to labels of
/// level `n-1`; `degeneracies[n][i]` maps level `n` to level `n+1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplicialSetJson {
    pub kind: Kind,
    pub truncation: usize,
    pub levels: Vec<Vec<String>>,
    pub faces: Vec<Vec<BTreeMap<String, String>>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub degeneracies: Vec<Vec<BTreeMap<String, String>>>,
}

impl TruncatedSimplicialSet {
    pub fn to_json_value(&self) -> SimplicialSetJson {
        let top = self.truncation();
        let table = |n: usize, map: &[u32], tgt: usize| -> BTreeMap<String, String> {
            map.iter().enumerate().map(|(x, &y)| (self.labels[n][x].clone(), self.labels[tgt][y as usize].clone())).collect()
        };
        SimplicialSetJson {
            kind: self.kind,
            truncation: top,
            levels: self.labels.clone(),
            faces: (1..=top).map(|n| (0..=n).map(|i| table(n, &self.faces[n][i], n - 1)).collect()).collect(),
            degeneracies: (0..self.degens.len()).map(|n| (0..=n).map(|i| table(n, &self.degens[n][i], n + 1)).collect()).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("serializable")
    }

    pub fn from_json_value(v: &SimplicialSetJson) -> Result<Self> {
        if v.levels.len() != v.truncation + 1 {
            return Err(Error::Structural(format!("truncation {} but {} levels", v.truncation, v.levels.len())));
        }
        if v.faces.len() != v.truncation {
            return Err(Error::Structural(format!("expected {} face levels, got {}", v.truncation, v.faces.len())));
        }
        let mut labels = v.levels.clone();
        for l in labels.iter_mut() {
            l.sort();
        }
        let resolve = |n: usize, map: &BTreeMap<String, String>, tgt: usize, what: String| -> Result<Vec<u32>> {
            if map.len() != labels[n].len() {
                return Err(Error::Structural(format!("{what}: map is not total")));
            }
            labels[n]
                .iter()
                .map(|l| {
                    let y = map.get(l).ok_or_else(|| Error::Structural(format!("{what}: no entry for {l:?}")))?;
                    labels[tgt]
                        .binary_search(y)
                        .map(|i| i as u32)
                        .map_err(|_| Error::Structural(format!("{what}: unknown target {y:?}")))
                })
                .collect()
        };
        let mut faces = vec![Vec::new()];
        for n in 1..=v.truncation {
            let row = &v.faces[n - 1];
            if row.len() != n + 1 {
                return Err(Error::Structural(format!("level {n}: expected {} face maps", n + 1)));
            }
            faces.push(row.iter().enumerate().map(|(i, m)| resolve(n, m, n - 1, format!("d_{i} on level {n}"))).collect::<Result<_>>()?);
        }
        let mut degens = Vec::new();
        match v.kind {
            Kind::SemiSimplicial if !v.degeneracies.is_empty() => {
                return Err(Error::Structural("semi-simplicial set with degeneracies".into()));
            }
            Kind::Simplicial => {
                if v.degeneracies.len() != v.truncation {
                    return Err(Error::Structural(format!("expected {} degeneracy levels", v.truncation)));
                }
                for n in 0..v.truncation {
                    let row = &v.degeneracies[n];
                    if row.len() != n + 1 {
                        return Err(Error::Structural(format!("level {n}: expected {} degeneracies", n + 1)));
                    }
                    degens.push(row.iter().enumerate().map(|(i, m)| resolve(n, m, n + 1, format!("s_{i} on level {n}"))).collect::<Result<_>>()?);
                }
            }
            _ => {}
        }
        TruncatedSimplicialSet::from_tables(v.kind, labels, faces, degens)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let v: SimplicialSetJson = serde_json::from_str(s).map_err(|e| Error::Structural(format!("json: {e}")))?;
        Self::from_json_value(&v)
    }
}
