//! JSON interchange formats: complexes, posets, placements, characteristic
//! functions, simplicial maps and pairing families.

use std::path::Path;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::coxeter::{CoxeterError, Poset};
use crate::permutahedron::OmegaSet;
use crate::realization::PairingFamily;
use crate::simplicial::{
    validate_pseudo_manifold, AbstractComplex, OrientedPseudoManifold, SimplicialError, SimplicialMap, VertexColoring,
};
use crate::small_cover::CharacteristicFunction;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("expected kind \"{expected}\", found \"{found}\"")]
    Kind { expected: &'static str, found: String },
    #[error("invalid number {0}")]
    Number(String),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Simplicial(#[from] SimplicialError),
    #[error(transparent)]
    Coxeter(#[from] CoxeterError),
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, IoError> {
    let text =
        std::fs::read_to_string(path).map_err(|source| IoError::Read { path: path.display().to_string(), source })?;
    Ok(serde_json::from_str(&text)?)
}

fn check_kind(found: &str, expected: &'static str) -> Result<(), IoError> {
    if found == expected {
        Ok(())
    } else {
        Err(IoError::Kind { expected, found: found.to_string() })
    }
}

/// `{"kind":"complex","dim","vertex_count","top_simplices","coloring"?,"orientation"?}`.
/// Orientation signs refer to simplices as listed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexFile {
    pub kind: String,
    pub dim: usize,
    pub vertex_count: usize,
    pub top_simplices: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coloring: Option<Vec<u8>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orientation: Option<Vec<i8>>,
}

/// A parsed complex; `orientation` is already in sorted-simplex order.
#[derive(Clone, Debug)]
pub struct LoadedComplex {
    pub complex: AbstractComplex,
    pub orientation: Option<Vec<i8>>,
    pub coloring: Option<VertexColoring>,
}

impl LoadedComplex {
    /// Uses the supplied orientation when present, otherwise propagates one.
    pub fn pseudo_manifold(&self) -> Result<OrientedPseudoManifold, SimplicialError> {
        match &self.orientation {
            Some(o) => OrientedPseudoManifold::with_orientation(self.complex.clone(), o.clone(), false),
            None => validate_pseudo_manifold(self.complex.clone(), true).map_err(SimplicialError::PseudoManifold),
        }
    }
}

impl ComplexFile {
    pub fn from_complex(k: &AbstractComplex, orientation: Option<&[i8]>, coloring: Option<&VertexColoring>) -> Self {
        ComplexFile {
            kind: "complex".into(),
            dim: k.dim(),
            vertex_count: k.vertex_count(),
            top_simplices: k.top_simplices().to_vec(),
            coloring: coloring.map(|c| c.colors().to_vec()),
            orientation: orientation.map(<[i8]>::to_vec),
        }
    }

    pub fn load(self) -> Result<LoadedComplex, IoError> {
        check_kind(&self.kind, "complex")?;
        if let Some(o) = &self.orientation {
            if o.len() != self.top_simplices.len() {
                return Err(
                    SimplicialError::OrientationLength { expected: self.top_simplices.len(), found: o.len() }.into()
                );
            }
        }
        let (complex, origin) = AbstractComplex::with_signs(self.vertex_count, self.top_simplices)?;
        if complex.dim() != self.dim {
            return Err(IoError::Invalid(format!(
                "declared dim {} but simplices have dim {}",
                self.dim,
                complex.dim()
            )));
        }
        let orientation = self.orientation.map(|o| origin.iter().map(|&(i, s)| o[i] * s).collect());
        let coloring = match self.coloring {
            Some(c) => {
                if c.len() != complex.vertex_count() {
                    return Err(IoError::Invalid(format!(
                        "coloring has {} entries for {} vertices",
                        c.len(),
                        complex.vertex_count()
                    )));
                }
                let colors = (complex.dim() + 1).max(c.iter().copied().max().unwrap_or(0) as usize);
                Some(VertexColoring::new(c, colors)?)
            }
            None => None,
        };
        Ok(LoadedComplex { complex, orientation, coloring })
    }
}

/// `{"kind":"poset","elements":k,"less":[[i,j],…]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetFile {
    pub kind: String,
    pub elements: usize,
    pub less: Vec<(usize, usize)>,
}

impl PosetFile {
    pub fn load(self) -> Result<Poset, IoError> {
        check_kind(&self.kind, "poset")?;
        Ok(Poset::new(self.elements, &self.less)?)
    }
}

/// `{"complex":…,"vectors":[[…],…],"exact":bool}`; exact entries may be
/// integers, floats (taken at their binary value) or strings `"p/q"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlacementFile {
    pub complex: ComplexFile,
    pub vectors: Vec<Vec<Value>>,
    #[serde(default)]
    pub exact: bool,
}

pub enum Placement {
    Float(Vec<Vec<f64>>),
    Exact(Vec<Vec<BigRational>>),
}

impl PlacementFile {
    pub fn vectors(&self) -> Result<Placement, IoError> {
        if self.exact {
            self.vectors
                .iter()
                .map(|v| v.iter().map(parse_rational).collect())
                .collect::<Result<_, _>>()
                .map(Placement::Exact)
        } else {
            self.vectors
                .iter()
                .map(|v| {
                    v.iter()
                        .map(|x| x.as_f64().map_or_else(|| parse_rational(x).and_then(|q| to_f64(&q, x)), Ok))
                        .collect()
                })
                .collect::<Result<_, _>>()
                .map(Placement::Float)
        }
    }
}

fn to_f64(q: &BigRational, raw: &Value) -> Result<f64, IoError> {
    q.to_f64().filter(|f| f.is_finite()).ok_or_else(|| IoError::Number(raw.to_string()))
}

fn parse_rational(v: &Value) -> Result<BigRational, IoError> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigRational::from_integer(i.into()))
            } else {
                n.as_f64().and_then(BigRational::from_float).ok_or_else(|| IoError::Number(n.to_string()))
            }
        }
        Value::String(s) => BigRational::from_str(s.trim()).map_err(|_| IoError::Number(s.clone())),
        other => Err(IoError::Number(other.to_string())),
    }
}

/// `{"kind":"characteristic","rank":n,"values":[[0/1…],…]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacteristicFile {
    pub kind: String,
    pub rank: usize,
    pub values: Vec<Vec<u8>>,
}

impl CharacteristicFile {
    pub fn load(self) -> Result<CharacteristicFunction, IoError> {
        check_kind(&self.kind, "characteristic")?;
        if let Some(r) = self.values.iter().find(|r| r.len() != self.rank || r.iter().any(|&b| b > 1)) {
            return Err(IoError::Invalid(format!("row {r:?} is not a 0/1 vector of length {}", self.rank)));
        }
        Ok(CharacteristicFunction::from_rows(self.rank, &self.values))
    }
}

/// `{"kind":"map","source":complex,"target":complex,"vertex_map":[…]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapFile {
    pub kind: String,
    pub source: ComplexFile,
    pub target: ComplexFile,
    pub vertex_map: Vec<usize>,
}

pub struct LoadedMap {
    pub source: OrientedPseudoManifold,
    pub target: OrientedPseudoManifold,
    pub map: SimplicialMap,
}

impl MapFile {
    pub fn load(self) -> Result<LoadedMap, IoError> {
        check_kind(&self.kind, "map")?;
        let source = self.source.load()?.pseudo_manifold()?;
        let target = self.target.load()?.pseudo_manifold()?;
        let map = SimplicialMap::new(source.complex().clone(), target.complex().clone(), self.vertex_map)?;
        Ok(LoadedMap { source, target, map })
    }
}

/// `{"kind":"pairings","lambda":[{"omega":[colors],"perm":[…]},…]}`; `perm`
/// acts on top simplices in sorted order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairingsFile {
    pub kind: String,
    pub lambda: Vec<PairingEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairingEntry {
    pub omega: Vec<u8>,
    pub perm: Vec<u32>,
}

impl PairingsFile {
    pub fn from_family(n: usize, fam: &PairingFamily) -> Self {
        let lambda = OmegaSet::all(n)
            .into_iter()
            .map(|w| PairingEntry { omega: w.colors(), perm: fam.lambda[w.index()].clone() })
            .collect();
        PairingsFile { kind: "pairings".into(), lambda }
    }

    pub fn load(self, n: usize) -> Result<PairingFamily, IoError> {
        check_kind(&self.kind, "pairings")?;
        let all = OmegaSet::all(n);
        let mut lambda: Vec<Option<Vec<u32>>> = vec![None; all.len()];
        for e in self.lambda {
            if e.omega.is_empty() || e.omega.iter().any(|&c| c == 0 || c as usize > n + 1) || e.omega.len() > n {
                return Err(IoError::Invalid(format!("bad color set {:?}", e.omega)));
            }
            let w = OmegaSet::from_colors(&e.omega);
            if lambda[w.index()].replace(e.perm).is_some() {
                return Err(IoError::Invalid(format!("duplicate entry for {w:?}")));
            }
        }
        let lambda = lambda
            .into_iter()
            .zip(&all)
            .map(|(l, w)| l.ok_or_else(|| IoError::Invalid(format!("missing pairing for {w:?}"))))
            .collect::<Result<_, _>>()?;
        Ok(PairingFamily { lambda })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orientation_follows_listed_order() {
        let text = r#"{"kind":"complex","dim":1,"vertex_count":3,
            "top_simplices":[[1,0],[1,2],[2,0]],"orientation":[-1,1,1]}"#;
        let f: ComplexFile = serde_json::from_str(text).unwrap();
        let l = f.load().unwrap();
        // [0,1] = −[1,0], [0,2] = −[2,0], [1,2] listed as is.
        assert_eq!(l.complex.top_simplices(), &[vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(l.orientation.as_deref(), Some(&[1i8, -1, 1][..]));
        assert!(l.pseudo_manifold().is_ok());
    }

    #[test]
    fn wrong_kind() {
        let f = PosetFile { kind: "complex".into(), elements: 1, less: vec![] };
        assert!(matches!(f.load(), Err(IoError::Kind { .. })));
    }

    #[test]
    fn rational_entries() {
        assert_eq!(parse_rational(&Value::from("3/4")).unwrap(), BigRational::new(3.into(), 4.into()));
        assert_eq!(parse_rational(&Value::from(-2)).unwrap(), BigRational::from_integer((-2).into()));
        assert!(parse_rational(&Value::from("x")).is_err());
    }
}
