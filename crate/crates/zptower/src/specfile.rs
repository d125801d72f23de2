//! JSON tower-spec format: the on-disk interface of the CLI.
//!
//! Vertices are strings; edges are records {id, from, to, voltage}; inertia
//! maps vertex names to generator vectors; an optional embedding gives the
//! cyclic outgoing-dart order per vertex (dart reversal marked by the `~`
//! suffix on the edge id) plus the outer-face index; optional per-level
//! rotations override the derived embedding of specific layers.

use crate::graph::{Graph, GraphBuilder};
use crate::planar::Embedding;
use crate::tower::{GroupSpec, TowerSpec};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("edges[{index}].voltage has length {got}, expected d = {want}")]
    VoltageLength { index: usize, got: usize, want: usize },
    #[error("edges[{index}] references unknown vertex {name}")]
    UnknownVertex { index: usize, name: String },
    #[error("duplicate edge id {0}")]
    DuplicateEdge(String),
    #[error("inertia[{vertex}][{index}] has length {got}, expected d = {want}")]
    InertiaLength { vertex: String, index: usize, got: usize, want: usize },
    #[error("layer_embeddings key {0} is not a level number")]
    BadLevelKey(String),
    #[error(transparent)]
    Tower(#[from] crate::tower::TowerError),
    #[error(transparent)]
    Planar(#[from] crate::planar::PlanarError),
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct EdgeSpec {
    pub id: String,
    pub from: String,
    pub to: String,
    pub voltage: Vec<i64>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct EmbeddingSpec {
    /// Vertex name → cyclic list of outgoing dart ids (edge id, `~` suffix
    /// for the reverse dart).
    pub rotations: BTreeMap<String, Vec<String>>,
    /// Index into the face list produced by tracing the rotations.
    pub outer_face: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct SpecFile {
    pub p: u64,
    pub d: usize,
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub inertia: BTreeMap<String, Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub embedding: Option<EmbeddingSpec>,
    /// Explicit rotations for individual layers, keyed by the level number.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub layer_embeddings: BTreeMap<String, BTreeMap<String, Vec<String>>>,
}

impl SpecFile {
    pub fn parse(text: &str) -> Result<SpecFile, SpecError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("spec serializes");
        s.push('\n');
        s
    }

    pub fn base_graph(&self) -> Result<Graph, SpecError> {
        let mut b = GraphBuilder::new();
        for v in &self.vertices {
            b.vertex(v);
        }
        let mut seen = BTreeMap::new();
        for (index, e) in self.edges.iter().enumerate() {
            if seen.insert(e.id.clone(), ()).is_some() {
                return Err(SpecError::DuplicateEdge(e.id.clone()));
            }
            for name in [&e.from, &e.to] {
                if !self.vertices.contains(name) {
                    return Err(SpecError::UnknownVertex { index, name: name.clone() });
                }
            }
            b.edge(&e.id, &e.from, &e.to);
        }
        Ok(b.build())
    }

    pub fn to_tower(&self) -> Result<TowerSpec, SpecError> {
        for (index, e) in self.edges.iter().enumerate() {
            if e.voltage.len() != self.d {
                return Err(SpecError::VoltageLength {
                    index,
                    got: e.voltage.len(),
                    want: self.d,
                });
            }
        }
        for (vertex, gens) in &self.inertia {
            for (index, g) in gens.iter().enumerate() {
                if g.len() != self.d {
                    return Err(SpecError::InertiaLength {
                        vertex: vertex.clone(),
                        index,
                        got: g.len(),
                        want: self.d,
                    });
                }
            }
        }
        let graph = self.base_graph()?;
        let group = GroupSpec::new(self.p, self.d)?;
        let voltages: BTreeMap<String, Vec<i64>> =
            self.edges.iter().map(|e| (e.id.clone(), e.voltage.clone())).collect();
        Ok(TowerSpec::new(graph, group, &voltages, &self.inertia)?)
    }

    /// The base embedding named in the file, resolved against the base graph.
    pub fn base_embedding(&self, spec: &TowerSpec) -> Result<Option<(Embedding, usize)>, SpecError> {
        match &self.embedding {
            None => Ok(None),
            Some(emb) => {
                let e = Embedding::from_labels(spec.base().clone(), &emb.rotations)?;
                Ok(Some((e, emb.outer_face)))
            }
        }
    }

    /// Explicit layer rotations with numeric keys.
    pub fn layer_rotations(
        &self,
    ) -> Result<BTreeMap<u32, BTreeMap<String, Vec<String>>>, SpecError> {
        let mut out = BTreeMap::new();
        for (k, v) in &self.layer_embeddings {
            let n: u32 = k.parse().map_err(|_| SpecError::BadLevelKey(k.clone()))?;
            out.insert(n, v.clone());
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FLOWER: &str = r#"{
        "p": 3,
        "d": 1,
        "vertices": ["R", "U"],
        "edges": [
            {"id": "t", "from": "R", "to": "U", "voltage": [1]},
            {"id": "s", "from": "R", "to": "U", "voltage": [0]}
        ],
        "inertia": {"R": [[1]]}
    }"#;

    #[test]
    fn parses_and_builds() {
        let sf = SpecFile::parse(FLOWER).unwrap();
        let spec = sf.to_tower().unwrap();
        assert_eq!(spec.base().vertex_count(), 2);
        assert_eq!(spec.base().edge_count(), 2);
        assert!(spec.is_ramified(0));
        assert!(!spec.is_ramified(1));
    }

    #[test]
    fn serialization_is_idempotent() {
        let sf = SpecFile::parse(FLOWER).unwrap();
        let once = sf.to_json();
        let twice = SpecFile::parse(&once).unwrap().to_json();
        assert_eq!(once, twice);
    }

    #[test]
    fn rejects_bad_voltage_length() {
        let text = FLOWER.replace("[1]}", "[1, 2]}");
        let sf = SpecFile::parse(&text).unwrap();
        let err = sf.to_tower().unwrap_err();
        assert!(err.to_string().contains("voltage"), "{err}");
    }

    #[test]
    fn rejects_unknown_vertex() {
        let text = FLOWER.replace("\"from\": \"R\"", "\"from\": \"X\"");
        let sf = SpecFile::parse(&text).unwrap();
        assert!(sf.to_tower().is_err());
    }
}
