//! Line-oriented JSON instance and edit files.
//!
//! An instance file holds one object `{"n":..,"weights":[..],"edges":[[u,v],..]}`
//! on a single line; an edit file holds `{"kind":"edges","edges":[..]}` or
//! `{"kind":"weights","weights":[..]}`. Vertex ids are 0-based. Writing a
//! parsed canonical file reproduces it byte for byte.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use super::{Edit, GraphError, WeightedGraph};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub n: usize,
    pub weights: Vec<u128>,
    pub edges: Vec<[u32; 2]>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EditKind {
    Edges,
    Weights,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EditFile {
    pub kind: EditKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<[u32; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<u128>>,
}

impl InstanceFile {
    pub fn from_graph(g: &WeightedGraph) -> Self {
        InstanceFile {
            n: g.vertex_count(),
            weights: g.weights().to_vec(),
            edges: g.edge_pairs().into_iter().map(|(u, v)| [u, v]).collect(),
        }
    }

    pub fn to_graph(&self) -> Result<WeightedGraph, GraphError> {
        if self.weights.len() != self.n {
            return Err(GraphError::WeightCount { got: self.weights.len(), n: self.n });
        }
        WeightedGraph::new(self.weights.clone(), self.edges.iter().map(|&[u, v]| (u, v)))
    }
}

impl From<&Edit> for EditFile {
    fn from(edit: &Edit) -> Self {
        match edit {
            Edit::Edges(pairs) => EditFile {
                kind: EditKind::Edges,
                edges: Some(pairs.iter().map(|&(u, v)| [u, v]).collect()),
                weights: None,
            },
            Edit::Weights(w) => EditFile { kind: EditKind::Weights, edges: None, weights: Some(w.clone()) },
        }
    }
}

impl TryFrom<EditFile> for Edit {
    type Error = GraphError;

    fn try_from(file: EditFile) -> Result<Self, GraphError> {
        match (file.kind, file.edges, file.weights) {
            (EditKind::Edges, Some(edges), None) => Ok(Edit::Edges(edges.into_iter().map(|[u, v]| (u, v)).collect())),
            (EditKind::Weights, None, Some(weights)) => Ok(Edit::Weights(weights)),
            (kind, _, _) => Err(GraphError::Format(format!(
                "edit of kind {kind:?} needs exactly the matching field"
            ))),
        }
    }
}

fn first_line(reader: impl BufRead) -> Result<String, GraphError> {
    for line in reader.lines() {
        let line = line.map_err(|e| GraphError::Format(e.to_string()))?;
        if !line.trim().is_empty() {
            return Ok(line);
        }
    }
    Err(GraphError::Format("empty file".into()))
}

pub fn read_instance(reader: impl BufRead) -> Result<WeightedGraph, GraphError> {
    let line = first_line(reader)?;
    let file: InstanceFile =
        serde_json::from_str(&line).map_err(|e| GraphError::Format(e.to_string()))?;
    file.to_graph()
}

pub fn write_instance(mut writer: impl Write, g: &WeightedGraph) -> std::io::Result<()> {
    let line = serde_json::to_string(&InstanceFile::from_graph(g))?;
    writeln!(writer, "{line}")
}

pub fn read_edit(reader: impl BufRead) -> Result<Edit, GraphError> {
    let line = first_line(reader)?;
    let file: EditFile =
        serde_json::from_str(&line).map_err(|e| GraphError::Format(e.to_string()))?;
    file.try_into()
}

pub fn write_edit(mut writer: impl Write, edit: &Edit) -> std::io::Result<()> {
    let line = serde_json::to_string(&EditFile::from(edit))?;
    writeln!(writer, "{line}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_instance_round_trips_bytes() {
        let text = "{\"n\":4,\"weights\":[3,5,1,340282366920938463463374607431768211455],\"edges\":[[1,0],[2,3]]}\n";
        let g = read_instance(text.as_bytes()).unwrap();
        let mut out = Vec::new();
        write_instance(&mut out, &g).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), text);
    }

    #[test]
    fn canonical_edit_round_trips_bytes() {
        for text in [
            "{\"kind\":\"edges\",\"edges\":[[0,1],[2,3]]}\n",
            "{\"kind\":\"weights\",\"weights\":[1,2,3]}\n",
        ] {
            let edit = read_edit(text.as_bytes()).unwrap();
            let mut out = Vec::new();
            write_edit(&mut out, &edit).unwrap();
            assert_eq!(String::from_utf8(out).unwrap(), text);
        }
    }

    #[test]
    fn malformed_files_are_errors() {
        assert!(read_instance("".as_bytes()).is_err());
        assert!(read_instance("{\"n\":2,\"weights\":[1],\"edges\":[]}".as_bytes()).is_err());
        assert!(read_instance("{\"n\":2,\"weights\":[1,1],\"edges\":[[0,0]]}".as_bytes()).is_err());
        assert!(read_edit("{\"kind\":\"colors\"}".as_bytes()).is_err());
        assert!(read_edit("{\"kind\":\"edges\",\"weights\":[1]}".as_bytes()).is_err());
    }
}
