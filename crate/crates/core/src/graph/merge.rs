use std::collections::HashMap;
use std::io::BufRead;

use serde::Serialize;

use super::{Edge, EdgeKind, EdgeSet, Graph, NodeRegistry};
use crate::error::{Error, Result};
use crate::ingest::normalize;

/// Cross-language identification: `(language, title) -> concept id`.
#[derive(Debug, Clone, Default)]
pub struct ConceptMap {
    map: HashMap<String, HashMap<String, String>>,
}

impl ConceptMap {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds one mapping; mapping a title to two different concepts is an
    /// error.
    pub fn insert(&mut self, language: &str, title: &str, concept: &str) -> Result<()> {
        let slot = self.map.entry(language.to_owned()).or_default();
        match slot.get(title) {
            Some(existing) if existing != concept => Err(Error::ConceptConflict {
                language: language.to_owned(),
                title: title.to_owned(),
                first: existing.clone(),
                second: concept.to_owned(),
            }),
            Some(_) => Ok(()),
            None => {
                slot.insert(title.to_owned(), concept.to_owned());
                Ok(())
            }
        }
    }

    pub fn get(&self, language: &str, title: &str) -> Option<&str> {
        self.map.get(language)?.get(title).map(String::as_str)
    }

    /// Reads `language<TAB>title<TAB>concept_id` lines. `#` lines and blank
    /// lines are ignored; any malformed line or conflict rejects the file.
    pub fn from_tsv<R: BufRead>(reader: R, source: &str) -> Result<Self> {
        let mut map = ConceptMap::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            let line = line.trim_end_matches(['\r', '\n']);
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            let bad = |message: &str| Error::Format {
                path: source.to_owned(),
                line: i + 1,
                message: message.to_owned(),
            };
            if fields.len() != 3 {
                return Err(bad("expected language<TAB>title<TAB>concept_id"));
            }
            let language = fields[0].trim();
            let concept = fields[2].trim();
            let title = normalize(fields[1]).ok_or_else(|| bad("empty title"))?;
            if language.is_empty() || concept.is_empty() {
                return Err(bad("empty language or concept id"));
            }
            map.insert(language, &title, concept)?;
        }
        Ok(map)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct MergeCounts {
    pub input_nodes: u64,
    pub input_edges: u64,
    pub merged_nodes: u64,
    /// Edges that became duplicates of another edition's edge and were summed.
    pub combined_edges: u64,
    /// Edges whose endpoints fell onto the same concept.
    pub self_loops: u64,
}

/// Aggregates per-edition graphs. Without a concept map the result is the
/// disjoint union keyed by `(language, title)`. With one, nodes sharing a
/// concept id collapse onto the first member seen (edition order, then id
/// order); edges are unioned and click weights summed.
pub fn merge_multilingual(
    editions: &[Graph],
    concepts: Option<&ConceptMap>,
) -> Result<(Graph, MergeCounts)> {
    let mut counts = MergeCounts::default();
    let mut registry = NodeRegistry::new();
    let mut concept_node: HashMap<&str, u32> = HashMap::new();
    let mut id_maps: Vec<Vec<u32>> = Vec::with_capacity(editions.len());
    for g in editions {
        counts.input_nodes += g.node_count() as u64;
        counts.input_edges += g.edges.len() as u64;
        let mut ids = Vec::with_capacity(g.node_count());
        for key in g.registry.keys() {
            let concept = concepts.and_then(|c| c.get(&key.language, &key.title));
            let id = match concept.and_then(|c| concept_node.get(c)) {
                Some(&id) => {
                    counts.merged_nodes += 1;
                    id
                }
                None => {
                    let id = registry.insert(&key.language, &key.title);
                    if let Some(c) = concept {
                        concept_node.insert(c, id);
                    }
                    id
                }
            };
            ids.push(id);
        }
        id_maps.push(ids);
    }

    let n = registry.len();
    let mut views = vec![0u64; n];
    let mut clicks_in = vec![0u64; n];
    let mut edges: Vec<Edge> = Vec::new();
    for (g, ids) in editions.iter().zip(&id_maps) {
        for (old, &new) in ids.iter().enumerate() {
            views[new as usize] += g.views[old];
            clicks_in[new as usize] += g.clicks_in[old];
        }
        for e in g.edges.edges() {
            let (src, dst) = (ids[e.src as usize], ids[e.dst as usize]);
            if src == dst {
                counts.self_loops += 1;
                continue;
            }
            edges.push(Edge { src, dst, ..*e });
        }
    }
    edges.sort_unstable_by_key(|e| (e.src, e.dst));
    let mut combined: Vec<Edge> = Vec::with_capacity(edges.len());
    for e in edges {
        match combined.last_mut() {
            Some(last) if (last.src, last.dst) == (e.src, e.dst) => {
                last.clicks += e.clicks;
                if e.kind == EdgeKind::Structural {
                    last.kind = EdgeKind::Structural;
                }
                counts.combined_edges += 1;
            }
            _ => combined.push(e),
        }
    }
    let edges = EdgeSet::new(n, combined)?;
    Ok((
        Graph {
            registry,
            edges,
            views,
            clicks_in,
        },
        counts,
    ))
}
