//! Node identity, redirect resolution, deduplication, exclusion filters and
//! multilingual aggregation.

mod edges;
mod merge;
mod redirects;
mod registry;
pub mod snapshot;

pub use edges::{
    aggregate_views, attach_clicks, dedup_and_filter, ClickCounts, Edge, EdgeKind, EdgeSet,
    LinkCounts, ViewCounts,
};
pub use merge::{merge_multilingual, ConceptMap, MergeCounts};
pub use redirects::{resolve_redirects, RedirectMap, ResolveRedirects, MAX_REDIRECT_HOPS};
pub use registry::{NodeKey, NodeRegistry};

use log::warn;

/// A frozen graph: registry, edges and per-node pageview and incoming-click
/// totals. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    pub registry: NodeRegistry,
    pub edges: EdgeSet,
    pub views: Vec<u64>,
    /// Incoming `link`-type clicks per node.
    pub clicks_in: Vec<u64>,
}

impl Graph {
    /// A graph without pageview or click data.
    pub fn new(registry: NodeRegistry, edges: EdgeSet) -> Self {
        let n = registry.len();
        assert_eq!(
            edges.node_count(),
            n,
            "edge set dimension differs from registry"
        );
        Graph {
            registry,
            edges,
            views: vec![0; n],
            clicks_in: vec![0; n],
        }
    }

    pub fn node_count(&self) -> usize {
        self.registry.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Exclusion {
    pub graph: Graph,
    /// `old id -> new id`, `None` for removed nodes.
    pub mapping: Vec<Option<u32>>,
    pub removed: Vec<u32>,
    /// Requested titles not present in the registry.
    pub missing: Vec<String>,
}

/// Removes every node whose title (in any language) is listed in `titles`,
/// together with its incident edges, and re-densifies ids.
pub fn exclude_nodes(graph: &Graph, titles: &[String]) -> Exclusion {
    let n = graph.node_count();
    let mut remove = vec![false; n];
    let mut missing = Vec::new();
    for t in titles {
        let ids = graph.registry.find_title(t);
        if ids.is_empty() {
            warn!("excluded title {t:?} is not in the graph");
            missing.push(t.clone());
        }
        for id in ids {
            remove[id as usize] = true;
        }
    }
    let mut mapping = vec![None; n];
    let mut removed = Vec::new();
    let mut registry = NodeRegistry::new();
    let mut views = Vec::new();
    let mut clicks_in = Vec::new();
    for (old, key) in graph.registry.keys().iter().enumerate() {
        if remove[old] {
            removed.push(old as u32);
            continue;
        }
        mapping[old] = Some(registry.insert(&key.language, &key.title));
        views.push(graph.views[old]);
        clicks_in.push(graph.clicks_in[old]);
    }
    let edges: Vec<Edge> = graph
        .edges
        .edges()
        .iter()
        .filter_map(|e| {
            Some(Edge {
                src: mapping[e.src as usize]?,
                dst: mapping[e.dst as usize]?,
                ..*e
            })
        })
        .collect();
    let edges = EdgeSet::new(registry.len(), edges).expect("relabeling keeps edge invariants");
    Exclusion {
        graph: Graph {
            registry,
            edges,
            views,
            clicks_in,
        },
        mapping,
        removed,
        missing,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abc() -> Graph {
        let reg = NodeRegistry::from_titles("en", ["A", "B", "C"]);
        let edges = EdgeSet::from_pairs(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let mut g = Graph::new(reg, edges);
        g.views = vec![1, 2, 3];
        g
    }

    #[test]
    fn remove_middle_node() {
        let ex = exclude_nodes(&abc(), &["B".to_string()]);
        assert_eq!(ex.graph.node_count(), 2);
        assert_eq!(ex.graph.edges.len(), 1);
        let e = ex.graph.edges.edges()[0];
        assert_eq!((e.src, e.dst), (0, 1));
        assert_eq!(ex.graph.registry.key(1).title, "C");
        assert_eq!(ex.graph.views, vec![1, 3]);
        assert_eq!(ex.mapping, vec![Some(0), None, Some(1)]);
    }

    #[test]
    fn absent_title_warns() {
        let g = abc();
        let ex = exclude_nodes(&g, &["Zz".to_string()]);
        assert_eq!(ex.graph, g);
        assert_eq!(ex.missing, vec!["Zz".to_string()]);
    }

    #[test]
    fn remove_everything() {
        let all: Vec<String> = ["A", "B", "C"].iter().map(|s| s.to_string()).collect();
        let ex = exclude_nodes(&abc(), &all);
        assert_eq!(ex.graph.node_count(), 0);
        assert!(ex.graph.edges.is_empty());
    }
}
