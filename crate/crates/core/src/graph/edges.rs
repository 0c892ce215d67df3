use std::collections::HashMap;

use serde::Serialize;

use super::redirects::RedirectMap;
use super::registry::NodeRegistry;
use crate::error::{Error, Result};
use crate::ingest::{ClickRecord, PageviewRecord, RawLinkRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeKind {
    /// Present in the link dump.
    Structural,
    /// Only observed in the clickstream (kept on request).
    ClickOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub src: u32,
    pub dst: u32,
    /// Monthly `link`-type clicks from `src` to `dst`; 0 when unobserved.
    pub clicks: u64,
    pub kind: EdgeKind,
}

/// Directed edges sorted by `(src, dst)`, without self-loops or duplicates.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EdgeSet {
    n: usize,
    edges: Vec<Edge>,
}

impl EdgeSet {
    pub fn empty(n: usize) -> Self {
        EdgeSet {
            n,
            edges: Vec::new(),
        }
    }

    /// Sorts `edges` and checks the invariants.
    pub fn new(n: usize, mut edges: Vec<Edge>) -> Result<Self> {
        edges.sort_unstable_by_key(|e| (e.src, e.dst));
        for (i, e) in edges.iter().enumerate() {
            if e.src as usize >= n || e.dst as usize >= n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    actual: e.src.max(e.dst) as usize + 1,
                });
            }
            if e.src == e.dst {
                return Err(Error::Snapshot(format!("self-loop on node {}", e.src)));
            }
            if i > 0 && (edges[i - 1].src, edges[i - 1].dst) == (e.src, e.dst) {
                return Err(Error::Snapshot(format!(
                    "duplicate edge {} -> {}",
                    e.src, e.dst
                )));
            }
        }
        Ok(EdgeSet { n, edges })
    }

    /// Unit-weight structural edges from `(src, dst)` pairs; duplicates and
    /// self-loops are discarded.
    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (u32, u32)>) -> Result<Self> {
        let mut pairs: Vec<(u32, u32)> = pairs.into_iter().filter(|(s, d)| s != d).collect();
        pairs.sort_unstable();
        pairs.dedup();
        let edges = pairs
            .into_iter()
            .map(|(src, dst)| Edge {
                src,
                dst,
                clicks: 0,
                kind: EdgeKind::Structural,
            })
            .collect();
        EdgeSet::new(n, edges)
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn position(&self, src: u32, dst: u32) -> Option<usize> {
        self.edges
            .binary_search_by_key(&(src, dst), |e| (e.src, e.dst))
            .ok()
    }

    pub fn get(&self, src: u32, dst: u32) -> Option<&Edge> {
        self.position(src, dst).map(|i| &self.edges[i])
    }

    pub(crate) fn into_edges(self) -> Vec<Edge> {
        self.edges
    }
}

/// Link counts for one input.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct LinkCounts {
    /// Records offered to the filter.
    pub all: u64,
    /// Distinct edges kept.
    pub unified: u64,
    pub redlinks: u64,
    pub self_loops: u64,
    pub duplicates: u64,
}

/// Collapses duplicate pairs and drops records whose endpoints are not
/// registered articles of `language`.
pub fn dedup_and_filter(
    records: impl IntoIterator<Item = RawLinkRecord>,
    registry: &NodeRegistry,
    language: &str,
) -> (EdgeSet, LinkCounts) {
    let mut counts = LinkCounts::default();
    let mut pairs = Vec::new();
    for rec in records {
        counts.all += 1;
        let (Some(src), Some(dst)) = (
            registry.get(language, &rec.source),
            registry.get(language, &rec.target),
        ) else {
            counts.redlinks += 1;
            continue;
        };
        if src == dst {
            counts.self_loops += 1;
            continue;
        }
        pairs.push((src, dst));
    }
    let kept = pairs.len() as u64;
    let edges = EdgeSet::from_pairs(registry.len(), pairs).expect("registry ids are in range");
    counts.unified = edges.len() as u64;
    counts.duplicates = kept - counts.unified;
    (edges, counts)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ClickCounts {
    pub records: u64,
    /// Records that are not article-to-article `link` navigation.
    pub non_link: u64,
    /// Navigation records with an endpoint outside the registry.
    pub unmatched: u64,
    pub self_loops: u64,
    /// Distinct pairs matched onto an existing edge.
    pub matched_pairs: u64,
    pub orphan_pairs_dropped: u64,
    pub orphan_pairs_kept: u64,
    pub clicks_on_edges: u64,
}

/// Attaches `link`-type click counts to the edges of one language and
/// returns the per-node total of incoming navigation clicks. Pairs without a
/// structural edge are dropped unless `keep_orphans` is set, in which case
/// they become [`EdgeKind::ClickOnly`] edges.
pub fn attach_clicks(
    edges: EdgeSet,
    clicks: impl IntoIterator<Item = ClickRecord>,
    registry: &NodeRegistry,
    language: &str,
    redirects: &RedirectMap,
    keep_orphans: bool,
) -> (EdgeSet, Vec<u64>, ClickCounts) {
    let n = edges.node_count();
    let mut counts = ClickCounts::default();
    let mut clicks_in = vec![0u64; n];
    let mut per_pair: HashMap<(u32, u32), u64> = HashMap::new();
    for rec in clicks {
        counts.records += 1;
        if !rec.is_navigation() {
            counts.non_link += 1;
            continue;
        }
        let src = registry.get(language, redirects.resolve(&rec.prev_title));
        let dst = registry.get(language, redirects.resolve(&rec.curr_title));
        let (Some(src), Some(dst)) = (src, dst) else {
            counts.unmatched += 1;
            continue;
        };
        if src == dst {
            counts.self_loops += 1;
            continue;
        }
        clicks_in[dst as usize] += rec.count;
        *per_pair.entry((src, dst)).or_default() += rec.count;
    }
    let mut pairs: Vec<((u32, u32), u64)> = per_pair.into_iter().collect();
    pairs.sort_unstable();
    let mut list = edges.into_edges();
    let mut orphans = Vec::new();
    for ((src, dst), c) in pairs {
        match list.binary_search_by_key(&(src, dst), |e| (e.src, e.dst)) {
            Ok(i) => {
                list[i].clicks += c;
                counts.matched_pairs += 1;
                counts.clicks_on_edges += c;
            }
            Err(_) if keep_orphans => {
                orphans.push(Edge {
                    src,
                    dst,
                    clicks: c,
                    kind: EdgeKind::ClickOnly,
                });
                counts.orphan_pairs_kept += 1;
                counts.clicks_on_edges += c;
            }
            Err(_) => counts.orphan_pairs_dropped += 1,
        }
    }
    list.extend(orphans);
    let edges = EdgeSet::new(n, list).expect("click edges respect the invariants");
    (edges, clicks_in, counts)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ViewCounts {
    pub records: u64,
    pub matched: u64,
    pub unmatched: u64,
}

/// Sums pageviews per node. Redirect titles count towards their target.
pub fn aggregate_views(
    records: impl IntoIterator<Item = PageviewRecord>,
    registry: &NodeRegistry,
    language: &str,
    redirects: &RedirectMap,
) -> (Vec<u64>, ViewCounts) {
    let mut views = vec![0u64; registry.len()];
    let mut counts = ViewCounts::default();
    for rec in records {
        counts.records += 1;
        match registry.get(language, redirects.resolve(&rec.title)) {
            Some(id) => {
                views[id as usize] += rec.views;
                counts.matched += 1;
            }
            None => counts.unmatched += 1,
        }
    }
    (views, counts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{LinkType, RedirectRecord};

    fn link(s: &str, t: &str) -> RawLinkRecord {
        RawLinkRecord {
            source: s.into(),
            target: t.into(),
            weight: 1,
        }
    }

    fn click(p: &str, c: &str, n: u64) -> ClickRecord {
        ClickRecord {
            prev_title: p.into(),
            curr_title: c.into(),
            link_type: LinkType::Link,
            count: n,
            external_source: false,
        }
    }

    #[test]
    fn dedup_counts() {
        let reg = NodeRegistry::from_titles("en", ["A", "B", "C"]);
        let (edges, counts) = dedup_and_filter(
            vec![link("A", "B"), link("A", "B"), link("A", "C")],
            &reg,
            "en",
        );
        assert_eq!(edges.len(), 2);
        assert_eq!((counts.all, counts.unified, counts.duplicates), (3, 2, 1));
    }

    #[test]
    fn redlinks_dropped() {
        let reg = NodeRegistry::from_titles("en", ["A", "B"]);
        let (edges, counts) = dedup_and_filter(vec![link("A", "Zz"), link("A", "A")], &reg, "en");
        assert!(edges.is_empty());
        assert_eq!((counts.redlinks, counts.self_loops), (1, 1));
    }

    #[test]
    fn clicks_attach_and_orphans() {
        let reg = NodeRegistry::from_titles("en", ["A", "B", "C"]);
        let (edges, _) = dedup_and_filter(vec![link("A", "B"), link("A", "C")], &reg, "en");
        let redirects = RedirectMap::build([RedirectRecord {
            from_title: "Bee".into(),
            to_title: "B".into(),
        }]);
        let recs = vec![
            click("A", "B", 30),
            click("A", "Bee", 10),
            click("B", "C", 15),
            click("A", "Q", 99),
        ];
        let (kept, clicks_in, counts) =
            attach_clicks(edges.clone(), recs.clone(), &reg, "en", &redirects, false);
        assert_eq!(kept.len(), 2);
        assert_eq!(kept.get(0, 1).unwrap().clicks, 40);
        assert_eq!(kept.get(0, 2).unwrap().clicks, 0);
        assert_eq!(clicks_in, vec![0, 40, 15]);
        assert_eq!((counts.orphan_pairs_dropped, counts.unmatched), (1, 1));

        let (with_orphans, _, counts) = attach_clicks(edges, recs, &reg, "en", &redirects, true);
        let e = with_orphans.get(1, 2).unwrap();
        assert_eq!((e.clicks, e.kind), (15, EdgeKind::ClickOnly));
        assert_eq!(counts.orphan_pairs_kept, 1);
    }

    #[test]
    fn views_follow_redirects() {
        let reg = NodeRegistry::from_titles("en", ["A", "B"]);
        let redirects = RedirectMap::build([RedirectRecord {
            from_title: "AA".into(),
            to_title: "A".into(),
        }]);
        let recs = vec![
            PageviewRecord {
                title: "A".into(),
                views: 5,
            },
            PageviewRecord {
                title: "AA".into(),
                views: 7,
            },
            PageviewRecord {
                title: "Z".into(),
                views: 1,
            },
        ];
        let (views, counts) = aggregate_views(recs, &reg, "en", &redirects);
        assert_eq!(views, vec![12, 0]);
        assert_eq!(counts.unmatched, 1);
    }

    proptest::proptest! {
        #[test]
        fn unified_never_exceeds_all(pairs in proptest::collection::vec((0u8..6, 0u8..8), 0..40)) {
            let reg = NodeRegistry::from_titles("en", (0..6).map(|i| format!("N{i}")));
            let recs: Vec<_> = pairs.iter().map(|(a, b)| link(&format!("N{a}"), &format!("N{b}"))).collect();
            let (edges, counts) = dedup_and_filter(recs, &reg, "en");
            proptest::prop_assert!(counts.unified <= counts.all);
            proptest::prop_assert_eq!(counts.all, counts.unified + counts.duplicates + counts.redlinks + counts.self_loops);
            for w in edges.edges().windows(2) {
                proptest::prop_assert!((w[0].src, w[0].dst) < (w[1].src, w[1].dst));
            }
        }
    }
}
