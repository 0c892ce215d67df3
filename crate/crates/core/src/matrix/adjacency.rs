use super::Model;
use crate::error::{Error, Result};
use crate::graph::{EdgeKind, EdgeSet};

/// Column-major sparse weighted adjacency: column `j` lists the targets `i`
/// of the links `j -> i` with their weights. Rows are strictly increasing
/// within a column, weights are strictly positive, no diagonal entries.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedAdjacency {
    n: usize,
    col_ptr: Vec<usize>,
    rows: Vec<u32>,
    weights: Vec<f64>,
}

impl WeightedAdjacency {
    /// Builds from `(src, dst, weight)` triplets, validating the invariants.
    pub fn from_triplets(n: usize, mut triplets: Vec<(u32, u32, f64)>) -> Result<Self> {
        triplets.sort_by_key(|&(s, d, _)| (s, d));
        for (k, &(s, d, w)) in triplets.iter().enumerate() {
            if s as usize >= n || d as usize >= n {
                return Err(Error::InvalidAdjacency(format!(
                    "entry {s} -> {d} outside dimension {n}"
                )));
            }
            if s == d {
                return Err(Error::InvalidAdjacency(format!("self entry on {s}")));
            }
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::InvalidAdjacency(format!("weight {w} on {s} -> {d}")));
            }
            if k > 0 && triplets[k - 1].0 == s && triplets[k - 1].1 == d {
                return Err(Error::InvalidAdjacency(format!(
                    "duplicate entry {s} -> {d}"
                )));
            }
        }
        Ok(Self::from_sorted(n, triplets.into_iter()))
    }

    fn from_sorted(n: usize, triplets: impl Iterator<Item = (u32, u32, f64)>) -> Self {
        let mut col_ptr = vec![0usize; n + 1];
        let mut rows = Vec::new();
        let mut weights = Vec::new();
        for (s, d, w) in triplets {
            col_ptr[s as usize + 1] += 1;
            rows.push(d);
            weights.push(w);
        }
        for j in 0..n {
            col_ptr[j + 1] += col_ptr[j];
        }
        WeightedAdjacency {
            n,
            col_ptr,
            rows,
            weights,
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.rows.len()
    }

    /// `(row, weight)` entries of column `j`.
    pub fn column(&self, j: usize) -> impl Iterator<Item = (u32, f64)> + '_ {
        let range = self.col_ptr[j]..self.col_ptr[j + 1];
        self.rows[range.clone()]
            .iter()
            .copied()
            .zip(self.weights[range].iter().copied())
    }

    pub fn column_sums(&self) -> Vec<f64> {
        (0..self.n)
            .map(|j| self.column(j).map(|(_, w)| w).sum())
            .collect()
    }

    pub fn row_sums(&self) -> Vec<f64> {
        let mut sums = vec![0.0; self.n];
        for (&i, &w) in self.rows.iter().zip(&self.weights) {
            sums[i as usize] += w;
        }
        sums
    }

    /// All entries as `(src, dst, weight)`, column by column.
    pub fn triplets(&self) -> Vec<(u32, u32, f64)> {
        (0..self.n)
            .flat_map(|j| self.column(j).map(move |(i, w)| (j as u32, i, w)))
            .collect()
    }

    pub(crate) fn parts(&self) -> (&[usize], &[u32], &[f64]) {
        (&self.col_ptr, &self.rows, &self.weights)
    }
}

/// Model-specific link weights: `nowc` gives every link weight 1; `wc` and
/// `wcpv` use the click count where one was observed and fall back to 1 for
/// links without clicks. Click-only edges take part in `wc`/`wcpv` only.
pub fn build_weighted_adjacency(edges: &EdgeSet, model: Model) -> Result<WeightedAdjacency> {
    let n = edges.node_count();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let entries = edges.edges().iter().filter_map(|e| {
        let w = match (model, e.kind) {
            (Model::Nowc, EdgeKind::Structural) => 1.0,
            (Model::Nowc, EdgeKind::ClickOnly) => return None,
            (_, _) if e.clicks > 0 => e.clicks as f64,
            (_, EdgeKind::Structural) => 1.0,
            (_, EdgeKind::ClickOnly) => return None,
        };
        Some((e.src, e.dst, w))
    });
    Ok(WeightedAdjacency::from_sorted(n, entries))
}

/// Exact transpose: every link `j -> i` becomes `i -> j` with the same weight.
pub fn reverse(a: &WeightedAdjacency) -> WeightedAdjacency {
    let n = a.n;
    let mut col_ptr = vec![0usize; n + 1];
    for &i in &a.rows {
        col_ptr[i as usize + 1] += 1;
    }
    for j in 0..n {
        col_ptr[j + 1] += col_ptr[j];
    }
    let mut next = col_ptr.clone();
    let mut rows = vec![0u32; a.nnz()];
    let mut weights = vec![0.0; a.nnz()];
    // scanning source columns in order keeps rows increasing in each new column
    for j in 0..n {
        for (i, w) in a.column(j) {
            let slot = &mut next[i as usize];
            rows[*slot] = j as u32;
            weights[*slot] = w;
            *slot += 1;
        }
    }
    WeightedAdjacency {
        n,
        col_ptr,
        rows,
        weights,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Edge;

    fn edges() -> EdgeSet {
        // nodes 0..4, links 1 -> 2 (40 clicks), 1 -> 3 (no clicks)
        EdgeSet::new(
            4,
            vec![
                Edge {
                    src: 1,
                    dst: 2,
                    clicks: 40,
                    kind: EdgeKind::Structural,
                },
                Edge {
                    src: 1,
                    dst: 3,
                    clicks: 0,
                    kind: EdgeKind::Structural,
                },
            ],
        )
        .unwrap()
    }

    #[test]
    fn wc_replaces_missing_clicks_by_one() {
        let a = build_weighted_adjacency(&edges(), Model::Wc).unwrap();
        assert_eq!(a.column(1).collect::<Vec<_>>(), vec![(2, 40.0), (3, 1.0)]);
        let a = build_weighted_adjacency(&edges(), Model::Nowc).unwrap();
        assert_eq!(a.column(1).collect::<Vec<_>>(), vec![(2, 1.0), (3, 1.0)]);
    }

    #[test]
    fn click_only_edges() {
        let e = EdgeSet::new(
            3,
            vec![Edge {
                src: 0,
                dst: 1,
                clicks: 25,
                kind: EdgeKind::ClickOnly,
            }],
        )
        .unwrap();
        assert_eq!(build_weighted_adjacency(&e, Model::Wc).unwrap().nnz(), 1);
        assert_eq!(build_weighted_adjacency(&e, Model::Nowc).unwrap().nnz(), 0);
    }

    #[test]
    fn empty_graph_refused() {
        assert!(matches!(
            build_weighted_adjacency(&EdgeSet::empty(0), Model::Nowc),
            Err(Error::EmptyGraph)
        ));
    }

    #[test]
    fn reverse_single_edge() {
        let a = WeightedAdjacency::from_triplets(3, vec![(1, 2, 5.0)]).unwrap();
        assert_eq!(reverse(&a).triplets(), vec![(2, 1, 5.0)]);
    }

    #[test]
    fn invalid_triplets() {
        assert!(WeightedAdjacency::from_triplets(2, vec![(0, 0, 1.0)]).is_err());
        assert!(WeightedAdjacency::from_triplets(2, vec![(0, 1, 0.0)]).is_err());
        assert!(WeightedAdjacency::from_triplets(2, vec![(0, 1, 1.0), (0, 1, 2.0)]).is_err());
        assert!(WeightedAdjacency::from_triplets(2, vec![(0, 2, 1.0)]).is_err());
    }

    proptest::proptest! {
        #[test]
        fn reverse_is_an_involution(n in 1usize..12, raw in proptest::collection::vec((0u32..12, 0u32..12, 1u32..50), 0..40)) {
            let mut t: Vec<(u32, u32, f64)> = raw
                .into_iter()
                .filter(|&(s, d, _)| s != d && (s as usize) < n && (d as usize) < n)
                .map(|(s, d, w)| (s, d, w as f64))
                .collect();
            t.sort_by_key(|&(s, d, _)| (s, d));
            t.dedup_by_key(|e| (e.0, e.1));
            let a = WeightedAdjacency::from_triplets(n, t).unwrap();
            let r = reverse(&a);
            proptest::prop_assert_eq!(r.column_sums(), a.row_sums());
            proptest::prop_assert_eq!(reverse(&r), a);
        }
    }
}
