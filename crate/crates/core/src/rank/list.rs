use std::cmp::Ordering;

use crate::error::{Error, Result};

/// A permutation of node ids. `order[k]` is the node ranked `k + 1`;
/// `position[id]` is the 1-based rank of `id`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankingList {
    order: Vec<u32>,
    position: Vec<u32>,
}

impl RankingList {
    /// Builds from an order, checking that it is a permutation of `0..N`.
    pub fn from_order(order: Vec<u32>) -> Result<Self> {
        let n = order.len();
        let mut position = vec![0u32; n];
        for (k, &id) in order.iter().enumerate() {
            let slot = position
                .get_mut(id as usize)
                .ok_or(Error::DimensionMismatch {
                    expected: n,
                    actual: id as usize + 1,
                })?;
            if *slot != 0 {
                return Err(Error::Snapshot(format!("node {id} ranked twice")));
            }
            *slot = k as u32 + 1;
        }
        Ok(RankingList { order, position })
    }

    pub fn identity(n: usize) -> Self {
        RankingList {
            order: (0..n as u32).collect(),
            position: (1..=n as u32).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn order(&self) -> &[u32] {
        &self.order
    }

    /// 1-based rank of every node, indexed by id.
    pub fn positions(&self) -> &[u32] {
        &self.position
    }

    pub fn rank_of(&self, id: u32) -> u32 {
        self.position[id as usize]
    }

    pub fn top(&self, j: usize) -> &[u32] {
        &self.order[..j.min(self.order.len())]
    }
}

fn sorted_by<F>(n: usize, cmp: F) -> RankingList
where
    F: Fn(u32, u32) -> Ordering,
{
    let mut order: Vec<u32> = (0..n as u32).collect();
    // stable: equal keys keep ascending id order
    order.sort_by(|&a, &b| cmp(a, b));
    RankingList::from_order(order).expect("sorting a range yields a permutation")
}

/// Ranks nodes by score. Ties are broken by ascending node id.
pub fn rank_from_scores(values: &[f64], descending: bool) -> Result<RankingList> {
    if let Some(i) = values.iter().position(|v| v.is_nan()) {
        return Err(Error::NanScore(i));
    }
    Ok(sorted_by(values.len(), |a, b| {
        let ord = values[a as usize]
            .partial_cmp(&values[b as usize])
            .expect("no NaN");
        if descending {
            ord.reverse()
        } else {
            ord
        }
    }))
}

/// Descending ranking of integer counts (pageviews, clicks), ties by id.
pub fn rank_from_counts(counts: &[u64]) -> RankingList {
    sorted_by(counts.len(), |a, b| {
        counts[b as usize].cmp(&counts[a as usize])
    })
}

/// 2DRank: nodes sorted by `max(K, K*)` ascending, ties by increasing `K*`,
/// then by increasing `K`.
pub fn two_d_rank(k: &RankingList, kstar: &RankingList) -> Result<RankingList> {
    if k.len() != kstar.len() {
        return Err(Error::DimensionMismatch {
            expected: k.len(),
            actual: kstar.len(),
        });
    }
    let key = |id: u32| {
        let (r, rs) = (k.rank_of(id), kstar.rank_of(id));
        (r.max(rs), rs, r)
    };
    Ok(sorted_by(k.len(), |a, b| key(a).cmp(&key(b))))
}
