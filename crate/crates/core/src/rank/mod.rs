//! PageRank, CheiRank, 2DRank and count-based rankings.

mod io;
mod list;

pub use io::{read_ranking_tsv, write_ranking_tsv, RankingTable};
pub use list::{rank_from_counts, rank_from_scores, two_d_rank, RankingList};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{
    assemble, column_normalize, reverse, GoogleMatrix, Model, TeleportVector, WeightedAdjacency,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerIteration {
    /// Stop once the L1 change between iterates drops below this.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for PowerIteration {
    fn default() -> Self {
        PowerIteration {
            tol: 1e-12,
            max_iter: 1000,
        }
    }
}

/// Stationary vector of a Google matrix plus convergence data.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankVector {
    pub values: Vec<f64>,
    pub iterations: usize,
    /// L1 change of the last iteration.
    pub residual: f64,
    pub converged: bool,
}

/// Power iteration
/// `x <- alpha (S x + (sum of dangling x) / N) + (1 - alpha) v`, renormalized
/// to unit mass after every step and started from the teleport vector.
///
/// A run that hits `max_iter` is returned with `converged == false`.
pub fn pagerank(g: &GoogleMatrix, opts: PowerIteration) -> Result<RankVector> {
    if !(opts.tol > 0.0 && opts.tol.is_finite()) {
        return Err(Error::InvalidTolerance(opts.tol));
    }
    let n = g.dim();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let op = g.s.row_major();
    let alpha = g.alpha;
    let teleport = &g.teleport;
    let mut x = teleport.to_vec();
    let mut y = vec![0.0; n];
    let mut residual = f64::INFINITY;
    let mut iterations = 0;
    while iterations < opts.max_iter {
        iterations += 1;
        let share = alpha * g.s.dangling_mass(&x) / n as f64;
        op.mul_into(&x, &mut y, alpha, |i| {
            share + (1.0 - alpha) * teleport.get(i)
        });
        let mass = crate::matrix::stochastic_sum(&y);
        y.par_iter_mut().for_each(|v| *v /= mass);
        residual = crate::matrix::l1_distance(&x, &y);
        std::mem::swap(&mut x, &mut y);
        if residual < opts.tol {
            break;
        }
    }
    Ok(RankVector {
        values: x,
        iterations,
        residual,
        converged: residual < opts.tol,
    })
}

/// PageRank of the link-reversed network: `A` is transposed, normalized and
/// paired with `teleport` under `model`'s rule (the pageview vector is only
/// used for `wcpv`).
pub fn cheirank(
    a: &WeightedAdjacency,
    model: Model,
    teleport: Option<TeleportVector>,
    alpha: f64,
    opts: PowerIteration,
) -> Result<RankVector> {
    let g = assemble(model, column_normalize(&reverse(a)), teleport, alpha)?;
    pagerank(&g, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{column_normalize, WeightedAdjacency};

    fn google(
        n: usize,
        edges: &[(u32, u32)],
        model: Model,
        v: Option<TeleportVector>,
    ) -> GoogleMatrix {
        let a =
            WeightedAdjacency::from_triplets(n, edges.iter().map(|&(s, d)| (s, d, 1.0)).collect())
                .unwrap();
        assemble(model, column_normalize(&a), v, 0.85).unwrap()
    }

    #[test]
    fn two_node_closed_form() {
        // P1 = 0.425 P2 + 0.075 and P1 + P2 = 1 give P1 = 0.5 / 1.425
        let p = pagerank(
            &google(2, &[(0, 1)], Model::Nowc, None),
            PowerIteration::default(),
        )
        .unwrap();
        assert!(p.converged);
        let p1 = 0.5 / 1.425;
        assert!((p.values[0] - p1).abs() < 1e-12, "{:?}", p.values);
        assert!((p.values[1] - (1.0 - p1)).abs() < 1e-12);
    }

    #[test]
    fn three_cycle_is_uniform_and_fast() {
        let p = pagerank(
            &google(3, &[(0, 1), (1, 2), (2, 0)], Model::Nowc, None),
            PowerIteration::default(),
        )
        .unwrap();
        assert!(p.iterations <= 3);
        for v in p.values {
            assert!((v - 1.0 / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn edgeless_pair() {
        let p = pagerank(
            &google(2, &[], Model::Nowc, None),
            PowerIteration::default(),
        )
        .unwrap();
        assert_eq!(p.values, vec![0.5, 0.5]);
    }

    #[test]
    fn non_convergence_is_flagged() {
        let g = google(4, &[(0, 1), (1, 2), (2, 3)], Model::Nowc, None);
        let p = pagerank(
            &g,
            PowerIteration {
                tol: 1e-15,
                max_iter: 2,
            },
        )
        .unwrap();
        assert!(!p.converged);
        assert_eq!(p.iterations, 2);
        assert!(pagerank(
            &g,
            PowerIteration {
                tol: 0.0,
                max_iter: 2
            }
        )
        .is_err());
    }

    #[test]
    fn star_hub_tops_cheirank() {
        let edges: Vec<(u32, u32)> = (1..=5).map(|leaf| (0, leaf)).collect();
        let a =
            WeightedAdjacency::from_triplets(6, edges.iter().map(|&(s, d)| (s, d, 1.0)).collect())
                .unwrap();
        let p = cheirank(&a, Model::Nowc, None, 0.85, PowerIteration::default()).unwrap();
        let k = rank_from_scores(&p.values, true).unwrap();
        assert_eq!(k.order()[0], 0);
    }
}
