//! Per-model PageRank, CheiRank and 2DRank plus the click and pageview
//! rankings of one graph snapshot.

use std::collections::BTreeMap;
use std::path::Path;

use log::{info, warn};
use serde::Serialize;

use super::output::{input_name, Staging};
use super::{config::RunConfig, read_graph_file, Failure, TOOL};
use crate::graph::{exclude_nodes, Graph};
use crate::matrix::snapshot::write_matrix;
use crate::matrix::{
    assemble, build_weighted_adjacency, column_normalize, reverse, teleport_from_pageviews, Model,
    TeleportKind, TeleportVector,
};
use crate::rank::{
    pagerank, rank_from_counts, rank_from_scores, two_d_rank, write_ranking_tsv, RankVector,
    RankingList,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IterationStats {
    pub iterations: usize,
    pub residual: f64,
    pub converged: bool,
}

impl From<&RankVector> for IterationStats {
    fn from(r: &RankVector) -> Self {
        IterationStats {
            iterations: r.iterations,
            residual: r.residual,
            converged: r.converged,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelReport {
    pub teleport: TeleportKind,
    /// All pageviews were zero and the uniform vector was used instead.
    pub teleport_fallback: bool,
    pub cheirank_teleport: TeleportKind,
    pub dangling: usize,
    pub pagerank: IterationStats,
    pub cheirank: IterationStats,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
struct RankSettings {
    models: Vec<Model>,
    alpha: f64,
    tol: f64,
    max_iter: usize,
    teleport_epsilon: f64,
    cheirank_uniform_teleport: bool,
    allow_nonconverged: bool,
    exclude: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
struct GraphSummary {
    input: String,
    nodes: usize,
    edges: usize,
    excluded: Vec<String>,
    exclusions_not_found: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
struct RankManifest {
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    settings: RankSettings,
    graph: GraphSummary,
    models: BTreeMap<Model, ModelReport>,
    outputs: Vec<String>,
}

struct Outputs<'a> {
    dir: &'a Path,
    staging: Staging,
    names: Vec<String>,
}

impl Outputs<'_> {
    fn ranking(
        &mut self,
        name: &str,
        list: &RankingList,
        scores: &[f64],
        g: &Graph,
    ) -> Result<(), Failure> {
        let file = format!("{name}.tsv");
        self.staging.write(&self.dir.join(&file), |w| {
            Ok(write_ranking_tsv(w, list, scores, &g.registry)?)
        })?;
        self.names.push(file);
        Ok(())
    }
}

/// Ranks `graph_path` into `out`. Returns whether every power iteration
/// converged; outputs are written either way.
pub fn run_rank(
    graph_path: &Path,
    out: &Path,
    cfg: &RunConfig,
    write_matrices: bool,
) -> Result<bool, Failure> {
    let original = read_graph_file(graph_path)?;
    let ex = exclude_nodes(&original, &cfg.exclude);
    let excluded = ex
        .removed
        .iter()
        .map(|&id| {
            let k = original.registry.key(id);
            format!("{}:{}", k.language, k.title)
        })
        .collect();
    let g = ex.graph;
    let n = g.node_count();
    if n == 0 {
        return Err(Failure::Input(format!(
            "{}: graph has no nodes",
            graph_path.display()
        )));
    }
    info!("ranking {} nodes, {} edges", n, g.edges.len());

    let mut outputs = Outputs {
        dir: out,
        staging: Staging::new(),
        names: Vec::new(),
    };
    let mut models = BTreeMap::new();
    let mut all_converged = true;
    for &model in &cfg.models {
        let a = build_weighted_adjacency(&g.edges, model)?;
        let (teleport, fallback) = match model {
            Model::Wcpv => {
                let (v, fallback) = teleport_from_pageviews(&g.views, cfg.teleport_epsilon)?;
                if fallback {
                    warn!("no pageviews recorded; wcpv falls back to a uniform teleport vector");
                }
                (Some(v), fallback)
            }
            _ => (None, false),
        };
        let chei_teleport = match (&teleport, cfg.cheirank_uniform_teleport) {
            (Some(_), true) => Some(TeleportVector::uniform(n)),
            (t, _) => t.clone(),
        };
        let s = column_normalize(&a);
        let s_rev = column_normalize(&reverse(&a));
        if write_matrices {
            for (label, m) in [("matrix", &s), ("matrix_reversed", &s_rev)] {
                let file = format!("{label}.{model}.wkm");
                outputs
                    .staging
                    .write(&out.join(&file), |w| Ok(write_matrix(w, m)?))?;
                outputs.names.push(file);
            }
        }
        let dangling = s.dangling().len();
        if let Some(v) = &teleport {
            let file = format!("teleport.{model}.tsv");
            outputs.staging.write(&out.join(&file), |w| {
                v.write_tsv(w)
                    .map_err(|e| Failure::output(&out.join(&file), e))
            })?;
            outputs.names.push(file);
        }
        let g_fwd = assemble(model, s, teleport.clone(), cfg.alpha)?;
        let p = pagerank(&g_fwd, cfg.iteration)?;
        drop(g_fwd);
        let g_rev = assemble(model, s_rev, chei_teleport.clone(), cfg.alpha)?;
        let pstar = pagerank(&g_rev, cfg.iteration)?;
        for (label, r) in [("PageRank", &p), ("CheiRank", &pstar)] {
            if !r.converged {
                all_converged = false;
                warn!(
                    "{label} ({model}) did not converge: residual {:e} after {} iterations",
                    r.residual, r.iterations
                );
            }
        }
        let k = rank_from_scores(&p.values, true)?;
        let kstar = rank_from_scores(&pstar.values, true)?;
        let k2 = two_d_rank(&k, &kstar)?;
        let k2_score: Vec<f64> = (0..n as u32)
            .map(|id| k.rank_of(id).max(kstar.rank_of(id)) as f64)
            .collect();
        outputs.ranking(&format!("pagerank.{model}"), &k, &p.values, &g)?;
        outputs.ranking(&format!("cheirank.{model}"), &kstar, &pstar.values, &g)?;
        outputs.ranking(&format!("2drank.{model}"), &k2, &k2_score, &g)?;
        models.insert(
            model,
            ModelReport {
                teleport: teleport
                    .as_ref()
                    .map_or(TeleportKind::Uniform, TeleportVector::kind),
                teleport_fallback: fallback,
                cheirank_teleport: chei_teleport
                    .as_ref()
                    .map_or(TeleportKind::Uniform, TeleportVector::kind),
                dangling,
                pagerank: (&p).into(),
                cheirank: (&pstar).into(),
            },
        );
    }

    let as_f64 = |v: &[u64]| v.iter().map(|&x| x as f64).collect::<Vec<_>>();
    outputs.ranking(
        "cr",
        &rank_from_counts(&g.clicks_in),
        &as_f64(&g.clicks_in),
        &g,
    )?;
    outputs.ranking("vr", &rank_from_counts(&g.views), &as_f64(&g.views), &g)?;

    let mut names = outputs.names.clone();
    names.push("manifest.json".into());
    let manifest = RankManifest {
        tool: TOOL,
        version: env!("CARGO_PKG_VERSION"),
        command: "rank",
        settings: RankSettings {
            models: cfg.models.clone(),
            alpha: cfg.alpha,
            tol: cfg.iteration.tol,
            max_iter: cfg.iteration.max_iter,
            teleport_epsilon: cfg.teleport_epsilon,
            cheirank_uniform_teleport: cfg.cheirank_uniform_teleport,
            allow_nonconverged: cfg.allow_nonconverged,
            exclude: cfg.exclude.clone(),
        },
        graph: GraphSummary {
            input: input_name(graph_path),
            nodes: n,
            edges: g.edges.len(),
            excluded,
            exclusions_not_found: ex.missing,
        },
        models,
        outputs: names,
    };
    outputs
        .staging
        .write_json(&out.join("manifest.json"), &manifest)?;
    outputs.staging.commit()?;
    Ok(all_converged)
}
