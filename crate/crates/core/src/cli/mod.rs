//! Command-line pipeline: `ingest`, `merge`, `rank`, `compare`, `density`
//! and `top`.
//!
//! Exit codes: 0 success, 1 configuration error, 2 input error,
//! 3 non-convergence.

mod analyze;
pub mod config;
pub mod ingest;
mod output;
mod rank;

use std::ffi::OsString;
use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use log::{error, info, warn};
use rayon::prelude::*;
use serde::Serialize;

pub use config::{parse_models, LanguageInputs, RunConfig};
pub use ingest::{ingest_language, IngestReport};

use crate::error::Error;
use crate::graph::snapshot::{read_graph, write_graph};
use crate::graph::{merge_multilingual, ConceptMap, Graph, MergeCounts};
use crate::ingest::{open_input, write_pairs, RawLinkRecord, Separator};
use crate::matrix::Model;
use output::{input_name, write_counts, Staging};

pub(crate) const TOOL: &str = "wikirank";

#[derive(Debug, thiserror::Error)]
pub enum Failure {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("input error: {0}")]
    Input(String),
    #[error("{0}")]
    NonConverged(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Config(_) => 1,
            Failure::Input(_) => 2,
            Failure::NonConverged(_) => 3,
        }
    }

    pub(crate) fn output(path: &Path, e: std::io::Error) -> Self {
        Failure::Input(format!("cannot write {}: {e}", path.display()))
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidAlpha(_)
            | Error::InvalidEpsilon(_)
            | Error::InvalidTolerance(_)
            | Error::MissingTeleport
            | Error::UnknownList(_)
            | Error::DepthOutOfRange { .. } => Failure::Config(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "wikirank",
    version,
    about = "PageRank, CheiRank and 2DRank of Wikipedia link and clickstream networks"
)]
pub struct Cli {
    /// Run configuration (TOML); command-line flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build per-language graph snapshots from dumps, clickstream and pageviews.
    Ingest(IngestArgs),
    /// Aggregate per-language snapshots into one multilingual snapshot.
    Merge(MergeArgs),
    /// Compute PageRank, CheiRank and 2DRank per model plus the cR and vR lists.
    Rank(RankArgs),
    /// Top-j overlap curves of two ranking lists.
    Compare(CompareArgs),
    /// (K, K*) density grid of one model.
    Density(DensityArgs),
    /// Top-k table of a base list joined with the ranks in other lists.
    Top(TopArgs),
}

fn parse_separator(s: &str) -> Result<Separator, String> {
    match s {
        "tab" => Ok(Separator::Tab),
        "space" => Ok(Separator::Space),
        _ => Err(format!("unknown separator `{s}` (expected tab or space)")),
    }
}

#[derive(Debug, Default, Args)]
pub struct InputFlags {
    /// MediaWiki XML dump (optionally .gz or .bz2).
    #[arg(long)]
    pub xml: Option<PathBuf>,
    /// Directory of `<title>.wiki` page files.
    #[arg(long)]
    pub wiki_dir: Option<PathBuf>,
    /// `source<TAB>target[<TAB>weight]` link pairs.
    #[arg(long)]
    pub pairs: Option<PathBuf>,
    /// One article title per line (registry for `--pairs`).
    #[arg(long)]
    pub titles: Option<PathBuf>,
    #[arg(long)]
    pub sql_page: Option<PathBuf>,
    #[arg(long)]
    pub sql_pagelinks: Option<PathBuf>,
    #[arg(long)]
    pub sql_redirect: Option<PathBuf>,
    /// `alias<TAB>target` redirect table.
    #[arg(long)]
    pub redirects: Option<PathBuf>,
    /// Clickstream TSV `prev<TAB>curr<TAB>type<TAB>n`.
    #[arg(long)]
    pub clickstream: Option<PathBuf>,
    /// Pageview counts `title<SEP>views`.
    #[arg(long)]
    pub pageviews: Option<PathBuf>,
    #[arg(long, value_parser = parse_separator)]
    pub pageview_separator: Option<Separator>,
}

impl InputFlags {
    fn into_inputs(self) -> LanguageInputs {
        LanguageInputs {
            xml: self.xml,
            wiki_dir: self.wiki_dir,
            pairs: self.pairs,
            titles: self.titles,
            sql_page: self.sql_page,
            sql_pagelinks: self.sql_pagelinks,
            sql_redirect: self.sql_redirect,
            redirects: self.redirects,
            clickstream: self.clickstream,
            pageviews: self.pageviews,
            pageview_separator: self.pageview_separator,
            ..LanguageInputs::default()
        }
    }
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    /// Language edition to ingest; defaults to every configured section.
    #[arg(long)]
    pub language: Option<String>,
    /// Output root; each language is written to `<out>/<language>/`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub inputs: InputFlags,
    /// Add clickstream pairs missing from the link network as edges.
    #[arg(long)]
    pub keep_orphan_clicks: bool,
    /// Also write the resolved edge list as `pairs.tsv`.
    #[arg(long)]
    pub write_pairs: bool,
}

#[derive(Debug, Args)]
pub struct MergeArgs {
    /// Edition snapshots in merge order; defaults to `<output>/<language>/graph.wkr`
    /// for every configured language.
    #[arg(long = "graph")]
    pub graphs: Vec<PathBuf>,
    /// `language<TAB>title<TAB>concept_id` file; without it editions are kept disjoint.
    #[arg(long)]
    pub concept_map: Option<PathBuf>,
    /// Output directory; defaults to `<output>/merged`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RankArgs {
    /// Graph snapshot written by `ingest` or `merge`.
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Comma-separated models (nowc, wc, wcpv) or `all`.
    #[arg(long, value_delimiter = ',')]
    pub models: Vec<String>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub max_iter: Option<usize>,
    /// Title to remove before ranking (repeatable).
    #[arg(long)]
    pub exclude: Vec<String>,
    /// Mix `epsilon * uniform` into the pageview teleport vector.
    #[arg(long)]
    pub teleport_epsilon: Option<f64>,
    /// Use a uniform teleport vector for wcpv CheiRank.
    #[arg(long)]
    pub cheirank_uniform_teleport: bool,
    /// Exit 0 even when a power iteration hits `max_iter`.
    #[arg(long)]
    pub allow_nonconverged: bool,
    /// Also write the binary stochastic matrices.
    #[arg(long)]
    pub write_matrices: bool,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Directory holding the ranking TSVs.
    #[arg(long)]
    pub ranks: PathBuf,
    /// First list (file stem such as `pagerank.nowc`, or a path).
    pub a: String,
    /// Second list.
    pub b: String,
    /// Deepest `j`; defaults to the list length.
    #[arg(long)]
    pub j_max: Option<usize>,
    /// Output directory; defaults to `--ranks`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DensityArgs {
    #[arg(long)]
    pub ranks: PathBuf,
    #[arg(long, default_value = "wcpv")]
    pub model: Model,
    /// Cells per axis.
    #[arg(long)]
    pub cells: Option<usize>,
    /// Overlay the top entries of a list, as `NAME[:COUNT]` (default 100).
    #[arg(long)]
    pub overlay: Vec<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TopArgs {
    #[arg(long)]
    pub ranks: PathBuf,
    /// List whose top entries form the rows.
    #[arg(long)]
    pub base: String,
    #[arg(short, long)]
    pub k: Option<usize>,
    /// Comma-separated column lists; defaults to the base family and cr, vr.
    #[arg(long, value_delimiter = ',')]
    pub lists: Vec<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub(crate) fn read_graph_file(path: &Path) -> Result<Graph, Failure> {
    let file = File::open(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    read_graph(BufReader::new(file)).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

#[derive(Serialize)]
struct IngestManifest<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    keep_orphan_clicks: bool,
    report: &'a IngestReport,
}

#[derive(Serialize)]
struct MergeManifest {
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    editions: Vec<String>,
    concept_map: Option<String>,
    nodes: usize,
    edges: usize,
    counts: MergeCounts,
}

fn load_config(path: Option<&Path>) -> Result<RunConfig, Failure> {
    match path {
        Some(p) => RunConfig::load(p),
        None => Ok(RunConfig::default()),
    }
}

fn require_out(flag: Option<PathBuf>, cfg: &RunConfig) -> Result<PathBuf, Failure> {
    flag.or_else(|| cfg.output.clone()).ok_or_else(|| {
        Failure::Config("no output directory (use --out or `output` in the config)".into())
    })
}

fn cmd_ingest(args: IngestArgs, mut cfg: RunConfig) -> Result<(), Failure> {
    cfg.keep_orphan_clicks |= args.keep_orphan_clicks;
    let flags = args.inputs.into_inputs();
    let languages: Vec<String> = match &args.language {
        Some(l) => vec![l.clone()],
        None if cfg.languages.is_empty() => vec!["en".to_owned()],
        None if cfg.languages.len() == 1 || flags.is_empty() => {
            cfg.languages.keys().cloned().collect()
        }
        None => {
            return Err(Failure::Config(
                "input flags with several configured languages need --language".into(),
            ))
        }
    };
    if languages.len() == 1 {
        let entry = cfg.languages.entry(languages[0].clone()).or_default();
        entry.override_with(flags);
    }
    let out = require_out(args.out, &cfg)?;
    cfg.validate()?;
    for l in &languages {
        cfg.validate_inputs(l)?;
    }
    type Ingested = Result<(Graph, IngestReport), Failure>;
    let results: Vec<(String, Ingested)> = languages
        .par_iter()
        .map(|l| {
            (
                l.clone(),
                ingest_language(l, &cfg.languages[l], cfg.keep_orphan_clicks),
            )
        })
        .collect();
    let mut staging = Staging::new();
    for (language, result) in results {
        let (graph, report) = result?;
        let dir = out.join(&language);
        let path = dir.join("graph.wkr");
        staging.write(&path, |w| Ok(write_graph(w, &graph)?))?;
        let path = dir.join("counts.tsv");
        staging.write(&path, |w| {
            write_counts(w, &report.counts_rows()).map_err(|e| Failure::output(&path, e))
        })?;
        if args.write_pairs {
            let records: Vec<RawLinkRecord> = graph
                .edges
                .edges()
                .iter()
                .map(|e| RawLinkRecord {
                    source: graph.registry.key(e.src).title.clone(),
                    target: graph.registry.key(e.dst).title.clone(),
                    weight: e.clicks.max(1),
                })
                .collect();
            let path = dir.join("pairs.tsv");
            staging.write(&path, |w| {
                write_pairs(w, &records).map_err(|e| Failure::output(&path, e))
            })?;
        }
        let manifest = IngestManifest {
            tool: TOOL,
            version: env!("CARGO_PKG_VERSION"),
            command: "ingest",
            keep_orphan_clicks: cfg.keep_orphan_clicks,
            report: &report,
        };
        staging.write_json(&dir.join("manifest.json"), &manifest)?;
    }
    staging.commit()
}

fn cmd_merge(args: MergeArgs, cfg: RunConfig) -> Result<(), Failure> {
    cfg.validate()?;
    let graphs = if args.graphs.is_empty() {
        let root = cfg.output.clone().ok_or_else(|| {
            Failure::Config(
                "merge needs --graph or `output` plus language sections in the config".into(),
            )
        })?;
        cfg.languages
            .keys()
            .map(|l| root.join(l).join("graph.wkr"))
            .collect()
    } else {
        args.graphs
    };
    if graphs.is_empty() {
        return Err(Failure::Config("merge needs at least one --graph".into()));
    }
    let out = match args.out {
        Some(o) => o,
        None => require_out(None, &cfg)?.join("merged"),
    };
    let concept_map = args.concept_map.or(cfg.concept_map.clone());
    for p in graphs.iter().chain(&concept_map) {
        if !p.is_file() {
            return Err(Failure::Config(format!(
                "input does not exist: {}",
                p.display()
            )));
        }
    }
    let editions: Vec<Graph> = graphs
        .iter()
        .map(|p| read_graph_file(p))
        .collect::<Result<_, _>>()?;
    let concepts = match &concept_map {
        Some(p) => Some(ConceptMap::from_tsv(
            open_input(p)?,
            &p.display().to_string(),
        )?),
        None => None,
    };
    let (merged, counts) = merge_multilingual(&editions, concepts.as_ref())?;
    info!(
        "merged {} editions into {} nodes, {} edges",
        editions.len(),
        merged.node_count(),
        merged.edges.len()
    );
    let mut staging = Staging::new();
    staging.write(&out.join("graph.wkr"), |w| Ok(write_graph(w, &merged)?))?;
    let rows: Vec<(String, u64)> = vec![
        ("nodes".into(), merged.node_count() as u64),
        ("edges".into(), merged.edges.len() as u64),
        ("input_nodes".into(), counts.input_nodes),
        ("input_edges".into(), counts.input_edges),
        ("merged_nodes".into(), counts.merged_nodes),
        ("combined_edges".into(), counts.combined_edges),
        ("self_loops".into(), counts.self_loops),
    ];
    let path = out.join("counts.tsv");
    staging.write(&path, |w| {
        write_counts(w, &rows).map_err(|e| Failure::output(&path, e))
    })?;
    let manifest = MergeManifest {
        tool: TOOL,
        version: env!("CARGO_PKG_VERSION"),
        command: "merge",
        editions: graphs
            .iter()
            .map(|p| p.parent().map(input_name).unwrap_or_default() + "/" + &input_name(p))
            .collect(),
        concept_map: concept_map.as_deref().map(input_name),
        nodes: merged.node_count(),
        edges: merged.edges.len(),
        counts,
    };
    staging.write_json(&out.join("manifest.json"), &manifest)?;
    staging.commit()
}

fn cmd_rank(args: RankArgs, mut cfg: RunConfig) -> Result<(), Failure> {
    if !args.models.is_empty() {
        cfg.models = parse_models(&args.models)?;
    }
    cfg.alpha = args.alpha.unwrap_or(cfg.alpha);
    cfg.iteration.tol = args.tol.unwrap_or(cfg.iteration.tol);
    cfg.iteration.max_iter = args.max_iter.unwrap_or(cfg.iteration.max_iter);
    if !args.exclude.is_empty() {
        cfg.exclude = args.exclude;
    }
    cfg.teleport_epsilon = args.teleport_epsilon.unwrap_or(cfg.teleport_epsilon);
    cfg.cheirank_uniform_teleport |= args.cheirank_uniform_teleport;
    cfg.allow_nonconverged |= args.allow_nonconverged;
    let out = require_out(args.out, &cfg)?;
    cfg.validate()?;
    if !args.graph.is_file() {
        return Err(Failure::Config(format!(
            "input does not exist: {}",
            args.graph.display()
        )));
    }
    let converged = rank::run_rank(&args.graph, &out, &cfg, args.write_matrices)?;
    if !converged {
        if cfg.allow_nonconverged {
            warn!("continuing despite non-convergence (--allow-nonconverged)");
        } else {
            return Err(Failure::NonConverged(
                "power iteration did not converge; outputs were written, rerun with a larger --max-iter or --allow-nonconverged".into(),
            ));
        }
    }
    Ok(())
}

fn ranks_out(flag: Option<PathBuf>, ranks: &Path) -> PathBuf {
    flag.unwrap_or_else(|| ranks.to_path_buf())
}

fn check_ranks(ranks: &Path) -> Result<(), Failure> {
    if ranks.is_dir() {
        Ok(())
    } else {
        Err(Failure::Config(format!(
            "ranking directory does not exist: {}",
            ranks.display()
        )))
    }
}

fn dispatch(cli: Cli) -> Result<(), Failure> {
    let cfg = load_config(cli.config.as_deref())?;
    match cli.command {
        Command::Ingest(a) => cmd_ingest(a, cfg),
        Command::Merge(a) => cmd_merge(a, cfg),
        Command::Rank(a) => cmd_rank(a, cfg),
        Command::Compare(a) => {
            let j_max = a.j_max.or(cfg.j_max);
            let cfg = RunConfig { j_max, ..cfg };
            cfg.validate()?;
            check_ranks(&a.ranks)?;
            let out = ranks_out(a.out, &a.ranks);
            analyze::run_compare(&a.ranks, &a.a, &a.b, j_max, &out).map(|_| ())
        }
        Command::Density(a) => {
            let cfg = RunConfig {
                cells: a.cells.unwrap_or(cfg.cells),
                ..cfg
            };
            cfg.validate()?;
            check_ranks(&a.ranks)?;
            let overlays = a
                .overlay
                .iter()
                .map(|s| analyze::parse_overlay(s))
                .collect::<Result<Vec<_>, _>>()?;
            let out = ranks_out(a.out, &a.ranks);
            analyze::run_density(&a.ranks, a.model, cfg.cells, &overlays, &out)
        }
        Command::Top(a) => {
            let cfg = RunConfig {
                k: a.k.unwrap_or(cfg.k),
                ..cfg
            };
            cfg.validate()?;
            check_ranks(&a.ranks)?;
            let lists = if a.lists.is_empty() {
                analyze::default_top_lists(&a.ranks, &a.base)
            } else {
                a.lists
            };
            let out = ranks_out(a.out, &a.ranks);
            analyze::run_top(&a.ranks, &a.base, &lists, cfg.k, &out)
        }
    }
}

/// Parses `args` (program name first) and runs one command, returning the
/// process exit code.
pub fn run_from<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(f) => {
            error!("{f}");
            f.exit_code()
        }
    }
}

/// Entry point of the `wikirank` binary.
pub fn run() -> u8 {
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .format_timestamp(None)
        .try_init();
    run_from(std::env::args_os())
}
