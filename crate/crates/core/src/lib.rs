//! Social-impact-weighted PageRank, CheiRank and 2DRank for Wikipedia-style
//! link networks.
//!
//! The pipeline runs `ingest` (raw dump/clickstream/pageview parsers) →
//! `graph` (node identity, redirects, dedup, multilingual merge) →
//! `matrix` (weighted adjacency, column-stochastic matrix, teleport) →
//! `rank` (power iteration, ranking lists, 2DRank) → `analysis` (overlap
//! curves, density grids, top-k tables). The `cli` module wires these
//! together behind the `wikirank` binary.

pub mod analysis;
pub mod cli;
pub mod error;
pub mod graph;
pub mod ingest;
pub mod matrix;
pub mod rank;

pub use error::{Error, Result};
