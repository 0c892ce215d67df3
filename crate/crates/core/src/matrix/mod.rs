//! Weighted adjacency, column-stochastic matrix, teleport vector and the
//! implicit Google matrix. `G` itself is never materialized: every consumer
//! goes through the sparse matvec, the dangling correction and the teleport
//! term, in that order.

mod adjacency;
mod google;
pub mod snapshot;
mod stochastic;
mod teleport;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use adjacency::{build_weighted_adjacency, reverse, WeightedAdjacency};
pub use google::{assemble, GoogleMatrix, DEFAULT_ALPHA};
pub use stochastic::{
    column_normalize, l1_distance, stochastic_sum, RowMajor, StochasticMatrix, ROW_CHUNK,
};
pub use teleport::{teleport_from_pageviews, TeleportKind, TeleportVector};

/// Network model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    /// Unweighted links, uniform teleport.
    Nowc,
    /// Click-weighted links, uniform teleport.
    Wc,
    /// Click-weighted links, pageview teleport.
    Wcpv,
}

impl Model {
    pub const ALL: [Model; 3] = [Model::Nowc, Model::Wc, Model::Wcpv];

    pub fn as_str(self) -> &'static str {
        match self {
            Model::Nowc => "nowc",
            Model::Wc => "wc",
            Model::Wcpv => "wcpv",
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Model {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "nowc" => Ok(Model::Nowc),
            "wc" => Ok(Model::Wc),
            "wcpv" => Ok(Model::Wcpv),
            other => Err(format!(
                "unknown model `{other}` (expected nowc, wc or wcpv)"
            )),
        }
    }
}
