//! Run configuration: a TOML file with global keys and one table per
//! language, overridden by command-line flags.
//!
//! ```toml
//! models = ["nowc", "wc", "wcpv"]
//! alpha = 0.85
//! exclude = ["Main Page"]
//! output = "out"
//!
//! [en]
//! wiki_dir = "corpus/en"
//! clickstream = "clickstream-enwiki-2019-09.tsv.gz"
//! pageviews = "pageviews-en.tsv"
//! ```

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::Failure;
use crate::ingest::Separator;
use crate::matrix::{Model, DEFAULT_ALPHA};
use crate::rank::PowerIteration;

/// Inputs of one language edition. Exactly one link source (`xml`,
/// `wiki_dir`, the `sql_*` trio or `pairs`) must be given.
#[derive(Debug, Clone, Default, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct LanguageInputs {
    pub xml: Option<PathBuf>,
    pub wiki_dir: Option<PathBuf>,
    pub pairs: Option<PathBuf>,
    pub titles: Option<PathBuf>,
    pub sql_page: Option<PathBuf>,
    pub sql_pagelinks: Option<PathBuf>,
    pub sql_redirect: Option<PathBuf>,
    pub sql_page_columns: Option<Vec<usize>>,
    pub sql_pagelinks_columns: Option<Vec<usize>>,
    pub sql_redirect_columns: Option<Vec<usize>>,
    pub redirects: Option<PathBuf>,
    pub clickstream: Option<PathBuf>,
    pub pageviews: Option<PathBuf>,
    pub pageview_separator: Option<Separator>,
}

impl LanguageInputs {
    fn paths_mut(&mut self) -> [&mut Option<PathBuf>; 10] {
        [
            &mut self.xml,
            &mut self.wiki_dir,
            &mut self.pairs,
            &mut self.titles,
            &mut self.sql_page,
            &mut self.sql_pagelinks,
            &mut self.sql_redirect,
            &mut self.redirects,
            &mut self.clickstream,
            &mut self.pageviews,
        ]
    }

    /// Fields of `other` that are set replace those of `self`.
    pub fn override_with(&mut self, other: LanguageInputs) {
        macro_rules! take {
            ($($f:ident),*) => { $( if other.$f.is_some() { self.$f = other.$f; } )* };
        }
        take!(
            xml,
            wiki_dir,
            pairs,
            titles,
            sql_page,
            sql_pagelinks,
            sql_redirect,
            sql_page_columns,
            sql_pagelinks_columns,
            sql_redirect_columns,
            redirects,
            clickstream,
            pageviews,
            pageview_separator
        );
    }

    pub fn is_empty(&self) -> bool {
        *self == LanguageInputs::default()
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct GlobalKeys {
    models: Option<Vec<String>>,
    alpha: Option<f64>,
    tol: Option<f64>,
    max_iter: Option<usize>,
    exclude: Option<Vec<String>>,
    output: Option<PathBuf>,
    concept_map: Option<PathBuf>,
    keep_orphan_clicks: Option<bool>,
    teleport_epsilon: Option<f64>,
    cheirank_uniform_teleport: Option<bool>,
    allow_nonconverged: Option<bool>,
    j_max: Option<usize>,
    cells: Option<usize>,
    k: Option<usize>,
}

/// Fully resolved settings of one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub languages: BTreeMap<String, LanguageInputs>,
    pub models: Vec<Model>,
    pub alpha: f64,
    pub iteration: PowerIteration,
    pub exclude: Vec<String>,
    pub output: Option<PathBuf>,
    pub concept_map: Option<PathBuf>,
    pub keep_orphan_clicks: bool,
    pub teleport_epsilon: f64,
    pub cheirank_uniform_teleport: bool,
    pub allow_nonconverged: bool,
    pub j_max: Option<usize>,
    pub cells: usize,
    pub k: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            languages: BTreeMap::new(),
            models: Model::ALL.to_vec(),
            alpha: DEFAULT_ALPHA,
            iteration: PowerIteration::default(),
            exclude: Vec::new(),
            output: None,
            concept_map: None,
            keep_orphan_clicks: false,
            teleport_epsilon: 0.0,
            cheirank_uniform_teleport: false,
            allow_nonconverged: false,
            j_max: None,
            cells: crate::analysis::DEFAULT_CELLS,
            k: 10,
        }
    }
}

/// Parses a model list; `all` selects every model. Order follows
/// [`Model::ALL`] and duplicates collapse.
pub fn parse_models(names: &[String]) -> Result<Vec<Model>, Failure> {
    let mut selected = Vec::new();
    for name in names.iter().flat_map(|n| n.split(',')) {
        let name = name.trim();
        if name.eq_ignore_ascii_case("all") {
            selected.extend(Model::ALL);
        } else if !name.is_empty() {
            selected.push(name.parse::<Model>().map_err(Failure::Config)?);
        }
    }
    Ok(Model::ALL
        .into_iter()
        .filter(|m| selected.contains(m))
        .collect())
}

impl RunConfig {
    /// Loads `path`, resolving relative paths against its directory.
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = fs::read_to_string(path)
            .map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new(""));
        Self::parse(&text, base).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))
    }

    pub fn parse(text: &str, base: &Path) -> Result<Self, String> {
        let table: toml::Table = text
            .parse()
            .map_err(|e: toml::de::Error| e.message().to_owned())?;
        let mut globals = toml::Table::new();
        let mut languages = BTreeMap::new();
        for (key, value) in table {
            match value {
                toml::Value::Table(section) => {
                    let mut inputs: LanguageInputs = toml::Value::Table(section)
                        .try_into()
                        .map_err(|e: toml::de::Error| format!("[{key}]: {}", e.message()))?;
                    for p in inputs.paths_mut().into_iter().flatten() {
                        *p = base.join(&*p);
                    }
                    languages.insert(key, inputs);
                }
                other => {
                    globals.insert(key, other);
                }
            }
        }
        let g: GlobalKeys = toml::Value::Table(globals)
            .try_into()
            .map_err(|e: toml::de::Error| e.message().to_owned())?;
        let mut cfg = RunConfig {
            languages,
            ..RunConfig::default()
        };
        if let Some(m) = g.models {
            cfg.models = parse_models(&m).map_err(|e| e.to_string())?;
        }
        cfg.alpha = g.alpha.unwrap_or(cfg.alpha);
        cfg.iteration.tol = g.tol.unwrap_or(cfg.iteration.tol);
        cfg.iteration.max_iter = g.max_iter.unwrap_or(cfg.iteration.max_iter);
        cfg.exclude = g.exclude.unwrap_or_default();
        cfg.output = g.output.map(|p| base.join(p));
        cfg.concept_map = g.concept_map.map(|p| base.join(p));
        cfg.keep_orphan_clicks = g.keep_orphan_clicks.unwrap_or(false);
        cfg.teleport_epsilon = g.teleport_epsilon.unwrap_or(0.0);
        cfg.cheirank_uniform_teleport = g.cheirank_uniform_teleport.unwrap_or(false);
        cfg.allow_nonconverged = g.allow_nonconverged.unwrap_or(false);
        cfg.j_max = g.j_max;
        cfg.cells = g.cells.unwrap_or(cfg.cells);
        cfg.k = g.k.unwrap_or(cfg.k);
        Ok(cfg)
    }

    /// Checks the numeric settings.
    pub fn validate(&self) -> Result<(), Failure> {
        let bad = |m: String| Err(Failure::Config(m));
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return bad(format!("alpha must lie in (0, 1), got {}", self.alpha));
        }
        if !(self.iteration.tol > 0.0 && self.iteration.tol.is_finite()) {
            return bad(format!("tol must be positive, got {}", self.iteration.tol));
        }
        if self.iteration.max_iter == 0 {
            return bad("max_iter must be positive".into());
        }
        if self.models.is_empty() {
            return bad("no model selected".into());
        }
        if !(0.0..=1.0).contains(&self.teleport_epsilon) {
            return bad(format!(
                "teleport_epsilon must lie in [0, 1], got {}",
                self.teleport_epsilon
            ));
        }
        if self.cells == 0 {
            return bad("cells must be positive".into());
        }
        if self.k == 0 {
            return bad("k must be positive".into());
        }
        if self.j_max == Some(0) {
            return bad("j_max must be positive".into());
        }
        Ok(())
    }

    /// Checks that every configured input of `language` exists.
    pub fn validate_inputs(&self, language: &str) -> Result<(), Failure> {
        let mut inputs = self.languages.get(language).cloned().ok_or_else(|| {
            Failure::Config(format!("no inputs configured for language `{language}`"))
        })?;
        for p in inputs.paths_mut().into_iter().flatten() {
            if !p.exists() {
                return Err(Failure::Config(format!(
                    "input does not exist: {}",
                    p.display()
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sections_and_globals() {
        let cfg = RunConfig::parse(
            "models = [\"wcpv\", \"nowc\"]\nalpha = 0.9\nexclude = [\"Main Page\"]\n\n[en]\nwiki_dir = \"pages\"\npageview_separator = \"space\"\n\n[de]\npairs = \"p.tsv\"\n",
            Path::new("/base"),
        )
        .unwrap();
        assert_eq!(cfg.models, vec![Model::Nowc, Model::Wcpv]);
        assert_eq!(cfg.alpha, 0.9);
        assert_eq!(cfg.exclude, vec!["Main Page".to_string()]);
        assert_eq!(
            cfg.languages["en"].wiki_dir.as_deref(),
            Some(Path::new("/base/pages"))
        );
        assert_eq!(
            cfg.languages["en"].pageview_separator,
            Some(Separator::Space)
        );
        assert_eq!(cfg.languages.keys().collect::<Vec<_>>(), vec!["de", "en"]);
        cfg.validate().unwrap();
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(RunConfig::parse("alpah = 0.5", Path::new("")).is_err());
        assert!(RunConfig::parse("[en]\nwikidir = \"x\"", Path::new("")).is_err());
        assert!(RunConfig::parse("models = [\"pagerank\"]", Path::new("")).is_err());
    }

    #[test]
    fn validation() {
        let mut cfg = RunConfig {
            alpha: 1.0,
            ..RunConfig::default()
        };
        assert!(cfg.validate().is_err());
        cfg.alpha = 0.5;
        cfg.models.clear();
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn model_lists() {
        assert_eq!(parse_models(&["all".into()]).unwrap(), Model::ALL.to_vec());
        assert_eq!(
            parse_models(&["wc,nowc".into(), "wc".into()]).unwrap(),
            vec![Model::Nowc, Model::Wc]
        );
    }
}
