//! Builds the graph of one language edition from its configured inputs.

use std::collections::{BTreeMap, HashMap};
use std::path::{Path, PathBuf};

use log::{info, warn};
use rayon::prelude::*;
use serde::Serialize;

use super::config::LanguageInputs;
use super::output::input_name;
use super::Failure;
use crate::graph::{
    aggregate_views, attach_clicks, dedup_and_filter, resolve_redirects, ClickCounts, Graph,
    NodeRegistry, RedirectMap, ViewCounts,
};
use crate::ingest::{
    normalize, open_input, parse_clickstream, parse_pageviews, parse_pairs, parse_redirects,
    parse_sql_insert_tuples, parse_titles, parse_wikicode_links, read_wiki_dir, Page,
    RawLinkRecord, RedirectRecord, SkipCounter, SqlError, XmlPages,
};

pub const PAGE_COLUMNS: [usize; 4] = [0, 1, 2, 4];
pub const PAGELINKS_COLUMNS: [usize; 4] = [0, 1, 2, 3];
pub const REDIRECT_COLUMNS: [usize; 4] = [0, 1, 2, 3];

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct PageCounts {
    pub read: u64,
    pub articles: u64,
    pub redirects: u64,
    pub other_namespace: u64,
}

/// Link counts in the layout of a dump statistics table: `all` extracted
/// records split into kept `unified` edges and the dropped categories.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct LinkSummary {
    pub all: u64,
    pub unified: u64,
    pub redlinks: u64,
    pub self_loops: u64,
    pub duplicates: u64,
    /// Links into non-article namespaces, not part of `all`.
    pub non_article: u64,
    /// Unparseable link markup, not part of `all`.
    pub malformed: u64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct RedirectSummary {
    pub records: u64,
    pub mapped: u64,
    pub cycle_members: u64,
    pub over_cap: u64,
    /// Link endpoints that named a member of a redirect cycle.
    pub cycle_hits: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct IngestReport {
    pub language: String,
    pub source: String,
    pub inputs: BTreeMap<String, String>,
    pub nodes: u64,
    pub edges: u64,
    pub pages: PageCounts,
    pub links: LinkSummary,
    pub redirects: RedirectSummary,
    pub clicks: Option<ClickCounts>,
    pub pageviews: Option<ViewCounts>,
    pub skipped: BTreeMap<String, SkipCounter>,
}

impl IngestReport {
    /// Flat `(metric, value)` rows for the counts manifest.
    pub fn counts_rows(&self) -> Vec<(String, u64)> {
        let mut rows: Vec<(String, u64)> = vec![
            ("nodes".into(), self.nodes),
            ("edges".into(), self.edges),
            ("links_all".into(), self.links.all),
            ("links_unified".into(), self.links.unified),
            ("redlinks".into(), self.links.redlinks),
            ("self_loops".into(), self.links.self_loops),
            ("duplicates".into(), self.links.duplicates),
            ("non_article_links".into(), self.links.non_article),
            ("malformed_links".into(), self.links.malformed),
            ("pages_read".into(), self.pages.read),
            ("pages_articles".into(), self.pages.articles),
            ("pages_redirects".into(), self.pages.redirects),
            ("pages_other_namespace".into(), self.pages.other_namespace),
            ("redirect_records".into(), self.redirects.records),
            ("redirects_mapped".into(), self.redirects.mapped),
            (
                "redirect_cycle_members".into(),
                self.redirects.cycle_members,
            ),
            ("redirects_over_cap".into(), self.redirects.over_cap),
            ("redirect_cycle_hits".into(), self.redirects.cycle_hits),
        ];
        if let Some(c) = &self.clicks {
            rows.extend([
                ("click_records".into(), c.records),
                ("click_non_link".into(), c.non_link),
                ("click_unmatched".into(), c.unmatched),
                ("click_self_loops".into(), c.self_loops),
                ("click_pairs_matched".into(), c.matched_pairs),
                ("click_pairs_orphan_dropped".into(), c.orphan_pairs_dropped),
                ("click_pairs_orphan_kept".into(), c.orphan_pairs_kept),
                ("clicks_on_edges".into(), c.clicks_on_edges),
            ]);
        }
        if let Some(v) = &self.pageviews {
            rows.extend([
                ("pageview_records".into(), v.records),
                ("pageview_matched".into(), v.matched),
                ("pageview_unmatched".into(), v.unmatched),
            ]);
        }
        for (kind, s) in &self.skipped {
            rows.push((format!("skipped_{kind}"), s.count));
        }
        rows
    }
}

enum LinkSource {
    Xml(PathBuf),
    WikiDir(PathBuf),
    Sql {
        page: PathBuf,
        pagelinks: PathBuf,
        redirect: Option<PathBuf>,
    },
    Pairs {
        pairs: PathBuf,
        titles: Option<PathBuf>,
    },
}

impl LinkSource {
    fn name(&self) -> &'static str {
        match self {
            LinkSource::Xml(_) => "xml",
            LinkSource::WikiDir(_) => "wiki_dir",
            LinkSource::Sql { .. } => "sql",
            LinkSource::Pairs { .. } => "pairs",
        }
    }

    fn select(language: &str, inputs: &LanguageInputs) -> Result<Self, Failure> {
        let mut found = Vec::new();
        if let Some(p) = &inputs.xml {
            found.push(LinkSource::Xml(p.clone()));
        }
        if let Some(p) = &inputs.wiki_dir {
            found.push(LinkSource::WikiDir(p.clone()));
        }
        if inputs.sql_page.is_some() || inputs.sql_pagelinks.is_some() {
            let (Some(page), Some(pagelinks)) = (&inputs.sql_page, &inputs.sql_pagelinks) else {
                return Err(Failure::Config(format!(
                    "[{language}]: sql_page and sql_pagelinks must be given together"
                )));
            };
            found.push(LinkSource::Sql {
                page: page.clone(),
                pagelinks: pagelinks.clone(),
                redirect: inputs.sql_redirect.clone(),
            });
        } else if inputs.sql_redirect.is_some() {
            return Err(Failure::Config(format!(
                "[{language}]: sql_redirect needs sql_page"
            )));
        }
        if let Some(p) = &inputs.pairs {
            found.push(LinkSource::Pairs {
                pairs: p.clone(),
                titles: inputs.titles.clone(),
            });
        } else if inputs.titles.is_some() {
            return Err(Failure::Config(format!("[{language}]: titles needs pairs")));
        }
        match found.len() {
            0 => Err(Failure::Config(format!(
                "[{language}]: no inputs (set xml, wiki_dir, sql_page or pairs)"
            ))),
            1 => Ok(found.pop().expect("one source")),
            _ => Err(Failure::Config(format!(
                "[{language}]: conflicting link sources {}",
                found
                    .iter()
                    .map(LinkSource::name)
                    .collect::<Vec<_>>()
                    .join(", ")
            ))),
        }
    }
}

#[derive(Default)]
struct Extracted {
    titles: Vec<String>,
    links: Vec<RawLinkRecord>,
    redirects: Vec<RedirectRecord>,
    pages: PageCounts,
    non_article: u64,
    malformed: u64,
    skipped: BTreeMap<String, SkipCounter>,
}

enum PageOutcome {
    Article {
        title: String,
        links: Vec<RawLinkRecord>,
        malformed: u64,
        non_article: u64,
    },
    Redirect(RedirectRecord),
    Other,
}

fn classify_page(page: Page) -> PageOutcome {
    if page.namespace != 0 {
        return PageOutcome::Other;
    }
    if let Some(target) = page.redirect {
        return PageOutcome::Redirect(RedirectRecord {
            from_title: page.title,
            to_title: target,
        });
    }
    let mut it = parse_wikicode_links(&page.title, &page.text);
    let links: Vec<RawLinkRecord> = it.by_ref().collect();
    PageOutcome::Article {
        title: page.title,
        links,
        malformed: it.malformed,
        non_article: it.non_article,
    }
}

impl Extracted {
    fn add_page(&mut self, outcome: PageOutcome) {
        self.pages.read += 1;
        match outcome {
            PageOutcome::Article {
                title,
                links,
                malformed,
                non_article,
            } => {
                self.pages.articles += 1;
                self.titles.push(title);
                self.links.extend(links);
                self.malformed += malformed;
                self.non_article += non_article;
            }
            PageOutcome::Redirect(r) => {
                self.pages.redirects += 1;
                self.redirects.push(r);
            }
            PageOutcome::Other => self.pages.other_namespace += 1,
        }
    }

    fn skip(&mut self, kind: &str) -> &mut SkipCounter {
        self.skipped.entry(kind.to_owned()).or_default()
    }
}

fn extract_xml(path: &Path, out: &mut Extracted) -> Result<(), Failure> {
    for page in XmlPages::new(open_input(path)?) {
        match page {
            Ok(page) => out.add_page(classify_page(page)),
            Err(e) => {
                warn!("{}: {e}; ignoring the rest of the file", path.display());
                out.skip("xml").note(&e.to_string());
                break;
            }
        }
    }
    Ok(())
}

fn extract_wiki_dir(dir: &Path, out: &mut Extracted) -> Result<(), Failure> {
    let files = read_wiki_dir(dir)?;
    if files.is_empty() {
        return Err(Failure::Input(format!(
            "no inputs: {} contains no page files",
            dir.display()
        )));
    }
    let outcomes: Vec<Option<PageOutcome>> = files
        .par_iter()
        .map(|f| Page::from_file(f).map(|p| p.map(classify_page)))
        .collect::<crate::Result<_>>()?;
    for (outcome, file) in outcomes.into_iter().zip(&files) {
        match outcome {
            Some(o) => out.add_page(o),
            None => out
                .skip("wiki_dir")
                .note(&format!("{}: empty title", input_name(file))),
        }
    }
    Ok(())
}

fn for_each_sql(
    path: &Path,
    columns: &[usize],
    skipped: &mut SkipCounter,
    mut f: impl FnMut(Vec<String>, &mut SkipCounter),
) -> Result<(), Failure> {
    for tuple in parse_sql_insert_tuples(open_input(path)?, columns) {
        match tuple {
            Ok(t) => f(t, skipped),
            Err(e @ SqlError::Io { .. }) => {
                return Err(Failure::Input(format!("{}: {e}", path.display())));
            }
            Err(e) => {
                if matches!(e, SqlError::Truncated { .. }) {
                    warn!("{}: {e}", path.display());
                }
                skipped.note(&e.to_string());
            }
        }
    }
    Ok(())
}

fn extract_sql(
    page: &Path,
    pagelinks: &Path,
    redirect: Option<&Path>,
    inputs: &LanguageInputs,
    out: &mut Extracted,
) -> Result<(), Failure> {
    let columns =
        |given: &Option<Vec<usize>>, default: [usize; 4]| -> Result<Vec<usize>, Failure> {
            let c = given.clone().unwrap_or_else(|| default.to_vec());
            if c.len() != 4 {
                return Err(Failure::Config(
                    "SQL column lists need exactly 4 entries".into(),
                ));
            }
            Ok(c)
        };
    let page_cols = columns(&inputs.sql_page_columns, PAGE_COLUMNS)?;
    let link_cols = columns(&inputs.sql_pagelinks_columns, PAGELINKS_COLUMNS)?;
    let redirect_cols = columns(&inputs.sql_redirect_columns, REDIRECT_COLUMNS)?;

    // page id -> (title, is_redirect) for the article namespace
    let mut pages: HashMap<u64, (String, bool)> = HashMap::new();
    let mut skipped = SkipCounter::default();
    let mut counts = PageCounts::default();
    for_each_sql(page, &page_cols, &mut skipped, |t, skipped| {
        let (Ok(id), Ok(ns)) = (t[0].parse::<u64>(), t[1].parse::<i64>()) else {
            skipped.note(&format!(
                "page tuple with non-numeric id or namespace: {t:?}"
            ));
            return;
        };
        counts.read += 1;
        if ns != 0 {
            counts.other_namespace += 1;
            return;
        }
        let Some(title) = normalize(&t[2]) else {
            skipped.note("page tuple with empty title");
            return;
        };
        let is_redirect = t[3] == "1";
        if is_redirect {
            counts.redirects += 1;
        } else {
            counts.articles += 1;
        }
        pages.insert(id, (title, is_redirect));
    })?;
    out.pages = counts;
    out.skipped.insert("sql_page".into(), skipped);
    let mut titles: Vec<String> = pages
        .values()
        .filter(|(_, r)| !r)
        .map(|(t, _)| t.clone())
        .collect();
    titles.sort_unstable();
    out.titles = titles;

    if let Some(redirect) = redirect {
        let mut skipped = SkipCounter::default();
        let mut records = Vec::new();
        for_each_sql(redirect, &redirect_cols, &mut skipped, |t, skipped| {
            let (Ok(from), Ok(ns)) = (t[0].parse::<u64>(), t[1].parse::<i64>()) else {
                skipped.note(&format!(
                    "redirect tuple with non-numeric id or namespace: {t:?}"
                ));
                return;
            };
            if ns != 0 || !t[3].is_empty() {
                return;
            }
            if let (Some((from_title, _)), Some(to_title)) = (pages.get(&from), normalize(&t[2])) {
                records.push(RedirectRecord {
                    from_title: from_title.clone(),
                    to_title,
                });
            }
        })?;
        out.redirects = records;
        out.skipped.insert("sql_redirect".into(), skipped);
    }

    let mut skipped = SkipCounter::default();
    let (mut links, mut non_article) = (Vec::new(), 0u64);
    for_each_sql(pagelinks, &link_cols, &mut skipped, |t, skipped| {
        let (Ok(from), Ok(ns)) = (t[0].parse::<u64>(), t[1].parse::<i64>()) else {
            skipped.note(&format!(
                "pagelinks tuple with non-numeric id or namespace: {t:?}"
            ));
            return;
        };
        let source = match pages.get(&from) {
            Some((title, false)) => title,
            _ => {
                non_article += 1;
                return;
            }
        };
        if ns != 0 {
            non_article += 1;
            return;
        }
        match normalize(&t[2]) {
            Some(target) => links.push(RawLinkRecord {
                source: source.clone(),
                target,
                weight: 1,
            }),
            None => skipped.note("pagelinks tuple with empty title"),
        }
    })?;
    out.links = links;
    out.non_article = non_article;
    out.skipped.insert("sql_pagelinks".into(), skipped);
    Ok(())
}

fn extract_pairs(
    pairs: &Path,
    titles: Option<&Path>,
    file_redirects: &[RedirectRecord],
    out: &mut Extracted,
) -> Result<(), Failure> {
    let mut it = parse_pairs(open_input(pairs)?);
    out.links = it.by_ref().collect();
    out.skipped.insert("pairs".into(), it.skipped);
    match titles {
        Some(path) => {
            let mut it = parse_titles(open_input(path)?);
            out.titles = it.by_ref().collect();
            out.skipped.insert("titles".into(), it.skipped);
        }
        None => {
            let aliases: std::collections::HashSet<&str> = file_redirects
                .iter()
                .map(|r| r.from_title.as_str())
                .collect();
            out.titles = out
                .links
                .iter()
                .flat_map(|l| [l.source.clone(), l.target.clone()])
                .filter(|t| !aliases.contains(t.as_str()))
                .collect();
        }
    }
    out.pages.articles = {
        let mut t = out.titles.clone();
        t.sort_unstable();
        t.dedup();
        t.len() as u64
    };
    Ok(())
}

/// Runs extraction, redirect resolution, deduplication and click/pageview
/// attachment for one language.
pub fn ingest_language(
    language: &str,
    inputs: &LanguageInputs,
    keep_orphan_clicks: bool,
) -> Result<(Graph, IngestReport), Failure> {
    let source = LinkSource::select(language, inputs)?;
    let mut report = IngestReport {
        language: language.to_owned(),
        source: source.name().to_owned(),
        ..IngestReport::default()
    };
    let mut record_input = |role: &str, p: &Option<PathBuf>| {
        if let Some(p) = p {
            report.inputs.insert(role.to_owned(), input_name(p));
        }
    };
    record_input("xml", &inputs.xml);
    record_input("wiki_dir", &inputs.wiki_dir);
    record_input("sql_page", &inputs.sql_page);
    record_input("sql_pagelinks", &inputs.sql_pagelinks);
    record_input("sql_redirect", &inputs.sql_redirect);
    record_input("pairs", &inputs.pairs);
    record_input("titles", &inputs.titles);
    record_input("redirects", &inputs.redirects);
    record_input("clickstream", &inputs.clickstream);
    record_input("pageviews", &inputs.pageviews);

    let mut file_redirects = Vec::new();
    let mut redirect_skips = None;
    if let Some(path) = &inputs.redirects {
        let mut it = parse_redirects(open_input(path)?);
        file_redirects = it.by_ref().collect();
        redirect_skips = Some(it.skipped);
    }

    let mut ex = Extracted::default();
    match &source {
        LinkSource::Xml(p) => extract_xml(p, &mut ex)?,
        LinkSource::WikiDir(d) => extract_wiki_dir(d, &mut ex)?,
        LinkSource::Sql {
            page,
            pagelinks,
            redirect,
        } => extract_sql(page, pagelinks, redirect.as_deref(), inputs, &mut ex)?,
        LinkSource::Pairs { pairs, titles } => {
            extract_pairs(pairs, titles.as_deref(), &file_redirects, &mut ex)?
        }
    }
    if let Some(s) = redirect_skips {
        ex.skipped.insert("redirects".into(), s);
    }
    ex.redirects.extend(file_redirects);

    report.redirects.records = ex.redirects.len() as u64;
    let map = RedirectMap::build(ex.redirects);
    report.redirects.mapped = map.len() as u64;
    report.redirects.cycle_members = map.cycle_members() as u64;
    report.redirects.over_cap = map.over_cap;
    if map.cycle_members() > 0 {
        warn!(
            "[{language}] {} titles sit on redirect cycles",
            map.cycle_members()
        );
    }

    let registry = NodeRegistry::from_titles(language, ex.titles);
    if registry.is_empty() {
        return Err(Failure::Input(format!(
            "[{language}]: no articles found in the inputs"
        )));
    }
    let mut resolver = resolve_redirects(ex.links, &map);
    let (mut edges, lc) = dedup_and_filter(&mut resolver, &registry, language);
    report.redirects.cycle_hits = resolver.cycle_hits;
    report.links = LinkSummary {
        all: lc.all + resolver.self_loops,
        unified: lc.unified,
        redlinks: lc.redlinks,
        self_loops: lc.self_loops + resolver.self_loops,
        duplicates: lc.duplicates,
        non_article: ex.non_article,
        malformed: ex.malformed,
    };
    report.pages = ex.pages;

    let mut clicks_in = vec![0; registry.len()];
    if let Some(path) = &inputs.clickstream {
        let mut cs = parse_clickstream(open_input(path)?);
        let (e, c, counts) = attach_clicks(
            edges,
            &mut cs,
            &registry,
            language,
            &map,
            keep_orphan_clicks,
        );
        edges = e;
        clicks_in = c;
        report.clicks = Some(counts);
        ex.skipped.insert("clickstream".into(), cs.skipped);
    }
    let mut views = vec![0; registry.len()];
    if let Some(path) = &inputs.pageviews {
        let mut pv = parse_pageviews(
            open_input(path)?,
            inputs.pageview_separator.unwrap_or_default(),
        );
        let (v, counts) = aggregate_views(&mut pv, &registry, language, &map);
        views = v;
        report.pageviews = Some(counts);
        ex.skipped.insert("pageviews".into(), pv.skipped);
    }
    report.skipped = ex.skipped;
    report.nodes = registry.len() as u64;
    report.edges = edges.len() as u64;
    info!(
        "[{language}] {} nodes, {} edges ({} link records, {} redlinks)",
        report.nodes, report.edges, report.links.all, report.links.redlinks
    );
    Ok((
        Graph {
            registry,
            edges,
            views,
            clicks_in,
        },
        report,
    ))
}
