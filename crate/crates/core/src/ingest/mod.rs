//! Streaming parsers for the raw inputs: wikicode pages, MediaWiki SQL
//! dumps, clickstream TSV, pageview counts, redirect lists and plain pair
//! files. Every parser yields typed records and counts what it skips.

mod clickstream;
mod pageviews;
mod sql;
pub mod title;
mod tsv;
mod wikicode;
mod xml;

use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::Serialize;

pub use clickstream::{parse_clickstream, ClickRecord, Clickstream, LinkType};
pub use pageviews::{parse_pageviews, PageviewRecord, Pageviews, Separator};
pub use sql::{parse_sql_insert_tuples, SqlError, SqlTuples};
pub use title::normalize;
pub use tsv::{parse_pairs, parse_redirects, parse_titles, write_pairs, Pairs, Redirects, Titles};
pub use wikicode::{is_namespace_prefix, parse_wikicode_links, redirect_target, WikiLinks};
pub use xml::{read_wiki_dir, Page, XmlPages};

use crate::error::{Error, Result};

/// A directed link between two normalized titles.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RawLinkRecord {
    pub source: String,
    pub target: String,
    pub weight: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RedirectRecord {
    pub from_title: String,
    pub to_title: String,
}

/// Number of skipped input lines, with the first few reasons kept for the
/// run manifest.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SkipCounter {
    pub count: u64,
    pub examples: Vec<String>,
}

impl SkipCounter {
    const KEEP: usize = 5;

    pub fn bump(&mut self, line: u64, reason: &str) {
        self.count += 1;
        if self.examples.len() < Self::KEEP {
            self.examples.push(format!("line {line}: {reason}"));
        }
    }

    /// Counts a skip that has no line position, e.g. a byte offset in a
    /// binary-ish dump.
    pub fn note(&mut self, reason: &str) {
        self.count += 1;
        if self.examples.len() < Self::KEEP {
            self.examples.push(reason.to_owned());
        }
    }

    pub fn absorb(&mut self, other: &SkipCounter) {
        self.count += other.count;
        for e in &other.examples {
            if self.examples.len() >= Self::KEEP {
                break;
            }
            self.examples.push(e.clone());
        }
    }
}

/// Line splitter shared by the text parsers. Blank lines and `#` header
/// lines are ignored; lines that are not UTF-8 are skipped and counted.
struct LineReader<R> {
    reader: R,
    buf: Vec<u8>,
    line: String,
    line_no: u64,
}

impl<R: BufRead> LineReader<R> {
    fn new(reader: R) -> Self {
        LineReader {
            reader,
            buf: Vec::new(),
            line: String::new(),
            line_no: 0,
        }
    }

    fn next_line(&mut self, skipped: &mut SkipCounter) -> Option<(u64, &str)> {
        loop {
            self.buf.clear();
            match self.reader.read_until(b'\n', &mut self.buf) {
                Ok(0) => return None,
                Ok(_) => {}
                Err(e) => {
                    skipped.bump(self.line_no + 1, &format!("read error: {e}"));
                    return None;
                }
            }
            self.line_no += 1;
            while matches!(self.buf.last(), Some(b'\n' | b'\r')) {
                self.buf.pop();
            }
            if self.buf.is_empty() || self.buf[0] == b'#' {
                continue;
            }
            match std::str::from_utf8(&self.buf) {
                Ok(s) => {
                    self.line.clear();
                    self.line.push_str(s);
                    return Some((self.line_no, &self.line));
                }
                Err(_) => skipped.bump(self.line_no, "invalid UTF-8"),
            }
        }
    }
}

/// Opens a local input file, transparently decompressing `.gz` and `.bz2`.
pub fn open_input(path: &Path) -> Result<Box<dyn BufRead + Send>> {
    let file = File::open(path).map_err(|e| Error::file(path, e))?;
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .unwrap_or_default();
    Ok(match ext {
        "gz" => Box::new(BufReader::with_capacity(
            1 << 16,
            flate2::read::MultiGzDecoder::new(file),
        )),
        "bz2" => Box::new(BufReader::with_capacity(
            1 << 16,
            bzip2::read::MultiBzDecoder::new(file),
        )),
        _ => Box::new(BufReader::with_capacity(1 << 16, file)),
    })
}
