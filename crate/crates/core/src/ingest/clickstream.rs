use std::io::BufRead;

use super::title::normalize;
use super::{LineReader, SkipCounter};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LinkType {
    Link,
    External,
    Other,
}

impl LinkType {
    fn classify(raw: &str) -> Option<LinkType> {
        match raw {
            "link" => Some(LinkType::Link),
            "external" => Some(LinkType::External),
            "other" => Some(LinkType::Other),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClickRecord {
    pub prev_title: String,
    pub curr_title: String,
    pub link_type: LinkType,
    pub count: u64,
    /// `prev` was a pseudo-source such as `other-search` or `other-empty`.
    pub external_source: bool,
}

impl ClickRecord {
    /// Article-to-article navigation through an existing link.
    pub fn is_navigation(&self) -> bool {
        self.link_type == LinkType::Link && !self.external_source
    }
}

/// Streaming reader over `prev<TAB>curr<TAB>type<TAB>n` lines.
pub struct Clickstream<R> {
    lines: LineReader<R>,
    pub skipped: SkipCounter,
}

impl<R: BufRead> Iterator for Clickstream<R> {
    type Item = ClickRecord;

    fn next(&mut self) -> Option<ClickRecord> {
        while let Some((line_no, line)) = self.lines.next_line(&mut self.skipped) {
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 4 {
                self.skipped
                    .bump(line_no, "expected 4 tab-separated fields");
                continue;
            }
            let Ok(count) = fields[3].trim().parse::<u64>() else {
                self.skipped.bump(line_no, "click count is not an integer");
                continue;
            };
            let Some(link_type) = LinkType::classify(fields[2].trim()) else {
                self.skipped.bump(line_no, "unknown link type");
                continue;
            };
            let external_source = fields[0].starts_with("other-");
            let (Some(prev_title), Some(curr_title)) = (normalize(fields[0]), normalize(fields[1]))
            else {
                self.skipped.bump(line_no, "empty title");
                continue;
            };
            if count == 0 {
                self.skipped.bump(line_no, "zero click count");
                continue;
            }
            return Some(ClickRecord {
                prev_title,
                curr_title,
                link_type,
                count,
                external_source,
            });
        }
        None
    }
}

pub fn parse_clickstream<R: BufRead>(tsv: R) -> Clickstream<R> {
    Clickstream {
        lines: LineReader::new(tsv),
        skipped: SkipCounter::default(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn link_record() {
        let recs: Vec<_> =
            parse_clickstream("Hamburger\tCheeseburger\tlink\t25\n".as_bytes()).collect();
        assert_eq!(
            recs,
            vec![ClickRecord {
                prev_title: "Hamburger".into(),
                curr_title: "Cheeseburger".into(),
                link_type: LinkType::Link,
                count: 25,
                external_source: false,
            }]
        );
        assert!(recs[0].is_navigation());
    }

    #[test]
    fn external_sources_are_not_navigation() {
        let recs: Vec<_> =
            parse_clickstream("other-search\tParis\texternal\t9000\n".as_bytes()).collect();
        assert_eq!(recs[0].link_type, LinkType::External);
        assert!(!recs[0].is_navigation());
        let recs: Vec<_> = parse_clickstream("A\tB\tother\t12\n".as_bytes()).collect();
        assert!(!recs[0].is_navigation());
    }

    #[test]
    fn malformed_lines_are_counted() {
        let mut cs = parse_clickstream(
            "A\tB\tlink\tabc\nA\tB\tlink\nA\tB\tlink\t-3\nA\tB\tbogus\t4\nNew_York\tB\tlink\t10\n"
                .as_bytes(),
        );
        let recs: Vec<_> = cs.by_ref().collect();
        assert_eq!(recs.len(), 1);
        assert_eq!(recs[0].prev_title, "New York");
        assert_eq!(cs.skipped.count, 4);
    }
}
