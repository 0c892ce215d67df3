use std::io::BufRead;

use super::title::normalize;
use super::{LineReader, SkipCounter};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PageviewRecord {
    pub title: String,
    pub views: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Separator {
    #[default]
    Tab,
    Space,
}

impl Separator {
    fn byte(self) -> char {
        match self {
            Separator::Tab => '\t',
            Separator::Space => ' ',
        }
    }
}

pub struct Pageviews<R> {
    lines: LineReader<R>,
    sep: Separator,
    pub skipped: SkipCounter,
}

impl<R: BufRead> Iterator for Pageviews<R> {
    type Item = PageviewRecord;

    fn next(&mut self) -> Option<PageviewRecord> {
        while let Some((line_no, line)) = self.lines.next_line(&mut self.skipped) {
            // the count is the last field; space-separated titles may contain spaces
            let Some((title, views)) = line.trim_end().rsplit_once(self.sep.byte()) else {
                self.skipped.bump(line_no, "missing separator");
                continue;
            };
            let Ok(views) = views.trim().parse::<u64>() else {
                self.skipped
                    .bump(line_no, "view count is not a nonnegative integer");
                continue;
            };
            let Some(title) = normalize(title) else {
                self.skipped.bump(line_no, "empty title");
                continue;
            };
            return Some(PageviewRecord { title, views });
        }
        None
    }
}

/// Streams `title<SEP>views` lines.
pub fn parse_pageviews<R: BufRead>(stream: R, sep: Separator) -> Pageviews<R> {
    Pageviews {
        lines: LineReader::new(stream),
        sep,
        skipped: SkipCounter::default(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(title: &str, views: u64) -> PageviewRecord {
        PageviewRecord {
            title: title.into(),
            views,
        }
    }

    #[test]
    fn space_separated() {
        let out: Vec<_> = parse_pageviews("France 120034\n".as_bytes(), Separator::Space).collect();
        assert_eq!(out, vec![rec("France", 120034)]);
    }

    #[test]
    fn duplicates_are_kept() {
        let out: Vec<_> = parse_pageviews("A 5\nA 7\n".as_bytes(), Separator::Space).collect();
        assert_eq!(out, vec![rec("A", 5), rec("A", 7)]);
    }

    #[test]
    fn empty_file() {
        assert_eq!(parse_pageviews("".as_bytes(), Separator::Tab).count(), 0);
    }

    #[test]
    fn bad_counts_are_skipped() {
        let mut pv = parse_pageviews(
            "A\t-1\nB\tx\nNew York\t3\nnosep\n".as_bytes(),
            Separator::Tab,
        );
        let out: Vec<_> = pv.by_ref().collect();
        assert_eq!(out, vec![rec("New York", 3)]);
        assert_eq!(pv.skipped.count, 3);
    }
}
