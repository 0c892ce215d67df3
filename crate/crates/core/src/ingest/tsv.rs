//! Two-column TSV inputs: redirects, link pairs and article title lists,
//! plus the normalized-pairs output.

use std::io::{BufRead, Write};

use super::title::normalize;
use super::{LineReader, RawLinkRecord, RedirectRecord, SkipCounter};

pub struct Redirects<R> {
    lines: LineReader<R>,
    pub skipped: SkipCounter,
}

impl<R: BufRead> Iterator for Redirects<R> {
    type Item = RedirectRecord;

    fn next(&mut self) -> Option<RedirectRecord> {
        while let Some((line_no, line)) = self.lines.next_line(&mut self.skipped) {
            let mut fields = line.split('\t');
            let (Some(from), Some(to), None) = (fields.next(), fields.next(), fields.next()) else {
                self.skipped
                    .bump(line_no, "expected 2 tab-separated fields");
                continue;
            };
            let (Some(from_title), Some(to_title)) = (normalize(from), normalize(to)) else {
                self.skipped.bump(line_no, "empty title");
                continue;
            };
            if from_title == to_title {
                self.skipped.bump(line_no, "redirect to itself");
                continue;
            }
            return Some(RedirectRecord {
                from_title,
                to_title,
            });
        }
        None
    }
}

/// Streams `from<TAB>to` redirect lines.
pub fn parse_redirects<R: BufRead>(stream: R) -> Redirects<R> {
    Redirects {
        lines: LineReader::new(stream),
        skipped: SkipCounter::default(),
    }
}

pub struct Pairs<R> {
    lines: LineReader<R>,
    pub skipped: SkipCounter,
}

impl<R: BufRead> Iterator for Pairs<R> {
    type Item = RawLinkRecord;

    fn next(&mut self) -> Option<RawLinkRecord> {
        while let Some((line_no, line)) = self.lines.next_line(&mut self.skipped) {
            let fields: Vec<&str> = line.split('\t').collect();
            if !(2..=3).contains(&fields.len()) {
                self.skipped
                    .bump(line_no, "expected 2 or 3 tab-separated fields");
                continue;
            }
            let weight = match fields.get(2) {
                None => 1,
                Some(w) => match w.trim().parse::<u64>() {
                    Ok(w) if w >= 1 => w,
                    _ => {
                        self.skipped
                            .bump(line_no, "weight is not a positive integer");
                        continue;
                    }
                },
            };
            let (Some(source), Some(target)) = (normalize(fields[0]), normalize(fields[1])) else {
                self.skipped.bump(line_no, "empty title");
                continue;
            };
            return Some(RawLinkRecord {
                source,
                target,
                weight,
            });
        }
        None
    }
}

/// Streams `source<TAB>target[<TAB>weight]` lines.
pub fn parse_pairs<R: BufRead>(stream: R) -> Pairs<R> {
    Pairs {
        lines: LineReader::new(stream),
        skipped: SkipCounter::default(),
    }
}

pub struct Titles<R> {
    lines: LineReader<R>,
    pub skipped: SkipCounter,
}

impl<R: BufRead> Iterator for Titles<R> {
    type Item = String;

    fn next(&mut self) -> Option<String> {
        while let Some((line_no, line)) = self.lines.next_line(&mut self.skipped) {
            match normalize(line) {
                Some(t) => return Some(t),
                None => self.skipped.bump(line_no, "empty title"),
            }
        }
        None
    }
}

/// One article title per line.
pub fn parse_titles<R: BufRead>(stream: R) -> Titles<R> {
    Titles {
        lines: LineReader::new(stream),
        skipped: SkipCounter::default(),
    }
}

/// Writes records as `source<TAB>target<TAB>weight`.
pub fn write_pairs<'a, W: Write>(
    mut out: W,
    records: impl IntoIterator<Item = &'a RawLinkRecord>,
) -> std::io::Result<()> {
    writeln!(out, "# source\ttarget\tweight")?;
    for r in records {
        writeln!(out, "{}\t{}\t{}", r.source, r.target, r.weight)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn redirects_skip_self_targets() {
        let mut r = parse_redirects("USA\tUnited_States\nA\ta\nB\n".as_bytes());
        let out: Vec<_> = r.by_ref().collect();
        assert_eq!(
            out,
            vec![RedirectRecord {
                from_title: "USA".into(),
                to_title: "United States".into()
            }]
        );
        assert_eq!(r.skipped.count, 2);
    }

    #[test]
    fn pairs_with_optional_weight() {
        let out: Vec<_> = parse_pairs("# header\nA\tB\nA\tC\t4\nA\tC\t0\n".as_bytes()).collect();
        assert_eq!(out.len(), 2);
        assert_eq!(out[1].weight, 4);
    }

    proptest::proptest! {
        #[test]
        fn pairs_round_trip(recs in proptest::collection::vec(("[A-Z][a-z]{0,6}( [a-z]{1,4})?", "[A-Z][a-z]{0,6}", 1u64..1000), 0..20)) {
            let records: Vec<RawLinkRecord> = recs
                .into_iter()
                .map(|(s, t, w)| RawLinkRecord { source: s, target: t, weight: w })
                .collect();
            let mut buf = Vec::new();
            write_pairs(&mut buf, &records).unwrap();
            let back: Vec<_> = parse_pairs(buf.as_slice()).collect();
            proptest::prop_assert_eq!(back, records);
        }
    }
}
