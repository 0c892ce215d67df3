//! Ranking TSV: `#`-prefixed header, then `rank<TAB>id<TAB>language<TAB>title<TAB>score`.

use std::io::{BufRead, Write};

use super::RankingList;
use crate::error::{Error, Result};
use crate::graph::{NodeKey, NodeRegistry};

pub const HEADER: &str = "# rank\tid\tlanguage\ttitle\tscore";

/// Integral values print as integers, everything else in shortest
/// round-trip scientific notation.
pub(crate) fn format_score(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v:e}")
    }
}

/// Writes `list` with `scores` indexed by node id.
pub fn write_ranking_tsv<W: Write>(
    mut w: W,
    list: &RankingList,
    scores: &[f64],
    registry: &NodeRegistry,
) -> Result<()> {
    if scores.len() != list.len() || registry.len() != list.len() {
        return Err(Error::DimensionMismatch {
            expected: list.len(),
            actual: scores.len(),
        });
    }
    writeln!(w, "{HEADER}")?;
    for (k, &id) in list.order().iter().enumerate() {
        let key = registry.key(id);
        writeln!(
            w,
            "{}\t{}\t{}\t{}\t{}",
            k + 1,
            id,
            key.language,
            key.title,
            format_score(scores[id as usize])
        )?;
    }
    w.flush()?;
    Ok(())
}

/// A ranking read back from TSV.
#[derive(Debug, Clone, PartialEq)]
pub struct RankingTable {
    pub list: RankingList,
    /// Node keys indexed by id.
    pub keys: Vec<NodeKey>,
    /// Scores indexed by id.
    pub scores: Vec<f64>,
}

pub fn read_ranking_tsv<R: BufRead>(reader: R, source: &str) -> Result<RankingTable> {
    let mut rows: Vec<(u32, NodeKey, f64)> = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |message: &str| Error::Format {
            path: source.to_owned(),
            line: i + 1,
            message: message.to_owned(),
        };
        let f: Vec<&str> = line.split('\t').collect();
        if f.len() != 5 {
            return Err(bad("expected rank, id, language, title, score"));
        }
        let rank: usize = f[0].parse().map_err(|_| bad("rank is not an integer"))?;
        if rank != rows.len() + 1 {
            return Err(bad("ranks must run 1..N in order"));
        }
        let id: u32 = f[1].parse().map_err(|_| bad("id is not an integer"))?;
        let score: f64 = f[4].parse().map_err(|_| bad("score is not a number"))?;
        rows.push((
            id,
            NodeKey {
                language: f[2].to_owned(),
                title: f[3].to_owned(),
            },
            score,
        ));
    }
    let n = rows.len();
    let order: Vec<u32> = rows.iter().map(|r| r.0).collect();
    let list = RankingList::from_order(order)?;
    let mut keys = vec![
        NodeKey {
            language: String::new(),
            title: String::new()
        };
        n
    ];
    let mut scores = vec![0.0; n];
    for (id, key, score) in rows {
        keys[id as usize] = key;
        scores[id as usize] = score;
    }
    Ok(RankingTable { list, keys, scores })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rank::rank_from_scores;

    #[test]
    fn round_trip() {
        let reg = NodeRegistry::from_titles("en", ["Alpha", "Beta", "Gamma"]);
        let scores = vec![0.2, 0.5, 1.0 / 3.0];
        let list = rank_from_scores(&scores, true).unwrap();
        let mut buf = Vec::new();
        write_ranking_tsv(&mut buf, &list, &scores, &reg).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("# rank\tid\tlanguage\ttitle\tscore\n1\t1\ten\tBeta\t5e-1\n"));
        let back = read_ranking_tsv(buf.as_slice(), "x").unwrap();
        assert_eq!(back.list, list);
        assert_eq!(back.scores, scores);
        assert_eq!(back.keys[2].title, "Gamma");
    }

    #[test]
    fn integral_scores() {
        assert_eq!(format_score(120034.0), "120034");
        assert_eq!(format_score(0.25), "2.5e-1");
    }
}
