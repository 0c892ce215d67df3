use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::NodeKey;
use crate::rank::RankingList;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TopRow {
    pub id: u32,
    pub language: String,
    pub title: String,
    /// 1-based rank in each list, aligned with [`TopTable::columns`].
    pub ranks: Vec<u32>,
}

/// Top `k` of a base list with every node's rank in each list.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TopTable {
    pub base: String,
    pub columns: Vec<String>,
    pub rows: Vec<TopRow>,
}

impl TopTable {
    pub fn write_tsv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        write!(w, "# id\tlanguage\ttitle")?;
        for c in &self.columns {
            write!(w, "\t{c}")?;
        }
        writeln!(w)?;
        for row in &self.rows {
            write!(w, "{}\t{}\t{}", row.id, row.language, row.title)?;
            for r in &row.ranks {
                write!(w, "\t{r}")?;
            }
            writeln!(w)?;
        }
        w.flush()
    }

    pub fn write_json<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        serde_json::to_writer_pretty(&mut w, self)?;
        writeln!(w)?;
        w.flush()
    }
}

/// Builds the table in the column order of `lists`. `k` larger than the
/// universe is clamped to it.
pub fn top_table(
    lists: &[(String, RankingList)],
    base: &str,
    k: usize,
    keys: &[NodeKey],
) -> Result<TopTable> {
    let base_list = lists
        .iter()
        .find(|(name, _)| name == base)
        .map(|(_, l)| l)
        .ok_or_else(|| Error::UnknownList(base.to_owned()))?;
    let n = base_list.len();
    if lists.iter().any(|(_, l)| l.len() != n) || keys.len() != n {
        return Err(Error::UniverseMismatch);
    }
    if k == 0 {
        return Err(Error::DepthOutOfRange { j_max: k, n });
    }
    let rows = base_list
        .top(k.min(n))
        .iter()
        .map(|&id| {
            let key = &keys[id as usize];
            TopRow {
                id,
                language: key.language.clone(),
                title: key.title.clone(),
                ranks: lists.iter().map(|(_, l)| l.rank_of(id)).collect(),
            }
        })
        .collect();
    Ok(TopTable {
        base: base.to_owned(),
        columns: lists.iter().map(|(name, _)| name.clone()).collect(),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn keys(n: usize) -> Vec<NodeKey> {
        (0..n)
            .map(|i| NodeKey {
                language: "en".into(),
                title: format!("T{i}"),
            })
            .collect()
    }

    #[test]
    fn rows_follow_base_list() {
        let lists = vec![
            (
                "a".to_string(),
                RankingList::from_order(vec![2, 0, 1]).unwrap(),
            ),
            (
                "b".to_string(),
                RankingList::from_order(vec![0, 1, 2]).unwrap(),
            ),
        ];
        let t = top_table(&lists, "a", 2, &keys(3)).unwrap();
        assert_eq!(t.rows.len(), 2);
        assert_eq!((t.rows[0].id, t.rows[0].ranks.clone()), (2, vec![1, 3]));
        assert_eq!((t.rows[1].id, t.rows[1].ranks.clone()), (0, vec![2, 1]));
        let mut buf = Vec::new();
        t.write_tsv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next(), Some("# id\tlanguage\ttitle\ta\tb"));
        assert_eq!(text.lines().nth(1), Some("2\ten\tT2\t1\t3"));
    }

    #[test]
    fn unknown_base_rejected() {
        let lists = vec![("a".to_string(), RankingList::identity(2))];
        assert!(matches!(
            top_table(&lists, "z", 1, &keys(2)),
            Err(Error::UnknownList(_))
        ));
    }

    #[test]
    fn k_clamped() {
        let lists = vec![("a".to_string(), RankingList::identity(2))];
        assert_eq!(top_table(&lists, "a", 10, &keys(2)).unwrap().rows.len(), 2);
    }
}
