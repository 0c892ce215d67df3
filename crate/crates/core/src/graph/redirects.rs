use std::collections::{HashMap, HashSet};

use crate::ingest::{RawLinkRecord, RedirectRecord};

/// Longest redirect chain that is followed; longer chains are treated like
/// cycles.
pub const MAX_REDIRECT_HOPS: usize = 16;

/// Flattened redirect table for one language: every alias maps directly to
/// its canonical title, and canonical titles are never keys.
#[derive(Debug, Clone, Default)]
pub struct RedirectMap {
    resolved: HashMap<String, String>,
    cycle_members: HashSet<String>,
    /// Aliases whose chain exceeded [`MAX_REDIRECT_HOPS`].
    pub over_cap: u64,
}

impl RedirectMap {
    pub fn build(records: impl IntoIterator<Item = RedirectRecord>) -> Self {
        let mut raw: HashMap<String, String> = HashMap::new();
        for r in records {
            // first definition wins
            raw.entry(r.from_title).or_insert(r.to_title);
        }
        let mut map = RedirectMap::default();
        let mut path: Vec<&str> = Vec::with_capacity(MAX_REDIRECT_HOPS + 1);
        for start in raw.keys() {
            path.clear();
            path.push(start);
            let mut cur: &str = start;
            let mut outcome = None;
            for _ in 0..MAX_REDIRECT_HOPS {
                match raw.get(cur) {
                    None => {
                        outcome = Some(Ok(cur));
                        break;
                    }
                    Some(next) => {
                        if let Some(pos) = path.iter().position(|p| p == next) {
                            // cycle: members stay themselves, feeders stop at the entry point
                            outcome = Some(if pos == 0 { Err(()) } else { Ok(path[pos]) });
                            if pos == 0 {
                                map.cycle_members.insert(start.clone());
                            }
                            break;
                        }
                        path.push(next);
                        cur = next;
                    }
                }
            }
            let outcome = match outcome {
                Some(o) => o,
                // the loop ran out of hops; one more lookup tells whether the chain ended exactly
                None if !raw.contains_key(cur) => Ok(cur),
                None => {
                    map.over_cap += 1;
                    Err(())
                }
            };
            if let Ok(end) = outcome {
                if end != start.as_str() {
                    map.resolved.insert(start.clone(), end.to_owned());
                }
            }
        }
        map
    }

    pub fn resolve<'a>(&'a self, title: &'a str) -> &'a str {
        self.resolved.get(title).map_or(title, String::as_str)
    }

    pub fn is_cycle_member(&self, title: &str) -> bool {
        self.cycle_members.contains(title)
    }

    pub fn cycle_members(&self) -> usize {
        self.cycle_members.len()
    }

    pub fn len(&self) -> usize {
        self.resolved.len()
    }

    pub fn is_empty(&self) -> bool {
        self.resolved.is_empty()
    }
}

/// Iterator adaptor mapping both endpoints of every record to canonical
/// titles and dropping records that collapse into self-loops.
pub struct ResolveRedirects<'a, I> {
    inner: I,
    map: &'a RedirectMap,
    pub self_loops: u64,
    pub cycle_hits: u64,
}

impl<I: Iterator<Item = RawLinkRecord>> Iterator for ResolveRedirects<'_, I> {
    type Item = RawLinkRecord;

    fn next(&mut self) -> Option<RawLinkRecord> {
        for mut rec in self.inner.by_ref() {
            for t in [&rec.source, &rec.target] {
                if self.map.is_cycle_member(t) {
                    self.cycle_hits += 1;
                }
            }
            let source = self.map.resolve(&rec.source);
            if source != rec.source {
                rec.source = source.to_owned();
            }
            let target = self.map.resolve(&rec.target);
            if target != rec.target {
                rec.target = target.to_owned();
            }
            if rec.source == rec.target {
                self.self_loops += 1;
                continue;
            }
            return Some(rec);
        }
        None
    }
}

pub fn resolve_redirects<I>(
    records: I,
    redirects: &RedirectMap,
) -> ResolveRedirects<'_, I::IntoIter>
where
    I: IntoIterator<Item = RawLinkRecord>,
{
    ResolveRedirects {
        inner: records.into_iter(),
        map: redirects,
        self_loops: 0,
        cycle_hits: 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn redirects(pairs: &[(&str, &str)]) -> RedirectMap {
        RedirectMap::build(pairs.iter().map(|(f, t)| RedirectRecord {
            from_title: f.to_string(),
            to_title: t.to_string(),
        }))
    }

    fn link(s: &str, t: &str) -> RawLinkRecord {
        RawLinkRecord {
            source: s.into(),
            target: t.into(),
            weight: 1,
        }
    }

    fn run(map: &RedirectMap, recs: Vec<RawLinkRecord>) -> (Vec<RawLinkRecord>, u64, u64) {
        let mut it = resolve_redirects(recs, map);
        let out: Vec<_> = it.by_ref().collect();
        (out, it.self_loops, it.cycle_hits)
    }

    #[test]
    fn single_hop() {
        let map = redirects(&[("USA", "United States")]);
        let (out, ..) = run(&map, vec![link("USA", "France")]);
        assert_eq!(out, vec![link("United States", "France")]);
    }

    #[test]
    fn chain_to_fixed_point() {
        let map = redirects(&[("A", "B"), ("B", "C")]);
        assert_eq!(run(&map, vec![link("X", "A")]).0, vec![link("X", "C")]);
    }

    #[test]
    fn cycle_members_are_canonical() {
        let map = redirects(&[("A", "B"), ("B", "A"), ("F", "A")]);
        let (out, _, hits) = run(&map, vec![link("X", "A")]);
        assert_eq!(out, vec![link("X", "A")]);
        assert_eq!(hits, 1);
        assert_eq!(map.cycle_members(), 2);
        // a title feeding into the cycle stops at its entry point
        assert_eq!(map.resolve("F"), "A");
    }

    #[test]
    fn chain_cap() {
        // 0 -> 1 -> ... -> 17 has 17 hops from "0": over the cap
        let names: Vec<String> = (0..=17).map(|i| format!("T{i}")).collect();
        let pairs: Vec<(&str, &str)> = names
            .windows(2)
            .map(|w| (w[0].as_str(), w[1].as_str()))
            .collect();
        let map = redirects(&pairs);
        assert_eq!(map.resolve("T0"), "T0");
        assert_eq!(map.resolve("T1"), "T17");
        assert_eq!(map.over_cap, 1);
    }

    #[test]
    fn resolved_self_loops_are_dropped() {
        let map = redirects(&[("USA", "United States")]);
        let (out, loops, _) = run(&map, vec![link("United States", "USA"), link("A", "B")]);
        assert_eq!(out, vec![link("A", "B")]);
        assert_eq!(loops, 1);
    }

    proptest::proptest! {
        #[test]
        fn idempotent(edges in proptest::collection::vec((0u8..12, 0u8..12), 0..20),
                      links in proptest::collection::vec((0u8..12, 0u8..12), 0..20)) {
            let pairs: Vec<(String, String)> = edges
                .iter()
                .filter(|(a, b)| a != b)
                .map(|(a, b)| (format!("N{a}"), format!("N{b}")))
                .collect();
            let map = RedirectMap::build(pairs.iter().map(|(f, t)| RedirectRecord {
                from_title: f.clone(),
                to_title: t.clone(),
            }));
            let recs: Vec<_> = links.iter().map(|(a, b)| link(&format!("N{a}"), &format!("N{b}"))).collect();
            let once: Vec<_> = resolve_redirects(recs, &map).collect();
            let twice: Vec<_> = resolve_redirects(once.clone(), &map).collect();
            proptest::prop_assert_eq!(once, twice);
        }
    }
}
