//! Title normalization shared by every parser.
//!
//! Underscores become spaces, runs of whitespace collapse to one space,
//! leading/trailing whitespace is trimmed and the first character is
//! uppercased (MediaWiki's default `$wgCapitalLinks`). The rest of the title
//! keeps its case.

/// Normalizes `raw`; returns `None` when nothing is left.
pub fn normalize(raw: &str) -> Option<String> {
    let mut out = String::with_capacity(raw.len());
    let mut pending_space = false;
    for ch in raw.chars() {
        let ch = if ch == '_' { ' ' } else { ch };
        if ch.is_whitespace() {
            pending_space = !out.is_empty();
            continue;
        }
        if pending_space {
            out.push(' ');
            pending_space = false;
        }
        if out.is_empty() {
            out.extend(ch.to_uppercase());
        } else {
            out.push(ch);
        }
    }
    if out.is_empty() {
        None
    } else {
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::normalize;

    #[test]
    fn underscores_and_case() {
        assert_eq!(normalize("main_page").as_deref(), Some("Main page"));
        assert_eq!(
            normalize("  New__York   City ").as_deref(),
            Some("New York City")
        );
        assert_eq!(normalize("iPhone").as_deref(), Some("IPhone"));
        assert_eq!(normalize("élan").as_deref(), Some("Élan"));
    }

    #[test]
    fn empty_is_none() {
        assert_eq!(normalize(""), None);
        assert_eq!(normalize(" _ \t"), None);
    }

    #[test]
    fn idempotent() {
        for s in ["a_b", "Zürich  city", "x", "Über_alles"] {
            let once = normalize(s).unwrap();
            assert_eq!(normalize(&once).unwrap(), once);
        }
    }
}
