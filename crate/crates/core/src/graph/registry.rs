use std::collections::HashMap;

/// Identity of a node: an article title within one language edition.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeKey {
    pub language: String,
    pub title: String,
}

/// Bidirectional map between `(language, title)` and dense ids `0..N`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NodeRegistry {
    keys: Vec<NodeKey>,
    index: HashMap<String, HashMap<String, u32>>,
}

impl NodeRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a registry for one language with ids assigned in sorted title
    /// order, so ids do not depend on input order.
    pub fn from_titles<I, S>(language: &str, titles: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut titles: Vec<String> = titles.into_iter().map(Into::into).collect();
        titles.sort_unstable();
        titles.dedup();
        let mut reg = NodeRegistry::new();
        for t in titles {
            reg.insert(language, &t);
        }
        reg
    }

    /// Returns the id of `(language, title)`, registering it if needed.
    pub fn insert(&mut self, language: &str, title: &str) -> u32 {
        if let Some(id) = self.get(language, title) {
            return id;
        }
        let id = u32::try_from(self.keys.len()).expect("more than u32::MAX nodes");
        self.keys.push(NodeKey {
            language: language.to_owned(),
            title: title.to_owned(),
        });
        self.index
            .entry(language.to_owned())
            .or_default()
            .insert(title.to_owned(), id);
        id
    }

    pub fn get(&self, language: &str, title: &str) -> Option<u32> {
        self.index.get(language)?.get(title).copied()
    }

    pub fn key(&self, id: u32) -> &NodeKey {
        &self.keys[id as usize]
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn keys(&self) -> &[NodeKey] {
        &self.keys
    }

    /// Ids of every node whose title equals `title`, in any language.
    pub fn find_title(&self, title: &str) -> Vec<u32> {
        let mut ids: Vec<u32> = self
            .index
            .values()
            .filter_map(|m| m.get(title).copied())
            .collect();
        ids.sort_unstable();
        ids
    }

    pub fn languages(&self) -> Vec<&str> {
        let mut langs: Vec<&str> = self.index.keys().map(String::as_str).collect();
        langs.sort_unstable();
        langs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bijection() {
        let mut reg = NodeRegistry::from_titles("en", ["B", "A", "C", "A"]);
        assert_eq!(reg.len(), 3);
        assert_eq!(reg.get("en", "A"), Some(0));
        assert_eq!(reg.get("en", "C"), Some(2));
        assert_eq!(reg.get("fr", "A"), None);
        assert_eq!(reg.insert("fr", "A"), 3);
        assert_eq!(reg.insert("en", "A"), 0);
        for (id, key) in reg.keys().iter().enumerate() {
            assert_eq!(reg.get(&key.language, &key.title), Some(id as u32));
        }
        assert_eq!(reg.find_title("A"), vec![0, 3]);
    }
}
