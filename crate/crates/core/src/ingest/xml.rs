//! Page extraction from MediaWiki XML exports and from directories of
//! `.wiki` files. Only `(title, namespace, redirect, wikicode)` is kept.

use std::fs;
use std::io::BufRead;
use std::path::{Path, PathBuf};

use quick_xml::events::{BytesStart, Event};
use quick_xml::Reader;

use super::title::normalize;
use super::wikicode::{is_namespace_prefix, redirect_target};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Page {
    pub title: String,
    pub namespace: i64,
    /// Normalized redirect target when the page is a redirect.
    pub redirect: Option<String>,
    pub text: String,
}

impl Page {
    pub fn is_article(&self) -> bool {
        self.namespace == 0 && self.redirect.is_none()
    }
}

fn redirect_attr(e: &BytesStart<'_>, offset: u64) -> Result<Option<String>> {
    let err = |x: &dyn std::fmt::Display| Error::Xml {
        offset,
        message: x.to_string(),
    };
    match e.try_get_attribute("title").map_err(|x| err(&x))? {
        Some(a) => Ok(normalize(&a.unescape_value().map_err(|x| err(&x))?)),
        None => Ok(None),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Field {
    None,
    Title,
    Namespace,
    Text,
}

/// Streaming iterator over the `<page>` elements of an XML dump.
pub struct XmlPages<R> {
    reader: Reader<R>,
    buf: Vec<u8>,
    done: bool,
}

impl<R: BufRead> XmlPages<R> {
    pub fn new(input: R) -> Self {
        let mut reader = Reader::from_reader(input);
        reader.config_mut().trim_text(false);
        XmlPages {
            reader,
            buf: Vec::new(),
            done: false,
        }
    }

    fn err(&self, message: impl ToString) -> Error {
        Error::Xml {
            offset: self.reader.buffer_position(),
            message: message.to_string(),
        }
    }

    fn read_page(&mut self) -> Result<Option<Page>> {
        let mut in_page = false;
        let mut field = Field::None;
        let mut title = String::new();
        let mut ns = String::new();
        let mut text = String::new();
        let mut redirect = None;
        let mut is_redirect = false;
        loop {
            self.buf.clear();
            let offset = self.reader.buffer_position();
            let event = self
                .reader
                .read_event_into(&mut self.buf)
                .map_err(|e| Error::Xml {
                    offset,
                    message: e.to_string(),
                })?;
            match event {
                Event::Start(e) => match e.name().as_ref() {
                    b"page" => {
                        in_page = true;
                        title.clear();
                        ns.clear();
                        text.clear();
                        redirect = None;
                        is_redirect = false;
                    }
                    b"title" if in_page => field = Field::Title,
                    b"ns" if in_page => field = Field::Namespace,
                    b"text" if in_page => field = Field::Text,
                    b"redirect" if in_page => {
                        is_redirect = true;
                        redirect = redirect_attr(&e, self.reader.buffer_position())?;
                    }
                    _ => {}
                },
                Event::Empty(e) => {
                    if in_page && e.name().as_ref() == b"redirect" {
                        is_redirect = true;
                        redirect = redirect_attr(&e, self.reader.buffer_position())?;
                    }
                }
                Event::Text(t) => {
                    let target = match field {
                        Field::Title => &mut title,
                        Field::Namespace => &mut ns,
                        Field::Text => &mut text,
                        Field::None => continue,
                    };
                    let s = t.unescape().map_err(|e| Error::Xml {
                        offset,
                        message: e.to_string(),
                    })?;
                    target.push_str(&s);
                }
                Event::CData(c) => {
                    if field == Field::Text {
                        text.push_str(&String::from_utf8_lossy(&c));
                    }
                }
                Event::End(e) => match e.name().as_ref() {
                    b"title" | b"ns" | b"text" => field = Field::None,
                    b"page" if in_page => {
                        in_page = false;
                        let Some(title) = normalize(&title) else {
                            continue;
                        };
                        let namespace = ns.trim().parse().unwrap_or(0);
                        // dumps without the <redirect> element still carry #REDIRECT
                        if !is_redirect || redirect.is_none() {
                            redirect = redirect_target(&text);
                        }
                        return Ok(Some(Page {
                            title,
                            namespace,
                            redirect,
                            text: std::mem::take(&mut text),
                        }));
                    }
                    _ => {}
                },
                Event::Eof => {
                    if in_page {
                        return Err(self.err("input ends inside <page>"));
                    }
                    return Ok(None);
                }
                _ => {}
            }
        }
    }
}

impl<R: BufRead> Iterator for XmlPages<R> {
    type Item = Result<Page>;

    fn next(&mut self) -> Option<Result<Page>> {
        if self.done {
            return None;
        }
        match self.read_page() {
            Ok(Some(p)) => Some(Ok(p)),
            Ok(None) => {
                self.done = true;
                None
            }
            Err(e) => {
                self.done = true;
                Some(Err(e))
            }
        }
    }
}

const WIKI_EXTENSIONS: &[&str] = &["wiki", "wikitext", "txt"];

/// Lists the page files of a directory corpus in file-name order. Each file
/// holds the wikicode of one page; its stem is the page title.
pub fn read_wiki_dir(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for entry in fs::read_dir(dir).map_err(|e| Error::file(dir, e))? {
        let path = entry.map_err(|e| Error::file(dir, e))?.path();
        let ext = path
            .extension()
            .and_then(|e| e.to_str())
            .unwrap_or_default();
        if path.is_file() && WIKI_EXTENSIONS.contains(&ext) {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

impl Page {
    /// Loads one page of a directory corpus.
    pub fn from_file(path: &Path) -> Result<Option<Page>> {
        let stem = path
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or_default();
        let Some(title) = normalize(stem) else {
            return Ok(None);
        };
        let text = fs::read_to_string(path).map_err(|e| Error::file(path, e))?;
        let namespace = match title.split_once(':') {
            Some((prefix, _)) if is_namespace_prefix(prefix) => -1,
            _ => 0,
        };
        Ok(Some(Page {
            redirect: redirect_target(&text),
            title,
            namespace,
            text,
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const DUMP: &str = r#"<mediawiki xmlns="http://www.mediawiki.org/xml/export-0.10/">
  <siteinfo><sitename>Wikipedia</sitename></siteinfo>
  <page>
    <title>Paris</title>
    <ns>0</ns>
    <id>1</id>
    <revision><id>9</id><text xml:space="preserve">Capital of [[France]] &amp; [[Île-de-France|region]]</text></revision>
  </page>
  <page>
    <title>City of light</title>
    <ns>0</ns>
    <redirect title="Paris" />
    <revision><text>#REDIRECT [[Paris]]</text></revision>
  </page>
  <page>
    <title>Category:Cities</title>
    <ns>14</ns>
    <revision><text>[[Paris]]</text></revision>
  </page>
</mediawiki>"#;

    #[test]
    fn pages_from_dump() {
        let pages: Vec<Page> = XmlPages::new(DUMP.as_bytes())
            .collect::<Result<_>>()
            .unwrap();
        assert_eq!(pages.len(), 3);
        assert_eq!(pages[0].title, "Paris");
        assert!(pages[0].is_article());
        assert_eq!(
            pages[0].text,
            "Capital of [[France]] & [[Île-de-France|region]]"
        );
        assert_eq!(pages[1].redirect.as_deref(), Some("Paris"));
        assert!(!pages[1].is_article());
        assert_eq!(pages[2].namespace, 14);
    }

    #[test]
    fn truncated_dump_is_an_error() {
        let cut = &DUMP[..200];
        let res: Vec<Result<Page>> = XmlPages::new(cut.as_bytes()).collect();
        assert!(res.last().unwrap().is_err());
    }
}
