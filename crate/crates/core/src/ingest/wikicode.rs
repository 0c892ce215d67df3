//! Link extraction from raw wikicode.
//!
//! Only explicit `[[...]]` links are harvested: templates are not expanded,
//! and anything inside `<nowiki>` or an HTML comment is invisible. Targets
//! that point outside the article namespace (files, categories, interwiki
//! prefixes, ...) are dropped.

use super::title::normalize;
use super::RawLinkRecord;

/// Namespace names and aliases (lowercased) for the editions this crate was
/// built around, plus the common interwiki project prefixes.
const NAMESPACE_PREFIXES: &[&str] = &[
    // canonical / English
    "media",
    "special",
    "talk",
    "user",
    "user talk",
    "wikipedia",
    "wikipedia talk",
    "project",
    "project talk",
    "file",
    "file talk",
    "image",
    "image talk",
    "mediawiki",
    "mediawiki talk",
    "template",
    "template talk",
    "help",
    "help talk",
    "category",
    "category talk",
    "portal",
    "portal talk",
    "draft",
    "draft talk",
    "module",
    "module talk",
    "book",
    "book talk",
    "timedtext",
    "timedtext talk",
    "gadget",
    "gadget definition",
    "education program",
    "topic",
    "wp",
    "wt",
    "cat",
    "mos",
    "h",
    "t",
    "p",
    "u",
    "ut",
    "tm",
    // interwiki projects
    "w",
    "wikt",
    "wiktionary",
    "commons",
    "c",
    "d",
    "wikidata",
    "s",
    "wikisource",
    "q",
    "wikiquote",
    "n",
    "wikinews",
    "b",
    "wikibooks",
    "v",
    "wikiversity",
    "voy",
    "wikivoyage",
    "species",
    "wikispecies",
    "m",
    "meta",
    "mw",
    "mediawikiwiki",
    "phab",
    "foundation",
    "wmf",
    "incubator",
    "outreach",
    // de
    "datei",
    "bild",
    "kategorie",
    "vorlage",
    "benutzer",
    "benutzerin",
    "hilfe",
    "diskussion",
    "spezial",
    "medium",
    "modul",
    // es
    "archivo",
    "imagen",
    "categoría",
    "plantilla",
    "usuario",
    "usuaria",
    "ayuda",
    "discusión",
    "especial",
    "anexo",
    "módulo",
    "wikiproyecto",
    // fr
    "fichier",
    "catégorie",
    "modèle",
    "utilisateur",
    "utilisatrice",
    "aide",
    "portail",
    "discussion",
    "spécial",
    "projet",
    "référence",
    "wikipédia",
    // it
    "immagine",
    "categoria",
    "utente",
    "aiuto",
    "portale",
    "discussione",
    "speciale",
    "progetto",
    "modulo",
    // pl
    "plik",
    "grafika",
    "kategoria",
    "szablon",
    "użytkownik",
    "użytkowniczka",
    "wikipedysta",
    "pomoc",
    "dyskusja",
    "specjalna",
    "wikiprojekt",
    "moduł",
    // pt
    "ficheiro",
    "arquivo",
    "imagem",
    "predefinição",
    "usuário",
    "utilizador",
    "ajuda",
    "discussão",
    "wikiprojeto",
    // ru
    "файл",
    "изображение",
    "категория",
    "шаблон",
    "участник",
    "участница",
    "справка",
    "портал",
    "обсуждение",
    "служебная",
    "проект",
    "модуль",
    "википедия",
    // ja
    "ファイル",
    "画像",
    "カテゴリ",
    "テンプレート",
    "利用者",
    "ヘルプ",
    "ポータル",
    "ノート",
    "特別",
    "プロジェクト",
    "モジュール",
    // zh
    "文件",
    "檔案",
    "档案",
    "图像",
    "圖像",
    "分类",
    "分類",
    "模板",
    "用户",
    "用戶",
    "帮助",
    "幫助",
    "主题",
    "主題",
    "讨论",
    "討論",
    "特殊",
    "维基百科",
    "維基百科",
    "模块",
    // fa
    "پرونده",
    "تصویر",
    "رده",
    "الگو",
    "کاربر",
    "راهنما",
    "درگاه",
    "بحث",
    "ویژه",
    "ویکی‌پدیا",
    "پودمان",
];

/// Wikipedia language codes recognised as interwiki prefixes.
const LANGUAGE_PREFIXES: &[&str] = &[
    "af",
    "am",
    "an",
    "ar",
    "arz",
    "as",
    "ast",
    "az",
    "azb",
    "ba",
    "bar",
    "be",
    "bg",
    "bn",
    "bo",
    "br",
    "bs",
    "ca",
    "ce",
    "ceb",
    "ckb",
    "cs",
    "cv",
    "cy",
    "da",
    "de",
    "el",
    "en",
    "eo",
    "es",
    "et",
    "eu",
    "fa",
    "fi",
    "fo",
    "fr",
    "fy",
    "ga",
    "gl",
    "gu",
    "he",
    "hi",
    "hr",
    "ht",
    "hu",
    "hy",
    "ia",
    "id",
    "io",
    "is",
    "it",
    "ja",
    "jv",
    "ka",
    "kk",
    "km",
    "kn",
    "ko",
    "ku",
    "ky",
    "la",
    "lb",
    "li",
    "lmo",
    "lt",
    "lv",
    "mg",
    "min",
    "mk",
    "ml",
    "mn",
    "mr",
    "ms",
    "my",
    "mzn",
    "nap",
    "nds",
    "ne",
    "new",
    "nl",
    "nn",
    "no",
    "oc",
    "or",
    "pa",
    "pl",
    "pms",
    "pnb",
    "ps",
    "pt",
    "qu",
    "ro",
    "ru",
    "sa",
    "sah",
    "scn",
    "sco",
    "sh",
    "si",
    "simple",
    "sk",
    "sl",
    "sq",
    "sr",
    "su",
    "sv",
    "sw",
    "ta",
    "te",
    "tg",
    "th",
    "tl",
    "tr",
    "tt",
    "uk",
    "ur",
    "uz",
    "vec",
    "vi",
    "vo",
    "wa",
    "war",
    "yi",
    "yo",
    "zh",
    "zh-yue",
    "yue",
    "zh-min-nan",
    "zh-classical",
];

const TALK_WORDS: &[&str] = &[
    "talk",
    "diskussion",
    "discussion",
    "discusión",
    "discussione",
    "dyskusja",
    "discussão",
    "обсуждение",
    "ノート",
    "討論",
    "讨论",
    "بحث",
];

const REDIRECT_KEYWORDS: &[&str] = &[
    "#redirect",
    "#weiterleitung",
    "#redirection",
    "#redirección",
    "#rinvia",
    "#przekieruj",
    "#patrz",
    "#redirecionamento",
    "#перенаправление",
    "#重定向",
    "#転送",
    "#リダイレクト",
    "#تغییرمسیر",
    "#تغییر_مسیر",
];

/// True when `prefix` (the text before the first colon of a link target)
/// names a namespace or an interwiki destination.
pub fn is_namespace_prefix(prefix: &str) -> bool {
    let key: String = prefix
        .trim()
        .replace('_', " ")
        .split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
        .to_lowercase();
    if key.is_empty() {
        return false;
    }
    if NAMESPACE_PREFIXES.contains(&key.as_str()) || LANGUAGE_PREFIXES.contains(&key.as_str()) {
        return true;
    }
    let mut words = key.split(' ');
    let first = words.next().unwrap_or_default();
    let last = key.rsplit(' ').next().unwrap_or_default();
    first != last && NAMESPACE_PREFIXES.contains(&first) && TALK_WORDS.contains(&last)
}

#[derive(Debug, PartialEq, Eq)]
enum Target {
    Article(String),
    NonArticle,
    Malformed,
}

fn classify_target(content: &str) -> Target {
    let raw = content.split('|').next().unwrap_or_default();
    let raw = raw.split('#').next().unwrap_or_default().trim();
    if raw
        .chars()
        .any(|c| matches!(c, '[' | ']' | '{' | '}' | '<' | '>' | '\n' | '\r'))
    {
        return Target::Malformed;
    }
    if raw.starts_with(':') || raw.starts_with('/') {
        return Target::NonArticle;
    }
    if let Some((prefix, _)) = raw.split_once(':') {
        if is_namespace_prefix(prefix) {
            return Target::NonArticle;
        }
    }
    match normalize(raw) {
        Some(title) => Target::Article(title),
        None => Target::NonArticle,
    }
}

fn find_ci(haystack: &str, from: usize, needle: &str) -> Option<usize> {
    let hay = haystack.as_bytes();
    let pat = needle.as_bytes();
    if hay.len() < pat.len() {
        return None;
    }
    (from..=hay.len() - pat.len()).find(|&i| hay[i..i + pat.len()].eq_ignore_ascii_case(pat))
}

/// Removes HTML comments and `<nowiki>` regions. Nowiki content is replaced
/// by a single DEL character so brackets on either side never pair up.
fn strip_invisible(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut pos = 0;
    loop {
        let comment = text[pos..].find("<!--").map(|i| i + pos);
        let nowiki = find_ci(text, pos, "<nowiki");
        let next = match (comment, nowiki) {
            (Some(c), Some(n)) => c.min(n),
            (Some(c), None) => c,
            (None, Some(n)) => n,
            (None, None) => break,
        };
        out.push_str(&text[pos..next]);
        if Some(next) == comment {
            pos = match text[next + 4..].find("-->") {
                Some(end) => next + 4 + end + 3,
                None => text.len(),
            };
        } else {
            let Some(tag_end) = text[next..].find('>').map(|i| next + i) else {
                pos = text.len();
                break;
            };
            out.push('\u{7f}');
            if text[..tag_end].ends_with('/') {
                pos = tag_end + 1;
            } else {
                pos = match find_ci(text, tag_end, "</nowiki>") {
                    Some(close) => close + "</nowiki>".len(),
                    None => text.len(),
                };
            }
        }
    }
    out.push_str(&text[pos.min(text.len())..]);
    out
}

/// Iterator over the article links of one page. Counters are final once the
/// iterator is exhausted.
#[derive(Debug)]
pub struct WikiLinks {
    source: Option<String>,
    text: String,
    pos: usize,
    open: Vec<usize>,
    finished: bool,
    pub malformed: u64,
    pub non_article: u64,
}

impl Iterator for WikiLinks {
    type Item = RawLinkRecord;

    fn next(&mut self) -> Option<RawLinkRecord> {
        let source = self.source.as_ref()?;
        let bytes = self.text.as_bytes();
        while self.pos + 1 < bytes.len() {
            let i = self.pos;
            if bytes[i] == b'[' && bytes[i + 1] == b'[' {
                let run = bytes[i..].iter().take_while(|&&b| b == b'[').count();
                self.open.push(i + run - 2);
                self.pos = i + run;
            } else if bytes[i] == b']' && bytes[i + 1] == b']' {
                self.pos = i + 2;
                let Some(start) = self.open.pop() else {
                    self.malformed += 1;
                    continue;
                };
                match classify_target(&self.text[start + 2..i]) {
                    Target::Article(target) => {
                        return Some(RawLinkRecord {
                            source: source.clone(),
                            target,
                            weight: 1,
                        });
                    }
                    Target::NonArticle => self.non_article += 1,
                    Target::Malformed => self.malformed += 1,
                }
            } else {
                self.pos += 1;
            }
        }
        if !self.finished {
            self.finished = true;
            self.malformed += self.open.len() as u64;
            self.open.clear();
        }
        None
    }
}

/// Extracts one record per `[[target]]` / `[[target|label]]` occurrence in
/// `wikicode`, with `page_title` as the source.
pub fn parse_wikicode_links(page_title: &str, wikicode: &str) -> WikiLinks {
    WikiLinks {
        source: normalize(page_title),
        text: strip_invisible(wikicode),
        pos: 0,
        open: Vec::new(),
        finished: false,
        malformed: 0,
        non_article: 0,
    }
}

/// Returns the normalized redirect target when `wikicode` is a redirect page
/// (`#REDIRECT [[Target]]` or a localized keyword).
pub fn redirect_target(wikicode: &str) -> Option<String> {
    let head = wikicode.trim_start();
    let lower: String = head.chars().take(32).collect::<String>().to_lowercase();
    let keyword = REDIRECT_KEYWORDS.iter().find(|k| lower.starts_with(*k))?;
    let skip: usize = head
        .chars()
        .take(keyword.chars().count())
        .map(char::len_utf8)
        .sum();
    let rest = &head[skip..];
    let open = rest.find("[[")?;
    let close = rest[open..].find("]]")? + open;
    match classify_target(&rest[open + 2..close]) {
        Target::Article(t) => Some(t),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn targets(page: &str, text: &str) -> (Vec<String>, u64, u64) {
        let mut it = parse_wikicode_links(page, text);
        let v: Vec<String> = it.by_ref().map(|r| r.target).collect();
        (v, it.malformed, it.non_article)
    }

    #[test]
    fn piped_and_plain_links() {
        let recs: Vec<_> =
            parse_wikicode_links("X", "see [[France|French]] and [[Germany]]").collect();
        assert_eq!(
            recs,
            vec![
                RawLinkRecord {
                    source: "X".into(),
                    target: "France".into(),
                    weight: 1
                },
                RawLinkRecord {
                    source: "X".into(),
                    target: "Germany".into(),
                    weight: 1
                },
            ]
        );
    }

    #[test]
    fn fragment_is_stripped() {
        assert_eq!(targets("X", "[[Paris#History]]").0, vec!["Paris"]);
        // a bare section link points at the page itself
        assert_eq!(targets("X", "[[#History]]"), (vec![], 0, 1));
    }

    #[test]
    fn namespaces_are_excluded() {
        assert_eq!(
            targets("X", "[[File:Map.png]] [[Category:Cities]]"),
            (vec![], 0, 2)
        );
        assert_eq!(
            targets("X", "[[:Category:Cities]] [[fr:Paris]] [[wikt:cat]]")
                .0
                .len(),
            0
        );
        assert_eq!(
            targets("X", "[[Kategorie:Stadt]] [[User talk:Bob]]")
                .0
                .len(),
            0
        );
        // a colon inside a normal title is fine
        assert_eq!(
            targets("X", "[[Star Wars: Episode IV]]").0,
            vec!["Star Wars: Episode IV"]
        );
    }

    #[test]
    fn duplicate_occurrences_each_yield() {
        assert_eq!(targets("X", "[[A]] [[a]] [[A|x]]").0, vec!["A", "A", "A"]);
    }

    #[test]
    fn nested_links_in_file_captions() {
        let (t, m, n) = targets("X", "[[File:X.jpg|thumb|A [[Paris]] view]]");
        assert_eq!((t, m, n), (vec!["Paris".to_string()], 0, 1));
    }

    #[test]
    fn unbalanced_brackets_are_counted() {
        let (t, m, _) = targets("X", "[[Broken and [[Fine]] then ]] stray ]] [[open");
        // "Broken and [[Fine]] then " closes the first link with a bracket in its target
        assert_eq!(t, vec!["Fine"]);
        assert_eq!(m, 3);
        let (t, m, _) = targets("X", "[[A\nB]] [[C]]");
        assert_eq!((t, m), (vec!["C".to_string()], 1));
    }

    #[test]
    fn triple_brackets() {
        assert_eq!(targets("X", "[[[Paris]]]").0, vec!["Paris"]);
    }

    #[test]
    fn comments_and_nowiki_hide_links() {
        let text =
            "<!-- [[Hidden]] --> <nowiki>[[Literal]]</nowiki> <NoWiki/>[[Shown]] [<!---->[Joined]]";
        assert_eq!(targets("X", text).0, vec!["Shown", "Joined"]);
        assert_eq!(targets("X", "[[A]] <!-- unterminated [[B]]").0, vec!["A"]);
    }

    #[test]
    fn templates_are_not_expanded() {
        assert_eq!(
            targets("X", "{{Navbox|[[Inside]]}} {{Cities}}").0,
            vec!["Inside"]
        );
    }

    #[test]
    fn redirect_pages() {
        assert_eq!(
            redirect_target("#REDIRECT [[United States]]").as_deref(),
            Some("United States")
        );
        assert_eq!(
            redirect_target("  #redirect[[usa#History]]").as_deref(),
            Some("Usa")
        );
        assert_eq!(
            redirect_target("#WEITERLEITUNG [[Berlin]]").as_deref(),
            Some("Berlin")
        );
        assert_eq!(redirect_target("Text [[A]]"), None);
    }

    #[test]
    fn namespace_prefix_rules() {
        assert!(is_namespace_prefix("File"));
        assert!(is_namespace_prefix("category"));
        assert!(is_namespace_prefix("Wikipedia_talk"));
        assert!(is_namespace_prefix("Benutzer Diskussion"));
        assert!(is_namespace_prefix("en"));
        assert!(!is_namespace_prefix("Star Wars"));
        assert!(!is_namespace_prefix(""));
    }

    proptest::proptest! {
        #[test]
        fn targets_never_carry_forbidden_parts(s in "[\\[\\]|#:a-zA-Z ]{0,60}") {
            for rec in parse_wikicode_links("P", &s) {
                proptest::prop_assert!(!rec.target.contains('#'));
                proptest::prop_assert!(!rec.target.contains('|'));
                if let Some((prefix, _)) = rec.target.split_once(':') {
                    proptest::prop_assert!(!is_namespace_prefix(prefix));
                }
            }
        }
    }
}
