//! Text cleaning ahead of segmentation.

use regex::{Regex, RegexBuilder};

const PAGE_REF: &str = r"[lc]\s?\d+(?:\s?[a-z])?/\d+";
const DATE: &str = r"\d{1,2}\.\d{1,2}\.\d{4}";

/// Official Journal layout lines: mastheads, page references, publication
/// dates, language tags and bare page numbers.
pub fn default_patterns() -> Vec<String> {
    let part = format!(r"(?:{PAGE_REF}|en|{DATE})");
    vec![
        format!(
            r"(?:{part}\s+)*official journal of the european (?:union|communities)(?:\s+{part})*"
        ),
        PAGE_REF.to_string(),
        DATE.to_string(),
        r"en".to_string(),
        r"\(?text with eea relevance\)?\.?".to_string(),
        r"(?:page\s+)?\d+(?:\s*(?:/|of)\s*\d+)?".to_string(),
    ]
}

/// Lines (and paragraphs) dropped during cleaning. Patterns are matched
/// case-insensitively against the whole whitespace-collapsed line.
#[derive(Debug, Clone)]
pub struct Boilerplate {
    patterns: Vec<Regex>,
}

impl Default for Boilerplate {
    fn default() -> Self {
        Self::new(default_patterns()).expect("default patterns compile")
    }
}

impl Boilerplate {
    pub fn new<I, S>(patterns: I) -> Result<Self, regex::Error>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut b = Self { patterns: Vec::new() };
        b.extend(patterns)?;
        Ok(b)
    }

    pub fn none() -> Self {
        Self { patterns: Vec::new() }
    }

    pub fn extend<I, S>(&mut self, patterns: I) -> Result<(), regex::Error>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        for p in patterns {
            let anchored = format!("^(?:{})$", p.as_ref());
            self.patterns.push(RegexBuilder::new(&anchored).case_insensitive(true).build()?);
        }
        Ok(())
    }

    pub fn is_match(&self, line: &str) -> bool {
        self.patterns.iter().any(|r| r.is_match(line))
    }
}

fn is_invisible(c: char) -> bool {
    matches!(c, '\u{AD}' | '\u{200B}'..='\u{200D}' | '\u{2060}' | '\u{FEFF}')
}

/// Normalizes whitespace, strips control characters and drops boilerplate.
///
/// Lines inside a paragraph are joined by single spaces; blank lines become
/// paragraph breaks (`"\n\n"`). The output is a fixed point.
pub fn clean_text(raw: &str, boilerplate: &Boilerplate) -> String {
    let mut text = String::with_capacity(raw.len());
    let mut chars = raw.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '\r' => {
                if chars.peek() != Some(&'\n') {
                    text.push('\n');
                }
            }
            '\n' => text.push('\n'),
            c if c.is_whitespace() => text.push(' '),
            c if c.is_control() || is_invisible(c) => {}
            c => text.push(c),
        }
    }

    let mut paragraphs: Vec<String> = Vec::new();
    let mut current: Vec<String> = Vec::new();
    let mut flush = |current: &mut Vec<String>| {
        if !current.is_empty() {
            let paragraph = current.join(" ");
            current.clear();
            if !boilerplate.is_match(&paragraph) {
                paragraphs.push(paragraph);
            }
        }
    };
    for line in text.split('\n') {
        let collapsed = line.split_whitespace().collect::<Vec<_>>().join(" ");
        if collapsed.is_empty() {
            flush(&mut current);
        } else if !boilerplate.is_match(&collapsed) {
            current.push(collapsed);
        }
    }
    flush(&mut current);
    paragraphs.join("\n\n")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn control_characters_and_spaces() {
        assert_eq!(clean_text("a\u{0000}  b", &Boilerplate::default()), "a b");
        assert_eq!(clean_text("pro\u{AD}cess\tnow", &Boilerplate::none()), "process now");
    }

    #[test]
    fn paragraphs_are_preserved() {
        let raw = "First line\r\ncontinues here.\r\n\r\n\r\n  Second   paragraph.  \n";
        assert_eq!(
            clean_text(raw, &Boilerplate::none()),
            "First line continues here.\n\nSecond paragraph."
        );
    }

    #[test]
    fn masthead_lines_are_dropped() {
        let raw = "Whereas the Union acts.\n\nL 119/1\nEN Official Journal of the European Union 4.5.2016\n\nArticle 1 applies.\n(Text with EEA relevance)\n12\n";
        assert_eq!(
            clean_text(raw, &Boilerplate::default()),
            "Whereas the Union acts.\n\nArticle 1 applies."
        );
    }

    #[test]
    fn masthead_split_over_lines() {
        let raw = "Text.\n\nOfficial Journal\nof the European Union\n\nMore.";
        assert_eq!(clean_text(raw, &Boilerplate::default()), "Text.\n\nMore.");
    }

    #[test]
    fn prose_mentioning_the_journal_is_kept() {
        let raw = "It shall be published in the Official Journal of the European Union.";
        assert_eq!(clean_text(raw, &Boilerplate::default()), raw);
    }

    #[test]
    fn user_patterns() {
        let mut b = Boilerplate::default();
        b.extend([r"draft\s+v\d+"]).unwrap();
        assert_eq!(clean_text("DRAFT v2\nBody.", &b), "Body.");
        assert!(Boilerplate::new(["("]).is_err());
    }

    #[test]
    fn clean_text_is_idempotent() {
        let once = clean_text("A  b\n\nc\n\n\nd e.", &Boilerplate::default());
        assert_eq!(clean_text(&once, &Boilerplate::default()), once);
    }
}
