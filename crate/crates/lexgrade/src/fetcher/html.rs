//! Main-text extraction from EUR-Lex HTML pages.

use ego_tree::NodeRef;
use scraper::{Html, Node};

const SKIPPED: &[&str] = &[
    "script", "style", "noscript", "template", "head", "nav", "header", "footer", "aside",
    "iframe", "svg", "form", "button", "select", "object",
];

const BLOCKS: &[&str] = &[
    "p", "div", "h1", "h2", "h3", "h4", "h5", "h6", "li", "ul", "ol", "dl", "dt", "dd", "tr",
    "table", "tbody", "thead", "section", "article", "main", "blockquote", "pre", "hr",
    "caption", "figure", "figcaption", "body", "br",
];

fn is_hidden(el: &scraper::node::Element) -> bool {
    if el.attr("hidden").is_some() || el.attr("aria-hidden") == Some("true") {
        return true;
    }
    if el.attr("role") == Some("navigation") {
        return true;
    }
    el.attr("style").is_some_and(|s| {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_ascii_lowercase();
        s.contains("display:none") || s.contains("visibility:hidden")
    })
}

struct Collector {
    paragraphs: Vec<String>,
    current: String,
    /// Depth of enclosing table cells; blocks inside a cell stay inline so
    /// that a table row reads as one paragraph.
    in_cell: usize,
}

impl Collector {
    fn flush(&mut self) {
        let collapsed = self.current.split_whitespace().collect::<Vec<_>>().join(" ");
        if !collapsed.is_empty() {
            self.paragraphs.push(collapsed);
        }
        self.current.clear();
    }

    fn walk(&mut self, node: NodeRef<'_, Node>) {
        match node.value() {
            Node::Text(t) => self.current.push_str(t),
            Node::Element(el) => {
                let name = el.name();
                if SKIPPED.contains(&name) || is_hidden(el) {
                    return;
                }
                let cell = matches!(name, "td" | "th");
                let separated = cell || BLOCKS.contains(&name);
                let block = separated && !cell && (self.in_cell == 0 || name == "tr");
                if block {
                    self.flush();
                }
                if separated {
                    self.current.push(' ');
                }
                self.in_cell += usize::from(cell);
                for child in node.children() {
                    self.walk(child);
                }
                self.in_cell -= usize::from(cell);
                if separated {
                    self.current.push(' ');
                }
                if block {
                    self.flush();
                }
            }
            _ => {
                for child in node.children() {
                    self.walk(child);
                }
            }
        }
    }
}

/// Visible body text, one paragraph per block element, paragraphs separated
/// by a blank line.
pub fn extract_text_from_html(html: &str) -> String {
    let document = Html::parse_document(html);
    let mut collector = Collector { paragraphs: Vec::new(), current: String::new(), in_cell: 0 };
    collector.walk(document.tree.root());
    collector.flush();
    collector.paragraphs.join("\n\n")
}
