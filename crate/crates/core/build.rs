//! Compiles the hyphenation pattern file into a sorted static table.

use std::collections::BTreeMap;
use std::env;
use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

const IGNORED: &[&str] = &[
    "%",
    "#",
    "LEFTHYPHENMIN",
    "RIGHTHYPHENMIN",
    "COMPOUNDLEFTHYPHENMIN",
    "COMPOUNDRIGHTHYPHENMIN",
];

fn main() {
    let src = PathBuf::from(env::var("CARGO_MANIFEST_DIR").unwrap()).join("data/hyph_en_US.dic");
    println!("cargo:rerun-if-changed={}", src.display());
    let raw = fs::read_to_string(&src).expect("read pattern file");

    // key -> (offset of first non-zero weight, trimmed weights)
    let mut patterns: BTreeMap<String, (usize, Vec<u8>)> = BTreeMap::new();
    for line in raw.lines().skip(1) {
        let line = line.trim();
        if line.is_empty() || IGNORED.iter().any(|p| line.starts_with(p)) {
            continue;
        }
        let mut key = String::new();
        let mut weights = Vec::new();
        let mut pending = 0u8;
        for c in line.chars() {
            if let Some(d) = c.to_digit(10) {
                pending = d as u8;
            } else {
                weights.push(pending);
                pending = 0;
                key.push(c);
            }
        }
        weights.push(pending);
        let Some(start) = weights.iter().position(|&w| w != 0) else {
            continue;
        };
        let end = weights.iter().rposition(|&w| w != 0).unwrap() + 1;
        patterns.insert(key, (start, weights[start..end].to_vec()));
    }

    let max_len = patterns.keys().map(|k| k.chars().count()).max().unwrap_or(0);
    let mut out = String::new();
    writeln!(out, "pub(crate) const MAX_PATTERN_CHARS: usize = {max_len};").unwrap();
    writeln!(out, "pub(crate) static PATTERNS: &[(&str, u8, &[u8])] = &[").unwrap();
    for (key, (start, weights)) in &patterns {
        writeln!(out, "    ({key:?}, {start}, &{weights:?}),").unwrap();
    }
    writeln!(out, "];").unwrap();

    let dest = PathBuf::from(env::var("OUT_DIR").unwrap()).join("hyph_en_us.rs");
    fs::write(dest, out).expect("write pattern table");
}
