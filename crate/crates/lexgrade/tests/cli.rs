mod common;

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use common::{close, corpus_dir, fixtures, stub_corpus, Expected};
use lexgrade::core::per_year_aggregate;
use lexgrade::report::{parse_year_report, Results, StatsReport};

fn lexgrade(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lexgrade"))
        .args(args)
        .env_remove("LEXGRADE_BASE_URL")
        .output()
        .unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn analyze(out: &Path, extra: &[&str]) -> Output {
    let manifest = corpus_dir().join("manifest.csv");
    let corpus = corpus_dir();
    let mut args = vec!["analyze", "--manifest", path(&manifest), "--texts", path(&corpus), "--out", path(out)];
    args.extend_from_slice(extra);
    lexgrade(&args)
}

#[test]
fn analyze_writes_one_row_per_document_deterministically() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    let first = analyze(&a, &[]);
    assert_eq!(first.status.code(), Some(0), "{}", stderr(&first));
    assert!(first.stdout.is_empty());
    assert_eq!(analyze(&b, &[]).status.code(), Some(0));
    let bytes = fs::read(&a).unwrap();
    assert_eq!(bytes, fs::read(&b).unwrap());

    let text = String::from_utf8(bytes).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("# lexgrade "));
    assert!(lines[1].starts_with("id,doc_type,year,domain,sentence_count,"));
    assert_eq!(lines.len(), 2 + 3);

    let expected = Expected::load();
    let results = Results::parse(&text).unwrap();
    let grades: Vec<[i32; 5]> = results
        .documents
        .iter()
        .map(|r| [r.g1_flesch_kincaid, r.g2_smog, r.g3_ari, r.g4_coleman_liau, r.g5_linsear])
        .collect();
    assert_eq!(grades, expected.grades_for("windowed"));
}

#[test]
fn missing_text_exits_one_and_names_the_document() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = dir.path().join("manifest.csv");
    let original = fs::read_to_string(corpus_dir().join("manifest.csv")).unwrap();
    fs::write(&manifest, original.replace("texts/employment.txt", "texts/absent.txt")).unwrap();
    let out = dir.path().join("r.csv");
    let corpus = corpus_dir();
    let o = lexgrade(&["analyze", "--manifest", path(&manifest), "--texts", path(&corpus), "--out", path(&out)]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.lines().any(|l| l.starts_with("failed: 32002L0014")), "{err}");
    assert_eq!(Results::parse(&fs::read_to_string(&out).unwrap()).unwrap().documents.len(), 2);
}

#[test]
fn linsear_mode_changes_only_the_linsear_column() {
    let dir = tempfile::tempdir().unwrap();
    let (w, c) = (dir.path().join("w.csv"), dir.path().join("c.csv"));
    assert_eq!(analyze(&w, &["--linsear-mode", "windowed"]).status.code(), Some(0));
    assert_eq!(analyze(&c, &["--linsear-mode", "compat"]).status.code(), Some(0));
    let windowed = Results::parse(&fs::read_to_string(&w).unwrap()).unwrap();
    let compat = Results::parse(&fs::read_to_string(&c).unwrap()).unwrap();
    assert_eq!(windowed.meta.linsear_mode, "windowed");
    assert_eq!(compat.meta.linsear_mode, "compat");
    let mut changed = 0;
    for (a, b) in windowed.documents.iter().zip(&compat.documents) {
        let mut b = b.clone();
        if b.g5_linsear != a.g5_linsear {
            changed += 1;
        }
        b.g5_linsear = a.g5_linsear;
        assert_eq!(a, &b);
    }
    assert_eq!(changed, 1);
}

#[test]
fn stats_match_the_recorded_oracle_in_both_formats() {
    let dir = tempfile::tempdir().unwrap();
    let results = dir.path().join("r.csv");
    assert_eq!(analyze(&results, &[]).status.code(), Some(0));
    let expected = Expected::load();

    let mut parsed = Vec::new();
    for format in ["csv", "json"] {
        let out = dir.path().join(format!("stats.{format}"));
        let o = lexgrade(&["stats", "--results", path(&results), "--out", path(&out), "--format", format]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        let text = fs::read_to_string(&out).unwrap();
        assert!(text.contains("type 7"));
        assert!(text.contains("windowed"));
        parsed.push(StatsReport::parse(&text).unwrap());
    }
    assert_eq!(parsed[0], parsed[1]);

    let stats = &parsed[0].statistics;
    for (column, fields) in &expected.summary {
        let s = stats.summary_for(column).unwrap();
        let mean = fields.iter().find(|f| f.0 == "mean").unwrap().1;
        let median = fields.iter().find(|f| f.0 == "median").unwrap().1;
        assert!(close(s.mean, mean, 1e-12) && close(s.median, median, 1e-12), "{column}");
    }
    assert!(close(*stats.alpha.computed().unwrap(), expected.alpha, 1e-12));
}

#[test]
fn stats_of_one_row_report_the_omission() {
    let dir = tempfile::tempdir().unwrap();
    let results = dir.path().join("r.csv");
    assert_eq!(analyze(&results, &[]).status.code(), Some(0));
    let text = fs::read_to_string(&results).unwrap();
    let one: String = text.lines().take(3).map(|l| format!("{l}\n")).collect();
    fs::write(&results, one).unwrap();
    let out = dir.path().join("s.csv");
    let o = lexgrade(&["stats", "--results", path(&results), "--out", path(&out)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(fs::read_to_string(&out).unwrap().contains("correlation,,omitted,n < 2"));
    assert!(stderr(&o).contains("n < 2"));
}

#[test]
fn truncated_results_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let results = dir.path().join("r.csv");
    assert_eq!(analyze(&results, &[]).status.code(), Some(0));
    let text = fs::read_to_string(&results).unwrap();
    fs::write(&results, &text[..text.len() - 40]).unwrap();
    for command in ["stats", "report"] {
        let o = lexgrade(&[command, "--results", path(&results)]);
        assert_eq!(o.status.code(), Some(2), "{command}");
        assert!(o.stdout.is_empty());
        assert!(stderr(&o).contains("row 3"), "{}", stderr(&o));
    }
}

fn results_with_years(years: &[&str]) -> String {
    let mut out = String::from("# lexgrade 0.1.0 linsear_mode=windowed syllable_rule=hyphenation\n");
    out.push_str(&lexgrade::report::RESULT_COLUMNS.join(","));
    out.push('\n');
    for (i, year) in years.iter().enumerate() {
        let g = 10 + i as i32;
        out.push_str(&format!(
            "d{i},Directive,{year},general_rules,5,100,160,20,500,495,80,20,{g},{},{},12,9,{}\n",
            g + 1,
            g + 2,
            f64::from(3 * g + 3) / 3.0
        ));
    }
    out
}

#[test]
fn report_groups_by_year() {
    let dir = tempfile::tempdir().unwrap();
    let results = dir.path().join("r.csv");
    fs::write(&results, results_with_years(&["1990", "1990", "2000"])).unwrap();
    let parsed = Results::parse(&fs::read_to_string(&results).unwrap()).unwrap();
    let pairs: Vec<(i32, f64)> = parsed.documents.iter().map(|r| (r.year, r.sum_variable)).collect();
    let oracle = per_year_aggregate(&pairs).unwrap();

    for format in ["csv", "json"] {
        let out = dir.path().join(format!("years.{format}"));
        let o = lexgrade(&["report", "--results", path(&results), "--out", path(&out), "--format", format]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        let rows = parse_year_report(&fs::read_to_string(&out).unwrap()).unwrap();
        assert_eq!(rows, oracle);
        assert_eq!(rows.len(), 2);
        assert_eq!((rows[0].year, rows[0].count, rows[0].mean), (1990, 2, 11.5));
    }
}

#[test]
fn report_of_empty_results_has_an_empty_data_section() {
    let dir = tempfile::tempdir().unwrap();
    let results = dir.path().join("r.csv");
    fs::write(&results, results_with_years(&[])).unwrap();
    let o = lexgrade(&["report", "--results", path(&results)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(String::from_utf8(o.stdout).unwrap(), "year,count,mean,median\n");
    let o = lexgrade(&["report", "--results", path(&results), "--format", "json"]);
    assert_eq!(String::from_utf8(o.stdout).unwrap().trim(), "[]");
}

#[test]
fn corrupted_year_exits_two_naming_the_row() {
    let dir = tempfile::tempdir().unwrap();
    let results = dir.path().join("r.csv");
    for bad in ["19x0", "199"] {
        fs::write(&results, results_with_years(&["1990", bad, "2000"])).unwrap();
        let o = lexgrade(&["report", "--results", path(&results)]);
        assert_eq!(o.status.code(), Some(2), "{bad}");
        assert!(stderr(&o).contains("row 2"), "{}", stderr(&o));
    }
}

#[test]
fn csv_and_json_results_carry_the_same_content() {
    let dir = tempfile::tempdir().unwrap();
    let (c, j) = (dir.path().join("r.csv"), dir.path().join("r.json"));
    assert_eq!(analyze(&c, &[]).status.code(), Some(0));
    assert_eq!(analyze(&j, &["--format", "json"]).status.code(), Some(0));
    let csv = Results::parse(&fs::read_to_string(&c).unwrap()).unwrap();
    let json = Results::parse(&fs::read_to_string(&j).unwrap()).unwrap();
    assert_eq!(csv, json);

    let (sc, sj) = (dir.path().join("s.csv"), dir.path().join("s.json"));
    lexgrade(&["stats", "--results", path(&j), "--out", path(&sc)]);
    lexgrade(&["stats", "--results", path(&c), "--out", path(&sj), "--format", "json"]);
    assert_eq!(
        StatsReport::parse(&fs::read_to_string(&sc).unwrap()).unwrap(),
        StatsReport::parse(&fs::read_to_string(&sj).unwrap()).unwrap()
    );
}

#[test]
fn configuration_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.csv");
    let corpus = corpus_dir();
    let o = lexgrade(&["analyze", "--manifest", path(&missing), "--texts", path(&corpus)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    let manifest = corpus_dir().join("manifest.csv");
    assert_eq!(lexgrade(&["analyze", "--manifest", path(&manifest)]).status.code(), Some(2));
    assert_eq!(lexgrade(&["stats"]).status.code(), Some(2));
    let o = lexgrade(&["analyze", "--manifest", path(&manifest), "--texts", path(&corpus), "--linsear-mode", "median"]);
    assert_eq!(o.status.code(), Some(2));
    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "(unclosed\n").unwrap();
    let o = lexgrade(&["analyze", "--manifest", path(&manifest), "--texts", path(&corpus), "--boilerplate", path(&bad)]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn fetch_command_uses_environment_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let (server, manifest) = stub_corpus(dir.path());
    let cache = dir.path().join("cache");
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_lexgrade"))
            .args(["fetch", "--manifest", path(&manifest), "--cache", path(&cache), "--format", "json"])
            .env("LEXGRADE_BASE_URL", &server.base_url)
            .env("LEXGRADE_DELAY_MS", "0")
            .output()
            .unwrap()
    };
    let first = run();
    assert_eq!(first.status.code(), Some(0), "{}", stderr(&first));
    let log: serde_json::Value = serde_json::from_slice(&first.stdout).unwrap();
    assert_eq!(log.as_array().unwrap().len(), 3);
    assert!(log.as_array().unwrap().iter().all(|r| r["status"] == "fetched_fresh"));
    assert_eq!(server.requests().len(), 3);

    let second = run();
    let log: serde_json::Value = serde_json::from_slice(&second.stdout).unwrap();
    assert!(log.as_array().unwrap().iter().all(|r| r["status"] == "from_cache"));
    assert_eq!(server.requests().len(), 3);
    assert!(fs::read_to_string(fixtures().join("regulation_article1.golden.txt")).is_ok());
}

#[test]
fn fetch_reports_missing_documents_with_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let (server, _) = stub_corpus(dir.path());
    let manifest = dir.path().join("m.csv");
    fs::write(
        &manifest,
        "id,doc_type,year,title,domain,source\n32099R9999,Regulation,2099,None,general_rules,celex:32099R9999\n",
    )
    .unwrap();
    let cache = dir.path().join("cache");
    let o = lexgrade(&[
        "fetch", "--manifest", path(&manifest), "--cache", path(&cache), "--base-url", &server.base_url,
        "--delay-ms", "0",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("failed: 32099R9999: not found"));
}
