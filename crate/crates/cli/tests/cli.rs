use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ll1kit::case_study::{embedded, parse_corpus, CaseStudy, Payload};
use ll1kit::lexicon::tag_sentence;
use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ll1kit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

fn assert_golden(args: &[&str], file: &str, code: i32) {
    let o = run(args);
    assert_eq!(
        o.status.code(),
        Some(code),
        "{args:?}: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    let want = std::fs::read_to_string(golden(file)).unwrap();
    assert_eq!(stdout(&o), want, "{args:?} vs {file}");
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn goldens() {
    let expr = golden("expr.grammar");
    let expr = expr.to_str().unwrap();
    assert_golden(&["table", expr], "expr_table.txt", 0);
    assert_golden(&["table", "--strict", expr], "expr_table.txt", 0);
    assert_golden(&["analyze", expr], "expr_sets.txt", 0);
    assert_golden(
        &[
            "parse",
            "--table",
            "printed",
            "--tags",
            "--trace",
            "--tree",
            "modifier noun noun verb",
        ],
        "parse_trace.txt",
        0,
    );
    assert_golden(
        &[
            "parse",
            "--table",
            "printed",
            "--tags",
            "--trace",
            "noun noun",
        ],
        "parse_reject.txt",
        1,
    );
    assert_golden(&["batch", "--table", "printed"], "batch_printed.txt", 0);
}

#[test]
fn minimal_grammar_commands() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "min.grammar", "S -> a ;\n");
    let o = run(&["analyze", &g]);
    assert_eq!(stdout(&o), "FIRST(S) = {a}\nFOLLOW(S) = {$}\n");

    let g = write(&dir, "ab.grammar", "A -> a b | a c ;\n");
    assert_eq!(
        stdout(&run(&["factor", &g])),
        "A -> a A1 ;\nA1 -> b | c ;\n"
    );
    let g = write(&dir, "done.grammar", "S   -> a S|b;\n");
    assert_eq!(stdout(&run(&["factor", &g])), "S -> a S | b ;\n");
}

#[test]
fn bangla_table_command() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "bangla.grammar", embedded::GRAMMAR);
    let o = run(&["table", &g]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("M[NP1, pronoun]: first-follow: "));
    assert_eq!(run(&["table", "--strict", &g]).status.code(), Some(4));

    let o = run(&["table", "--format", "json", &g]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["table"]["rows"][0], "S");
    let kinds: Vec<&str> = v["conflicts"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["kind"].as_str().unwrap())
        .collect();
    assert!(kinds.contains(&"first-follow"));
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let missing = dir.path().join("nope.grammar");
    let missing = missing.to_str().unwrap();
    let bad = write(&dir, "bad.grammar", "S -> ;; a\n");
    let rec = write(&dir, "rec.grammar", "S -> S a | a ;\n");
    let cases: Vec<(Vec<&str>, i32)> = vec![
        (vec!["analyze", missing], 3),
        (vec!["analyze", &bad], 4),
        (vec!["analyze", &rec], 0),
        (vec!["table", &rec], 4),
        (vec!["table", "--format", "yaml", &rec], 2),
        (vec!["frobnicate"], 2),
        (vec![], 2),
        (vec!["--help"], 0),
        (vec!["parse", "--tags", "noun bogus"], 3),
        (vec!["parse", "কলম"], 3),
        (vec!["parse", "আমি ভাত খাই। আমি খাই ভাত।"], 2),
        (vec!["parse", "--grammar", &rec, "--tags", "a"], 4),
        (vec!["parse", "--table", missing, "--tags", "noun"], 3),
        (vec!["batch", missing], 3),
        (vec!["tag", "আমি কলম"], 3),
    ];
    for (args, code) in cases {
        let o = run(&args);
        assert_eq!(
            o.status.code(),
            Some(code),
            "{args:?}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
        if code >= 2 && !args.contains(&"--help") {
            assert!(o.stdout.is_empty(), "{args:?} wrote to stdout");
            assert!(!o.stderr.is_empty(), "{args:?} gave no diagnostic");
        }
    }
    let o = run(&["parse", "--tags", "noun bogus"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("\"bogus\""));
}

#[test]
fn batch_mismatch_and_tagging_failure() {
    let dir = TempDir::new().unwrap();
    let wrong = write(
        &dir,
        "wrong.tsv",
        "#label: x\nT\taccept\tnoun noun\nT\taccept\tpronoun verb\n",
    );
    let o = run(&["batch", "--table", "printed", &wrong]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.starts_with("MISMATCH\tx\tnoun noun\texpected accept\trejected: "));
    assert!(text.contains("x: I=2 D=1 A=50.00%\n"));

    let unknown = write(&dir, "unknown.tsv", "S\taccept\tআমি কলম\n");
    assert_eq!(run(&["batch", &unknown]).status.code(), Some(3));

    let o = run(&["batch", "--table", "printed", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["per_type"][0]["label"], "trace");
    assert_eq!(v["per_type"][0]["accepted"], 3);
}

#[test]
fn raw_sentence_parse_and_tag() {
    let o = run(&["parse", "--table", "printed", "--tree", "একটি ছেলে বই পড়ছে"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("accepted\n"));
    assert!(text.contains("(modifier একটি)"), "{text}");

    let o = run(&["tag", "আমি ভাত খাই। একটি ছেলে বই পড়ছে।"]);
    assert_eq!(
        stdout(&o),
        "আমি\tpronoun\nভাত\tnoun\nখাই\tverb\n\nএকটি\tmodifier\nছেলে\tnoun\nবই\tnoun\nপড়ছে\tverb\n"
    );

    let o = run(&[
        "parse",
        "--table",
        "printed",
        "--format",
        "json",
        "--trace",
        "আমি ভাত খাই",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"], "accepted");
    assert_eq!(v["words"][0], "আমি");
    assert_eq!(v["trace"][0]["stack"], serde_json::json!(["$", "S"]));
}

#[test]
fn tags_flag_commutes_with_tagging() {
    let cs = CaseStudy::load().unwrap();
    let corpus = parse_corpus(embedded::CORPUS).unwrap();
    let mut raw = 0;
    for e in corpus {
        let Payload::RawSentence(s) = &e.payload else {
            continue;
        };
        raw += 1;
        let tags = tag_sentence(&cs.lexicon, s).unwrap().tags.join(" ");
        for table in [None, Some("printed")] {
            let mut base = vec!["parse", "--trace"];
            if let Some(t) = table {
                base.extend(["--table", t]);
            }
            let a = run(&[base.as_slice(), &[s.as_str()]].concat());
            let b = run(&[base.as_slice(), &["--tags", tags.as_str()]].concat());
            assert_eq!(a.status.code(), b.status.code(), "{s}");
            assert_eq!(stdout(&a), stdout(&b), "{s}");
        }
    }
    assert!(raw >= 5);
}

#[test]
fn diff_paper_against_edited_fixtures() {
    let dir = TempDir::new().unwrap();
    let sources = [
        ("bangla.grammar", embedded::GRAMMAR),
        ("printed_table.tsv", embedded::TABLE),
        ("printed_first.txt", embedded::FIRST),
        ("printed_follow.txt", embedded::FOLLOW),
        ("lexicon.xml", embedded::LEXICON_XML),
        ("lexicon.tsv", embedded::LEXICON_TSV),
        ("corpus.tsv", embedded::CORPUS),
    ];
    for (name, text) in sources {
        write(&dir, name, text);
    }
    let dir_arg = dir.path().to_str().unwrap();
    let before = stdout(&run(&["diff-paper", "--fixtures", dir_arg]));
    assert_eq!(before, stdout(&run(&["diff-paper"])));
    assert!(before.lines().any(|l| l.starts_with("follow-set\t")));

    // Replace the printed FOLLOW dump with the computed one.
    let g = write(&dir, "g.grammar", embedded::GRAMMAR);
    let computed = stdout(&run(&["analyze", &g]));
    let follow: String = computed
        .lines()
        .filter(|l| l.starts_with("FOLLOW"))
        .map(|l| format!("{l}\n"))
        .collect();
    write(&dir, "printed_follow.txt", &follow);
    let after = stdout(&run(&["diff-paper", "--fixtures", dir_arg]));
    assert!(
        !after.lines().any(|l| l.starts_with("follow-set\t")),
        "{after}"
    );
    assert!(after.lines().any(|l| l.starts_with("first-set\t")));

    let o = run(&["diff-paper", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v.as_array().unwrap().len() > 10);
}
