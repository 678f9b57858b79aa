use std::io::Write;
use std::path::Path;

use serde::Serialize;

use ll1kit::case_study::{embedded, parse_corpus, render_report, CaseStudy, Fixtures, Payload};
use ll1kit::driver::{
    attach_surfaces, format_trace, parse_predictive, tree_to_bracketed, DriverMode, DriverPolicy,
    MoveRecord, ParseOutcome, ParseTree,
};
use ll1kit::grammar::{
    detect_left_recursion, left_factor, parse_grammar, serialize_grammar, Grammar,
};
use ll1kit::lexicon::{load_lexicon_tsv, load_lexicon_xml, split_sentences, tag_sentence, Lexicon};
use ll1kit::sets::{compute_first, compute_follow, dump_first, dump_follow};
use ll1kit::table::{
    build_table, load_table, serialize_table, table_to_json, ConflictKind, ParseTable,
    TableDocument,
};

use crate::batch::{BatchEntry, BatchReport};
use crate::{CliError, Command, ExitStatus, Format, Policy, Setup};

pub const PRINTED_TABLE: &str = "printed";

pub(crate) fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<ExitStatus, CliError> {
    match cmd {
        Command::Analyze { grammar } => {
            let g = read_grammar(&grammar)?;
            let fs = compute_first(&g);
            let fl = compute_follow(&g, &fs);
            emit(
                out,
                &format!("{}{}", dump_first(&g, &fs), dump_follow(&g, &fl)),
            )?;
            Ok(ExitStatus::Success)
        }
        Command::Factor { grammar } => {
            let g = read_grammar(&grammar)?;
            emit(out, &serialize_grammar(&left_factor(&g)))?;
            Ok(ExitStatus::Success)
        }
        Command::Table {
            grammar,
            strict,
            format,
        } => table(&read_grammar(&grammar)?, strict, format, out),
        Command::DiffPaper { fixtures, format } => {
            let f = match fixtures {
                Some(dir) => {
                    Fixtures::from_dir(&dir).map_err(|e| CliError::Input(e.to_string()))?
                }
                None => Fixtures::embedded(),
            };
            let cs = CaseStudy::from_fixtures(&f).map_err(|e| CliError::Input(e.to_string()))?;
            let report = cs.consistency_report();
            match format {
                Format::Text => emit(out, &render_report(&report))?,
                Format::Json => emit_json(out, &report)?,
            }
            Ok(ExitStatus::Success)
        }
        Command::Parse {
            setup,
            tags,
            trace,
            tree,
            format,
            input,
        } => parse(&setup, tags, trace, tree, format, &input, out),
        Command::Tag { lexicon, input } => {
            let lex = read_lexicon(&lexicon)?;
            let mut text = String::new();
            for (i, sentence) in split_sentences(&input).iter().enumerate() {
                if i > 0 {
                    text.push('\n');
                }
                let tagged =
                    tag_sentence(&lex, sentence).map_err(|e| CliError::Input(e.to_string()))?;
                for (tok, tag) in tagged.tokens.iter().zip(&tagged.tags) {
                    text.push_str(&format!("{}\t{}\n", tok.surface, tag));
                }
            }
            emit(out, &text)?;
            Ok(ExitStatus::Success)
        }
        Command::Batch {
            setup,
            format,
            corpus,
        } => batch(&setup, format, corpus.as_deref(), out),
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes())
        .map_err(|e| CliError::Input(format!("writing output: {e}")))
}

fn emit_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).expect("plain data serializes");
    emit(out, &format!("{text}\n"))
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn read_grammar(path: &Path) -> Result<Grammar, CliError> {
    let text = read_file(path)?;
    let g =
        parse_grammar(&text).map_err(|e| CliError::Grammar(format!("{}: {e}", path.display())))?;
    let name = path
        .file_stem()
        .map_or("grammar".into(), |s| s.to_string_lossy().into_owned());
    Ok(g.with_name(name))
}

fn read_lexicon(paths: &[impl AsRef<Path>]) -> Result<Lexicon, CliError> {
    if paths.is_empty() {
        let cs = CaseStudy::load().map_err(|e| CliError::Input(e.to_string()))?;
        return Ok(cs.lexicon);
    }
    let mut lex = Lexicon::new();
    for p in paths {
        let p = p.as_ref();
        let text = read_file(p)?;
        let is_xml = p.extension().is_some_and(|e| e.eq_ignore_ascii_case("xml"));
        let part = if is_xml {
            load_lexicon_xml(&text)
        } else {
            load_lexicon_tsv(&text)
        };
        let part = part.map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?;
        lex.merge(&part)
            .map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?;
    }
    Ok(lex)
}

fn reject_left_recursion(g: &Grammar) -> Result<(), CliError> {
    let cycles = detect_left_recursion(g);
    if cycles.is_empty() {
        return Ok(());
    }
    let names: Vec<String> = cycles
        .iter()
        .map(|c| {
            c.iter()
                .map(|&s| g.symbol_name(s))
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect();
    Err(CliError::Grammar(format!(
        "left recursion through {{{}}}",
        names.join("}, {")
    )))
}

#[derive(Serialize)]
struct ConflictJson {
    row: String,
    col: String,
    kind: ConflictKind,
    productions: Vec<String>,
}

#[derive(Serialize)]
struct TableJson {
    table: TableDocument,
    conflicts: Vec<ConflictJson>,
}

fn table(
    g: &Grammar,
    strict: bool,
    format: Format,
    out: &mut dyn Write,
) -> Result<ExitStatus, CliError> {
    reject_left_recursion(g)?;
    let fs = compute_first(g);
    let (t, report) = build_table(g, &fs, &compute_follow(g, &fs));
    match format {
        Format::Text => {
            let mut text = serialize_table(&t, g);
            text.push_str(&format!("\nconflicts: {}\n", report.entries.len()));
            text.push_str(&report.render(g));
            emit(out, &text)?;
        }
        Format::Json => {
            let conflicts = report
                .entries
                .iter()
                .map(|c| ConflictJson {
                    row: g.symbol_name(c.row).to_owned(),
                    col: c.col.name(g).to_owned(),
                    kind: c.kind,
                    productions: c
                        .productions
                        .iter()
                        .map(|&p| g.render_production(p))
                        .collect(),
                })
                .collect();
            emit_json(
                out,
                &TableJson {
                    table: table_to_json(&t, g),
                    conflicts,
                },
            )?;
        }
    }
    if strict && !report.is_empty() {
        return Err(CliError::Grammar(format!(
            "{} conflicting cells; the grammar is not LL(1)",
            report.entries.len()
        )));
    }
    Ok(ExitStatus::Success)
}

/// The grammar and table that drive the parser. With a loaded table the
/// grammar is its shadow grammar, so printed-only rhs can be applied.
fn driving_table(setup: &Setup) -> Result<(Grammar, ParseTable), CliError> {
    let g = match &setup.grammar {
        Some(p) => read_grammar(p)?,
        None => parse_grammar(embedded::GRAMMAR)
            .expect("built-in grammar parses")
            .with_name("bangla"),
    };
    let text = match setup.table.as_deref() {
        None => {
            reject_left_recursion(&g)?;
            let fs = compute_first(&g);
            let (t, _) = build_table(&g, &fs, &compute_follow(&g, &fs));
            return Ok((g, t));
        }
        Some(PRINTED_TABLE) => embedded::TABLE.to_owned(),
        Some(path) => read_file(Path::new(path))?,
    };
    let loaded = load_table(&text, &g).map_err(|e| CliError::Input(format!("table: {e}")))?;
    Ok((loaded.grammar, loaded.table))
}

fn policy(setup: &Setup) -> DriverPolicy {
    DriverPolicy {
        mode: match setup.policy {
            Policy::Deterministic => DriverMode::Deterministic,
            Policy::Backtrack => DriverMode::Backtracking,
        },
        step_budget: setup.budget,
    }
}

#[derive(Serialize)]
struct ParseJson<'a> {
    tags: &'a [String],
    #[serde(skip_serializing_if = "Option::is_none")]
    words: Option<&'a [String]>,
    #[serde(flatten)]
    outcome: &'a ParseOutcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace: Option<&'a [MoveRecord]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tree: Option<&'a ParseTree>,
}

fn parse(
    setup: &Setup,
    as_tags: bool,
    trace: bool,
    tree: bool,
    format: Format,
    input: &str,
    out: &mut dyn Write,
) -> Result<ExitStatus, CliError> {
    let (g, t) = driving_table(setup)?;
    let (tags, words): (Vec<String>, Option<Vec<String>>) = if as_tags {
        (input.split_whitespace().map(str::to_owned).collect(), None)
    } else {
        let lex = read_lexicon(&setup.lexicon)?;
        let sentences = split_sentences(input);
        if sentences.len() > 1 {
            return Err(CliError::Usage(format!(
                "input holds {} sentences; parse takes one (use batch for more)",
                sentences.len()
            )));
        }
        let sentence = sentences.first().map_or("", String::as_str);
        let tagged = tag_sentence(&lex, sentence).map_err(|e| CliError::Input(e.to_string()))?;
        let words = tagged.tokens.iter().map(|t| t.surface.clone()).collect();
        (tagged.tags, Some(words))
    };
    let refs: Vec<&str> = tags.iter().map(String::as_str).collect();
    let mut run = parse_predictive(&t, &g, &refs, policy(setup))
        .map_err(|e| CliError::Input(e.to_string()))?;
    if let (Some(tree), Some(words)) = (&mut run.tree, &words) {
        attach_surfaces(tree, words);
    }

    match format {
        Format::Text => {
            let mut text = match &run.outcome.reject {
                None => "accepted\n".to_owned(),
                Some(info) => format!("rejected: {info}\n"),
            };
            if trace {
                text.push('\n');
                text.push_str(&format_trace(&run.moves));
            }
            if let (true, Some(t)) = (tree, &run.tree) {
                text.push('\n');
                text.push_str(&tree_to_bracketed(t));
                text.push('\n');
            }
            emit(out, &text)?;
        }
        Format::Json => emit_json(
            out,
            &ParseJson {
                tags: &tags,
                words: words.as_deref(),
                outcome: &run.outcome,
                trace: trace.then_some(run.moves.as_slice()),
                tree: if tree { run.tree.as_ref() } else { None },
            },
        )?,
    }
    Ok(if run.outcome.accepted() {
        ExitStatus::Success
    } else {
        ExitStatus::Rejected
    })
}

fn batch(
    setup: &Setup,
    format: Format,
    corpus: Option<&Path>,
    out: &mut dyn Write,
) -> Result<ExitStatus, CliError> {
    let (g, t) = driving_table(setup)?;
    let lex = read_lexicon(&setup.lexicon)?;
    let (name, text) = match corpus {
        Some(p) => (p.display().to_string(), read_file(p)?),
        None => ("corpus".to_owned(), embedded::CORPUS.to_owned()),
    };
    let entries = parse_corpus(&text).map_err(|e| CliError::Input(format!("{name}: {e}")))?;
    let policy = policy(setup);

    let mut results = Vec::with_capacity(entries.len());
    for e in entries {
        let tags = match &e.payload {
            Payload::TagSequence(tags) => tags.clone(),
            Payload::RawSentence(s) => {
                tag_sentence(&lex, s)
                    .map_err(|err| CliError::Input(format!("{name}: line {}: {err}", e.line)))?
                    .tags
            }
        };
        let refs: Vec<&str> = tags.iter().map(String::as_str).collect();
        let run = parse_predictive(&t, &g, &refs, policy)
            .map_err(|err| CliError::Input(format!("{name}: line {}: {err}", e.line)))?;
        results.push(BatchEntry::new(&e, run.outcome));
    }
    let report = BatchReport::from_entries(results);
    match format {
        Format::Text => emit(out, &report.render())?,
        Format::Json => emit_json(out, &report)?,
    }
    Ok(if report.all_matched() {
        ExitStatus::Success
    } else {
        ExitStatus::Rejected
    })
}
