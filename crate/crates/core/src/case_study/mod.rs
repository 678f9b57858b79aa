//! The Bangla grammar fixtures and the printed-versus-computed report.

mod corpus;

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use serde::Serialize;
use thiserror::Error;

use crate::grammar::{parse_grammar, Grammar, GrammarError, SymbolId};
use crate::lexicon::{load_lexicon_tsv, load_lexicon_xml, Lexicon, LexiconError};
use crate::sets::{
    compute_first, compute_follow, parse_dump, sorted_lookahead_names, DumpEntry, FirstSets,
    FollowSets, END_MARKER,
};
use crate::table::{
    build_table, diff_tables, load_table, ConflictReport, LoadedTable, ParseTable, TableError,
};

pub use corpus::{parse_corpus, CorpusEntry, CorpusError, Expected, Payload, DEFAULT_LABEL};

pub const GRAMMAR_FILE: &str = "bangla.grammar";
pub const TABLE_FILE: &str = "printed_table.tsv";
pub const FIRST_FILE: &str = "printed_first.txt";
pub const FOLLOW_FILE: &str = "printed_follow.txt";
pub const LEXICON_XML_FILE: &str = "lexicon.xml";
pub const LEXICON_TSV_FILE: &str = "lexicon.tsv";
pub const CORPUS_FILE: &str = "corpus.tsv";

pub mod embedded {
    pub const GRAMMAR: &str = include_str!("../../fixtures/bangla.grammar");
    pub const TABLE: &str = include_str!("../../fixtures/printed_table.tsv");
    pub const FIRST: &str = include_str!("../../fixtures/printed_first.txt");
    pub const FOLLOW: &str = include_str!("../../fixtures/printed_follow.txt");
    pub const LEXICON_XML: &str = include_str!("../../fixtures/lexicon.xml");
    pub const LEXICON_TSV: &str = include_str!("../../fixtures/lexicon.tsv");
    pub const CORPUS: &str = include_str!("../../fixtures/corpus.tsv");
}

#[derive(Debug, Error)]
pub enum CaseStudyError {
    #[error("{file}: {source}")]
    Io {
        file: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{GRAMMAR_FILE}: {0}")]
    Grammar(#[from] GrammarError),
    #[error("{TABLE_FILE}: {0}")]
    Table(#[from] TableError),
    #[error("lexicon: {0}")]
    Lexicon(#[from] LexiconError),
    #[error("{file}: {message}")]
    Dump { file: String, message: String },
    #[error("{CORPUS_FILE}: {0}")]
    Corpus(#[from] CorpusError),
}

/// Raw fixture texts.
#[derive(Clone, Debug)]
pub struct Fixtures {
    pub grammar: String,
    pub table: String,
    pub first: String,
    pub follow: String,
    pub lexicon_xml: String,
    pub lexicon_tsv: String,
    pub corpus: String,
}

impl Fixtures {
    pub fn embedded() -> Fixtures {
        Fixtures {
            grammar: embedded::GRAMMAR.into(),
            table: embedded::TABLE.into(),
            first: embedded::FIRST.into(),
            follow: embedded::FOLLOW.into(),
            lexicon_xml: embedded::LEXICON_XML.into(),
            lexicon_tsv: embedded::LEXICON_TSV.into(),
            corpus: embedded::CORPUS.into(),
        }
    }

    pub fn from_dir(dir: &Path) -> Result<Fixtures, CaseStudyError> {
        let read = |name: &str| {
            std::fs::read_to_string(dir.join(name)).map_err(|source| CaseStudyError::Io {
                file: dir.join(name).display().to_string(),
                source,
            })
        };
        Ok(Fixtures {
            grammar: read(GRAMMAR_FILE)?,
            table: read(TABLE_FILE)?,
            first: read(FIRST_FILE)?,
            follow: read(FOLLOW_FILE)?,
            lexicon_xml: read(LEXICON_XML_FILE)?,
            lexicon_tsv: read(LEXICON_TSV_FILE)?,
            corpus: read(CORPUS_FILE)?,
        })
    }
}

pub struct CaseStudy {
    pub grammar: Grammar,
    pub first: FirstSets,
    pub follow: FollowSets,
    pub computed: ParseTable,
    pub conflicts: ConflictReport,
    /// The printed table over its shadow grammar.
    pub printed: LoadedTable,
    pub printed_first: Vec<DumpEntry>,
    pub printed_follow: Vec<DumpEntry>,
    pub lexicon: Lexicon,
    pub corpus: Vec<CorpusEntry>,
}

impl CaseStudy {
    pub fn load() -> Result<CaseStudy, CaseStudyError> {
        CaseStudy::from_fixtures(&Fixtures::embedded())
    }

    pub fn from_fixtures(f: &Fixtures) -> Result<CaseStudy, CaseStudyError> {
        let grammar = parse_grammar(&f.grammar)?.with_name("bangla");
        let first = compute_first(&grammar);
        let follow = compute_follow(&grammar, &first);
        let (computed, conflicts) = build_table(&grammar, &first, &follow);
        let printed = load_table(&f.table, &grammar)?;
        let dump = |file: &str, text: &str| {
            parse_dump(text).map_err(|message| CaseStudyError::Dump {
                file: file.to_owned(),
                message,
            })
        };
        let mut lexicon = load_lexicon_xml(&f.lexicon_xml)?;
        lexicon.merge(&load_lexicon_tsv(&f.lexicon_tsv)?)?;
        Ok(CaseStudy {
            printed_first: dump(FIRST_FILE, &f.first)?,
            printed_follow: dump(FOLLOW_FILE, &f.follow)?,
            corpus: parse_corpus(&f.corpus)?,
            grammar,
            first,
            follow,
            computed,
            conflicts,
            printed,
            lexicon,
        })
    }

    /// Every place where the printed sets or table disagree with what the
    /// algorithms compute, plus the table's rhs that the grammar lacks.
    /// Ordered by subject, then grammar order of the location.
    pub fn consistency_report(&self) -> Vec<ConsistencyFinding> {
        let g = &self.grammar;
        let mut out: Vec<(Subject, (usize, usize), ConsistencyFinding)> = Vec::new();
        let nt_rank = |name: &str| {
            g.lookup(name)
                .and_then(|id| g.nonterminals().iter().position(|&n| n == id))
                .unwrap_or(usize::MAX)
        };

        let first_of = |nt: SymbolId| {
            let members = self
                .first
                .of(nt)
                .iter()
                .map(|&t| g.symbol_name(t).to_owned())
                .collect();
            render_set(&members, self.first.is_nullable(nt))
        };
        let follow_of = |nt: SymbolId| sorted_lookahead_names(g, self.follow.of(nt)).join(", ");
        for (subject, entries) in [
            (Subject::FirstSet, &self.printed_first),
            (Subject::FollowSet, &self.printed_follow),
        ] {
            let mut listed = BTreeSet::new();
            for e in entries {
                listed.insert(e.symbol.clone());
                let printed = render_set(&e.members, e.eps);
                let computed = match g.lookup(&e.symbol).filter(|&id| g.is_nonterminal(id)) {
                    None => "not a nonterminal".to_owned(),
                    Some(nt) if subject == Subject::FirstSet => first_of(nt),
                    Some(nt) => format!("{{{}}}", follow_of(nt)),
                };
                if printed != computed {
                    out.push((
                        subject,
                        (nt_rank(&e.symbol), 0),
                        finding(subject, &e.symbol, printed, computed),
                    ));
                }
            }
            for &nt in g.nonterminals() {
                let name = g.symbol_name(nt);
                if !listed.contains(name) {
                    let computed = if subject == Subject::FirstSet {
                        first_of(nt)
                    } else {
                        format!("{{{}}}", follow_of(nt))
                    };
                    out.push((
                        subject,
                        (nt_rank(name), 0),
                        finding(subject, name, "not printed".into(), computed),
                    ));
                }
            }
        }

        let pg = &self.printed.grammar;
        let diff = diff_tables(&self.computed, g, &self.printed.table, pg);
        match diff {
            Ok(d) => {
                let col_rank = |name: &str| {
                    self.computed
                        .cols()
                        .iter()
                        .position(|c| c.name(g) == name)
                        .unwrap_or(usize::MAX)
                };
                for c in d.entries {
                    out.push((
                        Subject::TableCell,
                        (nt_rank(&c.row), col_rank(&c.col)),
                        finding(
                            Subject::TableCell,
                            &format!("({}, {})", c.row, c.col),
                            render_cell(&c.right),
                            render_cell(&c.left),
                        ),
                    ));
                }
            }
            Err(e) => out.push((
                Subject::TableCell,
                (0, 0),
                finding(Subject::TableCell, "*", "table shape".into(), e.to_string()),
            )),
        }

        for &p in &self.printed.synthetic {
            let prod = pg.production(p);
            let cells: Vec<String> = self
                .printed
                .table
                .iter_cells()
                .filter(|(_, _, prods)| prods.contains(&p))
                .map(|(r, c, _)| format!("M[{}, {}]", pg.symbol_name(r), c.name(pg)))
                .collect();
            out.push((
                Subject::Production,
                (nt_rank(pg.symbol_name(prod.lhs)), p.index()),
                finding(
                    Subject::Production,
                    &pg.render_production(p),
                    cells.join(", "),
                    "not a grammar production".into(),
                ),
            ));
        }

        out.sort_by_key(|a| (a.0, a.1));
        out.into_iter().map(|(_, _, f)| f).collect()
    }
}

fn finding(
    subject: Subject,
    location: &str,
    printed_value: String,
    computed_value: String,
) -> ConsistencyFinding {
    ConsistencyFinding {
        subject,
        location: location.to_owned(),
        printed_value,
        computed_value,
    }
}

/// Sorted members with `$` and then `eps` last, the order of the computed dumps.
fn render_set(members: &BTreeSet<String>, eps: bool) -> String {
    let mut v: Vec<&str> = members
        .iter()
        .map(String::as_str)
        .filter(|&m| m != END_MARKER)
        .collect();
    if members.contains(END_MARKER) {
        v.push(END_MARKER);
    }
    if eps {
        v.push("eps");
    }
    format!("{{{}}}", v.join(", "))
}

fn render_cell(rhs: &[String]) -> String {
    if rhs.is_empty() {
        "(empty)".into()
    } else {
        rhs.join(" / ")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Subject {
    FirstSet,
    FollowSet,
    TableCell,
    Production,
}

impl Subject {
    pub fn as_str(self) -> &'static str {
        match self {
            Subject::FirstSet => "first-set",
            Subject::FollowSet => "follow-set",
            Subject::TableCell => "table-cell",
            Subject::Production => "production",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConsistencyFinding {
    pub subject: Subject,
    pub location: String,
    pub printed_value: String,
    pub computed_value: String,
}

impl fmt::Display for ConsistencyFinding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}\t{}\tprinted {}\tcomputed {}",
            self.subject.as_str(),
            self.location,
            self.printed_value,
            self.computed_value
        )
    }
}

/// One finding per line.
pub fn render_report(findings: &[ConsistencyFinding]) -> String {
    findings.iter().map(|f| format!("{f}\n")).collect()
}
