//! Tab-separated table text format.
//!
//! ```text
//! TABLE <name>
//! <TAB>a<TAB>b<TAB>$
//! S<TAB>a S<TAB><TAB>@eps
//! ```
//!
//! A cell is empty, one rhs, or several rhs separated by ` / `. Leading `#`
//! lines are comments.

use serde::Serialize;
use thiserror::Error;

use super::ParseTable;
use crate::grammar::{Grammar, GrammarError, ProductionId, SymbolId, EPSILON};
use crate::sets::{Lookahead, END_MARKER};

const ALT_SEPARATOR: &str = " / ";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TableError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: unknown symbol {name:?}")]
    UnknownSymbol { line: usize, name: String },
    #[error("line {line}: {name:?} is not a nonterminal of the grammar")]
    NotANonterminal { line: usize, name: String },
    #[error("line {line}: {name:?} is not a terminal of the grammar")]
    NotATerminal { line: usize, name: String },
    #[error("shadow grammar: {0}")]
    Grammar(#[from] GrammarError),
}

/// A table read from text, together with the grammar its cells index into.
/// Cells whose rhs is not a production of the source grammar become
/// synthetic productions appended to `grammar`.
#[derive(Clone, Debug)]
pub struct LoadedTable {
    pub table: ParseTable,
    pub grammar: Grammar,
    pub synthetic: Vec<ProductionId>,
}

fn render_cell(g: &Grammar, prods: &[ProductionId]) -> String {
    prods
        .iter()
        .map(|&p| g.render_rhs(p))
        .collect::<Vec<_>>()
        .join(ALT_SEPARATOR)
}

pub fn serialize_table(t: &ParseTable, g: &Grammar) -> String {
    let mut out = format!("TABLE {}\n", t.name());
    for col in t.cols() {
        out.push('\t');
        out.push_str(col.name(g));
    }
    out.push('\n');
    for &row in t.rows() {
        out.push_str(g.symbol_name(row));
        for &col in t.cols() {
            out.push('\t');
            out.push_str(&render_cell(g, t.cell(row, col)));
        }
        out.push('\n');
    }
    out
}

/// Structured form of a table, for JSON export.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableDocument {
    pub name: String,
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    /// `cells[row][col]` lists rhs renderings (`@eps` for ε).
    pub cells: Vec<Vec<Vec<String>>>,
}

pub fn table_to_json(t: &ParseTable, g: &Grammar) -> TableDocument {
    TableDocument {
        name: t.name().to_owned(),
        rows: t
            .rows()
            .iter()
            .map(|&r| g.symbol_name(r).to_owned())
            .collect(),
        cols: t.cols().iter().map(|c| c.name(g).to_owned()).collect(),
        cells: t
            .rows()
            .iter()
            .map(|&r| {
                t.cols()
                    .iter()
                    .map(|&c| t.cell(r, c).iter().map(|&p| g.render_rhs(p)).collect())
                    .collect()
            })
            .collect(),
    }
}

pub fn load_table(text: &str, g: &Grammar) -> Result<LoadedTable, TableError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .skip_while(|(_, l)| l.trim().is_empty() || l.starts_with('#'));
    let malformed = |line: usize, message: &str| TableError::Malformed {
        line,
        message: message.to_owned(),
    };

    let (line_no, title) = lines
        .next()
        .ok_or_else(|| malformed(1, "missing TABLE line"))?;
    let name = title
        .strip_prefix("TABLE")
        .filter(|rest| rest.is_empty() || rest.starts_with([' ', '\t']))
        .map(str::trim)
        .ok_or_else(|| malformed(line_no, "expected `TABLE <name>`"))?;

    let (line_no, header) = lines
        .next()
        .ok_or_else(|| malformed(line_no + 1, "missing header"))?;
    let fields: Vec<&str> = header.split('\t').collect();
    if fields.len() < 2 || !fields[0].trim().is_empty() {
        return Err(malformed(line_no, "header must start with an empty field"));
    }
    if fields.last().map(|f| f.trim()) != Some(END_MARKER) {
        return Err(malformed(line_no, "header must end with `$`"));
    }
    let mut cols = Vec::new();
    for f in &fields[1..fields.len() - 1] {
        let f = f.trim();
        let id = g.lookup(f).ok_or_else(|| TableError::UnknownSymbol {
            line: line_no,
            name: f.to_owned(),
        })?;
        if !g.is_terminal(id) {
            return Err(TableError::NotATerminal {
                line: line_no,
                name: f.to_owned(),
            });
        }
        if cols.contains(&Lookahead::Terminal(id)) {
            return Err(malformed(line_no, "duplicate column"));
        }
        cols.push(Lookahead::Terminal(id));
    }
    cols.push(Lookahead::End);

    // Rows are parsed first; productions are resolved once the full set of
    // synthetic rules is known.
    let mut rows: Vec<SymbolId> = Vec::new();
    let mut cell_rhs: Vec<(SymbolId, Lookahead, Vec<Vec<SymbolId>>)> = Vec::new();
    for (line_no, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        let row_name = fields[0].trim();
        let row = g
            .lookup(row_name)
            .ok_or_else(|| TableError::UnknownSymbol {
                line: line_no,
                name: row_name.to_owned(),
            })?;
        if !g.is_nonterminal(row) {
            return Err(TableError::NotANonterminal {
                line: line_no,
                name: row_name.to_owned(),
            });
        }
        if rows.contains(&row) {
            return Err(malformed(line_no, "duplicate row"));
        }
        if fields.len() - 1 > cols.len() {
            return Err(malformed(line_no, "more cells than columns"));
        }
        rows.push(row);
        for (i, &col) in cols.iter().enumerate() {
            let body = fields.get(i + 1).map_or("", |f| f.trim());
            if body.is_empty() {
                continue;
            }
            let mut alts = Vec::new();
            for alt in body.split(ALT_SEPARATOR) {
                let toks: Vec<&str> = alt.split_whitespace().collect();
                if toks.is_empty() {
                    return Err(malformed(line_no, "empty alternative in cell"));
                }
                if toks.contains(&EPSILON) {
                    if toks.len() != 1 {
                        return Err(malformed(line_no, "`@eps` must stand alone"));
                    }
                    alts.push(Vec::new());
                    continue;
                }
                let rhs = toks
                    .iter()
                    .map(|&t| {
                        g.lookup(t).ok_or_else(|| TableError::UnknownSymbol {
                            line: line_no,
                            name: t.to_owned(),
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                alts.push(rhs);
            }
            cell_rhs.push((row, col, alts));
        }
    }

    let mut rules = g.rules();
    let original = rules.len();
    let mut extra: Vec<(SymbolId, Vec<SymbolId>)> = Vec::new();
    for (row, _, alts) in &cell_rhs {
        for rhs in alts {
            if g.find_production(*row, rhs).is_none() && !extra.contains(&(*row, rhs.clone())) {
                extra.push((*row, rhs.clone()));
            }
        }
    }
    for (lhs, rhs) in &extra {
        rules.push((
            g.symbol_name(*lhs).to_owned(),
            rhs.iter().map(|&s| g.symbol_name(s).to_owned()).collect(),
        ));
    }
    let shadow = if extra.is_empty() {
        g.clone()
    } else {
        Grammar::from_rules(rules)?.with_name(g.name())
    };

    let mut table = ParseTable::new(name, rows, cols);
    for (row, col, alts) in cell_rhs {
        let prods = alts
            .iter()
            .map(|rhs| {
                shadow
                    .find_production(row, rhs)
                    .expect("every cell rhs is in the shadow grammar")
            })
            .collect();
        table.set_cell(row, col, prods);
    }
    let synthetic = shadow.productions()[original..]
        .iter()
        .map(|p| p.index)
        .collect();
    Ok(LoadedTable {
        table,
        grammar: shadow,
        synthetic,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::parse_grammar;
    use crate::sets::{compute_first, compute_follow};
    use crate::table::{build_table, conflicts, ConflictKind};

    const G: &str = "S -> a S | b | @eps ;";

    #[test]
    fn round_trip_computed() {
        let g = parse_grammar(G).unwrap().with_name("rt");
        let fs = compute_first(&g);
        let (t, _) = build_table(&g, &fs, &compute_follow(&g, &fs));
        let text = serialize_table(&t, &g);
        assert_eq!(text, "TABLE rt\n\ta\tb\t$\nS\ta S\tb\t@eps\n");
        let loaded = load_table(&text, &g).unwrap();
        assert!(loaded.synthetic.is_empty());
        assert_eq!(loaded.table, t);
        assert_eq!(serialize_table(&loaded.table, &loaded.grammar), text);
    }

    #[test]
    fn multi_entry_cells_and_unknown_kind() {
        let g = parse_grammar(G).unwrap();
        let loaded = load_table("TABLE x\n\ta\tb\t$\nS\ta S / b\t\t\n", &g).unwrap();
        let text = serialize_table(&loaded.table, &loaded.grammar);
        assert!(text.contains("a S / b"));
        let r = conflicts(&loaded.table);
        assert_eq!(r.entries[0].kind, ConflictKind::Unknown);
    }

    #[test]
    fn synthetic_rules_are_flagged_once() {
        let g = parse_grammar(G).unwrap();
        let loaded = load_table("TABLE x\n\ta\tb\t$\nS\tb a\tb a\n", &g).unwrap();
        assert_eq!(loaded.synthetic.len(), 1);
        assert_eq!(
            loaded.grammar.render_production(loaded.synthetic[0]),
            "S->b a"
        );
        assert_eq!(loaded.grammar.productions().len(), 4);
    }

    #[test]
    fn errors() {
        let g = parse_grammar(G).unwrap();
        let cases = [
            ("", "missing"),
            ("TABLES\n", "TABLE"),
            ("TABLE x\n\ta\tb\n", "`$`"),
            ("TABLE x\n\tq\t$\n", "unknown"),
            ("TABLE x\n\tS\t$\n", "terminal"),
            ("TABLE x\n\ta\t$\na\t\t\n", "nonterminal"),
            ("TABLE x\n\ta\t$\nS\tz\t\n", "unknown"),
            ("TABLE x\n\ta\t$\nS\ta @eps\t\n", "stand alone"),
            ("TABLE x\n\ta\t$\nS\t\t\t\n", "more cells"),
        ];
        for (text, needle) in cases {
            let e = load_table(text, &g).unwrap_err().to_string();
            assert!(e.contains(needle), "{text:?}: {e}");
        }
    }
}
