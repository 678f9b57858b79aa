//! Predictive parse tables.
//!
//! A cell holds an ordered list of productions; an empty cell is an error
//! entry, more than one production is a conflict. Conflicts are data: they
//! are reported, never dropped, and the driver's policy decides what to do.

mod diff;
mod text;

use std::collections::HashMap;

use serde::Serialize;

use crate::grammar::{Grammar, ProductionId, SymbolId};
use crate::sets::{FirstSets, FollowSets, Lookahead};

pub use diff::{diff_tables, CellDiff, DiffError, TableDiff};
pub use text::{
    load_table, serialize_table, table_to_json, LoadedTable, TableDocument, TableError,
};

/// How a production entered a cell during construction.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EntryOrigin {
    /// Placed because the lookahead is in FIRST(rhs).
    pub first: bool,
    /// Placed because the rhs is nullable and the lookahead is in FOLLOW(lhs).
    pub follow: bool,
}

#[derive(Clone, Debug)]
pub struct ParseTable {
    name: String,
    rows: Vec<SymbolId>,
    cols: Vec<Lookahead>,
    cells: Vec<Vec<ProductionId>>,
    /// Parallel to `cells`; present only for tables built from sets.
    origins: Option<Vec<Vec<EntryOrigin>>>,
    row_of: HashMap<SymbolId, usize>,
    col_of: HashMap<Lookahead, usize>,
}

/// Cell-for-cell equality; construction provenance is not compared.
impl PartialEq for ParseTable {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.rows == other.rows
            && self.cols == other.cols
            && self.cells == other.cells
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConflictKind {
    FirstFirst,
    FirstFollow,
    /// The table was loaded from text; provenance is not available.
    Unknown,
}

impl ConflictKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ConflictKind::FirstFirst => "first-first",
            ConflictKind::FirstFollow => "first-follow",
            ConflictKind::Unknown => "unknown",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Conflict {
    pub row: SymbolId,
    pub col: Lookahead,
    pub productions: Vec<ProductionId>,
    pub kind: ConflictKind,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConflictReport {
    pub entries: Vec<Conflict>,
}

impl ConflictReport {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn find(&self, row: SymbolId, col: Lookahead) -> Option<&Conflict> {
        self.entries.iter().find(|c| c.row == row && c.col == col)
    }

    /// One line per conflict: `M[A, a]: first-follow: A->x | A->@eps`.
    pub fn render(&self, g: &Grammar) -> String {
        let mut out = String::new();
        for c in &self.entries {
            let prods: Vec<String> = c
                .productions
                .iter()
                .map(|&p| g.render_production(p))
                .collect();
            out.push_str(&format!(
                "M[{}, {}]: {}: {}\n",
                g.symbol_name(c.row),
                c.col.name(g),
                c.kind.as_str(),
                prods.join(" | ")
            ));
        }
        out
    }
}

impl ParseTable {
    /// An empty table over the given rows and columns.
    pub fn new(name: impl Into<String>, rows: Vec<SymbolId>, cols: Vec<Lookahead>) -> ParseTable {
        let row_of = rows.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let col_of = cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        ParseTable {
            name: name.into(),
            cells: vec![Vec::new(); rows.len() * cols.len()],
            origins: None,
            rows,
            cols,
            row_of,
            col_of,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rows(&self) -> &[SymbolId] {
        &self.rows
    }

    pub fn cols(&self) -> &[Lookahead] {
        &self.cols
    }

    fn slot(&self, row: SymbolId, col: Lookahead) -> Option<usize> {
        let r = *self.row_of.get(&row)?;
        let c = *self.col_of.get(&col)?;
        Some(r * self.cols.len() + c)
    }

    /// Productions in M[row, col]; empty for error entries and for symbols
    /// outside the table.
    pub fn cell(&self, row: SymbolId, col: Lookahead) -> &[ProductionId] {
        self.slot(row, col).map_or(&[], |i| &self.cells[i])
    }

    /// Appends `p` to M[row, col] unless already present.
    pub fn push(&mut self, row: SymbolId, col: Lookahead, p: ProductionId) -> bool {
        let i = self.slot(row, col).expect("cell inside the table");
        if self.cells[i].contains(&p) {
            return false;
        }
        self.cells[i].push(p);
        true
    }

    /// Replaces the contents of M[row, col].
    pub fn set_cell(&mut self, row: SymbolId, col: Lookahead, prods: Vec<ProductionId>) {
        let i = self.slot(row, col).expect("cell inside the table");
        self.cells[i] = prods;
        if let Some(origins) = &mut self.origins {
            origins[i] = vec![EntryOrigin::default(); self.cells[i].len()];
        }
    }

    pub fn origins(&self, row: SymbolId, col: Lookahead) -> Option<&[EntryOrigin]> {
        let i = self.slot(row, col)?;
        self.origins.as_ref().map(|o| o[i].as_slice())
    }

    /// Columns of `row` with a non-empty cell, in column order.
    pub fn expected(&self, row: SymbolId) -> Vec<Lookahead> {
        self.cols
            .iter()
            .copied()
            .filter(|&c| !self.cell(row, c).is_empty())
            .collect()
    }

    /// Iterates `(row, col, productions)` over every cell in row-major order.
    pub fn iter_cells(&self) -> impl Iterator<Item = (SymbolId, Lookahead, &[ProductionId])> + '_ {
        self.rows.iter().enumerate().flat_map(move |(r, &row)| {
            self.cols
                .iter()
                .enumerate()
                .map(move |(c, &col)| (row, col, self.cells[r * self.cols.len() + c].as_slice()))
        })
    }
}

/// Builds M from FIRST/FOLLOW: each production goes to every FIRST(rhs)
/// column, and, when the rhs is nullable, to every FOLLOW(lhs) column
/// including `$`. Rows follow nonterminal declaration order, columns terminal
/// first appearance with `$` last; cells keep declaration order.
pub fn build_table(g: &Grammar, fs: &FirstSets, fl: &FollowSets) -> (ParseTable, ConflictReport) {
    let mut cols: Vec<Lookahead> = g
        .terminals()
        .iter()
        .map(|&t| Lookahead::Terminal(t))
        .collect();
    cols.push(Lookahead::End);
    let mut table = ParseTable::new(g.name(), g.nonterminals().to_vec(), cols);
    let mut origins = vec![Vec::<EntryOrigin>::new(); table.cells.len()];

    for p in g.productions() {
        let seq = fs.of_sequence(&p.rhs);
        let mut targets: Vec<(Lookahead, EntryOrigin)> = seq
            .terminals
            .iter()
            .map(|&t| {
                (
                    Lookahead::Terminal(t),
                    EntryOrigin {
                        first: true,
                        follow: false,
                    },
                )
            })
            .collect();
        if seq.nullable {
            for &la in fl.of(p.lhs) {
                match targets.iter_mut().find(|(c, _)| *c == la) {
                    Some((_, o)) => o.follow = true,
                    None => targets.push((
                        la,
                        EntryOrigin {
                            first: false,
                            follow: true,
                        },
                    )),
                }
            }
        }
        for (col, origin) in targets {
            let i = table.slot(p.lhs, col).expect("column for every terminal");
            table.cells[i].push(p.index);
            origins[i].push(origin);
        }
    }
    table.origins = Some(origins);
    let report = conflicts(&table);
    (table, report)
}

/// Re-derives the conflict report from cell cardinalities.
pub fn conflicts(t: &ParseTable) -> ConflictReport {
    let mut entries = Vec::new();
    for (row, col, prods) in t.iter_cells() {
        if prods.len() < 2 {
            continue;
        }
        let kind = match t.origins(row, col) {
            None => ConflictKind::Unknown,
            Some(o) if o.iter().any(|e| e.follow) => ConflictKind::FirstFollow,
            Some(_) => ConflictKind::FirstFirst,
        };
        entries.push(Conflict {
            row,
            col,
            productions: prods.to_vec(),
            kind,
        });
    }
    ConflictReport { entries }
}
