use std::collections::BTreeSet;

use thiserror::Error;

use super::ParseTable;
use crate::grammar::Grammar;
use crate::sets::Lookahead;

/// One differing cell, both sides as rhs renderings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellDiff {
    pub row: String,
    pub col: String,
    pub left: Vec<String>,
    pub right: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TableDiff {
    pub entries: Vec<CellDiff>,
}

impl TableDiff {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiffError {
    #[error("row sets differ")]
    RowsDiffer,
    #[error("column sets differ")]
    ColsDiffer,
}

/// Compares two tables cell by cell after aligning rows and columns by
/// symbol name. Each table is read through the grammar its cells index into.
/// Entries follow `a`'s row and column order.
pub fn diff_tables(
    a: &ParseTable,
    ga: &Grammar,
    b: &ParseTable,
    gb: &Grammar,
) -> Result<TableDiff, DiffError> {
    let row_names = |t: &ParseTable, g: &Grammar| -> BTreeSet<String> {
        t.rows()
            .iter()
            .map(|&r| g.symbol_name(r).to_owned())
            .collect()
    };
    let col_names = |t: &ParseTable, g: &Grammar| -> BTreeSet<String> {
        t.cols().iter().map(|c| c.name(g).to_owned()).collect()
    };
    if row_names(a, ga) != row_names(b, gb) {
        return Err(DiffError::RowsDiffer);
    }
    if col_names(a, ga) != col_names(b, gb) {
        return Err(DiffError::ColsDiffer);
    }

    let mut entries = Vec::new();
    for &row in a.rows() {
        let row_name = ga.symbol_name(row);
        let row_b = gb.lookup(row_name).expect("aligned rows");
        for &col in a.cols() {
            let col_b = match col {
                Lookahead::End => Lookahead::End,
                Lookahead::Terminal(t) => {
                    Lookahead::Terminal(gb.lookup(ga.symbol_name(t)).expect("aligned columns"))
                }
            };
            let left: Vec<String> = a.cell(row, col).iter().map(|&p| ga.render_rhs(p)).collect();
            let right: Vec<String> = b
                .cell(row_b, col_b)
                .iter()
                .map(|&p| gb.render_rhs(p))
                .collect();
            if left != right {
                entries.push(CellDiff {
                    row: row_name.to_owned(),
                    col: col.name(ga).to_owned(),
                    left,
                    right,
                });
            }
        }
    }
    Ok(TableDiff { entries })
}
