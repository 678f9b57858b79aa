//! Context-free grammars over an interned symbol table.
//!
//! A [`Grammar`] is immutable once built. Every constructor funnels through
//! [`Grammar::from_rules`], which interns symbols in first-appearance order,
//! classifies a symbol as a nonterminal iff it occurs on some left-hand side,
//! and takes the first left-hand side as the start symbol. Two grammars with
//! the same production list therefore have identical symbol tables, which is
//! what makes structural equality and text round-trips line up.

mod factor;
mod recursion;
mod text;

use std::collections::{HashMap, HashSet};
use std::fmt;

use thiserror::Error;

pub use factor::{common_prefix_report, left_factor, PrefixGroup};
pub use recursion::detect_left_recursion;
pub use text::{parse_grammar, serialize_grammar};

/// Spelling of the empty right-hand side in text formats.
pub const EPSILON: &str = "@eps";

/// Dense index into a grammar's symbol table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SymbolId(u32);

impl SymbolId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Dense index into a grammar's production list (declaration order).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProductionId(u32);

impl ProductionId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SymbolKind {
    Terminal,
    Nonterminal,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolEntry {
    pub name: String,
    pub kind: SymbolKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Production {
    pub index: ProductionId,
    pub lhs: SymbolId,
    /// Empty for an ε-production.
    pub rhs: Vec<SymbolId>,
}

impl Production {
    pub fn is_epsilon(&self) -> bool {
        self.rhs.is_empty()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GrammarError {
    #[error("grammar has no productions")]
    Empty,
    #[error("{line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("duplicate production {lhs} -> {rhs}")]
    DuplicateProduction { lhs: String, rhs: String },
    #[error("invalid symbol name {0:?}")]
    InvalidSymbolName(String),
}

/// Whether `name` can be written as a single token of the grammar text format.
pub fn is_valid_symbol_name(name: &str) -> bool {
    !name.is_empty()
        && name != EPSILON
        && !name.contains("->")
        && !name
            .chars()
            .any(|c| c.is_whitespace() || matches!(c, '|' | ';' | '#'))
}

#[derive(Clone, Debug)]
pub struct Grammar {
    name: String,
    symbols: Vec<SymbolEntry>,
    by_name: HashMap<String, SymbolId>,
    productions: Vec<Production>,
    start: SymbolId,
    by_lhs: Vec<Vec<ProductionId>>,
    nonterminals: Vec<SymbolId>,
    terminals: Vec<SymbolId>,
}

/// Structural equality: same symbol table, same productions in the same
/// order, same start. The display name is not part of the structure.
impl PartialEq for Grammar {
    fn eq(&self, other: &Self) -> bool {
        self.symbols == other.symbols
            && self.productions == other.productions
            && self.start == other.start
    }
}

impl Eq for Grammar {}

impl Grammar {
    /// Builds a grammar from name-level rules `(lhs, rhs)` in declaration order.
    pub fn from_rules<I, L, R, S>(rules: I) -> Result<Grammar, GrammarError>
    where
        I: IntoIterator<Item = (L, R)>,
        L: AsRef<str>,
        R: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let rules: Vec<(String, Vec<String>)> = rules
            .into_iter()
            .map(|(lhs, rhs)| {
                (
                    lhs.as_ref().to_owned(),
                    rhs.into_iter().map(|s| s.as_ref().to_owned()).collect(),
                )
            })
            .collect();
        if rules.is_empty() {
            return Err(GrammarError::Empty);
        }

        let lhs_names: HashSet<&str> = rules.iter().map(|(l, _)| l.as_str()).collect();
        let mut symbols: Vec<SymbolEntry> = Vec::new();
        let mut by_name: HashMap<String, SymbolId> = HashMap::new();
        let mut intern = |name: &str| -> Result<SymbolId, GrammarError> {
            if let Some(&id) = by_name.get(name) {
                return Ok(id);
            }
            if !is_valid_symbol_name(name) {
                return Err(GrammarError::InvalidSymbolName(name.to_owned()));
            }
            let id = SymbolId(symbols.len() as u32);
            let kind = if lhs_names.contains(name) {
                SymbolKind::Nonterminal
            } else {
                SymbolKind::Terminal
            };
            symbols.push(SymbolEntry {
                name: name.to_owned(),
                kind,
            });
            by_name.insert(name.to_owned(), id);
            Ok(id)
        };

        let mut productions = Vec::with_capacity(rules.len());
        let mut seen: HashSet<(SymbolId, Vec<SymbolId>)> = HashSet::new();
        for (lhs, rhs) in &rules {
            let lhs_id = intern(lhs)?;
            let rhs_ids = rhs
                .iter()
                .map(|s| intern(s))
                .collect::<Result<Vec<_>, _>>()?;
            if !seen.insert((lhs_id, rhs_ids.clone())) {
                return Err(GrammarError::DuplicateProduction {
                    lhs: lhs.clone(),
                    rhs: render_rhs_names(rhs),
                });
            }
            productions.push(Production {
                index: ProductionId(productions.len() as u32),
                lhs: lhs_id,
                rhs: rhs_ids,
            });
        }

        let mut by_lhs = vec![Vec::new(); symbols.len()];
        let mut nonterminals = Vec::new();
        for p in &productions {
            if by_lhs[p.lhs.index()].is_empty() {
                nonterminals.push(p.lhs);
            }
            by_lhs[p.lhs.index()].push(p.index);
        }
        let terminals = (0..symbols.len() as u32)
            .map(SymbolId)
            .filter(|id| symbols[id.index()].kind == SymbolKind::Terminal)
            .collect();

        Ok(Grammar {
            name: "grammar".to_owned(),
            start: productions[0].lhs,
            symbols,
            by_name,
            productions,
            by_lhs,
            nonterminals,
            terminals,
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn start(&self) -> SymbolId {
        self.start
    }

    pub fn symbols(&self) -> &[SymbolEntry] {
        &self.symbols
    }

    pub fn productions(&self) -> &[Production] {
        &self.productions
    }

    pub fn production(&self, id: ProductionId) -> &Production {
        &self.productions[id.index()]
    }

    /// Productions of `lhs` in declaration order (empty for terminals).
    pub fn productions_of(&self, lhs: SymbolId) -> impl Iterator<Item = &Production> + '_ {
        self.by_lhs[lhs.index()]
            .iter()
            .map(move |&id| &self.productions[id.index()])
    }

    /// Nonterminals in order of their first left-hand-side occurrence.
    pub fn nonterminals(&self) -> &[SymbolId] {
        &self.nonterminals
    }

    /// Terminals in order of first appearance in the grammar text.
    pub fn terminals(&self) -> &[SymbolId] {
        &self.terminals
    }

    /// Every symbol id, in table order.
    pub fn symbol_ids(&self) -> impl Iterator<Item = SymbolId> {
        (0..self.symbols.len() as u32).map(SymbolId)
    }

    pub fn symbol_count(&self) -> usize {
        self.symbols.len()
    }

    pub fn lookup(&self, name: &str) -> Option<SymbolId> {
        self.by_name.get(name).copied()
    }

    pub fn symbol_name(&self, id: SymbolId) -> &str {
        &self.symbols[id.index()].name
    }

    pub fn kind(&self, id: SymbolId) -> SymbolKind {
        self.symbols[id.index()].kind
    }

    pub fn is_terminal(&self, id: SymbolId) -> bool {
        self.kind(id) == SymbolKind::Terminal
    }

    pub fn is_nonterminal(&self, id: SymbolId) -> bool {
        self.kind(id) == SymbolKind::Nonterminal
    }

    /// The production list as `(lhs, rhs)` names, suitable for `from_rules`.
    pub fn rules(&self) -> Vec<(String, Vec<String>)> {
        self.productions
            .iter()
            .map(|p| {
                (
                    self.symbol_name(p.lhs).to_owned(),
                    p.rhs
                        .iter()
                        .map(|&s| self.symbol_name(s).to_owned())
                        .collect(),
                )
            })
            .collect()
    }

    /// Finds the production `lhs -> rhs` by symbol ids.
    pub fn find_production(&self, lhs: SymbolId, rhs: &[SymbolId]) -> Option<ProductionId> {
        self.productions_of(lhs)
            .find(|p| p.rhs == rhs)
            .map(|p| p.index)
    }

    /// Space-separated rhs names, `@eps` for ε.
    pub fn render_rhs(&self, id: ProductionId) -> String {
        let p = self.production(id);
        if p.rhs.is_empty() {
            EPSILON.to_owned()
        } else {
            p.rhs
                .iter()
                .map(|&s| self.symbol_name(s))
                .collect::<Vec<_>>()
                .join(" ")
        }
    }

    /// `A->x y`, the form used in parse traces.
    pub fn render_production(&self, id: ProductionId) -> String {
        format!(
            "{}->{}",
            self.symbol_name(self.production(id).lhs),
            self.render_rhs(id)
        )
    }
}

pub(crate) fn render_rhs_names(rhs: &[String]) -> String {
    if rhs.is_empty() {
        EPSILON.to_owned()
    } else {
        rhs.join(" ")
    }
}

impl fmt::Display for Grammar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize_grammar(self))
    }
}
