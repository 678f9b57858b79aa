use serde::Serialize;

use crate::grammar::{Grammar, ProductionId, EPSILON};

/// Interior nodes are nonterminals whose children follow the applied rhs; an
/// ε expansion has a single `@eps` leaf.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParseTree {
    pub symbol: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub surface: Option<String>,
    pub children: Vec<ParseTree>,
}

impl ParseTree {
    fn leaf(symbol: &str) -> ParseTree {
        ParseTree {
            symbol: symbol.to_owned(),
            surface: None,
            children: Vec::new(),
        }
    }

    pub fn is_epsilon(&self) -> bool {
        self.symbol == EPSILON && self.children.is_empty()
    }

    /// Terminal leaves left to right, ε markers excluded.
    pub fn leaves(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a str>) {
        if self.surface_slot() {
            out.push(&self.symbol);
        }
        for c in &self.children {
            c.collect_leaves(out);
        }
    }

    fn surface_slot(&self) -> bool {
        self.children.is_empty() && !self.is_epsilon()
    }
}

/// Rebuilds the tree of a leftmost derivation. Panics if `derivation` is not
/// a complete leftmost derivation from the start symbol.
pub fn tree_from_derivation(g: &Grammar, derivation: &[ProductionId]) -> ParseTree {
    fn build(g: &Grammar, it: &mut std::slice::Iter<'_, ProductionId>) -> ParseTree {
        let p = g.production(*it.next().expect("derivation covers the tree"));
        let children = if p.rhs.is_empty() {
            vec![ParseTree::leaf(EPSILON)]
        } else {
            p.rhs
                .iter()
                .map(|&s| {
                    if g.is_terminal(s) {
                        ParseTree::leaf(g.symbol_name(s))
                    } else {
                        build(g, it)
                    }
                })
                .collect()
        };
        ParseTree {
            symbol: g.symbol_name(p.lhs).to_owned(),
            surface: None,
            children,
        }
    }
    let mut it = derivation.iter();
    let t = build(g, &mut it);
    assert!(it.next().is_none(), "derivation longer than its tree");
    t
}

/// Attaches words to terminal leaves in order. Extra words are ignored.
pub fn attach_surfaces<S: AsRef<str>>(t: &mut ParseTree, words: &[S]) {
    fn walk<S: AsRef<str>>(t: &mut ParseTree, words: &mut std::slice::Iter<'_, S>) {
        if t.surface_slot() {
            t.surface = words.next().map(|w| w.as_ref().to_owned());
        }
        for c in &mut t.children {
            walk(c, words);
        }
    }
    walk(t, &mut words.iter());
}

/// `(S (NP (modifier একটি) ...) ...)`; terminal leaves are `(tag)` or
/// `(tag surface)`, ε is a bare `@eps`.
pub fn tree_to_bracketed(t: &ParseTree) -> String {
    let mut out = String::new();
    write(t, &mut out);
    out
}

fn write(t: &ParseTree, out: &mut String) {
    if t.is_epsilon() {
        out.push_str(EPSILON);
        return;
    }
    out.push('(');
    out.push_str(&t.symbol);
    if let Some(s) = &t.surface {
        out.push(' ');
        out.push_str(s);
    }
    for c in &t.children {
        out.push(' ');
        write(c, out);
    }
    out.push(')');
}
