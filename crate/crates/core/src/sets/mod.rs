//! Nullability, FIRST and FOLLOW by fixpoint iteration.
//!
//! ε is never a set member: a nonterminal's ability to vanish is carried by
//! [`NullableSet`], so it can never leak into a parse-table column.

pub mod oracle;

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::grammar::{Grammar, SymbolId, SymbolKind};

/// Lookahead symbol: a terminal or the end-marker `$`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Lookahead {
    Terminal(SymbolId),
    End,
}

pub const END_MARKER: &str = "$";

impl Lookahead {
    pub fn name(self, g: &Grammar) -> &str {
        match self {
            Lookahead::Terminal(t) => g.symbol_name(t),
            Lookahead::End => END_MARKER,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NullableSet {
    members: BTreeSet<SymbolId>,
}

impl NullableSet {
    pub fn contains(&self, sym: SymbolId) -> bool {
        self.members.contains(&sym)
    }

    pub fn insert(&mut self, sym: SymbolId) -> bool {
        self.members.insert(sym)
    }

    pub fn iter(&self) -> impl Iterator<Item = SymbolId> + '_ {
        self.members.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// FIRST sets of nonterminals. Terminals have no entry; FIRST(t) = {t}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FirstSets {
    sets: Vec<Option<BTreeSet<SymbolId>>>,
    pub nullable: NullableSet,
}

/// FIRST of a symbol sequence.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SequenceFirst {
    pub terminals: BTreeSet<SymbolId>,
    pub nullable: bool,
}

impl FirstSets {
    /// Empty sets shaped for `g`, for callers that fill them in themselves.
    pub fn empty_for(g: &Grammar) -> FirstSets {
        FirstSets {
            sets: g
                .symbols()
                .iter()
                .map(|s| (s.kind == SymbolKind::Nonterminal).then(BTreeSet::new))
                .collect(),
            nullable: NullableSet::default(),
        }
    }

    /// FIRST(nt). Panics if `nt` is a terminal.
    pub fn of(&self, nt: SymbolId) -> &BTreeSet<SymbolId> {
        self.sets[nt.index()]
            .as_ref()
            .expect("FIRST is stored for nonterminals only")
    }

    pub fn insert(&mut self, nt: SymbolId, t: SymbolId) -> bool {
        self.sets[nt.index()]
            .as_mut()
            .expect("FIRST is stored for nonterminals only")
            .insert(t)
    }

    pub fn is_nullable(&self, sym: SymbolId) -> bool {
        self.nullable.contains(sym)
    }

    /// FIRST of `seq`: leading FIRSTs up to and including the first
    /// non-nullable symbol; nullable iff every symbol is (so `[]` is).
    pub fn of_sequence(&self, seq: &[SymbolId]) -> SequenceFirst {
        let mut out = SequenceFirst::default();
        for &sym in seq {
            match &self.sets[sym.index()] {
                None => {
                    out.terminals.insert(sym);
                    return out;
                }
                Some(first) => {
                    out.terminals.extend(first.iter().copied());
                    if !self.nullable.contains(sym) {
                        return out;
                    }
                }
            }
        }
        out.nullable = true;
        out
    }
}

/// FOLLOW sets of nonterminals over terminals and `$`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FollowSets {
    sets: Vec<BTreeSet<Lookahead>>,
}

impl FollowSets {
    pub fn empty_for(g: &Grammar) -> FollowSets {
        FollowSets {
            sets: vec![BTreeSet::new(); g.symbol_count()],
        }
    }

    pub fn of(&self, nt: SymbolId) -> &BTreeSet<Lookahead> {
        &self.sets[nt.index()]
    }

    pub fn insert(&mut self, nt: SymbolId, la: Lookahead) -> bool {
        self.sets[nt.index()].insert(la)
    }
}

/// Least fixpoint: A is nullable if some production of A has an all-nullable
/// rhs (the empty rhs included).
pub fn compute_nullable(g: &Grammar) -> NullableSet {
    let mut nullable = NullableSet::default();
    let mut changed = true;
    while changed {
        changed = false;
        for p in g.productions() {
            if !nullable.contains(p.lhs) && p.rhs.iter().all(|&s| nullable.contains(s)) {
                nullable.insert(p.lhs);
                changed = true;
            }
        }
    }
    nullable
}

/// Least fixpoint of the FIRST rules, productions visited in declaration
/// order on every pass.
pub fn compute_first(g: &Grammar) -> FirstSets {
    let mut fs = FirstSets::empty_for(g);
    fs.nullable = compute_nullable(g);
    let mut changed = true;
    while changed {
        changed = false;
        for p in g.productions() {
            let seq = fs.of_sequence(&p.rhs);
            for t in seq.terminals {
                changed |= fs.insert(p.lhs, t);
            }
        }
    }
    fs
}

/// Least fixpoint of the FOLLOW rules: `$` ∈ FOLLOW(start); for
/// `A -> α B β`, FIRST(β) ⊆ FOLLOW(B), and FOLLOW(A) ⊆ FOLLOW(B) when β is
/// nullable.
pub fn compute_follow(g: &Grammar, fs: &FirstSets) -> FollowSets {
    let mut follow = FollowSets::empty_for(g);
    follow.insert(g.start(), Lookahead::End);
    let mut changed = true;
    while changed {
        changed = false;
        for p in g.productions() {
            for (i, &b) in p.rhs.iter().enumerate() {
                if !g.is_nonterminal(b) {
                    continue;
                }
                let rest = fs.of_sequence(&p.rhs[i + 1..]);
                for t in rest.terminals {
                    changed |= follow.insert(b, Lookahead::Terminal(t));
                }
                if rest.nullable && p.lhs != b {
                    let inherited: Vec<Lookahead> = follow.of(p.lhs).iter().copied().collect();
                    for la in inherited {
                        changed |= follow.insert(b, la);
                    }
                }
            }
        }
    }
    follow
}

/// Names of `set` sorted bytewise, `$` last.
pub fn sorted_lookahead_names(g: &Grammar, set: &BTreeSet<Lookahead>) -> Vec<String> {
    let mut names: Vec<String> = set
        .iter()
        .filter_map(|la| match la {
            Lookahead::Terminal(t) => Some(g.symbol_name(*t).to_owned()),
            Lookahead::End => None,
        })
        .collect();
    names.sort();
    if set.contains(&Lookahead::End) {
        names.push(END_MARKER.to_owned());
    }
    names
}

fn brace(items: &[String]) -> String {
    format!("{{{}}}", items.join(", "))
}

/// One `FIRST(A) = {…}` line per nonterminal in declaration order; nullable
/// nonterminals end with `eps`.
pub fn dump_first(g: &Grammar, fs: &FirstSets) -> String {
    let mut out = String::new();
    for &nt in g.nonterminals() {
        let mut names: Vec<String> = fs
            .of(nt)
            .iter()
            .map(|&t| g.symbol_name(t).to_owned())
            .collect();
        names.sort();
        if fs.is_nullable(nt) {
            names.push("eps".to_owned());
        }
        let _ = writeln!(out, "FIRST({}) = {}", g.symbol_name(nt), brace(&names));
    }
    out
}

pub fn dump_follow(g: &Grammar, follow: &FollowSets) -> String {
    let mut out = String::new();
    for &nt in g.nonterminals() {
        let names = sorted_lookahead_names(g, follow.of(nt));
        let _ = writeln!(out, "FOLLOW({}) = {}", g.symbol_name(nt), brace(&names));
    }
    out
}

/// A set as written in a dump line: member names plus the `eps` flag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DumpEntry {
    pub function: String,
    pub symbol: String,
    pub members: BTreeSet<String>,
    pub eps: bool,
}

/// Reads lines of the `FIRST(A) = {a, b, eps}` shape. Blank lines and `#`
/// comments are skipped. Members may be separated by commas and/or spaces.
pub fn parse_dump(text: &str) -> Result<Vec<DumpEntry>, String> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = || format!("line {}: expected `F(A) = {{...}}`", n + 1);
        let (head, body) = line.split_once('=').ok_or_else(err)?;
        let head = head.trim();
        let open = head.find('(').ok_or_else(err)?;
        if !head.ends_with(')') {
            return Err(err());
        }
        let function = head[..open].trim().to_owned();
        let symbol = head[open + 1..head.len() - 1].trim().to_owned();
        let body = body.trim();
        let inner = body
            .strip_prefix('{')
            .and_then(|b| b.strip_suffix('}'))
            .ok_or_else(err)?;
        let mut members = BTreeSet::new();
        let mut eps = false;
        for item in inner.split(|c: char| c == ',' || c.is_whitespace()) {
            match item {
                "" => {}
                "eps" | "ε" | "ϵ" => eps = true,
                other => {
                    members.insert(other.to_owned());
                }
            }
        }
        out.push(DumpEntry {
            function,
            symbol,
            members,
            eps,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::parse_grammar;

    fn names(g: &Grammar, set: &BTreeSet<SymbolId>) -> Vec<String> {
        let mut v: Vec<_> = set.iter().map(|&s| g.symbol_name(s).to_owned()).collect();
        v.sort();
        v
    }

    #[test]
    fn no_nullable_without_epsilon() {
        let g = parse_grammar("A -> a ;").unwrap();
        assert!(compute_nullable(&g).is_empty());
    }

    #[test]
    fn sequence_first() {
        let g = parse_grammar("S -> A b ;\nA -> a | @eps ;").unwrap();
        let fs = compute_first(&g);
        let empty = fs.of_sequence(&[]);
        assert!(empty.nullable && empty.terminals.is_empty());
        let a = g.lookup("A").unwrap();
        let b = g.lookup("b").unwrap();
        let seq = fs.of_sequence(&[a, b]);
        assert_eq!(names(&g, &seq.terminals), ["a", "b"]);
        assert!(!seq.nullable);
        assert!(fs.of_sequence(&[a]).nullable);
    }

    #[test]
    fn follow_basics() {
        let g = parse_grammar("S -> A b ;\nA -> a ;").unwrap();
        let fl = compute_follow(&g, &compute_first(&g));
        let a = g.lookup("A").unwrap();
        assert_eq!(sorted_lookahead_names(&g, fl.of(a)), ["b"]);
        assert_eq!(sorted_lookahead_names(&g, fl.of(g.start())), ["$"]);

        let g = parse_grammar("S -> A ;\nA -> a ;").unwrap();
        let fl = compute_follow(&g, &compute_first(&g));
        assert_eq!(
            sorted_lookahead_names(&g, fl.of(g.lookup("A").unwrap())),
            ["$"]
        );
    }

    #[test]
    fn dump_shape() {
        let g = parse_grammar("S -> a ;").unwrap();
        let fs = compute_first(&g);
        assert_eq!(dump_first(&g, &fs), "FIRST(S) = {a}\n");
        assert_eq!(
            dump_follow(&g, &compute_follow(&g, &fs)),
            "FOLLOW(S) = {$}\n"
        );

        let g = parse_grammar("S -> b S | a S | @eps ;").unwrap();
        let fs = compute_first(&g);
        assert_eq!(dump_first(&g, &fs), "FIRST(S) = {a, b, eps}\n");
    }

    #[test]
    fn dump_parse_accepts_printed_variants() {
        let e = parse_dump("FIRST(NP3) = {conjunction, aw, ε}\nFOLLOW(S)={ noun , $ }\n").unwrap();
        assert_eq!(e[0].symbol, "NP3");
        assert!(e[0].eps);
        assert_eq!(e[0].members.len(), 2);
        assert_eq!(e[1].function, "FOLLOW");
        assert!(e[1].members.contains("$"));
        assert!(parse_dump("FIRST S = {}").is_err());
    }
}
