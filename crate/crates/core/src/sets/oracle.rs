//! Brute-force derivation oracles.
//!
//! Nothing here consults the fixpoint code: every answer comes from
//! enumerating derivations. For the leftmost searches depth counts
//! derivation steps (one production applied = one step); they are
//! breadth-first with a global visited set, so each sentential form is
//! explored at its minimum depth. The FOLLOW search bounds derivation tree
//! height instead, which covers every derivation of that many steps.

use std::collections::{BTreeSet, HashSet, VecDeque};

use thiserror::Error;

use super::{FirstSets, FollowSets, Lookahead};
use crate::grammar::{Grammar, SymbolId};

/// Enumeration cap on distinct sentential forms per oracle call.
pub const FORM_CAP: usize = 1_000_000;
/// Largest grammar the oracles accept.
pub const MAX_NONTERMINALS: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("grammar has {0} nonterminals, oracle limit is {MAX_NONTERMINALS}")]
    TooLarge(usize),
    #[error("enumeration exceeded {FORM_CAP} sentential forms")]
    BudgetExceeded,
}

fn guard(g: &Grammar) -> Result<(), OracleError> {
    let n = g.nonterminals().len();
    if n > MAX_NONTERMINALS {
        Err(OracleError::TooLarge(n))
    } else {
        Ok(())
    }
}

/// Cut a form after its first terminal: nothing to its right can ever lead.
fn truncate_after_terminal(g: &Grammar, form: &mut Vec<SymbolId>) {
    if let Some(i) = form.iter().position(|&s| g.is_terminal(s)) {
        form.truncate(i + 1);
    }
}

/// FIRST and nullability by enumerating leftmost derivations of each
/// nonterminal to `depth` steps.
pub fn brute_force_first(g: &Grammar, depth: usize) -> Result<FirstSets, OracleError> {
    guard(g)?;
    let mut fs = FirstSets::empty_for(g);
    let mut forms = 0usize;
    for &nt in g.nonterminals() {
        let mut visited: HashSet<Vec<SymbolId>> = HashSet::new();
        let mut queue = VecDeque::from([(vec![nt], 0usize)]);
        visited.insert(vec![nt]);
        while let Some((form, d)) = queue.pop_front() {
            let Some(&head) = form.first() else {
                fs.nullable.insert(nt);
                continue;
            };
            if g.is_terminal(head) {
                fs.insert(nt, head);
                continue;
            }
            if d == depth {
                continue;
            }
            for p in g.productions_of(head) {
                let mut next = p.rhs.clone();
                next.extend_from_slice(&form[1..]);
                truncate_after_terminal(g, &mut next);
                if visited.insert(next.clone()) {
                    forms += 1;
                    if forms > FORM_CAP {
                        return Err(OracleError::BudgetExceeded);
                    }
                    queue.push_back((next, d + 1));
                }
            }
        }
    }
    Ok(fs)
}

/// A frontier leaf: a terminal, or a nonterminal left unexpanded.
type Leaf = SymbolId;

/// What a set of partial derivation trees rooted at one symbol can show
/// from the outside: the (first, last) leaf pairs of nonempty frontiers,
/// whether an empty frontier is possible, and every adjacent
/// (nonterminal leaf, terminal leaf) pair seen inside some frontier.
#[derive(Clone, Default)]
struct Summary {
    ends: HashSet<(Leaf, Leaf)>,
    empty: bool,
    inner: BTreeSet<(SymbolId, SymbolId)>,
}

/// FOLLOW by enumerating partial derivation trees of `start $` of height at
/// most `depth`.
///
/// A sentential form is the frontier of a derivation tree in which any
/// nonterminal may be left unexpanded. Children of a node are independent,
/// so per symbol it is enough to keep the first and last leaf of each
/// possible frontier; adjacency across sibling boundaries is checked for
/// every combination of those ends. `A` followed by terminal `a` (or by the
/// trailing `$`) in some frontier witnesses `a ∈ FOLLOW(A)`.
pub fn brute_force_follow(g: &Grammar, depth: usize) -> Result<FollowSets, OracleError> {
    guard(g)?;
    let leaf = |s: SymbolId| Summary {
        ends: HashSet::from([(s, s)]),
        empty: false,
        inner: BTreeSet::new(),
    };
    let mut level: Vec<Summary> = g.symbol_ids().map(leaf).collect();

    for _ in 0..depth {
        let mut next = level.clone();
        for p in g.productions() {
            // Frontier ends of the rhs prefix read so far; None = empty.
            let mut states: HashSet<Option<(Leaf, Leaf)>> = HashSet::from([None]);
            let out = &mut next[p.lhs.index()];
            for &y in &p.rhs {
                let child = &level[y.index()];
                out.inner.extend(child.inner.iter().copied());
                let mut grown = HashSet::new();
                for &st in &states {
                    if child.empty {
                        grown.insert(st);
                    }
                    for &(f, l) in &child.ends {
                        match st {
                            None => {
                                grown.insert(Some((f, l)));
                            }
                            Some((first, last)) => {
                                if g.is_nonterminal(last) && g.is_terminal(f) {
                                    out.inner.insert((last, f));
                                }
                                grown.insert(Some((first, l)));
                            }
                        }
                    }
                }
                if grown.len() > FORM_CAP {
                    return Err(OracleError::BudgetExceeded);
                }
                states = grown;
            }
            for st in states {
                match st {
                    None => out.empty = true,
                    Some(e) => {
                        out.ends.insert(e);
                    }
                }
            }
        }
        level = next;
    }

    let mut follow = FollowSets::empty_for(g);
    let top = &level[g.start().index()];
    for &(a, t) in &top.inner {
        follow.insert(a, Lookahead::Terminal(t));
    }
    for &(_, last) in &top.ends {
        if g.is_nonterminal(last) {
            follow.insert(last, Lookahead::End);
        }
    }
    Ok(follow)
}

/// Nonterminals A with A ⇒+ A… found by leftmost derivations of at most
/// `depth` steps in which no terminal reaches the front.
pub fn left_recursive_oracle(g: &Grammar, depth: usize) -> Result<BTreeSet<SymbolId>, OracleError> {
    guard(g)?;
    let mut out = BTreeSet::new();
    let mut forms = 0usize;
    for &nt in g.nonterminals() {
        let mut visited: HashSet<Vec<SymbolId>> = HashSet::new();
        let mut queue = VecDeque::from([(vec![nt], 0usize)]);
        'search: while let Some((form, d)) = queue.pop_front() {
            if d == depth {
                continue;
            }
            let head = form[0];
            for p in g.productions_of(head) {
                let mut next = p.rhs.clone();
                next.extend_from_slice(&form[1..]);
                truncate_after_terminal(g, &mut next);
                match next.first() {
                    Some(&h) if h == nt => {
                        out.insert(nt);
                        break 'search;
                    }
                    Some(&h) if g.is_nonterminal(h) && visited.insert(next.clone()) => {
                        forms += 1;
                        if forms > FORM_CAP {
                            return Err(OracleError::BudgetExceeded);
                        }
                        queue.push_back((next, d + 1));
                    }
                    _ => {}
                }
            }
        }
    }
    Ok(out)
}

/// All terminal strings of length ≤ `max_len` derivable from each
/// nonterminal, by bottom-up tabulation to a fixpoint. Index by symbol id;
/// terminal slots are empty.
pub fn derivable_strings_all(g: &Grammar, max_len: usize) -> Vec<BTreeSet<Vec<SymbolId>>> {
    let mut lang: Vec<BTreeSet<Vec<SymbolId>>> = vec![BTreeSet::new(); g.symbol_count()];
    let mut changed = true;
    while changed {
        changed = false;
        for p in g.productions() {
            let mut acc: BTreeSet<Vec<SymbolId>> = BTreeSet::from([Vec::new()]);
            for &sym in &p.rhs {
                let mut next = BTreeSet::new();
                for prefix in &acc {
                    if g.is_terminal(sym) {
                        if prefix.len() < max_len {
                            let mut s = prefix.clone();
                            s.push(sym);
                            next.insert(s);
                        }
                    } else {
                        for tail in &lang[sym.index()] {
                            if prefix.len() + tail.len() <= max_len {
                                let mut s = prefix.clone();
                                s.extend_from_slice(tail);
                                next.insert(s);
                            }
                        }
                    }
                }
                acc = next;
                if acc.is_empty() {
                    break;
                }
            }
            for s in acc {
                changed |= lang[p.lhs.index()].insert(s);
            }
        }
    }
    lang
}

/// Terminal strings of length ≤ `max_len` derivable from the start symbol.
pub fn derivable_strings(g: &Grammar, max_len: usize) -> BTreeSet<Vec<SymbolId>> {
    derivable_strings_all(g, max_len).swap_remove(g.start().index())
}

/// As [`derivable_strings`], with symbols rendered as names.
pub fn derivable_sentences(g: &Grammar, max_len: usize) -> BTreeSet<Vec<String>> {
    derivable_strings(g, max_len)
        .into_iter()
        .map(|s| s.iter().map(|&t| g.symbol_name(t).to_owned()).collect())
        .collect()
}
