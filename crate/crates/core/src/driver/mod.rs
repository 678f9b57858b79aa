//! Table-driven predictive parsing machine.

mod tree;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::grammar::{Grammar, ProductionId, SymbolId};
use crate::sets::{Lookahead, END_MARKER};
use crate::table::ParseTable;

pub use tree::{attach_surfaces, tree_from_derivation, tree_to_bracketed, ParseTree};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum DriverMode {
    /// Only the first entry of a multi-entry cell is used.
    #[default]
    Deterministic,
    /// Cell entries are tried in order, depth-first.
    Backtracking,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DriverPolicy {
    pub mode: DriverMode,
    /// Maximum number of nonterminal expansions over the whole search.
    pub step_budget: usize,
}

pub const DEFAULT_STEP_BUDGET: usize = 100_000;

impl Default for DriverPolicy {
    fn default() -> Self {
        DriverPolicy {
            mode: DriverMode::Deterministic,
            step_budget: DEFAULT_STEP_BUDGET,
        }
    }
}

impl DriverPolicy {
    pub fn backtracking() -> Self {
        DriverPolicy {
            mode: DriverMode::Backtracking,
            ..Default::default()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RejectReason {
    EmptyCell,
    TerminalMismatch,
    InputExhaustedStackNonempty,
    InputRemainingStackEmpty,
    BudgetExhausted,
}

impl RejectReason {
    pub fn as_str(self) -> &'static str {
        match self {
            RejectReason::EmptyCell => "empty-cell",
            RejectReason::TerminalMismatch => "terminal-mismatch",
            RejectReason::InputExhaustedStackNonempty => "input-exhausted-stack-nonempty",
            RejectReason::InputRemainingStackEmpty => "input-remaining-stack-empty",
            RejectReason::BudgetExhausted => "budget-exhausted",
        }
    }
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RejectInfo {
    /// Token index of the lookahead; the input length when it is `$`.
    pub position: usize,
    pub stack_top: String,
    /// Columns with a nonempty cell in the stack top's row; empty when the
    /// top is a terminal or `$`.
    pub expected: Vec<String>,
    pub reason: RejectReason,
}

impl fmt::Display for RejectInfo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} at token {}, expected {{{}}}",
            self.reason,
            self.position,
            self.expected.join(", ")
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Accepted,
    Rejected,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParseOutcome {
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reject: Option<RejectInfo>,
}

impl ParseOutcome {
    pub fn accepted(&self) -> bool {
        self.verdict == Verdict::Accepted
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "detail", rename_all = "lowercase")]
pub enum Action {
    /// The initial configuration.
    Start,
    Apply(String),
    Matched(String),
    Accept,
    Reject(RejectReason),
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Action::Start => Ok(()),
            Action::Apply(p) => f.write_str(p),
            Action::Matched(t) => write!(f, "matched {t}"),
            Action::Accept => f.write_str("Sentence is accepted"),
            Action::Reject(r) => write!(f, "Sentence is rejected: {r}"),
        }
    }
}

/// Machine configuration after `action`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MoveRecord {
    /// Bottom (`$`) first.
    pub stack: Vec<String>,
    /// Remaining tags followed by `$`.
    pub input: Vec<String>,
    pub action: Action,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DriverError {
    #[error("tag {tag:?} at token {position} is not a terminal of the grammar")]
    UnknownTerminal { tag: String, position: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseRun {
    pub outcome: ParseOutcome,
    pub moves: Vec<MoveRecord>,
    /// Present only for accepted runs.
    pub tree: Option<ParseTree>,
    /// Productions applied, in leftmost-derivation order.
    pub derivation: Vec<ProductionId>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Item {
    End,
    Sym(SymbolId),
}

#[derive(Clone)]
struct Machine {
    stack: Vec<Item>,
    pos: usize,
    derivation: Vec<ProductionId>,
    /// Index taken at each choice point, for replay.
    choices: Vec<usize>,
    /// Only the replay of the reported branch keeps a trace.
    moves: Option<Vec<MoveRecord>>,
}

enum Step {
    Continue,
    Accept,
    Reject(RejectInfo),
    /// Alternatives for the top nonterminal, in cell order.
    Choice(SymbolId, Vec<ProductionId>),
}

struct Ctx<'a> {
    table: &'a ParseTable,
    g: &'a Grammar,
    input: &'a [SymbolId],
}

impl Ctx<'_> {
    fn lookahead(&self, pos: usize) -> Lookahead {
        self.input
            .get(pos)
            .map_or(Lookahead::End, |&t| Lookahead::Terminal(t))
    }

    fn record(&self, m: &mut Machine, action: Action) {
        let Some(moves) = &mut m.moves else { return };
        let stack = m
            .stack
            .iter()
            .map(|i| match i {
                Item::End => END_MARKER.to_owned(),
                Item::Sym(s) => self.g.symbol_name(*s).to_owned(),
            })
            .collect();
        let mut input: Vec<String> = self.input[m.pos..]
            .iter()
            .map(|&t| self.g.symbol_name(t).to_owned())
            .collect();
        input.push(END_MARKER.to_owned());
        moves.push(MoveRecord {
            stack,
            input,
            action,
        });
    }

    fn expected(&self, x: SymbolId) -> Vec<String> {
        self.table
            .expected(x)
            .into_iter()
            .map(|c| c.name(self.g).to_owned())
            .collect()
    }

    fn reject(&self, m: &mut Machine, reason: RejectReason, expected: Vec<String>) -> RejectInfo {
        self.record(m, Action::Reject(reason));
        let stack_top = match m.stack.last() {
            Some(Item::Sym(s)) => self.g.symbol_name(*s).to_owned(),
            _ => END_MARKER.to_owned(),
        };
        RejectInfo {
            position: m.pos,
            stack_top,
            expected,
            reason,
        }
    }

    fn step(&self, m: &mut Machine) -> Step {
        let la = self.lookahead(m.pos);
        match *m.stack.last().expect("stack keeps its bottom marker") {
            Item::End => {
                if la == Lookahead::End {
                    self.record(m, Action::Accept);
                    Step::Accept
                } else {
                    Step::Reject(self.reject(m, RejectReason::InputRemainingStackEmpty, Vec::new()))
                }
            }
            Item::Sym(x) if self.g.is_terminal(x) => {
                if la == Lookahead::End {
                    Step::Reject(self.reject(
                        m,
                        RejectReason::InputExhaustedStackNonempty,
                        Vec::new(),
                    ))
                } else if la == Lookahead::Terminal(x) {
                    m.stack.pop();
                    m.pos += 1;
                    self.record(m, Action::Matched(self.g.symbol_name(x).to_owned()));
                    Step::Continue
                } else {
                    let expected = vec![self.g.symbol_name(x).to_owned()];
                    Step::Reject(self.reject(m, RejectReason::TerminalMismatch, expected))
                }
            }
            Item::Sym(x) => {
                let cell = self.table.cell(x, la);
                if cell.is_empty() {
                    let expected = self.expected(x);
                    return Step::Reject(self.reject(m, RejectReason::EmptyCell, expected));
                }
                Step::Choice(x, cell.to_vec())
            }
        }
    }

    fn apply(&self, m: &mut Machine, p: ProductionId) {
        m.stack.pop();
        let prod = self.g.production(p);
        m.stack.extend(prod.rhs.iter().rev().map(|&s| Item::Sym(s)));
        m.derivation.push(p);
        self.record(m, Action::Apply(self.g.render_production(p)));
    }

    fn start(&self, traced: bool) -> Machine {
        let mut m = Machine {
            stack: vec![Item::End, Item::Sym(self.g.start())],
            pos: 0,
            derivation: Vec::new(),
            choices: Vec::new(),
            moves: traced.then(Vec::new),
        };
        self.record(&mut m, Action::Start);
        m
    }

    /// Re-runs one branch with tracing on. A choice point past the end of
    /// `choices` is where the step budget ran out.
    fn replay(&self, choices: &[usize]) -> (Option<RejectInfo>, Machine) {
        let mut m = self.start(true);
        let mut k = 0;
        loop {
            match self.step(&mut m) {
                Step::Continue => {}
                Step::Accept => return (None, m),
                Step::Reject(info) => return (Some(info), m),
                Step::Choice(x, alts) => {
                    let Some(&c) = choices.get(k) else {
                        let expected = self.expected(x);
                        let info = self.reject(&mut m, RejectReason::BudgetExhausted, expected);
                        return (Some(info), m);
                    };
                    k += 1;
                    m.choices.push(c);
                    self.apply(&mut m, alts[c]);
                }
            }
        }
    }
}

/// Fewest terminals each symbol can derive; None for unproductive symbols.
fn min_yields(g: &Grammar) -> Vec<Option<usize>> {
    let mut min: Vec<Option<usize>> = g
        .symbol_ids()
        .map(|s| g.is_terminal(s).then_some(1))
        .collect();
    let mut changed = true;
    while changed {
        changed = false;
        for p in g.productions() {
            let total = p
                .rhs
                .iter()
                .try_fold(0usize, |acc, s| min[s.index()].map(|n| acc + n));
            if let Some(n) = total {
                if min[p.lhs.index()].is_none_or(|old| n < old) {
                    min[p.lhs.index()] = Some(n);
                    changed = true;
                }
            }
        }
    }
    min
}

enum Search {
    Accepted(Vec<usize>),
    /// Furthest rejection reached, if any branch got to reject.
    Failed(Option<(usize, Vec<usize>)>),
    Exhausted(Vec<usize>),
}

fn search(ctx: &Ctx<'_>, policy: DriverPolicy) -> Search {
    let backtrack = policy.mode == DriverMode::Backtracking;
    let min = if backtrack {
        min_yields(ctx.g)
    } else {
        Vec::new()
    };
    // A branch whose stack must yield more tokens than remain cannot accept.
    let hopeless = |m: &Machine| {
        let left = ctx.input.len() - m.pos;
        let mut need = 0;
        for item in &m.stack {
            if let Item::Sym(s) = item {
                match min[s.index()] {
                    Some(n) => need += n,
                    None => return true,
                }
                if need > left {
                    return true;
                }
            }
        }
        false
    };

    let mut expansions = 0usize;
    let mut worklist = vec![ctx.start(false)];
    let mut furthest: Option<(usize, Vec<usize>)> = None;
    while let Some(mut m) = worklist.pop() {
        loop {
            match ctx.step(&mut m) {
                Step::Continue => {}
                Step::Accept => return Search::Accepted(m.choices),
                Step::Reject(info) => {
                    if furthest
                        .as_ref()
                        .is_none_or(|(pos, _)| info.position > *pos)
                    {
                        furthest = Some((info.position, m.choices));
                    }
                    break;
                }
                Step::Choice(_, alts) => {
                    if expansions >= policy.step_budget {
                        return Search::Exhausted(m.choices);
                    }
                    expansions += 1;
                    if !backtrack {
                        m.choices.push(0);
                        ctx.apply(&mut m, alts[0]);
                        continue;
                    }
                    let mut live: Vec<Machine> = Vec::new();
                    for (i, &p) in alts.iter().enumerate() {
                        let mut fork = m.clone();
                        fork.choices.push(i);
                        ctx.apply(&mut fork, p);
                        if !hopeless(&fork) {
                            live.push(fork);
                        }
                    }
                    let Some(first) = (!live.is_empty()).then(|| live.remove(0)) else {
                        break;
                    };
                    worklist.extend(live.into_iter().rev());
                    m = first;
                }
            }
        }
    }
    Search::Failed(furthest)
}

/// Runs the predictive machine over `tags`.
///
/// Productions are read through `g`, which must be the grammar the table's
/// cells index into. In backtracking mode a rejected run reports the branch
/// whose failure got furthest into the input; branches that can no longer
/// cover the remaining input are abandoned early.
pub fn parse_predictive(
    table: &ParseTable,
    g: &Grammar,
    tags: &[&str],
    policy: DriverPolicy,
) -> Result<ParseRun, DriverError> {
    let input = tags
        .iter()
        .enumerate()
        .map(|(position, &tag)| match g.lookup(tag) {
            Some(id) if g.is_terminal(id) => Ok(id),
            _ => Err(DriverError::UnknownTerminal {
                tag: tag.to_owned(),
                position,
            }),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let ctx = Ctx {
        table,
        g,
        input: &input,
    };

    let choices = match search(&ctx, policy) {
        Search::Accepted(c) | Search::Exhausted(c) | Search::Failed(Some((_, c))) => c,
        // Every branch was abandoned before rejecting; the first-entry
        // branch still fails somewhere, so report that.
        Search::Failed(None) => {
            let det = DriverPolicy {
                mode: DriverMode::Deterministic,
                ..policy
            };
            match search(&ctx, det) {
                Search::Failed(Some((_, c))) | Search::Exhausted(c) | Search::Accepted(c) => c,
                Search::Failed(None) => unreachable!("a deterministic run ends in a verdict"),
            }
        }
    };
    let (reject, m) = ctx.replay(&choices);
    let moves = m.moves.unwrap_or_default();
    Ok(match reject {
        None => ParseRun {
            outcome: ParseOutcome {
                verdict: Verdict::Accepted,
                reject: None,
            },
            tree: Some(tree_from_derivation(g, &m.derivation)),
            moves,
            derivation: m.derivation,
        },
        Some(info) => ParseRun {
            outcome: ParseOutcome {
                verdict: Verdict::Rejected,
                reject: Some(info),
            },
            moves,
            tree: None,
            derivation: m.derivation,
        },
    })
}

/// `Stack<TAB>Input<TAB>Action` followed by one line per move.
pub fn format_trace(moves: &[MoveRecord]) -> String {
    let mut out = String::from("Stack\tInput\tAction\n");
    for m in moves {
        out.push_str(&format!(
            "{}\t{}\t{}\n",
            m.stack.join(" "),
            m.input.join(" "),
            m.action
        ));
    }
    out
}
