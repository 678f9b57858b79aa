use std::collections::BTreeSet;

use ll1kit::driver::{parse_predictive, Action, DriverMode, DriverPolicy, ParseRun, RejectReason};
use ll1kit::grammar::{detect_left_recursion, parse_grammar, Grammar, SymbolId};
use ll1kit::random::{random_grammar, RandomGrammarConfig};
use ll1kit::sets::oracle::derivable_strings;
use ll1kit::sets::{compute_first, compute_follow};
use ll1kit::table::{build_table, ConflictReport, ParseTable};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn setup(g: &Grammar) -> (ParseTable, ConflictReport) {
    let fs = compute_first(g);
    build_table(g, &fs, &compute_follow(g, &fs))
}

fn all_strings(ts: &[SymbolId], max_len: usize) -> Vec<Vec<SymbolId>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for s in &frontier {
            for &t in ts {
                let mut s2: Vec<SymbolId> = s.clone();
                s2.push(t);
                next.push(s2);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

fn run(t: &ParseTable, g: &Grammar, input: &[SymbolId], policy: DriverPolicy) -> ParseRun {
    let tags: Vec<&str> = input.iter().map(|&s| g.symbol_name(s)).collect();
    parse_predictive(t, g, &tags, policy).unwrap()
}

fn non_left_recursive(seed: u64) -> Option<Grammar> {
    let g = random_grammar(
        &mut ChaCha8Rng::seed_from_u64(seed),
        &RandomGrammarConfig::default(),
    );
    detect_left_recursion(&g).is_empty().then_some(g)
}

/// Replays the applied productions as a leftmost derivation.
fn replay(g: &Grammar, run: &ParseRun) -> Vec<SymbolId> {
    let mut form = vec![g.start()];
    for &p in &run.derivation {
        let prod = g.production(p);
        let i = form
            .iter()
            .position(|&s| g.is_nonterminal(s))
            .expect("a nonterminal to expand");
        assert_eq!(form[i], prod.lhs);
        form.splice(i..=i, prod.rhs.iter().copied());
    }
    form
}

#[test]
fn deterministic_mode_is_exact_on_conflict_free_tables() {
    let mut tried = 0;
    for seed in 0.. {
        let Some(g) = non_left_recursive(seed) else {
            continue;
        };
        let (t, report) = setup(&g);
        if !report.is_empty() {
            continue;
        }
        let lang = derivable_strings(&g, 5);
        for w in all_strings(g.terminals(), 5) {
            let r = run(&t, &g, &w, DriverPolicy::default());
            assert_eq!(r.outcome.accepted(), lang.contains(&w), "{g}\n{w:?}");
            if r.outcome.accepted() {
                assert_eq!(replay(&g, &r), w);
                let tree = r.tree.as_ref().unwrap();
                let names: Vec<&str> = w.iter().map(|&s| g.symbol_name(s)).collect();
                assert_eq!(tree.leaves(), names);
                assert_eq!(tree.symbol, g.symbol_name(g.start()));
                let matched = r
                    .moves
                    .iter()
                    .filter(|m| matches!(m.action, Action::Matched(_)))
                    .count();
                assert_eq!(matched, w.len());
            }
        }
        tried += 1;
        if tried == 40 {
            break;
        }
    }
}

#[test]
fn backtracking_is_complete_on_conflicted_tables() {
    let mut tried = 0;
    for seed in 1000.. {
        let Some(g) = non_left_recursive(seed) else {
            continue;
        };
        let (t, report) = setup(&g);
        if report.is_empty() {
            continue;
        }
        let lang: BTreeSet<_> = derivable_strings(&g, 4);
        for w in all_strings(g.terminals(), 4) {
            let r = run(&t, &g, &w, DriverPolicy::backtracking());
            assert_eq!(r.outcome.accepted(), lang.contains(&w), "{g}\n{w:?}");
            if r.outcome.accepted() {
                assert_eq!(replay(&g, &r), w);
            }
            let det = run(&t, &g, &w, DriverPolicy::default());
            assert!(!det.outcome.accepted() || r.outcome.accepted());
        }
        tried += 1;
        if tried == 40 {
            break;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn budget_is_monotone(seed in any::<u64>(), pick in any::<prop::sample::Index>()) {
        let g = random_grammar(&mut ChaCha8Rng::seed_from_u64(seed), &RandomGrammarConfig::default());
        let (t, _) = setup(&g);
        let lang: Vec<_> = derivable_strings(&g, 4).into_iter().collect();
        prop_assume!(!lang.is_empty());
        let w = pick.get(&lang);
        for mode in [DriverMode::Deterministic, DriverMode::Backtracking] {
            let with = |b| run(&t, &g, w, DriverPolicy { mode, step_budget: b }).outcome.accepted();
            if let Some(min) = (0..200).find(|&b| with(b)) {
                for b in min..min + 30 {
                    prop_assert!(with(b), "budget {} after {}", b, min);
                }
            }
        }
    }
}

#[test]
fn expression_grammar() {
    let g = parse_grammar(
        "E -> T E' ;\nE' -> + T E' | @eps ;\nT -> F T' ;\nT' -> * F T' | @eps ;\nF -> ( E ) | id ;",
    )
    .unwrap();
    let (t, report) = setup(&g);
    assert!(report.is_empty());
    let lex =
        |s: &str| -> Vec<SymbolId> { s.split_whitespace().map(|w| g.lookup(w).unwrap()).collect() };
    let lang = derivable_strings(&g, 5);
    let good = lex("id + id * id");
    let bad = lex("id + * id");
    assert!(lang.contains(&good));
    assert!(!lang.contains(&bad));
    assert!(run(&t, &g, &good, DriverPolicy::default())
        .outcome
        .accepted());
    let r = run(&t, &g, &bad, DriverPolicy::default());
    let info = r.outcome.reject.unwrap();
    assert_eq!((info.position, info.stack_top.as_str()), (2, "T"));
    assert_eq!(info.expected, ["(", "id"]);
}

#[test]
fn budget_guards_left_recursion() {
    let g = parse_grammar("S -> S a | a ;").unwrap();
    let (t, _) = setup(&g);
    let a = g.lookup("a").unwrap();
    let tight = DriverPolicy {
        step_budget: 50,
        ..Default::default()
    };
    let r = run(&t, &g, &[a, a], tight);
    assert_eq!(
        r.outcome.reject.unwrap().reason,
        RejectReason::BudgetExhausted
    );
    assert_eq!(
        r.moves
            .iter()
            .filter(|m| matches!(m.action, Action::Apply(_)))
            .count(),
        50
    );
    // Branches that need more tokens than remain are cut, so the search ends.
    let r = run(&t, &g, &[a, a], DriverPolicy::backtracking());
    assert!(r.outcome.accepted());
    assert!(!run(&t, &g, &[], DriverPolicy::backtracking())
        .outcome
        .accepted());
}
