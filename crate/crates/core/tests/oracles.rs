use std::time::Instant;

use ll1kit::case_study::embedded;
use ll1kit::grammar::{detect_left_recursion, parse_grammar, Grammar};
use ll1kit::random::{random_grammar, RandomGrammarConfig};
use ll1kit::sets::oracle::{brute_force_first, brute_force_follow, left_recursive_oracle};
use ll1kit::sets::{compute_first, compute_follow, dump_first, dump_follow};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const DEPTH: usize = 14;

fn grammar_from_seed(seed: u64) -> Grammar {
    random_grammar(
        &mut ChaCha8Rng::seed_from_u64(seed),
        &RandomGrammarConfig::default(),
    )
}

fn check_sets(g: &Grammar) -> Result<(), TestCaseError> {
    let fs = compute_first(g);
    let fl = compute_follow(g, &fs);
    let bf = brute_force_first(g, DEPTH).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let bl = brute_force_follow(g, DEPTH).map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert_eq!(dump_first(g, &fs), dump_first(g, &bf), "FIRST of\n{}", g);
    prop_assert_eq!(dump_follow(g, &fl), dump_follow(g, &bl), "FOLLOW of\n{}", g);
    prop_assert_eq!(fs, bf);
    prop_assert_eq!(fl, bl);
    Ok(())
}

#[test]
fn bangla_sets_match_enumeration() {
    let g = parse_grammar(embedded::GRAMMAR).unwrap();
    let t = Instant::now();
    check_sets(&g).unwrap();
    eprintln!("bangla oracle: {:?}", t.elapsed());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn random_sets_match_enumeration(seed in any::<u64>()) {
        check_sets(&grammar_from_seed(seed))?;
    }

    #[test]
    fn left_recursion_matches_enumeration(seed in any::<u64>()) {
        let g = grammar_from_seed(seed);
        let mut found: Vec<_> = detect_left_recursion(&g).into_iter().flatten().collect();
        found.sort();
        let oracle: Vec<_> = left_recursive_oracle(&g, DEPTH).unwrap().into_iter().collect();
        prop_assert_eq!(found, oracle, "{}", g);
    }
}
