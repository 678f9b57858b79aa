//! Small random grammars for property tests and benchmarks.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::grammar::Grammar;

#[derive(Clone, Copy, Debug)]
pub struct RandomGrammarConfig {
    pub max_nonterminals: usize,
    pub max_terminals: usize,
    pub max_rhs: usize,
    pub max_alternatives: usize,
    /// Chance that an alternative is ε.
    pub epsilon_chance: f64,
}

impl Default for RandomGrammarConfig {
    fn default() -> Self {
        RandomGrammarConfig {
            max_nonterminals: 6,
            max_terminals: 4,
            max_rhs: 4,
            max_alternatives: 3,
            epsilon_chance: 0.15,
        }
    }
}

const NONTERMINALS: [&str; 8] = ["S", "A", "B", "C", "D", "E", "F", "G"];
const TERMINALS: [&str; 8] = ["a", "b", "c", "d", "e", "f", "g", "h"];

/// A grammar in which every nonterminal is reachable from `S` and no
/// nonterminal has two identical alternatives.
pub fn random_grammar<R: Rng + ?Sized>(rng: &mut R, cfg: &RandomGrammarConfig) -> Grammar {
    let n = rng.gen_range(1..=cfg.max_nonterminals.clamp(1, NONTERMINALS.len()));
    let k = rng.gen_range(1..=cfg.max_terminals.clamp(1, TERMINALS.len()));
    let nts = &NONTERMINALS[..n];
    let ts = &TERMINALS[..k];

    let mut alts: Vec<Vec<Vec<&str>>> = Vec::with_capacity(n);
    for _ in 0..n {
        let count = rng.gen_range(1..=cfg.max_alternatives.max(1));
        let mut mine: Vec<Vec<&str>> = Vec::new();
        for _ in 0..count {
            let rhs: Vec<&str> = if rng.gen_bool(cfg.epsilon_chance) {
                Vec::new()
            } else {
                let len = rng.gen_range(1..=cfg.max_rhs.max(1));
                (0..len)
                    .map(|_| {
                        if rng.gen_bool(0.5) {
                            *nts.choose(rng).unwrap()
                        } else {
                            *ts.choose(rng).unwrap()
                        }
                    })
                    .collect()
            };
            if !mine.contains(&rhs) {
                mine.push(rhs);
            }
        }
        alts.push(mine);
    }

    // Thread each nonterminal into some earlier one's alternatives so the
    // whole grammar hangs off S.
    for (i, &nt) in nts.iter().enumerate().skip(1) {
        let parent = rng.gen_range(0..i);
        let slot = rng.gen_range(0..alts[parent].len());
        if alts[parent].iter().any(|r| r.contains(&nt)) {
            continue;
        }
        let mut grown = alts[parent][slot].clone();
        grown.insert(rng.gen_range(0..=grown.len()), nt);
        if grown.len() > cfg.max_rhs.max(1) || alts[parent].contains(&grown) {
            alts[parent].push(vec![nt]);
        } else {
            alts[parent][slot] = grown;
        }
    }

    let rules = nts
        .iter()
        .zip(alts)
        .flat_map(|(&lhs, mine)| mine.into_iter().map(move |rhs| (lhs, rhs)));
    Grammar::from_rules(rules).expect("generated rules are valid")
}
