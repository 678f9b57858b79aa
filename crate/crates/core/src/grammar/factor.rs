use std::collections::HashSet;

use super::{Grammar, ProductionId, SymbolId};

/// Same-lhs productions sharing a nonempty longest common prefix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrefixGroup {
    pub lhs: SymbolId,
    pub prefix: Vec<SymbolId>,
    pub productions: Vec<ProductionId>,
}

/// Groups each nonterminal's productions by leading symbol and reports every
/// group of two or more with the group's longest common prefix.
pub fn common_prefix_report(g: &Grammar) -> Vec<PrefixGroup> {
    let mut out = Vec::new();
    for &nt in g.nonterminals() {
        let rhs: Vec<(ProductionId, &[SymbolId])> = g
            .productions_of(nt)
            .map(|p| (p.index, p.rhs.as_slice()))
            .collect();
        for (members, prefix) in prefix_groups(&rhs) {
            out.push(PrefixGroup {
                lhs: nt,
                prefix,
                productions: members,
            });
        }
    }
    out
}

/// Groups of ≥ 2 entries sharing a leading symbol, in order of the group's
/// first member, each with the longest prefix common to all its members.
fn prefix_groups<K: Copy, S: Clone + PartialEq>(items: &[(K, &[S])]) -> Vec<(Vec<K>, Vec<S>)> {
    let mut groups: Vec<(S, Vec<usize>)> = Vec::new();
    for (i, (_, rhs)) in items.iter().enumerate() {
        let Some(head) = rhs.first() else { continue };
        match groups.iter_mut().find(|(h, _)| h == head) {
            Some((_, members)) => members.push(i),
            None => groups.push((head.clone(), vec![i])),
        }
    }
    groups
        .into_iter()
        .filter(|(_, members)| members.len() >= 2)
        .map(|(_, members)| {
            let first = items[members[0]].1;
            let lcp = members[1..].iter().fold(first.len(), |n, &m| {
                first
                    .iter()
                    .zip(items[m].1)
                    .take(n)
                    .take_while(|(a, b)| a == b)
                    .count()
            });
            (
                members.iter().map(|&m| items[m].0).collect(),
                first[..lcp].to_vec(),
            )
        })
        .collect()
}

/// Left-factors `g` until no nonterminal has two productions with a common
/// nonempty prefix.
///
/// Each step takes one group `A -> α β1 | … | α βm` (m ≥ 2, |α| ≥ 1, α the
/// longest common prefix of the group), puts `A -> α A_k` where the group's
/// first member stood, drops the other members and appends `A_k -> βi`.
/// `A_k` is `A` suffixed with the smallest positive integer that is not
/// already a symbol name.
///
/// Termination: weigh every production that shares its leading symbol with a
/// sibling by its rhs length, all others by zero. A step removes weight
/// Σ(|α| + |βi|) and adds at most Σ|βi| (the new `A -> α A_k` is alone in its
/// leading-symbol group), so the total strictly drops.
pub fn left_factor(g: &Grammar) -> Grammar {
    let mut rules: Vec<(String, Vec<String>)> = g.rules();
    let mut names: HashSet<String> = g.symbols().iter().map(|s| s.name.clone()).collect();

    'outer: loop {
        let mut lhs_order: Vec<String> = Vec::new();
        for (lhs, _) in &rules {
            if !lhs_order.contains(lhs) {
                lhs_order.push(lhs.clone());
            }
        }
        for lhs in &lhs_order {
            let own: Vec<(usize, &[String])> = rules
                .iter()
                .enumerate()
                .filter(|(_, (l, _))| l == lhs)
                .map(|(i, (_, r))| (i, r.as_slice()))
                .collect();
            let Some((members, prefix)) = prefix_groups(&own).into_iter().next() else {
                continue;
            };

            let fresh = (1..)
                .map(|k| format!("{lhs}{k}"))
                .find(|n| !names.contains(n))
                .expect("unbounded suffix search");
            names.insert(fresh.clone());

            let residues: Vec<Vec<String>> = members
                .iter()
                .map(|&m| rules[m].1[prefix.len()..].to_vec())
                .collect();
            let mut head = prefix.clone();
            head.push(fresh.clone());
            rules[members[0]].1 = head;
            for &m in members[1..].iter().rev() {
                rules.remove(m);
            }
            rules.extend(residues.into_iter().map(|r| (fresh.clone(), r)));
            continue 'outer;
        }
        break;
    }

    Grammar::from_rules(rules)
        .expect("left factoring preserves grammar validity")
        .with_name(g.name())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::{parse_grammar, serialize_grammar};

    #[test]
    fn textbook_schema() {
        let g = parse_grammar("A -> a b | a c ;").unwrap();
        let f = left_factor(&g);
        assert_eq!(serialize_grammar(&f), "A -> a A1 ;\nA1 -> b | c ;\n");
    }

    #[test]
    fn nothing_to_factor() {
        let g = parse_grammar("S -> a S | b ;").unwrap();
        assert_eq!(left_factor(&g), g);
    }

    #[test]
    fn longest_prefix_and_epsilon_residue() {
        let g = parse_grammar("VP -> noun verb | noun verb verb ;").unwrap();
        assert_eq!(
            serialize_grammar(&left_factor(&g)),
            "VP -> noun verb VP1 ;\nVP1 -> @eps | verb ;\n"
        );
    }

    #[test]
    fn nested_groups_get_fresh_names() {
        let g = parse_grammar("A -> a b c | a b d | a e | f ;\nA1 -> x ;").unwrap();
        let f = left_factor(&g);
        assert_eq!(
            serialize_grammar(&f),
            "A -> a A2 | f ;\nA1 -> x ;\nA2 -> b A21 | e ;\nA21 -> c | d ;\n"
        );
        assert!(common_prefix_report(&f).is_empty());
    }

    #[test]
    fn report_groups() {
        let g = parse_grammar("A -> a b | a c | d ;").unwrap();
        let r = common_prefix_report(&g);
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].lhs, g.lookup("A").unwrap());
        assert_eq!(r[0].prefix, vec![g.lookup("a").unwrap()]);
        assert_eq!(
            r[0].productions,
            vec![g.productions()[0].index, g.productions()[1].index]
        );

        let g = parse_grammar("VP -> noun verb | noun verb verb ;").unwrap();
        let r = common_prefix_report(&g);
        let names: Vec<_> = r[0].prefix.iter().map(|&s| g.symbol_name(s)).collect();
        assert_eq!(names, ["noun", "verb"]);
    }
}
