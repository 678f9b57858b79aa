use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

use super::{Grammar, SymbolId};
use crate::sets::compute_nullable;

/// Left-recursive cycles: one entry per strongly connected component of the
/// left-corner relation (A → B when some `A -> γ B δ` has γ nullable) that
/// contains a cycle. Members are listed in nonterminal declaration order, and
/// components are ordered by their first member.
pub fn detect_left_recursion(g: &Grammar) -> Vec<Vec<SymbolId>> {
    let nullable = compute_nullable(g);
    let nts = g.nonterminals();
    let mut graph: DiGraph<SymbolId, ()> = DiGraph::new();
    let mut node = vec![None; g.symbol_count()];
    for &nt in nts {
        node[nt.index()] = Some(graph.add_node(nt));
    }

    let mut self_loop = vec![false; g.symbol_count()];
    for p in g.productions() {
        for &sym in &p.rhs {
            if let Some(to) = node[sym.index()] {
                let from = node[p.lhs.index()].expect("lhs is a nonterminal");
                if graph.find_edge(from, to).is_none() {
                    graph.add_edge(from, to, ());
                }
                if sym == p.lhs {
                    self_loop[sym.index()] = true;
                }
            }
            if !nullable.contains(sym) {
                break;
            }
        }
    }

    let order = |s: &SymbolId| nts.iter().position(|n| n == s).unwrap_or(usize::MAX);
    let mut cycles: Vec<Vec<SymbolId>> = tarjan_scc(&graph)
        .into_iter()
        .filter(|scc: &Vec<NodeIndex>| scc.len() > 1 || self_loop[graph[scc[0]].index()])
        .map(|scc| {
            let mut members: Vec<SymbolId> = scc.into_iter().map(|n| graph[n]).collect();
            members.sort_by_key(order);
            members
        })
        .collect();
    cycles.sort_by_key(|c| order(&c[0]));
    cycles
}
