//! Line-oriented grammar text format.
//!
//! ```text
//! # comment
//! S  -> NP VP ;
//! NP -> noun NP1 | pronoun | @eps ;
//! ```
//!
//! `->`, `|`, `;` and `#` are delimiters even without surrounding whitespace.
//! An empty alternative or a lone `@eps` is the ε-production.

use super::{Grammar, GrammarError, EPSILON};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Sym(String),
    Arrow,
    Bar,
    Semi,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn tokenize(text: &str) -> Vec<Spanned> {
    let mut out = Vec::new();
    for (line_no, line) in text.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let column = i + 1;
            let at = |tok| Spanned {
                tok,
                line: line_no + 1,
                column,
            };
            if c == '#' {
                break;
            } else if c.is_whitespace() {
                i += 1;
            } else if c == '|' {
                out.push(at(Tok::Bar));
                i += 1;
            } else if c == ';' {
                out.push(at(Tok::Semi));
                i += 1;
            } else if c == '-' && chars.get(i + 1) == Some(&'>') {
                out.push(at(Tok::Arrow));
                i += 2;
            } else {
                let begin = i;
                while i < chars.len() {
                    let c = chars[i];
                    if c.is_whitespace()
                        || matches!(c, '|' | ';' | '#')
                        || (c == '-' && chars.get(i + 1) == Some(&'>'))
                    {
                        break;
                    }
                    i += 1;
                }
                out.push(at(Tok::Sym(chars[begin..i].iter().collect())));
            }
        }
    }
    out
}

fn syntax(at: Option<&Spanned>, eof: (usize, usize), message: impl Into<String>) -> GrammarError {
    let (line, column) = at.map_or(eof, |s| (s.line, s.column));
    GrammarError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

/// Parses the grammar text format. The first rule's lhs is the start symbol.
pub fn parse_grammar(text: &str) -> Result<Grammar, GrammarError> {
    let toks = tokenize(text);
    let eof = (text.lines().count().max(1), 1);
    let mut rules: Vec<(String, Vec<String>)> = Vec::new();
    let mut pos = 0;

    while pos < toks.len() {
        let lhs = match &toks[pos].tok {
            Tok::Sym(s) if s != EPSILON => s.clone(),
            _ => return Err(syntax(toks.get(pos), eof, "expected a nonterminal name")),
        };
        pos += 1;
        match toks.get(pos).map(|s| &s.tok) {
            Some(Tok::Arrow) => pos += 1,
            _ => return Err(syntax(toks.get(pos), eof, "expected `->`")),
        }
        let mut alt: Vec<String> = Vec::new();
        let mut alt_start = toks.get(pos).cloned();
        loop {
            let Some(t) = toks.get(pos) else {
                return Err(syntax(None, eof, "unterminated rule, expected `;`"));
            };
            match &t.tok {
                Tok::Sym(s) => {
                    alt.push(s.clone());
                    pos += 1;
                }
                Tok::Bar | Tok::Semi => {
                    let end = t.tok == Tok::Semi;
                    if alt.iter().any(|s| s == EPSILON) {
                        if alt.len() != 1 {
                            return Err(syntax(
                                alt_start.as_ref(),
                                eof,
                                "`@eps` must stand alone in an alternative",
                            ));
                        }
                        alt.clear();
                    }
                    rules.push((lhs.clone(), std::mem::take(&mut alt)));
                    pos += 1;
                    alt_start = toks.get(pos).cloned();
                    if end {
                        break;
                    }
                }
                Tok::Arrow => return Err(syntax(Some(t), eof, "unexpected `->`")),
            }
        }
    }

    Grammar::from_rules(rules)
}

/// Canonical text form. Consecutive productions with the same lhs share one
/// rule line, so production order survives a round-trip exactly.
pub fn serialize_grammar(g: &Grammar) -> String {
    let mut out = String::new();
    let prods = g.productions();
    let mut i = 0;
    while i < prods.len() {
        let lhs = prods[i].lhs;
        let mut alts = Vec::new();
        while i < prods.len() && prods[i].lhs == lhs {
            alts.push(g.render_rhs(prods[i].index));
            i += 1;
        }
        out.push_str(g.symbol_name(lhs));
        out.push_str(" -> ");
        out.push_str(&alts.join(" | "));
        out.push_str(" ;\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_grammar() {
        let g = parse_grammar("S -> NP VP ;\nNP -> noun ;\nVP -> verb ;").unwrap();
        assert_eq!(g.productions().len(), 3);
        assert_eq!(g.symbol_name(g.start()), "S");
        let terms: Vec<_> = g.terminals().iter().map(|&t| g.symbol_name(t)).collect();
        assert_eq!(terms, ["noun", "verb"]);
    }

    #[test]
    fn epsilon_spellings() {
        let g = parse_grammar("S -> ;").unwrap();
        assert!(g.productions()[0].is_epsilon());
        let g = parse_grammar("S -> a | @eps | ;").unwrap_err();
        assert!(matches!(g, GrammarError::DuplicateProduction { .. }));
        let g = parse_grammar("S -> | a ;").unwrap();
        assert!(g.productions()[0].is_epsilon());
    }

    #[test]
    fn delimiters_need_no_spaces() {
        let g = parse_grammar("S->a|b S;# trailing").unwrap();
        assert_eq!(serialize_grammar(&g), "S -> a | b S ;\n");
    }

    #[test]
    fn hyphen_inside_names() {
        let g = parse_grammar("S -> a-b c- ;").unwrap();
        assert_eq!(g.render_rhs(g.productions()[0].index), "a-b c-");
    }

    #[test]
    fn errors_carry_positions() {
        match parse_grammar("S -> a ;\nT a ;").unwrap_err() {
            GrammarError::Syntax { line, column, .. } => assert_eq!((line, column), (2, 3)),
            e => panic!("{e}"),
        }
        assert!(matches!(
            parse_grammar("S -> a").unwrap_err(),
            GrammarError::Syntax { .. }
        ));
        assert!(matches!(
            parse_grammar("S -> a @eps ;").unwrap_err(),
            GrammarError::Syntax { .. }
        ));
        assert!(matches!(
            parse_grammar("-> a ;").unwrap_err(),
            GrammarError::Syntax {
                line: 1,
                column: 1,
                ..
            }
        ));
    }

    #[test]
    fn empty_file() {
        assert_eq!(
            parse_grammar("# nothing\n\n").unwrap_err(),
            GrammarError::Empty
        );
    }

    #[test]
    fn repeated_lhs_keeps_order() {
        let src = "S -> A ;\nA -> a ;\nS -> b ;\n";
        let g = parse_grammar(src).unwrap();
        assert_eq!(serialize_grammar(&g), src);
        assert_eq!(parse_grammar(&serialize_grammar(&g)).unwrap(), g);
    }
}
