//! Word to POS tag dictionary, sentence splitting and tagging.

mod xml;

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

pub use xml::load_lexicon_xml;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LexiconError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("word {word:?} has conflicting tags {first:?} and {second:?}")]
    Conflict {
        word: String,
        first: String,
        second: String,
    },
    #[error("word {0:?} has an empty tag")]
    EmptyTag(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown word {surface:?} at token {position}")]
pub struct UnknownWord {
    pub surface: String,
    pub position: usize,
}

/// One tag per word. Identical duplicates collapse; conflicting ones are an
/// error.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Lexicon {
    entries: BTreeMap<String, String>,
}

impl Lexicon {
    pub fn new() -> Lexicon {
        Lexicon::default()
    }

    pub fn insert(&mut self, word: &str, tag: &str) -> Result<(), LexiconError> {
        if tag.is_empty() {
            return Err(LexiconError::EmptyTag(word.to_owned()));
        }
        match self.entries.get(word) {
            Some(old) if old != tag => Err(LexiconError::Conflict {
                word: word.to_owned(),
                first: old.clone(),
                second: tag.to_owned(),
            }),
            Some(_) => Ok(()),
            None => {
                self.entries.insert(word.to_owned(), tag.to_owned());
                Ok(())
            }
        }
    }

    pub fn merge(&mut self, other: &Lexicon) -> Result<(), LexiconError> {
        for (w, t) in &other.entries {
            self.insert(w, t)?;
        }
        Ok(())
    }

    pub fn get(&self, word: &str) -> Option<&str> {
        self.entries.get(word).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().map(|(w, t)| (w.as_str(), t.as_str()))
    }
}

/// `word<TAB>tag` lines; blank lines and `#` comments are skipped.
pub fn load_lexicon_tsv(text: &str) -> Result<Lexicon, LexiconError> {
    let mut lex = Lexicon::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((word, tag)) = line.split_once('\t') else {
            return Err(LexiconError::Malformed {
                line: i + 1,
                message: "expected `word<TAB>tag`".into(),
            });
        };
        let (word, tag) = (word.trim(), tag.trim());
        if word.is_empty() || word.chars().any(char::is_whitespace) {
            return Err(LexiconError::Malformed {
                line: i + 1,
                message: format!("bad word {word:?}"),
            });
        }
        lex.insert(word, tag)?;
    }
    Ok(lex)
}

pub const TERMINATORS: [char; 3] = ['\u{0964}', '?', '!'];

/// Splits on danda, `?` and `!`. Terminators are dropped, segments trimmed,
/// and blank segments discarded. Trailing text without a terminator is kept.
pub fn split_sentences(text: &str) -> Vec<String> {
    text.split(TERMINATORS)
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::to_owned)
        .collect()
}

fn is_edge_punct(c: char) -> bool {
    matches!(
        c,
        '"' | '\'' | '\u{201C}' | '\u{201D}' | '\u{2018}' | '\u{2019}' | ',' | ';' | ':'
    ) || TERMINATORS.contains(&c)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Token {
    pub surface: String,
    pub position: usize,
}

/// Splits on whitespace and commas, then strips surrounding quotes; tokens
/// that are pure punctuation vanish.
pub fn tokenize(sentence: &str) -> Vec<Token> {
    sentence
        .split(|c: char| c.is_whitespace() || c == ',')
        .map(|w| w.trim_matches(is_edge_punct))
        .filter(|w| !w.is_empty())
        .enumerate()
        .map(|(position, w)| Token {
            surface: w.to_owned(),
            position,
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TaggedSentence {
    pub tokens: Vec<Token>,
    pub tags: Vec<String>,
}

impl TaggedSentence {
    pub fn surfaces(&self) -> Vec<&str> {
        self.tokens.iter().map(|t| t.surface.as_str()).collect()
    }
}

/// Tags every token; the first word missing from `lex` aborts.
pub fn tag_sentence(lex: &Lexicon, sentence: &str) -> Result<TaggedSentence, UnknownWord> {
    let tokens = tokenize(sentence);
    let mut tags = Vec::with_capacity(tokens.len());
    for t in &tokens {
        match lex.get(&t.surface) {
            Some(tag) => tags.push(tag.to_owned()),
            None => {
                return Err(UnknownWord {
                    surface: t.surface.clone(),
                    position: t.position,
                })
            }
        }
    }
    Ok(TaggedSentence { tokens, tags })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tsv_basics() {
        let lex = load_lexicon_tsv("# c\nরহিম\tnoun\n\nরহিম\tnoun\n").unwrap();
        assert_eq!(lex.len(), 1);
        assert_eq!(lex.get("রহিম"), Some("noun"));
        assert!(load_lexicon_tsv("\n\n").unwrap().is_empty());
        assert!(matches!(
            load_lexicon_tsv("x\tnoun\nx\tverb\n"),
            Err(LexiconError::Conflict { .. })
        ));
        assert!(load_lexicon_tsv("x noun\n").is_err());
    }

    #[test]
    fn splitting() {
        assert_eq!(
            split_sentences("আমি ভাত খাই। আমি কি ভাত খাই?"),
            ["আমি ভাত খাই", "আমি কি ভাত খাই"]
        );
        assert!(split_sentences("").is_empty());
        assert_eq!(split_sentences("  no end  "), ["no end"]);
        assert!(split_sentences("।।?!  ").is_empty());
    }

    #[test]
    fn tagging() {
        let lex = load_lexicon_tsv("আমি\tpronoun\nখাই\tverb\nভাত\tnoun\n").unwrap();
        let t = tag_sentence(&lex, "“আমি, খাই ভাত”").unwrap();
        assert_eq!(t.tags, ["pronoun", "verb", "noun"]);
        assert_eq!(t.surfaces(), ["আমি", "খাই", "ভাত"]);
        assert_eq!(tokenize("আমি,খাই").len(), 2);
        let e = tag_sentence(&lex, "আমি কি ভাত").unwrap_err();
        assert_eq!(
            e,
            UnknownWord {
                surface: "কি".into(),
                position: 1
            }
        );
        assert!(tag_sentence(&lex, "").unwrap().tags.is_empty());
    }
}
