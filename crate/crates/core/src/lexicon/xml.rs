//! Reader for the flat `<WORD><word>tag</word>...</WORD>` lexicon document.
//!
//! Accepts an optional `<?xml ...?>` prolog, comments anywhere outside text,
//! one root element and flat children with text content. The encoding named
//! in the prolog is ignored; input is always UTF-8.

use super::{Lexicon, LexiconError};

struct Reader<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Reader<'a> {
    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn err(&self, message: impl Into<String>) -> LexiconError {
        LexiconError::Malformed {
            line: self.src[..self.pos].matches('\n').count() + 1,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        let r = self.rest();
        self.pos += r.len() - r.trim_start().len();
    }

    fn eat(&mut self, s: &str) -> bool {
        if self.rest().starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn skip_until(&mut self, end: &str, what: &str) -> Result<(), LexiconError> {
        match self.rest().find(end) {
            Some(i) => {
                self.pos += i + end.len();
                Ok(())
            }
            None => Err(self.err(format!("unterminated {what}"))),
        }
    }

    /// Whitespace and comments.
    fn skip_misc(&mut self) -> Result<(), LexiconError> {
        loop {
            self.skip_ws();
            if self.eat("<!--") {
                self.skip_until("-->", "comment")?;
            } else {
                return Ok(());
            }
        }
    }

    fn name(&mut self) -> Result<&'a str, LexiconError> {
        let r = self.rest();
        let n = r
            .find(|c: char| c.is_whitespace() || matches!(c, '>' | '/' | '<' | '='))
            .unwrap_or(r.len());
        if n == 0 {
            return Err(self.err("expected element name"));
        }
        self.pos += n;
        Ok(&r[..n])
    }

    /// After `<`: reads a start tag. Returns the name and whether it was
    /// self-closing.
    fn start_tag(&mut self) -> Result<(&'a str, bool), LexiconError> {
        let name = self.name()?;
        self.skip_ws();
        if self.eat("/>") {
            return Ok((name, true));
        }
        if self.eat(">") {
            return Ok((name, false));
        }
        Err(self.err(format!("attributes are not supported on <{name}>")))
    }

    fn end_tag(&mut self, name: &str) -> Result<(), LexiconError> {
        if !self.eat("</") {
            return Err(self.err(format!("expected </{name}>")));
        }
        let got = self.name()?;
        self.skip_ws();
        if got != name || !self.eat(">") {
            return Err(self.err(format!("expected </{name}>, found </{got}")));
        }
        Ok(())
    }
}

fn unescape(text: &str) -> Result<String, String> {
    let mut out = String::with_capacity(text.len());
    let mut rest = text;
    while let Some(i) = rest.find('&') {
        out.push_str(&rest[..i]);
        rest = &rest[i..];
        let (rep, len) = if rest.starts_with("&lt;") {
            ('<', 4)
        } else if rest.starts_with("&gt;") {
            ('>', 4)
        } else if rest.starts_with("&amp;") {
            ('&', 5)
        } else {
            return Err("unsupported entity reference".into());
        };
        out.push(rep);
        rest = &rest[len..];
    }
    out.push_str(rest);
    Ok(out)
}

pub fn load_lexicon_xml(text: &str) -> Result<Lexicon, LexiconError> {
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let mut r = Reader { src: text, pos: 0 };
    r.skip_ws();
    if r.eat("<?") {
        r.skip_until("?>", "prolog")?;
    }
    r.skip_misc()?;
    if !r.eat("<") {
        return Err(r.err("expected root element"));
    }
    let (root, empty) = r.start_tag()?;
    let mut lex = Lexicon::new();
    if !empty {
        loop {
            r.skip_misc()?;
            if r.rest().starts_with("</") {
                r.end_tag(root)?;
                break;
            }
            if r.rest().is_empty() {
                return Err(r.err(format!("expected </{root}>")));
            }
            if !r.eat("<") {
                return Err(r.err(format!("text directly inside <{root}>")));
            }
            let (word, child_empty) = r.start_tag()?;
            if child_empty {
                return Err(LexiconError::EmptyTag(word.to_owned()));
            }
            let end = r
                .rest()
                .find('<')
                .ok_or_else(|| r.err("unterminated element"))?;
            let raw = &r.rest()[..end];
            r.pos += end;
            if !r.rest().starts_with("</") {
                return Err(r.err(format!("nested element inside <{word}>")));
            }
            r.end_tag(word)?;
            let tag = unescape(raw.trim()).map_err(|m| r.err(m))?;
            lex.insert(&unescape(word).map_err(|m| r.err(m))?, &tag)?;
        }
    }
    r.skip_misc()?;
    if !r.rest().is_empty() {
        return Err(r.err("content after root element"));
    }
    Ok(lex)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_document() {
        let lex = load_lexicon_xml(
            "<?xml version=\"1.0\"?>\n<!-- c -->\n<WORD>\n <a>noun</a>\n <!-- x --><b> verb </b>\n</WORD>\n",
        )
        .unwrap();
        assert_eq!(lex.len(), 2);
        assert_eq!(lex.get("b"), Some("verb"));
    }

    #[test]
    fn empty_roots() {
        assert!(load_lexicon_xml("<WORD></WORD>").unwrap().is_empty());
        assert!(load_lexicon_xml("<WORD/>").unwrap().is_empty());
    }

    #[test]
    fn entities() {
        let lex = load_lexicon_xml("<W><x>a&amp;b&lt;&gt;</x></W>").unwrap();
        assert_eq!(lex.get("x"), Some("a&b<>"));
        assert!(load_lexicon_xml("<W><x>&quot;</x></W>").is_err());
    }

    #[test]
    fn errors() {
        let cases = [
            ("<WORD><x>noun</x><x>verb</x></WORD>", "conflicting"),
            ("<WORD><x><y>n</y></x></WORD>", "nested"),
            ("<WORD><x></x></WORD>", "empty tag"),
            ("<WORD><x/></WORD>", "empty tag"),
            ("<WORD><x a=\"1\">n</x></WORD>", "attributes"),
            ("<WORD><x>n</y></WORD>", "expected </x>"),
            ("<WORD><x>n</x>", "expected"),
            ("<WORD></WORD><WORD></WORD>", "after root"),
            ("", "root"),
            ("<WORD>text</WORD>", "text directly"),
            ("<!-- open", "unterminated"),
        ];
        for (src, needle) in cases {
            let e = load_lexicon_xml(src).unwrap_err().to_string();
            assert!(e.contains(needle), "{src:?}: {e}");
        }
    }
}
