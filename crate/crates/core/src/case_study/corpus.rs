use serde::Serialize;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Expected {
    Accept,
    Reject,
}

impl Expected {
    pub fn as_str(self) -> &'static str {
        match self {
            Expected::Accept => "accept",
            Expected::Reject => "reject",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "kebab-case")]
pub enum Payload {
    RawSentence(String),
    TagSequence(Vec<String>),
}

impl Payload {
    /// The entry as written in the corpus file.
    pub fn text(&self) -> String {
        match self {
            Payload::RawSentence(s) => s.clone(),
            Payload::TagSequence(t) => t.join(" "),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorpusEntry {
    pub label: String,
    pub payload: Payload,
    pub expected: Expected,
    /// Comment lines directly above the entry.
    pub provenance: String,
    pub line: usize,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("corpus line {line}: {message}")]
pub struct CorpusError {
    pub line: usize,
    pub message: String,
}

pub const DEFAULT_LABEL: &str = "default";

/// Reads `S|T<TAB>accept|reject<TAB>payload` lines. `#label: name` switches
/// the label of subsequent entries.
pub fn parse_corpus(text: &str) -> Result<Vec<CorpusEntry>, CorpusError> {
    let mut out = Vec::new();
    let mut label = DEFAULT_LABEL.to_owned();
    let mut notes: Vec<&str> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let err = |message: &str| CorpusError {
            line: line_no,
            message: message.to_owned(),
        };
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() {
            notes.clear();
            continue;
        }
        if let Some(c) = line.strip_prefix('#') {
            if let Some(name) = c.strip_prefix("label:") {
                let name = name.trim();
                if name.is_empty() {
                    return Err(err("empty label"));
                }
                label = name.to_owned();
                notes.clear();
            } else {
                notes.push(c.trim());
            }
            continue;
        }
        let mut fields = line.splitn(3, '\t');
        let kind = fields.next().unwrap_or("");
        let expected = match fields.next() {
            Some("accept") => Expected::Accept,
            Some("reject") => Expected::Reject,
            _ => return Err(err("expected verdict must be `accept` or `reject`")),
        };
        let body = fields.next().ok_or_else(|| err("missing payload"))?.trim();
        let payload = match kind {
            "S" if !body.is_empty() => Payload::RawSentence(body.to_owned()),
            "T" => Payload::TagSequence(body.split_whitespace().map(str::to_owned).collect()),
            "S" => return Err(err("empty sentence")),
            _ => return Err(err("entry kind must be `S` or `T`")),
        };
        out.push(CorpusEntry {
            label: label.clone(),
            payload,
            expected,
            provenance: notes.join(" "),
            line: line_no,
        });
        notes.clear();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entries_labels_and_notes() {
        let c = parse_corpus(
            "# header\n\nT\taccept\ta b\n#label: x\n# note one\n# note two\nS\treject\tআমি ভাত\nT\taccept\t\n",
        )
        .unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(c[0].label, DEFAULT_LABEL);
        assert_eq!(c[0].provenance, "");
        assert_eq!(c[1].label, "x");
        assert_eq!(c[1].provenance, "note one note two");
        assert_eq!(c[1].payload, Payload::RawSentence("আমি ভাত".into()));
        assert_eq!(c[2].payload, Payload::TagSequence(vec![]));
    }

    #[test]
    fn errors() {
        for bad in [
            "X\taccept\ta",
            "T\tmaybe\ta",
            "T\taccept",
            "S\taccept\t ",
            "#label:\n",
        ] {
            assert!(parse_corpus(bad).is_err(), "{bad:?}");
        }
    }
}
