use serde::Serialize;

use ll1kit::case_study::{CorpusEntry, Expected};
use ll1kit::driver::{ParseOutcome, RejectInfo, Verdict};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BatchEntry {
    pub line: usize,
    pub label: String,
    pub input: String,
    pub expected: Expected,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reject: Option<RejectInfo>,
}

impl BatchEntry {
    pub fn new(entry: &CorpusEntry, outcome: ParseOutcome) -> BatchEntry {
        BatchEntry {
            line: entry.line,
            label: entry.label.clone(),
            input: entry.payload.text(),
            expected: entry.expected,
            verdict: outcome.verdict,
            reject: outcome.reject,
        }
    }

    pub fn matched(&self) -> bool {
        (self.verdict == Verdict::Accepted) == (self.expected == Expected::Accept)
    }
}

/// Acceptance counts for one label: I entries, D of them accepted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LabelStats {
    pub label: String,
    pub total: usize,
    pub accepted: usize,
}

impl LabelStats {
    /// A = (D / I) x 100; None when I = 0.
    pub fn rate(&self) -> Option<f64> {
        (self.total > 0).then(|| self.accepted as f64 / self.total as f64 * 100.0)
    }

    pub fn rate_text(&self) -> String {
        match self.rate() {
            Some(a) => format!("{a:.2}%"),
            None => "n/a".to_owned(),
        }
    }
}

impl std::fmt::Display for LabelStats {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}: I={} D={} A={}",
            self.label,
            self.total,
            self.accepted,
            self.rate_text()
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BatchReport {
    pub per_sentence: Vec<BatchEntry>,
    /// Labels in order of first appearance, then `all`.
    pub per_type: Vec<LabelStats>,
}

impl BatchReport {
    pub fn from_entries(entries: Vec<BatchEntry>) -> BatchReport {
        let mut per_type: Vec<LabelStats> = Vec::new();
        for e in &entries {
            let i = match per_type.iter().position(|s| s.label == e.label) {
                Some(i) => i,
                None => {
                    per_type.push(LabelStats {
                        label: e.label.clone(),
                        total: 0,
                        accepted: 0,
                    });
                    per_type.len() - 1
                }
            };
            per_type[i].total += 1;
            per_type[i].accepted += usize::from(e.verdict == Verdict::Accepted);
        }
        per_type.push(LabelStats {
            label: "all".to_owned(),
            total: entries.len(),
            accepted: entries
                .iter()
                .filter(|e| e.verdict == Verdict::Accepted)
                .count(),
        });
        BatchReport {
            per_sentence: entries,
            per_type,
        }
    }

    pub fn all_matched(&self) -> bool {
        self.per_sentence.iter().all(BatchEntry::matched)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for e in &self.per_sentence {
            let verdict = match &e.reject {
                None => "accepted".to_owned(),
                Some(info) => format!("rejected: {info}"),
            };
            out.push_str(&format!(
                "{}\t{}\t{}\texpected {}\t{}\n",
                if e.matched() { "ok" } else { "MISMATCH" },
                e.label,
                e.input,
                e.expected.as_str(),
                verdict
            ));
        }
        out.push('\n');
        for s in &self.per_type {
            out.push_str(&format!("{s}\n"));
        }
        out.push_str("A = (D/I) x 100\n");
        out
    }
}
