use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};
use crate::text::{content_lines, read_normalized, write_text};

#[derive(Debug, Clone, PartialEq)]
pub struct Hypothesis {
    pub tokens: Vec<String>,
    pub loglik: f64,
}

impl Hypothesis {
    pub fn new(tokens: Vec<String>, loglik: f64) -> Self {
        Hypothesis { tokens, loglik }
    }

    pub fn text(&self) -> String {
        self.tokens.join(" ")
    }
}

/// Hypotheses for one source sentence, best first.
#[derive(Debug, Clone, PartialEq)]
pub struct NBestList {
    pub source_id: usize,
    pub hypotheses: Vec<Hypothesis>,
}

/// Orders by log likelihood descending. Stable sorts with this comparator
/// keep earlier entries first among equal scores.
pub(crate) fn by_loglik_desc(a: &Hypothesis, b: &Hypothesis) -> Ordering {
    b.loglik.total_cmp(&a.loglik)
}

impl NBestList {
    /// Builds a list, stably sorting hypotheses by decreasing log likelihood.
    pub fn new(source_id: usize, mut hypotheses: Vec<Hypothesis>) -> Self {
        hypotheses.sort_by(by_loglik_desc);
        NBestList {
            source_id,
            hypotheses,
        }
    }

    pub fn len(&self) -> usize {
        self.hypotheses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hypotheses.is_empty()
    }

    pub fn best(&self) -> Option<&Hypothesis> {
        self.hypotheses.first()
    }

    pub fn is_sorted(&self) -> bool {
        self.hypotheses
            .windows(2)
            .all(|w| w[0].loglik >= w[1].loglik)
    }

    pub fn truncated(&self, n: usize) -> NBestList {
        NBestList {
            source_id: self.source_id,
            hypotheses: self.hypotheses.iter().take(n).cloned().collect(),
        }
    }
}

/// Parses Moses-style `sent_id ||| tokens ||| loglik` lines, grouping by id.
pub fn parse_nbest_str(text: &str, origin: &str) -> Result<BTreeMap<usize, NBestList>> {
    let mut grouped: BTreeMap<usize, Vec<Hypothesis>> = BTreeMap::new();
    for (line_no, line) in content_lines(text) {
        let fields: Vec<&str> = line.split("|||").map(str::trim).collect();
        if fields.len() != 3 {
            return Err(Error::parse(
                origin,
                line_no,
                "expected `sent_id ||| tokens ||| loglik`",
            ));
        }
        let id: usize = fields[0].parse().map_err(|_| {
            Error::parse(origin, line_no, format!("bad sentence id `{}`", fields[0]))
        })?;
        let loglik: f64 = fields[2]
            .parse()
            .ok()
            .filter(|v: &f64| v.is_finite())
            .ok_or_else(|| {
                Error::parse(origin, line_no, format!("bad log likelihood `{}`", fields[2]))
            })?;
        let tokens = fields[1].split_whitespace().map(str::to_string).collect();
        grouped
            .entry(id)
            .or_default()
            .push(Hypothesis::new(tokens, loglik));
    }
    Ok(grouped
        .into_iter()
        .map(|(id, hyps)| (id, NBestList::new(id, hyps)))
        .collect())
}

pub fn nbest_to_string<'a>(lists: impl IntoIterator<Item = &'a NBestList>) -> String {
    let mut out = String::new();
    for list in lists {
        for h in &list.hypotheses {
            out.push_str(&format!("{} ||| {} ||| {}\n", list.source_id, h.text(), h.loglik));
        }
    }
    out
}

pub fn parse_nbest(path: &Path) -> Result<BTreeMap<usize, NBestList>> {
    let text = read_normalized(path)?;
    parse_nbest_str(&text, &path.display().to_string())
}

pub fn write_nbest<'a>(lists: impl IntoIterator<Item = &'a NBestList>, path: &Path) -> Result<()> {
    write_text(path, &nbest_to_string(lists))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_line() {
        let lists = parse_nbest_str("3 ||| la médica ||| -4.5\n", "n").unwrap();
        let list = &lists[&3];
        assert_eq!(list.len(), 1);
        assert_eq!(list.hypotheses[0].tokens, vec!["la", "médica"]);
        assert_eq!(list.hypotheses[0].loglik, -4.5);
    }

    #[test]
    fn out_of_order_ids_are_grouped() {
        let text = "1 ||| b ||| -2\n0 ||| a ||| -1\n1 ||| c ||| -1\n";
        let lists = parse_nbest_str(text, "n").unwrap();
        assert_eq!(lists.len(), 2);
        assert_eq!(lists[&1].hypotheses[0].tokens, vec!["c"]);
        let rewritten = nbest_to_string(lists.values());
        assert_eq!(parse_nbest_str(&rewritten, "n").unwrap(), lists);
    }

    #[test]
    fn missing_separator_names_line() {
        let err = parse_nbest_str("0 ||| a ||| -1\n0 a -1\n", "list.txt").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        assert!(err.to_string().starts_with("list.txt:2"));
    }

    #[test]
    fn empty_hypothesis_survives_round_trip() {
        let list = NBestList::new(0, vec![Hypothesis::new(vec![], -3.25)]);
        let text = nbest_to_string([&list]);
        assert_eq!(parse_nbest_str(&text, "n").unwrap()[&0], list);
    }
}
