use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use crate::error::{Error, Result};
use crate::text::{content_lines, read_normalized, write_text};

/// Word alignment links `(source index, target index)` for one
/// (source, hypothesis) pair.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AlignmentMap {
    pub links: BTreeSet<(usize, usize)>,
}

impl AlignmentMap {
    pub fn new(links: impl IntoIterator<Item = (usize, usize)>) -> Self {
        AlignmentMap {
            links: links.into_iter().collect(),
        }
    }

    /// Parses Pharaoh `i-j` pairs separated by whitespace.
    pub fn parse_pharaoh(s: &str) -> Result<Self, String> {
        let mut links = BTreeSet::new();
        for pair in s.split_whitespace() {
            let (i, j) = pair
                .split_once('-')
                .ok_or_else(|| format!("alignment link `{pair}` is not `i-j`"))?;
            let i = i
                .parse()
                .map_err(|_| format!("alignment link `{pair}` is not numeric"))?;
            let j = j
                .parse()
                .map_err(|_| format!("alignment link `{pair}` is not numeric"))?;
            links.insert((i, j));
        }
        Ok(AlignmentMap { links })
    }

    pub fn to_pharaoh(&self) -> String {
        self.links
            .iter()
            .map(|(i, j)| format!("{i}-{j}"))
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Target positions linked to any of the given source positions.
    pub fn targets_of(&self, sources: &BTreeSet<usize>) -> BTreeSet<usize> {
        self.links
            .iter()
            .filter(|(s, _)| sources.contains(s))
            .map(|&(_, t)| t)
            .collect()
    }

    pub fn max_target(&self) -> Option<usize> {
        self.links.iter().map(|&(_, t)| t).max()
    }
}

/// Produces word alignments between a source sentence and a hypothesis.
pub trait Aligner: Sync {
    fn align(&self, source: &[String], hypothesis: &[String]) -> AlignmentMap;
}

/// Links position `i` to position `i` up to the shorter length. A stand-in
/// for real aligners on same-length synthetic data.
#[derive(Debug, Clone, Copy, Default)]
pub struct DiagonalAligner;

impl Aligner for DiagonalAligner {
    fn align(&self, source: &[String], hypothesis: &[String]) -> AlignmentMap {
        AlignmentMap::new((0..source.len().min(hypothesis.len())).map(|i| (i, i)))
    }
}

/// Alignments keyed by `(sent_id, hyp_rank)`.
pub type AlignmentTable = BTreeMap<(usize, usize), AlignmentMap>;

/// Parses `sent_id<TAB>hyp_rank<TAB>0-0 1-2 ...`; the link field may be empty.
pub fn parse_alignments_str(text: &str, origin: &str) -> Result<AlignmentTable> {
    let mut table = AlignmentTable::new();
    for (line_no, line) in content_lines(text) {
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 2 && cols.len() != 3 {
            return Err(Error::parse(
                origin,
                line_no,
                "expected sent_id<TAB>hyp_rank<TAB>links",
            ));
        }
        let num = |s: &str, what: &str| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| Error::parse(origin, line_no, format!("bad {what} `{s}`")))
        };
        let id = num(cols[0], "sentence id")?;
        let rank = num(cols[1], "hypothesis rank")?;
        let map = AlignmentMap::parse_pharaoh(cols.get(2).copied().unwrap_or(""))
            .map_err(|m| Error::parse(origin, line_no, m))?;
        let slot = table.entry((id, rank)).or_default();
        slot.links.extend(map.links);
    }
    Ok(table)
}

pub fn alignments_to_string(table: &AlignmentTable) -> String {
    table
        .iter()
        .map(|((id, rank), map)| format!("{id}\t{rank}\t{}\n", map.to_pharaoh()))
        .collect()
}

pub fn parse_alignments(path: &Path) -> Result<AlignmentTable> {
    let text = read_normalized(path)?;
    parse_alignments_str(&text, &path.display().to_string())
}

pub fn write_alignments(table: &AlignmentTable, path: &Path) -> Result<()> {
    write_text(path, &alignments_to_string(table))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_links() {
        let t = parse_alignments_str("0\t0\t0-0 1-2\n", "a").unwrap();
        assert_eq!(t[&(0, 0)].links, BTreeSet::from([(0, 0), (1, 2)]));
    }

    #[test]
    fn empty_link_field_is_valid() {
        let t = parse_alignments_str("3\t1\t\n4\t0\n", "a").unwrap();
        assert!(t[&(3, 1)].links.is_empty());
        assert!(t[&(4, 0)].links.is_empty());
    }

    #[test]
    fn non_numeric_link_fails() {
        let err = parse_alignments_str("0\t0\t0-0\n0\t1\t2-x\n", "a").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn duplicates_collapse() {
        let t = parse_alignments_str("0\t0\t1-1 1-1 0-0\n", "a").unwrap();
        assert_eq!(t[&(0, 0)].links.len(), 2);
        assert_eq!(t[&(0, 0)].to_pharaoh(), "0-0 1-1");
    }

    #[test]
    fn diagonal_stops_at_shorter_side() {
        let src: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        let hyp: Vec<String> = ["x", "y"].iter().map(|s| s.to_string()).collect();
        assert_eq!(
            DiagonalAligner.align(&src, &hyp),
            AlignmentMap::new([(0, 0), (1, 1)])
        );
    }
}
