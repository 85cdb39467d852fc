//! Test-set files: `sent_id<TAB>gold_gender<TAB>source<TAB>trigger_index<TAB>i,j,...`.
//! The source is whitespace-tokenized; the trigger may be `-`.

use std::collections::BTreeSet;
use std::path::Path;

use crate::error::{Error, Result};
use crate::morpho::GenderLabel;
use crate::rerank::entities::{format_index_list, parse_index_list, parse_trigger};
use crate::rerank::EntitySpec;
use crate::text::{content_lines, read_normalized, tokenize, write_text};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestItem {
    pub sent_id: usize,
    pub gold_gender: GenderLabel,
    pub source: Vec<String>,
    pub trigger_index: Option<usize>,
    /// Source indices of the primary entity.
    pub entity_indices: BTreeSet<usize>,
}

impl TestItem {
    /// The primary entity as gold annotation for oracle reranking.
    pub fn oracle_entity(&self) -> Result<EntitySpec> {
        EntitySpec::new(
            self.trigger_index,
            self.gold_gender.clone(),
            self.entity_indices.clone(),
        )
    }
}

pub fn parse_testset_str(text: &str, origin: &str) -> Result<Vec<TestItem>> {
    let mut items = Vec::new();
    let mut seen = BTreeSet::new();
    for (line_no, line) in content_lines(text) {
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 5 {
            return Err(Error::parse(
                origin,
                line_no,
                format!("expected 5 tab-separated columns, found {}", cols.len()),
            ));
        }
        let err = |m: String| Error::parse(origin, line_no, m);
        let sent_id: usize = cols[0]
            .trim()
            .parse()
            .map_err(|_| err(format!("bad sentence id `{}`", cols[0])))?;
        if !seen.insert(sent_id) {
            return Err(err(format!("sentence id {sent_id} repeated")));
        }
        let gold_gender = GenderLabel::parse_open(cols[1].trim()).map_err(|e| err(e.to_string()))?;
        let source = tokenize(cols[2]);
        if source.is_empty() {
            return Err(err("empty source sentence".into()));
        }
        let trigger_index = parse_trigger(cols[3]).map_err(err)?;
        let entity_indices = parse_index_list(cols[4]).map_err(err)?;
        let item = TestItem {
            sent_id,
            gold_gender,
            source,
            trigger_index,
            entity_indices,
        };
        item.oracle_entity()
            .and_then(|e| e.check_source_len(item.source.len()))
            .map_err(|e| err(e.to_string()))?;
        items.push(item);
    }
    Ok(items)
}

pub fn testset_to_string(items: &[TestItem]) -> String {
    items
        .iter()
        .map(|it| {
            format!(
                "{}\t{}\t{}\t{}\t{}\n",
                it.sent_id,
                it.gold_gender,
                it.source.join(" "),
                it.trigger_index
                    .map_or_else(|| "-".to_string(), |t| t.to_string()),
                format_index_list(&it.entity_indices)
            )
        })
        .collect()
}

pub fn load_testset(path: &Path) -> Result<Vec<TestItem>> {
    let text = read_normalized(path)?;
    parse_testset_str(&text, &path.display().to_string())
}

pub fn write_testset(items: &[TestItem], path: &Path) -> Result<()> {
    write_text(path, &testset_to_string(items))
}
