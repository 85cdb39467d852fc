//! Entity annotation files: one record per line,
//! `sent_id<TAB>required_gender<TAB>trigger_index<TAB>i,j,...`.
//! A missing trigger is written `-`. Several records for one sentence
//! describe several entities.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use crate::error::{Error, Result};
use crate::morpho::GenderLabel;
use crate::text::{content_lines, read_normalized};

use super::EntitySpec;

pub type EntityTable = BTreeMap<usize, Vec<EntitySpec>>;

pub(crate) fn parse_index_list(s: &str) -> Result<BTreeSet<usize>, String> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| p.parse::<usize>().map_err(|_| format!("bad index `{p}`")))
        .collect()
}

pub(crate) fn format_index_list(indices: &BTreeSet<usize>) -> String {
    indices
        .iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

pub(crate) fn parse_trigger(s: &str) -> Result<Option<usize>, String> {
    match s.trim() {
        "-" | "" => Ok(None),
        t => t
            .parse()
            .map(Some)
            .map_err(|_| format!("bad trigger index `{t}`")),
    }
}

pub fn parse_entities_str(text: &str, origin: &str) -> Result<EntityTable> {
    let mut table = EntityTable::new();
    for (line_no, line) in content_lines(text) {
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 4 {
            return Err(Error::parse(
                origin,
                line_no,
                format!("expected 4 tab-separated columns, found {}", cols.len()),
            ));
        }
        let err = |m: String| Error::parse(origin, line_no, m);
        let id: usize = cols[0]
            .trim()
            .parse()
            .map_err(|_| err(format!("bad sentence id `{}`", cols[0])))?;
        let gender = GenderLabel::parse_open(cols[1].trim()).map_err(|e| err(e.to_string()))?;
        let trigger = parse_trigger(cols[2]).map_err(err)?;
        let indices = parse_index_list(cols[3]).map_err(err)?;
        let spec = EntitySpec::new(trigger, gender, indices).map_err(|e| err(e.to_string()))?;
        table.entry(id).or_default().push(spec);
    }
    Ok(table)
}

pub fn entities_to_string(table: &EntityTable) -> String {
    let mut out = String::new();
    for (id, specs) in table {
        for spec in specs {
            out.push_str(&format!(
                "{id}\t{}\t{}\t{}\n",
                spec.required_gender,
                spec.trigger_index
                    .map_or_else(|| "-".to_string(), |t| t.to_string()),
                format_index_list(&spec.entity_indices)
            ));
        }
    }
    out
}

pub fn load_entities(path: &Path) -> Result<EntityTable> {
    let text = read_normalized(path)?;
    parse_entities_str(&text, &path.display().to_string())
}
