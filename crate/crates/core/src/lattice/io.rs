//! Tab-separated lattice listing:
//! `from<TAB>to<TAB>word<TAB>tok+tok<TAB>gender` per arc, then `FINAL<TAB>n`.
//! An arc without a gender is written as `-`.

use crate::error::{Error, Result};
use crate::morpho::GenderLabel;
use crate::text::content_lines;

use super::{HypothesisLattice, LatticeArc};

const NO_GENDER: &str = "-";

pub fn serialize_lattice(lattice: &HypothesisLattice) -> String {
    let mut out = String::new();
    for arc in lattice.arcs() {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\n",
            arc.from,
            arc.to,
            arc.word,
            arc.model_tokens.join("+"),
            arc.gender.as_ref().map_or(NO_GENDER, GenderLabel::as_str)
        ));
    }
    out.push_str(&format!("FINAL\t{}\n", lattice.final_state()));
    out
}

pub fn deserialize_lattice(text: &str) -> Result<HypothesisLattice> {
    const ORIGIN: &str = "lattice";
    let mut positions: Vec<Vec<LatticeArc>> = Vec::new();
    let mut final_state = None;
    for (line_no, line) in content_lines(text) {
        let cols: Vec<&str> = line.split('\t').collect();
        if cols[0] == "FINAL" {
            if final_state.is_some() {
                return Err(Error::parse(ORIGIN, line_no, "repeated FINAL line"));
            }
            let state = cols
                .get(1)
                .and_then(|s| s.parse::<usize>().ok())
                .filter(|_| cols.len() == 2)
                .ok_or_else(|| Error::parse(ORIGIN, line_no, "expected FINAL<TAB>state"))?;
            final_state = Some(state);
            continue;
        }
        if final_state.is_some() {
            return Err(Error::parse(ORIGIN, line_no, "arc after FINAL line"));
        }
        if cols.len() != 5 {
            return Err(Error::parse(
                ORIGIN,
                line_no,
                format!("expected 5 tab-separated columns, found {}", cols.len()),
            ));
        }
        let state = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| Error::parse(ORIGIN, line_no, format!("bad state `{s}`")))
        };
        let from = state(cols[0])?;
        let to = state(cols[1])?;
        if to != from + 1 {
            return Err(Error::parse(ORIGIN, line_no, "arc must advance exactly one state"));
        }
        if from != positions.len() && from + 1 != positions.len() {
            return Err(Error::parse(
                ORIGIN,
                line_no,
                format!("arcs must be listed by state; got state {from}"),
            ));
        }
        let gender = match cols[4] {
            NO_GENDER => None,
            tag => Some(
                GenderLabel::parse_open(tag)
                    .map_err(|e| Error::parse(ORIGIN, line_no, e.to_string()))?,
            ),
        };
        let arc = LatticeArc {
            from,
            to,
            word: cols[2].to_string(),
            model_tokens: cols[3].split('+').map(str::to_string).collect(),
            gender,
        };
        if from == positions.len() {
            positions.push(Vec::new());
        }
        positions[from].push(arc);
    }
    let final_state =
        final_state.ok_or_else(|| Error::parse(ORIGIN, 0, "missing FINAL line"))?;
    if positions.is_empty() {
        return Err(Error::parse(ORIGIN, 0, "lattice has no arcs"));
    }
    if final_state != positions.len() {
        return Err(Error::parse(
            ORIGIN,
            0,
            format!("FINAL {final_state} but arcs reach {}", positions.len()),
        ));
    }
    HypothesisLattice::new(positions).map_err(|e| Error::parse(ORIGIN, 0, e.to_string()))
}
