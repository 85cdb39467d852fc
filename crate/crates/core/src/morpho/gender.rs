use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

const BUILTIN_TAGS: [&str; 4] = ["masculine", "feminine", "neuter", "none"];

/// A grammatical gender value.
///
/// The four built-in tags cover binary and neuter grammatical gender plus an
/// explicit "no gender" marker. `Custom` holds user-registered labels such as
/// `neutral-new` for placeholder gendered language.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GenderLabel {
    Masculine,
    Feminine,
    Neuter,
    None,
    Custom(String),
}

impl GenderLabel {
    pub fn as_str(&self) -> &str {
        match self {
            GenderLabel::Masculine => "masculine",
            GenderLabel::Feminine => "feminine",
            GenderLabel::Neuter => "neuter",
            GenderLabel::None => "none",
            GenderLabel::Custom(s) => s,
        }
    }

    pub fn builtin(tag: &str) -> Option<GenderLabel> {
        match tag {
            "masculine" => Some(GenderLabel::Masculine),
            "feminine" => Some(GenderLabel::Feminine),
            "neuter" => Some(GenderLabel::Neuter),
            "none" => Some(GenderLabel::None),
            _ => None,
        }
    }

    /// Builds a custom label, rejecting built-in names and malformed text.
    pub fn custom(name: &str) -> Result<GenderLabel> {
        validate_custom(name)?;
        Ok(GenderLabel::Custom(name.to_string()))
    }

    /// Parses a tag that must be built-in or present in `labels`.
    pub fn parse(tag: &str, labels: &LabelSet) -> Result<GenderLabel> {
        if let Some(label) = GenderLabel::builtin(tag) {
            return Ok(label);
        }
        if labels.contains(tag) {
            return Ok(GenderLabel::Custom(tag.to_string()));
        }
        Err(Error::UnknownGender(tag.to_string()))
    }

    /// Parses any built-in tag or any well-formed custom label.
    pub fn parse_open(tag: &str) -> Result<GenderLabel> {
        match GenderLabel::builtin(tag) {
            Some(label) => Ok(label),
            None => GenderLabel::custom(tag),
        }
    }

    pub fn is_none(&self) -> bool {
        matches!(self, GenderLabel::None)
    }
}

impl fmt::Display for GenderLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

fn validate_custom(name: &str) -> Result<()> {
    if name.is_empty() {
        return Err(Error::InvalidLabel(name.to_string(), "label is empty"));
    }
    if BUILTIN_TAGS.contains(&name) {
        return Err(Error::InvalidLabel(
            name.to_string(),
            "label collides with a built-in gender",
        ));
    }
    if name == "-" || name.chars().any(|c| c.is_whitespace() || c == ',') {
        return Err(Error::InvalidLabel(
            name.to_string(),
            "label must not contain whitespace or commas",
        ));
    }
    Ok(())
}

/// Registry of user-defined gender labels accepted by strict parsers.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LabelSet {
    custom: BTreeSet<String>,
}

impl LabelSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn register(&mut self, name: &str) -> Result<GenderLabel> {
        let label = GenderLabel::custom(name)?;
        self.custom.insert(name.to_string());
        Ok(label)
    }

    pub fn with(mut self, name: &str) -> Result<Self> {
        self.register(name)?;
        Ok(self)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.custom.contains(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.custom.iter().map(String::as_str)
    }
}
