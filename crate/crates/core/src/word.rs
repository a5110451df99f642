use std::fmt;

use serde::{Deserialize, Serialize};

/// A finite string of event names. The empty word is ε.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(pub Vec<String>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// One event per character: `Word::from_letters("bac")` is `b a c`.
    pub fn from_letters(s: &str) -> Self {
        Word(s.chars().map(|c| c.to_string()).collect())
    }

    /// Whitespace-separated event names; `ε` or an empty string is the empty word.
    pub fn parse(s: &str) -> Self {
        Word(s.split_whitespace().filter(|t| *t != "ε").map(str::to_string).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word(self.0.iter().chain(&other.0).cloned().collect())
    }

    pub fn push(&mut self, event: impl Into<String>) {
        self.0.push(event.into());
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.starts_with(&self.0)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        if self.0.iter().all(|e| e.chars().count() == 1) {
            f.write_str(&self.0.concat())
        } else {
            f.write_str(&self.0.join(" "))
        }
    }
}
