use std::collections::BTreeMap;

use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

use crate::word::Word;

/// Named strings refuting a property, replayable against its definition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyWitness {
    pub kind: String,
    pub strings: BTreeMap<String, Word>,
    pub note: String,
}

impl PropertyWitness {
    pub fn new(kind: impl Into<String>) -> Self {
        PropertyWitness {
            kind: kind.into(),
            strings: BTreeMap::new(),
            note: String::new(),
        }
    }

    pub fn with(mut self, name: &str, word: Word) -> Self {
        self.strings.insert(name.to_string(), word);
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }

    /// Panics when the witness does not carry `name`; witnesses are built
    /// with a fixed key set per kind.
    pub fn get(&self, name: &str) -> &Word {
        self.strings
            .get(name)
            .unwrap_or_else(|| panic!("witness `{}` has no string `{name}`", self.kind))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BudgetReport {
    pub budget: usize,
    pub examined: usize,
    pub note: String,
}

/// Three-valued outcome of a property check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Violated(PropertyWitness),
    Inconclusive(BudgetReport),
}

impl Verdict {
    pub fn is_holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn is_violated(&self) -> bool {
        matches!(self, Verdict::Violated(_))
    }

    pub fn is_inconclusive(&self) -> bool {
        matches!(self, Verdict::Inconclusive(_))
    }

    pub fn witness(&self) -> Option<&PropertyWitness> {
        match self {
            Verdict::Violated(w) => Some(w),
            _ => None,
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Violated(_) => "violated",
            Verdict::Inconclusive(_) => "inconclusive",
        }
    }

    /// 0 = holds, 1 = violated, 2 = inconclusive.
    pub fn exit_code(&self) -> i32 {
        match self {
            Verdict::Holds => 0,
            Verdict::Violated(_) => 1,
            Verdict::Inconclusive(_) => 2,
        }
    }
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(None)?;
        map.serialize_entry("verdict", self.tag())?;
        match self {
            Verdict::Holds => map.serialize_entry("witness", &None::<PropertyWitness>)?,
            Verdict::Violated(w) => map.serialize_entry("witness", w)?,
            Verdict::Inconclusive(b) => {
                map.serialize_entry("witness", &None::<PropertyWitness>)?;
                map.serialize_entry("budget", b)?;
            }
        }
        map.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shape() {
        let v = Verdict::Violated(
            PropertyWitness::new("moc")
                .with("s", Word::from_letters("c"))
                .with("t'", Word::from_letters("bc")),
        );
        let json = serde_json::to_value(&v).unwrap();
        assert_eq!(json["verdict"], "violated");
        assert_eq!(json["witness"]["strings"]["t'"], serde_json::json!(["b", "c"]));
        assert_eq!(
            serde_json::to_value(Verdict::Holds).unwrap()["witness"],
            serde_json::Value::Null
        );
    }
}
