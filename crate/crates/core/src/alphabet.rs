//! Event sets with per-event controllability, observability and
//! abstraction flags.
//!
//! Events are kept sorted by name, so two alphabets with the same event
//! names assign the same [`EventId`] to every event. All binary
//! constructions rely on this.

use serde::Serialize;

use crate::error::{Error, Result};

/// Index of an event inside an [`Alphabet`].
pub type EventId = usize;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Event {
    pub name: String,
    pub controllable: bool,
    pub observable: bool,
    pub highlevel: bool,
}

impl Event {
    pub fn new(name: impl Into<String>, controllable: bool, observable: bool, highlevel: bool) -> Self {
        Event {
            name: name.into(),
            controllable,
            observable,
            highlevel,
        }
    }

    /// An event whose flags carry no meaning (tuple letters of pair automata).
    pub fn plain(name: impl Into<String>) -> Self {
        Event::new(name, true, true, true)
    }

    fn same_flags(&self, other: &Event) -> bool {
        self.controllable == other.controllable
            && self.observable == other.observable
            && self.highlevel == other.highlevel
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Alphabet {
    events: Vec<Event>,
}

fn valid_name(name: &str) -> bool {
    !name.is_empty() && !name.chars().any(char::is_whitespace)
}

impl Alphabet {
    pub fn new(events: impl IntoIterator<Item = Event>) -> Result<Self> {
        let mut events: Vec<Event> = events.into_iter().collect();
        for e in &events {
            if !valid_name(&e.name) {
                return Err(Error::InvalidEventName(e.name.clone()));
            }
        }
        events.sort_by(|a, b| a.name.cmp(&b.name));
        for w in events.windows(2) {
            if w[0].name == w[1].name {
                return Err(Error::DuplicateEvent(w[0].name.clone()));
            }
        }
        Ok(Alphabet { events })
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn ids(&self) -> std::ops::Range<EventId> {
        0..self.events.len()
    }

    pub fn event(&self, id: EventId) -> &Event {
        &self.events[id]
    }

    pub fn name(&self, id: EventId) -> &str {
        &self.events[id].name
    }

    pub fn id(&self, name: &str) -> Option<EventId> {
        self.events.binary_search_by(|e| e.name.as_str().cmp(name)).ok()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.id(name).is_some()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.events.iter().map(|e| e.name.as_str())
    }

    /// Sub-alphabet of the events satisfying `keep`, flags preserved.
    pub fn filter(&self, keep: impl Fn(&Event) -> bool) -> Alphabet {
        Alphabet {
            events: self.events.iter().filter(|e| keep(e)).cloned().collect(),
        }
    }

    pub fn ids_where(&self, keep: impl Fn(&Event) -> bool) -> Vec<EventId> {
        self.ids().filter(|&i| keep(&self.events[i])).collect()
    }

    pub fn observable(&self) -> Alphabet {
        self.filter(|e| e.observable)
    }

    pub fn highlevel(&self) -> Alphabet {
        self.filter(|e| e.highlevel)
    }

    /// Σhi ∩ Σo.
    pub fn highlevel_observable(&self) -> Alphabet {
        self.filter(|e| e.highlevel && e.observable)
    }

    pub fn same_names(&self, other: &Alphabet) -> bool {
        self.events.len() == other.events.len() && self.events.iter().zip(&other.events).all(|(a, b)| a.name == b.name)
    }

    pub fn is_subset_of(&self, other: &Alphabet) -> bool {
        self.names().all(|n| other.contains(n))
    }

    /// Union with strict flag merging: a shared event must carry identical
    /// flags on both sides.
    pub fn union(&self, other: &Alphabet) -> Result<Alphabet> {
        let mut events = self.events.clone();
        for e in &other.events {
            match self.id(&e.name) {
                Some(i) if !self.events[i].same_flags(e) => return Err(Error::FlagConflict(e.name.clone())),
                Some(_) => {}
                None => events.push(e.clone()),
            }
        }
        Alphabet::new(events)
    }

    /// Union keeping the flags of `self` on shared events.
    pub fn union_lenient(&self, other: &Alphabet) -> Alphabet {
        let mut events = self.events.clone();
        events.extend(other.events.iter().filter(|e| !self.contains(&e.name)).cloned());
        Alphabet::new(events).expect("union of valid alphabets")
    }

    /// Maps every event of `self` to its id in `other` (by name).
    pub fn embedding(&self, other: &Alphabet) -> Result<Vec<EventId>> {
        self.names()
            .map(|n| {
                other
                    .id(n)
                    .ok_or_else(|| Error::AlphabetMismatch(format!("event `{n}` is not in the target alphabet")))
            })
            .collect()
    }

    pub(crate) fn require_same(&self, other: &Alphabet, what: &str) -> Result<()> {
        if self.same_names(other) {
            Ok(())
        } else {
            Err(Error::AlphabetMismatch(format!(
                "{what}: {{{}}} vs {{{}}}",
                self.names().collect::<Vec<_>>().join(","),
                other.names().collect::<Vec<_>>().join(",")
            )))
        }
    }

    pub fn word(&self, ids: &[EventId]) -> crate::Word {
        crate::Word(ids.iter().map(|&i| self.name(i).to_string()).collect())
    }

    pub fn word_ids(&self, word: &crate::Word) -> Result<Vec<EventId>> {
        word.0
            .iter()
            .map(|n| {
                self.id(n)
                    .ok_or_else(|| Error::AlphabetMismatch(format!("event `{n}` not in alphabet")))
            })
            .collect()
    }
}

/// A natural projection: erases every event of `source` outside `kept`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectionSpec {
    pub source: Alphabet,
    pub kept: Alphabet,
}

impl ProjectionSpec {
    pub fn new(source: Alphabet, kept: Alphabet) -> Result<Self> {
        if !kept.is_subset_of(&source) {
            return Err(Error::AlphabetMismatch(
                "kept events must be a subset of the source alphabet".into(),
            ));
        }
        Ok(ProjectionSpec { source, kept })
    }

    pub fn keeping(source: &Alphabet, keep: impl Fn(&Event) -> bool) -> Self {
        ProjectionSpec {
            kept: source.filter(keep),
            source: source.clone(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.kept.len() == self.source.len()
    }

    pub fn apply(&self, word: &crate::Word) -> crate::Word {
        crate::Word(word.0.iter().filter(|n| self.kept.contains(n)).cloned().collect())
    }

    /// Per source event: its id in `kept`, or `None` when erased.
    pub fn event_map(&self) -> Vec<Option<EventId>> {
        self.source.names().map(|n| self.kept.id(n)).collect()
    }
}
