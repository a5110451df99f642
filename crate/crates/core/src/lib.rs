//! Verification and synthesis for hierarchical supervisory control of
//! discrete-event systems under partial observation.
//!
//! The crate decides observation consistency (OC), local observation
//! consistency (LOC) and modified observation consistency (MOC) of a plant
//! with respect to a high-level abstraction, checks the classical
//! supervisory properties (controllability, observability, normality,
//! relative observability), and synthesises supremal normal and supremal
//! relatively observable sublanguages on both levels of the hierarchy.

pub mod alphabet;
pub mod automaton;
pub mod check;
pub mod cli;
pub mod error;
pub mod fixtures;
pub mod gadgets;
pub mod hierarchy;
pub mod ops;
pub mod oracle;
pub mod relations;
pub mod saut;
pub mod sct;
pub mod verdict;
pub mod word;

pub use alphabet::{Alphabet, Event, EventId, ProjectionSpec};
pub use automaton::{Automaton, Label, StateId};
pub use error::{Error, Result};
pub use saut::{parse_automaton, parse_automaton_with, serialize_automaton, ParseOptions};
pub use verdict::{BudgetReport, PropertyWitness, Verdict};
pub use word::Word;
