//! The worked instances used throughout the documentation and tests.

use crate::automaton::Automaton;
use crate::saut::parse_automaton;

pub const OC_NOT_MOC_PLANT: &str = include_str!("../data/oc_not_moc_plant.saut");
pub const OC_NOT_MOC_SPEC: &str = include_str!("../data/oc_not_moc_spec.saut");
pub const RELOBS_GAP_PLANT: &str = include_str!("../data/relobs_gap_plant.saut");
pub const RELOBS_GAP_SPEC: &str = include_str!("../data/relobs_gap_spec.saut");
pub const RELOBS_GAP_AMBIENT: &str = include_str!("../data/relobs_gap_ambient.saut");

fn load(text: &str) -> Automaton {
    parse_automaton(text).expect("bundled fixture parses")
}

/// L = {ε,a,b,c,ba,ac,bac} over {a,b,c}, Σo = {a,c}, Σhi = {b,c}.
pub fn oc_not_moc_plant() -> Automaton {
    load(OC_NOT_MOC_PLANT)
}

/// K = {ε,b,c} over Σhi.
pub fn oc_not_moc_spec() -> Automaton {
    load(OC_NOT_MOC_SPEC)
}

/// L(G) = {ε,a,ae,au,aue}, Σo = {a,e}, Σhi = {a,u}.
pub fn relobs_gap_plant() -> Automaton {
    load(RELOBS_GAP_PLANT)
}

/// K = {ε,a} over {a,u}.
pub fn relobs_gap_spec() -> Automaton {
    load(RELOBS_GAP_SPEC)
}

/// C = {ε,a,au} over {a,u}.
pub fn relobs_gap_ambient() -> Automaton {
    load(RELOBS_GAP_AMBIENT)
}
