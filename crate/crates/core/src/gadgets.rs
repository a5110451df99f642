//! Test-data generators: the universality reductions for OC, MOC and LOC,
//! and a seeded random plant generator.
//!
//! Each reduction turns an all-marked NFA `A` into a plant `B` that has the
//! property exactly when `L(A) = Σ*`. The builders read `A` as its
//! generated language, so marking in the input is ignored.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::alphabet::{Alphabet, Event};
use crate::automaton::{Automaton, Label, StateId};
use crate::error::{Error, Result};
use crate::hierarchy::{build_abstraction, check_loc, check_moc, check_oc};
use crate::ops;
use crate::oracle::{oracle_check, OracleInputs, OracleProperty};
use crate::saut::RESERVED_EVENTS;

pub const AT: &str = "@";
pub const SHARP: &str = "#";

/// Copies every state and transition of `a` into `b` (whose alphabet must
/// contain all of `a`'s event names); returns the state offset.
fn embed(b: &mut Automaton, a: &Automaton, prefix: &str) -> Result<StateId> {
    let map = a.alphabet().embedding(b.alphabet())?;
    let offset = b.num_states();
    for s in 0..a.num_states() {
        let id = b.add_state_unique(format!("{prefix}{}", a.state_name(s)));
        b.set_marked(id, true);
    }
    for s in 0..a.num_states() {
        for &(l, t) in a.edges(s) {
            let l = match l {
                Label::Event(e) => Label::Event(map[e]),
                Label::Silent => Label::Silent,
            };
            b.add_transition(offset + s, l, offset + t);
        }
    }
    Ok(offset)
}

fn require_unreserved(a: &Automaton) -> Result<()> {
    for name in RESERVED_EVENTS {
        if a.alphabet().contains(name) {
            return Err(Error::Precondition(format!(
                "gadget input already uses the reserved event `{name}`"
            )));
        }
    }
    Ok(())
}

fn marked_state(b: &mut Automaton, name: &str) -> StateId {
    let s = b.add_state_unique(name.to_string());
    b.set_marked(s, true);
    s
}

/// Shared body of the OC and MOC reductions:
/// L(B) = @#L(A) ∪ @Σ* ∪ #Σ* (∪ L(A) when `with_a_branch`).
fn at_sharp_gadget(a: &Automaton, with_a_branch: bool) -> Result<Automaton> {
    require_unreserved(a)?;
    let mut events: Vec<Event> = a
        .alphabet()
        .events()
        .iter()
        .map(|e| Event::new(e.name.clone(), true, true, true))
        .collect();
    events.push(Event::new(AT, true, true, false));
    events.push(Event::new(SHARP, true, false, true));
    let sigma = Alphabet::new(events)?;
    let at = sigma.id(AT).expect("added");
    let sharp = sigma.id(SHARP).expect("added");

    let mut b = Automaton::new(sigma.clone());
    let start = marked_state(&mut b, "start");
    let after_at = marked_state(&mut b, "after@");
    let at_loop = marked_state(&mut b, "@loop");
    let after_sharp = marked_state(&mut b, "after#");
    b.add_initial(start);
    b.add_transition(start, Label::Event(at), after_at);
    b.add_transition(start, Label::Event(sharp), after_sharp);
    for name in a.alphabet().names() {
        let e = sigma.id(name).expect("embedded");
        b.add_transition(after_at, Label::Event(e), at_loop);
        b.add_transition(at_loop, Label::Event(e), at_loop);
        b.add_transition(after_sharp, Label::Event(e), after_sharp);
    }
    let offset = embed(&mut b, a, "A.")?;
    for &i in a.initial() {
        b.add_transition(after_at, Label::Event(sharp), offset + i);
    }
    if with_a_branch {
        for &i in a.initial() {
            b.add_initial(offset + i);
        }
    }
    Ok(b)
}

/// The OC reduction: L(B) = @#L(A) ∪ @Σ* ∪ #Σ*, with Σhi = Σ ∪ {#} and
/// Σo = Σ ∪ {@}. B is OC iff A is universal.
pub fn gadget_oc(a: &Automaton) -> Result<Automaton> {
    at_sharp_gadget(a, false)
}

/// The MOC reduction: the OC gadget plus the branch L(A) itself.
/// B is MOC iff A is universal.
pub fn gadget_moc(a: &Automaton) -> Result<Automaton> {
    at_sharp_gadget(a, true)
}

/// Name of the primed copy of an event in the LOC gadget.
pub fn primed(name: &str) -> String {
    format!("{name}'")
}

/// The LOC reduction: B over ΣA ∪ ΣA′ with
/// L(B) = closure(ΣA·ΣA·L(A)) ∪ closure((ΣA·ΣA′)*) and
/// Σc = Σo = Σhi = ΣA. B is LOC iff A is universal.
///
/// Requires |ΣA| ≥ 2 and ε ∈ L(A) (that is, L(A) ≠ ∅).
pub fn gadget_loc(a: &Automaton) -> Result<Automaton> {
    if a.alphabet().len() < 2 {
        return Err(Error::Precondition(
            "the LOC gadget needs an input alphabet with at least two events".into(),
        ));
    }
    if a.initial().is_empty() {
        return Err(Error::Precondition(
            "the LOC gadget needs ε ∈ L(A), but A has no initial state".into(),
        ));
    }
    let mut events = Vec::new();
    for e in a.alphabet().events() {
        if a.alphabet().contains(&primed(&e.name)) {
            return Err(Error::Precondition(format!(
                "gadget input already contains the primed event `{}`",
                primed(&e.name)
            )));
        }
        events.push(Event::new(e.name.clone(), true, true, true));
        events.push(Event::new(primed(&e.name), false, false, false));
    }
    let sigma = Alphabet::new(events)?;
    let mut b = Automaton::new(sigma.clone());
    let n1 = marked_state(&mut b, "n1");
    let n2 = marked_state(&mut b, "n2");
    let n3 = marked_state(&mut b, "n3");
    let n4 = marked_state(&mut b, "n4");
    b.add_initial(n1);
    b.add_initial(n3);
    let offset = embed(&mut b, a, "A.")?;
    for name in a.alphabet().names() {
        let e = sigma.id(name).expect("embedded");
        let e2 = sigma.id(&primed(name)).expect("embedded");
        b.add_transition(n1, Label::Event(e), n2);
        for &i in a.initial() {
            b.add_transition(n2, Label::Event(e), offset + i);
        }
        b.add_transition(n3, Label::Event(e), n4);
        b.add_transition(n4, Label::Event(e2), n3);
    }
    Ok(b)
}

/// L(A) = Σ*, decided by a subset-construction inclusion check.
pub fn is_universal(a: &Automaton) -> bool {
    shortest_missing(a).is_none()
}

/// Shortest (then lexicographically least) string outside L(A).
pub fn shortest_missing(a: &Automaton) -> Option<crate::Word> {
    let l = ops::generated(a);
    let all = Automaton::universal(a.alphabet());
    ops::inclusion_counterexample(&all, &l)
        .expect("same alphabet")
        .map(|w| a.alphabet().word(&w))
}

/// Which reduction to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GadgetKind {
    Oc,
    Moc,
    Loc,
}

impl GadgetKind {
    pub fn build(self, a: &Automaton) -> Result<Automaton> {
        match self {
            GadgetKind::Oc => gadget_oc(a),
            GadgetKind::Moc => gadget_moc(a),
            GadgetKind::Loc => gadget_loc(a),
        }
    }
}

/// Outcome of deciding a gadget's property with the checker and the
/// bounded oracle together.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GadgetOutcome {
    /// Checker Holds and the oracle found nothing up to its bound.
    Holds,
    /// Checker or oracle exhibited a genuine violation.
    Refuted,
    /// Neither side could decide.
    Inconclusive,
}

/// Combined decision: a violation from either side refutes; an oracle-clean
/// run together with a checker Holds confirms; anything else is left open.
pub fn decide_gadget(kind: GadgetKind, b: &Automaton, budget: usize, oracle_bound: usize) -> Result<GadgetOutcome> {
    let ctx = build_abstraction(b)?;
    let (verdict, property) = match kind {
        GadgetKind::Oc => (check_oc(&ctx, budget)?, OracleProperty::Oc),
        GadgetKind::Moc => (check_moc(&ctx, budget)?, OracleProperty::Moc),
        GadgetKind::Loc => (check_loc(&ctx, budget)?, OracleProperty::Loc),
    };
    if verdict.is_violated() {
        return Ok(GadgetOutcome::Refuted);
    }
    let report = oracle_check(property, OracleInputs::plant(b), oracle_bound)?;
    Ok(if report.is_violation() {
        GadgetOutcome::Refuted
    } else if verdict.is_holds() {
        GadgetOutcome::Holds
    } else {
        GadgetOutcome::Inconclusive
    })
}

/// Parameters of [`random_plant`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorParams {
    pub states: usize,
    pub events: usize,
    pub p_controllable: f64,
    pub p_observable: f64,
    pub p_highlevel: f64,
    /// Expected number of outgoing transitions per state and event.
    pub transition_density: f64,
    /// Allow several targets per state and event.
    pub nondeterministic: bool,
    /// Probability that a state is marked; 1.0 gives an all-marked
    /// (prefix-closed) automaton.
    pub p_marked: f64,
    pub seed: u64,
}

impl Default for GeneratorParams {
    fn default() -> Self {
        GeneratorParams {
            states: 4,
            events: 3,
            p_controllable: 0.5,
            p_observable: 0.5,
            p_highlevel: 0.5,
            transition_density: 0.6,
            nondeterministic: false,
            p_marked: 1.0,
            seed: 0,
        }
    }
}

impl GeneratorParams {
    fn validate(&self) -> Result<()> {
        let probabilities = [
            self.p_controllable,
            self.p_observable,
            self.p_highlevel,
            self.transition_density,
            self.p_marked,
        ];
        if probabilities.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return Err(Error::Invalid("generator probabilities must lie in [0, 1]".into()));
        }
        if self.states == 0 || self.events == 0 || self.events > 26 {
            return Err(Error::Invalid(
                "the generator needs at least one state and between 1 and 26 events".into(),
            ));
        }
        Ok(())
    }
}

/// A random automaton with one initial state (state 0). Events are named
/// `a`, `b`, ...; flags are drawn independently per event. The same
/// parameters always give the same automaton.
pub fn random_plant(p: &GeneratorParams) -> Result<Automaton> {
    p.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let events: Vec<Event> = (0..p.events)
        .map(|i| {
            let name = ((b'a' + i as u8) as char).to_string();
            Event::new(
                name,
                rng.gen_bool(p.p_controllable),
                rng.gen_bool(p.p_observable),
                rng.gen_bool(p.p_highlevel),
            )
        })
        .collect();
    let sigma = Alphabet::new(events)?;
    let mut g = Automaton::new(sigma.clone());
    for s in 0..p.states {
        g.add_state(format!("q{s}"))?;
    }
    g.add_initial(0);
    for s in 0..p.states {
        let marked = s == 0 && p.p_marked > 0.0 || rng.gen_bool(p.p_marked);
        g.set_marked(s, marked);
    }
    for s in 0..p.states {
        for e in sigma.ids() {
            if p.nondeterministic {
                let per_target = (p.transition_density / p.states as f64).min(1.0);
                for t in 0..p.states {
                    if rng.gen_bool(per_target) {
                        g.add_transition(s, Label::Event(e), t);
                    }
                }
            } else if rng.gen_bool(p.transition_density) {
                let t = rng.gen_range(0..p.states);
                g.add_transition(s, Label::Event(e), t);
            }
        }
    }
    Ok(g)
}
