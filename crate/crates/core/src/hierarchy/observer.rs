//! The L_m(G)-observer property and local control consistency, decided
//! exactly on the reachable pairs of the determinized plant and abstraction.

use std::collections::BTreeSet;

use super::HierarchyContext;
use crate::alphabet::EventId;
use crate::automaton::{shortest_path, Automaton, StateId};
use crate::error::{Error, Result};
use crate::ops;
use crate::verdict::{PropertyWitness, Verdict};

fn dfa_next(d: &Automaton, s: StateId, e: EventId) -> Option<StateId> {
    d.targets(s, e).next()
}

fn from_state(d: &Automaton, s: StateId) -> Automaton {
    let mut out = d.clone();
    out.initial = vec![s];
    out
}

/// Q is an L_m(G)-observer: for every s ∈ L(G) and every t ∈ Q(L_m(G))
/// extending Q(s) there is u with su ∈ L_m(G) and Q(su) = t.
///
/// The continuations of s depend only on the subset state Y reached by s,
/// and those of Q(s) only on the abstraction state X, so it suffices to
/// compare L_m(G_hi from X) with Q(L_m(G from Y)) for every reachable (Y, X).
/// Witness: `s` and the unreachable completion `t`.
pub fn check_observer(ctx: &HierarchyContext) -> Result<Verdict> {
    if !ops::is_nonblocking(&ctx.plant) {
        return Err(Error::Precondition("observer check needs a nonblocking plant".into()));
    }
    let g = ops::determinize(&ctx.plant);
    let h = ops::determinize(&ctx.abstraction);
    let sigma = ctx.sigma().clone();
    let to_hi: Vec<Option<EventId>> = ctx.q.event_map();
    if g.initial().is_empty() {
        return Ok(Verdict::Holds);
    }
    let root = (g.initial()[0], h.initial()[0]);
    let mut failure: Option<(StateId, StateId, Vec<EventId>)> = None;
    let found = shortest_path(
        [root],
        |&(y, x)| {
            sigma
                .ids()
                .filter_map(|e| {
                    let y2 = dfa_next(&g, y, e)?;
                    let x2 = match to_hi[e] {
                        Some(f) => dfa_next(&h, x, f)?,
                        None => x,
                    };
                    Some((e, (y2, x2)))
                })
                .collect()
        },
        |&(y, x)| {
            let realizable = match ops::project(&from_state(&g, y), &ctx.q) {
                Ok(a) => a,
                Err(_) => return false,
            };
            match ops::inclusion_counterexample(&from_state(&h, x), &realizable) {
                Ok(Some(v)) => {
                    failure = Some((y, x, v));
                    true
                }
                _ => false,
            }
        },
    );
    Ok(match (found, failure) {
        (Some((s, _)), Some((_, _, v))) => {
            let hi = &ctx.q.kept;
            let s_word = sigma.word(&s);
            let t = ctx.q.apply(&s_word).concat(&hi.word(&v));
            Verdict::Violated(
                PropertyWitness::new("observer").with("s", s_word).with("t", t).note(
                    "t is a marked high-level string extending Q(s), but no marked continuation of s abstracts to t",
                ),
            )
        }
        _ => Verdict::Holds,
    })
}

/// Q is locally control consistent for L(G) and Σu: whenever a low-level
/// path leads from s to a high-level uncontrollable event e, an
/// uncontrollable low-level path does too. Witness: `s`, `e` and the
/// controllable-containing path `u`.
pub fn check_lcc(ctx: &HierarchyContext) -> Result<Verdict> {
    let g = ops::determinize(&ctx.language);
    let sigma = ctx.sigma().clone();
    if g.initial().is_empty() {
        return Ok(Verdict::Holds);
    }
    let low: Vec<EventId> = sigma.ids_where(|e| !e.highlevel);
    let targets: Vec<EventId> = sigma.ids_where(|e| e.highlevel && !e.controllable);
    // states reachable from y through the allowed low-level events
    let reach = |y: StateId, allowed: &dyn Fn(EventId) -> bool| -> BTreeSet<StateId> {
        let mut seen = BTreeSet::from([y]);
        let mut stack = vec![y];
        while let Some(q) = stack.pop() {
            for &e in &low {
                if allowed(e) {
                    if let Some(n) = dfa_next(&g, q, e) {
                        if seen.insert(n) {
                            stack.push(n);
                        }
                    }
                }
            }
        }
        seen
    };
    let violation = |y: StateId| -> Option<EventId> {
        let any = reach(y, &|_| true);
        let unc = reach(y, &|e| !sigma.event(e).controllable);
        targets
            .iter()
            .copied()
            .find(|&e| any.iter().any(|&q| g.enables(q, e)) && !unc.iter().any(|&q| g.enables(q, e)))
    };
    let found = shortest_path(
        [g.initial()[0]],
        |&y| sigma.ids().filter_map(|e| dfa_next(&g, y, e).map(|n| (e, n))).collect(),
        |&y| violation(y).is_some(),
    );
    Ok(match found {
        None => Verdict::Holds,
        Some((s, y)) => {
            let e = violation(y).expect("goal state violates");
            let u = shortest_path(
                [y],
                |&q| low.iter().filter_map(|&a| dfa_next(&g, q, a).map(|n| (a, n))).collect(),
                |&q| g.enables(q, e),
            )
            .map(|(u, _)| u)
            .unwrap_or_default();
            Verdict::Violated(
                PropertyWitness::new("lcc")
                    .with("s", sigma.word(&s))
                    .with("e", sigma.word(&[e]))
                    .with("u", sigma.word(&u))
                    .note(
                        "sue is generated for a low-level u, but no uncontrollable low-level string leads from s to e",
                    ),
            )
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hierarchy::build_abstraction;
    use crate::saut::parse_automaton;

    fn ctx(text: &str) -> HierarchyContext {
        build_abstraction(&parse_automaton(text).unwrap()).unwrap()
    }

    #[test]
    fn observer_holds_when_low_path_realizes_completion() {
        // L_m = {ε, a, ab}, Σhi = {b}
        let c = ctx("event a c o lo\nevent b c o hi\nstate 0\nstate 1\nstate 2\ninitial 0\nmarked 0\nmarked 1\nmarked 2\ntrans 0 a 1\ntrans 1 b 2\n");
        assert!(check_observer(&c).unwrap().is_holds());
    }

    #[test]
    fn observer_fails_on_dead_branch() {
        // L_m = {ε, a, bh}, Σhi = {h}: after a, h is unreachable
        let c = ctx("event a c o lo\nevent b c o lo\nevent h c o hi\nstate 0\nstate 1\nstate 2\nstate 3\ninitial 0\nmarked 0\nmarked 1\nmarked 3\ntrans 0 a 1\ntrans 0 b 2\ntrans 2 h 3\n");
        let v = check_observer(&c).unwrap();
        let w = v.witness().unwrap();
        assert_eq!(w.get("s").to_string(), "a");
        assert_eq!(w.get("t").to_string(), "h");
    }

    #[test]
    fn observer_rejects_blocking_plants() {
        let c = ctx("event a c o hi\nstate 0\nstate 1\ninitial 0\nmarked 0\ntrans 0 a 1\n");
        assert!(check_observer(&c).is_err());
    }

    #[test]
    fn lcc_examples() {
        // s = ε, c controllable low-level, e uncontrollable high-level
        let c = ctx("event c c o lo\nevent e u o hi\nstate 0\nstate 1\nstate 2\ninitial 0\nmarked 0\nmarked 1\nmarked 2\ntrans 0 c 1\ntrans 1 e 2\n");
        let v = check_lcc(&c).unwrap();
        let w = v.witness().unwrap();
        assert_eq!(w.get("s").to_string(), "ε");
        assert_eq!(w.get("e").to_string(), "e");
        assert_eq!(w.get("u").to_string(), "c");

        let all_unc = ctx("event c u o lo\nevent e u o hi\nstate 0\nstate 1\nstate 2\ninitial 0\nmarked 0\nmarked 1\nmarked 2\ntrans 0 c 1\ntrans 1 e 2\n");
        assert!(check_lcc(&all_unc).unwrap().is_holds());
        let no_target = ctx("event c c o lo\nevent e c o hi\nstate 0\nstate 1\nstate 2\ninitial 0\nmarked 0\nmarked 1\nmarked 2\ntrans 0 c 1\ntrans 1 e 2\n");
        assert!(check_lcc(&no_target).unwrap().is_holds());
    }
}
