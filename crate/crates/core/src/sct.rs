//! Classical supervisory-control properties of a specification with respect
//! to a plant, and supremal normal / relatively observable sublanguages.
//!
//! Plants are read as their generated language L(G) wherever the
//! definitions refer to L(G); specifications are read through their prefix
//! closure K̄. Event flags (controllable, observable) are taken from the
//! plant's alphabet.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::alphabet::{EventId, ProjectionSpec};
use crate::automaton::{explore, shortest_path, Automaton, Label, Node, StateId};
use crate::error::{Error, Result};
use crate::ops;
use crate::verdict::{PropertyWitness, Verdict};

/// `a` over the plant's alphabet (names must agree; flags come from `plant`).
pub(crate) fn rebase(a: &Automaton, plant: &Automaton, what: &str) -> Result<Automaton> {
    a.alphabet().require_same(plant.alphabet(), what)?;
    a.extend_alphabet(plant.alphabet())
}

/// Complete DFA of the prefix closure; the dead state is the only unmarked
/// one, so "w ∈ closure" is "the state reached by w is marked".
pub(crate) fn closure_dfa(a: &Automaton) -> Automaton {
    ops::complete(&ops::minimize(&ops::prefix_close(a)))
}

fn dfa_step(d: &Automaton, s: StateId, e: EventId) -> StateId {
    d.targets(s, e).next().expect("complete DFA")
}

fn dfa_init(d: &Automaton) -> StateId {
    d.initial()[0]
}

fn require_included(k: &Automaton, g: &Automaton, what: &str) -> Result<()> {
    if let Some(w) = ops::inclusion_counterexample(k, g)? {
        return Err(Error::Precondition(format!(
            "{what}: `{}` is not in the plant's marked language",
            k.alphabet().word(&w)
        )));
    }
    Ok(())
}

/// K̄Σu ∩ L(G) ⊆ K̄. Witness: `s` ∈ K̄, uncontrollable `e`, `se` ∈ L(G)∖K̄.
pub fn check_controllability(k: &Automaton, g: &Automaton) -> Result<Verdict> {
    let k = rebase(k, g, "controllability")?;
    require_included(&k, g, "controllability")?;
    let kd = closure_dfa(&k);
    let gd = closure_dfa(g);
    let sigma = g.alphabet();
    let unc = sigma.ids_where(|e| !e.controllable);
    let found = shortest_path(
        [(dfa_init(&kd), dfa_init(&gd))],
        |&(p, q)| {
            sigma
                .ids()
                .map(|e| (e, (dfa_step(&kd, p, e), dfa_step(&gd, q, e))))
                .filter(|&(_, (p2, _))| kd.is_marked(p2))
                .collect()
        },
        |&(p, q)| {
            unc.iter()
                .any(|&u| gd.is_marked(dfa_step(&gd, q, u)) && !kd.is_marked(dfa_step(&kd, p, u)))
        },
    );
    Ok(match found {
        None => Verdict::Holds,
        Some((s, (p, q))) => {
            let e = *unc
                .iter()
                .find(|&&u| gd.is_marked(dfa_step(&gd, q, u)) && !kd.is_marked(dfa_step(&kd, p, u)))
                .expect("goal event");
            let mut se = s.clone();
            se.push(e);
            Verdict::Violated(
                PropertyWitness::new("controllability")
                    .with("s", sigma.word(&s))
                    .with("e", sigma.word(&[e]))
                    .with("se", sigma.word(&se))
                    .note("s is in the closure of K, e is uncontrollable, se is generated by the plant but leaves the closure of K"),
            )
        }
    })
}

/// Which side of the observation-synchronized self-product moves.
#[derive(Clone, Copy)]
enum Side {
    Both,
    Left,
    Right,
}

/// Shared verifier for observability-type properties: searches for s, s′
/// with P(s) = P(s′) and an event e ∈ `events` such that se ∈ K̄,
/// s′ ∈ C̄, s′e ∈ L(G) and s′e ∉ K̄.
fn observation_verifier(k: &Automaton, c: &Automaton, g: &Automaton, events: &[EventId], kind: &str) -> Verdict {
    let sigma = g.alphabet().clone();
    let kd = closure_dfa(k);
    let cd = closure_dfa(c);
    let gd = closure_dfa(g);
    // state: (K̄ along s, K̄ along s′, C̄ along s′, L(G) along s′)
    type St = (StateId, StateId, StateId, StateId);
    let root: St = (dfa_init(&kd), dfa_init(&kd), dfa_init(&cd), dfa_init(&gd));
    let n = sigma.len();
    let decode = |code: EventId| -> (EventId, Side) {
        let side = match code % 3 {
            0 => Side::Both,
            1 => Side::Left,
            _ => Side::Right,
        };
        (code / 3, side)
    };
    let violating = |&(k1, k2, c2, g2): &St, e: EventId| {
        kd.is_marked(dfa_step(&kd, k1, e))
            && cd.is_marked(c2)
            && gd.is_marked(dfa_step(&gd, g2, e))
            && !kd.is_marked(dfa_step(&kd, k2, e))
    };
    let found = shortest_path(
        [root],
        |&(k1, k2, c2, g2): &St| {
            let mut next = Vec::new();
            for e in 0..n {
                let left = (dfa_step(&kd, k1, e), k2, c2, g2);
                let right = (k1, dfa_step(&kd, k2, e), dfa_step(&cd, c2, e), dfa_step(&gd, g2, e));
                if sigma.event(e).observable {
                    let both = (left.0, right.1, right.2, right.3);
                    if kd.is_marked(both.0) && cd.is_marked(both.2) {
                        next.push((3 * e, both));
                    }
                } else {
                    if kd.is_marked(left.0) {
                        next.push((3 * e + 1, left));
                    }
                    if cd.is_marked(right.2) {
                        next.push((3 * e + 2, right));
                    }
                }
            }
            next
        },
        |st| events.iter().any(|&e| violating(st, e)),
    );
    match found {
        None => Verdict::Holds,
        Some((path, st)) => {
            let (mut s, mut s2) = (Vec::new(), Vec::new());
            for code in path {
                let (e, side) = decode(code);
                match side {
                    Side::Both => {
                        s.push(e);
                        s2.push(e);
                    }
                    Side::Left => s.push(e),
                    Side::Right => s2.push(e),
                }
            }
            let e = *events.iter().find(|&&e| violating(&st, e)).expect("goal event");
            let mut se = s.clone();
            se.push(e);
            Verdict::Violated(
                PropertyWitness::new(kind)
                    .with("s", sigma.word(&s))
                    .with("se", sigma.word(&se))
                    .with("s_prime", sigma.word(&s2))
                    .with("e", sigma.word(&[e]))
                    .note("P(s) = P(s'), se is in the closure of K, s' is in the ambient closure and s'e is generated by the plant, but s'e is not in the closure of K"),
            )
        }
    }
}

/// Observability wrt L(G), Σo and Σc (e ranges over controllable events).
pub fn check_observability(k: &Automaton, g: &Automaton) -> Result<Verdict> {
    let k = rebase(k, g, "observability")?;
    require_included(&k, g, "observability")?;
    let events = g.alphabet().ids_where(|e| e.controllable);
    Ok(observation_verifier(&k, &k, g, &events, "observability"))
}

/// C-observability wrt L(G) and Σo (e ranges over all events).
pub fn check_relative_observability(k: &Automaton, c: &Automaton, g: &Automaton) -> Result<Verdict> {
    let k = rebase(k, g, "relative observability")?;
    let c = rebase(c, g, "relative observability")?;
    if let Some(w) = ops::inclusion_counterexample(&k, &c)? {
        return Err(Error::Precondition(format!(
            "relative observability: `{}` is in K but not in the ambient language",
            k.alphabet().word(&w)
        )));
    }
    require_included(&c, g, "relative observability")?;
    let events: Vec<EventId> = g.alphabet().ids().collect();
    Ok(observation_verifier(&k, &c, g, &events, "relative_observability"))
}

/// K̄ = P⁻¹P(K̄) ∩ L(G). Witness: `w` on the right side but outside K̄.
pub fn check_normality(k: &Automaton, g: &Automaton) -> Result<Verdict> {
    let k = rebase(k, g, "normality")?;
    require_included(&k, g, "normality")?;
    let p = ProjectionSpec::keeping(g.alphabet(), |e| e.observable);
    let kbar = ops::prefix_close(&k);
    let lifted = ops::inverse_project(&ops::project(&kbar, &p)?, &p)?;
    let right = ops::intersect(&lifted, &ops::generated(g))?;
    Ok(match ops::inclusion_counterexample(&right, &kbar)? {
        None => Verdict::Holds,
        Some(w) => Verdict::Violated(
            PropertyWitness::new("normality")
                .with("w", g.alphabet().word(&w))
                .note("w is generated by the plant and observationally equivalent to a string of the closure of K, but is not in it"),
        ),
    })
}

/// closure(L1 ∥ L2) = closure(L1) ∥ closure(L2). Witness: `w` in the right
/// side but not in the left.
pub fn check_nonconflicting(a: &Automaton, b: &Automaton) -> Result<Verdict> {
    let left = ops::prefix_close(&ops::parallel_compose(a, b)?);
    let right = ops::parallel_compose(&ops::prefix_close(a), &ops::prefix_close(b))?;
    Ok(match ops::inclusion_counterexample(&right, &left)? {
        None => Verdict::Holds,
        Some(w) => Verdict::Violated(
            PropertyWitness::new("nonconflicting")
                .with("w", right.alphabet().word(&w))
                .note("w is a prefix of both languages but not a prefix of their composition"),
        ),
    })
}

fn require_prefix_closed(a: &Automaton, what: &str) -> Result<()> {
    if ops::is_prefix_closed(a) {
        Ok(())
    } else {
        Err(Error::Precondition(format!("{what} must be prefix-closed")))
    }
}

/// Supremal normal sublanguage of prefix-closed B ⊆ M wrt M and the
/// observable events of `m`: B − P⁻¹P(M−B)Σ*.
pub fn sup_normal_closed(b: &Automaton, m: &Automaton) -> Result<Automaton> {
    let b = rebase(b, m, "sup_normal")?;
    require_prefix_closed(&b, "sup_normal: B")?;
    require_prefix_closed(m, "sup_normal: M")?;
    if let Some(w) = ops::inclusion_counterexample(&b, m)? {
        return Err(Error::Precondition(format!(
            "sup_normal: `{}` is in B but not in M",
            m.alphabet().word(&w)
        )));
    }
    let p = ProjectionSpec::keeping(m.alphabet(), |e| e.observable);
    let excess = ops::difference(m, &b)?;
    let forbidden = ops::saturate(&ops::inverse_project(&ops::project(&excess, &p)?, &p)?);
    Ok(ops::prefix_close(&ops::minimize(&ops::difference(&b, &forbidden)?)))
}

/// Outcome of the relative-observability fixpoint.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConvergenceReport {
    /// Rounds that removed at least one transition.
    pub rounds: usize,
    pub removed_transitions: usize,
    pub converged: bool,
}

/// Supremal C-observable sublanguage of prefix-closed K ⊆ C ⊆ L(G).
///
/// Each round refines the current K by the observer of the strings of C̄
/// that look alike, and deletes every e-transition whose string se has a
/// look-alike s′ ∈ C̄ with s′e ∈ L(G)∖K̄. Such an se belongs to no
/// C-observable sublanguage of the current K, so a round never removes
/// anything the supremal element contains; a round without deletions
/// therefore yields the supremal element.
pub fn sup_relobs_closed(
    k: &Automaton,
    c: &Automaton,
    g: &Automaton,
    max_iters: usize,
) -> Result<(Automaton, ConvergenceReport)> {
    let k = rebase(k, g, "sup_relobs")?;
    let c = rebase(c, g, "sup_relobs")?;
    require_prefix_closed(&k, "sup_relobs: K")?;
    require_prefix_closed(&c, "sup_relobs: C")?;
    if ops::inclusion_counterexample(&k, &c)?.is_some() {
        return Err(Error::Precondition("sup_relobs: K must be included in C".into()));
    }
    let gl = ops::generated(g);
    if ops::inclusion_counterexample(&c, &gl)?.is_some() {
        return Err(Error::Precondition(
            "sup_relobs: C must be included in the plant's generated language".into(),
        ));
    }
    let cd = closure_dfa(&c);
    let gd = closure_dfa(&gl);
    let mut current = ops::prefix_close(&ops::minimize(&k));
    let mut report = ConvergenceReport {
        rounds: 0,
        removed_transitions: 0,
        converged: false,
    };
    for _ in 0..max_iters.max(1) {
        let (next, removed) = relobs_round(&current, &cd, &gd);
        if removed == 0 {
            report.converged = true;
            return Ok((current, report));
        }
        report.rounds += 1;
        report.removed_transitions += removed;
        current = ops::prefix_close(&ops::minimize(&next));
    }
    // the budget of rounds is spent; one more scan tells whether the last
    // round happened to reach the fixpoint
    report.converged = relobs_round(&current, &cd, &gd).1 == 0;
    Ok((current, report))
}

/// One deletion round; returns the pruned refinement and the number of
/// deleted transitions.
fn relobs_round(k: &Automaton, cd: &Automaton, gd: &Automaton) -> (Automaton, usize) {
    let sigma = k.alphabet().clone();
    let kd = ops::complete(k);
    let observable: Vec<bool> = sigma.ids().map(|e| sigma.event(e).observable).collect();
    type Est = Vec<(StateId, StateId, StateId)>;
    // unobservable closure of an estimate, restricted to s′ ∈ C̄
    let uo_close = |mut set: BTreeSet<(StateId, StateId, StateId)>| -> Est {
        let mut stack: Vec<_> = set.iter().copied().collect();
        while let Some((k2, c2, g2)) = stack.pop() {
            for e in sigma.ids().filter(|&e| !observable[e]) {
                let n = (dfa_step(&kd, k2, e), dfa_step(cd, c2, e), dfa_step(gd, g2, e));
                if cd.is_marked(n.1) && set.insert(n) {
                    stack.push(n);
                }
            }
        }
        set.into_iter().collect()
    };
    let root_est = uo_close(BTreeSet::from([(dfa_init(&kd), dfa_init(cd), dfa_init(gd))]));
    let root = (dfa_init(&kd), root_est);
    let mut removed = 0usize;
    let out = explore(sigma.clone(), [root], |(q, est): &(StateId, Est)| {
        let mut edges = Vec::new();
        for e in sigma.ids() {
            let q2 = dfa_step(&kd, *q, e);
            if !kd.is_marked(q2) {
                continue;
            }
            let violates = est.iter().any(|&(k2, c2, g2)| {
                cd.is_marked(c2) && gd.is_marked(dfa_step(gd, g2, e)) && !kd.is_marked(dfa_step(&kd, k2, e))
            });
            if violates {
                removed += 1;
                continue;
            }
            let est2 = if observable[e] {
                let stepped: BTreeSet<_> = est
                    .iter()
                    .map(|&(k2, c2, g2)| (dfa_step(&kd, k2, e), dfa_step(cd, c2, e), dfa_step(gd, g2, e)))
                    .filter(|n| cd.is_marked(n.1))
                    .collect();
                uo_close(stepped)
            } else {
                est.clone()
            };
            edges.push((Label::Event(e), (q2, est2)));
        }
        Node {
            name: format!("{}/{}", kd.state_name(*q), est.len()),
            marked: kd.is_marked(*q),
            edges,
        }
    });
    (out, removed)
}
