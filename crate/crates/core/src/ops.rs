//! Regular-language operations on [`Automaton`]s.
//!
//! Unless stated otherwise an operation is about the *marked* language.
//! Products eliminate silent transitions first.

use std::collections::{BTreeSet, HashMap};

use crate::alphabet::{Alphabet, EventId, ProjectionSpec};
use crate::automaton::{explore, shortest_path, Automaton, Label, Node, StateId};
use crate::error::{Error, Result};
use crate::verdict::{PropertyWitness, Verdict};
use crate::word::Word;

fn set_name(a: &Automaton, set: &[StateId]) -> String {
    let names: Vec<&str> = set.iter().map(|&s| a.state_name(s)).collect();
    format!("{{{}}}", names.join(","))
}

/// Equivalent automaton without silent transitions, restricted to its
/// accessible part.
pub fn remove_silent(a: &Automaton) -> Automaton {
    if !a.has_silent() {
        return a.clone();
    }
    let closures: Vec<Vec<StateId>> = (0..a.num_states()).map(|s| a.closure(&[s])).collect();
    let mut out = Automaton::new(a.alphabet.clone());
    out.states = a.states.clone();
    out.index = a.index.clone();
    out.marked = closures.iter().map(|c| c.iter().any(|&s| a.marked[s])).collect();
    out.edges = vec![Vec::new(); a.num_states()];
    for q in 0..a.num_states() {
        let mut list = Vec::new();
        for &p in &closures[q] {
            for &(l, r) in a.edges(p) {
                if l != Label::Silent {
                    list.extend(closures[r].iter().map(|&t| (l, t)));
                }
            }
        }
        list.sort_unstable();
        list.dedup();
        out.edges[q] = list;
    }
    out.initial = a.initial_closure();
    accessible(&out)
}

pub fn accessible_mask(a: &Automaton) -> Vec<bool> {
    let mut seen = vec![false; a.num_states()];
    let mut stack: Vec<StateId> = a.initial.clone();
    while let Some(s) = stack.pop() {
        if std::mem::replace(&mut seen[s], true) {
            continue;
        }
        stack.extend(a.edges(s).iter().map(|&(_, t)| t));
    }
    seen
}

pub fn coaccessible_mask(a: &Automaton) -> Vec<bool> {
    let mut rev: Vec<Vec<StateId>> = vec![Vec::new(); a.num_states()];
    for s in 0..a.num_states() {
        for &(_, t) in a.edges(s) {
            rev[t].push(s);
        }
    }
    let mut seen = vec![false; a.num_states()];
    let mut stack: Vec<StateId> = a.marked_states().collect();
    while let Some(s) = stack.pop() {
        if std::mem::replace(&mut seen[s], true) {
            continue;
        }
        stack.extend(rev[s].iter().copied());
    }
    seen
}

pub fn accessible(a: &Automaton) -> Automaton {
    let mask = accessible_mask(a);
    if mask.iter().all(|&b| b) {
        return a.clone();
    }
    a.restrict(&mask)
}

/// Removes unreachable and non-co-reachable states.
pub fn trim(a: &Automaton) -> Automaton {
    let acc = accessible_mask(a);
    let co = coaccessible_mask(a);
    let keep: Vec<bool> = acc.iter().zip(&co).map(|(x, y)| *x && *y).collect();
    a.restrict(&keep)
}

/// Automaton whose marked language is the generated language L(a).
pub fn generated(a: &Automaton) -> Automaton {
    let mut out = accessible(a);
    out.marked.iter_mut().for_each(|m| *m = true);
    out
}

/// Marks every state on an accepting path: the marked language becomes the
/// prefix closure of L_m(a).
pub fn prefix_close(a: &Automaton) -> Automaton {
    let mut out = trim(a);
    out.marked.iter_mut().for_each(|m| *m = true);
    out
}

/// Every reachable state can reach a marked state.
pub fn is_nonblocking(a: &Automaton) -> bool {
    let acc = accessible_mask(a);
    let co = coaccessible_mask(a);
    acc.iter().zip(&co).all(|(x, y)| !*x || *y)
}

/// Whether the marked language equals its prefix closure.
pub fn is_prefix_closed(a: &Automaton) -> bool {
    inclusion_counterexample(&prefix_close(a), a)
        .expect("same alphabet")
        .is_none()
}

pub fn is_empty(a: &Automaton) -> bool {
    let acc = accessible_mask(a);
    a.marked_states().all(|s| !acc[s])
}

/// Subset construction; a subset is marked iff it contains a marked state.
/// Only non-empty reachable subsets are built (the result may be partial).
pub fn determinize(a: &Automaton) -> Automaton {
    if a.is_deterministic() {
        return accessible(a);
    }
    let events: Vec<EventId> = a.alphabet.ids().collect();
    explore(a.alphabet.clone(), [a.initial_closure()], |set: &Vec<StateId>| Node {
        name: set_name(a, set),
        marked: set.iter().any(|&s| a.marked[s]),
        edges: events
            .iter()
            .filter_map(|&e| {
                let next = a.step(set, e);
                (!next.is_empty()).then_some((Label::Event(e), next))
            })
            .collect(),
    })
}

/// Deterministic and complete: a dead state absorbs missing transitions.
pub fn complete(a: &Automaton) -> Automaton {
    let mut out = determinize(a);
    let missing = (0..out.num_states()).any(|s| out.alphabet.ids().any(|e| !out.enables(s, e)));
    if !missing && out.num_states() > 0 {
        return out;
    }
    let dead = out.add_state_unique("dead".to_string());
    if out.initial.is_empty() {
        out.add_initial(dead);
    }
    for s in 0..out.num_states() {
        for e in out.alphabet.ids() {
            if !out.enables(s, e) {
                out.add_transition(s, Label::Event(e), dead);
            }
        }
    }
    out
}

/// Complement with respect to Σ*.
pub fn complement(a: &Automaton) -> Automaton {
    let mut out = complete(a);
    out.marked.iter_mut().for_each(|m| *m = !*m);
    out
}

fn pair_name(a: &Automaton, p: StateId, b: &Automaton, q: StateId) -> String {
    format!("({},{})", a.state_name(p), b.state_name(q))
}

pub fn intersect(a: &Automaton, b: &Automaton) -> Result<Automaton> {
    a.alphabet.require_same(&b.alphabet, "intersect")?;
    let a = remove_silent(a);
    let b = remove_silent(b);
    let roots: Vec<(StateId, StateId)> = a
        .initial
        .iter()
        .flat_map(|&p| b.initial.iter().map(move |&q| (p, q)))
        .collect();
    Ok(explore(a.alphabet.clone(), roots, |&(p, q)| {
        let mut edges = Vec::new();
        for e in a.alphabet.ids() {
            for r in a.targets(p, e) {
                for s in b.targets(q, e) {
                    edges.push((Label::Event(e), (r, s)));
                }
            }
        }
        Node {
            name: pair_name(&a, p, &b, q),
            marked: a.marked[p] && b.marked[q],
            edges,
        }
    }))
}

/// Disjoint union; states are renamed `1.x` and `2.y`.
pub fn union(a: &Automaton, b: &Automaton) -> Result<Automaton> {
    a.alphabet.require_same(&b.alphabet, "union")?;
    let mut out = Automaton::new(a.alphabet.clone());
    for (tag, src) in [("1", a), ("2", b)] {
        let base = out.num_states();
        for s in 0..src.num_states() {
            let id = out.add_state_unique(format!("{tag}.{}", src.state_name(s)));
            out.marked[id] = src.marked[s];
        }
        for s in 0..src.num_states() {
            for &(l, t) in src.edges(s) {
                out.add_transition(base + s, l, base + t);
            }
        }
        for &i in &src.initial {
            out.add_initial(base + i);
        }
    }
    Ok(out)
}

pub fn difference(a: &Automaton, b: &Automaton) -> Result<Automaton> {
    a.alphabet.require_same(&b.alphabet, "difference")?;
    intersect(a, &complement(b))
}

/// L_m(a)·L_m(b).
pub fn concatenate(a: &Automaton, b: &Automaton) -> Result<Automaton> {
    a.alphabet.require_same(&b.alphabet, "concatenate")?;
    let mut out = Automaton::new(a.alphabet.clone());
    for s in 0..a.num_states() {
        out.add_state_unique(format!("1.{}", a.state_name(s)));
    }
    let base = a.num_states();
    for s in 0..b.num_states() {
        let id = out.add_state_unique(format!("2.{}", b.state_name(s)));
        out.marked[id] = b.marked[s];
    }
    for s in 0..a.num_states() {
        for &(l, t) in a.edges(s) {
            out.add_transition(s, l, t);
        }
        if a.marked[s] {
            for &i in &b.initial {
                out.add_transition(s, Label::Silent, base + i);
            }
        }
    }
    for s in 0..b.num_states() {
        for &(l, t) in b.edges(s) {
            out.add_transition(base + s, l, base + t);
        }
    }
    out.initial = a.initial.clone();
    Ok(remove_silent(&out))
}

/// L_m(a)·Σ*: marked states absorb every continuation.
pub fn saturate(a: &Automaton) -> Automaton {
    let mut out = a.clone();
    let marked: Vec<StateId> = out.marked_states().collect();
    for s in marked {
        for e in out.alphabet.ids() {
            out.add_transition(s, Label::Event(e), s);
        }
    }
    out
}

/// Synchronous product over the union alphabet: shared events move both
/// components, private events move one. Shared events must carry identical
/// flags on both sides.
pub fn parallel_compose(a: &Automaton, b: &Automaton) -> Result<Automaton> {
    let alphabet = a.alphabet.union(&b.alphabet)?;
    let a = remove_silent(a);
    let b = remove_silent(b);
    let roles: Vec<(Option<EventId>, Option<EventId>)> =
        alphabet.names().map(|n| (a.alphabet.id(n), b.alphabet.id(n))).collect();
    let roots: Vec<(StateId, StateId)> = a
        .initial
        .iter()
        .flat_map(|&p| b.initial.iter().map(move |&q| (p, q)))
        .collect();
    Ok(explore(alphabet.clone(), roots, |&(p, q)| {
        let mut edges = Vec::new();
        for (e, role) in roles.iter().enumerate() {
            let l = Label::Event(e);
            match *role {
                (Some(ea), Some(eb)) => {
                    for r in a.targets(p, ea) {
                        edges.extend(b.targets(q, eb).map(|s| (l, (r, s))));
                    }
                }
                (Some(ea), None) => edges.extend(a.targets(p, ea).map(|r| (l, (r, q)))),
                (None, Some(eb)) => edges.extend(b.targets(q, eb).map(|s| (l, (p, s)))),
                (None, None) => unreachable!("event of the union alphabet"),
            }
        }
        Node {
            name: pair_name(&a, p, &b, q),
            marked: a.marked[p] && b.marked[q],
            edges,
        }
    }))
}

/// Natural projection of both the generated and the marked language onto
/// `spec.kept`.
pub fn project(a: &Automaton, spec: &ProjectionSpec) -> Result<Automaton> {
    a.alphabet.require_same(&spec.source, "project")?;
    let map = spec.event_map();
    let mut out = Automaton::new(spec.kept.clone());
    out.states = a.states.clone();
    out.index = a.index.clone();
    out.marked = a.marked.clone();
    out.initial = a.initial.clone();
    out.edges = a
        .edges
        .iter()
        .map(|list| {
            let mut l: Vec<(Label, StateId)> = list
                .iter()
                .map(|&(l, t)| match l {
                    Label::Event(e) => (map[e].map_or(Label::Silent, Label::Event), t),
                    Label::Silent => (Label::Silent, t),
                })
                .collect();
            l.sort_unstable();
            l.dedup();
            l
        })
        .collect();
    Ok(remove_silent(&out))
}

/// Projection onto a sub-alphabet given directly.
pub fn project_onto(a: &Automaton, kept: &Alphabet) -> Result<Automaton> {
    let spec = ProjectionSpec::new(a.alphabet.clone(), kept.clone())?;
    project(a, &spec)
}

/// Inverse projection: self-loops on every erased event at every state.
pub fn inverse_project(a: &Automaton, spec: &ProjectionSpec) -> Result<Automaton> {
    a.alphabet.require_same(&spec.kept, "inverse_project")?;
    let mut out = a.extend_alphabet(&spec.source)?;
    let erased: Vec<EventId> = spec
        .event_map()
        .iter()
        .enumerate()
        .filter(|(_, m)| m.is_none())
        .map(|(e, _)| e)
        .collect();
    for s in 0..out.num_states() {
        for &e in &erased {
            out.add_transition(s, Label::Event(e), s);
        }
    }
    Ok(out)
}

/// Inverse projection from a sub-alphabet onto `source`.
pub fn inverse_project_onto(a: &Automaton, source: &Alphabet) -> Result<Automaton> {
    let kept = source.filter(|e| a.alphabet.contains(&e.name));
    if kept.len() != a.alphabet.len() {
        return Err(Error::AlphabetMismatch(
            "inverse projection target must contain the automaton's events".into(),
        ));
    }
    let spec = ProjectionSpec::new(source.clone(), kept)?;
    let a = a.extend_alphabet(&spec.kept)?;
    inverse_project(&a, &spec)
}

/// Right quotient {w : ∃v ∈ L_m(d), wv ∈ L_m(a)}: the states of `a` are
/// re-marked when some word of L_m(d) leads from them to a marked state.
pub fn right_quotient(a: &Automaton, d: &Automaton) -> Result<Automaton> {
    a.alphabet.require_same(&d.alphabet, "right_quotient")?;
    let a = remove_silent(a);
    let d = remove_silent(d);
    let mut rev_a: Vec<Vec<(EventId, StateId)>> = vec![Vec::new(); a.num_states()];
    for s in 0..a.num_states() {
        for &(l, t) in a.edges(s) {
            if let Label::Event(e) = l {
                rev_a[t].push((e, s));
            }
        }
    }
    let mut rev_d: Vec<HashMap<EventId, Vec<StateId>>> = vec![HashMap::new(); d.num_states()];
    for s in 0..d.num_states() {
        for &(l, t) in d.edges(s) {
            if let Label::Event(e) = l {
                rev_d[t].entry(e).or_default().push(s);
            }
        }
    }
    let nd = d.num_states();
    let mut co = vec![false; a.num_states() * nd];
    let mut stack = Vec::new();
    for p in a.marked_states() {
        for q in d.marked_states() {
            co[p * nd + q] = true;
            stack.push((p, q));
        }
    }
    while let Some((p, q)) = stack.pop() {
        for &(e, pp) in &rev_a[p] {
            if let Some(preds) = rev_d[q].get(&e) {
                for &qq in preds {
                    if !co[pp * nd + qq] {
                        co[pp * nd + qq] = true;
                        stack.push((pp, qq));
                    }
                }
            }
        }
    }
    let mut out = a.clone();
    for p in 0..a.num_states() {
        out.marked[p] = d.initial.iter().any(|&q| co[p * nd + q]);
    }
    Ok(out)
}

/// Shortest (then lexicographically least) word of L_m(a) ∖ L_m(b), if any.
pub fn inclusion_counterexample(a: &Automaton, b: &Automaton) -> Result<Option<Vec<EventId>>> {
    a.alphabet.require_same(&b.alphabet, "includes")?;
    let a = remove_silent(a);
    let b = remove_silent(b);
    let b_init = b.initial_closure();
    let roots: Vec<(StateId, Vec<StateId>)> = a.initial.iter().map(|&q| (q, b_init.clone())).collect();
    let found = shortest_path(
        roots,
        |(q, set)| {
            let mut next = Vec::new();
            for e in a.alphabet.ids() {
                let mut targets = a.targets(*q, e).peekable();
                if targets.peek().is_none() {
                    continue;
                }
                let bset = b.step(set, e);
                next.extend(targets.map(|r| (e, (r, bset.clone()))));
            }
            next
        },
        |(q, set)| a.marked[*q] && !set.iter().any(|&s| b.marked[s]),
    );
    Ok(found.map(|(w, _)| w))
}

/// L_m(a) ⊆ L_m(b), with a shortest counterexample `w` when violated.
pub fn includes(a: &Automaton, b: &Automaton) -> Result<Verdict> {
    Ok(match inclusion_counterexample(a, b)? {
        None => Verdict::Holds,
        Some(w) => Verdict::Violated(
            PropertyWitness::new("inclusion")
                .with("w", a.alphabet.word(&w))
                .note("w is marked by the left automaton but not by the right one"),
        ),
    })
}

pub fn equivalent(a: &Automaton, b: &Automaton) -> Result<bool> {
    Ok(inclusion_counterexample(a, b)?.is_none() && inclusion_counterexample(b, a)?.is_none())
}

/// L_m(a) ∩ Σ^{≤bound} as event-id words in length-lexicographic order.
pub fn enumerate_ids(a: &Automaton, bound: usize) -> Vec<Vec<EventId>> {
    let d = determinize(a);
    let mut out = Vec::new();
    let mut level: Vec<(Vec<EventId>, StateId)> = d.initial.iter().map(|&q| (Vec::new(), q)).collect();
    for len in 0..=bound {
        for (w, q) in &level {
            if d.marked[*q] {
                out.push(w.clone());
            }
        }
        if len == bound {
            break;
        }
        let mut next = Vec::new();
        for (w, q) in &level {
            for &(l, t) in d.edges(*q) {
                if let Label::Event(e) = l {
                    let mut w2 = w.clone();
                    w2.push(e);
                    next.push((w2, t));
                }
            }
        }
        level = next;
    }
    out
}

/// L_m(a) ∩ Σ^{≤bound} in length-lexicographic order.
pub fn enumerate_bounded(a: &Automaton, bound: usize) -> Vec<Word> {
    enumerate_ids(a, bound).iter().map(|w| a.alphabet.word(w)).collect()
}

/// L(a) ∩ Σ^{≤bound}.
pub fn enumerate_generated(a: &Automaton, bound: usize) -> Vec<Word> {
    enumerate_bounded(&generated(a), bound)
}

/// Bounded marked language as a set, for comparisons in tests and reports.
pub fn bounded_set(a: &Automaton, bound: usize) -> BTreeSet<Word> {
    enumerate_bounded(a, bound).into_iter().collect()
}

/// Whether the trimmed marked language is finite.
pub fn is_finite(a: &Automaton) -> bool {
    let t = trim(&remove_silent(a));
    // a cycle among trim states means infinitely many marked words
    let n = t.num_states();
    let mut color = vec![0u8; n];
    fn dfs(t: &Automaton, s: StateId, color: &mut [u8]) -> bool {
        color[s] = 1;
        for &(_, r) in t.edges(s) {
            if color[r] == 1 || (color[r] == 0 && !dfs(t, r, color)) {
                return false;
            }
        }
        color[s] = 2;
        true
    }
    (0..n).all(|s| color[s] != 0 || dfs(&t, s, &mut color))
}

/// Words of L_m(a) in length-lexicographic order, produced lazily. The
/// stream is unbounded when the language is infinite.
pub struct LengthLex {
    dfa: Automaton,
    level: Vec<(Vec<EventId>, StateId)>,
    pos: usize,
}

impl Iterator for LengthLex {
    type Item = Vec<EventId>;

    fn next(&mut self) -> Option<Vec<EventId>> {
        loop {
            while self.pos < self.level.len() {
                let (w, q) = &self.level[self.pos];
                self.pos += 1;
                if self.dfa.marked[*q] {
                    return Some(w.clone());
                }
            }
            if self.level.is_empty() {
                return None;
            }
            let mut next = Vec::new();
            for (w, q) in &self.level {
                for &(l, t) in self.dfa.edges(*q) {
                    if let Label::Event(e) = l {
                        let mut w2 = w.clone();
                        w2.push(e);
                        next.push((w2, t));
                    }
                }
            }
            self.level = next;
            self.pos = 0;
        }
    }
}

pub fn length_lex(a: &Automaton) -> LengthLex {
    let dfa = trim(&determinize(a));
    let level = dfa.initial.iter().map(|&q| (Vec::new(), q)).collect();
    LengthLex { dfa, level, pos: 0 }
}

/// Minimal trim DFA of the marked language (partition refinement). State
/// names are those of the class representatives.
pub fn minimize(a: &Automaton) -> Automaton {
    let d = complete(a);
    let n = d.num_states();
    let events: Vec<EventId> = d.alphabet.ids().collect();
    let succ: Vec<Vec<StateId>> = (0..n)
        .map(|s| {
            events
                .iter()
                .map(|&e| d.targets(s, e).next().expect("complete automaton"))
                .collect()
        })
        .collect();
    let mut class: Vec<usize> = d.marked.iter().map(|&m| m as usize).collect();
    loop {
        let mut sigs: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
        let next: Vec<usize> = (0..n)
            .map(|s| {
                let sig = (class[s], succ[s].iter().map(|&t| class[t]).collect());
                let k = sigs.len();
                *sigs.entry(sig).or_insert(k)
            })
            .collect();
        let stable = sigs.len() == class.iter().collect::<BTreeSet<_>>().len();
        class = next;
        if stable {
            break;
        }
    }
    let classes = class.iter().max().map_or(0, |m| m + 1);
    let mut rep = vec![usize::MAX; classes];
    for s in 0..n {
        if rep[class[s]] == usize::MAX {
            rep[class[s]] = s;
        }
    }
    let mut out = Automaton::new(d.alphabet.clone());
    for &r in &rep {
        let id = out.add_state_unique(d.state_name(r).to_string());
        out.marked[id] = d.marked[r];
    }
    for (c, &r) in rep.iter().enumerate() {
        for (i, &e) in events.iter().enumerate() {
            out.add_transition(c, Label::Event(e), class[succ[r][i]]);
        }
    }
    for &i in &d.initial {
        out.add_initial(class[i]);
    }
    trim(&out)
}
