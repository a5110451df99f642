//! Finite automata over an [`Alphabet`], possibly nondeterministic and
//! possibly carrying silent transitions.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::hash::Hash;

use crate::alphabet::{Alphabet, EventId};
use crate::error::{Error, Result};
use crate::word::Word;

pub type StateId = usize;

/// Transition label. `Silent` transitions never appear in files; they are
/// introduced by projection and eliminated before products.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Silent,
    Event(EventId),
}

#[derive(Clone, Debug)]
pub struct Automaton {
    pub(crate) alphabet: Alphabet,
    pub(crate) states: Vec<String>,
    pub(crate) index: HashMap<String, StateId>,
    pub(crate) initial: Vec<StateId>,
    pub(crate) marked: Vec<bool>,
    /// Outgoing edges per state, sorted by (label, target), no duplicates.
    pub(crate) edges: Vec<Vec<(Label, StateId)>>,
}

impl Automaton {
    pub fn new(alphabet: Alphabet) -> Self {
        Automaton {
            alphabet,
            states: Vec::new(),
            index: HashMap::new(),
            initial: Vec::new(),
            marked: Vec::new(),
            edges: Vec::new(),
        }
    }

    pub fn add_state(&mut self, name: impl Into<String>) -> Result<StateId> {
        let name = name.into();
        if self.index.contains_key(&name) {
            return Err(Error::Invalid(format!("duplicate state `{name}`")));
        }
        Ok(self.push_state(name))
    }

    /// Adds a state, suffixing the name if it is already taken.
    pub(crate) fn add_state_unique(&mut self, name: String) -> StateId {
        if !self.index.contains_key(&name) {
            return self.push_state(name);
        }
        let mut n = 1;
        loop {
            let candidate = format!("{name}~{n}");
            if !self.index.contains_key(&candidate) {
                return self.push_state(candidate);
            }
            n += 1;
        }
    }

    fn push_state(&mut self, name: String) -> StateId {
        let id = self.states.len();
        self.index.insert(name.clone(), id);
        self.states.push(name);
        self.marked.push(false);
        self.edges.push(Vec::new());
        id
    }

    pub fn add_initial(&mut self, state: StateId) {
        if let Err(pos) = self.initial.binary_search(&state) {
            self.initial.insert(pos, state);
        }
    }

    pub fn set_marked(&mut self, state: StateId, marked: bool) {
        self.marked[state] = marked;
    }

    pub fn add_transition(&mut self, source: StateId, label: Label, target: StateId) {
        let list = &mut self.edges[source];
        if let Err(pos) = list.binary_search(&(label, target)) {
            list.insert(pos, (label, target));
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_transitions(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }

    pub fn state_name(&self, state: StateId) -> &str {
        &self.states[state]
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.index.get(name).copied()
    }

    pub fn initial(&self) -> &[StateId] {
        &self.initial
    }

    pub fn is_marked(&self, state: StateId) -> bool {
        self.marked[state]
    }

    pub fn marked_states(&self) -> impl Iterator<Item = StateId> + '_ {
        (0..self.states.len()).filter(|&s| self.marked[s])
    }

    pub fn edges(&self, state: StateId) -> &[(Label, StateId)] {
        &self.edges[state]
    }

    /// Edges of `state` labelled with `event`.
    pub fn targets(&self, state: StateId, event: EventId) -> impl Iterator<Item = StateId> + '_ {
        let list = &self.edges[state];
        let lo = list.partition_point(|&(l, _)| l < Label::Event(event));
        list[lo..]
            .iter()
            .take_while(move |&&(l, _)| l == Label::Event(event))
            .map(|&(_, t)| t)
    }

    pub fn enables(&self, state: StateId, event: EventId) -> bool {
        self.targets(state, event).next().is_some()
    }

    pub fn has_silent(&self) -> bool {
        self.edges
            .iter()
            .any(|l| l.first().is_some_and(|&(lab, _)| lab == Label::Silent))
    }

    /// Exactly one initial state, no silent labels, at most one target per
    /// (state, event).
    pub fn is_deterministic(&self) -> bool {
        self.initial.len() == 1
            && !self.has_silent()
            && self.edges.iter().all(|l| l.windows(2).all(|w| w[0].0 != w[1].0))
    }

    /// Silent closure of a state set, sorted.
    pub fn closure(&self, set: &[StateId]) -> Vec<StateId> {
        let mut seen = vec![false; self.states.len()];
        let mut stack: Vec<StateId> = set.to_vec();
        let mut out = Vec::new();
        while let Some(s) = stack.pop() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            out.push(s);
            for &(l, t) in &self.edges[s] {
                if l != Label::Silent {
                    break;
                }
                stack.push(t);
            }
        }
        out.sort_unstable();
        out
    }

    /// Closure of the states reachable from `set` by one `event` step.
    pub fn step(&self, set: &[StateId], event: EventId) -> Vec<StateId> {
        let mut next: Vec<StateId> = set.iter().flat_map(|&s| self.targets(s, event)).collect();
        next.sort_unstable();
        next.dedup();
        self.closure(&next)
    }

    pub fn initial_closure(&self) -> Vec<StateId> {
        self.closure(&self.initial)
    }

    /// States reached by `word` from the initial states.
    pub fn reach(&self, word: &[EventId]) -> Vec<StateId> {
        word.iter().fold(self.initial_closure(), |set, &e| self.step(&set, e))
    }

    pub fn accepts_ids(&self, word: &[EventId]) -> bool {
        self.reach(word).iter().any(|&s| self.marked[s])
    }

    pub fn generates_ids(&self, word: &[EventId]) -> bool {
        !self.reach(word).is_empty()
    }

    /// Membership in the marked language. Words with foreign events are rejected.
    pub fn accepts(&self, word: &Word) -> bool {
        self.alphabet.word_ids(word).is_ok_and(|ids| self.accepts_ids(&ids))
    }

    /// Membership in the generated language.
    pub fn generates(&self, word: &Word) -> bool {
        self.alphabet.word_ids(word).is_ok_and(|ids| self.generates_ids(&ids))
    }

    /// Same automaton over a larger alphabet (no new transitions).
    pub fn extend_alphabet(&self, alphabet: &Alphabet) -> Result<Automaton> {
        let map = self.alphabet.embedding(alphabet)?;
        let mut out = self.clone();
        out.alphabet = alphabet.clone();
        for list in &mut out.edges {
            for (l, _) in list.iter_mut() {
                if let Label::Event(e) = l {
                    *e = map[*e];
                }
            }
            list.sort_unstable();
        }
        Ok(out)
    }

    /// Keeps the states selected by `keep`, renumbered in order.
    pub(crate) fn restrict(&self, keep: &[bool]) -> Automaton {
        let mut out = Automaton::new(self.alphabet.clone());
        let mut map = vec![usize::MAX; self.states.len()];
        for s in 0..self.states.len() {
            if keep[s] {
                map[s] = out.push_state(self.states[s].clone());
                out.marked[map[s]] = self.marked[s];
            }
        }
        for s in 0..self.states.len() {
            if !keep[s] {
                continue;
            }
            out.edges[map[s]] = self.edges[s]
                .iter()
                .filter(|&&(_, t)| keep[t])
                .map(|&(l, t)| (l, map[t]))
                .collect();
        }
        out.initial = self.initial.iter().filter(|&&s| keep[s]).map(|&s| map[s]).collect();
        out
    }

    /// Finite language automaton (a trie); with `prefix_closed` every node is marked.
    pub fn from_words(alphabet: &Alphabet, words: &[Word], prefix_closed: bool) -> Result<Automaton> {
        let mut out = Automaton::new(alphabet.clone());
        let root = out.push_state("ε".to_string());
        out.add_initial(root);
        out.marked[root] = prefix_closed;
        let mut children: HashMap<(StateId, EventId), StateId> = HashMap::new();
        for w in words {
            let ids = alphabet.word_ids(w)?;
            let mut cur = root;
            for (i, &e) in ids.iter().enumerate() {
                cur = match children.get(&(cur, e)) {
                    Some(&n) => n,
                    None => {
                        let name = ids[..=i]
                            .iter()
                            .map(|&x| alphabet.name(x))
                            .collect::<Vec<_>>()
                            .join(".");
                        let n = out.add_state_unique(name);
                        out.marked[n] = prefix_closed;
                        out.add_transition(cur, Label::Event(e), n);
                        children.insert((cur, e), n);
                        n
                    }
                };
            }
            out.marked[cur] = true;
        }
        Ok(out)
    }

    /// Σ*: one marked state with a self-loop on every event.
    pub fn universal(alphabet: &Alphabet) -> Automaton {
        let mut out = Automaton::new(alphabet.clone());
        let s = out.push_state("all".to_string());
        out.add_initial(s);
        out.marked[s] = true;
        for e in alphabet.ids() {
            out.add_transition(s, Label::Event(e), s);
        }
        out
    }

    /// The empty language.
    pub fn empty(alphabet: &Alphabet) -> Automaton {
        Automaton::new(alphabet.clone())
    }
}

/// A node produced by an exploration callback.
pub(crate) struct Node<K> {
    pub name: String,
    pub marked: bool,
    pub edges: Vec<(Label, K)>,
}

/// Breadth-first construction of the part reachable from `roots`. State ids
/// follow discovery order, so results are reproducible.
pub(crate) fn explore<K, F>(alphabet: Alphabet, roots: impl IntoIterator<Item = K>, mut expand: F) -> Automaton
where
    K: Clone + Eq + Hash,
    F: FnMut(&K) -> Node<K>,
{
    let mut out = Automaton::new(alphabet);
    let mut ids: HashMap<K, StateId> = HashMap::new();
    let mut keys: Vec<K> = Vec::new();
    let mut initial = Vec::new();
    for r in roots {
        let id = *ids.entry(r.clone()).or_insert_with(|| {
            keys.push(r);
            keys.len() - 1
        });
        initial.push(id);
    }
    let mut pending_edges: Vec<Vec<(Label, StateId)>> = Vec::new();
    let mut i = 0;
    while i < keys.len() {
        let key = keys[i].clone();
        let node = expand(&key);
        let id = out.add_state_unique(node.name);
        debug_assert_eq!(id, i);
        out.marked[id] = node.marked;
        let mut list = Vec::with_capacity(node.edges.len());
        for (l, k) in node.edges {
            let t = *ids.entry(k.clone()).or_insert_with(|| {
                keys.push(k);
                keys.len() - 1
            });
            list.push((l, t));
        }
        pending_edges.push(list);
        i += 1;
    }
    for (s, mut list) in pending_edges.into_iter().enumerate() {
        list.sort_unstable();
        list.dedup();
        out.edges[s] = list;
    }
    initial.sort_unstable();
    initial.dedup();
    out.initial = initial;
    out
}

/// Breadth-first search over an implicit graph; returns the label path to
/// the first discovered goal. Roots are checked in order, successors are
/// visited in the order `expand` yields them.
pub(crate) fn shortest_path<K, F, G>(
    roots: impl IntoIterator<Item = K>,
    mut expand: F,
    mut goal: G,
) -> Option<(Vec<EventId>, K)>
where
    K: Clone + Eq + Hash,
    F: FnMut(&K) -> Vec<(EventId, K)>,
    G: FnMut(&K) -> bool,
{
    let mut parent: HashMap<K, Option<(K, EventId)>> = HashMap::new();
    let mut queue = VecDeque::new();
    let rebuild = |parent: &HashMap<K, Option<(K, EventId)>>, mut k: K| {
        let end = k.clone();
        let mut word = Vec::new();
        while let Some(Some((p, e))) = parent.get(&k) {
            word.push(*e);
            k = p.clone();
        }
        word.reverse();
        (word, end)
    };
    for r in roots {
        if parent.contains_key(&r) {
            continue;
        }
        parent.insert(r.clone(), None);
        if goal(&r) {
            return Some(rebuild(&parent, r));
        }
        queue.push_back(r);
    }
    while let Some(k) = queue.pop_front() {
        for (e, n) in expand(&k) {
            if parent.contains_key(&n) {
                continue;
            }
            parent.insert(n.clone(), Some((k.clone(), e)));
            if goal(&n) {
                return Some(rebuild(&parent, n));
            }
            queue.push_back(n);
        }
    }
    None
}

impl fmt::Display for Automaton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::saut::serialize_automaton(self))
    }
}
