//! Automata over tuple letters: synchronized pair composition, component
//! relabelings and the quadruple automaton used by the LOC check.
//!
//! A tuple letter is an ordinary event of the underlying [`Automaton`]; its
//! name is the rendering of the tuple (`"l:r"` for pairs, `"a:b|c:d"` for
//! quadruples, `-` standing for an empty component). All regular operations
//! therefore apply unchanged, and inclusion over tuple automata is inclusion
//! of *letter sequences*. Questions about component-wise string tuples go
//! through [`TupleAutomaton::decompose`] and [`decompose_pairs`].

use std::collections::BTreeSet;

use crate::alphabet::{Alphabet, Event, EventId, ProjectionSpec};
use crate::automaton::{explore, Automaton, Label, Node, StateId};
use crate::error::{Error, Result};
use crate::ops;
use crate::word::Word;

/// One entry per component; `None` is the empty component.
pub type Letter = Vec<Option<EventId>>;

/// A set of tuple letters over fixed component alphabets.
#[derive(Clone, Debug)]
pub struct TupleAlphabet {
    components: Vec<Alphabet>,
    alphabet: Alphabet,
    letters: Vec<Letter>,
}

impl TupleAlphabet {
    /// Builds the letter set. Letters with every component empty are
    /// dropped; duplicates are merged.
    pub fn new(components: Vec<Alphabet>, letters: impl IntoIterator<Item = Letter>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for l in letters {
            if l.len() != components.len() {
                return Err(Error::Invalid(format!(
                    "tuple letter of arity {} over {} components",
                    l.len(),
                    components.len()
                )));
            }
            for (c, x) in l.iter().enumerate() {
                if let Some(e) = x {
                    if *e >= components[c].len() {
                        return Err(Error::Invalid(format!("event id {e} outside component {c}")));
                    }
                }
            }
            if l.iter().any(Option::is_some) {
                set.insert(l);
            }
        }
        let rendered: Vec<(String, Letter)> = set.into_iter().map(|l| (render(&components, &l), l)).collect();
        let alphabet = Alphabet::new(rendered.iter().map(|(n, _)| Event::plain(n.clone())))?;
        let mut letters = vec![Vec::new(); alphabet.len()];
        for (n, l) in rendered {
            let id = alphabet.id(&n).expect("rendered letter is in the alphabet");
            letters[id] = l;
        }
        Ok(TupleAlphabet {
            components,
            alphabet,
            letters,
        })
    }

    pub fn arity(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Alphabet] {
        &self.components
    }

    /// The flat alphabet of rendered letter names.
    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn letter(&self, id: EventId) -> &Letter {
        &self.letters[id]
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn id_of(&self, letter: &Letter) -> Option<EventId> {
        self.alphabet.id(&render(&self.components, letter))
    }

    /// Builds a letter from component event names (`None` for ε).
    pub fn letter_named(&self, names: &[Option<&str>]) -> Result<Letter> {
        if names.len() != self.arity() {
            return Err(Error::Invalid("letter arity mismatch".into()));
        }
        names
            .iter()
            .enumerate()
            .map(|(c, n)| match n {
                None => Ok(None),
                Some(n) => self.components[c]
                    .id(n)
                    .map(Some)
                    .ok_or_else(|| Error::Invalid(format!("`{n}` is not in component {c}"))),
            })
            .collect()
    }

    /// Letter set containing the letters of both operands. Component
    /// alphabets must agree by name.
    pub fn union(&self, other: &TupleAlphabet) -> Result<TupleAlphabet> {
        if self.arity() != other.arity()
            || self
                .components
                .iter()
                .zip(&other.components)
                .any(|(a, b)| !a.same_names(b))
        {
            return Err(Error::AlphabetMismatch(
                "tuple automata over different component alphabets".into(),
            ));
        }
        TupleAlphabet::new(
            self.components.clone(),
            self.letters.iter().chain(&other.letters).cloned(),
        )
    }

    /// Splits a letter sequence into its component words.
    pub fn decompose(&self, seq: &[EventId]) -> Vec<Word> {
        let mut out = vec![Word::empty(); self.arity()];
        for &l in seq {
            for (c, x) in self.letters[l].iter().enumerate() {
                if let Some(e) = x {
                    out[c].push(self.components[c].name(*e));
                }
            }
        }
        out
    }
}

/// Renders a letter: components joined by `:` within a pair and pairs
/// joined by `|`.
fn render(components: &[Alphabet], letter: &Letter) -> String {
    let parts: Vec<&str> = letter
        .iter()
        .enumerate()
        .map(|(c, x)| x.map_or("-", |e| components[c].name(e)))
        .collect();
    parts.chunks(2).map(|ch| ch.join(":")).collect::<Vec<_>>().join("|")
}

/// An automaton whose events are tuple letters.
#[derive(Clone, Debug)]
pub struct TupleAutomaton {
    pub letters: TupleAlphabet,
    pub automaton: Automaton,
}

pub type PairAutomaton = TupleAutomaton;
pub type QuadAutomaton = TupleAutomaton;

impl TupleAutomaton {
    pub fn decompose(&self, seq: &[EventId]) -> Vec<Word> {
        self.letters.decompose(seq)
    }

    /// Same language over a larger letter set.
    pub fn widen(&self, to: &TupleAlphabet) -> Result<TupleAutomaton> {
        Ok(TupleAutomaton {
            letters: to.clone(),
            automaton: self.automaton.extend_alphabet(to.alphabet())?,
        })
    }

    /// The one-letter language {letter}.
    pub fn single(letters: &TupleAlphabet, letter: &Letter) -> Result<TupleAutomaton> {
        let id = letters
            .id_of(letter)
            .ok_or_else(|| Error::Invalid("letter not in the tuple alphabet".into()))?;
        let mut a = Automaton::new(letters.alphabet().clone());
        let p = a.add_state("0")?;
        let q = a.add_state("1")?;
        a.add_initial(p);
        a.set_marked(q, true);
        a.add_transition(p, Label::Event(id), q);
        Ok(TupleAutomaton {
            letters: letters.clone(),
            automaton: a,
        })
    }
}

/// Sequences over `letters` in which no letter touching only the components
/// outside `first` is immediately followed by a letter touching only
/// components in `first`.
///
/// When a tuple language is closed under swapping adjacent letters that
/// move disjoint component groups (as a product of independent runs is),
/// every tuple keeps at least one spelling inside this normal form, so the
/// restriction loses no tuples but removes most interleavings.
pub fn interleaving_normal_form(letters: &TupleAlphabet, first: &[usize]) -> Result<TupleAutomaton> {
    let side = |l: &Letter| -> (bool, bool) {
        let a = l.iter().enumerate().any(|(i, c)| c.is_some() && first.contains(&i));
        let b = l.iter().enumerate().any(|(i, c)| c.is_some() && !first.contains(&i));
        (a, b)
    };
    let mut a = Automaton::new(letters.alphabet().clone());
    let free = a.add_state("free")?;
    let second = a.add_state("second-only")?;
    a.add_initial(free);
    a.set_marked(free, true);
    a.set_marked(second, true);
    for (id, l) in letters.letters().iter().enumerate() {
        let (touches_first, touches_second) = side(l);
        let target = if touches_second && !touches_first { second } else { free };
        a.add_transition(free, Label::Event(id), target);
        if !(touches_first && !touches_second) {
            a.add_transition(second, Label::Event(id), target);
        }
    }
    Ok(TupleAutomaton {
        letters: letters.clone(),
        automaton: a,
    })
}

/// Brings two tuple automata onto a common letter set.
pub fn unify(a: &TupleAutomaton, b: &TupleAutomaton) -> Result<(TupleAutomaton, TupleAutomaton)> {
    let letters = a.letters.union(&b.letters)?;
    Ok((a.widen(&letters)?, b.widen(&letters)?))
}

/// Concatenation of the letter-sequence languages.
pub fn concatenate(a: &TupleAutomaton, b: &TupleAutomaton) -> Result<TupleAutomaton> {
    let (a, b) = unify(a, b)?;
    Ok(TupleAutomaton {
        automaton: ops::concatenate(&a.automaton, &b.automaton)?,
        letters: a.letters,
    })
}

pub fn intersect(a: &TupleAutomaton, b: &TupleAutomaton) -> Result<TupleAutomaton> {
    let (a, b) = unify(a, b)?;
    Ok(TupleAutomaton {
        automaton: ops::intersect(&a.automaton, &b.automaton)?,
        letters: a.letters,
    })
}

pub fn right_quotient(a: &TupleAutomaton, d: &TupleAutomaton) -> Result<TupleAutomaton> {
    let (a, d) = unify(a, d)?;
    Ok(TupleAutomaton {
        automaton: ops::right_quotient(&a.automaton, &d.automaton)?,
        letters: a.letters,
    })
}

/// Shortest letter sequence accepted by `a` but not by `b`, over the
/// unified letter set (returned alongside).
pub fn inclusion_counterexample(
    a: &TupleAutomaton,
    b: &TupleAutomaton,
) -> Result<(TupleAlphabet, Option<Vec<EventId>>)> {
    let (a, b) = unify(a, b)?;
    let cx = ops::inclusion_counterexample(&a.automaton, &b.automaton)?;
    Ok((a.letters, cx))
}

/// Difference of letter-sequence languages.
pub fn difference(a: &TupleAutomaton, b: &TupleAutomaton) -> Result<TupleAutomaton> {
    let (a, b) = unify(a, b)?;
    Ok(TupleAutomaton {
        automaton: ops::difference(&a.automaton, &b.automaton)?,
        letters: a.letters,
    })
}

/// L(a) ∥_S L(b) as a pair automaton: events of `sync` move both sides with
/// the letter (e,e); every other event moves one side with (e,ε) or (ε,e).
/// A state is marked when both components are.
pub fn sync_pair_compose(a: &Automaton, b: &Automaton, sync: &Alphabet) -> Result<PairAutomaton> {
    for n in sync.names() {
        if !a.alphabet().contains(n) && !b.alphabet().contains(n) {
            return Err(Error::AlphabetMismatch(format!(
                "synchronizing event `{n}` is in neither component"
            )));
        }
    }
    let a = ops::remove_silent(a);
    let b = ops::remove_silent(b);
    let (sa, sb) = (a.alphabet().clone(), b.alphabet().clone());
    let mut letters = Vec::new();
    for e in sa.ids() {
        let n = sa.name(e);
        if sync.contains(n) {
            if let Some(f) = sb.id(n) {
                letters.push(vec![Some(e), Some(f)]);
            }
        } else {
            letters.push(vec![Some(e), None]);
        }
    }
    for f in sb.ids() {
        if !sync.contains(sb.name(f)) {
            letters.push(vec![None, Some(f)]);
        }
    }
    let tuple = TupleAlphabet::new(vec![sa, sb], letters)?;
    let moves: Vec<(EventId, Letter)> = tuple
        .letters()
        .iter()
        .enumerate()
        .map(|(id, l)| (id, l.clone()))
        .collect();
    let roots: Vec<(StateId, StateId)> = a
        .initial()
        .iter()
        .flat_map(|&p| b.initial().iter().map(move |&q| (p, q)))
        .collect();
    let automaton = explore(tuple.alphabet().clone(), roots, |&(p, q)| {
        let mut edges = Vec::new();
        for (id, l) in &moves {
            let lab = Label::Event(*id);
            let ps: Vec<StateId> = match l[0] {
                Some(e) => a.targets(p, e).collect(),
                None => vec![p],
            };
            let qs: Vec<StateId> = match l[1] {
                Some(f) => b.targets(q, f).collect(),
                None => vec![q],
            };
            for &r in &ps {
                edges.extend(qs.iter().map(|&s| (lab, (r, s))));
            }
        }
        Node {
            name: format!("({},{})", a.state_name(p), b.state_name(q)),
            marked: a.is_marked(p) && b.is_marked(q),
            edges,
        }
    });
    Ok(TupleAutomaton {
        letters: tuple,
        automaton,
    })
}

/// Component-wise projection of every letter. `specs[c] = None` leaves
/// component `c` unchanged. Letters that become fully empty turn into silent
/// moves, which are eliminated.
pub fn relabel(p: &TupleAutomaton, specs: &[Option<ProjectionSpec>]) -> Result<TupleAutomaton> {
    if specs.len() != p.letters.arity() {
        return Err(Error::Invalid("relabeling arity mismatch".into()));
    }
    let maps: Vec<Option<Vec<Option<EventId>>>> = specs
        .iter()
        .enumerate()
        .map(|(c, s)| -> Result<_> {
            match s {
                None => Ok(None),
                Some(s) => {
                    p.letters.components()[c].require_same(&s.source, "relabel")?;
                    Ok(Some(s.event_map()))
                }
            }
        })
        .collect::<Result<_>>()?;
    let components: Vec<Alphabet> = specs
        .iter()
        .zip(p.letters.components())
        .map(|(s, c)| s.as_ref().map_or_else(|| c.clone(), |s| s.kept.clone()))
        .collect();
    let image = |l: &Letter| -> Letter {
        l.iter()
            .zip(&maps)
            .map(|(x, m)| match (x, m) {
                (Some(e), Some(m)) => m[*e],
                (x, None) => *x,
                (None, _) => None,
            })
            .collect()
    };
    let images: Vec<Letter> = p.letters.letters().iter().map(image).collect();
    let tuple = TupleAlphabet::new(components, images.iter().cloned())?;
    let label_of: Vec<Label> = images
        .iter()
        .map(|l| tuple.id_of(l).map_or(Label::Silent, Label::Event))
        .collect();
    let a = &p.automaton;
    let mut out = Automaton::new(tuple.alphabet().clone());
    for s in 0..a.num_states() {
        out.add_state(a.state_name(s))?;
        out.set_marked(s, a.is_marked(s));
    }
    for &s in a.initial() {
        out.add_initial(s);
    }
    for s in 0..a.num_states() {
        for &(l, t) in a.edges(s) {
            let lab = match l {
                Label::Event(e) => label_of[e],
                Label::Silent => Label::Silent,
            };
            out.add_transition(s, lab, t);
        }
    }
    Ok(TupleAutomaton {
        letters: tuple,
        automaton: ops::remove_silent(&out),
    })
}

/// Which components of a pair automaton the high-level projection rewrites.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RelabelMode {
    /// (a, b) ↦ (Q(a), Q(b)).
    BothQ,
    /// (a, b) ↦ (a, Q(b)).
    RightQ,
}

pub fn relabel_pair(p: &PairAutomaton, mode: RelabelMode) -> Result<PairAutomaton> {
    if p.letters.arity() != 2 {
        return Err(Error::Invalid("relabel_pair expects a pair automaton".into()));
    }
    let q = |c: &Alphabet| Some(ProjectionSpec::keeping(c, |e| e.highlevel));
    let comps = p.letters.components();
    let specs = match mode {
        RelabelMode::BothQ => vec![q(&comps[0]), q(&comps[1])],
        RelabelMode::RightQ => vec![None, q(&comps[1])],
    };
    relabel(p, &specs)
}

/// Letters of the four-component alphabet Σ × Σhi × Σ × Σhi.
fn quad_components(sigma: &Alphabet) -> Vec<Alphabet> {
    let hi = sigma.highlevel();
    vec![sigma.clone(), hi.clone(), sigma.clone(), hi]
}

/// The quadruple automaton H recognizing {(s, Q(s), s', Q(s')) : s, s' ∈
/// L_m(g), P(s) = P(s')}.
///
/// The second and fourth components run `g` as a recognizer of the
/// high-level image: they move with the first (third) component on
/// high-level events and may either follow or stay on low-level ones.
pub fn build_quad(g: &Automaton) -> Result<QuadAutomaton> {
    let g = ops::remove_silent(g);
    let sigma = g.alphabet().clone();
    let components = quad_components(&sigma);
    let hi = &components[1];
    let mut rules: Vec<(Letter, [bool; 4], [bool; 4])> = Vec::new();
    // (letter, which components must move, which may optionally stay)
    for e in sigma.ids() {
        let ev = sigma.event(e);
        let h = if ev.highlevel { hi.id(&ev.name) } else { None };
        match (ev.observable, ev.highlevel) {
            (true, true) => rules.push((vec![Some(e), h, Some(e), h], [true; 4], [false; 4])),
            (true, false) => rules.push((
                vec![Some(e), None, Some(e), None],
                [true, true, true, true],
                [false, true, false, true],
            )),
            (false, true) => {
                rules.push((vec![Some(e), h, None, None], [true, true, false, false], [false; 4]));
                rules.push((vec![None, None, Some(e), h], [false, false, true, true], [false; 4]));
            }
            (false, false) => {
                rules.push((
                    vec![Some(e), None, None, None],
                    [true, true, false, false],
                    [false, true, false, false],
                ));
                rules.push((
                    vec![None, None, Some(e), None],
                    [false, false, true, true],
                    [false, false, false, true],
                ));
            }
        }
    }
    let tuple = TupleAlphabet::new(components, rules.iter().map(|r| r.0.clone()))?;
    // the event of `g` driving each rule
    let rules: Vec<(EventId, EventId, [bool; 4], [bool; 4])> = rules
        .into_iter()
        .map(|(l, m, o)| {
            let e = l[0].or(l[2]).expect("every rule moves a low component");
            (tuple.id_of(&l).expect("rule letter"), e, m, o)
        })
        .collect();
    let init = g.initial().to_vec();
    let mut roots = Vec::new();
    for &p in &init {
        for &q in &init {
            for &r in &init {
                for &s in &init {
                    roots.push([p, q, r, s]);
                }
            }
        }
    }
    let automaton = explore(tuple.alphabet().clone(), roots, |st: &[StateId; 4]| {
        let mut edges = Vec::new();
        for &(id, e, moving, optional) in &rules {
            let mut choices: Vec<Vec<StateId>> = Vec::with_capacity(4);
            for c in 0..4 {
                let mut v: Vec<StateId> = if moving[c] {
                    g.targets(st[c], e).collect()
                } else {
                    vec![st[c]]
                };
                if optional[c] {
                    v.push(st[c]);
                    v.sort_unstable();
                    v.dedup();
                }
                choices.push(v);
            }
            for &p in &choices[0] {
                for &q in &choices[1] {
                    for &r in &choices[2] {
                        for &s in &choices[3] {
                            edges.push((Label::Event(id), [p, q, r, s]));
                        }
                    }
                }
            }
        }
        Node {
            name: format!(
                "({},{},{},{})",
                g.state_name(st[0]),
                g.state_name(st[1]),
                g.state_name(st[2]),
                g.state_name(st[3])
            ),
            marked: st.iter().all(|&x| g.is_marked(x)),
            edges,
        }
    });
    Ok(TupleAutomaton {
        letters: tuple,
        automaton,
    })
}

/// Letter sequences whose component `c` spells a word of `langs[c]`
/// (`None` = no constraint). Each constraining automaton must be over the
/// component alphabet.
pub fn component_acceptor(letters: &TupleAlphabet, langs: &[Option<&Automaton>]) -> Result<TupleAutomaton> {
    if langs.len() != letters.arity() {
        return Err(Error::Invalid("acceptor arity mismatch".into()));
    }
    let mut cleaned: Vec<Option<Automaton>> = Vec::new();
    for (c, l) in langs.iter().enumerate() {
        match l {
            None => cleaned.push(None),
            Some(a) => {
                a.alphabet()
                    .require_same(&letters.components()[c], "component acceptor")?;
                cleaned.push(Some(ops::remove_silent(a)));
            }
        }
    }
    let mut roots: Vec<Vec<StateId>> = vec![Vec::new()];
    for a in &cleaned {
        let init: Vec<StateId> = a.as_ref().map_or(vec![0], |a| a.initial().to_vec());
        roots = roots
            .into_iter()
            .flat_map(|r| {
                init.iter().map(move |&i| {
                    let mut r = r.clone();
                    r.push(i);
                    r
                })
            })
            .collect();
    }
    let automaton = explore(letters.alphabet().clone(), roots, |st: &Vec<StateId>| {
        let mut edges = Vec::new();
        for (id, l) in letters.letters().iter().enumerate() {
            let mut targets: Vec<Vec<StateId>> = vec![Vec::new()];
            for (c, a) in cleaned.iter().enumerate() {
                let next: Vec<StateId> = match (a, l[c]) {
                    (Some(a), Some(e)) => a.targets(st[c], e).collect(),
                    _ => vec![st[c]],
                };
                targets = targets
                    .into_iter()
                    .flat_map(|t| {
                        next.iter().map(move |&n| {
                            let mut t = t.clone();
                            t.push(n);
                            t
                        })
                    })
                    .collect();
            }
            edges.extend(targets.into_iter().map(|t| (Label::Event(id), t)));
        }
        let marked = cleaned
            .iter()
            .zip(st)
            .all(|(a, &s)| a.as_ref().is_none_or(|a| a.is_marked(s)));
        let name = st
            .iter()
            .zip(&cleaned)
            .map(|(&s, a)| a.as_ref().map_or("*", |a| a.state_name(s)))
            .collect::<Vec<_>>()
            .join(",");
        Node {
            name: format!("({name})"),
            marked,
            edges,
        }
    });
    Ok(TupleAutomaton {
        letters: letters.clone(),
        automaton,
    })
}

/// The quadruple language {(u, ε, u', ε) : u, u' ∈ (Σ∖Σhi)*, P(u) = P(u')}
/// as a one-state automaton over the components of [`build_quad`].
pub fn low_observation_matched(sigma: &Alphabet) -> Result<QuadAutomaton> {
    let components = quad_components(sigma);
    let mut letters = Vec::new();
    for e in sigma.ids_where(|ev| !ev.highlevel) {
        if sigma.event(e).observable {
            letters.push(vec![Some(e), None, Some(e), None]);
        } else {
            letters.push(vec![Some(e), None, None, None]);
            letters.push(vec![None, None, Some(e), None]);
        }
    }
    let tuple = TupleAlphabet::new(components, letters)?;
    let mut a = Automaton::new(tuple.alphabet().clone());
    let s = a.add_state("loop")?;
    a.add_initial(s);
    a.set_marked(s, true);
    for id in tuple.alphabet().ids() {
        a.add_transition(s, Label::Event(id), s);
    }
    Ok(TupleAutomaton {
        letters: tuple,
        automaton: a,
    })
}

/// Component tuples spelled by accepted letter sequences of length ≤ bound.
pub fn decompose_pairs(p: &TupleAutomaton, bound: usize) -> BTreeSet<Vec<Word>> {
    ops::enumerate_ids(&p.automaton, bound)
        .iter()
        .map(|seq| p.decompose(seq))
        .collect()
}
