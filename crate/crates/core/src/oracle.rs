//! Bounded reference evaluation of every property definition.
//!
//! The universally quantified strings range over all strings of length at
//! most ℓ; existential inner quantifiers (the s′ of MOC, the u, u′ of LOC,
//! the completion of the observer property, ...) are decided without a
//! bound by regular operations on quotients and projections. A reported
//! violation is therefore genuine, while "no violation up to ℓ" never
//! claims the property itself.
//!
//! The evaluation deliberately follows the definitions string by string
//! and shares no construction with the checkers in [`crate::sct`] and
//! [`crate::hierarchy`] beyond the basic regular operations.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::alphabet::{Alphabet, EventId, ProjectionSpec};
use crate::automaton::{Automaton, Label, StateId};
use crate::error::{Error, Result};
use crate::ops;
use crate::verdict::PropertyWitness;
use crate::word::Word;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OracleProperty {
    Controllability,
    Observability,
    Normality,
    Relobs,
    Oc,
    Loc,
    Moc,
    Observer,
    Lcc,
    Nonconflicting,
}

impl fmt::Display for OracleProperty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("unit variant");
        f.write_str(s.as_str().expect("string tag"))
    }
}

/// Automata a property refers to. `spec` is K (or L1 for
/// nonconflictingness), `ambient` is C.
#[derive(Clone, Copy, Debug)]
pub struct OracleInputs<'a> {
    pub plant: &'a Automaton,
    pub spec: Option<&'a Automaton>,
    pub ambient: Option<&'a Automaton>,
}

impl<'a> OracleInputs<'a> {
    pub fn plant(plant: &'a Automaton) -> Self {
        OracleInputs {
            plant,
            spec: None,
            ambient: None,
        }
    }

    pub fn with_spec(plant: &'a Automaton, spec: &'a Automaton) -> Self {
        OracleInputs {
            plant,
            spec: Some(spec),
            ambient: None,
        }
    }

    fn spec(&self, p: OracleProperty) -> Result<Automaton> {
        let k = self
            .spec
            .ok_or_else(|| Error::Invalid(format!("oracle {p}: a specification is required")))?;
        k.alphabet().require_same(self.plant.alphabet(), "oracle")?;
        k.extend_alphabet(self.plant.alphabet())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum OracleOutcome {
    NoViolation,
    Violation { witness: PropertyWitness },
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleReport {
    pub property: OracleProperty,
    pub bound: usize,
    #[serde(flatten)]
    pub outcome: OracleOutcome,
    /// Universally quantified strings (or string tuples) examined.
    pub examined: usize,
}

impl OracleReport {
    pub fn is_violation(&self) -> bool {
        matches!(self.outcome, OracleOutcome::Violation { .. })
    }

    pub fn witness(&self) -> Option<&PropertyWitness> {
        match &self.outcome {
            OracleOutcome::Violation { witness } => Some(witness),
            OracleOutcome::NoViolation => None,
        }
    }
}

/// Evaluates the definition of `property` on all strings up to `bound`.
pub fn oracle_check(property: OracleProperty, inputs: OracleInputs<'_>, bound: usize) -> Result<OracleReport> {
    use OracleProperty::*;
    let (found, examined) = match property {
        Controllability => controllability(&inputs.spec(property)?, inputs.plant, bound),
        Observability => {
            let k = inputs.spec(property)?;
            let events = inputs.plant.alphabet().ids_where(|e| e.controllable);
            observation_family(&k, &k, inputs.plant, &events, bound, "observability")
        }
        Relobs => {
            let k = inputs.spec(property)?;
            let c = inputs
                .ambient
                .ok_or_else(|| Error::Invalid("oracle relobs: an ambient language is required".into()))?
                .extend_alphabet(inputs.plant.alphabet())?;
            let events: Vec<EventId> = inputs.plant.alphabet().ids().collect();
            observation_family(&k, &c, inputs.plant, &events, bound, "relative_observability")
        }
        Normality => normality(&inputs.spec(property)?, inputs.plant, bound)?,
        Nonconflicting => {
            let l1 = inputs
                .spec
                .ok_or_else(|| Error::Invalid("oracle nonconflicting: two languages are required".into()))?;
            nonconflicting(l1, inputs.plant, bound)?
        }
        Oc => oc(&Plant::new(inputs.plant)?, bound)?,
        Moc => moc(&Plant::new(inputs.plant)?, bound)?,
        Loc => loc(&Plant::new(inputs.plant)?, bound)?,
        Observer => observer(inputs.plant, bound)?,
        Lcc => lcc(&Plant::new(inputs.plant)?, bound)?,
    };
    Ok(OracleReport {
        property,
        bound,
        outcome: match found {
            Some(witness) => OracleOutcome::Violation { witness },
            None => OracleOutcome::NoViolation,
        },
        examined,
    })
}

// ---------------------------------------------------------------------------
// helpers

type Ids = Vec<EventId>;

fn image(map: &[Option<EventId>], w: &[EventId]) -> Ids {
    w.iter().filter_map(|&e| map[e]).collect()
}

/// All strings of L(a) up to the bound (a is read as its generated language).
fn generated_strings(a: &Automaton, bound: usize) -> Vec<Ids> {
    ops::enumerate_ids(&ops::generated(a), bound)
}

/// The automaton of the left quotient s⁻¹L: `a` restarted from the states
/// reached by `s`.
fn after(a: &Automaton, s: &[EventId]) -> Automaton {
    let mut out = a.clone();
    out.initial = a.reach(s);
    out
}

/// Canonical text of the minimal DFA of L_m(a): equal iff the languages are.
fn canonical_key(a: &Automaton) -> String {
    let m = ops::minimize(a);
    if m.initial().is_empty() {
        return "∅".into();
    }
    let mut number: HashMap<StateId, usize> = HashMap::new();
    let mut queue = VecDeque::from([m.initial()[0]]);
    number.insert(m.initial()[0], 0);
    let mut out = String::new();
    while let Some(s) = queue.pop_front() {
        out.push_str(if m.is_marked(s) { "+" } else { "-" });
        for &(l, t) in m.edges(s) {
            let next = number.len();
            let id = *number.entry(t).or_insert_with(|| {
                queue.push_back(t);
                next
            });
            if let Label::Event(e) = l {
                out.push_str(&format!("{e}>{id},"));
            }
        }
        out.push(';');
    }
    out
}

/// Plant data shared by the consistency properties.
struct Plant {
    l: Automaton,
    sigma: Alphabet,
    p: ProjectionSpec,
    q: ProjectionSpec,
    pmap: Vec<Option<EventId>>,
    qmap: Vec<Option<EventId>>,
    phimap: Vec<Option<EventId>>,
}

impl Plant {
    fn new(g: &Automaton) -> Result<Plant> {
        let sigma = g.alphabet().clone();
        let p = ProjectionSpec::keeping(&sigma, |e| e.observable);
        let q = ProjectionSpec::keeping(&sigma, |e| e.highlevel);
        let p_hi = ProjectionSpec::keeping(&q.kept, |e| e.observable);
        Ok(Plant {
            l: ops::generated(g),
            pmap: p.event_map(),
            qmap: q.event_map(),
            phimap: p_hi.event_map(),
            sigma,
            p,
            q,
        })
    }

    /// P(Q⁻¹(t) ∩ L) over Σo.
    fn observed_preimages(&self, t: &[EventId]) -> Result<Automaton> {
        let word = Automaton::from_words(&self.q.kept, &[self.q.kept.word(t)], false)?;
        let lifted = ops::inverse_project(&word, &self.q)?;
        ops::project(&ops::intersect(&lifted, &self.l)?, &self.p)
    }

    fn abstract_strings(&self, bound: usize) -> Result<Vec<Ids>> {
        Ok(ops::enumerate_ids(&ops::project(&self.l, &self.q)?, bound))
    }
}

// ---------------------------------------------------------------------------
// specification properties

fn controllability(k: &Automaton, g: &Automaton, bound: usize) -> (Option<PropertyWitness>, usize) {
    let kbar = ops::prefix_close(k);
    let gl = ops::generated(g);
    let sigma = g.alphabet();
    let unc = sigma.ids_where(|e| !e.controllable);
    let strings = ops::enumerate_ids(&kbar, bound);
    let n = strings.len();
    for s in strings {
        for &e in &unc {
            let mut se = s.clone();
            se.push(e);
            if gl.accepts_ids(&se) && !kbar.accepts_ids(&se) {
                let w = PropertyWitness::new("controllability")
                    .with("s", sigma.word(&s))
                    .with("e", sigma.word(&[e]))
                    .with("se", sigma.word(&se));
                return (Some(w), n);
            }
        }
    }
    (None, n)
}

/// se ∈ K̄, s′ ∈ C̄, P(s) = P(s′), s′e ∈ L(G)∖K̄ for some e ∈ `events`.
fn observation_family(
    k: &Automaton,
    c: &Automaton,
    g: &Automaton,
    events: &[EventId],
    bound: usize,
    kind: &str,
) -> (Option<PropertyWitness>, usize) {
    let sigma = g.alphabet();
    let kbar = ops::prefix_close(k);
    let cbar = ops::prefix_close(c);
    let gl = ops::generated(g);
    let pmap = ProjectionSpec::keeping(sigma, |e| e.observable).event_map();
    // per observation and event: first s with se ∈ K̄, first s′ on the other side
    let mut left: BTreeMap<(Ids, EventId), Ids> = BTreeMap::new();
    let mut right: BTreeMap<(Ids, EventId), Ids> = BTreeMap::new();
    let ks = ops::enumerate_ids(&kbar, bound);
    let cs = ops::enumerate_ids(&cbar, bound);
    let examined = ks.len() + cs.len();
    for s in &ks {
        for &e in events {
            let mut se = s.clone();
            se.push(e);
            if kbar.accepts_ids(&se) {
                left.entry((image(&pmap, s), e)).or_insert_with(|| s.clone());
            }
        }
    }
    for s2 in &cs {
        for &e in events {
            let mut s2e = s2.clone();
            s2e.push(e);
            if gl.accepts_ids(&s2e) && !kbar.accepts_ids(&s2e) {
                right.entry((image(&pmap, s2), e)).or_insert_with(|| s2.clone());
            }
        }
    }
    // report the violation with the shortest s′ (ties: shortest s)
    let mut best: Option<(usize, usize, PropertyWitness)> = None;
    for (key, s2) in &right {
        if let Some(s) = left.get(key) {
            let e = key.1;
            let mut se = s.clone();
            se.push(e);
            let w = PropertyWitness::new(kind)
                .with("s", sigma.word(s))
                .with("se", sigma.word(&se))
                .with("s_prime", sigma.word(s2))
                .with("e", sigma.word(&[e]));
            let rank = (s2.len() + s.len(), s.len());
            if best.as_ref().is_none_or(|b| (b.0, b.1) > rank) {
                best = Some((rank.0, rank.1, w));
            }
        }
    }
    (best.map(|b| b.2), examined)
}

fn normality(k: &Automaton, g: &Automaton, bound: usize) -> Result<(Option<PropertyWitness>, usize)> {
    let sigma = g.alphabet();
    let p = ProjectionSpec::keeping(sigma, |e| e.observable);
    let pmap = p.event_map();
    let kbar = ops::prefix_close(k);
    let observed = ops::project(&kbar, &p)?;
    let strings = generated_strings(g, bound);
    let n = strings.len();
    for w in strings {
        if !kbar.accepts_ids(&w) && observed.accepts_ids(&image(&pmap, &w)) {
            return Ok((Some(PropertyWitness::new("normality").with("w", sigma.word(&w))), n));
        }
    }
    Ok((None, n))
}

fn nonconflicting(a: &Automaton, b: &Automaton, bound: usize) -> Result<(Option<PropertyWitness>, usize)> {
    let sigma = a.alphabet().union(b.alphabet())?;
    let amap = ProjectionSpec::new(sigma.clone(), sigma.filter(|e| a.alphabet().contains(&e.name)))?.event_map();
    let bmap = ProjectionSpec::new(sigma.clone(), sigma.filter(|e| b.alphabet().contains(&e.name)))?.event_map();
    let abar = ops::prefix_close(a);
    let bbar = ops::prefix_close(b);
    let together = ops::trim(&ops::parallel_compose(a, b)?);
    let universe = ops::enumerate_ids(&Automaton::universal(&sigma), bound);
    let mut examined = 0;
    for w in universe {
        // w ∈ closure(L1) ∥ closure(L2) ...
        if !abar.accepts_ids(&image(&amap, &w)) || !bbar.accepts_ids(&image(&bmap, &w)) {
            continue;
        }
        examined += 1;
        // ... but no continuation of w reaches L1 ∥ L2
        if together.reach(&w).is_empty() {
            let wit = PropertyWitness::new("nonconflicting").with("w", sigma.word(&w));
            return Ok((Some(wit), examined));
        }
    }
    Ok((None, examined))
}

// ---------------------------------------------------------------------------
// consistency properties

fn oc(pl: &Plant, bound: usize) -> Result<(Option<PropertyWitness>, usize)> {
    let ts = pl.abstract_strings(bound)?;
    // each t is represented by the language P(Q⁻¹(t) ∩ L); strings with the
    // same language and the same P_hi image are interchangeable, and the
    // length-lexicographic order makes the first of them the shortest
    let mut key_ids: HashMap<String, usize> = HashMap::new();
    let mut automata: Vec<Automaton> = Vec::new();
    let mut groups: BTreeMap<Ids, BTreeMap<usize, usize>> = BTreeMap::new();
    for (i, t) in ts.iter().enumerate() {
        let o = pl.observed_preimages(t)?;
        let key = canonical_key(&o);
        let id = *key_ids.entry(key).or_insert_with(|| {
            automata.push(o);
            automata.len() - 1
        });
        groups.entry(image(&pl.phimap, t)).or_default().entry(id).or_insert(i);
    }
    let mut disjoint: HashMap<(usize, usize), bool> = HashMap::new();
    let mut examined = 0;
    let mut best: Option<(usize, usize, usize)> = None;
    for members in groups.values() {
        for (&x, &i) in members {
            for (&y, &j) in members {
                examined += 1;
                let pair = (x.min(y), x.max(y));
                let empty = match disjoint.get(&pair) {
                    Some(&v) => v,
                    None => {
                        let v = ops::is_empty(&ops::intersect(&automata[x], &automata[y])?);
                        disjoint.insert(pair, v);
                        v
                    }
                };
                if empty {
                    let rank = ts[i].len() + ts[j].len();
                    if best.is_none_or(|b| b.0 > rank) {
                        best = Some((rank, i, j));
                    }
                }
            }
        }
    }
    let hi = &pl.q.kept;
    Ok((
        best.map(|(_, i, j)| {
            PropertyWitness::new("oc")
                .with("t", hi.word(&ts[i]))
                .with("t_prime", hi.word(&ts[j]))
        }),
        examined,
    ))
}

fn moc(pl: &Plant, bound: usize) -> Result<(Option<PropertyWitness>, usize)> {
    let ts = pl.abstract_strings(bound)?;
    let ss = ops::enumerate_ids(&pl.l, bound);
    let mut by_obs: BTreeMap<Ids, Vec<usize>> = BTreeMap::new();
    for (j, t) in ts.iter().enumerate() {
        by_obs.entry(image(&pl.phimap, t)).or_default().push(j);
    }
    let mut preimages: Vec<Option<Automaton>> = vec![None; ts.len()];
    let mut examined = 0;
    let mut best: Option<(usize, usize, usize)> = None;
    let mut decided: HashMap<(Ids, usize), bool> = HashMap::new();
    for (i, s) in ss.iter().enumerate() {
        let hi_obs = image(&pl.phimap, &image(&pl.qmap, s));
        let observed = image(&pl.pmap, s);
        let Some(js) = by_obs.get(&hi_obs) else { continue };
        for &j in js {
            examined += 1;
            let ok = match decided.get(&(observed.clone(), j)) {
                Some(&v) => v,
                None => {
                    if preimages[j].is_none() {
                        preimages[j] = Some(pl.observed_preimages(&ts[j])?);
                    }
                    let v = preimages[j].as_ref().expect("computed").accepts_ids(&observed);
                    decided.insert((observed.clone(), j), v);
                    v
                }
            };
            if !ok {
                let rank = s.len() + ts[j].len();
                if best.is_none_or(|b| b.0 > rank) {
                    best = Some((rank, i, j));
                }
            }
        }
    }
    Ok((
        best.map(|(_, i, j)| {
            PropertyWitness::new("moc")
                .with("s", pl.sigma.word(&ss[i]))
                .with("t_prime", pl.q.kept.word(&ts[j]))
        }),
        examined,
    ))
}

/// {P(u) : u ∈ allowed*, s·u·e ∈ L}, from the state set reached by s.
fn paths_to_event(pl: &Plant, states: &[StateId], e: EventId, allowed: &dyn Fn(EventId) -> bool) -> Result<Automaton> {
    let mut a = pl.l.clone();
    a.initial = states.to_vec();
    // keep only allowed moves; mark states enabling e
    for s in 0..a.num_states() {
        let enabled = pl.l.enables(s, e);
        a.marked[s] = enabled;
        a.edges[s].retain(|&(l, _)| match l {
            Label::Event(x) => allowed(x),
            _ => true,
        });
    }
    ops::project(&a, &pl.p)
}

fn loc(pl: &Plant, bound: usize) -> Result<(Option<PropertyWitness>, usize)> {
    let sigma = &pl.sigma;
    let ql = ops::determinize(&ops::project(&pl.l, &pl.q)?);
    let ss = ops::enumerate_ids(&pl.l, bound);
    let low = |x: EventId| !sigma.event(x).highlevel;
    let mut examined = 0;
    let mut best: Option<(usize, usize, usize, EventId)> = None;
    for e in sigma.ids_where(|ev| ev.controllable && ev.highlevel) {
        let eh = pl.qmap[e].expect("high-level");
        // strings s with Q(s)e ∈ Q(L), grouped by P(s), deduplicated by
        // the state set reached in L
        let mut groups: BTreeMap<Ids, BTreeMap<Vec<StateId>, usize>> = BTreeMap::new();
        for (i, s) in ss.iter().enumerate() {
            let mut qe = image(&pl.qmap, s);
            qe.push(eh);
            if ql.accepts_ids(&qe) {
                groups
                    .entry(image(&pl.pmap, s))
                    .or_default()
                    .entry(pl.l.reach(s))
                    .or_insert(i);
            }
        }
        let mut u_of: HashMap<Vec<StateId>, Automaton> = HashMap::new();
        for members in groups.values() {
            for states in members.keys() {
                if !u_of.contains_key(states) {
                    u_of.insert(states.clone(), paths_to_event(pl, states, e, &low)?);
                }
            }
            for (x, &i) in members {
                for (y, &j) in members {
                    examined += 1;
                    if ops::is_empty(&ops::intersect(&u_of[x], &u_of[y])?) {
                        let rank = ss[i].len() + ss[j].len();
                        if best.is_none_or(|b| b.0 > rank) {
                            best = Some((rank, i, j, e));
                        }
                    }
                }
            }
        }
    }
    Ok((
        best.map(|(_, i, j, e)| {
            PropertyWitness::new("loc")
                .with("s", sigma.word(&ss[i]))
                .with("s_prime", sigma.word(&ss[j]))
                .with("e", sigma.word(&[e]))
        }),
        examined,
    ))
}

fn observer(g: &Automaton, bound: usize) -> Result<(Option<PropertyWitness>, usize)> {
    let sigma = g.alphabet();
    let q = ProjectionSpec::keeping(sigma, |e| e.highlevel);
    let qmap = q.event_map();
    let marked_hi = ops::project(g, &q)?;
    let ts: BTreeSet<Ids> = ops::enumerate_ids(&marked_hi, bound).into_iter().collect();
    let ss = generated_strings(g, bound);
    let mut examined = 0;
    let mut cache: HashMap<Vec<StateId>, Automaton> = HashMap::new();
    for s in &ss {
        let qs = image(&qmap, s);
        let reached = g.reach(s);
        for t in ts.iter().filter(|t| t.starts_with(&qs)) {
            examined += 1;
            let completions = match cache.get(&reached) {
                Some(a) => a,
                None => {
                    let a = ops::project(&after(g, s), &q)?;
                    cache.entry(reached.clone()).or_insert(a)
                }
            };
            if !completions.accepts_ids(&t[qs.len()..]) {
                let w = PropertyWitness::new("observer")
                    .with("s", sigma.word(s))
                    .with("t", q.kept.word(t));
                return Ok((Some(w), examined));
            }
        }
    }
    Ok((None, examined))
}

fn lcc(pl: &Plant, bound: usize) -> Result<(Option<PropertyWitness>, usize)> {
    let sigma = &pl.sigma;
    let ss = ops::enumerate_ids(&pl.l, bound);
    let targets = sigma.ids_where(|e| e.highlevel && !e.controllable);
    let any_low = |x: EventId| !sigma.event(x).highlevel;
    let unc_low = |x: EventId| !sigma.event(x).highlevel && !sigma.event(x).controllable;
    let mut cache: HashMap<(Vec<StateId>, EventId), bool> = HashMap::new();
    let mut examined = 0;
    for s in &ss {
        let states = pl.l.reach(s);
        for &e in &targets {
            examined += 1;
            if let Some(&bad) = cache.get(&(states.clone(), e)) {
                if bad {
                    let w = PropertyWitness::new("lcc")
                        .with("s", sigma.word(s))
                        .with("e", sigma.word(&[e]));
                    return Ok((Some(w), examined));
                }
                continue;
            }
            let reachable = !ops::is_empty(&paths_to_event(pl, &states, e, &any_low)?);
            let uncontrollably = !ops::is_empty(&paths_to_event(pl, &states, e, &unc_low)?);
            let bad = reachable && !uncontrollably;
            cache.insert((states.clone(), e), bad);
            if bad {
                let w = PropertyWitness::new("lcc")
                    .with("s", sigma.word(s))
                    .with("e", sigma.word(&[e]));
                return Ok((Some(w), examined));
            }
        }
    }
    Ok((None, examined))
}

// ---------------------------------------------------------------------------
// bounded supremal sublanguages

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SupKind {
    Normal,
    Relobs,
}

/// Greatest fixpoint over the strings of K up to the bound: strings whose
/// presence violates the property are deleted together with their
/// extensions until nothing changes.
///
/// * `Normal`: inputs (B, M); w is deleted when a look-alike w′ ∈ M lies
///   outside the current set — either w′ ∈ M∖B (decided without bound) or
///   w′ a deleted string within the bound.
/// * `Relobs`: inputs (K, C, G); se is deleted when some look-alike
///   s′ ∈ C̄ has s′e ∈ L(G) outside the current set — either s′e ∉ K̄
///   (decided without bound) or s′e a deleted string within the bound.
///
/// For `Normal` the result is the supremal normal sublanguage cut at the
/// bound; for `Relobs` it contains the supremal C-observable sublanguage
/// cut at the bound.
pub fn oracle_sup_bounded(
    kind: SupKind,
    k: &Automaton,
    second: &Automaton,
    plant: Option<&Automaton>,
    bound: usize,
) -> Result<BTreeSet<Word>> {
    let sigma = second.alphabet().clone();
    let k = k.extend_alphabet(&sigma)?;
    let pmap = ProjectionSpec::keeping(&sigma, |e| e.observable).event_map();
    let p = ProjectionSpec::keeping(&sigma, |e| e.observable);
    let kbar = ops::prefix_close(&k);
    let mut current: BTreeSet<Ids> = ops::enumerate_ids(&kbar, bound).into_iter().collect();
    match kind {
        SupKind::Normal => {
            let m = second;
            let outside = ops::project(&ops::difference(m, &kbar)?, &p)?;
            let m_strings = ops::enumerate_ids(m, bound);
            loop {
                let deleted_obs: BTreeSet<Ids> = m_strings
                    .iter()
                    .filter(|w| !current.contains(*w))
                    .map(|w| image(&pmap, w))
                    .collect();
                let doomed: Vec<Ids> = current
                    .iter()
                    .filter(|w| {
                        let o = image(&pmap, w);
                        outside.accepts_ids(&o) || deleted_obs.contains(&o)
                    })
                    .cloned()
                    .collect();
                if doomed.is_empty() {
                    break;
                }
                remove_with_extensions(&mut current, &doomed);
            }
        }
        SupKind::Relobs => {
            let g = plant.ok_or_else(|| Error::Invalid("oracle relobs: a plant is required".into()))?;
            let cbar = ops::prefix_close(&second.extend_alphabet(&sigma)?);
            let gl = ops::generated(&g.extend_alphabet(&sigma)?);
            let c_strings = ops::enumerate_ids(&cbar, bound);
            loop {
                // observations (P(s′), e) whose s′e is forced out
                let mut forced: BTreeSet<(Ids, EventId)> = BTreeSet::new();
                for s2 in &c_strings {
                    for e in sigma.ids() {
                        let mut s2e = s2.clone();
                        s2e.push(e);
                        if !gl.accepts_ids(&s2e) {
                            continue;
                        }
                        let out = !kbar.accepts_ids(&s2e) || (s2e.len() <= bound && !current.contains(&s2e));
                        if out {
                            forced.insert((image(&pmap, s2), e));
                        }
                    }
                }
                // unbounded look-alikes s′ ∈ C̄ with s′e ∈ L(G)∖K̄
                let doomed: Vec<Ids> = current
                    .iter()
                    .filter(|w| !w.is_empty())
                    .filter(|w| {
                        let (s, e) = (&w[..w.len() - 1], w[w.len() - 1]);
                        let o = image(&pmap, s);
                        forced.contains(&(o.clone(), e)) || unbounded_lookalike_escapes(&cbar, &gl, &kbar, &p, &o, e)
                    })
                    .cloned()
                    .collect();
                if doomed.is_empty() {
                    break;
                }
                remove_with_extensions(&mut current, &doomed);
            }
        }
    }
    Ok(current.iter().map(|w| sigma.word(w)).collect())
}

/// ∃ s′ ∈ C̄ with P(s′) = o and s′e ∈ L(G)∖K̄, decided on automata.
fn unbounded_lookalike_escapes(
    cbar: &Automaton,
    gl: &Automaton,
    kbar: &Automaton,
    p: &ProjectionSpec,
    o: &[EventId],
    e: EventId,
) -> bool {
    let sigma = gl.alphabet();
    let build = || -> Result<bool> {
        let obs = Automaton::from_words(&p.kept, &[p.kept.word(o)], false)?;
        let lookalikes = ops::intersect(&ops::inverse_project(&obs, p)?, cbar)?;
        let single = Automaton::from_words(sigma, &[sigma.word(&[e])], false)?;
        let escaped = ops::intersect(&ops::concatenate(&lookalikes, &single)?, &ops::difference(gl, kbar)?)?;
        Ok(!ops::is_empty(&escaped))
    };
    build().unwrap_or(false)
}

fn remove_with_extensions(set: &mut BTreeSet<Ids>, doomed: &[Ids]) {
    set.retain(|w| !doomed.iter().any(|d| w.starts_with(d)));
}
