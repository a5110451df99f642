//! Instance generators and definitional witness replay shared by the
//! integration tests.
#![allow(dead_code)]

use hierctl::gadgets::{random_plant, GeneratorParams};
use hierctl::hierarchy::HierarchyContext;
use hierctl::{ops, Automaton, Error, Label, ProjectionSpec, PropertyWitness, Word};

/// Random deterministic plant with 1..=5 states and 1..=4 events, all
/// states marked.
pub fn plant(seed: u64) -> Automaton {
    random_plant(&GeneratorParams {
        states: 1 + (seed % 5) as usize,
        events: 1 + (seed / 5 % 4) as usize,
        transition_density: 0.7,
        seed,
        ..GeneratorParams::default()
    })
    .unwrap()
}

/// Random plant whose flags satisfy `flags_ok`; retries successive
/// sub-seeds until one does.
pub fn plant_where(seed: u64, mut flags_ok: impl FnMut(&Automaton) -> bool) -> Automaton {
    for k in 0.. {
        let g = plant(seed.wrapping_mul(7919).wrapping_add(k * 1_000_003));
        if flags_ok(&g) {
            return g;
        }
    }
    unreachable!()
}

/// P(Q⁻¹(t) ∩ L) computed from scratch.
fn observed_preimages(l: &Automaton, t: &Word) -> Result<Automaton, Error> {
    let sigma = l.alphabet();
    let q = ProjectionSpec::keeping(sigma, |e| e.highlevel);
    let p = ProjectionSpec::keeping(sigma, |e| e.observable);
    let word = Automaton::from_words(&q.kept, std::slice::from_ref(t), false)?;
    let lifted = ops::inverse_project(&word, &q)?;
    ops::project(&ops::intersect(&lifted, l)?, &p)
}

fn project_word(w: &Word, keep: impl Fn(&str) -> bool) -> Word {
    Word(w.0.iter().filter(|e| keep(e)).cloned().collect())
}

/// Replays a consistency witness against the literal definition; returns
/// a description of the first failed condition.
pub fn replay(kind: &str, ctx: &HierarchyContext, w: &PropertyWitness) -> Result<(), String> {
    let l = &ctx.language;
    let sigma = l.alphabet();
    let flag = |name: &str| sigma.event(sigma.id(name).expect("known event")).clone();
    let p = |x: &Word| project_word(x, |e| flag(e).observable);
    let q = |x: &Word| project_word(x, |e| flag(e).highlevel);
    let p_hi = |x: &Word| project_word(x, |e| flag(e).observable);
    let ql = ops::project(l, &ctx.q).unwrap();
    let check = |ok: bool, what: &str| if ok { Ok(()) } else { Err(what.to_string()) };
    match kind {
        "oc" => {
            let (t, t2) = (w.get("t"), w.get("t_prime"));
            check(ql.accepts(t) && ql.accepts(t2), "t, t' ∈ Q(L)")?;
            check(p_hi(t) == p_hi(t2), "P_hi(t) = P_hi(t')")?;
            let common =
                ops::intersect(&observed_preimages(l, t).unwrap(), &observed_preimages(l, t2).unwrap()).unwrap();
            check(ops::is_empty(&common), "no look-alike preimages")
        }
        "moc" => {
            let (s, t2) = (w.get("s"), w.get("t_prime"));
            check(l.accepts(s) && ql.accepts(t2), "s ∈ L, t' ∈ Q(L)")?;
            check(p_hi(&q(s)) == p_hi(t2), "P_hi(Q(s)) = P_hi(t')")?;
            check(
                !observed_preimages(l, t2).unwrap().accepts(&p(s)),
                "P(s) ∉ P(Q⁻¹(t') ∩ L)",
            )
        }
        "loc" => {
            let (s, s2, e) = (w.get("s"), w.get("s_prime"), w.get("e"));
            let ev = flag(&e.0[0]);
            check(ev.controllable && ev.highlevel, "e ∈ Σc ∩ Σhi")?;
            check(l.accepts(s) && l.accepts(s2), "s, s' ∈ L")?;
            check(p(s) == p(s2), "P(s) = P(s')")?;
            check(
                ql.accepts(&q(s).concat(e)) && ql.accepts(&q(s2).concat(e)),
                "Q(s)e, Q(s')e ∈ Q(L)",
            )?;
            let u = low_paths(l, s, e).unwrap();
            let u2 = low_paths(l, s2, e).unwrap();
            check(ops::is_empty(&ops::intersect(&u, &u2).unwrap()), "U(s) ∩ U(s') = ∅")
        }
        other => Err(format!("no replay for {other}")),
    }
}

/// {P(u) : u ∈ (Σ∖Σhi)*, s·u·e ∈ L}, computed as the left quotient of
/// P({s·u : s·u·e ∈ L, u low-level}) by P(s).
fn low_paths(l: &Automaton, s: &Word, e: &Word) -> Result<Automaton, Error> {
    let sigma = l.alphabet();
    let single = |w: &Word| Automaton::from_words(sigma, std::slice::from_ref(w), false);
    let mut low_star = Automaton::new(sigma.clone());
    let q = low_star.add_state("q")?;
    low_star.add_initial(q);
    low_star.set_marked(q, true);
    for id in sigma.ids() {
        if !sigma.event(id).highlevel {
            low_star.add_transition(q, Label::Event(id), q);
        }
    }
    let shape = ops::concatenate(&ops::concatenate(&single(s)?, &low_star)?, &single(e)?)?;
    let su = ops::right_quotient(&ops::intersect(&shape, l)?, &single(e)?)?;
    let p = ProjectionSpec::keeping(sigma, |ev| ev.observable);
    let observed = ops::determinize(&ops::project(&su, &p)?);
    let start = observed.reach(&p.kept.word_ids(&p.apply(s))?);
    let mut out = Automaton::new(p.kept.clone());
    for x in 0..observed.num_states() {
        out.add_state(observed.state_name(x))?;
        out.set_marked(x, observed.is_marked(x));
    }
    for x in 0..observed.num_states() {
        for &(lab, t) in observed.edges(x) {
            out.add_transition(x, lab, t);
        }
    }
    for x in start {
        out.add_initial(x);
    }
    Ok(out)
}

/// The part of `g` whose i-th transition (in state, then edge order) is
/// kept when `draws[i % draws.len()] < keep`. All states stay marked, so
/// the result is prefix-closed and contained in L(g); nested thresholds
/// give nested languages.
pub fn sub_plant(g: &Automaton, draws: &[f64], keep: f64) -> Automaton {
    let mut out = Automaton::new(g.alphabet().clone());
    for s in 0..g.num_states() {
        out.add_state(g.state_name(s)).unwrap();
        out.set_marked(s, g.is_marked(s));
    }
    for &s in g.initial() {
        out.add_initial(s);
    }
    let mut i = 0;
    for s in 0..g.num_states() {
        for &(l, t) in g.edges(s) {
            if draws.is_empty() || draws[i % draws.len()] < keep {
                out.add_transition(s, l, t);
            }
            i += 1;
        }
    }
    out
}

/// Random all-marked NFA with at most 4 states and `min_events..=3` events.
pub fn nfa_sample(seed: u64, min_events: usize) -> Automaton {
    let states = 1 + (seed % 4) as usize;
    let events = min_events + (seed / 4 % (4 - min_events as u64)) as usize;
    random_plant(&GeneratorParams {
        states,
        events,
        transition_density: 0.9,
        nondeterministic: true,
        seed,
        ..GeneratorParams::default()
    })
    .unwrap()
}
