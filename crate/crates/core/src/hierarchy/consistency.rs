//! Observation consistency (OC), local observation consistency (LOC) and
//! modified observation consistency (MOC).
//!
//! Each check compares two automata over tuple letters. Inclusion of the
//! letter-sequence languages is sufficient for the property, but the
//! definitions quantify over string tuples: a sequence outside the right
//! side may still spell a tuple that the right side realizes through a
//! different interleaving. Hence the protocol:
//!
//! 1. sequence-level inclusion passes → `Holds`; failing that, the same
//!    inclusion restricted to either of two interleaving normal forms of the
//!    left side (see [`relations::interleaving_normal_form`]) — the left
//!    side is a product of independent runs, so each normal form keeps a
//!    spelling of every tuple;
//! 2. otherwise the sequences of (left ∩ normal form) ∖ right are enumerated in
//!    length-lexicographic order, decomposed into tuples and each new tuple
//!    is decided exactly against the definition;
//! 3. a confirmed tuple → `Violated`; all tuples refuted and the
//!    difference exhausted → `Holds`; budget spent → `Inconclusive`.

use std::collections::BTreeSet;

use serde::Serialize;

use super::HierarchyContext;
use crate::alphabet::{EventId, ProjectionSpec};
use crate::automaton::{Automaton, Label};
use crate::error::Result;
use crate::ops;
use crate::relations::{self, RelabelMode, TupleAlphabet, TupleAutomaton};
use crate::verdict::{BudgetReport, PropertyWitness, Verdict};
use crate::word::Word;

/// Raw sequences allowed per candidate tuple before giving up; bounds the
/// work spent on interleavings of already refuted tuples.
const SEQUENCES_PER_CANDIDATE: usize = 100;

fn three_phase(
    left: &TupleAutomaton,
    right: &TupleAutomaton,
    first_side: &[usize],
    budget: usize,
    mut confirm: impl FnMut(&[Word]) -> Result<Option<PropertyWitness>>,
) -> Result<Verdict> {
    let (_, cx) = relations::inclusion_counterexample(left, right)?;
    if cx.is_none() {
        return Ok(Verdict::Holds);
    }
    // each normal form alone keeps a spelling of every left tuple
    let second_side: Vec<usize> = (0..left.letters.arity()).filter(|i| !first_side.contains(i)).collect();
    let mut normalized = Vec::new();
    for side in [first_side, &second_side[..]] {
        let normal = relations::interleaving_normal_form(&left.letters, side)?;
        let restricted = relations::intersect(left, &normal)?;
        let (_, cx) = relations::inclusion_counterexample(&restricted, right)?;
        if cx.is_none() {
            return Ok(Verdict::Holds);
        }
        normalized.push(restricted);
    }
    let diff = relations::difference(&normalized[0], right)?;
    let mut seen: BTreeSet<Vec<Word>> = BTreeSet::new();
    let mut raw = 0usize;
    let raw_cap = budget.saturating_mul(SEQUENCES_PER_CANDIDATE).max(1);
    for seq in ops::length_lex(&diff.automaton) {
        raw += 1;
        let tuple = diff.decompose(&seq);
        if seen.insert(tuple.clone()) {
            if let Some(w) = confirm(&tuple)? {
                return Ok(Verdict::Violated(w));
            }
        }
        if seen.len() >= budget || raw >= raw_cap {
            return Ok(Verdict::Inconclusive(BudgetReport {
                budget,
                examined: seen.len(),
                note: format!(
                    "{} candidate tuples from {raw} letter sequences refuted; the sequence difference is not exhausted",
                    seen.len()
                ),
            }));
        }
    }
    Ok(Verdict::Holds)
}

/// OC: for all t, t′ ∈ Q(L) with P_hi(t) = P_hi(t′) there are s, s′ ∈ L
/// with Q(s) = t, Q(s′) = t′ and P(s) = P(s′).
///
/// Compares Q(L) ∥_{Σhi∩Σo} Q(L) with Q(L ∥_{Σo} L); a candidate pair
/// (t, t′) is a violation iff P(Q⁻¹(t) ∩ L) and P(Q⁻¹(t′) ∩ L) are disjoint.
/// Witness: `t`, `t_prime`.
pub fn check_oc(ctx: &HierarchyContext, budget: usize) -> Result<Verdict> {
    let ql = ctx.abstract_language()?;
    let left = relations::sync_pair_compose(&ql, &ql, &ctx.p_hi.kept)?;
    let lower = relations::sync_pair_compose(&ctx.language, &ctx.language, &ctx.p.kept)?;
    let right = relations::relabel_pair(&lower, RelabelMode::BothQ)?;
    three_phase(&left, &right, &[0], budget, |pair| {
        let (t, t2) = (&pair[0], &pair[1]);
        let common = ops::intersect(&ctx.observed_preimages(t)?, &ctx.observed_preimages(t2)?)?;
        Ok(ops::is_empty(&common).then(|| {
            PropertyWitness::new("oc")
                .with("t", t.clone())
                .with("t_prime", t2.clone())
                .note("t and t' look alike on the high level, but no low-level strings abstracting to them look alike")
        }))
    })
}

/// MOC: for every s ∈ L and t′ ∈ Q(L) with P_hi(Q(s)) = P_hi(t′) there is
/// s′ ∈ L with P(s′) = P(s) and Q(s′) = t′.
///
/// Compares L ∥_{Σhi∩Σo} Q(L) with Q₂(L ∥_{Σo} L), where Q₂ abstracts the
/// right component only; a candidate (s, t′) is a violation iff
/// P(s) ∉ P(Q⁻¹(t′) ∩ L). Witness: `s`, `t_prime`.
pub fn check_moc(ctx: &HierarchyContext, budget: usize) -> Result<Verdict> {
    let ql = ctx.abstract_language()?;
    let left = relations::sync_pair_compose(&ctx.language, &ql, &ctx.p_hi.kept)?;
    let lower = relations::sync_pair_compose(&ctx.language, &ctx.language, &ctx.p.kept)?;
    let right = relations::relabel_pair(&lower, RelabelMode::RightQ)?;
    three_phase(&left, &right, &[0], budget, |pair| {
        let (s, t2) = (&pair[0], &pair[1]);
        let observed = ctx.p.apply(s);
        let pre = ctx.observed_preimages(t2)?;
        Ok((!pre.accepts(&observed)).then(|| {
            PropertyWitness::new("moc")
                .with("s", s.clone())
                .with("t_prime", t2.clone())
                .note("Q(s) and t' look alike on the high level, but no low-level string abstracting to t' is observed as s")
        }))
    })
}

/// LOC: for s, s′ ∈ L with P(s) = P(s′) and e ∈ Σc∩Σhi with Q(s)e,
/// Q(s′)e ∈ Q(L), there are low-level u, u′ with P(u) = P(u′) and
/// sue, s′u′e ∈ L.
///
/// For each e the check compares H·(ε,e,ε,e) ∩ (Σ*×Q(L)×Σ*×Q(L)) with
/// (L×Σ*×L×Σ*) / (D·(e,ε,e,ε)), where H recognizes (s,Q(s),s′,Q(s′)) with
/// P(s) = P(s′) and D the observation-matched low-level pairs. A candidate
/// (s, s′) is a violation iff the observations of the low-level paths from
/// s to e and from s′ to e are disjoint. Witness: `s`, `s_prime`, `e`.
pub fn check_loc(ctx: &HierarchyContext, budget: usize) -> Result<Verdict> {
    let sigma = ctx.sigma().clone();
    let l = &ctx.language;
    let ql = ctx.abstract_language()?;
    let hi = ctx.q.kept.clone();
    let h = relations::build_quad(l)?;
    let d = relations::low_observation_matched(&sigma)?;
    let mut examined = 0usize;
    let mut inconclusive: Option<BudgetReport> = None;
    for e in sigma.ids_where(|ev| ev.controllable && ev.highlevel) {
        let eh = hi.id(sigma.name(e)).expect("high-level event");
        let up: relations::Letter = vec![None, Some(eh), None, Some(eh)];
        let down: relations::Letter = vec![Some(e), None, Some(e), None];
        let universe = TupleAlphabet::new(
            h.letters.components().to_vec(),
            h.letters
                .letters()
                .iter()
                .chain(d.letters.letters())
                .cloned()
                .chain([up.clone(), down.clone()]),
        )?;
        let h_up = relations::concatenate(&h, &TupleAutomaton::single(&universe, &up)?)?;
        let abstract_ok = relations::component_acceptor(&universe, &[None, Some(&ql), None, Some(&ql)])?;
        let left = relations::intersect(&h_up, &abstract_ok)?;
        let in_plant = relations::component_acceptor(&universe, &[Some(l), None, Some(l), None])?;
        let tail = relations::concatenate(&d, &TupleAutomaton::single(&universe, &down)?)?;
        let right = relations::right_quotient(&in_plant, &tail)?;
        let remaining = budget.saturating_sub(examined).max(1);
        let mut local = 0usize;
        let v = three_phase(&left, &right, &[0, 1], remaining, |quad| {
            local += 1;
            let (s, s2) = (&quad[0], &quad[2]);
            let u = low_observations_to(l, s, e, &ctx.p)?;
            let u2 = low_observations_to(l, s2, e, &ctx.p)?;
            Ok(ops::is_empty(&ops::intersect(&u, &u2)?).then(|| {
                PropertyWitness::new("loc")
                    .with("s", s.clone())
                    .with("s_prime", s2.clone())
                    .with("e", Word(vec![sigma.name(e).to_string()]))
                    .note("P(s) = P(s') and both abstractions continue with e, but no low-level strings with equal observations lead from s and s' to e")
            }))
        })?;
        examined += local;
        match v {
            Verdict::Violated(_) => return Ok(v),
            Verdict::Inconclusive(r) => {
                inconclusive.get_or_insert(r);
            }
            Verdict::Holds => {}
        }
    }
    Ok(match inconclusive {
        Some(mut r) => {
            r.budget = budget;
            r.examined = examined;
            Verdict::Inconclusive(r)
        }
        None => Verdict::Holds,
    })
}

/// {P(u) : u ∈ (Σ∖Σhi)*, sue ∈ L} as an automaton over Σo.
fn low_observations_to(l: &Automaton, s: &Word, e: EventId, p: &ProjectionSpec) -> Result<Automaton> {
    let sigma = l.alphabet();
    let start = l.reach(&sigma.word_ids(s)?);
    let mut low = Automaton::new(sigma.clone());
    for q in 0..l.num_states() {
        low.add_state(l.state_name(q))?;
        low.set_marked(q, l.enables(q, e));
    }
    for q in 0..l.num_states() {
        for &(lab, t) in l.edges(q) {
            match lab {
                Label::Event(a) if sigma.event(a).highlevel => {}
                _ => low.add_transition(q, lab, t),
            }
        }
    }
    for &q in &start {
        low.add_initial(q);
    }
    ops::project(&low, p)
}

/// Both verdicts behind the implication "MOC implies OC".
#[derive(Clone, Debug, Serialize)]
pub struct MocOcReport {
    pub moc: crate::Verdict,
    pub oc: crate::Verdict,
    /// False only when MOC holds while OC is violated.
    pub consistent: bool,
}

pub fn lemma_moc_implies_oc(ctx: &HierarchyContext, budget: usize) -> Result<MocOcReport> {
    let moc = check_moc(ctx, budget)?;
    let oc = check_oc(ctx, budget)?;
    let consistent = !(moc.is_holds() && oc.is_violated());
    Ok(MocOcReport { moc, oc, consistent })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::hierarchy::{build_abstraction, DEFAULT_BUDGET};
    use crate::saut::parse_automaton;

    #[test]
    fn example_plant_is_oc_but_not_moc() {
        let ctx = build_abstraction(&fixtures::oc_not_moc_plant()).unwrap();
        assert!(check_oc(&ctx, DEFAULT_BUDGET).unwrap().is_holds());
        let v = check_moc(&ctx, DEFAULT_BUDGET).unwrap();
        let w = v.witness().expect("MOC violated");
        assert_eq!(w.get("s").to_string(), "c");
        assert_eq!(w.get("t_prime").to_string(), "bc");
        let r = lemma_moc_implies_oc(&ctx, DEFAULT_BUDGET).unwrap();
        assert!(r.consistent);
    }

    #[test]
    fn relobs_gap_plant_is_oc_and_loc() {
        let ctx = build_abstraction(&fixtures::relobs_gap_plant()).unwrap();
        assert!(check_oc(&ctx, DEFAULT_BUDGET).unwrap().is_holds());
        assert!(check_loc(&ctx, DEFAULT_BUDGET).unwrap().is_holds());
    }

    #[test]
    fn full_abstraction_is_consistent() {
        let g = parse_automaton(
            "event a c x hi\nevent b c o hi\nstate 0\nstate 1\ninitial 0\nmarked 0\nmarked 1\ntrans 0 a 1\ntrans 1 b 0\ntrans 0 b 0\n",
        )
        .unwrap();
        let ctx = build_abstraction(&g).unwrap();
        assert!(check_oc(&ctx, DEFAULT_BUDGET).unwrap().is_holds());
        assert!(check_moc(&ctx, DEFAULT_BUDGET).unwrap().is_holds());
        assert!(check_loc(&ctx, DEFAULT_BUDGET).unwrap().is_holds());
    }

    #[test]
    fn hidden_interleaving_instance_is_not_refuted() {
        // L = {ε,a,b,ba}, Σo = {a}, Σhi = {b}: MOC holds although the
        // sequence-level inclusion fails
        let g = parse_automaton(
            "event a c o lo\nevent b c x hi\nstate 0\nstate 1\nstate 2\nstate 3\ninitial 0\nmarked 0\nmarked 1\nmarked 2\nmarked 3\ntrans 0 a 1\ntrans 0 b 2\ntrans 2 a 3\n",
        )
        .unwrap();
        let ctx = build_abstraction(&g).unwrap();
        let v = check_moc(&ctx, DEFAULT_BUDGET).unwrap();
        assert!(!v.is_violated(), "{v:?}");
    }

    #[test]
    fn loc_vacuous_without_controllable_high_events() {
        let g = parse_automaton(
            "event a c x lo\nevent e u o hi\nstate 0\nstate 1\nstate 2\ninitial 0\nmarked 0\nmarked 1\nmarked 2\ntrans 0 a 1\ntrans 1 e 2\n",
        )
        .unwrap();
        let ctx = build_abstraction(&g).unwrap();
        assert!(check_loc(&ctx, DEFAULT_BUDGET).unwrap().is_holds());
    }

    #[test]
    fn loc_violation_is_found() {
        // s = ε and s' = u (u unobservable low-level): after u, e is unreachable
        let g = parse_automaton(
            "event e c o hi\nevent u c x lo\nstate 0\nstate 1\nstate 2\ninitial 0\nmarked 0\nmarked 1\nmarked 2\ntrans 0 e 1\ntrans 0 u 2\n",
        )
        .unwrap();
        let ctx = build_abstraction(&g).unwrap();
        let v = check_loc(&ctx, DEFAULT_BUDGET).unwrap();
        let w = v.witness().expect("LOC violated");
        assert_eq!(w.get("e").to_string(), "e");
        let pair = [w.get("s").to_string(), w.get("s_prime").to_string()];
        assert!(pair.contains(&"u".to_string()) && pair.contains(&"ε".to_string()));
    }
}
