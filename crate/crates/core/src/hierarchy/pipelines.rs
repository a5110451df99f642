//! End-to-end pipelines that evaluate both sides of the hierarchical
//! preservation results on a concrete plant and specification.

use std::collections::BTreeMap;

use serde::{Serialize, Serializer};

use super::{check_lcc, check_loc, check_moc, check_observer, check_oc, HierarchyContext};
use crate::automaton::Automaton;
use crate::error::{Error, Result};
use crate::ops;
use crate::saut::serialize_automaton;
use crate::sct::{self, ConvergenceReport};
use crate::verdict::Verdict;

fn as_saut<S: Serializer>(a: &Automaton, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&serialize_automaton(a))
}

/// A property evaluated on the high level (K wrt G_hi) and on the low level
/// (K ∥ L_m(G) wrt G).
#[derive(Clone, Debug, Serialize)]
pub struct PropertyPair {
    pub high: Verdict,
    pub low: Verdict,
    /// Both sides are decided and agree.
    pub biconditional_witnessed: bool,
}

impl PropertyPair {
    fn new(high: Verdict, low: Verdict) -> Self {
        let decided = |v: &Verdict| !v.is_inconclusive();
        let biconditional_witnessed = decided(&high) && decided(&low) && high.is_holds() == low.is_holds();
        PropertyPair {
            high,
            low,
            biconditional_witnessed,
        }
    }
}

/// One preservation result on this instance.
#[derive(Clone, Debug, Serialize)]
pub struct TheoremReport {
    pub hypotheses: Vec<&'static str>,
    pub hypotheses_met: bool,
    /// Hypotheses met and both sides decided and equal.
    pub biconditional_witnessed: bool,
    /// Hypotheses met, both sides decided, and the sides differ. Never
    /// expected; reported rather than asserted.
    pub contradicted: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct HierReport {
    pub hypotheses: BTreeMap<&'static str, Verdict>,
    pub properties: BTreeMap<&'static str, PropertyPair>,
    pub theorems: BTreeMap<&'static str, TheoremReport>,
}

fn require_spec(ctx: &HierarchyContext, k: &Automaton) -> Result<Automaton> {
    let hi = &ctx.q.kept;
    k.alphabet().require_same(hi, "specification")?;
    let k = k.extend_alphabet(hi)?;
    if let Some(w) = ops::inclusion_counterexample(&k, &ctx.abstraction)? {
        return Err(Error::Precondition(format!(
            "specification string `{}` is not in Q(L_m(G))",
            hi.word(&w)
        )));
    }
    Ok(k)
}

/// Evaluates every hypothesis and both sides of each equivalence for K and
/// the plant, and reports per result whether the instance witnesses it.
pub fn hier_verify(ctx: &HierarchyContext, k: &Automaton, budget: usize) -> Result<HierReport> {
    if !ops::is_nonblocking(&ctx.plant) {
        return Err(Error::Precondition("hier verify needs a nonblocking plant".into()));
    }
    let k = require_spec(ctx, k)?;
    let g = &ctx.plant;
    let low_k = ops::parallel_compose(&k, g)?;
    let mut hypotheses = BTreeMap::new();
    hypotheses.insert("observer", check_observer(ctx)?);
    hypotheses.insert("lcc", check_lcc(ctx)?);
    hypotheses.insert("oc", check_oc(ctx, budget)?);
    hypotheses.insert("loc", check_loc(ctx, budget)?);
    hypotheses.insert("moc", check_moc(ctx, budget)?);
    hypotheses.insert("nonconflicting", sct::check_nonconflicting(&k, g)?);

    let hi = &ctx.abstraction;
    let mut properties = BTreeMap::new();
    properties.insert(
        "controllability",
        PropertyPair::new(
            sct::check_controllability(&k, hi)?,
            sct::check_controllability(&low_k, g)?,
        ),
    );
    properties.insert(
        "observability",
        PropertyPair::new(sct::check_observability(&k, hi)?, sct::check_observability(&low_k, g)?),
    );
    properties.insert(
        "normality",
        PropertyPair::new(sct::check_normality(&k, hi)?, sct::check_normality(&low_k, g)?),
    );

    let deterministic = g.is_deterministic();
    let met = |names: &[&str]| deterministic && names.iter().all(|n| hypotheses[n].is_holds());
    let conj = |a: &Verdict, b: &Verdict| -> Option<bool> {
        if a.is_inconclusive() || b.is_inconclusive() {
            None
        } else {
            Some(a.is_holds() && b.is_holds())
        }
    };
    let theorem = |hyps: Vec<&'static str>, high: Option<bool>, low: Option<bool>| {
        let hypotheses_met = met(&hyps);
        let decided = high.zip(low);
        TheoremReport {
            hypotheses: hyps,
            hypotheses_met,
            biconditional_witnessed: hypotheses_met && decided.is_some_and(|(h, l)| h == l),
            contradicted: hypotheses_met && decided.is_some_and(|(h, l)| h != l),
        }
    };
    let c = &properties["controllability"];
    let o = &properties["observability"];
    let n = &properties["normality"];
    let decided = |v: &Verdict| (!v.is_inconclusive()).then(|| v.is_holds());
    let mut theorems = BTreeMap::new();
    theorems.insert(
        "controllability_and_observability",
        theorem(
            vec!["observer", "lcc", "oc", "loc"],
            conj(&c.high, &o.high),
            conj(&c.low, &o.low),
        ),
    );
    theorems.insert(
        "observability",
        theorem(vec!["oc", "nonconflicting", "loc"], decided(&o.high), decided(&o.low)),
    );
    theorems.insert(
        "normality",
        theorem(vec!["oc", "nonconflicting"], decided(&n.high), decided(&n.low)),
    );
    Ok(HierReport {
        hypotheses,
        properties,
        theorems,
    })
}

/// Supremal normal sublanguages computed on both levels.
#[derive(Clone, Debug, Serialize)]
pub struct SynthNormalReport {
    /// supN(K ∥ L, L).
    #[serde(serialize_with = "as_saut")]
    pub low: Automaton,
    /// supN(K, Q(L)).
    #[serde(serialize_with = "as_saut")]
    pub high: Automaton,
    /// supN(K, Q(L)) ∥ L.
    #[serde(serialize_with = "as_saut")]
    pub high_lift: Automaton,
    pub low_in_high_lift: Verdict,
    pub high_lift_in_low: Verdict,
    pub moc: Verdict,
    pub equal: bool,
}

fn require_closed_spec(ctx: &HierarchyContext, k: &Automaton, what: &str) -> Result<Automaton> {
    ctx.require_closed_plant(what)?;
    let hi = &ctx.q.kept;
    k.alphabet().require_same(hi, what)?;
    let k = k.extend_alphabet(hi)?;
    if !ops::is_prefix_closed(&k) {
        return Err(Error::Precondition(format!(
            "{what}: the specification must be prefix-closed"
        )));
    }
    if let Some(w) = ops::inclusion_counterexample(&k, &ctx.abstract_language()?)? {
        return Err(Error::Precondition(format!(
            "{what}: specification string `{}` is not in Q(L(G))",
            hi.word(&w)
        )));
    }
    Ok(k)
}

/// supN(K ∥ L, L) versus supN(K, Q(L)) ∥ L for prefix-closed K and plant.
pub fn hier_synth_normal(ctx: &HierarchyContext, k: &Automaton, budget: usize) -> Result<SynthNormalReport> {
    let k = require_closed_spec(ctx, k, "hier synth-normal")?;
    let l = &ctx.language;
    let low = sct::sup_normal_closed(&ops::parallel_compose(&k, l)?, l)?;
    let high = sct::sup_normal_closed(&k, &ctx.abstract_language()?)?;
    let high_lift = ops::minimize(&ops::parallel_compose(&high, l)?);
    let low_in_high_lift = ops::includes(&low, &high_lift)?;
    let high_lift_in_low = ops::includes(&high_lift, &low)?;
    let equal = low_in_high_lift.is_holds() && high_lift_in_low.is_holds();
    Ok(SynthNormalReport {
        low,
        high,
        high_lift,
        low_in_high_lift,
        high_lift_in_low,
        moc: check_moc(ctx, budget)?,
        equal,
    })
}

/// Supremal relatively observable sublanguages computed on both levels.
#[derive(Clone, Debug, Serialize)]
pub struct SynthRelobsReport {
    /// supRO(K ∥ L) wrt C ∥ L and L.
    #[serde(serialize_with = "as_saut")]
    pub low: Automaton,
    /// supRO(K) wrt C and Q(L).
    #[serde(serialize_with = "as_saut")]
    pub high: Automaton,
    /// supRO(K, Q(L)) ∥ L.
    #[serde(serialize_with = "as_saut")]
    pub high_lift: Automaton,
    pub low_convergence: ConvergenceReport,
    pub high_convergence: ConvergenceReport,
    pub low_in_high_lift: Verdict,
    pub high_lift_in_low: Verdict,
    pub moc: Verdict,
    /// Observability of the lifted high-level solution wrt L.
    pub high_lift_observable: Verdict,
}

/// The high-level ambient C (default: K itself) must satisfy K ⊆ C ⊆ Q(L);
/// the low level uses K ∥ L within C ∥ L.
pub fn hier_synth_relobs(
    ctx: &HierarchyContext,
    k: &Automaton,
    ambient: Option<&Automaton>,
    max_iters: usize,
    budget: usize,
) -> Result<SynthRelobsReport> {
    let k = require_closed_spec(ctx, k, "hier synth-relobs")?;
    let c = match ambient {
        Some(c) => require_closed_spec(ctx, c, "hier synth-relobs ambient")?,
        None => k.clone(),
    };
    let l = &ctx.language;
    let kl = ops::parallel_compose(&k, l)?;
    let cl = ops::parallel_compose(&c, l)?;
    let (low, low_convergence) = sct::sup_relobs_closed(&kl, &cl, l, max_iters)?;
    let (high, high_convergence) = sct::sup_relobs_closed(&k, &c, &ctx.abstract_language()?, max_iters)?;
    let high_lift = ops::minimize(&ops::parallel_compose(&high, l)?);
    Ok(SynthRelobsReport {
        low_in_high_lift: ops::includes(&low, &high_lift)?,
        high_lift_in_low: ops::includes(&high_lift, &low)?,
        high_lift_observable: sct::check_observability(&high_lift, l)?,
        moc: check_moc(ctx, budget)?,
        low,
        high,
        high_lift,
        low_convergence,
        high_convergence,
    })
}
