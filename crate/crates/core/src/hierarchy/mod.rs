//! Two-level hierarchy: a low-level plant G over Σ and its abstraction
//! G_hi over Σhi, together with the four projections
//!
//! ```text
//!        Q
//!   Σ* ────▶ Σhi*
//!   │P        │P_hi
//!   ▼   Q_o   ▼
//!   Σo* ───▶ (Σhi∩Σo)*
//! ```
//!
//! and the consistency conditions relating observations on both levels.

mod consistency;
mod modular;
mod observer;
mod pipelines;

pub use consistency::{check_loc, check_moc, check_oc, lemma_moc_implies_oc, MocOcReport};
pub use modular::{check_moc_modular, lemma_distribute_q, ModularReport, ModularSystem};
pub use observer::{check_lcc, check_observer};
pub use pipelines::{
    hier_synth_normal, hier_synth_relobs, hier_verify, HierReport, PropertyPair, SynthNormalReport, SynthRelobsReport,
    TheoremReport,
};

use crate::alphabet::{Alphabet, ProjectionSpec};
use crate::automaton::Automaton;
use crate::error::{Error, Result};
use crate::ops;
use crate::word::Word;

/// Default number of candidate pairs examined by the consistency checks.
pub const DEFAULT_BUDGET: usize = 10_000;

/// A plant with its abstraction and projections.
#[derive(Clone, Debug)]
pub struct HierarchyContext {
    /// G as given.
    pub plant: Automaton,
    /// L(G), all states marked.
    pub language: Automaton,
    /// G_hi with L(G_hi) = Q(L(G)) and L_m(G_hi) = Q(L_m(G)).
    pub abstraction: Automaton,
    /// Σ → Σo.
    pub p: ProjectionSpec,
    /// Σ → Σhi.
    pub q: ProjectionSpec,
    /// Σhi → Σhi∩Σo.
    pub p_hi: ProjectionSpec,
    /// Σo → Σhi∩Σo.
    pub q_o: ProjectionSpec,
}

/// Builds G_hi = Q(G) and the projections of the square.
pub fn build_abstraction(g: &Automaton) -> Result<HierarchyContext> {
    let sigma = g.alphabet().clone();
    let q = ProjectionSpec::keeping(&sigma, |e| e.highlevel);
    let p = ProjectionSpec::keeping(&sigma, |e| e.observable);
    let p_hi = ProjectionSpec::keeping(&q.kept, |e| e.observable);
    let q_o = ProjectionSpec::keeping(&p.kept, |e| e.highlevel);
    let abstraction = ops::project(g, &q)?;
    Ok(HierarchyContext {
        language: ops::minimize(&ops::generated(g)),
        plant: g.clone(),
        abstraction,
        p,
        q,
        p_hi,
        q_o,
    })
}

impl HierarchyContext {
    pub fn sigma(&self) -> &Alphabet {
        self.plant.alphabet()
    }

    /// Q(L(G)), all states marked.
    pub fn abstract_language(&self) -> Result<Automaton> {
        Ok(ops::minimize(&ops::project(&self.language, &self.q)?))
    }

    /// Whether P_hi(Q(s)) = Q_o(P(s)) for a word of Σ*.
    pub fn square_commutes(&self, s: &Word) -> bool {
        self.p_hi.apply(&self.q.apply(s)) == self.q_o.apply(&self.p.apply(s))
    }

    /// P(Q⁻¹(t) ∩ L): the observations of the low-level strings abstracting to `t`.
    pub fn observed_preimages(&self, t: &Word) -> Result<Automaton> {
        let hi = &self.q.kept;
        let single = Automaton::from_words(hi, std::slice::from_ref(t), false)?;
        let lifted = ops::inverse_project(&single, &self.q)?;
        let inside = ops::intersect(&lifted, &self.language)?;
        ops::project(&inside, &self.p)
    }

    pub(crate) fn require_closed_plant(&self, what: &str) -> Result<()> {
        if ops::is_nonblocking(&self.plant) && ops::is_prefix_closed(&self.plant) {
            Ok(())
        } else {
            Err(Error::Precondition(format!(
                "{what}: the plant's marked language must be prefix-closed"
            )))
        }
    }
}
