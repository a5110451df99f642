//! Modular plants: MOC of a composition from MOC of its components, and
//! distribution of the abstraction over the composition.

use serde::Serialize;

use super::{build_abstraction, check_moc};
use crate::alphabet::Alphabet;
use crate::automaton::Automaton;
use crate::error::{Error, Result};
use crate::ops;
use crate::verdict::{BudgetReport, PropertyWitness, Verdict};

/// Components G_i over Σ_i whose shared events carry identical flags.
#[derive(Clone, Debug)]
pub struct ModularSystem {
    components: Vec<Automaton>,
    alphabet: Alphabet,
    shared: Alphabet,
}

impl ModularSystem {
    pub fn new(components: Vec<Automaton>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::Invalid("a modular system needs at least one component".into()));
        }
        let mut alphabet = components[0].alphabet().clone();
        for c in &components[1..] {
            alphabet = alphabet.union(c.alphabet())?;
        }
        let shared = alphabet.filter(|e| components.iter().filter(|c| c.alphabet().contains(&e.name)).count() > 1);
        Ok(ModularSystem {
            components,
            alphabet,
            shared,
        })
    }

    pub fn components(&self) -> &[Automaton] {
        &self.components
    }

    /// Σ = ∪ Σ_i.
    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Σs = ∪_{i≠j} Σ_i ∩ Σ_j.
    pub fn shared(&self) -> &Alphabet {
        &self.shared
    }

    pub fn compose(&self) -> Result<Automaton> {
        let mut out = self.components[0].clone();
        for c in &self.components[1..] {
            out = ops::parallel_compose(&out, c)?;
        }
        Ok(out)
    }

    fn require_shared(&self, ok: impl Fn(&crate::Event) -> bool, what: &str) -> Result<()> {
        match self.shared.events().iter().find(|e| !ok(e)) {
            None => Ok(()),
            Some(e) => Err(Error::Precondition(format!("shared event `{}` is not {what}", e.name))),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ModularReport {
    /// Verdict for the composition.
    pub verdict: Verdict,
    /// MOC verdict of each component with its local projections.
    pub components: Vec<Verdict>,
}

/// MOC of ∥ G_i from component-wise MOC (requires Σs ⊆ Σhi ∩ Σo). The
/// composition rule only goes one way, so a component that is not MOC
/// leaves the composition undecided.
pub fn check_moc_modular(ms: &ModularSystem, budget: usize) -> Result<ModularReport> {
    ms.require_shared(|e| e.highlevel && e.observable, "high-level and observable")?;
    let mut components = Vec::with_capacity(ms.components.len());
    for c in &ms.components {
        components.push(check_moc(&build_abstraction(c)?, budget)?);
    }
    let verdict = if components.iter().all(Verdict::is_holds) {
        Verdict::Holds
    } else if components.len() == 1 {
        components[0].clone()
    } else {
        let failing = components.iter().filter(|v| !v.is_holds()).count();
        Verdict::Inconclusive(BudgetReport {
            budget,
            examined: components.len(),
            note: format!("{failing} component(s) not confirmed MOC; the composition rule gives no verdict"),
        })
    };
    Ok(ModularReport { verdict, components })
}

/// Q(∥ L_i) = ∥ Q_i(L_i) on marked languages (requires Σs ⊆ Σhi). The
/// equality is decided exactly; the witness `w` is a shortest string in one
/// side only, and `side` names the side holding it.
pub fn lemma_distribute_q(ms: &ModularSystem) -> Result<Verdict> {
    ms.require_shared(|e| e.highlevel, "high-level")?;
    let composed = ms.compose()?;
    let hi = composed.alphabet().highlevel();
    let left = ops::project_onto(&composed, &hi)?;
    let mut right: Option<Automaton> = None;
    for c in &ms.components {
        let qc = ops::project_onto(c, &c.alphabet().highlevel())?;
        right = Some(match right {
            None => qc,
            Some(r) => ops::parallel_compose(&r, &qc)?,
        });
    }
    let right = right.expect("at least one component").extend_alphabet(&hi)?;
    for (a, b, side) in [
        (&left, &right, "composed-then-abstracted"),
        (&right, &left, "abstracted-then-composed"),
    ] {
        if let Some(w) = ops::inclusion_counterexample(a, b)? {
            return Ok(Verdict::Violated(
                PropertyWitness::new("distribution")
                    .with("w", hi.word(&w))
                    .note(format!("w occurs only on the {side} side")),
            ));
        }
    }
    Ok(Verdict::Holds)
}
