//! One entry point for every decided property, shared by the command line
//! and the C interface.

use crate::automaton::Automaton;
use crate::error::{Error, Result};
use crate::hierarchy::{self, build_abstraction};
use crate::ops;
use crate::oracle::{OracleInputs, OracleProperty};
use crate::sct;
use crate::verdict::Verdict;

/// Decides `property` on the inputs. Properties of a specification need
/// `inputs.spec` (and relative observability `inputs.ambient`), given over
/// the plant alphabet; `budget` bounds the consistency checks.
pub fn check_property(property: OracleProperty, inputs: OracleInputs<'_>, budget: usize) -> Result<Verdict> {
    let g = inputs.plant;
    let k = || {
        inputs
            .spec
            .ok_or_else(|| Error::Usage(format!("{property} needs a specification")))
    };
    match property {
        OracleProperty::Oc => hierarchy::check_oc(&build_abstraction(g)?, budget),
        OracleProperty::Loc => hierarchy::check_loc(&build_abstraction(g)?, budget),
        OracleProperty::Moc => hierarchy::check_moc(&build_abstraction(g)?, budget),
        OracleProperty::Observer => hierarchy::check_observer(&build_abstraction(g)?),
        OracleProperty::Lcc => hierarchy::check_lcc(&build_abstraction(g)?),
        OracleProperty::Controllability => sct::check_controllability(k()?, g),
        OracleProperty::Observability => sct::check_observability(k()?, g),
        OracleProperty::Normality => sct::check_normality(k()?, g),
        OracleProperty::Relobs => {
            let c = inputs
                .ambient
                .ok_or_else(|| Error::Usage("relobs needs an ambient language".into()))?;
            sct::check_relative_observability(k()?, c, g)
        }
        OracleProperty::Nonconflicting => sct::check_nonconflicting(k()?, g),
    }
}

/// A language given over part of the plant alphabet stands for its lift
/// `K ∥ L(G)`; one over the full alphabet is taken as is.
pub fn over_plant(a: Automaton, g: &Automaton) -> Result<Automaton> {
    if a.alphabet() == g.alphabet() {
        Ok(a)
    } else {
        ops::parallel_compose(&a, g)
    }
}
