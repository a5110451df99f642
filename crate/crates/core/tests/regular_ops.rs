use std::collections::BTreeSet;

use hierctl::gadgets::{random_plant, GeneratorParams};
use hierctl::{ops, parse_automaton, serialize_automaton, Automaton, ProjectionSpec, Word};
use proptest::prelude::*;

fn nfa(seed: u64, states: usize, events: usize, marked: f64) -> Automaton {
    random_plant(&GeneratorParams {
        states,
        events,
        nondeterministic: true,
        transition_density: 0.8,
        p_marked: marked,
        seed,
        ..GeneratorParams::default()
    })
    .unwrap()
}

fn arb_nfa() -> impl Strategy<Value = Automaton> {
    (any::<u64>(), 1usize..5, 1usize..4, 0.0f64..1.0).prop_map(|(s, n, k, m)| nfa(s, n, k, m))
}

/// Every string over the alphabet up to the bound, filtered by membership.
fn by_membership(a: &Automaton, bound: usize) -> BTreeSet<Word> {
    let all = Automaton::universal(a.alphabet());
    ops::bounded_set(&all, bound)
        .into_iter()
        .filter(|w| a.accepts(w))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn enumeration_matches_membership(a in arb_nfa()) {
        prop_assert_eq!(ops::bounded_set(&a, 5), by_membership(&a, 5));
    }

    #[test]
    fn determinize_and_minimize_preserve_the_language(a in arb_nfa()) {
        let d = ops::determinize(&a);
        prop_assert!(d.is_deterministic());
        prop_assert!(ops::equivalent(&a, &d).unwrap());
        let m = ops::minimize(&a);
        prop_assert!(ops::equivalent(&a, &m).unwrap());
        prop_assert!(m.num_states() <= ops::trim(&d).num_states());
        // minimal automata of equal languages have equal size
        prop_assert_eq!(ops::minimize(&m).num_states(), m.num_states());
    }

    #[test]
    fn boolean_operations_match_sets(a in arb_nfa(), seed in any::<u64>(), m in 0.0f64..1.0) {
        let b = nfa(seed, 3, a.alphabet().len(), m);
        let b = b.extend_alphabet(a.alphabet());
        prop_assume!(b.is_ok());
        let b = b.unwrap();
        let (sa, sb) = (ops::bounded_set(&a, 4), ops::bounded_set(&b, 4));
        let i = ops::bounded_set(&ops::intersect(&a, &b).unwrap(), 4);
        let u = ops::bounded_set(&ops::union(&a, &b).unwrap(), 4);
        let d = ops::bounded_set(&ops::difference(&a, &b).unwrap(), 4);
        prop_assert_eq!(i, sa.intersection(&sb).cloned().collect::<BTreeSet<_>>());
        prop_assert_eq!(u, sa.union(&sb).cloned().collect::<BTreeSet<_>>());
        prop_assert_eq!(d, sa.difference(&sb).cloned().collect::<BTreeSet<_>>());
    }

    #[test]
    fn projection_is_the_image_of_the_language(a in arb_nfa()) {
        let p = ProjectionSpec::keeping(a.alphabet(), |e| e.observable);
        let image = ops::project(&a, &p).unwrap();
        // images of short strings are in the projection, and the projection
        // adds nothing that lifts back into the language
        for w in ops::bounded_set(&a, 5) {
            prop_assert!(image.accepts(&p.apply(&w)));
        }
        let back = ops::intersect(&ops::inverse_project(&image, &p).unwrap(), &a).unwrap();
        prop_assert!(ops::equivalent(&back, &a).unwrap());
    }

    #[test]
    fn prefix_closure_contains_exactly_the_prefixes(a in arb_nfa()) {
        let c = ops::prefix_close(&a);
        prop_assert!(ops::is_prefix_closed(&c));
        let words = ops::bounded_set(&a, 5);
        // extensions may be long, so "w is a prefix" is decided on the trim
        let t = ops::trim(&a);
        for w in ops::bounded_set(&c, 3) {
            prop_assert!(t.generates(&w), "{} is not a prefix", w);
        }
        for w in words {
            for k in 0..=w.len() {
                prop_assert!(c.accepts(&Word(w.0[..k].to_vec())));
            }
        }
    }

    #[test]
    fn serialization_round_trips(a in arb_nfa()) {
        let text = serialize_automaton(&a);
        let back = parse_automaton(&text).unwrap();
        prop_assert_eq!(serialize_automaton(&back), text);
        prop_assert!(ops::equivalent(&a, &back).unwrap());
    }

    #[test]
    fn length_lex_enumerates_the_bounded_set_in_order(a in arb_nfa()) {
        let lazy: Vec<Word> = ops::length_lex(&a)
            .map(|ids| a.alphabet().word(&ids))
            .take_while(|w| w.len() <= 4)
            .collect();
        let mut sorted = lazy.clone();
        sorted.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)));
        sorted.dedup();
        prop_assert_eq!(&lazy, &sorted);
        prop_assert_eq!(lazy.into_iter().collect::<BTreeSet<_>>(), ops::bounded_set(&a, 4));
    }
}
