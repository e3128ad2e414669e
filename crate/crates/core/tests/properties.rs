mod common;

use std::collections::BTreeSet;

use common::*;
use oca_approx::analysis::{prop2_condition, prop3_condition};
use oca_approx::automaton::{build_gnf_oca, build_lid_oca, parse_automaton, serialize_automaton, strip_to_nfa};
use oca_approx::grammar::{parse_grammar, serialize_grammar, Grammar, RSets, Rhs};
use oca_approx::oracle::{enumerate_language, parse};
use oca_approx::runtime::{
    accepted_upto, accepted_words, all_sequences, extract_sequence, replay, run_oca, SEQUENCE_CAP,
};
use oca_approx::sweep::Sweep;
use oca_approx::transform::{eliminate_regular_prefix_gnf, eliminate_regular_tails_lid, normalize_to_prop2};
use oca_approx::trees::{parse_tree, reconstruct, render_tree, validate_tree, TreeMode};
use oca_approx::Error;
use proptest::prelude::*;

const LEN: usize = 5;

fn long_productions(g: &Grammar) -> usize {
    g.productions()
        .iter()
        .filter(|p| matches!(&p.rhs, Rhs::Gnf { body, .. } if body.len() >= 2))
        .count()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn r_sets_are_closed(g in lid_grammar()) {
        let rs = RSets::compute(&g);
        for a in g.nt_ids() {
            prop_assert!(rs.contains(a, a));
            for &b in rs.of(a) {
                prop_assert!(rs.of(b).is_subset(rs.of(a)));
            }
            for (_, p) in g.productions_of(a) {
                if let Some(last) = p.rhs.last() {
                    prop_assert!(rs.contains(a, last));
                }
            }
        }
    }

    #[test]
    fn lid_languages_nest(g in lid_grammar()) {
        let s = Sweep::default();
        let oca = build_lid_oca(&g).unwrap();
        let nfa = strip_to_nfa(&oca).unwrap();
        let sigma = alphabet(&oca);
        let exact = enumerate_language(&g, LEN, &s).unwrap();
        let by_oca = accepted_upto(&oca, &sigma, LEN, &s).unwrap();
        let by_nfa = accepted_upto(&nfa, &sigma, LEN, &s).unwrap();
        prop_assert!(is_subset(&exact, &by_oca));
        prop_assert!(is_subset(&by_oca, &by_nfa));
        if prop2_condition(&g).unwrap().holds {
            prop_assert_eq!(exact, by_oca);
        }
    }

    #[test]
    fn gnf_languages_nest(g in gnf_grammar()) {
        let s = Sweep::default();
        let oca = build_gnf_oca(&g).unwrap();
        let nfa = strip_to_nfa(&oca).unwrap();
        let sigma = alphabet(&oca);
        let exact = enumerate_language(&g, LEN, &s).unwrap();
        let by_oca = accepted_upto(&oca, &sigma, LEN, &s).unwrap();
        let by_nfa = accepted_upto(&nfa, &sigma, LEN, &s).unwrap();
        prop_assert!(is_subset(&exact, &by_oca));
        prop_assert!(is_subset(&by_oca, &by_nfa));
    }

    #[test]
    fn lid_runs_replay_and_rebuild(g in lid_grammar()) {
        let oca = build_lid_oca(&g).unwrap();
        let exact = prop2_condition(&g).unwrap().holds;
        for w in accepted_words(&oca, LEN, u64::MAX).unwrap() {
            let table = run_oca(&oca, &w).unwrap();
            prop_assert!(table.stored_configurations() <= table.configuration_bound(oca.states().len()));
            let seq = extract_sequence(&table).unwrap();
            replay(&oca, &seq, Some(&w)).unwrap();
            let lid = reconstruct(TreeMode::Lid, &seq, &oca).unwrap();
            let generic = reconstruct(TreeMode::Generic, &seq, &oca).unwrap();
            prop_assert_eq!(lid.steps, w.len());
            prop_assert_eq!(generic.steps, w.len());
            let toks = tokens(&g, &w);
            prop_assert!(lid.tree.frontier().iter().copied().eq(toks.iter().map(String::as_str)));
            prop_assert!(generic.tree.frontier().iter().copied().eq(toks.iter().map(String::as_str)));
            let mut l = lid.tree.node_labels();
            let mut r = generic.tree.node_labels();
            l.sort_unstable();
            r.sort_unstable();
            prop_assert_eq!(l, r);
            if exact {
                prop_assert!(validate_tree(&g, &lid.tree, &toks), "{}", render_tree(&lid.tree));
            }
            prop_assert_eq!(reconstruct(TreeMode::Lid, &seq, &oca).unwrap(), lid);
        }
    }

    #[test]
    fn gnf_runs_rebuild(g in gnf_grammar()) {
        let oca = build_gnf_oca(&g).unwrap();
        for w in accepted_words(&oca, LEN, u64::MAX).unwrap() {
            let seq = extract_sequence(&run_oca(&oca, &w).unwrap()).unwrap();
            let r = reconstruct(TreeMode::Gnf, &seq, &oca).unwrap();
            prop_assert_eq!(r.steps, w.len());
            let toks = tokens(&g, &w);
            prop_assert!(r.tree.frontier().iter().copied().eq(toks.iter().map(String::as_str)));
        }
    }

    #[test]
    fn all_sequences_replay(g in lid_grammar()) {
        let oca = build_lid_oca(&g).unwrap();
        for w in accepted_words(&oca, 4, u64::MAX).unwrap() {
            let first = extract_sequence(&run_oca(&oca, &w).unwrap()).unwrap();
            let (seqs, _) = all_sequences(&oca, &w, SEQUENCE_CAP).unwrap();
            prop_assert!(seqs.contains(&first));
            let distinct: BTreeSet<_> = seqs.iter().collect();
            prop_assert_eq!(distinct.len(), seqs.len());
            for s in &seqs {
                replay(&oca, s, Some(&w)).unwrap();
            }
        }
    }

    #[test]
    fn oracle_witnesses_validate(g in lid_grammar()) {
        for w in enumerate_language(&g, LEN, &Sweep::default()).unwrap() {
            let t = parse(&g, &w).unwrap();
            prop_assert!(validate_tree(&g, &t, &tokens(&g, &w)));
        }
    }

    #[test]
    fn tail_elimination_preserves_language(g in lid_grammar()) {
        let s = Sweep::default();
        let t = eliminate_regular_tails_lid(&g).unwrap();
        prop_assert_eq!(enumerate_language(&g, LEN, &s).unwrap(), enumerate_language(&t.grammar, LEN, &s).unwrap());
        prop_assert_eq!(parse_grammar(&t.to_text()).unwrap(), t.grammar);
    }

    #[test]
    fn normalization_is_sound(g in lid_grammar()) {
        let s = Sweep::default();
        match normalize_to_prop2(&g) {
            Ok(t) => {
                prop_assert!(prop3_condition(&g).unwrap().holds);
                prop_assert!(prop2_condition(&t.grammar).unwrap().holds);
                let before = enumerate_language(&g, LEN, &s).unwrap();
                prop_assert_eq!(&before, &enumerate_language(&t.grammar, LEN, &s).unwrap());
                let oca = build_lid_oca(&t.grammar).unwrap();
                prop_assert_eq!(before, accepted_upto(&oca, &alphabet(&oca), LEN, &s).unwrap());
            }
            Err(Error::Precondition(_)) => prop_assert!(!prop3_condition(&g).unwrap().holds),
            Err(Error::Postcondition(_)) => {}
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }

    #[test]
    fn prefix_elimination_preserves_language(g in gnf_grammar()) {
        let s = Sweep::default();
        let t = eliminate_regular_prefix_gnf(&g).unwrap();
        prop_assert_eq!(enumerate_language(&g, LEN, &s).unwrap(), enumerate_language(&t.grammar, LEN, &s).unwrap());
        prop_assert_eq!(long_productions(&t.grammar) + t.steps, long_productions(&g));
    }

    #[test]
    fn grammar_text_round_trips(text in prop_oneof![lid_text(), gnf_text()]) {
        let g = parse_grammar(&text).unwrap();
        let out = serialize_grammar(&g);
        prop_assert_eq!(parse_grammar(&out).unwrap(), g);
    }

    #[test]
    fn automaton_text_round_trips(g in lid_grammar(), h in gnf_grammar()) {
        for a in [build_lid_oca(&g).unwrap(), build_gnf_oca(&h).unwrap()] {
            let nfa = strip_to_nfa(&a).unwrap();
            prop_assert_eq!(parse_automaton(&serialize_automaton(&a)).unwrap(), a);
            prop_assert_eq!(parse_automaton(&serialize_automaton(&nfa)).unwrap(), nfa);
        }
    }

    #[test]
    fn tree_text_round_trips(t in tree()) {
        prop_assert_eq!(parse_tree(&render_tree(&t)).unwrap(), t);
    }

    #[test]
    fn sweeps_agree(g in lid_grammar()) {
        let oca = build_lid_oca(&g).unwrap();
        let sigma = alphabet(&oca);
        let par = accepted_upto(&oca, &sigma, LEN, &Sweep::default()).unwrap();
        let seq = accepted_upto(&oca, &sigma, LEN, &Sweep::sequential()).unwrap();
        prop_assert_eq!(&par, &seq);
        prop_assert_eq!(accepted_words(&oca, LEN, u64::MAX).unwrap(), par);
        let nfa = strip_to_nfa(&oca).unwrap();
        prop_assert_eq!(
            accepted_words(&nfa, LEN, u64::MAX).unwrap(),
            accepted_upto(&nfa, &sigma, LEN, &Sweep::sequential()).unwrap()
        );
    }
}
