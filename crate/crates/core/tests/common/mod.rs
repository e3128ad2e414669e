//! Random grammar and tree generators shared by the integration tests.

#![allow(dead_code)]

use oca_approx::automaton::Automaton;
use oca_approx::grammar::{parse_grammar, Grammar, Term};
use oca_approx::trees::ParseTree;
use proptest::prelude::*;
use proptest::strategy::ValueTree;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

const LID_NAMES: [&str; 5] = ["S", "A", "B", "C", "D"];
const GNF_NAMES: [&str; 4] = ["S", "A", "B", "C"];
const TERMS: [&str; 3] = ["a", "b", "c"];

#[derive(Debug, Clone)]
enum LidForm {
    Unit(usize, usize),
    Branch(usize, usize, usize, usize),
    Eps,
}

/// Grammar text with at most 5 nonterminals and 8 productions over a, b, c.
/// Every nonterminal owns at least one production.
pub fn lid_text() -> impl Strategy<Value = String> {
    (1usize..=5).prop_flat_map(|n| {
        let form = prop_oneof![
            3 => (0..3usize, 0..n).prop_map(|(t, b)| LidForm::Unit(t, b)),
            2 => (0..3usize, 0..n, 0..3usize, 0..n).prop_map(|(u, b, v, c)| LidForm::Branch(u, b, v, c)),
            2 => Just(LidForm::Eps),
        ];
        prop::collection::vec((0..n, form), n..=8).prop_map(move |mut prods| {
            for (i, p) in prods.iter_mut().take(n).enumerate() {
                p.0 = i;
            }
            let mut text = String::from("kind: lid\nstart: S\nterminals: a b c\n");
            for (lhs, form) in prods {
                let rhs = match form {
                    LidForm::Unit(t, b) => format!("{} {}", TERMS[t], LID_NAMES[b]),
                    LidForm::Branch(u, b, v, c) => {
                        format!("{} {} {} {}", TERMS[u], LID_NAMES[b], TERMS[v], LID_NAMES[c])
                    }
                    LidForm::Eps => "eps".to_string(),
                };
                text.push_str(&format!("{} -> {rhs}\n", LID_NAMES[lhs]));
            }
            text
        })
    })
}

pub fn lid_grammar() -> impl Strategy<Value = Grammar> {
    lid_text().prop_map(|t| parse_grammar(&t).expect("generated grammar parses"))
}

/// GNF grammar text with at most 4 nonterminals, 8 productions and bodies of
/// length at most 3.
pub fn gnf_text() -> impl Strategy<Value = String> {
    (1usize..=4).prop_flat_map(|n| {
        let body = prop_oneof![
            2 => Just(Vec::new()),
            2 => prop::collection::vec(0..n, 1..=1),
            2 => prop::collection::vec(0..n, 2..=3),
        ];
        prop::collection::vec((0..n, 0..3usize, body), n..=8).prop_map(move |mut prods| {
            for (i, p) in prods.iter_mut().take(n).enumerate() {
                p.0 = i;
            }
            let mut text = String::from("kind: gnf\nstart: S\nterminals: a b c\n");
            for (lhs, t, body) in prods {
                text.push_str(&format!("{} -> {}", GNF_NAMES[lhs], TERMS[t]));
                for b in body {
                    text.push(' ');
                    text.push_str(GNF_NAMES[b]);
                }
                text.push('\n');
            }
            text
        })
    })
}

pub fn gnf_grammar() -> impl Strategy<Value = Grammar> {
    gnf_text().prop_map(|t| parse_grammar(&t).expect("generated grammar parses"))
}

/// Trees with arbitrary labels, including quotes and backslashes in leaves.
pub fn tree() -> impl Strategy<Value = ParseTree> {
    let leaf = prop_oneof![
        "[a-z]{1,2}".prop_map(ParseTree::Leaf),
        "[()+*\"\\\\ ]{1,3}".prop_map(ParseTree::Leaf),
    ];
    let label = "[A-Z][a-z0-9$]{0,2}";
    let root = (label, prop::collection::vec(leaf.clone(), 0..3)).prop_map(|(l, c)| ParseTree::node(l, c));
    root.prop_recursive(4, 32, 4, move |inner| {
        (label, prop::collection::vec(prop_oneof![leaf.clone(), inner], 0..4))
            .prop_map(|(l, c)| ParseTree::node(l, c))
    })
}

/// `count` deterministic samples of `strategy`.
pub fn sample<S: Strategy>(strategy: S, count: usize, seed: u8) -> Vec<S::Value> {
    let rng = TestRng::from_seed(RngAlgorithm::ChaCha, &[seed; 32]);
    let mut runner = TestRunner::new_with_rng(Config::default(), rng);
    (0..count)
        .map(|_| strategy.new_tree(&mut runner).expect("strategy yields values").current())
        .collect()
}

pub fn alphabet(a: &Automaton) -> Vec<Term> {
    (0..a.alphabet().len() as u32).map(Term).collect()
}

/// Space-free rendering of a word over single-character terminals.
pub fn show(names: &[String], w: &[Term]) -> String {
    w.iter().map(|t| names[t.index()].as_str()).collect()
}

pub fn is_subset(small: &[Vec<Term>], large: &[Vec<Term>]) -> bool {
    let large: std::collections::HashSet<&Vec<Term>> = large.iter().collect();
    small.iter().all(|w| large.contains(w))
}

pub fn tokens(g: &Grammar, w: &[Term]) -> Vec<String> {
    w.iter().map(|&t| g.term_name(t).to_string()).collect()
}
