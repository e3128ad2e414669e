//! Grammars used throughout the tests, benches and documentation.

use crate::grammar::{parse_grammar, Grammar};

/// Arithmetic expressions in Greibach normal form, start `E`.
pub const ARITH: &str = include_str!("../fixtures/arith.gnf");
/// `a^n b^n` as a LID grammar.
pub const ANBN: &str = include_str!("../fixtures/anbn.lid");
/// LID grammar for `{ab, cd}` whose two branch productions share an inner nonterminal.
pub const AB_CD: &str = include_str!("../fixtures/ab-cd.lid");
/// Two branch productions whose inner R-sets meet in a nullable `C`.
pub const SHARED_TAIL: &str = include_str!("../fixtures/shared-tail.lid");
/// Conflicting branch productions around a non-regular `S`.
pub const NESTED_CONFLICT: &str = include_str!("../fixtures/nested-conflict.lid");
/// GNF grammar with an eliminable two-symbol body.
pub const PREFIX: &str = include_str!("../fixtures/prefix.gnf");
/// GNF grammar whose four-symbol body has a self-recursive first member.
pub const THREE_BODY: &str = include_str!("../fixtures/three-body.gnf");
/// Maps the identifiers `a b c d` onto the terminal class `i` of [`ARITH`].
pub const ARITH_ALIAS: &str = include_str!("../fixtures/arith.alias");

pub fn arith() -> Grammar {
    parse_grammar(ARITH).expect("arith fixture parses")
}

pub fn anbn() -> Grammar {
    parse_grammar(ANBN).expect("anbn fixture parses")
}

pub fn ab_cd() -> Grammar {
    parse_grammar(AB_CD).expect("ab-cd fixture parses")
}

pub fn shared_tail() -> Grammar {
    parse_grammar(SHARED_TAIL).expect("shared-tail fixture parses")
}

pub fn nested_conflict() -> Grammar {
    parse_grammar(NESTED_CONFLICT).expect("nested-conflict fixture parses")
}

pub fn prefix() -> Grammar {
    parse_grammar(PREFIX).expect("prefix fixture parses")
}

pub fn three_body() -> Grammar {
    parse_grammar(THREE_BODY).expect("three-body fixture parses")
}
