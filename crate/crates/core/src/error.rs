use thiserror::Error;

use crate::grammar::GrammarKind;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("line {line}, column {column}: undeclared symbol `{name}`")]
    UndeclaredSymbol {
        line: usize,
        column: usize,
        name: String,
    },

    #[error("line {line}: `{text}` is not a valid {kind} production")]
    FormMismatch {
        line: usize,
        kind: GrammarKind,
        text: String,
    },

    #[error("missing `{0}:` declaration")]
    MissingDeclaration(&'static str),

    #[error("start symbol `{0}` has no productions")]
    UnknownStart(String),

    #[error("unknown nonterminal `{0}`")]
    UnknownNonterminal(String),

    #[error("operation requires a {expected} grammar, got {found}")]
    WrongGrammarKind {
        expected: GrammarKind,
        found: GrammarKind,
    },

    #[error("operation requires a {expected} automaton")]
    WrongAutomatonKind { expected: &'static str },

    #[error("invalid grammar: {0}")]
    InvalidGrammar(String),

    #[error("invalid automaton: {0}")]
    InvalidAutomaton(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("ambiguous ancestor pair for `{0}`")]
    AmbiguousAncestor(String),

    #[error("transformation did not reach its postcondition: {0}")]
    Postcondition(String),

    #[error("malformed acceptance sequence: {0}")]
    MalformedSequence(String),

    #[error("enumeration of {requested} strings exceeds the cap of {cap}")]
    CapExceeded { requested: u128, cap: u64 },

    #[error("tree syntax error at byte {offset}: {message}")]
    TreeSyntax { offset: usize, message: String },
}
