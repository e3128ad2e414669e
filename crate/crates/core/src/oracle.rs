//! Exact membership, witness parsing and bounded enumeration, straight from
//! the grammar.
//!
//! Every non-empty right-hand side starts with a terminal, so a nonterminal
//! spanning `input[i..j]` only depends on strictly shorter spans and the
//! table fills bottom-up by span length.

use crate::error::Result;
use crate::grammar::{Grammar, Nt, Symbol, Term};
use crate::sweep::{filter_words, Sweep};
use crate::trees::ParseTree;

/// `derives(A, i, j)` for every nonterminal and span of one input.
#[derive(Debug, Clone)]
pub struct ParseMemo<'g> {
    grammar: &'g Grammar,
    input: Vec<Term>,
    symbols: Vec<Vec<Symbol>>,
    table: Vec<bool>,
}

impl<'g> ParseMemo<'g> {
    pub fn new(grammar: &'g Grammar, input: &[Term]) -> ParseMemo<'g> {
        let n = input.len();
        let nts = grammar.nonterminals().len();
        let symbols: Vec<Vec<Symbol>> = grammar.productions().iter().map(|p| p.rhs.symbols()).collect();
        let mut memo = ParseMemo {
            grammar,
            input: input.to_vec(),
            symbols,
            table: vec![false; (n + 1) * (n + 1) * nts],
        };
        for len in 0..=n {
            for i in 0..=n - len {
                let j = i + len;
                for (idx, p) in grammar.productions().iter().enumerate() {
                    let slot = memo.slot(p.lhs, i, j);
                    if !memo.table[slot] && memo.matches(idx, i, j) {
                        memo.table[slot] = true;
                    }
                }
            }
        }
        memo
    }

    fn slot(&self, a: Nt, i: usize, j: usize) -> usize {
        let n1 = self.input.len() + 1;
        (i * n1 + j) * self.grammar.nonterminals().len() + a.index()
    }

    pub fn derives(&self, a: Nt, i: usize, j: usize) -> bool {
        self.table[self.slot(a, i, j)]
    }

    pub fn accepted(&self) -> bool {
        self.derives(self.grammar.start(), 0, self.input.len())
    }

    /// Whether production `idx` derives `input[i..j]`, given all shorter spans.
    fn matches(&self, idx: usize, i: usize, j: usize) -> bool {
        let syms = &self.symbols[idx];
        match syms.split_first() {
            None => i == j,
            Some((Symbol::Terminal(t), rest)) => {
                i < j && self.input[i] == *t && self.reach(rest, i + 1, j)[j]
            }
            Some((Symbol::Nonterminal(_), _)) => unreachable!("right-hand sides start with a terminal"),
        }
    }

    /// Positions reachable after matching `syms` from `from`, bounded by `to`.
    fn reach(&self, syms: &[Symbol], from: usize, to: usize) -> Vec<bool> {
        let mut at = vec![false; to + 1];
        if from > to {
            return at;
        }
        at[from] = true;
        for sym in syms {
            let mut next = vec![false; to + 1];
            for p in (from..=to).filter(|&p| at[p]) {
                match *sym {
                    Symbol::Terminal(t) => {
                        if p < to && self.input[p] == t {
                            next[p + 1] = true;
                        }
                    }
                    Symbol::Nonterminal(b) => {
                        for (q, slot) in next.iter_mut().enumerate().skip(p) {
                            if self.derives(b, p, q) {
                                *slot = true;
                            }
                        }
                    }
                }
            }
            at = next;
        }
        at
    }

    /// Witness tree for `a` over `input[i..j]`: first production in order,
    /// then the leftmost split.
    pub fn tree(&self, a: Nt, i: usize, j: usize) -> Option<ParseTree> {
        if !self.derives(a, i, j) {
            return None;
        }
        let g = self.grammar;
        for (idx, _) in g.productions_of(a) {
            if !self.matches(idx, i, j) {
                continue;
            }
            let syms = &self.symbols[idx];
            let mut children = Vec::with_capacity(syms.len());
            if let Some((Symbol::Terminal(t), rest)) = syms.split_first() {
                children.push(ParseTree::leaf(g.term_name(*t)));
                self.split(rest, i + 1, j, &mut children);
            }
            return Some(ParseTree::node(g.nt_name(a), children));
        }
        None
    }

    fn split(&self, syms: &[Symbol], mut p: usize, j: usize, out: &mut Vec<ParseTree>) {
        let g = self.grammar;
        for (k, sym) in syms.iter().enumerate() {
            match *sym {
                Symbol::Terminal(t) => {
                    out.push(ParseTree::leaf(g.term_name(t)));
                    p += 1;
                }
                Symbol::Nonterminal(b) => {
                    let q = (p..=j)
                        .find(|&q| self.derives(b, p, q) && self.reach(&syms[k + 1..], q, j)[j])
                        .expect("span is derivable");
                    out.push(self.tree(b, p, q).expect("span is derivable"));
                    p = q;
                }
            }
        }
    }
}

pub fn member(g: &Grammar, input: &[Term]) -> bool {
    ParseMemo::new(g, input).accepted()
}

/// Membership for surface tokens; unknown tokens are never members.
pub fn member_tokens<S: AsRef<str>>(g: &Grammar, tokens: &[S]) -> bool {
    encode(g, tokens).is_some_and(|w| member(g, &w))
}

pub fn encode<S: AsRef<str>>(g: &Grammar, tokens: &[S]) -> Option<Vec<Term>> {
    tokens.iter().map(|s| g.terminal(s.as_ref())).collect()
}

pub fn parse(g: &Grammar, input: &[Term]) -> Option<ParseTree> {
    ParseMemo::new(g, input).tree(g.start(), 0, input.len())
}

/// Members of length at most `maxlen`, in sweep order.
pub fn enumerate_language(g: &Grammar, maxlen: usize, sweep: &Sweep) -> Result<Vec<Vec<Term>>> {
    let alphabet: Vec<Term> = (0..g.terminals().len() as u32).map(Term).collect();
    filter_words(&alphabet, maxlen, sweep, |w| member(g, w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::trees::render_tree;

    fn word(g: &Grammar, s: &str) -> Vec<Term> {
        s.chars().map(|c| g.terminal(&c.to_string()).unwrap()).collect()
    }

    fn names(g: &Grammar, ws: &[Vec<Term>]) -> Vec<String> {
        ws.iter().map(|w| w.iter().map(|&t| g.term_name(t)).collect()).collect()
    }

    #[test]
    fn membership() {
        let g2 = fixtures::anbn();
        assert!(member(&g2, &word(&g2, "aabb")));
        assert!(!member(&g2, &word(&g2, "aab")));
        assert!(member(&g2, &[]));
        let g1 = fixtures::arith();
        assert!(member(&g1, &word(&g1, "i*i+(i+i)")));
        assert!(!member(&g1, &word(&g1, "i+")));
        let g3 = fixtures::ab_cd();
        assert!(!member(&g3, &word(&g3, "ad")));
        assert!(member_tokens(&g3, &["c", "d"]));
        assert!(!member_tokens(&g3, &["c", "x"]));
    }

    #[test]
    fn witness_trees() {
        let g1 = fixtures::arith();
        let t = parse(&g1, &word(&g1, "i*i+(i+i)")).unwrap();
        assert_eq!(
            render_tree(&t),
            r#"(E "i" (P "*" (T "i") (L "+") (E "(" (E "i" (P "+" (E "i"))) (R ")"))))"#
        );
        let g2 = fixtures::anbn();
        assert_eq!(render_tree(&parse(&g2, &[]).unwrap()), "(S)");
        let g3 = fixtures::ab_cd();
        assert!(parse(&g3, &word(&g3, "ad")).is_none());
    }

    #[test]
    fn enumeration() {
        let s = Sweep::default();
        let g2 = fixtures::anbn();
        assert_eq!(names(&g2, &enumerate_language(&g2, 6, &s).unwrap()), ["", "ab", "aabb", "aaabbb"]);
        let g3 = fixtures::ab_cd();
        assert_eq!(names(&g3, &enumerate_language(&g3, 2, &s).unwrap()), ["ab", "cd"]);
        let g1 = fixtures::arith();
        let mut got = names(&g1, &enumerate_language(&g1, 3, &s).unwrap());
        got.sort();
        assert_eq!(got, ["(i)", "i", "i*i", "i+i"]);
    }
}
