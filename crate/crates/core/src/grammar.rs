//! Grammar model for lax input-driven (LID) and Greibach-normal-form (GNF)
//! grammars, plus the text format used to read and write them.
//!
//! ```text
//! kind: lid
//! start: S
//! terminals: a b
//! S -> a S b T
//! S -> eps
//! T -> eps
//! ```
//!
//! Nonterminals are inferred from left-hand sides, in order of first
//! appearance. Right-hand-side tokens are classified against the
//! `terminals:` list; anything else must be a declared nonterminal.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Reserved token for the empty right-hand side.
pub const EPSILON_TOKEN: &str = "eps";

/// Final state name reserved by the GNF construction.
pub const GNF_FINAL_STATE: &str = "Z";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GrammarKind {
    Lid,
    Gnf,
}

impl fmt::Display for GrammarKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GrammarKind::Lid => "lid",
            GrammarKind::Gnf => "gnf",
        })
    }
}

impl FromStr for GrammarKind {
    type Err = ();

    fn from_str(s: &str) -> std::result::Result<Self, ()> {
        match s {
            "lid" => Ok(GrammarKind::Lid),
            "gnf" => Ok(GrammarKind::Gnf),
            _ => Err(()),
        }
    }
}

/// Index of a nonterminal within its grammar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Nt(pub u32);

/// Index of a terminal within its grammar (and within automata built from it).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Term(pub u32);

impl Nt {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl Term {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Symbol {
    Terminal(Term),
    Nonterminal(Nt),
}

/// Right-hand side of a production.
///
/// LID grammars use `Unit`, `Branch` and `Epsilon`; GNF grammars use `Gnf` only.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Rhs {
    /// `A -> t B`
    Unit { term: Term, next: Nt },
    /// `A -> u B v C`
    Branch {
        open: Term,
        inner: Nt,
        close: Term,
        next: Nt,
    },
    /// `A -> eps`
    Epsilon,
    /// `A -> b B1 ... Bk`, k >= 0
    Gnf { lead: Term, body: Vec<Nt> },
}

impl Rhs {
    /// The nonterminal a sentential form ends with after applying this
    /// right-hand side, if any.
    pub fn last(&self) -> Option<Nt> {
        match self {
            Rhs::Unit { next, .. } | Rhs::Branch { next, .. } => Some(*next),
            Rhs::Epsilon => None,
            Rhs::Gnf { body, .. } => body.last().copied(),
        }
    }

    pub fn nonterminals(&self) -> Vec<Nt> {
        match self {
            Rhs::Unit { next, .. } => vec![*next],
            Rhs::Branch { inner, next, .. } => vec![*inner, *next],
            Rhs::Epsilon => Vec::new(),
            Rhs::Gnf { body, .. } => body.clone(),
        }
    }

    pub fn fits(&self, kind: GrammarKind) -> bool {
        matches!(
            (kind, self),
            (GrammarKind::Lid, Rhs::Unit { .. } | Rhs::Branch { .. } | Rhs::Epsilon)
                | (GrammarKind::Gnf, Rhs::Gnf { .. })
        )
    }

    pub fn is_branch(&self) -> bool {
        matches!(self, Rhs::Branch { .. })
    }

    /// Symbols of the right-hand side in order.
    pub fn symbols(&self) -> Vec<Symbol> {
        use Symbol::{Nonterminal as N, Terminal as T};
        match self {
            Rhs::Unit { term, next } => vec![T(*term), N(*next)],
            Rhs::Branch {
                open,
                inner,
                close,
                next,
            } => vec![T(*open), N(*inner), T(*close), N(*next)],
            Rhs::Epsilon => Vec::new(),
            Rhs::Gnf { lead, body } => std::iter::once(T(*lead))
                .chain(body.iter().map(|&n| N(n)))
                .collect(),
        }
    }

    fn map_nonterminals(&self, mut f: impl FnMut(Nt) -> Nt) -> Rhs {
        match self {
            Rhs::Unit { term, next } => Rhs::Unit {
                term: *term,
                next: f(*next),
            },
            Rhs::Branch {
                open,
                inner,
                close,
                next,
            } => Rhs::Branch {
                open: *open,
                inner: f(*inner),
                close: *close,
                next: f(*next),
            },
            Rhs::Epsilon => Rhs::Epsilon,
            Rhs::Gnf { lead, body } => Rhs::Gnf {
                lead: *lead,
                body: body.iter().map(|&n| f(n)).collect(),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Production {
    pub lhs: Nt,
    pub rhs: Rhs,
}

impl Production {
    /// Copy of this production with every nonterminal passed through `f`.
    pub fn map_nonterminals(&self, mut f: impl FnMut(Nt) -> Nt) -> Production {
        Production {
            lhs: f(self.lhs),
            rhs: self.rhs.map_nonterminals(f),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub production: Option<usize>,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let level = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        match self.production {
            Some(idx) => write!(f, "{level}: production {idx}: {}", self.message),
            None => write!(f, "{level}: {}", self.message),
        }
    }
}

/// An immutable LID or GNF grammar.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grammar {
    kind: GrammarKind,
    terminals: Vec<String>,
    nonterminals: Vec<String>,
    start: Nt,
    productions: Vec<Production>,
}

impl Grammar {
    /// Assembles a grammar from raw parts, checking that every index is in
    /// range and that names are unique. Form conformance is left to
    /// [`validate`].
    pub fn from_parts(
        kind: GrammarKind,
        terminals: Vec<String>,
        nonterminals: Vec<String>,
        start: Nt,
        productions: Vec<Production>,
    ) -> Result<Grammar> {
        let mut seen = HashSet::new();
        for name in &nonterminals {
            check_nonterminal_name(name).map_err(Error::InvalidGrammar)?;
        }
        for name in terminals.iter().chain(&nonterminals) {
            check_name(name).map_err(Error::InvalidGrammar)?;
            if !seen.insert(name.as_str()) {
                return Err(Error::InvalidGrammar(format!("duplicate symbol `{name}`")));
            }
        }
        if start.index() >= nonterminals.len() {
            return Err(Error::InvalidGrammar("start symbol out of range".into()));
        }
        let grammar = Grammar {
            kind,
            terminals,
            nonterminals,
            start,
            productions,
        };
        for (idx, p) in grammar.productions.iter().enumerate() {
            let in_range = std::iter::once(Symbol::Nonterminal(p.lhs))
                .chain(p.rhs.symbols())
                .all(|s| match s {
                    Symbol::Terminal(t) => t.index() < grammar.terminals.len(),
                    Symbol::Nonterminal(n) => n.index() < grammar.nonterminals.len(),
                });
            if !in_range {
                return Err(Error::InvalidGrammar(format!(
                    "production {idx} references an undeclared symbol"
                )));
            }
        }
        Ok(grammar)
    }

    pub fn kind(&self) -> GrammarKind {
        self.kind
    }

    pub fn start(&self) -> Nt {
        self.start
    }

    pub fn terminals(&self) -> &[String] {
        &self.terminals
    }

    pub fn nonterminals(&self) -> &[String] {
        &self.nonterminals
    }

    pub fn productions(&self) -> &[Production] {
        &self.productions
    }

    pub fn nt_name(&self, nt: Nt) -> &str {
        &self.nonterminals[nt.index()]
    }

    pub fn term_name(&self, t: Term) -> &str {
        &self.terminals[t.index()]
    }

    pub fn nonterminal(&self, name: &str) -> Option<Nt> {
        self.nonterminals
            .iter()
            .position(|n| n == name)
            .map(|i| Nt(i as u32))
    }

    pub fn terminal(&self, name: &str) -> Option<Term> {
        self.terminals
            .iter()
            .position(|n| n == name)
            .map(|i| Term(i as u32))
    }

    pub fn nt_ids(&self) -> impl Iterator<Item = Nt> + '_ {
        (0..self.nonterminals.len() as u32).map(Nt)
    }

    /// Productions with a given left-hand side, with their indices.
    pub fn productions_of(&self, nt: Nt) -> impl Iterator<Item = (usize, &Production)> + '_ {
        self.productions
            .iter()
            .enumerate()
            .filter(move |(_, p)| p.lhs == nt)
    }

    /// Same productions under a different declared kind.
    pub fn with_kind(&self, kind: GrammarKind) -> Grammar {
        Grammar {
            kind,
            ..self.clone()
        }
    }

    pub fn branch_productions(&self) -> impl Iterator<Item = (usize, &Production)> + '_ {
        self.productions
            .iter()
            .enumerate()
            .filter(|(_, p)| p.rhs.is_branch())
    }

    /// Human-readable `A -> a B` rendering of one production.
    pub fn production_text(&self, idx: usize) -> String {
        let p = &self.productions[idx];
        let mut out = format!("{} ->", self.nt_name(p.lhs));
        if p.rhs == Rhs::Epsilon {
            out.push(' ');
            out.push_str(EPSILON_TOKEN);
        }
        for sym in p.rhs.symbols() {
            out.push(' ');
            out.push_str(match sym {
                Symbol::Terminal(t) => self.term_name(t),
                Symbol::Nonterminal(n) => self.nt_name(n),
            });
        }
        out
    }

    pub(crate) fn add_nonterminal(&mut self, name: String) -> Nt {
        debug_assert!(self.nonterminal(&name).is_none() && self.terminal(&name).is_none());
        self.nonterminals.push(name);
        Nt(self.nonterminals.len() as u32 - 1)
    }

    pub(crate) fn push_production(&mut self, p: Production) -> usize {
        self.productions.push(p);
        self.productions.len() - 1
    }

    pub(crate) fn set_rhs(&mut self, idx: usize, rhs: Rhs) {
        self.productions[idx].rhs = rhs;
    }

    /// A name derived from `base` that is not yet used by any symbol.
    pub(crate) fn fresh_name(&self, base: &str, counters: &mut HashMap<String, u32>) -> String {
        let counter = counters.entry(base.to_string()).or_insert(0);
        loop {
            *counter += 1;
            let candidate = format!("{base}${counter}");
            if self.nonterminal(&candidate).is_none() && self.terminal(&candidate).is_none() {
                return candidate;
            }
        }
    }
}

impl fmt::Display for Grammar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize_grammar(self))
    }
}

impl FromStr for Grammar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Grammar> {
        parse_grammar(s)
    }
}

fn check_name(name: &str) -> std::result::Result<(), String> {
    if name.is_empty() {
        return Err("empty symbol name".into());
    }
    if name == EPSILON_TOKEN || name == "->" {
        return Err(format!("`{name}` is reserved"));
    }
    if name.chars().any(|c| c.is_whitespace() || c == '#') {
        return Err(format!("symbol name `{name}` contains whitespace or `#`"));
    }
    Ok(())
}

fn check_nonterminal_name(name: &str) -> std::result::Result<(), String> {
    check_name(name)?;
    if name.contains(['(', ')', '"']) {
        return Err(format!("nonterminal `{name}` contains a parenthesis or quote"));
    }
    Ok(())
}

#[derive(Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokens(line: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push(Token {
                    text: &line[s..i],
                    column: s + 1,
                });
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push(Token {
            text: &line[s..],
            column: s + 1,
        });
    }
    out
}

fn strip_comment(line: &str) -> &str {
    line.split_once('#').map_or(line, |(code, _)| code)
}

struct RawProduction<'a> {
    line: usize,
    lhs: Token<'a>,
    rhs: Vec<Token<'a>>,
}

/// Parses grammar text, dropping warnings. See [`parse_grammar_with_diagnostics`].
pub fn parse_grammar(text: &str) -> Result<Grammar> {
    parse_grammar_with_diagnostics(text).map(|(g, _)| g)
}

/// Parses grammar text. Duplicate productions are collapsed into their
/// first occurrence and reported as warnings.
pub fn parse_grammar_with_diagnostics(text: &str) -> Result<(Grammar, Vec<Diagnostic>)> {
    let mut kind: Option<GrammarKind> = None;
    let mut start: Option<(usize, Token<'_>)> = None;
    let mut terminals: Option<Vec<String>> = None;
    let mut raw = Vec::new();

    for (lineno, full) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let line = strip_comment(full);
        let toks = tokens(line);
        let Some(&first) = toks.first() else { continue };
        let syntax = |column: usize, message: String| Error::Syntax {
            line: line_no,
            column,
            message,
        };

        if let Some((key, inline)) = first
            .text
            .split_once(':')
            .filter(|(k, _)| matches!(*k, "kind" | "start" | "terminals"))
        {
            let mut values: Vec<Token<'_>> = Vec::new();
            if !inline.is_empty() {
                values.push(Token {
                    text: inline,
                    column: first.column + key.len() + 1,
                });
            }
            values.extend(toks.into_iter().skip(1));
            match key {
                "kind" => {
                    if kind.is_some() {
                        return Err(syntax(first.column, "duplicate `kind:` declaration".into()));
                    }
                    let [value] = values.as_slice() else {
                        return Err(syntax(first.column, "expected `kind: lid|gnf`".into()));
                    };
                    kind = Some(value.text.parse().map_err(|_| {
                        syntax(value.column, format!("unknown grammar kind `{}`", value.text))
                    })?);
                }
                "start" => {
                    if start.is_some() {
                        return Err(syntax(first.column, "duplicate `start:` declaration".into()));
                    }
                    let mut values = values.into_iter();
                    match (values.next(), values.next()) {
                        (Some(value), None) => start = Some((line_no, value)),
                        _ => return Err(syntax(first.column, "expected `start: <nonterminal>`".into())),
                    }
                }
                "terminals" => {
                    if terminals.is_some() {
                        return Err(syntax(first.column, "duplicate `terminals:` declaration".into()));
                    }
                    let mut list: Vec<String> = Vec::new();
                    for v in values {
                        check_name(v.text).map_err(|m| syntax(v.column, m))?;
                        if list.iter().any(|t| t == v.text) {
                            return Err(syntax(v.column, format!("duplicate terminal `{}`", v.text)));
                        }
                        list.push(v.text.to_string());
                    }
                    terminals = Some(list);
                }
                _ => unreachable!("filtered above"),
            }
            continue;
        }

        let mut toks = toks.into_iter();
        let lhs = toks.next().expect("non-empty line");
        match toks.next() {
            Some(arrow) if arrow.text == "->" => {}
            Some(other) => return Err(syntax(other.column, format!("expected `->`, found `{}`", other.text))),
            None => return Err(syntax(lhs.column + lhs.text.len(), "expected `->`".into())),
        }
        check_nonterminal_name(lhs.text).map_err(|m| syntax(lhs.column, m))?;
        raw.push(RawProduction {
            line: line_no,
            lhs,
            rhs: toks.collect(),
        });
    }

    let kind = kind.ok_or(Error::MissingDeclaration("kind"))?;
    let (_, start_tok) = start.ok_or(Error::MissingDeclaration("start"))?;
    let terminals = terminals.ok_or(Error::MissingDeclaration("terminals"))?;

    let mut nonterminals: Vec<String> = Vec::new();
    for rp in &raw {
        if terminals.iter().any(|t| t == rp.lhs.text) {
            return Err(Error::Syntax {
                line: rp.line,
                column: rp.lhs.column,
                message: format!("terminal `{}` on the left-hand side", rp.lhs.text),
            });
        }
        if !nonterminals.iter().any(|n| n == rp.lhs.text) {
            nonterminals.push(rp.lhs.text.to_string());
        }
    }
    let nt_of = |name: &str| nonterminals.iter().position(|n| n == name).map(|i| Nt(i as u32));
    let term_of = |name: &str| terminals.iter().position(|n| n == name).map(|i| Term(i as u32));

    let start = nt_of(start_tok.text).ok_or_else(|| Error::UnknownStart(start_tok.text.to_string()))?;

    let mut productions: Vec<Production> = Vec::new();
    let mut diagnostics = Vec::new();
    for rp in &raw {
        let mut syms = Vec::with_capacity(rp.rhs.len());
        let mut has_eps = false;
        for tok in &rp.rhs {
            if tok.text == EPSILON_TOKEN {
                has_eps = true;
                continue;
            }
            let sym = term_of(tok.text)
                .map(Symbol::Terminal)
                .or_else(|| nt_of(tok.text).map(Symbol::Nonterminal))
                .ok_or_else(|| Error::UndeclaredSymbol {
                    line: rp.line,
                    column: tok.column,
                    name: tok.text.to_string(),
                })?;
            syms.push(sym);
        }
        let mismatch = || Error::FormMismatch {
            line: rp.line,
            kind,
            text: std::iter::once(rp.lhs.text)
                .chain(std::iter::once("->"))
                .chain(rp.rhs.iter().map(|t| t.text))
                .collect::<Vec<_>>()
                .join(" "),
        };
        let rhs = classify(kind, has_eps, &syms).ok_or_else(mismatch)?;
        let prod = Production {
            lhs: nt_of(rp.lhs.text).expect("collected above"),
            rhs,
        };
        if let Some(first) = productions.iter().position(|p| *p == prod) {
            diagnostics.push(Diagnostic {
                severity: Severity::Warning,
                production: Some(first),
                message: format!("duplicate production on line {} collapsed", rp.line),
            });
            continue;
        }
        productions.push(prod);
    }

    let grammar = Grammar::from_parts(kind, terminals, nonterminals, start, productions)?;
    Ok((grammar, diagnostics))
}

fn classify(kind: GrammarKind, has_eps: bool, syms: &[Symbol]) -> Option<Rhs> {
    use Symbol::{Nonterminal as N, Terminal as T};
    match kind {
        GrammarKind::Lid => match (has_eps, syms) {
            (true, []) => Some(Rhs::Epsilon),
            (false, [T(term), N(next)]) => Some(Rhs::Unit {
                term: *term,
                next: *next,
            }),
            (false, [T(open), N(inner), T(close), N(next)]) => Some(Rhs::Branch {
                open: *open,
                inner: *inner,
                close: *close,
                next: *next,
            }),
            _ => None,
        },
        GrammarKind::Gnf => {
            if has_eps {
                return None;
            }
            let (T(lead), rest) = syms.split_first()? else {
                return None;
            };
            let body = rest
                .iter()
                .map(|s| match s {
                    N(n) => Some(*n),
                    T(_) => None,
                })
                .collect::<Option<Vec<_>>>()?;
            Some(Rhs::Gnf { lead: *lead, body })
        }
    }
}

/// Canonical text form; `parse_grammar` of the output gives back an equal grammar.
pub fn serialize_grammar(g: &Grammar) -> String {
    let mut out = String::new();
    out.push_str(&format!("kind: {}\n", g.kind));
    out.push_str(&format!("start: {}\n", g.nt_name(g.start)));
    out.push_str("terminals:");
    for t in &g.terminals {
        out.push(' ');
        out.push_str(t);
    }
    out.push('\n');
    for idx in 0..g.productions.len() {
        out.push_str(&g.production_text(idx));
        out.push('\n');
    }
    out
}

/// Nonterminals that own an epsilon production.
pub fn nullables(g: &Grammar) -> Result<BTreeSet<Nt>> {
    require_kind(g, GrammarKind::Lid)?;
    Ok(g.productions
        .iter()
        .filter(|p| p.rhs == Rhs::Epsilon)
        .map(|p| p.lhs)
        .collect())
}

pub(crate) fn require_kind(g: &Grammar, expected: GrammarKind) -> Result<()> {
    if g.kind == expected {
        Ok(())
    } else {
        Err(Error::WrongGrammarKind {
            expected,
            found: g.kind,
        })
    }
}

/// R-sets for every nonterminal: `A` together with every nonterminal that
/// can end a sentential form derived from `A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RSets {
    sets: Vec<BTreeSet<Nt>>,
}

impl RSets {
    pub fn compute(g: &Grammar) -> RSets {
        let n = g.nonterminals.len();
        let mut last: Vec<BTreeSet<Nt>> = vec![BTreeSet::new(); n];
        for p in &g.productions {
            if let Some(l) = p.rhs.last() {
                last[p.lhs.index()].insert(l);
            }
        }
        let sets = (0..n)
            .map(|a| {
                let mut set = BTreeSet::from([Nt(a as u32)]);
                let mut work = vec![Nt(a as u32)];
                while let Some(b) = work.pop() {
                    for &c in &last[b.index()] {
                        if set.insert(c) {
                            work.push(c);
                        }
                    }
                }
                set
            })
            .collect();
        RSets { sets }
    }

    pub fn of(&self, nt: Nt) -> &BTreeSet<Nt> {
        &self.sets[nt.index()]
    }

    pub fn contains(&self, of: Nt, member: Nt) -> bool {
        self.sets[of.index()].contains(&member)
    }
}

/// R-set of the named nonterminal.
pub fn r_set(g: &Grammar, name: &str) -> Result<BTreeSet<Nt>> {
    let nt = g
        .nonterminal(name)
        .ok_or_else(|| Error::UnknownNonterminal(name.to_string()))?;
    Ok(RSets::compute(g).of(nt).clone())
}

/// Every nonterminal reachable from `roots` through any right-hand-side position.
pub fn reachable_from(g: &Grammar, roots: impl IntoIterator<Item = Nt>) -> BTreeSet<Nt> {
    let mut seen: BTreeSet<Nt> = BTreeSet::new();
    let mut work: Vec<Nt> = roots.into_iter().collect();
    seen.extend(work.iter().copied());
    while let Some(a) = work.pop() {
        for (_, p) in g.productions_of(a) {
            for b in p.rhs.nonterminals() {
                if seen.insert(b) {
                    work.push(b);
                }
            }
        }
    }
    seen
}

/// Nonterminals not reachable from the start symbol. Reported, never removed.
pub fn unreachable_nonterminals(g: &Grammar) -> Vec<Nt> {
    let live = reachable_from(g, [g.start]);
    g.nt_ids().filter(|n| !live.contains(n)).collect()
}

/// Checks form conformance, symbol declarations and the start symbol.
pub fn validate(g: &Grammar) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let declared = |s: Symbol| match s {
        Symbol::Terminal(t) => t.index() < g.terminals.len(),
        Symbol::Nonterminal(n) => n.index() < g.nonterminals.len(),
    };
    for (idx, p) in g.productions.iter().enumerate() {
        if !std::iter::once(Symbol::Nonterminal(p.lhs))
            .chain(p.rhs.symbols())
            .all(declared)
        {
            out.push(Diagnostic {
                severity: Severity::Error,
                production: Some(idx),
                message: "references an undeclared symbol".into(),
            });
            continue;
        }
        if !p.rhs.fits(g.kind) {
            out.push(Diagnostic {
                severity: Severity::Error,
                production: Some(idx),
                message: format!("`{}` is not a {} production", g.production_text(idx), g.kind),
            });
        }
        if g.productions[..idx].contains(p) {
            out.push(Diagnostic {
                severity: Severity::Warning,
                production: Some(idx),
                message: "duplicate production".into(),
            });
        }
    }
    if g.start.index() >= g.nonterminals.len() || g.productions_of(g.start).next().is_none() {
        out.push(Diagnostic {
            severity: Severity::Error,
            production: None,
            message: "start symbol has no productions".into(),
        });
    }
    if g.kind == GrammarKind::Gnf && g.nonterminal(GNF_FINAL_STATE).is_some() {
        out.push(Diagnostic {
            severity: Severity::Error,
            production: None,
            message: format!("nonterminal `{GNF_FINAL_STATE}` is reserved for the GNF final state"),
        });
    }
    out
}
