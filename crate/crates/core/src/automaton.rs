//! One-counter automata built from LID and GNF grammars, their finite-state
//! relaxations, and the automaton text format.
//!
//! A transition `s t c -> r a` reads terminal `t` in state `s` when the
//! counter test `c` (`0` or `+`) holds, moves to `r` and applies `a`
//! (`+1`, `-1` or `0`) to the counter.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::grammar::{nullables, require_kind, Grammar, GrammarKind, RSets, Rhs, Term, GNF_FINAL_STATE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AutomatonKind {
    OneCounter,
    Finite,
}

impl fmt::Display for AutomatonKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AutomatonKind::OneCounter => "oca",
            AutomatonKind::Finite => "nfa",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateId(pub u32);

impl StateId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Counter test of a transition. Finite automata use `Any`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Guard {
    Zero,
    Plus,
    Any,
}

impl Guard {
    pub fn admits(self, counter: u32) -> bool {
        match self {
            Guard::Zero => counter == 0,
            Guard::Plus => counter > 0,
            Guard::Any => true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Action {
    Inc,
    Dec,
    Keep,
}

impl Action {
    pub fn apply(self, counter: u32) -> u32 {
        match self {
            Action::Inc => counter + 1,
            Action::Dec => counter - 1,
            Action::Keep => counter,
        }
    }
}

/// Which construction rule produced a transition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    Unit,
    BranchOpen,
    BranchClose,
    GnfOpen,
    GnfSibling,
    GnfClose,
    GnfFinal,
}

impl Role {
    pub const ALL: [Role; 7] = [
        Role::Unit,
        Role::BranchOpen,
        Role::BranchClose,
        Role::GnfOpen,
        Role::GnfSibling,
        Role::GnfClose,
        Role::GnfFinal,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Role::Unit => "unit",
            Role::BranchOpen => "branch-open",
            Role::BranchClose => "branch-close",
            Role::GnfOpen => "gnf-open",
            Role::GnfSibling => "gnf-sibling",
            Role::GnfClose => "gnf-close",
            Role::GnfFinal => "gnf-final",
        }
    }
}

impl FromStr for Role {
    type Err = ();

    fn from_str(s: &str) -> std::result::Result<Role, ()> {
        Role::ALL.into_iter().find(|r| r.as_str() == s).ok_or(())
    }
}

/// Production index and rule that generated a transition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Origin {
    pub production: usize,
    pub role: Role,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Transition {
    pub id: usize,
    pub src: StateId,
    pub terminal: Term,
    pub guard: Guard,
    pub dst: StateId,
    pub action: Action,
    pub marked: bool,
    pub origin: Option<Origin>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Automaton {
    kind: AutomatonKind,
    states: Vec<String>,
    alphabet: Vec<String>,
    start: StateId,
    finals: BTreeSet<StateId>,
    transitions: Vec<Transition>,
}

impl Automaton {
    /// Checks the structural invariants and renumbers transition ids densely.
    pub fn new(
        kind: AutomatonKind,
        states: Vec<String>,
        alphabet: Vec<String>,
        start: StateId,
        finals: BTreeSet<StateId>,
        mut transitions: Vec<Transition>,
    ) -> Result<Automaton> {
        let invalid = |m: String| Err(Error::InvalidAutomaton(m));
        let n = states.len();
        if start.index() >= n {
            return invalid("start state out of range".into());
        }
        if finals.iter().any(|f| f.index() >= n) {
            return invalid("final state out of range".into());
        }
        for (id, t) in transitions.iter_mut().enumerate() {
            t.id = id;
            if t.src.index() >= n || t.dst.index() >= n {
                return invalid(format!("transition {id} has an undeclared endpoint"));
            }
            if t.terminal.index() >= alphabet.len() {
                return invalid(format!("transition {id} reads an undeclared terminal"));
            }
            match kind {
                AutomatonKind::OneCounter => {
                    if t.guard == Guard::Any {
                        return invalid(format!("transition {id} lacks a counter test"));
                    }
                    if t.guard == Guard::Zero && t.action == Action::Dec {
                        return invalid(format!("transition {id} decrements a zero counter"));
                    }
                }
                AutomatonKind::Finite => {
                    if t.guard != Guard::Any || t.action != Action::Keep || t.marked {
                        return invalid(format!("transition {id} carries counter data in a finite automaton"));
                    }
                }
            }
            if let Some(o) = t.origin {
                if t.marked != (o.role == Role::GnfSibling) {
                    return invalid(format!("transition {id}: only sibling transitions are marked"));
                }
            }
        }
        Ok(Automaton {
            kind,
            states,
            alphabet,
            start,
            finals,
            transitions,
        })
    }

    pub fn kind(&self) -> AutomatonKind {
        self.kind
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn start(&self) -> StateId {
        self.start
    }

    pub fn finals(&self) -> &BTreeSet<StateId> {
        &self.finals
    }

    pub fn is_final(&self, s: StateId) -> bool {
        self.finals.contains(&s)
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn transition(&self, id: usize) -> &Transition {
        &self.transitions[id]
    }

    pub fn state_name(&self, s: StateId) -> &str {
        &self.states[s.index()]
    }

    pub fn state(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|s| s == name).map(|i| StateId(i as u32))
    }

    pub fn terminal_name(&self, t: Term) -> &str {
        &self.alphabet[t.index()]
    }

    pub fn terminal(&self, name: &str) -> Option<Term> {
        self.alphabet.iter().position(|s| s == name).map(|i| Term(i as u32))
    }

    /// Maps input tokens onto the alphabet; `None` if any token is unknown.
    pub fn encode<S: AsRef<str>>(&self, input: &[S]) -> Option<Vec<Term>> {
        input.iter().map(|s| self.terminal(s.as_ref())).collect()
    }

    /// Transition line in the text format, without a trailing newline.
    pub fn transition_line(&self, t: &Transition) -> String {
        let mut out = format!("{} {}", self.state_name(t.src), self.terminal_name(t.terminal));
        if self.kind == AutomatonKind::OneCounter {
            out.push_str(match t.guard {
                Guard::Zero => " 0",
                _ => " +",
            });
        }
        out.push_str(" -> ");
        out.push_str(self.state_name(t.dst));
        if self.kind == AutomatonKind::OneCounter {
            out.push_str(match t.action {
                Action::Inc => " +1",
                Action::Dec => " -1",
                Action::Keep => " 0",
            });
        }
        if t.marked {
            out.push_str(" marked");
        }
        if let Some(o) = t.origin {
            let _ = write!(out, " # origin p{}:{}", o.production, o.role.as_str());
        }
        out
    }

    /// `(src, terminal, guard, dst, action)` as names, handy for comparisons.
    pub fn tuple(&self, t: &Transition) -> (String, String, Guard, String, Action) {
        (
            self.state_name(t.src).to_string(),
            self.terminal_name(t.terminal).to_string(),
            t.guard,
            self.state_name(t.dst).to_string(),
            t.action,
        )
    }
}

impl fmt::Display for Automaton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize_automaton(self))
    }
}

impl FromStr for Automaton {
    type Err = Error;

    fn from_str(s: &str) -> Result<Automaton> {
        parse_automaton(s)
    }
}

#[derive(Default)]
struct Builder {
    transitions: Vec<Transition>,
    seen: HashSet<Transition>,
}

impl Builder {
    #[allow(clippy::too_many_arguments)]
    fn push(
        &mut self,
        src: StateId,
        terminal: Term,
        guard: Guard,
        dst: StateId,
        action: Action,
        production: usize,
        role: Role,
    ) {
        let t = Transition {
            id: 0,
            src,
            terminal,
            guard,
            dst,
            action,
            marked: role == Role::GnfSibling,
            origin: Some(Origin { production, role }),
        };
        if self.seen.insert(t.clone()) {
            self.transitions.push(t);
        }
    }

    fn both_guards(&mut self, src: StateId, terminal: Term, dst: StateId, action: Action, production: usize, role: Role) {
        self.push(src, terminal, Guard::Zero, dst, action, production, role);
        self.push(src, terminal, Guard::Plus, dst, action, production, role);
    }

    fn finish(mut self) -> Vec<Transition> {
        // Stable: generation order breaks ties within (production, role, guard).
        self.transitions.sort_by_key(|t| (t.origin, t.guard));
        self.transitions
    }
}

fn state_of(nt: crate::grammar::Nt) -> StateId {
    StateId(nt.0)
}

/// One state per nonterminal. Unit productions read their terminal without
/// touching the counter, branch productions open with `+1`, and every
/// nullable member of R(B) closes with `-1`.
pub fn build_lid_oca(g: &Grammar) -> Result<Automaton> {
    require_kind(g, GrammarKind::Lid)?;
    let rs = RSets::compute(g);
    let nullable = nullables(g)?;
    let mut b = Builder::default();
    for (idx, p) in g.productions().iter().enumerate() {
        let src = state_of(p.lhs);
        match p.rhs {
            Rhs::Unit { term, next } => b.both_guards(src, term, state_of(next), Action::Keep, idx, Role::Unit),
            Rhs::Branch {
                open,
                inner,
                close,
                next,
            } => {
                b.both_guards(src, open, state_of(inner), Action::Inc, idx, Role::BranchOpen);
                for d in rs.of(inner).iter().filter(|d| nullable.contains(d)) {
                    b.push(state_of(*d), close, Guard::Plus, state_of(next), Action::Dec, idx, Role::BranchClose);
                }
            }
            Rhs::Epsilon => {}
            Rhs::Gnf { .. } => unreachable!("kind checked"),
        }
    }
    let finals = rs
        .of(g.start())
        .iter()
        .filter(|e| nullable.contains(e))
        .map(|&e| state_of(e))
        .collect();
    Automaton::new(
        AutomatonKind::OneCounter,
        g.nonterminals().to_vec(),
        g.terminals().to_vec(),
        state_of(g.start()),
        finals,
        b.finish(),
    )
}

/// One state per nonterminal plus the single final state `Z`. Sibling
/// transitions (into the middle of a body) are marked.
pub fn build_gnf_oca(g: &Grammar) -> Result<Automaton> {
    require_kind(g, GrammarKind::Gnf)?;
    if g.nonterminal(GNF_FINAL_STATE).is_some() {
        return Err(Error::InvalidGrammar(format!(
            "nonterminal `{GNF_FINAL_STATE}` is reserved for the final state"
        )));
    }
    let rs = RSets::compute(g);
    let mut terminal_rules: Vec<Vec<Term>> = vec![Vec::new(); g.nonterminals().len()];
    for p in g.productions() {
        if let Rhs::Gnf { lead, body } = &p.rhs {
            if body.is_empty() {
                terminal_rules[p.lhs.index()].push(*lead);
            }
        }
    }
    let z = StateId(g.nonterminals().len() as u32);
    let mut b = Builder::default();
    for (idx, p) in g.productions().iter().enumerate() {
        let Rhs::Gnf { lead, body } = &p.rhs else {
            unreachable!("kind checked")
        };
        let src = state_of(p.lhs);
        let k = body.len();
        match k {
            0 => {
                if rs.contains(g.start(), p.lhs) {
                    b.push(src, *lead, Guard::Zero, z, Action::Keep, idx, Role::GnfFinal);
                }
            }
            1 => b.both_guards(src, *lead, state_of(body[0]), Action::Keep, idx, Role::Unit),
            _ => {
                b.both_guards(src, *lead, state_of(body[0]), Action::Inc, idx, Role::GnfOpen);
                // Into B_n for n = 2..k-1, from the end of B_{n-1}.
                for n in 1..k - 1 {
                    for &d in rs.of(body[n - 1]) {
                        for &t in &terminal_rules[d.index()] {
                            b.push(state_of(d), t, Guard::Plus, state_of(body[n]), Action::Keep, idx, Role::GnfSibling);
                        }
                    }
                }
                for &d in rs.of(body[k - 2]) {
                    for &t in &terminal_rules[d.index()] {
                        b.push(state_of(d), t, Guard::Plus, state_of(body[k - 1]), Action::Dec, idx, Role::GnfClose);
                    }
                }
            }
        }
    }
    let mut states = g.nonterminals().to_vec();
    states.push(GNF_FINAL_STATE.to_string());
    Automaton::new(
        AutomatonKind::OneCounter,
        states,
        g.terminals().to_vec(),
        state_of(g.start()),
        BTreeSet::from([z]),
        b.finish(),
    )
}

/// Drops counter tests and actions; duplicate edges collapse.
pub fn strip_to_nfa(a: &Automaton) -> Result<Automaton> {
    if a.kind != AutomatonKind::OneCounter {
        return Err(Error::WrongAutomatonKind { expected: "one-counter" });
    }
    let mut seen = HashSet::new();
    let transitions = a
        .transitions
        .iter()
        .filter(|t| seen.insert((t.src, t.terminal, t.dst)))
        .map(|t| Transition {
            id: 0,
            src: t.src,
            terminal: t.terminal,
            guard: Guard::Any,
            dst: t.dst,
            action: Action::Keep,
            marked: false,
            origin: None,
        })
        .collect();
    Automaton::new(
        AutomatonKind::Finite,
        a.states.clone(),
        a.alphabet.clone(),
        a.start,
        a.finals.clone(),
        transitions,
    )
}

pub fn serialize_automaton(a: &Automaton) -> String {
    let mut out = String::new();
    let names = |ids: &mut dyn Iterator<Item = &str>| {
        let mut s = String::new();
        for n in ids {
            s.push(' ');
            s.push_str(n);
        }
        s
    };
    let _ = writeln!(out, "kind: {}", a.kind);
    let _ = writeln!(out, "start: {}", a.state_name(a.start));
    let _ = writeln!(out, "finals:{}", names(&mut a.finals.iter().map(|&f| a.state_name(f))));
    let _ = writeln!(out, "states:{}", names(&mut a.states.iter().map(String::as_str)));
    let _ = writeln!(out, "alphabet:{}", names(&mut a.alphabet.iter().map(String::as_str)));
    for t in &a.transitions {
        out.push_str(&a.transition_line(t));
        out.push('\n');
    }
    out
}

fn syntax(line: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column: 1,
        message: message.into(),
    }
}

fn parse_origin(line: usize, comment: &str) -> Result<Option<Origin>> {
    let Some(spec) = comment.trim().strip_prefix("origin") else {
        return Ok(None);
    };
    let bad = || syntax(line, format!("malformed origin `{}`", comment.trim()));
    let (prod, role) = spec.trim().split_once(':').ok_or_else(bad)?;
    let production = prod.strip_prefix('p').and_then(|p| p.parse().ok()).ok_or_else(bad)?;
    let role = role.parse().map_err(|_| bad())?;
    Ok(Some(Origin { production, role }))
}

struct RawTransition<'a> {
    line: usize,
    src: &'a str,
    terminal: &'a str,
    guard: Guard,
    dst: &'a str,
    action: Action,
    marked: bool,
    origin: Option<Origin>,
}

/// Parses the automaton text format. `states:` and `alphabet:` are optional;
/// when absent they are inferred in order of first mention.
pub fn parse_automaton(text: &str) -> Result<Automaton> {
    let mut kind = None;
    let mut start = None;
    let mut finals: Option<Vec<&str>> = None;
    let mut states: Option<Vec<&str>> = None;
    let mut alphabet: Option<Vec<&str>> = None;
    let mut raw = Vec::new();

    for (i, full) in text.lines().enumerate() {
        let line = i + 1;
        let (code, comment) = full.split_once('#').unwrap_or((full, ""));
        let toks: Vec<&str> = code.split_whitespace().collect();
        let Some(&first) = toks.first() else { continue };
        if let Some(key) = first.strip_suffix(':') {
            let values = toks[1..].to_vec();
            let slot = match key {
                "kind" => {
                    kind = Some(match values.as_slice() {
                        ["oca"] => AutomatonKind::OneCounter,
                        ["nfa"] => AutomatonKind::Finite,
                        _ => return Err(syntax(line, "expected `kind: oca|nfa`")),
                    });
                    continue;
                }
                "start" => {
                    let [s] = values.as_slice() else {
                        return Err(syntax(line, "expected `start: <state>`"));
                    };
                    start = Some(*s);
                    continue;
                }
                "finals" => &mut finals,
                "states" => &mut states,
                "alphabet" => &mut alphabet,
                other => return Err(syntax(line, format!("unknown declaration `{other}:`"))),
            };
            if slot.replace(values).is_some() {
                return Err(syntax(line, format!("duplicate `{key}:` declaration")));
            }
            continue;
        }
        let kind = kind.ok_or_else(|| syntax(line, "`kind:` must precede transitions"))?;
        let origin = parse_origin(line, comment)?;
        let (mut marked, mut body) = (false, toks.as_slice());
        if body.last() == Some(&"marked") {
            marked = true;
            body = &body[..body.len() - 1];
        }
        let t = match (kind, body) {
            (AutomatonKind::OneCounter, [src, terminal, guard, "->", dst, action]) => RawTransition {
                line,
                src,
                terminal,
                guard: match *guard {
                    "0" => Guard::Zero,
                    "+" => Guard::Plus,
                    other => return Err(syntax(line, format!("unknown counter test `{other}`"))),
                },
                dst,
                action: match *action {
                    "+1" => Action::Inc,
                    "-1" => Action::Dec,
                    "0" => Action::Keep,
                    other => return Err(syntax(line, format!("unknown counter action `{other}`"))),
                },
                marked,
                origin,
            },
            (AutomatonKind::Finite, [src, terminal, "->", dst]) => RawTransition {
                line,
                src,
                terminal,
                guard: Guard::Any,
                dst,
                action: Action::Keep,
                marked,
                origin,
            },
            _ => return Err(syntax(line, format!("malformed {kind} transition"))),
        };
        if t.guard == Guard::Zero && t.action == Action::Dec {
            return Err(syntax(line, "a zero counter cannot be decremented"));
        }
        raw.push(t);
    }

    let kind = kind.ok_or(Error::MissingDeclaration("kind"))?;
    let start = start.ok_or(Error::MissingDeclaration("start"))?;
    let finals = finals.ok_or(Error::MissingDeclaration("finals"))?;

    let explicit_states = states.is_some();
    let mut states: Vec<String> = states.unwrap_or_default().into_iter().map(String::from).collect();
    let explicit_alphabet = alphabet.is_some();
    let mut alphabet: Vec<String> = alphabet.unwrap_or_default().into_iter().map(String::from).collect();

    let mut state_id = |name: &str, line: usize| -> Result<StateId> {
        if let Some(i) = states.iter().position(|s| s == name) {
            return Ok(StateId(i as u32));
        }
        if explicit_states {
            return Err(syntax(line, format!("undeclared state `{name}`")));
        }
        states.push(name.to_string());
        Ok(StateId(states.len() as u32 - 1))
    };
    let start_id = state_id(start, 0)?;
    let final_ids = finals
        .iter()
        .map(|f| state_id(f, 0))
        .collect::<Result<BTreeSet<_>>>()?;
    let mut transitions = Vec::with_capacity(raw.len());
    for t in &raw {
        let src = state_id(t.src, t.line)?;
        let dst = state_id(t.dst, t.line)?;
        let terminal = match alphabet.iter().position(|a| a == t.terminal) {
            Some(i) => Term(i as u32),
            None if explicit_alphabet => {
                return Err(syntax(t.line, format!("undeclared terminal `{}`", t.terminal)));
            }
            None => {
                alphabet.push(t.terminal.to_string());
                Term(alphabet.len() as u32 - 1)
            }
        };
        transitions.push(Transition {
            id: 0,
            src,
            terminal,
            guard: t.guard,
            dst,
            action: t.action,
            marked: t.marked,
            origin: t.origin,
        });
    }
    Automaton::new(kind, states, alphabet, start_id, final_ids, transitions)
}
