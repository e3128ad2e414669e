//! Running automata: the configuration table for one-counter automata,
//! acceptance sequences and their replay, subset simulation for finite
//! automata, and bounded sweeps over all short strings.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::automaton::{Action, Automaton, AutomatonKind, Guard, StateId};
use crate::error::{Error, Result};
use crate::grammar::Term;
use crate::sweep::{filter_words, Sweep};

/// Upper bound on sequences returned by [`all_sequences`].
pub const SEQUENCE_CAP: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Config {
    pub state: StateId,
    pub counter: u32,
}

/// Predecessor configuration and the transition that led here.
pub type BackPointer = Option<(Config, usize)>;

#[derive(Debug, Clone)]
pub struct RunTable {
    layers: Vec<BTreeMap<Config, BackPointer>>,
    accepting: Option<Config>,
}

impl RunTable {
    pub fn accepted(&self) -> bool {
        self.accepting.is_some()
    }

    /// The configuration extraction starts from: the first final state in
    /// state order, with counter 0.
    pub fn accepting(&self) -> Option<Config> {
        self.accepting
    }

    /// Length of the input the table was built for.
    pub fn input_len(&self) -> usize {
        self.layers.len() - 1
    }

    pub fn layer(&self, position: usize) -> &BTreeMap<Config, BackPointer> {
        &self.layers[position]
    }

    pub fn stored_configurations(&self) -> usize {
        self.layers.iter().map(BTreeMap::len).sum()
    }

    /// `(n+1)^2 * |states|`.
    pub fn configuration_bound(&self, states: usize) -> usize {
        let n = self.layers.len();
        n * n * states
    }
}

/// Transition ids of an accepting run, in input order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AcceptanceSequence {
    pub transitions: Vec<usize>,
}

impl AcceptanceSequence {
    pub fn len(&self) -> usize {
        self.transitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transitions.is_empty()
    }

    /// Terminals read along the sequence.
    pub fn word(&self, a: &Automaton) -> Vec<Term> {
        self.transitions.iter().map(|&id| a.transition(id).terminal).collect()
    }

    /// One line per transition with the step number and the counter after it.
    pub fn render(&self, a: &Automaton) -> Result<String> {
        let counters = replay(a, self, None)?;
        let mut out = String::new();
        for (i, (&id, c)) in self.transitions.iter().zip(counters).enumerate() {
            let line = a.transition_line(a.transition(id));
            let line = line.split(" #").next().unwrap_or(&line);
            let _ = writeln!(out, "{:>3}  {line}  # counter {c}", i + 1);
        }
        Ok(out)
    }
}

/// Transitions grouped by `(source, terminal)`, built once per automaton and
/// shared by any number of runs.
#[derive(Debug, Clone)]
pub struct Recognizer<'a> {
    automaton: &'a Automaton,
    index: Vec<Vec<usize>>,
}

impl<'a> Recognizer<'a> {
    pub fn new(automaton: &'a Automaton) -> Recognizer<'a> {
        let width = automaton.alphabet().len();
        let mut index = vec![Vec::new(); automaton.states().len() * width];
        for t in automaton.transitions() {
            index[t.src.index() * width + t.terminal.index()].push(t.id);
        }
        Recognizer { automaton, index }
    }

    pub fn automaton(&self) -> &'a Automaton {
        self.automaton
    }

    fn outgoing(&self, state: StateId, terminal: Term) -> &[usize] {
        &self.index[state.index() * self.automaton.alphabet().len() + terminal.index()]
    }

    /// Successors of `c` on `terminal`, in transition-id order.
    fn step(&self, c: Config, terminal: Term) -> impl Iterator<Item = (Config, usize)> + '_ {
        self.outgoing(c.state, terminal).iter().filter_map(move |&id| {
            let t = self.automaton.transition(id);
            t.guard.admits(c.counter).then(|| {
                (
                    Config {
                        state: t.dst,
                        counter: t.action.apply(c.counter),
                    },
                    id,
                )
            })
        })
    }

    fn accepting(&self, c: Config) -> bool {
        c.counter == 0 && self.automaton.is_final(c.state)
    }

    /// Forward configuration table. `None` marks an input symbol outside the
    /// alphabet, which empties every later layer.
    pub fn table(&self, input: &[Option<Term>]) -> Result<RunTable> {
        self.require(AutomatonKind::OneCounter)?;
        let n = input.len();
        let start = Config {
            state: self.automaton.start(),
            counter: 0,
        };
        let mut layers = Vec::with_capacity(n + 1);
        layers.push(BTreeMap::from([(start, None)]));
        for (i, sym) in input.iter().enumerate() {
            let mut next = BTreeMap::new();
            if let Some(t) = *sym {
                // A counter above the remaining length can never return to 0.
                let budget = (n - i - 1) as u32;
                for &c in layers[i].keys() {
                    for (d, id) in self.step(c, t) {
                        if d.counter <= budget {
                            next.entry(d).or_insert(Some((c, id)));
                        }
                    }
                }
            }
            layers.push(next);
        }
        let accepting = layers[n].keys().copied().find(|&c| self.accepting(c));
        Ok(RunTable { layers, accepting })
    }

    /// Acceptance without back-pointers, for sweeps.
    pub fn accepts(&self, input: &[Term]) -> bool {
        match self.automaton.kind() {
            AutomatonKind::OneCounter => self.accepts_oca(input),
            AutomatonKind::Finite => self.accepts_nfa(input),
        }
    }

    fn accepts_oca(&self, input: &[Term]) -> bool {
        let n = input.len();
        let states = self.automaton.states().len();
        let mut seen = vec![false; states * (n + 1)];
        let mut current = vec![Config {
            state: self.automaton.start(),
            counter: 0,
        }];
        let mut next = Vec::new();
        for (i, &t) in input.iter().enumerate() {
            let budget = (n - i - 1) as u32;
            seen.fill(false);
            for &c in &current {
                for (d, _) in self.step(c, t) {
                    let slot = d.counter as usize * states + d.state.index();
                    if d.counter <= budget && !seen[slot] {
                        seen[slot] = true;
                        next.push(d);
                    }
                }
            }
            std::mem::swap(&mut current, &mut next);
            next.clear();
            if current.is_empty() {
                return false;
            }
        }
        current.into_iter().any(|c| self.accepting(c))
    }

    fn accepts_nfa(&self, input: &[Term]) -> bool {
        let states = self.automaton.states().len();
        let mut current = vec![false; states];
        current[self.automaton.start().index()] = true;
        for &t in input {
            let mut next = vec![false; states];
            for s in (0..states).filter(|&s| current[s]) {
                for &id in self.outgoing(StateId(s as u32), t) {
                    next[self.automaton.transition(id).dst.index()] = true;
                }
            }
            current = next;
        }
        self.automaton.finals().iter().any(|f| current[f.index()])
    }

    fn require(&self, kind: AutomatonKind) -> Result<()> {
        if self.automaton.kind() == kind {
            Ok(())
        } else {
            Err(Error::WrongAutomatonKind {
                expected: match kind {
                    AutomatonKind::OneCounter => "one-counter",
                    AutomatonKind::Finite => "finite",
                },
            })
        }
    }
}

pub fn run_oca(a: &Automaton, input: &[Term]) -> Result<RunTable> {
    let input: Vec<Option<Term>> = input.iter().copied().map(Some).collect();
    Recognizer::new(a).table(&input)
}

/// Like [`run_oca`] but on surface tokens; unknown tokens reject.
pub fn run_oca_tokens<S: AsRef<str>>(a: &Automaton, tokens: &[S]) -> Result<RunTable> {
    let input: Vec<Option<Term>> = tokens.iter().map(|s| a.terminal(s.as_ref())).collect();
    Recognizer::new(a).table(&input)
}

/// Follows back-pointers from the accepting configuration.
pub fn extract_sequence(table: &RunTable) -> Option<AcceptanceSequence> {
    let mut c = table.accepting?;
    let mut transitions = Vec::with_capacity(table.input_len());
    for layer in table.layers.iter().rev() {
        match layer[&c] {
            Some((prev, id)) => {
                transitions.push(id);
                c = prev;
            }
            None => break,
        }
    }
    transitions.reverse();
    Some(AcceptanceSequence { transitions })
}

pub fn run_nfa(a: &Automaton, input: &[Term]) -> Result<bool> {
    let r = Recognizer::new(a);
    r.require(AutomatonKind::Finite)?;
    Ok(r.accepts_nfa(input))
}

/// Acceptance for either automaton kind.
pub fn accepts(a: &Automaton, input: &[Term]) -> bool {
    Recognizer::new(a).accepts(input)
}

/// Replays `seq` from `(start, 0)` and returns the counter after each step.
/// With `input`, the terminals read must match it.
pub fn replay(a: &Automaton, seq: &AcceptanceSequence, input: Option<&[Term]>) -> Result<Vec<u32>> {
    let bad = |m: String| Err(Error::MalformedSequence(m));
    if let Some(w) = input {
        if w.len() != seq.len() {
            return bad(format!("{} transitions for {} input symbols", seq.len(), w.len()));
        }
    }
    let mut state = a.start();
    let mut counter = 0u32;
    let mut profile = Vec::with_capacity(seq.len());
    for (i, &id) in seq.transitions.iter().enumerate() {
        let Some(t) = a.transitions().get(id) else {
            return bad(format!("step {}: unknown transition {id}", i + 1));
        };
        if t.src != state {
            return bad(format!("step {}: transition leaves {}, run is in {}", i + 1, a.state_name(t.src), a.state_name(state)));
        }
        if input.is_some_and(|w| w[i] != t.terminal) {
            return bad(format!("step {}: terminal does not match the input", i + 1));
        }
        if !t.guard.admits(counter) {
            return bad(format!("step {}: counter test fails at {counter}", i + 1));
        }
        if t.guard == Guard::Any && t.action != Action::Keep {
            return bad(format!("step {}: finite transition with a counter action", i + 1));
        }
        counter = t.action.apply(counter);
        state = t.dst;
        profile.push(counter);
    }
    if counter != 0 || !a.is_final(state) {
        return bad(format!("run ends in {} with counter {counter}", a.state_name(state)));
    }
    Ok(profile)
}

/// Up to `cap` distinct acceptance sequences in lexicographic id order; the
/// flag reports whether more exist.
pub fn all_sequences(a: &Automaton, input: &[Term], cap: usize) -> Result<(Vec<AcceptanceSequence>, bool)> {
    let r = Recognizer::new(a);
    let table = run_oca(a, input)?;
    let n = input.len();
    // live[i]: configurations at position i from which acceptance is reachable.
    let mut live: Vec<Vec<Config>> = vec![Vec::new(); n + 1];
    live[n] = table.layers[n].keys().copied().filter(|&c| r.accepting(c)).collect();
    for i in (0..n).rev() {
        let (now, later) = live.split_at_mut(i + 1);
        now[i] = table.layers[i]
            .keys()
            .copied()
            .filter(|&c| r.step(c, input[i]).any(|(d, _)| later[0].binary_search(&d).is_ok()))
            .collect();
    }
    let mut out = Vec::new();
    let mut path = Vec::with_capacity(n);
    let start = Config {
        state: a.start(),
        counter: 0,
    };
    let mut truncated = false;
    if live[0].contains(&start) {
        collect(&r, input, &live, 0, start, &mut path, &mut out, cap, &mut truncated);
    }
    Ok((out, truncated))
}

#[allow(clippy::too_many_arguments)]
fn collect(
    r: &Recognizer<'_>,
    input: &[Term],
    live: &[Vec<Config>],
    i: usize,
    c: Config,
    path: &mut Vec<usize>,
    out: &mut Vec<AcceptanceSequence>,
    cap: usize,
    truncated: &mut bool,
) {
    if i == input.len() {
        if out.len() == cap {
            *truncated = true;
        } else {
            out.push(AcceptanceSequence {
                transitions: path.clone(),
            });
        }
        return;
    }
    for (d, id) in r.step(c, input[i]) {
        if *truncated {
            return;
        }
        if live[i + 1].binary_search(&d).is_ok() {
            path.push(id);
            collect(r, input, live, i + 1, d, path, out, cap, truncated);
            path.pop();
        }
    }
}

/// Every string over `alphabet` of length at most `maxlen` accepted by `a`,
/// shortest first, then in lexicographic alphabet order.
pub fn accepted_upto(a: &Automaton, alphabet: &[Term], maxlen: usize, sweep: &Sweep) -> Result<Vec<Vec<Term>>> {
    let r = Recognizer::new(a);
    filter_words(alphabet, maxlen, sweep, |w| r.accepts(w))
}

/// Same result as [`accepted_upto`] over the whole alphabet, found by a
/// depth-first walk that abandons a prefix once no configuration survives.
pub fn accepted_words(a: &Automaton, maxlen: usize, cap: u64) -> Result<Vec<Vec<Term>>> {
    let k = a.alphabet().len();
    let requested = crate::sweep::count_strings(k, maxlen);
    if requested > cap as u128 {
        return Err(Error::CapExceeded { requested, cap });
    }
    let r = Recognizer::new(a);
    let start = vec![Config {
        state: a.start(),
        counter: 0,
    }];
    let mut out = Vec::new();
    let mut word = Vec::with_capacity(maxlen);
    walk(&r, maxlen, &start, &mut word, &mut out);
    out.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)));
    Ok(out)
}

fn walk(r: &Recognizer<'_>, maxlen: usize, configs: &[Config], word: &mut Vec<Term>, out: &mut Vec<Vec<Term>>) {
    if configs.iter().any(|&c| r.accepting(c)) {
        out.push(word.clone());
    }
    if word.len() == maxlen {
        return;
    }
    let budget = (maxlen - word.len() - 1) as u32;
    for t in (0..r.automaton.alphabet().len() as u32).map(Term) {
        let mut next: Vec<Config> = configs
            .iter()
            .flat_map(|&c| r.step(c, t).map(|(d, _)| d))
            .filter(|d| d.counter <= budget)
            .collect();
        if next.is_empty() {
            continue;
        }
        next.sort_unstable();
        next.dedup();
        word.push(t);
        walk(r, maxlen, &next, word, out);
        word.pop();
    }
}

/// Maps surface tokens onto terminal names, one `token terminal` pair per
/// line. Unmapped tokens pass through unchanged.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AliasTable {
    map: BTreeMap<String, String>,
}

impl AliasTable {
    pub fn parse(text: &str) -> Result<AliasTable> {
        let mut map = BTreeMap::new();
        for (i, full) in text.lines().enumerate() {
            let code = full.split('#').next().unwrap_or("");
            let toks: Vec<&str> = code.split_whitespace().collect();
            match toks.as_slice() {
                [] => {}
                [from, to] => {
                    if map.insert(from.to_string(), to.to_string()).is_some() {
                        return Err(Error::Syntax {
                            line: i + 1,
                            column: 1,
                            message: format!("token `{from}` aliased twice"),
                        });
                    }
                }
                _ => {
                    return Err(Error::Syntax {
                        line: i + 1,
                        column: 1,
                        message: "expected `<token> <terminal>`".into(),
                    })
                }
            }
        }
        Ok(AliasTable { map })
    }

    pub fn apply<'a>(&'a self, token: &'a str) -> &'a str {
        self.map.get(token).map_or(token, String::as_str)
    }

    pub fn apply_all<S: AsRef<str>>(&self, tokens: &[S]) -> Vec<String> {
        tokens.iter().map(|t| self.apply(t.as_ref()).to_string()).collect()
    }
}
