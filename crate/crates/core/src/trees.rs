//! Parse trees rebuilt from acceptance sequences, checked against grammars,
//! and written in a bracketed text form.
//!
//! `(E "i" (P "+" (E "i")))` is a node `E` with a terminal leaf and a
//! subtree. A childless node such as `(S)` stands for an epsilon expansion.

use std::fmt;
use std::fmt::Write as _;

use crate::automaton::{Action, Automaton, Role, Transition};
use crate::error::{Error, Result};
use crate::grammar::{Grammar, Symbol};
use crate::runtime::{replay, AcceptanceSequence};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ParseTree {
    Leaf(String),
    Node { label: String, children: Vec<ParseTree> },
}

impl ParseTree {
    pub fn leaf(terminal: impl Into<String>) -> ParseTree {
        ParseTree::Leaf(terminal.into())
    }

    pub fn node(label: impl Into<String>, children: Vec<ParseTree>) -> ParseTree {
        ParseTree::Node {
            label: label.into(),
            children,
        }
    }

    pub fn label(&self) -> &str {
        match self {
            ParseTree::Leaf(s) => s,
            ParseTree::Node { label, .. } => label,
        }
    }

    pub fn children(&self) -> &[ParseTree] {
        match self {
            ParseTree::Leaf(_) => &[],
            ParseTree::Node { children, .. } => children,
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, ParseTree::Leaf(_))
    }

    /// Terminal leaves, left to right.
    pub fn frontier(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.walk(&mut |t| {
            if let ParseTree::Leaf(s) = t {
                out.push(s.as_str());
            }
        });
        out
    }

    /// Labels of all non-leaf nodes in preorder.
    pub fn node_labels(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.walk(&mut |t| {
            if let ParseTree::Node { label, .. } = t {
                out.push(label.as_str());
            }
        });
        out
    }

    fn walk<'a>(&'a self, f: &mut impl FnMut(&'a ParseTree)) {
        f(self);
        for c in self.children() {
            c.walk(f);
        }
    }

    /// Replaces the terminal leaves, left to right, with `tokens`.
    pub fn relabel_leaves<S: AsRef<str>>(&self, tokens: &[S]) -> Result<ParseTree> {
        let count = self.frontier().len();
        if count != tokens.len() {
            return Err(Error::Precondition(format!(
                "tree has {count} terminal leaves, got {} tokens",
                tokens.len()
            )));
        }
        let mut it = tokens.iter();
        Ok(self.map_leaves(&mut || it.next().expect("counted").as_ref().to_string()))
    }

    fn map_leaves(&self, next: &mut impl FnMut() -> String) -> ParseTree {
        match self {
            ParseTree::Leaf(_) => ParseTree::Leaf(next()),
            ParseTree::Node { label, children } => ParseTree::Node {
                label: label.clone(),
                children: children.iter().map(|c| c.map_leaves(next)).collect(),
            },
        }
    }
}

impl fmt::Display for ParseTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_tree(self))
    }
}

impl std::str::FromStr for ParseTree {
    type Err = Error;

    fn from_str(s: &str) -> Result<ParseTree> {
        parse_tree(s)
    }
}

/// How an acceptance sequence is turned into a tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TreeMode {
    Lid,
    Gnf,
    Generic,
}

impl std::str::FromStr for TreeMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<TreeMode, String> {
        match s {
            "lid" => Ok(TreeMode::Lid),
            "gnf" => Ok(TreeMode::Gnf),
            "generic" => Ok(TreeMode::Generic),
            _ => Err(format!("unknown tree mode `{s}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reconstruction {
    pub tree: ParseTree,
    /// Transitions processed; equals the sequence length.
    pub steps: usize,
}

enum Child {
    Leaf(String),
    Node(usize),
}

/// Tree under construction, nodes addressed by index.
struct Arena {
    nodes: Vec<(String, Vec<Child>)>,
}

impl Arena {
    fn new() -> Arena {
        Arena { nodes: Vec::new() }
    }

    fn node(&mut self, label: &str) -> usize {
        self.nodes.push((label.to_string(), Vec::new()));
        self.nodes.len() - 1
    }

    fn leaf(&mut self, parent: usize, terminal: &str) {
        self.nodes[parent].1.push(Child::Leaf(terminal.to_string()));
    }

    fn child(&mut self, parent: usize, label: &str) -> usize {
        let n = self.node(label);
        self.nodes[parent].1.push(Child::Node(n));
        n
    }

    fn label(&self, n: usize) -> &str {
        &self.nodes[n].0
    }

    fn build(&self, n: usize) -> ParseTree {
        let (label, children) = &self.nodes[n];
        ParseTree::Node {
            label: label.clone(),
            children: children
                .iter()
                .map(|c| match c {
                    Child::Leaf(s) => ParseTree::Leaf(s.clone()),
                    Child::Node(m) => self.build(*m),
                })
                .collect(),
        }
    }
}

fn malformed(step: usize, m: impl fmt::Display) -> Error {
    Error::MalformedSequence(format!("step {step}: {m}"))
}

/// The rule behind a transition, inferred from its shape when the automaton
/// carries no origins.
fn role_of(a: &Automaton, t: &Transition, mode: TreeMode) -> Role {
    if let Some(o) = t.origin {
        return o.role;
    }
    match (mode, t.action) {
        (TreeMode::Gnf, _) if t.marked => Role::GnfSibling,
        (TreeMode::Gnf, Action::Inc) => Role::GnfOpen,
        (TreeMode::Gnf, Action::Dec) => Role::GnfClose,
        (TreeMode::Gnf, Action::Keep) if a.is_final(t.dst) => Role::GnfFinal,
        (_, Action::Inc) => Role::BranchOpen,
        (_, Action::Dec) => Role::BranchClose,
        (_, Action::Keep) => Role::Unit,
    }
}

/// Rebuilds a tree, checking after every step that the stack depth equals the
/// replayed counter.
pub fn reconstruct(mode: TreeMode, seq: &AcceptanceSequence, a: &Automaton) -> Result<Reconstruction> {
    let counters = replay(a, seq, None)?;
    let mut arena = Arena::new();
    let mut stack: Vec<usize> = Vec::new();
    let mut steps = 0;
    let root;
    match mode {
        TreeMode::Lid => {
            root = arena.node(a.state_name(a.start()));
            let mut cur = root;
            for (i, &id) in seq.transitions.iter().enumerate() {
                let t = a.transition(id);
                let (src, x, dst) = (a.state_name(t.src), a.terminal_name(t.terminal), a.state_name(t.dst));
                if arena.label(cur) != src {
                    return Err(malformed(i + 1, format!("transition leaves {src}, tree is at {}", arena.label(cur))));
                }
                match t.action {
                    Action::Keep | Action::Inc => {
                        arena.leaf(cur, x);
                        let next = arena.child(cur, dst);
                        if t.action == Action::Inc {
                            stack.push(cur);
                        }
                        cur = next;
                    }
                    Action::Dec => {
                        let parent = stack.pop().ok_or_else(|| malformed(i + 1, "stack underflow"))?;
                        arena.leaf(parent, x);
                        cur = arena.child(parent, dst);
                    }
                }
                steps += 1;
                check_depth(i, &stack, &counters)?;
            }
        }
        TreeMode::Gnf => {
            root = arena.node(a.state_name(a.start()));
            let mut cur = Some(root);
            for (i, &id) in seq.transitions.iter().enumerate() {
                let t = a.transition(id);
                let (src, x, dst) = (a.state_name(t.src), a.terminal_name(t.terminal), a.state_name(t.dst));
                let node = match cur {
                    Some(n) if arena.label(n) == src => n,
                    Some(n) => {
                        return Err(malformed(i + 1, format!("transition leaves {src}, tree is at {}", arena.label(n))));
                    }
                    None => return Err(malformed(i + 1, "transition after the final one")),
                };
                arena.leaf(node, x);
                cur = match role_of(a, t, mode) {
                    Role::GnfFinal => None,
                    Role::GnfSibling => {
                        let top = *stack.last().ok_or_else(|| malformed(i + 1, "sibling with empty stack"))?;
                        Some(arena.child(top, dst))
                    }
                    Role::GnfOpen | Role::BranchOpen => {
                        let next = arena.child(node, dst);
                        stack.push(node);
                        Some(next)
                    }
                    Role::GnfClose | Role::BranchClose => {
                        let parent = stack.pop().ok_or_else(|| malformed(i + 1, "stack underflow"))?;
                        Some(arena.child(parent, dst))
                    }
                    Role::Unit => Some(arena.child(node, dst)),
                };
                steps += 1;
                check_depth(i, &stack, &counters)?;
            }
            if cur.is_some() {
                return Err(malformed(steps, "sequence does not end with a final transition"));
            }
        }
        TreeMode::Generic => {
            let mut attach: Option<usize> = None;
            let mut first = None;
            for (i, &id) in seq.transitions.iter().enumerate() {
                let t = a.transition(id);
                let (src, x) = (a.state_name(t.src), a.terminal_name(t.terminal));
                match t.action {
                    Action::Keep | Action::Inc => {
                        let n = match attach {
                            Some(p) => arena.child(p, src),
                            None => arena.node(src),
                        };
                        first.get_or_insert(n);
                        arena.leaf(n, x);
                        if t.action == Action::Inc {
                            stack.push(n);
                        }
                        attach = Some(n);
                    }
                    Action::Dec => {
                        let p = attach.ok_or_else(|| malformed(i + 1, "close before any open"))?;
                        arena.child(p, src);
                        arena.leaf(p, x);
                        attach = Some(stack.pop().ok_or_else(|| malformed(i + 1, "stack underflow"))?);
                    }
                }
                steps += 1;
                check_depth(i, &stack, &counters)?;
            }
            let end = seq.transitions.last().map_or(a.start(), |&id| a.transition(id).dst);
            root = match (first, attach) {
                (Some(r), Some(p)) => {
                    arena.child(p, a.state_name(end));
                    r
                }
                _ => arena.node(a.state_name(end)),
            };
        }
    }
    if !stack.is_empty() {
        return Err(malformed(steps, "constructs left open"));
    }
    Ok(Reconstruction {
        tree: arena.build(root),
        steps,
    })
}

fn check_depth(i: usize, stack: &[usize], counters: &[u32]) -> Result<()> {
    if stack.len() != counters[i] as usize {
        return Err(malformed(i + 1, format!("stack depth {} but counter {}", stack.len(), counters[i])));
    }
    Ok(())
}

pub fn reconstruct_lid(seq: &AcceptanceSequence, a: &Automaton) -> Result<ParseTree> {
    reconstruct(TreeMode::Lid, seq, a).map(|r| r.tree)
}

pub fn reconstruct_gnf(seq: &AcceptanceSequence, a: &Automaton) -> Result<ParseTree> {
    reconstruct(TreeMode::Gnf, seq, a).map(|r| r.tree)
}

pub fn reconstruct_generic(seq: &AcceptanceSequence, a: &Automaton) -> Result<ParseTree> {
    reconstruct(TreeMode::Generic, seq, a).map(|r| r.tree)
}

/// True iff the root is the start symbol, every node expands by one of its
/// productions, and the frontier is `input`.
pub fn validate_tree<S: AsRef<str>>(g: &Grammar, t: &ParseTree, input: &[S]) -> bool {
    t.label() == g.nt_name(g.start())
        && !t.is_leaf()
        && node_valid(g, t)
        && t.frontier().iter().copied().eq(input.iter().map(AsRef::as_ref))
}

fn node_valid(g: &Grammar, t: &ParseTree) -> bool {
    let ParseTree::Node { label, children } = t else {
        return true;
    };
    let Some(nt) = g.nonterminal(label) else {
        return false;
    };
    let fits = g.productions_of(nt).any(|(_, p)| {
        let syms = p.rhs.symbols();
        syms.len() == children.len()
            && syms.iter().zip(children).all(|(s, c)| match (s, c) {
                (Symbol::Terminal(x), ParseTree::Leaf(name)) => g.term_name(*x) == name,
                (Symbol::Nonterminal(b), ParseTree::Node { label, .. }) => g.nt_name(*b) == label,
                _ => false,
            })
    });
    fits && children.iter().all(|c| node_valid(g, c))
}

fn quote(s: &str, out: &mut String) {
    out.push('"');
    for c in s.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
}

pub fn render_tree(t: &ParseTree) -> String {
    fn go(t: &ParseTree, out: &mut String) {
        match t {
            ParseTree::Leaf(s) => quote(s, out),
            ParseTree::Node { label, children } => {
                out.push('(');
                out.push_str(label);
                for c in children {
                    out.push(' ');
                    go(c, out);
                }
                out.push(')');
            }
        }
    }
    let mut out = String::new();
    go(t, &mut out);
    out
}

/// One node per line, children indented by two spaces.
pub fn pretty_tree(t: &ParseTree) -> String {
    fn go(t: &ParseTree, depth: usize, out: &mut String) {
        let _ = write!(out, "{:width$}", "", width = depth * 2);
        match t {
            ParseTree::Leaf(s) => quote(s, out),
            ParseTree::Node { label, .. } => out.push_str(label),
        }
        out.push('\n');
        for c in t.children() {
            go(c, depth + 1, out);
        }
    }
    let mut out = String::new();
    go(t, 0, &mut out);
    out
}

struct TreeParser<'a> {
    text: &'a str,
    pos: usize,
}

impl TreeParser<'_> {
    fn error(&self, message: impl Into<String>) -> Error {
        Error::TreeSyntax {
            offset: self.pos,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek().filter(|c| c.is_whitespace()) {
            self.pos += c.len_utf8();
        }
    }

    fn tree(&mut self) -> Result<ParseTree> {
        self.skip_ws();
        match self.peek() {
            Some('"') => self.string().map(ParseTree::Leaf),
            Some('(') => {
                self.pos += 1;
                let start = self.pos;
                while let Some(c) = self.peek().filter(|c| !c.is_whitespace() && !matches!(c, '(' | ')' | '"')) {
                    self.pos += c.len_utf8();
                }
                if self.pos == start {
                    return Err(self.error("expected a node label"));
                }
                let label = self.text[start..self.pos].to_string();
                let mut children = Vec::new();
                loop {
                    self.skip_ws();
                    match self.peek() {
                        Some(')') => {
                            self.pos += 1;
                            return Ok(ParseTree::Node { label, children });
                        }
                        Some(_) => children.push(self.tree()?),
                        None => return Err(self.error("unclosed node")),
                    }
                }
            }
            Some(c) => Err(self.error(format!("unexpected `{c}`"))),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn string(&mut self) -> Result<String> {
        self.pos += 1;
        let mut out = String::new();
        let mut escaped = false;
        while let Some(c) = self.peek() {
            self.pos += c.len_utf8();
            match (escaped, c) {
                (false, '\\') => escaped = true,
                (false, '"') => return Ok(out),
                _ => {
                    out.push(c);
                    escaped = false;
                }
            }
        }
        Err(self.error("unterminated string"))
    }
}

pub fn parse_tree(text: &str) -> Result<ParseTree> {
    let mut p = TreeParser { text, pos: 0 };
    let t = p.tree()?;
    p.skip_ws();
    if p.pos != text.len() {
        return Err(p.error("trailing input"));
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::{build_gnf_oca, build_lid_oca};
    use crate::fixtures;
    use crate::grammar::parse_grammar;
    use crate::runtime::{extract_sequence, run_oca_tokens};

    fn chars(s: &str) -> Vec<String> {
        s.chars().map(String::from).collect()
    }

    fn sequence(a: &Automaton, s: &str) -> AcceptanceSequence {
        extract_sequence(&run_oca_tokens(a, &chars(s)).unwrap()).expect("accepted")
    }

    const ARITH_TREE: &str = r#"(E "a" (P "*" (T "d") (L "+") (E "(" (E "b" (P "+" (E "c"))) (R ")"))))"#;

    #[test]
    fn lid_trees() {
        let g2 = fixtures::anbn();
        let a = build_lid_oca(&g2).unwrap();
        let r = reconstruct(TreeMode::Lid, &sequence(&a, "aabb"), &a).unwrap();
        assert_eq!(render_tree(&r.tree), r#"(S "a" (S "a" (S) "b" (T)) "b" (T))"#);
        assert_eq!(r.steps, 4);
        assert!(validate_tree(&g2, &r.tree, &chars("aabb")));

        let empty = reconstruct_lid(&sequence(&a, ""), &a).unwrap();
        assert_eq!(render_tree(&empty), "(S)");
        assert!(validate_tree(&g2, &empty, &[] as &[&str]));

        let g3 = fixtures::ab_cd();
        let a3 = build_lid_oca(&g3).unwrap();
        let t = reconstruct_lid(&sequence(&a3, "ad"), &a3).unwrap();
        assert_eq!(render_tree(&t), r#"(S "a" (A) "d" (Y))"#);
        assert!(!validate_tree(&g3, &t, &chars("ad")));
    }

    #[test]
    fn gnf_arith_tree() {
        let g1 = fixtures::arith();
        let a = build_gnf_oca(&g1).unwrap();
        let r = reconstruct(TreeMode::Gnf, &sequence(&a, "i*i+(i+i)"), &a).unwrap();
        assert_eq!(r.steps, 9);
        assert!(validate_tree(&g1, &r.tree, &chars("i*i+(i+i)")));
        let surface = r.tree.relabel_leaves(&chars("a*d+(b+c)")).unwrap();
        assert_eq!(render_tree(&surface), ARITH_TREE);

        let small = reconstruct_gnf(&sequence(&a, "i+i"), &a).unwrap();
        assert_eq!(render_tree(&small), r#"(E "i" (P "+" (E "i")))"#);
        assert!(validate_tree(&g1, &small, &chars("i+i")));

        let g = parse_grammar("kind: gnf\nstart: S\nterminals: a\nS -> a\n").unwrap();
        let a = build_gnf_oca(&g).unwrap();
        assert_eq!(render_tree(&reconstruct_gnf(&sequence(&a, "a"), &a).unwrap()), r#"(S "a")"#);
    }

    #[test]
    fn generic_trees() {
        let a = build_lid_oca(&fixtures::anbn()).unwrap();
        let t = reconstruct_generic(&sequence(&a, "ab"), &a).unwrap();
        assert_eq!(render_tree(&t), r#"(S "a" (S) "b" (T))"#);
        let e = reconstruct_generic(&sequence(&a, ""), &a).unwrap();
        assert_eq!(render_tree(&e), "(S)");
        for s in ["aabb", "aaabbb"] {
            let seq = sequence(&a, s);
            let mut lid = reconstruct_lid(&seq, &a).unwrap().node_labels().into_iter().map(String::from).collect::<Vec<_>>();
            let mut gen = reconstruct_generic(&seq, &a).unwrap().node_labels().into_iter().map(String::from).collect::<Vec<_>>();
            lid.sort();
            gen.sort();
            assert_eq!(lid, gen);
        }
    }

    #[test]
    fn corrupted_sequences() {
        let a = build_lid_oca(&fixtures::anbn()).unwrap();
        let open_only = AcceptanceSequence { transitions: vec![0] };
        assert!(matches!(reconstruct_lid(&open_only, &a), Err(Error::MalformedSequence(_))));
    }

    #[test]
    fn bracketed_text() {
        let t = ParseTree::node("S", vec![ParseTree::leaf("a")]);
        assert_eq!(render_tree(&t), r#"(S "a")"#);
        let arith = parse_tree(ARITH_TREE).unwrap();
        assert_eq!(render_tree(&arith), ARITH_TREE);
        assert_eq!(arith.frontier().concat(), "a*d+(b+c)");
        let odd = ParseTree::node("X", vec![ParseTree::leaf("q\"\\"), ParseTree::node("Y", vec![])]);
        assert_eq!(parse_tree(&render_tree(&odd)).unwrap(), odd);
        assert!(parse_tree("(S \"a\"").is_err());
        assert!(parse_tree("(S) x").is_err());
        assert!(parse_tree("()").is_err());
        assert_eq!(pretty_tree(&t), "S\n  \"a\"\n");
    }
}
