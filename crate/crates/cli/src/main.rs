//! `oca`: check grammars, build and run approximating automata, transform
//! grammars and compare languages.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use oca_approx::analysis::{
    prop2_condition, prop3_condition, regular_nonterminals_gnf, regular_nonterminals_lid, ConditionReport,
};
use oca_approx::automaton::{build_gnf_oca, build_lid_oca, parse_automaton, serialize_automaton, strip_to_nfa, Automaton, AutomatonKind, Role};
use oca_approx::grammar::{
    nullables, parse_grammar_with_diagnostics, Grammar, GrammarKind, Nt, RSets, Rhs, Severity, Term,
};
use oca_approx::oracle::{self, ParseMemo};
use oca_approx::runtime::{all_sequences, extract_sequence, replay, run_oca_tokens, accepted_upto, AliasTable, SEQUENCE_CAP};
use oca_approx::sweep::{count_strings, Sweep};
use oca_approx::transform::{
    disjoint_r_sets, eliminate_regular_prefix_gnf, eliminate_regular_tails_lid, normalize_to_prop2, Transformed,
};
use oca_approx::trees::{pretty_tree, reconstruct, render_tree, validate_tree, ParseTree, TreeMode};
use oca_approx::Error;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "oca", version, about = "One-counter and finite approximations of context-free grammars")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Oca,
    Nfa,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    /// Tail elimination and R-set separation until the exactness condition holds.
    Prop3,
    /// Tail elimination only.
    Tails,
    /// R-set separation only.
    Disjoin,
    /// GNF prefix elimination.
    GnfPrefix,
}

#[derive(Clone, Copy, ValueEnum)]
enum TreeArg {
    Lid,
    Gnf,
    Generic,
}

#[derive(Clone, Copy, ValueEnum)]
enum Split {
    /// Whitespace, or characters if the input is a single unknown token.
    Auto,
    Ws,
    Chars,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a grammar and report its analyses.
    Check { grammar: PathBuf },
    /// Build the approximating automaton of a grammar.
    Build {
        grammar: PathBuf,
        #[arg(long, value_enum, default_value_t = Target::Oca)]
        target: Target,
        /// Write the automaton here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run an automaton on one input and rebuild a tree from the accepting run.
    Run {
        automaton: PathBuf,
        /// Input tokens.
        #[arg(long, default_value = "")]
        input: String,
        /// Check the reconstructed tree against this grammar.
        #[arg(long)]
        grammar: Option<PathBuf>,
        /// Surface token to terminal map.
        #[arg(long)]
        alias: Option<PathBuf>,
        /// Reconstruction rules; inferred from the automaton when omitted.
        #[arg(long, value_enum)]
        tree: Option<TreeArg>,
        #[arg(long, value_enum, default_value_t = Split::Auto)]
        split: Split,
        /// Also list every acceptance sequence (at most 100).
        #[arg(long)]
        all: bool,
        /// Print the tree indented, one node per line.
        #[arg(long)]
        pretty: bool,
    },
    /// Rewrite a grammar.
    Transform {
        grammar: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the grammar, its one-counter automaton and its finite automaton
    /// on every string up to a length.
    Compare {
        grammar: PathBuf,
        #[arg(long)]
        maxlen: usize,
    },
    /// Exact membership, parsing and enumeration.
    Oracle {
        grammar: PathBuf,
        #[arg(long, conflicts_with = "enumerate", required_unless_present = "enumerate")]
        input: Option<String>,
        /// List every member up to this length.
        #[arg(long)]
        enumerate: Option<usize>,
        #[arg(long)]
        alias: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Split::Auto)]
        split: Split,
        #[arg(long)]
        pretty: bool,
    },
}

const OK: u8 = 0;
const REJECT: u8 = 1;
const PRECONDITION: u8 = 2;
const INVARIANT: u8 = 3;

struct Report {
    json: Value,
    text: String,
    exit: u8,
}

struct Failure {
    message: String,
    exit: u8,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let exit = match e {
            Error::Precondition(_) | Error::AmbiguousAncestor(_) => PRECONDITION,
            Error::Postcondition(_) => INVARIANT,
            _ => REJECT,
        };
        Failure {
            message: e.to_string(),
            exit,
        }
    }
}

type Outcome = Result<Report, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure {
        message: format!("{}: {e}", path.display()),
        exit: REJECT,
    })
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure {
        message: format!("{}: {e}", path.display()),
        exit: REJECT,
    })
}

fn load_grammar(path: &Path) -> Result<(Grammar, Vec<String>), Failure> {
    let (g, diags) = parse_grammar_with_diagnostics(&read(path)?)?;
    Ok((g, diags.iter().map(ToString::to_string).collect()))
}

fn load_alias(path: &Option<PathBuf>) -> Result<AliasTable, Failure> {
    match path {
        Some(p) => Ok(AliasTable::parse(&read(p)?)?),
        None => Ok(AliasTable::default()),
    }
}

fn tokenize(input: &str, split: Split, alias: &AliasTable, known: impl Fn(&str) -> bool) -> Vec<String> {
    let chars = || input.chars().filter(|c| !c.is_whitespace()).map(String::from).collect();
    match split {
        Split::Ws => input.split_whitespace().map(String::from).collect(),
        Split::Chars => chars(),
        Split::Auto => {
            let ws: Vec<String> = input.split_whitespace().map(String::from).collect();
            match ws.as_slice() {
                [one] if !known(alias.apply(one)) && one.chars().count() > 1 => chars(),
                _ => ws,
            }
        }
    }
}

fn names(g: &Grammar, set: impl IntoIterator<Item = Nt>) -> Vec<String> {
    set.into_iter().map(|n| g.nt_name(n).to_string()).collect()
}

fn show_word<S: AsRef<str>>(tokens: &[S]) -> String {
    if tokens.is_empty() {
        return "eps".into();
    }
    let tokens: Vec<&str> = tokens.iter().map(AsRef::as_ref).collect();
    if tokens.iter().all(|t| t.chars().count() == 1) {
        tokens.concat()
    } else {
        tokens.join(" ")
    }
}

fn word_names(names: &[String], w: &[Term]) -> Vec<String> {
    w.iter().map(|t| names[t.index()].clone()).collect()
}

fn condition_json(g: &Grammar, r: &ConditionReport) -> Value {
    json!({
        "holds": r.holds,
        "truncated": r.truncated,
        "witnesses": r.witnesses.iter().map(|w| json!({
            "first": g.production_text(w.first),
            "second": g.production_text(w.second),
            "members": names(g, w.members.iter().copied()),
        })).collect::<Vec<_>>(),
    })
}

fn indent(text: &str) -> String {
    text.lines().map(|l| format!("  {l}\n")).collect()
}

fn cmd_check(path: &Path) -> Outcome {
    let (g, warnings) = load_grammar(path)?;
    let diags = oca_approx::grammar::validate(&g);
    let errors = diags.iter().filter(|d| d.severity == Severity::Error).count();
    let mut all: Vec<String> = warnings;
    all.extend(diags.iter().map(ToString::to_string));
    let rs = RSets::compute(&g);
    let r_sets: Vec<(String, Vec<String>)> =
        g.nt_ids().map(|a| (g.nt_name(a).to_string(), names(&g, rs.of(a).iter().copied()))).collect();
    let mut text = format!(
        "grammar: {}, start {}, {} nonterminals, {} terminals, {} productions\n",
        g.kind(),
        g.nt_name(g.start()),
        g.nonterminals().len(),
        g.terminals().len(),
        g.productions().len()
    );
    for d in &all {
        text.push_str(&format!("{d}\n"));
    }
    text.push_str("r-sets:\n");
    for (a, set) in &r_sets {
        text.push_str(&format!("  {a}: {}\n", set.join(" ")));
    }
    let mut json = json!({
        "command": "check",
        "kind": g.kind().to_string(),
        "start": g.nt_name(g.start()),
        "productions": g.productions().len(),
        "diagnostics": all,
        "r_sets": r_sets.iter().map(|(a, s)| json!({"nonterminal": a, "members": s})).collect::<Vec<_>>(),
    });
    if errors == 0 {
        match g.kind() {
            GrammarKind::Lid => {
                let nullable = names(&g, nullables(&g)?);
                let regular = names(&g, regular_nonterminals_lid(&g)?);
                let p2 = prop2_condition(&g)?;
                let p3 = prop3_condition(&g)?;
                text.push_str(&format!("nullable: {}\n", nullable.join(" ")));
                text.push_str(&format!("regular: {}\n", regular.join(" ")));
                text.push_str(&format!("prop2: {}", verdict(&g, &p2)));
                text.push_str(&format!("prop3: {}", verdict(&g, &p3)));
                json["nullable"] = json!(nullable);
                json["regular"] = json!(regular);
                json["prop2"] = condition_json(&g, &p2);
                json["prop3"] = condition_json(&g, &p3);
            }
            GrammarKind::Gnf => {
                let regular = names(&g, regular_nonterminals_gnf(&g)?);
                text.push_str(&format!("regular: {}\n", regular.join(" ")));
                json["regular"] = json!(regular);
            }
        }
    }
    json["valid"] = json!(errors == 0);
    Ok(Report {
        json,
        text,
        exit: if errors == 0 { OK } else { REJECT },
    })
}

fn verdict(g: &Grammar, r: &ConditionReport) -> String {
    if r.holds {
        "holds\n".into()
    } else {
        format!("fails\n{}", indent(&r.render(g)))
    }
}

fn build(g: &Grammar, target: Target) -> Result<Automaton, Error> {
    let oca = match g.kind() {
        GrammarKind::Lid => build_lid_oca(g)?,
        GrammarKind::Gnf => build_gnf_oca(g)?,
    };
    match target {
        Target::Oca => Ok(oca),
        Target::Nfa => strip_to_nfa(&oca),
    }
}

fn cmd_build(path: &Path, target: Target, out: &Option<PathBuf>) -> Outcome {
    let (g, _) = load_grammar(path)?;
    let a = build(&g, target)?;
    let automaton = serialize_automaton(&a);
    let marked = a.transitions().iter().filter(|t| t.marked).count();
    let summary = format!(
        "{}: {} states, {} transitions ({marked} marked), {} final\n",
        a.kind(),
        a.states().len(),
        a.transitions().len(),
        a.finals().len()
    );
    let text = match out {
        Some(p) => {
            write(p, &automaton)?;
            summary
        }
        None => automaton.clone(),
    };
    Ok(Report {
        json: json!({
            "command": "build",
            "kind": a.kind().to_string(),
            "states": a.states().len(),
            "transitions": a.transitions().len(),
            "marked": marked,
            "finals": a.finals().iter().map(|&f| a.state_name(f)).collect::<Vec<_>>(),
            "automaton": automaton,
        }),
        text,
        exit: OK,
    })
}

fn infer_mode(a: &Automaton) -> TreeMode {
    let gnf = a.transitions().iter().any(|t| {
        t.marked
            || t.origin.is_some_and(|o| {
                matches!(o.role, Role::GnfOpen | Role::GnfSibling | Role::GnfClose | Role::GnfFinal)
            })
    });
    if gnf {
        TreeMode::Gnf
    } else {
        TreeMode::Lid
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_run(
    path: &Path,
    input: &str,
    grammar: &Option<PathBuf>,
    alias: &Option<PathBuf>,
    tree: Option<TreeArg>,
    split: Split,
    all: bool,
    pretty: bool,
) -> Outcome {
    let a = parse_automaton(&read(path)?)?;
    let alias = load_alias(alias)?;
    let surface = tokenize(input, split, &alias, |t| a.terminal(t).is_some());
    let tokens = alias.apply_all(&surface);
    let mut text = format!("input: {}\n", show_word(&surface));
    let mut json = json!({"command": "run", "input": surface, "terminals": tokens});
    if a.kind() == AutomatonKind::Finite {
        let accepted = a.encode(&tokens).is_some_and(|w| oca_approx::runtime::accepts(&a, &w));
        text.push_str(if accepted { "verdict: accept\n" } else { "verdict: reject\n" });
        json["accepted"] = json!(accepted);
        return Ok(Report {
            json,
            text,
            exit: if accepted { OK } else { REJECT },
        });
    }
    let table = run_oca_tokens(&a, &tokens)?;
    let bound = table.configuration_bound(a.states().len());
    if table.stored_configurations() > bound {
        return Err(Failure {
            message: format!("{} configurations stored, bound {bound}", table.stored_configurations()),
            exit: INVARIANT,
        });
    }
    json["configurations"] = json!(table.stored_configurations());
    let Some(seq) = extract_sequence(&table) else {
        text.push_str("verdict: reject\n");
        json["accepted"] = json!(false);
        return Ok(Report { json, text, exit: REJECT });
    };
    json["accepted"] = json!(true);
    text.push_str("verdict: accept\nsequence:\n");
    let counters = replay(&a, &seq, None)?;
    let steps: Vec<Value> = seq
        .transitions
        .iter()
        .zip(&counters)
        .enumerate()
        .map(|(i, (&id, c))| {
            json!({"step": i + 1, "id": id, "transition": plain_line(&a, id), "counter": c})
        })
        .collect();
    text.push_str(&seq.render(&a)?);
    json["sequence"] = json!(steps);

    let mode = match tree {
        Some(TreeArg::Lid) => TreeMode::Lid,
        Some(TreeArg::Gnf) => TreeMode::Gnf,
        Some(TreeArg::Generic) => TreeMode::Generic,
        None => infer_mode(&a),
    };
    let rebuilt = reconstruct(mode, &seq, &a)?;
    if rebuilt.steps != seq.len() {
        return Err(Failure {
            message: format!("{} reconstruction steps for {} transitions", rebuilt.steps, seq.len()),
            exit: INVARIANT,
        });
    }
    let shown = relabel(&rebuilt.tree, &surface)?;
    text.push_str(&tree_text(&shown, pretty));
    json["tree"] = json!(render_tree(&shown));
    if let Some(gp) = grammar {
        let (g, _) = load_grammar(gp)?;
        let valid = validate_tree(&g, &rebuilt.tree, &tokens);
        text.push_str(&format!("valid for grammar: {valid}\n"));
        json["valid"] = json!(valid);
    }
    if all {
        let w = a.encode(&tokens).expect("accepted input is over the alphabet");
        let (seqs, truncated) = all_sequences(&a, &w, SEQUENCE_CAP)?;
        text.push_str(&format!(
            "acceptance sequences: {}{}\n",
            seqs.len(),
            if truncated { " (truncated)" } else { "" }
        ));
        for s in &seqs {
            let ids: Vec<String> = s.transitions.iter().map(ToString::to_string).collect();
            text.push_str(&format!("  {}\n", ids.join(" ")));
        }
        json["all_sequences"] = json!({
            "truncated": truncated,
            "sequences": seqs.iter().map(|s| s.transitions.clone()).collect::<Vec<_>>(),
        });
    }
    Ok(Report { json, text, exit: OK })
}

fn plain_line(a: &Automaton, id: usize) -> String {
    let line = a.transition_line(a.transition(id));
    line.split(" #").next().unwrap_or(&line).to_string()
}

/// Surface tokens replace terminal classes in the leaves when the counts
/// line up.
fn relabel(t: &ParseTree, surface: &[String]) -> Result<ParseTree, Failure> {
    if t.frontier().len() == surface.len() {
        Ok(t.relabel_leaves(surface)?)
    } else {
        Ok(t.clone())
    }
}

fn tree_text(t: &ParseTree, pretty: bool) -> String {
    if pretty {
        format!("tree:\n{}", indent(&pretty_tree(t)))
    } else {
        format!("tree: {}\n", render_tree(t))
    }
}

fn long_productions(g: &Grammar) -> usize {
    g.productions()
        .iter()
        .filter(|p| matches!(&p.rhs, Rhs::Gnf { body, .. } if body.len() >= 2))
        .count()
}

fn cmd_transform(path: &Path, mode: Mode, out: &Option<PathBuf>) -> Outcome {
    let (g, _) = load_grammar(path)?;
    let t: Transformed = match mode {
        Mode::Prop3 => normalize_to_prop2(&g)?,
        Mode::Tails => eliminate_regular_tails_lid(&g)?,
        Mode::Disjoin => disjoint_r_sets(&g)?,
        Mode::GnfPrefix => eliminate_regular_prefix_gnf(&g)?,
    };
    let grammar_text = t.to_text();
    let mut json = json!({
        "command": "transform",
        "replicas": t.replicas.len(),
        "steps": t.steps,
        "unchanged": t.unchanged(),
        "grammar": grammar_text,
    });
    let mut summary = format!("{} replicas, {} rewrite steps\n", t.replicas.len(), t.steps);
    let mut exit = OK;
    match t.grammar.kind() {
        GrammarKind::Lid => {
            let holds = prop2_condition(&t.grammar)?.holds;
            summary.push_str(&format!("prop2: {}\n", if holds { "holds" } else { "fails" }));
            json["prop2"] = json!(holds);
            if matches!(mode, Mode::Prop3 | Mode::Disjoin) && !holds {
                exit = INVARIANT;
            }
        }
        GrammarKind::Gnf => {
            let (before, after) = (long_productions(&g), long_productions(&t.grammar));
            summary.push_str(&format!("productions with two or more body symbols: {before} -> {after}\n"));
            json["long_productions"] = json!({"before": before, "after": after});
            if after > before {
                exit = INVARIANT;
            }
        }
    }
    let text = match out {
        Some(p) => {
            write(p, &grammar_text)?;
            summary
        }
        None => format!("{grammar_text}{}", summary.lines().map(|l| format!("# {l}\n")).collect::<String>()),
    };
    Ok(Report { json, text, exit })
}

fn cmd_compare(path: &Path, maxlen: usize) -> Outcome {
    let (g, _) = load_grammar(path)?;
    let sweep = Sweep::from_env();
    let oca = build(&g, Target::Oca)?;
    let nfa = strip_to_nfa(&oca)?;
    let sigma: Vec<Term> = (0..g.terminals().len() as u32).map(Term).collect();
    let exact = oracle::enumerate_language(&g, maxlen, &sweep)?;
    let by_oca = accepted_upto(&oca, &sigma, maxlen, &sweep)?;
    let by_nfa = accepted_upto(&nfa, &sigma, maxlen, &sweep)?;
    let as_set = |ws: &[Vec<Term>]| ws.iter().cloned().collect::<std::collections::BTreeSet<_>>();
    let (se, so, sn) = (as_set(&exact), as_set(&by_oca), as_set(&by_nfa));
    let missing_oca: Vec<&Vec<Term>> = se.difference(&so).collect();
    let missing_nfa: Vec<&Vec<Term>> = so.difference(&sn).collect();
    let violations = missing_oca.len() + missing_nfa.len();
    let render = |ws: &[&Vec<Term>]| ws.iter().map(|w| word_names(g.terminals(), w)).collect::<Vec<_>>();
    let oca_extra: Vec<&Vec<Term>> = by_oca.iter().filter(|w| !se.contains(*w)).collect();
    let nfa_extra: Vec<&Vec<Term>> = by_nfa.iter().filter(|w| !so.contains(*w)).collect();

    let mut rows = Vec::new();
    let mut text = String::from("length  strings  oracle  oca  nfa\n");
    for len in 0..=maxlen {
        let count = |ws: &[Vec<Term>]| ws.iter().filter(|w| w.len() == len).count();
        let strings = count_strings(g.terminals().len(), len) - if len == 0 { 0 } else { count_strings(g.terminals().len(), len - 1) };
        let (o, a, n) = (count(&exact), count(&by_oca), count(&by_nfa));
        text.push_str(&format!("{len:>6}  {strings:>7}  {o:>6}  {a:>3}  {n:>3}\n"));
        rows.push(json!({"length": len, "strings": strings as u64, "oracle": o, "oca": a, "nfa": n}));
    }
    const SHOWN: usize = 20;
    let listing = |label: &str, ws: &[&Vec<Term>]| {
        let shown: Vec<String> = ws.iter().take(SHOWN).map(|w| show_word(&word_names(g.terminals(), w))).collect();
        let more = if ws.len() > SHOWN { format!(" ... ({} more)", ws.len() - SHOWN) } else { String::new() };
        format!("{label}: {}{}{more}\n", ws.len(), if shown.is_empty() { String::new() } else { format!(" [{}]", shown.join(", ")) })
    };
    text.push_str(&listing("accepted by oca, not in language", &oca_extra));
    text.push_str(&listing("accepted by nfa, not by oca", &nfa_extra));
    text.push_str(&format!("subset violations: {violations}\n"));
    text.push_str(&format!("oracle = oca: {}\n", se == so));
    text.push_str(&format!("oca = nfa: {}\n", so == sn));
    let json = json!({
        "command": "compare",
        "maxlen": maxlen,
        "rows": rows,
        "oca_extra": render(&oca_extra),
        "nfa_extra": render(&nfa_extra),
        "violations": {
            "oracle_not_in_oca": render(&missing_oca),
            "oca_not_in_nfa": render(&missing_nfa),
        },
        "oracle_equals_oca": se == so,
        "oca_equals_nfa": so == sn,
    });
    Ok(Report {
        json,
        text,
        exit: if violations == 0 { OK } else { INVARIANT },
    })
}

fn cmd_oracle(
    path: &Path,
    input: &Option<String>,
    enumerate: Option<usize>,
    alias: &Option<PathBuf>,
    split: Split,
    pretty: bool,
) -> Outcome {
    let (g, _) = load_grammar(path)?;
    if let Some(n) = enumerate {
        let words = oracle::enumerate_language(&g, n, &Sweep::from_env())?;
        let listed: Vec<Vec<String>> = words.iter().map(|w| word_names(g.terminals(), w)).collect();
        let mut text = format!("{} members up to length {n}\n", words.len());
        for w in &listed {
            text.push_str(&format!("  {}\n", show_word(w)));
        }
        return Ok(Report {
            json: json!({"command": "oracle", "maxlen": n, "members": listed}),
            text,
            exit: OK,
        });
    }
    let alias = load_alias(alias)?;
    let input = input.as_deref().unwrap_or("");
    let surface = tokenize(input, split, &alias, |t| g.terminal(t).is_some());
    let tokens = alias.apply_all(&surface);
    let mut text = format!("input: {}\n", show_word(&surface));
    let mut json = json!({"command": "oracle", "input": surface, "terminals": tokens});
    let tree = oracle::encode(&g, &tokens).and_then(|w| ParseMemo::new(&g, &w).tree(g.start(), 0, w.len()));
    json["member"] = json!(tree.is_some());
    let exit = match tree {
        Some(t) => {
            let shown = t.relabel_leaves(&surface)?;
            text.push_str("member: true\n");
            text.push_str(&tree_text(&shown, pretty));
            json["tree"] = json!(render_tree(&shown));
            OK
        }
        None => {
            text.push_str("member: false\n");
            REJECT
        }
    };
    Ok(Report { json, text, exit })
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Check { .. } => "check",
        Command::Build { .. } => "build",
        Command::Run { .. } => "run",
        Command::Transform { .. } => "transform",
        Command::Compare { .. } => "compare",
        Command::Oracle { .. } => "oracle",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Check { grammar } => cmd_check(grammar),
        Command::Build { grammar, target, out } => cmd_build(grammar, *target, out),
        Command::Run {
            automaton,
            input,
            grammar,
            alias,
            tree,
            split,
            all,
            pretty,
        } => cmd_run(automaton, input, grammar, alias, *tree, *split, *all, *pretty),
        Command::Transform { grammar, mode, out } => cmd_transform(grammar, *mode, out),
        Command::Compare { grammar, maxlen } => cmd_compare(grammar, *maxlen),
        Command::Oracle {
            grammar,
            input,
            enumerate,
            alias,
            split,
            pretty,
        } => cmd_oracle(grammar, input, *enumerate, alias, *split, *pretty),
    };
    let exit = match outcome {
        Ok(r) => {
            match cli.format {
                Format::Text => print!("{}", r.text),
                Format::Json => println!("{}", serde_json::to_string_pretty(&r.json).expect("serializable")),
            }
            r.exit
        }
        Err(f) => {
            match cli.format {
                Format::Text => eprintln!("error: {}", f.message),
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "command": command_name(&cli.command),
                        "error": f.message,
                        "exit": f.exit,
                    }))
                    .expect("serializable")
                ),
            }
            f.exit
        }
    };
    ExitCode::from(exit)
}
