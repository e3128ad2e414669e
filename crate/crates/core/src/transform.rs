//! Language-preserving replication rewrites.
//!
//! Each rewrite copies a set of nonterminals together with their
//! productions under fresh names (`A$1`, `A$2`, ...) and redirects one
//! production at the copy. Originals are never removed.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use crate::analysis::{conflict_set, prop2_condition, prop3_condition};
use crate::error::{Error, Result};
use crate::grammar::{
    reachable_from, require_kind, serialize_grammar, Grammar, GrammarKind, Nt, Production, RSets,
    Rhs,
};

/// One fresh nonterminal introduced by a rewrite step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReplicaRecord {
    pub replica: Nt,
    pub original: Nt,
    pub step: usize,
}

/// Output of a transformation: the rewritten grammar and where its new
/// nonterminals came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transformed {
    pub grammar: Grammar,
    pub replicas: Vec<ReplicaRecord>,
    pub steps: usize,
}

impl Transformed {
    /// Replica-to-original pairs introduced at `step`.
    pub fn replica_map(&self, step: usize) -> BTreeMap<Nt, Nt> {
        self.replicas
            .iter()
            .filter(|r| r.step == step)
            .map(|r| (r.original, r.replica))
            .collect()
    }

    /// Grammar file text preceded by one provenance comment per replica.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.replicas {
            let _ = writeln!(
                out,
                "# {} replica of {}, step {}",
                self.grammar.nt_name(r.replica),
                self.grammar.nt_name(r.original),
                r.step
            );
        }
        out.push_str(&serialize_grammar(&self.grammar));
        out
    }

    pub fn unchanged(&self) -> bool {
        self.steps == 0
    }
}

/// Which branch productions the LID tail elimination may rewrite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TailScope {
    /// Every eliminable branch production.
    #[default]
    All,
    /// Only branch productions of nonterminals reachable from a shared
    /// member of two disagreeing branch productions.
    Conflicts,
}

struct Rewriter {
    grammar: Grammar,
    counters: HashMap<String, u32>,
    replicas: Vec<ReplicaRecord>,
    steps: usize,
}

impl Rewriter {
    fn new(grammar: Grammar) -> Rewriter {
        Rewriter {
            grammar,
            counters: HashMap::new(),
            replicas: Vec::new(),
            steps: 0,
        }
    }

    fn finish(self) -> Transformed {
        Transformed {
            grammar: self.grammar,
            replicas: self.replicas,
            steps: self.steps,
        }
    }

    /// Copies every nonterminal in `set`. `rewrite` maps each original
    /// right-hand side onto the copy's, given the original-to-replica map.
    fn replicate(
        &mut self,
        set: &BTreeSet<Nt>,
        mut rewrite: impl FnMut(&Rhs, &BTreeMap<Nt, Nt>) -> Rhs,
    ) -> BTreeMap<Nt, Nt> {
        let mut map = BTreeMap::new();
        for &orig in set {
            let name = self.grammar.fresh_name(self.grammar.nt_name(orig), &mut self.counters);
            let replica = self.grammar.add_nonterminal(name);
            map.insert(orig, replica);
            self.replicas.push(ReplicaRecord {
                replica,
                original: orig,
                step: self.steps,
            });
        }
        for &orig in set {
            let copies: Vec<Rhs> = self
                .grammar
                .productions_of(orig)
                .map(|(_, p)| rewrite(&p.rhs, &map))
                .collect();
            for rhs in copies {
                self.grammar.push_production(Production {
                    lhs: map[&orig],
                    rhs,
                });
            }
        }
        map
    }

    fn has_branch(&self) -> Vec<bool> {
        let mut out = vec![false; self.grammar.nonterminals().len()];
        for (_, p) in self.grammar.branch_productions() {
            out[p.lhs.index()] = true;
        }
        out
    }

    fn eliminate_tails(&mut self, scope: TailScope) {
        let allowed: Option<BTreeSet<Nt>> = match scope {
            TailScope::All => None,
            TailScope::Conflicts => {
                let rs = RSets::compute(&self.grammar);
                let shared: BTreeSet<Nt> = self
                    .grammar
                    .branch_productions()
                    .flat_map(|(idx, _)| conflict_set(&self.grammar, &rs, idx))
                    .collect();
                Some(reachable_from(&self.grammar, shared))
            }
        };
        loop {
            let rs = RSets::compute(&self.grammar);
            let has_branch = self.has_branch();
            let target = self.grammar.productions().iter().enumerate().find_map(|(idx, p)| {
                let Rhs::Branch {
                    open,
                    inner,
                    close,
                    next,
                } = p.rhs
                else {
                    return None;
                };
                if allowed.as_ref().is_some_and(|a| !a.contains(&p.lhs)) {
                    return None;
                }
                rs.of(inner)
                    .iter()
                    .all(|d| !has_branch[d.index()])
                    .then_some((idx, open, inner, close, next))
            });
            let Some((idx, open, inner, close, next)) = target else {
                return;
            };
            self.steps += 1;
            let map = self.replicate(rs.of(inner), |rhs, map| match rhs {
                Rhs::Unit { term, next: n } => Rhs::Unit {
                    term: *term,
                    next: map[n],
                },
                Rhs::Epsilon => Rhs::Unit { term: close, next },
                _ => unreachable!("replicated set has no branch productions"),
            });
            self.grammar.set_rhs(
                idx,
                Rhs::Unit {
                    term: open,
                    next: map[&inner],
                },
            );
        }
    }

    fn disjoin(&mut self) -> Result<()> {
        let initial: Vec<usize> = self.grammar.branch_productions().map(|(idx, _)| idx).collect();
        for idx in initial {
            let rs = RSets::compute(&self.grammar);
            let shared = conflict_set(&self.grammar, &rs, idx);
            if shared.is_empty() {
                continue;
            }
            let has_branch = self.has_branch();
            if let Some(bad) = shared.iter().find(|d| has_branch[d.index()]) {
                return Err(Error::Precondition(format!(
                    "shared nonterminal `{}` of `{}` has branch productions",
                    self.grammar.nt_name(*bad),
                    self.grammar.production_text(idx)
                )));
            }
            let Rhs::Branch {
                open,
                inner,
                close,
                next,
            } = self.grammar.productions()[idx].rhs
            else {
                unreachable!()
            };
            self.steps += 1;
            let map = self.replicate(rs.of(inner), |rhs, map| match rhs {
                Rhs::Unit { term, next } => Rhs::Unit {
                    term: *term,
                    next: map[next],
                },
                Rhs::Branch {
                    open,
                    inner,
                    close,
                    next,
                } => Rhs::Branch {
                    open: *open,
                    inner: *inner,
                    close: *close,
                    next: map[next],
                },
                Rhs::Epsilon => Rhs::Epsilon,
                Rhs::Gnf { .. } => unreachable!("LID grammar"),
            });
            self.grammar.set_rhs(
                idx,
                Rhs::Branch {
                    open,
                    inner: map[&inner],
                    close,
                    next,
                },
            );
        }
        Ok(())
    }

    fn eliminate_prefixes(&mut self) {
        loop {
            let rs = RSets::compute(&self.grammar);
            let mut long = vec![false; self.grammar.nonterminals().len()];
            for p in self.grammar.productions() {
                if matches!(&p.rhs, Rhs::Gnf { body, .. } if body.len() > 1) {
                    long[p.lhs.index()] = true;
                }
            }
            let target = self.grammar.productions().iter().enumerate().find_map(|(idx, p)| {
                let Rhs::Gnf { lead, body } = &p.rhs else {
                    return None;
                };
                if body.len() < 2 {
                    return None;
                }
                body[..body.len() - 1]
                    .iter()
                    .all(|&b| rs.of(b).iter().all(|e| !long[e.index()]))
                    .then(|| (idx, *lead, body.clone()))
            });
            let Some((idx, lead, body)) = target else {
                return;
            };
            self.steps += 1;
            let mut follow = *body.last().expect("length checked");
            for &b in body[..body.len() - 1].iter().rev() {
                let map = self.replicate(rs.of(b), |rhs, map| match rhs {
                    Rhs::Gnf { lead, body } if body.is_empty() => Rhs::Gnf {
                        lead: *lead,
                        body: vec![follow],
                    },
                    Rhs::Gnf { lead, body } => Rhs::Gnf {
                        lead: *lead,
                        body: vec![map[&body[0]]],
                    },
                    _ => unreachable!("GNF grammar"),
                });
                follow = map[&b];
            }
            self.grammar.set_rhs(
                idx,
                Rhs::Gnf {
                    lead,
                    body: vec![follow],
                },
            );
        }
    }
}

/// Replaces every branch production `A -> b B c C` whose R(B) contains no
/// branch productions by `A -> b B'`, where the copy of R(B) ends in `c C`
/// instead of epsilon.
pub fn eliminate_regular_tails_lid(g: &Grammar) -> Result<Transformed> {
    eliminate_regular_tails_lid_with(g, TailScope::All)
}

pub fn eliminate_regular_tails_lid_with(g: &Grammar, scope: TailScope) -> Result<Transformed> {
    require_kind(g, GrammarKind::Lid)?;
    let mut rw = Rewriter::new(g.clone());
    rw.eliminate_tails(scope);
    Ok(rw.finish())
}

/// Gives every branch production with a shared inner nonterminal its own
/// copy of R(B), so that disagreeing branch productions no longer meet.
pub fn disjoint_r_sets(g: &Grammar) -> Result<Transformed> {
    require_kind(g, GrammarKind::Lid)?;
    let mut rw = Rewriter::new(g.clone());
    rw.disjoin()?;
    Ok(rw.finish())
}

/// Extra rounds of tail elimination and separation tried when a single
/// restricted pass leaves disagreeing pairs behind.
pub const NORMALIZE_ROUNDS: usize = 4;

/// Tail elimination followed by R-set separation. The result satisfies the
/// exactness condition whenever this returns `Ok`.
///
/// Copying an R-set that holds branch productions copies those productions
/// too, and the copies can disagree with their originals. When that happens
/// the pipeline is retried with unrestricted tail elimination, repeated up to
/// [`NORMALIZE_ROUNDS`] times, before giving up with a postcondition error.
pub fn normalize_to_prop2(g: &Grammar) -> Result<Transformed> {
    normalize_to_prop2_with(g, TailScope::Conflicts)
}

pub fn normalize_to_prop2_with(g: &Grammar, scope: TailScope) -> Result<Transformed> {
    let p3 = prop3_condition(g)?;
    if !p3.holds {
        return Err(Error::Precondition(format!(
            "shared nonterminals are not regular:\n{}",
            p3.render(g).trim_end()
        )));
    }
    match separate(g, scope, 1) {
        Err(Error::Postcondition(_)) => separate(g, TailScope::All, NORMALIZE_ROUNDS),
        other => other,
    }
}

fn separate(g: &Grammar, scope: TailScope, rounds: usize) -> Result<Transformed> {
    let mut rw = Rewriter::new(g.clone());
    let mut report = String::new();
    for round in 0..rounds {
        rw.eliminate_tails(if round == 0 { scope } else { TailScope::All });
        match rw.disjoin() {
            Ok(()) => {}
            Err(Error::Precondition(m)) => return Err(Error::Postcondition(m)),
            Err(e) => return Err(e),
        }
        let p2 = prop2_condition(&rw.grammar)?;
        if p2.holds {
            return Ok(rw.finish());
        }
        report = p2.render(&rw.grammar).trim_end().to_string();
    }
    Err(Error::Postcondition(report))
}

/// Replaces GNF productions `A -> b B1 ... Bm` whose prefix R-sets contain
/// only productions of body length at most one by `A -> b B1'`.
pub fn eliminate_regular_prefix_gnf(g: &Grammar) -> Result<Transformed> {
    require_kind(g, GrammarKind::Gnf)?;
    let mut rw = Rewriter::new(g.clone());
    rw.eliminate_prefixes();
    Ok(rw.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::grammar::parse_grammar;

    fn text(t: &Transformed) -> String {
        serialize_grammar(&t.grammar)
    }

    #[test]
    fn tails_of_ab_cd() {
        let t = eliminate_regular_tails_lid(&fixtures::ab_cd()).unwrap();
        assert_eq!(t.steps, 2);
        assert_eq!(
            text(&t),
            "kind: lid\nstart: S\nterminals: a b c d\n\
             S -> a A$1\nS -> c A$2\nA -> eps\nX -> eps\nY -> eps\n\
             A$1 -> b X\nA$2 -> d Y\n"
        );
        assert!(t.grammar.branch_productions().next().is_none());
    }

    #[test]
    fn tails_fixed_points() {
        let g2 = fixtures::anbn();
        let t = eliminate_regular_tails_lid(&g2).unwrap();
        assert!(t.unchanged());
        assert_eq!(t.grammar, g2);

        let right_linear = parse_grammar("kind: lid\nstart: S\nterminals: a\nS -> a S\nS -> eps\n").unwrap();
        assert_eq!(eliminate_regular_tails_lid(&right_linear).unwrap().grammar, right_linear);
    }

    #[test]
    fn disjoin_shared_tail() {
        let g = fixtures::shared_tail();
        assert!(!prop2_condition(&g).unwrap().holds);
        let t = disjoint_r_sets(&g).unwrap();
        assert_eq!(t.steps, 1);
        assert!(prop2_condition(&t.grammar).unwrap().holds);
        assert_eq!(t.grammar.production_text(0), "S -> a A$1 b X");
        assert_eq!(t.grammar.production_text(1), "S -> c C d Y");
        let originals: Vec<&str> = t.replicas.iter().map(|r| t.grammar.nt_name(r.original)).collect();
        assert_eq!(originals, ["A", "C"]);
    }

    #[test]
    fn disjoin_rejects_branching_shared_members() {
        let g = fixtures::nested_conflict();
        assert!(matches!(disjoint_r_sets(&g), Err(Error::Precondition(_))));
    }

    #[test]
    fn normalize_fixtures() {
        let t = normalize_to_prop2(&fixtures::ab_cd()).unwrap();
        assert!(prop2_condition(&t.grammar).unwrap().holds);
        // Only `A` is shared, and it has no branch productions, so tail
        // elimination is skipped under the conflict scope.
        assert_eq!(t.grammar.production_text(0), "S -> a A$1 b X");

        let g2 = fixtures::anbn();
        assert_eq!(normalize_to_prop2(&g2).unwrap().grammar, g2);

        let t = normalize_to_prop2(&fixtures::shared_tail()).unwrap();
        assert!(prop2_condition(&t.grammar).unwrap().holds);

        let err = normalize_to_prop2(&fixtures::nested_conflict()).unwrap_err();
        assert!(matches!(err, Error::Precondition(ref m) if m.contains("{S}")));
    }

    #[test]
    fn prefix_elimination() {
        let t = eliminate_regular_prefix_gnf(&fixtures::prefix()).unwrap();
        assert_eq!(
            text(&t),
            "kind: gnf\nstart: S\nterminals: a p q\nS -> a P$1\nP -> p\nQ -> q\nP$1 -> p Q\n"
        );
        let g1 = fixtures::arith();
        assert_eq!(eliminate_regular_prefix_gnf(&g1).unwrap().grammar, g1);
        let right_linear = parse_grammar("kind: gnf\nstart: S\nterminals: a\nS -> a S\nS -> a\n").unwrap();
        assert!(eliminate_regular_prefix_gnf(&right_linear).unwrap().unchanged());
    }

    #[test]
    fn prefix_elimination_with_three_body_symbols() {
        let t = eliminate_regular_prefix_gnf(&fixtures::three_body()).unwrap();
        assert_eq!(
            text(&t),
            "kind: gnf\nstart: S\nterminals: a p q r\n\
             S -> a P$1\nP -> p\nP -> p P\nQ -> q\nR -> r\n\
             Q$1 -> q R\nP$1 -> p Q$1\nP$1 -> p P$1\n"
        );
    }

    #[test]
    fn provenance_comments() {
        let t = eliminate_regular_tails_lid(&fixtures::ab_cd()).unwrap();
        let out = t.to_text();
        assert!(out.starts_with("# A$1 replica of A, step 1\n# A$2 replica of A, step 2\n"));
        assert_eq!(parse_grammar(&out).unwrap(), t.grammar);
    }

    #[test]
    fn replicas_are_fresh_even_with_dollar_names() {
        let g = parse_grammar("kind: lid\nstart: S\nterminals: a b\nS -> a A$1 b X\nA$1 -> eps\nX -> eps\nA$1$1 -> eps\n")
            .unwrap();
        let t = eliminate_regular_tails_lid(&g).unwrap();
        let r = t.replicas[0];
        assert_eq!(t.grammar.nt_name(r.replica), "A$1$2");
    }

    #[test]
    fn normalize_retries_with_all_tails() {
        let g = parse_grammar(
            "kind: lid\nstart: S\nterminals: a b c\nS -> eps\nA -> eps\nB -> a D a C\nC -> a A\nD -> c B\nC -> b A b A\n",
        )
        .unwrap();
        assert!(matches!(
            separate(&g, TailScope::Conflicts, 1),
            Err(Error::Postcondition(_))
        ));
        let t = normalize_to_prop2(&g).unwrap();
        assert!(prop2_condition(&t.grammar).unwrap().holds);
    }

    #[test]
    fn normalize_reports_unresolved_conflicts() {
        // A and C reach each other through branch productions, so neither
        // tail can be eliminated and every copy of R(A) carries a branch.
        let g = parse_grammar(
            "kind: lid\nstart: S\nterminals: a b c\nS -> eps\nA -> b C b S\nB -> a B\nC -> b S\nA -> eps\nC -> c B b C\nC -> b A c S\n",
        )
        .unwrap();
        assert!(prop3_condition(&g).unwrap().holds);
        assert!(matches!(normalize_to_prop2(&g), Err(Error::Postcondition(_))));
    }
}
