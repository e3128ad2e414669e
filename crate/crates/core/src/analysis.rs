//! Decidable exactness conditions, regular nonterminals and ancestor pairs.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::grammar::{nullables, require_kind, Grammar, GrammarKind, Nt, Production, RSets, Rhs, Term};

/// At most this many witnesses are collected per report.
pub const WITNESS_CAP: usize = 100;

/// A pair of branch productions violating a condition, with the offending
/// nonterminals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub first: usize,
    pub second: usize,
    pub members: Vec<Nt>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionReport {
    pub holds: bool,
    pub witnesses: Vec<Witness>,
    /// Set when more than [`WITNESS_CAP`] violations exist.
    pub truncated: bool,
}

impl ConditionReport {
    fn from_witnesses(mut witnesses: Vec<Witness>) -> ConditionReport {
        let truncated = witnesses.len() > WITNESS_CAP;
        witnesses.truncate(WITNESS_CAP);
        ConditionReport {
            holds: witnesses.is_empty(),
            witnesses,
            truncated,
        }
    }

    /// One line per witness.
    pub fn render(&self, g: &Grammar) -> String {
        let mut out = String::new();
        if self.holds {
            out.push_str("holds\n");
            return out;
        }
        for w in &self.witnesses {
            let members: Vec<&str> = w.members.iter().map(|&n| g.nt_name(n)).collect();
            let _ = writeln!(
                out,
                "p{} `{}` / p{} `{}`: {{{}}}",
                w.first,
                g.production_text(w.first),
                w.second,
                g.production_text(w.second),
                members.join(", ")
            );
        }
        if self.truncated {
            out.push_str("... (truncated)\n");
        }
        out
    }
}

#[derive(Clone, Copy)]
struct BranchView {
    idx: usize,
    inner: Nt,
    close: Term,
    next: Nt,
}

fn branches(g: &Grammar) -> Vec<BranchView> {
    g.branch_productions()
        .map(|(idx, p)| match p.rhs {
            Rhs::Branch {
                inner, close, next, ..
            } => BranchView {
                idx,
                inner,
                close,
                next,
            },
            _ => unreachable!(),
        })
        .collect()
}

fn intersection(rs: &RSets, a: Nt, b: Nt) -> Vec<Nt> {
    rs.of(a).intersection(rs.of(b)).copied().collect()
}

/// Exactness condition: every two branch productions either close with the
/// same `(terminal, nonterminal)` pair or have disjoint inner R-sets.
pub fn prop2_condition(g: &Grammar) -> Result<ConditionReport> {
    require_kind(g, GrammarKind::Lid)?;
    let rs = RSets::compute(g);
    let bs = branches(g);
    let mut witnesses = Vec::new();
    for (i, x) in bs.iter().enumerate() {
        for y in &bs[i + 1..] {
            if (x.close, x.next) == (y.close, y.next) {
                continue;
            }
            let shared = intersection(&rs, x.inner, y.inner);
            if !shared.is_empty() {
                witnesses.push(Witness {
                    first: x.idx,
                    second: y.idx,
                    members: shared,
                });
            }
        }
    }
    Ok(ConditionReport::from_witnesses(witnesses))
}

/// Least fixpoint shared by both regularity definitions. `irregular` marks
/// productions that disqualify a nonterminal in the base clause.
fn regular_fixpoint(g: &Grammar, irregular: impl Fn(&Production) -> bool) -> BTreeSet<Nt> {
    let rs = RSets::compute(g);
    let mut has_irregular = vec![false; g.nonterminals().len()];
    for p in g.productions() {
        if irregular(p) {
            has_irregular[p.lhs.index()] = true;
        }
    }
    let mut regular: BTreeSet<Nt> = g
        .nt_ids()
        .filter(|&a| rs.of(a).iter().all(|d| !has_irregular[d.index()]))
        .collect();
    loop {
        let added: Vec<Nt> = g
            .nt_ids()
            .filter(|a| !regular.contains(a))
            .filter(|&a| {
                g.productions_of(a)
                    .all(|(_, p)| p.rhs.nonterminals().iter().all(|n| regular.contains(n)))
            })
            .collect();
        if added.is_empty() {
            return regular;
        }
        regular.extend(added);
    }
}

/// Nonterminals whose sub-grammar is right-linear (LID definition).
pub fn regular_nonterminals_lid(g: &Grammar) -> Result<BTreeSet<Nt>> {
    require_kind(g, GrammarKind::Lid)?;
    Ok(regular_fixpoint(g, |p| p.rhs.is_branch()))
}

/// Nonterminals whose sub-grammar is right-linear (GNF definition: bodies of
/// length at most one).
pub fn regular_nonterminals_gnf(g: &Grammar) -> Result<BTreeSet<Nt>> {
    require_kind(g, GrammarKind::Gnf)?;
    Ok(regular_fixpoint(g, |p| {
        matches!(&p.rhs, Rhs::Gnf { body, .. } if body.len() > 1)
    }))
}

/// The closing pair `(c, C)` shared by every branch production `A -> b B c C`
/// with `d` in R(B). Requires the exactness condition and a nullable `d`.
pub fn ancestor_pair(g: &Grammar, d: Nt) -> Result<Option<(Term, Nt)>> {
    require_kind(g, GrammarKind::Lid)?;
    if !prop2_condition(g)?.holds {
        return Err(Error::Precondition(
            "ancestor pairs need the exactness condition to hold".into(),
        ));
    }
    if !nullables(g)?.contains(&d) {
        return Err(Error::Precondition(format!(
            "`{}` is not nullable",
            g.nt_name(d)
        )));
    }
    let rs = RSets::compute(g);
    let pairs: BTreeSet<(Term, Nt)> = branches(g)
        .into_iter()
        .filter(|b| rs.contains(b.inner, d))
        .map(|b| (b.close, b.next))
        .collect();
    match pairs.len() {
        0 => Ok(None),
        1 => Ok(pairs.into_iter().next()),
        _ => Err(Error::AmbiguousAncestor(g.nt_name(d).to_string())),
    }
}

/// Weaker condition: every nonterminal shared by the inner R-sets of two
/// disagreeing branch productions is regular.
pub fn prop3_condition(g: &Grammar) -> Result<ConditionReport> {
    require_kind(g, GrammarKind::Lid)?;
    let rs = RSets::compute(g);
    let regular = regular_nonterminals_lid(g)?;
    let bs = branches(g);
    let mut witnesses = Vec::new();
    for (i, x) in bs.iter().enumerate() {
        for y in &bs[i + 1..] {
            if (x.close, x.next) == (y.close, y.next) {
                continue;
            }
            let bad: Vec<Nt> = intersection(&rs, x.inner, y.inner)
                .into_iter()
                .filter(|n| !regular.contains(n))
                .collect();
            if !bad.is_empty() {
                witnesses.push(Witness {
                    first: x.idx,
                    second: y.idx,
                    members: bad,
                });
            }
        }
    }
    Ok(ConditionReport::from_witnesses(witnesses))
}

/// Members of R(B) for branch production `idx` that also lie in R(F) of some
/// branch production that closes differently.
pub fn conflict_set(g: &Grammar, rs: &RSets, idx: usize) -> BTreeSet<Nt> {
    let bs = branches(g);
    let Some(x) = bs.iter().find(|b| b.idx == idx) else {
        return BTreeSet::new();
    };
    let mut out = BTreeSet::new();
    for y in bs.iter().filter(|y| y.idx != idx) {
        if (x.close, x.next) != (y.close, y.next) {
            out.extend(intersection(rs, x.inner, y.inner));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::grammar::parse_grammar;

    fn names(g: &Grammar, set: impl IntoIterator<Item = Nt>) -> Vec<String> {
        let mut v: Vec<String> = set.into_iter().map(|n| g.nt_name(n).to_string()).collect();
        v.sort();
        v
    }

    fn lid(body: &str) -> Grammar {
        parse_grammar(&format!("kind: lid\nstart: S\nterminals: a b c d t ( ) [\n{body}")).unwrap()
    }

    #[test]
    fn prop2_on_fixtures() {
        assert!(prop2_condition(&fixtures::anbn()).unwrap().holds);

        let g3 = fixtures::ab_cd();
        let report = prop2_condition(&g3).unwrap();
        assert!(!report.holds);
        assert_eq!(report.witnesses.len(), 1);
        let w = &report.witnesses[0];
        assert_eq!((w.first, w.second), (0, 1));
        assert_eq!(names(&g3, w.members.clone()), ["A"]);

        let shared_close = lid("S -> ( S ) R\nS -> [ S ) R\nS -> eps\nR -> eps\n");
        assert!(prop2_condition(&shared_close).unwrap().holds);

        assert!(prop2_condition(&fixtures::arith()).is_err());
    }

    #[test]
    fn regular_lid() {
        let g2 = fixtures::anbn();
        assert_eq!(names(&g2, regular_nonterminals_lid(&g2).unwrap()), ["T"]);
        let g3 = fixtures::ab_cd();
        assert_eq!(names(&g3, regular_nonterminals_lid(&g3).unwrap()), ["A", "S", "X", "Y"]);
        let g = lid("S -> eps\n");
        assert_eq!(names(&g, regular_nonterminals_lid(&g).unwrap()), ["S"]);
    }

    #[test]
    fn regular_gnf() {
        let g1 = fixtures::arith();
        assert_eq!(names(&g1, regular_nonterminals_gnf(&g1).unwrap()), ["L", "R"]);
        let right_linear = parse_grammar("kind: gnf\nstart: S\nterminals: a\nS -> a S\nS -> a\n").unwrap();
        assert_eq!(names(&right_linear, regular_nonterminals_gnf(&right_linear).unwrap()), ["S"]);
        let nested = parse_grammar("kind: gnf\nstart: S\nterminals: a b\nS -> a S S\nS -> b\n").unwrap();
        assert!(regular_nonterminals_gnf(&nested).unwrap().is_empty());
    }

    #[test]
    fn ancestor_pairs() {
        let g2 = fixtures::anbn();
        let b = g2.terminal("b").unwrap();
        let t = g2.nonterminal("T").unwrap();
        assert_eq!(ancestor_pair(&g2, g2.nonterminal("S").unwrap()).unwrap(), Some((b, t)));
        assert_eq!(ancestor_pair(&g2, t).unwrap(), Some((b, t)));

        let g = lid("S -> a X b T\nX -> eps\nT -> eps\n");
        assert_eq!(ancestor_pair(&g, g.nonterminal("T").unwrap()).unwrap(), None);
        assert!(ancestor_pair(&g, g.nonterminal("S").unwrap()).is_err());

        let g3 = fixtures::ab_cd();
        assert!(matches!(
            ancestor_pair(&g3, g3.nonterminal("A").unwrap()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn prop3_on_fixtures() {
        assert!(prop3_condition(&fixtures::ab_cd()).unwrap().holds);
        assert!(prop3_condition(&fixtures::anbn()).unwrap().holds);

        let g = fixtures::nested_conflict();
        assert_eq!(names(&g, regular_nonterminals_lid(&g).unwrap()), ["X", "Y"]);
        let report = prop3_condition(&g).unwrap();
        assert!(!report.holds);
        assert_eq!(names(&g, report.witnesses[0].members.clone()), ["S"]);
        assert!(report.render(&g).contains("{S}"));
    }

    #[test]
    fn conflict_sets() {
        let g = fixtures::shared_tail();
        let rs = RSets::compute(&g);
        assert_eq!(names(&g, conflict_set(&g, &rs, 0)), ["C"]);
        assert_eq!(names(&g, conflict_set(&g, &rs, 1)), ["C"]);
        assert!(conflict_set(&g, &rs, 2).is_empty());
    }

    #[test]
    fn witnesses_are_capped() {
        // 16 branch productions with distinct closes all sharing `A`.
        let mut body = String::new();
        for i in 0..16 {
            body.push_str(&format!("S -> a A b X{i}\nX{i} -> eps\n"));
        }
        body.push_str("A -> eps\n");
        let g = lid(&body);
        let report = prop2_condition(&g).unwrap();
        assert!(report.truncated);
        assert_eq!(report.witnesses.len(), WITNESS_CAP);
    }
}
