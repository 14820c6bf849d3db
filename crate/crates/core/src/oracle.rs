//! Brute-force ground truth over small alphabets.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::ast::{FlagSet, RegexAst};
use crate::cegar::{concrete_match, SolveResult, Status};
use crate::eval::extends;
use crate::ir::{Assignment, ConstraintProblem, Polarity, StrVar};
use crate::matcher::{match_full, MatchError};

pub const MAX_ENUMERATION_LEN: usize = 8;
pub const DEFAULT_BUDGET: u64 = 2_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumerationSpec {
    pub alphabet: Vec<char>,
    pub max_len: usize,
    /// Largest number of candidates tried before giving up.
    pub budget: u64,
}

impl EnumerationSpec {
    pub fn new(alphabet: &str, max_len: usize) -> EnumerationSpec {
        EnumerationSpec { alphabet: alphabet.chars().collect(), max_len, budget: DEFAULT_BUDGET }
    }

    /// Number of words of length at most `len`.
    fn words_up_to(&self, len: usize) -> u64 {
        let k = self.alphabet.len() as u64;
        let mut total = 0u64;
        let mut layer = 1u64;
        for _ in 0..=len {
            total = total.saturating_add(layer);
            layer = layer.saturating_mul(k);
        }
        total
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleError {
    BudgetExceeded { needed: u64, budget: u64 },
    InvalidSpec(&'static str),
    /// A string variable has no length bound within the spec.
    Unbounded(String),
    Match(MatchError),
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::BudgetExceeded { needed, budget } => write!(f, "enumeration needs {needed} candidates, budget is {budget}"),
            OracleError::InvalidSpec(why) => write!(f, "invalid enumeration spec: {why}"),
            OracleError::Unbounded(v) => write!(f, "string variable {v} lacks a length bound within the enumeration limit"),
            OracleError::Match(e) => write!(f, "{e}"),
        }
    }
}

impl From<MatchError> for OracleError {
    fn from(e: MatchError) -> Self {
        OracleError::Match(e)
    }
}

/// `(w, C0, ..., Cn)`.
pub type CaptureTuple = (String, Vec<Option<String>>);

fn check(spec: &EnumerationSpec) -> Result<(), OracleError> {
    if spec.alphabet.is_empty() {
        return Err(OracleError::InvalidSpec("empty alphabet"));
    }
    if spec.max_len > MAX_ENUMERATION_LEN {
        return Err(OracleError::InvalidSpec("maximum length above 8"));
    }
    Ok(())
}

/// Every word over the alphabet of length at most `len`, shortest first.
pub fn words(alphabet: &[char], len: usize) -> Vec<String> {
    let mut out = alloc::vec![String::new()];
    let mut layer = alloc::vec![String::new()];
    for _ in 0..len {
        let mut next = Vec::with_capacity(layer.len() * alphabet.len());
        for w in &layer {
            for c in alphabet {
                let mut v = w.clone();
                v.push(*c);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// The matcher-realizable part of the capturing language up to the bound.
pub fn capturing_language_enumerate(ast: &RegexAst, flags: &FlagSet, spec: &EnumerationSpec) -> Result<BTreeSet<CaptureTuple>, OracleError> {
    check(spec)?;
    let needed = spec.words_up_to(spec.max_len);
    if needed > spec.budget {
        return Err(OracleError::BudgetExceeded { needed, budget: spec.budget });
    }
    let mut out = BTreeSet::new();
    for w in words(&spec.alphabet, spec.max_len) {
        if let Some(caps) = match_full(ast, &w, flags)? {
            out.insert((w, caps));
        }
    }
    Ok(out)
}

/// Decides a problem by trying every bounded word for every string variable.
/// Regex constraints are checked with the matcher, whose captures and
/// `lastIndex` are then fixed before the side assertions are evaluated.
pub fn brute_force_solve(problem: &ConstraintProblem, spec: &EnumerationSpec) -> Result<SolveResult, OracleError> {
    check(spec)?;
    let mut domains = Vec::new();
    let mut needed = 1u64;
    for d in &problem.string_vars {
        let bound = match d.max_len {
            Some(n) if n <= spec.max_len => n,
            _ => return Err(OracleError::Unbounded(d.name.clone())),
        };
        needed = needed.saturating_mul(spec.words_up_to(bound));
        domains.push((StrVar::Named(d.name.clone()), bound));
    }
    if needed > spec.budget {
        return Err(OracleError::BudgetExceeded { needed, budget: spec.budget });
    }
    let domains: Vec<(StrVar, Vec<String>)> = domains.into_iter().map(|(v, n)| (v, words(&spec.alphabet, n))).collect();
    let side: Vec<_> = problem.side_assertions().cloned().collect();
    let mut index = alloc::vec![0usize; domains.len()];
    loop {
        let mut a = Assignment::default();
        for ((v, ws), i) in domains.iter().zip(&index) {
            a.strings.insert(v.clone(), ws[*i].clone());
        }
        if let Some(found) = attempt(problem, &side, a)? {
            return Ok(SolveResult {
                status: Status::Sat,
                model: Some(found),
                refinements_used: 0,
                per_constraint_refinements: alloc::vec![0; problem.regex_constraints.len()],
                clauses: Vec::new(),
                reason: None,
            });
        }
        // Odometer step.
        let mut k = 0;
        loop {
            if k == index.len() {
                return Ok(SolveResult {
                    status: Status::Unsat,
                    model: None,
                    refinements_used: 0,
                    per_constraint_refinements: alloc::vec![0; problem.regex_constraints.len()],
                    clauses: Vec::new(),
                    reason: None,
                });
            }
            index[k] += 1;
            if index[k] < domains[k].1.len() {
                break;
            }
            index[k] = 0;
            k += 1;
        }
    }
}

fn attempt(problem: &ConstraintProblem, side: &[crate::ir::Formula], mut a: Assignment) -> Result<Option<Assignment>, OracleError> {
    for rc in &problem.regex_constraints {
        let Some(word) = a.term(&rc.subject) else {
            return Ok(None);
        };
        let concrete = concrete_match(rc, &word)?;
        match rc.polarity {
            Polarity::NonMember if concrete.matched => return Ok(None),
            Polarity::NonMember => {}
            Polarity::Member if !concrete.matched => return Ok(None),
            Polarity::Member => {
                for (i, c) in rc.captures.iter().enumerate() {
                    let v = concrete.captures.get(i).cloned().flatten();
                    match a.captures.get(c) {
                        Some(old) if *old != v => return Ok(None),
                        _ => {
                            a.captures.insert(c.clone(), v);
                        }
                    }
                }
                if let Some(li) = &rc.last_index_after {
                    match a.ints.get(li) {
                        Some(old) if *old != concrete.last_index_after => return Ok(None),
                        _ => {
                            a.ints.insert(li.clone(), concrete.last_index_after);
                        }
                    }
                }
            }
        }
    }
    Ok(if extends(side, &a) { Some(a.named_only()) } else { None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ir::{ApiMode, CapVar, Formula, Term};
    use crate::model::{add_regex_constraint, regex_constraint, UnrollConfig};
    use crate::parse::parse_pattern;
    use crate::preprocess::backref::{classify_backreferences, BackrefKind};
    use alloc::string::ToString;
    use proptest::prelude::*;

    fn some(s: &str) -> Option<String> {
        Some(s.to_string())
    }

    fn enumerate(src: &str, alphabet: &str, n: usize) -> BTreeSet<CaptureTuple> {
        let (ast, flags) = parse_pattern(src, "").unwrap();
        capturing_language_enumerate(&ast, &flags, &EnumerationSpec::new(alphabet, n)).unwrap()
    }

    #[test]
    fn enumeration_examples() {
        let l = enumerate(r"^(?:a|(b))\1$", "ab", 2);
        assert!(l.contains(&("a".to_string(), alloc::vec![some("a"), None])));
        assert!(l.contains(&("bb".to_string(), alloc::vec![some("bb"), some("b")])));
        assert!(!l.contains(&("b".to_string(), alloc::vec![some("b"), some("b")])));
        assert_eq!(l.len(), 2);
        assert_eq!(enumerate("^$", "ab", 3), [(String::new(), alloc::vec![some("")])].into_iter().collect());
        let l = enumerate("^(a)|(b)$", "ab", 1);
        assert!(l.contains(&("a".to_string(), alloc::vec![some("a"), some("a"), None])));
    }

    #[test]
    fn budget_is_enforced() {
        let (ast, flags) = parse_pattern("a", "").unwrap();
        let mut spec = EnumerationSpec::new("abcd", 8);
        spec.budget = 1000;
        assert!(matches!(capturing_language_enumerate(&ast, &flags, &spec), Err(OracleError::BudgetExceeded { .. })));
        assert!(matches!(capturing_language_enumerate(&ast, &flags, &EnumerationSpec::new("a", 9)), Err(OracleError::InvalidSpec(_))));
    }

    fn member(p: &mut ConstraintProblem, src: &str, prefix: &str) {
        let (ast, flags) = parse_pattern(src, "").unwrap();
        let w = Term::Var(StrVar::Named("w".into()));
        let rc = regex_constraint(p, w, ast, flags, src, Polarity::Member, ApiMode::Raw, Some(prefix));
        add_regex_constraint(p, rc, &UnrollConfig::default()).unwrap();
    }

    #[test]
    fn solve_examples() {
        let spec = EnumerationSpec::new("ab", 6);
        let mut p = ConstraintProblem::new();
        p.declare_string("w", Some(6));
        member(&mut p, "^a*(a)?$", "C");
        p.assert(Formula::StrEq(Term::Var(StrVar::Named("w".into())), Term::lit("aa")));
        p.assert(Formula::CapEq(CapVar::Named("C1".into()), Term::lit("a")));
        assert_eq!(brute_force_solve(&p, &spec).unwrap().status, Status::Unsat);

        let mut p = ConstraintProblem::new();
        p.declare_string("w", Some(6));
        member(&mut p, "^ab$", "C");
        let r = brute_force_solve(&p, &spec).unwrap();
        assert_eq!(r.status, Status::Sat);
        assert_eq!(r.model.unwrap().string("w"), Some("ab"));

        let mut p = ConstraintProblem::new();
        p.declare_string("w", Some(6));
        member(&mut p, "a", "C");
        member(&mut p, "b", "D");
        assert_eq!(brute_force_solve(&p, &spec).unwrap().status, Status::Unsat);

        let mut p = ConstraintProblem::new();
        p.declare_string("w", None);
        assert!(matches!(brute_force_solve(&p, &spec), Err(OracleError::Unbounded(_))));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn enumerated_tuples_satisfy_model(src in crate::model::tests::regex_source()) {
            let Ok((ast, flags)) = parse_pattern(&src, "") else { return Ok(()) };
            prop_assume!(classify_backreferences(&ast).iter().all(|c| matches!(c.kind, BackrefKind::Empty | BackrefKind::Immutable)));
            let mut p = ConstraintProblem::new();
            p.declare_string("w", Some(4));
            let w = Term::Var(StrVar::Named("w".into()));
            let rc = regex_constraint(&mut p, w, ast.clone(), flags, &src, Polarity::Member, ApiMode::Raw, Some("C"));
            let caps = rc.captures.clone();
            let cfg = UnrollConfig { max_repeats: 6, ..UnrollConfig::default() };
            prop_assume!(add_regex_constraint(&mut p, rc, &cfg).is_ok());
            for (word, tuple) in capturing_language_enumerate(&ast, &flags, &EnumerationSpec::new("ab", 4)).unwrap() {
                prop_assert!(match_full(&ast, &word, &flags).unwrap().as_ref() == Some(&tuple));
                let mut a = Assignment::default();
                a.strings.insert(StrVar::Named("w".into()), word.clone());
                for (c, v) in caps.iter().zip(&tuple) {
                    a.captures.insert(c.clone(), v.clone());
                }
                prop_assert!(extends(&p.assertions, &a), "{} {:?}", word, tuple);
            }
        }
    }
}
