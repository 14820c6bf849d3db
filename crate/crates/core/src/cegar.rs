//! Counterexample-guided refinement for matching precedence.
//!
//! The solver sees an overapproximate model. Each candidate assignment is
//! replayed through the concrete matcher; disagreements become refinement
//! clauses until a validated model, unsat, or the iteration limit.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::ir::{ApiMode, Assignment, CapVar, ConstraintProblem, Formula, IntExpr, IntVar, Polarity, RegexConstraint, Term};
use crate::matcher::{match_full, MatchError, RegexValue};

pub const DEFAULT_REFINEMENT_LIMIT: usize = 20;

/// One solver call's answer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolverAnswer {
    Sat(Assignment),
    Unsat,
    Unknown(String),
}

/// A string solver that accepts a problem and then additional assertions.
pub trait Backend {
    type Error;
    /// Solves a fresh problem. A sat answer covers every variable of the
    /// problem, internal ones included.
    fn start(&mut self, problem: &ConstraintProblem) -> Result<SolverAnswer, Self::Error>;
    /// Adds assertions to the current problem and solves again.
    fn refine(&mut self, clauses: &[Formula]) -> Result<SolverAnswer, Self::Error>;
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RefinementClause {
    /// `w = M[w] ⟹ ⋀ C_i = C♮_i`, plus the concrete `lastIndex`.
    CaptureFix { subject: Term, word: String, captures: Vec<(CapVar, Option<String>)>, last_index: Option<(IntVar, i64)> },
    /// `w ≠ M[w]`.
    WordExclusion { subject: Term, word: String },
}

impl RefinementClause {
    pub fn to_formula(&self) -> Formula {
        match self {
            RefinementClause::CaptureFix { subject, word, captures, last_index } => {
                let mut parts: Vec<Formula> = captures
                    .iter()
                    .map(|(c, v)| match v {
                        Some(v) => Formula::CapEq(c.clone(), Term::Lit(v.clone())),
                        None => Formula::CapUndef(c.clone()),
                    })
                    .collect();
                if let Some((v, li)) = last_index {
                    parts.push(Formula::IntEq(IntExpr::Var(v.clone()), IntExpr::Const(*li)));
                }
                Formula::implies(Formula::StrEq(subject.clone(), Term::Lit(word.clone())), Formula::and(parts))
            }
            RefinementClause::WordExclusion { subject, word } => {
                Formula::not(Formula::StrEq(subject.clone(), Term::Lit(word.clone())))
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Sat,
    Unsat,
    Unknown,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Sat => "sat",
            Status::Unsat => "unsat",
            Status::Unknown => "unknown",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveResult {
    pub status: Status,
    /// Named variables only.
    pub model: Option<Assignment>,
    pub refinements_used: usize,
    pub per_constraint_refinements: Vec<usize>,
    /// Every clause added, in order.
    pub clauses: Vec<RefinementClause>,
    /// Why the result is unknown.
    pub reason: Option<String>,
}

/// What the concrete matcher says about one regex constraint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConcreteOutcome {
    pub matched: bool,
    pub captures: Vec<Option<String>>,
    pub last_index_after: i64,
}

/// Runs the constraint's regex on a concrete subject.
pub fn concrete_match(rc: &RegexConstraint, subject: &str) -> Result<ConcreteOutcome, MatchError> {
    match rc.mode {
        ApiMode::Raw => {
            let caps = match_full(&rc.ast, subject, &rc.flags)?;
            Ok(ConcreteOutcome { matched: caps.is_some(), captures: caps.unwrap_or_default(), last_index_after: 0 })
        }
        ApiMode::Exec { last_index } => {
            let mut rv = RegexValue::new(rc.ast.clone(), rc.flags);
            rv.last_index = last_index;
            let r = rv.exec(subject)?;
            Ok(ConcreteOutcome { matched: r.matched, captures: r.captures, last_index_after: rv.last_index as i64 })
        }
    }
}

/// The clause a model needs for this constraint, if any.
pub fn refine(rc: &RegexConstraint, model: &Assignment, concrete: &ConcreteOutcome) -> Option<RefinementClause> {
    let word = model.term(&rc.subject)?;
    let exclude = || RefinementClause::WordExclusion { subject: rc.subject.clone(), word: word.clone() };
    match (rc.polarity, concrete.matched) {
        (Polarity::NonMember, true) | (Polarity::Member, false) => Some(exclude()),
        (Polarity::NonMember, false) => None,
        (Polarity::Member, true) => {
            let mut agree = true;
            for (i, c) in rc.captures.iter().enumerate() {
                let expected = concrete.captures.get(i).cloned().flatten();
                agree &= model.captures.get(c) == Some(&expected);
            }
            let last_index = rc.last_index_after.as_ref().map(|v| (v.clone(), concrete.last_index_after));
            if let Some((v, li)) = &last_index {
                agree &= model.ints.get(v) == Some(li);
            }
            if agree {
                return None;
            }
            let captures = rc
                .captures
                .iter()
                .enumerate()
                .map(|(i, c)| (c.clone(), concrete.captures.get(i).cloned().flatten()))
                .collect();
            Some(RefinementClause::CaptureFix { subject: rc.subject.clone(), word, captures, last_index })
        }
    }
}

/// Refines until the model agrees with the matcher. `limit` bounds the number of refinement rounds.
pub fn cegar_solve<B: Backend>(problem: &ConstraintProblem, backend: &mut B, limit: usize) -> Result<SolveResult, B::Error> {
    let mut result = SolveResult {
        status: Status::Unknown,
        model: None,
        refinements_used: 0,
        per_constraint_refinements: alloc::vec![0; problem.regex_constraints.len()],
        clauses: Vec::new(),
        reason: None,
    };
    let mut answer = backend.start(problem)?;
    loop {
        let model = match answer {
            SolverAnswer::Unsat => {
                result.status = Status::Unsat;
                return Ok(result);
            }
            SolverAnswer::Unknown(why) => {
                result.reason = Some(why);
                return Ok(result);
            }
            SolverAnswer::Sat(m) => m,
        };
        let mut fresh = Vec::new();
        for (j, rc) in problem.regex_constraints.iter().enumerate() {
            let Some(word) = model.term(&rc.subject) else {
                result.reason = Some(String::from("solver model lacks a subject value"));
                return Ok(result);
            };
            let concrete = match concrete_match(rc, &word) {
                Ok(c) => c,
                Err(e) => {
                    result.reason = Some(alloc::format!("{e}"));
                    return Ok(result);
                }
            };
            if let Some(clause) = refine(rc, &model, &concrete) {
                result.per_constraint_refinements[j] += 1;
                fresh.push(clause);
            }
        }
        if fresh.is_empty() {
            result.status = Status::Sat;
            result.model = Some(model.named_only());
            return Ok(result);
        }
        if result.refinements_used == limit {
            result.reason = Some(alloc::format!("refinement limit {limit} reached"));
            return Ok(result);
        }
        result.refinements_used += 1;
        let formulas: Vec<Formula> = fresh.iter().map(|c| c.to_formula()).collect();
        result.clauses.extend(fresh);
        answer = backend.refine(&formulas)?;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::extends;
    use crate::model::{add_regex_constraint, regex_constraint, UnrollConfig};
    use crate::parse::parse_pattern;
    use alloc::collections::VecDeque;

    /// Replays scripted answers, recording the clauses it is given.
    struct Scripted {
        answers: VecDeque<SolverAnswer>,
        received: Vec<Formula>,
    }

    impl Backend for Scripted {
        type Error = ();
        fn start(&mut self, _: &ConstraintProblem) -> Result<SolverAnswer, ()> {
            self.answers.pop_front().ok_or(())
        }
        fn refine(&mut self, clauses: &[Formula]) -> Result<SolverAnswer, ()> {
            self.received.extend_from_slice(clauses);
            self.answers.pop_front().ok_or(())
        }
    }

    fn problem(src: &str) -> ConstraintProblem {
        let (ast, flags) = parse_pattern(src, "").unwrap();
        let mut p = ConstraintProblem::new();
        let w = p.declare_string("w", Some(6));
        let rc = regex_constraint(&mut p, Term::Var(w), ast, flags, src, Polarity::Member, ApiMode::Raw, Some("C"));
        add_regex_constraint(&mut p, rc, &UnrollConfig::default()).unwrap();
        p
    }

    fn tuple(w: &str, c0: Option<&str>, c1: Option<&str>) -> Assignment {
        let mut a = Assignment::default();
        a.strings.insert(crate::ir::StrVar::Named("w".into()), w.into());
        a.captures.insert(CapVar::Named("C0".into()), c0.map(Into::into));
        a.captures.insert(CapVar::Named("C1".into()), c1.map(Into::into));
        a
    }

    #[test]
    fn spurious_capture_gets_capture_fix() {
        let mut p = problem("^a*(a)?$");
        p.assert(Formula::StrEq(Term::Var(crate::ir::StrVar::Named("w".into())), Term::lit("aa")));
        p.assert(Formula::CapEq(CapVar::Named("C1".into()), Term::lit("a")));
        let spurious = tuple("aa", Some("aa"), Some("a"));
        assert!(extends(&p.assertions, &spurious));
        let mut b = Scripted { answers: [SolverAnswer::Sat(spurious), SolverAnswer::Unsat].into(), received: Vec::new() };
        let r = cegar_solve(&p, &mut b, DEFAULT_REFINEMENT_LIMIT).unwrap();
        assert_eq!(r.status, Status::Unsat);
        assert_eq!(r.refinements_used, 1);
        let w = Term::Var(crate::ir::StrVar::Named("w".into()));
        let expected = Formula::implies(
            Formula::StrEq(w, Term::lit("aa")),
            Formula::and(alloc::vec![
                Formula::CapEq(CapVar::Named("C0".into()), Term::lit("aa")),
                Formula::CapUndef(CapVar::Named("C1".into())),
            ]),
        );
        assert_eq!(b.received, core::slice::from_ref(&expected));
        // With the clause the spurious tuple is gone.
        let mut q = p.clone();
        q.assert(expected);
        assert!(!extends(&q.assertions, &tuple("aa", Some("aa"), Some("a"))));
    }

    #[test]
    fn clause_kinds() {
        let (ast, flags) = parse_pattern("ab", "").unwrap();
        let mut p = ConstraintProblem::new();
        let w = p.declare_string("w", None);
        let rc = regex_constraint(&mut p, Term::Var(w.clone()), ast, flags, "ab", Polarity::NonMember, ApiMode::Raw, None);
        let mut m = Assignment::default();
        m.strings.insert(w, "ab".into());
        let c = concrete_match(&rc, "ab").unwrap();
        assert!(matches!(refine(&rc, &m, &c), Some(RefinementClause::WordExclusion { .. })));
        let mut member = rc.clone();
        member.polarity = Polarity::Member;
        let c = concrete_match(&member, "ab").unwrap();
        assert_eq!(refine(&member, &m, &c).map(|c| matches!(c, RefinementClause::CaptureFix { .. })), Some(true));
    }

    #[test]
    fn limit_gives_unknown() {
        let p = problem("^a*(a)?$");
        let spurious = SolverAnswer::Sat(tuple("aa", Some("aa"), Some("a")));
        let mut b = Scripted { answers: (0..4).map(|_| spurious.clone()).collect(), received: Vec::new() };
        let r = cegar_solve(&p, &mut b, 2).unwrap();
        assert_eq!(r.status, Status::Unknown);
        assert_eq!(r.refinements_used, 2);
    }
}
