//! Solver-facing constraint language.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::ast::{FlagSet, RegexAst};
use crate::preprocess::ClassicalRegex;

/// A string variable; internal variables are introduced by model
/// construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StrVar {
    Named(String),
    Internal(u32),
}

/// A capture variable: a string or undefined.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CapVar {
    Named(String),
    Internal(u32),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IntVar {
    Named(String),
    Internal(u32),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Lit(String),
    Var(StrVar),
    Cat(Vec<Term>),
    /// The value of a capture; ε when undefined.
    CapVal(CapVar),
}

impl Term {
    pub fn lit(s: &str) -> Term {
        Term::Lit(s.into())
    }

    pub fn var(v: &StrVar) -> Term {
        Term::Var(v.clone())
    }

    pub fn empty() -> Term {
        Term::Lit(String::new())
    }

    /// Concatenation with adjacent literals merged and nesting flattened.
    pub fn cat(parts: Vec<Term>) -> Term {
        let mut out: Vec<Term> = Vec::new();
        for p in parts {
            let pieces = match p {
                Term::Cat(inner) => inner,
                p => alloc::vec![p],
            };
            for piece in pieces {
                match (out.last_mut(), piece) {
                    (_, Term::Lit(s)) if s.is_empty() => {}
                    (Some(Term::Lit(prev)), Term::Lit(s)) => prev.push_str(&s),
                    (_, piece) => out.push(piece),
                }
            }
        }
        match out.len() {
            0 => Term::empty(),
            1 => out.pop().unwrap(),
            _ => Term::Cat(out),
        }
    }

    /// The literal value when the term has no variables.
    pub fn as_literal(&self) -> Option<&str> {
        match self {
            Term::Lit(s) => Some(s),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IntExpr {
    Const(i64),
    Var(IntVar),
    Len(Term),
    Add(Vec<IntExpr>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    StrEq(Term, Term),
    /// Equal lengths.
    LenEq(Term, Term),
    InRe(Term, ClassicalRegex),
    NotInRe(Term, ClassicalRegex),
    /// Defined and equal to the term.
    CapEq(CapVar, Term),
    CapUndef(CapVar),
    /// Both undefined, or both defined with equal values.
    CapSame(CapVar, CapVar),
    IntEq(IntExpr, IntExpr),
    IntLe(IntExpr, IntExpr),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Not(Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn and(parts: Vec<Formula>) -> Formula {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Formula::True => {}
                Formula::False => return Formula::False,
                Formula::And(inner) => out.extend(inner),
                p => out.push(p),
            }
        }
        match out.len() {
            0 => Formula::True,
            1 => out.pop().unwrap(),
            _ => Formula::And(out),
        }
    }

    pub fn or(parts: Vec<Formula>) -> Formula {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Formula::False => {}
                Formula::True => return Formula::True,
                Formula::Or(inner) => out.extend(inner),
                p => out.push(p),
            }
        }
        match out.len() {
            0 => Formula::False,
            1 => out.pop().unwrap(),
            _ => Formula::Or(out),
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        match f {
            Formula::True => Formula::False,
            Formula::False => Formula::True,
            Formula::Not(inner) => *inner,
            f => Formula::Not(Box::new(f)),
        }
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        match (a, b) {
            (Formula::False, _) | (_, Formula::True) => Formula::True,
            (Formula::True, b) => b,
            (a, b) => Formula::Implies(Box::new(a), Box::new(b)),
        }
    }

    pub fn eq(a: Term, b: Term) -> Formula {
        if a == b {
            Formula::True
        } else {
            Formula::StrEq(a, b)
        }
    }

    pub fn defined(c: &CapVar) -> Formula {
        Formula::not(Formula::CapUndef(c.clone()))
    }

    /// Visits every variable occurring in the formula.
    pub fn visit_vars(&self, f: &mut dyn FnMut(VarRef)) {
        match self {
            Formula::True | Formula::False => {}
            Formula::StrEq(a, b) | Formula::LenEq(a, b) => {
                visit_term(a, f);
                visit_term(b, f);
            }
            Formula::InRe(t, _) | Formula::NotInRe(t, _) => visit_term(t, f),
            Formula::CapEq(c, t) => {
                f(VarRef::Cap(c.clone()));
                visit_term(t, f);
            }
            Formula::CapUndef(c) => f(VarRef::Cap(c.clone())),
            Formula::CapSame(a, b) => {
                f(VarRef::Cap(a.clone()));
                f(VarRef::Cap(b.clone()));
            }
            Formula::IntEq(a, b) | Formula::IntLe(a, b) => {
                visit_int(a, f);
                visit_int(b, f);
            }
            Formula::And(parts) | Formula::Or(parts) => parts.iter().for_each(|p| p.visit_vars(f)),
            Formula::Not(inner) => inner.visit_vars(f),
            Formula::Implies(a, b) => {
                a.visit_vars(f);
                b.visit_vars(f);
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarRef {
    Str(StrVar),
    Cap(CapVar),
    Int(IntVar),
}

pub fn visit_term(t: &Term, f: &mut dyn FnMut(VarRef)) {
    match t {
        Term::Lit(_) => {}
        Term::Var(v) => f(VarRef::Str(v.clone())),
        Term::Cat(parts) => parts.iter().for_each(|p| visit_term(p, f)),
        Term::CapVal(c) => f(VarRef::Cap(c.clone())),
    }
}

fn visit_int(e: &IntExpr, f: &mut dyn FnMut(VarRef)) {
    match e {
        IntExpr::Const(_) => {}
        IntExpr::Var(v) => f(VarRef::Int(v.clone())),
        IntExpr::Len(t) => visit_term(t, f),
        IntExpr::Add(parts) => parts.iter().for_each(|p| visit_int(p, f)),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Polarity {
    Member,
    NonMember,
}

/// How the regex is applied to its subject.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ApiMode {
    /// Membership of the capturing language: the whole subject is matched.
    Raw,
    /// `RegExp.prototype.exec` with the given initial `lastIndex`.
    Exec { last_index: usize },
}

/// A regex constraint kept for concrete validation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegexConstraint {
    pub subject: Term,
    /// One variable per capture, position 0 being the whole match.
    pub captures: Vec<CapVar>,
    pub polarity: Polarity,
    pub source: String,
    pub ast: RegexAst,
    pub flags: FlagSet,
    pub mode: ApiMode,
    /// Bound to `lastIndex` after the call, when present.
    pub last_index_after: Option<IntVar>,
    /// Index in [`ConstraintProblem::assertions`] of this constraint's model.
    pub model_assertion: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StringDecl {
    pub name: String,
    pub max_len: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConstraintProblem {
    pub string_vars: Vec<StringDecl>,
    pub capture_vars: Vec<String>,
    pub int_vars: Vec<String>,
    pub assertions: Vec<Formula>,
    pub regex_constraints: Vec<RegexConstraint>,
    next_internal: u32,
}

impl ConstraintProblem {
    pub fn new() -> ConstraintProblem {
        ConstraintProblem::default()
    }

    pub fn declare_string(&mut self, name: &str, max_len: Option<usize>) -> StrVar {
        if !self.string_vars.iter().any(|d| d.name == name) {
            self.string_vars.push(StringDecl { name: name.into(), max_len });
        }
        StrVar::Named(name.into())
    }

    pub fn declare_capture(&mut self, name: &str) -> CapVar {
        if !self.capture_vars.iter().any(|d| d == name) {
            self.capture_vars.push(name.into());
        }
        CapVar::Named(name.into())
    }

    pub fn declare_int(&mut self, name: &str) -> IntVar {
        if !self.int_vars.iter().any(|d| d == name) {
            self.int_vars.push(name.into());
        }
        IntVar::Named(name.into())
    }

    pub fn fresh_id(&mut self) -> u32 {
        let id = self.next_internal;
        self.next_internal += 1;
        id
    }

    pub fn fresh_str(&mut self) -> StrVar {
        StrVar::Internal(self.fresh_id())
    }

    pub fn fresh_cap(&mut self) -> CapVar {
        CapVar::Internal(self.fresh_id())
    }

    pub fn fresh_int(&mut self) -> IntVar {
        IntVar::Internal(self.fresh_id())
    }

    pub fn assert(&mut self, f: Formula) {
        if f != Formula::True {
            self.assertions.push(f);
        }
    }

    /// Assertions other than the compiled regex models.
    pub fn side_assertions(&self) -> impl Iterator<Item = &Formula> {
        let models: BTreeSet<usize> = self.regex_constraints.iter().filter_map(|rc| rc.model_assertion).collect();
        self.assertions.iter().enumerate().filter(move |(i, _)| !models.contains(i)).map(|(_, f)| f)
    }

    /// All variables referenced by assertions or declared, in a stable order.
    pub fn all_vars(&self) -> BTreeSet<VarRef> {
        let mut out = BTreeSet::new();
        for d in &self.string_vars {
            out.insert(VarRef::Str(StrVar::Named(d.name.clone())));
        }
        for c in &self.capture_vars {
            out.insert(VarRef::Cap(CapVar::Named(c.clone())));
        }
        for i in &self.int_vars {
            out.insert(VarRef::Int(IntVar::Named(i.clone())));
        }
        for a in &self.assertions {
            a.visit_vars(&mut |v| {
                out.insert(v);
            });
        }
        out
    }
}

/// Values for variables. Captures map to `None` when undefined.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Assignment {
    pub strings: BTreeMap<StrVar, String>,
    pub captures: BTreeMap<CapVar, Option<String>>,
    pub ints: BTreeMap<IntVar, i64>,
}

impl Assignment {
    pub fn string(&self, name: &str) -> Option<&str> {
        self.strings.get(&StrVar::Named(name.into())).map(|s| s.as_str())
    }

    pub fn capture(&self, name: &str) -> Option<Option<&str>> {
        self.captures.get(&CapVar::Named(name.into())).map(|c| c.as_deref())
    }

    /// Value of a term, if all its variables are assigned.
    pub fn term(&self, t: &Term) -> Option<String> {
        match t {
            Term::Lit(s) => Some(s.clone()),
            Term::Var(v) => self.strings.get(v).cloned(),
            Term::CapVal(c) => self.captures.get(c).map(|v| v.clone().unwrap_or_default()),
            Term::Cat(parts) => {
                let mut out = String::new();
                for p in parts {
                    out.push_str(&self.term(p)?);
                }
                Some(out)
            }
        }
    }

    /// Only the user-visible (named) variables.
    pub fn named_only(&self) -> Assignment {
        Assignment {
            strings: self.strings.iter().filter(|(k, _)| matches!(k, StrVar::Named(_))).map(|(k, v)| (k.clone(), v.clone())).collect(),
            captures: self.captures.iter().filter(|(k, _)| matches!(k, CapVar::Named(_))).map(|(k, v)| (k.clone(), v.clone())).collect(),
            ints: self.ints.iter().filter(|(k, _)| matches!(k, IntVar::Named(_))).map(|(k, v)| (k.clone(), *v)).collect(),
        }
    }
}
