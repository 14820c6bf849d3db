//! Capturing-language models: compiles a regex constraint into formulas.
//!
//! Membership is modeled structurally over the quantifier-reduced regex.
//! Every subterm is placed between a left context (everything consumed
//! before it, starting with the start marker) and a right context (everything
//! after it, ending with the end marker), so anchors, word boundaries and
//! lookaheads are constraints on the contexts. The whole-word language from
//! [`crate::lang`] is added alongside, which makes non-membership exact for
//! regexes without backreferences.

use alloc::borrow::Cow;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::ast::{FlagSet, Node, RegexAst};
use crate::ir::{ApiMode, CapVar, ConstraintProblem, Formula, IntExpr, Polarity, RegexConstraint, Term};
use crate::lang::{input_language, node_language, Approx, PrevClass, PREV_CLASSES};
use crate::preprocess::backref::{classify_backreferences, BackrefKind};
use crate::preprocess::classical::{line_terminators, user_alphabet, word_chars};
use crate::preprocess::{
    erase_captures, erase_relaxed, padding, rewrite_ignore_case, rewrite_quantifiers_with_budget, wrap_for_exec, CaptureSource,
    CharSet, ClassicalRegex, RewriteError, MARK_END, MARK_START,
};

/// Bound on modeled iterations where a quantified body holds a
/// backreference.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UnrollConfig {
    pub max_repeats: usize,
    pub rewrite_budget: usize,
}

impl Default for UnrollConfig {
    fn default() -> Self {
        UnrollConfig { max_repeats: 5, rewrite_budget: crate::preprocess::rewrite::DEFAULT_NODE_BUDGET }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModelError {
    Rewrite(RewriteError),
    Unsupported(&'static str),
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelError::Rewrite(e) => e.fmt(f),
            ModelError::Unsupported(what) => write!(f, "unsupported {what}"),
        }
    }
}

impl core::error::Error for ModelError {}

impl From<RewriteError> for ModelError {
    fn from(e: RewriteError) -> Self {
        ModelError::Rewrite(e)
    }
}

/// Index in the original input where an `exec` scan begins.
pub fn exec_start(flags: &FlagSet, last_index: usize) -> usize {
    if flags.global || flags.sticky {
        last_index
    } else {
        0
    }
}

fn any_user() -> ClassicalRegex {
    ClassicalRegex::star(ClassicalRegex::Set(user_alphabet()))
}

fn starting(set: CharSet) -> ClassicalRegex {
    ClassicalRegex::concat(alloc::vec![ClassicalRegex::Set(set), ClassicalRegex::any_word()])
}

fn ending(set: CharSet) -> ClassicalRegex {
    ClassicalRegex::concat(alloc::vec![ClassicalRegex::any_word(), ClassicalRegex::Set(set)])
}

/// `left` ends with a character of `set`, decided statically when possible.
fn left_in(left: &[Term], set: &CharSet) -> Formula {
    let t = Term::cat(left.to_vec());
    let last_lit = match &t {
        Term::Lit(s) => s.chars().last(),
        Term::Cat(parts) => match parts.last() {
            Some(Term::Lit(s)) => s.chars().last(),
            _ => None,
        },
        _ => None,
    };
    match last_lit {
        Some(c) => if set.contains(c) { Formula::True } else { Formula::False },
        None => Formula::InRe(t, ending(set.clone())),
    }
}

/// `right` starts with a character of `set`.
fn right_in(right: &[Term], set: &CharSet) -> Formula {
    let t = Term::cat(right.to_vec());
    let first_lit = match &t {
        Term::Lit(s) => s.chars().next(),
        Term::Cat(parts) => match parts.first() {
            Some(Term::Lit(s)) => s.chars().next(),
            _ => None,
        },
        _ => None,
    };
    match first_lit {
        Some(c) => if set.contains(c) { Formula::True } else { Formula::False },
        None => Formula::InRe(t, starting(set.clone())),
    }
}

fn concat_ctx(a: &[Term], b: &[Term]) -> Vec<Term> {
    let mut v = a.to_vec();
    v.extend_from_slice(b);
    v
}

fn repeat(t: &Term, n: usize) -> Term {
    Term::cat((0..n).map(|_| t.clone()).collect())
}

fn is_plain(node: &Node) -> bool {
    let mut plain = true;
    node.walk(&mut |n| {
        plain &= !(n.is_assertion() || matches!(n, Node::Backreference(_) | Node::Group { .. }));
    });
    plain
}

struct Builder<'p> {
    problem: &'p mut ConstraintProblem,
    /// Rewritten group index to its variable in the current scope.
    caps: BTreeMap<u32, CapVar>,
    targets: BTreeMap<usize, CaptureSource>,
    kinds: BTreeMap<usize, BackrefKind>,
    multiline: bool,
    ignore_case: bool,
    cfg: UnrollConfig,
    alphabet: CharSet,
}

fn ptr(n: &Node) -> usize {
    n as *const Node as usize
}

impl Builder<'_> {
    fn fresh(&mut self) -> Term {
        Term::Var(self.problem.fresh_str())
    }

    fn cap(&self, g: u32) -> CapVar {
        self.caps[&g].clone()
    }

    fn undefined(&self, node: &Node) -> Formula {
        Formula::and(node.group_indices().into_iter().map(|g| Formula::CapUndef(self.cap(g))).collect())
    }

    fn plain(&self, node: &Node, w: Term) -> Formula {
        let re = erase_captures(node).expect("plain node").restrict(&self.alphabet);
        Formula::InRe(w, re)
    }

    /// `(w, captures)` is in the capturing language of `node` between the
    /// given contexts.
    fn member(&mut self, node: &Node, w: Term, left: &[Term], right: &[Term]) -> Formula {
        if is_plain(node) {
            return self.plain(node, w);
        }
        match node {
            Node::Concat(parts) => {
                // Nodes are looked up by address, so non-plain parts must
                // not be copied.
                let mut runs: Vec<Cow<Node>> = Vec::new();
                let mut pending: Vec<Node> = Vec::new();
                for p in parts {
                    if is_plain(p) {
                        pending.push(p.clone());
                    } else {
                        if !pending.is_empty() {
                            runs.push(Cow::Owned(Node::concat_of(core::mem::take(&mut pending))));
                        }
                        runs.push(Cow::Borrowed(p));
                    }
                }
                if !pending.is_empty() {
                    runs.push(Cow::Owned(Node::concat_of(pending)));
                }
                if runs.len() == 1 {
                    return self.member(&runs[0], w, left, right);
                }
                let vars: Vec<Term> = runs.iter().map(|_| self.fresh()).collect();
                let mut out = alloc::vec![Formula::eq(w, Term::cat(vars.clone()))];
                for (i, run) in runs.iter().enumerate() {
                    let l = concat_ctx(left, &vars[..i]);
                    let r = concat_ctx(&vars[i + 1..], right);
                    out.push(self.member(run, vars[i].clone(), &l, &r));
                }
                Formula::and(out)
            }
            Node::Alternation(l, r) => {
                let a = self.member(l, w.clone(), left, right);
                let b = self.member(r, w, left, right);
                Formula::or(alloc::vec![
                    Formula::and(alloc::vec![a, self.undefined(r)]),
                    Formula::and(alloc::vec![b, self.undefined(l)]),
                ])
            }
            Node::Group { index, child } => {
                let inner = self.member(child, w.clone(), left, right);
                Formula::and(alloc::vec![inner, Formula::CapEq(self.cap(*index), w)])
            }
            Node::NonCapturingGroup(child) => self.member(child, w, left, right),
            Node::Star { child, .. } => self.star(child, w, left, right),
            Node::Backreference(_) => {
                let src = self.targets.get(&ptr(node)).cloned().unwrap_or(CaptureSource::Never);
                self.backref(&src, w)
            }
            Node::PositiveLookahead(child) => {
                let ctx = if child.has_groups() {
                    let u = self.fresh();
                    let v = self.fresh();
                    let split = Formula::eq(Term::cat(right.to_vec()), Term::cat(alloc::vec![u.clone(), v.clone()]));
                    let inner = self.member(child, u, left, &[v]);
                    Formula::and(alloc::vec![split, inner])
                } else {
                    let lang = node_language(child, self.multiline, ClassicalRegex::any_word(), Approx::Over);
                    self.by_prev(left, |c| Formula::InRe(Term::cat(right.to_vec()), lang.after(c).clone()))
                };
                Formula::and(alloc::vec![Formula::eq(w, Term::empty()), ctx])
            }
            Node::NegativeLookahead(child) => {
                let lang = node_language(child, self.multiline, ClassicalRegex::any_word(), Approx::Under);
                let ctx = self.for_prev(left, |c| Formula::NotInRe(Term::cat(right.to_vec()), lang.after(c).clone()));
                Formula::and(alloc::vec![Formula::eq(w, Term::empty()), self.undefined(child), ctx])
            }
            Node::AnchorStart => {
                let mut set = CharSet::single(MARK_START);
                if self.multiline {
                    set = set.union(&line_terminators());
                }
                Formula::and(alloc::vec![Formula::eq(w, Term::empty()), left_in(left, &set)])
            }
            Node::AnchorEnd => {
                let mut set = CharSet::single(MARK_END);
                if self.multiline {
                    set = set.union(&line_terminators());
                }
                Formula::and(alloc::vec![Formula::eq(w, Term::empty()), right_in(right, &set)])
            }
            Node::WordBoundary | Node::NonWordBoundary => {
                let word = word_chars();
                let other = word.complement();
                let (a, b) = if matches!(node, Node::WordBoundary) { (&other, &word) } else { (&word, &word) };
                let (c, d) = if matches!(node, Node::WordBoundary) { (&word, &other) } else { (&other, &other) };
                let ctx = Formula::or(alloc::vec![
                    Formula::and(alloc::vec![left_in(left, a), right_in(right, b)]),
                    Formula::and(alloc::vec![left_in(left, c), right_in(right, d)]),
                ]);
                Formula::and(alloc::vec![Formula::eq(w, Term::empty()), ctx])
            }
            _ => unreachable!("quantifiers are rewritten and leaves are plain"),
        }
    }

    /// Disjunction over the class of the last character of `left`.
    fn by_prev(&self, left: &[Term], f: impl Fn(PrevClass) -> Formula) -> Formula {
        Formula::or(PREV_CLASSES.iter().map(|&c| Formula::and(alloc::vec![left_in(left, &c.chars()), f(c)])).collect())
    }

    /// Conjunction of implications over the class of the last character.
    fn for_prev(&self, left: &[Term], f: impl Fn(PrevClass) -> Formula) -> Formula {
        Formula::and(PREV_CLASSES.iter().map(|&c| Formula::implies(left_in(left, &c.chars()), f(c))).collect())
    }

    fn star(&mut self, child: &Node, w: Term, left: &[Term], right: &[Term]) -> Formula {
        let none = Formula::and(alloc::vec![Formula::eq(w.clone(), Term::empty()), self.undefined(child)]);
        let k = self.cfg.max_repeats.max(1);
        if !child.has_backreferences() {
            let w1 = self.fresh();
            let w2 = self.fresh();
            let relaxed = erase_relaxed(child).expect("backreference-free").restrict(&self.alphabet);
            let l = concat_ctx(left, core::slice::from_ref(&w1));
            let last = self.member(child, w2.clone(), &l, right);
            let empty1 = Formula::eq(w1.clone(), Term::empty());
            let empty2 = Formula::eq(w2.clone(), Term::empty());
            return Formula::and(alloc::vec![
                Formula::eq(w, Term::cat(alloc::vec![w1.clone(), w2.clone()])),
                Formula::InRe(w1, ClassicalRegex::star(relaxed)),
                Formula::or(alloc::vec![
                    Formula::and(alloc::vec![empty1, empty2.clone(), self.undefined(child)]),
                    Formula::and(alloc::vec![Formula::not(empty2), last]),
                ]),
            ]);
        }
        let mutable = {
            let mut found = false;
            child.walk(&mut |n| found |= self.kinds.get(&ptr(n)) == Some(&BackrefKind::Mutable));
            found
        };
        let mut cases = alloc::vec![none];
        if mutable {
            // Every iteration is taken equal to the last one.
            for m in 1..=k {
                let x = self.fresh();
                let l = concat_ctx(left, &[repeat(&x, m - 1)]);
                let last = self.member(child, x.clone(), &l, right);
                cases.push(Formula::and(alloc::vec![
                    Formula::eq(w.clone(), repeat(&x, m)),
                    Formula::not(Formula::eq(x, Term::empty())),
                    last,
                ]));
            }
        } else {
            for n in 1..=k {
                let xs: Vec<Term> = (0..n).map(|_| self.fresh()).collect();
                let mut parts = alloc::vec![Formula::eq(w.clone(), Term::cat(xs.clone()))];
                for j in 0..n {
                    let l = concat_ctx(left, &xs[..j]);
                    let r = concat_ctx(&xs[j + 1..], right);
                    parts.push(Formula::not(Formula::eq(xs[j].clone(), Term::empty())));
                    if j + 1 == n {
                        parts.push(self.member(child, xs[j].clone(), &l, &r));
                    } else {
                        let saved = self.caps.clone();
                        for g in child.group_indices() {
                            let fresh = self.problem.fresh_cap();
                            self.caps.insert(g, fresh);
                        }
                        parts.push(self.member(child, xs[j].clone(), &l, &r));
                        self.caps = saved;
                    }
                }
                cases.push(Formula::and(parts));
            }
        }
        Formula::or(cases)
    }

    fn backref(&self, src: &CaptureSource, w: Term) -> Formula {
        match src {
            CaptureSource::Never => Formula::eq(w, Term::empty()),
            CaptureSource::Group(g) => {
                let value = Term::CapVal(self.cap(*g));
                if self.ignore_case {
                    Formula::LenEq(w, value)
                } else {
                    Formula::eq(w, value)
                }
            }
            CaptureSource::Select(alternates) => {
                let mut cases = Vec::new();
                let mut earlier = Vec::new();
                for alt in alternates {
                    let any_defined = Formula::or(alt.members.iter().map(|&g| Formula::defined(&self.cap(g))).collect());
                    let mut case = earlier.clone();
                    case.push(any_defined);
                    case.push(self.backref(&alt.chosen, w.clone()));
                    cases.push(Formula::and(case));
                    earlier.extend(alt.members.iter().map(|&g| Formula::CapUndef(self.cap(g))));
                }
                earlier.push(Formula::eq(w, Term::empty()));
                cases.push(Formula::and(earlier));
                Formula::or(cases)
            }
        }
    }

    /// `target` holds the value the source reads.
    fn source(&self, target: &CapVar, src: &CaptureSource) -> Formula {
        match src {
            CaptureSource::Never => Formula::CapUndef(target.clone()),
            CaptureSource::Group(g) => {
                let v = self.cap(*g);
                if v == *target {
                    Formula::True
                } else {
                    Formula::CapSame(target.clone(), v)
                }
            }
            CaptureSource::Select(alternates) => {
                let mut cases = Vec::new();
                let mut earlier = Vec::new();
                for alt in alternates {
                    let any_defined = Formula::or(alt.members.iter().map(|&g| Formula::defined(&self.cap(g))).collect());
                    let mut case = earlier.clone();
                    case.push(any_defined);
                    case.push(self.source(target, &alt.chosen));
                    cases.push(Formula::and(case));
                    earlier.extend(alt.members.iter().map(|&g| Formula::CapUndef(self.cap(g))));
                }
                earlier.push(Formula::CapUndef(target.clone()));
                cases.push(Formula::and(earlier));
                Formula::or(cases)
            }
        }
    }
}

/// Fills in capture variables so that `captures` has one entry per group.
pub fn complete_captures(problem: &mut ConstraintProblem, rc: &mut RegexConstraint) {
    while rc.captures.len() < rc.ast.group_count as usize + 1 {
        let c = problem.fresh_cap();
        rc.captures.push(c);
    }
}

/// The formula modeling one regex constraint. Captures beyond those listed
/// get internal variables.
pub fn model_constraint(problem: &mut ConstraintProblem, rc: &RegexConstraint, cfg: &UnrollConfig) -> Result<Formula, ModelError> {
    if rc.flags.unicode {
        return Err(ModelError::Unsupported("flag u"));
    }
    let mut rc = rc.clone();
    complete_captures(problem, &mut rc);
    let alphabet_ok = Formula::InRe(rc.subject.clone(), any_user());
    let start_mark = Term::Lit(MARK_START.into());
    let end_mark = Term::Lit(MARK_END.into());
    let (start, mut parts) = match rc.mode {
        ApiMode::Raw => (0, alloc::vec![alphabet_ok]),
        ApiMode::Exec { last_index } => (exec_start(&rc.flags, last_index), alloc::vec![alphabet_ok]),
    };
    let lang_ast = match rc.mode {
        ApiMode::Raw => rc.ast.clone(),
        ApiMode::Exec { last_index } => wrap_for_exec(&rc.ast, &rc.flags, last_index).0,
    };
    let subject_len = IntExpr::Len(rc.subject.clone());
    match rc.polarity {
        Polarity::NonMember => {
            let lang = input_language(&lang_ast, &rc.flags, Approx::Under);
            let pre = Term::Var(problem.fresh_str());
            let rest = Term::Var(problem.fresh_str());
            let mut left = alloc::vec![start_mark.clone()];
            if start > 0 {
                left.push(pre.clone());
            }
            let no_match = Formula::and(alloc::vec![
                Formula::eq(rc.subject.clone(), Term::cat(alloc::vec![pre.clone(), rest.clone()])),
                Formula::IntEq(IntExpr::Len(pre.clone()), IntExpr::Const(start as i64)),
                Formula::and(
                    PREV_CLASSES
                        .iter()
                        .map(|&c| {
                            Formula::implies(
                                left_in(&left, &c.chars()),
                                Formula::NotInRe(Term::cat(alloc::vec![rest.clone(), end_mark.clone()]), lang.after(c).clone()),
                            )
                        })
                        .collect(),
                ),
            ]);
            let too_short = Formula::IntLe(IntExpr::Add(alloc::vec![subject_len, IntExpr::Const(1)]), IntExpr::Const(start as i64));
            parts.push(if start > 0 { Formula::or(alloc::vec![too_short, no_match]) } else { no_match });
            if let Some(li) = &rc.last_index_after {
                parts.push(Formula::IntEq(IntExpr::Var(li.clone()), IntExpr::Const(0)));
            }
            return Ok(Formula::and(parts));
        }
        Polarity::Member => {}
    }

    let model_ast = if rc.flags.ignore_case { rewrite_ignore_case(&rc.ast) } else { rc.ast.clone() };
    let rw = rewrite_quantifiers_with_budget(&model_ast, cfg.rewrite_budget)?;
    let mut caps = BTreeMap::new();
    for g in 1..=rw.ast.group_count {
        let owner = rw.correspondence.sources.iter().position(|s| *s == CaptureSource::Group(g));
        let var = match owner {
            Some(i) if i > 0 => rc.captures[i].clone(),
            _ => problem.fresh_cap(),
        };
        caps.insert(g, var);
    }
    let mut backref_nodes = Vec::new();
    rw.ast.root.walk(&mut |n| {
        if matches!(n, Node::Backreference(_)) {
            backref_nodes.push(ptr(n));
        }
    });
    let targets: BTreeMap<usize, CaptureSource> = backref_nodes.iter().copied().zip(rw.backref_targets.iter().cloned()).collect();
    let mut kinds = BTreeMap::new();
    for class in classify_backreferences(&rw.ast) {
        let mut n = &rw.ast.root;
        for &i in &class.path {
            n = n.children()[i];
        }
        kinds.insert(ptr(n), class.kind);
    }
    let mut b = Builder {
        problem,
        caps,
        targets,
        kinds,
        multiline: rc.flags.multiline,
        ignore_case: rc.flags.ignore_case,
        cfg: *cfg,
        alphabet: user_alphabet(),
    };
    let c0 = rc.captures[0].clone();
    let lang = input_language(&lang_ast, &rc.flags, Approx::Over);
    match rc.mode {
        ApiMode::Raw => {
            let m = b.member(&rw.ast.root, rc.subject.clone(), core::slice::from_ref(&start_mark), core::slice::from_ref(&end_mark));
            parts.push(m);
            parts.push(Formula::CapEq(c0, rc.subject.clone()));
            parts.push(Formula::InRe(Term::cat(alloc::vec![rc.subject.clone(), end_mark.clone()]), lang.after(PrevClass::Start).clone()));
        }
        ApiMode::Exec { last_index } => {
            let pre = b.fresh();
            let p1 = b.fresh();
            let m = b.fresh();
            let p2 = b.fresh();
            parts.push(Formula::eq(rc.subject.clone(), Term::cat(alloc::vec![pre.clone(), p1.clone(), m.clone(), p2.clone()])));
            parts.push(Formula::IntEq(IntExpr::Len(pre.clone()), IntExpr::Const(start as i64)));
            if rc.flags.sticky {
                parts.push(Formula::eq(p1.clone(), Term::empty()));
            } else {
                parts.push(Formula::InRe(p1.clone(), erase_captures(&padding()).unwrap().restrict(&b.alphabet)));
            }
            let mut left = alloc::vec![start_mark.clone()];
            if start > 0 {
                left.push(pre.clone());
            }
            let lm = concat_ctx(&left, core::slice::from_ref(&p1));
            parts.push(b.member(&rw.ast.root, m.clone(), &lm, &[p2.clone(), end_mark.clone()]));
            parts.push(Formula::CapEq(c0, m.clone()));
            let rest = Term::cat(alloc::vec![p1.clone(), m.clone(), p2.clone(), end_mark.clone()]);
            parts.push(b.by_prev(&left, |c| Formula::InRe(rest.clone(), lang.after(c).clone())));
            if let Some(li) = &rc.last_index_after {
                let after = if rc.flags.global || rc.flags.sticky {
                    IntExpr::Add(alloc::vec![IntExpr::Const(start as i64), IntExpr::Len(p1), IntExpr::Len(m)])
                } else {
                    IntExpr::Const(last_index as i64)
                };
                parts.push(Formula::IntEq(IntExpr::Var(li.clone()), after));
            }
        }
    }
    for (i, src) in rw.correspondence.sources.iter().enumerate().skip(1) {
        parts.push(b.source(&rc.captures[i], src));
    }
    Ok(Formula::and(parts))
}

/// Builds a regex constraint from source text, declaring named capture
/// variables `prefix0..prefixN` when a prefix is given.
pub fn regex_constraint(
    problem: &mut ConstraintProblem,
    subject: Term,
    ast: RegexAst,
    flags: FlagSet,
    source: &str,
    polarity: Polarity,
    mode: ApiMode,
    capture_prefix: Option<&str>,
) -> RegexConstraint {
    let captures = (0..=ast.group_count)
        .map(|i| match capture_prefix {
            Some(p) => problem.declare_capture(&alloc::format!("{p}{i}")),
            None => problem.fresh_cap(),
        })
        .collect();
    RegexConstraint { subject, captures, polarity, source: String::from(source), ast, flags, mode, last_index_after: None, model_assertion: None }
}

/// Models the constraint, asserts it and records it for validation.
pub fn add_regex_constraint(problem: &mut ConstraintProblem, mut rc: RegexConstraint, cfg: &UnrollConfig) -> Result<(), ModelError> {
    let f = model_constraint(problem, &rc, cfg)?;
    rc.model_assertion = Some(problem.assertions.len());
    problem.assertions.push(f);
    problem.regex_constraints.push(rc);
    Ok(())
}
