//! ES6 backtracking matcher.
//!
//! A direct transcription of the ES6 pattern semantics: every node compiles
//! to a matcher taking a state and a continuation, quantifiers follow
//! `RepeatMatcher` (captures of the body reset per iteration, empty
//! iterations beyond the minimum rejected), and `exec` follows
//! `RegExpBuiltinExec`.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::cell::Cell;
use core::fmt;

use crate::ast::{is_line_terminator, is_word_char, CharClass, FlagSet, Node, RegexAst};

pub const DEFAULT_STEP_BUDGET: u64 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MatchError {
    StepBudgetExceeded(u64),
    /// The `u` flag, or input outside the Basic Multilingual Plane.
    Unsupported(&'static str),
}

impl fmt::Display for MatchError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatchError::StepBudgetExceeded(n) => write!(f, "backtracking step budget of {n} exceeded"),
            MatchError::Unsupported(what) => write!(f, "unsupported: {what}"),
        }
    }
}

impl core::error::Error for MatchError {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchResult {
    pub matched: bool,
    /// Start of the whole match, in characters.
    pub index: usize,
    /// Position 0 is the whole match; `None` is an undefined group.
    pub captures: Vec<Option<String>>,
    pub input: String,
    pub last_index_after: usize,
}

impl MatchResult {
    fn failure(input: &str) -> MatchResult {
        MatchResult { matched: false, index: 0, captures: Vec::new(), input: input.into(), last_index_after: 0 }
    }
}

/// Capture spans of one successful match attempt, indexed by group number.
pub type Spans = Vec<Option<(usize, usize)>>;

#[derive(Clone, Debug)]
struct State {
    pos: usize,
    caps: Spans,
}

type Cont<'k> = &'k dyn Fn(&State) -> Option<State>;

/// Backtracking matcher over one input.
pub struct Matcher<'a> {
    root: &'a Node,
    ignore_case: bool,
    multiline: bool,
    input: Vec<char>,
    slots: usize,
    body_groups: BTreeMap<*const Node, Vec<usize>>,
    /// The pattern carries its own group 0 (an `exec`-wrapped pattern).
    explicit_zero: bool,
    steps: Cell<u64>,
    budget: u64,
}

impl<'a> Matcher<'a> {
    pub fn new(root: &'a Node, flags: &FlagSet, input: &str) -> Result<Matcher<'a>, MatchError> {
        if flags.unicode {
            return Err(MatchError::Unsupported("unsupported flag u"));
        }
        let input: Vec<char> = input.chars().collect();
        if input.iter().any(|&c| c as u32 > 0xFFFF) {
            return Err(MatchError::Unsupported("input outside the Basic Multilingual Plane"));
        }
        let mut slots = 1;
        let mut explicit_zero = false;
        let mut body_groups = BTreeMap::new();
        root.walk(&mut |n| match n {
            Node::Group { index, .. } => {
                slots = slots.max(*index as usize + 1);
                explicit_zero |= *index == 0;
            }
            Node::Star { child, .. }
            | Node::Plus { child, .. }
            | Node::Optional { child, .. }
            | Node::Repetition { child, .. } => {
                let groups = child.group_indices().into_iter().map(|g| g as usize).collect();
                body_groups.insert(&**child as *const Node, groups);
            }
            _ => {}
        });
        Ok(Matcher {
            root,
            ignore_case: flags.ignore_case,
            multiline: flags.multiline,
            input,
            slots,
            body_groups,
            explicit_zero,
            steps: Cell::new(0),
            budget: DEFAULT_STEP_BUDGET,
        })
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn input_len(&self) -> usize {
        self.input.len()
    }

    /// Attempts a match starting exactly at `start`. `full` additionally
    /// requires the match to end at the end of the input.
    pub fn attempt(&self, start: usize, full: bool) -> Result<Option<Spans>, MatchError> {
        let x = State { pos: start, caps: alloc::vec![None; self.slots] };
        let len = self.input.len();
        let done = |y: &State| if full && y.pos != len { None } else { Some(y.clone()) };
        let r = self.m(self.root, &x, &done);
        if self.steps.get() > self.budget {
            return Err(MatchError::StepBudgetExceeded(self.budget));
        }
        Ok(r.map(|mut y| {
            if !self.explicit_zero {
                y.caps[0] = Some((start, y.pos));
            }
            y.caps
        }))
    }

    pub fn slice(&self, span: (usize, usize)) -> String {
        self.input[span.0..span.1].iter().collect()
    }

    fn tick(&self) -> bool {
        let n = self.steps.get() + 1;
        self.steps.set(n);
        n <= self.budget
    }

    fn m(&self, node: &Node, x: &State, k: Cont) -> Option<State> {
        if !self.tick() {
            return None;
        }
        match node {
            Node::Literal(c) => {
                let c = *c;
                self.char_step(x, k, |ch| if self.ignore_case { canonicalize(c) == canonicalize(ch) } else { c == ch })
            }
            Node::Dot => self.char_step(x, k, |ch| !is_line_terminator(ch)),
            Node::Shorthand(s) => self.char_step(x, k, |ch| self.set_has(|a| s.contains(a), ch)),
            Node::Class(class) => self.char_step(x, k, |ch| self.class_has(class, ch)),
            Node::Concat(parts) => self.seq(parts, x, k),
            Node::Alternation(l, r) => match self.m(l, x, k) {
                Some(y) => Some(y),
                None => self.m(r, x, k),
            },
            Node::Group { index, child } => {
                let start = x.pos;
                let idx = *index as usize;
                self.m(child, x, &|y: &State| {
                    let mut z = y.clone();
                    z.caps[idx] = Some((start, y.pos));
                    k(&z)
                })
            }
            Node::NonCapturingGroup(child) => self.m(child, x, k),
            Node::Star { child, lazy } => self.repeat(child, 0, None, !lazy, x, k),
            Node::Plus { child, lazy } => self.repeat(child, 1, None, !lazy, x, k),
            Node::Optional { child, lazy } => self.repeat(child, 0, Some(1), !lazy, x, k),
            Node::Repetition { child, min, max, lazy } => self.repeat(child, *min, *max, !lazy, x, k),
            Node::PositiveLookahead(child) => {
                let y = self.m(child, x, &|y: &State| Some(y.clone()))?;
                k(&State { pos: x.pos, caps: y.caps })
            }
            Node::NegativeLookahead(child) => {
                if self.m(child, x, &|y: &State| Some(y.clone())).is_some() {
                    return None;
                }
                k(x)
            }
            Node::Backreference(n) => {
                let n = *n as usize;
                let Some(Some((s, e))) = x.caps.get(n).copied() else {
                    return k(x);
                };
                let len = e - s;
                if x.pos + len > self.input.len() {
                    return None;
                }
                for i in 0..len {
                    let a = self.input[s + i];
                    let b = self.input[x.pos + i];
                    let same = if self.ignore_case { canonicalize(a) == canonicalize(b) } else { a == b };
                    if !same {
                        return None;
                    }
                }
                k(&State { pos: x.pos + len, caps: x.caps.clone() })
            }
            Node::AnchorStart => {
                let ok = x.pos == 0 || (self.multiline && is_line_terminator(self.input[x.pos - 1]));
                if ok { k(x) } else { None }
            }
            Node::AnchorEnd => {
                let ok = x.pos == self.input.len() || (self.multiline && is_line_terminator(self.input[x.pos]));
                if ok { k(x) } else { None }
            }
            Node::WordBoundary | Node::NonWordBoundary => {
                let a = x.pos > 0 && is_word_char(self.input[x.pos - 1]);
                let b = x.pos < self.input.len() && is_word_char(self.input[x.pos]);
                if (a != b) == matches!(node, Node::WordBoundary) { k(x) } else { None }
            }
        }
    }

    fn char_step(&self, x: &State, k: Cont, pred: impl Fn(char) -> bool) -> Option<State> {
        let ch = *self.input.get(x.pos)?;
        if !pred(ch) {
            return None;
        }
        k(&State { pos: x.pos + 1, caps: x.caps.clone() })
    }

    /// Membership of `ch` in a character set, canonicalizing under `i`.
    fn set_has(&self, set: impl Fn(char) -> bool, ch: char) -> bool {
        if !self.ignore_case {
            return set(ch);
        }
        case_variants(ch).into_iter().any(set)
    }

    fn class_has(&self, class: &CharClass, ch: char) -> bool {
        let found = self.set_has(|a| class.items.iter().any(|item| item.contains(a)), ch);
        found != class.negated
    }

    fn seq(&self, parts: &[Node], x: &State, k: Cont) -> Option<State> {
        match parts.split_first() {
            None => k(x),
            Some((first, rest)) => self.m(first, x, &|y: &State| self.seq(rest, y, k)),
        }
    }

    fn repeat(&self, body: &Node, min: u32, max: Option<u32>, greedy: bool, x: &State, k: Cont) -> Option<State> {
        if max == Some(0) {
            return k(x);
        }
        let d = |y: &State| -> Option<State> {
            if min == 0 && y.pos == x.pos {
                return None;
            }
            self.repeat(body, min.saturating_sub(1), max.map(|m| m - 1), greedy, y, k)
        };
        let mut xr = x.clone();
        if let Some(groups) = self.body_groups.get(&(body as *const Node)) {
            for &g in groups {
                xr.caps[g] = None;
            }
        }
        if min != 0 {
            return self.m(body, &xr, &d);
        }
        if !greedy {
            if let Some(z) = k(x) {
                return Some(z);
            }
            return self.m(body, &xr, &d);
        }
        if let Some(z) = self.m(body, &xr, &d) {
            return Some(z);
        }
        k(x)
    }
}

/// ES6 `Canonicalize` for non-unicode patterns.
pub fn canonicalize(ch: char) -> char {
    let mut upper = ch.to_uppercase();
    let u = upper.next().unwrap_or(ch);
    if upper.next().is_some() {
        return ch;
    }
    if (ch as u32) >= 128 && (u as u32) < 128 {
        return ch;
    }
    u
}

/// Characters canonicalizing like this one outside the plain upper/lower pair.
const EXTRA_VARIANTS: &[(char, char)] = &[
    ('\u{01C4}', '\u{01C5}'),
    ('\u{01C7}', '\u{01C8}'),
    ('\u{01CA}', '\u{01CB}'),
    ('\u{01F1}', '\u{01F2}'),
    ('\u{0392}', '\u{03D0}'),
    ('\u{0395}', '\u{03F5}'),
    ('\u{0398}', '\u{03D1}'),
    ('\u{0399}', '\u{0345}'),
    ('\u{0399}', '\u{1FBE}'),
    ('\u{039A}', '\u{03F0}'),
    ('\u{039C}', '\u{00B5}'),
    ('\u{03A0}', '\u{03D6}'),
    ('\u{03A1}', '\u{03F1}'),
    ('\u{03A3}', '\u{03C2}'),
    ('\u{03A6}', '\u{03D5}'),
    ('\u{0412}', '\u{1C80}'),
    ('\u{0414}', '\u{1C81}'),
    ('\u{041E}', '\u{1C82}'),
    ('\u{0421}', '\u{1C83}'),
    ('\u{0422}', '\u{1C84}'),
    ('\u{0422}', '\u{1C85}'),
    ('\u{042A}', '\u{1C86}'),
    ('\u{0462}', '\u{1C87}'),
    ('\u{1E60}', '\u{1E9B}'),
    ('\u{A64A}', '\u{1C88}'),
];

/// All characters `a` with `canonicalize(a) == canonicalize(ch)`.
pub fn case_variants(ch: char) -> Vec<char> {
    let cc = canonicalize(ch);
    let mut out = alloc::vec![cc];
    let mut lower = cc.to_lowercase();
    if let (Some(l), None) = (lower.next(), lower.next()) {
        if l != cc && canonicalize(l) == cc {
            out.push(l);
        }
    }
    for &(upper, variant) in EXTRA_VARIANTS {
        if upper == cc {
            out.push(variant);
        }
    }
    out
}

/// Runs one match attempt at `start` and packages it as a [`MatchResult`].
pub fn match_at(ast: &RegexAst, input: &str, start: usize, flags: &FlagSet) -> Result<Option<MatchResult>, MatchError> {
    let matcher = Matcher::new(&ast.root, flags, input)?;
    if start > matcher.input_len() {
        return Ok(None);
    }
    Ok(matcher.attempt(start, false)?.map(|spans| result_from_spans(&matcher, ast, input, &spans, 0)))
}

/// Whole-input match: the precedence-correct capture tuple for `input` when
/// the regex matches all of it, with the whole input as capture 0.
pub fn match_full(ast: &RegexAst, input: &str, flags: &FlagSet) -> Result<Option<Vec<Option<String>>>, MatchError> {
    let matcher = Matcher::new(&ast.root, flags, input)?;
    Ok(matcher.attempt(0, true)?.map(|spans| captures_from_spans(&matcher, ast, &spans)))
}

fn captures_from_spans(matcher: &Matcher, ast: &RegexAst, spans: &Spans) -> Vec<Option<String>> {
    (0..=ast.group_count as usize)
        .map(|g| spans.get(g).copied().flatten().map(|s| matcher.slice(s)))
        .collect()
}

fn result_from_spans(matcher: &Matcher, ast: &RegexAst, input: &str, spans: &Spans, last_index_after: usize) -> MatchResult {
    MatchResult {
        matched: true,
        index: spans[0].unwrap().0,
        captures: captures_from_spans(matcher, ast, spans),
        input: input.into(),
        last_index_after,
    }
}

/// A regex object: pattern, flags and the mutable `lastIndex`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegexValue {
    pub ast: RegexAst,
    pub flags: FlagSet,
    pub last_index: usize,
}

impl RegexValue {
    pub fn new(ast: RegexAst, flags: FlagSet) -> RegexValue {
        RegexValue { ast, flags, last_index: 0 }
    }

    /// `RegExp.prototype.exec`. A failed exec leaves `lastIndex` at 0.
    pub fn exec(&mut self, input: &str) -> Result<MatchResult, MatchError> {
        let matcher = Matcher::new(&self.ast.root, &self.flags, input)?;
        let stateful = self.flags.global || self.flags.sticky;
        let mut at = if stateful { self.last_index } else { 0 };
        loop {
            if at > matcher.input_len() {
                self.last_index = 0;
                return Ok(MatchResult::failure(input));
            }
            match matcher.attempt(at, false)? {
                Some(spans) => {
                    let end = spans[0].unwrap().1;
                    if stateful {
                        self.last_index = end;
                    }
                    return Ok(result_from_spans(&matcher, &self.ast, input, &spans, self.last_index));
                }
                None if self.flags.sticky => {
                    self.last_index = 0;
                    return Ok(MatchResult::failure(input));
                }
                None => at += 1,
            }
        }
    }

    /// `RegExp.prototype.test`, with the same state effects as `exec`.
    pub fn test(&mut self, input: &str) -> Result<bool, MatchError> {
        Ok(self.exec(input)?.matched)
    }
}
