//! Word languages of regexes with assertions.
//!
//! Languages are over the marker-wrapped input `⟨w⟩`. A continuation maps
//! the class of the previously consumed character to the language of what
//! may follow, which is enough to decide anchors and word boundaries. The
//! result is exact for regexes without backreferences whose quantified
//! bodies are assertion-free; otherwise it is an over- or under-
//! approximation as requested.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::ast::{FlagSet, Node, RegexAst};
use crate::preprocess::backref::{classify_backreferences, BackrefKind};
use crate::preprocess::classical::{leaf_set, line_terminators, user_alphabet, word_chars};
use crate::preprocess::{rewrite_ignore_case, CharSet, ClassicalRegex, MARK_END, MARK_START};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Approx {
    Over,
    Under,
}

impl Approx {
    fn flip(self) -> Approx {
        match self {
            Approx::Over => Approx::Under,
            Approx::Under => Approx::Over,
        }
    }
}

/// Class of the character before a position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PrevClass {
    Start,
    LineTerminator,
    Word,
    Other,
}

pub const PREV_CLASSES: [PrevClass; 4] = [PrevClass::Start, PrevClass::LineTerminator, PrevClass::Word, PrevClass::Other];

impl PrevClass {
    pub fn of(c: char) -> PrevClass {
        if c == MARK_START {
            PrevClass::Start
        } else if line_terminators().contains(c) {
            PrevClass::LineTerminator
        } else if word_chars().contains(c) {
            PrevClass::Word
        } else {
            PrevClass::Other
        }
    }

    pub fn chars(self) -> CharSet {
        match self {
            PrevClass::Start => CharSet::single(MARK_START),
            PrevClass::LineTerminator => line_terminators(),
            PrevClass::Word => word_chars(),
            PrevClass::Other => {
                line_terminators().union(&word_chars()).union(&CharSet::single(MARK_START)).complement()
            }
        }
    }

    /// Words whose last character is in this class.
    pub fn ending(self) -> ClassicalRegex {
        ClassicalRegex::concat(alloc::vec![ClassicalRegex::any_word(), ClassicalRegex::Set(self.chars())])
    }

    fn index(self) -> usize {
        self as usize
    }
}

/// A language for each class of the preceding character.
pub type Cont = [ClassicalRegex; 4];

fn uniform(r: ClassicalRegex) -> Cont {
    [r.clone(), r.clone(), r.clone(), r]
}

fn is_uniform(k: &Cont) -> bool {
    k.iter().all(|r| *r == k[0])
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordLanguage {
    pub by_prev: Cont,
    pub exact: bool,
}

impl WordLanguage {
    pub fn after(&self, prev: PrevClass) -> &ClassicalRegex {
        &self.by_prev[prev.index()]
    }
}

/// Strings `x·s` where the regex matches `x` after a character of the given
/// class and `s ∈ tail`.
pub fn word_language(ast: &RegexAst, flags: &FlagSet, tail: ClassicalRegex, approx: Approx) -> WordLanguage {
    let folded;
    let ast = if flags.ignore_case {
        folded = rewrite_ignore_case(ast);
        &folded
    } else {
        ast
    };
    let mut empty_backrefs = BTreeSet::new();
    for class in classify_backreferences(ast) {
        if class.kind == BackrefKind::Empty {
            let mut node = &ast.root;
            for &i in &class.path {
                node = node.children()[i];
            }
            empty_backrefs.insert(node as *const Node as usize);
        }
    }
    let mut b = Builder { multiline: flags.multiline, empty_backrefs, exact: true, alphabet: user_alphabet() };
    let by_prev = b.build(&ast.root, &uniform(tail), approx);
    WordLanguage { by_prev, exact: b.exact }
}

/// Like [`word_language`] for a subterm taken out of its regex: no case
/// folding, and every backreference is approximated.
pub fn node_language(node: &Node, multiline: bool, tail: ClassicalRegex, approx: Approx) -> WordLanguage {
    let mut b = Builder { multiline, empty_backrefs: BTreeSet::new(), exact: true, alphabet: user_alphabet() };
    let by_prev = b.build(node, &uniform(tail), approx);
    WordLanguage { by_prev, exact: b.exact }
}

/// Language of the whole input `w·⟩` (without the leading marker).
pub fn input_language(ast: &RegexAst, flags: &FlagSet, approx: Approx) -> WordLanguage {
    word_language(ast, flags, ClassicalRegex::literal(MARK_END), approx)
}

struct Builder {
    multiline: bool,
    empty_backrefs: BTreeSet<usize>,
    exact: bool,
    alphabet: CharSet,
}

impl Builder {
    fn set(&self, s: CharSet, k: &Cont) -> Cont {
        let s = s.intersect(&self.alphabet);
        let r = if is_uniform(k) {
            ClassicalRegex::concat(alloc::vec![ClassicalRegex::Set(s), k[0].clone()])
        } else {
            ClassicalRegex::union(
                PREV_CLASSES
                    .iter()
                    .filter_map(|c| {
                        let part = s.intersect(&c.chars());
                        (!part.is_empty()).then(|| ClassicalRegex::concat(alloc::vec![ClassicalRegex::Set(part), k[c.index()].clone()]))
                    })
                    .collect(),
            )
        };
        uniform(r)
    }

    /// `body*` followed by `k`, for a context-free body language.
    fn star(&self, body: ClassicalRegex, k: &Cont) -> Cont {
        let iterated = ClassicalRegex::star(body.clone());
        if is_uniform(k) {
            return uniform(ClassicalRegex::concat(alloc::vec![iterated, k[0].clone()]));
        }
        let last = ClassicalRegex::union(
            PREV_CLASSES
                .iter()
                .map(|c| {
                    ClassicalRegex::concat(alloc::vec![
                        ClassicalRegex::inter(alloc::vec![body.clone(), c.ending()]),
                        k[c.index()].clone()
                    ])
                })
                .collect(),
        );
        let tail = ClassicalRegex::concat(alloc::vec![iterated, last]);
        core::array::from_fn(|i| ClassicalRegex::union(alloc::vec![k[i].clone(), tail.clone()]))
    }

    fn build(&mut self, node: &Node, k: &Cont, approx: Approx) -> Cont {
        if let Some(s) = leaf_set(node) {
            return self.set(s, k);
        }
        let any = ClassicalRegex::any_word;
        match node {
            Node::Concat(parts) => {
                let mut cur = k.clone();
                for p in parts.iter().rev() {
                    cur = self.build(p, &cur, approx);
                }
                cur
            }
            Node::Alternation(l, r) => {
                let a = self.build(l, k, approx);
                let b = self.build(r, k, approx);
                core::array::from_fn(|i| ClassicalRegex::union(alloc::vec![a[i].clone(), b[i].clone()]))
            }
            Node::Group { child, .. } | Node::NonCapturingGroup(child) => self.build(child, k, approx),
            Node::Star { child, .. } => {
                let body = self.body(child, approx);
                self.star(body, k)
            }
            Node::Plus { child, .. } => {
                let rest = self.build(&Node::star((**child).clone(), false), k, approx);
                self.build(child, &rest, approx)
            }
            Node::Optional { child, .. } => {
                let a = self.build(child, k, approx);
                core::array::from_fn(|i| ClassicalRegex::union(alloc::vec![a[i].clone(), k[i].clone()]))
            }
            Node::Repetition { child, min, max, .. } => {
                let mut cur = match max {
                    None => self.build(&Node::star((**child).clone(), false), k, approx),
                    Some(max) => {
                        let mut cur = k.clone();
                        for _ in *min..*max {
                            let a = self.build(child, &cur, approx);
                            cur = core::array::from_fn(|i| ClassicalRegex::union(alloc::vec![a[i].clone(), k[i].clone()]));
                        }
                        cur
                    }
                };
                for _ in 0..*min {
                    cur = self.build(child, &cur, approx);
                }
                cur
            }
            Node::Backreference(_) => {
                if self.empty_backrefs.contains(&(node as *const Node as usize)) {
                    return k.clone();
                }
                self.exact = false;
                match approx {
                    Approx::Over => self.star(ClassicalRegex::Set(self.alphabet.clone()), k),
                    Approx::Under => uniform(ClassicalRegex::Nothing),
                }
            }
            Node::AnchorStart => core::array::from_fn(|i| {
                let p = PREV_CLASSES[i];
                if p == PrevClass::Start || (self.multiline && p == PrevClass::LineTerminator) {
                    k[i].clone()
                } else {
                    ClassicalRegex::Nothing
                }
            }),
            Node::AnchorEnd => {
                let mut next = CharSet::single(MARK_END);
                if self.multiline {
                    next = next.union(&line_terminators());
                }
                let ahead = ClassicalRegex::concat(alloc::vec![ClassicalRegex::Set(next), any()]);
                core::array::from_fn(|i| ClassicalRegex::inter(alloc::vec![k[i].clone(), ahead.clone()]))
            }
            Node::WordBoundary | Node::NonWordBoundary => {
                let boundary = matches!(node, Node::WordBoundary);
                core::array::from_fn(|i| {
                    let prev_word = PREV_CLASSES[i] == PrevClass::Word;
                    let next = if prev_word == boundary { word_chars().complement() } else { word_chars() };
                    let ahead = ClassicalRegex::concat(alloc::vec![ClassicalRegex::Set(next), any()]);
                    ClassicalRegex::inter(alloc::vec![k[i].clone(), ahead])
                })
            }
            Node::PositiveLookahead(child) => {
                let inner = self.build(child, &uniform(any()), approx);
                core::array::from_fn(|i| ClassicalRegex::inter(alloc::vec![k[i].clone(), inner[i].clone()]))
            }
            Node::NegativeLookahead(child) => {
                let inner = self.build(child, &uniform(any()), approx.flip());
                core::array::from_fn(|i| {
                    ClassicalRegex::inter(alloc::vec![k[i].clone(), ClassicalRegex::complement(inner[i].clone())])
                })
            }
            _ => unreachable!("leaf handled above"),
        }
    }

    /// Context-free language of a quantified body.
    fn body(&mut self, node: &Node, approx: Approx) -> ClassicalRegex {
        if let Some(s) = leaf_set(node) {
            let s = s.intersect(&self.alphabet);
            return if s.is_empty() { ClassicalRegex::Nothing } else { ClassicalRegex::Set(s) };
        }
        match node {
            Node::Concat(parts) => ClassicalRegex::concat(parts.iter().map(|p| self.body(p, approx)).collect()),
            Node::Alternation(l, r) => ClassicalRegex::union(alloc::vec![self.body(l, approx), self.body(r, approx)]),
            Node::Group { child, .. } | Node::NonCapturingGroup(child) => self.body(child, approx),
            Node::Star { child, .. } => ClassicalRegex::star(self.body(child, approx)),
            Node::Plus { child, .. } => {
                let c = self.body(child, approx);
                ClassicalRegex::concat(alloc::vec![c.clone(), ClassicalRegex::star(c)])
            }
            Node::Optional { child, .. } => ClassicalRegex::optional(self.body(child, approx)),
            Node::Repetition { child, min, max, .. } => {
                ClassicalRegex::Loop { child: alloc::boxed::Box::new(self.body(child, approx)), min: *min, max: *max }
            }
            Node::Backreference(_) if self.empty_backrefs.contains(&(node as *const Node as usize)) => {
                ClassicalRegex::Epsilon
            }
            Node::Backreference(_) => {
                self.exact = false;
                match approx {
                    Approx::Over => ClassicalRegex::star(ClassicalRegex::Set(self.alphabet.clone())),
                    Approx::Under => ClassicalRegex::Nothing,
                }
            }
            _ => {
                // Assertions inside a quantified body.
                self.exact = false;
                match approx {
                    Approx::Over => ClassicalRegex::Epsilon,
                    Approx::Under => ClassicalRegex::Nothing,
                }
            }
        }
    }
}

/// Membership of a full input in a language produced by [`input_language`].
pub fn accepts_input(lang: &WordLanguage, input: &str) -> bool {
    let mut chars: Vec<char> = input.chars().collect();
    chars.push(MARK_END);
    crate::preprocess::classical::accepts(lang.after(PrevClass::Start), &chars)
}
