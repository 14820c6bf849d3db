//! Regex abstract syntax.
//!
//! Capture groups carry explicit indices. Index `0` is reserved for the
//! implicit whole-match group that [`crate::preprocess::wrap_for_exec`]
//! introduces; groups produced by the parser are numbered from `1`.

use alloc::boxed::Box;
use alloc::vec::Vec;

/// Shorthand character classes (`\w`, `\W`, `\d`, `\D`, `\s`, `\S`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Shorthand {
    Word,
    NotWord,
    Digit,
    NotDigit,
    Space,
    NotSpace,
}

impl Shorthand {
    pub fn letter(self) -> char {
        match self {
            Shorthand::Word => 'w',
            Shorthand::NotWord => 'W',
            Shorthand::Digit => 'd',
            Shorthand::NotDigit => 'D',
            Shorthand::Space => 's',
            Shorthand::NotSpace => 'S',
        }
    }

    pub fn contains(self, c: char) -> bool {
        match self {
            Shorthand::Word => is_word_char(c),
            Shorthand::NotWord => !is_word_char(c),
            Shorthand::Digit => c.is_ascii_digit(),
            Shorthand::NotDigit => !c.is_ascii_digit(),
            Shorthand::Space => is_es_whitespace(c),
            Shorthand::NotSpace => !is_es_whitespace(c),
        }
    }
}

/// One member of a bracketed class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClassItem {
    Char(char),
    /// Inclusive range.
    Range(char, char),
    Shorthand(Shorthand),
}

impl ClassItem {
    pub fn contains(&self, c: char) -> bool {
        match *self {
            ClassItem::Char(x) => x == c,
            ClassItem::Range(lo, hi) => lo <= c && c <= hi,
            ClassItem::Shorthand(s) => s.contains(c),
        }
    }
}

/// A bracketed class `[...]` or `[^...]`. Items keep their source order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CharClass {
    pub negated: bool,
    pub items: Vec<ClassItem>,
}

impl CharClass {
    pub fn contains(&self, c: char) -> bool {
        self.items.iter().any(|item| item.contains(c)) != self.negated
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    Literal(char),
    /// The wildcard `.`.
    Dot,
    /// A shorthand class outside brackets.
    Shorthand(Shorthand),
    Class(CharClass),
    Concat(Vec<Node>),
    Alternation(Box<Node>, Box<Node>),
    Star { child: Box<Node>, lazy: bool },
    Plus { child: Box<Node>, lazy: bool },
    Optional { child: Box<Node>, lazy: bool },
    /// `{min,max}`; `max == None` means unbounded.
    Repetition {
        child: Box<Node>,
        min: u32,
        max: Option<u32>,
        lazy: bool,
    },
    Group { index: u32, child: Box<Node> },
    NonCapturingGroup(Box<Node>),
    PositiveLookahead(Box<Node>),
    NegativeLookahead(Box<Node>),
    Backreference(u32),
    WordBoundary,
    NonWordBoundary,
    AnchorStart,
    AnchorEnd,
}

impl Node {
    pub fn empty() -> Node {
        Node::Concat(Vec::new())
    }

    pub fn star(child: Node, lazy: bool) -> Node {
        Node::Star { child: Box::new(child), lazy }
    }

    pub fn alt(left: Node, right: Node) -> Node {
        Node::Alternation(Box::new(left), Box::new(right))
    }

    pub fn group(index: u32, child: Node) -> Node {
        Node::Group { index, child: Box::new(child) }
    }

    pub fn non_capturing(child: Node) -> Node {
        Node::NonCapturingGroup(Box::new(child))
    }

    /// Right-nested alternation over `alternatives`; an empty list yields the
    /// empty word.
    pub fn alternation_of(mut alternatives: Vec<Node>) -> Node {
        let mut acc = match alternatives.pop() {
            Some(last) => last,
            None => return Node::empty(),
        };
        while let Some(prev) = alternatives.pop() {
            acc = Node::alt(prev, acc);
        }
        acc
    }

    /// Concatenation that collapses singleton lists.
    pub fn concat_of(mut parts: Vec<Node>) -> Node {
        if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Node::Concat(parts)
        }
    }

    /// Immediate children in left-to-right order.
    pub fn children(&self) -> Vec<&Node> {
        match self {
            Node::Concat(parts) => parts.iter().collect(),
            Node::Alternation(l, r) => alloc::vec![&**l, &**r],
            Node::Star { child, .. }
            | Node::Plus { child, .. }
            | Node::Optional { child, .. }
            | Node::Repetition { child, .. }
            | Node::Group { child, .. }
            | Node::NonCapturingGroup(child)
            | Node::PositiveLookahead(child)
            | Node::NegativeLookahead(child) => alloc::vec![&**child],
            _ => Vec::new(),
        }
    }

    /// Pre-order walk.
    pub fn walk<'a>(&'a self, f: &mut dyn FnMut(&'a Node)) {
        f(self);
        for child in self.children() {
            child.walk(f);
        }
    }

    pub fn node_count(&self) -> usize {
        let mut n = 0;
        self.walk(&mut |_| n += 1);
        n
    }

    /// Indices of capture groups in pre-order (opening-parenthesis order).
    pub fn group_indices(&self) -> Vec<u32> {
        let mut out = Vec::new();
        self.walk(&mut |n| {
            if let Node::Group { index, .. } = n {
                out.push(*index);
            }
        });
        out
    }

    pub fn has_groups(&self) -> bool {
        let mut found = false;
        self.walk(&mut |n| found |= matches!(n, Node::Group { .. }));
        found
    }

    pub fn has_backreferences(&self) -> bool {
        let mut found = false;
        self.walk(&mut |n| found |= matches!(n, Node::Backreference(_)));
        found
    }

    /// True for zero-width assertions.
    pub fn is_assertion(&self) -> bool {
        matches!(
            self,
            Node::PositiveLookahead(_)
                | Node::NegativeLookahead(_)
                | Node::WordBoundary
                | Node::NonWordBoundary
                | Node::AnchorStart
                | Node::AnchorEnd
        )
    }

    pub fn has_assertions(&self) -> bool {
        let mut found = false;
        self.walk(&mut |n| found |= n.is_assertion());
        found
    }
}

/// Regex flags. Each letter may appear once in the source flag string.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct FlagSet {
    pub ignore_case: bool,
    pub multiline: bool,
    pub global: bool,
    pub sticky: bool,
    pub unicode: bool,
}

impl FlagSet {
    /// Flags in canonical `gimuy` order.
    pub fn to_flag_string(&self) -> alloc::string::String {
        let mut s = alloc::string::String::new();
        if self.global {
            s.push('g');
        }
        if self.ignore_case {
            s.push('i');
        }
        if self.multiline {
            s.push('m');
        }
        if self.unicode {
            s.push('u');
        }
        if self.sticky {
            s.push('y');
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RegexAst {
    pub root: Node,
    /// Number of capture groups, excluding the implicit group 0.
    pub group_count: u32,
}

impl RegexAst {
    pub fn new(root: Node) -> RegexAst {
        let group_count = root.group_indices().iter().filter(|&&i| i > 0).count() as u32;
        RegexAst { root, group_count }
    }
}

/// `\w`: `[A-Za-z0-9_]`.
pub fn is_word_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// ECMAScript line terminators.
pub fn is_line_terminator(c: char) -> bool {
    matches!(c, '\n' | '\r' | '\u{2028}' | '\u{2029}')
}

/// ECMAScript `WhiteSpace` plus `LineTerminator`, the set behind `\s`.
pub fn is_es_whitespace(c: char) -> bool {
    matches!(
        c,
        '\t' | '\u{B}'
            | '\u{C}'
            | ' '
            | '\u{A0}'
            | '\u{FEFF}'
            | '\u{1680}'
            | '\u{2000}'..='\u{200A}'
            | '\u{202F}'
            | '\u{205F}'
            | '\u{3000}'
    ) || is_line_terminator(c)
}

/// Inclusive code-point ranges making up `\s`.
pub const WHITESPACE_RANGES: &[(u32, u32)] = &[
    (0x09, 0x0D),
    (0x20, 0x20),
    (0xA0, 0xA0),
    (0x1680, 0x1680),
    (0x2000, 0x200A),
    (0x2028, 0x2029),
    (0x202F, 0x202F),
    (0x205F, 0x205F),
    (0x3000, 0x3000),
    (0xFEFF, 0xFEFF),
];

pub const WORD_RANGES: &[(u32, u32)] = &[(0x30, 0x39), (0x41, 0x5A), (0x5F, 0x5F), (0x61, 0x7A)];

pub const DIGIT_RANGES: &[(u32, u32)] = &[(0x30, 0x39)];
