//! Classical (capture-free) regular expressions and capture erasure.

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::fmt;

use crate::ast::{Node, Shorthand, DIGIT_RANGES, WHITESPACE_RANGES, WORD_RANGES};

/// Start-of-input marker.
pub const MARK_START: char = '\u{2}';
/// End-of-input marker.
pub const MARK_END: char = '\u{3}';

pub const MAX_CHAR: u32 = 0xFFFF;

/// A set of BMP code points as sorted, disjoint, non-adjacent inclusive ranges.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CharSet(Vec<(u32, u32)>);

impl CharSet {
    pub fn empty() -> CharSet {
        CharSet(Vec::new())
    }

    pub fn full() -> CharSet {
        CharSet(alloc::vec![(0, MAX_CHAR)])
    }

    pub fn single(c: char) -> CharSet {
        CharSet(alloc::vec![(c as u32, c as u32)])
    }

    pub fn from_ranges(ranges: impl IntoIterator<Item = (u32, u32)>) -> CharSet {
        let mut v: Vec<(u32, u32)> = ranges.into_iter().filter(|r| r.0 <= r.1).collect();
        v.sort();
        let mut out: Vec<(u32, u32)> = Vec::new();
        for (lo, hi) in v {
            match out.last_mut() {
                Some(last) if lo <= last.1.saturating_add(1) => last.1 = last.1.max(hi),
                _ => out.push((lo, hi)),
            }
        }
        CharSet(out)
    }

    pub fn ranges(&self) -> &[(u32, u32)] {
        &self.0
    }

    pub fn contains(&self, c: char) -> bool {
        let c = c as u32;
        self.0.iter().any(|&(lo, hi)| lo <= c && c <= hi)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_single(&self) -> Option<char> {
        match self.0.as_slice() {
            [(lo, hi)] if lo == hi => char::from_u32(*lo),
            _ => None,
        }
    }

    pub fn complement(&self) -> CharSet {
        let mut out = Vec::new();
        let mut next = 0u32;
        for &(lo, hi) in &self.0 {
            if lo > next {
                out.push((next, lo - 1));
            }
            next = hi + 1;
        }
        if next <= MAX_CHAR {
            out.push((next, MAX_CHAR));
        }
        CharSet(out)
    }

    pub fn union(&self, other: &CharSet) -> CharSet {
        CharSet::from_ranges(self.0.iter().chain(other.0.iter()).copied())
    }

    pub fn minus(&self, other: &CharSet) -> CharSet {
        self.intersect(&other.complement())
    }

    pub fn intersect(&self, other: &CharSet) -> CharSet {
        let mut out = Vec::new();
        for &(a, b) in &self.0 {
            for &(c, d) in &other.0 {
                let lo = a.max(c);
                let hi = b.min(d);
                if lo <= hi {
                    out.push((lo, hi));
                }
            }
        }
        CharSet::from_ranges(out)
    }

    /// Some member, preferring printable ASCII.
    pub fn sample(&self) -> Option<char> {
        let printable = self.intersect(&CharSet(alloc::vec![(0x20, 0x7E)]));
        let set = if printable.is_empty() { self } else { &printable };
        set.0.first().and_then(|&(lo, _)| char::from_u32(lo))
    }
}

/// Characters a subject string may contain: the BMP without surrogates,
/// the two input markers, and U+2028/U+2029.
pub fn user_alphabet() -> CharSet {
    CharSet::from_ranges([(0, MARK_START as u32 - 1), (MARK_END as u32 + 1, 0x2027), (0x202A, 0xD7FF), (0xE000, MAX_CHAR)])
}

/// `\n`, `\r`, U+2028, U+2029.
pub fn line_terminators() -> CharSet {
    CharSet::from_ranges([(0x0A, 0x0A), (0x0D, 0x0D), (0x2028, 0x2029)])
}

pub fn word_chars() -> CharSet {
    CharSet::from_ranges(WORD_RANGES.iter().copied())
}

pub fn shorthand_set(s: Shorthand) -> CharSet {
    match s {
        Shorthand::Word => word_chars(),
        Shorthand::NotWord => word_chars().complement(),
        Shorthand::Digit => CharSet::from_ranges(DIGIT_RANGES.iter().copied()),
        Shorthand::NotDigit => CharSet::from_ranges(DIGIT_RANGES.iter().copied()).complement(),
        Shorthand::Space => CharSet::from_ranges(WHITESPACE_RANGES.iter().copied()),
        Shorthand::NotSpace => CharSet::from_ranges(WHITESPACE_RANGES.iter().copied()).complement(),
    }
}

/// A regular expression without captures, backreferences or assertions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassicalRegex {
    /// The empty word.
    Epsilon,
    /// The empty language.
    Nothing,
    Set(CharSet),
    Concat(Vec<ClassicalRegex>),
    Union(Vec<ClassicalRegex>),
    Star(Box<ClassicalRegex>),
    Loop { child: Box<ClassicalRegex>, min: u32, max: Option<u32> },
    Inter(Vec<ClassicalRegex>),
    /// Complement with respect to all words over the full alphabet.
    Complement(Box<ClassicalRegex>),
}

impl ClassicalRegex {
    pub fn literal(c: char) -> ClassicalRegex {
        ClassicalRegex::Set(CharSet::single(c))
    }

    pub fn word(s: &str) -> ClassicalRegex {
        ClassicalRegex::concat(s.chars().map(ClassicalRegex::literal).collect())
    }

    /// Every word over the full alphabet.
    pub fn any_word() -> ClassicalRegex {
        ClassicalRegex::star(ClassicalRegex::Set(CharSet::full()))
    }

    pub fn star(r: ClassicalRegex) -> ClassicalRegex {
        match r {
            ClassicalRegex::Epsilon | ClassicalRegex::Nothing => ClassicalRegex::Epsilon,
            r @ ClassicalRegex::Star(_) => r,
            r => ClassicalRegex::Star(Box::new(r)),
        }
    }

    pub fn concat(parts: Vec<ClassicalRegex>) -> ClassicalRegex {
        let mut out = Vec::new();
        for p in parts {
            match p {
                ClassicalRegex::Epsilon => {}
                ClassicalRegex::Nothing => return ClassicalRegex::Nothing,
                ClassicalRegex::Concat(inner) => out.extend(inner),
                p => out.push(p),
            }
        }
        match out.len() {
            0 => ClassicalRegex::Epsilon,
            1 => out.pop().unwrap(),
            _ => ClassicalRegex::Concat(out),
        }
    }

    pub fn union(parts: Vec<ClassicalRegex>) -> ClassicalRegex {
        let mut out: Vec<ClassicalRegex> = Vec::new();
        for p in parts {
            match p {
                ClassicalRegex::Nothing => {}
                ClassicalRegex::Union(inner) => {
                    for q in inner {
                        if !out.contains(&q) {
                            out.push(q);
                        }
                    }
                }
                p => {
                    if !out.contains(&p) {
                        out.push(p);
                    }
                }
            }
        }
        match out.len() {
            0 => ClassicalRegex::Nothing,
            1 => out.pop().unwrap(),
            _ => ClassicalRegex::Union(out),
        }
    }

    pub fn inter(parts: Vec<ClassicalRegex>) -> ClassicalRegex {
        let mut out: Vec<ClassicalRegex> = Vec::new();
        for p in parts {
            match p {
                ClassicalRegex::Nothing => return ClassicalRegex::Nothing,
                ClassicalRegex::Inter(inner) => {
                    for q in inner {
                        if !out.contains(&q) {
                            out.push(q);
                        }
                    }
                }
                p if p.is_any_word() => {}
                p => {
                    if !out.contains(&p) {
                        out.push(p);
                    }
                }
            }
        }
        match out.len() {
            0 => ClassicalRegex::any_word(),
            1 => out.pop().unwrap(),
            _ => ClassicalRegex::Inter(out),
        }
    }

    pub fn complement(r: ClassicalRegex) -> ClassicalRegex {
        match r {
            ClassicalRegex::Complement(inner) => *inner,
            ClassicalRegex::Nothing => ClassicalRegex::any_word(),
            r if r.is_any_word() => ClassicalRegex::Nothing,
            r => ClassicalRegex::Complement(Box::new(r)),
        }
    }

    pub fn is_any_word(&self) -> bool {
        matches!(self, ClassicalRegex::Star(c) if matches!(&**c, ClassicalRegex::Set(s) if *s == CharSet::full()))
    }

    /// Intersects every character set with `alphabet`.
    pub fn restrict(&self, alphabet: &CharSet) -> ClassicalRegex {
        match self {
            ClassicalRegex::Set(s) => {
                let s = s.intersect(alphabet);
                if s.is_empty() {
                    ClassicalRegex::Nothing
                } else {
                    ClassicalRegex::Set(s)
                }
            }
            ClassicalRegex::Concat(parts) => ClassicalRegex::concat(parts.iter().map(|p| p.restrict(alphabet)).collect()),
            ClassicalRegex::Union(parts) => ClassicalRegex::union(parts.iter().map(|p| p.restrict(alphabet)).collect()),
            ClassicalRegex::Inter(parts) => ClassicalRegex::inter(parts.iter().map(|p| p.restrict(alphabet)).collect()),
            ClassicalRegex::Star(c) => ClassicalRegex::star(c.restrict(alphabet)),
            ClassicalRegex::Loop { child, min, max } => {
                ClassicalRegex::Loop { child: Box::new(child.restrict(alphabet)), min: *min, max: *max }
            }
            ClassicalRegex::Complement(_) => ClassicalRegex::inter(alloc::vec![
                self.clone(),
                ClassicalRegex::star(ClassicalRegex::Set(alphabet.clone()))
            ]),
            other => other.clone(),
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        1 + match self {
            ClassicalRegex::Concat(parts) | ClassicalRegex::Union(parts) | ClassicalRegex::Inter(parts) => {
                parts.iter().map(|p| p.size()).sum()
            }
            ClassicalRegex::Star(c) | ClassicalRegex::Complement(c) => c.size(),
            ClassicalRegex::Loop { child, .. } => child.size(),
            _ => 0,
        }
    }

    pub fn optional(r: ClassicalRegex) -> ClassicalRegex {
        ClassicalRegex::union(alloc::vec![r, ClassicalRegex::Epsilon])
    }

    /// True when the language contains ε.
    pub fn nullable(&self) -> bool {
        match self {
            ClassicalRegex::Epsilon | ClassicalRegex::Star(_) => true,
            ClassicalRegex::Nothing | ClassicalRegex::Set(_) => false,
            ClassicalRegex::Concat(parts) => parts.iter().all(|p| p.nullable()),
            ClassicalRegex::Union(parts) => parts.iter().any(|p| p.nullable()),
            ClassicalRegex::Loop { child, min, .. } => *min == 0 || child.nullable(),
            ClassicalRegex::Inter(parts) => parts.iter().all(|p| p.nullable()),
            ClassicalRegex::Complement(c) => !c.nullable(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NotRegular;

impl fmt::Display for NotRegular {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("term contains a backreference, lookahead, boundary or anchor")
    }
}

impl core::error::Error for NotRegular {}

/// The character set of a single-character node.
pub fn leaf_set(node: &Node) -> Option<CharSet> {
    Some(match node {
        Node::Literal(c) => CharSet::single(*c),
        Node::Dot => line_terminators().complement(),
        Node::Shorthand(s) => shorthand_set(*s),
        Node::Class(class) => {
            let mut set = CharSet::empty();
            for item in &class.items {
                set = set.union(&match *item {
                    crate::ast::ClassItem::Char(c) => CharSet::single(c),
                    crate::ast::ClassItem::Range(lo, hi) => CharSet::from_ranges([(lo as u32, hi as u32)]),
                    crate::ast::ClassItem::Shorthand(s) => shorthand_set(s),
                });
            }
            if class.negated {
                set.complement()
            } else {
                set
            }
        }
        _ => return None,
    })
}

/// Rewrites capture groups as plain grouping. Fails on non-regular nodes.
pub fn erase_captures(node: &Node) -> Result<ClassicalRegex, NotRegular> {
    erase(node, false)
}

/// Like [`erase_captures`], but replaces zero-width assertions by ε. The
/// result overapproximates the word language (ignoring contexts). Still
/// fails on backreferences.
pub fn erase_relaxed(node: &Node) -> Result<ClassicalRegex, NotRegular> {
    erase(node, true)
}

/// True when `erase_captures` succeeds.
pub fn is_regular(node: &Node) -> bool {
    let mut ok = true;
    node.walk(&mut |n| ok &= !(n.is_assertion() || matches!(n, Node::Backreference(_))));
    ok
}

fn erase(node: &Node, relaxed: bool) -> Result<ClassicalRegex, NotRegular> {
    if let Some(set) = leaf_set(node) {
        return Ok(ClassicalRegex::Set(set));
    }
    Ok(match node {
        Node::Concat(parts) => {
            ClassicalRegex::concat(parts.iter().map(|p| erase(p, relaxed)).collect::<Result<_, _>>()?)
        }
        Node::Alternation(l, r) => ClassicalRegex::union(alloc::vec![erase(l, relaxed)?, erase(r, relaxed)?]),
        Node::Star { child, .. } => ClassicalRegex::star(erase(child, relaxed)?),
        Node::Plus { child, .. } => {
            let c = erase(child, relaxed)?;
            ClassicalRegex::concat(alloc::vec![c.clone(), ClassicalRegex::star(c)])
        }
        Node::Optional { child, .. } => ClassicalRegex::optional(erase(child, relaxed)?),
        Node::Repetition { child, min, max, .. } => {
            ClassicalRegex::Loop { child: Box::new(erase(child, relaxed)?), min: *min, max: *max }
        }
        Node::Group { child, .. } | Node::NonCapturingGroup(child) => erase(child, relaxed)?,
        Node::Backreference(_) => return Err(NotRegular),
        n if n.is_assertion() => {
            if relaxed {
                ClassicalRegex::Epsilon
            } else {
                return Err(NotRegular);
            }
        }
        _ => unreachable!(),
    })
}

/// Membership test by end-position sets, used by the evaluator and tests.
pub fn accepts(re: &ClassicalRegex, word: &[char]) -> bool {
    // Positions reachable after matching `re` from each start position.
    fn ends(re: &ClassicalRegex, word: &[char], start: usize) -> Vec<usize> {
        let mut out = match re {
            ClassicalRegex::Epsilon => alloc::vec![start],
            ClassicalRegex::Nothing => Vec::new(),
            ClassicalRegex::Set(s) => match word.get(start) {
                Some(&c) if s.contains(c) => alloc::vec![start + 1],
                _ => Vec::new(),
            },
            ClassicalRegex::Concat(parts) => {
                let mut cur = alloc::vec![start];
                for p in parts {
                    let mut next = Vec::new();
                    for s in cur {
                        next.extend(ends(p, word, s));
                    }
                    next.sort_unstable();
                    next.dedup();
                    cur = next;
                    if cur.is_empty() {
                        break;
                    }
                }
                cur
            }
            ClassicalRegex::Union(parts) => parts.iter().flat_map(|p| ends(p, word, start)).collect(),
            ClassicalRegex::Star(child) => closure(child, word, alloc::vec![start], 0, None),
            ClassicalRegex::Loop { child, min, max } => closure(child, word, alloc::vec![start], *min, *max),
            ClassicalRegex::Inter(parts) => {
                let mut cur: Vec<usize> = (start..=word.len()).collect();
                for p in parts {
                    let e = ends(p, word, start);
                    cur.retain(|x| e.contains(x));
                }
                cur
            }
            ClassicalRegex::Complement(child) => {
                let e = ends(child, word, start);
                (start..=word.len()).filter(|x| !e.contains(x)).collect()
            }
        };
        out.sort_unstable();
        out.dedup();
        out
    }
    fn closure(child: &ClassicalRegex, word: &[char], start: Vec<usize>, min: u32, max: Option<u32>) -> Vec<usize> {
        let step = |from: &[usize]| -> Vec<usize> {
            let mut next: Vec<usize> = from.iter().flat_map(|&s| ends(child, word, s)).collect();
            next.sort_unstable();
            next.dedup();
            next
        };
        let mut cur = start;
        for _ in 0..min {
            cur = step(&cur);
            if cur.is_empty() {
                return cur;
            }
        }
        // A position first reached after fewer iterations has at least as
        // much budget left, so later visits can be dropped.
        let mut reached = cur.clone();
        let mut frontier = cur;
        let mut i = min;
        while !frontier.is_empty() && max.is_none_or(|m| i < m) {
            frontier = step(&frontier).into_iter().filter(|p| !reached.contains(p)).collect();
            reached.extend(frontier.iter().copied());
            i += 1;
        }
        reached
    }
    ends(re, word, 0).contains(&word.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcher::match_full;
    use crate::parse::parse_pattern;
    use alloc::string::String;
    use proptest::prelude::*;

    fn erased(src: &str) -> Result<ClassicalRegex, NotRegular> {
        erase_captures(&parse_pattern(src, "").unwrap().0.root)
    }

    #[test]
    fn erasure_examples() {
        assert_eq!(erased("(a)(b|(c))").unwrap(), erased("(?:a)(?:b|(?:c))").unwrap());
        assert_eq!(erased("a*").unwrap(), ClassicalRegex::star(ClassicalRegex::literal('a')));
        assert_eq!(erased(r"(a\1)"), Err(NotRegular));
        assert_eq!(erased(r"^a"), Err(NotRegular));
    }

    #[test]
    fn charset_algebra() {
        let s = CharSet::from_ranges([(5, 9), (1, 3), (4, 4)]);
        assert_eq!(s.ranges(), &[(1, 9)]);
        assert_eq!(s.complement().complement(), s);
        assert_eq!(CharSet::full().complement(), CharSet::empty());
        assert!(line_terminators().complement().contains('a'));
    }

    fn all_words(max: usize) -> Vec<String> {
        let mut out = alloc::vec![String::new()];
        let mut layer = alloc::vec![String::new()];
        for _ in 0..max {
            layer = layer
                .iter()
                .flat_map(|w| ['a', 'b'].into_iter().map(move |c| alloc::format!("{w}{c}")))
                .collect();
            out.extend(layer.iter().cloned());
        }
        out
    }

    proptest! {
        /// The erased language agrees with whole-word matching of the
        /// original for every word up to length 5 over {a,b}.
        #[test]
        fn erasure_preserves_language(src in r"((\(a\)|\(b\)|a|b|\[ab\]|\(a\|b\)|\(\?:ab\|\))[*+?]?(\{1,2\})?){1,3}") {
            let (ast, flags) = match parse_pattern(&src, "") { Ok(v) => v, Err(_) => return Ok(()) };
            let re = erase_captures(&ast.root).unwrap();
            for w in all_words(5) {
                let chars: Vec<char> = w.chars().collect();
                let expected = match_full(&ast, &w, &flags).unwrap().is_some();
                prop_assert_eq!(accepts(&re, &chars), expected, "word {:?}", w);
            }
        }
    }
}
