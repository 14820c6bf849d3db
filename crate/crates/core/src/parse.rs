//! ES6 pattern parser.
//!
//! Accepts the core ES6 grammar (no Annex-B extensions). Octal escapes and
//! named groups are rejected; `\k` beyond the group count still parses as a
//! backreference.

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::fmt;

use crate::ast::{CharClass, ClassItem, FlagSet, Node, RegexAst, Shorthand};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SyntaxErrorKind {
    UnbalancedParenthesis,
    UnterminatedClass,
    NothingToRepeat,
    LoneQuantifierBrackets,
    QuantifierOutOfOrder,
    ClassRangeOutOfOrder,
    InvalidClassRange,
    InvalidEscape,
    OctalEscape,
    UnsupportedGroupSyntax,
    TrailingBackslash,
    OutsideBmp,
    DuplicateFlag(char),
    UnknownFlag(char),
}

/// Parse failure with the character offset where it was detected. Offsets
/// into the flag string are reported relative to the flag string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyntaxError {
    pub position: usize,
    pub kind: SyntaxErrorKind,
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match &self.kind {
            SyntaxErrorKind::UnbalancedParenthesis => "unbalanced parenthesis",
            SyntaxErrorKind::UnterminatedClass => "unterminated character class",
            SyntaxErrorKind::NothingToRepeat => "nothing to repeat",
            SyntaxErrorKind::LoneQuantifierBrackets => "lone quantifier brackets",
            SyntaxErrorKind::QuantifierOutOfOrder => "numbers out of order in {} quantifier",
            SyntaxErrorKind::ClassRangeOutOfOrder => "range out of order in character class",
            SyntaxErrorKind::InvalidClassRange => "invalid character class range",
            SyntaxErrorKind::InvalidEscape => "invalid escape",
            SyntaxErrorKind::OctalEscape => "octal escapes are not supported",
            SyntaxErrorKind::UnsupportedGroupSyntax => "unsupported group syntax",
            SyntaxErrorKind::TrailingBackslash => "\\ at end of pattern",
            SyntaxErrorKind::OutsideBmp => "code point outside the Basic Multilingual Plane",
            SyntaxErrorKind::DuplicateFlag(c) => return write!(f, "duplicate flag '{c}' at {}", self.position),
            SyntaxErrorKind::UnknownFlag(c) => return write!(f, "unknown flag '{c}' at {}", self.position),
        };
        write!(f, "{what} at {}", self.position)
    }
}

impl core::error::Error for SyntaxError {}

pub fn parse_flags(flags: &str) -> Result<FlagSet, SyntaxError> {
    let mut set = FlagSet::default();
    for (position, c) in flags.chars().enumerate() {
        let slot = match c {
            'g' => &mut set.global,
            'i' => &mut set.ignore_case,
            'm' => &mut set.multiline,
            'y' => &mut set.sticky,
            'u' => &mut set.unicode,
            _ => return Err(SyntaxError { position, kind: SyntaxErrorKind::UnknownFlag(c) }),
        };
        if *slot {
            return Err(SyntaxError { position, kind: SyntaxErrorKind::DuplicateFlag(c) });
        }
        *slot = true;
    }
    Ok(set)
}

/// Parses a pattern body (the text between the slashes of a literal) and its
/// flag string.
pub fn parse_pattern(source: &str, flags: &str) -> Result<(RegexAst, FlagSet), SyntaxError> {
    let flags = parse_flags(flags)?;
    let mut parser = Parser { chars: source.chars().collect(), pos: 0, next_group: 1, unicode: flags.unicode };
    let root = parser.disjunction()?;
    if parser.pos < parser.chars.len() {
        // Only a stray ')' can stop the top-level disjunction early.
        return Err(parser.error(SyntaxErrorKind::UnbalancedParenthesis));
    }
    let group_count = parser.next_group - 1;
    Ok((RegexAst { root, group_count }, flags))
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    next_group: u32,
    unicode: bool,
}

impl Parser {
    fn error(&self, kind: SyntaxErrorKind) -> SyntaxError {
        SyntaxError { position: self.pos, kind }
    }

    fn error_at(&self, position: usize, kind: SyntaxErrorKind) -> SyntaxError {
        SyntaxError { position, kind }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&self, offset: usize) -> Option<char> {
        self.chars.get(self.pos + offset).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn disjunction(&mut self) -> Result<Node, SyntaxError> {
        let mut alternatives = alloc::vec![self.alternative()?];
        while self.eat('|') {
            alternatives.push(self.alternative()?);
        }
        Ok(Node::alternation_of(alternatives))
    }

    fn alternative(&mut self) -> Result<Node, SyntaxError> {
        let mut terms = Vec::new();
        while let Some(c) = self.peek() {
            if c == '|' || c == ')' {
                break;
            }
            terms.push(self.term()?);
        }
        Ok(Node::concat_of(terms))
    }

    fn term(&mut self) -> Result<Node, SyntaxError> {
        let start = self.pos;
        let c = self.peek().unwrap();
        let assertion = match c {
            '^' => {
                self.pos += 1;
                Some(Node::AnchorStart)
            }
            '$' => {
                self.pos += 1;
                Some(Node::AnchorEnd)
            }
            '\\' if self.peek_at(1) == Some('b') => {
                self.pos += 2;
                Some(Node::WordBoundary)
            }
            '\\' if self.peek_at(1) == Some('B') => {
                self.pos += 2;
                Some(Node::NonWordBoundary)
            }
            '(' if self.peek_at(1) == Some('?') && matches!(self.peek_at(2), Some('=') | Some('!')) => {
                let negative = self.peek_at(2) == Some('!');
                self.pos += 3;
                let body = self.disjunction()?;
                if !self.eat(')') {
                    return Err(self.error_at(start, SyntaxErrorKind::UnbalancedParenthesis));
                }
                let body = Box::new(body);
                Some(if negative { Node::NegativeLookahead(body) } else { Node::PositiveLookahead(body) })
            }
            _ => None,
        };
        if let Some(node) = assertion {
            if self.at_quantifier() {
                return Err(self.error(SyntaxErrorKind::NothingToRepeat));
            }
            return Ok(node);
        }
        let atom = self.atom()?;
        self.quantifier(atom)
    }

    fn at_quantifier(&self) -> bool {
        match self.peek() {
            Some('*') | Some('+') | Some('?') => true,
            Some('{') => self.scan_braces().is_some(),
            _ => false,
        }
    }

    /// Parses `{n}`, `{n,}` or `{n,m}` at the cursor without consuming it.
    /// Returns (min, max, length).
    fn scan_braces(&self) -> Option<(u32, Option<u32>, usize)> {
        let mut i = self.pos + 1;
        let digits = |i: &mut usize| -> Option<u32> {
            let begin = *i;
            let mut value: u64 = 0;
            while let Some(d) = self.chars.get(*i).and_then(|c| c.to_digit(10)) {
                value = (value * 10 + d as u64).min(u32::MAX as u64);
                *i += 1;
            }
            (*i > begin).then_some(value as u32)
        };
        let min = digits(&mut i)?;
        let max = if self.chars.get(i) == Some(&',') {
            i += 1;
            if self.chars.get(i) == Some(&'}') {
                None
            } else {
                Some(digits(&mut i)?)
            }
        } else {
            Some(min)
        };
        if self.chars.get(i) != Some(&'}') {
            return None;
        }
        Some((min, max, i + 1 - self.pos))
    }

    fn quantifier(&mut self, atom: Node) -> Result<Node, SyntaxError> {
        let start = self.pos;
        let kind = match self.peek() {
            Some('*') => {
                self.pos += 1;
                0
            }
            Some('+') => {
                self.pos += 1;
                1
            }
            Some('?') => {
                self.pos += 1;
                2
            }
            Some('{') => match self.scan_braces() {
                Some((min, max, len)) => {
                    if let Some(max) = max {
                        if max < min {
                            return Err(self.error(SyntaxErrorKind::QuantifierOutOfOrder));
                        }
                    }
                    self.pos += len;
                    let lazy = self.eat('?');
                    let node = Node::Repetition { child: Box::new(atom), min, max, lazy };
                    return self.reject_double_quantifier(node);
                }
                None => return Err(self.error_at(start, SyntaxErrorKind::LoneQuantifierBrackets)),
            },
            _ => return Ok(atom),
        };
        let lazy = self.eat('?');
        let child = Box::new(atom);
        let node = match kind {
            0 => Node::Star { child, lazy },
            1 => Node::Plus { child, lazy },
            _ => Node::Optional { child, lazy },
        };
        self.reject_double_quantifier(node)
    }

    fn reject_double_quantifier(&self, node: Node) -> Result<Node, SyntaxError> {
        if self.at_quantifier() {
            Err(self.error(SyntaxErrorKind::NothingToRepeat))
        } else {
            Ok(node)
        }
    }

    fn atom(&mut self) -> Result<Node, SyntaxError> {
        let start = self.pos;
        let c = self.peek().unwrap();
        match c {
            '.' => {
                self.pos += 1;
                Ok(Node::Dot)
            }
            '(' => {
                self.pos += 1;
                let capturing = if self.peek() == Some('?') {
                    if self.peek_at(1) == Some(':') {
                        self.pos += 2;
                        false
                    } else {
                        return Err(self.error(SyntaxErrorKind::UnsupportedGroupSyntax));
                    }
                } else {
                    true
                };
                let index = if capturing {
                    let i = self.next_group;
                    self.next_group += 1;
                    Some(i)
                } else {
                    None
                };
                let body = self.disjunction()?;
                if !self.eat(')') {
                    return Err(self.error_at(start, SyntaxErrorKind::UnbalancedParenthesis));
                }
                Ok(match index {
                    Some(index) => Node::group(index, body),
                    None => Node::non_capturing(body),
                })
            }
            ')' => Err(self.error(SyntaxErrorKind::UnbalancedParenthesis)),
            '[' => self.class(),
            '\\' => self.atom_escape(),
            '*' | '+' | '?' => Err(self.error(SyntaxErrorKind::NothingToRepeat)),
            '{' => {
                if self.scan_braces().is_some() {
                    Err(self.error(SyntaxErrorKind::NothingToRepeat))
                } else {
                    Err(self.error(SyntaxErrorKind::LoneQuantifierBrackets))
                }
            }
            '}' | ']' => Err(self.error(SyntaxErrorKind::LoneQuantifierBrackets)),
            _ => {
                self.check_bmp(c)?;
                self.pos += 1;
                Ok(Node::Literal(c))
            }
        }
    }

    fn check_bmp(&self, c: char) -> Result<(), SyntaxError> {
        if (c as u32) > 0xFFFF && !self.unicode {
            Err(self.error(SyntaxErrorKind::OutsideBmp))
        } else {
            Ok(())
        }
    }

    fn atom_escape(&mut self) -> Result<Node, SyntaxError> {
        let start = self.pos;
        self.pos += 1;
        let Some(c) = self.peek() else {
            return Err(self.error_at(start, SyntaxErrorKind::TrailingBackslash));
        };
        if let Some(s) = shorthand(c) {
            self.pos += 1;
            return Ok(Node::Shorthand(s));
        }
        if c.is_ascii_digit() && c != '0' {
            let mut value: u64 = 0;
            while let Some(d) = self.peek().and_then(|c| c.to_digit(10)) {
                value = (value * 10 + d as u64).min(u32::MAX as u64);
                self.pos += 1;
            }
            return Ok(Node::Backreference(value as u32));
        }
        let ch = self.character_escape(start)?;
        Ok(Node::Literal(ch))
    }

    /// Character escapes shared by atoms and classes; the cursor sits on the
    /// character after the backslash.
    fn character_escape(&mut self, start: usize) -> Result<char, SyntaxError> {
        let c = self.peek().unwrap();
        self.pos += 1;
        let ch = match c {
            'n' => '\n',
            'r' => '\r',
            't' => '\t',
            'f' => '\u{C}',
            'v' => '\u{B}',
            '0' => {
                if self.peek().is_some_and(|d| d.is_ascii_digit()) {
                    return Err(self.error_at(start, SyntaxErrorKind::OctalEscape));
                }
                '\0'
            }
            'c' => match self.peek() {
                Some(l) if l.is_ascii_alphabetic() => {
                    self.pos += 1;
                    char::from_u32(l as u32 % 32).unwrap()
                }
                _ => return Err(self.error_at(start, SyntaxErrorKind::InvalidEscape)),
            },
            'x' => {
                let v = self.hex_digits(2).ok_or(self.error_at(start, SyntaxErrorKind::InvalidEscape))?;
                char::from_u32(v).unwrap()
            }
            'u' => {
                if self.unicode && self.peek() == Some('{') {
                    self.pos += 1;
                    let mut value: u32 = 0;
                    let mut n = 0;
                    while let Some(d) = self.peek().and_then(|c| c.to_digit(16)) {
                        value = value.saturating_mul(16).saturating_add(d);
                        self.pos += 1;
                        n += 1;
                    }
                    if n == 0 || !self.eat('}') {
                        return Err(self.error_at(start, SyntaxErrorKind::InvalidEscape));
                    }
                    char::from_u32(value).ok_or(self.error_at(start, SyntaxErrorKind::InvalidEscape))?
                } else {
                    let v = self.hex_digits(4).ok_or(self.error_at(start, SyntaxErrorKind::InvalidEscape))?;
                    // Lone surrogates have no `char`; they cannot occur in BMP-restricted input.
                    char::from_u32(v).ok_or(self.error_at(start, SyntaxErrorKind::InvalidEscape))?
                }
            }
            c if c.is_ascii_alphanumeric() || c == '_' => {
                return Err(self.error_at(start, SyntaxErrorKind::InvalidEscape));
            }
            c => {
                self.check_bmp(c)?;
                c
            }
        };
        Ok(ch)
    }

    fn hex_digits(&mut self, n: usize) -> Option<u32> {
        let mut value = 0;
        for i in 0..n {
            value = value * 16 + self.peek_at(i)?.to_digit(16)?;
        }
        self.pos += n;
        Some(value)
    }

    fn class(&mut self) -> Result<Node, SyntaxError> {
        let start = self.pos;
        self.pos += 1;
        let negated = self.eat('^');
        let mut items = Vec::new();
        loop {
            let Some(c) = self.peek() else {
                return Err(self.error_at(start, SyntaxErrorKind::UnterminatedClass));
            };
            if c == ']' {
                self.pos += 1;
                break;
            }
            let atom_pos = self.pos;
            let first = self.class_atom(start)?;
            if self.peek() == Some('-') && self.peek_at(1).is_some_and(|c| c != ']') {
                self.pos += 1;
                let second = self.class_atom(start)?;
                match (first, second) {
                    (ClassItem::Char(lo), ClassItem::Char(hi)) => {
                        if lo > hi {
                            return Err(self.error_at(atom_pos, SyntaxErrorKind::ClassRangeOutOfOrder));
                        }
                        items.push(ClassItem::Range(lo, hi));
                    }
                    _ => return Err(self.error_at(atom_pos, SyntaxErrorKind::InvalidClassRange)),
                }
            } else {
                items.push(first);
            }
        }
        Ok(Node::Class(CharClass { negated, items }))
    }

    fn class_atom(&mut self, class_start: usize) -> Result<ClassItem, SyntaxError> {
        let Some(c) = self.peek() else {
            return Err(self.error_at(class_start, SyntaxErrorKind::UnterminatedClass));
        };
        if c != '\\' {
            self.check_bmp(c)?;
            self.pos += 1;
            return Ok(ClassItem::Char(c));
        }
        let start = self.pos;
        self.pos += 1;
        let Some(e) = self.peek() else {
            return Err(self.error_at(class_start, SyntaxErrorKind::UnterminatedClass));
        };
        if let Some(s) = shorthand(e) {
            self.pos += 1;
            return Ok(ClassItem::Shorthand(s));
        }
        match e {
            'b' => {
                self.pos += 1;
                Ok(ClassItem::Char('\u{8}'))
            }
            '-' => {
                self.pos += 1;
                Ok(ClassItem::Char('-'))
            }
            '1'..='9' => Err(self.error_at(start, SyntaxErrorKind::OctalEscape)),
            _ => Ok(ClassItem::Char(self.character_escape(start)?)),
        }
    }
}

fn shorthand(c: char) -> Option<Shorthand> {
    Some(match c {
        'w' => Shorthand::Word,
        'W' => Shorthand::NotWord,
        'd' => Shorthand::Digit,
        'D' => Shorthand::NotDigit,
        's' => Shorthand::Space,
        'S' => Shorthand::NotSpace,
        _ => return None,
    })
}

/// Convenience used by tests and examples: parse or panic with the message.
#[doc(hidden)]
pub fn parse_or_panic(source: &str, flags: &str) -> (RegexAst, FlagSet) {
    match parse_pattern(source, flags) {
        Ok(v) => v,
        Err(e) => panic!("failed to parse /{source}/{flags}: {e}"),
    }
}


#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn lit(c: char) -> Node {
        Node::Literal(c)
    }

    #[test]
    fn numbers_groups_by_opening_parenthesis() {
        let (ast, _) = parse_pattern("a|((b)*c)*d", "").unwrap();
        assert_eq!(ast.group_count, 2);
        let inner = Node::star(Node::group(2, lit('b')), false);
        let group1 = Node::group(1, Node::Concat(vec![inner, lit('c')]));
        let expected = Node::alt(lit('a'), Node::Concat(vec![Node::star(group1, false), lit('d')]));
        assert_eq!(ast.root, expected);
    }

    #[test]
    fn empty_pattern_is_empty_concat() {
        let (ast, flags) = parse_pattern("", "").unwrap();
        assert_eq!(ast.root, Node::Concat(vec![]));
        assert_eq!(ast.group_count, 0);
        assert_eq!(flags, FlagSet::default());
    }

    #[test]
    fn lookahead_then_literal() {
        let (ast, _) = parse_pattern("(?=a)b", "").unwrap();
        assert_eq!(ast.root, Node::Concat(vec![Node::PositiveLookahead(Box::new(lit('a'))), lit('b')]));
    }

    #[test]
    fn quantifiers_and_laziness() {
        let (ast, _) = parse_pattern("a{2,3}?b{4,}c{5}", "").unwrap();
        let Node::Concat(parts) = ast.root else { panic!() };
        assert_eq!(parts[0], Node::Repetition { child: Box::new(lit('a')), min: 2, max: Some(3), lazy: true });
        assert_eq!(parts[1], Node::Repetition { child: Box::new(lit('b')), min: 4, max: None, lazy: false });
        assert_eq!(parts[2], Node::Repetition { child: Box::new(lit('c')), min: 5, max: Some(5), lazy: false });
    }

    #[test]
    fn escapes() {
        let (ast, _) = parse_pattern(r"\n\x41B\/\.\0\cJ", "").unwrap();
        assert_eq!(
            ast.root,
            Node::Concat(vec![lit('\n'), lit('A'), lit('B'), lit('/'), lit('.'), lit('\0'), lit('\n')])
        );
    }

    #[test]
    fn class_items_keep_order() {
        let (ast, _) = parse_pattern(r"[a-z\d\b-]", "").unwrap();
        assert_eq!(
            ast.root,
            Node::Class(CharClass {
                negated: false,
                items: vec![
                    ClassItem::Range('a', 'z'),
                    ClassItem::Shorthand(Shorthand::Digit),
                    ClassItem::Char('\u{8}'),
                    ClassItem::Char('-'),
                ],
            })
        );
    }

    #[test]
    fn backreference_beyond_group_count_parses() {
        let (ast, _) = parse_pattern(r"(a)\2", "").unwrap();
        assert_eq!(ast.root, Node::Concat(vec![Node::group(1, lit('a')), Node::Backreference(2)]));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let cases: &[(&str, usize, SyntaxErrorKind)] = &[
            ("(a", 0, SyntaxErrorKind::UnbalancedParenthesis),
            ("a)", 1, SyntaxErrorKind::UnbalancedParenthesis),
            ("*a", 0, SyntaxErrorKind::NothingToRepeat),
            ("a**", 2, SyntaxErrorKind::NothingToRepeat),
            ("^*", 1, SyntaxErrorKind::NothingToRepeat),
            ("[z-a]", 1, SyntaxErrorKind::ClassRangeOutOfOrder),
            (r"[\d-z]", 1, SyntaxErrorKind::InvalidClassRange),
            ("a{3,2}", 1, SyntaxErrorKind::QuantifierOutOfOrder),
            ("[ab", 0, SyntaxErrorKind::UnterminatedClass),
            (r"\01", 0, SyntaxErrorKind::OctalEscape),
            (r"\q", 0, SyntaxErrorKind::InvalidEscape),
            ("(?<n>a)", 1, SyntaxErrorKind::UnsupportedGroupSyntax),
            ("a{", 1, SyntaxErrorKind::LoneQuantifierBrackets),
            ("\\", 0, SyntaxErrorKind::TrailingBackslash),
        ];
        for (src, pos, kind) in cases {
            let err = parse_pattern(src, "").unwrap_err();
            assert_eq!((err.position, &err.kind), (*pos, kind), "pattern {src:?}");
        }
    }

    #[test]
    fn flag_errors() {
        assert_eq!(parse_flags("gg").unwrap_err().kind, SyntaxErrorKind::DuplicateFlag('g'));
        assert_eq!(parse_flags("gx").unwrap_err(), SyntaxError { position: 1, kind: SyntaxErrorKind::UnknownFlag('x') });
        let f = parse_flags("gimuy").unwrap();
        assert!(f.global && f.ignore_case && f.multiline && f.unicode && f.sticky);
    }

    #[test]
    fn braced_unicode_escape_needs_u_flag() {
        assert!(parse_pattern(r"\u{1F600}", "").is_err());
        let (ast, _) = parse_pattern(r"\u{1F600}", "u").unwrap();
        assert_eq!(ast.root, lit('\u{1F600}'));
        assert_eq!(parse_pattern("\u{1F600}", "").unwrap_err().kind, SyntaxErrorKind::OutsideBmp);
    }
}
