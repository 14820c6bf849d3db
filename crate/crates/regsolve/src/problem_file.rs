//! Line-oriented problem files. The grammar is documented in
//! `docs/formats.md`.

use std::collections::BTreeMap;
use std::fmt;

use regsolve_core::ir::{ApiMode, CapVar, ConstraintProblem, Formula, Polarity, RegexConstraint, StrVar, Term};
use regsolve_core::model::{add_regex_constraint, UnrollConfig};
use regsolve_core::parse_pattern;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Atom {
    Name(String),
    Lit(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Statement {
    Var { name: String, max_len: Option<usize> },
    Regex {
        polarity: Polarity,
        subject: Vec<Atom>,
        pattern: String,
        flags: String,
        captures: Option<Vec<String>>,
        exec: Option<usize>,
        after: Option<String>,
    },
    Eq { lhs: Vec<Atom>, rhs: Vec<Atom>, negated: bool },
    Undef(String),
    Defined(String),
}

/// A statement with its 1-based line number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Located {
    pub line: usize,
    pub statement: Statement,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ProblemFile {
    pub statements: Vec<Located>,
}

struct Lexer {
    chars: Vec<char>,
    pos: usize,
    line: usize,
}

fn is_name_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_name_part(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

impl Lexer {
    fn new(text: &str, line: usize) -> Self {
        Lexer { chars: text.chars().collect(), pos: 0, line }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { line: self.line, column: self.pos + 1, message: message.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn name(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Some(c) if is_name_start(c) => {
                let start = self.pos;
                while self.pos < self.chars.len() && is_name_part(self.chars[self.pos]) {
                    self.pos += 1;
                }
                Ok(self.chars[start..self.pos].iter().collect())
            }
            _ => self.err("expected a name"),
        }
    }

    fn number(&mut self) -> Result<usize, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        match text.parse() {
            Ok(n) => Ok(n),
            Err(_) => {
                self.pos = start;
                self.err("expected a number")
            }
        }
    }

    fn keyword(&mut self, word: &str) -> bool {
        let save = self.pos;
        match self.name() {
            Ok(n) if n == word => true,
            _ => {
                self.pos = save;
                false
            }
        }
    }

    fn string(&mut self) -> Result<String, ParseError> {
        self.pos += 1;
        let mut out = String::new();
        loop {
            let Some(&c) = self.chars.get(self.pos) else {
                return self.err("unterminated string");
            };
            self.pos += 1;
            match c {
                '"' => return Ok(out),
                '\\' => {
                    let Some(&e) = self.chars.get(self.pos) else {
                        return self.err("unterminated string");
                    };
                    self.pos += 1;
                    match e {
                        'n' => out.push('\n'),
                        'r' => out.push('\r'),
                        't' => out.push('\t'),
                        '"' | '\\' => out.push(e),
                        'u' => out.push(self.unicode_escape()?),
                        _ => {
                            self.pos -= 2;
                            return self.err(format!("unknown escape \\{e}"));
                        }
                    }
                }
                _ => out.push(c),
            }
        }
    }

    fn unicode_escape(&mut self) -> Result<char, ParseError> {
        let start = self.pos;
        let digits: String = if self.chars.get(self.pos) == Some(&'{') {
            let close = self.chars[self.pos..].iter().position(|&c| c == '}');
            let Some(close) = close else {
                return self.err("unterminated \\u{...} escape");
            };
            let d = self.chars[self.pos + 1..self.pos + close].iter().collect();
            self.pos += close + 1;
            d
        } else {
            let d: String = self.chars.iter().skip(self.pos).take(4).collect();
            self.pos += 4;
            d
        };
        match u32::from_str_radix(&digits, 16).ok().and_then(char::from_u32) {
            Some(c) => Ok(c),
            None => {
                self.pos = start;
                self.err("invalid \\u escape")
            }
        }
    }

    /// `atom ('++' atom)*`
    fn term(&mut self) -> Result<Vec<Atom>, ParseError> {
        let mut atoms = vec![self.atom()?];
        loop {
            self.skip_ws();
            if self.chars[self.pos..].starts_with(&['+', '+']) {
                self.pos += 2;
                atoms.push(self.atom()?);
            } else {
                return Ok(atoms);
            }
        }
    }

    fn atom(&mut self) -> Result<Atom, ParseError> {
        match self.peek() {
            Some('"') => Ok(Atom::Lit(self.string()?)),
            Some(c) if is_name_start(c) => Ok(Atom::Name(self.name()?)),
            _ => self.err("expected a name or a string literal"),
        }
    }

    /// `/pattern/flags`, with `/` allowed inside classes or escaped.
    fn regex(&mut self) -> Result<(String, String), ParseError> {
        if self.peek() != Some('/') {
            return self.err("expected /pattern/flags");
        }
        let start = self.pos;
        self.pos += 1;
        let mut in_class = false;
        let mut pattern = String::new();
        loop {
            let Some(&c) = self.chars.get(self.pos) else {
                self.pos = start;
                return self.err("unterminated regex literal");
            };
            self.pos += 1;
            match c {
                '\\' => {
                    pattern.push(c);
                    if let Some(&n) = self.chars.get(self.pos) {
                        pattern.push(n);
                        self.pos += 1;
                    }
                    continue;
                }
                '[' => in_class = true,
                ']' => in_class = false,
                '/' if !in_class => break,
                _ => {}
            }
            pattern.push(c);
        }
        let mut flags = String::new();
        while let Some(&c) = self.chars.get(self.pos) {
            if !c.is_ascii_alphabetic() {
                break;
            }
            flags.push(c);
            self.pos += 1;
        }
        Ok((pattern, flags))
    }
}

/// Strips a `#` comment that is not inside a string or regex literal.
fn strip_comment(line: &str) -> &str {
    let mut in_string = false;
    let mut in_regex = false;
    let mut in_class = false;
    let mut escaped = false;
    for (i, c) in line.char_indices() {
        if escaped {
            escaped = false;
            continue;
        }
        match c {
            '\\' if in_string || in_regex => escaped = true,
            '"' if !in_regex => in_string = !in_string,
            '/' if !in_string && !in_class => in_regex = !in_regex,
            '[' if in_regex => in_class = true,
            ']' if in_regex => in_class = false,
            '#' if !in_string && !in_regex => return &line[..i],
            _ => {}
        }
    }
    line
}

pub fn parse_problem(text: &str) -> Result<ProblemFile, ParseError> {
    let mut statements = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = strip_comment(raw);
        let mut lx = Lexer::new(line, i + 1);
        if lx.at_end() {
            continue;
        }
        let head = lx.name()?;
        let statement = match head.as_str() {
            "var" => {
                let name = lx.name()?;
                let max_len = if lx.keyword("maxlen") { Some(lx.number()?) } else { None };
                Statement::Var { name, max_len }
            }
            "in" | "notin" => {
                let polarity = if head == "in" { Polarity::Member } else { Polarity::NonMember };
                let subject = lx.term()?;
                let (pattern, flags) = lx.regex()?;
                let mut captures = None;
                let mut exec = None;
                let mut after = None;
                while !lx.at_end() {
                    if lx.keyword("captures") {
                        let mut names = vec![lx.name()?];
                        while matches!(lx.peek(), Some(c) if is_name_start(c)) {
                            let save = lx.pos;
                            let n = lx.name()?;
                            if matches!(n.as_str(), "exec" | "after" | "captures") {
                                lx.pos = save;
                                break;
                            }
                            names.push(n);
                        }
                        captures = Some(names);
                    } else if lx.keyword("exec") {
                        exec = Some(if lx.keyword("lastindex") { lx.number()? } else { 0 });
                    } else if lx.keyword("after") {
                        after = Some(lx.name()?);
                    } else {
                        return lx.err("expected captures, exec or after");
                    }
                }
                if after.is_some() && exec.is_none() {
                    return lx.err("after requires exec");
                }
                Statement::Regex { polarity, subject, pattern, flags, captures, exec, after }
            }
            "eq" | "neq" => {
                let lhs = lx.term()?;
                let rhs = lx.term()?;
                Statement::Eq { lhs, rhs, negated: head == "neq" }
            }
            "undef" => Statement::Undef(lx.name()?),
            "defined" => Statement::Defined(lx.name()?),
            other => {
                lx.pos = 0;
                lx.skip_ws();
                return lx.err(format!("unknown statement {other}"));
            }
        };
        if !lx.at_end() {
            return lx.err("unexpected trailing input");
        }
        statements.push(Located { line: i + 1, statement });
    }
    Ok(ProblemFile { statements })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Str,
    Cap,
    Int,
}

/// A problem ready for solving, with the names it was written with.
#[derive(Clone, Debug)]
pub struct Compiled {
    pub problem: ConstraintProblem,
}

fn at(line: usize, message: impl Into<String>) -> ParseError {
    ParseError { line, column: 1, message: message.into() }
}

impl ProblemFile {
    pub fn compile(&self, cfg: &UnrollConfig) -> Result<Compiled, ParseError> {
        let mut p = ConstraintProblem::new();
        let mut names: BTreeMap<String, Kind> = BTreeMap::new();
        let declare = |names: &mut BTreeMap<String, Kind>, name: &str, kind: Kind, line: usize| {
            if names.insert(name.to_string(), kind).is_some() {
                return Err(at(line, format!("{name} is already declared")));
            }
            Ok(())
        };
        for Located { line, statement } in &self.statements {
            let line = *line;
            let term = |names: &BTreeMap<String, Kind>, atoms: &[Atom]| -> Result<Term, ParseError> {
                let mut parts = Vec::new();
                for a in atoms {
                    parts.push(match a {
                        Atom::Lit(s) => Term::lit(s),
                        Atom::Name(n) => match names.get(n) {
                            Some(Kind::Str) => Term::Var(StrVar::Named(n.clone())),
                            Some(Kind::Cap) => Term::CapVal(CapVar::Named(n.clone())),
                            Some(Kind::Int) => return Err(at(line, format!("{n} is an integer, not a string"))),
                            None => return Err(at(line, format!("{n} is not declared"))),
                        },
                    });
                }
                Ok(Term::cat(parts))
            };
            let capture = |names: &BTreeMap<String, Kind>, n: &str| match names.get(n) {
                Some(Kind::Cap) => Ok(CapVar::Named(n.to_string())),
                _ => Err(at(line, format!("{n} is not a capture name"))),
            };
            match statement {
                Statement::Var { name, max_len } => {
                    declare(&mut names, name, Kind::Str, line)?;
                    p.declare_string(name, *max_len);
                }
                Statement::Regex { polarity, subject, pattern, flags, captures, exec, after } => {
                    let subject = term(&names, subject)?;
                    let (ast, flagset) = parse_pattern(pattern, flags).map_err(|e| at(line, format!("/{pattern}/{flags}: {e}")))?;
                    if flagset.unicode {
                        return Err(at(line, "unsupported flag u"));
                    }
                    let caps = match captures {
                        Some(list) => {
                            if list.len() != ast.group_count as usize + 1 {
                                return Err(at(line, format!("expected {} capture names, found {}", ast.group_count + 1, list.len())));
                            }
                            let mut caps = Vec::new();
                            for n in list {
                                declare(&mut names, n, Kind::Cap, line)?;
                                caps.push(p.declare_capture(n));
                            }
                            caps
                        }
                        None => (0..=ast.group_count).map(|_| p.fresh_cap()).collect(),
                    };
                    let last_index_after = match after {
                        Some(n) => {
                            declare(&mut names, n, Kind::Int, line)?;
                            Some(p.declare_int(n))
                        }
                        None => None,
                    };
                    let rc = RegexConstraint {
                        subject,
                        captures: caps,
                        polarity: *polarity,
                        source: format!("/{pattern}/{flags}"),
                        ast,
                        flags: flagset,
                        mode: match exec {
                            Some(li) => ApiMode::Exec { last_index: *li },
                            None => ApiMode::Raw,
                        },
                        last_index_after,
                        model_assertion: None,
                    };
                    add_regex_constraint(&mut p, rc, cfg).map_err(|e| at(line, e.to_string()))?;
                }
                Statement::Eq { lhs, rhs, negated } => {
                    let single_cap = |atoms: &[Atom]| match atoms {
                        [Atom::Name(n)] if names.get(n) == Some(&Kind::Cap) => Some(CapVar::Named(n.clone())),
                        _ => None,
                    };
                    let f = match (single_cap(lhs), single_cap(rhs)) {
                        (Some(a), Some(b)) => Formula::CapSame(a, b),
                        (Some(c), None) => Formula::CapEq(c, term(&names, rhs)?),
                        (None, Some(c)) => Formula::CapEq(c, term(&names, lhs)?),
                        (None, None) => Formula::StrEq(term(&names, lhs)?, term(&names, rhs)?),
                    };
                    p.assert(if *negated { Formula::not(f) } else { f });
                }
                Statement::Undef(n) => {
                    let c = capture(&names, n)?;
                    p.assert(Formula::CapUndef(c));
                }
                Statement::Defined(n) => {
                    let c = capture(&names, n)?;
                    p.assert(Formula::defined(&c));
                }
            }
        }
        Ok(Compiled { problem: p })
    }
}
