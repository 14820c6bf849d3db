//! SMT-LIB 2.6 emission (logic QF_SLIA) and model parsing.
//!
//! Captures become a Boolean "defined" flag plus a string value, with the
//! axiom that an undefined capture has value ε. Regular expressions are
//! hash-consed into `define-fun`s.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::{self, Write};

use crate::ir::{Assignment, CapVar, ConstraintProblem, Formula, IntExpr, IntVar, StrVar, Term, VarRef};
use crate::preprocess::{CharSet, ClassicalRegex};

fn mangle(name: &str) -> String {
    let mut out = String::new();
    for c in name.chars() {
        if c.is_ascii_alphanumeric() {
            out.push(c);
        } else {
            let _ = write!(out, "_{:x}_", c as u32);
        }
    }
    out
}

/// SMT symbols of a variable: one for strings and ints, two (flag, value)
/// for captures.
pub fn symbols(v: &VarRef) -> Vec<String> {
    match v {
        VarRef::Str(StrVar::Named(n)) => alloc::vec![format!("s_{}", mangle(n))],
        VarRef::Str(StrVar::Internal(i)) => alloc::vec![format!("t_{i}")],
        VarRef::Int(IntVar::Named(n)) => alloc::vec![format!("n_{}", mangle(n))],
        VarRef::Int(IntVar::Internal(i)) => alloc::vec![format!("i_{i}")],
        VarRef::Cap(CapVar::Named(n)) => {
            let m = mangle(n);
            alloc::vec![format!("c_{m}_d"), format!("c_{m}_v")]
        }
        VarRef::Cap(CapVar::Internal(i)) => alloc::vec![format!("k_{i}_d"), format!("k_{i}_v")],
    }
}

fn cap_symbols(c: &CapVar) -> (String, String) {
    let mut s = symbols(&VarRef::Cap(c.clone()));
    let v = s.pop().unwrap();
    (s.pop().unwrap(), v)
}

/// A string literal: printable ASCII except `\` stays, `"` doubles, all
/// else uses `\u{…}`.
pub fn escape_string(s: &str) -> String {
    let mut out = String::from("\"");
    for c in s.chars() {
        match c {
            '"' => out.push_str("\"\""),
            '\\' => out.push_str("\\u{5c}"),
            ' '..='~' => out.push(c),
            c => {
                let _ = write!(out, "\\u{{{:x}}}", c as u32);
            }
        }
    }
    out.push('"');
    out
}

fn char_lit(c: u32) -> String {
    escape_string(&char::from_u32(c).map(|c| c.to_string()).unwrap_or_default())
}

fn nary(op: &str, unit: &str, parts: Vec<String>) -> String {
    match parts.len() {
        0 => unit.to_string(),
        1 => parts.into_iter().next().unwrap(),
        _ => format!("({op} {})", parts.join(" ")),
    }
}

/// Stateful emitter: remembers declared variables and defined regexes, so
/// later batches of assertions can be sent incrementally.
#[derive(Default)]
pub struct SmtEmitter {
    defs: BTreeMap<ClassicalRegex, String>,
    declared: BTreeSet<VarRef>,
    pending: String,
}

impl SmtEmitter {
    pub fn new() -> SmtEmitter {
        SmtEmitter::default()
    }

    pub fn preamble() -> &'static str {
        "(set-logic QF_SLIA)\n(set-option :produce-models true)\n"
    }

    /// Declarations, definitions and assertions for the whole problem.
    pub fn problem(&mut self, p: &ConstraintProblem) -> String {
        let mut out = String::from(Self::preamble());
        for v in p.all_vars() {
            out.push_str(&self.declare(&v));
        }
        for d in &p.string_vars {
            if let Some(n) = d.max_len {
                let s = &symbols(&VarRef::Str(StrVar::Named(d.name.clone())))[0];
                let _ = writeln!(out, "(assert (<= (str.len {s}) {n}))");
            }
        }
        out.push_str(&self.assertions(&p.assertions));
        out
    }

    /// Declarations (when new) plus the capture axiom.
    pub fn declare(&mut self, v: &VarRef) -> String {
        if !self.declared.insert(v.clone()) {
            return String::new();
        }
        let syms = symbols(v);
        match v {
            VarRef::Str(_) => format!("(declare-const {} String)\n", syms[0]),
            VarRef::Int(_) => format!("(declare-const {} Int)\n", syms[0]),
            VarRef::Cap(_) => format!(
                "(declare-const {d} Bool)\n(declare-const {v} String)\n(assert (=> (not {d}) (= {v} \"\")))\n",
                d = syms[0],
                v = syms[1]
            ),
        }
    }

    /// Commands asserting the formulas, preceded by whatever they need
    /// declared or defined.
    pub fn assertions(&mut self, formulas: &[Formula]) -> String {
        let mut decls = String::new();
        for f in formulas {
            let mut vars = Vec::new();
            f.visit_vars(&mut |v| vars.push(v));
            for v in vars {
                decls.push_str(&self.declare(&v));
            }
        }
        let mut body = String::new();
        for f in formulas {
            let text = self.formula(f);
            let _ = writeln!(body, "(assert {text})");
        }
        let defs = core::mem::take(&mut self.pending);
        decls + &defs + &body
    }

    pub fn term(&self, t: &Term) -> String {
        match t {
            Term::Lit(s) => escape_string(s),
            Term::Var(v) => symbols(&VarRef::Str(v.clone())).remove(0),
            Term::CapVal(c) => cap_symbols(c).1,
            Term::Cat(parts) => nary("str.++", "\"\"", parts.iter().map(|p| self.term(p)).collect()),
        }
    }

    fn int(&self, e: &IntExpr) -> String {
        match e {
            IntExpr::Const(c) if *c < 0 => format!("(- {})", -c),
            IntExpr::Const(c) => c.to_string(),
            IntExpr::Var(v) => symbols(&VarRef::Int(v.clone())).remove(0),
            IntExpr::Len(t) => format!("(str.len {})", self.term(t)),
            IntExpr::Add(parts) => nary("+", "0", parts.iter().map(|p| self.int(p)).collect()),
        }
    }

    pub fn formula(&mut self, f: &Formula) -> String {
        match f {
            Formula::True => "true".into(),
            Formula::False => "false".into(),
            Formula::StrEq(a, b) => format!("(= {} {})", self.term(a), self.term(b)),
            Formula::LenEq(a, b) => format!("(= (str.len {}) (str.len {}))", self.term(a), self.term(b)),
            Formula::InRe(t, r) => format!("(str.in_re {} {})", self.term(t), self.regex(r)),
            Formula::NotInRe(t, r) => format!("(not (str.in_re {} {}))", self.term(t), self.regex(r)),
            Formula::CapEq(c, t) => {
                let (d, v) = cap_symbols(c);
                format!("(and {d} (= {v} {}))", self.term(t))
            }
            Formula::CapUndef(c) => format!("(not {})", cap_symbols(c).0),
            Formula::CapSame(a, b) => {
                let (ad, av) = cap_symbols(a);
                let (bd, bv) = cap_symbols(b);
                format!("(and (= {ad} {bd}) (= {av} {bv}))")
            }
            Formula::IntEq(a, b) => format!("(= {} {})", self.int(a), self.int(b)),
            Formula::IntLe(a, b) => format!("(<= {} {})", self.int(a), self.int(b)),
            Formula::And(parts) => {
                let parts = parts.iter().map(|p| self.formula(p)).collect();
                nary("and", "true", parts)
            }
            Formula::Or(parts) => {
                let parts = parts.iter().map(|p| self.formula(p)).collect();
                nary("or", "false", parts)
            }
            Formula::Not(x) => format!("(not {})", self.formula(x)),
            Formula::Implies(a, b) => format!("(=> {} {})", self.formula(a), self.formula(b)),
        }
    }

    fn set(s: &CharSet) -> String {
        let parts: Vec<String> = s
            .ranges()
            .iter()
            .map(|&(lo, hi)| {
                if lo == hi {
                    format!("(str.to_re {})", char_lit(lo))
                } else {
                    format!("(re.range {} {})", char_lit(lo), char_lit(hi))
                }
            })
            .collect();
        nary("re.union", "re.none", parts)
    }

    /// The regex as SMT text; larger subterms become named definitions.
    pub fn regex(&mut self, r: &ClassicalRegex) -> String {
        if let Some(name) = self.defs.get(r) {
            return name.clone();
        }
        let text = match r {
            ClassicalRegex::Epsilon => "(str.to_re \"\")".into(),
            ClassicalRegex::Nothing => "re.none".into(),
            ClassicalRegex::Set(s) => Self::set(s),
            ClassicalRegex::Concat(parts) => {
                let parts = parts.iter().map(|p| self.regex(p)).collect();
                nary("re.++", "(str.to_re \"\")", parts)
            }
            ClassicalRegex::Union(parts) => {
                let parts = parts.iter().map(|p| self.regex(p)).collect();
                nary("re.union", "re.none", parts)
            }
            ClassicalRegex::Inter(parts) => {
                let parts = parts.iter().map(|p| self.regex(p)).collect();
                nary("re.inter", "re.all", parts)
            }
            ClassicalRegex::Star(c) => format!("(re.* {})", self.regex(c)),
            ClassicalRegex::Complement(c) => format!("(re.comp {})", self.regex(c)),
            ClassicalRegex::Loop { child, min, max } => {
                let c = self.regex(child);
                match max {
                    Some(max) => format!("((_ re.loop {min} {max}) {c})"),
                    None => format!("(re.++ ((_ re.^ {min}) {c}) (re.* {c}))"),
                }
            }
        };
        if r.size() < 4 {
            return text;
        }
        let name = format!("re_{}", self.defs.len());
        let _ = writeln!(self.pending, "(define-fun {name} () RegLan {text})");
        self.defs.insert(r.clone(), name.clone());
        name
    }
}

/// `(get-value (…))` for the given variables.
pub fn get_value_command(vars: &[VarRef]) -> String {
    let syms: Vec<String> = vars.iter().flat_map(symbols).collect();
    format!("(get-value ({}))\n", syms.join(" "))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sexp {
    Atom(String),
    Str(String),
    List(Vec<Sexp>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmtParseError {
    pub message: String,
}

impl fmt::Display for SmtParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "malformed solver response: {}", self.message)
    }
}

impl core::error::Error for SmtParseError {}

fn err(m: &str) -> SmtParseError {
    SmtParseError { message: m.into() }
}

/// Decodes an SMT-LIB string literal body (without the quotes).
pub fn unescape_string(body: &str) -> Result<String, SmtParseError> {
    let chars: Vec<char> = body.chars().collect();
    let mut out = String::new();
    let mut i = 0;
    while i < chars.len() {
        if chars[i] == '\\' && chars.get(i + 1) == Some(&'u') {
            let (digits, next) = if chars.get(i + 2) == Some(&'{') {
                let close = chars[i + 3..].iter().position(|&c| c == '}').ok_or_else(|| err("unterminated \\u{"))?;
                (chars[i + 3..i + 3 + close].iter().collect::<String>(), i + 4 + close)
            } else if i + 6 <= chars.len() && chars[i + 2..i + 6].iter().all(|c| c.is_ascii_hexdigit()) {
                (chars[i + 2..i + 6].iter().collect::<String>(), i + 6)
            } else {
                out.push('\\');
                i += 1;
                continue;
            };
            let code = u32::from_str_radix(&digits, 16).map_err(|_| err("bad \\u escape"))?;
            out.push(char::from_u32(code).ok_or_else(|| err("escape is not a character"))?);
            i = next;
        } else {
            out.push(chars[i]);
            i += 1;
        }
    }
    Ok(out)
}

pub fn parse_sexps(text: &str) -> Result<Vec<Sexp>, SmtParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut stack: Vec<Vec<Sexp>> = alloc::vec![Vec::new()];
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            '(' => {
                stack.push(Vec::new());
                i += 1;
            }
            ')' => {
                let list = stack.pop().ok_or_else(|| err("unbalanced )"))?;
                stack.last_mut().ok_or_else(|| err("unbalanced )"))?.push(Sexp::List(list));
                i += 1;
            }
            '"' => {
                let mut body = String::new();
                i += 1;
                loop {
                    match chars.get(i) {
                        None => return Err(err("unterminated string")),
                        Some('"') if chars.get(i + 1) == Some(&'"') => {
                            body.push('"');
                            i += 2;
                        }
                        Some('"') => {
                            i += 1;
                            break;
                        }
                        Some(&c) => {
                            body.push(c);
                            i += 1;
                        }
                    }
                }
                stack.last_mut().unwrap().push(Sexp::Str(unescape_string(&body)?));
            }
            '|' => {
                let close = chars[i + 1..].iter().position(|&c| c == '|').ok_or_else(|| err("unterminated |symbol|"))?;
                stack.last_mut().unwrap().push(Sexp::Atom(chars[i + 1..i + 1 + close].iter().collect()));
                i += close + 2;
            }
            ';' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            c if c.is_whitespace() => i += 1,
            _ => {
                let start = i;
                while i < chars.len() && !chars[i].is_whitespace() && !matches!(chars[i], '(' | ')' | '"') {
                    i += 1;
                }
                stack.last_mut().unwrap().push(Sexp::Atom(chars[start..i].iter().collect()));
            }
        }
    }
    if stack.len() != 1 {
        return Err(err("unbalanced ("));
    }
    Ok(stack.pop().unwrap())
}

fn as_int(s: &Sexp) -> Option<i64> {
    match s {
        Sexp::Atom(a) => a.parse().ok(),
        Sexp::List(l) => match l.as_slice() {
            [Sexp::Atom(m), x] if m == "-" => as_int(x).map(|v| -v),
            _ => None,
        },
        _ => None,
    }
}

/// Reads a `get-value` response into an assignment over `vars`.
pub fn parse_model(response: &str, vars: &[VarRef]) -> Result<Assignment, SmtParseError> {
    let sexps = parse_sexps(response)?;
    let mut values: BTreeMap<String, Sexp> = BTreeMap::new();
    for s in sexps {
        if let Sexp::List(pairs) = s {
            for pair in pairs {
                if let Sexp::List(kv) = pair {
                    if let [Sexp::Atom(k), v] = kv.as_slice() {
                        values.insert(k.clone(), v.clone());
                    }
                }
            }
        }
    }
    let get = |sym: &str| values.get(sym).ok_or_else(|| err(&format!("no value for {sym}")));
    let mut a = Assignment::default();
    for v in vars {
        let syms = symbols(v);
        match v {
            VarRef::Str(s) => match get(&syms[0])? {
                Sexp::Str(x) => {
                    a.strings.insert(s.clone(), x.clone());
                }
                _ => return Err(err("string value expected")),
            },
            VarRef::Int(i) => {
                let x = as_int(get(&syms[0])?).ok_or_else(|| err("integer value expected"))?;
                a.ints.insert(i.clone(), x);
            }
            VarRef::Cap(c) => {
                let defined = match get(&syms[0])? {
                    Sexp::Atom(b) if b == "true" => true,
                    Sexp::Atom(b) if b == "false" => false,
                    _ => return Err(err("Boolean value expected")),
                };
                let value = match get(&syms[1])? {
                    Sexp::Str(x) => x.clone(),
                    _ => return Err(err("string value expected")),
                };
                a.captures.insert(c.clone(), defined.then_some(value));
            }
        }
    }
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn string_escaping() {
        assert_eq!(escape_string("a\"b"), "\"a\"\"b\"");
        assert_eq!(escape_string("\u{2}\\é"), "\"\\u{2}\\u{5c}\\u{e9}\"");
    }

    #[test]
    fn formula_text() {
        let mut e = SmtEmitter::new();
        let c = CapVar::Named("C1".into());
        let w = Term::Var(StrVar::Named("w".into()));
        let f = Formula::and(alloc::vec![
            Formula::CapEq(c.clone(), w.clone()),
            Formula::InRe(w, ClassicalRegex::star(ClassicalRegex::literal('a'))),
        ]);
        assert_eq!(e.formula(&f), "(and (and c_C1_d (= c_C1_v s_w)) (str.in_re s_w (re.* (str.to_re \"a\"))))");
        assert_eq!(e.declare(&VarRef::Cap(c)), "(declare-const c_C1_d Bool)\n(declare-const c_C1_v String)\n(assert (=> (not c_C1_d) (= c_C1_v \"\")))\n");
    }

    #[test]
    fn model_parsing() {
        let vars = alloc::vec![
            VarRef::Str(StrVar::Named("w".into())),
            VarRef::Cap(CapVar::Named("C1".into())),
            VarRef::Int(IntVar::Internal(4)),
        ];
        let resp = "((s_w \"a\\u{3c}\"\"b\")\n (c_C1_d false) (c_C1_v \"\") (i_4 (- 3)))";
        let a = parse_model(resp, &vars).unwrap();
        assert_eq!(a.string("w"), Some("a<\"b"));
        assert_eq!(a.capture("C1"), Some(None));
        assert_eq!(a.ints[&IntVar::Internal(4)], -3);
    }

    proptest! {
        #[test]
        fn escape_round_trip(s in "\\PC{0,12}") {
            let lit = escape_string(&s);
            let parsed = parse_sexps(&lit).unwrap();
            prop_assert_eq!(parsed, alloc::vec![Sexp::Str(s)]);
        }
    }
}
