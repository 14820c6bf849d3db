//! Regex literal extraction from JavaScript text and feature reports.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use crate::features::{profile_features, FeatureProfile, FEATURE_NAMES};
use crate::parse::parse_pattern;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegexLiteral {
    pub pattern: String,
    pub flags: String,
    pub offset: usize,
}

const REGEX_KEYWORDS: [&str; 17] = [
    "return", "typeof", "instanceof", "in", "of", "new", "delete", "void", "throw", "case", "do", "else", "yield", "await", "extends", "export", "default",
];

#[derive(Clone, Copy, PartialEq, Eq)]
enum Prev {
    /// Start of input, or a token after which an expression may begin.
    Operator,
    /// A token that can end an expression.
    Operand,
}

fn ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_' || c == '$'
}

fn ident_part(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '$'
}

/// Finds `/pattern/flags` literals, skipping comments, strings and template
/// text. Calls like `new RegExp("...")` are not literals and are ignored.
pub fn extract_literals(source: &str) -> Vec<RegexLiteral> {
    let chars: Vec<(usize, char)> = source.char_indices().collect();
    let n = chars.len();
    let at = |i: usize| chars.get(i).map(|c| c.1);
    let mut out = Vec::new();
    let mut prev = Prev::Operator;
    // Brace depths at which an enclosing template resumes.
    let mut templates: Vec<usize> = Vec::new();
    let mut depth = 0usize;
    let mut i = 0;
    while i < n {
        let c = chars[i].1;
        match c {
            _ if c.is_whitespace() => i += 1,
            '/' if at(i + 1) == Some('/') => {
                while i < n && !matches!(chars[i].1, '\n' | '\r' | '\u{2028}' | '\u{2029}') {
                    i += 1;
                }
            }
            '/' if at(i + 1) == Some('*') => {
                i += 2;
                while i < n && !(chars[i].1 == '*' && at(i + 1) == Some('/')) {
                    i += 1;
                }
                i += 2;
            }
            '/' if prev == Prev::Operator => match regex_end(&chars, i) {
                Some((body_end, end)) => {
                    out.push(RegexLiteral {
                        pattern: chars[i + 1..body_end].iter().map(|c| c.1).collect(),
                        flags: chars[body_end + 1..end].iter().map(|c| c.1).collect(),
                        offset: chars[i].0,
                    });
                    i = end;
                    prev = Prev::Operand;
                }
                None => {
                    i += 1;
                    prev = Prev::Operator;
                }
            },
            '\'' | '"' => {
                i += 1;
                while i < n && chars[i].1 != c && chars[i].1 != '\n' {
                    i += if chars[i].1 == '\\' { 2 } else { 1 };
                }
                i += 1;
                prev = Prev::Operand;
            }
            '`' => {
                (i, prev) = template_text(&chars, i + 1, &mut templates, depth);
            }
            '}' if templates.last() == Some(&depth) => {
                templates.pop();
                (i, prev) = template_text(&chars, i + 1, &mut templates, depth);
            }
            _ if ident_start(c) => {
                let start = i;
                while i < n && ident_part(chars[i].1) {
                    i += 1;
                }
                let word: String = chars[start..i].iter().map(|c| c.1).collect();
                prev = if REGEX_KEYWORDS.contains(&word.as_str()) { Prev::Operator } else { Prev::Operand };
            }
            _ if c.is_ascii_digit() || (c == '.' && at(i + 1).is_some_and(|d| d.is_ascii_digit())) => {
                while i < n && (ident_part(chars[i].1) || chars[i].1 == '.') {
                    i += 1;
                }
                prev = Prev::Operand;
            }
            _ => {
                match c {
                    '{' => depth += 1,
                    '}' => depth = depth.saturating_sub(1),
                    _ => {}
                }
                let postfix = (c == '+' || c == '-') && at(i + 1) == Some(c);
                if postfix {
                    i += 2;
                    continue;
                }
                prev = if matches!(c, ')' | ']') { Prev::Operand } else { Prev::Operator };
                i += 1;
            }
        }
    }
    out
}

/// Skips template text starting at `i`; stops after the closing backtick,
/// or after `${` with the resume depth pushed.
fn template_text(chars: &[(usize, char)], mut i: usize, templates: &mut Vec<usize>, depth: usize) -> (usize, Prev) {
    while i < chars.len() {
        match chars[i].1 {
            '\\' => i += 2,
            '`' => return (i + 1, Prev::Operand),
            '$' if chars.get(i + 1).map(|c| c.1) == Some('{') => {
                templates.push(depth);
                return (i + 2, Prev::Operator);
            }
            _ => i += 1,
        }
    }
    (i, Prev::Operand)
}

/// For a `/` at `start`, the index of the closing `/` and the end of flags.
fn regex_end(chars: &[(usize, char)], start: usize) -> Option<(usize, usize)> {
    let mut i = start + 1;
    let mut in_class = false;
    if chars.get(i).map(|c| c.1) == Some('/') {
        return None;
    }
    loop {
        let c = chars.get(i)?.1;
        match c {
            '\n' | '\r' | '\u{2028}' | '\u{2029}' => return None,
            '\\' => {
                if matches!(chars.get(i + 1).map(|c| c.1), None | Some('\n' | '\r')) {
                    return None;
                }
                i += 2;
                continue;
            }
            '[' => in_class = true,
            ']' => in_class = false,
            '/' if !in_class => break,
            _ => {}
        }
        i += 1;
    }
    let body_end = i;
    i += 1;
    while chars.get(i).is_some_and(|c| ident_part(c.1)) {
        i += 1;
    }
    Some((body_end, i))
}

/// Feature totals over all literals and over distinct `pattern`+`flags` texts.
/// Each feature counts the literals that use it.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ScanReport {
    pub files_scanned: usize,
    pub literals_found: usize,
    pub unique_literals: usize,
    pub parse_failures: usize,
    pub total: FeatureProfile,
    pub unique: FeatureProfile,
    seen: BTreeSet<(String, String)>,
}

fn presence(p: &FeatureProfile) -> FeatureProfile {
    from_counts(p.counts().map(|c| (c > 0) as u32))
}

fn from_counts(c: [u32; 19]) -> FeatureProfile {
    FeatureProfile {
        capture_groups: c[0],
        global_flag: c[1],
        character_class: c[2],
        kleene_plus: c[3],
        kleene_star: c[4],
        ignore_case_flag: c[5],
        ranges: c[6],
        non_capturing: c[7],
        repetition: c[8],
        lazy_kleene_star: c[9],
        multiline_flag: c[10],
        word_boundary: c[11],
        lazy_kleene_plus: c[12],
        lookaheads: c[13],
        backreferences: c[14],
        lazy_repetition: c[15],
        quantified_backreferences: c[16],
        sticky_flag: c[17],
        unicode_flag: c[18],
    }
}

fn pct(count: u32, of: usize) -> f64 {
    if of == 0 {
        0.0
    } else {
        count as f64 * 100.0 / of as f64
    }
}

impl ScanReport {
    pub fn new() -> ScanReport {
        ScanReport::default()
    }

    /// Adds one source file.
    pub fn add_source(&mut self, text: &str) {
        self.files_scanned += 1;
        for lit in extract_literals(text) {
            self.add_literal(&lit.pattern, &lit.flags);
        }
    }

    pub fn add_literal(&mut self, pattern: &str, flags: &str) {
        self.literals_found += 1;
        let fresh = self.seen.insert((pattern.into(), flags.into()));
        if fresh {
            self.unique_literals += 1;
        }
        match parse_pattern(pattern, flags) {
            Ok((ast, f)) => {
                let p = presence(&profile_features(&ast, &f));
                self.total.add(&p);
                if fresh {
                    self.unique.add(&p);
                }
            }
            Err(_) => self.parse_failures += 1,
        }
    }

    /// One row per feature: `name,totalCount,totalPct,uniqueCount,uniquePct`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("name,totalCount,totalPct,uniqueCount,uniquePct\n");
        for ((name, t), u) in FEATURE_NAMES.iter().zip(self.total.counts()).zip(self.unique.counts()) {
            let _ = writeln!(s, "{name},{t},{:.2},{u},{:.2}", pct(t, self.literals_found), pct(u, self.unique_literals));
        }
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "files scanned:   {}", self.files_scanned);
        let _ = writeln!(s, "literals found:  {}", self.literals_found);
        let _ = writeln!(s, "unique literals: {}", self.unique_literals);
        let _ = writeln!(s, "parse failures:  {}", self.parse_failures);
        let _ = writeln!(s);
        let _ = writeln!(s, "{:<20} {:>8} {:>8} {:>8} {:>8}", "feature", "total", "%", "unique", "%");
        for ((name, t), u) in FEATURE_NAMES.iter().zip(self.total.counts()).zip(self.unique.counts()) {
            let _ = writeln!(
                s,
                "{name:<20} {t:>8} {:>8.2} {u:>8} {:>8.2}",
                pct(t, self.literals_found),
                pct(u, self.unique_literals)
            );
        }
        s
    }
}
