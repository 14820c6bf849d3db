//! `exec` wrapping and ignore-case rewriting.

use alloc::boxed::Box;
use alloc::vec::Vec;

use crate::ast::{CharClass, ClassItem, FlagSet, Node, RegexAst};

/// Where matching starts for an `exec` call.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExecOffset {
    /// Index in the original input where the scan begins (`lastIndex` for
    /// global or sticky regexes, else 0).
    pub start: usize,
    /// `start > 0 ? start + 1 : 0`, the offset into the marker-wrapped input.
    pub offset: usize,
}

/// Lazy any-character padding, `[^]*?`.
pub fn padding() -> Node {
    Node::star(Node::Class(CharClass { negated: true, items: Vec::new() }), true)
}

/// Wraps the pattern for `exec`: the source becomes capture group 0 and is
/// surrounded by lazy padding. A sticky regex gets no leading padding since
/// its match must begin exactly at `lastIndex`.
pub fn wrap_for_exec(ast: &RegexAst, flags: &FlagSet, last_index: usize) -> (RegexAst, ExecOffset) {
    let body = Node::Group { index: 0, child: Box::new(ast.root.clone()) };
    let mut parts = Vec::new();
    if !flags.sticky {
        parts.push(padding());
    }
    parts.push(body);
    parts.push(padding());
    let start = if flags.global || flags.sticky { last_index } else { 0 };
    let offset = if start > 0 { start + 1 } else { 0 };
    (RegexAst { root: Node::Concat(parts), group_count: ast.group_count }, ExecOffset { start, offset })
}

/// ASCII case closure: every letter accepts both cases.
pub fn rewrite_ignore_case(ast: &RegexAst) -> RegexAst {
    RegexAst { root: fold(&ast.root), group_count: ast.group_count }
}

fn swap_case(c: char) -> Option<char> {
    if c.is_ascii_lowercase() {
        Some(c.to_ascii_uppercase())
    } else if c.is_ascii_uppercase() {
        Some(c.to_ascii_lowercase())
    } else {
        None
    }
}

fn fold_items(items: &[ClassItem]) -> Vec<ClassItem> {
    let mut out: Vec<ClassItem> = items.to_vec();
    let mut extra = Vec::new();
    for item in items {
        match *item {
            ClassItem::Char(c) => {
                if let Some(o) = swap_case(c) {
                    extra.push(ClassItem::Char(o));
                }
            }
            ClassItem::Range(lo, hi) => {
                for (a, b, delta) in [('a', 'z', -32i32), ('A', 'Z', 32)] {
                    let l = lo.max(a);
                    let h = hi.min(b);
                    if l <= h {
                        let shift = |c: char| char::from_u32((c as i32 + delta) as u32).unwrap();
                        extra.push(if l == h { ClassItem::Char(shift(l)) } else { ClassItem::Range(shift(l), shift(h)) });
                    }
                }
            }
            ClassItem::Shorthand(_) => {}
        }
    }
    for e in extra {
        if !out.iter().any(|i| covers(i, &e)) {
            out.push(e);
        }
    }
    out
}

fn covers(a: &ClassItem, b: &ClassItem) -> bool {
    match *b {
        ClassItem::Char(c) => a.contains(c),
        ClassItem::Range(lo, hi) => matches!(*a, ClassItem::Range(x, y) if x <= lo && hi <= y),
        ClassItem::Shorthand(s) => *a == ClassItem::Shorthand(s),
    }
}

fn fold(node: &Node) -> Node {
    let b = |n: &Node| Box::new(fold(n));
    match node {
        Node::Literal(c) => match swap_case(*c) {
            Some(o) => {
                let (lower, upper) = if c.is_ascii_lowercase() { (*c, o) } else { (o, *c) };
                Node::Class(CharClass { negated: false, items: alloc::vec![ClassItem::Char(lower), ClassItem::Char(upper)] })
            }
            None => node.clone(),
        },
        Node::Class(class) => Node::Class(CharClass { negated: class.negated, items: fold_items(&class.items) }),
        Node::Concat(parts) => Node::Concat(parts.iter().map(fold).collect()),
        Node::Alternation(l, r) => Node::Alternation(b(l), b(r)),
        Node::Star { child, lazy } => Node::Star { child: b(child), lazy: *lazy },
        Node::Plus { child, lazy } => Node::Plus { child: b(child), lazy: *lazy },
        Node::Optional { child, lazy } => Node::Optional { child: b(child), lazy: *lazy },
        Node::Repetition { child, min, max, lazy } => Node::Repetition { child: b(child), min: *min, max: *max, lazy: *lazy },
        Node::Group { index, child } => Node::Group { index: *index, child: b(child) },
        Node::NonCapturingGroup(c) => Node::NonCapturingGroup(b(c)),
        Node::PositiveLookahead(c) => Node::PositiveLookahead(b(c)),
        Node::NegativeLookahead(c) => Node::NegativeLookahead(b(c)),
        other => other.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcher::{match_full, RegexValue};
    use crate::parse::parse_pattern;
    use crate::print::print_pattern;
    use alloc::string::String;
    use proptest::prelude::*;

    fn folded(src: &str) -> String {
        print_pattern(&rewrite_ignore_case(&parse_pattern(src, "").unwrap().0))
    }

    #[test]
    fn case_folding_examples() {
        assert_eq!(folded("a"), "[aA]");
        assert_eq!(folded("[a-c]"), "[a-cA-C]");
        assert_eq!(folded("[0-9]"), "[0-9]");
        assert_eq!(folded("[^Xy]"), "[^XyxY]");
        assert_eq!(folded("[W-c]"), "[W-cA-Cw-z]");
    }

    #[test]
    fn wrap_examples() {
        let (ast, flags) = parse_pattern("goo+d", "").unwrap();
        let (w, off) = wrap_for_exec(&ast, &flags, 0);
        assert_eq!(print_pattern(&w), "[^]*?(goo+d)[^]*?");
        assert_eq!(off, ExecOffset { start: 0, offset: 0 });
        let (ast, flags) = parse_pattern("a", "y").unwrap();
        let (w, off) = wrap_for_exec(&ast, &flags, 3);
        assert_eq!(print_pattern(&w), "(a)[^]*?");
        assert_eq!(off.offset, 4);
        let (ast, flags) = parse_pattern("^a$", "").unwrap();
        let (w, _) = wrap_for_exec(&ast, &flags, 0);
        assert_eq!(print_pattern(&w), "[^]*?(^a$)[^]*?");
    }

    proptest! {
        /// With wrapping, a whole-input match reproduces exec's captures.
        #[test]
        fn wrapped_full_match_equals_exec(src in r"(a|b|\(a\)|\(b\*\)|\^|\$|\\b|a\+\?)(a|b|\(a\|b\)|\$|b\?){0,2}", w in "[ab ]{0,5}") {
            let (ast, flags) = parse_pattern(&src, "").unwrap();
            let (wrapped, _) = wrap_for_exec(&ast, &flags, 0);
            let exec = RegexValue::new(ast.clone(), flags).exec(&w).unwrap();
            let full = match_full(&wrapped, &w, &flags).unwrap();
            prop_assert_eq!(exec.matched, full.is_some());
            if let Some(mut caps) = full {
                // Slot 0 of the wrapped match is group 0, the exec match.
                caps.truncate(ast.group_count as usize + 1);
                prop_assert_eq!(exec.captures, caps);
            }
        }

        #[test]
        fn folded_language_is_case_closed(src in r"(a|B|\[a-c\]|\[\^x\]|\\w|\.|\[Q-b\])(a|z|\[0-9A\]){0,2}", w in "[abcxzABCXZ0]{1,3}") {
            let (ast, flags) = parse_pattern(&src, "").unwrap();
            let folded = rewrite_ignore_case(&ast);
            let swapped: String = w.chars().map(|c| swap_case(c).unwrap_or(c)).collect();
            let a = match_full(&folded, &w, &flags).unwrap().is_some();
            let b = match_full(&folded, &swapped, &flags).unwrap().is_some();
            prop_assert_eq!(a, b);
            let mut fi = flags;
            fi.ignore_case = true;
            prop_assert_eq!(a, match_full(&ast, &w, &fi).unwrap().is_some());
        }
    }
}
