//! AST to pattern source.

use alloc::string::String;
use core::fmt::Write;

use crate::ast::{CharClass, ClassItem, Node, RegexAst};

/// Prints `ast` as the body of a regex literal. For ASTs produced by the
/// parser, parsing the output yields the same AST.
pub fn print_pattern(ast: &RegexAst) -> String {
    print_node(&ast.root)
}

pub fn print_node(node: &Node) -> String {
    let mut out = String::new();
    write_node(&mut out, node);
    out
}

fn write_node(out: &mut String, node: &Node) {
    match node {
        Node::Alternation(l, r) => {
            write_alternative(out, l);
            out.push('|');
            write_node(out, r);
        }
        _ => write_alternative(out, node),
    }
}

/// A node in a position where `|` would bind too loosely.
fn write_alternative(out: &mut String, node: &Node) {
    match node {
        Node::Alternation(..) => {
            out.push_str("(?:");
            write_node(out, node);
            out.push(')');
        }
        Node::Concat(parts) => {
            let mut after_backref = false;
            for part in parts {
                match part {
                    Node::Concat(_) | Node::Alternation(..) => {
                        out.push_str("(?:");
                        write_node(out, part);
                        out.push(')');
                    }
                    // `\1` followed by a digit would read as a longer backreference.
                    Node::Literal(c) if after_backref && c.is_ascii_digit() => {
                        let _ = write!(out, "\\x{:02X}", *c as u32);
                    }
                    _ => write_term(out, part),
                }
                after_backref = matches!(part, Node::Backreference(_));
            }
        }
        _ => write_term(out, node),
    }
}

fn write_term(out: &mut String, node: &Node) {
    let (child, suffix, lazy) = match node {
        Node::Star { child, lazy } => (child, String::from("*"), *lazy),
        Node::Plus { child, lazy } => (child, String::from("+"), *lazy),
        Node::Optional { child, lazy } => (child, String::from("?"), *lazy),
        Node::Repetition { child, min, max, lazy } => {
            let s = match max {
                Some(max) if max == min => alloc::format!("{{{min}}}"),
                Some(max) => alloc::format!("{{{min},{max}}}"),
                None => alloc::format!("{{{min},}}"),
            };
            (child, s, *lazy)
        }
        _ => return write_atom(out, node),
    };
    if is_quantifiable_atom(child) {
        write_atom(out, child);
    } else {
        out.push_str("(?:");
        write_node(out, child);
        out.push(')');
    }
    out.push_str(&suffix);
    if lazy {
        out.push('?');
    }
}

fn is_quantifiable_atom(node: &Node) -> bool {
    matches!(
        node,
        Node::Literal(_)
            | Node::Dot
            | Node::Shorthand(_)
            | Node::Class(_)
            | Node::Group { .. }
            | Node::NonCapturingGroup(_)
            | Node::Backreference(_)
    )
}

fn write_atom(out: &mut String, node: &Node) {
    match node {
        Node::Literal(c) => write_literal(out, *c),
        Node::Dot => out.push('.'),
        Node::Shorthand(s) => {
            out.push('\\');
            out.push(s.letter());
        }
        Node::Class(class) => write_class(out, class),
        Node::Group { child, .. } => {
            out.push('(');
            write_node(out, child);
            out.push(')');
        }
        Node::NonCapturingGroup(child) => {
            out.push_str("(?:");
            write_node(out, child);
            out.push(')');
        }
        Node::PositiveLookahead(child) => {
            out.push_str("(?=");
            write_node(out, child);
            out.push(')');
        }
        Node::NegativeLookahead(child) => {
            out.push_str("(?!");
            write_node(out, child);
            out.push(')');
        }
        Node::Backreference(k) => {
            let _ = write!(out, "\\{k}");
        }
        Node::WordBoundary => out.push_str("\\b"),
        Node::NonWordBoundary => out.push_str("\\B"),
        Node::AnchorStart => out.push('^'),
        Node::AnchorEnd => out.push('$'),
        Node::Concat(_) | Node::Alternation(..) => {
            out.push_str("(?:");
            write_node(out, node);
            out.push(')');
        }
        Node::Star { .. } | Node::Plus { .. } | Node::Optional { .. } | Node::Repetition { .. } => {
            write_term(out, node)
        }
    }
}

fn write_escaped_char(out: &mut String, c: char, specials: &str) {
    match c {
        '\n' => out.push_str("\\n"),
        '\r' => out.push_str("\\r"),
        '\t' => out.push_str("\\t"),
        '\u{B}' => out.push_str("\\v"),
        '\u{C}' => out.push_str("\\f"),
        c if specials.contains(c) => {
            out.push('\\');
            out.push(c);
        }
        c if (c as u32) < 0x20 || c as u32 == 0x7F => {
            let _ = write!(out, "\\x{:02X}", c as u32);
        }
        c if (c as u32) > 0x7E && (c as u32) <= 0xFFFF && (c.is_whitespace() || c.is_control()) => {
            let _ = write!(out, "\\u{:04X}", c as u32);
        }
        c => out.push(c),
    }
}

fn write_literal(out: &mut String, c: char) {
    write_escaped_char(out, c, "^$\\.*+?()[]{}|/");
}

fn write_class_char(out: &mut String, c: char) {
    write_escaped_char(out, c, "\\]^-[/");
}

fn write_class(out: &mut String, class: &CharClass) {
    out.push('[');
    if class.negated {
        out.push('^');
    }
    for item in &class.items {
        match *item {
            ClassItem::Char(c) => write_class_char(out, c),
            ClassItem::Range(lo, hi) => {
                write_class_char(out, lo);
                out.push('-');
                write_class_char(out, hi);
            }
            ClassItem::Shorthand(s) => {
                out.push('\\');
                out.push(s.letter());
            }
        }
    }
    out.push(']');
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_pattern;
    use proptest::prelude::*;

    fn round_trip(src: &str) -> String {
        let (ast, _) = parse_pattern(src, "").unwrap();
        let printed = print_pattern(&ast);
        let (again, _) = parse_pattern(&printed, "").unwrap();
        assert_eq!(ast, again, "{src:?} printed as {printed:?}");
        printed
    }

    #[test]
    fn examples_print_identically() {
        for src in [r"(?:a|(b))\1", "a{2,3}?", r"[a-z\d]", "a|((b)*c)*d", r"^\bx\B(?=y)(?!z)$", "a{3}b{2,}"] {
            assert_eq!(round_trip(src), src);
        }
    }

    #[test]
    fn escapes_survive() {
        round_trip(r"\/\.\*\n\x00[\]\-\^\\]\{\}");
        round_trip(r"(a)\1\x32");
        round_trip("\u{2028}[\u{A0}-\u{FEFF}]");
    }

    fn pattern_strategy() -> impl Strategy<Value = String> {
        let leaf = prop_oneof![
            Just("a".to_string()),
            Just("b".to_string()),
            Just(".".to_string()),
            Just(r"\d".to_string()),
            Just("[a-c\\s]".to_string()),
            Just("[^<>]".to_string()),
            Just(r"\/".to_string()),
            Just(r"\1".to_string()),
            Just("^".to_string()),
            Just("$".to_string()),
            Just(r"\b".to_string()),
            Just("".to_string()),
        ];
        leaf.prop_recursive(4, 32, 3, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("{a}{b}")),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("{a}|{b}")),
                inner.clone().prop_map(|a| format!("({a})")),
                inner.clone().prop_map(|a| format!("(?:{a})")),
                inner.clone().prop_map(|a| format!("(?={a})")),
                inner.clone().prop_map(|a| format!("(?!{a})")),
                (inner.clone(), 0..8usize).prop_map(|(a, q)| {
                    let quant = ["*", "+", "?", "{2}", "{1,3}", "{0,}", "*?", "{2,4}?"][q];
                    format!("(?:{a}){quant}")
                }),
                (inner, 0..4usize).prop_map(|(a, q)| format!("({a}){}", ["*", "+?", "??", "{0,2}"][q])),
            ]
        })
    }

    proptest! {
        #[test]
        fn parse_print_round_trip(src in pattern_strategy()) {
            if let Ok((ast, _)) = parse_pattern(&src, "") {
                let printed = print_pattern(&ast);
                let (again, _) = parse_pattern(&printed, "").unwrap();
                prop_assert_eq!(ast, again);
            }
        }

        #[test]
        fn groups_numbered_in_preorder(src in pattern_strategy()) {
            if let Ok((ast, _)) = parse_pattern(&src, "") {
                let indices = ast.root.group_indices();
                let expected: Vec<u32> = (1..=ast.group_count).collect();
                prop_assert_eq!(indices, expected);
            }
        }
    }
}
