//! Quantifier rewriting checked against the matcher on both forms.

use proptest::prelude::*;
use regsolve_core::matcher::match_full;
use regsolve_core::oracle::words;
use regsolve_core::parse_pattern;
use regsolve_core::preprocess::rewrite::rewrite_quantifiers;

type Captures = Option<Vec<Option<String>>>;

fn both(src: &str, w: &str) -> (Captures, Captures) {
    let (ast, flags) = parse_pattern(src, "").unwrap();
    let r = rewrite_quantifiers(&ast).unwrap();
    let original = match_full(&ast, w, &flags).unwrap();
    let rewritten = match_full(&r.ast, w, &flags).unwrap().map(|c| r.correspondence.recover(&c));
    (original, rewritten)
}

fn quantified(atoms: &'static [&'static str]) -> impl Strategy<Value = String> {
    let quant = prop_oneof![
        Just(String::new()),
        Just("+".to_string()),
        Just("?".to_string()),
        Just("*".to_string()),
        (0u32..=2, 1u32..=3).prop_map(|(m, n)| format!("{{{m},{}}}", n.max(m))),
        (0u32..=2).prop_map(|m| format!("{{{m},}}")),
    ];
    proptest::collection::vec((proptest::sample::select(atoms), quant, any::<bool>()), 1..=3).prop_map(|parts| {
        let mut s = String::new();
        for (a, q, lazy) in parts {
            s.push_str(a);
            s.push_str(&q);
            if lazy && !q.is_empty() {
                s.push('?');
            }
        }
        s
    })
}

const SOLID: [&str; 9] = ["a", "b", "[ab]", "(a)", "(b)", "(a|b)", "(?:ab)", "(ab)", "(?:a|(b))"];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    /// Fixed-width bodies that cannot match ε: whole-word captures survive
    /// rewriting.
    #[test]
    fn fixed_width_bodies_keep_captures(src in quantified(&SOLID)) {
        let (ast, _) = parse_pattern(&src, "").unwrap();
        prop_assume!(ast.group_count <= 2);
        for w in words(&['a', 'b'], 5) {
            let (o, r) = both(&src, &w);
            prop_assert_eq!(o, r, "{} on {:?}", src, w);
        }
    }
}

/// A nullable body under `?` or `+` can iterate on ε in the rewritten form,
/// where the ES6 empty-iteration check forbids it in the original.
#[test]
fn nullable_bodies_diverge() {
    let none: Captures = Some(vec![Some("ab".into()), None]);
    let empty: Captures = Some(vec![Some("ab".into()), Some(String::new())]);
    assert_eq!(both("(a?)?(?:ab)", "ab"), (none, empty));
    let (o, r) = both("(a?)+", "a");
    assert_eq!(o.unwrap()[1].as_deref(), Some("a"));
    assert_eq!(r.unwrap()[1].as_deref(), Some(""));
}

/// Alternatives of different widths let the rewritten form settle on a
/// different iteration split.
#[test]
fn variable_width_bodies_diverge() {
    let (o, r) = both("(a|ab)+(a|b)*", "aba");
    assert_eq!(o.unwrap()[2].as_deref(), Some("a"));
    assert_eq!(r.unwrap()[2], None);
}
