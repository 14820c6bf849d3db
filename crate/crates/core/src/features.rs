//! Feature classification of parsed regexes, one counter per survey category.

use crate::ast::{ClassItem, FlagSet, Node, RegexAst};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct FeatureProfile {
    pub capture_groups: u32,
    pub global_flag: u32,
    /// Bracketed classes plus shorthand classes outside brackets.
    pub character_class: u32,
    pub kleene_plus: u32,
    pub kleene_star: u32,
    pub ignore_case_flag: u32,
    /// Ranges inside bracketed classes.
    pub ranges: u32,
    pub non_capturing: u32,
    pub repetition: u32,
    pub lazy_kleene_star: u32,
    pub multiline_flag: u32,
    /// `\b` and `\B`.
    pub word_boundary: u32,
    pub lazy_kleene_plus: u32,
    pub lookaheads: u32,
    pub backreferences: u32,
    pub lazy_repetition: u32,
    pub quantified_backreferences: u32,
    pub sticky_flag: u32,
    pub unicode_flag: u32,
}

/// Category names in the survey's row order.
pub const FEATURE_NAMES: [&str; 19] = [
    "Capture Groups",
    "Global Flag",
    "Character Class",
    "Kleene+",
    "Kleene*",
    "Ignore Case Flag",
    "Ranges",
    "Non-capturing",
    "Repetition",
    "Kleene* (Lazy)",
    "Multiline Flag",
    "Word Boundary",
    "Kleene+ (Lazy)",
    "Lookaheads",
    "Backreferences",
    "Repetition (Lazy)",
    "Quantified BRefs",
    "Sticky Flag",
    "Unicode Flag",
];

impl FeatureProfile {
    /// Counters in [`FEATURE_NAMES`] order.
    pub fn counts(&self) -> [u32; 19] {
        [
            self.capture_groups,
            self.global_flag,
            self.character_class,
            self.kleene_plus,
            self.kleene_star,
            self.ignore_case_flag,
            self.ranges,
            self.non_capturing,
            self.repetition,
            self.lazy_kleene_star,
            self.multiline_flag,
            self.word_boundary,
            self.lazy_kleene_plus,
            self.lookaheads,
            self.backreferences,
            self.lazy_repetition,
            self.quantified_backreferences,
            self.sticky_flag,
            self.unicode_flag,
        ]
    }

    pub fn add(&mut self, other: &FeatureProfile) {
        let fields: [&mut u32; 19] = [
            &mut self.capture_groups,
            &mut self.global_flag,
            &mut self.character_class,
            &mut self.kleene_plus,
            &mut self.kleene_star,
            &mut self.ignore_case_flag,
            &mut self.ranges,
            &mut self.non_capturing,
            &mut self.repetition,
            &mut self.lazy_kleene_star,
            &mut self.multiline_flag,
            &mut self.word_boundary,
            &mut self.lazy_kleene_plus,
            &mut self.lookaheads,
            &mut self.backreferences,
            &mut self.lazy_repetition,
            &mut self.quantified_backreferences,
            &mut self.sticky_flag,
            &mut self.unicode_flag,
        ];
        for (field, value) in fields.into_iter().zip(other.counts()) {
            *field += value;
        }
    }
}

pub fn profile_features(ast: &RegexAst, flags: &FlagSet) -> FeatureProfile {
    let mut p = profile_node(&ast.root);
    p.global_flag = flags.global as u32;
    p.ignore_case_flag = flags.ignore_case as u32;
    p.multiline_flag = flags.multiline as u32;
    p.sticky_flag = flags.sticky as u32;
    p.unicode_flag = flags.unicode as u32;
    p
}

/// Structural counters only; flag counters stay zero.
pub fn profile_node(node: &Node) -> FeatureProfile {
    let mut p = FeatureProfile::default();
    count(node, false, &mut p);
    p
}

fn count(node: &Node, quantified: bool, p: &mut FeatureProfile) {
    let mut below = quantified;
    match node {
        Node::Group { index, .. } if *index > 0 => p.capture_groups += 1,
        Node::Class(class) => {
            p.character_class += 1;
            p.ranges += class.items.iter().filter(|i| matches!(i, ClassItem::Range(..))).count() as u32;
        }
        Node::Shorthand(_) => p.character_class += 1,
        Node::Star { lazy, .. } => {
            if *lazy {
                p.lazy_kleene_star += 1
            } else {
                p.kleene_star += 1
            }
            below = true;
        }
        Node::Plus { lazy, .. } => {
            if *lazy {
                p.lazy_kleene_plus += 1
            } else {
                p.kleene_plus += 1
            }
            below = true;
        }
        Node::Repetition { lazy, .. } => {
            if *lazy {
                p.lazy_repetition += 1
            } else {
                p.repetition += 1
            }
            below = true;
        }
        Node::NonCapturingGroup(_) => p.non_capturing += 1,
        Node::PositiveLookahead(_) | Node::NegativeLookahead(_) => p.lookaheads += 1,
        Node::WordBoundary | Node::NonWordBoundary => p.word_boundary += 1,
        Node::Backreference(_) => {
            p.backreferences += 1;
            if quantified {
                p.quantified_backreferences += 1;
            }
        }
        _ => {}
    }
    for child in node.children() {
        count(child, below, p);
    }
}
