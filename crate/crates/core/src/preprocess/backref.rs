//! Backreference typing.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::ast::{Node, RegexAst};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BackrefKind {
    /// Always matches ε: the group does not exist, encloses the
    /// backreference, or closes after it.
    Empty,
    Immutable,
    /// Immutable, but beneath a quantifier that does not contain the group.
    ImmutableQuantified,
    /// The group and the backreference share a quantified ancestor.
    Mutable,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BackrefClass {
    /// Child indices from the root to the backreference node.
    pub path: Vec<usize>,
    pub index: u32,
    pub kind: BackrefKind,
}

/// Classifies every backreference occurrence, in pre-order.
pub fn classify_backreferences(ast: &RegexAst) -> Vec<BackrefClass> {
    let mut finder = Finder { closed: BTreeSet::new(), path: Vec::new(), quantified: Vec::new(), out: Vec::new() };
    finder.visit(&ast.root);
    let mut out = finder.out;
    // The traversal is post-order; report in pre-order.
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out.into_iter().map(|(_, c)| c).collect()
}

struct Finder {
    /// Groups whose post-order visit is complete.
    closed: BTreeSet<u32>,
    path: Vec<usize>,
    /// Groups beneath each enclosing quantifier.
    quantified: Vec<BTreeSet<u32>>,
    out: Vec<(Vec<usize>, BackrefClass)>,
}

fn is_quantifier(node: &Node) -> bool {
    matches!(node, Node::Star { .. } | Node::Plus { .. } | Node::Optional { .. } | Node::Repetition { .. })
}

impl Finder {
    fn visit(&mut self, node: &Node) {
        let quantifier = is_quantifier(node);
        if quantifier {
            self.quantified.push(node.group_indices().into_iter().collect());
        }
        for (i, child) in node.children().into_iter().enumerate() {
            self.path.push(i);
            self.visit(child);
            self.path.pop();
        }
        if quantifier {
            self.quantified.pop();
        }
        match node {
            Node::Group { index, .. } => {
                self.closed.insert(*index);
            }
            Node::Backreference(k) => {
                let kind = if !self.closed.contains(k) {
                    BackrefKind::Empty
                } else if self.quantified.iter().any(|groups| groups.contains(k)) {
                    BackrefKind::Mutable
                } else if !self.quantified.is_empty() {
                    BackrefKind::ImmutableQuantified
                } else {
                    BackrefKind::Immutable
                };
                let class = BackrefClass { path: self.path.clone(), index: *k, kind };
                self.out.push((self.path.clone(), class));
            }
            _ => {}
        }
    }
}
