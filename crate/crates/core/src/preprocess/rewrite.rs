//! Quantifier rewriting to the reduced operator set.
//!
//! `r+` becomes `r* r`, `r?` becomes `r|ε`, `r{m,n}` becomes the alternation
//! of its unrollings, and `r{m,}` becomes `r^(m-1) r* r`. Every unrolled copy
//! gets fresh capture groups; a [`CaptureCorrespondence`] records which copy
//! holds the final value of each original group. Laziness is kept on the
//! remaining stars so the output still matches with the original precedence
//! where the rewriting is precedence-preserving.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::ast::{Node, RegexAst};

pub const DEFAULT_NODE_BUDGET: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RewriteError {
    RewriteBlowup { budget: usize },
}

impl fmt::Display for RewriteError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RewriteError::RewriteBlowup { budget } => {
                write!(f, "quantifier rewriting exceeds the node budget of {budget}")
            }
        }
    }
}

impl core::error::Error for RewriteError {}

/// Where the final value of an original capture group lives in a rewritten
/// regex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CaptureSource {
    /// A single rewritten group.
    Group(u32),
    /// One unrolling of a repetition is taken; the value comes from the
    /// taken alternate. The untaken alternates have all their groups
    /// undefined.
    Select(Vec<Alternate>),
    /// Always undefined (for example a group under `{0}`).
    Never,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alternate {
    /// Every rewritten group inside this alternate.
    pub members: Vec<u32>,
    pub chosen: CaptureSource,
}

impl CaptureSource {
    /// Reads the source off concrete capture values of the rewritten regex.
    pub fn evaluate<'v, T>(&self, caps: &'v [Option<T>]) -> Option<&'v T> {
        match self {
            CaptureSource::Group(g) => caps.get(*g as usize).and_then(|c| c.as_ref()),
            CaptureSource::Never => None,
            CaptureSource::Select(alternates) => {
                let taken = alternates
                    .iter()
                    .find(|a| a.members.iter().any(|&g| caps.get(g as usize).is_some_and(|c| c.is_some())))?;
                taken.chosen.evaluate(caps)
            }
        }
    }

    /// A single group standing for this source, used where the AST needs a
    /// concrete index.
    pub fn representative(&self) -> Option<u32> {
        match self {
            CaptureSource::Group(g) => Some(*g),
            CaptureSource::Never => None,
            CaptureSource::Select(alternates) => alternates.iter().rev().find_map(|a| a.chosen.representative()),
        }
    }

    fn map_groups(&mut self, f: &impl Fn(u32) -> u32) {
        match self {
            CaptureSource::Group(g) => *g = f(*g),
            CaptureSource::Never => {}
            CaptureSource::Select(alternates) => {
                for a in alternates {
                    for m in &mut a.members {
                        *m = f(*m);
                    }
                    a.chosen.map_groups(f);
                }
            }
        }
    }
}

/// Correspondence between original capture indices and rewritten groups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaptureCorrespondence {
    pub original_count: u32,
    /// Indexed by original group number; entry 0 is always `Group(0)`, the
    /// whole match.
    pub sources: Vec<CaptureSource>,
}

impl CaptureCorrespondence {
    /// Original-index captures recovered from the rewritten regex's captures.
    pub fn recover<T: Clone>(&self, caps: &[Option<T>]) -> Vec<Option<T>> {
        self.sources.iter().map(|s| s.evaluate(caps).cloned()).collect()
    }
}

/// Output of [`rewrite_quantifiers`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rewritten {
    pub ast: RegexAst,
    pub correspondence: CaptureCorrespondence,
    /// The capture each backreference reads, by pre-order occurrence.
    pub backref_targets: Vec<CaptureSource>,
}

pub fn rewrite_quantifiers(ast: &RegexAst) -> Result<Rewritten, RewriteError> {
    rewrite_quantifiers_with_budget(ast, DEFAULT_NODE_BUDGET)
}

pub fn rewrite_quantifiers_with_budget(ast: &RegexAst, budget: usize) -> Result<Rewritten, RewriteError> {
    let mut rw = Rewriter { next_temp: 1, budget, frames: alloc::vec![BTreeMap::new()], pending: Vec::new() };
    let root = rw.node(&ast.root)?;
    if root.node_count() > budget {
        return Err(RewriteError::RewriteBlowup { budget });
    }
    let top = rw.frames.pop().unwrap();

    // Pre-order renumbering of the temporary ids.
    let mut renumber = BTreeMap::new();
    let mut next = 1u32;
    root.walk(&mut |n| {
        if let Node::Group { index, .. } = n {
            if *index != 0 {
                renumber.insert(*index, next);
                next += 1;
            }
        }
    });
    let group_count = next - 1;
    let map = |t: u32| if t == 0 { 0 } else { renumber[&t] };

    let mut sources: Vec<CaptureSource> = (0..=ast.group_count)
        .map(|i| if i == 0 { CaptureSource::Group(0) } else { top.get(&i).cloned().unwrap_or(CaptureSource::Never) })
        .collect();
    for s in &mut sources {
        s.map_groups(&map);
    }
    let mut targets = rw.pending;
    for t in &mut targets {
        t.map_groups(&map);
    }
    let mut ordinal = 0;
    let root = renumber_node(root, &map, &targets, &mut ordinal, group_count + 1);
    Ok(Rewritten {
        ast: RegexAst { root, group_count },
        correspondence: CaptureCorrespondence { original_count: ast.group_count, sources },
        backref_targets: targets,
    })
}

fn renumber_node(node: Node, map: &impl Fn(u32) -> u32, targets: &[CaptureSource], ordinal: &mut usize, sentinel: u32) -> Node {
    let rec = |n: Box<Node>, ordinal: &mut usize| Box::new(renumber_node(*n, map, targets, ordinal, sentinel));
    match node {
        Node::Group { index, child } => Node::Group { index: map(index), child: rec(child, ordinal) },
        Node::Backreference(_) => {
            let target = &targets[*ordinal];
            *ordinal += 1;
            Node::Backreference(target.representative().unwrap_or(sentinel))
        }
        Node::Concat(parts) => {
            Node::Concat(parts.into_iter().map(|p| renumber_node(p, map, targets, ordinal, sentinel)).collect())
        }
        Node::Alternation(l, r) => {
            let l = rec(l, ordinal);
            Node::Alternation(l, rec(r, ordinal))
        }
        Node::Star { child, lazy } => Node::Star { child: rec(child, ordinal), lazy },
        Node::NonCapturingGroup(c) => Node::NonCapturingGroup(rec(c, ordinal)),
        Node::PositiveLookahead(c) => Node::PositiveLookahead(rec(c, ordinal)),
        Node::NegativeLookahead(c) => Node::NegativeLookahead(rec(c, ordinal)),
        other => other,
    }
}

struct Rewriter {
    next_temp: u32,
    budget: usize,
    /// Sources of completed original groups, one frame per unrolled copy.
    frames: Vec<BTreeMap<u32, CaptureSource>>,
    /// Backreference targets in temporary ids, by pre-order occurrence.
    pending: Vec<CaptureSource>,
}

impl Rewriter {
    fn node(&mut self, node: &Node) -> Result<Node, RewriteError> {
        Ok(match node {
            Node::Group { index, child } => {
                let temp = if *index == 0 {
                    0
                } else {
                    let t = self.next_temp;
                    self.next_temp += 1;
                    t
                };
                let child = self.node(child)?;
                self.frames.last_mut().unwrap().insert(*index, CaptureSource::Group(temp));
                Node::Group { index: temp, child: Box::new(child) }
            }
            Node::Backreference(k) => {
                let target = self
                    .frames
                    .iter()
                    .rev()
                    .find_map(|f| f.get(k).cloned())
                    .unwrap_or(CaptureSource::Never);
                self.pending.push(target);
                Node::Backreference(*k)
            }
            Node::Concat(parts) => {
                let mut out = Vec::new();
                for p in parts {
                    match self.node(p)? {
                        Node::Concat(inner) if matches!(p, Node::Plus { .. } | Node::Repetition { .. }) => out.extend(inner),
                        n => out.push(n),
                    }
                }
                Node::Concat(out)
            }
            Node::Alternation(l, r) => {
                let l = self.node(l)?;
                Node::alt(l, self.node(r)?)
            }
            Node::NonCapturingGroup(c) => Node::non_capturing(self.node(c)?),
            Node::PositiveLookahead(c) => Node::PositiveLookahead(Box::new(self.node(c)?)),
            Node::NegativeLookahead(c) => Node::NegativeLookahead(Box::new(self.node(c)?)),
            Node::Star { child, lazy } => Node::star(self.node(child)?, *lazy),
            Node::Plus { child, lazy } => {
                self.check_estimate(child, 2)?;
                let (star_copy, _) = self.copy(child)?;
                let (last, sources) = self.copy(child)?;
                self.publish(sources);
                Node::Concat(alloc::vec![Node::star(star_copy, *lazy), last])
            }
            Node::Optional { child, lazy } => {
                let (copy, sources) = self.copy(child)?;
                self.publish(sources);
                let options = if *lazy {
                    Node::alt(Node::empty(), copy)
                } else {
                    Node::alt(copy, Node::empty())
                };
                Node::non_capturing(options)
            }
            Node::Repetition { child, min, max: None, lazy } => {
                let min = *min as usize;
                if min == 0 {
                    return Ok(Node::star(self.node(child)?, *lazy));
                }
                self.check_estimate(child, min + 1)?;
                let mut parts = Vec::new();
                for _ in 0..min - 1 {
                    parts.push(self.copy(child)?.0);
                }
                parts.push(Node::star(self.copy(child)?.0, *lazy));
                let (last, sources) = self.copy(child)?;
                self.publish(sources);
                parts.push(last);
                Node::Concat(parts)
            }
            Node::Repetition { child, min, max: Some(max), lazy } => {
                let (min, max) = (*min as usize, *max as usize);
                let total: usize = (min..=max).sum();
                self.check_estimate(child, total.max(1))?;
                let counts: Vec<usize> = if *lazy { (min..=max).collect() } else { (min..=max).rev().collect() };
                let mut alternates = Vec::new();
                let mut selects = Vec::new();
                let originals = child.group_indices();
                for count in counts {
                    let mut parts = Vec::new();
                    let mut last_sources = BTreeMap::new();
                    let first_temp = self.next_temp;
                    for _ in 0..count {
                        let (copy, sources) = self.copy(child)?;
                        parts.push(copy);
                        last_sources = sources;
                    }
                    let members: Vec<u32> = (first_temp..self.next_temp).collect();
                    alternates.push(Node::concat_of(parts));
                    selects.push((members, last_sources));
                }
                let mut published = BTreeMap::new();
                for g in originals {
                    let source = if selects.len() == 1 {
                        selects[0].1.get(&g).cloned().unwrap_or(CaptureSource::Never)
                    } else {
                        CaptureSource::Select(
                            selects
                                .iter()
                                .map(|(members, sources)| Alternate {
                                    members: members.clone(),
                                    chosen: sources.get(&g).cloned().unwrap_or(CaptureSource::Never),
                                })
                                .collect(),
                        )
                    };
                    published.insert(g, source);
                }
                self.publish(published);
                if alternates.len() == 1 {
                    Node::non_capturing(alternates.pop().unwrap())
                } else {
                    Node::non_capturing(Node::alternation_of(alternates))
                }
            }
            leaf => leaf.clone(),
        })
    }

    /// Rewrites one copy of `child` in its own frame and returns the copy
    /// together with the sources of the groups it completed.
    fn copy(&mut self, child: &Node) -> Result<(Node, BTreeMap<u32, CaptureSource>), RewriteError> {
        self.frames.push(BTreeMap::new());
        let node = self.node(child)?;
        let frame = self.frames.pop().unwrap();
        Ok((node, frame))
    }

    fn publish(&mut self, sources: BTreeMap<u32, CaptureSource>) {
        self.frames.last_mut().unwrap().extend(sources);
    }

    fn check_estimate(&self, child: &Node, copies: usize) -> Result<(), RewriteError> {
        if child.node_count().saturating_mul(copies) > self.budget {
            Err(RewriteError::RewriteBlowup { budget: self.budget })
        } else {
            Ok(())
        }
    }
}
