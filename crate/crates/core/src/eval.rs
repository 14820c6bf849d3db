//! Independent formula evaluation.
//!
//! [`evaluate`] checks a formula under a full assignment. [`extends`]
//! searches for values of the unassigned (internal) variables, which is how
//! tests check that concrete capturing-language tuples satisfy a model.

use alloc::string::String;
use alloc::vec::Vec;

use crate::ir::{Assignment, CapVar, Formula, IntExpr, Term};
use crate::preprocess::classical::accepts;

fn int(e: &IntExpr, a: &Assignment) -> Option<i64> {
    Some(match e {
        IntExpr::Const(c) => *c,
        IntExpr::Var(v) => *a.ints.get(v)?,
        IntExpr::Len(t) => a.term(t)?.chars().count() as i64,
        IntExpr::Add(parts) => {
            let mut s = 0;
            for p in parts {
                s += int(p, a)?;
            }
            s
        }
    })
}

/// Truth value, or `None` when a needed variable is unassigned.
pub fn evaluate(f: &Formula, a: &Assignment) -> Option<bool> {
    Some(match f {
        Formula::True => true,
        Formula::False => false,
        Formula::StrEq(x, y) => a.term(x)? == a.term(y)?,
        Formula::LenEq(x, y) => a.term(x)?.chars().count() == a.term(y)?.chars().count(),
        Formula::InRe(t, re) => accepts(re, &a.term(t)?.chars().collect::<Vec<_>>()),
        Formula::NotInRe(t, re) => !accepts(re, &a.term(t)?.chars().collect::<Vec<_>>()),
        Formula::CapEq(c, t) => match a.captures.get(c)? {
            None => false,
            Some(v) => *v == a.term(t)?,
        },
        Formula::CapUndef(c) => a.captures.get(c)?.is_none(),
        Formula::CapSame(x, y) => a.captures.get(x)? == a.captures.get(y)?,
        Formula::IntEq(x, y) => int(x, a)? == int(y, a)?,
        Formula::IntLe(x, y) => int(x, a)? <= int(y, a)?,
        Formula::And(parts) => {
            let mut unknown = false;
            for p in parts {
                match evaluate(p, a) {
                    Some(false) => return Some(false),
                    None => unknown = true,
                    Some(true) => {}
                }
            }
            if unknown {
                return None;
            }
            true
        }
        Formula::Or(parts) => {
            let mut unknown = false;
            for p in parts {
                match evaluate(p, a) {
                    Some(true) => return Some(true),
                    None => unknown = true,
                    Some(false) => {}
                }
            }
            if unknown {
                return None;
            }
            false
        }
        Formula::Not(x) => !evaluate(x, a)?,
        Formula::Implies(x, y) => match evaluate(x, a) {
            Some(false) => true,
            Some(true) => evaluate(y, a)?,
            None => {
                if evaluate(y, a)? {
                    true
                } else {
                    return None;
                }
            }
        },
    })
}

/// True when the assignment extends to one satisfying all formulas.
pub fn extends(formulas: &[Formula], a: &Assignment) -> bool {
    search(formulas.to_vec(), a.clone(), 0)
}

const MAX_DEPTH: usize = 10_000;

fn negate(f: &Formula) -> Option<Formula> {
    Some(match f {
        Formula::And(parts) => Formula::or(parts.iter().map(|p| Formula::not(p.clone())).collect()),
        Formula::Or(parts) => Formula::and(parts.iter().map(|p| Formula::not(p.clone())).collect()),
        Formula::Implies(x, y) => Formula::and(alloc::vec![(**x).clone(), Formula::not((**y).clone())]),
        Formula::Not(x) => (**x).clone(),
        _ => return None,
    })
}

fn search(mut goals: Vec<Formula>, env: Assignment, depth: usize) -> bool {
    if depth > MAX_DEPTH {
        return false;
    }
    // Simplify: drop decided goals, flatten conjunctions.
    let mut i = 0;
    while i < goals.len() {
        match evaluate(&goals[i], &env) {
            Some(true) => {
                goals.swap_remove(i);
                continue;
            }
            Some(false) => return false,
            None => {}
        }
        match &goals[i] {
            Formula::And(parts) => {
                let parts = parts.clone();
                goals.swap_remove(i);
                goals.extend(parts);
                continue;
            }
            Formula::Not(inner) => {
                if let Some(n) = negate(inner) {
                    goals[i] = n;
                    continue;
                }
            }
            _ => {}
        }
        i += 1;
    }
    if goals.is_empty() {
        return true;
    }
    // Bind variables, preferring goals with the fewest alternatives.
    let mut best: Option<(usize, Vec<Assignment>)> = None;
    for (i, g) in goals.iter().enumerate() {
        if let Some(opts) = bindings(g, &env) {
            if best.as_ref().is_none_or(|(_, b)| opts.len() < b.len()) {
                let done = opts.len() <= 1;
                best = Some((i, opts));
                if done {
                    break;
                }
            }
        }
    }
    if let Some((_, opts)) = best {
        return opts.into_iter().any(|e| search(goals.clone(), e, depth + 1));
    }
    // Branch on a disjunction.
    let pos = goals.iter().position(|g| matches!(g, Formula::Or(_) | Formula::Implies(..)));
    if let Some(pos) = pos {
        let g = goals.swap_remove(pos);
        let branches = match g {
            Formula::Or(parts) => parts,
            Formula::Implies(x, y) => alloc::vec![Formula::not(*x), *y],
            _ => unreachable!(),
        };
        return branches.into_iter().any(|b| {
            let mut next = goals.clone();
            next.push(b);
            search(next, env.clone(), depth + 1)
        });
    }
    false
}

/// Candidate extensions that make progress on `g`, or `None` when `g`
/// cannot bind anything yet.
fn bindings(g: &Formula, env: &Assignment) -> Option<Vec<Assignment>> {
    match g {
        Formula::StrEq(x, y) => match (env.term(x), env.term(y)) {
            (Some(s), None) => Some(match_pattern(y, &s, env)),
            (None, Some(s)) => Some(match_pattern(x, &s, env)),
            _ => None,
        },
        Formula::CapEq(c, t) => match (env.captures.get(c), env.term(t)) {
            (None, Some(v)) => {
                let mut e = env.clone();
                e.captures.insert(c.clone(), Some(v));
                Some(alloc::vec![e])
            }
            (Some(Some(v)), None) => Some(match_pattern(t, v, env)),
            (Some(None), _) => Some(Vec::new()),
            _ => None,
        },
        Formula::CapUndef(c) if !env.captures.contains_key(c) => {
            let mut e = env.clone();
            e.captures.insert(c.clone(), None);
            Some(alloc::vec![e])
        }
        Formula::CapSame(x, y) => {
            let (known, unknown) = match (env.captures.get(x), env.captures.get(y)) {
                (Some(v), None) => (v.clone(), y),
                (None, Some(v)) => (v.clone(), x),
                _ => return None,
            };
            let mut e = env.clone();
            e.captures.insert(unknown.clone(), known);
            Some(alloc::vec![e])
        }
        Formula::IntEq(IntExpr::Var(v), other) | Formula::IntEq(other, IntExpr::Var(v)) if !env.ints.contains_key(v) => {
            let value = int(other, env)?;
            let mut e = env.clone();
            e.ints.insert(v.clone(), value);
            Some(alloc::vec![e])
        }
        _ => None,
    }
}

fn flatten(t: &Term, out: &mut Vec<Term>) {
    match t {
        Term::Cat(parts) => parts.iter().for_each(|p| flatten(p, out)),
        Term::Lit(s) if s.is_empty() => {}
        t => out.push(t.clone()),
    }
}

/// All extensions of `env` under which `pattern` evaluates to `s`.
fn match_pattern(pattern: &Term, s: &str, env: &Assignment) -> Vec<Assignment> {
    let mut parts = Vec::new();
    flatten(pattern, &mut parts);
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    go(&parts, &chars, env.clone(), &mut out);
    out
}

fn go(parts: &[Term], rest: &[char], env: Assignment, out: &mut Vec<Assignment>) {
    let Some((first, tail)) = parts.split_first() else {
        if rest.is_empty() {
            out.push(env);
        }
        return;
    };
    if let Some(v) = env.term(first) {
        let v: Vec<char> = v.chars().collect();
        if rest.starts_with(&v) {
            go(tail, &rest[v.len()..], env, out);
        }
        return;
    }
    for n in 0..=rest.len() {
        let piece: String = rest[..n].iter().collect();
        match first {
            Term::Var(v) => {
                let mut e = env.clone();
                e.strings.insert(v.clone(), piece);
                go(tail, &rest[n..], e, out);
            }
            Term::CapVal(c) => {
                let c: &CapVar = c;
                if n == 0 {
                    let mut e = env.clone();
                    e.captures.insert(c.clone(), None);
                    go(tail, rest, e, out);
                }
                let mut e = env.clone();
                e.captures.insert(c.clone(), Some(piece));
                go(tail, &rest[n..], e, out);
            }
            _ => unreachable!("literals are always known"),
        }
    }
}
