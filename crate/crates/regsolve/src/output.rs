//! JSON records printed by the command line.

use std::time::Duration;

use regsolve_core::cegar::SolveResult;
use regsolve_core::ir::{Assignment, CapVar, IntVar, StrVar};
use regsolve_core::matcher::MatchResult;
use serde_json::{json, Map, Value};

/// Named variables only; undefined captures become `null`.
pub fn assignment_json(a: &Assignment) -> Value {
    let mut strings = Map::new();
    for (k, v) in &a.strings {
        if let StrVar::Named(n) = k {
            strings.insert(n.clone(), Value::String(v.clone()));
        }
    }
    let mut captures = Map::new();
    for (k, v) in &a.captures {
        if let CapVar::Named(n) = k {
            captures.insert(n.clone(), v.clone().map_or(Value::Null, Value::String));
        }
    }
    let mut ints = Map::new();
    for (k, v) in &a.ints {
        if let IntVar::Named(n) = k {
            ints.insert(n.clone(), json!(v));
        }
    }
    json!({ "strings": strings, "captures": captures, "ints": ints })
}

pub fn solve_json(r: &SolveResult, wall: Duration, solver: Duration) -> Value {
    json!({
        "status": r.status.to_string(),
        "model": r.model.as_ref().map_or(Value::Null, assignment_json),
        "refinements": r.refinements_used,
        "perConstraintRefinements": r.per_constraint_refinements,
        "reason": r.reason,
        "wallMs": wall.as_millis() as u64,
        "solverMs": solver.as_millis() as u64,
    })
}

pub fn match_json(m: &MatchResult) -> Value {
    if !m.matched {
        return json!({ "matched": false, "index": null, "captures": null, "lastIndexAfter": m.last_index_after });
    }
    json!({
        "matched": true,
        "index": m.index,
        "captures": m.captures,
        "lastIndexAfter": m.last_index_after,
    })
}
