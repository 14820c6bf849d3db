//! Frozen exec vectors recorded from Node 20 (see `tools/gen_vectors.js`).

use regsolve_core::features::FEATURE_NAMES;
use regsolve_core::matcher::RegexValue;
use regsolve_core::{parse_pattern, profile_features, FeatureProfile};
use serde_json::Value;

fn vectors() -> Vec<Value> {
    let text = include_str!("data/es_vectors.jsonl");
    text.lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

fn run(v: &Value) -> Value {
    let (ast, flags) = parse_pattern(v["pattern"].as_str().unwrap(), v["flags"].as_str().unwrap()).unwrap();
    let mut re = RegexValue::new(ast, flags);
    re.last_index = v["lastIndex"].as_u64().unwrap() as usize;
    let m = re.exec(v["input"].as_str().unwrap()).unwrap();
    serde_json::json!({
        "matched": m.matched,
        "index": if m.matched { Value::from(m.index) } else { Value::Null },
        "captures": if m.matched { serde_json::to_value(&m.captures).unwrap() } else { Value::Null },
        "lastIndexAfter": re.last_index,
    })
}

#[test]
fn exec_agrees_with_reference_engine() {
    let vs = vectors();
    assert!(vs.len() >= 500);
    let mut mismatches = Vec::new();
    for v in &vs {
        let got = run(v);
        for key in ["matched", "index", "captures", "lastIndexAfter"] {
            if got[key] != v[key] {
                mismatches.push(format!("/{}/{} on {:?} at {}: {key} {} != {}", v["pattern"], v["flags"], v["input"], v["lastIndex"], got[key], v[key]));
            }
        }
    }
    assert!(mismatches.is_empty(), "{} mismatches:\n{}", mismatches.len(), mismatches.join("\n"));
}

#[test]
fn vectors_cover_every_feature_but_unicode() {
    let mut total = FeatureProfile::default();
    for v in vectors() {
        let (ast, flags) = parse_pattern(v["pattern"].as_str().unwrap(), v["flags"].as_str().unwrap()).unwrap();
        total.add(&profile_features(&ast, &flags));
    }
    for (name, count) in FEATURE_NAMES.iter().zip(total.counts()) {
        if *name == "Unicode Flag" {
            assert_eq!(count, 0);
        } else {
            assert!(count > 0, "{name} is not covered");
        }
    }
}
