//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Items on `KNOWN_UNATTAINABLE` are still run and reported, but only other
//! failures make the run exit nonzero.

use std::collections::BTreeSet;
use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use regsolve::problem_file::parse_problem;
use regsolve::scan_fs::scan_paths;
use regsolve::solver::{solve, SolverConfig};
use regsolve_core::cegar::{concrete_match, RefinementClause, SolveResult, Status};
use regsolve_core::eval::{evaluate, extends};
use regsolve_core::ir::{Assignment, CapVar, ConstraintProblem, IntVar, Polarity, StrVar, Term};
use regsolve_core::matcher::{match_full, RegexValue};
use regsolve_core::model::UnrollConfig;
use regsolve_core::oracle::{brute_force_solve, words, EnumerationSpec};
use regsolve_core::parse_pattern;
use regsolve_core::preprocess::rewrite::rewrite_quantifiers;
use regsolve_core::scan::ScanReport;
use serde_json::Value;

const VECTOR_TIME_LIMIT: Duration = Duration::from_secs(60);
const REWRITE_TIME_LIMIT: Duration = Duration::from_secs(120);
const SUITE_SIZE: usize = 220;
const SUITE_SEED: u64 = 0x5eed_2017;
const SUITE_MAX_LEN: usize = 6;
const SUITE_ALPHABET: &str = "ab<>";
const SOLVER_TIMEOUT: Duration = Duration::from_secs(10);
const REFINEMENT_LIMIT: usize = 20;
const MAX_UNKNOWN_SHARE: f64 = 0.10;
const MIN_WITHIN_LIMIT_SHARE: f64 = 0.97;
const MAX_MEAN_REFINEMENTS: f64 = 5.0;
const REWRITE_REGEXES: usize = 100;
const REWRITE_SEED: u64 = 6;
const REWRITE_MAX_LEN: usize = 5;

/// Criteria that cannot pass as stated; see the decisions ledger.
const KNOWN_UNATTAINABLE: [&str; 2] = ["2d", "6"];

struct Outcome {
    id: &'static str,
    pass: bool,
    detail: String,
}

fn line(id: &'static str, title: &str, pass: bool, detail: String) -> Outcome {
    println!("[{}] {id} {title}: {detail}", if pass { "PASS" } else { "FAIL" });
    Outcome { id, pass, detail }
}

fn data(rel: &str) -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join(rel)
}

fn solver_config() -> SolverConfig {
    SolverConfig {
        command: std::env::var("REGSOLVE_SOLVER").unwrap_or_else(|_| regsolve::solver::DEFAULT_SOLVER.into()),
        timeout: SOLVER_TIMEOUT,
        seed: Some(1),
    }
}

fn solver_available() -> bool {
    let cfg = solver_config();
    let mut words = cfg.command.split_whitespace();
    let Some(program) = words.next() else { return false };
    std::process::Command::new(program)
        .arg("-version")
        .stdout(std::process::Stdio::null())
        .stderr(std::process::Stdio::null())
        .status()
        .is_ok()
}

fn compile(text: &str) -> ConstraintProblem {
    let cfg = UnrollConfig::default();
    parse_problem(text).unwrap_or_else(|e| panic!("{e}\n{text}")).compile(&cfg).unwrap_or_else(|e| panic!("{e}\n{text}")).problem
}

/// Replays the reported (named) model through the matcher and evaluates the
/// side assertions.
fn validate(p: &ConstraintProblem, model: &Assignment) -> Result<(), String> {
    for rc in &p.regex_constraints {
        let word = model.term(&rc.subject).ok_or("subject unassigned")?;
        let concrete = concrete_match(rc, &word).map_err(|e| e.to_string())?;
        if concrete.matched != (rc.polarity == Polarity::Member) {
            return Err(format!("{} on {word:?}: membership disagrees", rc.source));
        }
        if !concrete.matched {
            continue;
        }
        for (i, c) in rc.captures.iter().enumerate() {
            let want = concrete.captures.get(i).cloned().flatten();
            if matches!(c, CapVar::Named(_)) && model.captures.get(c) != Some(&want) {
                return Err(format!("{} on {word:?}: {c:?} is {:?}, matcher gives {want:?}", rc.source, model.captures.get(c)));
            }
        }
        if let Some(v @ IntVar::Named(_)) = &rc.last_index_after {
            if model.ints.get(v) != Some(&concrete.last_index_after) {
                return Err(format!("{} on {word:?}: lastIndex disagrees", rc.source));
            }
        }
    }
    for f in p.side_assertions() {
        if evaluate(f, model) != Some(true) {
            return Err(format!("side assertion {f:?} does not hold"));
        }
    }
    Ok(())
}

fn criterion_1() -> Outcome {
    let started = Instant::now();
    let text = std::fs::read_to_string(data("../core/tests/data/es_vectors.jsonl")).unwrap();
    let mut total = 0;
    let mut mismatches = Vec::new();
    for l in text.lines() {
        let v: Value = serde_json::from_str(l).unwrap();
        total += 1;
        let (ast, flags) = parse_pattern(v["pattern"].as_str().unwrap(), v["flags"].as_str().unwrap()).unwrap();
        let mut re = RegexValue::new(ast, flags);
        re.last_index = v["lastIndex"].as_u64().unwrap() as usize;
        let m = re.exec(v["input"].as_str().unwrap()).unwrap();
        let got = serde_json::json!({
            "matched": m.matched,
            "index": if m.matched { Value::from(m.index) } else { Value::Null },
            "captures": if m.matched { serde_json::to_value(&m.captures).unwrap() } else { Value::Null },
            "lastIndexAfter": re.last_index,
        });
        if ["matched", "index", "captures", "lastIndexAfter"].iter().any(|k| got[*k] != v[*k]) {
            mismatches.push(format!("/{}/{}", v["pattern"], v["flags"]));
        }
    }
    let elapsed = started.elapsed();
    let pass = total >= 500 && mismatches.is_empty() && elapsed < VECTOR_TIME_LIMIT;
    line(
        "1",
        "differential matcher conformance",
        pass,
        format!("{} of {total} vectors disagree (tolerance 0, need >= 500 vectors), {:.2?} (limit {VECTOR_TIME_LIMIT:?}) {:?}", mismatches.len(), elapsed, mismatches.iter().take(3).collect::<Vec<_>>()),
    )
}

fn captures(src: &str, w: &str) -> Option<Vec<Option<String>>> {
    let (ast, flags) = parse_pattern(src, "").unwrap();
    RegexValue::new(ast, flags).exec(w).unwrap().matched.then(|| {
        let (ast, flags) = parse_pattern(src, "").unwrap();
        RegexValue::new(ast, flags).exec(w).unwrap().captures
    })
}

fn criterion_2a() -> Outcome {
    let got = captures("a|((b)*c)*d", "bbbbcbcd");
    let want = Some(vec![Some("bbbbcbcd".to_string()), Some("bc".into()), Some("b".into())]);
    line("2a", "worked example: precedence and capture reset", got == want, format!("exec gives {got:?}, expected {want:?}"))
}

const TIMEOUT_PROBLEM: &str = "var w maxlen 40\nin w /<(\\w+)>([0-9]*)<\\/\\1>/ captures C0 C1 C2 exec\neq C1 \"timeout\"\nnotin C2 /^[0-9]+$/\n";

fn criterion_2b(solver: bool) -> Outcome {
    if !solver {
        return line("2b", "worked example: path condition witness", false, "no solver available".into());
    }
    let p = compile(TIMEOUT_PROBLEM);
    let (r, _) = solve(&p, REFINEMENT_LIMIT, solver_config()).unwrap();
    let Some(model) = r.model.as_ref().filter(|_| r.status == Status::Sat) else {
        return line("2b", "worked example: path condition witness", false, format!("status {}", r.status));
    };
    let w = model.string("w").unwrap_or_default().to_string();
    let caps = captures(r"<(\w+)>([0-9]*)<\/\1>", &w);
    let digits_rejected = caps.as_ref().and_then(|c| c[2].clone()).is_none_or(|d| captures("^[0-9]+$", &d).is_none());
    let ok = caps.as_ref().is_some_and(|c| c[1].as_deref() == Some("timeout")) && digits_rejected && validate(&p, model).is_ok();
    line("2b", "worked example: path condition witness", ok, format!("witness {w:?}, matcher captures {caps:?}"))
}

const SPURIOUS_PROBLEM: &str = "var w maxlen 6\nin w /^a*(a)?$/ captures C0 C1\neq w \"aa\"\neq C1 \"a\"\n";

fn criterion_2c(solver: bool) -> Outcome {
    let title = "worked example: spurious tuple and its refinement";
    let p = compile(SPURIOUS_PROBLEM);
    let mut spurious = Assignment::default();
    spurious.strings.insert(StrVar::Named("w".into()), "aa".into());
    spurious.captures.insert(CapVar::Named("C0".into()), Some("aa".into()));
    spurious.captures.insert(CapVar::Named("C1".into()), Some("a".into()));
    let admitted = extends(&p.assertions, &spurious);
    if !solver {
        return line("2c", title, false, format!("model admits spurious tuple: {admitted}; no solver available"));
    }
    let (r, _) = solve(&p, REFINEMENT_LIMIT, solver_config()).unwrap();
    let expected = RefinementClause::CaptureFix {
        subject: Term::Var(StrVar::Named("w".into())),
        word: "aa".into(),
        captures: vec![(CapVar::Named("C0".into()), Some("aa".into())), (CapVar::Named("C1".into()), None)],
        last_index: None,
    };
    let ok = admitted && r.status == Status::Unsat && r.clauses == [expected.clone()];
    line(
        "2c",
        title,
        ok,
        format!("raw model admits (aa, aa, a): {admitted}; clauses {:?}; verdict {}", r.clauses.iter().map(|c| format!("{:?}", c.to_formula())).collect::<Vec<_>>(), r.status),
    )
}

fn criterion_2d() -> Outcome {
    let src = r"((a|b)\2)+\1\2";
    let first = captures(src, "aabbaabbb").is_some();
    let second = captures(src, "aabaaabaa").is_some();
    line(
        "2d",
        "worked example: mutable backreference words",
        first && !second,
        format!("\"aabbaabbb\" matches: {first} (expected true; ES6 engines return no match), \"aabaaabaa\" matches: {second} (expected false)"),
    )
}

/// Random regex over {a,b,<,>} with groups, immutable backreferences,
/// lookaheads, boundaries and anchors.
fn suite_regex(rng: &mut StdRng) -> String {
    let lit = |rng: &mut StdRng| ["a", "b", "<", ">", "[ab]", "[<>]", "\\w", "."][rng.gen_range(0..8)].to_string();
    let mut out = String::new();
    let mut groups = 0;
    for _ in 0..rng.gen_range(1..=4) {
        let kind = rng.gen_range(0..12);
        let (atom, quantifiable) = match kind {
            0..=3 => (lit(rng), true),
            4 | 5 => {
                groups += 1;
                let body = if rng.gen_bool(0.5) { lit(rng) } else { format!("{}|{}", lit(rng), lit(rng)) };
                (format!("({body})"), true)
            }
            6 => {
                groups += 1;
                (format!("(?:{}|({}))", lit(rng), lit(rng)), true)
            }
            7 if groups > 0 => (format!("\\{}", rng.gen_range(1..=groups)), false),
            7 | 8 => {
                let neg = rng.gen_bool(0.4);
                let body = if !neg && rng.gen_bool(0.3) {
                    groups += 1;
                    format!("({})", lit(rng))
                } else {
                    lit(rng)
                };
                (format!("(?{}{body})", if neg { '!' } else { '=' }), false)
            }
            9 => (["\\b", "\\B"][rng.gen_range(0..2)].to_string(), false),
            10 => (["^", "$"][rng.gen_range(0..2)].to_string(), false),
            _ => (lit(rng), true),
        };
        out.push_str(&atom);
        if quantifiable {
            out.push_str(["", "", "*", "?", "+"][rng.gen_range(0..5)]);
        }
    }
    if rng.gen_bool(0.15) {
        out = format!("{out}|{}", lit(rng));
    }
    out
}

fn suite_literal(rng: &mut StdRng) -> String {
    (0..rng.gen_range(0..=3)).map(|_| ['a', 'b', '<', '>'][rng.gen_range(0..4)]).collect()
}

/// Problem files; `true` marks those whose subjects are length-bounded.
fn suite(n: usize) -> Vec<(String, bool)> {
    let mut rng = StdRng::seed_from_u64(SUITE_SEED);
    let mut out = Vec::new();
    while out.len() < n {
        let bounded = rng.gen_bool(0.85);
        let mut text = if bounded { format!("var w maxlen {SUITE_MAX_LEN}\n") } else { "var w\n".to_string() };
        text.push_str("in w /^[ab<>]*$/\n");
        let mut member_caps: Vec<String> = Vec::new();
        for (k, prefix) in ["C", "D"].iter().enumerate() {
            if k == 1 && !rng.gen_bool(0.3) {
                break;
            }
            let src = suite_regex(&mut rng);
            let Ok((ast, _)) = parse_pattern(&src, "") else { continue };
            let member = rng.gen_bool(0.8);
            let names: Vec<String> = (0..=ast.group_count).map(|i| format!("{prefix}{i}")).collect();
            let mode = match rng.gen_range(0..8) {
                0 => " exec".to_string(),
                1 => format!(" exec lastindex {}", rng.gen_range(0..3)),
                _ => String::new(),
            };
            let flags = if mode.contains("lastindex") { ["g", "y"][rng.gen_range(0..2)] } else { ["", "", "", "m"][rng.gen_range(0..4)] };
            text.push_str(&format!("{} w /{src}/{flags} captures {}{mode}\n", if member { "in" } else { "notin" }, names.join(" ")));
            if member {
                member_caps.extend(names);
            }
        }
        if !member_caps.is_empty() {
            for _ in 0..rng.gen_range(0..=2) {
                let c = member_caps[rng.gen_range(0..member_caps.len())].clone();
                let d = member_caps[rng.gen_range(0..member_caps.len())].clone();
                text.push_str(&match rng.gen_range(0..6) {
                    0 | 1 => format!("eq {c} \"{}\"\n", suite_literal(&mut rng)),
                    2 => format!("undef {c}\n"),
                    3 => format!("defined {c}\n"),
                    4 => format!("neq {c} \"{}\"\n", suite_literal(&mut rng)),
                    _ => format!("eq {c} {d}\n"),
                });
            }
        }
        out.push((text, bounded));
    }
    out
}

struct SuiteRun {
    problems: usize,
    sat: usize,
    unsat: usize,
    unknown: usize,
    violations: Vec<String>,
    bounded: usize,
    bounded_unknown: usize,
    disagreements: Vec<String>,
    refined: Vec<(usize, Status, Option<String>)>,
    elapsed: Duration,
}

fn run_suite() -> SuiteRun {
    let started = Instant::now();
    let mut run = SuiteRun {
        problems: 0,
        sat: 0,
        unsat: 0,
        unknown: 0,
        violations: Vec::new(),
        bounded: 0,
        bounded_unknown: 0,
        disagreements: Vec::new(),
        refined: Vec::new(),
        elapsed: Duration::ZERO,
    };
    let spec = EnumerationSpec::new(SUITE_ALPHABET, SUITE_MAX_LEN);
    for (i, (text, bounded)) in suite(SUITE_SIZE).into_iter().enumerate() {
        let p = compile(&text);
        run.problems += 1;
        let r: SolveResult = match solve(&p, REFINEMENT_LIMIT, solver_config()) {
            Ok((r, _)) => r,
            Err(e) => SolveResult {
                status: Status::Unknown,
                model: None,
                refinements_used: 0,
                per_constraint_refinements: vec![],
                clauses: vec![],
                reason: Some(e.to_string()),
            },
        };
        match r.status {
            Status::Sat => run.sat += 1,
            Status::Unsat => run.unsat += 1,
            Status::Unknown => run.unknown += 1,
        }
        if r.refinements_used > 0 || r.reason.as_deref().is_some_and(|s| s.contains("limit")) {
            run.refined.push((r.refinements_used, r.status, r.reason.clone()));
        }
        if let (Status::Sat, Some(m)) = (r.status, &r.model) {
            if let Err(e) = validate(&p, m) {
                run.violations.push(format!("problem {i}: {e}"));
            }
        }
        if bounded {
            run.bounded += 1;
            if r.status == Status::Unknown {
                run.bounded_unknown += 1;
                continue;
            }
            let oracle = brute_force_solve(&p, &spec).expect("oracle");
            if oracle.status != r.status {
                run.disagreements.push(format!("problem {i}: solver {} oracle {}\n{text}", r.status, oracle.status));
            }
        }
    }
    run.elapsed = started.elapsed();
    run
}

fn criteria_3_to_5(solver: bool) -> Vec<Outcome> {
    if !solver {
        return ["3", "4", "5"].into_iter().map(|id| line(id, "generated suite", false, "no solver available".into())).collect();
    }
    let run = run_suite();
    let mut out = Vec::new();
    out.push(line(
        "3",
        "CEGAR soundness of sat",
        run.problems >= 200 && run.violations.is_empty(),
        format!(
            "{} problems ({} sat, {} unsat, {} unknown) in {:.1?}; {} sat models fail concrete validation (tolerance 0) {:?}",
            run.problems,
            run.sat,
            run.unsat,
            run.unknown,
            run.elapsed,
            run.violations.len(),
            run.violations.iter().take(2).collect::<Vec<_>>()
        ),
    ));
    let unknown_share = run.bounded_unknown as f64 / run.bounded.max(1) as f64;
    out.push(line(
        "4",
        "CEGAR exactness against brute force",
        run.disagreements.is_empty() && unknown_share < MAX_UNKNOWN_SHARE,
        format!(
            "{} bounded problems, {} disagreements (tolerance 0), {} unknown excluded ({:.1}%, limit {:.0}%) {:?}",
            run.bounded,
            run.disagreements.len(),
            run.bounded_unknown,
            unknown_share * 100.0,
            MAX_UNKNOWN_SHARE * 100.0,
            run.disagreements.iter().take(2).collect::<Vec<_>>()
        ),
    ));
    let refined = run.refined.len();
    let hit_limit = run.refined.iter().filter(|(_, _, reason)| reason.as_deref().is_some_and(|s| s.contains("limit"))).count();
    let within = if refined == 0 { 1.0 } else { (refined - hit_limit) as f64 / refined as f64 };
    let mean = if refined == 0 { 0.0 } else { run.refined.iter().map(|r| r.0 as f64).sum::<f64>() / refined as f64 };
    out.push(line(
        "5",
        "refinement behavior",
        within >= MIN_WITHIN_LIMIT_SHARE && mean <= MAX_MEAN_REFINEMENTS,
        format!(
            "{refined} problems needed refinement; {:.1}% finished within limit {REFINEMENT_LIMIT} (need >= {:.0}%), mean {mean:.2} refinements (need <= {MAX_MEAN_REFINEMENTS})",
            within * 100.0,
            MIN_WITHIN_LIMIT_SHARE * 100.0
        ),
    ));
    out
}

const FIXED_WIDTH_ATOMS: usize = 9;
const REWRITE_ATOMS: [&str; 13] = ["a", "b", "[ab]", "(a)", "(b)", "(a|b)", "(?:ab)", "(ab)", "(?:a|(b))", "(a|ab)", "(a?)", "(?:a?b?)", "(a|)"];

/// Returns the pattern and whether every atom is fixed-width and non-nullable.
fn rewrite_regex(rng: &mut StdRng) -> (String, bool) {
    loop {
        let mut s = String::new();
        let mut quantified = false;
        let mut solid = true;
        for _ in 0..rng.gen_range(1..=3) {
            let k = rng.gen_range(0..REWRITE_ATOMS.len());
            solid &= k < FIXED_WIDTH_ATOMS;
            s.push_str(REWRITE_ATOMS[k]);
            let m = rng.gen_range(0..=2);
            let q = match rng.gen_range(0..7) {
                0 => "+".to_string(),
                1 => "?".to_string(),
                2 => format!("{{{m},{}}}", rng.gen_range(m.max(1)..=3)),
                3 => format!("{{{m},}}"),
                4 => "*".to_string(),
                _ => String::new(),
            };
            quantified |= matches!(q.chars().next(), Some('+' | '?' | '{'));
            if !q.is_empty() && rng.gen_bool(0.4) {
                s.push_str(&q);
                s.push('?');
            } else {
                s.push_str(&q);
            }
        }
        if quantified && parse_pattern(&s, "").is_ok_and(|(a, _)| a.group_count <= 2) {
            return (s, solid);
        }
    }
}

fn criterion_6() -> Outcome {
    let started = Instant::now();
    let mut rng = StdRng::seed_from_u64(REWRITE_SEED);
    let mut diverging = Vec::new();
    let mut pairs = 0;
    let (mut solid_total, mut solid_diverging) = (0, 0);
    for _ in 0..REWRITE_REGEXES {
        let (src, solid) = rewrite_regex(&mut rng);
        solid_total += usize::from(solid);
        let (ast, flags) = parse_pattern(&src, "").unwrap();
        let r = rewrite_quantifiers(&ast).unwrap();
        for w in words(&['a', 'b'], REWRITE_MAX_LEN) {
            pairs += 1;
            let original = match_full(&ast, &w, &flags).unwrap();
            let rewritten = match_full(&r.ast, &w, &flags).unwrap().map(|c| r.correspondence.recover(&c));
            if original != rewritten {
                diverging.push(format!("{src} on {w:?}"));
                solid_diverging += usize::from(solid);
                break;
            }
        }
    }
    let elapsed = started.elapsed();
    line(
        "6",
        "rewriting equivalence",
        diverging.is_empty() && elapsed < REWRITE_TIME_LIMIT,
        format!(
            "{} of {REWRITE_REGEXES} regexes diverge (tolerance 0) over {pairs} regex-word pairs, {elapsed:.2?} (limit {REWRITE_TIME_LIMIT:?}); {solid_diverging} of {solid_total} with only fixed-width non-nullable atoms diverge; e.g. {:?}",
            diverging.len(),
            diverging.iter().take(3).collect::<Vec<_>>()
        ),
    )
}

fn criterion_7() -> Outcome {
    let root = data("tests/fixtures/corpus");
    let outcome = scan_paths(&[&root]);
    let expected = std::fs::read_to_string(data("tests/fixtures/corpus_report.csv")).unwrap();
    let r = &outcome.report;
    let counts = (r.files_scanned, r.literals_found, r.unique_literals, r.total.capture_groups);
    let exact = counts == (10, 14, 11, 6) && r.to_csv() == expected && outcome.errors.is_empty();
    // The same corpus with a `new RegExp` call added to every file.
    let mut with_calls = ScanReport::new();
    let mut paths: BTreeSet<_> = BTreeSet::new();
    for e in walk(&root) {
        paths.insert(e);
    }
    for path in &paths {
        let text = std::fs::read_to_string(path).unwrap();
        with_calls.add_source(&format!("{text}\nconst extra = new RegExp(\"x\");\n"));
    }
    let unchanged = with_calls.to_csv() == r.to_csv() && with_calls.literals_found == r.literals_found;
    line(
        "7",
        "scanner fixture",
        exact && unchanged,
        format!("files/literals/unique/with-captures = {counts:?} (expected (10, 14, 11, 6)), CSV matches frozen report: {}, unchanged after adding new RegExp: {unchanged}", r.to_csv() == expected),
    )
}

fn walk(root: &Path) -> Vec<std::path::PathBuf> {
    let mut out = Vec::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for e in std::fs::read_dir(&dir).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else if p.extension().and_then(|e| e.to_str()).is_some_and(|e| ["js", "mjs", "cjs"].contains(&e)) {
                out.push(p);
            }
        }
    }
    out
}

fn main() -> ExitCode {
    if std::env::args().any(|a| a == "--list") {
        return ExitCode::SUCCESS;
    }
    let solver = solver_available();
    let mut outcomes = vec![criterion_1(), criterion_2a(), criterion_2b(solver), criterion_2c(solver), criterion_2d()];
    outcomes.extend(criteria_3_to_5(solver));
    outcomes.push(criterion_6());
    outcomes.push(criterion_7());
    let unexpected: Vec<&Outcome> = outcomes.iter().filter(|o| !o.pass && !KNOWN_UNATTAINABLE.contains(&o.id)).collect();
    let known: Vec<&Outcome> = outcomes.iter().filter(|o| !o.pass && KNOWN_UNATTAINABLE.contains(&o.id)).collect();
    println!(
        "acceptance: {} passed, {} failed as known unattainable ({}), {} failed unexpectedly",
        outcomes.iter().filter(|o| o.pass).count(),
        known.len(),
        known.iter().map(|o| o.id).collect::<Vec<_>>().join(", "),
        unexpected.len()
    );
    for o in &unexpected {
        eprintln!("unexpected failure {}: {}", o.id, o.detail);
    }
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
