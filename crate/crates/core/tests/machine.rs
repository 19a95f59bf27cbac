use rzm::compile::{abstract_eliminate, prelude, y_combinator};
use rzm::extract::{extract_process, extract_witness, ExtractResult};
use rzm::machine::{
    exec_tree, in_pole, reaches, run_linear, run_traced, trace_line, AcceptKind, Leaf, LinearOutcome, OracleConfig,
    PoleVerdict, Rule, StuckReason,
};
use rzm::syntax::{k_term, numeral, parse_lambda, parse_term, Process, Stack, Term};

fn t(src: &str) -> Term {
    parse_term(src).unwrap()
}

fn on(head: &str, items: &[&str]) -> Process {
    Process::new(t(head), Stack::from_items(items.iter().map(|s| t(s))))
}

#[test]
fn stop_accepts_in_one_step() {
    let out = run_linear(on("p", &["K", "I"]), 10, &OracleConfig::none());
    assert_eq!(out, LinearOutcome::Accept { kind: AcceptKind::Stop, steps: 1 });
}

#[test]
fn trace_of_k_i_w() {
    let mut lines = Vec::new();
    let out = run_traced(on("(K) I W", &[]), 100, &OracleConfig::none(), |n, r, p| lines.push(trace_line(n, r, p)));
    assert_eq!(
        lines,
        ["#1 K I ⋆ W · π0  [rule 7]", "#2 K ⋆ I · W · π0  [rule 7]", "#3 I ⋆ π0  [rule 9]"]
    );
    assert!(matches!(out, LinearOutcome::Stuck { reason: StuckReason::Arity, steps: 3, .. }));
}

#[test]
fn zero_against_probes_is_short() {
    // K I ⋆ ξ·η·π0 ≻ K ⋆ I·ξ·η·π0 ≻ I ⋆ η·π0 ≻ η ⋆ π0, then η accepts
    let out = run_linear(on("n:0", &["h1", "p"]), 10, &OracleConfig::none());
    assert_eq!(out, LinearOutcome::Accept { kind: AcceptKind::Stop, steps: 4 });
}

#[test]
fn continuation_restores_its_stack() {
    let pi = Stack::from_items([t("K"), t("W I")]);
    let start = Process::new(k_term(&pi), Stack::from_items([t("h4"), t("C"), t("B")]));
    assert!(reaches(start, &Process::new(t("h4"), pi), 100, &OracleConfig::none()).is_some());
}

#[test]
fn y_unfolds() {
    let y = y_combinator();
    let xi = t("h3");
    let start = Process::new(y.clone(), Stack::from_items([xi.clone(), t("K")]));
    let target = Process::new(xi.clone(), Stack::from_items([Term::app(y, xi), t("K")]));
    let n = reaches(start, &target, 40, &OracleConfig::none()).expect("Y ξ unfolds within 40 steps");
    assert!(n <= 40);
    assert_eq!(prelude()["Y"], y_combinator());
}

#[test]
fn fork_tree_shape() {
    let tree = exec_tree(on("gamma", &["p", "I", "K", "h0"]), 100, &OracleConfig::none());
    let root = tree.root();
    assert_eq!(root.rule, Some(Rule::Fork));
    assert_eq!(root.children.len(), 3);
    let starts: Vec<String> = root.children.iter().map(|&c| tree.nodes[c].process.to_string()).collect();
    assert_eq!(starts, ["p ⋆ h0 · π0", "I ⋆ h0 · π0", "K ⋆ h0 · π0"]);
    assert_eq!(tree.accepts(), [&AcceptKind::Stop]);
    for n in &tree.nodes {
        assert!(n.children.len() <= 1 || (n.children.len() == 3 && n.rule == Some(Rule::Fork)));
    }
}

#[test]
fn stop_tree_is_one_leaf() {
    let tree = exec_tree(on("p", &[]), 10, &OracleConfig::none());
    assert_eq!(tree.nodes.len(), 1);
    assert_eq!(tree.root().leaf, Some(Leaf::Accept(AcceptKind::Stop)));
}

#[test]
fn collector_tree_json() {
    let p = on("gamma ((delta) n:5) ((delta) n:5) ((delta) n:7)", &[]);
    let tree = exec_tree(p, 10_000, &OracleConfig::collector());
    let json: serde_json::Value = serde_json::from_str(&tree.to_json()).unwrap();
    // three pushes, then the fork
    let mut node = &json;
    while node["rule"] != "3" {
        node = &node["children"][0];
    }
    let kids = node["children"].as_array().unwrap();
    assert_eq!(kids.len(), 3);
    let payloads: Vec<u64> = tree
        .accepts()
        .into_iter()
        .map(|k| match k {
            AcceptKind::Oracle { payload, .. } => *payload,
            AcceptKind::Stop => panic!("no stop expected"),
        })
        .collect();
    assert_eq!(payloads, [5, 5, 7]);
    // bit-stable across runs
    let again = exec_tree(on("gamma ((delta) n:5) ((delta) n:5) ((delta) n:7)", &[]), 10_000, &OracleConfig::collector());
    assert_eq!(tree.to_json(), again.to_json());
}

#[test]
fn pole_examples() {
    let cfg = OracleConfig::none();
    assert!(in_pole(on("p", &[]), 10, &cfg).is_yes());
    assert!(matches!(in_pole(on("I", &[]), 10, &cfg), PoleVerdict::NoEvidence(_)));
    assert!(matches!(in_pole(on("W W W", &[]), 1000, &cfg), PoleVerdict::Unknown { .. }));
    // the diverging third child does not block the verdict
    let p = on("gamma", &["(delta) n:5", "(delta) n:5", "W W W"]);
    assert!(in_pole(p.clone(), 100_000, &OracleConfig::checker(5)).is_yes());
    // two rejections decide the fork before the third child matters
    assert!(matches!(in_pole(p, 100_000, &OracleConfig::checker(4)), PoleVerdict::NoEvidence(_)));
    let wrong = on("gamma", &["(delta) n:5", "(delta) n:3", "h0"]);
    assert!(matches!(in_pole(wrong, 100_000, &OracleConfig::checker(5)), PoleVerdict::NoEvidence(_)));
}

#[test]
fn fork_needs_two_children() {
    let cfg = OracleConfig::none();
    assert!(in_pole(on("gamma", &["p", "h1", "p"]), 100, &cfg).is_yes());
    assert!(!in_pole(on("gamma", &["p", "h1", "h2"]), 100, &cfg).is_yes());
}

#[test]
fn abort_drops_the_back() {
    let out = run_linear(on("a", &["chi", "K"]), 10, &OracleConfig::none());
    assert!(matches!(out, LinearOutcome::Stuck { reason: StuckReason::Arity, steps: 1, .. }));
}

#[test]
fn kappa_then_e() {
    let run = |src: &str| {
        let prog = abstract_eliminate(&parse_lambda(src).unwrap()).unwrap();
        run_linear(Process::new(prog, Stack::empty()), 1000, &OracleConfig::collector())
    };
    let payload = |out: LinearOutcome| match out {
        LinearOutcome::Accept { kind: AcceptKind::Oracle { payload, .. }, .. } => payload,
        other => panic!("{other}"),
    };
    // the fresh constant equals itself and differs from every other one
    assert_eq!(payload(run("kappa (\\h. e h h (delta n:1) (delta n:2))")), 2);
    assert_eq!(payload(run("kappa (\\h. e h h1 (delta n:1) (delta n:2))")), 1);
}

#[test]
fn extraction_examples() {
    let theta = abstract_eliminate(&parse_lambda("\\x. (x) n:4").unwrap()).unwrap();
    let r = extract_witness(&theta, 100_000, "delta");
    assert_eq!(r.result, ExtractResult::Value { value: 4 });
    assert_eq!(r.payloads(), [4]);
    let json: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
    assert_eq!(json["format"], 1);
    assert_eq!(json["result"]["kind"], "value");
    assert_eq!(json["result"]["value"], 4);
}

#[test]
fn extraction_failures() {
    let cfg = OracleConfig::collector();
    let stuck = extract_process(on("h0", &[]), 1000, &cfg);
    assert_eq!(stuck.result.to_string(), "fail stuck");
    let fuel = extract_process(on("W W W", &[]), 1000, &cfg);
    assert_eq!(fuel.result.to_string(), "fail fuel");
    let bad = extract_process(on("delta", &["K"]), 1000, &cfg);
    assert_eq!(bad.result.to_string(), "fail undecodable-leaf");
}

#[test]
fn extraction_is_monotone_in_fuel() {
    let p = on("gamma", &["(delta) n:2", "W W W", "I ((delta) n:2)"]);
    let cfg = OracleConfig::collector();
    let mut first = None;
    for fuel in [10, 50, 100, 500, 1000, 10_000] {
        let r = extract_process(p.clone(), fuel, &cfg);
        if let Some(v) = first {
            assert_eq!(r.value(), Some(v));
        } else if let Some(v) = r.value() {
            first = Some(v);
        }
    }
    assert_eq!(first, Some(2));
}

#[test]
fn numeral_is_successor_chain() {
    assert_eq!(numeral(0), t("K I"));
    assert_eq!(numeral(2), t("B W (B B) (B W (B B) (K I))"));
}
