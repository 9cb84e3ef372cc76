use serde_json::Value;
use topography::cli::run_with;

fn run(args: &[&str]) -> (i32, String, String) {
    let argv: Vec<String> = std::iter::once("topograph").chain(args.iter().copied()).map(String::from).collect();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_with(&argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = run(args);
    assert_eq!(code, 0, "{args:?}: {err}");
    serde_json::from_str(&out).unwrap_or_else(|e| panic!("{args:?}: {e}\n{out}"))
}

#[test]
fn reduce_report() {
    let v = json(&["reduce", "--form", "16,81,103"]);
    assert_eq!(v["discriminant"], -31);
    assert_eq!(v["word"], "SRLL");
    assert_eq!(v["mutations"], serde_json::json!([2, 3, 2, 1]));
    assert_eq!(v["tuple"]["kind"], "well");
    assert_eq!(v["canonical"], serde_json::json!([[4, 5, 2]]));
    let clusters = v["clusters"].as_array().unwrap();
    assert_eq!(clusters.first().unwrap(), &serde_json::json!([16, 200, 103]));
    assert_eq!(clusters.last().unwrap(), &serde_json::json!([2, 4, 5]));
}

#[test]
fn reduce_accepts_clusters() {
    let a = json(&["reduce", "--cluster", "16:200:103"]);
    let b = json(&["reduce", "--form", "16,81,103"]);
    assert_eq!(a, b);
}

#[test]
fn equivalence_reports() {
    let v = json(&["equiv", "--form1", "16:200:103", "--form2", "41:20:4", "--strict"]);
    let text = v.to_string();
    assert!(text.contains("true") && text.contains("false"), "{text}");
}

#[test]
fn markov_values() {
    assert_eq!(json(&["markov", "--depth", "0"])["values"], serde_json::json!([1]));
    let v = json(&["markov", "--depth", "4"]);
    let values: Vec<u64> = v["values"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect();
    assert!(values.starts_with(&[1, 2, 5, 13, 29, 34]));
}

#[test]
fn snake_counts() {
    let v = json(&["snake", "--word", "LRL"]);
    assert_eq!((v["total"].clone(), v["rattle"].clone()), (5.into(), 4.into()));
    assert_eq!(v["fraction"], "1/4");
    let v = json(&["snake", "--fraction", "-5/2"]);
    assert_eq!(v["word"], "SRLL");
}

#[test]
fn laurent_certificates() {
    let v = json(&["laurent-check", "--params", "markov", "--sequence", "1,2,3,1", "--at", "1,1,1"]);
    assert_eq!(v["ok"], true);
    let last = v["steps"].as_array().unwrap().last().unwrap().clone();
    assert_eq!(last["values"], serde_json::json!(["433", "5", "29"]));
    let (code, out, err) = run(&["laurent-check", "--params", "generic:2", "--sequence", "2,(23),3"]);
    assert_eq!(code, 1, "{out}");
    assert!(err.contains("InexactDivision"), "{err}");
}

#[test]
fn pvi_relations() {
    let v = json(&["pvi", "--a", "0.3,-1.2+0.4i,0.7,1.1", "--check", "relations", "--samples", "50"]);
    assert!(!v.to_string().contains("false"), "{v}");
}

#[test]
fn dot_output() {
    let (code, out, _) = run(&["dot", "--form", "2,1,3", "--depth", "1"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("graph"), "{out}");
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["reduce", "--form", "1,7,-3"][..],
        &["markov", "--depth", "5"],
        &["pvi", "--theta", "0.1,0.2,0.3,0.4", "--check", "orbit", "--depth", "2"],
    ] {
        assert_eq!(run(args), run(args));
    }
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["reduce", "--form", "1,2"]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["--help"]).0, 0);
    let (code, out, err) = run(&["reduce", "--cluster", "0:0:0"]);
    assert_eq!(code, 1);
    assert!(out.is_empty());
    assert!(err.starts_with("error: InconsistentDiscriminant"), "{err}");
}
