#[allow(dead_code)]
#[path = "../examples/parse_and_canonicalize.rs"]
mod parse_and_canonicalize;

#[allow(dead_code)]
#[path = "../examples/oracle_measure.rs"]
mod oracle_measure;

#[allow(dead_code)]
#[path = "../examples/copy_on_write.rs"]
mod copy_on_write;

#[allow(dead_code)]
#[path = "../examples/simulate_trace.rs"]
mod simulate_trace;

#[allow(dead_code)]
#[path = "../examples/adequacy_check.rs"]
mod adequacy_check;

#[allow(dead_code)]
#[path = "../examples/normalize_population.rs"]
mod normalize_population;

#[allow(dead_code)]
#[path = "../examples/shrink_counterexample.rs"]
mod shrink_counterexample;

#[test]
fn parse_and_canonicalize_runs() {
    let out = parse_and_canonicalize::run_example();
    assert!(out.contains("congruent: true"));
    assert!(out.contains("error:     1:1: phago does not take a membrane argument"));
}

#[test]
fn oracle_measure_runs() {
    let out = oracle_measure::run_example();
    assert!(out.contains("reductions: 2"));
    assert!(out.contains("at rate 20"));
}

#[test]
fn copy_on_write_runs() {
    let out = copy_on_write::run_example();
    for line in [
        "propensity 10000000",
        "propensity 9899010",
        "propensity 99990",
        "propensity 990",
        "propensity 10\n",
    ] {
        assert!(out.contains(line), "{line}");
    }
    assert!(out.ends_with("decoded unchanged: true\n"));
}

#[test]
fn simulate_trace_runs() {
    let out = simulate_trace::run_example();
    assert!(out.starts_with("run,step,time,kind,name,propensity\n"));
    assert!(out.contains("run,time,outer,complex,count\n"));
    assert_eq!(out, simulate_trace::run_example());
}

#[test]
fn adequacy_check_runs() {
    let out = adequacy_check::run_example();
    assert!(out.contains("exact: true"));
    assert!(out.contains("float: true"));
    assert!(out.ends_with("200 generated cases, 0 failures\n"));
}

#[test]
fn normalize_population_runs() {
    let out = normalize_population::run_example();
    assert!(out.contains("normalize=false: 150 steps, peak 301 species"));
    assert!(out.contains("normalize=true: 150 steps, peak 3 species"));
}

#[test]
fn shrink_counterexample_runs() {
    let out = shrink_counterexample::run_example();
    assert!(out.contains("congruent: true"));
    let shrunk = out.lines().find(|l| l.starts_with("shrunk:")).unwrap();
    assert!(shrunk.contains("cophago<"));
    assert!(shrunk.len() < 60, "{shrunk}");
}
