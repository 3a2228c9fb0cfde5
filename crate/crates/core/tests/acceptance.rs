//! Acceptance criteria, one test each. Every test prints a `PASS`/`FAIL`
//! line straight to stdout, so the verdicts show up without `--nocapture`.
//!
//! Two criteria are false as stated and print `FAIL`. Their tests assert
//! the diagnosed cause instead; see `unattainable_reason`.

use std::io::Write;

use multicrit::verify::{run_check, CheckResult, VerifyConfig};

fn report(r: &CheckResult) {
    let line = format!(
        "criterion {:>2} {:<24} {} ({:.1}s) {}\n",
        r.criterion.unwrap_or(0),
        r.name,
        if r.passed { "PASS" } else { "FAIL" },
        r.seconds,
        r.summary
    );
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(line.as_bytes());
    let _ = out.flush();
}

fn run(name: &str) -> CheckResult {
    let r = run_check(name, &VerifyConfig::default()).expect("known check");
    report(&r);
    r
}

fn must_pass(name: &str) {
    let r = run(name);
    assert!(r.passed, "{}: {}\n{:#}", r.name, r.summary, r.details);
}

/// For a criterion that cannot hold as written, checks that it fails for
/// the diagnosed reason and not some other one.
fn unattainable_reason(r: &CheckResult) {
    if r.passed {
        return;
    }
    match r.name.as_str() {
        // The derivative carries 1/d, not d; the two agree only when d = 1.
        "criticality" => {
            let rows = r.details.as_array().expect("rows");
            for row in rows {
                assert!(row.get("error").is_none(), "{row}");
                assert_eq!(row["matches_over_d"], true, "{row}");
            }
            assert!(r.summary.contains("Euler derivatives vanish: true"));
        }
        // Rounding to the lattice dominates at these θ under either scale;
        // at the lattice points themselves (θ/d) converges and (θd) stalls.
        "scaling-disambiguation" => {
            assert_eq!(r.details["lattice_winner"], "theta-over-d");
        }
        other => panic!("{other} is not expected to fail"),
    }
}

#[test]
fn criterion_01_parameter_exactness() {
    must_pass("parameters");
}

#[test]
fn criterion_02_criticality_identities() {
    let r = run("criticality");
    unattainable_reason(&r);
}

#[test]
fn criterion_03_four_way_equality() {
    must_pass("four-way");
}

#[test]
fn criterion_04_normalization_and_marginals() {
    must_pass("normalization");
}

#[test]
fn criterion_05_conjugation_invariance() {
    must_pass("conjugation");
}

#[test]
fn criterion_06_bessel_reduction() {
    must_pass("bessel");
}

#[test]
fn criterion_07_airy_stack() {
    must_pass("airy");
}

#[test]
fn criterion_08_bdj_convergence() {
    must_pass("bdj");
}

#[test]
fn criterion_09_scaling_disambiguation() {
    let r = run("scaling-disambiguation");
    unattainable_reason(&r);
}

#[test]
fn criterion_10_oe_left_edge() {
    must_pass("oe-left-edge");
}

#[test]
fn criterion_11_limit_shapes() {
    must_pass("limit-shapes");
}

#[test]
fn criterion_12_haar_monte_carlo() {
    must_pass("haar-mc");
}

#[test]
fn criterion_13_sampler() {
    must_pass("sampler");
}
