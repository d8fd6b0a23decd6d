//! Acceptance suite: one test per criterion, each printing a single
//! `criterion N: PASS/FAIL — ...` line (run with `-- --nocapture` to see
//! the lines for passing tests too). Thresholds are pinned as constants
//! below; the asserts fire only after the verdict line is printed, so a
//! red criterion still reports its measurements.

use flaglab::flag::{build_flag, calculus_closed_form, calculus_series_oracle};
use flaglab::obstruction::{min_norm_solve, norm_lower_bound};
use flaglab::series::{BlaschkeProduct, MoebiusMap, TaylorSeries};
use flaglab::similarity::{moebius_witness, power_witness, DEFAULT_WITNESS_TOL};
use flaglab::weights::{
    check_cond1, check_inclusion, check_property_a, Verdict, WeightSequence, DEFAULT_COND1_TOL,
};
use num_complex::Complex64;
use std::time::{Duration, Instant};

/// Two-sided comparability constants must hit the exact power `n^lambda`.
const PROPERTY_A_TOL: f64 = 1e-12;
/// Half-width of the exponent band where INCONCLUSIVE verdicts are allowed.
const BOUNDARY_BAND: f64 = 0.05;
/// Relative distance of the repeated power from its closed block form.
const CLOSED_FORM_TOL: f64 = 1e-12;
/// Per-class and assembled intertwining residual cap for the power witness.
const CLASS_RESIDUAL_TOL: f64 = 1e-10;
/// Relative Frobenius gap between the closed-form calculus and the series
/// oracle.
const CALCULUS_REL_TOL: f64 = 1e-9;
/// Absolute cap on the Moebius witness corner residual at the larger size.
const MOEBIUS_ABS_TOL: f64 = 1e-4;
/// Demanded decay factor of that residual when the truncation doubles.
const MOEBIUS_DECAY_FACTOR: f64 = 0.5;
/// Minimal growth of the norm lower bound when the probe range quadruples.
const GROWTH_MIN_RATIO: f64 = 1.8;
/// Achieved minimal norm may undershoot the certificate by at most 1%.
const CERTIFICATE_SLACK: f64 = 0.99;
/// Maximal growth ratio tolerated for the widely separated pair.
const FLAT_MAX_RATIO: f64 = 1.05;
/// Expected numerical kernel dimension of the flag at interior points.
const FLAG_KERNEL_DIM: usize = 2;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn verdict_word(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn budget(start: Instant, limit: Duration, label: &str) {
    let elapsed = start.elapsed();
    assert!(
        elapsed < limit,
        "{label} took {elapsed:.2?}, budget {limit:.2?}"
    );
}

#[test]
fn criterion_1_property_a_constants_are_exact_powers() {
    let start = Instant::now();
    let mut worst = 0.0_f64;
    for &lambda in &[-0.5, 0.0, 0.5] {
        let alpha = WeightSequence::power(lambda);
        for modulus in [2usize, 3, 4] {
            let (report, bounds) = check_property_a(&alpha, modulus, 10_000).unwrap();
            let target = (modulus as f64).powf(lambda);
            worst = worst
                .max((bounds.c1 - target).abs())
                .max((bounds.c2 - target).abs());
            assert_eq!(report.verdict, Verdict::Pass, "lambda={lambda} n={modulus}");
        }
    }
    let ok = worst <= PROPERTY_A_TOL;
    println!(
        "criterion 1: {} — c1, c2 within {:.1e} of n^lambda on all nine (lambda, n) pairs, worst deviation {:.3e}, {:.2?}",
        verdict_word(ok),
        PROPERTY_A_TOL,
        worst,
        start.elapsed()
    );
    assert!(ok, "worst propertyA deviation {worst:.3e}");
    budget(start, Duration::from_secs(1), "criterion 1");
}

#[test]
fn criterion_2_condition_grids_match_the_exponent_gap() {
    let start = Instant::now();
    let grid: Vec<f64> = (-4..=4).map(|i| i as f64 * 0.25).collect();
    let weights: Vec<WeightSequence> = grid.iter().map(|&e| WeightSequence::power(e)).collect();
    let probe_range = 1_000_000;
    let mut mismatches: Vec<String> = Vec::new();
    for (i, &lambda) in grid.iter().enumerate() {
        for (j, &mu) in grid.iter().enumerate() {
            let gap = lambda - mu;
            let cond1 = check_cond1(&weights[i], &weights[j], probe_range, DEFAULT_COND1_TOL)
                .unwrap()
                .verdict;
            let cond1_ok = match cond1 {
                Verdict::Pass => gap < 1.0,
                Verdict::Fail => gap >= 1.0,
                Verdict::Inconclusive => (gap - 1.0).abs() <= BOUNDARY_BAND,
            };
            if !cond1_ok {
                mismatches.push(format!("cond1({lambda},{mu})={cond1}"));
            }
            let incl = check_inclusion(&weights[i], &weights[j], probe_range)
                .unwrap()
                .verdict;
            let incl_ok = match incl {
                Verdict::Pass => gap >= 0.0,
                Verdict::Fail => gap < 0.0,
                Verdict::Inconclusive => gap.abs() <= BOUNDARY_BAND,
            };
            if !incl_ok {
                mismatches.push(format!("inclusion({lambda},{mu})={incl}"));
            }
        }
    }
    let ok = mismatches.is_empty();
    println!(
        "criterion 2: {} — 81-pair exponent grid at K = 10^6: smallness verdicts track gap < 1, embedding verdicts track gap >= 0, {} mismatch(es), {:.2?}",
        verdict_word(ok),
        mismatches.len(),
        start.elapsed()
    );
    assert!(ok, "grid mismatches: {mismatches:?}");
    budget(start, Duration::from_secs(10), "criterion 2");
}

#[test]
fn criterion_3_power_decomposition_is_exact_at_scale() {
    let start = Instant::now();
    let alpha = WeightSequence::hardy();
    let beta = WeightSequence::bergman();
    let mut conditions = Vec::new();
    let mut ok = true;
    for power in [2usize, 3] {
        let w = power_witness(&alpha, &beta, power, 128, DEFAULT_WITNESS_TOL).unwrap();
        ok &= w.closed_form_residual <= CLOSED_FORM_TOL;
        ok &= w.invariance_exact;
        ok &= w.classes.iter().all(|cl| cl.residual <= CLASS_RESIDUAL_TOL);
        ok &= w.assembled_residual <= CLASS_RESIDUAL_TOL;
        ok &= w.report.condition_estimate.is_finite();
        ok &= w.report.verdict == Verdict::Pass;
        conditions.push(format!(
            "n={power}: closed {:.2e}, assembled {:.2e}, condition {:.3}",
            w.closed_form_residual, w.assembled_residual, w.report.condition_estimate
        ));
    }
    println!(
        "criterion 3: {} — adjoint powers at N = 128 match the closed block form within {:.0e}, residue-class zeros exact, class residuals within {:.0e} ({}), {:.2?}",
        verdict_word(ok),
        CLOSED_FORM_TOL,
        CLASS_RESIDUAL_TOL,
        conditions.join("; "),
        start.elapsed()
    );
    assert!(ok, "{conditions:?}");
    budget(start, Duration::from_secs(30), "criterion 3");
}

#[test]
fn criterion_4_calculus_oracle_cross_validation() {
    let start = Instant::now();
    let alpha = WeightSequence::hardy();
    let beta = WeightSequence::bergman();
    let h = TaylorSeries::polynomial_real(&[1.0, 0.5]).unwrap();
    let n = 64;
    let t = build_flag(&alpha, &beta, &h, n).unwrap();
    let f = BlaschkeProduct::new(0.0, vec![c(0.3, 0.0), c(-0.2, 0.1)])
        .unwrap()
        .series(8 * n + 2)
        .unwrap();
    let closed = calculus_closed_form(&t, &f).unwrap();
    let (oracle, oracle_report) = calculus_series_oracle(&t, &f).unwrap();
    let rel = (closed.full() - &oracle).norm() / closed.frobenius_norm();
    let ok = rel <= CALCULUS_REL_TOL;
    println!(
        "criterion 4: {} — order-two product symbol at N = 64: closed form vs {}-term series sum, relative gap {:.3e} (cap {:.0e}), {:.2?}",
        verdict_word(ok),
        oracle_report.terms,
        rel,
        CALCULUS_REL_TOL,
        start.elapsed()
    );
    assert!(ok, "relative calculus discrepancy {rel:.3e}");
    budget(start, Duration::from_secs(10), "criterion 4");
}

#[test]
fn criterion_5_moebius_witness_residual_decay() {
    let start = Instant::now();
    let alpha = WeightSequence::hardy();
    let beta = WeightSequence::bergman();
    let h = TaylorSeries::polynomial_real(&[1.0]).unwrap();
    let phi = MoebiusMap::new(0.0, c(0.3, 0.0)).unwrap();
    let small = moebius_witness(&alpha, &beta, &h, &phi, 64, DEFAULT_WITNESS_TOL).unwrap();
    let large = moebius_witness(&alpha, &beta, &h, &phi, 128, DEFAULT_WITNESS_TOL).unwrap();
    let r_small = small.report.residual;
    let r_large = large.report.residual;
    let absolute_ok = r_large <= MOEBIUS_ABS_TOL;
    let halving_ok = r_large <= MOEBIUS_DECAY_FACTOR * r_small;
    let ok = absolute_ok && halving_ok;
    println!(
        "criterion 5: {} — corner residual {:.3e} at N = 64 and {:.3e} at N = 128 (ratio {:.3}); absolute cap {:.0e} {}; halving on doubling {} — the transported coupling is an exact quadratic here, so both residuals sit at the floating-point floor and no longer shrink with N",
        verdict_word(ok),
        r_small,
        r_large,
        r_large / r_small,
        MOEBIUS_ABS_TOL,
        verdict_word(absolute_ok),
        verdict_word(halving_ok),
        );
    assert!(absolute_ok, "residual at N = 128 is {r_large:.3e}");
    assert!(
        halving_ok,
        "residual ratio {:.3} exceeds {MOEBIUS_DECAY_FACTOR}",
        r_large / r_small
    );
    budget(start, Duration::from_secs(30), "criterion 5");
}

#[test]
fn criterion_6_obstruction_growth_certificates() {
    let start = Instant::now();
    let alpha = WeightSequence::hardy();
    let beta = WeightSequence::bergman();
    let one = TaylorSeries::polynomial_real(&[1.0]).unwrap();
    let bound = |w_a: &WeightSequence, w_b: &WeightSequence, k: usize| {
        norm_lower_bound(w_a, w_b, &one, k).unwrap().bound
    };
    let grow_small = bound(&alpha, &beta, 400) / bound(&alpha, &beta, 100);
    let grow_large = bound(&alpha, &beta, 4_000) / bound(&alpha, &beta, 1_000);
    let certificate = norm_lower_bound(&alpha, &beta, &one, 60).unwrap().bound;
    let achieved = min_norm_solve(&alpha, &beta, &one, 64).unwrap().op_norm;
    let wide_a = WeightSequence::power(0.6);
    let wide_b = WeightSequence::power(-0.5);
    let flat = bound(&wide_a, &wide_b, 40_000) / bound(&wide_a, &wide_b, 10_000);
    let growth_ok = grow_small >= GROWTH_MIN_RATIO && grow_large >= GROWTH_MIN_RATIO;
    let sound_ok = achieved >= CERTIFICATE_SLACK * certificate;
    let flat_ok = flat <= FLAT_MAX_RATIO;
    let ok = growth_ok && sound_ok && flat_ok;
    println!(
        "criterion 6: {} — lower-bound growth on range-quadrupling {:.3} and {:.3} (>= {GROWTH_MIN_RATIO}); achieved minimal norm {:.4} vs certificate {:.4}; widely separated pair ratio {:.4} (<= {FLAT_MAX_RATIO}), {:.2?}",
        verdict_word(ok),
        grow_small,
        grow_large,
        achieved,
        certificate,
        flat,
        start.elapsed()
    );
    assert!(growth_ok, "growth ratios {grow_small:.3}, {grow_large:.3}");
    assert!(sound_ok, "achieved {achieved:.4} under certificate {certificate:.4}");
    assert!(flat_ok, "flat-pair ratio {flat:.4}");
    budget(start, Duration::from_secs(60), "criterion 6");
}

#[test]
fn criterion_7_kernel_probe_counts_the_flag() {
    let start = Instant::now();
    let alpha = WeightSequence::hardy();
    let beta = WeightSequence::bergman();
    let one = TaylorSeries::polynomial_real(&[1.0]).unwrap();
    let t = build_flag(&alpha, &beta, &one, 128).unwrap();
    let points = [c(0.0, 0.0), c(0.3, 0.0), c(0.0, 0.3), c(-0.5, 0.0)];
    let dims: Vec<usize> = points
        .iter()
        .map(|&w| t.kernel_probe(w, 64).unwrap().dimension)
        .collect();
    let ok = dims.iter().all(|&d| d == FLAG_KERNEL_DIM);
    println!(
        "criterion 7: {} — numerical kernel dimension {:?} at four interior points, expected {} each, corner 64, {:.2?}",
        verdict_word(ok),
        dims,
        FLAG_KERNEL_DIM,
        start.elapsed()
    );
    assert!(ok, "kernel dimensions {dims:?}");
    budget(start, Duration::from_secs(10), "criterion 7");
}

#[test]
fn criterion_8_narrative_composite_exits_clean() {
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_flaglab"))
        .args(["--preset", "hardy-bergman-h1", "thm41"])
        .output()
        .unwrap();
    let stdout = String::from_utf8(out.stdout).unwrap();
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    let report = &v["report"];
    let steps = report["steps"].as_array().unwrap();
    let grid = &steps[0];
    let witnesses = grid["witnesses"].as_array().unwrap();
    let grid_ok = grid["verdict"] == "PASS"
        && witnesses.len() == 18
        && witnesses.iter().all(|w| w["verdict"] == "PASS");
    let power_ok = steps[1]["verdict"] == "PASS";
    let growth_ok = steps[2]["evidence"]["verdict"] == "EVIDENCE-FOR-SI";
    let cited = report["k0-step"]
        .as_str()
        .unwrap()
        .contains("cited-not-computed");
    let ok = out.status.code() == Some(0)
        && report["overall"] == "PASS"
        && grid_ok
        && power_ok
        && growth_ok
        && cited;
    println!(
        "criterion 8: {} — composite narrative exit {:?}, overall {}, {} grid witnesses, power step {}, growth evidence {}, base-class step cited-not-computed: {}",
        verdict_word(ok),
        out.status.code(),
        report["overall"],
        witnesses.len(),
        steps[1]["verdict"],
        steps[2]["evidence"]["verdict"],
        cited
    );
    assert!(ok, "narrative report: {report}");
}
