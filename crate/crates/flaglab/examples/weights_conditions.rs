//! Finite-evidence weight checks on a few canonical pairs.
//!
//! Every check returns a three-valued verdict — PASS, FAIL, or
//! INCONCLUSIVE — because a finite probe cannot decide an asymptotic
//! statement; it can only report whether the trend stabilized inside the
//! probed range.

use flaglab::weights::{
    check_basic_ratio, check_cond1, check_inclusion, check_poly_growth, check_property_a,
    WeightSequence, DEFAULT_BASIC_RATIO_TOL, DEFAULT_COND1_TOL,
};

fn main() -> flaglab::Result<()> {
    let probe_range = 1 << 17;

    let pairs = [
        ("hardy -> bergman", WeightSequence::hardy(), WeightSequence::bergman()),
        ("dirichlet -> bergman", WeightSequence::dirichlet(), WeightSequence::bergman()),
        ("wide gap (0.6 -> -0.5)", WeightSequence::power(0.6), WeightSequence::power(-0.5)),
        ("backwards (bergman -> dirichlet)", WeightSequence::bergman(), WeightSequence::dirichlet()),
    ];

    println!("probe range K = {probe_range}\n");
    for (name, alpha, beta) in &pairs {
        println!("{name}:  alpha = {}, beta = {}", alpha.describe(), beta.describe());
        let ratio = check_basic_ratio(alpha, probe_range, DEFAULT_BASIC_RATIO_TOL)?;
        let cond1 = check_cond1(alpha, beta, probe_range, DEFAULT_COND1_TOL)?;
        let incl = check_inclusion(alpha, beta, probe_range)?;
        println!("  ratio -> 1      {:<12} deviation {:.3e}", ratio.verdict.to_string(), ratio.summary);
        println!("  compact gap     {:<12} q(K) = {:.3e}", cond1.verdict.to_string(), cond1.summary);
        println!("  embedding       {:<12} sup beta/alpha = {:.6}", incl.verdict.to_string(), incl.summary);
        println!();
    }

    // Two-sided comparability along residue classes: on the power scale the
    // ratio alpha(n-1+kn)/alpha(k) is exactly constant, so both constants
    // coincide at n^lambda.
    println!("two-sided comparability constants (K = 10000):");
    for lambda in [-0.5, 0.0, 0.5] {
        let alpha = WeightSequence::power(lambda);
        for n in [2usize, 3] {
            let (report, bounds) = check_property_a(&alpha, n, 10_000)?;
            println!(
                "  lambda = {lambda:>4}, n = {n}: {} with c1 = {:.12}, c2 = {:.12} (n^lambda = {:.12})",
                report.verdict,
                bounds.c1,
                bounds.c2,
                (n as f64).powf(lambda)
            );
        }
    }
    println!();

    // The growth index sup (k+1)|alpha(k)/alpha(k-1) - 1| is the quantity
    // controlling polynomial growth of the weight; on power scales it
    // stabilizes almost immediately.
    for lambda in [0.5, -0.5] {
        let alpha = WeightSequence::power(lambda);
        let growth = check_poly_growth(&alpha, probe_range)?;
        println!(
            "growth index of {}: {} (sup = {:.6})",
            alpha.describe(),
            growth.verdict,
            growth.summary
        );
    }
    Ok(())
}
