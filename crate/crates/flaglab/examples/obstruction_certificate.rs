//! Quantitative obstruction: when does the coupling block fail to be a
//! Sylvester-range element with a bounded solution?
//!
//! Any solution of the intertwining equation must dominate an explicit
//! two-column functional of the weights; maximizing it over column pairs
//! gives a lower-bound certificate with a witness `(t, k, k')`. If the
//! bound keeps growing as the probe range quadruples, no bounded solution
//! can exist — finite evidence for strong irreducibility of the flag. A
//! minimal-norm solve at a fixed truncation shows the certificate is not
//! vacuous: the achieved norm always sits above it.

use flaglab::obstruction::{irreducibility_evidence, min_norm_solve, norm_lower_bound};
use flaglab::series::TaylorSeries;
use flaglab::weights::WeightSequence;

fn main() -> flaglab::Result<()> {
    let alpha = WeightSequence::hardy();
    let beta = WeightSequence::bergman();
    let one = TaylorSeries::polynomial_real(&[1.0])?;

    println!("lower-bound ladder (unit coupling):");
    println!("{:>8}  {:>10}  witness (t, k, k')", "K", "bound");
    let mut prev: Option<f64> = None;
    for i in 0..5 {
        let probe_range = 100 * 4usize.pow(i);
        let cert = norm_lower_bound(&alpha, &beta, &one, probe_range)?;
        let growth = prev.map_or(String::new(), |p| format!("  x{:.2}", cert.bound / p));
        println!(
            "{:>8}  {:>10.4}  ({}, {}, {}){growth}",
            cert.probe_range, cert.bound, cert.t, cert.k, cert.k_prime
        );
        prev = Some(cert.bound);
    }

    // The minimal-norm solve at a finite truncation: its achieved operator
    // norm must dominate any certificate probed inside that truncation.
    for n in [32usize, 64] {
        let sol = min_norm_solve(&alpha, &beta, &one, n)?;
        let inside = norm_lower_bound(&alpha, &beta, &one, n - 4)?;
        println!(
            "\nminimal-norm solution at N = {n}: |X|_op = {:.4} (= sqrt(N-1) here), |X|_F = {:.4}",
            sol.op_norm, sol.frobenius
        );
        println!(
            "certificate inside the truncation: {:.4} <= {:.4}",
            inside.bound, sol.op_norm
        );
    }

    // Six levels, three decades of probe range: every consecutive ratio
    // above the threshold is evidence the bound diverges.
    let ev = irreducibility_evidence(&alpha, &beta, &one, 102_400)?;
    let ratios: Vec<String> = ev.growth_ratios.iter().map(|r| format!("{r:.2}")).collect();
    println!(
        "\ngrowth verdict for hardy -> bergman: {} (ratios [{}], threshold {})",
        ev.verdict,
        ratios.join(", "),
        ev.ratio_threshold
    );

    // A widely separated pair saturates instead: the ladder flattens and
    // the probe honestly declines to conclude anything.
    let wide_a = WeightSequence::power(0.6);
    let wide_b = WeightSequence::power(-0.5);
    let ev = irreducibility_evidence(&wide_a, &wide_b, &one, 102_400)?;
    let ratios: Vec<String> = ev.growth_ratios.iter().map(|r| format!("{r:.3}")).collect();
    println!(
        "growth verdict for the wide gap:     {} (ratios [{}])",
        ev.verdict,
        ratios.join(", ")
    );

    // And a vanishing coupling short-circuits everything: the operator is
    // a direct sum, no certificate needed.
    let zero = TaylorSeries::polynomial_real(&[0.0])?;
    let ev = irreducibility_evidence(&alpha, &beta, &zero, 102_400)?;
    println!("growth verdict for zero coupling:    {}", ev.verdict);
    Ok(())
}
