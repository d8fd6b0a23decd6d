//! Analytic functional calculus on the flag operator, two ways.
//!
//! For an analytic `f`, the closed form says `f(T)` is again a flag
//! operator: the diagonal blocks are `M_g^*` for `g(z) = conj(f(conj z))`
//! and the coupling block picks up a derivative factor `h g'`. The series
//! oracle knows none of that structure — it just sums `hat f(k) T^k` until
//! the terms die — so agreement between the two is a real cross-check.

use flaglab::flag::{build_flag, calculus_closed_form, calculus_series_oracle};
use flaglab::series::{BlaschkeProduct, TaylorSeries};
use flaglab::weights::WeightSequence;
use num_complex::Complex64;

fn main() -> flaglab::Result<()> {
    let alpha = WeightSequence::hardy();
    let beta = WeightSequence::bergman();
    let h = TaylorSeries::polynomial_real(&[1.0, 0.5])?;
    let n = 24;
    let t = build_flag(&alpha, &beta, &h, n)?;

    // A polynomial symbol first: the oracle sums exactly deg + 1 terms and
    // the two computations agree to rounding.
    let p = TaylorSeries::polynomial_real(&[0.25, 0.0, 1.0])?;
    let closed = calculus_closed_form(&t, &p)?;
    let (oracle, report) = calculus_series_oracle(&t, &p)?;
    let gap = (closed.full() - &oracle).norm() / closed.frobenius_norm();
    println!(
        "p(z) = z^2 + 1/4:  {} terms, relative gap {:.3e}",
        report.terms, gap
    );

    // A genuinely infinite symbol: an order-two Blaschke product. Its
    // series carries a certified geometric tail, which is what licenses
    // the oracle to sum at all.
    let b = BlaschkeProduct::new(0.0, vec![Complex64::new(0.3, 0.0), Complex64::new(-0.2, 0.1)])?;
    let f = b.series(8 * n + 2)?;
    let closed = calculus_closed_form(&t, &f)?;
    let (oracle, report) = calculus_series_oracle(&t, &f)?;
    let gap = (closed.full() - &oracle).norm() / closed.frobenius_norm();
    println!(
        "order-two product symbol: {} terms summed, operator norm {:.3}, tail ratio {:.3}, relative gap {:.3e}",
        report.terms, report.operator_norm, report.tail_ratio, gap
    );

    println!("\nblock norms of f(T):");
    println!("  diagonal (first space)  {:.6}", closed.nw().frobenius_norm());
    println!("  coupling                {:.6}", closed.ne().frobenius_norm());
    println!("  diagonal (second space) {:.6}", closed.se().frobenius_norm());

    // The oracle refuses symbols whose tail cannot dominate the operator
    // norm: a tail ratio at the spectral radius leaves the series sum
    // meaningless, and that is an error, not a number.
    let spiky = TaylorSeries::new(
        vec![Complex64::new(1.0, 0.0); 4],
        Some(flaglab::series::TailBound { bound: 5.0, ratio: 0.999 }),
    )?;
    match calculus_series_oracle(&t, &spiky) {
        Err(e) => println!("\nnear-divergent symbol rejected: {e}"),
        Ok(_) => println!("\nnear-divergent symbol unexpectedly accepted"),
    }
    Ok(())
}
