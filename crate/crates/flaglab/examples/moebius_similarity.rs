//! The Moebius conjugation witness: `phi~(T)` is similar to the flag
//! built from the transported coupling, and the conjugating matrix is a
//! pair of adjoint composition operators.
//!
//! The witness reports the intertwining residual on a half-size corner,
//! the condition number of the conjugation, and a verdict that refuses to
//! call a degenerate conjugation a success no matter how small the
//! residual looks.

use flaglab::series::{MoebiusMap, TaylorSeries};
use flaglab::similarity::{moebius_sample_grid, moebius_witness, DEFAULT_WITNESS_TOL};
use flaglab::weights::WeightSequence;
use num_complex::Complex64;

fn main() -> flaglab::Result<()> {
    let alpha = WeightSequence::hardy();
    let beta = WeightSequence::bergman();
    let h = TaylorSeries::polynomial_real(&[1.0])?;

    let phi = MoebiusMap::new(0.0, Complex64::new(0.3, 0.0))?;
    let w = moebius_witness(&alpha, &beta, &h, &phi, 32, DEFAULT_WITNESS_TOL)?;
    println!("phi with a = 0.3 at N = 32:");
    println!("  residual   {:.3e} on corner {}", w.report.residual, w.report.corner);
    println!("  condition  {:.3e}", w.report.condition_estimate);
    println!("  verdict    {}", w.report.verdict);
    print!("  transported coupling: ");
    for k in 0..3 {
        let v = w.h_new.known_coeff(k).unwrap_or_default();
        print!("{:+.4}{:+.4}i  ", v.re, v.im);
    }
    println!("(a quadratic: (h o phi^-1) (phi' o phi^-1))");

    // The whole sample grid at a small truncation: rotations are exactly
    // conditioned, off-center maps less so, and all eighteen pass.
    println!("\nsample grid at N = 16:");
    println!("{:>18}  {:>10}  {:>10}  verdict", "phi", "residual", "condition");
    for phi in moebius_sample_grid() {
        let w = moebius_witness(&alpha, &beta, &h, &phi, 16, DEFAULT_WITNESS_TOL)?;
        println!(
            "a = {:+.1}{:+.1}i t = {:.2}  {:>10.2e}  {:>10.2e}  {}",
            phi.a().re,
            phi.a().im,
            phi.theta(),
            w.report.residual,
            w.report.condition_estimate,
            w.report.verdict
        );
    }

    // Truncated composition matrices of off-center maps are exponentially
    // ill-conditioned in the truncation size. By N = 64 the conjugation
    // for a = 0.3 is numerically singular: the residual still looks tiny,
    // but no bounded similarity is being exhibited, and the witness says
    // so.
    let big = moebius_witness(&alpha, &beta, &h, &phi, 64, DEFAULT_WITNESS_TOL)?;
    println!(
        "\nsame phi at N = 64: residual {:.3e}, condition {:.3e}, verdict {}",
        big.report.residual, big.report.condition_estimate, big.report.verdict
    );
    Ok(())
}
