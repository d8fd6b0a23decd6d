//! Finite matrix models: multiplication, composition, and residue-class
//! embedding, with the exact-vs-approximate compression bookkeeping.
//!
//! Multiplication operators are lower triangular in the monomial basis, so
//! their truncations compose exactly; composition operators are full
//! matrices and their truncations are only approximations. Every matrix
//! remembers which space it maps where, and refuses products that do not
//! line up.

use flaglab::operators::{comp_matrix, mult_matrix, xj_matrix, Exactness};
use flaglab::series::{MoebiusMap, TaylorSeries};
use flaglab::weights::WeightSequence;
use num_complex::Complex64;

fn main() -> flaglab::Result<()> {
    let hardy = WeightSequence::hardy();
    let bergman = WeightSequence::bergman();
    let n = 6;

    let h = TaylorSeries::polynomial_real(&[1.0, 0.5])?;
    let m = mult_matrix(&hardy, &bergman, &h, n)?;
    println!(
        "multiplication by 1 + z/2, {} -> {} ({:?}):",
        m.domain().describe(),
        m.codomain().describe(),
        m.exactness()
    );
    for i in 0..n {
        let row: Vec<String> = (0..n).map(|j| format!("{:6.3}", m.entry(i, j).re)).collect();
        println!("  [{}]", row.join(" "));
    }

    // Composition with an automorphism fills the whole matrix, and its
    // truncation is tagged approximate: products may leak into the
    // discarded rows.
    let phi = MoebiusMap::new(0.0, Complex64::new(0.3, 0.0))?;
    let cm = comp_matrix(&hardy, &hardy, &phi.series(4 * n)?, n)?;
    println!("\ncomposition with phi (a = 0.3), {:?}:", cm.exactness());
    for i in 0..n {
        let row: Vec<String> = (0..n).map(|j| format!("{:6.3}", cm.entry(i, j).re)).collect();
        println!("  [{}]", row.join(" "));
    }
    assert_eq!(cm.exactness(), Exactness::Approximate);

    // Space tags are part of the model: multiplying mismatched matrices is
    // a contract error, not a silent wrong answer.
    let on_bergman = mult_matrix(&bergman, &bergman, &h, n)?;
    match m.multiply(&on_bergman) {
        Err(e) => println!("\nmismatched product rejected: {e}"),
        Ok(_) => unreachable!("space mismatch must be rejected"),
    }

    // The residue-class embedding z^k -> z^{2k} has single-entry columns
    // and carries the pulled-back weight alpha(2k) as its domain.
    let x0 = xj_matrix(&bergman, 2, 0, n)?;
    println!(
        "\nresidue embedding (n = 2, j = 0) on {}, domain {}:",
        bergman.describe(),
        x0.domain().describe()
    );
    for i in 0..n {
        let row: Vec<String> = (0..3).map(|j| format!("{:6.3}", x0.entry(i, j).re)).collect();
        println!("  [{}]", row.join(" "));
    }

    // Multiplying by z^2 after embedding lands one class slot higher:
    // column k of M_z2 X0 is column k+1 of X0 scaled by the shift weight
    // alpha(k+1)/alpha(k). Checked entrywise.
    let z2 = TaylorSeries::polynomial_real(&[0.0, 0.0, 1.0])?;
    let shifted = mult_matrix(&bergman, &bergman, &z2, n)?.multiply(&x0)?;
    let mut defect = 0.0_f64;
    for k in 0..2 {
        let scale = bergman.value(k + 1) / bergman.value(k);
        for i in 0..n {
            defect = defect.max((shifted.entry(i, k) - x0.entry(i, k + 1) * scale).norm());
        }
    }
    println!("shift-then-embed vs embed-then-shift defect: {defect:.3e}");
    Ok(())
}
