//! flaglab: a numerical laboratory for operators with flag structure on
//! weighted Hardy spaces.
//!
//! Everything here is a finite truncation. A weight sequence $\alpha(k) > 0$
//! defines the space $H(\alpha)$ of analytic functions
//! $f = \sum_k \hat f(k) z^k$ with $\sum_k |\hat f(k)|^2 \alpha(k)^2 < \infty$;
//! the monomials are orthogonal with $\|z^k\| = \alpha(k)$. All matrices are
//! written in the orthonormalized basis $\tilde e_k = z^k/\alpha(k)$, so the
//! adjoint of a matrix really is its conjugate transpose and truncation is
//! compression onto the first $N$ basis vectors.
//!
//! The central object is the upper-triangular $2\times 2$ operator
//!
//! ```text
//!     T = [ M_z^*   M_h^* ]     on  H(alpha) (+) H(beta),
//!         [  0      M_z^* ]
//! ```
//!
//! where `M_h : H(alpha) -> H(beta)` is multiplication by a symbol `h`. The
//! crate builds these truncations, runs an analytic functional calculus on
//! them, constructs explicit similarity intertwiners (Moebius conjugation,
//! diagonal multipliers, and the exact residue-class decomposition of powers),
//! and computes a quantitative lower-bound certificate showing when the
//! commutant-style Sylvester equation has no bounded solution.
//!
//! Module map:
//!
//! * [`weights`] — weight sequences and finite-evidence condition checks
//!   (three-valued: a finite probe can pass, fail, or be inconclusive).
//! * [`series`] — truncated Taylor series with certified geometric tail
//!   bounds; Moebius and Blaschke closed forms.
//! * [`operators`] — multiplication, composition, and residue-embedding
//!   matrices; exact-vs-approximate compression bookkeeping.
//! * [`flag`] — the 2x2 flag operator, closed-form functional calculus, a
//!   power-series oracle, and a kernel-dimension probe.
//! * [`similarity`] — similarity witnesses: intertwiner matrix, residual,
//!   condition estimate, verdict.
//! * [`obstruction`] — Sylvester solution family, norm lower-bound
//!   certificates, minimum-norm solves, growth verdicts.
//! * [`cli`] — config parsing, presets, and the subcommand runners backing
//!   the `flaglab` binary.
//!
//! Runnable examples (`cargo run --example <name>`, fastest first):
//!
//! | example | shows |
//! |---|---|
//! | `weights_conditions` | condition reports and verdicts for weight pairs |
//! | `moebius_blaschke_series` | closed-form series, tails, pointwise checks |
//! | `operator_matrices` | mult/comp/embedding matrices and intertwining |
//! | `flag_calculus` | closed-form calculus vs. the power-series oracle |
//! | `kernel_probe` | numerical kernel dimensions across the disk |
//! | `moebius_similarity` | Moebius conjugation witness and its residual |
//! | `power_similarity` | exact residue decomposition of a power |
//! | `obstruction_certificate` | growing norm lower bounds vs. a plateau |
//! | `theorem_narrative` | the composite end-to-end verdict |
//!
//! Every function is deterministic and free of global state: the same inputs
//! produce bit-identical outputs.

pub mod cli;
pub mod error;
pub mod flag;
pub mod obstruction;
pub mod operators;
pub mod series;
pub mod similarity;
pub mod weights;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
