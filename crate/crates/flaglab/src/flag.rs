//! Flag-structured operators on $H(\alpha) \oplus H(\beta)$ and their
//! symbol calculus.
//!
//! The central object is the upper-triangular pair
//!
//! ```text
//!     T  =  [ M_z,alpha^*    M_h^*      ]
//!           [ 0              M_z,beta^* ]
//! ```
//!
//! where $M_h : H(\alpha) \to H(\beta)$ multiplies by an analytic symbol
//! $h$. Applying an analytic function $f$ to $T$ lands back in the same
//! shape: the diagonal blocks become $M_{\tilde f}^*$ and the coupling
//! block becomes $M_{h \tilde f'}^*$, with $\tilde f$ the coefficient
//! conjugate. [`calculus_closed_form`] builds that answer directly from
//! symbols; [`calculus_series_oracle`] instead sums $\sum \hat f(k) T_N^k$
//! numerically. Both act on truncations of *triangular* operators, whose
//! compressions compose exactly, so the two roads must agree to round-off —
//! a strong internal cross-check with no shared code path.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::operators::{mult_matrix, OperatorMatrix};
use crate::series::TaylorSeries;
use crate::weights::WeightSequence;
use crate::{Error, Result};

/// Relative singular-value threshold for counting numerical kernel
/// dimensions in [`kernel_probe_matrix`] and [`FlagOperator::kernel_probe`].
pub const KERNEL_THRESHOLD: f64 = 1e-8;

/// Relative Frobenius tolerance for the intertwining identity validated by
/// [`build_flag`].
pub const INTERTWINING_TOL: f64 = 1e-12;

/// An upper-triangular 2x2 block operator
/// `[[nw, ne], [0, se]]` acting on a direct sum of two spaces.
#[derive(Debug, Clone, PartialEq)]
pub struct UpperBlock2 {
    nw: OperatorMatrix,
    ne: OperatorMatrix,
    se: OperatorMatrix,
}

impl UpperBlock2 {
    pub fn new(nw: OperatorMatrix, ne: OperatorMatrix, se: OperatorMatrix) -> Result<Self> {
        if nw.nrows() != nw.ncols() || se.nrows() != se.ncols() {
            return Err(Error::Contract(
                "diagonal blocks of a 2x2 block operator must be square".into(),
            ));
        }
        if ne.nrows() != nw.nrows() || ne.ncols() != se.ncols() {
            return Err(Error::Contract(format!(
                "coupling block {}x{} incompatible with diagonal blocks {} and {}",
                ne.nrows(),
                ne.ncols(),
                nw.nrows(),
                se.nrows()
            )));
        }
        Ok(UpperBlock2 { nw, ne, se })
    }

    pub fn nw(&self) -> &OperatorMatrix {
        &self.nw
    }

    pub fn ne(&self) -> &OperatorMatrix {
        &self.ne
    }

    pub fn se(&self) -> &OperatorMatrix {
        &self.se
    }

    /// Assembles the dense `(p+q) x (p+q)` matrix.
    pub fn full(&self) -> DMatrix<Complex64> {
        let p = self.nw.nrows();
        let q = self.se.nrows();
        let mut m = DMatrix::zeros(p + q, p + q);
        m.view_mut((0, 0), (p, p)).copy_from(self.nw.entries());
        m.view_mut((0, p), (p, q)).copy_from(self.ne.entries());
        m.view_mut((p, p), (q, q)).copy_from(self.se.entries());
        m
    }

    /// Frobenius distance to another block operator of the same shape.
    pub fn frobenius_distance(&self, other: &UpperBlock2) -> Result<f64> {
        let d1 = self.nw.sub(&other.nw)?.frobenius_norm();
        let d2 = self.ne.sub(&other.ne)?.frobenius_norm();
        let d3 = self.se.sub(&other.se)?.frobenius_norm();
        Ok((d1 * d1 + d2 * d2 + d3 * d3).sqrt())
    }

    pub fn frobenius_norm(&self) -> f64 {
        let (a, b, c) = (
            self.nw.frobenius_norm(),
            self.ne.frobenius_norm(),
            self.se.frobenius_norm(),
        );
        (a * a + b * b + c * c).sqrt()
    }
}

/// The flag-structured operator: parameters plus its block truncation.
#[derive(Debug, Clone)]
pub struct FlagOperator {
    alpha: WeightSequence,
    beta: WeightSequence,
    h: TaylorSeries,
    n: usize,
    blocks: UpperBlock2,
}

impl FlagOperator {
    pub fn alpha(&self) -> &WeightSequence {
        &self.alpha
    }

    pub fn beta(&self) -> &WeightSequence {
        &self.beta
    }

    pub fn h(&self) -> &TaylorSeries {
        &self.h
    }

    /// Per-block truncation size (the full matrix is `2n x 2n`).
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &UpperBlock2 {
        &self.blocks
    }

    pub fn full(&self) -> DMatrix<Complex64> {
        self.blocks.full()
    }

    /// Numerical kernel dimension of `T - w` on the per-block corner of
    /// size `m`: assembles the `2m x 2m` truncation and counts singular
    /// values below `KERNEL_THRESHOLD * sigma_max`.
    pub fn kernel_probe(&self, w: Complex64, m: usize) -> Result<KernelProbe> {
        if m == 0 || m > self.n {
            return Err(Error::Contract(format!(
                "kernel probe corner {m} out of range for block size {}",
                self.n
            )));
        }
        let blocks = UpperBlock2::new(
            self.blocks.nw.corner(m)?,
            self.blocks.ne.corner(m)?,
            self.blocks.se.corner(m)?,
        )?;
        kernel_probe_dense(blocks.full(), w, m)
    }
}

/// Outcome of a numerical kernel probe at a point.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct KernelProbe {
    /// Probed spectral point as `[re, im]`.
    pub point: (f64, f64),
    /// Corner size the probe ran on (per block, for flag operators).
    pub corner: usize,
    /// Number of singular values below the relative threshold.
    pub dimension: usize,
    /// The relative threshold used.
    pub threshold: f64,
    /// The smallest few singular values, ascending.
    pub smallest_singular_values: Vec<f64>,
}

fn kernel_probe_dense(mut m: DMatrix<Complex64>, w: Complex64, corner: usize) -> Result<KernelProbe> {
    let dim = m.nrows();
    for i in 0..dim {
        m[(i, i)] -= w;
    }
    let svd = nalgebra::linalg::SVD::new(m, false, false);
    let mut sigma: Vec<f64> = svd.singular_values.iter().copied().collect();
    sigma.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let largest = sigma.last().copied().unwrap_or(0.0);
    let cut = KERNEL_THRESHOLD * largest;
    let dimension = sigma.iter().filter(|s| **s < cut).count();
    Ok(KernelProbe {
        point: (w.re, w.im),
        corner,
        dimension,
        threshold: KERNEL_THRESHOLD,
        smallest_singular_values: sigma.into_iter().take(4).collect(),
    })
}

/// Numerical kernel dimension of `(op - w)` on its principal `m x m`
/// corner.
pub fn kernel_probe_matrix(op: &OperatorMatrix, w: Complex64, m: usize) -> Result<KernelProbe> {
    let c = op.corner(m)?;
    kernel_probe_dense(c.entries().clone(), w, m)
}

/// Builds the flag operator for `(alpha, beta, h)` at block size `n` and
/// validates its defining intertwining relation.
///
/// The blocks are adjoints of multiplication truncations, so the identity
/// `M_z,alpha^* M_h^* = M_h^* M_z,beta^*` (the adjoint of
/// `M_h M_z = M_z M_h`) must hold to round-off; a violation means the
/// inputs are inconsistent and is reported as an internal-consistency
/// error rather than returned as data.
pub fn build_flag(
    alpha: &WeightSequence,
    beta: &WeightSequence,
    h: &TaylorSeries,
    n: usize,
) -> Result<FlagOperator> {
    if n < 2 {
        return Err(Error::Contract(format!(
            "flag truncation needs block size >= 2, got {n}"
        )));
    }
    let z = TaylorSeries::identity();
    let a = mult_matrix(alpha, alpha, &z, n)?.adjoint();
    let s = mult_matrix(alpha, beta, h, n)?.adjoint();
    let c = mult_matrix(beta, beta, &z, n)?.adjoint();
    let lhs = a.multiply(&s)?;
    let rhs = s.multiply(&c)?;
    let residual = lhs.sub(&rhs)?.frobenius_norm();
    let scale = lhs.frobenius_norm().max(1.0);
    if residual > INTERTWINING_TOL * scale {
        return Err(Error::InternalConsistency(format!(
            "flag blocks violate the shift intertwining identity: residual {residual:.3e} vs scale {scale:.3e}"
        )));
    }
    let blocks = UpperBlock2::new(a, s, c)?;
    Ok(FlagOperator {
        alpha: alpha.clone(),
        beta: beta.clone(),
        h: h.clone(),
        n,
        blocks,
    })
}

/// Applies `f` to the flag operator by the closed-form symbol calculus:
///
/// ```text
///     f(T) = [ M_g^*   M_{h g'}^* ]        g = tilde(f)
///            [ 0       M_g^*      ]
/// ```
///
/// Needs `f` known to index `n` (one past the block size, for the
/// derivative).
pub fn calculus_closed_form(t: &FlagOperator, f: &TaylorSeries) -> Result<UpperBlock2> {
    let n = t.n;
    let g = f.tilde();
    let gprime = g.derivative(n)?;
    let coupling_symbol = t.h.mul(&gprime, n)?;
    let nw = mult_matrix(&t.alpha, &t.alpha, &g, n)?.adjoint();
    let ne = mult_matrix(&t.alpha, &t.beta, &coupling_symbol, n)?.adjoint();
    let se = mult_matrix(&t.beta, &t.beta, &g, n)?.adjoint();
    UpperBlock2::new(nw, ne, se)
}

/// How [`calculus_series_oracle`] decided it was done.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct SeriesOracleReport {
    /// Number of series terms actually summed.
    pub terms: usize,
    /// Largest singular value of the truncated operator.
    pub operator_norm: f64,
    /// Tail ratio of the coefficient envelope (zero for polynomials).
    pub tail_ratio: f64,
}

/// Evaluates `f(T_N)` the hard way: summing `hat f(k) T_N^k` on the full
/// `2n x 2n` truncation.
///
/// A polynomial is summed exactly, degree-plus-one terms. Otherwise `f`
/// must carry a tail certificate `(M, r)`; the sum is rejected as divergent
/// when `sigma_max(T_N) * r >= 1`, and otherwise accumulates terms until
/// eight consecutive ones fall below `1e-14` times the running scale, with
/// a hard cap of `4 * 2n` terms. Every summed coefficient must be stored.
pub fn calculus_series_oracle(
    t: &FlagOperator,
    f: &TaylorSeries,
) -> Result<(DMatrix<Complex64>, SeriesOracleReport)> {
    let dim = 2 * t.n;
    let full = t.full();
    let tail = f.tail().ok_or_else(|| {
        Error::Contract("series evaluation needs a coefficient tail certificate".into())
    })?;
    let svd = nalgebra::linalg::SVD::new(full.clone(), false, false);
    let sigma_max = svd
        .singular_values
        .iter()
        .fold(0.0_f64, |acc, s| acc.max(*s));

    let polynomial = f.is_polynomial();
    if !polynomial && sigma_max * tail.ratio >= 1.0 {
        return Err(Error::Divergence {
            norm: sigma_max,
            ratio: tail.ratio,
        });
    }

    let term_budget = if polynomial {
        f.coeffs().len()
    } else {
        4 * dim
    };
    let mut sum = DMatrix::<Complex64>::zeros(dim, dim);
    let mut power = DMatrix::<Complex64>::identity(dim, dim);
    let mut quiet_streak = 0usize;
    let mut terms = 0usize;
    for k in 0..term_budget {
        let coeff = f.known_coeff(k).ok_or_else(|| {
            Error::Contract(format!(
                "series evaluation ran out of stored coefficients at term {k}; store at least {term_budget}"
            ))
        })?;
        let term_norm = coeff.norm() * power.norm();
        sum += power.map(|x| x * coeff);
        terms = k + 1;
        if !polynomial {
            let scale = sum.norm().max(1.0);
            if term_norm < 1e-14 * scale {
                quiet_streak += 1;
                if quiet_streak >= 8 {
                    break;
                }
            } else {
                quiet_streak = 0;
            }
        }
        if k + 1 < term_budget {
            power = &power * &full;
        }
    }
    if !polynomial && quiet_streak < 8 {
        return Err(Error::Contract(format!(
            "matrix series failed to stabilize within {term_budget} terms (operator norm {sigma_max:.3e}, tail ratio {:.3e})",
            tail.ratio
        )));
    }
    Ok((
        sum,
        SeriesOracleReport {
            terms,
            operator_norm: sigma_max,
            tail_ratio: tail.ratio,
        },
    ))
}
