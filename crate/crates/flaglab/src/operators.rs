//! Finite matrix models of multiplication and composition operators on
//! weighted Hardy spaces.
//!
//! All matrices act between *orthonormalized* bases: the basis vector at
//! index $k$ of $H(\alpha)$ is $z^k/\alpha(k)$, so adjoints are literal
//! conjugate transposes. A multiplication operator by an analytic symbol
//! $h$ from $H(\alpha)$ to $H(\beta)$ has entries
//! $\hat h(l-k)\,\beta(l)/\alpha(k)$ — lower triangular, which makes its
//! truncations compose exactly: the product of two truncations equals the
//! truncation of the product. The [`Exactness`] tag tracks whether a matrix
//! still enjoys that property; composition operators, adjoints, inverses and
//! corners do not, and the tag degrades accordingly.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::series::TaylorSeries;
use crate::weights::WeightSequence;
use crate::{Error, Result};

/// Relative singular-value threshold below which a matrix is treated as
/// numerically singular.
pub const SINGULARITY_THRESHOLD: f64 = 1e-10;

/// Whether a finite matrix composes exactly with other truncations.
///
/// `ExactCompression` holds for lower-triangular truncations of
/// lower-triangular operators: products never reach the dropped rows.
/// Anything that breaks the triangular structure degrades to `Approximate`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Exactness {
    #[serde(rename = "exact-compression")]
    ExactCompression,
    #[serde(rename = "approximate")]
    Approximate,
}

/// A finite matrix model of an operator `H(domain) -> H(codomain)` in
/// orthonormalized bases.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    entries: DMatrix<Complex64>,
    domain: WeightSequence,
    codomain: WeightSequence,
    exactness: Exactness,
}

impl OperatorMatrix {
    /// Wraps raw entries with their spaces and exactness tag.
    pub fn from_parts(
        entries: DMatrix<Complex64>,
        domain: WeightSequence,
        codomain: WeightSequence,
        exactness: Exactness,
    ) -> Self {
        OperatorMatrix {
            entries,
            domain,
            codomain,
            exactness,
        }
    }

    /// The identity on `H(weight)`.
    pub fn identity(n: usize, weight: WeightSequence) -> Self {
        OperatorMatrix {
            entries: DMatrix::identity(n, n),
            domain: weight.clone(),
            codomain: weight,
            exactness: Exactness::ExactCompression,
        }
    }

    /// The zero operator `H(domain) -> H(codomain)`.
    pub fn zeros(rows: usize, cols: usize, domain: WeightSequence, codomain: WeightSequence) -> Self {
        OperatorMatrix {
            entries: DMatrix::zeros(rows, cols),
            domain,
            codomain,
            exactness: Exactness::ExactCompression,
        }
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[(row, col)]
    }

    pub fn nrows(&self) -> usize {
        self.entries.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.entries.ncols()
    }

    pub fn domain(&self) -> &WeightSequence {
        &self.domain
    }

    pub fn codomain(&self) -> &WeightSequence {
        &self.codomain
    }

    pub fn exactness(&self) -> Exactness {
        self.exactness
    }

    /// Conjugate transpose. Swaps domain and codomain; the triangular
    /// structure flips, so the tag degrades to approximate.
    pub fn adjoint(&self) -> OperatorMatrix {
        OperatorMatrix {
            entries: self.entries.adjoint(),
            domain: self.codomain.clone(),
            codomain: self.domain.clone(),
            exactness: Exactness::Approximate,
        }
    }

    /// Operator composition `self ∘ rhs` (matrix product `self * rhs`).
    pub fn multiply(&self, rhs: &OperatorMatrix) -> Result<OperatorMatrix> {
        if self.ncols() != rhs.nrows() {
            return Err(Error::Contract(format!(
                "operator product dimension mismatch: {}x{} times {}x{}",
                self.nrows(),
                self.ncols(),
                rhs.nrows(),
                rhs.ncols()
            )));
        }
        if self.domain != rhs.codomain {
            return Err(Error::Contract(format!(
                "operator product space mismatch: left acts on H({}) but right lands in H({})",
                self.domain.describe(),
                rhs.codomain.describe()
            )));
        }
        let exactness = match (self.exactness, rhs.exactness) {
            (Exactness::ExactCompression, Exactness::ExactCompression) => {
                Exactness::ExactCompression
            }
            _ => Exactness::Approximate,
        };
        Ok(OperatorMatrix {
            entries: &self.entries * &rhs.entries,
            domain: rhs.domain.clone(),
            codomain: self.codomain.clone(),
            exactness,
        })
    }

    fn elementwise(&self, rhs: &OperatorMatrix, sign: f64, what: &str) -> Result<OperatorMatrix> {
        if self.nrows() != rhs.nrows() || self.ncols() != rhs.ncols() {
            return Err(Error::Contract(format!(
                "operator {what} dimension mismatch: {}x{} vs {}x{}",
                self.nrows(),
                self.ncols(),
                rhs.nrows(),
                rhs.ncols()
            )));
        }
        if self.domain != rhs.domain || self.codomain != rhs.codomain {
            return Err(Error::Contract(format!("operator {what} space mismatch")));
        }
        let exactness = match (self.exactness, rhs.exactness) {
            (Exactness::ExactCompression, Exactness::ExactCompression) => {
                Exactness::ExactCompression
            }
            _ => Exactness::Approximate,
        };
        Ok(OperatorMatrix {
            entries: &self.entries + &rhs.entries.map(|c| c * sign),
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
            exactness,
        })
    }

    pub fn add(&self, rhs: &OperatorMatrix) -> Result<OperatorMatrix> {
        self.elementwise(rhs, 1.0, "sum")
    }

    pub fn sub(&self, rhs: &OperatorMatrix) -> Result<OperatorMatrix> {
        self.elementwise(rhs, -1.0, "difference")
    }

    pub fn scale(&self, c: Complex64) -> OperatorMatrix {
        OperatorMatrix {
            entries: self.entries.map(|x| x * c),
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
            exactness: self.exactness,
        }
    }

    /// Inverse of a square matrix, guarded by a singular-value check:
    /// requires `sigma_min >= SINGULARITY_THRESHOLD * sigma_max`.
    pub fn inverse(&self) -> Result<OperatorMatrix> {
        if self.nrows() != self.ncols() {
            return Err(Error::Contract(format!(
                "inverse of a non-square {}x{} matrix",
                self.nrows(),
                self.ncols()
            )));
        }
        let (smallest, largest) = self.extreme_singular_values();
        if smallest < SINGULARITY_THRESHOLD * largest || largest == 0.0 {
            return Err(Error::SingularMatrix { smallest, largest });
        }
        let inv = self.entries.clone().try_inverse().ok_or(Error::SingularMatrix {
            smallest,
            largest,
        })?;
        Ok(OperatorMatrix {
            entries: inv,
            domain: self.codomain.clone(),
            codomain: self.domain.clone(),
            exactness: Exactness::Approximate,
        })
    }

    /// Principal `m x m` corner. Truncating below the build size loses the
    /// compression property, so the tag degrades.
    pub fn corner(&self, m: usize) -> Result<OperatorMatrix> {
        if m > self.nrows() || m > self.ncols() {
            return Err(Error::Contract(format!(
                "corner size {m} exceeds matrix dimensions {}x{}",
                self.nrows(),
                self.ncols()
            )));
        }
        Ok(OperatorMatrix {
            entries: self.entries.view((0, 0), (m, m)).into_owned(),
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
            exactness: Exactness::Approximate,
        })
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.norm()
    }

    /// Largest singular value.
    pub fn op_norm(&self) -> f64 {
        self.extreme_singular_values().1
    }

    /// `(sigma_min, sigma_max)` of the matrix.
    pub fn extreme_singular_values(&self) -> (f64, f64) {
        let svd = nalgebra::linalg::SVD::new(self.entries.clone(), false, false);
        let mut lo = f64::INFINITY;
        let mut hi = 0.0_f64;
        for s in svd.singular_values.iter() {
            lo = lo.min(*s);
            hi = hi.max(*s);
        }
        if !lo.is_finite() {
            lo = 0.0;
        }
        (lo, hi)
    }

    /// All singular values, descending.
    pub fn singular_values(&self) -> Vec<f64> {
        let svd = nalgebra::linalg::SVD::new(self.entries.clone(), false, false);
        let mut vals: Vec<f64> = svd.singular_values.iter().copied().collect();
        vals.sort_by(|a, b| b.partial_cmp(a).unwrap());
        vals
    }

    /// JSON form: dimensions, spaces, exactness, and entries as separate
    /// real/imaginary row-major arrays.
    pub fn to_json(&self) -> serde_json::Value {
        let real: Vec<Vec<f64>> = (0..self.nrows())
            .map(|l| (0..self.ncols()).map(|k| self.entries[(l, k)].re).collect())
            .collect();
        let imag: Vec<Vec<f64>> = (0..self.nrows())
            .map(|l| (0..self.ncols()).map(|k| self.entries[(l, k)].im).collect())
            .collect();
        serde_json::json!({
            "rows": self.nrows(),
            "cols": self.ncols(),
            "domain": self.domain.describe(),
            "codomain": self.codomain.describe(),
            "exactness": self.exactness,
            "real": real,
            "imag": imag,
        })
    }
}

/// Matrix of the multiplication operator `M_h : H(alpha) -> H(beta)`,
/// `f -> h f`, in orthonormalized bases: entry
/// `(l, k) = h_hat(l-k) * beta(l) / alpha(k)` for `l >= k`.
///
/// Every needed coefficient of `h` must be known exactly (stored, or past
/// the stored range of a polynomial), so the result is the exact compression
/// of the infinite lower-triangular matrix.
pub fn mult_matrix(
    alpha: &WeightSequence,
    beta: &WeightSequence,
    h: &TaylorSeries,
    n: usize,
) -> Result<OperatorMatrix> {
    if n == 0 {
        return Err(Error::Contract("empty matrix model requested".into()));
    }
    let coeff = |d: usize| {
        h.known_coeff(d).ok_or_else(|| {
            Error::Contract(format!(
                "multiplication symbol coefficient {d} is unknown; store at least {n} coefficients or pass a polynomial"
            ))
        })
    };
    let mut entries = DMatrix::zeros(n, n);
    for k in 0..n {
        let ak = alpha.value(k);
        for l in k..n {
            entries[(l, k)] = coeff(l - k)? * (beta.value(l) / ak);
        }
    }
    Ok(OperatorMatrix {
        entries,
        domain: alpha.clone(),
        codomain: beta.clone(),
        exactness: Exactness::ExactCompression,
    })
}

/// Matrix of the composition operator `C_phi : H(alpha) -> H(beta)`,
/// `f -> f ∘ phi`, in orthonormalized bases: entry
/// `(l, k) = [phi^k]_l * beta(l) / alpha(k)`.
///
/// Column `k` holds the exact Taylor coefficients of `phi^k` up to row
/// `n-1` (iterated truncated multiplication is exact there), but the
/// infinite matrix is not triangular, so the truncation is tagged
/// approximate: products of truncations differ from truncations of
/// products, with an error that fades into the top-left corner as `n`
/// grows.
pub fn comp_matrix(
    alpha: &WeightSequence,
    beta: &WeightSequence,
    phi: &TaylorSeries,
    n: usize,
) -> Result<OperatorMatrix> {
    if n == 0 {
        return Err(Error::Contract("empty matrix model requested".into()));
    }
    if phi.known_coeff(n.saturating_sub(1)).is_none() {
        return Err(Error::Contract(format!(
            "composition symbol needs {n} known coefficients, only {} stored",
            phi.stored_len()
        )));
    }
    let mut entries = DMatrix::zeros(n, n);
    // phi^0 = 1
    entries[(0, 0)] = Complex64::new(beta.value(0) / alpha.value(0), 0.0);
    let mut power = TaylorSeries::constant(Complex64::new(1.0, 0.0));
    for k in 1..n {
        // Stored coefficients of the truncated product are exact; the
        // iterated tail envelope degrades fast and is never consulted here,
        // so drop it instead of paying to compute garbage.
        power = power.mul(phi, n)?.without_tail();
        let ak = alpha.value(k);
        for l in 0..n {
            let c = power.known_coeff(l).unwrap_or_default();
            entries[(l, k)] = c * (beta.value(l) / ak);
        }
    }
    Ok(OperatorMatrix {
        entries,
        domain: alpha.clone(),
        codomain: beta.clone(),
        exactness: Exactness::Approximate,
    })
}

/// Matrix of the residue-class embedding `X_j : H(alpha~) -> H(alpha)`
/// determined by `z^k -> z^{j + k n}`, where `alpha~(k) = alpha(j + k n)`:
/// entry `(j + k n, k) = alpha(j + k n) / alpha(k)` and zeros elsewhere.
///
/// `rows` bounds the codomain truncation; the number of columns is the
/// number of class representatives below it.
pub fn xj_matrix(
    alpha: &WeightSequence,
    modulus: usize,
    residue: usize,
    rows: usize,
) -> Result<OperatorMatrix> {
    if modulus < 2 {
        return Err(Error::Contract(format!(
            "residue-class embedding needs modulus >= 2, got {modulus}"
        )));
    }
    if residue >= modulus {
        return Err(Error::Contract(format!(
            "residue {residue} out of range for modulus {modulus}"
        )));
    }
    if rows == 0 {
        return Err(Error::Contract("empty matrix model requested".into()));
    }
    let cols = if rows > residue {
        (rows - residue).div_ceil(modulus)
    } else {
        0
    };
    if cols == 0 {
        return Err(Error::Contract(format!(
            "no class representatives below truncation {rows} for residue {residue} mod {modulus}"
        )));
    }
    let mut entries = DMatrix::zeros(rows, cols);
    let mut table = Vec::with_capacity(cols);
    for k in 0..cols {
        let idx = residue + k * modulus;
        entries[(idx, k)] = Complex64::new(alpha.value(idx) / alpha.value(k), 0.0);
        table.push(alpha.value(idx));
    }
    let class_weight = WeightSequence::explicit(table, 1.0)?;
    Ok(OperatorMatrix {
        entries,
        domain: class_weight,
        codomain: alpha.clone(),
        exactness: Exactness::ExactCompression,
    })
}

/// Largest ratio `alpha(k+1)/alpha(k)` over the truncation — the operator
/// norm of the truncated forward shift on `H(alpha)`.
pub fn shift_norm_estimate(alpha: &WeightSequence, n: usize) -> f64 {
    (0..n.saturating_sub(1))
        .map(|k| alpha.value(k + 1) / alpha.value(k))
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::WeightSequence;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn constant_symbol_between_hardy_and_bergman_is_diagonal() {
        let one = TaylorSeries::polynomial_real(&[1.0]).unwrap();
        let m = mult_matrix(&WeightSequence::hardy(), &WeightSequence::bergman(), &one, 4).unwrap();
        // entry (k,k) = (k+1)^{-1/2}
        assert!((m.entry(0, 0) - c(1.0, 0.0)).norm() < 1e-15);
        assert!((m.entry(1, 1) - c(std::f64::consts::FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        assert!((m.entry(2, 2) - c(1.0 / 3f64.sqrt(), 0.0)).norm() < 1e-15);
        assert!(m.entry(1, 0).norm() == 0.0);
        assert_eq!(m.exactness(), Exactness::ExactCompression);
    }

    #[test]
    fn shift_on_bergman_has_expected_subdiagonal() {
        let z = TaylorSeries::polynomial_real(&[0.0, 1.0]).unwrap();
        let berg = WeightSequence::bergman();
        let m = mult_matrix(&berg, &berg, &z, 4).unwrap();
        // entry (k+1,k) = alpha(k+1)/alpha(k) = ((k+2)/(k+1))^{-1/2}
        assert!((m.entry(1, 0) - c(std::f64::consts::FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        assert!((m.entry(2, 1) - c((2.0f64 / 3.0).sqrt(), 0.0)).norm() < 1e-15);
        assert!(m.entry(0, 0).norm() == 0.0);
        let est = shift_norm_estimate(&berg, 4);
        assert!((est - m.op_norm()).abs() < 1e-12);
    }

    #[test]
    fn multiplication_truncations_compose_exactly() {
        let alpha = WeightSequence::dirichlet();
        let h1 = TaylorSeries::polynomial_real(&[1.0, 0.5, 0.25]).unwrap();
        let h2 = TaylorSeries::polynomial_real(&[2.0, -1.0]).unwrap();
        let n = 24;
        let m1 = mult_matrix(&alpha, &alpha, &h1, n).unwrap();
        let m2 = mult_matrix(&alpha, &alpha, &h2, n).unwrap();
        let prod_sym = h1.mul(&h2, n).unwrap();
        let m12 = mult_matrix(&alpha, &alpha, &prod_sym, n).unwrap();
        let via_matrices = m1.multiply(&m2).unwrap();
        let diff = via_matrices.sub(&m12).unwrap().frobenius_norm();
        assert!(diff < 1e-12 * m12.frobenius_norm().max(1.0), "diff {diff}");
        assert_eq!(via_matrices.exactness(), Exactness::ExactCompression);
    }

    #[test]
    fn mixed_space_multiplication_intertwines_shifts_exactly() {
        // M_h M_z = M_z M_h as operators H(alpha) -> H(beta); lower
        // triangular truncations keep the identity exactly.
        let alpha = WeightSequence::hardy();
        let beta = WeightSequence::bergman();
        let z = TaylorSeries::identity();
        let h = TaylorSeries::polynomial_real(&[1.0, 0.5]).unwrap();
        let n = 32;
        let mh = mult_matrix(&alpha, &beta, &h, n).unwrap();
        let mz_alpha = mult_matrix(&alpha, &alpha, &z, n).unwrap();
        let mz_beta = mult_matrix(&beta, &beta, &z, n).unwrap();
        let lhs = mh.multiply(&mz_alpha).unwrap();
        let rhs = mz_beta.multiply(&mh).unwrap();
        let diff = lhs.sub(&rhs).unwrap().frobenius_norm();
        assert!(diff < 1e-13 * lhs.frobenius_norm().max(1.0), "diff {diff}");
    }

    #[test]
    fn rotation_composition_is_diagonal() {
        let theta = 0.8_f64;
        let phi = TaylorSeries::polynomial(vec![c(0.0, 0.0), Complex64::from_polar(1.0, theta)])
            .unwrap();
        let hardy = WeightSequence::hardy();
        let m = comp_matrix(&hardy, &hardy, &phi, 8).unwrap();
        for k in 0..8 {
            for l in 0..8 {
                let expect = if l == k {
                    Complex64::from_polar(1.0, theta * k as f64)
                } else {
                    c(0.0, 0.0)
                };
                assert!((m.entry(l, k) - expect).norm() < 1e-13, "entry ({l},{k})");
            }
        }
    }

    #[test]
    fn squaring_composition_places_monomials() {
        let phi = TaylorSeries::polynomial_real(&[0.0, 0.0, 1.0]).unwrap();
        let hardy = WeightSequence::hardy();
        let m = comp_matrix(&hardy, &hardy, &phi, 9).unwrap();
        for k in 0..9 {
            for l in 0..9 {
                let expect = if l == 2 * k { 1.0 } else { 0.0 };
                assert!((m.entry(l, k) - c(expect, 0.0)).norm() < 1e-14, "entry ({l},{k})");
            }
        }
    }

    #[test]
    fn composition_products_stabilize_in_the_corner() {
        // The product of two composition truncations genuinely depends on
        // the build size: entry (l,k) of C_phi C_phi sums [phi^m]_l [phi^k]_m
        // over all m, and truncation at n drops the m >= n terms. For fixed
        // l those terms behave like m^l |phi(0)|^m — eventually geometric,
        // but only once m clears the m^l hump — so keep the corner small
        // relative to the build sizes. Compare corner(8) at build sizes 32
        // and 48 against a size-96 reference.
        let phi = crate::series::MoebiusMap::new(0.0, c(0.4, 0.0)).unwrap();
        let hardy = WeightSequence::hardy();
        let corner_of_product = |n: usize| -> DMatrix<Complex64> {
            let cm = comp_matrix(&hardy, &hardy, &phi.series(n.max(2)).unwrap(), n).unwrap();
            let prod = cm.multiply(&cm).unwrap();
            prod.entries().view((0, 0), (8, 8)).into_owned()
        };
        let reference = corner_of_product(96);
        let d32 = (corner_of_product(32) - &reference).norm();
        let d48 = (corner_of_product(48) - &reference).norm();
        assert!(d32 > 1e-12, "truncation effect unexpectedly absent: {d32:.3e}");
        assert!(
            d48 <= 0.01 * d32,
            "corner error did not decay: d32 = {d32:.3e}, d48 = {d48:.3e}"
        );
    }

    #[test]
    fn inverse_multiplies_back_to_identity() {
        let alpha = WeightSequence::hardy();
        let h = TaylorSeries::polynomial_real(&[2.0, 1.0]).unwrap();
        let m = mult_matrix(&alpha, &alpha, &h, 32).unwrap();
        let inv = m.inverse().unwrap();
        let prod = m.multiply(&inv).unwrap();
        let eye = OperatorMatrix::identity(32, alpha);
        let diff = prod.sub(&eye).unwrap().frobenius_norm();
        assert!(diff < 1e-12, "diff {diff}");
        assert_eq!(inv.exactness(), Exactness::Approximate);
    }

    #[test]
    fn singular_matrix_is_refused() {
        let alpha = WeightSequence::hardy();
        let h = TaylorSeries::polynomial_real(&[0.0, 1.0]).unwrap();
        let m = mult_matrix(&alpha, &alpha, &h, 8).unwrap();
        match m.inverse() {
            Err(Error::SingularMatrix { .. }) => {}
            other => panic!("expected singularity error, got {other:?}"),
        }
    }

    #[test]
    fn adjoint_conjugates_and_transposes() {
        let alpha = WeightSequence::hardy();
        let h = TaylorSeries::polynomial(vec![c(1.0, 2.0), c(0.0, 1.0)]).unwrap();
        let m = mult_matrix(&alpha, &alpha, &h, 4).unwrap();
        let a = m.adjoint();
        for l in 0..4 {
            for k in 0..4 {
                assert_eq!(a.entry(l, k), m.entry(k, l).conj());
            }
        }
        assert_eq!(a.exactness(), Exactness::Approximate);
    }

    #[test]
    fn residue_class_embedding_on_hardy_is_isometric() {
        let m = xj_matrix(&WeightSequence::hardy(), 2, 1, 8).unwrap();
        assert_eq!(m.nrows(), 8);
        assert_eq!(m.ncols(), 4); // rows 1, 3, 5, 7
        for k in 0..4 {
            assert!((m.entry(1 + 2 * k, k) - c(1.0, 0.0)).norm() < 1e-15);
        }
        let gram = m.adjoint().multiply(&m).unwrap();
        let eye = DMatrix::<Complex64>::identity(4, 4);
        assert!((gram.entries() - eye).norm() < 1e-14);
    }

    #[test]
    fn op_norm_of_hardy_shift_truncation_is_one() {
        let hardy = WeightSequence::hardy();
        let z = TaylorSeries::identity();
        let m = mult_matrix(&hardy, &hardy, &z, 16).unwrap();
        assert!((m.op_norm() - 1.0).abs() < 1e-12);
    }
}
