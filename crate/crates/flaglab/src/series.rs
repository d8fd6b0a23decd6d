//! Truncated Taylor series with certified tail bounds, and the closed-form
//! symbol families (Möbius maps, Blaschke products) used throughout.
//!
//! A [`TaylorSeries`] stores the coefficients $\hat c(0), \dots, \hat c(N)$
//! of an analytic function and, optionally, a [`TailBound`] `(M, r)`
//! certifying $|\hat c(k)| \le M r^k$ for every $k > N$. The arithmetic here
//! propagates tails *soundly*: an operation either produces a bound that
//! provably holds for the true result, or it reports `None`. Propagated
//! bounds can be loose — a polynomial times a decaying tail genuinely costs
//! a factor $r^{-\deg}$ in the constant — but they are never wrong.
//!
//! Stored coefficients produced by the arithmetic are always the *exact*
//! coefficients of the mathematical result (up to round-off); operations
//! that would need unknown coefficients of an operand fail instead of
//! silently truncating.

use num_complex::Complex64;

use crate::{Error, Result};

/// Largest Möbius parameter modulus accepted by default. Keeping symbols
/// away from the boundary circle keeps truncation tails summable at usable
/// rates.
pub const DEFAULT_MOEBIUS_PARAM_CAP: f64 = 0.99;

/// Geometric envelope for the unstored coefficients of a series:
/// `|coeff(k)| <= bound * ratio^k` for every `k` past the stored range.
/// `(0, 0)` means the stored coefficients are the whole function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailBound {
    pub bound: f64,
    pub ratio: f64,
}

impl TailBound {
    pub const ZERO: TailBound = TailBound {
        bound: 0.0,
        ratio: 0.0,
    };

    fn normalized(self) -> TailBound {
        if self.bound == 0.0 || self.ratio == 0.0 {
            TailBound::ZERO
        } else {
            self
        }
    }
}

/// `sup_{k >= 0} (k+1) x^k` for `0 <= x < 1`, used to trade a linear factor
/// in a tail for a slightly larger ratio. `(k+1) x^k` is unimodal in `k`,
/// so the integer supremum sits at a neighbor of the continuous argmax
/// `-1/ln(x) - 1`.
fn sup_linear_times_geometric(x: f64) -> f64 {
    debug_assert!((0.0..1.0).contains(&x));
    if x == 0.0 {
        return 1.0;
    }
    let kstar = -1.0 / x.ln() - 1.0;
    let mut best = 1.0_f64;
    for k in [kstar.floor(), kstar.ceil()] {
        if k.is_finite() && k >= 0.0 {
            best = best.max((k + 1.0) * x.powf(k));
        }
    }
    best
}

/// A truncated Taylor series: stored coefficients plus an optional certified
/// bound on everything beyond them.
#[derive(Debug, Clone, PartialEq)]
pub struct TaylorSeries {
    coeffs: Vec<Complex64>,
    tail: Option<TailBound>,
}

impl TaylorSeries {
    /// Builds a series from stored coefficients and an optional tail bound.
    ///
    /// When a positive tail `(M, r)` is supplied, the last stored
    /// coefficient is spot-checked against `M * r^N` — an envelope that
    /// fails already at the edge of the stored range is almost certainly
    /// wrong about the rest.
    pub fn new(coeffs: Vec<Complex64>, tail: Option<TailBound>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidSymbol("series needs at least one coefficient".into()));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidSymbol("non-finite series coefficient".into()));
        }
        let tail = match tail {
            None => None,
            Some(t) => {
                if !t.bound.is_finite() || !t.ratio.is_finite() || t.bound < 0.0 || t.ratio < 0.0 {
                    return Err(Error::InvalidSymbol(format!(
                        "tail bound must be finite and non-negative, got ({}, {})",
                        t.bound, t.ratio
                    )));
                }
                let t = t.normalized();
                if t.bound > 0.0 && t.ratio > 0.0 {
                    let n = coeffs.len() - 1;
                    let allowed = t.bound * t.ratio.powi(n as i32);
                    let last = coeffs[n].norm();
                    if last > allowed * (1.0 + 1e-9) + f64::MIN_POSITIVE {
                        return Err(Error::InvalidSymbol(format!(
                            "stored coefficient {last:.6e} at index {n} violates tail envelope {allowed:.6e}"
                        )));
                    }
                }
                Some(t)
            }
        };
        Ok(TaylorSeries { coeffs, tail })
    }

    /// A polynomial: the stored coefficients are all there is.
    pub fn polynomial(coeffs: Vec<Complex64>) -> Result<Self> {
        Self::new(coeffs, Some(TailBound::ZERO))
    }

    /// Real-coefficient polynomial convenience.
    pub fn polynomial_real(coeffs: &[f64]) -> Result<Self> {
        Self::polynomial(coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// The constant series `c`.
    pub fn constant(c: Complex64) -> Self {
        Self::polynomial(vec![c]).expect("constant series is always valid")
    }

    /// The identity series `z`.
    pub fn identity() -> Self {
        Self::polynomial(vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)])
            .expect("identity series is always valid")
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Number of stored coefficients.
    pub fn stored_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn tail(&self) -> Option<TailBound> {
        self.tail
    }

    /// True iff the stored coefficients describe the function completely.
    pub fn is_polynomial(&self) -> bool {
        matches!(self.tail, Some(t) if t.bound == 0.0)
    }

    /// The coefficient at `k` if it is known exactly: stored, or past the
    /// stored range of a polynomial (zero).
    pub fn known_coeff(&self, k: usize) -> Option<Complex64> {
        if k < self.coeffs.len() {
            Some(self.coeffs[k])
        } else if self.is_polynomial() {
            Some(Complex64::new(0.0, 0.0))
        } else {
            None
        }
    }

    /// Largest coefficient modulus among those stored.
    pub fn max_coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Evaluates the stored part at `z` by Horner's rule.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// The same stored coefficients with no claim about the rest. Useful in
    /// iterations where propagated tail bounds degrade into uselessly loose
    /// envelopes that are expensive to compute.
    pub fn without_tail(&self) -> TaylorSeries {
        TaylorSeries {
            coeffs: self.coeffs.clone(),
            tail: None,
        }
    }

    /// Coefficient-wise conjugation `f~(z) = conj(f(conj(z)))`.
    pub fn tilde(&self) -> TaylorSeries {
        TaylorSeries {
            coeffs: self.coeffs.iter().map(|c| c.conj()).collect(),
            tail: self.tail,
        }
    }

    /// A geometric envelope valid for every `k >= cut`, covering both the
    /// stored coefficients at or past `cut` and the tail region. `None` when
    /// the series has no tail certificate.
    fn bound_beyond(&self, cut: usize) -> Option<TailBound> {
        let t = self.tail?;
        let stored = self.coeffs.len();
        if t.bound == 0.0 {
            if (cut..stored).all(|k| self.coeffs[k].norm() == 0.0) {
                return Some(TailBound::ZERO);
            }
            // Finitely many known coefficients past the cut: any positive
            // ratio works, at the price of a large constant.
            let r = 0.5_f64;
            let mut m = 0.0_f64;
            for k in cut..stored {
                m = m.max(self.coeffs[k].norm() / r.powi(k as i32));
            }
            return Some(TailBound { bound: m, ratio: r }.normalized());
        }
        let r = t.ratio;
        let mut m = t.bound;
        for k in cut..stored {
            m = m.max(self.coeffs[k].norm() / r.powi(k as i32));
        }
        Some(TailBound { bound: m, ratio: r })
    }

    fn require_known_up_to(&self, len: usize, what: &str) -> Result<()> {
        if self.coeffs.len() >= len || self.is_polynomial() {
            Ok(())
        } else {
            Err(Error::Contract(format!(
                "{what}: need coefficients up to index {}, but only {} stored and the rest are unknown",
                len - 1,
                self.coeffs.len()
            )))
        }
    }

    /// Sum, stored to `out_len` coefficients.
    pub fn add(&self, other: &TaylorSeries, out_len: usize) -> Result<TaylorSeries> {
        self.require_known_up_to(out_len, "series addition")?;
        other.require_known_up_to(out_len, "series addition")?;
        let coeffs: Vec<Complex64> = (0..out_len)
            .map(|k| {
                self.known_coeff(k).unwrap_or_default() + other.known_coeff(k).unwrap_or_default()
            })
            .collect();
        let tail = match (self.bound_beyond(out_len), other.bound_beyond(out_len)) {
            (Some(a), Some(b)) => Some(
                TailBound {
                    bound: a.bound + b.bound,
                    ratio: a.ratio.max(b.ratio),
                }
                .normalized(),
            ),
            _ => None,
        };
        TaylorSeries::new(coeffs, tail)
    }

    /// Difference, stored to `out_len` coefficients.
    pub fn sub(&self, other: &TaylorSeries, out_len: usize) -> Result<TaylorSeries> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)), out_len)
    }

    /// Scalar multiple (same stored length and proportional tail).
    pub fn scale(&self, c: Complex64) -> TaylorSeries {
        TaylorSeries {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
            tail: self.tail.map(|t| {
                TailBound {
                    bound: t.bound * c.norm(),
                    ratio: t.ratio,
                }
                .normalized()
            }),
        }
    }

    /// Product, stored to `out_len` coefficients.
    ///
    /// The stored output coefficients are the exact convolution of the true
    /// coefficient sequences. The output tail splits the true product into
    /// stored-by-stored, stored-by-tail and tail-by-tail parts and bounds
    /// each by a geometric envelope.
    pub fn mul(&self, other: &TaylorSeries, out_len: usize) -> Result<TaylorSeries> {
        self.require_known_up_to(out_len, "series multiplication")?;
        other.require_known_up_to(out_len, "series multiplication")?;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); out_len];
        for (k, c) in coeffs.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..=k {
                acc += self.known_coeff(i).unwrap_or_default()
                    * other.known_coeff(k - i).unwrap_or_default();
            }
            *c = acc;
        }
        let tail = self.mul_tail(other, out_len);
        TaylorSeries::new(coeffs, tail)
    }

    fn mul_tail(&self, other: &TaylorSeries, out_len: usize) -> Option<TailBound> {
        let tf = self.tail?.normalized();
        let tg = other.tail?.normalized();
        let nf = self.coeffs.len();
        let ng = other.coeffs.len();

        // Exact coefficients of |f|*|g| over the stored-by-stored block that
        // truncation drops; both polynomial case may end here.
        let full_deg = nf + ng - 2;
        let mut dropped_abs: Vec<f64> = Vec::new();
        if out_len <= full_deg {
            dropped_abs = vec![0.0; full_deg + 1 - out_len];
            for i in 0..nf {
                for j in 0..ng {
                    let k = i + j;
                    if k >= out_len {
                        dropped_abs[k - out_len] += self.coeffs[i].norm() * other.coeffs[j].norm();
                    }
                }
            }
        }

        if tf.bound == 0.0 && tg.bound == 0.0 {
            if dropped_abs.iter().all(|&v| v == 0.0) {
                return Some(TailBound::ZERO);
            }
            let r = 0.5_f64;
            let mut m = 0.0_f64;
            for (off, v) in dropped_abs.iter().enumerate() {
                m = m.max(v / r.powi((out_len + off) as i32));
            }
            return Some(TailBound { bound: m, ratio: r });
        }

        let r_star = tf.ratio.max(tg.ratio);
        if r_star >= 1.0 {
            return None;
        }
        let both_positive = tf.bound > 0.0 && tg.bound > 0.0;
        let r_out = if both_positive {
            (1.0 + r_star) / 2.0
        } else {
            r_star
        };

        // Stored-by-stored terms past the truncation: finitely many exact
        // values, enveloped by (max_j |d_j| r^{-j}) r^k.
        let mut m_stored_stored = 0.0_f64;
        for (off, v) in dropped_abs.iter().enumerate() {
            let k = out_len + off;
            m_stored_stored = m_stored_stored.max(v / r_out.powi(k as i32));
        }

        // stored-f by tail-g
        let m_f_tail_g = if tg.bound > 0.0 {
            let s: f64 = self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| c.norm() / r_out.powi(i as i32))
                .sum();
            tg.bound * s
        } else {
            0.0
        };
        // tail-f by stored-g
        let m_tail_f_g = if tf.bound > 0.0 {
            let s: f64 = other
                .coeffs
                .iter()
                .enumerate()
                .map(|(j, c)| c.norm() / r_out.powi(j as i32))
                .sum();
            tf.bound * s
        } else {
            0.0
        };
        // tail-f by tail-g: at most (k+1) M_f M_g r*^k
        let m_tails = if both_positive {
            tf.bound * tg.bound * sup_linear_times_geometric(r_star / r_out)
        } else {
            0.0
        };

        let m = m_stored_stored + m_f_tail_g + m_tail_f_g + m_tails;
        if !m.is_finite() {
            return None;
        }
        Some(TailBound { bound: m, ratio: r_out }.normalized())
    }

    /// Termwise derivative, stored to `out_len` coefficients.
    pub fn derivative(&self, out_len: usize) -> Result<TaylorSeries> {
        self.require_known_up_to(out_len + 1, "series derivative")?;
        let coeffs: Vec<Complex64> = (0..out_len)
            .map(|k| self.known_coeff(k + 1).unwrap_or_default() * (k + 1) as f64)
            .collect();
        let tail = match self.bound_beyond(out_len + 1) {
            None => None,
            Some(t) if t.bound == 0.0 => Some(TailBound::ZERO),
            Some(t) => {
                if t.ratio >= 1.0 {
                    None
                } else {
                    // |(k+1) c_{k+1}| <= M r (k+1) r^k; trade the linear
                    // factor for a larger ratio.
                    let r_out = (1.0 + t.ratio) / 2.0;
                    let m = t.bound * t.ratio * sup_linear_times_geometric(t.ratio / r_out);
                    Some(TailBound { bound: m, ratio: r_out }.normalized())
                }
            }
        };
        TaylorSeries::new(coeffs, tail)
    }

    /// Multiplicative inverse `1/f`, stored to `out_len` coefficients.
    ///
    /// Requires `f(0) != 0`. The output tail is exact when `f` is an affine
    /// polynomial `a + b z` (geometric inverse); otherwise no tail is
    /// certified.
    pub fn reciprocal(&self, out_len: usize) -> Result<TaylorSeries> {
        self.require_known_up_to(out_len, "series reciprocal")?;
        let a0 = self.coeffs[0];
        if a0.norm() == 0.0 {
            return Err(Error::SingularSymbol(
                "reciprocal of a series vanishing at the origin".into(),
            ));
        }
        let inv0 = Complex64::new(1.0, 0.0) / a0;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); out_len];
        coeffs[0] = inv0;
        for k in 1..out_len {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 1..=k {
                acc += self.known_coeff(j).unwrap_or_default() * coeffs[k - j];
            }
            coeffs[k] = -inv0 * acc;
        }
        let affine = self.is_polynomial()
            && self.coeffs.iter().skip(2).all(|c| c.norm() == 0.0);
        let tail = if affine {
            let b = self.known_coeff(1).unwrap_or_default();
            Some(
                TailBound {
                    bound: 1.0 / a0.norm(),
                    ratio: (b / a0).norm(),
                }
                .normalized(),
            )
        } else {
            None
        };
        TaylorSeries::new(coeffs, tail)
    }

    /// Composition `self(other(z))`, stored to `out_len` coefficients, by
    /// Horner's rule over the stored outer coefficients.
    ///
    /// Exactness demands that dropping the outer tail cannot disturb the
    /// stored output coefficients, so the outer series must be a
    /// polynomial — unless the inner series vanishes at the origin, in which
    /// case outer coefficients past `out_len` cannot reach the stored range
    /// anyway. The inner series must carry a tail certificate with ratio
    /// `< 1` (it maps into a disk where the outer function converges).
    pub fn compose(&self, inner: &TaylorSeries, out_len: usize) -> Result<TaylorSeries> {
        let inner_tail = inner.tail.ok_or_else(|| {
            Error::Contract("series composition: inner series carries no tail certificate".into())
        })?;
        if inner_tail.ratio >= 1.0 {
            return Err(Error::Contract(format!(
                "series composition: inner tail ratio {} is not < 1",
                inner_tail.ratio
            )));
        }
        inner.require_known_up_to(out_len, "series composition")?;
        let outer_is_poly = self.is_polynomial();
        let inner_fixes_origin = inner.coeffs[0].norm() == 0.0;
        if !outer_is_poly {
            if !inner_fixes_origin {
                return Err(Error::Contract(
                    "series composition: outer series has unknown or nonzero tail and the inner series moves the origin"
                        .into(),
                ));
            }
            self.require_known_up_to(out_len, "series composition")?;
        }
        let outer_terms = if outer_is_poly {
            self.coeffs.len()
        } else {
            self.coeffs.len().min(out_len)
        };
        let mut acc = TaylorSeries::constant(self.coeffs[outer_terms - 1]);
        for i in (0..outer_terms - 1).rev() {
            acc = acc.mul(inner, out_len)?;
            acc = acc.add(&TaylorSeries::constant(self.coeffs[i]), out_len)?;
        }
        if !outer_is_poly {
            // The dropped outer terms would perturb only unstored output
            // coefficients, but we do not certify a bound for them.
            acc = TaylorSeries::new(acc.coeffs, None)?;
        }
        Ok(acc)
    }
}

/// A disk automorphism `phi(z) = e^{i theta} (z - a) / (1 - conj(a) z)`
/// with `|a|` bounded away from the unit circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoebiusMap {
    theta: f64,
    a: Complex64,
}

impl MoebiusMap {
    pub fn new(theta: f64, a: Complex64) -> Result<Self> {
        Self::with_cap(theta, a, DEFAULT_MOEBIUS_PARAM_CAP)
    }

    /// Builds the map with an explicit modulus cap on `a`.
    pub fn with_cap(theta: f64, a: Complex64, cap: f64) -> Result<Self> {
        if !theta.is_finite() || !a.re.is_finite() || !a.im.is_finite() {
            return Err(Error::InvalidSymbol("non-finite Moebius parameter".into()));
        }
        if !(0.0..1.0).contains(&cap) {
            return Err(Error::InvalidSymbol(format!(
                "Moebius parameter cap must lie in [0, 1), got {cap}"
            )));
        }
        if a.norm() > cap {
            return Err(Error::InvalidSymbol(format!(
                "Moebius parameter modulus {} exceeds cap {cap}",
                a.norm()
            )));
        }
        Ok(MoebiusMap { theta, a })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn a(&self) -> Complex64 {
        self.a
    }

    fn phase(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.theta)
    }

    /// Evaluates the map at `z`.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.phase() * (z - self.a) / (Complex64::new(1.0, 0.0) - self.a.conj() * z)
    }

    /// Evaluates the derivative `e^{i theta} (1 - |a|^2) / (1 - conj(a) z)^2`.
    pub fn eval_derivative(&self, z: Complex64) -> Complex64 {
        let d = Complex64::new(1.0, 0.0) - self.a.conj() * z;
        self.phase() * (1.0 - self.a.norm_sqr()) / (d * d)
    }

    /// Taylor coefficients with their exact geometric tail:
    /// `c_0 = -e^{i theta} a`, `c_k = e^{i theta} conj(a)^{k-1} (1 - |a|^2)`,
    /// so `|c_k| = [(1-|a|^2)/|a|] |a|^k` exactly for `k >= 1`.
    pub fn series(&self, stored_len: usize) -> Result<TaylorSeries> {
        if stored_len < 2 {
            return Err(Error::Contract(
                "Moebius series needs at least two stored coefficients".into(),
            ));
        }
        let phase = self.phase();
        let abar = self.a.conj();
        let one_minus = 1.0 - self.a.norm_sqr();
        let mut coeffs = Vec::with_capacity(stored_len);
        coeffs.push(-phase * self.a);
        let mut pw = Complex64::new(1.0, 0.0); // conj(a)^{k-1}
        for _k in 1..stored_len {
            coeffs.push(phase * pw * one_minus);
            pw *= abar;
        }
        let r = self.a.norm();
        let tail = if r == 0.0 {
            TailBound::ZERO
        } else {
            TailBound {
                bound: one_minus / r,
                ratio: r,
            }
        };
        TaylorSeries::new(coeffs, Some(tail))
    }

    /// Taylor coefficients of the derivative,
    /// `d_k = e^{i theta} (1 - |a|^2)(k+1) conj(a)^k`. The linear factor
    /// rules out a geometric envelope at ratio `|a|`; the certified tail
    /// uses ratio `sqrt(|a|)` with the matching worst-case constant.
    pub fn derivative_series(&self, stored_len: usize) -> Result<TaylorSeries> {
        if stored_len == 0 {
            return Err(Error::Contract("empty derivative series requested".into()));
        }
        let phase = self.phase();
        let abar = self.a.conj();
        let one_minus = 1.0 - self.a.norm_sqr();
        let mut coeffs = Vec::with_capacity(stored_len);
        let mut pw = Complex64::new(1.0, 0.0);
        for k in 0..stored_len {
            coeffs.push(phase * one_minus * (k + 1) as f64 * pw);
            pw *= abar;
        }
        let r = self.a.norm();
        let tail = if r == 0.0 {
            TailBound::ZERO
        } else {
            let r_out = r.sqrt();
            let m = one_minus * sup_linear_times_geometric(r / r_out);
            TailBound {
                bound: m,
                ratio: r_out,
            }
        };
        TaylorSeries::new(coeffs, Some(tail))
    }

    /// The inverse automorphism: `phi^{-1} = e^{-i theta} (w - a')/(1 - conj(a') w)`
    /// with `a' = -e^{i theta} a`.
    pub fn inverse(&self) -> MoebiusMap {
        MoebiusMap {
            theta: (-self.theta).rem_euclid(2.0 * std::f64::consts::PI),
            a: -self.phase() * self.a,
        }
    }

    /// The exact quadratic polynomial `phi' ∘ phi^{-1}`.
    ///
    /// By the chain rule this is `1 / (phi^{-1})'`, and the reciprocal of a
    /// Möbius derivative is the polynomial
    /// `e^{-i theta'} (1 - conj(a') w)^2 / (1 - |a'|^2)` for the inverse
    /// map's parameters `(theta', a')`.
    pub fn derivative_after_inverse(&self) -> TaylorSeries {
        let psi = self.inverse();
        let scale = Complex64::from_polar(1.0, -psi.theta) / (1.0 - psi.a.norm_sqr());
        let abar = psi.a.conj();
        TaylorSeries::polynomial(vec![
            scale,
            scale * abar * -2.0,
            scale * abar * abar,
        ])
        .expect("quadratic polynomial is always valid")
    }

    /// Coefficient-conjugate map: the Möbius map whose series is the
    /// coefficient-wise conjugate of this one's
    /// (`theta -> -theta`, `a -> conj(a)`).
    pub fn tilde(&self) -> MoebiusMap {
        MoebiusMap {
            theta: -self.theta,
            a: self.a.conj(),
        }
    }
}

/// A finite Blaschke product
/// `B(z) = e^{i theta} prod_i (z - a_i)/(1 - conj(a_i) z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlaschkeProduct {
    zeros: Vec<Complex64>,
    theta: f64,
}

impl BlaschkeProduct {
    pub fn new(theta: f64, zeros: Vec<Complex64>) -> Result<Self> {
        if zeros.is_empty() {
            return Err(Error::InvalidSymbol(
                "Blaschke product needs at least one zero".into(),
            ));
        }
        for z in &zeros {
            MoebiusMap::new(0.0, *z)?;
        }
        if !theta.is_finite() {
            return Err(Error::InvalidSymbol("non-finite Blaschke phase".into()));
        }
        Ok(BlaschkeProduct { zeros, theta })
    }

    pub fn zeros(&self) -> &[Complex64] {
        &self.zeros
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::from_polar(1.0, self.theta);
        for a in &self.zeros {
            acc *= (z - a) / (Complex64::new(1.0, 0.0) - a.conj() * z);
        }
        acc
    }

    /// Taylor series of the product: successive exact multiplications of
    /// the factor series. Stored coefficients are exact; the tail is the
    /// sound product envelope.
    pub fn series(&self, stored_len: usize) -> Result<TaylorSeries> {
        let mut acc = MoebiusMap::new(0.0, self.zeros[0])?
            .series(stored_len.max(2))?
            .scale(Complex64::from_polar(1.0, self.theta));
        for a in &self.zeros[1..] {
            let factor = MoebiusMap::new(0.0, *a)?.series(stored_len.max(2))?;
            acc = acc.mul(&factor, stored_len.max(2))?;
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn geometric_reciprocal_is_exact() {
        // 1/(1 - z/2) = sum 2^{-k} z^k with exact tail (1, 1/2).
        let denom = TaylorSeries::polynomial_real(&[1.0, -0.5]).unwrap();
        let inv = denom.reciprocal(20).unwrap();
        for k in 0..20 {
            let expect = 0.5f64.powi(k as i32);
            assert!(
                (inv.coeffs()[k] - c(expect, 0.0)).norm() < 1e-15,
                "coefficient {k}"
            );
        }
        let t = inv.tail().unwrap();
        assert!((t.bound - 1.0).abs() < 1e-15);
        assert!((t.ratio - 0.5).abs() < 1e-15);
    }

    #[test]
    fn reciprocal_roundtrips_against_multiplication() {
        let f = TaylorSeries::polynomial_real(&[2.0, 1.0, 0.25]).unwrap();
        let inv = f.reciprocal(32).unwrap();
        let prod = f.mul(&inv, 32).unwrap();
        assert!((prod.coeffs()[0] - c(1.0, 0.0)).norm() < 1e-14);
        for k in 1..32 {
            assert!(prod.coeffs()[k].norm() < 1e-13, "coefficient {k} not cancelled");
        }
    }

    #[test]
    fn moebius_series_matches_closed_form() {
        // theta = 0, a = 1/2: c_0 = -1/2, c_k = (3/4) (1/2)^{k-1}.
        let phi = MoebiusMap::new(0.0, c(0.5, 0.0)).unwrap();
        let s = phi.series(8).unwrap();
        let expected = [-0.5, 0.75, 0.375, 0.1875];
        for (k, e) in expected.iter().enumerate() {
            assert!(
                (s.coeffs()[k] - c(*e, 0.0)).norm() < 1e-15,
                "coefficient {k}: {} vs {e}",
                s.coeffs()[k]
            );
        }
        let t = s.tail().unwrap();
        assert!((t.bound - 1.5).abs() < 1e-15); // (1 - 1/4)/(1/2)
        assert!((t.ratio - 0.5).abs() < 1e-15);
    }

    #[test]
    fn moebius_derivative_series_matches_closed_form() {
        let phi = MoebiusMap::new(0.0, c(0.5, 0.0)).unwrap();
        let d = phi.derivative_series(8).unwrap();
        let expected = [0.75, 0.75, 0.5625];
        for (k, e) in expected.iter().enumerate() {
            assert!(
                (d.coeffs()[k] - c(*e, 0.0)).norm() < 1e-15,
                "coefficient {k}"
            );
        }
        // Derivative of the series must match termwise differentiation.
        let s = phi.series(12).unwrap();
        let ds = s.derivative(8).unwrap();
        for k in 0..8 {
            assert!((ds.coeffs()[k] - d.coeffs()[k]).norm() < 1e-14, "coefficient {k}");
        }
    }

    #[test]
    fn moebius_inverse_undoes_the_map_on_a_grid() {
        let phi = MoebiusMap::new(1.1, c(0.4, -0.25)).unwrap();
        let psi = phi.inverse();
        let mut worst = 0.0_f64;
        for i in 0..40 {
            for j in 0..25 {
                let r = 0.9 * (i as f64 + 0.5) / 40.0;
                let t = 2.0 * std::f64::consts::PI * (j as f64) / 25.0;
                let z = Complex64::from_polar(r, t);
                worst = worst.max((psi.eval(phi.eval(z)) - z).norm());
            }
        }
        assert!(worst < 1e-12, "round trip error {worst}");
    }

    #[test]
    fn derivative_after_inverse_matches_pointwise_composition() {
        let phi = MoebiusMap::new(0.7, c(0.3, 0.2)).unwrap();
        let poly = phi.derivative_after_inverse();
        let psi = phi.inverse();
        for j in 0..24 {
            let w = Complex64::from_polar(0.6, 2.0 * std::f64::consts::PI * j as f64 / 24.0);
            let direct = phi.eval_derivative(psi.eval(w));
            let via_poly = poly.eval(w);
            assert!(
                (direct - via_poly).norm() < 1e-13,
                "mismatch at sample {j}: {direct} vs {via_poly}"
            );
        }
    }

    #[test]
    fn blaschke_series_agrees_with_scaled_dft() {
        // Sample B on a circle of radius 0.9 at 64 roots of unity; the
        // inverse DFT recovers radius^k * coeff(k) up to aliasing
        // ~ 0.9^64 * |coeff(k + 64)|. The radius must stay well above the
        // coefficient decay rate or dividing by radius^k amplifies sampling
        // round-off past the comparison tolerance.
        let b = BlaschkeProduct::new(0.7, vec![c(0.3, 0.0), c(-0.2, 0.1)]).unwrap();
        let n = 64usize;
        let radius = 0.9_f64;
        let samples: Vec<Complex64> = (0..n)
            .map(|j| {
                let z = Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * j as f64 / n as f64);
                b.eval(z)
            })
            .collect();
        let series = b.series(32).unwrap();
        for k in 0..32 {
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, s) in samples.iter().enumerate() {
                let w = Complex64::from_polar(
                    1.0,
                    -2.0 * std::f64::consts::PI * (j * k) as f64 / n as f64,
                );
                acc += s * w;
            }
            let recovered = acc / n as f64 / radius.powi(k as i32);
            assert!(
                (series.coeffs()[k] - recovered).norm() < 1e-10,
                "coefficient {k}: {} vs {recovered}",
                series.coeffs()[k]
            );
        }
    }

    #[test]
    fn polynomial_composition_matches_pointwise_evaluation() {
        let outer = TaylorSeries::polynomial_real(&[1.0, 0.5, -0.25, 0.125]).unwrap();
        let inner = MoebiusMap::new(0.4, c(0.35, -0.1)).unwrap().series(72).unwrap();
        let comp = outer.compose(&inner, 64).unwrap();
        for j in 0..16 {
            let z = Complex64::from_polar(0.3, 2.0 * std::f64::consts::PI * j as f64 / 16.0);
            let direct = outer.eval(inner.eval(z));
            let via = comp.eval(z);
            assert!(
                (direct - via).norm() < 1e-8,
                "sample {j}: {direct} vs {via}"
            );
        }
    }

    #[test]
    fn composition_rejects_unknown_outer_tail_when_origin_moves() {
        let outer = TaylorSeries::new(vec![c(1.0, 0.0), c(0.5, 0.0)], None).unwrap();
        let inner = MoebiusMap::new(0.0, c(0.3, 0.0)).unwrap().series(16).unwrap();
        assert!(outer.compose(&inner, 8).is_err());
    }

    #[test]
    fn tail_spot_check_rejects_inconsistent_envelope() {
        let result = TaylorSeries::new(
            vec![c(1.0, 0.0), c(1.0, 0.0)],
            Some(TailBound {
                bound: 0.5,
                ratio: 0.5,
            }),
        );
        assert!(result.is_err());
    }

    #[test]
    fn product_of_polynomials_keeps_zero_tail_when_untruncated() {
        let f = TaylorSeries::polynomial_real(&[1.0, 2.0]).unwrap();
        let g = TaylorSeries::polynomial_real(&[3.0, 0.0, 1.0]).unwrap();
        let p = f.mul(&g, 8).unwrap();
        assert!(p.is_polynomial());
        let expect = [3.0, 6.0, 1.0, 2.0, 0.0];
        for (k, e) in expect.iter().enumerate() {
            assert!((p.coeffs()[k] - c(*e, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn truncated_polynomial_product_still_bounds_dropped_terms() {
        let f = TaylorSeries::polynomial_real(&[1.0, 1.0, 1.0]).unwrap();
        let g = TaylorSeries::polynomial_real(&[1.0, 1.0, 1.0]).unwrap();
        // Full product has degree 4; truncate to 3 stored coefficients.
        let p = f.mul(&g, 3).unwrap();
        let t = p.tail().unwrap();
        assert!(t.bound > 0.0 && t.ratio > 0.0);
        // Dropped coefficients are 2 (at k=3) and 1 (at k=4).
        assert!(t.bound * t.ratio.powi(3) >= 2.0 - 1e-12);
        assert!(t.bound * t.ratio.powi(4) >= 1.0 - 1e-12);
    }

    #[test]
    fn moebius_tilde_conjugates_coefficients() {
        let phi = MoebiusMap::new(0.9, c(0.2, 0.4)).unwrap();
        let s = phi.series(12).unwrap();
        let st = phi.tilde().series(12).unwrap();
        for k in 0..12 {
            assert!((st.coeffs()[k] - s.coeffs()[k].conj()).norm() < 1e-15);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn moebius_coefficients_satisfy_geometric_recurrence(
            theta in 0.0..6.283,
            re in -0.6..0.6,
            im in -0.6..0.6,
        ) {
            prop_assume!((re * re + im * im) < 0.8);
            let phi = MoebiusMap::new(theta, c(re, im)).unwrap();
            let s = phi.series(16).unwrap();
            let abar = c(re, im).conj();
            for k in 1..15 {
                let next = s.coeffs()[k] * abar;
                prop_assert!((s.coeffs()[k + 1] - next).norm() < 1e-13);
            }
        }

        #[test]
        fn product_evaluation_is_consistent(
            a in prop::collection::vec(-1.0..1.0f64, 1..6),
            b in prop::collection::vec(-1.0..1.0f64, 1..6),
        ) {
            let f = TaylorSeries::polynomial_real(&a).unwrap();
            let g = TaylorSeries::polynomial_real(&b).unwrap();
            let p = f.mul(&g, a.len() + b.len()).unwrap();
            for j in 0..8 {
                let z = Complex64::from_polar(0.7, 0.9 * j as f64);
                let direct = f.eval(z) * g.eval(z);
                prop_assert!((p.eval(z) - direct).norm() < 1e-10);
            }
        }
    }
}
