//! Weight sequences and finite-evidence condition checks.
//!
//! A weight sequence $\alpha : \mathbb{N} \to (0,\infty)$ determines the
//! weighted Hardy space $H(\alpha)$. The model family is the power scale
//! $\alpha(k) = (k+1)^\lambda$ — Hardy ($\lambda = 0$), Bergman
//! ($\lambda = -1/2$), Dirichlet ($\lambda = 1/2$) — plus table-driven
//! sequences for experiments off the power scale.
//!
//! Every analytic hypothesis about a weight is a statement about a limit, so
//! no finite computation can decide it. The checks here therefore return a
//! three-valued [`Verdict`] from trend probes at the dyadic checkpoints
//! $k \in \{K/16, K/8, K/4, K/2, K\}$, and every report records the probe
//! values and thresholds that produced its verdict, making the decision a
//! pure function of the recorded data.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::{Error, Result};

/// Relative slack used when comparing probe values for trend decisions.
/// Absorbs last-ulp wobble in `powf` without affecting any genuine trend.
const TREND_SLACK: f64 = 1e-12;

/// Default threshold for `|alpha(K+1)/alpha(K) - 1|` in [`check_basic_ratio`].
pub const DEFAULT_BASIC_RATIO_TOL: f64 = 0.2;

/// Default smallness threshold for `alpha(K)/(K*beta(K))` in [`check_cond1`].
///
/// The magnitude test is a plausibility guard on top of the monotone-decrease
/// trend test: on the power scale with exponent gap `d = lambda - mu`, the
/// probe value at `K` is about `K^(d-1)`, which at `K = 10^6` is still
/// `~0.03` for `d = 0.75`. A threshold of `0.05` admits every convergent
/// power pair probed at `K >= 10^4` while rejecting everything divergent.
pub const DEFAULT_COND1_TOL: f64 = 0.05;

/// Three-valued outcome of a finite-evidence check.
///
/// `Inconclusive` is an honest answer, not an error: the probe data neither
/// supports nor refutes the hypothesis at the probed range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    #[serde(rename = "INCONCLUSIVE")]
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Pass => write!(f, "PASS"),
            Verdict::Fail => write!(f, "FAIL"),
            Verdict::Inconclusive => write!(f, "INCONCLUSIVE"),
        }
    }
}

/// A probed index/value pair; serializes as `[k, value]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Probe(pub u64, pub f64);

/// Outcome of one condition check: the verdict plus everything needed to
/// re-derive it (probe values, summary statistic, thresholds used).
#[derive(Debug, Clone, Serialize)]
pub struct ConditionReport {
    /// Which condition was checked, e.g. `"basic-ratio"` or `"propertyA(n=2)"`.
    pub condition: String,
    pub verdict: Verdict,
    /// Probe samples backing the verdict. The leading entries are
    /// condition-specific (documented on each check); the rest are dyadic
    /// checkpoint samples.
    pub probes: Vec<Probe>,
    /// One-number summary; its meaning is condition-specific.
    pub summary: f64,
    /// Decision parameters (named) that produced the verdict.
    pub thresholds: BTreeMap<String, f64>,
}

/// The shapes of weight sequence this crate knows how to evaluate at any
/// index.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightKind {
    /// `alpha(k) = (k+1)^exponent`.
    Power { exponent: f64 },
    /// Explicit prefix values, extended beyond the table by the power rule
    /// `alpha(k) = prefix[m-1] * ((k+1)/m)^growth_exponent` with
    /// `m = prefix.len()`. Keeps the ratio `alpha(k)/alpha(k-1) - 1` of
    /// order `1/k`, i.e. the extension stays polynomially growing.
    PolynomialGrowth {
        prefix: Vec<f64>,
        growth_exponent: f64,
    },
    /// Explicit table, extended beyond it by constant-ratio extrapolation
    /// `alpha(k) = table[m-1] * tail_ratio^(k-m+1)`.
    Explicit { table: Vec<f64>, tail_ratio: f64 },
}

/// A positive weight sequence, evaluable at every index.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSequence {
    kind: WeightKind,
}

impl WeightSequence {
    /// Power-scale weight `alpha(k) = (k+1)^lambda`.
    pub fn power(lambda: f64) -> Self {
        assert!(lambda.is_finite(), "power weight exponent must be finite");
        WeightSequence {
            kind: WeightKind::Power { exponent: lambda },
        }
    }

    /// Hardy space weight (`lambda = 0`).
    pub fn hardy() -> Self {
        Self::power(0.0)
    }

    /// Bergman space weight (`lambda = -1/2`).
    pub fn bergman() -> Self {
        Self::power(-0.5)
    }

    /// Dirichlet space weight (`lambda = 1/2`).
    pub fn dirichlet() -> Self {
        Self::power(0.5)
    }

    /// Table prefix continued by a power-growth ratio rule.
    pub fn polynomial_growth(prefix: Vec<f64>, growth_exponent: f64) -> Result<Self> {
        if prefix.is_empty() {
            return Err(Error::InvalidWeight("empty prefix table".into()));
        }
        if let Some(bad) = prefix.iter().find(|v| !v.is_finite() || **v <= 0.0) {
            return Err(Error::InvalidWeight(format!(
                "non-positive or non-finite table value {bad}"
            )));
        }
        if !growth_exponent.is_finite() {
            return Err(Error::InvalidWeight("non-finite growth exponent".into()));
        }
        Ok(WeightSequence {
            kind: WeightKind::PolynomialGrowth {
                prefix,
                growth_exponent,
            },
        })
    }

    /// Explicit table continued by constant-ratio extrapolation.
    pub fn explicit(table: Vec<f64>, tail_ratio: f64) -> Result<Self> {
        if table.is_empty() {
            return Err(Error::InvalidWeight("empty weight table".into()));
        }
        if let Some(bad) = table.iter().find(|v| !v.is_finite() || **v <= 0.0) {
            return Err(Error::InvalidWeight(format!(
                "non-positive or non-finite table value {bad}"
            )));
        }
        if !tail_ratio.is_finite() || tail_ratio <= 0.0 {
            return Err(Error::InvalidWeight(format!(
                "tail ratio must be positive and finite, got {tail_ratio}"
            )));
        }
        Ok(WeightSequence {
            kind: WeightKind::Explicit { table, tail_ratio },
        })
    }

    pub fn kind(&self) -> &WeightKind {
        &self.kind
    }

    /// `alpha(k)`. Always positive and finite for validated sequences over
    /// the index ranges used here.
    #[inline]
    pub fn value(&self, k: usize) -> f64 {
        match &self.kind {
            WeightKind::Power { exponent } => ((k + 1) as f64).powf(*exponent),
            WeightKind::PolynomialGrowth {
                prefix,
                growth_exponent,
            } => {
                if k < prefix.len() {
                    prefix[k]
                } else {
                    let m = prefix.len() as f64;
                    prefix[prefix.len() - 1] * (((k + 1) as f64) / m).powf(*growth_exponent)
                }
            }
            WeightKind::Explicit { table, tail_ratio } => {
                if k < table.len() {
                    table[k]
                } else {
                    table[table.len() - 1] * tail_ratio.powi((k - table.len() + 1) as i32)
                }
            }
        }
    }

    /// Short human-readable descriptor for reports.
    pub fn describe(&self) -> String {
        match &self.kind {
            WeightKind::Power { exponent } => format!("power({exponent})"),
            WeightKind::PolynomialGrowth {
                prefix,
                growth_exponent,
            } => format!(
                "poly-growth(prefix-len={}, exponent={growth_exponent})",
                prefix.len()
            ),
            WeightKind::Explicit { table, tail_ratio } => {
                format!("explicit(len={}, tail-ratio={tail_ratio})", table.len())
            }
        }
    }
}

/// Dyadic checkpoints `{K/16, K/8, K/4, K/2, K}` (deduplicated, >= 1).
fn checkpoints(probe_range: usize) -> Vec<usize> {
    let mut pts: Vec<usize> = [16usize, 8, 4, 2, 1]
        .iter()
        .map(|d| (probe_range / d).max(1))
        .collect();
    pts.dedup();
    pts
}

fn require_range(probe_range: usize) -> Result<()> {
    if probe_range < 16 {
        return Err(Error::Contract(format!(
            "probe range K = {probe_range} too small; need K >= 16 for dyadic checkpoints"
        )));
    }
    Ok(())
}

/// Checks the basic ratio hypothesis `alpha(k+1)/alpha(k) -> 1`.
///
/// Probes `r(k) = alpha(k+1)/alpha(k)` at the dyadic checkpoints. PASS iff
/// `|r(K) - 1| < tol` and `|r(k) - 1|` is non-increasing along the
/// checkpoints; otherwise INCONCLUSIVE. A finite probe can never refute a
/// limit statement, so this check has no FAIL branch.
///
/// Probes: `(k, r(k))` at each checkpoint. Summary: `|r(K) - 1|`.
pub fn check_basic_ratio(alpha: &WeightSequence, probe_range: usize, tol: f64) -> Result<ConditionReport> {
    require_range(probe_range)?;
    let pts = checkpoints(probe_range);
    let probes: Vec<Probe> = pts
        .iter()
        .map(|&k| Probe(k as u64, alpha.value(k + 1) / alpha.value(k)))
        .collect();
    let devs: Vec<f64> = probes.iter().map(|p| (p.1 - 1.0).abs()).collect();
    let non_increasing = devs
        .windows(2)
        .all(|w| w[1] <= w[0] * (1.0 + TREND_SLACK) + f64::MIN_POSITIVE);
    let last = *devs.last().unwrap();
    let verdict = if last < tol && non_increasing {
        Verdict::Pass
    } else {
        Verdict::Inconclusive
    };
    let mut thresholds = BTreeMap::new();
    thresholds.insert("ratio-tol".into(), tol);
    thresholds.insert("probe-range".into(), probe_range as f64);
    Ok(ConditionReport {
        condition: "basic-ratio".into(),
        verdict,
        probes,
        summary: last,
        thresholds,
    })
}

/// Checks the smallness condition `alpha(k)/(k*beta(k)) -> 0`.
///
/// Probes `q(k) = alpha(k)/(k*beta(k))` at the dyadic checkpoints.
/// PASS iff `q` strictly decreases over the last three checkpoints and
/// `q(K) < tol`; FAIL iff `q` is non-decreasing over the last three
/// checkpoints and `q(K) > tol`; otherwise INCONCLUSIVE.
///
/// Probes: `(k, q(k))` at each checkpoint. Summary: `q(K)`.
pub fn check_cond1(
    alpha: &WeightSequence,
    beta: &WeightSequence,
    probe_range: usize,
    tol: f64,
) -> Result<ConditionReport> {
    require_range(probe_range)?;
    let pts = checkpoints(probe_range);
    let probes: Vec<Probe> = pts
        .iter()
        .map(|&k| Probe(k as u64, alpha.value(k) / (k as f64 * beta.value(k))))
        .collect();
    let n = probes.len();
    let tail3 = &probes[n.saturating_sub(3)..];
    let strictly_decreasing = tail3
        .windows(2)
        .all(|w| w[1].1 < w[0].1 * (1.0 - TREND_SLACK));
    let non_decreasing = tail3
        .windows(2)
        .all(|w| w[1].1 >= w[0].1 * (1.0 - TREND_SLACK));
    let last = probes[n - 1].1;
    let verdict = if strictly_decreasing && last < tol {
        Verdict::Pass
    } else if non_decreasing && last > tol {
        Verdict::Fail
    } else {
        Verdict::Inconclusive
    };
    let mut thresholds = BTreeMap::new();
    thresholds.insert("smallness-tol".into(), tol);
    thresholds.insert("probe-range".into(), probe_range as f64);
    Ok(ConditionReport {
        condition: "cond1".into(),
        verdict,
        probes,
        summary: last,
        thresholds,
    })
}

/// Checks boundedness of `beta(k)/alpha(k)` (the inclusion
/// `H(alpha) ⊆ H(beta)` with bounded embedding).
///
/// Scans the running maximum of `beta(k)/alpha(k)` over all `k <= K`.
/// PASS iff the final maximum is first attained before `K/2` (the supremum
/// stabilized inside the probed range); FAIL iff the running maximum still
/// strictly grows across the last three dyadic checkpoints; otherwise
/// INCONCLUSIVE.
///
/// Probes: `(k_attained, max)` first, then `(k, running max at k)` at each
/// checkpoint. Summary: the running maximum at `K`.
pub fn check_inclusion(
    alpha: &WeightSequence,
    beta: &WeightSequence,
    probe_range: usize,
) -> Result<ConditionReport> {
    require_range(probe_range)?;
    let pts = checkpoints(probe_range);
    let mut running_max = f64::NEG_INFINITY;
    let mut max_at: usize = 0;
    let mut checkpoint_vals: Vec<Probe> = Vec::with_capacity(pts.len());
    let mut next_pt = 0usize;
    for k in 0..=probe_range {
        let ratio = beta.value(k) / alpha.value(k);
        if ratio > running_max * (1.0 + TREND_SLACK) || k == 0 {
            running_max = running_max.max(ratio);
            max_at = k;
        } else {
            running_max = running_max.max(ratio);
        }
        if next_pt < pts.len() && k == pts[next_pt] {
            checkpoint_vals.push(Probe(k as u64, running_max));
            next_pt += 1;
        }
    }
    let n = checkpoint_vals.len();
    let tail3 = &checkpoint_vals[n.saturating_sub(3)..];
    let still_growing = tail3
        .windows(2)
        .all(|w| w[1].1 > w[0].1 * (1.0 + TREND_SLACK));
    let verdict = if max_at < probe_range / 2 {
        Verdict::Pass
    } else if still_growing {
        Verdict::Fail
    } else {
        Verdict::Inconclusive
    };
    let mut probes = vec![Probe(max_at as u64, running_max)];
    probes.extend(checkpoint_vals);
    let mut thresholds = BTreeMap::new();
    thresholds.insert("probe-range".into(), probe_range as f64);
    thresholds.insert("stabilize-before".into(), (probe_range / 2) as f64);
    Ok(ConditionReport {
        condition: "inclusion".into(),
        verdict,
        probes,
        summary: running_max,
        thresholds,
    })
}

/// Two-sided bounds estimated by [`check_property_a`].
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PropertyABounds {
    /// Estimated lower constant `c1 = min_k alpha(n-1+k*n)/alpha(k)`.
    pub c1: f64,
    /// Estimated upper constant `c2 = max_k alpha(n-1+k*n)/alpha(k)`.
    pub c2: f64,
    /// First index attaining `c1` (within relative slack).
    pub c1_first_at: usize,
    /// First index attaining `c2` (within relative slack).
    pub c2_first_at: usize,
}

/// Checks the two-sided comparability `c1 <= alpha(n-1+k*n)/alpha(k) <= c2`.
///
/// Tracks the running min and max of `rho(k) = alpha(n-1+k*n)/alpha(k)` for
/// `k <= K`. PASS iff both extrema are first attained before `K/2`;
/// otherwise INCONCLUSIVE (an extremum still moving at the edge of the
/// probed range is not evidence either way).
///
/// Probes: `(k_min, c1)`, `(k_max, c2)`, then `(k, rho(k))` at each
/// checkpoint. Summary: `c2 - c1` (zero exactly on the power scale, where
/// `rho` is constant `n^lambda`).
pub fn check_property_a(
    alpha: &WeightSequence,
    modulus: usize,
    probe_range: usize,
) -> Result<(ConditionReport, PropertyABounds)> {
    if modulus < 2 {
        return Err(Error::Contract(format!(
            "propertyA needs modulus n >= 2, got {modulus}"
        )));
    }
    require_range(probe_range)?;
    let pts = checkpoints(probe_range);
    let mut c1 = f64::INFINITY;
    let mut c2 = f64::NEG_INFINITY;
    let mut c1_at = 0usize;
    let mut c2_at = 0usize;
    let mut checkpoint_vals: Vec<Probe> = Vec::with_capacity(pts.len());
    let mut next_pt = 0usize;
    for k in 0..=probe_range {
        let rho = alpha.value(modulus - 1 + k * modulus) / alpha.value(k);
        if rho < c1 * (1.0 - TREND_SLACK) || k == 0 {
            c1_at = k;
        }
        if rho > c2 * (1.0 + TREND_SLACK) || k == 0 {
            c2_at = k;
        }
        c1 = c1.min(rho);
        c2 = c2.max(rho);
        if next_pt < pts.len() && k == pts[next_pt] {
            checkpoint_vals.push(Probe(k as u64, rho));
            next_pt += 1;
        }
    }
    let verdict = if c1_at < probe_range / 2 && c2_at < probe_range / 2 {
        Verdict::Pass
    } else {
        Verdict::Inconclusive
    };
    let mut probes = vec![Probe(c1_at as u64, c1), Probe(c2_at as u64, c2)];
    probes.extend(checkpoint_vals);
    let mut thresholds = BTreeMap::new();
    thresholds.insert("n".into(), modulus as f64);
    thresholds.insert("probe-range".into(), probe_range as f64);
    thresholds.insert("stabilize-before".into(), (probe_range / 2) as f64);
    let report = ConditionReport {
        condition: format!("propertyA(n={modulus})"),
        verdict,
        probes,
        summary: c2 - c1,
        thresholds,
    };
    Ok((
        report,
        PropertyABounds {
            c1,
            c2,
            c1_first_at: c1_at,
            c2_first_at: c2_at,
        },
    ))
}

/// The polynomial-growth index `sup_{1<=k<=K} (k+1)*|alpha(k)/alpha(k-1) - 1|`
/// together with the index attaining it.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PolyGrowthIndex {
    pub sup: f64,
    pub at_k: usize,
}

/// Estimates the polynomial-growth index over `1 <= k <= K`.
pub fn poly_growth_index(alpha: &WeightSequence, probe_range: usize) -> Result<PolyGrowthIndex> {
    require_range(probe_range)?;
    let mut sup = f64::NEG_INFINITY;
    let mut at_k = 1usize;
    for k in 1..=probe_range {
        let term = (k + 1) as f64 * (alpha.value(k) / alpha.value(k - 1) - 1.0).abs();
        if term > sup * (1.0 + TREND_SLACK) || k == 1 {
            at_k = k;
        }
        sup = sup.max(term);
    }
    Ok(PolyGrowthIndex { sup, at_k })
}

/// Report form of [`poly_growth_index`]: PASS iff the running sup is first
/// attained before `K/2`; FAIL iff it still strictly grows across the last
/// three checkpoints; otherwise INCONCLUSIVE.
///
/// Probes: `(at_k, sup)` first, then `(k, running sup at k)` at each
/// checkpoint. Summary: the index estimate.
pub fn check_poly_growth(alpha: &WeightSequence, probe_range: usize) -> Result<ConditionReport> {
    require_range(probe_range)?;
    let pts = checkpoints(probe_range);
    let mut sup = f64::NEG_INFINITY;
    let mut at_k = 1usize;
    let mut checkpoint_vals: Vec<Probe> = Vec::with_capacity(pts.len());
    let mut next_pt = 0usize;
    for k in 1..=probe_range {
        let term = (k + 1) as f64 * (alpha.value(k) / alpha.value(k - 1) - 1.0).abs();
        if term > sup * (1.0 + TREND_SLACK) || k == 1 {
            at_k = k;
        }
        sup = sup.max(term);
        if next_pt < pts.len() && k == pts[next_pt] {
            checkpoint_vals.push(Probe(k as u64, sup));
            next_pt += 1;
        }
    }
    let n = checkpoint_vals.len();
    let tail3 = &checkpoint_vals[n.saturating_sub(3)..];
    let still_growing = tail3
        .windows(2)
        .all(|w| w[1].1 > w[0].1 * (1.0 + TREND_SLACK));
    let verdict = if at_k < probe_range / 2 {
        Verdict::Pass
    } else if still_growing {
        Verdict::Fail
    } else {
        Verdict::Inconclusive
    };
    let mut probes = vec![Probe(at_k as u64, sup)];
    probes.extend(checkpoint_vals);
    let mut thresholds = BTreeMap::new();
    thresholds.insert("probe-range".into(), probe_range as f64);
    thresholds.insert("stabilize-before".into(), (probe_range / 2) as f64);
    Ok(ConditionReport {
        condition: "poly-growth".into(),
        verdict,
        probes,
        summary: sup,
        thresholds,
    })
}
