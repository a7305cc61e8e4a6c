//! Similarity-parameter extraction and the relevance/coverage bounds.
//!
//! Every bound relates an observed objective value `I_F(A;Q)` to the
//! relevance measure `χ = |A ∩ T|` or to a coverage measure `δ_avg`, in
//! terms of scalar similarity statistics of the dataset and the subset:
//!
//! ```text
//! α₁, β₁   range of max_{j∈Q} s_ij over i ∈ U
//! α₂, β₂   range of max_{j∈Q} s_ij over i ∈ T
//! α₃       min_{i∈T} mean_{j∈Q} s_ij
//! β₃       mean_{i∈Q} max_{j∈T} s_ij
//! α₄, β₄   mean_{i∈T\A} min(max_{j∈A} s_ij, η·α₂ / η·β₂)
//! γ₁, Δ₁   range of mean_{j∈Q} s_ij over i ∈ U
//! γ₂, Δ₂   range of mean_{j∈Q} s_ij over i ∈ T
//! γ₃, Δ₃   range over i ∈ Q of mean_{j∈A∩U} s_ij
//! γ₄, Δ₄   range over i ∈ Q of mean_{j∈A∩T} s_ij
//! Ω_U      min_{i,j∈U} s_ij          Ω_UT  min_{i∈U, j∈T} s_ij
//! Ω_QT     min_{i∈Q, j∈T} s_ij       Ω_QU  min_{i∈Q, j∈U} s_ij
//! 𝒪        Σ_{i∈T\A} (max_{j∈A} s_ij − η max_{j∈Q} s_ij)⁺
//! ```
//!
//! Subset-dependent statistics are recomputed per sampled subset; fields
//! whose index set is empty are carried as `None` rather than raising.
//!
//! A failed precondition (a separation condition, a non-positive
//! denominator, or an undefined subset statistic) yields a flagged
//! infinite-width [`BoundInterval`] instead of an error so callers can
//! count violation rates across samples.
//!
//! The COM coverage interval deserves a caveat: the underlying result
//! bounds a *sum of per-query maxima*, not `δ_avg^Q` itself. We inverse-map
//! it by assuming all per-query maxima share one common value, which is a
//! heuristic envelope; such intervals carry `heuristic = true` and are
//! excluded from strict containment checks.

use crate::dataset::{PartitionSizes, SimilarityMatrix, Subset};
use crate::error::{Error, Result};
use crate::smi::{PsiKind, SmiConfig, SmiFunction, SmiValue};

/// Dataset-level similarity statistics (independent of any subset).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DatasetBoundParams {
    pub alpha1: f64,
    pub beta1: f64,
    pub alpha2: f64,
    pub beta2: f64,
    pub alpha3: f64,
    pub beta3: f64,
    pub gamma1: f64,
    pub delta1: f64,
    pub gamma2: f64,
    pub delta2: f64,
    pub omega_u: f64,
    pub omega_ut: f64,
    /// Per-element minima of the query-to-targeted and query-to-untargeted
    /// cross similarities. These back the GCMI coverage upper bound: the
    /// mean-range parameters γ₁/γ₂ only bound per-element similarities when
    /// |Q| = 1, so substituting them into that bound's leave-one-out step is
    /// invalid for larger query sets (and measurably violated). Ω_QT and
    /// Ω_QU make the same closed form sound for any |Q| and coincide with
    /// γ₂ and γ₁ when |Q| = 1.
    pub omega_qt: f64,
    pub omega_qu: f64,
}

/// Subset-dependent similarity statistics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubsetBoundParams {
    /// `None` when `T \ A` is empty.
    pub alpha4: Option<f64>,
    pub beta4: Option<f64>,
    /// `None` when `A ∩ U` is empty.
    pub gamma3: Option<f64>,
    pub delta3: Option<f64>,
    /// `None` when `A ∩ T` is empty.
    pub gamma4: Option<f64>,
    pub delta4: Option<f64>,
    /// 𝒪 ≥ 0; an empty `T \ A` sum gives 0.
    pub overshoot: f64,
}

/// A lower/upper bracket for χ or δ_avg.
///
/// When preconditions fail the raw bounds are infinite and
/// `preconditions_met` is false; the clipped fields always lie in the
/// metric's natural range (`[0, B]` for relevance, `[0, 1]` for coverage).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundInterval {
    pub lower: f64,
    pub upper: f64,
    pub preconditions_met: bool,
    /// Set for intervals derived through the COM coverage envelope, which
    /// is a documented heuristic rather than a proven bound.
    pub heuristic: bool,
    pub clipped_lower: f64,
    pub clipped_upper: f64,
}

impl BoundInterval {
    fn met(lower: f64, upper: f64, range: (f64, f64)) -> Self {
        Self {
            lower,
            upper,
            preconditions_met: true,
            heuristic: false,
            clipped_lower: lower.clamp(range.0, range.1),
            clipped_upper: upper.clamp(range.0, range.1),
        }
    }

    fn unmet(range: (f64, f64)) -> Self {
        Self {
            lower: f64::NEG_INFINITY,
            upper: f64::INFINITY,
            preconditions_met: false,
            heuristic: false,
            clipped_lower: range.0,
            clipped_upper: range.1,
        }
    }

    fn with_heuristic(mut self) -> Self {
        self.heuristic = true;
        self
    }
}

/// Extract every dataset-level statistic in one pass over the matrix.
pub fn extract_dataset_params(matrix: &SimilarityMatrix) -> DatasetBoundParams {
    let t = matrix.targeted_len();
    let u = matrix.untargeted_len();
    let q = matrix.query_len();
    debug_assert!(t > 0 && u > 0 && q > 0, "partitions must be non-empty");
    let q_f = q as f64;

    let query_max = |row: usize| -> f64 {
        (0..q).fold(0.0f64, |m, k| m.max(matrix.get(row, matrix.query_row(k))))
    };
    let query_mean = |row: usize| -> f64 {
        (0..q)
            .map(|k| matrix.get(row, matrix.query_row(k)))
            .sum::<f64>()
            / q_f
    };

    let mut alpha1 = f64::INFINITY;
    let mut beta1 = f64::NEG_INFINITY;
    let mut gamma1 = f64::INFINITY;
    let mut delta1 = f64::NEG_INFINITY;
    for i in t..t + u {
        let m = query_max(i);
        alpha1 = alpha1.min(m);
        beta1 = beta1.max(m);
        let mean = query_mean(i);
        gamma1 = gamma1.min(mean);
        delta1 = delta1.max(mean);
    }

    let mut alpha2 = f64::INFINITY;
    let mut beta2 = f64::NEG_INFINITY;
    let mut alpha3 = f64::INFINITY;
    let mut gamma2 = f64::INFINITY;
    let mut delta2 = f64::NEG_INFINITY;
    for i in 0..t {
        let m = query_max(i);
        alpha2 = alpha2.min(m);
        beta2 = beta2.max(m);
        let mean = query_mean(i);
        alpha3 = alpha3.min(mean);
        gamma2 = gamma2.min(mean);
        delta2 = delta2.max(mean);
    }

    let mut beta3_sum = 0.0;
    for k in 0..q {
        let row = matrix.query_row(k);
        let m = (0..t).fold(0.0f64, |m, j| m.max(matrix.get(row, j)));
        beta3_sum += m;
    }
    let beta3 = beta3_sum / q_f;

    let mut omega_u = f64::INFINITY;
    for i in t..t + u {
        for j in t..t + u {
            omega_u = omega_u.min(matrix.get(i, j));
        }
    }
    let mut omega_ut = f64::INFINITY;
    for i in t..t + u {
        for j in 0..t {
            omega_ut = omega_ut.min(matrix.get(i, j));
        }
    }
    let mut omega_qt = f64::INFINITY;
    let mut omega_qu = f64::INFINITY;
    for k in 0..q {
        let row = matrix.query_row(k);
        for j in 0..t {
            omega_qt = omega_qt.min(matrix.get(row, j));
        }
        for j in t..t + u {
            omega_qu = omega_qu.min(matrix.get(row, j));
        }
    }

    DatasetBoundParams {
        alpha1,
        beta1,
        alpha2,
        beta2,
        alpha3,
        beta3,
        gamma1,
        delta1,
        gamma2,
        delta2,
        omega_u,
        omega_ut,
        omega_qt,
        omega_qu,
    }
}

/// Extract the subset-dependent statistics for one sampled subset.
pub fn extract_subset_params(
    subset: &Subset,
    matrix: &SimilarityMatrix,
    eta: f64,
    params: &DatasetBoundParams,
) -> Result<SubsetBoundParams> {
    if subset.is_empty() {
        return Err(Error::EmptySubset);
    }
    subset.check_range(matrix.ground_len())?;
    let t = matrix.targeted_len();
    let q = matrix.query_len();

    let subset_max = |row: usize| -> f64 {
        subset
            .members()
            .iter()
            .fold(0.0f64, |m, &j| m.max(matrix.get(row, j)))
    };
    let query_max = |row: usize| -> f64 {
        (0..q).fold(0.0f64, |m, k| m.max(matrix.get(row, matrix.query_row(k))))
    };

    let cap_lo = eta * params.alpha2;
    let cap_hi = eta * params.beta2;
    let mut outside = 0usize;
    let mut sum_lo = 0.0;
    let mut sum_hi = 0.0;
    let mut overshoot = 0.0;
    for i in 0..t {
        if subset.contains(i) {
            continue;
        }
        outside += 1;
        let am = subset_max(i);
        sum_lo += am.min(cap_lo);
        sum_hi += am.min(cap_hi);
        let threshold = eta * query_max(i);
        if am > threshold {
            overshoot += am - threshold;
        }
    }
    let (alpha4, beta4) = if outside > 0 {
        (Some(sum_lo / outside as f64), Some(sum_hi / outside as f64))
    } else {
        (None, None)
    };

    let in_targeted: Vec<usize> = subset
        .members()
        .iter()
        .copied()
        .filter(|&m| m < t)
        .collect();
    let in_untargeted: Vec<usize> = subset
        .members()
        .iter()
        .copied()
        .filter(|&m| m >= t)
        .collect();

    let range_over_queries = |block: &[usize]| -> (Option<f64>, Option<f64>) {
        if block.is_empty() {
            return (None, None);
        }
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for k in 0..q {
            let row = matrix.query_row(k);
            let mean =
                block.iter().map(|&j| matrix.get(row, j)).sum::<f64>() / block.len() as f64;
            lo = lo.min(mean);
            hi = hi.max(mean);
        }
        (Some(lo), Some(hi))
    };
    let (gamma3, delta3) = range_over_queries(&in_untargeted);
    let (gamma4, delta4) = range_over_queries(&in_targeted);

    Ok(SubsetBoundParams {
        alpha4,
        beta4,
        gamma3,
        delta3,
        gamma4,
        delta4,
        overshoot,
    })
}

/// COM relevance envelope: strictly increasing `f_l(χ) ≤ I_F ≤ f_h(χ)`.
#[derive(Debug, Clone, Copy)]
pub struct ComRelevanceCurve {
    pub eta: f64,
    pub psi: PsiKind,
    pub budget: usize,
    pub query_len: usize,
    pub gamma1: f64,
    pub gamma2: f64,
    pub gamma3: f64,
    pub gamma4: f64,
    pub delta1: f64,
    pub delta2: f64,
    pub delta3: f64,
    pub delta4: f64,
}

impl ComRelevanceCurve {
    /// `None` when the subset statistics it needs are undefined.
    pub fn from_params(
        cfg: &SmiConfig,
        budget: usize,
        query_len: usize,
        params: &DatasetBoundParams,
        subset: &SubsetBoundParams,
    ) -> Option<Self> {
        Some(Self {
            eta: cfg.eta,
            psi: cfg.psi,
            budget,
            query_len,
            gamma1: params.gamma1,
            gamma2: params.gamma2,
            gamma3: subset.gamma3?,
            gamma4: subset.gamma4?,
            delta1: params.delta1,
            delta2: params.delta2,
            delta3: subset.delta3?,
            delta4: subset.delta4?,
        })
    }

    /// The separation conditions under which both envelopes are strictly
    /// increasing in χ.
    pub fn separation_met(&self) -> bool {
        self.gamma2 > self.gamma1
            && self.gamma4 > self.gamma3
            && self.delta2 > self.delta1
            && self.delta4 > self.delta3
    }

    pub fn f_lower(&self, chi: usize) -> f64 {
        let q = self.query_len as f64;
        let b = self.budget as f64;
        let x = chi as f64;
        self.eta * x * (self.psi.apply(q * self.gamma2) - self.psi.apply(q * self.gamma1))
            + self.eta * b * self.psi.apply(q * self.gamma1)
            + q * self.psi.apply(b * self.gamma3 + x * (self.gamma4 - self.gamma3))
    }

    pub fn f_upper(&self, chi: usize) -> f64 {
        let q = self.query_len as f64;
        let b = self.budget as f64;
        let x = chi as f64;
        self.eta * x * (self.psi.apply(q * self.delta2) - self.psi.apply(q * self.delta1))
            + self.eta * b * self.psi.apply(q * self.delta1)
            + q * self.psi.apply(b * self.delta3 + x * (self.delta4 - self.delta3))
    }

    /// χ values whose envelope admits the observed objective value. Strict
    /// monotonicity of both envelopes makes the feasible set contiguous;
    /// `None` when no χ in 0..=budget is feasible.
    pub fn feasible_chi_interval(&self, value: f64) -> Option<(usize, usize)> {
        let tol = 1e-9 * value.abs().max(1.0);
        let mut lo = None;
        let mut hi = None;
        for chi in 0..=self.budget {
            if self.f_lower(chi) <= value + tol && value <= self.f_upper(chi) + tol {
                lo.get_or_insert(chi);
                hi = Some(chi);
            }
        }
        Some((lo?, hi?))
    }
}

/// COM coverage envelope at fixed χ: strictly increasing functions of the
/// common per-query best-match value `x`.
#[derive(Debug, Clone, Copy)]
pub struct ComCoverageCurve {
    pub eta: f64,
    pub psi: PsiKind,
    pub chi: usize,
    pub budget: usize,
    pub query_len: usize,
    pub gamma1: f64,
    pub gamma2: f64,
    pub gamma3: f64,
    pub gamma4: f64,
    pub delta1: f64,
    pub delta2: f64,
    pub delta3: f64,
    pub delta4: f64,
}

impl ComCoverageCurve {
    pub fn from_params(
        cfg: &SmiConfig,
        chi: usize,
        budget: usize,
        query_len: usize,
        params: &DatasetBoundParams,
        subset: &SubsetBoundParams,
    ) -> Option<Self> {
        // The (B - χ) coefficient zeroes the A∩U statistics when χ = B.
        let (gamma3, delta3) = if chi == budget {
            (subset.gamma3.unwrap_or(0.0), subset.delta3.unwrap_or(0.0))
        } else {
            (subset.gamma3?, subset.delta3?)
        };
        Some(Self {
            eta: cfg.eta,
            psi: cfg.psi,
            chi,
            budget,
            query_len,
            gamma1: params.gamma1,
            gamma2: params.gamma2,
            gamma3,
            gamma4: subset.gamma4?,
            delta1: params.delta1,
            delta2: params.delta2,
            delta3,
            delta4: subset.delta4?,
        })
    }

    pub fn f_lower(&self, x: f64) -> f64 {
        let q = self.query_len as f64;
        let b = self.budget as f64;
        let c = self.chi as f64;
        self.eta / q * (c * self.psi.apply(q * self.gamma2) + (b - c) * self.psi.apply(q * self.gamma1))
            + self
                .psi
                .apply((c - 1.0) * self.gamma4 + (b - c) * self.gamma3 + x)
    }

    pub fn f_upper(&self, x: f64) -> f64 {
        let q = self.query_len as f64;
        let b = self.budget as f64;
        let c = self.chi as f64;
        self.eta / q * (c * self.psi.apply(q * self.delta2) + (b - c) * self.psi.apply(q * self.delta1))
            + self
                .psi
                .apply((c - 1.0) * self.delta4 + (b - c) * self.delta3 + x)
    }
}

/// Smallest `x ∈ [0, 1]` with `f(x) = target` for increasing `f`, via
/// bisection; saturates at the interval ends when no root exists.
fn invert_increasing(f: impl Fn(f64) -> f64, target: f64) -> f64 {
    if f(0.0) >= target {
        return 0.0;
    }
    if f(1.0) <= target {
        return 1.0;
    }
    let mut lo = 0.0f64;
    let mut hi = 1.0f64;
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Bounds on χ given the observed objective value.
pub fn relevance_bounds(
    cfg: &SmiConfig,
    ifa: SmiValue,
    chi: usize,
    budget: usize,
    sizes: PartitionSizes,
    params: &DatasetBoundParams,
    subset: &SubsetBoundParams,
) -> BoundInterval {
    let range = (0.0, budget as f64);
    let value = ifa.value();
    let eta = cfg.eta;
    match cfg.function {
        SmiFunction::Flvmi => {
            let (Some(alpha4), Some(beta4)) = (subset.alpha4, subset.beta4) else {
                return BoundInterval::unmet(range);
            };
            let cap_hi = (eta * params.beta2).min(1.0);
            let cap_lo = (eta * params.alpha2).min(1.0);
            if chi < 1 || cap_hi <= beta4 || cap_lo <= alpha4 {
                return BoundInterval::unmet(range);
            }
            let t = sizes.targeted as f64;
            let u = sizes.untargeted as f64;
            let cap_u = (eta * params.beta1).min(1.0);
            let lower = (value - u * cap_u - t * beta4) / (cap_hi - beta4);
            let upper = (value - t * alpha4) / (cap_lo - alpha4);
            BoundInterval::met(lower, upper, range)
        }
        SmiFunction::Flqmi => {
            if chi < 1 || params.alpha1 >= params.alpha2 || params.beta1 >= params.beta2 {
                return BoundInterval::unmet(range);
            }
            let b = budget as f64;
            let q = sizes.query as f64;
            let lower = (value - eta * b * params.beta1 - q * params.beta3)
                / (eta * (params.beta2 - params.beta1));
            let upper = (value - eta * b * params.alpha1 - q * params.alpha3)
                / (eta * (params.alpha2 - params.alpha1));
            BoundInterval::met(lower, upper, range)
        }
        SmiFunction::Gcmi => {
            if params.gamma1 >= params.gamma2 || params.delta1 >= params.delta2 {
                return BoundInterval::unmet(range);
            }
            let scaled = value / (2.0 * cfg.lambda * sizes.query as f64);
            let b = budget as f64;
            let lower = (scaled - b * params.delta1) / (params.delta2 - params.delta1);
            let upper = (scaled - b * params.gamma1) / (params.gamma2 - params.gamma1);
            BoundInterval::met(lower, upper, range)
        }
        SmiFunction::Com => {
            let Some(curve) =
                ComRelevanceCurve::from_params(cfg, budget, sizes.query, params, subset)
            else {
                return BoundInterval::unmet(range);
            };
            if !curve.separation_met() {
                return BoundInterval::unmet(range);
            }
            match curve.feasible_chi_interval(value) {
                Some((lo, hi)) => BoundInterval::met(lo as f64, hi as f64, range),
                None => BoundInterval::unmet(range),
            }
        }
    }
}

/// Bounds on coverage given the observed objective value.
///
/// FLVMI bounds `δ_avg^{T\A}`; FLQMI, GCMI, and (heuristically) COM bound
/// `δ_avg^Q`.
pub fn coverage_bounds(
    cfg: &SmiConfig,
    ifa: SmiValue,
    chi: usize,
    budget: usize,
    sizes: PartitionSizes,
    params: &DatasetBoundParams,
    subset: &SubsetBoundParams,
) -> BoundInterval {
    let range = (0.0, 1.0);
    let value = ifa.value();
    let eta = cfg.eta;
    match cfg.function {
        SmiFunction::Flvmi => {
            if chi < 1 || chi >= budget || sizes.targeted <= chi {
                return BoundInterval::unmet(range);
            }
            let t = sizes.targeted as f64;
            let u = sizes.untargeted as f64;
            let b = budget as f64;
            let c = chi as f64;
            let o = subset.overshoot;
            let cap_b1 = (eta * params.beta1).min(1.0);
            let cap_b2 = (eta * params.beta2).min(1.0);
            let cap_a1 = (eta * params.alpha1).min(1.0);
            let cap_a2 = (eta * params.alpha2).min(1.0);
            let floor = params.omega_u.max(params.omega_ut).min(eta * params.alpha1);
            let denom = t - c;
            let lower = (value - u * cap_b1 - c * cap_b2 + o) / denom;
            // |U \ A| = |U| - B + χ elements keep at least `floor`.
            let upper =
                (value - (b - c) * cap_a1 - c * cap_a2 - (u - b + c) * floor + o) / denom;
            BoundInterval::met(lower, upper, range)
        }
        SmiFunction::Flqmi => {
            if chi < 1 {
                return BoundInterval::unmet(range);
            }
            let q = sizes.query as f64;
            let b = budget as f64;
            let c = chi as f64;
            let lower = (value - eta * (c * params.beta2 + (b - c) * params.beta1)) / q;
            let upper = (value - eta * (c * params.alpha2 + (b - c) * params.alpha1)) / q;
            BoundInterval::met(lower, upper, range)
        }
        SmiFunction::Gcmi => {
            let scaled = value / (2.0 * cfg.lambda * sizes.query as f64);
            let b = budget as f64;
            let c = chi as f64;
            let lower = scaled - b * params.delta1 - c * (params.delta2 - params.delta1);
            // Leave-one-out floor per query element: removing the best match
            // discards at most one targeted and one untargeted contribution,
            // each at least the per-element cross minimum (see the Ω_QT/Ω_QU
            // note on DatasetBoundParams).
            let upper = scaled - (b - 1.0) * params.omega_qu + params.omega_qt
                - c * (params.omega_qt - params.omega_qu);
            BoundInterval::met(lower, upper, range)
        }
        SmiFunction::Com => {
            if chi < 1 {
                return BoundInterval::unmet(range).with_heuristic();
            }
            let Some(curve) =
                ComCoverageCurve::from_params(cfg, chi, budget, sizes.query, params, subset)
            else {
                return BoundInterval::unmet(range).with_heuristic();
            };
            let target = value / sizes.query as f64;
            let lower = invert_increasing(|x| curve.f_upper(x), target);
            let upper = invert_increasing(|x| curve.f_lower(x), target);
            BoundInterval::met(lower, upper, range).with_heuristic()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::PartitionSizes;
    use crate::smi::eval_smi;

    fn matrix(sizes: PartitionSizes, values: Vec<f64>) -> SimilarityMatrix {
        SimilarityMatrix::from_values(sizes, values).unwrap()
    }

    /// T = {t1, t2}, U = {u}, Q = {q} with hand-picked similarities.
    fn instance() -> SimilarityMatrix {
        let sizes = PartitionSizes {
            targeted: 2,
            untargeted: 1,
            query: 1,
        };
        #[rustfmt::skip]
        let values = vec![
            1.0, 0.6, 0.3, 0.8,
            0.6, 1.0, 0.2, 0.7,
            0.3, 0.2, 1.0, 0.1,
            0.8, 0.7, 0.1, 1.0,
        ];
        matrix(sizes, values)
    }

    #[test]
    fn dataset_params_hand_case() {
        let p = extract_dataset_params(&instance());
        assert_eq!(p.alpha1, 0.1);
        assert_eq!(p.beta1, 0.1);
        assert_eq!(p.alpha2, 0.7);
        assert_eq!(p.beta2, 0.8);
        assert_eq!(p.alpha3, 0.7);
        assert_eq!(p.beta3, 0.8);
        assert_eq!(p.gamma1, 0.1);
        assert_eq!(p.delta1, 0.1);
        assert_eq!(p.gamma2, 0.7);
        assert_eq!(p.delta2, 0.8);
        // |U| = 1, so the U-U minimum is the diagonal entry.
        assert_eq!(p.omega_u, 1.0);
        assert_eq!(p.omega_ut, 0.2);
    }

    #[test]
    fn dataset_params_constant_matrix() {
        let c = 0.4;
        let sizes = PartitionSizes {
            targeted: 2,
            untargeted: 2,
            query: 2,
        };
        let n = sizes.total();
        let mut values = vec![c; n * n];
        for i in 0..n {
            values[i * n + i] = 1.0;
        }
        let p = extract_dataset_params(&matrix(sizes, values));
        for field in [
            p.alpha1, p.beta1, p.alpha2, p.beta2, p.alpha3, p.beta3, p.gamma1, p.delta1,
            p.gamma2, p.delta2, p.omega_u, p.omega_ut, p.omega_qt, p.omega_qu,
        ] {
            assert_eq!(field, c);
        }
    }

    #[test]
    fn dataset_params_singletons() {
        let sizes = PartitionSizes {
            targeted: 1,
            untargeted: 1,
            query: 1,
        };
        #[rustfmt::skip]
        let values = vec![
            1.0, 0.5, 0.9,
            0.5, 1.0, 0.1,
            0.9, 0.1, 1.0,
        ];
        let p = extract_dataset_params(&matrix(sizes, values));
        assert_eq!((p.alpha1, p.beta1), (0.1, 0.1));
        assert_eq!((p.alpha2, p.beta2), (0.9, 0.9));
        assert_eq!((p.gamma1, p.delta1), (0.1, 0.1));
        assert_eq!((p.gamma2, p.delta2), (0.9, 0.9));
        assert_eq!(p.alpha3, 0.9);
        assert_eq!(p.beta3, 0.9);
    }

    #[test]
    fn subset_params_hand_case() {
        let m = instance();
        let params = extract_dataset_params(&m);
        let a = Subset::new(vec![0]).unwrap();
        let sp = extract_subset_params(&a, &m, 1.0, &params).unwrap();
        // T \ A = {t2}: best match is s(t2, t1) = 0.6, capped by η·α₂ = 0.7.
        assert_eq!(sp.alpha4, Some(0.6));
        assert_eq!(sp.beta4, Some(0.6));
        assert_eq!(sp.overshoot, 0.0);
        assert_eq!(sp.gamma3, None);
        assert_eq!(sp.delta3, None);
        assert_eq!(sp.gamma4, Some(0.8));
        assert_eq!(sp.delta4, Some(0.8));
    }

    #[test]
    fn subset_params_covering_all_targets() {
        let m = instance();
        let params = extract_dataset_params(&m);
        let a = Subset::new(vec![0, 1]).unwrap();
        let sp = extract_subset_params(&a, &m, 1.0, &params).unwrap();
        assert_eq!(sp.alpha4, None);
        assert_eq!(sp.beta4, None);
        assert_eq!(sp.overshoot, 0.0);
    }

    #[test]
    fn subset_params_saturated_caps() {
        // Huge η: the caps exceed 1 and the overshoot indicator never fires.
        let m = instance();
        let params = extract_dataset_params(&m);
        let a = Subset::new(vec![0]).unwrap();
        let sp = extract_subset_params(&a, &m, 10.0, &params).unwrap();
        assert_eq!(sp.alpha4, Some(0.6));
        assert_eq!(sp.beta4, Some(0.6));
        assert_eq!(sp.overshoot, 0.0);
    }

    #[test]
    fn subset_params_overshoot_fires() {
        // Small η makes the query cap tiny, so A's coverage of T \ A
        // overshoots it: 𝒪 = 0.6 - 0.1·0.7.
        let m = instance();
        let params = extract_dataset_params(&m);
        let a = Subset::new(vec![0]).unwrap();
        let sp = extract_subset_params(&a, &m, 0.1, &params).unwrap();
        assert!((sp.overshoot - (0.6 - 0.07)).abs() < 1e-12);
    }

    #[test]
    fn flvmi_relevance_hand_case() {
        let m = instance();
        let cfg = SmiConfig::flvmi(1.0);
        let params = extract_dataset_params(&m);
        let a = Subset::new(vec![0]).unwrap();
        let sp = extract_subset_params(&a, &m, cfg.eta, &params).unwrap();
        let value = eval_smi(&a, &m, &cfg).unwrap();
        assert!((value.value() - 1.5).abs() < 1e-12);
        let interval = relevance_bounds(&cfg, value, 1, 1, m.sizes(), &params, &sp);
        assert!(interval.preconditions_met);
        assert!((interval.lower - 1.0).abs() < 1e-9);
        assert!((interval.upper - 3.0).abs() < 1e-9);
        assert_eq!(interval.clipped_upper, 1.0);
    }

    #[test]
    fn flvmi_relevance_flags_missing_beta4() {
        let m = instance();
        let cfg = SmiConfig::flvmi(1.0);
        let params = extract_dataset_params(&m);
        let a = Subset::new(vec![0, 1]).unwrap();
        let sp = extract_subset_params(&a, &m, cfg.eta, &params).unwrap();
        let value = eval_smi(&a, &m, &cfg).unwrap();
        let interval = relevance_bounds(&cfg, value, 2, 2, m.sizes(), &params, &sp);
        assert!(!interval.preconditions_met);
        assert!(interval.lower.is_infinite());
        assert_eq!(interval.clipped_lower, 0.0);
        assert_eq!(interval.clipped_upper, 2.0);
    }

    #[test]
    fn flqmi_relevance_hand_case() {
        let m = instance();
        let cfg = SmiConfig::flqmi(1.0);
        let params = extract_dataset_params(&m);
        let a = Subset::new(vec![0, 2]).unwrap();
        let sp = extract_subset_params(&a, &m, cfg.eta, &params).unwrap();
        let value = eval_smi(&a, &m, &cfg).unwrap();
        assert!((value.value() - 1.7).abs() < 1e-12);
        let interval = relevance_bounds(&cfg, value, 1, 2, m.sizes(), &params, &sp);
        assert!(interval.preconditions_met);
        assert!((interval.lower - 1.0).abs() < 1e-9);
        assert!((interval.upper - 4.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn flqmi_relevance_degenerate_collapse() {
        // U has zero query similarity, T matches a query exactly: the
        // bounds pinch to χ itself.
        let sizes = PartitionSizes {
            targeted: 1,
            untargeted: 1,
            query: 1,
        };
        #[rustfmt::skip]
        let values = vec![
            1.0, 0.0, 1.0,
            0.0, 1.0, 0.0,
            1.0, 0.0, 1.0,
        ];
        let m = matrix(sizes, values);
        let cfg = SmiConfig::flqmi(1.0);
        let params = extract_dataset_params(&m);
        let a = Subset::new(vec![0]).unwrap();
        let sp = extract_subset_params(&a, &m, cfg.eta, &params).unwrap();
        let value = eval_smi(&a, &m, &cfg).unwrap();
        assert_eq!(value.value(), 2.0);
        let interval = relevance_bounds(&cfg, value, 1, 1, m.sizes(), &params, &sp);
        assert!(interval.preconditions_met);
        assert!((interval.lower - 1.0).abs() < 1e-9);
        assert!((interval.upper - 1.0).abs() < 1e-9);
    }

    #[test]
    fn gcmi_relevance_hand_case_and_collapse() {
        let m = instance();
        let cfg = SmiConfig::gcmi(1.0);
        let params = extract_dataset_params(&m);
        let a = Subset::new(vec![0, 2]).unwrap();
        let sp = extract_subset_params(&a, &m, cfg.eta, &params).unwrap();
        let value = eval_smi(&a, &m, &cfg).unwrap();
        assert!((value.value() - 1.8).abs() < 1e-12);
        let interval = relevance_bounds(&cfg, value, 1, 2, m.sizes(), &params, &sp);
        assert!(interval.preconditions_met);
        assert!((interval.lower - 1.0).abs() < 1e-9);
        assert!((interval.upper - 7.0 / 6.0).abs() < 1e-9);

        // Collapsed ranges (singleton T and U): lower == upper.
        let sizes = PartitionSizes {
            targeted: 1,
            untargeted: 1,
            query: 1,
        };
        #[rustfmt::skip]
        let values = vec![
            1.0, 0.5, 0.9,
            0.5, 1.0, 0.1,
            0.9, 0.1, 1.0,
        ];
        let m2 = matrix(sizes, values);
        let p2 = extract_dataset_params(&m2);
        let a2 = Subset::new(vec![0]).unwrap();
        let sp2 = extract_subset_params(&a2, &m2, 1.0, &p2).unwrap();
        let v2 = eval_smi(&a2, &m2, &cfg).unwrap();
        let i2 = relevance_bounds(&cfg, v2, 1, 1, m2.sizes(), &p2, &sp2);
        assert!(i2.preconditions_met);
        assert!((i2.lower - 1.0).abs() < 1e-9);
        assert!((i2.upper - 1.0).abs() < 1e-9);
    }

    #[test]
    fn com_relevance_hand_case() {
        let m = instance();
        let cfg = SmiConfig::com(1.0, PsiKind::Sqrt);
        let params = extract_dataset_params(&m);
        let a = Subset::new(vec![0, 2]).unwrap();
        let sp = extract_subset_params(&a, &m, cfg.eta, &params).unwrap();
        let value = eval_smi(&a, &m, &cfg).unwrap();
        let interval = relevance_bounds(&cfg, value, 1, 2, m.sizes(), &params, &sp);
        assert!(interval.preconditions_met);
        // The observed value sits exactly on f_h(1); only χ = 1 is feasible.
        assert_eq!(interval.lower, 1.0);
        assert_eq!(interval.upper, 1.0);
    }

    #[test]
    fn flvmi_coverage_hand_case() {
        let m = instance();
        let cfg = SmiConfig::flvmi(1.0);
        let params = extract_dataset_params(&m);
        let a = Subset::new(vec![0, 2]).unwrap();
        let sp = extract_subset_params(&a, &m, cfg.eta, &params).unwrap();
        let value = eval_smi(&a, &m, &cfg).unwrap();
        assert!((value.value() - 1.5).abs() < 1e-12);
        let interval = coverage_bounds(&cfg, value, 1, 2, m.sizes(), &params, &sp);
        assert!(interval.preconditions_met);
        // δ_avg^{T\A} = 0.6 and the lower bound is tight here.
        assert!((interval.lower - 0.6).abs() < 1e-9);
        assert!((interval.upper - 0.7).abs() < 1e-9);
    }

    #[test]
    fn flvmi_coverage_preconditions() {
        let m = instance();
        let cfg = SmiConfig::flvmi(1.0);
        let params = extract_dataset_params(&m);
        let a = Subset::new(vec![0, 1]).unwrap();
        let sp = extract_subset_params(&a, &m, cfg.eta, &params).unwrap();
        let value = eval_smi(&a, &m, &cfg).unwrap();
        // χ = B: no untargeted member, so the bound does not apply.
        let interval = coverage_bounds(&cfg, value, 2, 2, m.sizes(), &params, &sp);
        assert!(!interval.preconditions_met);
    }

    #[test]
    fn flqmi_coverage_hand_case() {
        let m = instance();
        let cfg = SmiConfig::flqmi(1.0);
        let params = extract_dataset_params(&m);
        let a = Subset::new(vec![0, 2]).unwrap();
        let sp = extract_subset_params(&a, &m, cfg.eta, &params).unwrap();
        let value = eval_smi(&a, &m, &cfg).unwrap();
        let interval = coverage_bounds(&cfg, value, 1, 2, m.sizes(), &params, &sp);
        assert!(interval.preconditions_met);
        assert!((interval.lower - 0.8).abs() < 1e-9);
        assert!((interval.upper - 0.9).abs() < 1e-9);
    }

    #[test]
    fn flqmi_coverage_zero_attenuation() {
        // No ground-query similarity at all: both bounds equal I_F / |Q|.
        let sizes = PartitionSizes {
            targeted: 1,
            untargeted: 1,
            query: 1,
        };
        #[rustfmt::skip]
        let values = vec![
            1.0, 0.5, 0.0,
            0.5, 1.0, 0.0,
            0.0, 0.0, 1.0,
        ];
        let m = matrix(sizes, values);
        let cfg = SmiConfig::flqmi(3.0);
        let params = extract_dataset_params(&m);
        let a = Subset::new(vec![0]).unwrap();
        let sp = extract_subset_params(&a, &m, cfg.eta, &params).unwrap();
        let value = eval_smi(&a, &m, &cfg).unwrap();
        let interval = coverage_bounds(&cfg, value, 1, 1, m.sizes(), &params, &sp);
        assert!(interval.preconditions_met);
        assert_eq!(interval.lower, value.value());
        assert_eq!(interval.upper, value.value());
    }

    #[test]
    fn gcmi_coverage_hand_case() {
        // T = {t1, t2}, U = {u1, u2}, Q = {q}; λ = 1/2 so 2λ = 1.
        let sizes = PartitionSizes {
            targeted: 2,
            untargeted: 2,
            query: 1,
        };
        #[rustfmt::skip]
        let values = vec![
            1.0, 0.5, 0.5, 0.5, 0.9,
            0.5, 1.0, 0.5, 0.5, 0.7,
            0.5, 0.5, 1.0, 0.5, 0.2,
            0.5, 0.5, 0.5, 1.0, 0.1,
            0.9, 0.7, 0.2, 0.1, 1.0,
        ];
        let m = matrix(sizes, values);
        let cfg = SmiConfig::gcmi(0.5);
        let params = extract_dataset_params(&m);
        let a = Subset::new(vec![0, 2]).unwrap();
        let sp = extract_subset_params(&a, &m, cfg.eta, &params).unwrap();
        let value = eval_smi(&a, &m, &cfg).unwrap();
        assert!((value.value() - 1.1).abs() < 1e-12);
        let interval = coverage_bounds(&cfg, value, 1, 2, m.sizes(), &params, &sp);
        assert!(interval.preconditions_met);
        // lower = 1.1 - 2·0.2 - (0.9 - 0.2) = 0; upper = 1.1 - 0.1 + 0.7 - 0.6.
        assert!(interval.lower.abs() < 1e-9);
        assert!((interval.upper - 1.1).abs() < 1e-9);
        assert_eq!(interval.clipped_upper, 1.0);
    }

    #[test]
    fn com_coverage_envelope_hand_case() {
        let m = instance();
        let cfg = SmiConfig::com(1.0, PsiKind::Sqrt);
        let params = extract_dataset_params(&m);
        let a = Subset::new(vec![0, 2]).unwrap();
        let sp = extract_subset_params(&a, &m, cfg.eta, &params).unwrap();
        let value = eval_smi(&a, &m, &cfg).unwrap();
        let interval = coverage_bounds(&cfg, value, 1, 2, m.sizes(), &params, &sp);
        assert!(interval.heuristic);
        assert!(interval.preconditions_met);
        // All singleton statistics: the common-value envelope is exact at
        // its lower end, which recovers δ_avg^Q = 0.8.
        assert!((interval.lower - 0.8).abs() < 1e-9);
        // The upper end solves f_l(x) = I_F / |Q|.
        let curve =
            ComCoverageCurve::from_params(&cfg, 1, 2, m.query_len(), &params, &sp).unwrap();
        assert!((curve.f_lower(interval.upper) - value.value()).abs() < 1e-9);
        assert!(interval.lower <= interval.upper);
    }

    #[test]
    fn com_coverage_monotone_envelope() {
        let m = instance();
        let cfg = SmiConfig::com(2.0, PsiKind::Log1p);
        let params = extract_dataset_params(&m);
        let a = Subset::new(vec![0, 2]).unwrap();
        let sp = extract_subset_params(&a, &m, cfg.eta, &params).unwrap();
        let curve =
            ComCoverageCurve::from_params(&cfg, 1, 2, m.query_len(), &params, &sp).unwrap();
        let mut prev_l = f64::NEG_INFINITY;
        let mut prev_h = f64::NEG_INFINITY;
        for step in 0..=100 {
            let x = step as f64 / 100.0;
            let l = curve.f_lower(x);
            let h = curve.f_upper(x);
            assert!(l > prev_l && h > prev_h, "envelopes must strictly increase");
            assert!(l <= h + 1e-12);
            prev_l = l;
            prev_h = h;
        }
    }
}
