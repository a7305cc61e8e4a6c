//! Submodular mutual information objectives over pairwise similarities.
//!
//! Four instantiations are supported, each a closed form over a similarity
//! matrix `s`, a ground subset `A`, and the query block `Q`:
//!
//! ```text
//! FLVMI  Σ_{i∈V} min(max_{j∈A} s_ij, η · max_{j∈Q} s_ij)          V = T ∪ U
//! FLQMI  Σ_{i∈Q} max_{j∈A} s_ij + η · Σ_{i∈A} max_{j∈Q} s_ij
//! GCMI   2λ · Σ_{i∈A} Σ_{j∈Q} s_ij
//! COM    η · Σ_{i∈A} ψ(Σ_{j∈Q} s_ij) + Σ_{i∈Q} ψ(Σ_{j∈A} s_ij)
//! ```
//!
//! With `s_ij ∈ [0, 1]` and positive `η`, `λ`, every one of these is
//! monotone submodular in `A` for a fixed query block, so greedy
//! maximization carries the usual `(1 - 1/e)` guarantee.
//!
//! [`eval_smi`] is the definitional closed form. [`SmiEvaluator`] maintains
//! per-row running maxima/sums so greedy selection can query marginal gains
//! in `O(|V| + |Q|)` instead of re-evaluating from scratch; its results are
//! checked against the closed form in tests.

use serde::{Deserialize, Serialize};

use crate::dataset::{SimilarityMatrix, Subset};
use crate::error::{Error, Result};

/// Which SMI instantiation to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum SmiFunction {
    Flvmi,
    Flqmi,
    Gcmi,
    Com,
}

impl SmiFunction {
    pub const ALL: [SmiFunction; 4] = [
        SmiFunction::Flvmi,
        SmiFunction::Flqmi,
        SmiFunction::Gcmi,
        SmiFunction::Com,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SmiFunction::Flvmi => "FLVMI",
            SmiFunction::Flqmi => "FLQMI",
            SmiFunction::Gcmi => "GCMI",
            SmiFunction::Com => "COM",
        }
    }
}

impl std::fmt::Display for SmiFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Strictly increasing concave function used by COM.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum PsiKind {
    Sqrt,
    Log1p,
}

impl PsiKind {
    #[inline]
    pub fn apply(self, x: f64) -> f64 {
        match self {
            PsiKind::Sqrt => x.sqrt(),
            PsiKind::Log1p => x.ln_1p(),
        }
    }
}

/// Function selector plus hyperparameters.
///
/// `lambda` only matters for GCMI and `psi` only for COM; both carry
/// defaults so configs can omit them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SmiConfig {
    pub function: SmiFunction,
    #[serde(default = "default_scale")]
    pub eta: f64,
    #[serde(default = "default_scale")]
    pub lambda: f64,
    #[serde(default = "default_psi")]
    pub psi: PsiKind,
}

fn default_scale() -> f64 {
    1.0
}

fn default_psi() -> PsiKind {
    PsiKind::Sqrt
}

impl SmiConfig {
    pub fn new(function: SmiFunction) -> Self {
        Self {
            function,
            eta: 1.0,
            lambda: 1.0,
            psi: PsiKind::Sqrt,
        }
    }

    pub fn flvmi(eta: f64) -> Self {
        Self {
            eta,
            ..Self::new(SmiFunction::Flvmi)
        }
    }

    pub fn flqmi(eta: f64) -> Self {
        Self {
            eta,
            ..Self::new(SmiFunction::Flqmi)
        }
    }

    pub fn gcmi(lambda: f64) -> Self {
        Self {
            lambda,
            ..Self::new(SmiFunction::Gcmi)
        }
    }

    pub fn com(eta: f64, psi: PsiKind) -> Self {
        Self {
            eta,
            psi,
            ..Self::new(SmiFunction::Com)
        }
    }

    pub fn with_eta(self, eta: f64) -> Self {
        Self { eta, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.eta.is_finite() || self.eta <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "eta must be positive, got {}",
                self.eta
            )));
        }
        if !self.lambda.is_finite() || self.lambda <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "lambda must be positive, got {}",
                self.lambda
            )));
        }
        Ok(())
    }
}

/// An SMI objective value. Finite and non-negative for similarities in
/// `[0, 1]` and positive hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct SmiValue(pub f64);

impl SmiValue {
    pub fn value(self) -> f64 {
        self.0
    }
}

fn check_subset(subset: &Subset, matrix: &SimilarityMatrix) -> Result<()> {
    if subset.is_empty() {
        return Err(Error::EmptySubset);
    }
    subset.check_range(matrix.ground_len())
}

/// `max_{j∈A} s_ij` for matrix row `i`; 0 for an empty subset.
fn subset_max(matrix: &SimilarityMatrix, row: usize, subset: &Subset) -> f64 {
    subset
        .members()
        .iter()
        .fold(0.0, |acc, &j| acc.max(matrix.get(row, j)))
}

/// `Σ_{j∈A} s_ij` for matrix row `i`.
fn subset_sum(matrix: &SimilarityMatrix, row: usize, subset: &Subset) -> f64 {
    subset.members().iter().map(|&j| matrix.get(row, j)).sum()
}

/// `max_{j∈Q} s_ij` for matrix row `i`.
fn query_max(matrix: &SimilarityMatrix, row: usize) -> f64 {
    (0..matrix.query_len()).fold(0.0, |acc, q| acc.max(matrix.get(row, matrix.query_row(q))))
}

/// `Σ_{j∈Q} s_ij` for matrix row `i`.
fn query_sum(matrix: &SimilarityMatrix, row: usize) -> f64 {
    (0..matrix.query_len())
        .map(|q| matrix.get(row, matrix.query_row(q)))
        .sum()
}

/// Evaluate `I_F(A; Q)` for the configured instantiation.
pub fn eval_smi(subset: &Subset, matrix: &SimilarityMatrix, cfg: &SmiConfig) -> Result<SmiValue> {
    check_subset(subset, matrix)?;
    let value = match cfg.function {
        SmiFunction::Flvmi => (0..matrix.ground_len())
            .map(|i| {
                subset_max(matrix, i, subset).min(cfg.eta * query_max(matrix, i))
            })
            .sum(),
        SmiFunction::Flqmi => {
            let query_side: f64 = (0..matrix.query_len())
                .map(|q| subset_max(matrix, matrix.query_row(q), subset))
                .sum();
            let subset_side: f64 = subset
                .members()
                .iter()
                .map(|&i| query_max(matrix, i))
                .sum();
            query_side + cfg.eta * subset_side
        }
        SmiFunction::Gcmi => {
            let cross: f64 = subset
                .members()
                .iter()
                .map(|&i| query_sum(matrix, i))
                .sum();
            2.0 * cfg.lambda * cross
        }
        SmiFunction::Com => {
            let subset_side: f64 = subset
                .members()
                .iter()
                .map(|&i| cfg.psi.apply(query_sum(matrix, i)))
                .sum();
            let query_side: f64 = (0..matrix.query_len())
                .map(|q| cfg.psi.apply(subset_sum(matrix, matrix.query_row(q), subset)))
                .sum();
            cfg.eta * subset_side + query_side
        }
    };
    Ok(SmiValue(value))
}

/// `I_F(A ∪ {c}; Q) - I_F(A; Q)`; for an empty base set this is simply
/// `I_F({c}; Q)`.
pub fn marginal_gain(
    subset: &Subset,
    candidate: usize,
    matrix: &SimilarityMatrix,
    cfg: &SmiConfig,
) -> Result<f64> {
    if candidate >= matrix.ground_len() {
        return Err(Error::IndexOutOfRange {
            index: candidate,
            len: matrix.ground_len(),
        });
    }
    let grown = subset.with(candidate)?;
    let after = eval_smi(&grown, matrix, cfg)?.value();
    let before = if subset.is_empty() {
        0.0
    } else {
        eval_smi(subset, matrix, cfg)?.value()
    };
    Ok(after - before)
}

/// Incremental objective evaluator used by greedy selection.
///
/// Holds per-row query statistics (fixed) and per-row running maxima/sums
/// over the current selection (mutated by [`SmiEvaluator::insert`]). Not
/// shared across threads during a run.
#[derive(Debug, Clone)]
pub struct SmiEvaluator<'a> {
    matrix: &'a SimilarityMatrix,
    cfg: SmiConfig,
    /// `max_{j∈Q} s_ij` per ground row.
    qmax: Vec<f64>,
    /// `Σ_{j∈Q} s_ij` per ground row.
    qsum: Vec<f64>,
    /// `max_{j∈A} s_ij` per ground row (FLVMI state).
    ground_amax: Vec<f64>,
    /// `max_{j∈A} s_qj` per query row (FLQMI state).
    query_amax: Vec<f64>,
    /// `Σ_{j∈A} s_qj` per query row (COM state).
    query_asum: Vec<f64>,
    members: Vec<usize>,
}

impl<'a> SmiEvaluator<'a> {
    pub fn new(matrix: &'a SimilarityMatrix, cfg: SmiConfig) -> Self {
        let ground = matrix.ground_len();
        let query = matrix.query_len();
        let qmax = (0..ground).map(|i| query_max(matrix, i)).collect();
        let qsum = (0..ground).map(|i| query_sum(matrix, i)).collect();
        Self {
            matrix,
            cfg,
            qmax,
            qsum,
            ground_amax: vec![0.0; ground],
            query_amax: vec![0.0; query],
            query_asum: vec![0.0; query],
            members: Vec::new(),
        }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn subset(&self) -> Result<Subset> {
        Subset::new(self.members.clone())
    }

    /// Marginal gain of adding `candidate` to the current selection.
    pub fn gain(&self, candidate: usize) -> Result<f64> {
        let ground = self.matrix.ground_len();
        if candidate >= ground {
            return Err(Error::IndexOutOfRange {
                index: candidate,
                len: ground,
            });
        }
        if self.members.contains(&candidate) {
            return Err(Error::AlreadyMember(candidate));
        }
        let gain = match self.cfg.function {
            SmiFunction::Flvmi => (0..ground)
                .map(|i| {
                    let cap = self.cfg.eta * self.qmax[i];
                    let before = self.ground_amax[i].min(cap);
                    let after = self.ground_amax[i].max(self.matrix.get(i, candidate)).min(cap);
                    after - before
                })
                .sum(),
            SmiFunction::Flqmi => {
                let query_side: f64 = (0..self.matrix.query_len())
                    .map(|q| {
                        let s = self.matrix.get(self.matrix.query_row(q), candidate);
                        (s - self.query_amax[q]).max(0.0)
                    })
                    .sum();
                query_side + self.cfg.eta * self.qmax[candidate]
            }
            SmiFunction::Gcmi => 2.0 * self.cfg.lambda * self.qsum[candidate],
            SmiFunction::Com => {
                let query_side: f64 = (0..self.matrix.query_len())
                    .map(|q| {
                        let s = self.matrix.get(self.matrix.query_row(q), candidate);
                        self.cfg.psi.apply(self.query_asum[q] + s)
                            - self.cfg.psi.apply(self.query_asum[q])
                    })
                    .sum();
                self.cfg.eta * self.cfg.psi.apply(self.qsum[candidate]) + query_side
            }
        };
        Ok(gain)
    }

    /// Commit `candidate` into the selection and update the running state.
    pub fn insert(&mut self, candidate: usize) -> Result<()> {
        let ground = self.matrix.ground_len();
        if candidate >= ground {
            return Err(Error::IndexOutOfRange {
                index: candidate,
                len: ground,
            });
        }
        if self.members.contains(&candidate) {
            return Err(Error::AlreadyMember(candidate));
        }
        for i in 0..ground {
            let s = self.matrix.get(i, candidate);
            if s > self.ground_amax[i] {
                self.ground_amax[i] = s;
            }
        }
        for q in 0..self.matrix.query_len() {
            let s = self.matrix.get(self.matrix.query_row(q), candidate);
            if s > self.query_amax[q] {
                self.query_amax[q] = s;
            }
            self.query_asum[q] += s;
        }
        self.members.push(candidate);
        Ok(())
    }

    /// Objective of the current selection, recomputed from the cached rows.
    pub fn objective(&self) -> f64 {
        if self.members.is_empty() {
            return 0.0;
        }
        match self.cfg.function {
            SmiFunction::Flvmi => (0..self.matrix.ground_len())
                .map(|i| self.ground_amax[i].min(self.cfg.eta * self.qmax[i]))
                .sum(),
            SmiFunction::Flqmi => {
                let query_side: f64 = self.query_amax.iter().sum();
                let subset_side: f64 = self.members.iter().map(|&i| self.qmax[i]).sum();
                query_side + self.cfg.eta * subset_side
            }
            SmiFunction::Gcmi => {
                2.0 * self.cfg.lambda
                    * self.members.iter().map(|&i| self.qsum[i]).sum::<f64>()
            }
            SmiFunction::Com => {
                let subset_side: f64 = self
                    .members
                    .iter()
                    .map(|&i| self.cfg.psi.apply(self.qsum[i]))
                    .sum();
                let query_side: f64 = self
                    .query_asum
                    .iter()
                    .map(|&s| self.cfg.psi.apply(s))
                    .sum();
                self.cfg.eta * subset_side + query_side
            }
        }
    }
}
