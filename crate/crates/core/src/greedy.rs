//! Cardinality-constrained greedy maximization, plus a brute-force oracle.
//!
//! [`greedy_select`] runs lazy greedy: cached marginal gains live in a
//! max-heap and are only recomputed when an entry surfaces with a stale
//! round stamp. Because every objective here is submodular, a stale gain
//! can only overestimate, so a fresh entry at the top of the heap is the
//! true arg-max. Ties break toward the lowest ground index, matching
//! [`greedy_select_naive`] exactly.
//!
//! [`brute_force_best`] enumerates all `C(|V|, B)` subsets in lexicographic
//! order and is intended as a test oracle for small instances.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::dataset::{SimilarityMatrix, Subset};
use crate::error::{Error, Result};
use crate::smi::{eval_smi, SmiConfig, SmiEvaluator};

/// Cap on `C(|V|, B)` for brute-force enumeration.
const ENUMERATION_CAP: u64 = 1_000_000;

/// Result of a selection run.
#[derive(Debug, Clone)]
pub struct SelectionResult {
    pub subset: Subset,
    pub objective: f64,
    /// `(ground index, marginal gain)` in selection order.
    pub gain_trace: Vec<(usize, f64)>,
}

#[derive(Debug)]
struct HeapEntry {
    gain: f64,
    index: usize,
    round: usize,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.gain == other.gain && self.index == other.index
    }
}

impl Eq for HeapEntry {}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // Larger gain first; equal gains surface the smaller index.
        self.gain
            .total_cmp(&other.gain)
            .then_with(|| other.index.cmp(&self.index))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn check_budget(matrix: &SimilarityMatrix, budget: usize) -> Result<()> {
    if budget > matrix.ground_len() {
        return Err(Error::BudgetTooLarge {
            budget,
            len: matrix.ground_len(),
        });
    }
    Ok(())
}

fn finish(evaluator: &SmiEvaluator<'_>, gain_trace: Vec<(usize, f64)>) -> Result<SelectionResult> {
    let subset = evaluator.subset()?;
    let objective = if subset.is_empty() {
        0.0
    } else {
        evaluator.objective()
    };
    Ok(SelectionResult {
        subset,
        objective,
        gain_trace,
    })
}

/// Lazy greedy maximization of `I_F(·; Q)` under a cardinality budget.
pub fn greedy_select(
    matrix: &SimilarityMatrix,
    cfg: &SmiConfig,
    budget: usize,
) -> Result<SelectionResult> {
    check_budget(matrix, budget)?;
    let mut evaluator = SmiEvaluator::new(matrix, *cfg);
    let mut gain_trace = Vec::with_capacity(budget);
    let mut heap = BinaryHeap::with_capacity(matrix.ground_len());
    for index in 0..matrix.ground_len() {
        heap.push(HeapEntry {
            gain: evaluator.gain(index)?,
            index,
            round: 0,
        });
    }
    let mut round = 0usize;
    while gain_trace.len() < budget {
        let Some(top) = heap.pop() else {
            break;
        };
        if top.round == round {
            evaluator.insert(top.index)?;
            gain_trace.push((top.index, top.gain));
            round += 1;
        } else {
            heap.push(HeapEntry {
                gain: evaluator.gain(top.index)?,
                index: top.index,
                round,
            });
        }
    }
    finish(&evaluator, gain_trace)
}

/// Plain greedy: rescans every candidate each round. Reference
/// implementation for the lazy variant, same tie rule (lowest index wins).
pub fn greedy_select_naive(
    matrix: &SimilarityMatrix,
    cfg: &SmiConfig,
    budget: usize,
) -> Result<SelectionResult> {
    check_budget(matrix, budget)?;
    let mut evaluator = SmiEvaluator::new(matrix, *cfg);
    let mut gain_trace = Vec::with_capacity(budget);
    let mut selected = vec![false; matrix.ground_len()];
    for _ in 0..budget {
        let mut best: Option<(usize, f64)> = None;
        for index in (0..matrix.ground_len()).filter(|&i| !selected[i]) {
            let gain = evaluator.gain(index)?;
            if best.map(|(_, g)| gain > g).unwrap_or(true) {
                best = Some((index, gain));
            }
        }
        let Some((index, gain)) = best else {
            break;
        };
        evaluator.insert(index)?;
        selected[index] = true;
        gain_trace.push((index, gain));
    }
    finish(&evaluator, gain_trace)
}

fn binomial(n: u64, k: u64) -> u64 {
    let k = k.min(n - k);
    let mut result: u128 = 1;
    for i in 0..k {
        result = result * (n - i) as u128 / (i + 1) as u128;
        if result > ENUMERATION_CAP as u128 * 2 {
            return u64::MAX;
        }
    }
    result.min(u64::MAX as u128) as u64
}

/// Advance `combo` to the next k-combination of {0, …, n-1} in
/// lexicographic order; false once exhausted.
fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if combo[i] != i + n - k {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Exact maximizer by exhaustive enumeration; ties resolve to the
/// lexicographically first subset.
pub fn brute_force_best(
    matrix: &SimilarityMatrix,
    cfg: &SmiConfig,
    budget: usize,
) -> Result<SelectionResult> {
    check_budget(matrix, budget)?;
    let n = matrix.ground_len();
    if binomial(n as u64, budget as u64) > ENUMERATION_CAP {
        return Err(Error::InstanceTooLarge {
            len: n,
            budget,
            max: ENUMERATION_CAP,
        });
    }
    if budget == 0 {
        return Ok(SelectionResult {
            subset: Subset::new(vec![])?,
            objective: 0.0,
            gain_trace: vec![],
        });
    }

    let mut combo: Vec<usize> = (0..budget).collect();
    let mut best: Option<(Vec<usize>, f64)> = None;
    loop {
        let subset = Subset::new(combo.clone())?;
        let value = eval_smi(&subset, matrix, cfg)?.value();
        if best.as_ref().map(|(_, v)| value > *v).unwrap_or(true) {
            best = Some((combo.clone(), value));
        }
        if !next_combination(&mut combo, n) {
            break;
        }
    }
    let (members, objective) = best.expect("at least one combination evaluated");
    Ok(SelectionResult {
        subset: Subset::new(members)?,
        objective,
        gain_trace: vec![],
    })
}
