//! Similarity-based submodular mutual information for targeted subset
//! selection, with verifiable relevance and coverage bounds.
//!
//! Given a ground set split into targeted instances `T` and untargeted
//! instances `U`, plus an exemplar query set `Q`, the objectives in
//! [`smi`] score how much information a candidate subset `A` shares with
//! `Q` through pairwise similarities. Two questions then matter about a
//! subset the objective likes:
//!
//! - **relevance** — how many targeted instances did it pick up
//!   (χ = |A ∩ T|)?
//! - **coverage** — how close is each query (or leftover targeted point)
//!   to its best match in `A` (δ_avg)?
//!
//! The [`bounds`] module turns an observed objective value into provable
//! brackets on both quantities from a handful of similarity statistics,
//! and [`metrics`] measures the quantities themselves so the brackets can
//! be verified empirically. [`greedy`] maximizes any of the objectives
//! under a cardinality budget with the usual `(1 - 1/e)` guarantee, and
//! [`synthgen`] produces the seeded Gaussian-cluster scenarios the bound
//! experiments run on.
//!
//! Everything is deterministic given explicit seeds, and all types are
//! immutable after construction.

pub mod bounds;
pub mod dataset;
pub mod error;
pub mod greedy;
pub mod metrics;
pub mod similarity;
pub mod smi;
pub mod synthgen;

pub use bounds::{
    coverage_bounds, extract_dataset_params, extract_subset_params, relevance_bounds,
    BoundInterval, ComCoverageCurve, ComRelevanceCurve, DatasetBoundParams, SubsetBoundParams,
};
pub use dataset::{
    subset_partition_counts, validate_dataset, LabeledDataset, Partition, PartitionSizes, Point,
    SimilarityMatrix, Subset,
};
pub use error::{Error, Result};
pub use greedy::{brute_force_best, greedy_select, greedy_select_naive, SelectionResult};
pub use metrics::{delta_avg, spearman_ordinal, DeltaTarget, SampleRecord};
pub use similarity::{build_similarity_matrix, kernel_value, KernelConfig};
pub use smi::{eval_smi, marginal_gain, PsiKind, SmiConfig, SmiEvaluator, SmiFunction, SmiValue};
pub use synthgen::{
    generate_dataset, one_target_preset, preset_by_name, sample_subset_uniform_chi,
    two_target_preset, ClusterRole, ClusterSpec, ScenarioConfig,
};
