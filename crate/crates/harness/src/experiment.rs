//! The experiment pipeline: generate a scenario, draw uniform-χ subsets,
//! evaluate every configured SMI function, extract bound intervals, and
//! compute rank correlations between objective values and the relevance
//! and coverage metrics.
//!
//! Coverage is measured the way each function's bound targets it: FLVMI
//! against `δ_avg^{T\A}` (the targeted instances it left behind), the
//! others against `δ_avg^Q`.
//!
//! Everything is deterministic given the scenario seed; subsets are drawn
//! from a stream derived from the seed so dataset generation and sampling
//! never interleave.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use smi_core::{
    build_similarity_matrix, coverage_bounds, delta_avg, eval_smi, extract_dataset_params,
    extract_subset_params, generate_dataset, relevance_bounds, sample_subset_uniform_chi,
    spearman_ordinal, subset_partition_counts, BoundInterval, DatasetBoundParams, DeltaTarget,
    Error as CoreError, LabeledDataset, PartitionSizes, SampleRecord, SimilarityMatrix,
    SmiConfig, SmiFunction, SubsetBoundParams,
};

use crate::config::ExperimentConfig;
use crate::error::Result;

/// Offset applied to the scenario seed for the subset-sampling stream.
const SAMPLE_STREAM_SALT: u64 = 0x9e37_79b9_7f4a_7c15;

/// Which metric a correlation row measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricKind {
    Relevance,
    Coverage,
}

impl std::fmt::Display for MetricKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MetricKind::Relevance => f.write_str("relevance"),
            MetricKind::Coverage => f.write_str("coverage"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CorrelationRow {
    pub dataset: String,
    pub function: SmiFunction,
    pub eta: f64,
    pub metric: MetricKind,
    pub spearman: f64,
}

/// Spearman correlations keyed by (dataset, function, η, metric).
#[derive(Debug, Clone, Default)]
pub struct CorrelationTable {
    pub rows: Vec<CorrelationRow>,
}

impl CorrelationTable {
    pub fn get(&self, function: SmiFunction, eta: f64, metric: MetricKind) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| r.function == function && r.eta == eta && r.metric == metric)
            .map(|r| r.spearman)
    }
}

/// Per-function evaluation of the shared sample stream.
#[derive(Debug, Clone)]
pub struct FunctionRun {
    pub cfg: SmiConfig,
    pub records: Vec<SampleRecord>,
    pub subset_params: Vec<SubsetBoundParams>,
    pub relevance: Vec<BoundInterval>,
    pub coverage: Vec<BoundInterval>,
}

impl FunctionRun {
    /// The coverage metric this function's bound speaks about.
    pub fn coverage_metric(&self, record: &SampleRecord) -> Option<f64> {
        match self.cfg.function {
            SmiFunction::Flvmi => record.delta_avg_t_minus_a,
            _ => Some(record.delta_avg_q),
        }
    }
}

/// Everything one experiment run produced.
#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub dataset_name: String,
    pub budget: usize,
    pub sizes: PartitionSizes,
    pub dataset_params: DatasetBoundParams,
    pub runs: Vec<FunctionRun>,
    pub correlations: CorrelationTable,
}

struct Prepared {
    dataset: LabeledDataset,
    matrix: SimilarityMatrix,
    params: DatasetBoundParams,
}

fn prepare(config: &ExperimentConfig) -> Result<Prepared> {
    let dataset = generate_dataset(&config.scenario)?;
    let kernel = config.kernel.resolve(&dataset)?;
    let matrix = build_similarity_matrix(&dataset, &kernel)?;
    let params = extract_dataset_params(&matrix);
    Ok(Prepared {
        dataset,
        matrix,
        params,
    })
}

fn run_functions(
    config: &ExperimentConfig,
    prepared: &Prepared,
    functions: &[SmiConfig],
) -> Result<Vec<FunctionRun>> {
    let budget = config.scenario.budget;
    let sizes = prepared.matrix.sizes();

    let mut rng =
        ChaCha8Rng::seed_from_u64(config.scenario.seed.wrapping_add(SAMPLE_STREAM_SALT));
    let mut samples = Vec::with_capacity(config.scenario.samples);
    for _ in 0..config.scenario.samples {
        let subset = sample_subset_uniform_chi(&prepared.dataset, budget, &mut rng)?;
        let (chi, _) = subset_partition_counts(&subset, &prepared.dataset)?;
        let delta_q = delta_avg(&subset, DeltaTarget::Query, &prepared.matrix)?;
        let delta_tma = match delta_avg(&subset, DeltaTarget::TMinusA, &prepared.matrix) {
            Ok(v) => Some(v),
            Err(CoreError::EmptyTargetSet) => None,
            Err(e) => return Err(e.into()),
        };
        samples.push((subset, chi, delta_q, delta_tma));
    }

    let mut runs = Vec::with_capacity(functions.len());
    for cfg in functions {
        let mut records = Vec::with_capacity(samples.len());
        let mut subset_params = Vec::with_capacity(samples.len());
        let mut relevance = Vec::with_capacity(samples.len());
        let mut coverage = Vec::with_capacity(samples.len());
        for (subset, chi, delta_q, delta_tma) in &samples {
            let value = eval_smi(subset, &prepared.matrix, cfg)?;
            let sp = extract_subset_params(subset, &prepared.matrix, cfg.eta, &prepared.params)?;
            relevance.push(relevance_bounds(
                cfg,
                value,
                *chi,
                budget,
                sizes,
                &prepared.params,
                &sp,
            ));
            coverage.push(coverage_bounds(
                cfg,
                value,
                *chi,
                budget,
                sizes,
                &prepared.params,
                &sp,
            ));
            subset_params.push(sp);
            records.push(SampleRecord {
                subset: subset.clone(),
                smi_value: value.value(),
                chi: *chi,
                delta_avg_q: *delta_q,
                delta_avg_t_minus_a: *delta_tma,
            });
        }
        runs.push(FunctionRun {
            cfg: *cfg,
            records,
            subset_params,
            relevance,
            coverage,
        });
    }
    Ok(runs)
}

fn correlations(dataset: &str, runs: &[FunctionRun]) -> Result<CorrelationTable> {
    let mut rows = Vec::new();
    for run in runs {
        if run.records.len() < 2 {
            continue;
        }
        let values: Vec<f64> = run.records.iter().map(|r| r.smi_value).collect();
        let chis: Vec<f64> = run.records.iter().map(|r| r.chi as f64).collect();
        rows.push(CorrelationRow {
            dataset: dataset.to_owned(),
            function: run.cfg.function,
            eta: run.cfg.eta,
            metric: MetricKind::Relevance,
            spearman: spearman_ordinal(&values, &chis)?,
        });
        let pairs: Vec<(f64, f64)> = run
            .records
            .iter()
            .filter_map(|r| run.coverage_metric(r).map(|d| (r.smi_value, d)))
            .collect();
        if pairs.len() >= 2 {
            let (xs, ys): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
            rows.push(CorrelationRow {
                dataset: dataset.to_owned(),
                function: run.cfg.function,
                eta: run.cfg.eta,
                metric: MetricKind::Coverage,
                spearman: spearman_ordinal(&xs, &ys)?,
            });
        }
    }
    Ok(CorrelationTable { rows })
}

/// Run the configured functions over one shared uniform-χ sample stream.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    config.validate()?;
    let prepared = prepare(config)?;
    let runs = run_functions(config, &prepared, &config.functions)?;
    let correlations = correlations(&config.scenario.name, &runs)?;
    Ok(ExperimentOutput {
        dataset_name: config.scenario.name.clone(),
        budget: config.scenario.budget,
        sizes: prepared.matrix.sizes(),
        dataset_params: prepared.params,
        runs,
        correlations,
    })
}

/// Correlations for every (η-bearing function, η) pair in the sweep, over
/// the same sample stream as `run_experiment`.
pub fn run_eta_sweep(config: &ExperimentConfig) -> Result<CorrelationTable> {
    config.validate()?;
    if config.eta_sweep.is_empty() {
        return Err(crate::error::HarnessError::Config(
            "eta sweep requested with an empty sweep list".into(),
        ));
    }
    // GCMI has no eta; sweep the functions that do, keeping each function's
    // other hyperparameters from the main config.
    let mut bases: Vec<SmiConfig> = Vec::new();
    for cfg in &config.functions {
        if cfg.function != SmiFunction::Gcmi && !bases.iter().any(|b| b.function == cfg.function)
        {
            bases.push(*cfg);
        }
    }
    let mut functions = Vec::with_capacity(bases.len() * config.eta_sweep.len());
    for &eta in &config.eta_sweep {
        for base in &bases {
            functions.push(base.with_eta(eta));
        }
    }
    let prepared = prepare(config)?;
    let runs = run_functions(config, &prepared, &functions)?;
    correlations(&config.scenario.name, &runs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::preset_experiment;
    use std::path::PathBuf;

    fn small(name: &str, samples: usize) -> ExperimentConfig {
        let mut config = preset_experiment(name, 11, samples, PathBuf::from("out")).unwrap();
        config.emit_plots = false;
        config
    }

    #[test]
    fn zero_samples_is_a_noop() {
        let output = run_experiment(&small("one-target", 0)).unwrap();
        assert_eq!(output.runs.len(), 4);
        for run in &output.runs {
            assert!(run.records.is_empty());
            assert!(run.relevance.is_empty());
        }
        assert!(output.correlations.rows.is_empty());
    }

    #[test]
    fn runs_share_one_sample_stream() {
        let output = run_experiment(&small("one-target", 25)).unwrap();
        for run in &output.runs[1..] {
            for (a, b) in run.records.iter().zip(&output.runs[0].records) {
                assert_eq!(a.subset, b.subset);
                assert_eq!(a.chi, b.chi);
            }
        }
    }

    #[test]
    fn experiment_is_deterministic() {
        let a = run_experiment(&small("two-target", 30)).unwrap();
        let b = run_experiment(&small("two-target", 30)).unwrap();
        for (ra, rb) in a.runs.iter().zip(&b.runs) {
            for (x, y) in ra.records.iter().zip(&rb.records) {
                assert_eq!(x.smi_value.to_bits(), y.smi_value.to_bits());
            }
        }
        for (x, y) in a.correlations.rows.iter().zip(&b.correlations.rows) {
            assert_eq!(x.spearman.to_bits(), y.spearman.to_bits());
        }
    }

    #[test]
    fn sweep_covers_eta_function_grid() {
        let mut config = small("one-target", 40);
        config.eta_sweep = vec![1.0, 3.0];
        let table = run_eta_sweep(&config).unwrap();
        for eta in [1.0, 3.0] {
            for function in [SmiFunction::Flvmi, SmiFunction::Flqmi, SmiFunction::Com] {
                assert!(table.get(function, eta, MetricKind::Relevance).is_some());
                assert!(table.get(function, eta, MetricKind::Coverage).is_some());
            }
            assert!(table.get(SmiFunction::Gcmi, eta, MetricKind::Relevance).is_none());
        }
        for row in &table.rows {
            assert!((-1.0..=1.0).contains(&row.spearman));
        }
    }

    #[test]
    fn coverage_correlations_order_across_functions() {
        let config = preset_experiment("two-target", 7, 1000, PathBuf::from("out")).unwrap();
        let output = run_experiment(&config).unwrap();
        let cov = |f: SmiFunction| {
            output
                .correlations
                .get(f, 1.0, MetricKind::Coverage)
                .unwrap()
        };
        let (gcmi, com, flqmi, flvmi) = (
            cov(SmiFunction::Gcmi),
            cov(SmiFunction::Com),
            cov(SmiFunction::Flqmi),
            cov(SmiFunction::Flvmi),
        );
        assert!(
            gcmi < com && com < flqmi && flqmi < flvmi,
            "coverage ordering violated: GCMI={gcmi} COM={com} FLQMI={flqmi} FLVMI={flvmi}"
        );
    }

    #[test]
    fn sweep_trends_on_the_two_target_preset() {
        let config = preset_experiment("two-target", 7, 1000, PathBuf::from("out")).unwrap();
        let table = run_eta_sweep(&config).unwrap();
        let cov = |f: SmiFunction, eta: f64| table.get(f, eta, MetricKind::Coverage).unwrap();
        // More eta weakens FLQMI's coverage correlation step by step.
        assert!(cov(SmiFunction::Flqmi, 3.0) < cov(SmiFunction::Flqmi, 1.0));
        assert!(cov(SmiFunction::Flqmi, 10.0) < cov(SmiFunction::Flqmi, 3.0));
        // COM's coverage correlation barely reacts to eta.
        let com: Vec<f64> = [1.0, 3.0, 10.0]
            .iter()
            .map(|&eta| cov(SmiFunction::Com, eta))
            .collect();
        let spread = com.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
            - com.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(spread < 0.05, "COM coverage spread {spread} too large");
    }
}
