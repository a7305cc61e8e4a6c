//! Seeded synthetic Gaussian-cluster datasets and uniform-χ subset sampling.
//!
//! Scenarios are described by cluster specs (mean, diagonal covariance,
//! point count, targeted/untargeted role, and a query draw count for
//! targeted clusters). Generation is fully determined by the scenario seed:
//! draws use a counter-based ChaCha stream and a Box-Muller normal
//! transform, so the same config reproduces the same dataset on any
//! platform.
//!
//! Subset sampling draws χ uniformly from {0, …, B} first and then picks χ
//! targeted and B − χ untargeted members without replacement, giving the
//! uniform marginal over χ that the bound experiments assume.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::{LabeledDataset, Point, Subset};
use crate::error::{Error, Result};

/// Role of one Gaussian cluster.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClusterRole {
    Targeted,
    Untargeted,
}

/// One Gaussian cluster: `count` member draws plus `query_count` fresh
/// query draws (targeted clusters only).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterSpec {
    pub mean: Point,
    /// Diagonal covariance, one positive entry per coordinate.
    pub covariance: Vec<f64>,
    pub count: usize,
    pub role: ClusterRole,
    #[serde(default)]
    pub query_count: usize,
}

/// A full synthetic scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    #[serde(default = "default_name")]
    pub name: String,
    pub clusters: Vec<ClusterSpec>,
    pub budget: usize,
    pub seed: u64,
    pub samples: usize,
}

fn default_name() -> String {
    "custom".to_owned()
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        let mut targeted = 0usize;
        let mut untargeted = 0usize;
        let mut queries = 0usize;
        for (i, cluster) in self.clusters.iter().enumerate() {
            if cluster.count == 0 {
                return Err(Error::InvalidConfig(format!("cluster {i} has count 0")));
            }
            if cluster.mean.coords.is_empty() || !cluster.mean.is_finite() {
                return Err(Error::InvalidConfig(format!(
                    "cluster {i} mean must be non-empty and finite"
                )));
            }
            if cluster.covariance.len() != cluster.mean.dim() {
                return Err(Error::InvalidConfig(format!(
                    "cluster {i} covariance length {} does not match dimension {}",
                    cluster.covariance.len(),
                    cluster.mean.dim()
                )));
            }
            if cluster.covariance.iter().any(|&v| !v.is_finite() || v < 0.0) {
                return Err(Error::InvalidConfig(format!(
                    "cluster {i} covariance entries must be non-negative"
                )));
            }
            match cluster.role {
                ClusterRole::Targeted => targeted += 1,
                ClusterRole::Untargeted => {
                    if cluster.query_count != 0 {
                        return Err(Error::InvalidConfig(format!(
                            "cluster {i} is untargeted but requests queries"
                        )));
                    }
                    untargeted += 1;
                }
            }
            queries += cluster.query_count;
        }
        if targeted == 0 || untargeted == 0 {
            return Err(Error::InvalidConfig(
                "need at least one targeted and one untargeted cluster".into(),
            ));
        }
        if queries == 0 {
            return Err(Error::InvalidConfig("need at least one query draw".into()));
        }
        if self.budget == 0 {
            return Err(Error::InvalidConfig("budget must be positive".into()));
        }
        let dim = self.clusters[0].mean.dim();
        if self.clusters.iter().any(|c| c.mean.dim() != dim) {
            return Err(Error::InvalidConfig(
                "all clusters must share one dimension".into(),
            ));
        }
        Ok(())
    }
}

/// One standard normal via Box-Muller; consumes exactly two uniforms.
fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

fn draw_point(rng: &mut ChaCha8Rng, mean: &Point, covariance: &[f64]) -> Point {
    let coords = mean
        .coords
        .iter()
        .zip(covariance)
        .map(|(&m, &var)| m + var.sqrt() * standard_normal(rng))
        .collect();
    Point::new(coords)
}

/// Generate the dataset for a scenario. Deterministic given the seed:
/// clusters are visited in order, members drawn before queries.
pub fn generate_dataset(config: &ScenarioConfig) -> Result<LabeledDataset> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut targeted = Vec::new();
    let mut untargeted = Vec::new();
    let mut query = Vec::new();
    for cluster in &config.clusters {
        let bucket = match cluster.role {
            ClusterRole::Targeted => &mut targeted,
            ClusterRole::Untargeted => &mut untargeted,
        };
        for _ in 0..cluster.count {
            bucket.push(draw_point(&mut rng, &cluster.mean, &cluster.covariance));
        }
        for _ in 0..cluster.query_count {
            query.push(draw_point(&mut rng, &cluster.mean, &cluster.covariance));
        }
    }
    Ok(LabeledDataset::new(targeted, untargeted, query))
}

/// Draw a cardinality-`budget` subset whose χ is uniform on {0, …, budget}.
///
/// Requires |T| ≥ budget and |U| ≥ budget so every χ value is feasible.
pub fn sample_subset_uniform_chi(
    dataset: &LabeledDataset,
    budget: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Subset> {
    let t = dataset.targeted.len();
    let u = dataset.untargeted.len();
    if t < budget {
        return Err(Error::InsufficientPartition {
            partition: "targeted",
            len: t,
            budget,
        });
    }
    if u < budget {
        return Err(Error::InsufficientPartition {
            partition: "untargeted",
            len: u,
            budget,
        });
    }
    let chi = rng.random_range(0..=budget);
    let mut members = Vec::with_capacity(budget);
    members.extend(rand::seq::index::sample(rng, t, chi));
    members.extend(
        rand::seq::index::sample(rng, u, budget - chi)
            .into_iter()
            .map(|i| t + i),
    );
    Subset::new(members)
}

/// The single-targeted-cluster scenario: one targeted cluster at (2, 0) and
/// one untargeted cluster at (-2, 0), 40 points each, covariance 0.25·I,
/// five queries.
pub fn one_target_preset(seed: u64, samples: usize) -> ScenarioConfig {
    ScenarioConfig {
        name: "one-target".to_owned(),
        clusters: vec![
            ClusterSpec {
                mean: Point::new(vec![2.0, 0.0]),
                covariance: vec![0.25, 0.25],
                count: 40,
                role: ClusterRole::Targeted,
                query_count: 5,
            },
            ClusterSpec {
                mean: Point::new(vec![-2.0, 0.0]),
                covariance: vec![0.25, 0.25],
                count: 40,
                role: ClusterRole::Untargeted,
                query_count: 0,
            },
        ],
        budget: 5,
        seed,
        samples,
    }
}

/// The two-targeted-cluster scenario: a 40-point majority targeted cluster
/// and an 8-point minority targeted cluster, each with five queries, plus
/// a 20-point untargeted cluster in between. Lives in six dimensions with
/// tight covariance so that cluster membership, not within-cluster jitter,
/// dominates the similarity structure: coverage then hinges on which
/// clusters a subset reaches while the objective sums still track how many
/// targeted points it holds.
pub fn two_target_preset(seed: u64, samples: usize) -> ScenarioConfig {
    let dim = 6;
    let lift = |x: f64, y: f64| {
        let mut coords = vec![0.0; dim];
        coords[0] = x;
        coords[1] = y;
        Point::new(coords)
    };
    ScenarioConfig {
        name: "two-target".to_owned(),
        clusters: vec![
            ClusterSpec {
                mean: lift(2.0, 0.0),
                covariance: vec![0.04; dim],
                count: 40,
                role: ClusterRole::Targeted,
                query_count: 5,
            },
            ClusterSpec {
                mean: lift(-0.6, 0.0),
                covariance: vec![0.04; dim],
                count: 20,
                role: ClusterRole::Untargeted,
                query_count: 0,
            },
            ClusterSpec {
                mean: lift(2.0, 3.0),
                covariance: vec![0.04; dim],
                count: 8,
                role: ClusterRole::Targeted,
                query_count: 5,
            },
        ],
        budget: 5,
        seed,
        samples,
    }
}

/// Look up a named preset.
pub fn preset_by_name(name: &str, seed: u64, samples: usize) -> Option<ScenarioConfig> {
    match name {
        "one-target" => Some(one_target_preset(seed, samples)),
        "two-target" => Some(two_target_preset(seed, samples)),
        _ => None,
    }
}
