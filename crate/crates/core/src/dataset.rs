//! Core domain types: points, partitioned datasets, subsets, and similarity matrices.
//!
//! The ground set is the union of a *targeted* partition `T` and an
//! *untargeted* partition `U`; a separate *query* set `Q` holds exemplar
//! instances of the targeted class. Every similarity matrix produced or
//! accepted by this crate indexes rows in the fixed order `[T | U | Q]`,
//! which keeps parameter-extraction loops deterministic.
//!
//! All types here are immutable after construction and safe to share
//! across threads.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point in an arbitrary-dimensional feature space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point {
    pub coords: Vec<f64>,
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Self {
        Self { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_finite(&self) -> bool {
        !self.coords.is_empty() && self.coords.iter().all(|c| c.is_finite())
    }

    /// Squared Euclidean distance to `other`.
    pub fn sq_dist(&self, other: &Point) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b) * (a - b))
            .sum())
    }
}

/// Which of the three index blocks a matrix row belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Partition {
    Targeted,
    Untargeted,
    Query,
}

/// Element counts of the three partitions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PartitionSizes {
    pub targeted: usize,
    pub untargeted: usize,
    pub query: usize,
}

impl PartitionSizes {
    pub fn ground(&self) -> usize {
        self.targeted + self.untargeted
    }

    pub fn total(&self) -> usize {
        self.ground() + self.query
    }
}

/// A ground set split into targeted (`T`) and untargeted (`U`) instances,
/// plus the exemplar query set `Q`.
///
/// Serializes as `{"targeted": [[..]], "untargeted": [[..]], "query": [[..]]}`
/// with each point a plain coordinate list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledDataset {
    pub targeted: Vec<Point>,
    pub untargeted: Vec<Point>,
    pub query: Vec<Point>,
}

impl LabeledDataset {
    pub fn new(targeted: Vec<Point>, untargeted: Vec<Point>, query: Vec<Point>) -> Self {
        Self {
            targeted,
            untargeted,
            query,
        }
    }

    pub fn sizes(&self) -> PartitionSizes {
        PartitionSizes {
            targeted: self.targeted.len(),
            untargeted: self.untargeted.len(),
            query: self.query.len(),
        }
    }

    pub fn ground_len(&self) -> usize {
        self.targeted.len() + self.untargeted.len()
    }

    /// Ground point by global index (targeted first, then untargeted).
    pub fn ground_point(&self, index: usize) -> Result<&Point> {
        let t = self.targeted.len();
        if index < t {
            Ok(&self.targeted[index])
        } else if index < self.ground_len() {
            Ok(&self.untargeted[index - t])
        } else {
            Err(Error::IndexOutOfRange {
                index,
                len: self.ground_len(),
            })
        }
    }

    /// Whether a ground index falls in the targeted block.
    pub fn is_targeted(&self, index: usize) -> bool {
        index < self.targeted.len()
    }

    /// Parse a dataset from its JSON document form, validating invariants.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let dataset: LabeledDataset = serde_json::from_str(text)
            .map_err(|e| Error::InvalidConfig(format!("dataset parse error: {e}")))?;
        validate_dataset(&dataset)?;
        Ok(dataset)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("dataset serialization cannot fail")
    }
}

/// Check the `LabeledDataset` invariants: all three partitions non-empty and
/// every coordinate finite.
pub fn validate_dataset(dataset: &LabeledDataset) -> Result<()> {
    let parts: [(&'static str, &[Point]); 3] = [
        ("targeted", &dataset.targeted),
        ("untargeted", &dataset.untargeted),
        ("query", &dataset.query),
    ];
    for (name, points) in parts {
        if points.is_empty() {
            return Err(Error::EmptyPartition(name));
        }
        for (index, point) in points.iter().enumerate() {
            if !point.is_finite() {
                return Err(Error::NonFiniteCoordinate {
                    partition: name,
                    index,
                });
            }
        }
    }
    Ok(())
}

/// An ordered set of ground indices (into `T ∪ U`), kept sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subset {
    members: Vec<usize>,
}

impl Subset {
    /// Build a subset from arbitrary-order indices; duplicates are rejected.
    pub fn new(mut members: Vec<usize>) -> Result<Self> {
        members.sort_unstable();
        for pair in members.windows(2) {
            if pair[0] == pair[1] {
                return Err(Error::DuplicateMember(pair[0]));
            }
        }
        Ok(Self { members })
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.members.binary_search(&index).is_ok()
    }

    /// New subset with `index` added.
    pub fn with(&self, index: usize) -> Result<Self> {
        if self.contains(index) {
            return Err(Error::AlreadyMember(index));
        }
        let mut members = self.members.clone();
        members.push(index);
        members.sort_unstable();
        Ok(Self { members })
    }

    /// Validate that every member indexes a ground set of `ground_len` elements.
    pub fn check_range(&self, ground_len: usize) -> Result<()> {
        match self.members.iter().find(|&&m| m >= ground_len) {
            Some(&index) => Err(Error::IndexOutOfRange {
                index,
                len: ground_len,
            }),
            None => Ok(()),
        }
    }
}

/// χ = |A ∩ T| together with the untargeted remainder |A| − χ.
pub fn subset_partition_counts(
    subset: &Subset,
    dataset: &LabeledDataset,
) -> Result<(usize, usize)> {
    subset.check_range(dataset.ground_len())?;
    let chi = subset
        .members()
        .iter()
        .filter(|&&m| dataset.is_targeted(m))
        .count();
    Ok((chi, subset.len() - chi))
}

/// Dense symmetric matrix of pairwise similarities in `[0, 1]` over
/// `T ∪ U ∪ Q`, with unit diagonal, indexed `[T | U | Q]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityMatrix {
    sizes: PartitionSizes,
    values: Vec<f64>,
}

impl SimilarityMatrix {
    /// Wrap a row-major value buffer, checking shape, symmetry, unit
    /// diagonal, and the `[0, 1]` range.
    pub fn from_values(sizes: PartitionSizes, values: Vec<f64>) -> Result<Self> {
        let n = sizes.total();
        if values.len() != n * n {
            return Err(Error::MatrixSizeMismatch {
                len: values.len(),
                expected: n * n,
            });
        }
        for row in 0..n {
            for col in 0..n {
                let v = values[row * n + col];
                if !v.is_finite() || !(0.0..=1.0).contains(&v) {
                    return Err(Error::SimilarityOutOfRange {
                        row,
                        col,
                        value: v,
                    });
                }
                if values[col * n + row] != v {
                    return Err(Error::AsymmetricSimilarity { row, col });
                }
            }
            if values[row * n + row] != 1.0 {
                return Err(Error::NonUnitDiagonal(row));
            }
        }
        Ok(Self { sizes, values })
    }

    pub fn sizes(&self) -> PartitionSizes {
        self.sizes
    }

    pub fn len(&self) -> usize {
        self.sizes.total()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn ground_len(&self) -> usize {
        self.sizes.ground()
    }

    pub fn targeted_len(&self) -> usize {
        self.sizes.targeted
    }

    pub fn untargeted_len(&self) -> usize {
        self.sizes.untargeted
    }

    pub fn query_len(&self) -> usize {
        self.sizes.query
    }

    /// Matrix row for a (partition, local index) pair.
    pub fn row(&self, partition: Partition, local: usize) -> usize {
        match partition {
            Partition::Targeted => local,
            Partition::Untargeted => self.sizes.targeted + local,
            Partition::Query => self.sizes.ground() + local,
        }
    }

    /// Matrix row of query element `q`.
    pub fn query_row(&self, q: usize) -> usize {
        self.sizes.ground() + q
    }

    /// Similarity between raw matrix rows `i` and `j`.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.len() + j]
    }

    /// Whether a ground row index belongs to the targeted block.
    pub fn is_targeted(&self, ground_index: usize) -> bool {
        ground_index < self.sizes.targeted
    }
}
