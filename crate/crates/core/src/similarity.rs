//! Kernels mapping point pairs into `[0, 1]` and similarity-matrix construction.
//!
//! Two kernels are provided: a Gaussian RBF `exp(-‖x-y‖² / bandwidth)` and a
//! shifted cosine `(1 + cos∠(x, y)) / 2`. Both land in `[0, 1]` by
//! construction, which is all the objectives and bounds require. The matrix
//! builder forces the diagonal to exactly 1 so that self-similarity behaves
//! identically under every kernel.

use serde::{Deserialize, Serialize};

use crate::dataset::{LabeledDataset, Point, SimilarityMatrix};
use crate::error::{Error, Result};

/// Kernel selection, serializable inside experiment configs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum KernelConfig {
    /// `exp(-‖x-y‖² / bandwidth)`, bandwidth in units of squared distance.
    Rbf { bandwidth: f64 },
    /// `(1 + cos∠(x, y)) / 2`, with `cos∠(0, ·) = 0`.
    CosineShifted,
}

impl KernelConfig {
    /// RBF with the median heuristic: bandwidth = median of squared pairwise
    /// distances over the ground set. Falls back to 1.0 when the points are
    /// too degenerate to produce a positive median.
    pub fn rbf_median(dataset: &LabeledDataset) -> Result<Self> {
        Ok(KernelConfig::Rbf {
            bandwidth: median_heuristic_bandwidth(dataset)?,
        })
    }

    pub fn validate(&self) -> Result<()> {
        if let KernelConfig::Rbf { bandwidth } = self {
            if !bandwidth.is_finite() || *bandwidth <= 0.0 {
                return Err(Error::InvalidConfig(format!(
                    "RBF bandwidth must be positive, got {bandwidth}"
                )));
            }
        }
        Ok(())
    }
}

/// Median of squared pairwise distances over the ground set `T ∪ U`.
pub fn median_heuristic_bandwidth(dataset: &LabeledDataset) -> Result<f64> {
    let n = dataset.ground_len();
    let mut dists = Vec::with_capacity(n.saturating_mul(n.saturating_sub(1)) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            dists.push(dataset.ground_point(i)?.sq_dist(dataset.ground_point(j)?)?);
        }
    }
    dists.retain(|d| d.is_finite());
    dists.sort_by(f64::total_cmp);
    let median = match dists.len() {
        0 => 0.0,
        len if len % 2 == 1 => dists[len / 2],
        len => 0.5 * (dists[len / 2 - 1] + dists[len / 2]),
    };
    if median > 0.0 {
        Ok(median)
    } else {
        // All ground points coincide; any positive bandwidth gives the same
        // all-ones matrix.
        Ok(dists.into_iter().find(|&d| d > 0.0).unwrap_or(1.0))
    }
}

/// Evaluate the kernel for one point pair.
pub fn kernel_value(x: &Point, y: &Point, kernel: &KernelConfig) -> Result<f64> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            left: x.dim(),
            right: y.dim(),
        });
    }
    let value = match kernel {
        KernelConfig::Rbf { bandwidth } => {
            debug_assert!(*bandwidth > 0.0, "RBF bandwidth must be positive");
            (-x.sq_dist(y)? / bandwidth).exp()
        }
        KernelConfig::CosineShifted => {
            let dot: f64 = x.coords.iter().zip(&y.coords).map(|(a, b)| a * b).sum();
            let nx: f64 = x.coords.iter().map(|a| a * a).sum::<f64>().sqrt();
            let ny: f64 = y.coords.iter().map(|a| a * a).sum::<f64>().sqrt();
            let cos = if nx == 0.0 || ny == 0.0 {
                0.0
            } else {
                (dot / (nx * ny)).clamp(-1.0, 1.0)
            };
            (1.0 + cos) / 2.0
        }
    };
    Ok(value.clamp(0.0, 1.0))
}

/// Build the full `(|T|+|U|+|Q|)²` similarity matrix in `[T | U | Q]` order.
///
/// The diagonal is forced to exactly 1 regardless of kernel.
pub fn build_similarity_matrix(
    dataset: &LabeledDataset,
    kernel: &KernelConfig,
) -> Result<SimilarityMatrix> {
    kernel.validate()?;
    let sizes = dataset.sizes();
    let n = sizes.total();
    let mut points: Vec<&Point> = Vec::with_capacity(n);
    points.extend(dataset.targeted.iter());
    points.extend(dataset.untargeted.iter());
    points.extend(dataset.query.iter());

    let mut values = vec![0.0; n * n];
    for i in 0..n {
        values[i * n + i] = 1.0;
        for j in (i + 1)..n {
            let v = kernel_value(points[i], points[j], kernel)?;
            values[i * n + j] = v;
            values[j * n + i] = v;
        }
    }
    SimilarityMatrix::from_values(sizes, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::LabeledDataset;

    fn point(coords: &[f64]) -> Point {
        Point::new(coords.to_vec())
    }

    #[test]
    fn rbf_identical_points_give_one() {
        let k = KernelConfig::Rbf { bandwidth: 2.0 };
        let x = point(&[1.0, -3.0]);
        assert_eq!(kernel_value(&x, &x, &k).unwrap(), 1.0);
    }

    #[test]
    fn rbf_unit_distance_unit_bandwidth() {
        let k = KernelConfig::Rbf { bandwidth: 1.0 };
        let v = kernel_value(&point(&[0.0]), &point(&[1.0]), &k).unwrap();
        assert!((v - (-1.0f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn cosine_antipodal_is_zero() {
        let v = kernel_value(
            &point(&[1.0, 0.0]),
            &point(&[-1.0, 0.0]),
            &KernelConfig::CosineShifted,
        )
        .unwrap();
        assert!(v.abs() < 1e-12);
    }

    #[test]
    fn cosine_zero_vector_convention() {
        let v = kernel_value(
            &point(&[0.0, 0.0]),
            &point(&[1.0, 0.0]),
            &KernelConfig::CosineShifted,
        )
        .unwrap();
        assert_eq!(v, 0.5);
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let k = KernelConfig::Rbf { bandwidth: 1.0 };
        assert!(matches!(
            kernel_value(&point(&[0.0]), &point(&[0.0, 1.0]), &k),
            Err(Error::DimensionMismatch { left: 1, right: 2 })
        ));
    }

    #[test]
    fn identical_points_build_all_ones() {
        let d = LabeledDataset::new(
            vec![point(&[2.0, 2.0])],
            vec![point(&[2.0, 2.0])],
            vec![point(&[2.0, 2.0])],
        );
        let m = build_similarity_matrix(&d, &KernelConfig::Rbf { bandwidth: 1.0 }).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(m.get(i, j), 1.0);
            }
        }
    }

    #[test]
    fn orthogonal_vectors_cosine_half() {
        let d = LabeledDataset::new(
            vec![point(&[1.0, 0.0])],
            vec![point(&[0.0, 1.0])],
            vec![point(&[1.0, 0.0])],
        );
        let m = build_similarity_matrix(&d, &KernelConfig::CosineShifted).unwrap();
        assert_eq!(m.get(0, 1), 0.5);
        // Diagonal forced to 1 even though the kernel is cosine-based.
        assert_eq!(m.get(1, 1), 1.0);
    }

    #[test]
    fn rbf_three_point_hand_values() {
        // Collinear points at 0, 1, and -1: squared distances {1, 1, 4}.
        let d = LabeledDataset::new(
            vec![point(&[0.0])],
            vec![point(&[1.0])],
            vec![point(&[-1.0])],
        );
        let m = build_similarity_matrix(&d, &KernelConfig::Rbf { bandwidth: 1.0 }).unwrap();
        let e1 = (-1.0f64).exp();
        let e4 = (-4.0f64).exp();
        assert!((m.get(0, 1) - e1).abs() < 1e-15);
        assert!((m.get(0, 2) - e1).abs() < 1e-15);
        assert!((m.get(1, 2) - e4).abs() < 1e-15);
        assert_eq!(m.get(0, 0), 1.0);
    }

    #[test]
    fn rbf_monotone_in_distance() {
        let k = KernelConfig::Rbf { bandwidth: 3.0 };
        let origin = point(&[0.0]);
        let mut prev = f64::INFINITY;
        for step in 1..20 {
            let v = kernel_value(&origin, &point(&[step as f64 * 0.25]), &k).unwrap();
            assert!(v < prev, "similarity must shrink with distance");
            prev = v;
        }
    }

    #[test]
    fn median_bandwidth_hand_case() {
        // Ground points 0, 1, 3: squared distances {1, 4, 9} -> median 4.
        let d = LabeledDataset::new(
            vec![point(&[0.0]), point(&[1.0])],
            vec![point(&[3.0])],
            vec![point(&[0.0])],
        );
        assert_eq!(median_heuristic_bandwidth(&d).unwrap(), 4.0);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_points(max_len: usize) -> impl Strategy<Value = Vec<Point>> {
            proptest::collection::vec(
                proptest::collection::vec(-5.0f64..5.0, 2).prop_map(Point::new),
                1..=max_len,
            )
        }

        fn arb_kernel() -> impl Strategy<Value = KernelConfig> {
            prop_oneof![
                (0.1f64..10.0).prop_map(|bandwidth| KernelConfig::Rbf { bandwidth }),
                Just(KernelConfig::CosineShifted),
            ]
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(128))]

            /// Symmetry, unit diagonal, and range hold for random datasets.
            #[test]
            fn matrix_invariants(
                t in arb_points(5),
                u in arb_points(5),
                q in arb_points(3),
                kernel in arb_kernel(),
            ) {
                let d = LabeledDataset::new(t, u, q);
                let m = build_similarity_matrix(&d, &kernel).unwrap();
                let n = m.len();
                for i in 0..n {
                    prop_assert_eq!(m.get(i, i), 1.0);
                    for j in 0..n {
                        let v = m.get(i, j);
                        prop_assert!((0.0..=1.0).contains(&v));
                        prop_assert_eq!(v, m.get(j, i));
                    }
                }
            }
        }
    }
}
