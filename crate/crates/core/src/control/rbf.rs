use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Dimension of the approximator input `[X, beta, wind]`.
pub const FEATURE_DIM: usize = 17;

const PRIMES: [u32; FEATURE_DIM] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59];

/// Affine map from raw inputs to the unit box: `z = (x - center) / half_range`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FeatureScaling {
    pub center: [f64; FEATURE_DIM],
    pub half_range: [f64; FEATURE_DIM],
}

impl Default for FeatureScaling {
    /// Region-III operating envelope of the reference turbine.
    fn default() -> Self {
        Self {
            center: [
                5.0, 0.0, -0.5, 0.0, 0.035, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.267, 0.15, 18.0, 0.0, 0.0,
            ],
            half_range: [
                10.0, 5.0, 3.0, 0.09, 0.17, 0.09, 2.0, 1.0, 1.0, 0.05, 0.1, 0.05, 0.3, 0.15, 6.0, 1.0, 1.0,
            ],
        }
    }
}

impl FeatureScaling {
    pub fn scale(&self, z: &[f64; FEATURE_DIM]) -> DVector<f64> {
        DVector::from_fn(FEATURE_DIM, |i, _| (z[i] - self.center[i]) / self.half_range[i])
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.half_range.iter().any(|h| !(h.is_finite() && *h > 0.0)) {
            return Err("feature half ranges must be positive".into());
        }
        if self.center.iter().any(|c| !c.is_finite()) {
            return Err("feature centers must be finite".into());
        }
        Ok(())
    }
}

/// Radical inverse of `index` in `base`.
fn radical_inverse(mut index: u64, base: u32) -> f64 {
    let b = base as u64;
    let mut inv = 1.0 / base as f64;
    let mut out = 0.0;
    while index > 0 {
        out += (index % b) as f64 * inv;
        index /= b;
        inv /= base as f64;
    }
    out
}

/// Gaussian radial basis network with fixed centers in the scaled box.
#[derive(Debug, Clone, PartialEq)]
pub struct RbfNetwork {
    centers: Vec<DVector<f64>>,
    width: f64,
}

impl RbfNetwork {
    /// `n` centers from a Halton layout over `[-1, 1]^17` with a seeded
    /// Cranley-Patterson shift. The common width is the mean distance from
    /// each center to its nearest neighbour.
    pub fn new(n: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shift: Vec<f64> = (0..FEATURE_DIM).map(|_| rng.random::<f64>()).collect();
        let centers: Vec<DVector<f64>> = (1..=n as u64)
            .map(|k| {
                DVector::from_fn(FEATURE_DIM, |d, _| {
                    let u = (radical_inverse(k, PRIMES[d]) + shift[d]).fract();
                    2.0 * u - 1.0
                })
            })
            .collect();
        let width = if n < 2 {
            1.0
        } else {
            let total: f64 = centers
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    centers
                        .iter()
                        .enumerate()
                        .filter(|(j, _)| *j != i)
                        .map(|(_, o)| (c - o).norm())
                        .fold(f64::INFINITY, f64::min)
                })
                .sum();
            total / n as f64
        };
        Self { centers, width }
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn centers(&self) -> &[DVector<f64>] {
        &self.centers
    }

    /// Activations for a scaled input; each lies in (0, 1].
    pub fn features(&self, z: &DVector<f64>) -> DVector<f64> {
        let denom = 2.0 * self.width * self.width;
        DVector::from_iterator(
            self.centers.len(),
            self.centers.iter().map(|c| (-(z - c).norm_squared() / denom).exp()),
        )
    }
}
