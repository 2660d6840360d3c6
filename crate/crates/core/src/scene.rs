//! Extended-target scenes, the block-sparse scene vector and noisy measurements.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_complex::Complex64;
#[cfg(not(feature = "std"))]
use num_traits::Float;
use rand::Rng;

use crate::matrix::ObservationMatrix;
use crate::params::RadarParams;
use crate::rng::{complex_gaussian, stream_rng, Stream};
use crate::{Error, Result};
#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Scatterer {
    /// Range cell `p` in `0..M`.
    pub range_index: usize,
    /// Scattering coefficient, before the `sqrt(N)` coherent gain.
    pub amplitude: Complex64,
}

/// One extended target: every scatterer moves with the same velocity cell.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Target {
    /// Velocity cell `q` in `0..N`.
    pub velocity_index: usize,
    pub scatterers: Vec<Scatterer>,
}

#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct TargetScene {
    pub targets: Vec<Target>,
}

impl TargetScene {
    pub fn n_targets(&self) -> usize {
        self.targets.len()
    }

    pub fn n_scatterers(&self) -> usize {
        self.targets.iter().map(|t| t.scatterers.len()).sum()
    }

    /// Checks grid bounds and that no two scatterers share a cell.
    pub fn validate(&self, params: &RadarParams) -> Result<()> {
        let mut seen = BTreeSet::new();
        for target in &self.targets {
            let q = target.velocity_index;
            if q >= params.n_pulses {
                return Err(Error::IndexOutOfRange { index: q, bound: params.n_pulses });
            }
            for s in &target.scatterers {
                if s.range_index >= params.n_freqs {
                    return Err(Error::IndexOutOfRange { index: s.range_index, bound: params.n_freqs });
                }
                if !seen.insert((s.range_index, q)) {
                    return Err(Error::DuplicatePlacement { range_index: s.range_index, velocity_index: q });
                }
            }
        }
        Ok(())
    }
}

/// Draws `n_targets` extended targets with `scatterers_per_target` scatterers.
///
/// Velocity cells are sampled without replacement. Each target occupies
/// consecutive range cells from a uniform random start, wrapping modulo M, with
/// i.i.d. CN(0, 1) amplitudes.
pub fn synthesize_scene(
    params: &RadarParams,
    n_targets: usize,
    scatterers_per_target: usize,
    seed: u64,
) -> Result<TargetScene> {
    params.validate()?;
    let (n, m) = (params.n_pulses, params.n_freqs);
    if n_targets > n {
        return Err(Error::TooManyTargets { requested: n_targets, available: n });
    }
    if scatterers_per_target > m {
        return Err(Error::TooManyScatterers { per_target: scatterers_per_target, n_freqs: m });
    }
    if n_targets > 0 && scatterers_per_target == 0 {
        return Err(Error::InvalidParams("targets need at least one scatterer"));
    }
    let mut rng = stream_rng(seed, Stream::Scene);
    let velocities = rand::seq::index::sample(&mut rng, n, n_targets);
    let targets = velocities
        .iter()
        .map(|q| {
            let start = rng.random_range(0..m);
            let scatterers = (0..scatterers_per_target)
                .map(|i| Scatterer { range_index: (start + i) % m, amplitude: complex_gaussian(&mut rng, 1.0) })
                .collect();
            Target { velocity_index: q, scatterers }
        })
        .collect();
    Ok(TargetScene { targets })
}

/// Length-MN vector split into N blocks of M entries.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct BlockSparseVector {
    values: Vec<Complex64>,
    block_size: usize,
}

impl BlockSparseVector {
    pub fn new(values: Vec<Complex64>, block_size: usize) -> Result<Self> {
        if block_size == 0 {
            return Err(Error::InvalidParams("block size must be at least 1"));
        }
        if !values.len().is_multiple_of(block_size) {
            return Err(Error::DimensionMismatch {
                expected: values.len().next_multiple_of(block_size),
                actual: values.len(),
            });
        }
        Ok(Self { values, block_size })
    }

    pub fn zeros(n_blocks: usize, block_size: usize) -> Self {
        Self { values: alloc::vec![Complex64::new(0.0, 0.0); n_blocks * block_size], block_size }
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn block_size(&self) -> usize {
        self.block_size
    }

    pub fn n_blocks(&self) -> usize {
        self.values.len() / self.block_size
    }

    pub fn block(&self, q: usize) -> &[Complex64] {
        &self.values[q * self.block_size..(q + 1) * self.block_size]
    }

    /// Indices of nonzero entries.
    pub fn support(&self) -> BTreeSet<usize> {
        self.values.iter().enumerate().filter(|(_, v)| v.norm_sqr() != 0.0).map(|(i, _)| i).collect()
    }

    /// Indices of blocks with at least one nonzero entry.
    pub fn block_support(&self) -> BTreeSet<usize> {
        (0..self.n_blocks()).filter(|&q| self.block(q).iter().any(|v| v.norm_sqr() != 0.0)).collect()
    }
}

/// Places `sqrt(N) * amplitude` at index `q*M + p` for each scatterer.
pub fn scene_to_vector(scene: &TargetScene, params: &RadarParams) -> Result<BlockSparseVector> {
    scene.validate(params)?;
    let gain = (params.n_pulses as f64).sqrt();
    let mut x = BlockSparseVector::zeros(params.n_pulses, params.n_freqs);
    for target in &scene.targets {
        for s in &target.scatterers {
            x.values[target.velocity_index * params.n_freqs + s.range_index] = s.amplitude * gain;
        }
    }
    Ok(x)
}

/// Slow-time samples `y = Psi x + w`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Measurement {
    pub samples: Vec<Complex64>,
    pub noise_power: f64,
}

/// Synthesizes `y = Psi x + w` with `w ~ CN(0, noise_power I)` drawn from the
/// noise stream of `seed`.
pub fn synthesize_measurement(
    matrix: &ObservationMatrix,
    x: &BlockSparseVector,
    noise_power: f64,
    seed: u64,
) -> Result<Measurement> {
    if !(noise_power.is_finite() && noise_power >= 0.0) {
        return Err(Error::NegativeNoisePower(noise_power));
    }
    if x.block_size() != matrix.block_size() {
        return Err(Error::DimensionMismatch { expected: matrix.block_size(), actual: x.block_size() });
    }
    let mut samples = matrix.apply(x.values())?;
    if noise_power > 0.0 {
        for (y, w) in samples.iter_mut().zip(complex_noise(matrix.n_rows(), noise_power, seed)) {
            *y += w;
        }
    }
    Ok(Measurement { samples, noise_power })
}

/// `len` i.i.d. CN(0, noise_power) samples from the noise stream of `seed`.
///
/// Samples for different powers under one seed are scaled copies of each other.
pub fn complex_noise(len: usize, noise_power: f64, seed: u64) -> Vec<Complex64> {
    let mut rng = stream_rng(seed, Stream::Noise);
    (0..len).map(|_| complex_gaussian(&mut rng, noise_power)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::draw_codes;
    use crate::matrix::build_observation_matrix;
    use crate::params::DopplerMode;

    #[test]
    fn empty_scene_gives_zero_vector() {
        let p = RadarParams::x_band(16, 4).unwrap();
        let scene = synthesize_scene(&p, 0, 3, 1).unwrap();
        assert_eq!(scene.n_targets(), 0);
        let x = scene_to_vector(&scene, &p).unwrap();
        assert!(x.support().is_empty());
        assert!(x.block_support().is_empty());
    }

    #[test]
    fn full_velocity_occupancy() {
        let p = RadarParams::x_band(10, 3).unwrap();
        let x = scene_to_vector(&synthesize_scene(&p, 10, 1, 4).unwrap(), &p).unwrap();
        assert_eq!(x.block_support().len(), 10);
        for q in 0..10 {
            assert_eq!(x.block(q).iter().filter(|v| v.norm() > 0.0).count(), 1);
        }
    }

    #[test]
    fn dense_blocks_at_simulation_scale() {
        let p = RadarParams::x_band(128, 8).unwrap();
        let scene = synthesize_scene(&p, 3, 8, 17).unwrap();
        assert_eq!(scene.n_scatterers(), 24);
        let x = scene_to_vector(&scene, &p).unwrap();
        assert_eq!(x.block_support().len(), 3);
        for q in x.block_support() {
            assert!(x.block(q).iter().all(|v| v.norm() > 0.0));
        }
    }

    #[test]
    fn scatterers_are_clustered_in_range() {
        let p = RadarParams::x_band(32, 8).unwrap();
        let scene = synthesize_scene(&p, 4, 3, 2).unwrap();
        for t in &scene.targets {
            let start = t.scatterers[0].range_index;
            for (i, s) in t.scatterers.iter().enumerate() {
                assert_eq!(s.range_index, (start + i) % 8);
            }
        }
    }

    #[test]
    fn rejects_oversized_scenes() {
        let p = RadarParams::x_band(4, 2).unwrap();
        assert!(matches!(synthesize_scene(&p, 5, 1, 0), Err(Error::TooManyTargets { .. })));
        assert!(matches!(synthesize_scene(&p, 1, 3, 0), Err(Error::TooManyScatterers { .. })));
    }

    #[test]
    fn single_scatterer_gets_coherent_gain() {
        let p = RadarParams::x_band(16, 4).unwrap();
        let scene = TargetScene {
            targets: alloc::vec![Target {
                velocity_index: 0,
                scatterers: alloc::vec![Scatterer { range_index: 0, amplitude: Complex64::new(1.0, 0.0) }],
            }],
        };
        let x = scene_to_vector(&scene, &p).unwrap();
        assert_eq!(x.values()[0], Complex64::new(4.0, 0.0));
        assert_eq!(x.support().len(), 1);
    }

    #[test]
    fn duplicate_cells_are_rejected() {
        let p = RadarParams::x_band(8, 4).unwrap();
        let s = Scatterer { range_index: 2, amplitude: Complex64::new(1.0, 0.0) };
        let scene = TargetScene {
            targets: alloc::vec![
                Target { velocity_index: 3, scatterers: alloc::vec![s] },
                Target { velocity_index: 3, scatterers: alloc::vec![s] },
            ],
        };
        assert_eq!(scene_to_vector(&scene, &p), Err(Error::DuplicatePlacement { range_index: 2, velocity_index: 3 }));
    }

    #[test]
    fn noiseless_measurement_is_exact() {
        let p = RadarParams::x_band(32, 4).unwrap();
        let psi = build_observation_matrix(&p, &draw_codes(&p, 1), DopplerMode::Exact).unwrap();
        let x = scene_to_vector(&synthesize_scene(&p, 2, 3, 1).unwrap(), &p).unwrap();
        let y = synthesize_measurement(&psi, &x, 0.0, 1).unwrap();
        assert_eq!(y.samples, psi.apply(x.values()).unwrap());
    }

    #[test]
    fn noise_has_requested_power() {
        let w = complex_noise(10_000, 1.0, 31);
        let power = w.iter().map(|v| v.norm_sqr()).sum::<f64>() / 10_000.0;
        assert!((power - 1.0).abs() < 0.05, "power {power}");
    }

    #[test]
    fn negative_noise_power_is_rejected() {
        let p = RadarParams::x_band(4, 2).unwrap();
        let psi = build_observation_matrix(&p, &draw_codes(&p, 0), DopplerMode::Exact).unwrap();
        let x = BlockSparseVector::zeros(4, 2);
        assert_eq!(synthesize_measurement(&psi, &x, -1.0, 0), Err(Error::NegativeNoisePower(-1.0)));
    }
}
