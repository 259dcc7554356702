//! Exact enumeration and Monte Carlo over finite level systems.
//!
//! Energies are given in units of `k_B T` (i.e. `beta = 1`). These routines
//! verify the product form of the grand partition function and the
//! occupation law without using either.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::statistics::OccupancyModel;
use crate::{Error, Result};

/// Largest level count accepted by the enumeration routines.
pub const MAX_ENUMERATION_LEVELS: usize = 20;

/// State of one orbital.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LevelState {
    Empty,
    Up,
    Down,
    /// Forbidden for exclusive fermions.
    Both,
}

impl LevelState {
    pub fn particles(self) -> u32 {
        match self {
            LevelState::Empty => 0,
            LevelState::Up | LevelState::Down => 1,
            LevelState::Both => 2,
        }
    }

    const ALL: [LevelState; 4] = [
        LevelState::Empty,
        LevelState::Up,
        LevelState::Down,
        LevelState::Both,
    ];
}

/// Which statistics the oracle enumerates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Rule {
    Exclusive,
    Standard,
}

impl Rule {
    fn from_model(model: OccupancyModel) -> Result<Self> {
        if model == OccupancyModel::EXCLUSIVE {
            Ok(Rule::Exclusive)
        } else if model == OccupancyModel::STANDARD_FD {
            Ok(Rule::Standard)
        } else {
            Err(Error::Unsupported(format!(
                "level-system oracles support the exclusive and fd models, not {model}"
            )))
        }
    }

    fn radix(self) -> usize {
        match self {
            Rule::Exclusive => 3,
            Rule::Standard => 4,
        }
    }
}

/// A finite list of orbital energies and the statistics they obey.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelSystem {
    energies: Vec<f64>,
    model: OccupancyModel,
    rule: Rule,
}

impl LevelSystem {
    pub fn new(energies: Vec<f64>, model: OccupancyModel) -> Result<Self> {
        let rule = Rule::from_model(model)?;
        if energies.is_empty() {
            return Err(Error::domain("level count", 0.0));
        }
        if let Some(&bad) = energies.iter().find(|e| !e.is_finite()) {
            return Err(Error::domain("level energy", bad));
        }
        Ok(Self { energies, model, rule })
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn model(&self) -> OccupancyModel {
        self.model
    }

    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }

    /// Every legal configuration, in mixed-radix counter order.
    pub fn configurations(&self) -> Result<Configurations> {
        let levels = self.len();
        if levels > MAX_ENUMERATION_LEVELS {
            return Err(Error::Capacity {
                levels,
                max: MAX_ENUMERATION_LEVELS,
            });
        }
        let radix = self.rule.radix();
        Ok(Configurations {
            radix,
            levels,
            next: 0,
            total: (radix as u64).pow(levels as u32),
        })
    }
}

/// One assignment of a [`LevelState`] to every level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OccupationConfig {
    pub states: Vec<LevelState>,
}

impl OccupationConfig {
    pub fn particle_number(&self) -> u32 {
        self.states.iter().map(|s| s.particles()).sum()
    }

    /// `sum_i n_i eps_i` for the given level energies.
    pub fn energy(&self, energies: &[f64]) -> f64 {
        self.states
            .iter()
            .zip(energies)
            .map(|(s, e)| s.particles() as f64 * e)
            .sum()
    }
}

/// Mixed-radix counter over configurations (radix 3 exclusive, 4 standard).
#[derive(Debug, Clone)]
pub struct Configurations {
    radix: usize,
    levels: usize,
    next: u64,
    total: u64,
}

impl Iterator for Configurations {
    type Item = OccupationConfig;

    fn next(&mut self) -> Option<OccupationConfig> {
        if self.next >= self.total {
            return None;
        }
        let mut code = self.next;
        self.next += 1;
        let radix = self.radix as u64;
        let states = (0..self.levels)
            .map(|_| {
                let digit = (code % radix) as usize;
                code /= radix;
                LevelState::ALL[digit]
            })
            .collect();
        Some(OccupationConfig { states })
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.total - self.next) as usize;
        (left, Some(left))
    }
}

/// A partition-function value with its logarithm, which survives overflow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartitionValue {
    pub log: f64,
    pub value: f64,
}

impl PartitionValue {
    fn from_log(log: f64) -> Self {
        Self { log, value: log.exp() }
    }
}

fn check_fugacity(z: f64) -> Result<()> {
    if z > 0.0 && z.is_finite() {
        Ok(())
    } else {
        Err(Error::domain("fugacity", z))
    }
}

/// `ln(1 + e^x)` without overflow.
fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

/// `prod_i (1 + 2 z e^{-eps_i})` (exclusive) or `prod_i (1 + z e^{-eps_i})^2`
/// (standard), accumulated in log space.
pub fn grand_partition_product(system: &LevelSystem, z: f64) -> Result<PartitionValue> {
    check_fugacity(z)?;
    let ln_z = z.ln();
    let log = system
        .energies
        .iter()
        .map(|&e| match system.rule {
            Rule::Exclusive => softplus(std::f64::consts::LN_2 + ln_z - e),
            Rule::Standard => 2.0 * softplus(ln_z - e),
        })
        .sum();
    Ok(PartitionValue::from_log(log))
}

#[derive(Default)]
struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.compensation += (self.sum - t) + v;
        } else {
            self.compensation += (v - t) + self.sum;
        }
        self.sum = t;
    }

    fn total(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Log-weights `N ln z - E` of every configuration, scaled by the largest so
/// the linear sum cannot overflow.
fn scaled_weights(system: &LevelSystem, z: f64) -> Result<(Vec<(OccupationConfig, f64)>, f64)> {
    let ln_z = z.ln();
    let logs: Vec<(OccupationConfig, f64)> = system
        .configurations()?
        .map(|c| {
            let lw = c.particle_number() as f64 * ln_z - c.energy(&system.energies);
            (c, lw)
        })
        .collect();
    let max = logs.iter().map(|(_, l)| *l).fold(f64::NEG_INFINITY, f64::max);
    let weights = logs.into_iter().map(|(c, l)| (c, (l - max).exp())).collect();
    Ok((weights, max))
}

/// Direct sum of `z^N e^{-E}` over every legal configuration.
pub fn grand_partition_enumerate(system: &LevelSystem, z: f64) -> Result<PartitionValue> {
    check_fugacity(z)?;
    let (weights, shift) = scaled_weights(system, z)?;
    let mut acc = CompensatedSum::default();
    for (_, w) in &weights {
        acc.add(*w);
    }
    Ok(PartitionValue::from_log(acc.total().ln() + shift))
}

/// Configuration-weighted mean occupancy of one level.
pub fn mean_occupancy_enumerate(system: &LevelSystem, z: f64, level: usize) -> Result<f64> {
    check_fugacity(z)?;
    if level >= system.len() {
        return Err(Error::IndexOutOfRange {
            index: level,
            len: system.len(),
        });
    }
    let (weights, _) = scaled_weights(system, z)?;
    let mut norm = CompensatedSum::default();
    let mut occupied = CompensatedSum::default();
    for (config, w) in &weights {
        norm.add(*w);
        occupied.add(config.states[level].particles() as f64 * w);
    }
    Ok(occupied.total() / norm.total())
}

/// Sampling controls for [`mc_occupancy`]. `stream` selects an independent
/// ChaCha stream under the same seed; use the level index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sampling {
    pub samples: u64,
    pub seed: u64,
    pub stream: u64,
}

impl Sampling {
    pub fn new(samples: u64, seed: u64) -> Self {
        Self {
            samples,
            seed,
            stream: 0,
        }
    }

    pub fn stream(mut self, stream: u64) -> Self {
        self.stream = stream;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub standard_error: f64,
    pub samples: u64,
}

/// Samples the state of a single level at energy `epsilon` with weights
/// `{1, z e^-eps, z e^-eps}` (plus `z^2 e^-2eps` for standard statistics)
/// and returns the mean occupancy with its standard error.
pub fn mc_occupancy(epsilon: f64, z: f64, model: OccupancyModel, sampling: &Sampling) -> Result<McEstimate> {
    check_fugacity(z)?;
    if !epsilon.is_finite() {
        return Err(Error::domain("level energy", epsilon));
    }
    if sampling.samples == 0 {
        return Err(Error::domain("sample count", 0.0));
    }
    let rule = Rule::from_model(model)?;

    let w = z * (-epsilon).exp();
    let weights: &[f64] = match rule {
        Rule::Exclusive => &[1.0, w, w],
        Rule::Standard => &[1.0, w, w, w * w],
    };
    let norm: f64 = weights.iter().sum();
    let mut cumulative = [0.0; 4];
    let mut running = 0.0;
    for (c, wi) in cumulative.iter_mut().zip(weights) {
        running += wi / norm;
        *c = running;
    }
    let last = weights.len() - 1;

    let mut rng = ChaCha8Rng::seed_from_u64(sampling.seed);
    rng.set_stream(sampling.stream);
    let (mut sum, mut sum_sq) = (0u64, 0u64);
    for _ in 0..sampling.samples {
        let u: f64 = rng.random();
        let idx = cumulative[..last].iter().position(|&c| u < c).unwrap_or(last);
        let n = LevelState::ALL[idx].particles() as u64;
        sum += n;
        sum_sq += n * n;
    }

    let count = sampling.samples as f64;
    let mean = sum as f64 / count;
    let variance = if sampling.samples > 1 {
        (sum_sq as f64 - count * mean * mean) / (count - 1.0)
    } else {
        0.0
    };
    Ok(McEstimate {
        mean,
        standard_error: (variance.max(0.0) / count).sqrt(),
        samples: sampling.samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statistics::occupation;
    use approx::assert_relative_eq;
    use rand::Rng;

    const EXCL: OccupancyModel = OccupancyModel::EXCLUSIVE;
    const FD: OccupancyModel = OccupancyModel::STANDARD_FD;

    fn single(e: f64, model: OccupancyModel) -> LevelSystem {
        LevelSystem::new(vec![e], model).unwrap()
    }

    #[test]
    fn single_level_partition_functions() {
        assert_relative_eq!(grand_partition_product(&single(0.0, EXCL), 1.0).unwrap().value, 3.0, max_relative = 1e-15);
        assert_relative_eq!(grand_partition_product(&single(0.0, FD), 1.0).unwrap().value, 4.0, max_relative = 1e-15);
        assert_relative_eq!(grand_partition_enumerate(&single(0.0, EXCL), 1.0).unwrap().value, 3.0, max_relative = 1e-15);
        assert_relative_eq!(grand_partition_enumerate(&single(0.0, FD), 1.0).unwrap().value, 4.0, max_relative = 1e-15);
    }

    #[test]
    fn two_level_product() {
        let sys = LevelSystem::new(vec![0.0, 2f64.ln()], EXCL).unwrap();
        assert_relative_eq!(grand_partition_product(&sys, 1.0).unwrap().value, 6.0, max_relative = 1e-14);
        assert_relative_eq!(grand_partition_enumerate(&sys, 1.0).unwrap().value, 6.0, max_relative = 1e-14);
    }

    #[test]
    fn exclusive_configurations_never_doubly_occupy() {
        let sys = LevelSystem::new(vec![0.0; 4], EXCL).unwrap();
        let configs: Vec<_> = sys.configurations().unwrap().collect();
        assert_eq!(configs.len(), 81);
        assert!(configs.iter().all(|c| !c.states.contains(&LevelState::Both)));
        let sys = LevelSystem::new(vec![0.0; 3], FD).unwrap();
        assert_eq!(sys.configurations().unwrap().count(), 64);
    }

    #[test]
    fn six_random_levels_match_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let energies: Vec<f64> = (0..6).map(|_| rng.random_range(0.0..5.0)).collect();
        for model in [EXCL, FD] {
            let sys = LevelSystem::new(energies.clone(), model).unwrap();
            let p = grand_partition_product(&sys, 0.7).unwrap();
            let e = grand_partition_enumerate(&sys, 0.7).unwrap();
            assert_relative_eq!(p.value, e.value, max_relative = 1e-12);
        }
    }

    #[test]
    fn enumerated_occupancy_examples() {
        assert_relative_eq!(mean_occupancy_enumerate(&single(0.0, EXCL), 1.0, 0).unwrap(), 2.0 / 3.0, max_relative = 1e-14);
        assert_relative_eq!(mean_occupancy_enumerate(&single(0.0, FD), 1.0, 0).unwrap(), 1.0, max_relative = 1e-14);
        let e = std::f64::consts::E;
        let got = mean_occupancy_enumerate(&single(1.0, EXCL), 0.5, 0).unwrap();
        assert_relative_eq!(got, 1.0 / (e + 1.0), max_relative = 1e-14);
        // also the occupation law with z = e^{beta mu}
        assert_relative_eq!(got, occupation(1.0 - 0.5f64.ln(), EXCL), max_relative = 1e-14);
    }

    #[test]
    fn enumeration_errors() {
        let big = LevelSystem::new(vec![0.0; 21], EXCL).unwrap();
        assert_eq!(
            grand_partition_enumerate(&big, 1.0).unwrap_err(),
            Error::Capacity { levels: 21, max: 20 }
        );
        let sys = single(0.0, EXCL);
        assert!(matches!(
            mean_occupancy_enumerate(&sys, 1.0, 1),
            Err(Error::IndexOutOfRange { index: 1, len: 1 })
        ));
        assert!(grand_partition_product(&sys, 0.0).is_err());
        assert!(LevelSystem::new(vec![0.0], OccupancyModel::BOLTZMANN).is_err());
        assert!(LevelSystem::new(vec![], EXCL).is_err());
        assert!(LevelSystem::new(vec![f64::INFINITY], EXCL).is_err());
    }

    #[test]
    fn product_survives_overflow_in_log_space() {
        let sys = LevelSystem::new(vec![-800.0; 3], EXCL).unwrap();
        let p = grand_partition_product(&sys, 1.0).unwrap();
        assert!(p.value.is_infinite());
        assert_relative_eq!(p.log, 3.0 * (800.0 + 2f64.ln()), max_relative = 1e-14);
    }

    #[test]
    fn mc_examples() {
        let s = Sampling::new(1_000_000, 2024);
        let excl = mc_occupancy(0.0, 1.0, EXCL, &s).unwrap();
        assert!((excl.mean - 2.0 / 3.0).abs() < 3.0 * excl.standard_error);
        let fd = mc_occupancy(0.0, 1.0, FD, &s).unwrap();
        assert!((fd.mean - 1.0).abs() < 3.0 * fd.standard_error);
        let w = 0.3 * (-2.0f64).exp();
        let target = 2.0 * w / (1.0 + 2.0 * w);
        let r = mc_occupancy(2.0, 0.3, EXCL, &s).unwrap();
        assert!((r.mean - target).abs() < 3.0 * r.standard_error);
    }

    #[test]
    fn mc_is_deterministic_per_seed_and_stream() {
        let s = Sampling::new(10_000, 99);
        let a = mc_occupancy(0.5, 0.8, EXCL, &s).unwrap();
        let b = mc_occupancy(0.5, 0.8, EXCL, &s).unwrap();
        assert_eq!(a, b);
        let c = mc_occupancy(0.5, 0.8, EXCL, &s.stream(1)).unwrap();
        assert_ne!(a.mean, c.mean);
        assert!(mc_occupancy(0.5, 0.8, EXCL, &Sampling::new(0, 1)).is_err());
    }
}
