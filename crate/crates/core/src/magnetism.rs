//! Spin (Pauli) and orbital (Landau) response of the ideal gas.
//!
//! Reduced units throughout: populations are `N lambda^3 / V`, the Zeeman
//! parameter is `b = beta mu_B B` and the Landau parameter is
//! `s = hbar omega_c / (2 k_B T)`, which equals `b` for the free electron.

use std::f64::consts::PI;

use crate::eos::IdealGas;
use crate::numerics::{integrate_semi_infinite, knee_breakpoints, QuadratureSpec};
use crate::statistics::{OccupancyModel, PhysicalConstants};
use crate::{Error, Result};

/// Landau level sums give up after this many levels.
pub const MAX_LANDAU_LEVELS: usize = 1_000_000;
/// A level is dropped once it adds less than this fraction of the running total.
pub const LEVEL_TRUNCATION: f64 = 1e-14;
/// Field values used for the zero-field extrapolation of the susceptibility.
pub const EXTRAPOLATION_FIELDS: [f64; 4] = [0.2, 0.1, 0.05, 0.025];
/// The orbital susceptibility assumes a dilute gas.
pub const LANDAU_DILUTE_LIMIT: f64 = 0.1;

/// Field-dependent scales for one particle species in a field `B`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MagneticEnvironment {
    pub field: f64,
    pub bohr_magneton: f64,
    pub cyclotron_frequency: f64,
    /// `hbar omega_c / (2 k_B T)`
    pub s: f64,
    /// Orbital states per Landau level per unit area, `eB / (2 pi hbar)`.
    pub landau_degeneracy: f64,
}

impl MagneticEnvironment {
    pub fn new(field: f64, temperature: f64, mass: f64, constants: &PhysicalConstants) -> Result<Self> {
        if !(field >= 0.0) || !field.is_finite() {
            return Err(Error::domain("magnetic field", field));
        }
        if !(temperature > 0.0) || !temperature.is_finite() {
            return Err(Error::domain("temperature", temperature));
        }
        if !(mass > 0.0) || !mass.is_finite() {
            return Err(Error::domain("mass", mass));
        }
        let e = constants.elementary_charge;
        let cyclotron_frequency = e * field / mass;
        Ok(Self {
            field,
            bohr_magneton: constants.bohr_magneton(),
            cyclotron_frequency,
            s: constants.hbar * cyclotron_frequency / (2.0 * constants.boltzmann * temperature),
            landau_degeneracy: e * field / (2.0 * PI * constants.hbar),
        })
    }

    /// `beta mu_B B`.
    pub fn zeeman_parameter(&self, temperature: f64, constants: &PhysicalConstants) -> f64 {
        self.bohr_magneton * self.field / (constants.boltzmann * temperature)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MagnetizationResult {
    pub n_up: f64,
    pub n_down: f64,
    /// `-mu_B (N_up - N_down)` in units of `mu_B V / lambda^3`.
    pub magnetization: f64,
    /// Reduced susceptibility when it has been computed.
    pub chi: Option<f64>,
}

impl MagnetizationResult {
    pub fn total(&self) -> f64 {
        self.n_up + self.n_down
    }

    /// `M / (N mu_B)`.
    pub fn reduced_magnetization(&self) -> f64 {
        self.magnetization / self.total()
    }
}

/// Spin-resolved populations `(N_up, N_down) lambda^3 / V`.
///
/// Each spin species fills half the states of the field-free gas with its
/// energy shifted by `+-mu_B B`, i.e. it sees the effective fugacity
/// `z e^{-+b}`. Up spins sit at `+mu_B B`.
pub fn pauli_populations(eta: f64, b: f64, model: OccupancyModel) -> Result<(f64, f64)> {
    pauli_populations_in(&IdealGas::new(model), eta, b)
}

/// [`pauli_populations`] with the quadrature settings of `gas`.
pub fn pauli_populations_in(gas: &IdealGas, eta: f64, b: f64) -> Result<(f64, f64)> {
    if !b.is_finite() {
        return Err(Error::domain("beta mu_B B", b));
    }
    Ok((0.5 * gas.density(eta - b)?, 0.5 * gas.density(eta + b)?))
}

pub fn pauli_magnetization(eta: f64, b: f64, model: OccupancyModel) -> Result<MagnetizationResult> {
    pauli_magnetization_in(&IdealGas::new(model), eta, b)
}

pub fn pauli_magnetization_in(gas: &IdealGas, eta: f64, b: f64) -> Result<MagnetizationResult> {
    let (n_up, n_down) = pauli_populations_in(gas, eta, b)?;
    Ok(MagnetizationResult {
        n_up,
        n_down,
        magnetization: n_down - n_up,
        chi: None,
    })
}

fn landau_quadrature() -> QuadratureSpec {
    QuadratureSpec {
        relative_tolerance: 1e-12,
        absolute_tolerance: 1e-15,
        ..QuadratureSpec::default()
    }
}

/// `int_{-inf}^{inf} ln(1 + y e^{-q^2}) dq`, divided by `min(y, 1)`.
fn level_integral(y: f64, spec: &QuadratureSpec) -> Result<f64> {
    let scale = y.min(1.0);
    let cuts = if y > 1.0 {
        knee_breakpoints(y.ln().sqrt(), 0.5)
    } else {
        Vec::new()
    };
    let half = integrate_semi_infinite(|q| (y * (-q * q).exp()).ln_1p() / scale, &cuts, spec)?;
    Ok(2.0 * half.value)
}

/// Sums `term(n)` over Landau levels until a level adds less than
/// [`LEVEL_TRUNCATION`] of the running total.
fn level_sum<F: FnMut(usize) -> Result<f64>>(s: f64, mut term: F) -> Result<f64> {
    let (mut sum, mut compensation) = (0.0f64, 0.0f64);
    for n in 0..MAX_LANDAU_LEVELS {
        let t = term(n)?;
        let next = sum + t;
        compensation += if sum.abs() >= t.abs() {
            (sum - next) + t
        } else {
            (t - next) + sum
        };
        sum = next;
        if t.abs() < LEVEL_TRUNCATION * (sum + compensation).abs() {
            return Ok(sum + compensation);
        }
    }
    Err(Error::LevelSumNonConvergence {
        s,
        levels: MAX_LANDAU_LEVELS,
    })
}

fn check_landau(z: f64, s: f64) -> Result<()> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::domain("fugacity", z));
    }
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::domain("s", s));
    }
    Ok(())
}

/// `ln Z_G` of the orbital problem for a volume given in units of
/// `lambda^3`:
///
/// ```text
/// ln Z_G lambda^3 / V = (2s/sqrt(pi)) sum_n int (g/a) ln(1 + a z e^{-s(2n+1)} e^{-q^2}) dq
/// ```
///
/// The Boltzmann model uses the linear term of the logarithm.
pub fn landau_log_partition(z: f64, s: f64, volume: f64, model: OccupancyModel) -> Result<f64> {
    check_landau(z, s)?;
    if !(volume > 0.0) || !volume.is_finite() {
        return Err(Error::domain("volume", volume));
    }
    let (g, a) = (model.weight(), model.blocking());
    let sum = if a == 0.0 {
        level_sum(s, |n| Ok(PI.sqrt() * z * (-s * (2 * n + 1) as f64).exp()))?
    } else {
        let spec = landau_quadrature();
        level_sum(s, |n| {
            let y = a * z * (-s * (2 * n + 1) as f64).exp();
            Ok(level_integral(y, &spec)? * y.min(1.0) / a)
        })?
    };
    Ok(volume * 2.0 * s / PI.sqrt() * g * sum)
}

/// `sum_n e^{-s(2n+1)}` with the same truncation rule as
/// [`landau_log_partition`]; equal to `1 / (2 sinh s)`.
pub fn landau_level_sum(s: f64) -> Result<f64> {
    check_landau(1.0, s)?;
    level_sum(s, |n| Ok((-s * (2 * n + 1) as f64).exp()))
}

/// `ln Z_G / (2 s g z V / lambda^3)` at `z -> 0`, from the full quadrature
/// path. Tends to `1 / (2 sinh s)`.
pub fn landau_small_z_factor(s: f64, model: OccupancyModel) -> Result<f64> {
    const Z: f64 = 1e-13;
    Ok(landau_log_partition(Z, s, 1.0, model)? / (2.0 * s * model.weight() * Z))
}

/// Susceptibility estimate at one field value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldEstimate {
    pub s: f64,
    pub coefficient: f64,
}

/// Zero-field orbital susceptibility.
#[derive(Debug, Clone, PartialEq)]
pub struct LandauSusceptibility {
    pub n_lambda3: f64,
    /// `chi k_B T / (mu_B^2 n)`
    pub coefficient: f64,
    /// `chi k_B T lambda^3 / mu_B^2`
    pub chi: f64,
    pub estimates: Vec<FieldEstimate>,
}

/// `chi k_B T / (mu_B^2 n)` at field `s`, from a centred difference of
/// `ln Z_G` in `s` with step `s/10`.
pub fn landau_coefficient_at(z: f64, s: f64, model: OccupancyModel) -> Result<f64> {
    check_landau(z, s)?;
    let h = 0.1 * s;
    let d = (landau_log_partition(z, s + h, 1.0, model)? - landau_log_partition(z, s - h, 1.0, model)?) / (2.0 * h);
    Ok(d / (s * model.weight() * z))
}

/// `M = k_B T d(ln Z_G)/dB` at fixed `z`, so `chi = M/(VB)` and
/// `chi k_B T / (mu_B^2 n) = (d ln Z_G / ds) / (s N)`. The fugacity is set
/// from `n lambda^3 = g z`, and `B -> 0` is reached by polynomial
/// extrapolation in `s^2` over [`EXTRAPOLATION_FIELDS`].
pub fn landau_susceptibility(n_lambda3: f64, model: OccupancyModel) -> Result<LandauSusceptibility> {
    if !(n_lambda3 > 0.0) || n_lambda3 > LANDAU_DILUTE_LIMIT {
        return Err(Error::domain("n lambda^3 (dilute regime)", n_lambda3));
    }
    let z = n_lambda3 / model.weight();
    let estimates = EXTRAPOLATION_FIELDS
        .iter()
        .map(|&s| Ok(FieldEstimate { s, coefficient: landau_coefficient_at(z, s, model)? }))
        .collect::<Result<Vec<_>>>()?;

    // Neville's scheme at s^2 = 0
    let xs: Vec<f64> = estimates.iter().map(|e| e.s * e.s).collect();
    let mut p: Vec<f64> = estimates.iter().map(|e| e.coefficient).collect();
    let mut previous = p[p.len() - 1];
    let mut current = previous;
    for k in 1..p.len() {
        for i in 0..p.len() - k {
            p[i] = (xs[i + k] * p[i] - xs[i] * p[i + 1]) / (xs[i + k] - xs[i]);
        }
        previous = current;
        current = p[0];
    }
    let spread = (current - previous).abs();
    if !current.is_finite() || spread > 1e-3 * current.abs() {
        return Err(Error::ExtrapolationNonConvergence { estimate: current, spread });
    }
    Ok(LandauSusceptibility {
        n_lambda3,
        coefficient: current,
        chi: current * n_lambda3,
        estimates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const EXCL: OccupancyModel = OccupancyModel::EXCLUSIVE;
    const FD: OccupancyModel = OccupancyModel::STANDARD_FD;

    #[test]
    fn zero_field_splits_evenly() {
        let (up, down) = pauli_populations(0.7, 0.0, EXCL).unwrap();
        assert_eq!(up, down);
        assert_relative_eq!(up + down, IdealGas::new(EXCL).density(0.7).unwrap(), max_relative = 1e-14);
        assert_eq!(pauli_magnetization(0.7, 0.0, EXCL).unwrap().magnetization, 0.0);
    }

    #[test]
    fn dilute_populations_follow_boltzmann_factor() {
        let eta = -15.0;
        let z = f64::exp(eta);
        let (up, down) = pauli_populations(eta, 0.4, EXCL).unwrap();
        assert_relative_eq!(up, z * (-0.4f64).exp(), max_relative = 1e-6);
        assert_relative_eq!(down, z * 0.4f64.exp(), max_relative = 1e-6);
    }

    #[test]
    fn tanh_law() {
        let eta = 1e-4f64.ln();
        for b in [0.1, 0.3, 1.0] {
            for model in [EXCL, FD] {
                let m = pauli_magnetization(eta, b, model).unwrap().reduced_magnetization();
                assert!((m / b.tanh() - 1.0).abs() < 1e-3, "b = {b}");
            }
        }
    }

    #[test]
    fn magnetization_is_odd() {
        for b in [0.05, 0.3, 2.0] {
            let plus = pauli_magnetization(0.5, b, EXCL).unwrap();
            let minus = pauli_magnetization(0.5, -b, EXCL).unwrap();
            assert_eq!(plus.magnetization, -minus.magnetization);
            assert!(plus.magnetization.abs() <= plus.total());
        }
    }

    #[test]
    fn level_sum_is_geometric() {
        for s in [0.1, 0.5, 1.0, 2.0] {
            assert_relative_eq!(landau_level_sum(s).unwrap(), 0.5 / s.sinh(), max_relative = 1e-12);
        }
        assert!(matches!(
            landau_level_sum(1e-9),
            Err(Error::LevelSumNonConvergence { .. })
        ));
    }

    #[test]
    fn small_z_partition_matches_closed_form() {
        let s = 1.0f64;
        for model in [EXCL, FD, OccupancyModel::BOLTZMANN] {
            let f = landau_small_z_factor(s, model).unwrap();
            assert!((f - 0.5 / s.sinh()).abs() < 1e-10, "{model}");
        }
        let z = 1e-12;
        let ratio = landau_log_partition(z, s, 1.0, EXCL).unwrap() / (2.0 * z);
        assert!((ratio - 0.850_918).abs() < 1e-6);
    }

    #[test]
    fn landau_partition_rejects_bad_input() {
        assert!(landau_log_partition(0.0, 1.0, 1.0, EXCL).is_err());
        assert!(landau_log_partition(0.1, 0.0, 1.0, EXCL).is_err());
        assert!(landau_susceptibility(0.5, EXCL).is_err());
    }

    #[test]
    fn susceptibility_is_minus_one_third() {
        for model in [EXCL, FD] {
            let chi = landau_susceptibility(model.weight() * 1e-4, model).unwrap();
            assert!((chi.coefficient + 1.0 / 3.0).abs() < 1e-3 / 3.0, "{}", chi.coefficient);
            assert!(chi.estimates.iter().all(|e| e.coefficient < 0.0));
        }
    }

    #[test]
    fn environment_scales() {
        let c = PhysicalConstants::reduced();
        let env = MagneticEnvironment::new(0.3, 2.0, 1.0, &c).unwrap();
        assert_relative_eq!(env.s, 0.3 / 4.0, max_relative = 1e-15);
        assert_relative_eq!(env.s, env.zeeman_parameter(2.0, &c), max_relative = 1e-15);
        assert!(MagneticEnvironment::new(-1.0, 1.0, 1.0, &c).is_err());
    }
}
