//! Zero- and low-temperature behaviour: Fermi scale, Sommerfeld constants and
//! series, chemical potential and specific heat.
//!
//! Every series result has an exact counterpart computed by quadrature at
//! fixed density; the exact path is the reference and the series is reported
//! next to it.

use std::f64::consts::PI;

use crate::eos::IdealGas;
use crate::numerics::{integrate_semi_infinite, QuadratureSpec};
use crate::statistics::{dos_coefficient, OccupancyModel, PhysicalConstants};
use crate::{Error, Result};

/// `A_1` as quoted for exclusive fermions (`a = 2`), five decimals.
pub const PUBLISHED_A1: f64 = 0.34657;
/// `A_2` as quoted for exclusive fermions (`a = 2`), five decimals.
pub const PUBLISHED_A2: f64 = 1.88516;
/// Published low-temperature heat-capacity coefficient for exclusive fermions,
/// in units of `k_B^2 T / E_F`. Kept for comparison output only: the exact
/// coefficient is `3 A_2 - 6 A_1^2 = pi^2 / 2`.
pub const PUBLISHED_HEAT_COEFFICIENT: f64 = 5.55;
/// Published free-electron coefficient, `pi^2/2` to two decimals.
pub const PUBLISHED_FD_HEAT_COEFFICIENT: f64 = 4.93;

/// Series in `k_B T / mu` are flagged past this value.
pub const SERIES_VALIDITY_LIMIT: f64 = 0.3;

fn positive(name: &'static str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::domain(name, v))
    }
}

fn step_height(model: OccupancyModel) -> Result<f64> {
    if model.is_degenerate() {
        Ok(model.step_height())
    } else {
        Err(Error::Unsupported(format!("the {model} gas has no Fermi surface")))
    }
}

/// Fermi energy at density `n` in reduced units (`hbar = m = 1`):
/// `(1/2) (6 pi^2 n)^{2/3}` exclusive, `(1/2) (3 pi^2 n)^{2/3}` standard.
///
/// Obtained from `n = (g/a) (2/3) b E_F^{3/2}`, so any `(g, a)` with `a > 0`
/// works.
pub fn fermi_energy(density: f64, model: OccupancyModel) -> Result<f64> {
    fermi_energy_with(density, model, 1.0, &PhysicalConstants::reduced())
}

pub fn fermi_energy_with(
    density: f64,
    model: OccupancyModel,
    mass: f64,
    constants: &PhysicalConstants,
) -> Result<f64> {
    positive("density", density)?;
    let height = step_height(model)?;
    let b = dos_coefficient(mass, constants)?;
    Ok((1.5 * density / (height * b)).powf(2.0 / 3.0))
}

/// Inverse of [`fermi_energy`]: the density whose Fermi energy is `e_f`.
pub fn fermi_density(e_f: f64, model: OccupancyModel) -> Result<f64> {
    positive("Fermi energy", e_f)?;
    let height = step_height(model)?;
    let b = dos_coefficient(1.0, &PhysicalConstants::reduced())?;
    Ok(height * 2.0 / 3.0 * b * e_f.powf(1.5))
}

/// Fermi energy and temperature of a gas of given density.
#[derive(Debug, Clone, PartialEq)]
pub struct FermiScale {
    pub fermi_energy: f64,
    pub fermi_temperature: f64,
    pub density: f64,
    pub model: OccupancyModel,
}

impl FermiScale {
    pub fn new(density: f64, model: OccupancyModel, mass: f64, constants: &PhysicalConstants) -> Result<Self> {
        let fermi_energy = fermi_energy_with(density, model, mass, constants)?;
        Ok(Self {
            fermi_energy,
            fermi_temperature: fermi_energy / constants.boltzmann,
            density,
            model,
        })
    }

    pub fn ground_state_energy(&self, particles: f64) -> Result<f64> {
        ground_state_energy(particles, self.fermi_energy)
    }

    pub fn degeneracy_pressure(&self) -> Result<f64> {
        degeneracy_pressure(self.density, self.fermi_energy)
    }
}

/// `E = (3/5) N E_F`.
pub fn ground_state_energy(particles: f64, fermi_energy: f64) -> Result<f64> {
    Ok(0.6 * positive("particle number", particles)? * positive("Fermi energy", fermi_energy)?)
}

/// `P = (2/5) n E_F`.
pub fn degeneracy_pressure(density: f64, fermi_energy: f64) -> Result<f64> {
    Ok(0.4 * positive("density", density)? * positive("Fermi energy", fermi_energy)?)
}

/// `A_k = int x^k e^x / (e^x + a)^2 dx` over the real line, by quadrature.
pub fn sommerfeld_constant(order: u32, blocking: f64) -> Result<f64> {
    if !(1..=2).contains(&order) {
        return Err(Error::domain("Sommerfeld order", order as f64));
    }
    positive("blocking parameter", blocking)?;
    let kernel = |x: f64| {
        let weight = if x > 0.0 {
            let w = (-x).exp();
            w / ((1.0 + blocking * w) * (1.0 + blocking * w))
        } else {
            let w = x.exp();
            w / ((w + blocking) * (w + blocking))
        };
        x.powi(order as i32) * weight
    };
    // fold the real line about the peak at x = ln a
    let peak = blocking.ln();
    let spec = QuadratureSpec {
        relative_tolerance: 1e-13,
        absolute_tolerance: 1e-15,
        ..QuadratureSpec::default()
    };
    Ok(integrate_semi_infinite(|y| kernel(peak + y) + kernel(peak - y), &[], &spec)?.value)
}

/// Closed forms from `t = e^x`: `A_1 = ln(a)/a`, `A_2 = (ln(a)^2 + pi^2/3)/a`.
pub fn sommerfeld_closed_form(order: u32, blocking: f64) -> Result<f64> {
    positive("blocking parameter", blocking)?;
    let l = blocking.ln();
    match order {
        1 => Ok(l / blocking),
        2 => Ok((l * l + PI * PI / 3.0) / blocking),
        _ => Err(Error::domain("Sommerfeld order", order as f64)),
    }
}

/// `A_1`, `A_2` for one blocking parameter, from quadrature and closed form,
/// plus the low-temperature series built on them.
///
/// The series factors are normalized by the zero-temperature step height
/// `g/a`, so for `a = 2` they read `1 + 3 tau A_1 + (3/4) tau^2 A_2` (number)
/// and `1 + 5 tau A_1 + (15/4) tau^2 A_2` (energy), `tau = k_B T / mu`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SommerfeldConstants {
    pub blocking: f64,
    pub a1: f64,
    pub a2: f64,
    pub closed_form_a1: f64,
    pub closed_form_a2: f64,
}

impl SommerfeldConstants {
    pub fn compute(blocking: f64) -> Result<Self> {
        Ok(Self {
            blocking,
            a1: sommerfeld_constant(1, blocking)?,
            a2: sommerfeld_constant(2, blocking)?,
            closed_form_a1: sommerfeld_closed_form(1, blocking)?,
            closed_form_a2: sommerfeld_closed_form(2, blocking)?,
        })
    }

    pub fn for_model(model: OccupancyModel) -> Result<Self> {
        step_height(model)?;
        Self::compute(model.blocking())
    }

    pub fn number_factor(&self, tau: f64) -> f64 {
        let a = self.blocking;
        1.0 + 1.5 * a * tau * self.a1 + 0.375 * a * tau * tau * self.a2
    }

    pub fn energy_factor(&self, tau: f64) -> f64 {
        let a = self.blocking;
        1.0 + 2.5 * a * tau * self.a1 + 1.875 * a * tau * tau * self.a2
    }

    /// `d(mu/E_F)/dt` at `t = 0`: `-a A_1` (`-2 A_1 = -ln 2` exclusive).
    pub fn mu_first_order(&self) -> f64 {
        -self.blocking * self.a1
    }

    /// Second-order coefficient of `mu/E_F` from inverting the number series
    /// order by order: `(a^2 A_1^2 - a A_2)/4`, i.e. `A_1^2 - A_2/2` for `a = 2`.
    pub fn mu_second_order(&self) -> f64 {
        let a = self.blocking;
        (a * a * self.a1 * self.a1 - a * self.a2) / 4.0
    }

    /// `mu/E_F ~ 1 + c_1 t + c_2 t^2`, `t = k_B T / E_F`.
    pub fn mu_series(&self, t: f64) -> f64 {
        1.0 + self.mu_first_order() * t + self.mu_second_order() * t * t
    }

    /// Second-order coefficient as printed for exclusive fermions,
    /// `-(A_2/2 - 9 A_1^2)`. Reported alongside, not used.
    pub fn published_mu_second_order(&self) -> f64 {
        -(self.a2 / 2.0 - 9.0 * self.a1 * self.a1)
    }

    pub fn published_mu_series(&self, t: f64) -> f64 {
        1.0 + self.mu_first_order() * t + self.published_mu_second_order() * t * t
    }

    /// `c / (k_B^2 T / E_F)` from the series: `(3/2) a (A_2 - a A_1^2)`,
    /// which equals `pi^2/2` for every `a`.
    pub fn heat_capacity_coefficient(&self) -> f64 {
        1.5 * self.blocking * (self.a2 - self.blocking * self.a1 * self.a1)
    }

    /// `3 A_2 - (6/5) A_1^2`, the printed exclusive-fermion expression.
    pub fn published_heat_capacity_expression(&self) -> f64 {
        3.0 * self.a2 - 1.2 * self.a1 * self.a1
    }
}

pub fn series_in_validity(tau: f64) -> bool {
    tau < SERIES_VALIDITY_LIMIT
}

/// `N / N_F` from the series at chemical potential `mu_red = mu / E_F` and
/// `tau = k_B T / mu`.
pub fn sommerfeld_number(mu_red: f64, tau: f64, constants: &SommerfeldConstants) -> f64 {
    mu_red.powf(1.5) * constants.number_factor(tau)
}

/// `E / E_0` with `E_0 = (3/5) N_F E_F`, from the series.
pub fn sommerfeld_energy(mu_red: f64, tau: f64, constants: &SommerfeldConstants) -> f64 {
    mu_red.powf(2.5) * constants.energy_factor(tau)
}

/// State of a gas held at the density whose Fermi energy is 1, at
/// `t = k_B T / E_F`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegenerateState {
    pub t: f64,
    pub eta: f64,
    pub mu_over_ef: f64,
    /// `E / (N E_F)`
    pub energy_per_particle: f64,
    /// `P / (n E_F)`
    pub pressure_ratio: f64,
}

/// Printed coefficient of `c / (k_B t)` for the exclusive and ordinary
/// gases; no figure exists for other occupation laws.
pub fn published_heat_coefficient(model: OccupancyModel) -> Option<f64> {
    if model == OccupancyModel::EXCLUSIVE {
        Some(PUBLISHED_HEAT_COEFFICIENT)
    } else if model == OccupancyModel::STANDARD_FD {
        Some(PUBLISHED_FD_HEAT_COEFFICIENT)
    } else {
        None
    }
}

/// Specific heat per particle, reported as `c / (k_B t)` with `t = T / T_F`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecificHeat {
    pub t: f64,
    /// Richardson-extrapolated centred difference of the exact `E/N`.
    pub exact: f64,
    pub series: f64,
    pub published: Option<f64>,
}

/// Exact low-temperature thermodynamics at fixed density.
#[derive(Debug, Clone, Copy)]
pub struct DegenerateGas {
    gas: IdealGas,
    density: f64,
}

impl DegenerateGas {
    pub fn new(model: OccupancyModel) -> Result<Self> {
        Ok(Self {
            gas: IdealGas::new(model),
            density: fermi_density(1.0, model)?,
        })
    }

    pub fn with_quadrature(mut self, spec: QuadratureSpec) -> Self {
        self.gas = self.gas.with_quadrature(spec);
        self
    }

    pub fn model(&self) -> OccupancyModel {
        self.gas.model()
    }

    pub fn gas(&self) -> &IdealGas {
        &self.gas
    }

    /// `n lambda^3` at reduced temperature `t`.
    fn degeneracy(&self, t: f64) -> f64 {
        self.density * (2.0 * PI / t).powf(1.5)
    }

    pub fn state(&self, t: f64) -> Result<DegenerateState> {
        positive("reduced temperature", t)?;
        let n_lambda3 = self.degeneracy(t);
        let eta = self.gas.solve_fugacity(n_lambda3)?;
        let u = self.gas.energy_density(eta)?;
        let p = self.gas.pressure(eta)?;
        Ok(DegenerateState {
            t,
            eta,
            mu_over_ef: eta * t,
            energy_per_particle: u * t / n_lambda3,
            pressure_ratio: p * t / n_lambda3,
        })
    }

    /// Exact `mu / E_F` at `t = k_B T / E_F`.
    pub fn chemical_potential(&self, t: f64) -> Result<f64> {
        Ok(self.state(t)?.mu_over_ef)
    }

    pub fn energy_per_particle(&self, t: f64) -> Result<f64> {
        Ok(self.state(t)?.energy_per_particle)
    }

    /// Quadrature counterpart of [`SommerfeldConstants::number_factor`]: the
    /// exact `N / ((g/a)(2/3) b V mu^{3/2})` at `tau = k_B T / mu`.
    pub fn exact_number_factor(&self, tau: f64) -> Result<f64> {
        let eta = 1.0 / positive("tau", tau)?;
        let zero_t = self.model().step_height() * 2.0 / 3.0 * std::f64::consts::FRAC_2_SQRT_PI * eta.powf(1.5);
        Ok(self.gas.density(eta)? / zero_t)
    }

    /// Quadrature counterpart of [`SommerfeldConstants::energy_factor`].
    pub fn exact_energy_factor(&self, tau: f64) -> Result<f64> {
        let eta = 1.0 / positive("tau", tau)?;
        let zero_t = self.model().step_height() * 0.4 * std::f64::consts::FRAC_2_SQRT_PI * eta.powf(2.5);
        Ok(self.gas.energy_density(eta)? / zero_t)
    }

    /// `c / (k_B t)` by differentiating the exact `E/N` with relative step
    /// `relative_step` in `T` and one Richardson stage.
    pub fn heat_capacity_coefficient_with_step(&self, t: f64, relative_step: f64) -> Result<f64> {
        positive("reduced temperature", t)?;
        let h = relative_step * t;
        // E/N is known to ~1e-12; steps below this lose all digits to noise
        const RESOLUTION: f64 = 1e-8;
        if !(h >= RESOLUTION) {
            return Err(Error::StepTooSmall {
                step: h,
                resolution: RESOLUTION,
            });
        }
        let central = |h: f64| -> Result<f64> {
            Ok((self.energy_per_particle(t + h)? - self.energy_per_particle(t - h)?) / (2.0 * h))
        };
        let coarse = central(h)?;
        let fine = central(0.5 * h)?;
        Ok((4.0 * fine - coarse) / 3.0 / t)
    }

    pub fn heat_capacity_coefficient(&self, t: f64) -> Result<f64> {
        self.heat_capacity_coefficient_with_step(t, 1e-3)
    }

    pub fn specific_heat(&self, t: f64) -> Result<SpecificHeat> {
        let constants = SommerfeldConstants::for_model(self.model())?;
        Ok(SpecificHeat {
            t,
            exact: self.heat_capacity_coefficient(t)?,
            series: constants.heat_capacity_coefficient(),
            published: published_heat_coefficient(self.model()),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const EXCL: OccupancyModel = OccupancyModel::EXCLUSIVE;
    const FD: OccupancyModel = OccupancyModel::STANDARD_FD;

    #[test]
    fn fermi_energy_examples() {
        let n = 1.0 / (6.0 * PI * PI);
        assert_relative_eq!(fermi_energy(n, EXCL).unwrap(), 0.5, max_relative = 1e-14);
        for n in [1e-3, 0.37, 12.0] {
            let ratio = fermi_energy(n, EXCL).unwrap() / fermi_energy(n, FD).unwrap();
            assert_relative_eq!(ratio, 2f64.powf(2.0 / 3.0), max_relative = 1e-12);
            assert_relative_eq!(fermi_energy(n, FD).unwrap(), 0.5 * (3.0 * PI * PI * n).powf(2.0 / 3.0), max_relative = 1e-13);
            let e = fermi_energy(n, EXCL).unwrap();
            let b = 2f64.powf(1.5) / (4.0 * PI * PI);
            assert_relative_eq!(2.0 / 3.0 * b * e.powf(1.5), n, max_relative = 1e-12);
            assert_relative_eq!(fermi_density(e, EXCL).unwrap(), n, max_relative = 1e-12);
        }
    }

    #[test]
    fn fermi_energy_errors() {
        assert!(fermi_energy(0.0, EXCL).is_err());
        assert!(fermi_energy(1.0, OccupancyModel::BOLTZMANN).is_err());
    }

    #[test]
    fn ground_state_identities() {
        let (n, e_f) = (0.8, 2.3);
        let v = 5.0;
        let e = ground_state_energy(n * v, e_f).unwrap();
        let p = degeneracy_pressure(n, e_f).unwrap();
        assert_relative_eq!(e / (n * v * e_f), 0.6, max_relative = 1e-15);
        assert_relative_eq!(p * v / (n * v * e_f), 0.4, max_relative = 1e-15);
        assert_relative_eq!(p, 2.0 / 3.0 * e / v, max_relative = 1e-15);
        assert!(degeneracy_pressure(-1.0, 1.0).is_err());
    }

    #[test]
    fn sommerfeld_constants_exclusive() {
        let c = SommerfeldConstants::compute(2.0).unwrap();
        assert!((c.a1 - PUBLISHED_A1).abs() < 1e-5);
        assert!((c.a2 - PUBLISHED_A2).abs() < 1e-5);
        assert!((c.a1 - c.closed_form_a1).abs() < 1e-10);
        assert!((c.a2 - c.closed_form_a2).abs() < 1e-10);
        assert!((c.closed_form_a1 - 0.346_573_6).abs() < 1e-7);
        assert!((c.closed_form_a2 - 1.885_160_5).abs() < 1e-7);
    }

    #[test]
    fn sommerfeld_constants_standard() {
        let c = SommerfeldConstants::compute(1.0).unwrap();
        assert_eq!(c.a1, 0.0);
        assert_relative_eq!(c.a2, PI * PI / 3.0, max_relative = 1e-12);
        assert!((c.heat_capacity_coefficient() - PI * PI / 2.0).abs() < 1e-10);
        assert!(sommerfeld_constant(3, 2.0).is_err());
        assert!(sommerfeld_constant(1, 0.0).is_err());
    }

    #[test]
    fn series_factors() {
        let c = SommerfeldConstants::compute(2.0).unwrap();
        assert_eq!(c.number_factor(0.0), 1.0);
        assert_eq!(c.energy_factor(0.0), 1.0);
        // published coefficients at tau = 0.05
        let printed = 1.0 + 3.0 * PUBLISHED_A1 * 0.05 + 0.75 * PUBLISHED_A2 * 0.0025;
        assert!((c.number_factor(0.05) - printed).abs() < 1e-6);
        assert!((printed - 1.05552).abs() < 1e-5);
    }

    #[test]
    fn series_coefficients_reduce_to_closed_forms() {
        let c = SommerfeldConstants::compute(2.0).unwrap();
        let l = 2f64.ln();
        assert_relative_eq!(c.mu_first_order(), -l, max_relative = 1e-10);
        assert_relative_eq!(c.mu_second_order(), c.a1 * c.a1 - c.a2 / 2.0, max_relative = 1e-12);
        assert!((c.mu_second_order() + 0.822_467).abs() < 1e-5);
        assert_relative_eq!(c.heat_capacity_coefficient(), PI * PI / 2.0, max_relative = 1e-10);
        assert!((c.published_heat_capacity_expression() - 5.51).abs() < 0.01);
    }

    #[test]
    fn exact_series_factor_gap_is_third_order() {
        let gas = DegenerateGas::new(EXCL).unwrap();
        let c = SommerfeldConstants::compute(2.0).unwrap();
        for tau in [0.02, 0.05, 0.1] {
            let exact = gas.exact_number_factor(tau).unwrap();
            assert!((c.number_factor(tau) / exact - 1.0).abs() <= 5.0 * tau * tau * tau, "tau = {tau}");
        }
    }

    #[test]
    fn chemical_potential_tends_to_fermi_energy() {
        let gas = DegenerateGas::new(EXCL).unwrap();
        let mu = gas.chemical_potential(1e-3).unwrap();
        assert!((mu - 1.0).abs() < 1e-3);
        assert!(mu < 1.0);
    }

    #[test]
    fn heat_capacity_vanishes_and_rejects_tiny_steps() {
        let gas = DegenerateGas::new(EXCL).unwrap();
        let c = gas.heat_capacity_coefficient(0.002).unwrap() * 0.002;
        assert!(c < 0.011 && c > 0.0);
        assert!(matches!(
            gas.heat_capacity_coefficient_with_step(0.01, 1e-9),
            Err(Error::StepTooSmall { .. })
        ));
    }
}
