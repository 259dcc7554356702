//! Finite-temperature equation of state in reduced form.
//!
//! With `x = beta eps` and the single-spin density of states, the reduced
//! quantities are
//!
//! ```text
//! n lambda^3        = (2/sqrt(pi)) int x^{1/2} f(x - eta) dx
//! E lambda^3/(V kT) = (2/sqrt(pi)) int x^{3/2} f(x - eta) dx
//! P lambda^3/kT     = (2/sqrt(pi)) int x^{1/2} (g/a) ln(1 + a e^{eta - x}) dx
//! ```
//!
//! Pressure comes from the grand potential, independently of the energy
//! integral, so `p = 2u/3` is a check rather than a definition.

use std::f64::consts::FRAC_2_SQRT_PI;

use crate::numerics::{find_root_with, integrate_semi_infinite, knee_breakpoints, BracketedRootSpec, QuadratureSpec};
use crate::statistics::OccupancyModel;
use crate::{Error, Result};

/// Virial results are flagged outside `n lambda^3 <= 0.2`.
pub const VIRIAL_VALIDITY_LIMIT: f64 = 0.2;

/// A solved thermodynamic state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermoPoint {
    pub eta: f64,
    pub z: f64,
    pub n_lambda3: f64,
    /// `<E> lambda^3 / (V k_B T)`
    pub u: f64,
    /// `P lambda^3 / (k_B T)`
    pub p: f64,
    pub model: OccupancyModel,
}

impl ThermoPoint {
    /// `PV / (N k_B T)`.
    pub fn compressibility(&self) -> f64 {
        self.p / self.n_lambda3
    }

    /// `<E> / (N k_B T)`.
    pub fn energy_per_particle(&self) -> f64 {
        self.u / self.n_lambda3
    }
}

/// Ideal gas obeying one occupation law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdealGas {
    model: OccupancyModel,
    quadrature: QuadratureSpec,
}

impl IdealGas {
    pub fn new(model: OccupancyModel) -> Self {
        Self {
            model,
            quadrature: QuadratureSpec::default(),
        }
    }

    pub fn with_quadrature(mut self, quadrature: QuadratureSpec) -> Self {
        self.quadrature = quadrature;
        self
    }

    pub fn model(&self) -> OccupancyModel {
        self.model
    }

    pub fn quadrature(&self) -> &QuadratureSpec {
        &self.quadrature
    }

    fn moment<K: Fn(f64) -> f64>(&self, eta: f64, kernel: K) -> Result<f64> {
        if !eta.is_finite() {
            return Err(Error::domain("eta", eta));
        }
        let cuts = if self.model.is_degenerate() {
            knee_breakpoints(eta, 1.0)
        } else {
            Vec::new()
        };
        // in the dilute regime the integrand is O(z); scale it to O(1) so the
        // absolute tolerance never dominates
        let scale = eta.clamp(-700.0, 0.0).exp();
        let value = integrate_semi_infinite(|x| kernel(x) / scale, &cuts, &self.quadrature)?.value;
        Ok(FRAC_2_SQRT_PI * value * scale)
    }

    /// `n lambda^3` at `eta = beta mu`.
    pub fn density(&self, eta: f64) -> Result<f64> {
        let m = self.model;
        self.moment(eta, |x| x.sqrt() * m.occupation(x - eta))
    }

    /// `<E> lambda^3 / (V k_B T)`.
    pub fn energy_density(&self, eta: f64) -> Result<f64> {
        let m = self.model;
        self.moment(eta, |x| x * x.sqrt() * m.occupation(x - eta))
    }

    /// `P lambda^3 / (k_B T)` from `ln Z_G`.
    pub fn pressure(&self, eta: f64) -> Result<f64> {
        let m = self.model;
        self.moment(eta, |x| x.sqrt() * m.log_partition_factor(x - eta))
    }

    pub fn thermo_point(&self, eta: f64) -> Result<ThermoPoint> {
        Ok(ThermoPoint {
            eta,
            z: eta.exp(),
            n_lambda3: self.density(eta)?,
            u: self.energy_density(eta)?,
            p: self.pressure(eta)?,
            model: self.model,
        })
    }

    /// Inverts [`density`](Self::density): the `eta` at which the gas has
    /// degeneracy parameter `n_lambda3`.
    pub fn solve_fugacity(&self, n_lambda3: f64) -> Result<f64> {
        if !(n_lambda3 > 0.0) || !n_lambda3.is_finite() {
            return Err(Error::domain("n lambda^3", n_lambda3));
        }
        let residual = |eta: f64| -> Result<f64> { Ok(self.density(eta)? / n_lambda3 - 1.0) };

        // bracket by doubling outward from the Boltzmann estimate
        let start = (n_lambda3 / self.model.weight()).ln();
        let (mut lo, mut hi) = (start - 1.0, start + 1.0);
        let mut step = 1.0;
        while residual(hi)? < 0.0 {
            lo = hi;
            hi += step;
            step *= 2.0;
            if step > 1e12 {
                return Err(Error::domain("n lambda^3 (no bracket found)", n_lambda3));
            }
        }
        step = 1.0;
        while residual(lo)? > 0.0 {
            hi = lo;
            lo -= step;
            step *= 2.0;
            if step > 1e12 {
                return Err(Error::domain("n lambda^3 (no bracket found)", n_lambda3));
            }
        }

        let tolerance = 1e-14 * lo.abs().max(hi.abs()).max(1.0);
        let spec = BracketedRootSpec::new(lo, hi)
            .with_tolerance(tolerance)
            .with_max_iterations(300);
        find_root_with(residual, &spec)
    }

    pub fn state_at_density(&self, n_lambda3: f64) -> Result<ThermoPoint> {
        let eta = self.solve_fugacity(n_lambda3)?;
        let mut point = self.thermo_point(eta)?;
        point.n_lambda3 = n_lambda3;
        Ok(point)
    }

    /// Exact `PV / (N k_B T)` at fixed `n lambda^3`.
    pub fn compressibility(&self, n_lambda3: f64) -> Result<f64> {
        let eta = self.solve_fugacity(n_lambda3)?;
        Ok(self.pressure(eta)? / n_lambda3)
    }
}

pub fn density(eta: f64, model: OccupancyModel) -> Result<f64> {
    IdealGas::new(model).density(eta)
}

pub fn energy_density(eta: f64, model: OccupancyModel) -> Result<f64> {
    IdealGas::new(model).energy_density(eta)
}

pub fn pressure(eta: f64, model: OccupancyModel) -> Result<f64> {
    IdealGas::new(model).pressure(eta)
}

pub fn solve_fugacity(n_lambda3: f64, model: OccupancyModel) -> Result<f64> {
    IdealGas::new(model).solve_fugacity(n_lambda3)
}

/// Second virial coefficient of `PV/(N k_B T)` in powers of `n lambda^3`:
/// `a / (g 2^{5/2})`, which is `1/(4 sqrt 2)` for exclusive fermions and
/// `1/2^{7/2}` for the ordinary Fermi gas.
pub fn virial_coefficient(model: OccupancyModel) -> f64 {
    model.blocking() / (model.weight() * 2f64.powf(2.5))
}

/// `PV/(N k_B T) ~ 1 + B n lambda^3`. Meaningful for `n lambda^3 << 1`; see
/// [`VIRIAL_VALIDITY_LIMIT`].
pub fn virial_pressure(n_lambda3: f64, model: OccupancyModel) -> f64 {
    1.0 + virial_coefficient(model) * n_lambda3
}

/// Fugacity to the same order, `z ~ (n/g)(1 + a (n/g) / 2^{3/2})`.
pub fn virial_fugacity(n_lambda3: f64, model: OccupancyModel) -> f64 {
    let leading = n_lambda3 / model.weight();
    leading * (1.0 + model.blocking() * leading / 2f64.powf(1.5))
}

pub fn virial_in_validity(n_lambda3: f64) -> bool {
    n_lambda3 <= VIRIAL_VALIDITY_LIMIT
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const EXCL: OccupancyModel = OccupancyModel::EXCLUSIVE;
    const FD: OccupancyModel = OccupancyModel::STANDARD_FD;

    #[test]
    fn dilute_limit_is_two_z() {
        let eta = -20.0;
        let z = f64::exp(eta);
        let n = density(eta, EXCL).unwrap();
        assert_relative_eq!(n / (2.0 * z), 1.0, max_relative = 1e-8);
        // second-order term: 2z(1 - z/sqrt2)
        let eta = -6.0;
        let z = f64::exp(eta);
        let n = density(eta, EXCL).unwrap();
        assert!((n - 2.0 * z * (1.0 - z / 2f64.sqrt())).abs() < 2.0 * z * z * z);
    }

    #[test]
    fn classical_energy_per_particle() {
        let p = IdealGas::new(EXCL).thermo_point(-25.0).unwrap();
        assert_relative_eq!(p.energy_per_particle(), 1.5, max_relative = 1e-9);
    }

    #[test]
    fn equation_of_state_identity_examples() {
        for eta in [-2.0, 0.0, 3.0] {
            let p = IdealGas::new(EXCL).thermo_point(eta).unwrap();
            assert_relative_eq!(p.p / p.u, 2.0 / 3.0, max_relative = 1e-8);
        }
    }

    #[test]
    fn boltzmann_closed_forms() {
        let gas = IdealGas::new(OccupancyModel::BOLTZMANN);
        for eta in [-3.0, 0.0, 2.5] {
            let z = f64::exp(eta);
            let p = gas.thermo_point(eta).unwrap();
            assert_relative_eq!(p.n_lambda3, 2.0 * z, max_relative = 1e-10);
            assert_relative_eq!(p.u, 3.0 * z, max_relative = 1e-10);
            assert_relative_eq!(p.p, 2.0 * z, max_relative = 1e-10);
        }
    }

    #[test]
    fn fugacity_round_trip() {
        for model in [EXCL, FD, OccupancyModel::BOLTZMANN] {
            let n = density(0.5, model).unwrap();
            assert!((solve_fugacity(n, model).unwrap() - 0.5).abs() < 1e-9);
        }
        let tiny = 1e-8;
        assert!((solve_fugacity(tiny, EXCL).unwrap() - (tiny / 2.0).ln()).abs() < 1e-8);
    }

    #[test]
    fn degenerate_fugacity_solves_to_tolerance() {
        let gas = IdealGas::new(EXCL);
        for n in [1.0, 50.0, 3000.0] {
            let eta = gas.solve_fugacity(n).unwrap();
            assert_relative_eq!(gas.density(eta).unwrap(), n, max_relative = 1e-10);
        }
        assert!(gas.solve_fugacity(0.0).is_err());
        assert!(gas.solve_fugacity(f64::NAN).is_err());
    }

    #[test]
    fn virial_series_values() {
        assert_eq!(virial_pressure(0.0, EXCL), 1.0);
        assert_relative_eq!(virial_pressure(0.1, EXCL), 1.0 + 0.1 / (4.0 * 2f64.sqrt()), max_relative = 1e-15);
        assert!((virial_pressure(0.1, EXCL) - 1.017_678).abs() < 1e-6);
        assert_relative_eq!(virial_coefficient(FD), 2f64.powf(-3.5), max_relative = 1e-15);
        let n = 0.05;
        assert_relative_eq!(
            virial_fugacity(n, EXCL),
            n / 2.0 * (1.0 + n / 2.0 / 2f64.sqrt()),
            max_relative = 1e-15
        );
        assert!(virial_in_validity(0.2) && !virial_in_validity(0.21));
    }

    #[test]
    fn exclusive_virial_exceeds_standard() {
        for i in 1..=20 {
            let x = 0.01 * i as f64;
            assert!(virial_pressure(x, EXCL) > virial_pressure(x, FD));
        }
    }

    #[test]
    fn non_finite_eta_is_rejected() {
        assert!(density(f64::INFINITY, EXCL).is_err());
    }
}
