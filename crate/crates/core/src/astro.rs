//! Degenerate stars: cold polytropic equations of state, Lane-Emden structure
//! and the mass ratio between exclusive and ordinary fermion stars.
//!
//! Units are reduced (`hbar = m = c = G = 1`) unless a gravitational constant
//! is passed explicitly. Density is number density, which equals mass density
//! for unit particle mass.

use std::f64::consts::PI;

use crate::numerics::{integrate_ode, StepControl};
use crate::statistics::OccupancyModel;
use crate::{Error, Result};

/// Mass ratio quoted for the exclusive Chandrasekhar limit. Reported, never
/// used in a calculation.
pub const PUBLISHED_MASS_RATIO: f64 = 1.6;

/// Largest polytropic index accepted by [`lane_emden`].
pub const MAX_POLYTROPIC_INDEX: f64 = 4.9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// `eps = p^2/2m`, `gamma = 5/3`
    NonRelativistic,
    /// `eps = pc`, `gamma = 4/3`
    UltraRelativistic,
}

impl Regime {
    pub fn gamma(self) -> f64 {
        match self {
            Regime::NonRelativistic => 5.0 / 3.0,
            Regime::UltraRelativistic => 4.0 / 3.0,
        }
    }

    /// `n = 1/(gamma - 1)`: 3/2 or 3.
    pub fn polytropic_index(self) -> f64 {
        match self {
            Regime::NonRelativistic => 1.5,
            Regime::UltraRelativistic => 3.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Regime::NonRelativistic => "non-relativistic",
            Regime::UltraRelativistic => "ultra-relativistic",
        }
    }
}

/// Particles per momentum-space orbital at zero temperature: the step height
/// `g/a`, 1 for exclusive fermions and 2 for the spin-1/2 Fermi gas.
fn orbital_filling(model: OccupancyModel) -> Result<f64> {
    if model.is_degenerate() {
        Ok(model.step_height())
    } else {
        Err(Error::Unsupported(format!("the {model} gas has no cold equation of state")))
    }
}

/// `K` in `P = K n^gamma` for a cold gas:
/// `(1/5)(6 pi^2 / g)^{2/3}` non-relativistic, `(1/4)(6 pi^2 / g)^{1/3}`
/// ultra-relativistic, with `g` the orbital filling.
pub fn eos_coefficient(model: OccupancyModel, regime: Regime) -> Result<f64> {
    let base = 6.0 * PI * PI / orbital_filling(model)?;
    Ok(match regime {
        Regime::NonRelativistic => 0.2 * base.powf(2.0 / 3.0),
        Regime::UltraRelativistic => 0.25 * base.cbrt(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolytropeEOS {
    pub k: f64,
    pub gamma: f64,
    pub regime: Regime,
    pub model: OccupancyModel,
}

impl PolytropeEOS {
    pub fn new(model: OccupancyModel, regime: Regime) -> Result<Self> {
        Ok(Self {
            k: eos_coefficient(model, regime)?,
            gamma: regime.gamma(),
            regime,
            model,
        })
    }

    pub fn polytropic_index(&self) -> f64 {
        self.regime.polytropic_index()
    }

    pub fn pressure(&self, density: f64) -> Result<f64> {
        if !(density >= 0.0) || !density.is_finite() {
            return Err(Error::domain("density", density));
        }
        Ok(self.k * density.powf(self.gamma))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaneEmdenSolution {
    pub index: f64,
    /// First zero of `theta`.
    pub xi1: f64,
    /// `-xi_1^2 theta'(xi_1)`
    pub mass_integral: f64,
}

/// Solves `theta'' + (2/xi) theta' + theta^n = 0`, `theta(0) = 1`,
/// `theta'(0) = 0` to the first zero.
pub fn lane_emden(index: f64) -> Result<LaneEmdenSolution> {
    lane_emden_with_step(index, 1e-3)
}

pub fn lane_emden_with_step(index: f64, step: f64) -> Result<LaneEmdenSolution> {
    if !(0.0..=MAX_POLYTROPIC_INDEX).contains(&index) {
        return Err(Error::domain("polytropic index", index));
    }
    // theta goes slightly negative inside the final RK stages
    let power = move |theta: f64| {
        if index == 0.0 {
            1.0
        } else {
            theta.signum() * theta.abs().powf(index)
        }
    };
    let xi0 = step;
    let x2 = xi0 * xi0;
    let theta0 = 1.0 - x2 / 6.0 + index * x2 * x2 / 120.0;
    let slope0 = -xi0 / 3.0 + index * x2 * xi0 / 30.0;

    let control = StepControl {
        step,
        event_tolerance: 1e-13,
        horizon: 1e3,
    };
    let end = integrate_ode(
        |xi, y: &[f64; 2]| [y[1], -power(y[0]) - 2.0 * y[1] / xi],
        xi0,
        [theta0, slope0],
        |_, y| y[0] <= 0.0,
        &control,
    )?;
    let xi1 = end.t;
    Ok(LaneEmdenSolution {
        index,
        xi1,
        mass_integral: -xi1 * xi1 * end.state[1],
    })
}

/// Mass of a polytrope `P = K rho^{1 + 1/n}`:
/// `4 pi omega_n [K (n+1) / (4 pi G)]^{3/2} rho_c^{(3-n)/(2n)}`.
pub fn polytrope_mass(k: f64, index: f64, central_density: f64, gravitational_constant: f64) -> Result<f64> {
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::domain("K", k));
    }
    if !(central_density > 0.0) || !central_density.is_finite() {
        return Err(Error::domain("central density", central_density));
    }
    if !(gravitational_constant > 0.0) || !gravitational_constant.is_finite() {
        return Err(Error::domain("G", gravitational_constant));
    }
    if !(index > 0.0) {
        return Err(Error::domain("polytropic index", index));
    }
    let solution = lane_emden(index)?;
    let scale = k * (index + 1.0) / (4.0 * PI * gravitational_constant);
    Ok(4.0 * PI * solution.mass_integral * scale.powf(1.5) * central_density.powf((3.0 - index) / (2.0 * index)))
}

/// Stellar mass for `eos` at `central_density`, with `G = 1`.
pub fn white_dwarf_mass(eos: &PolytropeEOS, central_density: f64) -> Result<f64> {
    polytrope_mass(eos.k, eos.polytropic_index(), central_density, 1.0)
}

pub fn white_dwarf_mass_with_g(eos: &PolytropeEOS, central_density: f64, gravitational_constant: f64) -> Result<f64> {
    polytrope_mass(eos.k, eos.polytropic_index(), central_density, gravitational_constant)
}

/// Exclusive versus ordinary fermion stars.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChandrasekharReport {
    pub k_nr_ratio: f64,
    pub k_ur_ratio: f64,
    /// Limiting-mass ratio from the `n = 3` polytropes, `(K_UR ratio)^{3/2}`.
    pub mass_ratio: f64,
    /// Non-relativistic mass ratio at equal central density,
    /// `(K_NR ratio)^{3/2}`.
    pub nr_mass_ratio: f64,
    pub published: f64,
}

pub fn chandrasekhar_ratio() -> Result<ChandrasekharReport> {
    chandrasekhar_ratio_between(OccupancyModel::EXCLUSIVE, OccupancyModel::STANDARD_FD)
}

pub fn chandrasekhar_ratio_between(numerator: OccupancyModel, denominator: OccupancyModel) -> Result<ChandrasekharReport> {
    let ratio = |regime| -> Result<f64> { Ok(eos_coefficient(numerator, regime)? / eos_coefficient(denominator, regime)?) };
    let mass = |model, regime| -> Result<f64> { white_dwarf_mass(&PolytropeEOS::new(model, regime)?, 1.0) };
    let k_ur_ratio = ratio(Regime::UltraRelativistic)?;
    Ok(ChandrasekharReport {
        k_nr_ratio: ratio(Regime::NonRelativistic)?,
        k_ur_ratio,
        mass_ratio: mass(numerator, Regime::UltraRelativistic)? / mass(denominator, Regime::UltraRelativistic)?,
        nr_mass_ratio: mass(numerator, Regime::NonRelativistic)? / mass(denominator, Regime::NonRelativistic)?,
        published: PUBLISHED_MASS_RATIO,
    })
}
