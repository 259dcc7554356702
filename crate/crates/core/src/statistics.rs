//! The generalized occupation law `g / (e^x + a)` and the conversions between
//! physical and reduced variables.

use std::f64::consts::PI;
use std::fmt;

use crate::{Error, Result};

/// Beyond this `|x|` the occupation switches to its asymptotic forms.
const ASYMPTOTIC_CUTOFF: f64 = 700.0;

/// Occupation `g / (exp(beta (eps - mu)) + a)`.
///
/// `g` is the numerator weight (2 for spin-1/2 with the spin factor kept in
/// the distribution) and `a` the blocking parameter. The zero-temperature
/// step height is `g / a` particles per orbital.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OccupancyModel {
    weight: f64,
    blocking: f64,
}

impl OccupancyModel {
    /// At most one particle per orbital, either spin.
    pub const EXCLUSIVE: Self = Self {
        weight: 2.0,
        blocking: 2.0,
    };
    /// Ordinary spin-1/2 Fermi-Dirac gas.
    pub const STANDARD_FD: Self = Self {
        weight: 2.0,
        blocking: 1.0,
    };
    pub const BOLTZMANN: Self = Self {
        weight: 2.0,
        blocking: 0.0,
    };

    pub fn new(weight: f64, blocking: f64) -> Result<Self> {
        if !(weight > 0.0) || !weight.is_finite() {
            return Err(Error::domain("numerator weight g", weight));
        }
        if !(blocking >= 0.0) || !blocking.is_finite() {
            return Err(Error::domain("blocking parameter a", blocking));
        }
        Ok(Self { weight, blocking })
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn blocking(&self) -> f64 {
        self.blocking
    }

    /// Particles per orbital at `T = 0`; infinite for the Boltzmann gas.
    pub fn step_height(&self) -> f64 {
        self.weight / self.blocking
    }

    pub fn is_degenerate(&self) -> bool {
        self.blocking > 0.0
    }

    pub fn name(&self) -> &'static str {
        if *self == Self::EXCLUSIVE {
            "exclusive"
        } else if *self == Self::STANDARD_FD {
            "fd"
        } else if *self == Self::BOLTZMANN {
            "boltzmann"
        } else {
            "custom"
        }
    }

    /// Mean occupancy at `x = beta (eps - mu)`.
    pub fn occupation(&self, x: f64) -> f64 {
        let (g, a) = (self.weight, self.blocking);
        if x >= ASYMPTOTIC_CUTOFF {
            g * (-x).exp()
        } else if x <= -ASYMPTOTIC_CUTOFF && a > 0.0 {
            g / a
        } else if x > 0.0 {
            let w = (-x).exp();
            g * w / (1.0 + a * w)
        } else {
            g / (x.exp() + a)
        }
    }

    /// Per-orbital `log` of the grand partition factor, `(g/a) ln(1 + a e^{-x})`,
    /// whose `-d/dx` is [`occupation`](Self::occupation). Reduces to `g e^{-x}`
    /// as `a -> 0`.
    pub fn log_partition_factor(&self, x: f64) -> f64 {
        let (g, a) = (self.weight, self.blocking);
        if a == 0.0 {
            return g * (-x).exp();
        }
        if x >= 0.0 {
            g / a * (a * (-x).exp()).ln_1p()
        } else {
            // ln(1 + a e^{-x}) = -x + ln(a + e^{x})
            g / a * (-x + (a + x.exp()).ln())
        }
    }
}

impl fmt::Display for OccupancyModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.name() {
            "custom" => write!(f, "custom(g={}, a={})", self.weight, self.blocking),
            name => f.write_str(name),
        }
    }
}

/// Free-function form of [`OccupancyModel::occupation`].
pub fn occupation(x: f64, model: OccupancyModel) -> f64 {
    model.occupation(x)
}

/// Constants used when converting to and from reduced units.
#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalConstants {
    pub name: String,
    pub hbar: f64,
    pub boltzmann: f64,
    pub electron_mass: f64,
    pub elementary_charge: f64,
    pub speed_of_light: f64,
    pub gravitational_constant: f64,
    pub atomic_mass_unit: f64,
}

impl PhysicalConstants {
    /// `hbar = k_B = m_e = e = c = G = m_u = 1`.
    pub fn reduced() -> Self {
        Self {
            name: "reduced".to_owned(),
            hbar: 1.0,
            boltzmann: 1.0,
            electron_mass: 1.0,
            elementary_charge: 1.0,
            speed_of_light: 1.0,
            gravitational_constant: 1.0,
            atomic_mass_unit: 1.0,
        }
    }

    /// `e hbar / 2 m_e`.
    pub fn bohr_magneton(&self) -> f64 {
        self.elementary_charge * self.hbar / (2.0 * self.electron_mass)
    }
}

/// `lambda = sqrt(2 pi hbar^2 / (m k_B T))`.
pub fn thermal_wavelength(mass: f64, temperature: f64, constants: &PhysicalConstants) -> Result<f64> {
    if !(mass > 0.0) {
        return Err(Error::domain("mass", mass));
    }
    if !(temperature > 0.0) {
        return Err(Error::domain("temperature", temperature));
    }
    let h = constants.hbar;
    Ok((2.0 * PI * h * h / (mass * constants.boltzmann * temperature)).sqrt())
}

/// Coefficient `b` in the single-spin density of states `D(eps) = b V eps^{1/2}`,
/// `b = (2m)^{3/2} / (4 pi^2 hbar^3)`.
pub fn dos_coefficient(mass: f64, constants: &PhysicalConstants) -> Result<f64> {
    if !(mass > 0.0) {
        return Err(Error::domain("mass", mass));
    }
    Ok((2.0 * mass).powf(1.5) / (4.0 * PI * PI * constants.hbar.powi(3)))
}

/// A gas at given mass, temperature, fugacity and volume.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GasParameters {
    pub mass: f64,
    pub temperature: f64,
    pub fugacity: f64,
    pub volume: f64,
}

impl GasParameters {
    pub fn new(mass: f64, temperature: f64, fugacity: f64, volume: f64) -> Result<Self> {
        for (name, v) in [
            ("mass", mass),
            ("temperature", temperature),
            ("fugacity", fugacity),
            ("volume", volume),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::domain(name, v));
            }
        }
        Ok(Self {
            mass,
            temperature,
            fugacity,
            volume,
        })
    }

    pub fn beta(&self, constants: &PhysicalConstants) -> f64 {
        1.0 / (constants.boltzmann * self.temperature)
    }

    /// `beta mu = ln z`.
    pub fn eta(&self) -> f64 {
        self.fugacity.ln()
    }

    pub fn chemical_potential(&self, constants: &PhysicalConstants) -> f64 {
        self.eta() / self.beta(constants)
    }

    pub fn thermal_wavelength(&self, constants: &PhysicalConstants) -> Result<f64> {
        thermal_wavelength(self.mass, self.temperature, constants)
    }

    /// Reduced state for a gas of `particles` particles in this volume.
    pub fn reduced_state(&self, particles: f64, constants: &PhysicalConstants) -> Result<ReducedState> {
        let lambda = self.thermal_wavelength(constants)?;
        ReducedState::new(self.eta(), particles / self.volume * lambda.powi(3))
    }
}

/// The two dimensionless controls every thermodynamic routine works with.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedState {
    pub eta: f64,
    pub degeneracy_parameter: f64,
}

impl ReducedState {
    pub fn new(eta: f64, degeneracy_parameter: f64) -> Result<Self> {
        if !eta.is_finite() {
            return Err(Error::domain("eta", eta));
        }
        if !(degeneracy_parameter > 0.0) {
            return Err(Error::domain("n lambda^3", degeneracy_parameter));
        }
        Ok(Self {
            eta,
            degeneracy_parameter,
        })
    }

    pub fn fugacity(&self) -> f64 {
        self.eta.exp()
    }
}
