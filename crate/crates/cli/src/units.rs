use serde::Deserialize;

use xfermi_core::PhysicalConstants;

const CODATA_2018: &str = include_str!("../data/codata2018.toml");

/// The pinned constants table shipped with the binary.
#[derive(Debug, Clone, Deserialize)]
pub struct ConstantsTable {
    pub name: String,
    pub hbar: f64,
    pub boltzmann: f64,
    pub electron_mass: f64,
    pub elementary_charge: f64,
    pub speed_of_light: f64,
    pub gravitational_constant: f64,
    pub atomic_mass_unit: f64,
    pub vacuum_permeability: f64,
}

impl ConstantsTable {
    pub fn load() -> Self {
        toml::from_str(CODATA_2018).expect("bundled constants table parses")
    }

    pub fn physical(&self) -> PhysicalConstants {
        PhysicalConstants {
            name: self.name.clone(),
            hbar: self.hbar,
            boltzmann: self.boltzmann,
            electron_mass: self.electron_mass,
            elementary_charge: self.elementary_charge,
            speed_of_light: self.speed_of_light,
            gravitational_constant: self.gravitational_constant,
            atomic_mass_unit: self.atomic_mass_unit,
        }
    }
}
