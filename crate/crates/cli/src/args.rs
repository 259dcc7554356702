use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};

use xfermi_core::OccupancyModel;

#[derive(Debug, Parser)]
#[command(name = "xfermi", version, about = "Thermodynamics of exclusive and ordinary fermion gases")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

impl Cli {
    /// Like `try_parse_from`, except that a repeated flag keeps its last
    /// value, which is how config-file defaults get overridden.
    pub fn parse_overridable<I, T>(argv: I) -> Result<Self, clap::Error>
    where
        I: IntoIterator<Item = T>,
        T: Into<std::ffi::OsString> + Clone,
    {
        let mut cmd = Cli::command().args_override_self(true);
        let names: Vec<String> = cmd.get_subcommands().map(|c| c.get_name().to_owned()).collect();
        for name in names {
            cmd = cmd.mut_subcommand(name, |c| c.args_override_self(true));
        }
        let matches = cmd.try_get_matches_from(argv)?;
        Cli::from_arg_matches(&matches)
    }
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Occupation law [default: exclusive]
    #[arg(long, global = true, value_enum)]
    pub statistics: Option<Statistics>,
    /// Unit system for inputs and outputs [default: reduced]
    #[arg(long, global = true, value_enum)]
    pub units: Option<Units>,
    /// Output format [default: table]
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Parameter sweep, NAME:START:STOP:POINTS[:lin|log]
    #[arg(long, global = true)]
    pub sweep: Option<Sweep>,
    /// Seed for sampled quantities [default: 0]
    #[arg(long, global = true, env = "XFERMI_SEED")]
    pub seed: Option<u64>,
    /// Relative quadrature tolerance
    #[arg(long, global = true)]
    pub rel_tol: Option<f64>,
    /// Absolute quadrature tolerance
    #[arg(long, global = true)]
    pub abs_tol: Option<f64>,
    /// Quadrature subdivision budget
    #[arg(long, global = true)]
    pub max_subdivisions: Option<usize>,
    /// key=value file with default flag values; flags given on the command line win
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Occupation f(x) with x = beta (eps - mu)
    Occupation {
        #[arg(long, allow_hyphen_values = true)]
        x: Option<f64>,
    },
    /// Density, energy and pressure at given eta or n lambda^3
    Eos {
        #[arg(long, allow_hyphen_values = true)]
        eta: Option<f64>,
        /// Solve for eta at this degeneracy; takes precedence over --eta
        #[arg(long, allow_hyphen_values = true)]
        n_lambda3: Option<f64>,
        /// Temperature in kelvin (si units)
        #[arg(long, default_value_t = 300.0)]
        temperature: f64,
    },
    /// Exact compressibility and fugacity against the virial series
    Virial {
        #[arg(long, allow_hyphen_values = true)]
        n_lambda3: Option<f64>,
    },
    /// Fermi energy, ground-state energy and degeneracy pressure
    Fermi {
        /// Number density (reduced, or m^-3 in si units)
        #[arg(long, allow_hyphen_values = true)]
        density: Option<f64>,
    },
    /// Sommerfeld constants A1 and A2
    Sommerfeld {
        /// Blocking parameter a [default: from --statistics]
        #[arg(long, allow_hyphen_values = true)]
        blocking: Option<f64>,
    },
    /// Chemical potential against temperature at fixed density
    MuOfT {
        /// k_B T / E_F
        #[arg(long, allow_hyphen_values = true)]
        t: Option<f64>,
    },
    /// Low-temperature specific heat coefficient
    HeatCapacity {
        /// k_B T / E_F
        #[arg(long, allow_hyphen_values = true)]
        t: Option<f64>,
    },
    /// Spin populations and magnetization in a Zeeman field
    Pauli {
        /// beta mu [default: ln 1e-4]
        #[arg(long, allow_hyphen_values = true)]
        eta: Option<f64>,
        /// beta mu_B B
        #[arg(long, allow_hyphen_values = true)]
        b: Option<f64>,
        /// Field in tesla (si units)
        #[arg(long, allow_hyphen_values = true)]
        field: Option<f64>,
        /// Temperature in kelvin (si units)
        #[arg(long, default_value_t = 300.0)]
        temperature: f64,
    },
    /// Landau level sums and the orbital susceptibility
    Landau {
        #[arg(long, allow_hyphen_values = true)]
        n_lambda3: Option<f64>,
        /// hbar omega_c / 2 k_B T for the level-sum check
        #[arg(long, allow_hyphen_values = true)]
        s: Option<f64>,
        /// Number density in m^-3 (si units)
        #[arg(long, allow_hyphen_values = true)]
        density: Option<f64>,
        /// Temperature in kelvin (si units)
        #[arg(long, default_value_t = 300.0)]
        temperature: f64,
    },
    /// Polytropes, Lane-Emden constants and the stellar mass ratio
    Star {
        /// Central density for the reported masses (reduced)
        #[arg(long, default_value_t = 1.0)]
        central_density: f64,
    },
    /// Enumeration and Monte Carlo check of a random level system
    Oracle {
        #[arg(long, default_value_t = 6)]
        levels: usize,
        #[arg(long, default_value_t = 1.0)]
        z: f64,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        /// Level energies are drawn from [0, energy_max] in units of k_B T
        #[arg(long, default_value_t = 5.0)]
        energy_max: f64,
    },
    /// One quantity for all three statistics side by side
    Compare {
        #[arg(long, value_enum, default_value_t = Quantity::Virial)]
        quantity: Quantity,
        #[arg(long, allow_hyphen_values = true)]
        x: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        eta: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        n_lambda3: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        t: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        density: Option<f64>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Occupation { .. } => "occupation",
            Command::Eos { .. } => "eos",
            Command::Virial { .. } => "virial",
            Command::Fermi { .. } => "fermi",
            Command::Sommerfeld { .. } => "sommerfeld",
            Command::MuOfT { .. } => "mu-of-t",
            Command::HeatCapacity { .. } => "heat-capacity",
            Command::Pauli { .. } => "pauli",
            Command::Landau { .. } => "landau",
            Command::Star { .. } => "star",
            Command::Oracle { .. } => "oracle",
            Command::Compare { .. } => "compare",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Statistics {
    Exclusive,
    Fd,
    Boltzmann,
}

impl Statistics {
    pub const ALL: [Statistics; 3] = [Statistics::Exclusive, Statistics::Fd, Statistics::Boltzmann];

    pub fn model(self) -> OccupancyModel {
        match self {
            Statistics::Exclusive => OccupancyModel::EXCLUSIVE,
            Statistics::Fd => OccupancyModel::STANDARD_FD,
            Statistics::Boltzmann => OccupancyModel::BOLTZMANN,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Statistics::Exclusive => "exclusive",
            Statistics::Fd => "fd",
            Statistics::Boltzmann => "boltzmann",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Units {
    Reduced,
    Si,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Quantity {
    Occupation,
    Density,
    Pressure,
    Compressibility,
    Virial,
    FermiEnergy,
    ChemicalPotential,
    HeatCapacity,
    Sommerfeld,
    Susceptibility,
}

impl Quantity {
    pub fn name(self) -> String {
        self.to_possible_value().expect("no skipped variants").get_name().to_owned()
    }

    /// Row labels the comparison emits for this quantity.
    pub fn labels(self) -> &'static [&'static str] {
        match self {
            Quantity::Occupation => &["occupation"],
            Quantity::Density => &["n_lambda3"],
            Quantity::Pressure => &["p"],
            Quantity::Compressibility => &["compressibility"],
            Quantity::Virial => &["virial_coefficient"],
            Quantity::FermiEnergy => &["fermi_energy"],
            Quantity::ChemicalPotential => &["mu_over_ef"],
            Quantity::HeatCapacity => &["c_over_t"],
            Quantity::Sommerfeld => &["A1", "A2"],
            Quantity::Susceptibility => &["chi_coefficient"],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub name: String,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    pub scale: Scale,
}

impl Sweep {
    pub fn values(&self) -> Vec<f64> {
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                let f = i as f64 / last;
                match self.scale {
                    Scale::Linear => self.start + f * (self.stop - self.start),
                    Scale::Log => (self.start.ln() + f * (self.stop.ln() - self.start.ln())).exp(),
                }
            })
            .collect()
    }
}

impl FromStr for Sweep {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        if !(4..=5).contains(&parts.len()) {
            return Err("expected NAME:START:STOP:POINTS[:lin|log]".to_owned());
        }
        let number = |p: &str| p.parse::<f64>().map_err(|e| format!("bad sweep bound {p:?}: {e}"));
        let (start, stop) = (number(parts[1])?, number(parts[2])?);
        let points: usize = parts[3].parse().map_err(|e| format!("bad sweep point count {:?}: {e}", parts[3]))?;
        if points < 2 {
            return Err("a sweep needs at least 2 points".to_owned());
        }
        if !start.is_finite() || !stop.is_finite() {
            return Err("sweep bounds must be finite".to_owned());
        }
        let scale = match parts.get(4).copied() {
            None | Some("lin") => Scale::Linear,
            Some("log") => Scale::Log,
            Some(other) => return Err(format!("unknown sweep scale {other:?}")),
        };
        if scale == Scale::Log && !(start > 0.0 && stop > 0.0) {
            return Err("log sweeps need positive bounds".to_owned());
        }
        if parts[0].is_empty() {
            return Err("sweep variable name is empty".to_owned());
        }
        Ok(Sweep {
            name: parts[0].replace('-', "_"),
            start,
            stop,
            points,
            scale,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_parsing() {
        let s: Sweep = "t:0.01:0.1:4".parse().unwrap();
        assert_eq!(s.scale, Scale::Linear);
        assert_eq!(s.values().len(), 4);
        assert_eq!(s.values()[3], 0.1);
        let l: Sweep = "n-lambda3:0.01:1:3:log".parse().unwrap();
        assert_eq!(l.name, "n_lambda3");
        assert!((l.values()[1] - 0.1).abs() < 1e-15);
        assert!("t:0:1:1".parse::<Sweep>().is_err());
        assert!("t:0:1:3:log".parse::<Sweep>().is_err());
        assert!("t:0:1".parse::<Sweep>().is_err());
        assert!("t:0:1:3:cubic".parse::<Sweep>().is_err());
    }
}
