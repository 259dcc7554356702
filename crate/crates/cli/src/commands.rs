use anyhow::{Context as _, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use xfermi_core::astro::{self, lane_emden, PolytropeEOS, Regime};
use xfermi_core::degenerate::{
    self, DegenerateGas, FermiScale, SommerfeldConstants, PUBLISHED_A1, PUBLISHED_A2, SERIES_VALIDITY_LIMIT,
};
use xfermi_core::ensemble::{
    grand_partition_enumerate, grand_partition_product, mc_occupancy, mean_occupancy_enumerate, LevelSystem, Sampling,
};
use xfermi_core::eos::{self, IdealGas};
use xfermi_core::magnetism::{self, landau_small_z_factor, landau_susceptibility};
use xfermi_core::numerics::QuadratureSpec;
use xfermi_core::statistics::thermal_wavelength;
use xfermi_core::{Error, OccupancyModel};

use crate::args::{Cli, Command, Format, GlobalArgs, Quantity, Statistics, Sweep, Units};
use crate::report::{Cell, Provenance, Report};
use crate::units::ConstantsTable;
use crate::UsageError;

type Rows = Vec<Vec<Cell>>;

struct Ctx {
    statistics: Statistics,
    model: OccupancyModel,
    units: Units,
    format: Format,
    sweep: Option<Sweep>,
    seed: u64,
    quadrature: QuadratureSpec,
    table: ConstantsTable,
}

pub fn run(cli: &Cli) -> Result<(Report, Format)> {
    let ctx = Ctx::new(&cli.global)?;
    let report = match &cli.command {
        Command::Occupation { x } => ctx.occupation(*x),
        Command::Eos { eta, n_lambda3, temperature } => ctx.eos(*eta, *n_lambda3, *temperature),
        Command::Virial { n_lambda3 } => ctx.virial(*n_lambda3),
        Command::Fermi { density } => ctx.fermi(*density),
        Command::Sommerfeld { blocking } => ctx.sommerfeld(*blocking),
        Command::MuOfT { t } => ctx.mu_of_t(*t),
        Command::HeatCapacity { t } => ctx.heat_capacity(*t),
        Command::Pauli { eta, b, field, temperature } => ctx.pauli(*eta, *b, *field, *temperature),
        Command::Landau { n_lambda3, s, density, temperature } => ctx.landau(*n_lambda3, *s, *density, *temperature),
        Command::Star { central_density } => ctx.star(*central_density),
        Command::Oracle { levels, z, samples, energy_max } => ctx.oracle(*levels, *z, *samples, *energy_max),
        Command::Compare { quantity, x, eta, n_lambda3, t, density } => {
            ctx.compare(*quantity, Params { x: *x, eta: *eta, n_lambda3: *n_lambda3, t: *t, density: *density })
        }
    }
    .with_context(|| format!("{} failed", cli.command.name()))?;
    Ok((report, ctx.format))
}

/// Evaluates `f` at every grid point in parallel, keeping grid order.
fn rows_over<F>(values: &[f64], f: F) -> Result<Rows>
where
    F: Fn(f64) -> Result<Rows> + Sync + Send,
{
    let parts: Vec<Result<Rows>> = values.par_iter().map(|&v| f(v)).collect();
    let mut rows = Vec::new();
    for part in parts {
        rows.extend(part?);
    }
    Ok(rows)
}

fn undefined(e: &Error) -> bool {
    matches!(e, Error::Unsupported(_))
}

impl Ctx {
    fn new(g: &GlobalArgs) -> Result<Self> {
        let statistics = g.statistics.unwrap_or(Statistics::Exclusive);
        let d = QuadratureSpec::default();
        let quadrature = QuadratureSpec::new(
            g.rel_tol.unwrap_or(d.relative_tolerance),
            g.abs_tol.unwrap_or(d.absolute_tolerance),
            g.max_subdivisions.unwrap_or(d.max_subdivisions),
        )
        .context("invalid tolerance override")?;
        Ok(Self {
            statistics,
            model: statistics.model(),
            units: g.units.unwrap_or(Units::Reduced),
            format: g.format.unwrap_or(Format::Table),
            sweep: g.sweep.clone(),
            seed: g.seed.unwrap_or(0),
            quadrature,
            table: ConstantsTable::load(),
        })
    }

    fn si(&self) -> bool {
        self.units == Units::Si
    }

    fn gas(&self, model: OccupancyModel) -> IdealGas {
        IdealGas::new(model).with_quadrature(self.quadrature)
    }

    fn report(&self, command: &str, columns: &[&str]) -> Report {
        let mut r = Report::new(command, columns);
        r.meta("statistics", self.statistics.name());
        r.meta("weight_g", self.model.weight());
        r.meta("blocking_a", self.model.blocking());
        r.meta("units", if self.si() { "si" } else { "reduced" });
        if self.si() {
            r.meta("constants", self.table.name.as_str());
        }
        r.meta("rel_tol", self.quadrature.relative_tolerance);
        r.meta("abs_tol", self.quadrature.absolute_tolerance);
        r.meta("max_subdivisions", self.quadrature.max_subdivisions);
        if let Some(s) = &self.sweep {
            r.meta("sweep", s.name.as_str());
        }
        r.meta("version", env!("CARGO_PKG_VERSION"));
        r
    }

    /// Values for variable `name`: the sweep if it targets `name`, else the
    /// single value, else `default`.
    fn grid(&self, command: &str, name: &str, accepted: &[&str], single: Option<f64>, default: &[f64]) -> Result<Vec<f64>> {
        if let Some(s) = &self.sweep {
            if !accepted.contains(&s.name.as_str()) {
                return Err(UsageError::msg(format!(
                    "{command} cannot sweep {:?}; sweepable: {}",
                    s.name,
                    if accepted.is_empty() { "none".to_owned() } else { accepted.join(", ") }
                )));
            }
            if s.name == name {
                if single.is_some() {
                    return Err(UsageError::msg(format!("--{} conflicts with the sweep over it", name.replace('_', "-"))));
                }
                return Ok(s.values());
            }
        }
        Ok(single.map_or_else(|| default.to_vec(), |v| vec![v]))
    }

    fn sweeping(&self, name: &str) -> bool {
        self.sweep.as_ref().is_some_and(|s| s.name == name)
    }

    fn tolerance_note(&self) -> String {
        format!(
            "rel tol {:e}, abs tol {:e}",
            self.quadrature.relative_tolerance, self.quadrature.absolute_tolerance
        )
    }

    fn occupation(&self, x: Option<f64>) -> Result<Report> {
        let xs = self.grid("occupation", "x", &["x"], x, &[-4.0, -3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0, 4.0])?;
        let mut r = self.report("occupation", &["x", "f", "provenance"]);
        let m = self.model;
        r.extend(xs.iter().map(|&x| vec![x.into(), m.occupation(x).into(), Provenance::ClosedForm.into()]));
        Ok(r)
    }

    fn eos(&self, eta: Option<f64>, n_lambda3: Option<f64>, temperature: f64) -> Result<Report> {
        let accepted = ["eta", "n_lambda3"];
        let by_density = n_lambda3.is_some() || self.sweeping("n_lambda3");
        let values = if by_density {
            self.grid("eos", "n_lambda3", &accepted, n_lambda3, &[])?
        } else {
            self.grid("eos", "eta", &accepted, eta, &[0.0])?
        };
        let mut columns = vec!["eta", "z", "n_lambda3", "u", "p", "compressibility", "energy_per_particle"];
        if self.si() {
            columns.extend(["temperature", "thermal_wavelength", "density", "pressure", "energy_density"]);
        }
        columns.push("provenance");
        let mut r = self.report("eos", &columns);
        let si = if self.si() {
            let c = self.table.physical();
            let lambda = thermal_wavelength(c.electron_mass, temperature, &c)?;
            r.meta("species", "electron");
            Some((lambda, c.boltzmann * temperature))
        } else {
            None
        };
        let gas = self.gas(self.model);
        let rows = rows_over(&values, |v| {
            let point = if by_density { gas.state_at_density(v) } else { gas.thermo_point(v) }
                .with_context(|| format!("state at {} = {v} ({})", if by_density { "n lambda^3" } else { "eta" }, self.tolerance_note()))?;
            let mut row: Vec<Cell> = vec![
                point.eta.into(),
                point.z.into(),
                point.n_lambda3.into(),
                point.u.into(),
                point.p.into(),
                point.compressibility().into(),
                point.energy_per_particle().into(),
            ];
            if let Some((lambda, kt)) = si {
                let l3 = lambda.powi(3);
                row.extend([
                    temperature.into(),
                    lambda.into(),
                    (point.n_lambda3 / l3).into(),
                    (point.p * kt / l3).into(),
                    (point.u * kt / l3).into(),
                ]);
            }
            row.push(Provenance::Quadrature.into());
            Ok(vec![row])
        })?;
        r.extend(rows);
        Ok(r)
    }

    fn virial(&self, n_lambda3: Option<f64>) -> Result<Report> {
        let values = self.grid("virial", "n_lambda3", &["n_lambda3"], n_lambda3, &[0.01, 0.05, 0.1, 0.2])?;
        let mut r = self.report("virial", &["n_lambda3", "compressibility", "fugacity", "series_valid", "provenance"]);
        r.meta("virial_coefficient", eos::virial_coefficient(self.model));
        r.meta("series_validity_limit", eos::VIRIAL_VALIDITY_LIMIT);
        let gas = self.gas(self.model);
        let m = self.model;
        let rows = rows_over(&values, |n| {
            let eta = gas
                .solve_fugacity(n)
                .with_context(|| format!("fugacity solve at n lambda^3 = {n} ({})", self.tolerance_note()))?;
            let exact = gas.pressure(eta)? / n;
            let valid = if eos::virial_in_validity(n) { "yes" } else { "no" };
            Ok(vec![
                vec![n.into(), exact.into(), eta.exp().into(), Cell::Empty, Provenance::Quadrature.into()],
                vec![
                    n.into(),
                    eos::virial_pressure(n, m).into(),
                    eos::virial_fugacity(n, m).into(),
                    valid.into(),
                    Provenance::Series.into(),
                ],
            ])
        })?;
        r.extend(rows);
        Ok(r)
    }

    fn fermi(&self, density: Option<f64>) -> Result<Report> {
        let default = if self.si() { 1e28 } else { 1.0 };
        let values = self.grid("fermi", "density", &["density"], density, &[default])?;
        let mut r = self.report(
            "fermi",
            &["density", "fermi_energy", "fermi_temperature", "energy_per_particle", "degeneracy_pressure", "provenance"],
        );
        let (mass, constants) = if self.si() {
            r.meta("species", "electron");
            r.meta("energy_unit", "J");
            r.meta("pressure_unit", "Pa");
            let c = self.table.physical();
            (c.electron_mass, c)
        } else {
            (1.0, xfermi_core::PhysicalConstants::reduced())
        };
        for n in values {
            let scale = FermiScale::new(n, self.model, mass, &constants)?;
            r.push(vec![
                n.into(),
                scale.fermi_energy.into(),
                scale.fermi_temperature.into(),
                (scale.ground_state_energy(1.0)?).into(),
                scale.degeneracy_pressure()?.into(),
                Provenance::ClosedForm.into(),
            ]);
        }
        Ok(r)
    }

    fn sommerfeld(&self, blocking: Option<f64>) -> Result<Report> {
        let values = self.grid("sommerfeld", "blocking", &["blocking"], blocking, &[self.model.blocking()])?;
        let mut r = self.report("sommerfeld", &["blocking", "quantity", "value", "provenance"]);
        r.meta("internal_rel_tol", 1e-13);
        let rows = rows_over(&values, |a| {
            let c = SommerfeldConstants::compute(a).with_context(|| format!("Sommerfeld constants at a = {a}"))?;
            let mut rows: Rows = Vec::new();
            for (name, quad, closed, published) in [("A1", c.a1, c.closed_form_a1, PUBLISHED_A1), ("A2", c.a2, c.closed_form_a2, PUBLISHED_A2)] {
                rows.push(vec![a.into(), name.into(), quad.into(), Provenance::Quadrature.into()]);
                rows.push(vec![a.into(), name.into(), closed.into(), Provenance::ClosedForm.into()]);
                if a == 2.0 {
                    rows.push(vec![a.into(), name.into(), published.into(), Provenance::PaperConstant.into()]);
                }
            }
            Ok(rows)
        })?;
        r.extend(rows);
        Ok(r)
    }

    fn degenerate_gas(&self) -> Result<DegenerateGas> {
        Ok(DegenerateGas::new(self.model)?.with_quadrature(self.quadrature))
    }

    fn mu_of_t(&self, t: Option<f64>) -> Result<Report> {
        let values = self.grid("mu-of-t", "t", &["t"], t, &[0.01, 0.02, 0.05, 0.1, 0.2, 0.25])?;
        let mut r = self.report("mu-of-t", &["t", "mu_over_ef", "second_order_coefficient", "provenance"]);
        r.meta("series_validity_limit", SERIES_VALIDITY_LIMIT);
        let gas = self.degenerate_gas()?;
        let c = SommerfeldConstants::for_model(self.model)?;
        r.meta("first_order_coefficient", c.mu_first_order());
        let printed = self.model == OccupancyModel::EXCLUSIVE;
        let rows = rows_over(&values, |t| {
            let exact = gas
                .chemical_potential(t)
                .with_context(|| format!("chemical potential at t = {t} ({})", self.tolerance_note()))?;
            let mut rows = vec![
                vec![t.into(), exact.into(), Cell::Empty, Provenance::Quadrature.into()],
                vec![t.into(), c.mu_series(t).into(), c.mu_second_order().into(), Provenance::Series.into()],
            ];
            if printed {
                rows.push(vec![
                    t.into(),
                    c.published_mu_series(t).into(),
                    c.published_mu_second_order().into(),
                    Provenance::PaperConstant.into(),
                ]);
            }
            Ok(rows)
        })?;
        r.extend(rows);
        Ok(r)
    }

    fn heat_capacity(&self, t: Option<f64>) -> Result<Report> {
        let values = self.grid("heat-capacity", "t", &["t"], t, &[0.005, 0.01, 0.02])?;
        let mut r = self.report("heat-capacity", &["t", "c_over_t", "specific_heat", "provenance"]);
        r.meta("difference_step", "1e-3 t, one Richardson stage");
        let gas = self.degenerate_gas()?;
        let c = SommerfeldConstants::for_model(self.model)?;
        let published = degenerate::published_heat_coefficient(self.model);
        let rows = rows_over(&values, |t| {
            let exact = gas
                .heat_capacity_coefficient(t)
                .with_context(|| format!("specific heat at t = {t} ({})", self.tolerance_note()))?;
            let series = c.heat_capacity_coefficient();
            let mut rows = vec![
                vec![t.into(), exact.into(), (exact * t).into(), Provenance::Quadrature.into()],
                vec![t.into(), series.into(), (series * t).into(), Provenance::Series.into()],
            ];
            if let Some(p) = published {
                rows.push(vec![t.into(), p.into(), (p * t).into(), Provenance::PaperConstant.into()]);
            }
            Ok(rows)
        })?;
        r.extend(rows);
        Ok(r)
    }

    fn pauli(&self, eta: Option<f64>, b: Option<f64>, field: Option<f64>, temperature: f64) -> Result<Report> {
        let eta = eta.unwrap_or(1e-4f64.ln());
        let mut columns = vec!["eta", "b", "n_up", "n_down", "m_over_n", "provenance"];
        let bs: Vec<(Option<f64>, f64)> = if self.si() {
            if b.is_some() {
                return Err(UsageError::msg("--b is reduced-only; give --field in tesla with --units si"));
            }
            let c = self.table.physical();
            let fields = self.grid("pauli", "field", &["field"], field, &[1.0, 10.0, 100.0])?;
            if !(temperature > 0.0) {
                return Err(UsageError::msg(format!("temperature must be positive, got {temperature}")));
            }
            columns.insert(1, "field");
            fields
                .into_iter()
                .map(|f| (Some(f), c.bohr_magneton() * f / (c.boltzmann * temperature)))
                .collect()
        } else {
            if field.is_some() {
                return Err(UsageError::msg("--field needs --units si"));
            }
            self.grid("pauli", "b", &["b"], b, &[0.1, 0.3, 1.0])?
                .into_iter()
                .map(|b| (None, b))
                .collect()
        };
        let mut r = self.report("pauli", &columns);
        if self.si() {
            r.meta("temperature", temperature);
        }
        let gas = self.gas(self.model);
        let rows = rows_over(&bs.iter().map(|p| p.1).collect::<Vec<_>>(), |b| {
            let m = magnetism::pauli_magnetization_in(&gas, eta, b)
                .with_context(|| format!("spin populations at eta = {eta}, b = {b} ({})", self.tolerance_note()))?;
            Ok(vec![
                vec![eta.into(), b.into(), m.n_up.into(), m.n_down.into(), m.reduced_magnetization().into(), Provenance::Quadrature.into()],
                vec![eta.into(), b.into(), Cell::Empty, Cell::Empty, b.tanh().into(), Provenance::ClosedForm.into()],
            ])
        })?;
        for (i, mut row) in rows.into_iter().enumerate() {
            if let Some(f) = bs[i / 2].0 {
                row.insert(1, f.into());
            }
            r.push(row);
        }
        Ok(r)
    }

    fn landau(&self, n_lambda3: Option<f64>, s: Option<f64>, density: Option<f64>, temperature: f64) -> Result<Report> {
        let m = self.model;
        let mut r = self.report("landau", &["quantity", "s", "n_lambda3", "value", "provenance"]);
        r.meta("internal_rel_tol", 1e-12);
        r.meta("extrapolation_fields", "0.2, 0.1, 0.05, 0.025");
        let (ns, si): (Vec<f64>, Option<(f64, f64)>) = if self.si() {
            if n_lambda3.is_some() {
                return Err(UsageError::msg("--n-lambda3 is reduced-only; give --density in m^-3 with --units si"));
            }
            let c = self.table.physical();
            let lambda = thermal_wavelength(c.electron_mass, temperature, &c)?;
            let densities = self.grid("landau", "density", &["s", "density"], density, &[1e20])?;
            r.meta("temperature", temperature);
            r.meta("species", "electron");
            let mu_b = c.bohr_magneton();
            let scale = self.table.vacuum_permeability * mu_b * mu_b / (c.boltzmann * temperature);
            (densities.iter().map(|n| n * lambda.powi(3)).collect(), Some((lambda, scale)))
        } else {
            if density.is_some() {
                return Err(UsageError::msg("--density needs --units si"));
            }
            (self.grid("landau", "n_lambda3", &["s", "n_lambda3"], n_lambda3, &[1e-4 * m.weight()])?, None)
        };
        let accepted: &[&str] = if self.si() { &["s", "density"] } else { &["s", "n_lambda3"] };
        let ss = self.grid("landau", "s", accepted, s, &[0.5, 1.0, 2.0])?;

        let level_rows = rows_over(&ss, |s| {
            let f = landau_small_z_factor(s, m).with_context(|| format!("Landau level sum at s = {s}"))?;
            Ok(vec![
                vec!["level_factor".into(), s.into(), Cell::Empty, f.into(), Provenance::Quadrature.into()],
                vec!["level_factor".into(), s.into(), Cell::Empty, (0.5 / s.sinh()).into(), Provenance::ClosedForm.into()],
            ])
        })?;
        r.extend(level_rows);

        let chi_rows = rows_over(&ns, |n| {
            let chi = landau_susceptibility(n, m).with_context(|| format!("orbital susceptibility at n lambda^3 = {n}"))?;
            let mut rows: Rows = chi
                .estimates
                .iter()
                .map(|e| vec!["chi_coefficient".into(), e.s.into(), n.into(), e.coefficient.into(), Provenance::Quadrature.into()])
                .collect();
            rows.push(vec!["chi_coefficient".into(), 0.0.into(), n.into(), chi.coefficient.into(), Provenance::Quadrature.into()]);
            rows.push(vec!["chi_coefficient".into(), 0.0.into(), n.into(), (-1.0 / 3.0).into(), Provenance::ClosedForm.into()]);
            if let Some((lambda, scale)) = si {
                let density = n / lambda.powi(3);
                rows.push(vec!["chi_si".into(), 0.0.into(), n.into(), (scale * density * chi.coefficient).into(), Provenance::Quadrature.into()]);
            }
            Ok(rows)
        })?;
        r.extend(chi_rows);
        Ok(r)
    }

    fn star(&self, central_density: f64) -> Result<Report> {
        self.grid("star", "", &[], None, &[])?;
        let mut r = self.report("star", &["quantity", "index", "value", "provenance"]);
        r.meta("compared", "exclusive / fd");
        r.meta("mass_units", "reduced (G = hbar = m = c = 1)");
        r.meta("central_density", central_density);
        let report = astro::chandrasekhar_ratio()?;
        let closed = |q: &str, v: f64| vec![q.into(), Cell::Empty, v.into(), Provenance::ClosedForm.into()];
        let ode = |q: &str, n: f64, v: f64| vec![q.into(), n.into(), v.into(), Provenance::Ode.into()];
        r.push(closed("k_nr_ratio", report.k_nr_ratio));
        r.push(closed("k_ur_ratio", report.k_ur_ratio));
        for regime in [Regime::NonRelativistic, Regime::UltraRelativistic] {
            let n = regime.polytropic_index();
            let le = lane_emden(n)?;
            r.push(ode("xi1", n, le.xi1));
            r.push(ode("mass_integral", n, le.mass_integral));
        }
        for (name, model) in [("mass_exclusive", OccupancyModel::EXCLUSIVE), ("mass_fd", OccupancyModel::STANDARD_FD)] {
            for regime in [Regime::NonRelativistic, Regime::UltraRelativistic] {
                let mass = astro::white_dwarf_mass(&PolytropeEOS::new(model, regime)?, central_density)?;
                r.push(ode(name, regime.polytropic_index(), mass));
            }
        }
        r.push(ode("nr_mass_ratio", 1.5, report.nr_mass_ratio));
        r.push(ode("chandrasekhar_ratio", 3.0, report.mass_ratio));
        r.push(vec!["chandrasekhar_ratio".into(), 3.0.into(), report.published.into(), Provenance::PaperConstant.into()]);
        Ok(r)
    }

    fn oracle(&self, levels: usize, z: f64, samples: u64, energy_max: f64) -> Result<Report> {
        self.grid("oracle", "", &[], None, &[])?;
        if !(energy_max > 0.0) || !energy_max.is_finite() {
            return Err(UsageError::msg(format!("energy-max must be positive, got {energy_max}")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let energies: Vec<f64> = (0..levels).map(|_| rng.random_range(0.0..energy_max)).collect();
        let system = LevelSystem::new(energies.clone(), self.model)?;

        let mut r = self.report("oracle", &["quantity", "level", "energy", "value", "standard_error", "provenance"]);
        r.meta("seed", self.seed);
        r.meta("z", z);
        r.meta("samples", samples);
        let enumerated = grand_partition_enumerate(&system, z)?;
        let product = grand_partition_product(&system, z)?;
        let whole = |v: f64, p: Provenance| vec!["log_partition".into(), Cell::Empty, Cell::Empty, v.into(), Cell::Empty, p.into()];
        r.push(whole(enumerated.log, Provenance::Enumeration));
        r.push(whole(product.log, Provenance::ClosedForm));

        let m = self.model;
        let indices: Vec<f64> = (0..levels).map(|i| i as f64).collect();
        let rows = rows_over(&indices, |i| {
            let level = i as usize;
            let eps = energies[level];
            let enumerated = mean_occupancy_enumerate(&system, z, level)?;
            let mc = mc_occupancy(eps, z, m, &Sampling::new(samples, self.seed).stream(level as u64))?;
            let row = |v: f64, se: Cell, p: Provenance| vec!["occupancy".into(), i.into(), eps.into(), v.into(), se, p.into()];
            Ok(vec![
                row(enumerated, Cell::Empty, Provenance::Enumeration),
                row(m.occupation(eps - z.ln()), Cell::Empty, Provenance::ClosedForm),
                row(mc.mean, mc.standard_error.into(), Provenance::MonteCarlo),
            ])
        })?;
        r.extend(rows);
        Ok(r)
    }

    fn compare(&self, quantity: Quantity, p: Params) -> Result<Report> {
        let (param, single, default): (&str, Option<f64>, f64) = match quantity {
            Quantity::Occupation => ("x", p.x, 0.0),
            Quantity::Density | Quantity::Pressure => ("eta", p.eta, 0.0),
            Quantity::Compressibility => ("n_lambda3", p.n_lambda3, 0.1),
            Quantity::Susceptibility => ("n_lambda3", p.n_lambda3, 2e-4),
            Quantity::FermiEnergy => ("density", p.density, 1.0),
            Quantity::ChemicalPotential => ("t", p.t, 0.05),
            Quantity::HeatCapacity => ("t", p.t, 0.01),
            Quantity::Virial | Quantity::Sommerfeld => ("", None, f64::NAN),
        };
        let values = if param.is_empty() {
            self.grid("compare", "", &[], None, &[f64::NAN])?
        } else {
            self.grid("compare", param, &[param], single, &[default])?
        };
        let mut r = self.report("compare", &["statistics", "quantity", "parameter", "value", "provenance"]);
        r.meta("quantity", quantity.name());
        if !param.is_empty() {
            r.meta("parameter", param);
        }
        let rows = rows_over(&values, |v| {
            let mut rows = Vec::new();
            for s in Statistics::ALL {
                rows.extend(self.compare_one(quantity, s, v).with_context(|| format!("{} statistics", s.name()))?);
            }
            Ok(rows)
        })?;
        r.extend(rows);
        Ok(r)
    }

    fn compare_one(&self, quantity: Quantity, s: Statistics, v: f64) -> Result<Rows> {
        let m = s.model();
        let param: Cell = if v.is_nan() { Cell::Empty } else { v.into() };
        let row = |q: &str, value: f64, p: Provenance| vec![s.name().into(), q.into(), param.clone(), value.into(), p.into()];
        let missing = |q: &str| vec![s.name().into(), q.into(), param.clone(), Cell::Empty, "undefined".into()];
        let gas = self.gas(m);
        let computed: std::result::Result<Rows, Error> = (|| {
            Ok(match quantity {
                Quantity::Occupation => vec![row("occupation", m.occupation(v), Provenance::ClosedForm)],
                Quantity::Density => vec![row("n_lambda3", gas.density(v)?, Provenance::Quadrature)],
                Quantity::Pressure => vec![row("p", gas.pressure(v)?, Provenance::Quadrature)],
                Quantity::Compressibility => vec![
                    row("compressibility", gas.compressibility(v)?, Provenance::Quadrature),
                    row("compressibility", eos::virial_pressure(v, m), Provenance::Series),
                ],
                Quantity::Virial => vec![row("virial_coefficient", eos::virial_coefficient(m), Provenance::ClosedForm)],
                Quantity::FermiEnergy => vec![row("fermi_energy", degenerate::fermi_energy(v, m)?, Provenance::ClosedForm)],
                Quantity::ChemicalPotential => {
                    let c = SommerfeldConstants::for_model(m)?;
                    let gas = DegenerateGas::new(m)?.with_quadrature(self.quadrature);
                    vec![
                        row("mu_over_ef", gas.chemical_potential(v)?, Provenance::Quadrature),
                        row("mu_over_ef", c.mu_series(v), Provenance::Series),
                    ]
                }
                Quantity::HeatCapacity => {
                    let gas = DegenerateGas::new(m)?.with_quadrature(self.quadrature);
                    let c = gas.specific_heat(v)?;
                    let mut rows = vec![
                        row("c_over_t", c.exact, Provenance::Quadrature),
                        row("c_over_t", c.series, Provenance::Series),
                    ];
                    rows.extend(c.published.map(|p| row("c_over_t", p, Provenance::PaperConstant)));
                    rows
                }
                Quantity::Sommerfeld => {
                    let c = SommerfeldConstants::for_model(m)?;
                    vec![row("A1", c.a1, Provenance::Quadrature), row("A2", c.a2, Provenance::Quadrature)]
                }
                Quantity::Susceptibility => {
                    vec![row("chi_coefficient", landau_susceptibility(v, m)?.coefficient, Provenance::Quadrature)]
                }
            })
        })();
        match computed {
            Ok(rows) => Ok(rows),
            Err(e) if undefined(&e) => Ok(quantity.labels().iter().map(|q| missing(q)).collect()),
            Err(e) => Err(e.into()),
        }
    }
}

struct Params {
    x: Option<f64>,
    eta: Option<f64>,
    n_lambda3: Option<f64>,
    t: Option<f64>,
    density: Option<f64>,
}
