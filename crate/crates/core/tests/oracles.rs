//! Independent numerical references: dense trapezoid grids, closed forms and
//! finer-step reruns, none of which share code paths with the library
//! routines they check.

use std::f64::consts::PI;

use xfermi_core::astro::{lane_emden, lane_emden_with_step};
use xfermi_core::degenerate::{DegenerateGas, SommerfeldConstants};
use xfermi_core::ensemble::{grand_partition_enumerate, grand_partition_product, mean_occupancy_enumerate, LevelSystem};
use xfermi_core::eos::IdealGas;
use xfermi_core::magnetism::pauli_populations;
use xfermi_core::OccupancyModel;

const EXCL: OccupancyModel = OccupancyModel::EXCLUSIVE;
const FD: OccupancyModel = OccupancyModel::STANDARD_FD;

/// `(2/sqrt(pi)) int_0^inf x^{k} h(x) dx` on a uniform grid in `u = sqrt(x)`,
/// which makes the integrand smooth at the origin: `dx = 2u du`.
fn trapezoid_moment<H: Fn(f64) -> f64>(k: f64, h: H, upper_x: f64) -> f64 {
    let n = 400_000;
    let upper = upper_x.sqrt();
    let du = upper / n as f64;
    let g = |u: f64| {
        let x = u * u;
        x.powf(k) * h(x) * 2.0 * u
    };
    let mut s = 0.5 * (g(0.0) + g(upper));
    for i in 1..n {
        s += g(i as f64 * du);
    }
    2.0 / PI.sqrt() * s * du
}

fn plain_occupation(model: OccupancyModel, x: f64) -> f64 {
    model.weight() / (x.exp() + model.blocking())
}

#[test]
fn eos_moments_match_dense_grid() {
    for model in [EXCL, FD] {
        let gas = IdealGas::new(model);
        for eta in [-4.0f64, -1.0, 0.0, 2.0, 6.0] {
            let top = eta.max(0.0) + 60.0;
            let n = trapezoid_moment(0.5, |x| plain_occupation(model, x - eta), top);
            let u = trapezoid_moment(1.5, |x| plain_occupation(model, x - eta), top);
            let g = model.weight();
            let a = model.blocking();
            let p = trapezoid_moment(0.5, |x| g / a * (a * (eta - x).exp()).ln_1p(), top);
            assert!((gas.density(eta).unwrap() / n - 1.0).abs() < 1e-9, "{model} eta={eta}");
            assert!((gas.energy_density(eta).unwrap() / u - 1.0).abs() < 1e-9, "{model} eta={eta}");
            assert!((gas.pressure(eta).unwrap() / p - 1.0).abs() < 1e-9, "{model} eta={eta}");
        }
    }
}

#[test]
fn pauli_populations_match_dense_grid() {
    let (eta, b) = (-3.0, 0.5);
    let (up, down) = pauli_populations(eta, b, EXCL).unwrap();
    let spin = |shift: f64| trapezoid_moment(0.5, |x| 1.0 / ((x + shift - eta).exp() + 2.0), 60.0);
    assert!((up / spin(b) - 1.0).abs() < 1e-9);
    assert!((down / spin(-b) - 1.0).abs() < 1e-9);
}

#[test]
fn sommerfeld_constants_match_substituted_integrals() {
    // plain midpoint rule on the unfolded real line
    for a in [0.5f64, 1.0, 2.0, 3.0] {
        let c = SommerfeldConstants::compute(a).unwrap();
        let (mut a1, mut a2) = (0.0, 0.0);
        let n = 2_000_000;
        let (lo, hi) = (-60.0, 60.0);
        let dx = (hi - lo) / n as f64;
        for i in 0..n {
            let x = lo + (i as f64 + 0.5) * dx;
            let w = x.exp() / ((x.exp() + a) * (x.exp() + a));
            a1 += x * w * dx;
            a2 += x * x * w * dx;
        }
        assert!((c.a1 - a1).abs() < 1e-9, "a = {a}");
        assert!((c.a2 - a2).abs() < 1e-9, "a = {a}");
    }
}

#[test]
fn enumeration_matches_product_for_mixed_levels() {
    let energies = vec![0.0, 0.3, 0.3, 1.7, 2.2, 4.9];
    for model in [EXCL, FD] {
        let system = LevelSystem::new(energies.clone(), model).unwrap();
        for z in [0.1, 0.8, 2.0] {
            let e = grand_partition_enumerate(&system, z).unwrap().value;
            let p = grand_partition_product(&system, z).unwrap().value;
            assert!((e / p - 1.0).abs() < 1e-12);
            for (i, eps) in energies.iter().enumerate() {
                let f = mean_occupancy_enumerate(&system, z, i).unwrap();
                assert!((f / model.occupation(eps - z.ln()) - 1.0).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn low_temperature_pressure_approaches_degeneracy_pressure() {
    for model in [EXCL, FD] {
        let state = DegenerateGas::new(model).unwrap().state(0.01).unwrap();
        assert!((state.pressure_ratio / 0.4 - 1.0).abs() < 0.01);
        assert!((state.energy_per_particle / 0.6 - 1.0).abs() < 0.01);
    }
}

#[test]
fn lane_emden_index_three_against_finer_steps() {
    let coarse = lane_emden(3.0).unwrap();
    let fine = lane_emden_with_step(3.0, 1e-4).unwrap();
    assert!((coarse.xi1 - fine.xi1).abs() < 1e-5);
    assert!((coarse.mass_integral - fine.mass_integral).abs() < 1e-5);
}

#[test]
fn lane_emden_index_five_halves_is_smooth_in_step() {
    let a = lane_emden_with_step(2.5, 2e-3).unwrap();
    let b = lane_emden_with_step(2.5, 1e-3).unwrap();
    assert!((a.xi1 - b.xi1).abs() < 1e-8);
}
