//! Globally adaptive Gauss-Kronrod (10/21) quadrature.
//!
//! Semi-infinite ranges are split at caller-supplied breakpoints; the last
//! piece `[c, inf)` is mapped onto `[0, 1)` with `x = c + t / (1 - t)`. All
//! pieces share one priority queue so refinement goes wherever the error is.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::{Error, Result};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_1,
    0.973_906_528_517_171_7,
    0.930_157_491_355_708_2,
    0.865_063_366_688_984_5,
    0.780_817_726_586_416_9,
    0.679_409_568_299_024_4,
    0.562_757_134_668_604_7,
    0.433_395_394_129_247_2,
    0.294_392_862_701_460_2,
    0.148_874_338_981_631_22,
    0.0,
];

const WG: [f64; 5] = [
    0.066_671_344_308_688_14,
    0.149_451_349_150_580_6,
    0.219_086_362_515_982_04,
    0.269_266_719_309_996_35,
    0.295_524_224_714_752_87,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874,
    0.032_558_162_307_964_725,
    0.054_755_896_574_351_995,
    0.075_039_674_810_919_96,
    0.093_125_454_583_697_6,
    0.109_387_158_802_297_64,
    0.123_491_976_262_065_84,
    0.134_709_217_311_473_34,
    0.142_775_938_577_060_09,
    0.147_739_104_901_338_49,
    0.149_445_554_002_916_9,
];

/// Tolerances and work limit for adaptive quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub relative_tolerance: f64,
    pub absolute_tolerance: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            relative_tolerance: 1e-10,
            absolute_tolerance: 1e-14,
            max_subdivisions: 4000,
        }
    }
}

impl QuadratureSpec {
    pub fn new(relative_tolerance: f64, absolute_tolerance: f64, max_subdivisions: usize) -> Result<Self> {
        let spec = Self {
            relative_tolerance,
            absolute_tolerance,
            max_subdivisions,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.relative_tolerance > 0.0) {
            return Err(Error::domain("relative tolerance", self.relative_tolerance));
        }
        if !(self.absolute_tolerance > 0.0) {
            return Err(Error::domain("absolute tolerance", self.absolute_tolerance));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::domain("max subdivisions", 0.0));
        }
        Ok(())
    }
}

/// Converged integral with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error_estimate: f64,
    pub subdivisions: usize,
}

#[derive(Debug, Clone, Copy)]
enum Piece {
    Finite,
    /// `[0, 1)` in the mapped variable, anchored at `origin` in `x`.
    Tail { origin: f64 },
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    piece: Piece,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        // max-heap on error; ties broken by position for a stable refinement order
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * res_abs);
    }
    scaled
}

/// 21-point Kronrod estimate on `[a, b]` with the embedded 10-point Gauss
/// rule providing the error.
fn kronrod21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<(f64, f64)> {
    let eval = |x: f64| -> Result<f64> {
        let y = f(x);
        if y.is_finite() {
            Ok(y)
        } else {
            Err(Error::NonFiniteIntegrand { x })
        }
    };

    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = eval(center)?;

    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    let mut res_gauss = 0.0;
    let mut res_kronrod = f_center * WGK[10];
    let mut res_abs = res_kronrod.abs();

    for (j, wg) in WG.iter().enumerate() {
        let jtw = 2 * j + 1;
        let dx = half * XGK[jtw];
        let (f1, f2) = (eval(center - dx)?, eval(center + dx)?);
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        res_gauss += wg * (f1 + f2);
        res_kronrod += WGK[jtw] * (f1 + f2);
        res_abs += WGK[jtw] * (f1.abs() + f2.abs());
    }
    for j in 0..5 {
        let jtwm1 = 2 * j;
        let dx = half * XGK[jtwm1];
        let (f1, f2) = (eval(center - dx)?, eval(center + dx)?);
        fv1[jtwm1] = f1;
        fv2[jtwm1] = f2;
        res_kronrod += WGK[jtwm1] * (f1 + f2);
        res_abs += WGK[jtwm1] * (f1.abs() + f2.abs());
    }

    let mean = 0.5 * res_kronrod;
    let mut res_asc = WGK[10] * (f_center - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let err = (res_kronrod - res_gauss) * half;
    let width = half.abs();
    Ok((
        res_kronrod * half,
        rescale_error(err, res_abs * width, res_asc * width),
    ))
}

fn evaluate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, piece: Piece) -> Result<Segment> {
    let (value, error) = match piece {
        Piece::Finite => kronrod21(f, a, b)?,
        Piece::Tail { origin } => {
            let mapped = |t: f64| {
                let s = 1.0 - t;
                let y = f(origin + t / s);
                // integrands that have decayed to zero stay zero under the Jacobian
                if y == 0.0 {
                    0.0
                } else {
                    y / (s * s)
                }
            };
            kronrod21(&mapped, a, b)?
        }
    };
    Ok(Segment {
        a,
        b,
        piece,
        value,
        error,
    })
}

fn neumaier_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut compensation = 0.0;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            compensation += (sum - t) + v;
        } else {
            compensation += (v - t) + sum;
        }
        sum = t;
    }
    sum + compensation
}

fn adapt<F: Fn(f64) -> f64>(f: &F, initial: Vec<(f64, f64, Piece)>, spec: &QuadratureSpec) -> Result<Integral> {
    spec.validate()?;
    let mut heap = BinaryHeap::with_capacity(initial.len() + 2 * spec.max_subdivisions);
    for (a, b, piece) in initial {
        heap.push(evaluate(f, a, b, piece)?);
    }

    let mut subdivisions = 0;
    loop {
        let value = neumaier_sum(heap.iter().map(|s| s.value));
        let error: f64 = heap.iter().map(|s| s.error).sum();
        let target = spec.absolute_tolerance.max(spec.relative_tolerance * value.abs());
        if error <= target {
            return Ok(Integral {
                value,
                error_estimate: error,
                subdivisions,
            });
        }

        let worst = heap.pop().expect("heap holds at least one segment");
        let mid = 0.5 * (worst.a + worst.b);
        let unsplittable = mid <= worst.a || mid >= worst.b;
        if subdivisions >= spec.max_subdivisions || unsplittable {
            heap.push(worst);
            return Err(Error::QuadratureNonConvergence {
                estimate: value,
                error_bound: error,
                subdivisions,
            });
        }
        heap.push(evaluate(f, worst.a, mid, worst.piece)?);
        heap.push(evaluate(f, mid, worst.b, worst.piece)?);
        subdivisions += 1;
    }
}

/// Integrates `f` over the finite interval `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<Integral> {
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::domain("finite integration bound", if a.is_finite() { b } else { a }));
    }
    if a == b {
        return Ok(Integral {
            value: 0.0,
            error_estimate: 0.0,
            subdivisions: 0,
        });
    }
    adapt(&f, vec![(a, b, Piece::Finite)], spec)
}

/// Breakpoints bracketing a smoothed step at `center` of width `width`
/// (a Fermi knee at `x = eta` has width 1 in units of `k_B T`).
pub fn knee_breakpoints(center: f64, width: f64) -> Vec<f64> {
    [-20.0, -5.0, 0.0, 5.0, 20.0]
        .iter()
        .map(|k| center + k * width)
        .filter(|x| *x > 0.0)
        .collect()
}

/// Integrates `f` over `[0, inf)`.
///
/// `breakpoints` mark places where the integrand changes character (the knee
/// of a Fermi function at `x = eta`, for instance). Points outside `(0, inf)`
/// are ignored; order does not matter.
pub fn integrate_semi_infinite<F: Fn(f64) -> f64>(
    f: F,
    breakpoints: &[f64],
    spec: &QuadratureSpec,
) -> Result<Integral> {
    let mut cuts: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|x| x.is_finite() && *x > 0.0)
        .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    let mut pieces = Vec::with_capacity(cuts.len() + 1);
    let mut left = 0.0;
    for &c in &cuts {
        pieces.push((left, c, Piece::Finite));
        left = c;
    }
    pieces.push((0.0, 1.0, Piece::Tail { origin: left }));
    adapt(&f, pieces, spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn exponential() {
        let r = integrate_semi_infinite(|x| (-x).exp(), &[], &QuadratureSpec::default()).unwrap();
        assert_relative_eq!(r.value, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn gamma_three_halves() {
        let r = integrate_semi_infinite(|x| x.sqrt() * (-x).exp(), &[], &QuadratureSpec::default()).unwrap();
        assert_relative_eq!(r.value, PI.sqrt() / 2.0, max_relative = 1e-10);
    }

    #[test]
    fn finite_polynomial_is_exact() {
        let r = integrate(|x| x * x * x - 2.0 * x, -1.0, 3.0, &QuadratureSpec::default()).unwrap();
        assert_relative_eq!(r.value, 12.0, max_relative = 1e-14);
        assert_eq!(r.subdivisions, 0);
    }

    #[test]
    fn breakpoints_resolve_a_fermi_step() {
        // Fermi step of width 0.05 at x = 40 times a slowly decaying weight;
        // Sommerfeld: int_0^40 phi + (pi^2/6) w^2 phi'(40) + O(w^4)
        let w = 0.05;
        let phi = |x: f64| (-x / 100.0).exp();
        let f = |x: f64| phi(x) / (((x - 40.0) / w).exp() + 1.0);
        let exact = 100.0 * (1.0 - (-0.4f64).exp()) - PI * PI / 6.0 * w * w * 0.01 * (-0.4f64).exp();
        let r = integrate_semi_infinite(f, &knee_breakpoints(40.0, w), &QuadratureSpec::default()).unwrap();
        assert_relative_eq!(r.value, exact, max_relative = 1e-9);
    }

    #[test]
    fn knee_breakpoints_stay_positive() {
        assert_eq!(knee_breakpoints(-3.0, 1.0), vec![2.0, 17.0]);
        assert_eq!(knee_breakpoints(2.0, 1.0), vec![2.0, 7.0, 22.0]);
        assert_eq!(knee_breakpoints(30.0, 1.0), vec![10.0, 25.0, 30.0, 35.0, 50.0]);
    }

    #[test]
    fn nan_integrand_is_a_domain_failure() {
        let err = integrate_semi_infinite(|_| f64::NAN, &[], &QuadratureSpec::default()).unwrap_err();
        assert!(matches!(err, Error::NonFiniteIntegrand { .. }));
    }

    #[test]
    fn exhausted_budget_reports_best_estimate() {
        let spec = QuadratureSpec::new(1e-14, 1e-300, 2).unwrap();
        let err = integrate(|x| x.abs().powf(-0.9), 0.0, 1.0, &spec).unwrap_err();
        match err {
            Error::QuadratureNonConvergence {
                estimate,
                error_bound,
                subdivisions,
            } => {
                assert_eq!(subdivisions, 2);
                assert!(estimate > 0.0 && error_bound > 0.0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn invalid_specs_are_rejected() {
        assert!(QuadratureSpec::new(0.0, 1e-14, 10).is_err());
        assert!(QuadratureSpec::new(1e-10, -1.0, 10).is_err());
        assert!(QuadratureSpec::new(1e-10, 1e-14, 0).is_err());
    }
}
