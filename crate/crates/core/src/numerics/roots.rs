use crate::{Error, Result};

/// A sign-changing bracket `[lo, hi]` plus stopping rules.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BracketedRootSpec {
    pub lo: f64,
    pub hi: f64,
    /// Absolute width of the final bracket.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl BracketedRootSpec {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self {
            lo,
            hi,
            tolerance: 1e-13,
            max_iterations: 200,
        }
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn with_max_iterations(mut self, max_iterations: usize) -> Self {
        self.max_iterations = max_iterations;
        self
    }
}

/// Brent's method: inverse quadratic / secant steps guarded by bisection.
pub fn find_root<F: FnMut(f64) -> f64>(mut f: F, spec: &BracketedRootSpec) -> Result<f64> {
    find_root_with(|x| Ok(f(x)), spec)
}

/// Same as [`find_root`] for fallible functions; the first error aborts.
pub fn find_root_with<F: FnMut(f64) -> Result<f64>>(mut f: F, spec: &BracketedRootSpec) -> Result<f64> {
    let BracketedRootSpec {
        lo,
        hi,
        tolerance,
        max_iterations,
    } = *spec;
    if !(lo < hi) {
        return Err(Error::domain("bracket (lo must be below hi)", lo));
    }
    if !(tolerance > 0.0) {
        return Err(Error::domain("root tolerance", tolerance));
    }

    let eval = |f: &mut F, x: f64| -> Result<f64> {
        let y = f(x)?;
        if y.is_nan() {
            Err(Error::NonFiniteIntegrand { x })
        } else {
            Ok(y)
        }
    };

    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (eval(&mut f, a)?, eval(&mut f, b)?);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NoSignChange {
            lo,
            hi,
            f_lo: fa,
            f_hi: fb,
        });
    }

    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;

    for _ in 0..max_iterations {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }

        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tolerance;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }

        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }

        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = eval(&mut f, b)?;
    }

    let (lo, hi) = if b < c { (b, c) } else { (c, b) };
    Err(Error::RootNonConvergence {
        lo,
        hi,
        iterations: max_iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn linear() {
        let r = find_root(|x| x - 2.0, &BracketedRootSpec::new(0.0, 5.0)).unwrap();
        assert_abs_diff_eq!(r, 2.0, epsilon = 1e-12);
    }

    #[test]
    fn exponential_through_zero() {
        let r = find_root(|x: f64| x.exp() - 1.0, &BracketedRootSpec::new(-1.0, 1.0)).unwrap();
        assert_abs_diff_eq!(r, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn quadratic_matches_closed_form() {
        // 2z(1 - z/sqrt2) = 0.15  <=>  (sqrt2) z^2 - 2 z + 0.15 = 0, smaller root
        let s2 = 2f64.sqrt();
        let exact = (2.0 - (4.0 - 4.0 * s2 * 0.15f64).sqrt()) / (2.0 * s2);
        let r = find_root(|z| 2.0 * z * (1.0 - z / s2) - 0.15, &BracketedRootSpec::new(0.0, 1.0)).unwrap();
        assert_abs_diff_eq!(r, exact, epsilon = 1e-12);
    }

    #[test]
    fn missing_sign_change() {
        let err = find_root(|x| x * x + 1.0, &BracketedRootSpec::new(-1.0, 1.0)).unwrap_err();
        assert!(matches!(err, Error::NoSignChange { .. }));
    }

    #[test]
    fn iteration_cap_reports_last_bracket() {
        let spec = BracketedRootSpec::new(0.0, 1.0).with_tolerance(1e-300).with_max_iterations(3);
        match find_root(|x: f64| x.powi(9) - 0.3, &spec).unwrap_err() {
            Error::RootNonConvergence { lo, hi, iterations } => {
                assert_eq!(iterations, 3);
                assert!(lo <= hi);
                assert!(lo <= 0.3f64.powf(1.0 / 9.0) + 1e-12 && 0.3f64.powf(1.0 / 9.0) <= hi + 1e-12);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn inverted_bracket_is_rejected() {
        assert!(find_root(|x| x, &BracketedRootSpec::new(1.0, -1.0)).is_err());
    }
}
