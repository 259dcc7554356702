use crate::{Error, Result};

/// Fixed-step RK4 controls. When a step lands past the stop event, the step
/// is halved and retried until it is no larger than `event_tolerance`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepControl {
    pub step: f64,
    pub event_tolerance: f64,
    /// Integration gives up once `t` passes this value.
    pub horizon: f64,
}

impl Default for StepControl {
    fn default() -> Self {
        Self {
            step: 1e-3,
            event_tolerance: 1e-12,
            horizon: 1e3,
        }
    }
}

/// Where the stop event first fired.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Terminus<const D: usize> {
    pub t: f64,
    pub state: [f64; D],
    pub steps: usize,
}

fn axpy<const D: usize>(y: &[f64; D], h: f64, k: &[f64; D]) -> [f64; D] {
    let mut out = *y;
    for (o, ki) in out.iter_mut().zip(k) {
        *o += h * ki;
    }
    out
}

fn rk4_step<const D: usize, F>(rhs: &F, t: f64, y: &[f64; D], h: f64) -> [f64; D]
where
    F: Fn(f64, &[f64; D]) -> [f64; D],
{
    let k1 = rhs(t, y);
    let k2 = rhs(t + 0.5 * h, &axpy(y, 0.5 * h, &k1));
    let k3 = rhs(t + 0.5 * h, &axpy(y, 0.5 * h, &k2));
    let k4 = rhs(t + h, &axpy(y, h, &k3));
    let mut out = *y;
    for i in 0..D {
        out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

/// Integrates `y' = rhs(t, y)` from `(t0, y0)` until `stop(t, y)` first
/// returns true.
pub fn integrate_ode<const D: usize, F, S>(
    rhs: F,
    t0: f64,
    y0: [f64; D],
    stop: S,
    control: &StepControl,
) -> Result<Terminus<D>>
where
    F: Fn(f64, &[f64; D]) -> [f64; D],
    S: Fn(f64, &[f64; D]) -> bool,
{
    if !(control.step > 0.0) {
        return Err(Error::domain("ODE step", control.step));
    }
    if !(control.event_tolerance > 0.0) {
        return Err(Error::domain("event tolerance", control.event_tolerance));
    }

    let (mut t, mut y) = (t0, y0);
    let mut h = control.step;
    let mut steps = 0;
    while t <= control.horizon {
        let trial = rk4_step(&rhs, t, &y, h);
        steps += 1;
        if trial.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("ODE state (non-finite)", t + h));
        }
        if stop(t + h, &trial) {
            if h <= control.event_tolerance {
                return Ok(Terminus {
                    t: t + h,
                    state: trial,
                    steps,
                });
            }
            h *= 0.5;
            continue;
        }
        t += h;
        y = trial;
    }
    Err(Error::OdeHorizon {
        horizon: control.horizon,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{E, PI};

    #[test]
    fn cosine_zero() {
        let end = integrate_ode(
            |_, y: &[f64; 2]| [y[1], -y[0]],
            0.0,
            [1.0, 0.0],
            |_, y| y[0] <= 0.0,
            &StepControl::default(),
        )
        .unwrap();
        assert_abs_diff_eq!(end.t, PI / 2.0, epsilon = 1e-8);
    }

    #[test]
    fn exponential_decay_reaches_inverse_e_at_one() {
        let end = integrate_ode(
            |_, y: &[f64; 1]| [-y[0]],
            0.0,
            [1.0],
            |_, y| y[0] <= 1.0 / E,
            &StepControl::default(),
        )
        .unwrap();
        assert_abs_diff_eq!(end.t, 1.0, epsilon = 1e-8);
    }

    #[test]
    fn horizon_error() {
        let control = StepControl {
            horizon: 5.0,
            ..StepControl::default()
        };
        let err = integrate_ode(|_, _y: &[f64; 1]| [0.0], 0.0, [1.0], |_, y| y[0] < 0.0, &control).unwrap_err();
        assert_eq!(err, Error::OdeHorizon { horizon: 5.0 });
    }
}
