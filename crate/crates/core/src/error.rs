use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(
        "quadrature did not converge after {subdivisions} subdivisions \
         (best estimate {estimate:e}, error bound {error_bound:e})"
    )]
    QuadratureNonConvergence {
        estimate: f64,
        error_bound: f64,
        subdivisions: usize,
    },

    #[error("integrand is not finite at x = {x:e}")]
    NonFiniteIntegrand { x: f64 },

    #[error("root is not bracketed: f({lo}) = {f_lo:e}, f({hi}) = {f_hi:e}")]
    NoSignChange { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("root finder stopped after {iterations} iterations with bracket [{lo}, {hi}]")]
    RootNonConvergence { lo: f64, hi: f64, iterations: usize },

    #[error("stop event did not fire before t = {horizon}")]
    OdeHorizon { horizon: f64 },

    #[error("invalid {name}: {value}")]
    Domain { name: &'static str, value: f64 },

    #[error("{levels} levels exceed the enumeration capacity of {max}")]
    Capacity { levels: usize, max: usize },

    #[error("level index {index} out of range for {len} levels")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("{0}")]
    Unsupported(String),

    #[error("Landau level sum not converged within {levels} levels (s = {s})")]
    LevelSumNonConvergence { s: f64, levels: usize },

    #[error("extrapolation to zero field did not settle: {estimate} (spread {spread:e})")]
    ExtrapolationNonConvergence { estimate: f64, spread: f64 },

    #[error("differentiation step {step:e} is below the solver resolution {resolution:e}")]
    StepTooSmall { step: f64, resolution: f64 },
}

impl Error {
    pub(crate) fn domain(name: &'static str, value: f64) -> Self {
        Error::Domain { name, value }
    }
}
