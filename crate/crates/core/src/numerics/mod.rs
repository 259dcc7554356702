//! Shared numerical kernels: quadrature, bracketed roots, ODE integration.

mod ode;
mod quadrature;
mod roots;

pub use ode::{integrate_ode, StepControl, Terminus};
pub use quadrature::{integrate, integrate_semi_infinite, knee_breakpoints, Integral, QuadratureSpec};
pub use roots::{find_root, find_root_with, BracketedRootSpec};
