//! Thermodynamics of ideal fermion gases under a generalized occupation law
//! `f = g / (exp(beta (eps - mu)) + a)`.
//!
//! The `(g, a) = (2, 2)` member describes *exclusive* fermions, where an
//! orbital holds at most one particle regardless of spin. `(2, 1)` is the
//! ordinary Fermi-Dirac gas and `(2, 0)` the Boltzmann gas. Every analytic
//! result in the crate is paired with an independent numerical route:
//!
//! - [`numerics`]: adaptive semi-infinite quadrature, bracketed roots, RK4 with
//!   event location.
//! - [`statistics`]: the occupation law, thermal wavelength, density of states.
//! - [`ensemble`]: exact enumeration and Monte Carlo over finite level systems.
//! - [`eos`]: density, energy, pressure, fugacity inversion, virial series.
//! - [`degenerate`]: Fermi scale, Sommerfeld constants and series, mu(T), c_V.
//! - [`magnetism`]: Pauli paramagnetism and Landau diamagnetism.
//! - [`astro`]: polytropes, Lane-Emden and the Chandrasekhar mass ratio.
//!
//! All thermodynamic routines work in reduced variables (`eta = beta mu`,
//! `n lambda^3`, `hbar = m = k_B = 1`); unit conversion happens at the edges
//! through [`statistics::PhysicalConstants`].

pub mod astro;
pub mod degenerate;
pub mod ensemble;
pub mod eos;
mod error;
pub mod magnetism;
pub mod numerics;
pub mod statistics;

pub use error::{Error, Result};
pub use statistics::{OccupancyModel, PhysicalConstants};
