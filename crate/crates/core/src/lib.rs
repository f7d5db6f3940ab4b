//! Numerical laboratory for viscous-dispersive shocks of the one-dimensional
//! barotropic Navier–Stokes–Korteweg system in Lagrangian mass coordinates:
//!
//! ```text
//! v_t - u_x = 0
//! u_t + p(v)_x = (u_x / v)_x + (-v_xx / v^5 + 5 v_x^2 / (2 v^6))_x,      p(v) = v^(-gamma)
//! ```
//!
//! The crate is `no_std` (it needs `alloc`). It provides
//!
//! * [`gas`]: the gamma-law, relative quantities, Rankine–Hugoniot end states
//!   and the O(1) wave constants used by the weighted relative-entropy method;
//! * [`profile`]: the traveling-wave (shock profile) solver and the
//!   estimates that can be checked on a computed profile;
//! * [`dynamics`]: a method-of-lines discretization of the augmented
//!   `(v, u, w)` system with the shift ODE coupled in;
//! * [`diagnostics`]: the weight, weighted relative entropy, dissipation
//!   functionals and decay summaries.
//!
//! File formats, configuration and the command line live in the `nsk-lab`
//! companion crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

mod error;
mod math;

pub mod banded;
pub mod diagnostics;
pub mod dynamics;
pub mod fit;
pub mod gas;
pub mod hermite;
pub mod ode;
pub mod profile;
pub mod quadrature;

pub use error::{Error, Result};
pub use gas::{EndStates, GasLaw, WaveConstants};
pub use profile::{ProfileOptions, ProfileReport, ShockProfile};
