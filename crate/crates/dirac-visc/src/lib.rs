//! Shear and Hall viscosity of disordered Dirac electrons in graphene.
//!
//! Static and dynamic Kubo viscosities are evaluated with a self-consistent
//! Born self-energy, both at zero field (continuum momentum integrals) and in
//! a quantizing magnetic field (Landau-level sums). Closed-form asymptotics
//! are provided next to every numeric path so the two can be compared.

pub mod error;
pub mod kubo_dynamic;
pub mod kubo_static;
pub mod model;
mod quad;
pub mod scba;
pub mod sweep;
pub mod validate;
pub mod vertex;

pub use error::{Error, Result};
pub use model::{LandauSpectrum, ModelParams, SelfEnergyModel, State};
pub use kubo_static::{AnalyticValue, Regime, ViscosityValue};
pub use scba::SelfEnergySolution;
pub use kubo_dynamic::Broadening;
pub use sweep::{figure_preset, run_sweep, SweepResult, SweepSpec};
pub use vertex::VertexReport;
