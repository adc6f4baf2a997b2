//! Simulation and analysis library for a two-node superconducting quantum
//! network linked by a lossy cable: remote Bell-pair generation, entanglement
//! purification with post-selection, entanglement protection, and the
//! tomography / readout-correction pipeline used to measure all of it.
//!
//! All frequencies are stored internally as angular frequencies in rad/ns and
//! all times in ns; configuration layers convert from GHz/MHz/us at the
//! boundary.

pub mod analysis;
pub mod channels;
pub mod dynamics;
pub mod error;
pub mod protocols;
pub mod operator;
pub mod space;
pub mod tomography;
pub mod state;
pub mod tol;

pub use error::{Error, Result};
pub use operator::{ComplexOperator, C64};
pub use space::CompositeSpace;
pub use state::{nearest_physical_state, partial_trace, state_fidelity, DensityMatrix, PureState};
pub use tol::Tolerances;
