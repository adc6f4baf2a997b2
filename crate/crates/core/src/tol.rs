//! Validation tolerances, collected in one place so that every physicality
//! check in the crate draws from the same set of constants.

/// Max allowed |A - A^dag| entry for a density matrix.
pub const HERMITICITY: f64 = 1e-10;
/// Max allowed |tr(rho) - 1|.
pub const TRACE: f64 = 1e-10;
/// Most negative eigenvalue a density matrix may carry.
pub const PSD_FLOOR: f64 = -1e-9;
/// Max allowed |norm - 1| for a pure-state vector.
pub const STATE_NORM: f64 = 1e-12;
/// Max allowed deviation of sum E_i^dag E_i from identity.
pub const CHANNEL_COMPLETENESS: f64 = 1e-10;
/// Slack permitted when clamping fidelities into [0, 1].
pub const FIDELITY_CLAMP: f64 = 1e-9;
/// Max allowed |U^dag U - I| entry for a gate unitary.
pub const UNITARITY: f64 = 1e-10;
/// Trace / hermiticity drift allowed along an integrated trajectory.
pub const TRAJECTORY_DRIFT: f64 = 1e-8;
/// Guard on the total Hilbert-space dimension.
pub const MAX_DIMENSION: usize = 4096;

/// Overridable bundle of the per-state tolerances.
///
/// `Default` reproduces the module constants; callers that need looser or
/// tighter validation (e.g. configuration-driven runs) construct their own.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub hermiticity: f64,
    pub trace: f64,
    pub psd_floor: f64,
    pub state_norm: f64,
    pub channel_completeness: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermiticity: HERMITICITY,
            trace: TRACE,
            psd_floor: PSD_FLOOR,
            state_norm: STATE_NORM,
            channel_completeness: CHANNEL_COMPLETENESS,
        }
    }
}
