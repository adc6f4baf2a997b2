//! Gate library, purification circuits with post-selection, and
//! entanglement protection under quasi-static noise.

pub mod gates;
pub mod protect;
pub mod purify;

pub use gates::{apply_gates, compose_cnot, standard_gate, GateOp};
pub use protect::{
    calibrate_sigma, free_fidelity_expected, protect_dd, protect_free, protect_rabi,
    protect_series, ProtectionOptions, ProtectionScheme, ProtectionSeries, QuasiStaticNoise,
    StorageDamping,
};
pub use purify::{
    analytic_combined_postselect, analytic_purified_fidelity, purify, purify_double_selection,
    purify_matrices, AnalyticPostSelection, DoubleSelectionRun, PurificationOutcome,
    PurificationRun, PurifyScheme, RawBranch, Selection,
};
