//! Time-dependent Hamiltonian construction, Lindblad master-equation
//! integration, and the cable-mediated experiment pipelines.

pub mod experiments;
pub mod hamiltonian;
pub mod lindblad;
pub mod params;

pub use experiments::{
    generate_bell_via_cable, simulate_cable_ringdown, simulate_vacuum_rabi, BellGenParams,
    BellGenResult, RingdownParams, TimeSeries, VacuumRabiParams,
};
pub use hamiltonian::{
    build_hamiltonian, build_single_excitation_hamiltonian, CableNetwork, HamiltonianSpec,
    PulseSchedule, Segment, SingleExcitationBasis,
};
pub use lindblad::{
    lindblad_evolve, CollapseOp, CollapseSet, EvolutionSegment, EvolveOptions, Trajectory,
};
pub use params::{CableParams, CouplerParams, QubitParams};
