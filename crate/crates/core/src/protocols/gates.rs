//! The small gate library used by the purification and protection circuits.
//! Gates are ideal unitaries; durations are carried as metadata only.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::operator::{identity_matrix, pauli_x, pauli_y, pauli_z, rot_x, rot_y, C64, ComplexOperator, I, ONE, ZERO};
use crate::space::CompositeSpace;
use crate::state::DensityMatrix;
use crate::tol;

/// A named unitary bound to target subsystem labels.
#[derive(Debug, Clone)]
pub struct GateOp {
    pub name: String,
    pub unitary: ComplexOperator,
    pub targets: Vec<String>,
    pub duration_ns: f64,
}

impl GateOp {
    pub fn new(
        name: impl Into<String>,
        unitary: ComplexOperator,
        targets: Vec<String>,
        duration_ns: f64,
    ) -> Result<Self> {
        let dev = unitary.unitarity_deviation();
        if dev > tol::UNITARITY {
            return Err(Error::InvalidParameter(format!(
                "gate matrix not unitary (deviation {dev:.3e})"
            )));
        }
        if targets.len() != unitary.space().n_subsystems() {
            return Err(Error::InvalidParameter(format!(
                "{} targets for a {}-subsystem gate",
                targets.len(),
                unitary.space().n_subsystems()
            )));
        }
        Ok(Self {
            name: name.into(),
            unitary,
            targets,
            duration_ns,
        })
    }

    /// The same gate bound to different target labels.
    pub fn on<S: Into<String> + Clone>(&self, targets: &[S]) -> Result<Self> {
        Self::new(
            self.name.clone(),
            self.unitary.clone(),
            targets.iter().cloned().map(Into::into).collect(),
            self.duration_ns,
        )
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        rho.apply_unitary_on(&self.unitary, &self.targets)
    }
}

fn single(name: &str, m: DMatrix<C64>, duration_ns: f64) -> Result<GateOp> {
    GateOp::new(
        name,
        ComplexOperator::on_single("q", m)?,
        vec!["q".into()],
        duration_ns,
    )
}

fn pair(name: &str, m: DMatrix<C64>, duration_ns: f64) -> Result<GateOp> {
    GateOp::new(
        name,
        ComplexOperator::new(CompositeSpace::qubits(vec!["c", "t"])?, m)?,
        vec!["c".into(), "t".into()],
        duration_ns,
    )
}

pub fn iswap_matrix() -> DMatrix<C64> {
    DMatrix::from_row_slice(
        4,
        4,
        &[
            ONE, ZERO, ZERO, ZERO,
            ZERO, ZERO, -I, ZERO,
            ZERO, -I, ZERO, ZERO,
            ZERO, ZERO, ZERO, ONE,
        ],
    )
}

pub fn cz_matrix() -> DMatrix<C64> {
    let mut m = identity_matrix(4);
    m[(3, 3)] = -ONE;
    m
}

pub fn cnot_matrix() -> DMatrix<C64> {
    DMatrix::from_row_slice(
        4,
        4,
        &[
            ONE, ZERO, ZERO, ZERO,
            ZERO, ONE, ZERO, ZERO,
            ZERO, ZERO, ZERO, ONE,
            ZERO, ZERO, ONE, ZERO,
        ],
    )
}

/// Library lookup by name: `x`, `y`, `z`, `x/2`, `-x/2`, `y/2`, `-y/2`,
/// `iswap`, `cz`, `cnot`. Durations follow the calibrated gate lengths
/// (30 ns pi pulses, 20 ns pi/2 pulses, 15 ns iswap, 21 ns cz).
pub fn standard_gate(name: &str) -> Result<GateOp> {
    match name {
        "x" => single("x", pauli_x(), 30.0),
        "y" => single("y", pauli_y(), 30.0),
        "z" => single("z", pauli_z(), 0.0),
        "x/2" => single("x/2", rot_x(std::f64::consts::FRAC_PI_2), 20.0),
        "-x/2" => single("-x/2", rot_x(-std::f64::consts::FRAC_PI_2), 20.0),
        "y/2" => single("y/2", rot_y(std::f64::consts::FRAC_PI_2), 20.0),
        "-y/2" => single("-y/2", rot_y(-std::f64::consts::FRAC_PI_2), 20.0),
        "iswap" => pair("iswap", iswap_matrix(), 15.0),
        "cz" => pair("cz", cz_matrix(), 21.0),
        "cnot" => pair("cnot", cnot_matrix(), 61.0),
        other => Err(Error::UnknownGate(other.to_string())),
    }
}

/// CNOT decomposed into the hardware-native sequence: a -Y/2 on the target,
/// CZ, then Y/2 on the target. The product equals CNOT exactly for the ideal
/// CZ; on hardware the CZ contributes extra single-qubit Z phases which this
/// ideal composition does not carry.
pub fn compose_cnot(control: &str, target: &str) -> Result<Vec<GateOp>> {
    if control == target {
        return Err(Error::InvalidParameter("control and target must differ".into()));
    }
    Ok(vec![
        standard_gate("-y/2")?.on(&[target])?,
        standard_gate("cz")?.on(&[control, target])?,
        standard_gate("y/2")?.on(&[target])?,
    ])
}

/// Apply a gate list in order.
pub fn apply_gates(rho: &DensityMatrix, gates: &[GateOp]) -> Result<DensityMatrix> {
    let mut out = rho.clone();
    for g in gates {
        out = g.apply(&out)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{max_abs_entry, re};
    use crate::state::PureState;
    use approx::assert_abs_diff_eq;

    #[test]
    fn iswap_moves_eg_to_minus_i_ge() {
        let g = standard_gate("iswap").unwrap();
        let sp = g.unitary.space().clone();
        let eg = PureState::basis_state(sp, &[1, 0]).unwrap();
        let out = g.unitary.matrix() * eg.amplitudes();
        assert_abs_diff_eq!((out[1] - (-I)).norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn cz_flips_the_sign_of_ee_only() {
        let g = standard_gate("cz").unwrap();
        for (idx, expect) in [(0, ONE), (1, ONE), (2, ONE), (3, -ONE)] {
            assert_eq!(g.unitary.matrix()[(idx, idx)], expect);
        }
    }

    #[test]
    fn x_squares_to_identity() {
        let x = standard_gate("x").unwrap();
        let sq = x.unitary.matrix() * x.unitary.matrix();
        assert_eq!(sq, identity_matrix(2));
    }

    #[test]
    fn all_library_gates_are_unitary() {
        for name in ["x", "y", "z", "x/2", "-x/2", "y/2", "-y/2", "iswap", "cz", "cnot"] {
            let g = standard_gate(name).unwrap();
            assert!(g.unitary.is_unitary(tol::UNITARITY), "{name}");
        }
        assert!(matches!(standard_gate("h"), Err(Error::UnknownGate(_))));
    }

    #[test]
    fn composed_cnot_equals_the_native_gate_exactly() {
        let sp = CompositeSpace::qubits(vec!["c", "t"]).unwrap();
        let gates = compose_cnot("c", "t").unwrap();
        let mut product = identity_matrix(4);
        for g in &gates {
            product = g.unitary.embed(&g.targets, &sp).unwrap().into_matrix() * product;
        }
        let diff = max_abs_entry(&(&product - cnot_matrix()));
        assert!(diff < 1e-14, "composition differs from cnot by {diff:e}");
    }

    #[test]
    fn composed_cnot_truth_table_on_basis_states() {
        let sp = CompositeSpace::qubits(vec!["c", "t"]).unwrap();
        let gates = compose_cnot("c", "t").unwrap();
        // |eg> -> |ee>, |gg> -> |gg>
        let run = |levels: &[usize]| {
            let rho = PureState::basis_state(sp.clone(), levels).unwrap().to_density();
            apply_gates(&rho, &gates).unwrap()
        };
        assert_abs_diff_eq!(run(&[1, 0]).population(&[1, 1]), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(run(&[0, 0]).population(&[0, 0]), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn composition_magnitudes_match_the_cnot_pattern() {
        let sp = CompositeSpace::qubits(vec!["c", "t"]).unwrap();
        let gates = compose_cnot("c", "t").unwrap();
        let mut product = identity_matrix(4);
        for g in &gates {
            product = g.unitary.embed(&g.targets, &sp).unwrap().into_matrix() * product;
        }
        let pattern = cnot_matrix();
        for r in 0..4 {
            for c in 0..4 {
                assert_abs_diff_eq!(
                    product[(r, c)].norm(),
                    pattern[(r, c)].norm(),
                    epsilon = 1e-14
                );
            }
        }
    }

    #[test]
    fn rebinding_targets_checks_arity() {
        let g = standard_gate("cz").unwrap();
        assert!(g.on(&["a"]).is_err());
        let bound = g.on(&["Q2A", "Q1A"]).unwrap();
        assert_eq!(bound.targets, vec!["Q2A".to_string(), "Q1A".to_string()]);
    }

    #[test]
    fn gate_application_uses_bound_targets() {
        let sp = CompositeSpace::qubits(vec!["a", "b"]).unwrap();
        let rho = PureState::basis_state(sp, &[0, 0]).unwrap().to_density();
        let x_on_b = standard_gate("x").unwrap().on(&["b"]).unwrap();
        let out = x_on_b.apply(&rho).unwrap();
        assert_abs_diff_eq!(out.population(&[0, 1]), 1.0, epsilon = 1e-15);
        let zero = re(0.0);
        assert_eq!(out.entry(&[1, 0], &[1, 0]), zero);
    }
}
