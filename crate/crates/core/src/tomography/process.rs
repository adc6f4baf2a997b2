//! Process (chi-matrix) tomography in the two-qubit Pauli basis.
//!
//! A process E is expanded as E(rho) = sum_{mn} chi_{mn} P_m rho P_n with
//! P_m the 16 two-qubit Paulis (order I, X, Y, Z per qubit, first qubit most
//! significant). The 16 preparations {I, X, X/2, Y/2} per qubit are
//! tomographically complete; each output is state-tomographed and the
//! resulting linear system inverted for chi.

use std::str::FromStr;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::operator::{identity_matrix, pauli_x, re, rot_x, rot_y, C64, ComplexOperator, ZERO};
use crate::space::CompositeSpace;
use crate::state::{DensityMatrix, PureState};
use crate::tomography::{pauli_2q, simulate_state_tomography, VisibilityMatrix};

/// Preparation gate applied to |g> before the process.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PrepGate {
    I,
    X,
    XHalf,
    YHalf,
}

impl PrepGate {
    pub const ALL: [PrepGate; 4] = [PrepGate::I, PrepGate::X, PrepGate::XHalf, PrepGate::YHalf];

    pub fn unitary(&self) -> DMatrix<C64> {
        match self {
            PrepGate::I => identity_matrix(2),
            PrepGate::X => pauli_x(),
            PrepGate::XHalf => rot_x(std::f64::consts::FRAC_PI_2),
            PrepGate::YHalf => rot_y(std::f64::consts::FRAC_PI_2),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            PrepGate::I => "I",
            PrepGate::X => "X",
            PrepGate::XHalf => "X/2",
            PrepGate::YHalf => "Y/2",
        }
    }
}

impl FromStr for PrepGate {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "I" => Ok(PrepGate::I),
            "X" => Ok(PrepGate::X),
            "X/2" => Ok(PrepGate::XHalf),
            "Y/2" => Ok(PrepGate::YHalf),
            other => Err(Error::InvalidParameter(format!("unknown prep gate `{other}`"))),
        }
    }
}

/// Process matrix in the Pauli basis: Hermitian with unit trace for a
/// trace-preserving process.
#[derive(Debug, Clone, PartialEq)]
pub struct ChiMatrix {
    entries: DMatrix<C64>,
}

impl ChiMatrix {
    pub fn new(entries: DMatrix<C64>) -> Result<Self> {
        if entries.nrows() != 16 || entries.ncols() != 16 {
            return Err(Error::DimensionMismatch {
                expected: 16,
                got: entries.nrows(),
            });
        }
        let herm = crate::operator::hermiticity_deviation(&entries);
        if herm > 1e-9 {
            return Err(Error::NotHermitian(herm));
        }
        let tr = entries.trace();
        if (tr.re - 1.0).abs().max(tr.im.abs()) > 1e-9 {
            return Err(Error::TraceDeviation((tr.re - 1.0).abs()));
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &DMatrix<C64> {
        &self.entries
    }

    /// Largest eigenvalue as a fraction of the trace; 1 for a unitary
    /// (rank-one) process.
    pub fn dominant_eigenvalue_fraction(&self) -> f64 {
        let (vals, _) = crate::operator::hermitian_eigen(&self.entries);
        vals.last().copied().unwrap_or(0.0) / self.entries.trace().re
    }

    /// Apply the process this chi matrix represents.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != 4 {
            return Err(Error::DimensionMismatch { expected: 4, got: rho.dim() });
        }
        let paulis = pauli_2q();
        let mut out = DMatrix::<C64>::zeros(4, 4);
        for m in 0..16 {
            for n in 0..16 {
                let w = self.entries[(m, n)];
                if w != ZERO {
                    out += (&paulis[m] * rho.matrix() * &paulis[n]).map(|z| z * w);
                }
            }
        }
        DensityMatrix::new(rho.space().clone(), out)
    }
}

/// chi matrix of an ideal two-qubit unitary: chi = c c^dag with
/// c_m = tr(P_m U) / 4.
pub fn chi_of_unitary(u: &DMatrix<C64>) -> Result<ChiMatrix> {
    if u.nrows() != 4 || u.ncols() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, got: u.nrows() });
    }
    let paulis = pauli_2q();
    let c = DVector::<C64>::from_iterator(
        16,
        paulis.iter().map(|p| (p * u).trace() / re(4.0)),
    );
    ChiMatrix::new(&c * c.adjoint())
}

/// Process fidelity tr(chi_ideal chi_exp), real part clamped to [0, 1].
pub fn process_fidelity(chi_ideal: &ChiMatrix, chi_exp: &ChiMatrix) -> f64 {
    (chi_ideal.entries() * chi_exp.entries())
        .trace()
        .re
        .clamp(0.0, 1.0)
}

/// The 16 two-qubit preparation states (prep gates applied to |gg>).
pub fn preparation_states(space: &CompositeSpace) -> Result<Vec<(String, DensityMatrix)>> {
    if space.dims() != [2, 2] {
        return Err(Error::InvalidParameter("process tomography runs on two qubits".into()));
    }
    let ground = PureState::basis_state(space.clone(), &[0, 0])?.to_density();
    let mut out = Vec::with_capacity(16);
    for ga in PrepGate::ALL {
        for gb in PrepGate::ALL {
            let ua = ComplexOperator::on_single("q", ga.unitary())?;
            let ub = ComplexOperator::on_single("q", gb.unitary())?;
            let prepared = ground
                .apply_unitary_on(&ua, &[space.labels()[0].as_str()])?
                .apply_unitary_on(&ub, &[space.labels()[1].as_str()])?;
            out.push((format!("{},{}", ga.name(), gb.name()), prepared));
        }
    }
    Ok(out)
}

/// Options for the tomography stage of process tomography. Zero shots means
/// exact (infinite-shot) state tomography.
#[derive(Debug, Clone)]
pub struct ProcessTomographyOptions {
    pub shots: u64,
    pub visibilities: Vec<VisibilityMatrix>,
    pub seed: u64,
}

impl Default for ProcessTomographyOptions {
    fn default() -> Self {
        Self {
            shots: 0,
            visibilities: vec![VisibilityMatrix::perfect(); 2],
            seed: 0,
        }
    }
}

/// Run process tomography on a black-box trace-preserving map: prepare the
/// 16 input states, apply the process, state-tomograph each output, and
/// invert for the chi matrix.
pub fn process_tomography<F>(process: F, opts: &ProcessTomographyOptions) -> Result<ChiMatrix>
where
    F: Fn(&DensityMatrix) -> Result<DensityMatrix>,
{
    let space = CompositeSpace::qubits(vec!["QA", "QB"])?;
    let preps = preparation_states(&space)?;
    let paulis = pauli_2q();

    // linear system A x = b over the 256 complex chi entries:
    // sum_{mn} chi_mn (P_m rho_j P_n)_{ab} = E(rho_j)_{ab}
    let mut a = DMatrix::<C64>::zeros(256, 256);
    let mut b = DVector::<C64>::zeros(256);
    for (j, (_, rho_in)) in preps.iter().enumerate() {
        let rho_out = process(rho_in)?;
        let rho_out = if opts.shots == 0 && opts.visibilities.iter().all(|v| v.f_g == 1.0 && v.f_e == 1.0)
        {
            rho_out
        } else {
            let (_, estimate) = simulate_state_tomography(
                &rho_out,
                opts.shots,
                &opts.visibilities,
                opts.seed.wrapping_add(j as u64),
            )?;
            estimate
        };
        // precompute P_m rho_j once per m
        let left: Vec<DMatrix<C64>> = paulis.iter().map(|p| p * rho_in.matrix()).collect();
        for m in 0..16 {
            for n in 0..16 {
                let term = &left[m] * &paulis[n];
                for row in 0..4 {
                    for col in 0..4 {
                        a[(j * 16 + row * 4 + col, m * 16 + n)] = term[(row, col)];
                    }
                }
            }
        }
        for row in 0..4 {
            for col in 0..4 {
                b[j * 16 + row * 4 + col] = rho_out.matrix()[(row, col)];
            }
        }
    }
    let lu = a.lu();
    let x = lu
        .solve(&b)
        .ok_or_else(|| Error::InvalidParameter("chi inversion is singular".into()))?;
    let mut chi = DMatrix::<C64>::zeros(16, 16);
    for m in 0..16 {
        for n in 0..16 {
            chi[(m, n)] = x[m * 16 + n];
        }
    }
    // the exact-inversion result is Hermitian up to round-off
    let chi = (chi.clone() + chi.adjoint()).map(|z| z * re(0.5));
    ChiMatrix::new(chi)
}
