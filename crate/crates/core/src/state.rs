//! Pure states and density matrices.
//!
//! [`DensityMatrix`] is the universal state carrier: Hermitian, unit trace,
//! positive semidefinite, all enforced at construction against the crate
//! tolerances. States are immutable after construction; every operation
//! returns a new value.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{
    hermitian_eigen, hermiticity_deviation, min_eigenvalue, re, C64,
    ComplexOperator,
};
use crate::space::CompositeSpace;
use crate::tol::{self, Tolerances};

// ---------------------------------------------------------------------------
// PureState
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    space: CompositeSpace,
    amplitudes: DVector<C64>,
}

impl PureState {
    pub fn new(space: CompositeSpace, amplitudes: DVector<C64>) -> Result<Self> {
        if amplitudes.len() != space.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                got: amplitudes.len(),
            });
        }
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > tol::STATE_NORM {
            return Err(Error::NormDeviation((norm - 1.0).abs()));
        }
        Ok(Self { space, amplitudes })
    }

    /// Build from unnormalized amplitudes, normalizing on the way in.
    pub fn normalized(space: CompositeSpace, amplitudes: DVector<C64>) -> Result<Self> {
        let norm = amplitudes.norm();
        if norm <= 0.0 {
            return Err(Error::InvalidParameter("cannot normalize the zero vector".into()));
        }
        Self::new(space, amplitudes.map(|z| z / norm))
    }

    /// Computational basis state with the given per-subsystem levels.
    pub fn basis_state(space: CompositeSpace, levels: &[usize]) -> Result<Self> {
        if levels.len() != space.n_subsystems() {
            return Err(Error::InvalidParameter(format!(
                "{} levels for {} subsystems",
                levels.len(),
                space.n_subsystems()
            )));
        }
        for (l, d) in levels.iter().zip(space.dims()) {
            if l >= d {
                return Err(Error::InvalidParameter(format!("level {l} out of range (dim {d})")));
            }
        }
        let idx = space.flat_index(levels);
        let mut v = DVector::zeros(space.dim());
        v[idx] = re(1.0);
        Self::new(space, v)
    }

    pub fn space(&self) -> &CompositeSpace {
        &self.space
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let space = self.space.concat(&other.space)?;
        Ok(Self {
            space,
            amplitudes: self.amplitudes.kronecker(&other.amplitudes),
        })
    }

    pub fn to_density(&self) -> DensityMatrix {
        let m = &self.amplitudes * self.amplitudes.adjoint();
        DensityMatrix {
            space: self.space.clone(),
            m,
        }
    }

    /// `<self| op |self>`, without any clamping.
    pub fn expectation(&self, op: &ComplexOperator) -> Result<C64> {
        if op.space() != &self.space {
            return Err(Error::SpaceMismatch);
        }
        Ok((self.amplitudes.adjoint() * op.matrix() * &self.amplitudes)[(0, 0)])
    }
}

// ---------------------------------------------------------------------------
// DensityMatrix
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    space: CompositeSpace,
    m: DMatrix<C64>,
}

impl DensityMatrix {
    pub fn new(space: CompositeSpace, m: DMatrix<C64>) -> Result<Self> {
        Self::new_with(space, m, &Tolerances::default())
    }

    pub fn new_with(space: CompositeSpace, m: DMatrix<C64>, tols: &Tolerances) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() != space.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                got: m.nrows(),
            });
        }
        let herm = hermiticity_deviation(&m);
        if herm > tols.hermiticity {
            return Err(Error::NotHermitian(herm));
        }
        let tr_dev = (m.trace().re - 1.0).abs().max(m.trace().im.abs());
        if tr_dev > tols.trace {
            return Err(Error::TraceDeviation(tr_dev));
        }
        let min_eig = min_eigenvalue(&m);
        if min_eig < tols.psd_floor {
            return Err(Error::NotPositive(min_eig));
        }
        Ok(Self { space, m })
    }

    pub fn from_pure(psi: &PureState) -> Self {
        psi.to_density()
    }

    pub fn maximally_mixed(space: CompositeSpace) -> Self {
        let d = space.dim();
        let m = DMatrix::from_diagonal_element(d, d, re(1.0 / d as f64));
        Self { space, m }
    }

    /// Convex (or signed, as long as the result is physical) combination.
    pub fn mixture(parts: &[(f64, &DensityMatrix)]) -> Result<Self> {
        let first = parts
            .first()
            .ok_or_else(|| Error::InvalidParameter("empty mixture".into()))?;
        let space = first.1.space.clone();
        let mut acc = DMatrix::<C64>::zeros(space.dim(), space.dim());
        for (w, rho) in parts {
            if rho.space != space {
                return Err(Error::SpaceMismatch);
            }
            acc += rho.m.map(|z| z * re(*w));
        }
        Self::new(space, acc)
    }

    pub fn space(&self) -> &CompositeSpace {
        &self.space
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.m
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn trace(&self) -> f64 {
        self.m.trace().re
    }

    pub fn purity(&self) -> f64 {
        (&self.m * &self.m).trace().re
    }

    pub fn min_eigenvalue(&self) -> f64 {
        min_eigenvalue(&self.m)
    }

    /// Diagonal population of a computational basis state.
    pub fn population(&self, levels: &[usize]) -> f64 {
        let i = self.space.flat_index(levels);
        self.m[(i, i)].re
    }

    /// Matrix element between two computational basis states.
    pub fn entry(&self, row_levels: &[usize], col_levels: &[usize]) -> C64 {
        self.m[(
            self.space.flat_index(row_levels),
            self.space.flat_index(col_levels),
        )]
    }

    /// `tr(op * rho)`.
    pub fn expectation(&self, op: &ComplexOperator) -> Result<C64> {
        if op.space() != &self.space {
            return Err(Error::SpaceMismatch);
        }
        Ok((op.matrix() * &self.m).trace())
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let space = self.space.concat(&other.space)?;
        Ok(Self {
            space,
            m: self.m.kronecker(&other.m),
        })
    }

    /// Conjugate by a unitary on the full space: `U rho U^dag`.
    pub fn apply_unitary(&self, u: &ComplexOperator) -> Result<Self> {
        if u.space() != &self.space {
            return Err(Error::SpaceMismatch);
        }
        Ok(Self {
            space: self.space.clone(),
            m: u.matrix() * &self.m * u.matrix().adjoint(),
        })
    }

    /// Conjugate by a unitary acting on the named target subsystems.
    pub fn apply_unitary_on<S: AsRef<str>>(
        &self,
        u: &ComplexOperator,
        targets: &[S],
    ) -> Result<Self> {
        let embedded = u.embed(targets, &self.space)?;
        self.apply_unitary(&embedded)
    }

    pub fn relabeled<L: Into<String>>(&self, labels: Vec<L>) -> Result<Self> {
        Ok(Self {
            space: self.space.relabeled(labels)?,
            m: self.m.clone(),
        })
    }

    /// Reorder subsystems into the given label order.
    pub fn permuted<S: AsRef<str>>(&self, new_order: &[S]) -> Result<Self> {
        if new_order.len() != self.space.n_subsystems() {
            return Err(Error::InvalidParameter(
                "permutation must name every subsystem exactly once".into(),
            ));
        }
        let positions = self.space.positions(new_order)?;
        let new_space = self.space.subspace(new_order)?;
        let dim = self.space.dim();
        let mut map = vec![0usize; dim];
        for idx in 0..dim {
            let multi = self.space.multi_index(idx);
            let newm: Vec<usize> = positions.iter().map(|&p| multi[p]).collect();
            map[idx] = new_space.flat_index(&newm);
        }
        let mut out = DMatrix::zeros(dim, dim);
        for r in 0..dim {
            for c in 0..dim {
                out[(map[r], map[c])] = self.m[(r, c)];
            }
        }
        Ok(Self {
            space: new_space,
            m: out,
        })
    }

    /// Trace out everything except the named subsystems (kept in the order
    /// given). The result trace equals the input trace.
    pub fn partial_trace<S: AsRef<str>>(&self, keep_labels: &[S]) -> Result<Self> {
        if keep_labels.is_empty() {
            return Err(Error::InvalidParameter("must keep at least one subsystem".into()));
        }
        let keep_pos = self.space.positions(keep_labels)?;
        let keep_space = self.space.subspace(keep_labels)?;
        let n = self.space.n_subsystems();
        let is_kept: Vec<bool> = (0..n).map(|p| keep_pos.contains(&p)).collect();
        let rest_dims: Vec<usize> = (0..n)
            .filter(|&p| !is_kept[p])
            .map(|p| self.space.dims()[p])
            .collect();
        let rest_dim: usize = rest_dims.iter().product();
        let kdim = keep_space.dim();

        // full-space flat index for a (kept, rest) pair of sub-indices
        let strides = self.space.strides();
        let compose = |kflat: usize, rflat: usize| -> usize {
            let kmulti = keep_space.multi_index(kflat);
            let mut rmulti = Vec::with_capacity(rest_dims.len());
            let mut r = rflat;
            for rd in rest_dims.iter().rev() {
                rmulti.push(r % rd);
                r /= rd;
            }
            rmulti.reverse();
            let mut flat = 0usize;
            let mut ri = 0usize;
            for p in 0..n {
                let level = if let Some(kslot) = keep_pos.iter().position(|&kp| kp == p) {
                    kmulti[kslot]
                } else {
                    let v = rmulti[ri];
                    ri += 1;
                    v
                };
                flat += strides[p] * level;
            }
            flat
        };

        let mut out = DMatrix::<C64>::zeros(kdim, kdim);
        for rflat in 0..rest_dim.max(1) {
            let rows: Vec<usize> = (0..kdim).map(|k| compose(k, rflat)).collect();
            for a in 0..kdim {
                for b in 0..kdim {
                    out[(a, b)] += self.m[(rows[a], rows[b])];
                }
            }
        }
        Ok(Self {
            space: keep_space,
            m: out,
        })
    }

    /// `<target| rho |target>`, real part, clamped to [0, 1].
    pub fn fidelity_pure(&self, target: &PureState) -> Result<f64> {
        if target.space() != &self.space {
            return Err(Error::SpaceMismatch);
        }
        let v =
            (target.amplitudes().adjoint() * &self.m * target.amplitudes())[(0, 0)].re;
        Ok(clamp_unit(v))
    }

    /// Uhlmann fidelity between two mixed states.
    pub fn fidelity_mixed(&self, other: &Self) -> Result<f64> {
        if other.space != self.space {
            return Err(Error::SpaceMismatch);
        }
        let sqrt_rho = hermitian_sqrt(&self.m);
        let inner = &sqrt_rho * &other.m * &sqrt_rho;
        let (vals, _) = hermitian_eigen(&inner);
        let s: f64 = vals.iter().map(|&v| v.max(0.0).sqrt()).sum();
        Ok(clamp_unit(s * s))
    }

    /// Trace distance `0.5 * tr|rho - sigma|`.
    pub fn trace_distance(&self, other: &Self) -> Result<f64> {
        if other.space != self.space {
            return Err(Error::SpaceMismatch);
        }
        let (vals, _) = hermitian_eigen(&(&self.m - &other.m));
        Ok(0.5 * vals.iter().map(|v| v.abs()).sum::<f64>())
    }

    /// Escape hatch for analysis code that has to manipulate operators which
    /// are not (yet) physical states; skips all validation.
    pub fn as_operator(&self) -> ComplexOperator {
        ComplexOperator::new(self.space.clone(), self.m.clone())
            .expect("dimensions verified at construction")
    }

    pub(crate) fn from_parts_unchecked(space: CompositeSpace, m: DMatrix<C64>) -> Self {
        Self { space, m }
    }
}

fn clamp_unit(v: f64) -> f64 {
    v.clamp(0.0, 1.0)
}

fn hermitian_sqrt(m: &DMatrix<C64>) -> DMatrix<C64> {
    let (vals, vecs) = hermitian_eigen(m);
    let d = DMatrix::from_diagonal(&DVector::from_iterator(
        vals.len(),
        vals.iter().map(|&v| re(v.max(0.0).sqrt())),
    ));
    &vecs * d * vecs.adjoint()
}

/// Fidelity of a state against a pure target, `<psi| rho |psi>`.
pub fn state_fidelity(rho: &DensityMatrix, target: &PureState) -> Result<f64> {
    rho.fidelity_pure(target)
}

/// Free-function form of [`DensityMatrix::partial_trace`].
pub fn partial_trace<S: AsRef<str>>(rho: &DensityMatrix, keep: &[S]) -> Result<DensityMatrix> {
    rho.partial_trace(keep)
}

/// Project an arbitrary square operator onto the physical states:
/// symmetrize, clip negative eigenvalues to zero, renormalize the trace.
/// Deterministic, and idempotent on already-physical inputs.
pub fn nearest_physical_state(h: &ComplexOperator) -> Result<DensityMatrix> {
    let sym = h.matrix().map(|z| z * re(0.5)) + h.matrix().adjoint().map(|z| z * re(0.5));
    let (vals, vecs) = hermitian_eigen(&sym);
    let clipped: Vec<f64> = vals.iter().map(|&v| v.max(0.0)).collect();
    let total: f64 = clipped.iter().sum();
    if total <= 0.0 {
        return Err(Error::DegenerateInput);
    }
    let d = DMatrix::from_diagonal(&DVector::from_iterator(
        clipped.len(),
        clipped.iter().map(|&v| re(v / total)),
    ));
    let m = &vecs * d * vecs.adjoint();
    // Eigendecomposition round-off can leave a strictly tiny asymmetry.
    let m = m.map(|z| z * re(0.5)) + m.adjoint().map(|z| z * re(0.5));
    DensityMatrix::new(h.space().clone(), m)
}

// ---------------------------------------------------------------------------
// serialization
// ---------------------------------------------------------------------------

/// Wire format: `{labels, dims, re, im}` with row-major entry arrays.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DensityMatrixJson {
    pub labels: Vec<String>,
    pub dims: Vec<usize>,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl DensityMatrix {
    pub fn to_json(&self) -> DensityMatrixJson {
        let d = self.dim();
        let mut r = Vec::with_capacity(d * d);
        let mut i = Vec::with_capacity(d * d);
        for row in 0..d {
            for col in 0..d {
                r.push(self.m[(row, col)].re);
                i.push(self.m[(row, col)].im);
            }
        }
        DensityMatrixJson {
            labels: self.space.labels().to_vec(),
            dims: self.space.dims().to_vec(),
            re: r,
            im: i,
        }
    }

    pub fn from_json(j: &DensityMatrixJson) -> Result<Self> {
        let space = CompositeSpace::new(j.labels.clone(), j.dims.clone())?;
        let d = space.dim();
        if j.re.len() != d * d || j.im.len() != d * d {
            return Err(Error::DimensionMismatch {
                expected: d * d,
                got: j.re.len(),
            });
        }
        let m = DMatrix::from_fn(d, d, |row, col| {
            C64::new(j.re[row * d + col], j.im[row * d + col])
        });
        Self::new(space, m)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("serializable")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let j: DensityMatrixJson = serde_json::from_str(s)
            .map_err(|e| Error::InvalidParameter(format!("bad state JSON: {e}")))?;
        Self::from_json(&j)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{max_abs_entry, pauli_x, sigma_minus, ZERO};
    use approx::assert_abs_diff_eq;

    fn two_qubits() -> CompositeSpace {
        CompositeSpace::qubits(vec!["Q2A", "Q2B"]).unwrap()
    }

    fn psi_minus() -> PureState {
        let sp = two_qubits();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        PureState::new(
            sp,
            DVector::from_row_slice(&[ZERO, re(-r), re(r), ZERO]),
        )
        .unwrap()
    }

    #[test]
    fn lowering_second_qubit_of_singlet() {
        // (I (x) sigma-) |psi-> = -|gg>/sqrt(2); lowering the first qubit
        // instead gives +|gg>/sqrt(2). Checked by hand-expanding the 4-vector.
        let psi = psi_minus();
        let lower_b = ComplexOperator::on_single("q", sigma_minus())
            .unwrap()
            .embed(&["Q2B"], psi.space())
            .unwrap();
        let out_b = lower_b.matrix() * psi.amplitudes();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(out_b[0].re, -r, epsilon = 1e-15);
        assert_abs_diff_eq!(out_b[1].norm(), 0.0, epsilon = 1e-15);

        let lower_a = ComplexOperator::on_single("q", sigma_minus())
            .unwrap()
            .embed(&["Q2A"], psi.space())
            .unwrap();
        let out_a = lower_a.matrix() * psi.amplitudes();
        assert_abs_diff_eq!(out_a[0].re, r, epsilon = 1e-15);
    }

    #[test]
    fn partial_trace_of_singlet_is_maximally_mixed() {
        let rho = psi_minus().to_density();
        let reduced = rho.partial_trace(&["Q2A"]).unwrap();
        let expect = DMatrix::from_diagonal_element(2, 2, re(0.5));
        assert_abs_diff_eq!(
            max_abs_entry(&(reduced.matrix() - expect)),
            0.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn partial_trace_of_product_state_recovers_factor() {
        let a = PureState::normalized(
            CompositeSpace::qubits(vec!["a"]).unwrap(),
            DVector::from_row_slice(&[re(0.6), C64::new(0.0, 0.8)]),
        )
        .unwrap()
        .to_density();
        let b = DensityMatrix::maximally_mixed(CompositeSpace::qubits(vec!["b"]).unwrap());
        let prod = a.tensor(&b).unwrap();
        let back = prod.partial_trace(&["a"]).unwrap();
        assert_abs_diff_eq!(
            max_abs_entry(&(back.matrix() - a.matrix())),
            0.0,
            epsilon = 1e-14
        );
    }

    #[test]
    fn partial_trace_keeping_everything_is_identity() {
        let rho = psi_minus().to_density();
        let same = rho.partial_trace(&["Q2A", "Q2B"]).unwrap();
        assert_eq!(same.matrix(), rho.matrix());
    }

    #[test]
    fn fidelity_examples() {
        let psi = psi_minus();
        let rho = psi.to_density();
        assert_abs_diff_eq!(rho.fidelity_pure(&psi).unwrap(), 1.0, epsilon = 1e-12);
        let mixed = DensityMatrix::maximally_mixed(two_qubits());
        assert_abs_diff_eq!(mixed.fidelity_pure(&psi).unwrap(), 0.25, epsilon = 1e-12);
    }

    #[test]
    fn fidelity_requires_matching_spaces() {
        let psi = psi_minus();
        let other = DensityMatrix::maximally_mixed(
            CompositeSpace::qubits(vec!["Q1A", "Q1B"]).unwrap(),
        );
        assert!(matches!(
            other.fidelity_pure(&psi),
            Err(Error::SpaceMismatch)
        ));
    }

    #[test]
    fn nearest_physical_clips_and_renormalizes() {
        let sp = CompositeSpace::flat("q", 2).unwrap();
        let h = ComplexOperator::new(
            sp.clone(),
            DMatrix::from_row_slice(2, 2, &[re(1.1), ZERO, ZERO, re(-0.1)]),
        )
        .unwrap();
        let rho = nearest_physical_state(&h).unwrap();
        assert_abs_diff_eq!(rho.population(&[0]), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(rho.population(&[1]), 0.0, epsilon = 1e-12);

        let h2 = ComplexOperator::new(
            sp,
            DMatrix::from_row_slice(2, 2, &[re(0.6), ZERO, ZERO, re(0.6)]),
        )
        .unwrap();
        let rho2 = nearest_physical_state(&h2).unwrap();
        assert_abs_diff_eq!(rho2.population(&[0]), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn nearest_physical_fixes_physical_states() {
        let rho = psi_minus().to_density();
        let again = nearest_physical_state(&rho.as_operator()).unwrap();
        assert!(max_abs_entry(&(again.matrix() - rho.matrix())) < 1e-12);
    }

    #[test]
    fn nearest_physical_rejects_degenerate_input() {
        let sp = CompositeSpace::flat("q", 2).unwrap();
        let h = ComplexOperator::new(
            sp,
            DMatrix::from_row_slice(2, 2, &[re(-1.0), ZERO, ZERO, re(-2.0)]),
        )
        .unwrap();
        assert!(matches!(
            nearest_physical_state(&h),
            Err(Error::DegenerateInput)
        ));
    }

    #[test]
    fn density_matrix_validation_rejects_bad_inputs() {
        let sp = CompositeSpace::flat("q", 2).unwrap();
        // non-Hermitian
        let m = DMatrix::from_row_slice(2, 2, &[re(0.5), re(0.3), ZERO, re(0.5)]);
        assert!(matches!(
            DensityMatrix::new(sp.clone(), m),
            Err(Error::NotHermitian(_))
        ));
        // wrong trace
        let m = DMatrix::from_row_slice(2, 2, &[re(0.9), ZERO, ZERO, re(0.3)]);
        assert!(matches!(
            DensityMatrix::new(sp.clone(), m),
            Err(Error::TraceDeviation(_))
        ));
        // negative eigenvalue
        let m = DMatrix::from_row_slice(2, 2, &[re(1.1), ZERO, ZERO, re(-0.1)]);
        assert!(matches!(
            DensityMatrix::new(sp, m),
            Err(Error::NotPositive(_))
        ));
    }

    #[test]
    fn permuted_swaps_qubit_roles() {
        let sp = two_qubits();
        let eg = PureState::basis_state(sp, &[1, 0]).unwrap().to_density();
        let swapped = eg.permuted(&["Q2B", "Q2A"]).unwrap();
        assert_abs_diff_eq!(swapped.population(&[0, 1]), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn json_round_trip_and_field_names() {
        let rho = psi_minus().to_density();
        let s = rho.to_json_string();
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        for key in ["labels", "dims", "re", "im"] {
            assert!(v.get(key).is_some(), "missing field {key}");
        }
        assert_eq!(v["labels"][0], "Q2A");
        // row-major: entry (1,2) of the singlet is -1/2
        assert_abs_diff_eq!(v["re"][6].as_f64().unwrap(), -0.5, epsilon = 1e-15);
        let back = DensityMatrix::from_json_str(&s).unwrap();
        assert_abs_diff_eq!(
            max_abs_entry(&(back.matrix() - rho.matrix())),
            0.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn unitary_application_on_targets() {
        let sp = two_qubits();
        let gg = PureState::basis_state(sp, &[0, 0]).unwrap().to_density();
        let x = ComplexOperator::on_single("q", pauli_x()).unwrap();
        let out = gg.apply_unitary_on(&x, &["Q2B"]).unwrap();
        assert_abs_diff_eq!(out.population(&[0, 1]), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn mixed_fidelity_agrees_with_pure_overlap() {
        let psi = psi_minus();
        let rho = psi.to_density();
        let mixed = DensityMatrix::maximally_mixed(two_qubits());
        let f = rho.fidelity_mixed(&mixed).unwrap();
        assert_abs_diff_eq!(f, 0.25, epsilon = 1e-10);
        assert_abs_diff_eq!(rho.fidelity_mixed(&rho).unwrap(), 1.0, epsilon = 1e-10);
    }

    #[test]
    fn trace_distance_of_orthogonal_pures_is_one() {
        let sp = CompositeSpace::flat("q", 2).unwrap();
        let g = PureState::basis_state(sp.clone(), &[0]).unwrap().to_density();
        let e = PureState::basis_state(sp, &[1]).unwrap().to_density();
        assert_abs_diff_eq!(g.trace_distance(&e).unwrap(), 1.0, epsilon = 1e-12);
    }
}
