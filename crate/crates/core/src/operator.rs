//! Dense complex operators over labeled composite spaces, plus the small
//! matrix zoo (Paulis, ladder operators) everything else is assembled from.

use nalgebra::{Complex, DMatrix};

use crate::error::{Error, Result};
use crate::space::CompositeSpace;

pub type C64 = Complex<f64>;

pub const ZERO: C64 = Complex::new(0.0, 0.0);
pub const ONE: C64 = Complex::new(1.0, 0.0);
pub const I: C64 = Complex::new(0.0, 1.0);

#[inline]
pub fn re(x: f64) -> C64 {
    Complex::new(x, 0.0)
}

// ---------------------------------------------------------------------------
// raw matrix builders
// ---------------------------------------------------------------------------

pub fn identity_matrix(dim: usize) -> DMatrix<C64> {
    DMatrix::identity(dim, dim)
}

pub fn pauli_x() -> DMatrix<C64> {
    DMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])
}

pub fn pauli_y() -> DMatrix<C64> {
    DMatrix::from_row_slice(2, 2, &[ZERO, -I, I, ZERO])
}

pub fn pauli_z() -> DMatrix<C64> {
    DMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE])
}

/// Lowering operator |g><e| of a two-level system.
pub fn sigma_minus() -> DMatrix<C64> {
    DMatrix::from_row_slice(2, 2, &[ZERO, ONE, ZERO, ZERO])
}

pub fn sigma_plus() -> DMatrix<C64> {
    sigma_minus().transpose()
}

/// Bosonic annihilation operator truncated to `dim` levels.
pub fn annihilation(dim: usize) -> DMatrix<C64> {
    let mut m = DMatrix::zeros(dim, dim);
    for n in 1..dim {
        m[(n - 1, n)] = re((n as f64).sqrt());
    }
    m
}

/// Number operator diag(0, 1, ..., dim-1).
pub fn number_operator(dim: usize) -> DMatrix<C64> {
    DMatrix::from_fn(dim, dim, |r, c| if r == c { re(r as f64) } else { ZERO })
}

/// Rotation by `theta` about the x axis of a two-level system.
pub fn rot_x(theta: f64) -> DMatrix<C64> {
    let (s, c) = (theta / 2.0).sin_cos();
    DMatrix::from_row_slice(2, 2, &[re(c), -I * s, -I * s, re(c)])
}

/// Rotation by `theta` about the y axis of a two-level system.
pub fn rot_y(theta: f64) -> DMatrix<C64> {
    let (s, c) = (theta / 2.0).sin_cos();
    DMatrix::from_row_slice(2, 2, &[re(c), re(-s), re(s), re(c)])
}

pub fn kron(a: &DMatrix<C64>, b: &DMatrix<C64>) -> DMatrix<C64> {
    a.kronecker(b)
}

pub(crate) fn max_abs_entry(m: &DMatrix<C64>) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub(crate) fn hermiticity_deviation(m: &DMatrix<C64>) -> f64 {
    max_abs_entry(&(m - m.adjoint()))
}

// ---------------------------------------------------------------------------
// ComplexOperator
// ---------------------------------------------------------------------------

/// A square dense operator tied to a [`CompositeSpace`].
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexOperator {
    space: CompositeSpace,
    m: DMatrix<C64>,
}

impl ComplexOperator {
    pub fn new(space: CompositeSpace, m: DMatrix<C64>) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() != space.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                got: m.nrows(),
            });
        }
        Ok(Self { space, m })
    }

    pub fn identity(space: &CompositeSpace) -> Self {
        Self {
            space: space.clone(),
            m: identity_matrix(space.dim()),
        }
    }

    /// Single-subsystem operator over a fresh one-label space.
    pub fn on_single<L: Into<String>>(label: L, m: DMatrix<C64>) -> Result<Self> {
        let space = CompositeSpace::flat(label, m.nrows())?;
        Self::new(space, m)
    }

    pub fn space(&self) -> &CompositeSpace {
        &self.space
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.m
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.m
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn adjoint(&self) -> Self {
        Self {
            space: self.space.clone(),
            m: self.m.adjoint(),
        }
    }

    pub fn trace(&self) -> C64 {
        self.m.trace()
    }

    pub fn scaled(&self, factor: C64) -> Self {
        Self {
            space: self.space.clone(),
            m: self.m.map(|z| z * factor),
        }
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        hermiticity_deviation(&self.m)
    }

    pub fn is_hermitian(&self, tolerance: f64) -> bool {
        self.hermiticity_deviation() <= tolerance
    }

    pub fn unitarity_deviation(&self) -> f64 {
        let d = self.dim();
        max_abs_entry(&(self.m.adjoint() * &self.m - identity_matrix(d)))
    }

    pub fn is_unitary(&self, tolerance: f64) -> bool {
        self.unitarity_deviation() <= tolerance
    }

    /// Kronecker product; the left factor is the slower-varying index and the
    /// result space is the concatenation of the input spaces.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let space = self.space.concat(&other.space)?;
        Ok(Self {
            space,
            m: self.m.kronecker(&other.m),
        })
    }

    /// Embed this operator so that it acts on `target_labels` of `full_space`
    /// (in the order given) and as the identity elsewhere. Targets need not
    /// be adjacent or in space order.
    pub fn embed<S: AsRef<str>>(
        &self,
        target_labels: &[S],
        full_space: &CompositeSpace,
    ) -> Result<Self> {
        if target_labels.len() != self.space.n_subsystems() {
            return Err(Error::InvalidParameter(format!(
                "operator has {} subsystems but {} target labels were given",
                self.space.n_subsystems(),
                target_labels.len()
            )));
        }
        let positions = full_space.positions(target_labels)?;
        for (k, &p) in positions.iter().enumerate() {
            if full_space.dims()[p] != self.space.dims()[k] {
                return Err(Error::DimensionMismatch {
                    expected: full_space.dims()[p],
                    got: self.space.dims()[k],
                });
            }
        }
        let dim = full_space.dim();
        let target_space = full_space.subspace(target_labels)?;
        let is_target: Vec<bool> = (0..full_space.n_subsystems())
            .map(|p| positions.contains(&p))
            .collect();

        // For every full-space index, split into (target part, spectator part).
        let mut tpart = vec![0usize; dim];
        let mut rpart = vec![0usize; dim];
        for idx in 0..dim {
            let multi = full_space.multi_index(idx);
            let tmulti: Vec<usize> = positions.iter().map(|&p| multi[p]).collect();
            tpart[idx] = target_space.flat_index(&tmulti);
            let mut r = 0usize;
            for (p, &m) in multi.iter().enumerate() {
                if !is_target[p] {
                    r = r * full_space.dims()[p] + m;
                }
            }
            rpart[idx] = r;
        }

        let mut out = DMatrix::zeros(dim, dim);
        for row in 0..dim {
            for col in 0..dim {
                if rpart[row] == rpart[col] {
                    out[(row, col)] = self.m[(tpart[row], tpart[col])];
                }
            }
        }
        Ok(Self {
            space: full_space.clone(),
            m: out,
        })
    }
}

impl std::ops::Add for &ComplexOperator {
    type Output = ComplexOperator;
    fn add(self, rhs: Self) -> ComplexOperator {
        assert_eq!(self.space, rhs.space, "operator spaces differ");
        ComplexOperator {
            space: self.space.clone(),
            m: &self.m + &rhs.m,
        }
    }
}

impl std::ops::Sub for &ComplexOperator {
    type Output = ComplexOperator;
    fn sub(self, rhs: Self) -> ComplexOperator {
        assert_eq!(self.space, rhs.space, "operator spaces differ");
        ComplexOperator {
            space: self.space.clone(),
            m: &self.m - &rhs.m,
        }
    }
}

impl std::ops::Mul for &ComplexOperator {
    type Output = ComplexOperator;
    fn mul(self, rhs: Self) -> ComplexOperator {
        assert_eq!(self.space, rhs.space, "operator spaces differ");
        ComplexOperator {
            space: self.space.clone(),
            m: &self.m * &rhs.m,
        }
    }
}

/// Free-function form of [`ComplexOperator::tensor`].
pub fn tensor_product(a: &ComplexOperator, b: &ComplexOperator) -> Result<ComplexOperator> {
    a.tensor(b)
}

/// Hermitian eigendecomposition with eigenvalues sorted ascending.
///
/// Returns `(eigenvalues, eigenvectors)` with eigenvectors as columns.
pub(crate) fn hermitian_eigen(m: &DMatrix<C64>) -> (Vec<f64>, DMatrix<C64>) {
    let se = m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..se.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| se.eigenvalues[a].total_cmp(&se.eigenvalues[b]));
    let vals: Vec<f64> = order.iter().map(|&k| se.eigenvalues[k]).collect();
    let vecs = DMatrix::from_fn(m.nrows(), m.ncols(), |r, c| se.eigenvectors[(r, order[c])]);
    (vals, vecs)
}

/// Smallest eigenvalue of a Hermitian matrix.
pub(crate) fn min_eigenvalue(m: &DMatrix<C64>) -> f64 {
    hermitian_eigen(m).0[0]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tol;
    use approx::assert_abs_diff_eq;

    fn two_qubits() -> CompositeSpace {
        CompositeSpace::qubits(vec!["Q2A", "Q2B"]).unwrap()
    }

    #[test]
    fn identity_tensor_identity() {
        let a = ComplexOperator::on_single("a", identity_matrix(2)).unwrap();
        let b = ComplexOperator::on_single("b", identity_matrix(2)).unwrap();
        let t = a.tensor(&b).unwrap();
        assert_eq!(t.matrix(), &identity_matrix(4));
        assert_eq!(t.space().dim(), 4);
    }

    #[test]
    fn tensor_rejects_duplicate_labels() {
        let a = ComplexOperator::on_single("a", pauli_x()).unwrap();
        let err = a.tensor(&a).unwrap_err();
        assert!(matches!(err, Error::DuplicateLabel(_)));
    }

    #[test]
    fn bit_flip_on_first_qubit() {
        // X (x) I applied to |ge> gives |ee> with g = 0, e = 1.
        let x = ComplexOperator::on_single("Q2A", pauli_x()).unwrap();
        let idm = ComplexOperator::on_single("Q2B", identity_matrix(2)).unwrap();
        let xi = x.tensor(&idm).unwrap();
        let ge = nalgebra::DVector::from_row_slice(&[ZERO, ONE, ZERO, ZERO]);
        let out = xi.matrix() * ge;
        assert_eq!(out[3], ONE);
        assert_eq!(out[1], ZERO);
    }

    #[test]
    fn embed_on_each_qubit() {
        let sp = two_qubits();
        let x = ComplexOperator::on_single("q", pauli_x()).unwrap();
        let on_a = x.embed(&["Q2A"], &sp).unwrap();
        let on_b = x.embed(&["Q2B"], &sp).unwrap();
        assert_eq!(on_a.matrix(), &kron(&pauli_x(), &identity_matrix(2)));
        assert_eq!(on_b.matrix(), &kron(&identity_matrix(2), &pauli_x()));
    }

    #[test]
    fn embed_permutes_non_adjacent_targets() {
        // CZ embedded on (Q1A, Q2A) of a three-qubit space must flip the sign
        // of |eeg> only; check against a matrix built directly in the 8-dim
        // space by enumerating basis states.
        let sp = CompositeSpace::qubits(vec!["Q1A", "Q2A", "Q2B"]).unwrap();
        let cz = DMatrix::from_fn(4, 4, |r, c| {
            if r == c {
                if r == 3 { -ONE } else { ONE }
            } else {
                ZERO
            }
        });
        let cz_op = ComplexOperator::new(CompositeSpace::qubits(vec!["c", "t"]).unwrap(), cz)
            .unwrap();
        let embedded = cz_op.embed(&["Q1A", "Q2A"], &sp).unwrap();

        let mut direct = DMatrix::<C64>::zeros(8, 8);
        for idx in 0..8usize {
            let (q1a, q2a) = (idx >> 2 & 1, idx >> 1 & 1);
            let sign = if q1a == 1 && q2a == 1 { -ONE } else { ONE };
            direct[(idx, idx)] = sign;
        }
        assert_eq!(embedded.matrix(), &direct);

        // |eeg> has index 110 = 6
        let mut eeg = nalgebra::DVector::<C64>::zeros(8);
        eeg[6] = ONE;
        let out = embedded.matrix() * &eeg;
        assert_eq!(out[6], -ONE);
    }

    #[test]
    fn embed_reversed_target_order_swaps_roles() {
        // Embedding sigma+ (x) sigma- with swapped target labels must equal
        // sigma- (x) sigma+ on the space-ordered pair.
        let sp = two_qubits();
        let op = ComplexOperator::new(
            CompositeSpace::qubits(vec!["u", "v"]).unwrap(),
            kron(&sigma_plus(), &sigma_minus()),
        )
        .unwrap();
        let swapped = op.embed(&["Q2B", "Q2A"], &sp).unwrap();
        assert_eq!(
            swapped.matrix(),
            &kron(&sigma_minus(), &sigma_plus())
        );
    }

    #[test]
    fn embed_unknown_label_errors() {
        let sp = two_qubits();
        let x = ComplexOperator::on_single("q", pauli_x()).unwrap();
        assert!(matches!(
            x.embed(&["nope"], &sp),
            Err(Error::UnknownLabel(_))
        ));
    }

    #[test]
    fn tensor_is_associative() {
        let a = ComplexOperator::on_single("a", pauli_x()).unwrap();
        let b = ComplexOperator::on_single("b", pauli_y()).unwrap();
        let c = ComplexOperator::on_single("c", annihilation(3)).unwrap();
        let left = a.tensor(&b).unwrap().tensor(&c).unwrap();
        let right = a.tensor(&b.tensor(&c).unwrap()).unwrap();
        let diff = max_abs_entry(&(left.matrix() - right.matrix()));
        assert!(diff < 1e-12);
        assert_eq!(left.space(), right.space());
    }

    #[test]
    fn rotations_are_unitary() {
        for theta in [0.3, std::f64::consts::FRAC_PI_2, 2.2] {
            for m in [rot_x(theta), rot_y(theta)] {
                let op = ComplexOperator::on_single("q", m).unwrap();
                assert!(op.is_unitary(tol::UNITARITY));
            }
        }
    }

    #[test]
    fn hermitian_eigen_sorted_and_consistent() {
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[re(2.0), C64::new(0.0, -1.0), I, re(3.0)],
        );
        let (vals, vecs) = hermitian_eigen(&m);
        assert!(vals[0] <= vals[1]);
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            2,
            vals.iter().map(|&v| re(v)),
        ));
        let rec = &vecs * d * vecs.adjoint();
        assert_abs_diff_eq!(max_abs_entry(&(rec - m)), 0.0, epsilon = 1e-12);
    }
}
