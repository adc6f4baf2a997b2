//! Projective measurement simulation with readout error and shot noise,
//! confusion-matrix readout correction, and density-matrix reconstruction
//! from the nine two-qubit tomography settings.

pub mod process;

pub use process::{chi_of_unitary, process_fidelity, process_tomography, ChiMatrix, PrepGate};

use std::collections::BTreeMap;
use std::str::FromStr;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{identity_matrix, re, rot_x, rot_y, C64, ComplexOperator};
use crate::space::CompositeSpace;
use crate::state::{nearest_physical_state, DensityMatrix};

// ---------------------------------------------------------------------------
// readout visibility
// ---------------------------------------------------------------------------

/// Per-qubit readout visibilities; the confusion matrix is
/// [[F_g, 1-F_e], [1-F_g, F_e]] acting on true (P_g, P_e).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VisibilityMatrix {
    pub f_g: f64,
    pub f_e: f64,
}

impl VisibilityMatrix {
    pub fn new(f_g: f64, f_e: f64) -> Result<Self> {
        for v in [f_g, f_e] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidParameter(format!("visibility {v} outside [0, 1]")));
            }
        }
        let det = f_g + f_e - 1.0;
        if det <= 0.0 {
            return Err(Error::SingularConfusion(det));
        }
        Ok(Self { f_g, f_e })
    }

    pub fn perfect() -> Self {
        Self { f_g: 1.0, f_e: 1.0 }
    }

    pub fn from_qubit(q: &crate::dynamics::params::QubitParams) -> Result<Self> {
        Self::new(q.f_g, q.f_e)
    }

    fn matrix(&self) -> [[f64; 2]; 2] {
        [
            [self.f_g, 1.0 - self.f_e],
            [1.0 - self.f_g, self.f_e],
        ]
    }

    fn inverse(&self) -> Result<[[f64; 2]; 2]> {
        let det = self.f_g + self.f_e - 1.0;
        if det.abs() < 1e-12 {
            return Err(Error::SingularConfusion(det));
        }
        Ok([
            [self.f_e / det, (self.f_e - 1.0) / det],
            [(self.f_g - 1.0) / det, self.f_g / det],
        ])
    }
}

fn apply_per_qubit(mats: &[[[f64; 2]; 2]], probs: &[f64]) -> Vec<f64> {
    let n = mats.len();
    let dim = 1usize << n;
    debug_assert_eq!(probs.len(), dim);
    let mut current = probs.to_vec();
    for (k, m) in mats.iter().enumerate() {
        let stride = 1usize << (n - 1 - k);
        let mut next = vec![0.0; dim];
        for idx in 0..dim {
            let bit = (idx / stride) % 2;
            let base = idx - bit * stride;
            for src in 0..2 {
                next[idx] += m[bit][src] * current[base + src * stride];
            }
        }
        current = next;
    }
    current
}

/// Push ideal probabilities through the per-qubit confusion matrices.
pub fn apply_confusion(probs: &[f64], vis: &[VisibilityMatrix]) -> Vec<f64> {
    let mats: Vec<_> = vis.iter().map(|v| v.matrix()).collect();
    apply_per_qubit(&mats, probs)
}

/// Readout correction: the exact inverse of [`apply_confusion`], followed by
/// the clipping policy (clip to [0, 1], renormalize). Returns
/// (raw, corrected) so the pre-clip values stay available.
pub fn correct_readout(
    measured: &[f64],
    vis: &[VisibilityMatrix],
) -> Result<(Vec<f64>, Vec<f64>)> {
    let mats = vis
        .iter()
        .map(|v| v.inverse())
        .collect::<Result<Vec<_>>>()?;
    let raw = apply_per_qubit(&mats, measured);
    let clipped: Vec<f64> = raw.iter().map(|p| p.clamp(0.0, 1.0)).collect();
    let total: f64 = clipped.iter().sum();
    if total <= 0.0 {
        return Err(Error::InvalidParameter("all corrected probabilities clipped to zero".into()));
    }
    Ok((raw, clipped.iter().map(|p| p / total).collect()))
}

// ---------------------------------------------------------------------------
// measurement settings
// ---------------------------------------------------------------------------

/// Tomography pulse applied to one qubit before computational readout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TomoRotation {
    I,
    XHalf,
    YHalf,
}

impl TomoRotation {
    pub const ALL: [TomoRotation; 3] = [TomoRotation::I, TomoRotation::XHalf, TomoRotation::YHalf];

    pub fn unitary(&self) -> DMatrix<C64> {
        match self {
            TomoRotation::I => identity_matrix(2),
            TomoRotation::XHalf => rot_x(std::f64::consts::FRAC_PI_2),
            TomoRotation::YHalf => rot_y(std::f64::consts::FRAC_PI_2),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            TomoRotation::I => "I",
            TomoRotation::XHalf => "X/2",
            TomoRotation::YHalf => "Y/2",
        }
    }
}

impl FromStr for TomoRotation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "I" => Ok(TomoRotation::I),
            "X/2" => Ok(TomoRotation::XHalf),
            "Y/2" => Ok(TomoRotation::YHalf),
            other => Err(Error::InvalidParameter(format!("unknown tomography pulse `{other}`"))),
        }
    }
}

/// One per-qubit choice of tomography pulses.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MeasurementSetting(pub Vec<TomoRotation>);

impl MeasurementSetting {
    pub fn names(&self) -> Vec<String> {
        self.0.iter().map(|r| r.name().to_string()).collect()
    }

    fn unitary_on(&self, space: &CompositeSpace) -> Result<ComplexOperator> {
        let mut u = ComplexOperator::on_single(space.labels()[0].clone(), self.0[0].unitary())?;
        for (k, r) in self.0.iter().enumerate().skip(1) {
            u = u.tensor(&ComplexOperator::on_single(
                space.labels()[k].clone(),
                r.unitary(),
            )?)?;
        }
        Ok(u)
    }
}

/// The full 3^n setting basis, I/X2/Y2 per qubit, in lexicographic order.
pub fn all_settings(n_qubits: usize) -> Vec<MeasurementSetting> {
    let mut out = vec![MeasurementSetting(Vec::new())];
    for _ in 0..n_qubits {
        let mut next = Vec::with_capacity(out.len() * 3);
        for s in &out {
            for r in TomoRotation::ALL {
                let mut v = s.0.clone();
                v.push(r);
                next.push(MeasurementSetting(v));
            }
        }
        out = next;
    }
    out
}

/// Born-rule bitstring probabilities after applying the setting's pulses.
pub fn born_probabilities(rho: &DensityMatrix, setting: &MeasurementSetting) -> Result<Vec<f64>> {
    if setting.0.len() != rho.space().n_subsystems() {
        return Err(Error::InvalidParameter("setting length does not match state".into()));
    }
    let u = setting.unitary_on(rho.space())?;
    let rotated = rho.apply_unitary(&u)?;
    Ok((0..rho.dim()).map(|k| rotated.matrix()[(k, k)].re.max(0.0)).collect())
}

// ---------------------------------------------------------------------------
// measurement records
// ---------------------------------------------------------------------------

/// Counts and corrected probabilities for a single setting.
#[derive(Debug, Clone)]
pub struct MeasurementRecord {
    pub setting: MeasurementSetting,
    pub shots: u64,
    /// Counts per bitstring index (g = 0, e = 1, first qubit most
    /// significant). Empty-shot records represent the infinite-shot limit.
    pub counts: Vec<u64>,
    pub measured_probs: Vec<f64>,
    /// Readout-corrected probabilities before the clipping policy.
    pub corrected_raw: Vec<f64>,
    /// Clipped and renormalized probabilities used for reconstruction.
    pub corrected_probs: Vec<f64>,
}

fn bitstring(index: usize, n: usize) -> String {
    (0..n)
        .rev()
        .map(|k| if (index >> k) & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Wire format of one record: {setting, shots, counts}.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RecordJson {
    pub setting: Vec<String>,
    pub shots: u64,
    pub counts: BTreeMap<String, u64>,
}

/// Wire format of a tomography data set: {records: [...]}.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TomographyJson {
    pub records: Vec<RecordJson>,
}

impl MeasurementRecord {
    fn from_measured(
        setting: MeasurementSetting,
        shots: u64,
        counts: Vec<u64>,
        measured: Vec<f64>,
        vis: &[VisibilityMatrix],
    ) -> Result<Self> {
        let (corrected_raw, corrected_probs) = correct_readout(&measured, vis)?;
        Ok(Self {
            setting,
            shots,
            counts,
            measured_probs: measured,
            corrected_raw,
            corrected_probs,
        })
    }

    pub fn to_json(&self) -> RecordJson {
        let n = self.setting.0.len();
        let counts = self
            .counts
            .iter()
            .enumerate()
            .map(|(i, &c)| (bitstring(i, n), c))
            .collect();
        RecordJson {
            setting: self.setting.names(),
            shots: self.shots,
            counts,
        }
    }

    pub fn from_json(j: &RecordJson, vis: &[VisibilityMatrix]) -> Result<Self> {
        let rotations = j
            .setting
            .iter()
            .map(|s| s.parse())
            .collect::<Result<Vec<TomoRotation>>>()?;
        let n = rotations.len();
        let dim = 1usize << n;
        let mut counts = vec![0u64; dim];
        for (bits, c) in &j.counts {
            let idx = usize::from_str_radix(bits, 2)
                .map_err(|_| Error::InvalidParameter(format!("bad bitstring `{bits}`")))?;
            if idx >= dim {
                return Err(Error::InvalidParameter(format!("bitstring `{bits}` out of range")));
            }
            counts[idx] = *c;
        }
        let total: u64 = counts.iter().sum();
        if total != j.shots {
            return Err(Error::InvalidParameter(format!(
                "counts sum to {total} but shots = {}",
                j.shots
            )));
        }
        if j.shots == 0 {
            return Err(Error::InvalidParameter("record with zero shots".into()));
        }
        let measured = counts.iter().map(|&c| c as f64 / j.shots as f64).collect();
        Self::from_measured(MeasurementSetting(rotations), j.shots, counts, measured, vis)
    }
}

/// Simulate one tomography setting: rotate, compute Born probabilities, push
/// them through the confusion matrices, then draw multinomial counts.
/// Deterministic for a given seed.
pub fn simulate_measurement(
    rho: &DensityMatrix,
    setting: &MeasurementSetting,
    shots: u64,
    vis: &[VisibilityMatrix],
    seed: u64,
) -> Result<MeasurementRecord> {
    if shots == 0 {
        return Err(Error::InvalidParameter("need at least one shot".into()));
    }
    let ideal = born_probabilities(rho, setting)?;
    let confused = apply_confusion(&ideal, vis);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cumulative = Vec::with_capacity(confused.len());
    let mut acc = 0.0;
    for p in &confused {
        acc += p;
        cumulative.push(acc);
    }
    let total = acc;
    let mut counts = vec![0u64; confused.len()];
    for _ in 0..shots {
        let x: f64 = rng.gen_range(0.0..total);
        let idx = cumulative.iter().position(|&c| x < c).unwrap_or(confused.len() - 1);
        counts[idx] += 1;
    }
    let measured = counts.iter().map(|&c| c as f64 / shots as f64).collect();
    MeasurementRecord::from_measured(setting.clone(), shots, counts, measured, vis)
}

/// Infinite-shot record: the measured probabilities are the exact confused
/// Born probabilities (zero counts, zero shots).
pub fn exact_measurement(
    rho: &DensityMatrix,
    setting: &MeasurementSetting,
    vis: &[VisibilityMatrix],
) -> Result<MeasurementRecord> {
    let ideal = born_probabilities(rho, setting)?;
    let confused = apply_confusion(&ideal, vis);
    let dim = confused.len();
    MeasurementRecord::from_measured(setting.clone(), 0, vec![0; dim], confused, vis)
}

// ---------------------------------------------------------------------------
// reconstruction
// ---------------------------------------------------------------------------

/// Single-qubit Paulis in the order I, X, Y, Z.
pub fn pauli_1q() -> [DMatrix<C64>; 4] {
    [
        identity_matrix(2),
        crate::operator::pauli_x(),
        crate::operator::pauli_y(),
        crate::operator::pauli_z(),
    ]
}

/// Two-qubit Pauli basis, index 4a + b for kron(P_a, P_b).
pub fn pauli_2q() -> Vec<DMatrix<C64>> {
    let p = pauli_1q();
    let mut out = Vec::with_capacity(16);
    for a in &p {
        for b in &p {
            out.push(a.kronecker(b));
        }
    }
    out
}

/// Linear-inversion state estimate from the nine two-qubit settings
/// (36 corrected probabilities, overdetermined least squares on the Pauli
/// coefficients), followed by projection onto the physical states.
pub fn reconstruct_state(records: &[MeasurementRecord]) -> Result<DensityMatrix> {
    let expected = all_settings(2);
    for s in &expected {
        if !records.iter().any(|r| r.setting == *s) {
            return Err(Error::MissingSetting(s.names().join(",")));
        }
    }
    let space = CompositeSpace::qubits(vec!["QA", "QB"])?;
    let paulis = pauli_2q();
    let n_rows = records.len() * 4;
    let mut design = nalgebra::DMatrix::<f64>::zeros(n_rows, 16);
    let mut rhs = nalgebra::DVector::<f64>::zeros(n_rows);
    for (ri, record) in records.iter().enumerate() {
        if record.setting.0.len() != 2 {
            return Err(Error::InvalidParameter("reconstruction expects two-qubit records".into()));
        }
        let u = record.setting.unitary_on(&space)?;
        for b in 0..4usize {
            // projector onto outcome b in the rotated frame: U^dag |b><b| U
            let mut proj = DMatrix::<C64>::zeros(4, 4);
            proj[(b, b)] = re(1.0);
            let m = u.matrix().adjoint() * proj * u.matrix();
            for (k, p) in paulis.iter().enumerate() {
                design[(ri * 4 + b, k)] = (&m * p).trace().re;
            }
            rhs[ri * 4 + b] = record.corrected_probs[b];
        }
    }
    let svd = design.svd(true, true);
    let min_sv = svd
        .singular_values
        .iter()
        .fold(f64::MAX, |a, &b| a.min(b));
    if min_sv < 1e-10 {
        return Err(Error::InvalidParameter(format!(
            "rank-deficient tomography design matrix (min singular value {min_sv:.3e})"
        )));
    }
    let coeffs = svd
        .solve(&rhs, 1e-12)
        .map_err(|e| Error::InvalidParameter(format!("least squares failed: {e}")))?;
    let mut estimate = DMatrix::<C64>::zeros(4, 4);
    for (k, p) in paulis.iter().enumerate() {
        estimate += p.map(|z| z * re(coeffs[k]));
    }
    nearest_physical_state(&ComplexOperator::new(space, estimate)?)
}

/// Full simulated tomography pass: measure all nine settings at the given
/// shot count and reconstruct. Per-setting seeds derive from `seed`.
pub fn simulate_state_tomography(
    rho: &DensityMatrix,
    shots: u64,
    vis: &[VisibilityMatrix],
    seed: u64,
) -> Result<(Vec<MeasurementRecord>, DensityMatrix)> {
    let mut records = Vec::new();
    for (k, setting) in all_settings(2).iter().enumerate() {
        let record = if shots == 0 {
            exact_measurement(rho, setting, vis)?
        } else {
            simulate_measurement(
                rho,
                setting,
                shots,
                vis,
                seed.wrapping_add(0x9E37_79B9_u64.wrapping_mul(k as u64 + 1)),
            )?
        };
        records.push(record);
    }
    let estimate = reconstruct_state(&records)?;
    Ok((records, estimate))
}
