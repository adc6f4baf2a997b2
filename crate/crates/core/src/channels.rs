//! Kraus-operator error channels and the analytic one-sided / combined error
//! states of a cable-distributed Bell pair.
//!
//! Wherever a closed form exists, direct Kraus application (`apply_channel`)
//! is the ground truth; the closed forms are checked against it rather than
//! the other way around. See [`crate::discrepancy`] for the places where the
//! two routes disagree in the reference material.

use nalgebra::DMatrix;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::operator::{
    identity_matrix, max_abs_entry, pauli_x, pauli_z, re, C64, ComplexOperator, ONE, ZERO,
};
use crate::space::CompositeSpace;
use crate::state::{DensityMatrix, PureState};
use crate::tol;

/// Canonical labels for an abstract two-qubit Bell pair, node A first.
pub const BELL_LABELS: [&str; 2] = ["QA", "QB"];

pub fn bell_space() -> CompositeSpace {
    CompositeSpace::qubits(vec![BELL_LABELS[0], BELL_LABELS[1]]).expect("static space")
}

// ---------------------------------------------------------------------------
// Bell states
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BellLabel {
    PsiPlus,
    PsiMinus,
    PhiPlus,
    PhiMinus,
}

impl FromStr for BellLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "psi+" | "psi_plus" => Ok(Self::PsiPlus),
            "psi-" | "psi_minus" => Ok(Self::PsiMinus),
            "phi+" | "phi_plus" => Ok(Self::PhiPlus),
            "phi-" | "phi_minus" => Ok(Self::PhiMinus),
            other => Err(Error::UnknownBellLabel(other.to_string())),
        }
    }
}

impl std::fmt::Display for BellLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Self::PsiPlus => "psi+",
            Self::PsiMinus => "psi-",
            Self::PhiPlus => "phi+",
            Self::PhiMinus => "phi-",
        };
        write!(f, "{s}")
    }
}

/// One of the four Bell states on the given two-qubit space:
/// psi± = (|eg> ± |ge>)/sqrt(2), phi± = (|gg> ± |ee>)/sqrt(2).
pub fn bell_state_on(label: BellLabel, space: &CompositeSpace) -> Result<PureState> {
    if space.dims() != [2, 2] {
        return Err(Error::InvalidParameter(
            "Bell states need a two-qubit space".into(),
        ));
    }
    let r = re(std::f64::consts::FRAC_1_SQRT_2);
    let amps = match label {
        BellLabel::PsiPlus => [ZERO, r, r, ZERO],
        BellLabel::PsiMinus => [ZERO, -r, r, ZERO],
        BellLabel::PhiPlus => [r, ZERO, ZERO, r],
        BellLabel::PhiMinus => [r, ZERO, ZERO, -r],
    };
    PureState::new(space.clone(), nalgebra::DVector::from_row_slice(&amps))
}

/// Bell state on the canonical pair labels.
pub fn bell_state(label: BellLabel) -> PureState {
    bell_state_on(label, &bell_space()).expect("canonical space is a qubit pair")
}

// ---------------------------------------------------------------------------
// KrausChannel
// ---------------------------------------------------------------------------

/// A finite operator-sum channel; completeness sum E_i^dag E_i = I is
/// enforced at construction.
#[derive(Debug, Clone)]
pub struct KrausChannel {
    dim: usize,
    operators: Vec<ComplexOperator>,
}

impl KrausChannel {
    pub fn new(dim: usize, matrices: Vec<DMatrix<C64>>) -> Result<Self> {
        let ch = Self::new_unchecked(dim, matrices)?;
        let report = channel_validate(&ch);
        if !report.pass {
            return Err(Error::IncompleteChannel(report.max_deviation));
        }
        Ok(ch)
    }

    /// Skips the completeness check; meant for building deliberately broken
    /// channels to exercise the validation report.
    pub fn new_unchecked(dim: usize, matrices: Vec<DMatrix<C64>>) -> Result<Self> {
        if matrices.is_empty() {
            return Err(Error::InvalidParameter("channel needs at least one operator".into()));
        }
        let operators = matrices
            .into_iter()
            .map(|m| {
                if m.nrows() != dim || m.ncols() != dim {
                    return Err(Error::DimensionMismatch {
                        expected: dim,
                        got: m.nrows(),
                    });
                }
                ComplexOperator::on_single("k", m)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { dim, operators })
    }

    pub fn identity(dim: usize) -> Self {
        Self::new(dim, vec![identity_matrix(dim)]).expect("identity is complete")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn operators(&self) -> &[ComplexOperator] {
        &self.operators
    }
}

/// Completeness report for a channel: max entry deviation of
/// sum E_i^dag E_i from the identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelReport {
    pub max_deviation: f64,
    pub pass: bool,
}

pub fn channel_validate(ch: &KrausChannel) -> ChannelReport {
    let mut acc = DMatrix::<C64>::zeros(ch.dim, ch.dim);
    for op in &ch.operators {
        acc += op.matrix().adjoint() * op.matrix();
    }
    let max_deviation = max_abs_entry(&(acc - identity_matrix(ch.dim)));
    ChannelReport {
        max_deviation,
        pass: max_deviation <= tol::CHANNEL_COMPLETENESS,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChannelKind {
    BitFlip,
    PhaseFlip,
    AmplitudeDamping,
}

impl FromStr for ChannelKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bit_flip" => Ok(Self::BitFlip),
            "phase_flip" => Ok(Self::PhaseFlip),
            "amplitude_damping" => Ok(Self::AmplitudeDamping),
            other => Err(Error::InvalidParameter(format!("unknown channel kind `{other}`"))),
        }
    }
}

/// The three single-qubit error channels, each with exactly two operators:
/// bit flip {sqrt(1-p) I, sqrt(p) X}, phase flip {sqrt(1-p) I, sqrt(p) Z},
/// amplitude damping {diag(1, sqrt(1-p)), sqrt(p) |g><e|}.
pub fn make_channel(kind: ChannelKind, p: f64) -> Result<KrausChannel> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("p = {p} outside [0, 1]")));
    }
    let ops = match kind {
        ChannelKind::BitFlip => vec![
            identity_matrix(2).map(|z| z * re((1.0 - p).sqrt())),
            pauli_x().map(|z| z * re(p.sqrt())),
        ],
        ChannelKind::PhaseFlip => vec![
            identity_matrix(2).map(|z| z * re((1.0 - p).sqrt())),
            pauli_z().map(|z| z * re(p.sqrt())),
        ],
        ChannelKind::AmplitudeDamping => vec![
            DMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, re((1.0 - p).sqrt())]),
            DMatrix::from_row_slice(2, 2, &[ZERO, re(p.sqrt()), ZERO, ZERO]),
        ],
    };
    KrausChannel::new(2, ops)
}

// ---------------------------------------------------------------------------
// channel application
// ---------------------------------------------------------------------------

impl DensityMatrix {
    /// Operator-sum application `rho' = sum_i E_i rho E_i^dag`, with the
    /// channel acting independently on each named target subsystem. Trace
    /// preservation is verified after the fact.
    pub fn apply_channel<S: AsRef<str>>(
        &self,
        ch: &KrausChannel,
        targets: &[S],
    ) -> Result<DensityMatrix> {
        if targets.is_empty() {
            return Err(Error::InvalidParameter("no channel targets given".into()));
        }
        let mut current = self.matrix().clone();
        for t in targets {
            let embedded: Vec<DMatrix<C64>> = ch
                .operators()
                .iter()
                .map(|op| {
                    op.embed(&[t.as_ref()], self.space())
                        .map(ComplexOperator::into_matrix)
                })
                .collect::<Result<Vec<_>>>()?;
            let mut next = DMatrix::<C64>::zeros(current.nrows(), current.ncols());
            for e in &embedded {
                next += e * &current * e.adjoint();
            }
            current = next;
        }
        let drift = (current.trace().re - self.trace()).abs();
        if drift > tol::TRACE {
            return Err(Error::TraceDeviation(drift));
        }
        DensityMatrix::new(self.space().clone(), current)
    }
}

/// Free-function form of [`DensityMatrix::apply_channel`].
pub fn apply_channel<S: AsRef<str>>(
    rho: &DensityMatrix,
    ch: &KrausChannel,
    targets: &[S],
) -> Result<DensityMatrix> {
    rho.apply_channel(ch, targets)
}

// ---------------------------------------------------------------------------
// analytic error states
// ---------------------------------------------------------------------------

/// Error-model strengths: `p` for a single channel, and the damping / phase
/// fractions of the combined impure-Bell model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorParams {
    pub p: f64,
    pub eps_damping: f64,
    pub eps_phase: f64,
}

impl ErrorParams {
    pub fn new(p: f64, eps_damping: f64, eps_phase: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter(format!("p = {p} outside [0, 1]")));
        }
        if !(0.0..0.5).contains(&eps_damping) {
            return Err(Error::InvalidParameter(format!(
                "eps_damping = {eps_damping} outside [0, 0.5)"
            )));
        }
        if !(0.0..0.5).contains(&eps_phase) {
            return Err(Error::InvalidParameter(format!(
                "eps_phase = {eps_phase} outside [0, 0.5)"
            )));
        }
        Ok(Self { p, eps_damping, eps_phase })
    }

    pub fn combined(eps_damping: f64, eps_phase: f64) -> Result<Self> {
        Self::new(0.0, eps_damping, eps_phase)
    }
}

/// psi- Bell pair with the chosen channel applied to qubit B only, computed
/// by direct Kraus application.
pub fn one_sided_bell_error(kind: ChannelKind, p: f64) -> Result<DensityMatrix> {
    let rho = bell_state(BellLabel::PsiMinus).to_density();
    rho.apply_channel(&make_channel(kind, p)?, &[BELL_LABELS[1]])
}

/// Closed-form prediction for [`one_sided_bell_error`]: a (1-p, p) mixture of
/// psi- and the flipped Bell state for the flip channels, and the standard
/// damped-pair matrix for amplitude damping. Direct Kraus application is the
/// ground truth this is tested against.
pub fn one_sided_error_mixture(kind: ChannelKind, p: f64) -> Result<DMatrix<C64>> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("p = {p} outside [0, 1]")));
    }
    let proj = |label: BellLabel| bell_state(label).to_density().matrix().clone();
    let m = match kind {
        ChannelKind::BitFlip => {
            proj(BellLabel::PsiMinus).map(|z| z * re(1.0 - p))
                + proj(BellLabel::PhiMinus).map(|z| z * re(p))
        }
        ChannelKind::PhaseFlip => {
            proj(BellLabel::PsiMinus).map(|z| z * re(1.0 - p))
                + proj(BellLabel::PsiPlus).map(|z| z * re(p))
        }
        ChannelKind::AmplitudeDamping => amplitude_damped_bell_matrix(p),
    };
    Ok(m)
}

/// The damped-pair matrix in the (gg, ge, eg, ee) basis:
/// (1/2) [[p, 0, 0, 0], [0, 1-p, -sqrt(1-p), 0], [0, -sqrt(1-p), 1, 0], [0, 0, 0, 0]].
pub fn amplitude_damped_bell_matrix(p: f64) -> DMatrix<C64> {
    let s = (1.0 - p).sqrt();
    DMatrix::from_row_slice(
        4,
        4,
        &[
            re(p / 2.0), ZERO, ZERO, ZERO,
            ZERO, re((1.0 - p) / 2.0), re(-s / 2.0), ZERO,
            ZERO, re(-s / 2.0), re(0.5), ZERO,
            ZERO, ZERO, ZERO, ZERO,
        ],
    )
}

/// Fidelity of the one-sided amplitude-damped pair to psi-:
/// (2 - p + 2 sqrt(1-p)) / 4.
pub fn amplitude_damped_bell_fidelity(p: f64) -> f64 {
    (2.0 - p + 2.0 * (1.0 - p).sqrt()) / 4.0
}

/// Impure-Bell model with both phase and damping errors, as a raw operator:
/// (1 - eps_p) |psi-><psi-| + eps_p |psi+><psi+| + eps_d (|gg><gg| - |ge><ge|).
///
/// The result is Hermitian and unit-trace but only positive semidefinite for
/// eps_d <= 2 eps_p (1 - eps_p); use [`combined_error_bell`] when a physical
/// state is required.
pub fn combined_error_bell_matrix(params: &ErrorParams) -> ComplexOperator {
    let (ed, ep) = (params.eps_damping, params.eps_phase);
    let psi_m = bell_state(BellLabel::PsiMinus).to_density();
    let psi_p = bell_state(BellLabel::PsiPlus).to_density();
    let mut m = psi_m.matrix().map(|z| z * re(1.0 - ep))
        + psi_p.matrix().map(|z| z * re(ep));
    m[(0, 0)] += re(ed);
    m[(1, 1)] -= re(ed);
    ComplexOperator::new(bell_space(), m).expect("4x4 on a qubit pair")
}

/// Physical-state version of [`combined_error_bell_matrix`]; fails with an
/// explicit non-physical error when the parameter combination produces an
/// eigenvalue below the PSD floor.
pub fn combined_error_bell(params: &ErrorParams) -> Result<DensityMatrix> {
    let op = combined_error_bell_matrix(params);
    DensityMatrix::new(op.space().clone(), op.matrix().clone())
}

/// Fidelity of the combined-error state to psi-: 1 - eps_d/2 - eps_p.
pub fn combined_error_bell_fidelity(params: &ErrorParams) -> f64 {
    1.0 - params.eps_damping / 2.0 - params.eps_phase
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn bell_states_match_their_definitions() {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let pm = bell_state(BellLabel::PsiMinus);
        assert_abs_diff_eq!(pm.amplitudes()[1].re, -r, epsilon = 1e-15);
        assert_abs_diff_eq!(pm.amplitudes()[2].re, r, epsilon = 1e-15);
        let fp = bell_state(BellLabel::PhiPlus);
        assert_abs_diff_eq!(fp.amplitudes()[0].re, r, epsilon = 1e-15);
        assert_abs_diff_eq!(fp.amplitudes()[3].re, r, epsilon = 1e-15);
    }

    #[test]
    fn bell_states_are_orthonormal() {
        let labels = [
            BellLabel::PsiPlus,
            BellLabel::PsiMinus,
            BellLabel::PhiPlus,
            BellLabel::PhiMinus,
        ];
        for (i, a) in labels.iter().enumerate() {
            for (j, b) in labels.iter().enumerate() {
                let ip = bell_state(*a)
                    .amplitudes()
                    .dotc(bell_state(*b).amplitudes());
                let expect = if i == j { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(ip.norm(), expect, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn unknown_bell_label_errors() {
        assert!(matches!(
            "psi*".parse::<BellLabel>(),
            Err(Error::UnknownBellLabel(_))
        ));
    }

    #[test]
    fn channels_are_complete_across_p() {
        for kind in [
            ChannelKind::BitFlip,
            ChannelKind::PhaseFlip,
            ChannelKind::AmplitudeDamping,
        ] {
            for k in 0..=20 {
                let p = (k as f64 * 0.05).min(1.0);
                let ch = make_channel(kind, p).unwrap();
                assert!(channel_validate(&ch).pass, "{kind:?} at p={p}");
            }
        }
    }

    #[test]
    fn amplitude_damping_operators_are_literal() {
        let p = 0.37;
        let ch = make_channel(ChannelKind::AmplitudeDamping, p).unwrap();
        let e0 = ch.operators()[0].matrix();
        let e1 = ch.operators()[1].matrix();
        assert_eq!(e0[(0, 0)], ONE);
        assert_abs_diff_eq!(e0[(1, 1)].re, (1.0 - p).sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(e1[(0, 1)].re, p.sqrt(), epsilon = 1e-15);
        assert_eq!(e1[(1, 0)], ZERO);
        assert_eq!(e1[(1, 1)], ZERO);
    }

    #[test]
    fn bit_flip_p0_acts_as_identity() {
        let rho = bell_state(BellLabel::PsiMinus).to_density();
        let out = rho
            .apply_channel(&make_channel(ChannelKind::BitFlip, 0.0).unwrap(), &["QB"])
            .unwrap();
        assert!(max_abs_entry(&(out.matrix() - rho.matrix())) < 1e-15);
    }

    #[test]
    fn phase_flip_p1_acts_as_z() {
        let plus = PureState::normalized(
            CompositeSpace::flat("q", 2).unwrap(),
            nalgebra::DVector::from_row_slice(&[ONE, ONE]),
        )
        .unwrap()
        .to_density();
        let out = plus
            .apply_channel(&make_channel(ChannelKind::PhaseFlip, 1.0).unwrap(), &["q"])
            .unwrap();
        // Z|+><+|Z has off-diagonals flipped in sign
        assert_abs_diff_eq!(out.matrix()[(0, 1)].re, -0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(out.matrix()[(0, 0)].re, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn full_damping_on_b_splits_singlet() {
        // p = 1 on qubit B: (1/2)(|eg><eg| + |gg><gg|), by applying the two
        // Kraus terms to the singlet by hand.
        let rho = bell_state(BellLabel::PsiMinus).to_density();
        let out = rho
            .apply_channel(
                &make_channel(ChannelKind::AmplitudeDamping, 1.0).unwrap(),
                &["QB"],
            )
            .unwrap();
        assert_abs_diff_eq!(out.population(&[0, 0]), 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(out.population(&[1, 0]), 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(out.entry(&[0, 1], &[1, 0]).norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn damped_pair_matches_closed_form_matrix() {
        let p = 0.3;
        let out = one_sided_bell_error(ChannelKind::AmplitudeDamping, p).unwrap();
        let expect = amplitude_damped_bell_matrix(p);
        assert!(max_abs_entry(&(out.matrix() - expect)) < 1e-14);
        assert_abs_diff_eq!(out.population(&[0, 0]), p / 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(
            out.entry(&[0, 1], &[1, 0]).re,
            -(1.0 - p).sqrt() / 2.0,
            epsilon = 1e-14
        );
    }

    #[test]
    fn kraus_and_mixture_routes_agree_on_a_grid() {
        for kind in [
            ChannelKind::BitFlip,
            ChannelKind::PhaseFlip,
            ChannelKind::AmplitudeDamping,
        ] {
            for k in 0..=20 {
                let p = k as f64 * 0.05;
                let kraus = one_sided_bell_error(kind, p).unwrap();
                let mixture = one_sided_error_mixture(kind, p).unwrap();
                let diff = max_abs_entry(&(kraus.matrix() - mixture));
                assert!(diff < 1e-12, "{kind:?} p={p}: diff {diff:e}");
            }
        }
    }

    #[test]
    fn bit_flip_output_lives_in_psi_minus_phi_minus_plane() {
        // Brute-force projection onto all four Bell states resolves the
        // mixture weights: (1-p) on psi-, p on phi-, nothing elsewhere.
        let p = 0.25;
        let out = one_sided_bell_error(ChannelKind::BitFlip, p).unwrap();
        let weight = |l: BellLabel| out.fidelity_pure(&bell_state(l)).unwrap();
        assert_abs_diff_eq!(weight(BellLabel::PsiMinus), 1.0 - p, epsilon = 1e-12);
        assert_abs_diff_eq!(weight(BellLabel::PhiMinus), p, epsilon = 1e-12);
        assert_abs_diff_eq!(weight(BellLabel::PsiPlus), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(weight(BellLabel::PhiPlus), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn damped_fidelity_formula_on_grid() {
        let psi = bell_state(BellLabel::PsiMinus);
        for k in 0..=20 {
            let p = k as f64 * 0.05;
            let out = one_sided_bell_error(ChannelKind::AmplitudeDamping, p).unwrap();
            let f = out.fidelity_pure(&psi).unwrap();
            assert_abs_diff_eq!(f, amplitude_damped_bell_fidelity(p), epsilon = 1e-12);
        }
    }

    #[test]
    fn any_kind_at_p0_returns_singlet() {
        let rho = bell_state(BellLabel::PsiMinus).to_density();
        for kind in [
            ChannelKind::BitFlip,
            ChannelKind::PhaseFlip,
            ChannelKind::AmplitudeDamping,
        ] {
            let out = one_sided_bell_error(kind, 0.0).unwrap();
            assert!(max_abs_entry(&(out.matrix() - rho.matrix())) < 1e-15);
        }
    }

    #[test]
    fn combined_error_state_properties() {
        let zero = ErrorParams::combined(0.0, 0.0).unwrap();
        let rho = combined_error_bell(&zero).unwrap();
        let psi = bell_state(BellLabel::PsiMinus);
        assert_abs_diff_eq!(rho.fidelity_pure(&psi).unwrap(), 1.0, epsilon = 1e-14);

        // physical combination: eps_d <= 2 eps_p (1 - eps_p)
        let params = ErrorParams::combined(0.05, 0.05).unwrap();
        let rho = combined_error_bell(&params).unwrap();
        assert_abs_diff_eq!(rho.trace(), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(
            rho.fidelity_pure(&psi).unwrap(),
            combined_error_bell_fidelity(&params),
            epsilon = 1e-12
        );
    }

    #[test]
    fn nonphysical_combination_is_rejected_but_raw_fidelity_matches() {
        // eps_d = 0.1, eps_p = 0.05 has a negative eigenvalue, so the gated
        // constructor must fail; the raw operator still evaluates the
        // fidelity expression 1 - eps_d/2 - eps_p = 0.90.
        let params = ErrorParams::combined(0.1, 0.05).unwrap();
        assert!(matches!(
            combined_error_bell(&params),
            Err(Error::NotPositive(_))
        ));
        let raw = combined_error_bell_matrix(&params);
        let psi = bell_state(BellLabel::PsiMinus);
        let f = (psi.amplitudes().adjoint() * raw.matrix() * psi.amplitudes())[(0, 0)].re;
        assert_abs_diff_eq!(f, 0.90, epsilon = 1e-14);
        assert_abs_diff_eq!(f, combined_error_bell_fidelity(&params), epsilon = 1e-14);
    }

    #[test]
    fn combined_trace_is_exactly_one_across_grid() {
        for ed in [0.0, 0.02, 0.04] {
            for ep in [0.0, 0.05, 0.1, 0.2] {
                if ed <= 2.0 * ep * (1.0 - ep) {
                    let params = ErrorParams::combined(ed, ep).unwrap();
                    let rho = combined_error_bell(&params).unwrap();
                    assert_abs_diff_eq!(rho.trace(), 1.0, epsilon = 1e-15);
                }
            }
        }
    }

    #[test]
    fn validation_report_examples() {
        for kind in [
            ChannelKind::BitFlip,
            ChannelKind::PhaseFlip,
            ChannelKind::AmplitudeDamping,
        ] {
            assert!(channel_validate(&make_channel(kind, 0.4).unwrap()).pass);
        }
        // {I, I} doubles the identity: deviation 1, fail
        let broken =
            KrausChannel::new_unchecked(2, vec![identity_matrix(2), identity_matrix(2)])
                .unwrap();
        let report = channel_validate(&broken);
        assert!(!report.pass);
        assert_abs_diff_eq!(report.max_deviation, 1.0, epsilon = 1e-15);
        // {sqrt(0.3) I, sqrt(0.7) X} is complete
        let ok = KrausChannel::new(
            2,
            vec![
                identity_matrix(2).map(|z| z * re(0.3f64.sqrt())),
                pauli_x().map(|z| z * re(0.7f64.sqrt())),
            ],
        )
        .unwrap();
        assert!(channel_validate(&ok).pass);
    }

    #[test]
    fn trace_preserved_by_every_channel_application() {
        let rho = bell_state(BellLabel::PsiMinus).to_density();
        for kind in [
            ChannelKind::BitFlip,
            ChannelKind::PhaseFlip,
            ChannelKind::AmplitudeDamping,
        ] {
            for p in [0.0, 0.15, 0.6, 1.0] {
                let out = rho
                    .apply_channel(&make_channel(kind, p).unwrap(), &["QA", "QB"])
                    .unwrap();
                assert!((out.trace() - 1.0).abs() < 1e-10);
                assert!(out.min_eigenvalue() > -1e-9);
            }
        }
    }
}
