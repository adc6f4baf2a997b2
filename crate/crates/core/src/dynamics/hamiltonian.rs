//! Rotating-frame Hamiltonians of the qubit / cable network, in both the
//! full tensor-product space and the number-conserving single-excitation
//! basis, together with the matching collapse-operator sets.
//!
//! The rotating frame sits at the communication-mode frequency; mode `m`
//! (1-based, M odd) is offset by (m - (M+1)/2) * omega_FSR and the coupling
//! of the B-side qubit alternates sign with the mode number.

use nalgebra::DMatrix;

use crate::dynamics::lindblad::{CollapseSet, EvolutionSegment, EvolveOptions, Trajectory};
use crate::dynamics::params::{CableParams, QubitParams};
use crate::error::{Error, Result};
use crate::operator::{
    annihilation, number_operator, pauli_z, re, sigma_minus, C64, ComplexOperator, ZERO,
};
use crate::space::CompositeSpace;
use crate::state::{DensityMatrix, PureState};

/// Coupling of one qubit to every cable mode; the sign of the coupling to
/// mode m is (-1)^m when `alternating_sign` is set (the B side of the cable).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CableCoupling {
    pub g_rad_ns: f64,
    pub alternating_sign: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QubitTerm {
    pub label: String,
    pub detuning_rad_ns: f64,
    pub cable: Option<CableCoupling>,
}

/// Declarative description of one constant-Hamiltonian configuration.
#[derive(Debug, Clone, Default)]
pub struct HamiltonianSpec {
    pub qubits: Vec<QubitTerm>,
    /// Exchange couplings g (sigma_i sigma_j^dag + h.c.) between two qubits.
    pub exchange: Vec<(String, String, f64)>,
    pub cable: Option<CableParams>,
}

impl HamiltonianSpec {
    /// Space with the qubits in listed order followed by the cable modes.
    pub fn default_space(&self) -> Result<CompositeSpace> {
        let mut labels: Vec<String> = self.qubits.iter().map(|q| q.label.clone()).collect();
        let mut dims = vec![2usize; labels.len()];
        if let Some(cable) = &self.cable {
            cable.validate()?;
            labels.extend(cable.mode_labels());
            dims.extend(std::iter::repeat(cable.mode_dim).take(cable.n_modes));
        }
        CompositeSpace::new(labels, dims)
    }

    /// Standing-wave parity of mode `m` as seen from the alternating end.
    /// The sign flips with each mode and the central (communication) mode is
    /// anchored at +1, which keeps the produced Bell state independent of
    /// the truncation width; for M = 3 this is the (-, +, -) pattern.
    fn mode_sign(coupling: &CableCoupling, m: usize, cable: &CableParams) -> f64 {
        if coupling.alternating_sign && (m as i64 - cable.central_mode() as i64).rem_euclid(2) == 1
        {
            -1.0
        } else {
            1.0
        }
    }
}

/// Assemble the spec's Hamiltonian on `space` (which must contain every
/// referenced label). Hermiticity is asserted on the way out.
pub fn build_hamiltonian(
    space: &CompositeSpace,
    spec: &HamiltonianSpec,
) -> Result<ComplexOperator> {
    let dim = space.dim();
    let mut h = DMatrix::<C64>::zeros(dim, dim);

    for q in &spec.qubits {
        if q.detuning_rad_ns != 0.0 {
            let n = ComplexOperator::on_single("n", number_operator(2))?
                .embed(&[q.label.as_str()], space)?;
            h += n.matrix().map(|z| z * re(q.detuning_rad_ns));
        }
    }
    if let Some(cable) = &spec.cable {
        cable.validate()?;
        for m in 1..=cable.n_modes {
            let offset = cable.mode_offset(m);
            if offset != 0.0 {
                let n = ComplexOperator::on_single("n", number_operator(cable.mode_dim))?
                    .embed(&[CableParams::mode_label(m).as_str()], space)?;
                h += n.matrix().map(|z| z * re(offset));
            }
        }
        for q in &spec.qubits {
            let Some(coupling) = &q.cable else { continue };
            if coupling.g_rad_ns == 0.0 {
                continue;
            }
            for m in 1..=cable.n_modes {
                let g = coupling.g_rad_ns * HamiltonianSpec::mode_sign(coupling, m, cable);
                let sm = ComplexOperator::on_single("q", sigma_minus())?;
                let ad = ComplexOperator::on_single("m", annihilation(cable.mode_dim))?
                    .adjoint();
                // g (sigma b^dag + sigma^dag b)
                let term = sm.tensor(&ad)?;
                let mode_label = CableParams::mode_label(m);
                let lower_raise = term.embed(&[q.label.as_str(), mode_label.as_str()], space)?;
                h += (lower_raise.matrix() + lower_raise.matrix().adjoint()).map(|z| z * re(g));
            }
        }
    }
    for (a, b, g) in &spec.exchange {
        if *g == 0.0 {
            continue;
        }
        let sm_a = ComplexOperator::on_single("a", sigma_minus())?;
        let sp_b = ComplexOperator::on_single("b", sigma_minus())?.adjoint();
        let term = sm_a.tensor(&sp_b)?.embed(&[a.as_str(), b.as_str()], space)?;
        h += (term.matrix() + term.matrix().adjoint()).map(|z| z * re(*g));
    }

    let op = ComplexOperator::new(space.clone(), h)?;
    debug_assert!(op.is_hermitian(1e-12), "assembled Hamiltonian not Hermitian");
    Ok(op)
}

// ---------------------------------------------------------------------------
// single-excitation reduction
// ---------------------------------------------------------------------------

/// The zero- and one-excitation basis of a spec: index 0 is the vacuum and
/// each later index holds the single excitation on one site (qubits in
/// listed order, then modes). Exact for excitation-conserving Hamiltonians
/// with purely lowering collapse operators.
#[derive(Debug, Clone)]
pub struct SingleExcitationBasis {
    space: CompositeSpace,
    sites: Vec<String>,
}

impl SingleExcitationBasis {
    pub fn for_spec(spec: &HamiltonianSpec) -> Result<Self> {
        let mut sites: Vec<String> = spec.qubits.iter().map(|q| q.label.clone()).collect();
        if let Some(cable) = &spec.cable {
            sites.extend(cable.mode_labels());
        }
        if sites.is_empty() {
            return Err(Error::InvalidParameter("empty single-excitation basis".into()));
        }
        let space = CompositeSpace::flat("exc", sites.len() + 1)?;
        Ok(Self { space, sites })
    }

    pub fn space(&self) -> &CompositeSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.sites.len() + 1
    }

    /// Basis index of the excitation on `label` (vacuum is index 0).
    pub fn site_index(&self, label: &str) -> Result<usize> {
        self.sites
            .iter()
            .position(|s| s == label)
            .map(|p| p + 1)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn sites(&self) -> &[String] {
        &self.sites
    }

    /// Pure state with the excitation on one site.
    pub fn excited(&self, label: &str) -> Result<DensityMatrix> {
        let idx = self.site_index(label)?;
        Ok(PureState::basis_state(self.space.clone(), &[idx])?.to_density())
    }

    pub fn site_population(&self, rho: &DensityMatrix, label: &str) -> Result<f64> {
        Ok(rho.population(&[self.site_index(label)?]))
    }
}

/// Single-excitation block of [`build_hamiltonian`], on the reduced basis.
/// With `include_vacuum` the (empty) vacuum row and column are kept so the
/// matrix can drive dissipative evolution.
pub fn build_single_excitation_hamiltonian(
    spec: &HamiltonianSpec,
    include_vacuum: bool,
) -> Result<(ComplexOperator, SingleExcitationBasis)> {
    let basis = SingleExcitationBasis::for_spec(spec)?;
    let offset = if include_vacuum { 1 } else { 0 };
    let dim = basis.sites.len() + offset;
    let mut h = DMatrix::<C64>::zeros(dim, dim);
    let idx = |label: &str| -> Result<usize> {
        Ok(basis.site_index(label)? - 1 + offset)
    };

    for q in &spec.qubits {
        let i = idx(&q.label)?;
        h[(i, i)] = re(q.detuning_rad_ns);
    }
    if let Some(cable) = &spec.cable {
        for m in 1..=cable.n_modes {
            let i = idx(&CableParams::mode_label(m))?;
            h[(i, i)] = re(cable.mode_offset(m));
        }
        for q in &spec.qubits {
            let Some(coupling) = &q.cable else { continue };
            let qi = idx(&q.label)?;
            for m in 1..=cable.n_modes {
                let mi = idx(&CableParams::mode_label(m))?;
                let g = coupling.g_rad_ns * HamiltonianSpec::mode_sign(coupling, m, cable);
                h[(qi, mi)] += re(g);
                h[(mi, qi)] += re(g);
            }
        }
    }
    for (a, b, g) in &spec.exchange {
        let (ia, ib) = (idx(a)?, idx(b)?);
        h[(ia, ib)] += re(*g);
        h[(ib, ia)] += re(*g);
    }

    let space = if include_vacuum {
        basis.space.clone()
    } else {
        CompositeSpace::flat("exc", dim)?
    };
    Ok((ComplexOperator::new(space, h)?, basis))
}

// ---------------------------------------------------------------------------
// collapse sets
// ---------------------------------------------------------------------------

/// Damping and dephasing rates for one qubit, 1/ns.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitRates {
    pub damping: f64,
    pub dephasing: f64,
}

impl QubitRates {
    pub fn from_params(q: &QubitParams) -> Self {
        Self {
            damping: q.damping_rate(),
            dephasing: q.dephasing_rate(),
        }
    }

    pub fn lossless() -> Self {
        Self { damping: 0.0, dephasing: 0.0 }
    }
}

/// Full-space collapse set: sigma- and sigma_z per qubit, annihilation per
/// mode at the cable rate.
pub fn collapse_full(
    space: &CompositeSpace,
    qubit_rates: &[(String, QubitRates)],
    cable: Option<&CableParams>,
) -> Result<CollapseSet> {
    let mut set = CollapseSet::empty();
    for (label, rates) in qubit_rates {
        let sm = ComplexOperator::on_single("q", sigma_minus())?.embed(&[label.as_str()], space)?;
        set.push(sm, rates.damping)?;
        let sz = ComplexOperator::on_single("q", pauli_z())?.embed(&[label.as_str()], space)?;
        set.push(sz, rates.dephasing)?;
    }
    if let Some(cable) = cable {
        let rate = 1.0 / cable.t1r_ns;
        for m in 1..=cable.n_modes {
            let a = ComplexOperator::on_single("m", annihilation(cable.mode_dim))?
                .embed(&[CableParams::mode_label(m).as_str()], space)?;
            set.push(a, rate)?;
        }
    }
    Ok(set)
}

/// Reduced-basis collapse set mirroring [`collapse_full`]: site-to-vacuum
/// jumps for damping and a diagonal +-1 operator for dephasing.
pub fn collapse_reduced(
    basis: &SingleExcitationBasis,
    qubit_rates: &[(String, QubitRates)],
    cable: Option<&CableParams>,
) -> Result<CollapseSet> {
    let dim = basis.dim();
    let mut set = CollapseSet::empty();
    let jump_to_vacuum = |site: usize| -> DMatrix<C64> {
        let mut m = DMatrix::zeros(dim, dim);
        m[(0, site)] = re(1.0);
        m
    };
    for (label, rates) in qubit_rates {
        let site = basis.site_index(label)?;
        set.push(
            ComplexOperator::new(basis.space.clone(), jump_to_vacuum(site))?,
            rates.damping,
        )?;
        // sigma_z reduced: -1 on the excited site, +1 elsewhere
        let mut z = DMatrix::<C64>::identity(dim, dim);
        z[(site, site)] = re(-1.0);
        set.push(ComplexOperator::new(basis.space.clone(), z)?, rates.dephasing)?;
    }
    if let Some(cable) = cable {
        let rate = 1.0 / cable.t1r_ns;
        for m in 1..=cable.n_modes {
            let site = basis.site_index(&CableParams::mode_label(m))?;
            set.push(
                ComplexOperator::new(basis.space.clone(), jump_to_vacuum(site))?,
                rate,
            )?;
        }
    }
    Ok(set)
}

// ---------------------------------------------------------------------------
// the two-node network
// ---------------------------------------------------------------------------

/// Rectangular control segment for the two communication qubits:
/// per-qubit detunings and coupler strengths, all rad/ns.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub duration_ns: f64,
    pub detuning_a: f64,
    pub detuning_b: f64,
    pub g_a: f64,
    pub g_b: f64,
}

impl Segment {
    pub fn idle(duration_ns: f64) -> Self {
        Self {
            duration_ns,
            detuning_a: 0.0,
            detuning_b: 0.0,
            g_a: 0.0,
            g_b: 0.0,
        }
    }
}

/// Piecewise-constant control sequence.
#[derive(Debug, Clone, Default)]
pub struct PulseSchedule {
    pub segments: Vec<Segment>,
}

impl PulseSchedule {
    pub fn validate(&self) -> Result<()> {
        if self.segments.is_empty() {
            return Err(Error::InvalidParameter("empty pulse schedule".into()));
        }
        for s in &self.segments {
            if s.duration_ns <= 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "segment duration {} <= 0",
                    s.duration_ns
                )));
            }
        }
        Ok(())
    }

    pub fn total_duration_ns(&self) -> f64 {
        self.segments.iter().map(|s| s.duration_ns).sum()
    }
}

/// Both communication qubits coupled to the cable through their couplers.
/// When a qubit's coupler is on (g != 0) its lifetimes switch to the
/// degraded coupler-on values.
#[derive(Debug, Clone)]
pub struct CableNetwork {
    pub label_a: String,
    pub label_b: String,
    pub qubit_a: QubitParams,
    pub qubit_b: QubitParams,
    pub cable: CableParams,
    /// Degraded T1 while a qubit's coupler is on; `None` keeps the table
    /// value. The default 2.1 us comes from fits to the swap oscillations.
    pub coupler_on_t1_us: Option<f64>,
    /// Degraded T_phi while the coupler is on; `None` keeps the table value.
    pub coupler_on_t_phi_us: Option<f64>,
    pub lossless: bool,
}

impl CableNetwork {
    pub fn device_default() -> Self {
        Self {
            label_a: "Q2A".into(),
            label_b: "Q2B".into(),
            qubit_a: crate::dynamics::params::device_qubit("Q2A").expect("table entry"),
            qubit_b: crate::dynamics::params::device_qubit("Q2B").expect("table entry"),
            cable: CableParams::default(),
            coupler_on_t1_us: Some(2.1),
            coupler_on_t_phi_us: None,
            lossless: false,
        }
    }

    /// Tensor ordering follows the |Q2A, cable, Q2B| layout.
    pub fn full_space(&self) -> Result<CompositeSpace> {
        let mut labels = vec![self.label_a.clone()];
        let mut dims = vec![2usize];
        labels.extend(self.cable.mode_labels());
        dims.extend(std::iter::repeat(self.cable.mode_dim).take(self.cable.n_modes));
        labels.push(self.label_b.clone());
        dims.push(2);
        CompositeSpace::new(labels, dims)
    }

    pub fn spec_for(&self, seg: &Segment) -> HamiltonianSpec {
        HamiltonianSpec {
            qubits: vec![
                QubitTerm {
                    label: self.label_a.clone(),
                    detuning_rad_ns: seg.detuning_a,
                    cable: Some(CableCoupling {
                        g_rad_ns: seg.g_a,
                        alternating_sign: false,
                    }),
                },
                QubitTerm {
                    label: self.label_b.clone(),
                    detuning_rad_ns: seg.detuning_b,
                    cable: Some(CableCoupling {
                        g_rad_ns: seg.g_b,
                        alternating_sign: true,
                    }),
                },
            ],
            exchange: vec![],
            cable: Some(self.cable),
        }
    }

    fn rates_for(&self, seg: &Segment) -> Vec<(String, QubitRates)> {
        if self.lossless {
            return vec![
                (self.label_a.clone(), QubitRates::lossless()),
                (self.label_b.clone(), QubitRates::lossless()),
            ];
        }
        let pick = |coupler_on: bool, table: &QubitParams| {
            if coupler_on {
                QubitRates::from_params(&QubitParams {
                    t1_us: self.coupler_on_t1_us.unwrap_or(table.t1_us),
                    t_phi_us: self.coupler_on_t_phi_us.unwrap_or(table.t_phi_us),
                    ..*table
                })
            } else {
                QubitRates::from_params(table)
            }
        };
        vec![
            (self.label_a.clone(), pick(seg.g_a != 0.0, &self.qubit_a)),
            (self.label_b.clone(), pick(seg.g_b != 0.0, &self.qubit_b)),
        ]
    }

    fn cable_for_rates(&self) -> Option<CableParams> {
        if self.lossless {
            None
        } else {
            Some(self.cable)
        }
    }

    pub fn basis(&self) -> Result<SingleExcitationBasis> {
        SingleExcitationBasis::for_spec(&self.spec_for(&Segment::idle(1.0)))
    }

    fn segments_reduced(&self, schedule: &PulseSchedule) -> Result<Vec<EvolutionSegment>> {
        schedule
            .segments
            .iter()
            .map(|seg| {
                let (h, basis) =
                    build_single_excitation_hamiltonian(&self.spec_for(seg), true)?;
                let collapse =
                    collapse_reduced(&basis, &self.rates_for(seg), self.cable_for_rates().as_ref())?;
                Ok(EvolutionSegment {
                    hamiltonian: h,
                    collapse,
                    duration_ns: seg.duration_ns,
                })
            })
            .collect()
    }

    fn segments_full(&self, schedule: &PulseSchedule) -> Result<Vec<EvolutionSegment>> {
        let space = self.full_space()?;
        schedule
            .segments
            .iter()
            .map(|seg| {
                let h = build_hamiltonian(&space, &self.spec_for(seg))?;
                let collapse =
                    collapse_full(&space, &self.rates_for(seg), self.cable_for_rates().as_ref())?;
                Ok(EvolutionSegment {
                    hamiltonian: h,
                    collapse,
                    duration_ns: seg.duration_ns,
                })
            })
            .collect()
    }

    /// Evolve in the single-excitation basis (exact for at most one initial
    /// excitation, since the Hamiltonian conserves excitation number and all
    /// collapse operators lower or preserve it).
    pub fn evolve_reduced(
        &self,
        schedule: &PulseSchedule,
        rho0: &DensityMatrix,
        opts: &EvolveOptions,
    ) -> Result<Trajectory> {
        schedule.validate()?;
        crate::dynamics::lindblad::lindblad_evolve(&self.segments_reduced(schedule)?, rho0, opts)
    }

    /// Evolve in the full tensor-product space.
    pub fn evolve_full(
        &self,
        schedule: &PulseSchedule,
        rho0: &DensityMatrix,
        opts: &EvolveOptions,
    ) -> Result<Trajectory> {
        schedule.validate()?;
        crate::dynamics::lindblad::lindblad_evolve(&self.segments_full(schedule)?, rho0, opts)
    }

    /// Total photon population across all cable modes of a reduced state.
    pub fn mode_population_reduced(&self, rho: &DensityMatrix) -> Result<f64> {
        let basis = self.basis()?;
        let mut total = 0.0;
        for m in 1..=self.cable.n_modes {
            total += basis.site_population(rho, &CableParams::mode_label(m))?;
        }
        Ok(total)
    }

    /// Project a reduced-basis state down to the two communication qubits
    /// (tracing the cable modes into the ground population).
    pub fn two_qubit_from_reduced(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let basis = self.basis()?;
        let ia = basis.site_index(&self.label_a)?;
        let ib = basis.site_index(&self.label_b)?;
        let mut gg = rho.matrix()[(0, 0)];
        for m in 1..=self.cable.n_modes {
            let im = basis.site_index(&CableParams::mode_label(m))?;
            gg += rho.matrix()[(im, im)];
        }
        let r = rho.matrix();
        let m4 = DMatrix::from_row_slice(
            4,
            4,
            &[
                gg, r[(0, ib)], r[(0, ia)], ZERO,
                r[(ib, 0)], r[(ib, ib)], r[(ib, ia)], ZERO,
                r[(ia, 0)], r[(ia, ib)], r[(ia, ia)], ZERO,
                ZERO, ZERO, ZERO, ZERO,
            ],
        );
        let space = CompositeSpace::qubits(vec![self.label_a.clone(), self.label_b.clone()])?;
        DensityMatrix::new(space, m4)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::params::mhz_to_rad_ns;
    use approx::assert_abs_diff_eq;

    fn one_qubit_spec(g: f64, cable: CableParams) -> HamiltonianSpec {
        HamiltonianSpec {
            qubits: vec![QubitTerm {
                label: "Q2A".into(),
                detuning_rad_ns: 0.0,
                cable: Some(CableCoupling {
                    g_rad_ns: g,
                    alternating_sign: false,
                }),
            }],
            exchange: vec![],
            cable: Some(cable),
        }
    }

    #[test]
    fn zero_couplings_give_diagonal_hamiltonian() {
        let cable = CableParams::default();
        let mut spec = one_qubit_spec(0.0, cable);
        spec.qubits[0].detuning_rad_ns = 0.3;
        let space = spec.default_space().unwrap();
        let h = build_hamiltonian(&space, &spec).unwrap();
        for r in 0..h.dim() {
            for c in 0..h.dim() {
                if r != c {
                    assert_eq!(h.matrix()[(r, c)], ZERO, "off-diagonal at ({r},{c})");
                }
            }
        }
        // diagonal carries the qubit detuning and the mode offsets
        let excited_q = space.flat_index(&[1, 0, 0, 0]);
        assert_abs_diff_eq!(h.matrix()[(excited_q, excited_q)].re, 0.3, epsilon = 1e-15);
        let one_in_m1 = space.flat_index(&[0, 1, 0, 0]);
        assert_abs_diff_eq!(
            h.matrix()[(one_in_m1, one_in_m1)].re,
            -cable.fsr_rad_ns,
            epsilon = 1e-15
        );
    }

    #[test]
    fn single_excitation_block_matches_hand_written_form() {
        // one qubit resonant with the central of three modes: the 4x4
        // single-excitation block (no vacuum) has the mode offsets on the
        // diagonal and g on the qubit-mode off-diagonals.
        let g = mhz_to_rad_ns(4.3);
        let cable = CableParams::default();
        let spec = one_qubit_spec(g, cable);
        let (h, _) = build_single_excitation_hamiltonian(&spec, false).unwrap();
        assert_eq!(h.dim(), 4);
        let f = cable.fsr_rad_ns;
        let expected = DMatrix::from_row_slice(
            4,
            4,
            &[
                ZERO, re(g), re(g), re(g),
                re(g), re(-f), ZERO, ZERO,
                re(g), ZERO, ZERO, ZERO,
                re(g), ZERO, ZERO, re(f),
            ],
        );
        assert!(crate::operator::max_abs_entry(&(h.matrix() - expected)) < 1e-15);
    }

    #[test]
    fn b_side_coupling_signs_alternate() {
        let g = 0.02;
        let cable = CableParams::default();
        let spec = HamiltonianSpec {
            qubits: vec![QubitTerm {
                label: "Q2B".into(),
                detuning_rad_ns: 0.0,
                cable: Some(CableCoupling {
                    g_rad_ns: g,
                    alternating_sign: true,
                }),
            }],
            exchange: vec![],
            cable: Some(cable),
        };
        let (h, basis) = build_single_excitation_hamiltonian(&spec, true).unwrap();
        let qi = basis.site_index("Q2B").unwrap();
        let signs: Vec<f64> = (1..=3)
            .map(|m| {
                let mi = basis.site_index(&CableParams::mode_label(m)).unwrap();
                h.matrix()[(qi, mi)].re / g
            })
            .collect();
        assert_eq!(signs, vec![-1.0, 1.0, -1.0]);
    }

    #[test]
    fn reduced_and_full_hamiltonians_agree_on_the_one_excitation_sector() {
        let g = mhz_to_rad_ns(4.3);
        let cable = CableParams { n_modes: 1, ..CableParams::default() };
        let net = CableNetwork {
            cable,
            ..CableNetwork::device_default()
        };
        let seg = Segment {
            duration_ns: 10.0,
            detuning_a: 0.05,
            detuning_b: -0.02,
            g_a: g,
            g_b: g,
        };
        let space = net.full_space().unwrap();
        let h_full = build_hamiltonian(&space, &net.spec_for(&seg)).unwrap();
        let (h_red, basis) =
            build_single_excitation_hamiltonian(&net.spec_for(&seg), true).unwrap();
        // compare matrix elements between one-excitation basis vectors
        let site_levels = |label: &str| -> Vec<usize> {
            space
                .labels()
                .iter()
                .map(|l| if l == label { 1 } else { 0 })
                .collect()
        };
        let mut sites = vec![("vac".to_string(), vec![0, 0, 0])];
        for s in basis.sites() {
            sites.push((s.clone(), site_levels(s)));
        }
        for (i, (si, li)) in sites.iter().enumerate() {
            for (j, (sj, lj)) in sites.iter().enumerate() {
                let full_elem =
                    h_full.matrix()[(space.flat_index(li), space.flat_index(lj))];
                assert_abs_diff_eq!(
                    (h_red.matrix()[(i, j)] - full_elem).norm(),
                    0.0,
                    epsilon = 1e-14,
                );
                let _ = (si, sj);
            }
        }
    }

    #[test]
    fn coupler_on_switches_qubit_rates() {
        let net = CableNetwork::device_default();
        let off = net.rates_for(&Segment::idle(1.0));
        let on = net.rates_for(&Segment {
            duration_ns: 1.0,
            detuning_a: 0.0,
            detuning_b: 0.0,
            g_a: 0.01,
            g_b: 0.0,
        });
        // idle: table values
        assert_abs_diff_eq!(off[0].1.damping, 1.0 / 5700.0, epsilon = 1e-12);
        // coupler on: T1 degrades to 2.1 us, T_phi keeps the table value
        assert_abs_diff_eq!(on[0].1.damping, 1.0 / 2100.0, epsilon = 1e-12);
        assert_abs_diff_eq!(on[0].1.dephasing, 1.0 / (2.0 * 3100.0), epsilon = 1e-12);
        // the other qubit keeps its table values
        assert_abs_diff_eq!(on[1].1.damping, 1.0 / 9200.0, epsilon = 1e-12);
    }
}
