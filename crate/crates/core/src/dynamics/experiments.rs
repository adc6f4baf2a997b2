//! The cable-mediated experiment pipelines: vacuum Rabi oscillations,
//! cable-mode ringdown, and deterministic remote Bell-state generation.

use crate::channels::{bell_state_on, BellLabel};
use crate::dynamics::hamiltonian::{
    build_single_excitation_hamiltonian, collapse_reduced, CableCoupling, CableNetwork,
    HamiltonianSpec, PulseSchedule, QubitRates, QubitTerm, Segment,
};
use crate::dynamics::lindblad::{lindblad_evolve, EvolutionSegment, EvolveOptions};
use crate::dynamics::params::{device_qubit, mhz_to_rad_ns, CableParams, QubitParams};
use crate::error::Result;
use crate::state::{DensityMatrix, PureState};

/// Coupling used for the swap experiments, g/2pi = 4.3 MHz.
pub fn default_swap_coupling() -> f64 {
    mhz_to_rad_ns(4.3)
}

/// Coupling at which the nominal 30 ns window is an exact half swap and the
/// 60 ns window an exact full swap (g/2pi = 4.17 MHz). The generation
/// sequence is calibrated to the window durations, so this is the default
/// for Bell-state generation.
pub fn bell_swap_coupling() -> f64 {
    std::f64::consts::PI / 120.0
}

#[derive(Debug, Clone, Default)]
pub struct TimeSeries {
    pub t_ns: Vec<f64>,
    pub value: Vec<f64>,
}

// ---------------------------------------------------------------------------
// vacuum Rabi
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct VacuumRabiParams {
    pub g_rad_ns: f64,
    pub t1_eff_us: f64,
    pub t_phi_us: f64,
    pub cable: CableParams,
    pub t_max_ns: f64,
    pub dt_ns: f64,
    pub sample_dt_ns: f64,
    pub lossless: bool,
}

impl Default for VacuumRabiParams {
    fn default() -> Self {
        Self {
            g_rad_ns: default_swap_coupling(),
            // coupler-on lifetime fitted to the oscillation data
            t1_eff_us: 2.1,
            t_phi_us: 3.1,
            cable: CableParams::default(),
            t_max_ns: 600.0,
            dt_ns: 0.02,
            sample_dt_ns: 0.1,
            lossless: false,
        }
    }
}

/// Excited-qubit population vs. time for a qubit resonant with the central
/// cable mode, single-excitation basis.
pub fn simulate_vacuum_rabi(params: &VacuumRabiParams) -> Result<TimeSeries> {
    let spec = HamiltonianSpec {
        qubits: vec![QubitTerm {
            label: "Q".into(),
            detuning_rad_ns: 0.0,
            cable: Some(CableCoupling {
                g_rad_ns: params.g_rad_ns,
                alternating_sign: false,
            }),
        }],
        exchange: vec![],
        cable: Some(params.cable),
    };
    let (h, basis) = build_single_excitation_hamiltonian(&spec, true)?;
    let rates = if params.lossless {
        QubitRates::lossless()
    } else {
        QubitRates {
            damping: 1.0 / (params.t1_eff_us * 1e3),
            dephasing: 1.0 / (2.0 * params.t_phi_us * 1e3),
        }
    };
    let cable_rates = if params.lossless { None } else { Some(params.cable) };
    let collapse = collapse_reduced(&basis, &[("Q".into(), rates)], cable_rates.as_ref())?;
    let seg = EvolutionSegment {
        hamiltonian: h,
        collapse,
        duration_ns: params.t_max_ns,
    };
    let rho0 = basis.excited("Q")?;
    let opts = EvolveOptions {
        dt_ns: params.dt_ns,
        sample_dt_ns: params.sample_dt_ns,
        validate: false,
    };
    let traj = lindblad_evolve(&[seg], &rho0, &opts)?;
    let qi = basis.site_index("Q")?;
    let mut out = TimeSeries::default();
    for (t, s) in traj.times_ns.iter().zip(&traj.states) {
        out.t_ns.push(*t);
        out.value.push(s.population(&[qi]));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// ringdown
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct RingdownParams {
    pub swap_ns: f64,
    pub delays_ns: Vec<f64>,
    pub qubit: QubitParams,
    pub coupler_on_t1_us: Option<f64>,
    pub coupler_on_t_phi_us: Option<f64>,
    pub cable: CableParams,
    pub dt_ns: f64,
}

impl Default for RingdownParams {
    fn default() -> Self {
        Self {
            swap_ns: 30.0,
            delays_ns: (0..=12).map(|k| 100.0 * k as f64).collect(),
            qubit: device_qubit("Q2B").expect("table entry"),
            coupler_on_t1_us: Some(2.1),
            coupler_on_t_phi_us: None,
            cable: CableParams::default(),
            dt_ns: 0.02,
        }
    }
}

/// Swap the excitation into the cable, idle for each delay, swap it back,
/// and report the remaining excited-state population.
pub fn simulate_cable_ringdown(params: &RingdownParams) -> Result<TimeSeries> {
    // full swap in `swap_ns` fixes the coupling
    let g = std::f64::consts::FRAC_PI_2 / params.swap_ns;
    let spec_with = |g_now: f64| HamiltonianSpec {
        qubits: vec![QubitTerm {
            label: "Q".into(),
            detuning_rad_ns: 0.0,
            cable: Some(CableCoupling {
                g_rad_ns: g_now,
                alternating_sign: false,
            }),
        }],
        exchange: vec![],
        cable: Some(params.cable),
    };
    let degraded = QubitParams {
        t1_us: params.coupler_on_t1_us.unwrap_or(params.qubit.t1_us),
        t_phi_us: params.coupler_on_t_phi_us.unwrap_or(params.qubit.t_phi_us),
        ..params.qubit
    };
    let swap_rates = QubitRates::from_params(&degraded);
    let idle_rates = QubitRates::from_params(&params.qubit);

    let mut out = TimeSeries::default();
    for &delay in &params.delays_ns {
        let mut segs = Vec::new();
        let (h_swap, basis) = build_single_excitation_hamiltonian(&spec_with(g), true)?;
        let swap_collapse =
            collapse_reduced(&basis, &[("Q".into(), swap_rates)], Some(&params.cable))?;
        segs.push(EvolutionSegment {
            hamiltonian: h_swap.clone(),
            collapse: swap_collapse.clone(),
            duration_ns: params.swap_ns,
        });
        if delay > 0.0 {
            let (h_idle, _) = build_single_excitation_hamiltonian(&spec_with(0.0), true)?;
            let idle_collapse =
                collapse_reduced(&basis, &[("Q".into(), idle_rates)], Some(&params.cable))?;
            segs.push(EvolutionSegment {
                hamiltonian: h_idle,
                collapse: idle_collapse,
                duration_ns: delay,
            });
        }
        segs.push(EvolutionSegment {
            hamiltonian: h_swap,
            collapse: swap_collapse,
            duration_ns: params.swap_ns,
        });
        let rho0 = basis.excited("Q")?;
        let opts = EvolveOptions {
            dt_ns: params.dt_ns,
            sample_dt_ns: 1e9,
            validate: false,
        };
        let traj = lindblad_evolve(&segs, &rho0, &opts)?;
        let pe = basis.site_population(traj.final_state(), "Q")?;
        out.t_ns.push(delay);
        out.value.push(pe);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Bell-state generation
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct BellGenParams {
    pub t_d_ns: f64,
    pub g_rad_ns: f64,
    pub half_swap_ns: f64,
    pub full_swap_ns: f64,
    /// Replace the nominal 30/60 ns windows with exact pi/(4g), pi/(2g).
    pub exact_timing: bool,
    pub network: CableNetwork,
    pub dt_ns: f64,
    pub single_excitation: bool,
}

impl Default for BellGenParams {
    fn default() -> Self {
        Self {
            t_d_ns: 10.0,
            g_rad_ns: bell_swap_coupling(),
            half_swap_ns: 30.0,
            full_swap_ns: 60.0,
            exact_timing: false,
            network: CableNetwork::device_default(),
            dt_ns: 0.02,
            single_excitation: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct BellGenResult {
    /// Two-qubit state over (Q2A, Q2B) after the transfer.
    pub state: DensityMatrix,
    /// Total photon population in the cable when the delay starts.
    pub predelay_mode_population: f64,
    /// Fidelity to the ideal psi- pair.
    pub fidelity: f64,
}

/// Pulse sequence: pi pulse on the A qubit (ideal, instantaneous), half swap
/// through coupler A, couplers off for `t_d`, full swap into the B qubit.
pub fn generate_bell_via_cable(params: &BellGenParams) -> Result<BellGenResult> {
    let g = params.g_rad_ns;
    let (half, full) = if params.exact_timing {
        (
            std::f64::consts::FRAC_PI_4 / g,
            std::f64::consts::FRAC_PI_2 / g,
        )
    } else {
        (params.half_swap_ns, params.full_swap_ns)
    };
    let net = &params.network;
    let seg_a = Segment {
        duration_ns: half,
        detuning_a: 0.0,
        detuning_b: 0.0,
        g_a: g,
        g_b: 0.0,
    };
    let seg_idle = Segment::idle(params.t_d_ns.max(0.0));
    let seg_b = Segment {
        duration_ns: full,
        detuning_a: 0.0,
        detuning_b: 0.0,
        g_a: 0.0,
        g_b: g,
    };
    let opts = EvolveOptions {
        dt_ns: params.dt_ns,
        sample_dt_ns: 1e9,
        validate: false,
    };

    let head = PulseSchedule { segments: vec![seg_a] };
    let tail_segments: Vec<Segment> = if params.t_d_ns > 0.0 {
        vec![seg_idle, seg_b]
    } else {
        vec![seg_b]
    };
    let tail = PulseSchedule { segments: tail_segments };

    if params.single_excitation {
        let basis = net.basis()?;
        let rho0 = basis.excited(&net.label_a)?;
        let mid = net.evolve_reduced(&head, &rho0, &opts)?;
        let predelay = net.mode_population_reduced(mid.final_state())?;
        let fin = net.evolve_reduced(&tail, mid.final_state(), &opts)?;
        let state = net.two_qubit_from_reduced(fin.final_state())?;
        let target = bell_state_on(BellLabel::PsiMinus, state.space())?;
        let fidelity = state.fidelity_pure(&target)?;
        Ok(BellGenResult {
            state,
            predelay_mode_population: predelay,
            fidelity,
        })
    } else {
        let space = net.full_space()?;
        let levels: Vec<usize> = space
            .labels()
            .iter()
            .map(|l| if l == &net.label_a { 1 } else { 0 })
            .collect();
        let rho0 = PureState::basis_state(space.clone(), &levels)?.to_density();
        let mid = net.evolve_full(&head, &rho0, &opts)?;
        let mut predelay = 0.0;
        for m in 1..=net.cable.n_modes {
            let number = crate::operator::ComplexOperator::on_single(
                "n",
                crate::operator::number_operator(net.cable.mode_dim),
            )?
            .embed(&[CableParams::mode_label(m).as_str()], &space)?;
            predelay += mid.final_state().expectation(&number)?.re;
        }
        let fin = net.evolve_full(&tail, mid.final_state(), &opts)?;
        let state = fin
            .final_state()
            .partial_trace(&[net.label_a.as_str(), net.label_b.as_str()])?;
        let target = bell_state_on(BellLabel::PsiMinus, state.space())?;
        let fidelity = state.fidelity_pure(&target)?;
        Ok(BellGenResult {
            state,
            predelay_mode_population: predelay,
            fidelity,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::first_minimum;
    use approx::assert_abs_diff_eq;

    #[test]
    fn rabi_oscillates_at_2g_and_swaps_near_58ns() {
        // P_e oscillates at angular frequency 2g (to 1%; the side modes pull
        // individual minima by more than they pull the mean period), and the
        // first minimum is the full-swap time near pi/(2g) = 58 ns.
        let params = VacuumRabiParams {
            t_max_ns: 600.0,
            ..VacuumRabiParams::default()
        };
        let series = simulate_vacuum_rabi(&params).unwrap();
        let omega = crate::analysis::oscillation_frequency(&series.t_ns, &series.value).unwrap();
        let two_g = 2.0 * params.g_rad_ns;
        assert!(
            (omega - two_g).abs() / two_g < 0.01,
            "omega = {omega}, 2g = {two_g}"
        );
        let (t_min, _) = first_minimum(&series.t_ns, &series.value).unwrap();
        let expected = std::f64::consts::FRAC_PI_2 / params.g_rad_ns;
        assert_abs_diff_eq!(expected, 58.14, epsilon = 0.01);
        assert!((57.0..61.0).contains(&t_min), "t_min = {t_min}");
    }

    #[test]
    fn rabi_envelope_loss_tracks_mode_residency() {
        // With cable loss on, the first full return is suppressed by about
        // exp(-residency/T1r) where the residency integral comes from the
        // lossless run.
        let lossless = VacuumRabiParams {
            t_max_ns: 125.0,
            lossless: true,
            ..VacuumRabiParams::default()
        };
        let lossy = VacuumRabiParams {
            t_max_ns: 125.0,
            t1_eff_us: f64::INFINITY,
            t_phi_us: f64::INFINITY,
            ..VacuumRabiParams::default()
        };
        let s0 = simulate_vacuum_rabi(&lossless).unwrap();
        let s1 = simulate_vacuum_rabi(&lossy).unwrap();
        // first full return of the excitation: first maximum after the swap
        let dip = first_minimum(&s0.t_ns, &s0.value).unwrap().0;
        let ret = 2.0 * dip;
        let at = |s: &TimeSeries, t: f64| {
            let k = s
                .t_ns
                .iter()
                .position(|&x| (x - t).abs() < 0.11)
                .expect("sample near requested time");
            s.value[k]
        };
        // mode residency = integral of (1 - P_e) dt over one period
        let mut residency = 0.0;
        for k in 1..s0.t_ns.len() {
            if s0.t_ns[k] > ret {
                break;
            }
            let dt = s0.t_ns[k] - s0.t_ns[k - 1];
            residency += dt * (2.0 - s0.value[k] - s0.value[k - 1]) / 2.0;
        }
        let expected_ratio = (-residency / 477.3).exp();
        let ratio = at(&s1, ret) / at(&s0, ret);
        assert!(
            (ratio - expected_ratio).abs() < 0.02,
            "ratio {ratio} vs residency prediction {expected_ratio}"
        );
    }

    #[test]
    fn shorter_t1_decays_faster() {
        let base = VacuumRabiParams {
            t_max_ns: 400.0,
            t1_eff_us: 5.7,
            ..VacuumRabiParams::default()
        };
        let shortened = VacuumRabiParams {
            t1_eff_us: 2.1,
            ..base.clone()
        };
        let s_table = simulate_vacuum_rabi(&base).unwrap();
        let s_short = simulate_vacuum_rabi(&shortened).unwrap();
        // compare the sum of the tail populations (envelope proxy)
        let tail = |s: &TimeSeries| -> f64 {
            s.t_ns
                .iter()
                .zip(&s.value)
                .filter(|(t, _)| **t > 300.0)
                .map(|(_, v)| v)
                .sum()
        };
        assert!(tail(&s_short) < tail(&s_table));
    }

    #[test]
    fn ringdown_zero_delay_is_swap_loss_limited() {
        let params = RingdownParams {
            delays_ns: vec![0.0],
            ..RingdownParams::default()
        };
        let series = simulate_cable_ringdown(&params).unwrap();
        // two 30 ns swaps and 30 ns of mode residency at T1r = 477 ns leave
        // most of the excitation intact
        assert!(series.value[0] > 0.85 && series.value[0] < 1.0);
    }

    #[test]
    fn doubling_t1r_halves_the_fitted_decay_rate() {
        let delays: Vec<f64> = (0..=6).map(|k| 150.0 * k as f64).collect();
        let base = RingdownParams {
            delays_ns: delays.clone(),
            ..RingdownParams::default()
        };
        let doubled = RingdownParams {
            cable: CableParams {
                t1r_ns: 2.0 * 477.3,
                ..CableParams::default()
            },
            ..base.clone()
        };
        let s1 = simulate_cable_ringdown(&base).unwrap();
        let s2 = simulate_cable_ringdown(&doubled).unwrap();
        let fit1 = crate::analysis::fit_exponential_decay(&s1.t_ns, &s1.value).unwrap();
        let fit2 = crate::analysis::fit_exponential_decay(&s2.t_ns, &s2.value).unwrap();
        let ratio = fit2.tau / fit1.tau;
        assert!((ratio - 2.0).abs() < 0.05, "tau ratio {ratio}");
    }

    #[test]
    fn lossless_exact_protocol_reaches_the_singlet() {
        // single mode: no leakage into detuned modes, so the ideal protocol
        // produces psi- essentially exactly
        let params = BellGenParams {
            exact_timing: true,
            network: CableNetwork {
                cable: CableParams {
                    n_modes: 1,
                    ..CableParams::default()
                },
                lossless: true,
                ..CableNetwork::device_default()
            },
            ..BellGenParams::default()
        };
        let out = generate_bell_via_cable(&params).unwrap();
        assert!(out.fidelity >= 0.9999, "F = {}", out.fidelity);
    }

    #[test]
    fn reduced_and_full_space_simulations_agree() {
        // basis-truncation correctness: same pipeline in the 4-dim reduced
        // basis and the 8-dim full space (single mode), weak damping
        let base = BellGenParams {
            t_d_ns: 40.0,
            network: CableNetwork {
                cable: CableParams {
                    n_modes: 1,
                    ..CableParams::default()
                },
                ..CableNetwork::device_default()
            },
            dt_ns: 0.05,
            ..BellGenParams::default()
        };
        let reduced = generate_bell_via_cable(&base).unwrap();
        let full = generate_bell_via_cable(&BellGenParams {
            single_excitation: false,
            ..base
        })
        .unwrap();
        let diff = crate::operator::max_abs_entry(
            &(reduced.state.matrix() - full.state.matrix()),
        );
        assert!(diff < 1e-6, "reduced vs full diff {diff:e}");
        assert!((reduced.fidelity - full.fidelity).abs() < 1e-6);
    }

    #[test]
    fn short_delay_fidelity_matches_the_reference_band() {
        let out = generate_bell_via_cable(&BellGenParams::default()).unwrap();
        assert!(
            (0.90..=0.94).contains(&out.fidelity),
            "F(t_d=10) = {}",
            out.fidelity
        );
        assert!((0.4..0.6).contains(&out.predelay_mode_population));
    }

    #[test]
    fn fidelity_decreases_with_delay_and_gg_grows_with_mode_decay() {
        let at = |t_d: f64| {
            generate_bell_via_cable(&BellGenParams {
                t_d_ns: t_d,
                ..BellGenParams::default()
            })
            .unwrap()
        };
        let short = at(10.0);
        let long = at(400.0);
        assert!(long.fidelity < short.fidelity);
        // extra ground population tracks the photon lost in the cable
        // during the extra delay
        let gg_diff = long.state.population(&[0, 0]) - short.state.population(&[0, 0]);
        let predicted = 0.5 * (1.0 - (-390.0f64 / 477.3).exp());
        assert!(
            (gg_diff - predicted).abs() < 0.03,
            "gg diff {gg_diff} vs {predicted}"
        );
    }

    #[test]
    fn halving_the_step_leaves_fidelity_unchanged_at_1e6() {
        let base = BellGenParams::default();
        let fine = BellGenParams {
            dt_ns: base.dt_ns / 2.0,
            ..base.clone()
        };
        let f1 = generate_bell_via_cable(&base).unwrap().fidelity;
        let f2 = generate_bell_via_cable(&fine).unwrap().fidelity;
        assert!((f1 - f2).abs() < 1e-6, "dt convergence: {f1} vs {f2}");
    }
}
