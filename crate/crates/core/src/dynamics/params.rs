//! Device parameters and unit conversions.
//!
//! All public simulation code works in angular frequency (rad/ns) and time in
//! ns; the constructors here accept the units the device tables are quoted in
//! (GHz, MHz, us) and convert once.

use crate::error::{Error, Result};

pub const TWO_PI: f64 = std::f64::consts::TAU;

#[inline]
pub fn ghz_to_rad_ns(f_ghz: f64) -> f64 {
    TWO_PI * f_ghz
}

#[inline]
pub fn mhz_to_rad_ns(f_mhz: f64) -> f64 {
    TWO_PI * f_mhz * 1e-3
}

#[inline]
pub fn us_to_ns(t_us: f64) -> f64 {
    t_us * 1e3
}

// ---------------------------------------------------------------------------
// qubits
// ---------------------------------------------------------------------------

/// Per-qubit device parameters: frequencies in GHz, lifetimes in us,
/// readout visibilities dimensionless.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitParams {
    pub f_eg_max_ghz: f64,
    pub f_eg_ghz: f64,
    pub eta_ghz: f64,
    pub t1_us: f64,
    pub t_phi_us: f64,
    pub f_g: f64,
    pub f_e: f64,
}

impl QubitParams {
    pub fn validate(&self) -> Result<()> {
        if self.t1_us <= 0.0 || self.t_phi_us <= 0.0 {
            return Err(Error::InvalidParameter("lifetimes must be positive".into()));
        }
        for v in [self.f_g, self.f_e] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidParameter(format!(
                    "visibility {v} outside [0, 1]"
                )));
            }
        }
        Ok(())
    }

    pub fn t1_ns(&self) -> f64 {
        us_to_ns(self.t1_us)
    }

    pub fn t_phi_ns(&self) -> f64 {
        us_to_ns(self.t_phi_us)
    }

    /// Amplitude-damping rate 1/T1 in 1/ns.
    pub fn damping_rate(&self) -> f64 {
        1.0 / self.t1_ns()
    }

    /// Rate attached to the sigma_z collapse operator; the convention
    /// 1/(2 T_phi) makes off-diagonal coherences decay as exp(-t/T_phi).
    pub fn dephasing_rate(&self) -> f64 {
        1.0 / (2.0 * self.t_phi_ns())
    }
}

/// The measured device table, keyed by qubit name.
pub fn device_qubit(label: &str) -> Result<QubitParams> {
    let q = match label {
        "Q1A" => QubitParams { f_eg_max_ghz: 6.03, f_eg_ghz: 5.2556, eta_ghz: -0.23, t1_us: 8.9, t_phi_us: 1.8, f_g: 0.968, f_e: 0.940 },
        "Q2A" => QubitParams { f_eg_max_ghz: 6.14, f_eg_ghz: 5.8695, eta_ghz: -0.15, t1_us: 5.7, t_phi_us: 3.1, f_g: 0.974, f_e: 0.927 },
        "Q3A" => QubitParams { f_eg_max_ghz: 6.04, f_eg_ghz: 5.5055, eta_ghz: -0.23, t1_us: 6.3, t_phi_us: 2.5, f_g: 0.962, f_e: 0.926 },
        "Q1B" => QubitParams { f_eg_max_ghz: 6.08, f_eg_ghz: 5.3021, eta_ghz: -0.23, t1_us: 22.1, t_phi_us: 2.2, f_g: 0.988, f_e: 0.936 },
        "Q2B" => QubitParams { f_eg_max_ghz: 6.25, f_eg_ghz: 5.8901, eta_ghz: -0.15, t1_us: 9.2, t_phi_us: 3.0, f_g: 0.965, f_e: 0.939 },
        "Q3B" => QubitParams { f_eg_max_ghz: 6.16, f_eg_ghz: 5.3218, eta_ghz: -0.23, t1_us: 21.1, t_phi_us: 1.8, f_g: 0.983, f_e: 0.939 },
        other => return Err(Error::UnknownLabel(other.to_string())),
    };
    Ok(q)
}

// ---------------------------------------------------------------------------
// cable
// ---------------------------------------------------------------------------

/// Communication-mode frequency of the cable, GHz.
pub const COMM_MODE_GHZ: f64 = 5.806;
/// Measured lifetime of the communication mode, ns.
pub const CABLE_T1R_NS: f64 = 477.3;
/// Free spectral range of the cable modes, MHz.
pub const CABLE_FSR_MHZ: f64 = 105.0;

/// Standing-mode model of the cable. `n_modes` must be odd so the central
/// mode sits at the rotating-frame origin of the (m - (M+1)/2) spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CableParams {
    pub n_modes: usize,
    pub fsr_rad_ns: f64,
    pub t1r_ns: f64,
    pub mode_dim: usize,
}

impl Default for CableParams {
    fn default() -> Self {
        Self {
            n_modes: 3,
            fsr_rad_ns: mhz_to_rad_ns(CABLE_FSR_MHZ),
            t1r_ns: CABLE_T1R_NS,
            mode_dim: 2,
        }
    }
}

impl CableParams {
    pub fn validate(&self) -> Result<()> {
        if self.n_modes == 0 || self.n_modes % 2 == 0 {
            return Err(Error::InvalidParameter(format!(
                "n_modes = {} must be odd and >= 1",
                self.n_modes
            )));
        }
        if self.t1r_ns <= 0.0 {
            return Err(Error::InvalidParameter("t1r must be positive".into()));
        }
        if self.mode_dim < 2 {
            return Err(Error::SubsystemTooSmall(self.mode_dim));
        }
        Ok(())
    }

    /// Rotating-frame offset of mode `m` (1-based), rad/ns.
    pub fn mode_offset(&self, m: usize) -> f64 {
        (m as f64 - (self.n_modes as f64 + 1.0) / 2.0) * self.fsr_rad_ns
    }

    pub fn mode_label(m: usize) -> String {
        format!("C{m}")
    }

    pub fn mode_labels(&self) -> Vec<String> {
        (1..=self.n_modes).map(Self::mode_label).collect()
    }

    /// 1-based index of the mode at the rotating-frame origin.
    pub fn central_mode(&self) -> usize {
        (self.n_modes + 1) / 2
    }
}

// ---------------------------------------------------------------------------
// coupler
// ---------------------------------------------------------------------------

/// Lumped-element model of the tunable qubit-cable coupler. Inductances in
/// nH, junction phase in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplerParams {
    pub l_g_nh: f64,
    pub l_w_nh: f64,
    pub l_t_nh: f64,
    pub l_j_nh: f64,
    pub l_n_nh: f64,
    pub delta_rad: f64,
}

/// Guard on |cos(delta)| below which the coupler model diverges.
const COS_DELTA_GUARD: f64 = 1e-6;

impl CouplerParams {
    /// Measured circuit values, with the qubit inductance inferred from the
    /// transmon relation (see [`junction_inductance_nh`]).
    pub fn device_defaults(qubit: &QubitParams) -> Self {
        Self {
            l_g_nh: 0.2,
            l_w_nh: 0.1,
            l_t_nh: 0.62,
            l_j_nh: junction_inductance_nh(qubit.f_eg_max_ghz, qubit.eta_ghz),
            l_n_nh: 121.0,
            delta_rad: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("l_g", self.l_g_nh),
            ("l_w", self.l_w_nh),
            ("l_t", self.l_t_nh),
            ("l_j", self.l_j_nh),
            ("l_n", self.l_n_nh),
        ] {
            if v <= 0.0 {
                return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
            }
        }
        if self.delta_rad.cos().abs() < COS_DELTA_GUARD {
            return Err(Error::SingularCoupler(self.delta_rad.cos().abs()));
        }
        Ok(())
    }

    /// Effective mutual inductance between qubit and cable mode, nH:
    /// M = L_g^2 / (2 L_g + L_w + L_T / cos(delta)).
    pub fn effective_mutual_nh(&self) -> Result<f64> {
        self.validate()?;
        Ok(self.l_g_nh * self.l_g_nh
            / (2.0 * self.l_g_nh + self.l_w_nh + self.l_t_nh / self.delta_rad.cos()))
    }

    /// Coupling strength to the mode at `f_n_ghz` for a qubit at `f_q_ghz`:
    /// g_n = (sqrt(w_q w_n)/2) * M / sqrt((L_J + L_g)(L_n + L_g)), rad/ns.
    pub fn coupling_strength(&self, f_q_ghz: f64, f_n_ghz: f64) -> Result<f64> {
        let m = self.effective_mutual_nh()?;
        let w_q = ghz_to_rad_ns(f_q_ghz);
        let w_n = ghz_to_rad_ns(f_n_ghz);
        Ok((w_q * w_n).sqrt() / 2.0 * m
            / ((self.l_j_nh + self.l_g_nh) * (self.l_n_nh + self.l_g_nh)).sqrt())
    }

    /// |g| maximized over the junction phase on a fine grid over [0, pi),
    /// excluding the guard band around pi/2.
    pub fn max_coupling_strength(&self, f_q_ghz: f64, f_n_ghz: f64) -> Result<f64> {
        let mut best: f64 = 0.0;
        let steps = 2000;
        for k in 0..steps {
            let delta = std::f64::consts::PI * (k as f64 + 0.5) / steps as f64;
            if delta.cos().abs() < 1e-3 {
                continue;
            }
            let p = Self { delta_rad: delta, ..*self };
            best = best.max(p.coupling_strength(f_q_ghz, f_n_ghz)?.abs());
        }
        Ok(best)
    }
}

/// Josephson inductance inferred from the transmon relations
/// f_eg = sqrt(8 E_J E_C) - E_C with E_C = |eta|, in nH.
pub fn junction_inductance_nh(f_eg_max_ghz: f64, eta_ghz: f64) -> f64 {
    // (Phi_0 / 2 pi)^2 / h in nH * GHz
    const PHI0_OVER_2PI_SQ_OVER_H_NH_GHZ: f64 = 163.4566;
    let e_c = eta_ghz.abs();
    let e_j = (f_eg_max_ghz + e_c).powi(2) / (8.0 * e_c);
    PHI0_OVER_2PI_SQ_OVER_H_NH_GHZ / e_j
}
