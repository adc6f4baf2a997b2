//! Small fitting and series-analysis helpers shared by the experiment
//! pipelines and their tests.

use crate::error::{Error, Result};
use crate::state::DensityMatrix;

/// Least-squares line through (x, y); returns (slope, intercept).
pub fn linear_regression(x: &[f64], y: &[f64]) -> Result<(f64, f64)> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::FitFailure("need at least two points".into()));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (xi, yi) in x.iter().zip(y) {
        sxx += (xi - mx) * (xi - mx);
        sxy += (xi - mx) * (yi - my);
    }
    if sxx <= 0.0 {
        return Err(Error::FitFailure("degenerate abscissa".into()));
    }
    let slope = sxy / sxx;
    Ok((slope, my - slope * mx))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpFit {
    pub amplitude: f64,
    pub tau: f64,
}

/// Fit y = A exp(-t / tau) by linear regression on ln(y).
pub fn fit_exponential_decay(t: &[f64], y: &[f64]) -> Result<ExpFit> {
    if y.iter().any(|&v| v <= 0.0) {
        return Err(Error::FitFailure("non-positive sample in exponential fit".into()));
    }
    let logs: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let (slope, intercept) = linear_regression(t, &logs)?;
    if slope >= 0.0 {
        return Err(Error::FitFailure(format!("series does not decay (slope {slope:.3e})")));
    }
    Ok(ExpFit {
        amplitude: intercept.exp(),
        tau: -1.0 / slope,
    })
}

/// First interior local minimum of a sampled series, refined by fitting a
/// parabola through the three points around it.
pub fn first_minimum(t: &[f64], y: &[f64]) -> Result<(f64, f64)> {
    if t.len() != y.len() || t.len() < 3 {
        return Err(Error::FitFailure("need at least three points".into()));
    }
    for k in 1..y.len() - 1 {
        if y[k] <= y[k - 1] && y[k] <= y[k + 1] {
            let h = (t[k + 1] - t[k - 1]) / 2.0;
            let denom = y[k + 1] - 2.0 * y[k] + y[k - 1];
            let (t_min, y_min) = if denom.abs() > 1e-300 {
                let shift = 0.5 * (y[k - 1] - y[k + 1]) / denom * h;
                (
                    t[k] + shift,
                    y[k] - 0.25 * (y[k - 1] - y[k + 1]) * shift / h,
                )
            } else {
                (t[k], y[k])
            };
            return Ok((t_min, y_min));
        }
    }
    Err(Error::FitFailure("no interior minimum found".into()))
}

/// All interior local minima of a sampled series, each refined as in
/// [`first_minimum`]. Plateaus report a single entry.
pub fn series_minima(t: &[f64], y: &[f64]) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let mut k = 1;
    while k + 1 < y.len() {
        if y[k] <= y[k - 1] && y[k] <= y[k + 1] {
            if let Ok(m) = first_minimum(&t[k - 1..=k + 1], &y[k - 1..=k + 1]) {
                out.push(m);
            }
            // skip the right shoulder so flat minima count once
            while k + 1 < y.len() && y[k + 1] <= y[k] {
                k += 1;
            }
        }
        k += 1;
    }
    out
}

/// Oscillation angular frequency of a cos^2-like population series, from the
/// mean spacing of its deep population minima (one full period apart).
/// Averaging over several minima suppresses the ripple that multi-mode
/// leakage puts on any single minimum; ripple dips near the top of the
/// envelope are excluded by the mid-range cut.
pub fn oscillation_frequency(t: &[f64], y: &[f64]) -> Result<f64> {
    let hi = y.iter().fold(f64::MIN, |a, &b| a.max(b));
    let lo = y.iter().fold(f64::MAX, |a, &b| a.min(b));
    let cut = lo + 0.5 * (hi - lo);
    let minima: Vec<(f64, f64)> = series_minima(t, y)
        .into_iter()
        .filter(|&(_, v)| v < cut)
        .collect();
    if minima.len() < 2 {
        return Err(Error::FitFailure("need at least two deep minima".into()));
    }
    let spacing = (minima.last().unwrap().0 - minima[0].0) / (minima.len() - 1) as f64;
    Ok(std::f64::consts::TAU / spacing)
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

pub fn sample_std(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    (xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
}

/// Split of a two-qubit state's infidelity to psi- into a population
/// (damping) part and an off-diagonal (phase) part.
///
/// With P the weight left in the single-excitation sector and C the
/// coherence -2 Re rho(ge, eg), the fidelity is (P + C)/2. Pure damping
/// keeps the coherence at its ceiling 2 sqrt(rho_ge rho_eg); anything below
/// that ceiling is attributed to phase errors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InfidelitySplit {
    pub damping: f64,
    pub phase: f64,
}

impl InfidelitySplit {
    pub fn total(&self) -> f64 {
        self.damping + self.phase
    }

    pub fn damping_fraction(&self) -> f64 {
        let t = self.total();
        if t <= 0.0 {
            0.0
        } else {
            self.damping / t
        }
    }
}

pub fn bell_infidelity_split(rho: &DensityMatrix) -> Result<InfidelitySplit> {
    if rho.dim() != 4 {
        return Err(Error::InvalidParameter("expected a two-qubit state".into()));
    }
    let p_ge = rho.population(&[0, 1]);
    let p_eg = rho.population(&[1, 0]);
    let coherence = -2.0 * rho.entry(&[0, 1], &[1, 0]).re;
    let population = p_ge + p_eg;
    let ceiling = 2.0 * (p_ge * p_eg).sqrt();
    let damping = 1.0 - population / 2.0 - ceiling / 2.0;
    let phase = (ceiling - coherence) / 2.0;
    Ok(InfidelitySplit {
        damping: damping.max(0.0),
        phase: phase.max(0.0),
    })
}

/// Effective per-qubit coherence time (us) extracted from a Bell-fidelity
/// series, with the damping contribution fixed by the known T1s.
///
/// The model is F(t) = (e^{-ga t} + e^{-gb t})/4 + (1/2) e^{-(ga+gb)t/2} c(t)
/// with c the residual pair coherence; c is inverted per point, an
/// exponential rate lambda is fit through the origin, and the per-qubit
/// effective T2 is 1 / ((ga + gb)/4 + lambda/2).
pub fn fit_effective_t2_us(
    t_ns: &[f64],
    fidelity: &[f64],
    t1a_us: f64,
    t1b_us: f64,
) -> Result<f64> {
    if t_ns.len() != fidelity.len() || t_ns.len() < 2 {
        return Err(Error::FitFailure("need at least two points".into()));
    }
    let ga = 1.0 / (t1a_us * 1e3);
    let gb = 1.0 / (t1b_us * 1e3);
    let mut num = 0.0;
    let mut den = 0.0;
    for (&t, &f) in t_ns.iter().zip(fidelity) {
        if t <= 0.0 {
            continue;
        }
        let a = 0.25 * ((-ga * t).exp() + (-gb * t).exp());
        let b = 0.5 * (-(ga + gb) * t / 2.0).exp();
        let c = ((f - a) / b).clamp(1e-12, 1.0);
        num += t * (-c.ln());
        den += t * t;
    }
    if den <= 0.0 {
        return Err(Error::FitFailure("no positive-time samples".into()));
    }
    let lambda = num / den; // pair residual dephasing rate, 1/ns
    let per_qubit_rate = (ga + gb) / 4.0 + lambda / 2.0;
    Ok(1.0 / per_qubit_rate / 1e3)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn exponential_fit_recovers_parameters() {
        let t: Vec<f64> = (0..20).map(|k| 50.0 * k as f64).collect();
        let y: Vec<f64> = t.iter().map(|&t| 0.8 * (-t / 477.3).exp()).collect();
        let fit = fit_exponential_decay(&t, &y).unwrap();
        assert_relative_eq!(fit.tau, 477.3, max_relative = 1e-10);
        assert_relative_eq!(fit.amplitude, 0.8, max_relative = 1e-10);
    }

    #[test]
    fn first_minimum_refines_between_samples() {
        let t: Vec<f64> = (0..200).map(|k| 0.5 * k as f64).collect();
        let y: Vec<f64> = t.iter().map(|&t| (0.1 * (t - 41.63)).powi(2)).collect();
        let (t_min, _) = first_minimum(&t, &y).unwrap();
        assert_abs_diff_eq!(t_min, 41.63, epsilon = 1e-6);
    }

    #[test]
    fn infidelity_split_pure_damping_and_pure_phase() {
        use crate::channels::{amplitude_damped_bell_matrix, bell_space};
        // purely damped pair: all infidelity in the damping bucket
        let damped = DensityMatrix::new(bell_space(), amplitude_damped_bell_matrix(0.3)).unwrap();
        let split = bell_infidelity_split(&damped).unwrap();
        assert!(split.damping_fraction() > 0.999, "{split:?}");
        // pure phase mix: psi- with weight 1-e, psi+ with weight e
        use crate::channels::{bell_state, BellLabel};
        let mix = DensityMatrix::mixture(&[
            (0.9, &bell_state(BellLabel::PsiMinus).to_density()),
            (0.1, &bell_state(BellLabel::PsiPlus).to_density()),
        ])
        .unwrap();
        let split = bell_infidelity_split(&mix).unwrap();
        assert!(split.damping_fraction() < 1e-9, "{split:?}");
        assert_abs_diff_eq!(split.phase, 0.1, epsilon = 1e-12);
    }

    #[test]
    fn effective_t2_recovers_known_dephasing() {
        // synthesize the model series with a known residual T_phi and check
        // the fitted effective T2 against the closed form
        let (t1a, t1b) = (5.7, 9.2);
        let t_phi_pair = 0.0002; // 1/ns pair rate
        let t: Vec<f64> = (0..=20).map(|k| 70.0 * k as f64).collect();
        let f: Vec<f64> = t
            .iter()
            .map(|&t| {
                let (ga, gb) = (1.0 / 5700.0, 1.0 / 9200.0);
                0.25 * ((-ga * t).exp() + (-gb * t).exp())
                    + 0.5 * (-(ga + gb) * t / 2.0).exp() * (-t_phi_pair * t).exp()
            })
            .collect();
        let t2 = fit_effective_t2_us(&t, &f, t1a, t1b).unwrap();
        let expected = 1.0 / ((1.0 / 5700.0 + 1.0 / 9200.0) / 4.0 + t_phi_pair / 2.0) / 1e3;
        assert_relative_eq!(t2, expected, max_relative = 1e-6);
    }
}
