//! Fixed-step RK4 integration of the Lindblad master equation
//! d rho/dt = -i[H, rho] + sum_k gamma_k (L rho L^dag - {L^dag L, rho}/2)
//! over piecewise-constant (rectangular-pulse) Hamiltonian segments.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::operator::{hermiticity_deviation, re, C64, ComplexOperator, I};
use crate::state::DensityMatrix;
use crate::tol;

/// Default integrator step, ns.
pub const DEFAULT_DT_NS: f64 = 0.05;
/// Default trajectory sampling interval, ns.
pub const DEFAULT_SAMPLE_DT_NS: f64 = 0.5;

/// One collapse operator with its rate (1/ns).
#[derive(Debug, Clone)]
pub struct CollapseOp {
    pub operator: ComplexOperator,
    pub rate: f64,
}

/// The set of collapse operators active during a segment.
#[derive(Debug, Clone, Default)]
pub struct CollapseSet {
    ops: Vec<CollapseOp>,
}

impl CollapseSet {
    pub fn new(ops: Vec<CollapseOp>) -> Result<Self> {
        for op in &ops {
            if op.rate < 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "collapse rate {} < 0",
                    op.rate
                )));
            }
        }
        Ok(Self { ops })
    }

    pub fn empty() -> Self {
        Self { ops: Vec::new() }
    }

    pub fn push(&mut self, operator: ComplexOperator, rate: f64) -> Result<()> {
        if rate < 0.0 {
            return Err(Error::InvalidParameter(format!("collapse rate {rate} < 0")));
        }
        self.ops.push(CollapseOp { operator, rate });
        Ok(())
    }

    pub fn ops(&self) -> &[CollapseOp] {
        &self.ops
    }
}

/// A constant-Hamiltonian stretch of evolution.
#[derive(Debug, Clone)]
pub struct EvolutionSegment {
    pub hamiltonian: ComplexOperator,
    pub collapse: CollapseSet,
    pub duration_ns: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct EvolveOptions {
    pub dt_ns: f64,
    pub sample_dt_ns: f64,
    /// Validate sampled states against the density-matrix invariants.
    pub validate: bool,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        Self {
            dt_ns: DEFAULT_DT_NS,
            sample_dt_ns: DEFAULT_SAMPLE_DT_NS,
            validate: true,
        }
    }
}

/// Sampled states along an integration run.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times_ns: Vec<f64>,
    pub states: Vec<DensityMatrix>,
}

impl Trajectory {
    pub fn final_state(&self) -> &DensityMatrix {
        self.states.last().expect("trajectory is never empty")
    }

    /// Series of a scalar observable over the trajectory.
    pub fn series<F: Fn(&DensityMatrix) -> f64>(&self, f: F) -> Vec<(f64, f64)> {
        self.times_ns
            .iter()
            .zip(&self.states)
            .map(|(&t, s)| (t, f(s)))
            .collect()
    }
}

struct SegmentWork {
    /// -iH - (1/2) sum gamma L^dag L, the deterministic drift generator.
    k: DMatrix<C64>,
    /// sqrt(gamma) L for each collapse operator.
    jumps: Vec<DMatrix<C64>>,
    duration_ns: f64,
}

impl SegmentWork {
    fn new(seg: &EvolutionSegment, dim: usize) -> Result<Self> {
        if seg.hamiltonian.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: seg.hamiltonian.dim(),
            });
        }
        let herm = seg.hamiltonian.hermiticity_deviation();
        if herm > tol::HERMITICITY {
            return Err(Error::NotHermitian(herm));
        }
        if seg.duration_ns <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "segment duration {} <= 0",
                seg.duration_ns
            )));
        }
        let mut k = seg.hamiltonian.matrix().map(|z| z * (-I));
        let mut jumps = Vec::with_capacity(seg.collapse.ops().len());
        for c in seg.collapse.ops() {
            if c.operator.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: c.operator.dim(),
                });
            }
            if c.rate == 0.0 {
                continue;
            }
            let l = c.operator.matrix().map(|z| z * re(c.rate.sqrt()));
            k -= (l.adjoint() * &l).map(|z| z * re(0.5));
            jumps.push(l);
        }
        Ok(Self {
            k,
            jumps,
            duration_ns: seg.duration_ns,
        })
    }

    /// Lindblad right-hand side K rho + rho K^dag + sum L rho L^dag.
    fn rhs(&self, rho: &DMatrix<C64>) -> DMatrix<C64> {
        let mut out = &self.k * rho;
        out += rho * self.k.adjoint();
        for l in &self.jumps {
            out += l * rho * l.adjoint();
        }
        out
    }

    fn rk4_step(&self, rho: &DMatrix<C64>, dt: f64) -> DMatrix<C64> {
        let k1 = self.rhs(rho);
        let k2 = self.rhs(&(rho + k1.map(|z| z * re(dt / 2.0))));
        let k3 = self.rhs(&(rho + k2.map(|z| z * re(dt / 2.0))));
        let k4 = self.rhs(&(rho + k3.map(|z| z * re(dt))));
        rho + (k1 + k2.map(|z| z * re(2.0)) + k3.map(|z| z * re(2.0)) + k4)
            .map(|z| z * re(dt / 6.0))
    }
}

/// Integrate a piecewise-constant Lindblad evolution, sampling roughly every
/// `sample_dt_ns` plus at every segment boundary. Deterministic: the step
/// count per segment is fixed by `dt_ns`.
pub fn lindblad_evolve(
    segments: &[EvolutionSegment],
    rho0: &DensityMatrix,
    opts: &EvolveOptions,
) -> Result<Trajectory> {
    if segments.is_empty() {
        return Err(Error::InvalidParameter("no segments to evolve".into()));
    }
    if opts.dt_ns <= 0.0 {
        return Err(Error::InvalidParameter(format!("dt = {} <= 0", opts.dt_ns)));
    }
    let dim = rho0.dim();
    let space = rho0.space().clone();

    let mut times = vec![0.0];
    let mut states = vec![rho0.clone()];
    let mut rho = rho0.matrix().clone();
    let mut t = 0.0;

    for seg in segments {
        let work = SegmentWork::new(seg, dim)?;
        let n_steps = (work.duration_ns / opts.dt_ns).ceil().max(1.0) as usize;
        let dt = work.duration_ns / n_steps as f64;
        let sample_every = (opts.sample_dt_ns / dt).round().max(1.0) as usize;
        for step in 1..=n_steps {
            rho = work.rk4_step(&rho, dt);
            if step % sample_every == 0 || step == n_steps {
                let t_here = t + dt * step as f64;
                let state = package_state(&space, &rho, t_here, opts.validate)?;
                times.push(t_here);
                states.push(state);
            }
        }
        t += work.duration_ns;
    }
    Ok(Trajectory {
        times_ns: times,
        states,
    })
}

/// Hermitize and renormalize integrator round-off, then validate.
fn package_state(
    space: &crate::space::CompositeSpace,
    rho: &DMatrix<C64>,
    t_ns: f64,
    validate: bool,
) -> Result<DensityMatrix> {
    let tr = rho.trace();
    if !tr.re.is_finite() {
        return Err(Error::Integration {
            t_ns,
            diagnostic: "non-finite trace; reduce the step size".into(),
        });
    }
    let drift = (tr.re - 1.0).abs().max(tr.im.abs());
    if drift > tol::TRAJECTORY_DRIFT {
        return Err(Error::Integration {
            t_ns,
            diagnostic: format!("trace drift {drift:.3e} exceeds {:.0e}", tol::TRAJECTORY_DRIFT),
        });
    }
    let herm = hermiticity_deviation(rho);
    if herm > tol::TRAJECTORY_DRIFT {
        return Err(Error::Integration {
            t_ns,
            diagnostic: format!("hermiticity drift {herm:.3e}"),
        });
    }
    let sym = (rho.map(|z| z / tr.re) + rho.adjoint().map(|z| z / tr.re)).map(|z| z * re(0.5));
    if validate {
        DensityMatrix::new(space.clone(), sym).map_err(|e| Error::Integration {
            t_ns,
            diagnostic: format!("sampled state failed validation: {e}"),
        })
    } else {
        Ok(DensityMatrix::from_parts_unchecked(space.clone(), sym))
    }
}
