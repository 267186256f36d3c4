//! Edge diffusion `dν/dt = −Lν` driven by the 1-connection Laplacians.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::cochain::Cochain;
use crate::complexes::DirectedSimplicialComplex;
use crate::connection::{connection_1down, connection_1up};
use crate::linalg::{
    group_degenerate, hermitian_eigendecomposition, hermitian_eigenvalues, inner, vec_norm, ComplexMatrix,
    HermitianEigen, LinalgError, C64,
};
use crate::wrap_angle;

pub const DEFAULT_T_MAX: f64 = 50.0;
/// Upper bound on the automatically chosen step.
pub const MAX_AUTO_DT: f64 = 0.01;
/// Fraction of the `2/λ_max` stability bound used by the automatic step.
pub const AUTO_DT_FRACTION: f64 = 0.9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DiffusionError {
    #[error("initial cochain has {actual} components, operator needs {expected}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("step {dt} is not below the stability bound 2/λ_max = {bound}")]
    UnstableStep { dt: f64, bound: f64 },
    #[error("invalid diffusion parameter: {0}")]
    InvalidParameter(String),
    #[error("angle form needs an order-1 or order-2 cochain")]
    ScalarCochain,
    #[error("unknown operator selector '{0}' (expected up, down or combined)")]
    UnknownSelector(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Selector {
    Up,
    Down,
    Combined,
}

impl Selector {
    pub const ALL: [Selector; 3] = [Selector::Up, Selector::Down, Selector::Combined];

    pub fn name(self) -> &'static str {
        match self {
            Selector::Up => "up",
            Selector::Down => "down",
            Selector::Combined => "combined",
        }
    }

    /// The selected 1-connection Laplacian at `delta`.
    pub fn operator(self, c: &DirectedSimplicialComplex, delta: f64) -> ComplexMatrix {
        match self {
            Selector::Up => connection_1up(c, delta).matrix,
            Selector::Down => connection_1down(c, delta).matrix,
            Selector::Combined => &connection_1up(c, delta).matrix + &connection_1down(c, delta).matrix,
        }
    }
}

impl fmt::Display for Selector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Selector {
    type Err = DiffusionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "up" | "1up" => Ok(Selector::Up),
            "down" | "1down" => Ok(Selector::Down),
            "combined" | "up+down" => Ok(Selector::Combined),
            other => Err(DiffusionError::UnknownSelector(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffusionParams {
    pub t_max: f64,
    /// `None` picks `min(0.01, 0.9·2/λ_max)`.
    pub dt: Option<f64>,
    /// Time between recorded samples; rounded to a whole number of steps.
    pub sample_interval: f64,
}

impl Default for DiffusionParams {
    fn default() -> Self {
        Self {
            t_max: DEFAULT_T_MAX,
            dt: None,
            sample_interval: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Cochain>,
    pub energies: Vec<f64>,
    pub dt: f64,
}

impl Trajectory {
    pub fn final_state(&self) -> &Cochain {
        self.states.last().expect("trajectory has at least the initial sample")
    }
}

/// `ν†Lν`.
pub fn energy(l: &ComplexMatrix, v: &[C64]) -> Result<f64, LinalgError> {
    let lv = l.mul_vec(v)?;
    Ok(inner(v, &lv).re)
}

/// Largest eigenvalue of a Hermitian matrix (0 for the empty matrix).
pub fn spectral_radius(l: &ComplexMatrix) -> Result<f64, LinalgError> {
    Ok(hermitian_eigenvalues(l)?.last().copied().unwrap_or(0.0).max(0.0))
}

/// Integrate on `c` with the operator picked by `selector`.
pub fn diffuse(
    selector: Selector,
    c: &DirectedSimplicialComplex,
    delta: f64,
    nu0: &Cochain,
    params: DiffusionParams,
) -> Result<Trajectory, DiffusionError> {
    diffuse_operator(&selector.operator(c, delta), nu0, params)
}

/// Classical fourth-order Runge–Kutta on `dν/dt = −Lν`.
pub fn diffuse_operator(
    l: &ComplexMatrix,
    nu0: &Cochain,
    params: DiffusionParams,
) -> Result<Trajectory, DiffusionError> {
    if nu0.len() != l.rows() {
        return Err(DiffusionError::DimensionMismatch {
            expected: l.rows(),
            actual: nu0.len(),
        });
    }
    if !(params.t_max >= 0.0 && params.t_max.is_finite()) {
        return Err(DiffusionError::InvalidParameter(format!("t_max = {}", params.t_max)));
    }
    if params.sample_interval.is_nan() || params.sample_interval <= 0.0 {
        return Err(DiffusionError::InvalidParameter(format!(
            "sample interval = {}",
            params.sample_interval
        )));
    }
    let lambda_max = spectral_radius(l)?;
    let bound = if lambda_max > 0.0 {
        2.0 / lambda_max
    } else {
        f64::INFINITY
    };
    let dt = match params.dt {
        Some(dt) => {
            if !(dt > 0.0 && dt.is_finite()) {
                return Err(DiffusionError::InvalidParameter(format!("dt = {dt}")));
            }
            if dt >= bound {
                return Err(DiffusionError::UnstableStep { dt, bound });
            }
            dt
        }
        None => MAX_AUTO_DT.min(AUTO_DT_FRACTION * bound),
    };
    let steps = (params.t_max / dt).round() as usize;
    let every = ((params.sample_interval / dt).round() as usize).max(1);

    let order = nu0.order();
    let mut v = nu0.values().to_vec();
    let mut times = vec![0.0];
    let mut states = vec![nu0.clone()];
    let mut energies = vec![energy(l, &v)?];
    for step in 1..=steps {
        v = rk4_step(l, &v, dt)?;
        if step % every == 0 || step == steps {
            times.push(step as f64 * dt);
            energies.push(energy(l, &v)?);
            states.push(
                Cochain::from_flat(order, v.clone()).map_err(|_| DiffusionError::DimensionMismatch {
                    expected: l.rows(),
                    actual: v.len(),
                })?,
            );
        }
    }
    Ok(Trajectory {
        times,
        states,
        energies,
        dt,
    })
}

fn rk4_step(l: &ComplexMatrix, v: &[C64], dt: f64) -> Result<Vec<C64>, LinalgError> {
    let f = |x: &[C64]| -> Result<Vec<C64>, LinalgError> { Ok(l.mul_vec(x)?.into_iter().map(|z| -z).collect()) };
    let axpy = |x: &[C64], k: &[C64], h: f64| -> Vec<C64> { x.iter().zip(k).map(|(a, b)| a + b * h).collect() };
    let k1 = f(v)?;
    let k2 = f(&axpy(v, &k1, dt / 2.0))?;
    let k3 = f(&axpy(v, &k2, dt / 2.0))?;
    let k4 = f(&axpy(v, &k3, dt))?;
    Ok((0..v.len())
        .map(|i| v[i] + (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (dt / 6.0))
        .collect())
}

/// Exact solution `ν(t) = Σ_k e^{−λ_k t}(v_k†ν0)v_k` from one
/// eigendecomposition.
#[derive(Debug, Clone)]
pub struct SpectralPropagator {
    eigen: HermitianEigen,
}

impl SpectralPropagator {
    pub fn new(l: &ComplexMatrix) -> Result<Self, LinalgError> {
        Ok(Self {
            eigen: hermitian_eigendecomposition(l)?,
        })
    }

    pub fn eigen(&self) -> &HermitianEigen {
        &self.eigen
    }

    pub fn propagate(&self, nu0: &Cochain, t: f64) -> Result<Cochain, DiffusionError> {
        let n = self.eigen.values.len();
        if nu0.len() != n {
            return Err(DiffusionError::DimensionMismatch {
                expected: n,
                actual: nu0.len(),
            });
        }
        if t == 0.0 {
            return Ok(nu0.clone());
        }
        let mut out = vec![C64::new(0.0, 0.0); n];
        for (k, &lambda) in self.eigen.values.iter().enumerate() {
            let vk = self.eigen.vector(k);
            let coeff = inner(&vk, nu0.values()) * (-lambda * t).exp();
            for (o, x) in out.iter_mut().zip(&vk) {
                *o += x * coeff;
            }
        }
        Ok(Cochain::from_flat(nu0.order(), out).expect("same length as input"))
    }
}

pub fn spectral_propagate(l: &ComplexMatrix, nu0: &Cochain, t: f64) -> Result<Cochain, DiffusionError> {
    SpectralPropagator::new(l)?.propagate(nu0, t)
}

/// `amplitude·(cos ψ·e^{iθ}, sin ψ·e^{iφ})` on one simplex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplexAngles {
    pub amplitude: f64,
    pub psi: f64,
    pub theta: f64,
    pub phi: f64,
}

impl SimplexAngles {
    pub fn reconstruct(&self) -> [C64; 2] {
        [
            C64::from_polar(self.amplitude * self.psi.cos(), self.theta),
            C64::from_polar(self.amplitude * self.psi.sin(), self.phi),
        ]
    }
}

pub type AngleForm = Vec<SimplexAngles>;

fn argument(z: C64) -> f64 {
    if z.norm() == 0.0 {
        0.0
    } else {
        wrap_angle(z.arg())
    }
}

pub fn to_angles(nu: &Cochain) -> Result<AngleForm, DiffusionError> {
    if nu.order() == 0 {
        return Err(DiffusionError::ScalarCochain);
    }
    Ok((0..nu.simplex_count())
        .map(|l| {
            let [a, b] = nu.pair(l);
            SimplexAngles {
                amplitude: a.norm().hypot(b.norm()),
                psi: b.norm().atan2(a.norm()).clamp(0.0, FRAC_PI_2),
                theta: argument(a),
                phi: argument(b),
            }
        })
        .collect())
}

/// Multiply `v` by the unit phase that makes `⟨reference, v⟩` real and
/// non-negative.
pub fn align_phase(v: &[C64], reference: &[C64]) -> Vec<C64> {
    let z = inner(reference, v);
    if z.norm() == 0.0 {
        return v.to_vec();
    }
    let u = C64::from_polar(1.0, -z.arg());
    v.iter().map(|x| x * u).collect()
}

/// Relative energy below which a trajectory has reached the kernel.
pub const KERNEL_ENERGY_RATIO: f64 = 1e-10;
/// Smallest final norm still counted as a kernel state.
pub const KERNEL_MIN_NORM: f64 = 1e-6;
/// Distance from the slowest eigenspace accepted as a slow-mode limit.
pub const SLOW_MODE_TOL: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Equilibrium {
    KernelState,
    SlowMode { lambda: f64 },
    NotConverged,
}

impl fmt::Display for Equilibrium {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Equilibrium::KernelState => f.write_str("kernel_state"),
            Equilibrium::SlowMode { lambda } => write!(f, "slow_mode({lambda:.6})"),
            Equilibrium::NotConverged => f.write_str("not_converged"),
        }
    }
}

/// Classify the limit of a trajectory of `dν/dt = −Lν`.
pub fn classify_equilibrium(traj: &Trajectory, l: &ComplexMatrix) -> Result<Equilibrium, DiffusionError> {
    let e0 = traj.energies[0];
    let final_state = traj.final_state();
    let e_final = *traj.energies.last().unwrap();
    let norm = final_state.norm();
    if e_final <= KERNEL_ENERGY_RATIO * e0 && norm > KERNEL_MIN_NORM {
        return Ok(Equilibrium::KernelState);
    }
    if norm == 0.0 {
        return Ok(Equilibrium::NotConverged);
    }
    let eig = hermitian_eigendecomposition(l)?;
    let scale = l.frobenius_norm().max(1.0);
    let kernel_tol = 1e-8 * scale;
    let Some(start) = eig.values.iter().position(|&x| x > kernel_tol) else {
        return Ok(Equilibrium::NotConverged);
    };
    let groups = group_degenerate(&eig.values[start..], 1e-8 * scale);
    let (lambda, mult) = groups[0];
    let u: Vec<C64> = final_state.values().iter().map(|z| z / norm).collect();
    let mut projection = vec![C64::new(0.0, 0.0); u.len()];
    for k in start..start + mult {
        let vk = eig.vector(k);
        let c = inner(&vk, &u);
        for (p, x) in projection.iter_mut().zip(&vk) {
            *p += x * c;
        }
    }
    // The distance to the projection is unaffected by a global phase.
    let distance = vec_norm(&u.iter().zip(&projection).map(|(a, p)| a - p).collect::<Vec<_>>());
    if distance <= SLOW_MODE_TOL {
        Ok(Equilibrium::SlowMode { lambda })
    } else {
        Ok(Equilibrium::NotConverged)
    }
}
