//! Browser bindings: δ-sweeps of spectra and commutator norms, zero phases and
//! edge diffusion on the built-in complexes or a pasted complex JSON.

use hocl::cochain::Cochain;
use hocl::diffusion::{classify_equilibrium, diffuse_operator, to_angles, DiffusionParams};
use hocl::generators::{builtin, from_json};
use hocl::sweeps::{
    build_operator, commutator_sweep, delta_grid, prepare, spectrum_sweep, zero_eigenvalue_deltas, OperatorTag,
    ZeroSet, ZERO_THRESHOLD,
};
use hocl::DirectedSimplicialComplex;
use wasm_bindgen::prelude::*;

const MAX_POINTS: usize = 4096;
const MAX_T: f64 = 500.0;

/// Built-in name (`case1`..`case4`, `torusMxNt1`, `torusMxNt2`) or complex JSON.
fn load(source: &str) -> Result<DirectedSimplicialComplex, String> {
    let text = source.trim();
    if text.starts_with('{') {
        from_json(text).map_err(|e| e.to_string())
    } else {
        builtin(text).map_err(|e| e.to_string())
    }
}

fn tag(op: &str) -> Result<OperatorTag, String> {
    op.parse().map_err(|e: hocl::sweeps::SweepError| e.to_string())
}

fn grid(points: usize) -> Result<Vec<f64>, String> {
    if points == 0 || points > MAX_POINTS {
        return Err(format!("points must be between 1 and {MAX_POINTS}"));
    }
    Ok(delta_grid(points))
}

/// Eigenvalues over the δ grid, row-major `points × dimension`, and the zero
/// phases of the smallest eigenvalue.
#[wasm_bindgen]
pub struct Spectrum {
    deltas: Vec<f64>,
    values: Vec<f64>,
    dimension: usize,
    zeros: Vec<f64>,
    zero_text: String,
}

#[wasm_bindgen]
impl Spectrum {
    #[wasm_bindgen(getter)]
    pub fn deltas(&self) -> Vec<f64> {
        self.deltas.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn values(&self) -> Vec<f64> {
        self.values.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Isolated zero phases; intervals are reported through `zero_text` only.
    #[wasm_bindgen(getter)]
    pub fn zeros(&self) -> Vec<f64> {
        self.zeros.clone()
    }

    #[wasm_bindgen(getter, js_name = zeroText)]
    pub fn zero_text(&self) -> String {
        self.zero_text.clone()
    }
}

pub fn compute_spectrum(source: &str, op: &str, points: usize) -> Result<Spectrum, String> {
    let c = load(source)?;
    let tag = tag(op)?;
    let grid = grid(points)?;
    let sweep = spectrum_sweep(&c, tag, &grid).map_err(|e| e.to_string())?;
    let found = zero_eigenvalue_deltas(&c, tag, &sweep, ZERO_THRESHOLD).map_err(|e| e.to_string())?;
    let zeros = found
        .iter()
        .filter_map(|z| match z {
            ZeroSet::Point { delta } => Some(*delta),
            ZeroSet::Interval { .. } => None,
        })
        .collect();
    let zero_text = if found.is_empty() {
        "none".into()
    } else {
        found.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
    };
    Ok(Spectrum {
        dimension: sweep.dimension,
        values: sweep.eigenvalues.concat(),
        deltas: sweep.deltas,
        zeros,
        zero_text,
    })
}

pub fn compute_commutator(source: &str, points: usize) -> Result<Vec<f64>, String> {
    let c = load(source)?;
    let sweep = commutator_sweep(&c, &grid(points)?).map_err(|e| e.to_string())?;
    Ok(sweep.commutator_norms)
}

/// Sampled angle form of a diffusion run, row-major `samples × simplices`.
#[wasm_bindgen]
pub struct Diffusion {
    times: Vec<f64>,
    energies: Vec<f64>,
    psi: Vec<f64>,
    theta: Vec<f64>,
    phi: Vec<f64>,
    simplices: usize,
    equilibrium: String,
}

#[wasm_bindgen]
impl Diffusion {
    #[wasm_bindgen(getter)]
    pub fn times(&self) -> Vec<f64> {
        self.times.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn energies(&self) -> Vec<f64> {
        self.energies.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn psi(&self) -> Vec<f64> {
        self.psi.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn theta(&self) -> Vec<f64> {
        self.theta.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn phi(&self) -> Vec<f64> {
        self.phi.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn simplices(&self) -> usize {
        self.simplices
    }

    #[wasm_bindgen(getter)]
    pub fn equilibrium(&self) -> String {
        self.equilibrium.clone()
    }
}

pub fn compute_diffusion(source: &str, op: &str, delta: f64, seed: u32, t_max: f64) -> Result<Diffusion, String> {
    let tag = tag(op)?;
    if tag == OperatorTag::Magnetic {
        return Err("diffusion needs 1up, 1down, combined or 2down".into());
    }
    if !(0.0..=MAX_T).contains(&t_max) {
        return Err(format!("t_max must be between 0 and {MAX_T}"));
    }
    let c = prepare(&load(source)?, tag).map_err(|e| e.to_string())?;
    let l = build_operator(&c, tag, delta).map_err(|e| e.to_string())?;
    let (order, simplices) = match tag {
        OperatorTag::Down2 => (2, c.triangle_count()),
        _ => (1, c.edge_count()),
    };
    let nu0 = Cochain::random_unit(order, simplices, u64::from(seed));
    let params = DiffusionParams {
        t_max,
        ..DiffusionParams::default()
    };
    let traj = diffuse_operator(&l, &nu0, params).map_err(|e| e.to_string())?;
    let equilibrium = classify_equilibrium(&traj, &l).map_err(|e| e.to_string())?.to_string();
    let (mut psi, mut theta, mut phi) = (Vec::new(), Vec::new(), Vec::new());
    for state in &traj.states {
        for a in to_angles(state).map_err(|e| e.to_string())? {
            psi.push(a.psi);
            theta.push(a.theta);
            phi.push(a.phi);
        }
    }
    Ok(Diffusion {
        times: traj.times,
        energies: traj.energies,
        psi,
        theta,
        phi,
        simplices,
        equilibrium,
    })
}

#[wasm_bindgen]
pub fn spectrum(source: &str, op: &str, points: usize) -> Result<Spectrum, JsError> {
    compute_spectrum(source, op, points).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = commutatorNorms)]
pub fn commutator_norms(source: &str, points: usize) -> Result<Vec<f64>, JsError> {
    compute_commutator(source, points).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn diffusion(source: &str, op: &str, delta: f64, seed: u32, t_max: f64) -> Result<Diffusion, JsError> {
    compute_diffusion(source, op, delta, seed, t_max).map_err(|e| JsError::new(&e))
}
