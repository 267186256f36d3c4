//! Spectra and commutator norms over a uniform δ grid, zero-eigenvalue δ
//! sets, degeneracy profiles and CSV/JSON export.

use std::f64::consts::TAU;
use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::complexes::{ComplexError, DirectedSimplicialComplex};
use crate::connection::{connection_1down, connection_1up, connection_2down, ConnectionError};
use crate::diffusion::{energy, to_angles, Trajectory};
use crate::graph::magnetic_laplacian;
use crate::linalg::{commutator, group_degenerate, hermitian_eigenvalues, ComplexMatrix, LinalgError, DEGENERACY_TOL};
use crate::wrap_angle;

pub const DEFAULT_POINTS: usize = 256;
pub const ZERO_THRESHOLD: f64 = 1e-6;
/// Target width of refined zero locations.
pub const ZERO_XTOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("unknown operator '{0}' (expected 1up, 1down, combined, 2down or magnetic)")]
    UnknownOperator(String),
    #[error("a sweep needs at least one grid point")]
    EmptyGrid,
    #[error("this export needs a {0} sweep")]
    WrongKind(&'static str),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Connection(#[from] ConnectionError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum OperatorTag {
    #[serde(rename = "1up")]
    Up1,
    #[serde(rename = "1down")]
    Down1,
    #[serde(rename = "combined")]
    Combined,
    #[serde(rename = "2down")]
    Down2,
    #[serde(rename = "magnetic")]
    Magnetic,
}

impl OperatorTag {
    pub const ALL: [OperatorTag; 5] = [
        OperatorTag::Up1,
        OperatorTag::Down1,
        OperatorTag::Combined,
        OperatorTag::Down2,
        OperatorTag::Magnetic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            OperatorTag::Up1 => "1up",
            OperatorTag::Down1 => "1down",
            OperatorTag::Combined => "combined",
            OperatorTag::Down2 => "2down",
            OperatorTag::Magnetic => "magnetic",
        }
    }
}

impl fmt::Display for OperatorTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OperatorTag {
    type Err = SweepError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        OperatorTag::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| SweepError::UnknownOperator(s.to_string()))
    }
}

/// Orient the complex when the operator needs a manifold orientation.
pub fn prepare(c: &DirectedSimplicialComplex, tag: OperatorTag) -> Result<DirectedSimplicialComplex, SweepError> {
    if tag == OperatorTag::Down2 && !c.is_oriented() {
        Ok(c.orient_manifold()?)
    } else {
        Ok(c.clone())
    }
}

/// The operator `tag` at `delta`. A 2-down request on an unoriented complex
/// orients it first.
pub fn build_operator(
    c: &DirectedSimplicialComplex,
    tag: OperatorTag,
    delta: f64,
) -> Result<ComplexMatrix, SweepError> {
    Ok(match tag {
        OperatorTag::Up1 => connection_1up(c, delta).matrix,
        OperatorTag::Down1 => connection_1down(c, delta).matrix,
        OperatorTag::Combined => &connection_1up(c, delta).matrix + &connection_1down(c, delta).matrix,
        OperatorTag::Down2 => {
            if c.is_oriented() {
                connection_2down(c, delta)?.matrix
            } else {
                connection_2down(&c.orient_manifold()?, delta)?.matrix
            }
        }
        OperatorTag::Magnetic => magnetic_laplacian(c, delta),
    })
}

/// `points` uniform values `k·2π/points` on `[0, 2π)`.
pub fn delta_grid(points: usize) -> Vec<f64> {
    (0..points).map(|k| TAU * k as f64 / points as f64).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepKind {
    Spectrum(OperatorTag),
    Commutator,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub kind: SweepKind,
    pub complex: String,
    pub dimension: usize,
    pub seed: Option<u64>,
    pub deltas: Vec<f64>,
    /// Ascending eigenvalues per δ (spectrum sweeps).
    pub eigenvalues: Vec<Vec<f64>>,
    /// `‖[L1up, L1down]‖_F` per δ (commutator sweeps).
    pub commutator_norms: Vec<f64>,
}

impl SweepResult {
    pub fn named(mut self, complex: impl Into<String>) -> Self {
        self.complex = complex.into();
        self
    }

    pub fn min_eigenvalues(&self) -> Vec<f64> {
        self.eigenvalues
            .iter()
            .map(|ev| ev.first().copied().unwrap_or(0.0))
            .collect()
    }
}

#[cfg(feature = "parallel")]
fn map_grid<T, F>(grid: &[f64], f: F) -> Result<Vec<T>, SweepError>
where
    T: Send,
    F: Fn(f64) -> Result<T, SweepError> + Sync + Send,
{
    use rayon::prelude::*;
    grid.par_iter().map(|&d| f(d)).collect()
}

#[cfg(not(feature = "parallel"))]
fn map_grid<T, F>(grid: &[f64], f: F) -> Result<Vec<T>, SweepError>
where
    F: Fn(f64) -> Result<T, SweepError>,
{
    grid.iter().map(|&d| f(d)).collect()
}

/// Eigenvalues of `tag` at every grid point.
pub fn spectrum_sweep(
    c: &DirectedSimplicialComplex,
    tag: OperatorTag,
    grid: &[f64],
) -> Result<SweepResult, SweepError> {
    if grid.is_empty() {
        return Err(SweepError::EmptyGrid);
    }
    let c = prepare(c, tag)?;
    let eigenvalues = map_grid(grid, |d| Ok(hermitian_eigenvalues(&build_operator(&c, tag, d)?)?))?;
    Ok(SweepResult {
        kind: SweepKind::Spectrum(tag),
        complex: String::new(),
        dimension: eigenvalues[0].len(),
        seed: None,
        deltas: grid.to_vec(),
        eigenvalues,
        commutator_norms: Vec::new(),
    })
}

/// `‖[L1up, L1down]‖_F` at `delta`.
pub fn commutator_norm(c: &DirectedSimplicialComplex, delta: f64) -> Result<f64, SweepError> {
    let up = connection_1up(c, delta).matrix;
    let down = connection_1down(c, delta).matrix;
    Ok(commutator(&up, &down)?.frobenius_norm())
}

pub fn commutator_sweep(c: &DirectedSimplicialComplex, grid: &[f64]) -> Result<SweepResult, SweepError> {
    if grid.is_empty() {
        return Err(SweepError::EmptyGrid);
    }
    let norms = map_grid(grid, |d| commutator_norm(c, d))?;
    Ok(SweepResult {
        kind: SweepKind::Commutator,
        complex: String::new(),
        dimension: 2 * c.edge_count(),
        seed: None,
        deltas: grid.to_vec(),
        eigenvalues: Vec::new(),
        commutator_norms: norms,
    })
}

/// Clustered `(eigenvalue, multiplicity)` pairs per δ.
pub fn degeneracy_profile(sweep: &SweepResult, tol: f64) -> Vec<Vec<(f64, usize)>> {
    sweep.eigenvalues.iter().map(|ev| group_degenerate(ev, tol)).collect()
}

/// Number of distinct eigenvalues of `tag` at `delta`.
pub fn distinct_eigenvalue_count(
    c: &DirectedSimplicialComplex,
    tag: OperatorTag,
    delta: f64,
) -> Result<usize, SweepError> {
    let ev = hermitian_eigenvalues(&build_operator(c, tag, delta)?)?;
    Ok(group_degenerate(&ev, DEGENERACY_TOL).len())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ZeroSet {
    Point { delta: f64 },
    Interval { start: f64, end: f64 },
}

impl fmt::Display for ZeroSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ZeroSet::Point { delta } => write!(f, "{delta:.6}"),
            ZeroSet::Interval { start, end } => write!(f, "[{start:.6}, {end:.6}]"),
        }
    }
}

/// The δ values where the smallest eigenvalue of `tag` drops below
/// `threshold`.
///
/// Grid minima are refined by golden-section search, since zeros of a PSD
/// spectrum touch the axis tangentially and never change sign. Runs of two or
/// more grid points below the threshold are reported as intervals whose ends
/// are refined by bisection.
pub fn zero_eigenvalue_deltas(
    c: &DirectedSimplicialComplex,
    tag: OperatorTag,
    sweep: &SweepResult,
    threshold: f64,
) -> Result<Vec<ZeroSet>, SweepError> {
    let c = prepare(c, tag)?;
    let f = |d: f64| -> Result<f64, SweepError> {
        Ok(hermitian_eigenvalues(&build_operator(&c, tag, d)?)?
            .first()
            .copied()
            .unwrap_or(0.0))
    };
    let grid = &sweep.deltas;
    let values = sweep.min_eigenvalues();
    let n = grid.len();
    if n == 0 {
        return Err(SweepError::EmptyGrid);
    }
    let step = TAU / n as f64;
    let below: Vec<bool> = values.iter().map(|&v| v < threshold).collect();
    let mut out = Vec::new();

    if below.iter().all(|&b| b) {
        return Ok(vec![ZeroSet::Interval { start: 0.0, end: TAU }]);
    }
    // Circular runs of sub-threshold grid points, starting after a point above.
    let first_above = below.iter().position(|&b| !b).unwrap();
    let mut in_run = vec![false; n];
    let mut k = 0;
    while k < n {
        let i = (first_above + k) % n;
        if !below[i] {
            k += 1;
            continue;
        }
        let mut len = 0;
        while k + len < n && below[(first_above + k + len) % n] {
            len += 1;
        }
        if len >= 2 {
            let lo_out = grid[i] - step;
            let hi_in = grid[i] + (len - 1) as f64 * step;
            let start = bisect_edge(&f, lo_out, grid[i], threshold)?;
            let end = bisect_edge(&f, hi_in + step, hi_in, threshold)?;
            out.push(ZeroSet::Interval {
                start: wrap_angle(start),
                end: wrap_angle(end),
            });
            for r in 0..len {
                in_run[(i + r) % n] = true;
            }
        }
        k += len;
    }

    for i in 0..n {
        if in_run[i] {
            continue;
        }
        let prev = values[(i + n - 1) % n];
        let next = values[(i + 1) % n];
        if values[i] <= prev && values[i] <= next {
            let (x, fx) = golden_section(&f, grid[i] - step, grid[i] + step)?;
            if fx < threshold {
                out.push(ZeroSet::Point {
                    delta: snap(wrap_angle(x)),
                });
            }
        }
    }
    out.sort_by(|a, b| key(a).total_cmp(&key(b)));
    out.dedup_by(|a, b| match (a, b) {
        (ZeroSet::Point { delta: x }, ZeroSet::Point { delta: y }) => circular_distance(*x, *y) < 1e-6,
        _ => false,
    });
    // The first and last points may coincide across 2π.
    if out.len() > 1 {
        if let (Some(ZeroSet::Point { delta: x }), Some(ZeroSet::Point { delta: y })) = (out.first(), out.last()) {
            if circular_distance(*x, *y) < 1e-6 {
                out.pop();
            }
        }
    }
    Ok(out)
}

fn key(z: &ZeroSet) -> f64 {
    match z {
        ZeroSet::Point { delta } => *delta,
        ZeroSet::Interval { start, .. } => *start,
    }
}

fn snap(x: f64) -> f64 {
    if TAU - x < 1e-7 {
        0.0
    } else {
        x
    }
}

fn circular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

/// Boundary between `outside` (above threshold) and `inside` (below).
fn bisect_edge<F>(f: &F, mut outside: f64, mut inside: f64, threshold: f64) -> Result<f64, SweepError>
where
    F: Fn(f64) -> Result<f64, SweepError>,
{
    while (outside - inside).abs() > ZERO_XTOL {
        let mid = 0.5 * (outside + inside);
        if f(mid)? < threshold {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    Ok(0.5 * (outside + inside))
}

fn golden_section<F>(f: &F, mut a: f64, mut b: f64) -> Result<(f64, f64), SweepError>
where
    F: Fn(f64) -> Result<f64, SweepError>,
{
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - ratio * (b - a);
    let mut x2 = a + ratio * (b - a);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while b - a > ZERO_XTOL {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - ratio * (b - a);
            f1 = f(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + ratio * (b - a);
            f2 = f(x2)?;
        }
    }
    Ok(if f1 <= f2 { (x1, f1) } else { (x2, f2) })
}

fn sci(x: f64) -> String {
    format!("{x:.16e}")
}

/// Long-form spectrum CSV: `delta,index,eigenvalue`.
pub fn write_spectrum_csv<W: Write>(sweep: &SweepResult, mut w: W) -> Result<(), SweepError> {
    if !matches!(sweep.kind, SweepKind::Spectrum(_)) {
        return Err(SweepError::WrongKind("spectrum"));
    }
    writeln!(w, "delta,index,eigenvalue")?;
    for (d, ev) in sweep.deltas.iter().zip(&sweep.eigenvalues) {
        for (k, x) in ev.iter().enumerate() {
            writeln!(w, "{},{},{}", sci(*d), k, sci(*x))?;
        }
    }
    Ok(())
}

/// `delta,frobenius_norm`.
pub fn write_commutator_csv<W: Write>(sweep: &SweepResult, mut w: W) -> Result<(), SweepError> {
    if sweep.kind != SweepKind::Commutator {
        return Err(SweepError::WrongKind("commutator"));
    }
    writeln!(w, "delta,frobenius_norm")?;
    for (d, x) in sweep.deltas.iter().zip(&sweep.commutator_norms) {
        writeln!(w, "{},{}", sci(*d), sci(*x))?;
    }
    Ok(())
}

/// CSV export matching the sweep's kind.
pub fn export_csv(sweep: &SweepResult, path: impl AsRef<Path>) -> Result<(), SweepError> {
    let mut w = BufWriter::new(File::create(path)?);
    match sweep.kind {
        SweepKind::Spectrum(_) => write_spectrum_csv(sweep, &mut w)?,
        SweepKind::Commutator => write_commutator_csv(sweep, &mut w)?,
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct SpectrumRow {
    delta: f64,
    index: usize,
    eigenvalue: f64,
}

#[derive(Serialize)]
struct CommutatorRow {
    delta: f64,
    frobenius_norm: f64,
}

#[derive(Serialize)]
struct SweepDocument<'a, R> {
    kind: &'a SweepKind,
    complex: &'a str,
    dimension: usize,
    seed: Option<u64>,
    rows: Vec<R>,
}

pub fn write_json<W: Write>(sweep: &SweepResult, w: W) -> Result<(), SweepError> {
    let doc = |w: W| -> serde_json::Result<()> {
        match sweep.kind {
            SweepKind::Spectrum(_) => {
                let rows = sweep
                    .deltas
                    .iter()
                    .zip(&sweep.eigenvalues)
                    .flat_map(|(&delta, ev)| {
                        ev.iter().enumerate().map(move |(index, &eigenvalue)| SpectrumRow {
                            delta,
                            index,
                            eigenvalue,
                        })
                    })
                    .collect();
                serde_json::to_writer_pretty(w, &document(sweep, rows))
            }
            SweepKind::Commutator => {
                let rows = sweep
                    .deltas
                    .iter()
                    .zip(&sweep.commutator_norms)
                    .map(|(&delta, &frobenius_norm)| CommutatorRow { delta, frobenius_norm })
                    .collect();
                serde_json::to_writer_pretty(w, &document(sweep, rows))
            }
        }
    };
    doc(w).map_err(io::Error::from)?;
    Ok(())
}

fn document<R>(sweep: &SweepResult, rows: Vec<R>) -> SweepDocument<'_, R> {
    SweepDocument {
        kind: &sweep.kind,
        complex: &sweep.complex,
        dimension: sweep.dimension,
        seed: sweep.seed,
        rows,
    }
}

pub fn export_json(sweep: &SweepResult, path: impl AsRef<Path>) -> Result<(), SweepError> {
    let mut w = BufWriter::new(File::create(path)?);
    write_json(sweep, &mut w)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct TrajectoryRow {
    t: f64,
    simplex: usize,
    component: usize,
    re: f64,
    im: f64,
    psi: f64,
    theta: f64,
    phi: f64,
    energy: f64,
}

fn trajectory_rows(traj: &Trajectory) -> Result<Vec<TrajectoryRow>, SweepError> {
    let mut rows = Vec::new();
    for ((t, state), e) in traj.times.iter().zip(&traj.states).zip(&traj.energies) {
        let angles = to_angles(state).map_err(|e| io::Error::new(io::ErrorKind::InvalidInput, e.to_string()))?;
        for (l, a) in angles.iter().enumerate() {
            for (component, z) in state.pair(l).iter().enumerate() {
                rows.push(TrajectoryRow {
                    t: *t,
                    simplex: l,
                    component,
                    re: z.re,
                    im: z.im,
                    psi: a.psi,
                    theta: a.theta,
                    phi: a.phi,
                    energy: *e,
                });
            }
        }
    }
    Ok(rows)
}

/// `t,simplex,component,re,im,psi,theta,phi,energy`, one row per sample,
/// simplex and component.
pub fn write_trajectory_csv<W: Write>(traj: &Trajectory, mut w: W) -> Result<(), SweepError> {
    writeln!(w, "t,simplex,component,re,im,psi,theta,phi,energy")?;
    for r in trajectory_rows(traj)? {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{}",
            sci(r.t),
            r.simplex,
            r.component,
            sci(r.re),
            sci(r.im),
            sci(r.psi),
            sci(r.theta),
            sci(r.phi),
            sci(r.energy)
        )?;
    }
    Ok(())
}

pub fn export_trajectory_csv(traj: &Trajectory, path: impl AsRef<Path>) -> Result<(), SweepError> {
    let mut w = BufWriter::new(File::create(path)?);
    write_trajectory_csv(traj, &mut w)?;
    w.flush()?;
    Ok(())
}

pub fn export_trajectory_json(traj: &Trajectory, path: impl AsRef<Path>) -> Result<(), SweepError> {
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut w, &trajectory_rows(traj)?).map_err(io::Error::from)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

/// Recompute the energy column of a trajectory against `l`.
pub fn recompute_energies(traj: &Trajectory, l: &ComplexMatrix) -> Result<Vec<f64>, SweepError> {
    traj.states.iter().map(|s| Ok(energy(l, s.values())?)).collect()
}
