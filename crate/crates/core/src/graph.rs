//! Order-0 operators on the 1-skeleton: combinatorial, magnetic and
//! connection Laplacians.

use std::collections::{BTreeMap, VecDeque};

use thiserror::Error;

use crate::complexes::DirectedSimplicialComplex;
use crate::linalg::{ComplexMatrix, C64};

/// Tolerance on `OᵀO = I` for supplied rotations.
pub const ORTHOGONALITY_TOL: f64 = 1e-10;

/// Tolerance on cycle holonomies being the identity.
pub const CONSISTENCY_TOL: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("no rotation assigned to edge {{{0}, {1}}}")]
    MissingRotation(usize, usize),
    #[error("rotation on {{{i}, {j}}} is not orthogonal (defect {defect:.3e})")]
    NotOrthogonal { i: usize, j: usize, defect: f64 },
    #[error("rotation on {{{i}, {j}}} has {len} entries, expected {expected}")]
    WrongSize {
        i: usize,
        j: usize,
        len: usize,
        expected: usize,
    },
}

/// `L0 = D0 − A0` of the undirected skeleton.
pub fn combinatorial_laplacian(c: &DirectedSimplicialComplex) -> ComplexMatrix {
    let n = c.vertex_count();
    let mut l = ComplexMatrix::zeros(n, n);
    for e in c.edges() {
        let [a, b] = e.reference;
        l[(a, a)] += 1.0;
        l[(b, b)] += 1.0;
        l[(a, b)] -= 1.0;
        l[(b, a)] -= 1.0;
    }
    l
}

/// `L(δ) = D0 − T(δ)∘A0` with `T = e^{−iδ}` from tail to head and `e^{iδ}`
/// from head to tail.
pub fn magnetic_laplacian(c: &DirectedSimplicialComplex, delta: f64) -> ComplexMatrix {
    let n = c.vertex_count();
    let mut l = ComplexMatrix::zeros(n, n);
    let forward = C64::from_polar(1.0, -delta);
    for e in c.edges() {
        let (s, t) = e.flow();
        l[(s, s)] += 1.0;
        l[(t, t)] += 1.0;
        l[(s, t)] -= forward;
        l[(t, s)] -= forward.conj();
    }
    l
}

/// Orthogonal `d × d` transports `O_ij` on skeleton edges, stored once per
/// unordered pair; `O_ji` is the transpose.
#[derive(Debug, Clone, PartialEq)]
pub struct RotationAssignment {
    dim: usize,
    rotations: BTreeMap<(usize, usize), Vec<f64>>,
}

impl RotationAssignment {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            rotations: BTreeMap::new(),
        }
    }

    /// Identity transport on every edge of `c`.
    pub fn identity(c: &DirectedSimplicialComplex, dim: usize) -> Self {
        let mut r = Self::new(dim);
        let id: Vec<f64> = (0..dim * dim)
            .map(|k| if k % (dim + 1) == 0 { 1.0 } else { 0.0 })
            .collect();
        for e in c.edges() {
            let [a, b] = e.reference;
            r.insert(a, b, id.clone()).expect("identity is orthogonal");
        }
        r
    }

    /// The planar rotation `O_{tail,head} = R(−δ)` on every directed edge,
    /// which reproduces the magnetic Laplacian under `a + ib ↦ [[a, −b], [b, a]]`.
    pub fn magnetic(c: &DirectedSimplicialComplex, delta: f64) -> Self {
        let mut r = Self::new(2);
        for e in c.edges() {
            let (s, t) = e.flow();
            r.insert(s, t, planar_rotation(-delta)).expect("rotation is orthogonal");
        }
        r
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Set `O_ij` (row-major). `O_ji` becomes its transpose.
    pub fn insert(&mut self, i: usize, j: usize, o: Vec<f64>) -> Result<(), GraphError> {
        let d = self.dim;
        if o.len() != d * d {
            return Err(GraphError::WrongSize {
                i,
                j,
                len: o.len(),
                expected: d * d,
            });
        }
        let mut defect = 0.0f64;
        for r in 0..d {
            for s in 0..d {
                let dot: f64 = (0..d).map(|k| o[k * d + r] * o[k * d + s]).sum();
                let target = if r == s { 1.0 } else { 0.0 };
                defect = defect.max((dot - target).abs());
            }
        }
        if defect > ORTHOGONALITY_TOL {
            return Err(GraphError::NotOrthogonal { i, j, defect });
        }
        let stored = if i < j { o } else { transpose(&o, d) };
        self.rotations.insert((i.min(j), i.max(j)), stored);
        Ok(())
    }

    /// `O_ij`, row-major.
    pub fn get(&self, i: usize, j: usize) -> Option<Vec<f64>> {
        let o = self.rotations.get(&(i.min(j), i.max(j)))?;
        Some(if i < j { o.clone() } else { transpose(o, self.dim) })
    }
}

/// Row-major `[[cos θ, −sin θ], [sin θ, cos θ]]`.
pub fn planar_rotation(theta: f64) -> Vec<f64> {
    let (s, c) = theta.sin_cos();
    vec![c, -s, s, c]
}

fn transpose(o: &[f64], d: usize) -> Vec<f64> {
    let mut t = vec![0.0; d * d];
    for r in 0..d {
        for s in 0..d {
            t[s * d + r] = o[r * d + s];
        }
    }
    t
}

fn matmul(a: &[f64], b: &[f64], d: usize) -> Vec<f64> {
    let mut out = vec![0.0; d * d];
    for r in 0..d {
        for k in 0..d {
            let x = a[r * d + k];
            for s in 0..d {
                out[r * d + s] += x * b[k * d + s];
            }
        }
    }
    out
}

/// `D0 ⊗ I_d − T∘(A0 ⊗ 1_d)`: diagonal blocks `deg·I_d`, block `(i, j)` equal
/// to `−O_ij`.
pub fn graph_connection_laplacian(
    c: &DirectedSimplicialComplex,
    r: &RotationAssignment,
) -> Result<ComplexMatrix, GraphError> {
    let d = r.dim();
    let n = c.vertex_count();
    let mut l = ComplexMatrix::zeros(n * d, n * d);
    for e in c.edges() {
        let [a, b] = e.reference;
        let o = r.get(a, b).ok_or(GraphError::MissingRotation(a, b))?;
        for k in 0..d {
            l[(a * d + k, a * d + k)] += 1.0;
            l[(b * d + k, b * d + k)] += 1.0;
        }
        for p in 0..d {
            for q in 0..d {
                let v = o[p * d + q];
                l[(a * d + p, b * d + q)] -= v;
                l[(b * d + q, a * d + p)] -= v;
            }
        }
    }
    Ok(l)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Consistency {
    Consistent,
    /// A closed vertex walk whose holonomy differs from the identity.
    Inconsistent {
        cycle: Vec<usize>,
        defect: f64,
    },
}

impl Consistency {
    pub fn is_consistent(&self) -> bool {
        matches!(self, Consistency::Consistent)
    }
}

/// Check that the transport around every fundamental cycle of a breadth-first
/// spanning forest is the identity.
pub fn check_consistency(c: &DirectedSimplicialComplex, r: &RotationAssignment) -> Result<Consistency, GraphError> {
    let d = r.dim();
    let n = c.vertex_count();
    let mut adj = vec![Vec::new(); n];
    for e in c.edges() {
        let [a, b] = e.reference;
        if r.get(a, b).is_none() {
            return Err(GraphError::MissingRotation(a, b));
        }
        adj[a].push(b);
        adj[b].push(a);
    }
    for list in &mut adj {
        list.sort_unstable();
    }
    let identity: Vec<f64> = (0..d * d).map(|k| if k % (d + 1) == 0 { 1.0 } else { 0.0 }).collect();
    // transport[v] = product of O along the tree path root → v
    let mut parent: Vec<Option<usize>> = vec![None; n];
    let mut transport: Vec<Option<Vec<f64>>> = vec![None; n];
    let mut depth = vec![0usize; n];
    let mut order = Vec::with_capacity(n);
    for root in 0..n {
        if transport[root].is_some() {
            continue;
        }
        transport[root] = Some(identity.clone());
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &w in &adj[v] {
                if transport[w].is_none() {
                    let o = r.get(v, w).expect("checked above");
                    transport[w] = Some(matmul(transport[v].as_ref().unwrap(), &o, d));
                    parent[w] = Some(v);
                    depth[w] = depth[v] + 1;
                    queue.push_back(w);
                }
            }
        }
    }
    for e in c.edges() {
        let [u, w] = e.reference;
        if parent[w] == Some(u) || parent[u] == Some(w) {
            continue;
        }
        let pu = transport[u].as_ref().unwrap();
        let pw = transport[w].as_ref().unwrap();
        let o = r.get(u, w).unwrap();
        // root → u → w → root
        let h = matmul(&matmul(pu, &o, d), &transpose(pw, d), d);
        let defect = h.iter().zip(&identity).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        if defect > CONSISTENCY_TOL {
            return Ok(Consistency::Inconsistent {
                cycle: tree_cycle(u, w, &parent, &depth),
                defect,
            });
        }
    }
    Ok(Consistency::Consistent)
}

/// Closed walk `u → w → … → lca → … → u` through the tree.
fn tree_cycle(u: usize, w: usize, parent: &[Option<usize>], depth: &[usize]) -> Vec<usize> {
    let (mut a, mut b) = (u, w);
    let mut up_from_u = vec![a];
    let mut up_from_w = vec![b];
    while a != b {
        if depth[a] >= depth[b] {
            a = parent[a].unwrap();
            up_from_u.push(a);
        } else {
            b = parent[b].unwrap();
            up_from_w.push(b);
        }
    }
    // Both lists end at the lowest common ancestor; keep it once.
    up_from_w.pop();
    let mut walk = vec![u];
    walk.extend(up_from_w.iter().copied());
    walk.extend(up_from_u.iter().rev().copied());
    walk.dedup();
    if walk.len() > 1 && walk.first() == walk.last() {
        walk.pop();
    }
    walk
}
