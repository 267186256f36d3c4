//! Higher-order connection Laplacians.
//!
//! Each operator acts on cochains with a `ℂ²` value per simplex. Adjacent
//! simplices `l, m` are coupled by the block `−A_lm·T_lm`, where `A_lm = ∓1`
//! records same/opposite relative orientation and `T_lm = e^{±iδ}σ` is a
//! phase-rotated Pauli matrix chosen from the directions of the two simplices
//! and of the simplex they share. The diagonal carries `D_ll = Σ_m |A_lm|`.
//!
//! Blocks are evaluated once per unordered pair `l < m`; the `(m, l)` block is
//! the adjoint, so every operator is Hermitian by construction.

use std::fmt;

use thiserror::Error;

use crate::cochain::Cochain;
use crate::complexes::{ComplexError, DirectedSimplicialComplex, Triangle};
use crate::hodge::bochner_1up;
use crate::linalg::{ComplexMatrix, LinalgError, Pauli, C64};
use crate::wrap_angle;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConnectionError {
    #[error("edges {0} and {1} are not upper adjacent through triangle {2}")]
    NotUpperAdjacent(usize, usize, usize),
    #[error("simplices {0} and {1} are not lower adjacent through {2}")]
    NotLowerAdjacent(usize, usize, usize),
    #[error("triangle {0} has no manifold orientation")]
    ManifoldNotOriented(usize),
    #[error("edge {edge} lies in {count} triangles; not a pseudo-manifold")]
    NotPseudoManifold { edge: usize, count: usize },
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConnectionKind {
    Up1,
    Down1,
    Down2,
}

impl ConnectionKind {
    pub fn name(self) -> &'static str {
        match self {
            ConnectionKind::Up1 => "1up",
            ConnectionKind::Down1 => "1down",
            ConnectionKind::Down2 => "2down",
        }
    }
}

/// Row label of a rotation table. The 1-down table only uses `A`–`D`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Config {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
    H,
}

impl Config {
    pub const ALL: [Config; 8] = [
        Config::A,
        Config::B,
        Config::C,
        Config::D,
        Config::E,
        Config::F,
        Config::G,
        Config::H,
    ];

    pub fn letter(self) -> char {
        match self {
            Config::A => 'a',
            Config::B => 'b',
            Config::C => 'c',
            Config::D => 'd',
            Config::E => 'e',
            Config::F => 'f',
            Config::G => 'g',
            Config::H => 'h',
        }
    }

    /// The row matched by the same pair listed in the opposite order
    /// (1-up and 2-down tables).
    pub fn swapped(self) -> Config {
        match self {
            Config::A => Config::B,
            Config::B => Config::A,
            Config::C => Config::D,
            Config::D => Config::C,
            Config::E => Config::F,
            Config::F => Config::E,
            Config::G => Config::H,
            Config::H => Config::G,
        }
    }
}

impl fmt::Display for Config {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.letter())
    }
}

/// `e^{i·phase}·σ`.
#[derive(Debug, Clone, PartialEq)]
pub struct RotationBlock {
    pub pauli: Pauli,
    pub phase: f64,
    pub value: ComplexMatrix,
}

impl RotationBlock {
    pub fn new(pauli: Pauli, phase: f64) -> Self {
        let value = pauli.matrix().scale(C64::from_polar(1.0, phase));
        Self { pauli, phase, value }
    }

    /// The block seen from the other simplex of the pair.
    pub fn adjoint(&self) -> Self {
        Self::new(self.pauli, -self.phase)
    }
}

/// The coupling of one unordered adjacent pair, stored for `pair.0 < pair.1`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockEntry {
    pub pair: (usize, usize),
    pub shared: usize,
    /// `+1` for same relative orientation (`A = −1`), `−1` otherwise.
    pub sign: i8,
    pub config: Config,
    pub rotation: RotationBlock,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConnectionOperator {
    pub kind: ConnectionKind,
    pub delta: f64,
    pub matrix: ComplexMatrix,
    pub degrees: Vec<f64>,
    pub blocks: Vec<BlockEntry>,
}

impl ConnectionOperator {
    pub fn dimension(&self) -> usize {
        self.matrix.rows()
    }

    pub fn simplex_count(&self) -> usize {
        self.degrees.len()
    }
}

fn assemble(kind: ConnectionKind, delta: f64, degrees: Vec<f64>, blocks: Vec<BlockEntry>) -> ConnectionOperator {
    let n = degrees.len();
    let mut m = ComplexMatrix::zeros(2 * n, 2 * n);
    for (l, &d) in degrees.iter().enumerate() {
        m[(2 * l, 2 * l)] = C64::new(d, 0.0);
        m[(2 * l + 1, 2 * l + 1)] = C64::new(d, 0.0);
    }
    for b in &blocks {
        let (l, r) = b.pair;
        let v = b.rotation.value.scale(C64::new(b.sign as f64, 0.0));
        m.add_block(2 * l, 2 * r, &v);
        m.add_block(2 * r, 2 * l, &v.adjoint());
    }
    ConnectionOperator {
        kind,
        delta,
        matrix: m,
        degrees,
        blocks,
    }
}

fn shared_vertex(c: &DirectedSimplicialComplex, e1: usize, e2: usize) -> Option<usize> {
    let [a, b] = c.edges()[e1].reference;
    let other = &c.edges()[e2];
    if e1 == e2 {
        None
    } else if other.contains(a) {
        Some(a)
    } else if other.contains(b) {
        Some(b)
    } else {
        None
    }
}

/// Match the ordered edge pair `(e1, e2)` sharing `triangle` against the 1-up
/// table. With `j` the common vertex and `i`, `k` the private vertices of `e1`
/// and `e2`, the row depends on the flows along `(i, j)`, `(j, k)` and on
/// whether the triangle circulates `i → j → k`.
pub fn classify_1up(
    c: &DirectedSimplicialComplex,
    (e1, e2): (usize, usize),
    triangle: usize,
) -> Result<Config, ConnectionError> {
    let not_adjacent = ConnectionError::NotUpperAdjacent(e1, e2, triangle);
    let t = c.triangles().get(triangle).ok_or(not_adjacent.clone())?;
    let j = shared_vertex(c, e1, e2).ok_or(not_adjacent.clone())?;
    let (edge1, edge2) = (&c.edges()[e1], &c.edges()[e2]);
    let i = edge1.other(j).unwrap();
    let k = edge2.other(j).unwrap();
    if !(t.contains(i) && t.contains(j) && t.contains(k)) {
        return Err(not_adjacent);
    }
    let into_j = edge1.flows(i, j);
    let out_of_j = edge2.flows(j, k);
    let forward = t.flows_along([i, j, k]);
    Ok(match (into_j, out_of_j, forward) {
        (true, true, true) => Config::A,
        (false, false, false) => Config::B,
        (false, false, true) => Config::C,
        (true, true, false) => Config::D,
        (false, true, true) => Config::E,
        (false, true, false) => Config::F,
        (true, false, true) => Config::G,
        (true, false, false) => Config::H,
    })
}

/// 1-up rotation: rows `a, c, e, g` carry `e^{−iδ}`, rows `b, d, f, h` carry
/// `e^{iδ}`, with Pauli factors `σ0, σx, σy, σz` for the pairs `ab, cd, ef, gh`.
pub fn rotation_1up(config: Config, delta: f64) -> RotationBlock {
    let (pauli, phase) = paired_table(config, delta);
    RotationBlock::new(pauli, phase)
}

/// 2-down rotation; same layout as the 1-up table.
pub fn rotation_2down(config: Config, delta: f64) -> RotationBlock {
    rotation_1up(config, delta)
}

fn paired_table(config: Config, delta: f64) -> (Pauli, f64) {
    match config {
        Config::A => (Pauli::Sigma0, -delta),
        Config::B => (Pauli::Sigma0, delta),
        Config::C => (Pauli::SigmaX, -delta),
        Config::D => (Pauli::SigmaX, delta),
        Config::E => (Pauli::SigmaY, -delta),
        Config::F => (Pauli::SigmaY, delta),
        Config::G => (Pauli::SigmaZ, -delta),
        Config::H => (Pauli::SigmaZ, delta),
    }
}

/// Match the ordered edge pair `(e1, e2)` meeting at `vertex` against the
/// 1-down table: through-flow `i → j → k` is `a`, the reverse is `b`, both
/// leaving `j` is `c`, both entering `j` is `d`.
pub fn classify_1down(
    c: &DirectedSimplicialComplex,
    (e1, e2): (usize, usize),
    vertex: usize,
) -> Result<Config, ConnectionError> {
    let not_adjacent = ConnectionError::NotLowerAdjacent(e1, e2, vertex);
    if e1 == e2 || e1 >= c.edge_count() || e2 >= c.edge_count() {
        return Err(not_adjacent);
    }
    let (edge1, edge2) = (&c.edges()[e1], &c.edges()[e2]);
    let j = vertex;
    let i = edge1.other(j).ok_or(not_adjacent.clone())?;
    let k = edge2.other(j).ok_or(not_adjacent)?;
    Ok(match (edge1.flows(i, j), edge2.flows(j, k)) {
        (true, true) => Config::A,
        (false, false) => Config::B,
        (false, true) => Config::C,
        (true, false) => Config::D,
    })
}

/// 1-down rotation: `a ↦ e^{iδ}σ0`, `b ↦ e^{−iδ}σ0`, `c ↦ σy`, `d ↦ σz`.
pub fn rotation_1down(config: Config, delta: f64) -> RotationBlock {
    match config {
        Config::A => RotationBlock::new(Pauli::Sigma0, delta),
        Config::B => RotationBlock::new(Pauli::Sigma0, -delta),
        Config::C => RotationBlock::new(Pauli::SigmaY, 0.0),
        Config::D => RotationBlock::new(Pauli::SigmaZ, 0.0),
        // Unreachable for adjacent edges; the table's fallback is σ0.
        _ => RotationBlock::new(Pauli::Sigma0, 0.0),
    }
}

/// Match the ordered triangle pair `(t1, t2)` sharing `edge` against the
/// 2-down table.
///
/// The shared edge is labelled `(j, k)` in the order the manifold-positive
/// circulation of `t1` traverses it, so `(i, j, k)` is positive for `t1`.
/// `Δ` of each triangle is the orientation sign of its flow circulation, and
/// the edge test asks whether the edge flows `j → k`. Listing the pair the
/// other way round swaps the two `Δ`s and reverses the edge test, which maps
/// every row to its adjoint partner.
pub fn classify_2down(
    c: &DirectedSimplicialComplex,
    (t1, t2): (usize, usize),
    edge: usize,
) -> Result<Config, ConnectionError> {
    let not_adjacent = ConnectionError::NotLowerAdjacent(t1, t2, edge);
    if t1 == t2 || t1 >= c.triangle_count() || t2 >= c.triangle_count() || edge >= c.edge_count() {
        return Err(not_adjacent);
    }
    let e = &c.edges()[edge];
    let [p, q] = e.reference;
    let (tri1, tri2) = (&c.triangles()[t1], &c.triangles()[t2]);
    if !(tri1.contains(p) && tri1.contains(q) && tri2.contains(p) && tri2.contains(q)) {
        return Err(not_adjacent);
    }
    let positive = tri1.positive_cycle().ok_or(ConnectionError::ManifoldNotOriented(t1))?;
    if tri2.manifold_sign.is_none() {
        return Err(ConnectionError::ManifoldNotOriented(t2));
    }
    let (j, k) = if Triangle::cycle_traverses(positive, p, q) {
        (p, q)
    } else {
        (q, p)
    };
    let d1 = c.delta_sign(t1, tri1.flow_cycle())?;
    let d2 = c.delta_sign(t2, tri2.flow_cycle())?;
    let along = e.flows(j, k);
    Ok(match (d1, d2, along) {
        (1, -1, true) => Config::A,
        (-1, 1, false) => Config::B,
        (-1, 1, true) => Config::C,
        (1, -1, false) => Config::D,
        (1, 1, true) => Config::E,
        (1, 1, false) => Config::F,
        (-1, -1, true) => Config::G,
        _ => Config::H,
    })
}

/// `D^{(1),up} ⊗ I2 − T^{up} ∘ (A^{up} ⊗ 1_2)` on the edges.
pub fn connection_1up(c: &DirectedSimplicialComplex, delta: f64) -> ConnectionOperator {
    let delta = wrap_angle(delta);
    let degrees = bochner_1up(c).d;
    let blocks = c
        .upper_adjacent_edges()
        .into_iter()
        .map(|r| {
            let config = classify_1up(c, r.pair, r.shared).expect("record is upper adjacent");
            BlockEntry {
                pair: r.pair,
                shared: r.shared,
                sign: r.sign,
                config,
                rotation: rotation_1up(config, delta),
            }
        })
        .collect();
    assemble(ConnectionKind::Up1, delta, degrees, blocks)
}

/// `D^{down}_1 ⊗ I2 − T^{down} ∘ (A^{down}_1 ⊗ 1_2)` on the edges.
pub fn connection_1down(c: &DirectedSimplicialComplex, delta: f64) -> ConnectionOperator {
    let delta = wrap_angle(delta);
    let records = c.lower_adjacent_edges();
    let mut degrees = vec![0.0; c.edge_count()];
    for r in &records {
        degrees[r.pair.0] += 1.0;
        degrees[r.pair.1] += 1.0;
    }
    let blocks = records
        .into_iter()
        .map(|r| {
            let config = classify_1down(c, r.pair, r.shared).expect("record is lower adjacent");
            BlockEntry {
                pair: r.pair,
                shared: r.shared,
                sign: r.sign,
                config,
                rotation: rotation_1down(config, delta),
            }
        })
        .collect();
    assemble(ConnectionKind::Down1, delta, degrees, blocks)
}

/// `D^{down}_2 ⊗ I2 − T^{[2],down} ∘ (A^{down}_2 ⊗ 1_2)` on the triangles of
/// an oriented pseudo-manifold (see [`DirectedSimplicialComplex::orient_manifold`]).
pub fn connection_2down(c: &DirectedSimplicialComplex, delta: f64) -> Result<ConnectionOperator, ConnectionError> {
    let delta = wrap_angle(delta);
    if let Some(t) = c.triangles().iter().position(|t| t.manifold_sign.is_none()) {
        return Err(ConnectionError::ManifoldNotOriented(t));
    }
    if let Some((edge, cof)) = c.edge_cofaces().iter().enumerate().find(|(_, cof)| cof.len() > 2) {
        return Err(ConnectionError::NotPseudoManifold { edge, count: cof.len() });
    }
    let records = c.lower_adjacent_triangles();
    let mut degrees = vec![0.0; c.triangle_count()];
    for r in &records {
        degrees[r.pair.0] += 1.0;
        degrees[r.pair.1] += 1.0;
    }
    let mut blocks = Vec::with_capacity(records.len());
    for r in records {
        let config = classify_2down(c, r.pair, r.shared)?;
        blocks.push(BlockEntry {
            pair: r.pair,
            shared: r.shared,
            sign: r.sign,
            config,
            rotation: rotation_2down(config, delta),
        });
    }
    Ok(assemble(ConnectionKind::Down2, delta, degrees, blocks))
}

/// `L1up + L1down`.
pub fn connection_1(c: &DirectedSimplicialComplex, delta: f64) -> ComplexMatrix {
    &connection_1up(c, delta).matrix + &connection_1down(c, delta).matrix
}

/// `ν†Lν`.
pub fn quadratic_form(op: &ConnectionOperator, nu: &Cochain) -> Result<f64, ConnectionError> {
    let lv = op.matrix.mul_vec(nu.values())?;
    Ok(nu.values().iter().zip(&lv).map(|(a, b)| (a.conj() * b).re).sum())
}

/// `½ (Σ_{≁} ‖ν_l − T_lm ν_m‖² + Σ_{∼} ‖ν_l + T_lm ν_m‖²)` over ordered
/// adjacent pairs, computed directly from the stored blocks.
pub fn pairwise_energy(op: &ConnectionOperator, nu: &Cochain) -> Result<f64, ConnectionError> {
    if nu.len() != op.dimension() {
        return Err(LinalgError::DimensionMismatch {
            left: (op.dimension(), op.dimension()),
            right: (nu.len(), 1),
        }
        .into());
    }
    let term = |l: usize, m: usize, sign: i8, t: &ComplexMatrix| {
        let [a0, a1] = nu.pair(l);
        let [b0, b1] = nu.pair(m);
        let s = sign as f64;
        let x0 = a0 + (t[(0, 0)] * b0 + t[(0, 1)] * b1) * s;
        let x1 = a1 + (t[(1, 0)] * b0 + t[(1, 1)] * b1) * s;
        x0.norm_sqr() + x1.norm_sqr()
    };
    let mut total = 0.0;
    for b in &op.blocks {
        let (l, m) = b.pair;
        total += term(l, m, b.sign, &b.rotation.value);
        total += term(m, l, b.sign, &b.rotation.value.adjoint());
    }
    Ok(0.5 * total)
}
