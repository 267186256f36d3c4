//! Directed, oriented 2-dimensional simplicial complexes.
//!
//! Every edge and triangle stores a *reference* vertex ordering, which fixes
//! its orientation (and hence all incidence signs), plus a [`Direction`] flag
//! saying whether the actual flow runs along that reference or against it.
//! The two notions are independent: reversing a direction never changes an
//! incidence sign.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{ComplexMatrix, C64};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ComplexError {
    #[error("invalid complex: {}", format_diagnostics(.0))]
    Invalid(Vec<Diagnostic>),
    #[error("{face:?} is not a face of {simplex:?}")]
    NotAFace { simplex: Vec<usize>, face: Vec<usize> },
    #[error("edge {edge} lies in {count} triangles; not a pseudo-manifold")]
    NotPseudoManifold { edge: usize, count: usize },
    #[error("triangles cannot be oriented coherently (conflict at triangle {triangle})")]
    NotOrientable { triangle: usize },
    #[error("triangle {0} has no manifold orientation; run orient_manifold first")]
    ManifoldNotOriented(usize),
    #[error("{0:?} is not a permutation of the triangle's vertices")]
    NotAPermutation([usize; 3]),
    #[error("unsupported adjacency order {0}")]
    UnsupportedOrder(usize),
}

fn format_diagnostics(d: &[Diagnostic]) -> String {
    d.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

/// One violated invariant found by [`DirectedSimplicialComplex::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Diagnostic {
    VertexOutOfRange {
        kind: SimplexKind,
        id: usize,
        vertex: usize,
    },
    RepeatedVertex {
        kind: SimplexKind,
        id: usize,
    },
    DuplicateEdge {
        first: usize,
        second: usize,
    },
    DuplicateTriangle {
        first: usize,
        second: usize,
    },
    MissingFace {
        triangle: usize,
        face: [usize; 2],
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimplexKind {
    Edge,
    Triangle,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::VertexOutOfRange { kind, id, vertex } => {
                write!(f, "vertex out of range: {kind:?} {id} uses vertex {vertex}")
            }
            Diagnostic::RepeatedVertex { kind, id } => {
                write!(f, "repeated vertex in {kind:?} {id}")
            }
            Diagnostic::DuplicateEdge { first, second } => {
                write!(
                    f,
                    "duplicate edge: edges {first} and {second} span the same vertex pair"
                )
            }
            Diagnostic::DuplicateTriangle { first, second } => write!(
                f,
                "duplicate triangle: triangles {first} and {second} span the same vertex triple"
            ),
            Diagnostic::MissingFace { triangle, face } => {
                write!(
                    f,
                    "missing face: triangle {triangle} needs edge {{{}, {}}}",
                    face[0], face[1]
                )
            }
        }
    }
}

/// Flow direction relative to the stored reference ordering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Aligned,
    Reversed,
}

impl Direction {
    pub fn flipped(self) -> Self {
        match self {
            Direction::Aligned => Direction::Reversed,
            Direction::Reversed => Direction::Aligned,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    /// Reference orientation `(tail, head)`.
    pub reference: [usize; 2],
    pub direction: Direction,
}

impl Edge {
    pub fn new(reference: [usize; 2], direction: Direction) -> Self {
        Self { reference, direction }
    }

    /// Edge oriented and directed `a → b`.
    pub fn directed(a: usize, b: usize) -> Self {
        Self::new([a, b], Direction::Aligned)
    }

    /// Edge with label-induced reference orientation and flow `from → to`.
    pub fn labelled(from: usize, to: usize) -> Self {
        if from < to {
            Self::new([from, to], Direction::Aligned)
        } else {
            Self::new([to, from], Direction::Reversed)
        }
    }

    /// Actual flow `(source, target)`.
    pub fn flow(&self) -> (usize, usize) {
        let [a, b] = self.reference;
        match self.direction {
            Direction::Aligned => (a, b),
            Direction::Reversed => (b, a),
        }
    }

    pub fn flows(&self, from: usize, to: usize) -> bool {
        self.flow() == (from, to)
    }

    pub fn contains(&self, v: usize) -> bool {
        self.reference.contains(&v)
    }

    /// The endpoint that is not `v`.
    pub fn other(&self, v: usize) -> Option<usize> {
        match self.reference {
            [a, b] if a == v => Some(b),
            [a, b] if b == v => Some(a),
            _ => None,
        }
    }

    pub fn key(&self) -> (usize, usize) {
        let [a, b] = self.reference;
        (a.min(b), a.max(b))
    }

    /// Boundary coefficient of `v`: `+1` for the reference head, `−1` for the tail.
    pub fn incidence_sign(&self, v: usize) -> Result<i8, ComplexError> {
        match self.reference {
            [_, b] if b == v => Ok(1),
            [a, _] if a == v => Ok(-1),
            _ => Err(ComplexError::NotAFace {
                simplex: self.reference.to_vec(),
                face: vec![v],
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triangle {
    /// Reference orientation; only its cyclic class matters.
    pub reference: [usize; 3],
    pub direction: Direction,
    /// `+1` when the reference class agrees with the manifold orientation,
    /// `−1` otherwise. Set by [`DirectedSimplicialComplex::orient_manifold`].
    pub manifold_sign: Option<i8>,
}

impl Triangle {
    pub fn new(reference: [usize; 3], direction: Direction) -> Self {
        Self {
            reference,
            direction,
            manifold_sign: None,
        }
    }

    pub fn directed(a: usize, b: usize, c: usize) -> Self {
        Self::new([a, b, c], Direction::Aligned)
    }

    pub fn vertices_sorted(&self) -> [usize; 3] {
        let mut v = self.reference;
        v.sort_unstable();
        v
    }

    pub fn contains(&self, v: usize) -> bool {
        self.reference.contains(&v)
    }

    /// Circulation of the actual flow as an ordered triple.
    pub fn flow_cycle(&self) -> [usize; 3] {
        match self.direction {
            Direction::Aligned => self.reference,
            Direction::Reversed => reversed(self.reference),
        }
    }

    /// Whether the flow circulates `a → b → c` (up to cyclic rotation).
    pub fn flows_along(&self, triple: [usize; 3]) -> bool {
        same_cyclic_class(self.flow_cycle(), triple)
    }

    /// The manifold-positive cyclic ordering, once oriented.
    pub fn positive_cycle(&self) -> Option<[usize; 3]> {
        self.manifold_sign.map(|s| {
            if s > 0 {
                self.reference
            } else {
                reversed(self.reference)
            }
        })
    }

    /// `+1` if `triple` circulates like the manifold orientation, `−1` otherwise.
    pub fn delta_sign(&self, triple: [usize; 3]) -> Result<i8, ComplexError> {
        let mut a = triple;
        a.sort_unstable();
        if a != self.vertices_sorted() || a[0] == a[1] || a[1] == a[2] {
            return Err(ComplexError::NotAPermutation(triple));
        }
        let positive = self
            .positive_cycle()
            .ok_or(ComplexError::ManifoldNotOriented(usize::MAX))?;
        Ok(if same_cyclic_class(positive, triple) { 1 } else { -1 })
    }

    /// Boundary coefficient of the edge `face` (given by its reference).
    ///
    /// For reference `(a, b, c)` the boundary is `(b,c) − (a,c) + (a,b)`; an
    /// edge whose reference runs the other way picks up an extra `−1`.
    pub fn incidence_sign(&self, face: [usize; 2]) -> Result<i8, ComplexError> {
        let [a, b, c] = self.reference;
        let ordered = [([b, c], 1i8), ([a, c], -1), ([a, b], 1)];
        for (f, s) in ordered {
            if f == face {
                return Ok(s);
            }
            if [f[1], f[0]] == face {
                return Ok(-s);
            }
        }
        Err(ComplexError::NotAFace {
            simplex: self.reference.to_vec(),
            face: face.to_vec(),
        })
    }

    /// The three unordered boundary pairs.
    pub fn boundary_keys(&self) -> [(usize, usize); 3] {
        let [a, b, c] = self.vertices_sorted();
        [(a, b), (a, c), (b, c)]
    }

    /// Whether the cyclic order traverses `from → to` consecutively.
    pub fn cycle_traverses(cycle: [usize; 3], from: usize, to: usize) -> bool {
        (0..3).any(|i| cycle[i] == from && cycle[(i + 1) % 3] == to)
    }
}

pub fn reversed(t: [usize; 3]) -> [usize; 3] {
    [t[0], t[2], t[1]]
}

/// Whether two orderings of the same three vertices are cyclic rotations of
/// each other.
pub fn same_cyclic_class(x: [usize; 3], y: [usize; 3]) -> bool {
    (0..3).any(|r| x == [y[r], y[(r + 1) % 3], y[(r + 2) % 3]])
}

/// Adjacent pair of simplices with the simplex they share and the product of
/// their incidence coefficients relative to it (`+1` ⇔ same relative
/// orientation).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AdjacencyRecord {
    pub pair: (usize, usize),
    pub shared: usize,
    pub sign: i8,
}

#[derive(Debug, Clone)]
pub struct DirectedSimplicialComplex {
    vertex_count: usize,
    edges: Vec<Edge>,
    triangles: Vec<Triangle>,
    edge_index: HashMap<(usize, usize), usize>,
    triangle_index: HashMap<[usize; 3], usize>,
}

impl PartialEq for DirectedSimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.vertex_count == other.vertex_count && self.edges == other.edges && self.triangles == other.triangles
    }
}

impl DirectedSimplicialComplex {
    /// Build and validate.
    pub fn new(vertex_count: usize, edges: Vec<Edge>, triangles: Vec<Triangle>) -> Result<Self, ComplexError> {
        let c = Self::from_parts(vertex_count, edges, triangles);
        let diagnostics = c.validate();
        if diagnostics.is_empty() {
            Ok(c)
        } else {
            Err(ComplexError::Invalid(diagnostics))
        }
    }

    /// Build without validation. Lookup tables keep the first occurrence of
    /// any duplicate.
    pub fn from_parts(vertex_count: usize, edges: Vec<Edge>, triangles: Vec<Triangle>) -> Self {
        let mut edge_index = HashMap::new();
        for (i, e) in edges.iter().enumerate() {
            edge_index.entry(e.key()).or_insert(i);
        }
        let mut triangle_index = HashMap::new();
        for (i, t) in triangles.iter().enumerate() {
            triangle_index.entry(t.vertices_sorted()).or_insert(i);
        }
        Self {
            vertex_count,
            edges,
            triangles,
            edge_index,
            triangle_index,
        }
    }

    /// Every violated invariant; empty means valid.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        let mut seen_edges: HashMap<(usize, usize), usize> = HashMap::new();
        for (id, e) in self.edges.iter().enumerate() {
            for &v in &e.reference {
                if v >= self.vertex_count {
                    out.push(Diagnostic::VertexOutOfRange {
                        kind: SimplexKind::Edge,
                        id,
                        vertex: v,
                    });
                }
            }
            if e.reference[0] == e.reference[1] {
                out.push(Diagnostic::RepeatedVertex {
                    kind: SimplexKind::Edge,
                    id,
                });
                continue;
            }
            if let Some(&first) = seen_edges.get(&e.key()) {
                out.push(Diagnostic::DuplicateEdge { first, second: id });
            } else {
                seen_edges.insert(e.key(), id);
            }
        }
        let mut seen_tris: HashMap<[usize; 3], usize> = HashMap::new();
        for (id, t) in self.triangles.iter().enumerate() {
            for &v in &t.reference {
                if v >= self.vertex_count {
                    out.push(Diagnostic::VertexOutOfRange {
                        kind: SimplexKind::Triangle,
                        id,
                        vertex: v,
                    });
                }
            }
            let s = t.vertices_sorted();
            if s[0] == s[1] || s[1] == s[2] {
                out.push(Diagnostic::RepeatedVertex {
                    kind: SimplexKind::Triangle,
                    id,
                });
                continue;
            }
            if let Some(&first) = seen_tris.get(&s) {
                out.push(Diagnostic::DuplicateTriangle { first, second: id });
            } else {
                seen_tris.insert(s, id);
            }
            for key in t.boundary_keys() {
                if !self.edge_index.contains_key(&key) {
                    out.push(Diagnostic::MissingFace {
                        triangle: id,
                        face: [key.0, key.1],
                    });
                }
            }
        }
        out
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn triangles(&self) -> &[Triangle] {
        &self.triangles
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn triangle_count(&self) -> usize {
        self.triangles.len()
    }

    pub fn edge_id(&self, a: usize, b: usize) -> Option<usize> {
        self.edge_index.get(&(a.min(b), a.max(b))).copied()
    }

    pub fn triangle_id(&self, a: usize, b: usize, c: usize) -> Option<usize> {
        let mut k = [a, b, c];
        k.sort_unstable();
        self.triangle_index.get(&k).copied()
    }

    /// Edge ids on the boundary of triangle `t`, in `(a,b), (a,c), (b,c)` order
    /// of its sorted vertices.
    pub fn triangle_edges(&self, t: usize) -> [usize; 3] {
        self.triangles[t]
            .boundary_keys()
            .map(|(a, b)| self.edge_id(a, b).expect("validated complex has all faces"))
    }

    /// Edge ids incident to each vertex, ascending.
    pub fn vertex_star(&self) -> Vec<Vec<usize>> {
        let mut star = vec![Vec::new(); self.vertex_count];
        for (i, e) in self.edges.iter().enumerate() {
            for &v in &e.reference {
                star[v].push(i);
            }
        }
        star
    }

    /// Triangle ids containing each edge, ascending.
    pub fn edge_cofaces(&self) -> Vec<Vec<usize>> {
        let mut cof = vec![Vec::new(); self.edges.len()];
        for t in 0..self.triangles.len() {
            for e in self.triangle_edges(t) {
                cof[e].push(t);
            }
        }
        cof
    }

    /// Number of triangles containing each edge.
    pub fn upper_degrees(&self) -> Vec<usize> {
        self.edge_cofaces().iter().map(Vec::len).collect()
    }

    /// Signed incidence of `face` (an edge id) in triangle `t`.
    pub fn triangle_edge_sign(&self, t: usize, edge: usize) -> Result<i8, ComplexError> {
        self.triangles[t].incidence_sign(self.edges[edge].reference)
    }

    /// Signed incidence matrix `B1` (`N0 × N1`, vertex rows).
    pub fn boundary_1(&self) -> ComplexMatrix {
        let mut b = ComplexMatrix::zeros(self.vertex_count, self.edges.len());
        for (j, e) in self.edges.iter().enumerate() {
            for &v in &e.reference {
                b[(v, j)] = C64::new(e.incidence_sign(v).unwrap() as f64, 0.0);
            }
        }
        b
    }

    /// Signed incidence matrix `B2` (`N1 × N2`, edge rows).
    pub fn boundary_2(&self) -> ComplexMatrix {
        let mut b = ComplexMatrix::zeros(self.edges.len(), self.triangles.len());
        for t in 0..self.triangles.len() {
            for e in self.triangle_edges(t) {
                b[(e, t)] = C64::new(self.triangle_edge_sign(t, e).unwrap() as f64, 0.0);
            }
        }
        b
    }

    /// One record per unordered edge pair per shared triangle.
    pub fn upper_adjacent_edges(&self) -> Vec<AdjacencyRecord> {
        let mut out = Vec::with_capacity(3 * self.triangles.len());
        for t in 0..self.triangles.len() {
            let es = self.triangle_edges(t);
            for (x, y) in [(0, 1), (0, 2), (1, 2)] {
                let (e1, e2) = (es[x].min(es[y]), es[x].max(es[y]));
                let sign = self.triangle_edge_sign(t, e1).unwrap() * self.triangle_edge_sign(t, e2).unwrap();
                out.push(AdjacencyRecord {
                    pair: (e1, e2),
                    shared: t,
                    sign,
                });
            }
        }
        out
    }

    /// Lower adjacency: edges sharing a vertex (`order == 1`) or triangles
    /// sharing an edge (`order == 2`).
    pub fn lower_adjacent(&self, order: usize) -> Result<Vec<AdjacencyRecord>, ComplexError> {
        match order {
            1 => Ok(self.lower_adjacent_edges()),
            2 => Ok(self.lower_adjacent_triangles()),
            k => Err(ComplexError::UnsupportedOrder(k)),
        }
    }

    pub fn lower_adjacent_edges(&self) -> Vec<AdjacencyRecord> {
        let mut out = Vec::new();
        for (v, star) in self.vertex_star().iter().enumerate() {
            for (x, &e1) in star.iter().enumerate() {
                for &e2 in &star[x + 1..] {
                    let sign = self.edges[e1].incidence_sign(v).unwrap() * self.edges[e2].incidence_sign(v).unwrap();
                    out.push(AdjacencyRecord {
                        pair: (e1, e2),
                        shared: v,
                        sign,
                    });
                }
            }
        }
        out.sort_by_key(|r| r.pair);
        out
    }

    pub fn lower_adjacent_triangles(&self) -> Vec<AdjacencyRecord> {
        let mut out = Vec::new();
        for (e, cof) in self.edge_cofaces().iter().enumerate() {
            for (x, &t1) in cof.iter().enumerate() {
                for &t2 in &cof[x + 1..] {
                    let sign = self.triangle_edge_sign(t1, e).unwrap() * self.triangle_edge_sign(t2, e).unwrap();
                    out.push(AdjacencyRecord {
                        pair: (t1, t2),
                        shared: e,
                        sign,
                    });
                }
            }
        }
        out.sort_by_key(|r| r.pair);
        out
    }

    /// Assign a coherent manifold orientation by breadth-first search over the
    /// dual graph. The lowest-id triangle of each component keeps its
    /// reference class as positive.
    pub fn orient_manifold(&self) -> Result<Self, ComplexError> {
        let cofaces = self.edge_cofaces();
        if let Some((edge, c)) = cofaces.iter().enumerate().find(|(_, c)| c.len() > 2) {
            return Err(ComplexError::NotPseudoManifold { edge, count: c.len() });
        }
        let n = self.triangles.len();
        let mut positive: Vec<Option<[usize; 3]>> = vec![None; n];
        for seed in 0..n {
            if positive[seed].is_some() {
                continue;
            }
            positive[seed] = Some(self.triangles[seed].reference);
            let mut queue = VecDeque::from([seed]);
            while let Some(t) = queue.pop_front() {
                let pt = positive[t].unwrap();
                for e in self.triangle_edges(t) {
                    let [a, b] = self.edges[e].reference;
                    // Direction in which `t` traverses the shared edge.
                    let (u, w) = if Triangle::cycle_traverses(pt, a, b) {
                        (a, b)
                    } else {
                        (b, a)
                    };
                    for &s in &cofaces[e] {
                        if s == t {
                            continue;
                        }
                        let r = self.triangles[s].reference;
                        // Neighbour must traverse the edge `w → u`.
                        let want = if Triangle::cycle_traverses(r, w, u) {
                            r
                        } else {
                            reversed(r)
                        };
                        match positive[s] {
                            None => {
                                positive[s] = Some(want);
                                queue.push_back(s);
                            }
                            Some(existing) if !same_cyclic_class(existing, want) => {
                                return Err(ComplexError::NotOrientable { triangle: s });
                            }
                            Some(_) => {}
                        }
                    }
                }
            }
        }
        let mut out = self.clone();
        for (t, p) in out.triangles.iter_mut().zip(positive) {
            let p = p.expect("every triangle visited");
            t.manifold_sign = Some(if same_cyclic_class(p, t.reference) { 1 } else { -1 });
        }
        Ok(out)
    }

    pub fn is_oriented(&self) -> bool {
        self.triangles.iter().all(|t| t.manifold_sign.is_some())
    }

    /// `Δ` sign of an ordered vertex triple of triangle `t`.
    pub fn delta_sign(&self, t: usize, triple: [usize; 3]) -> Result<i8, ComplexError> {
        self.triangles[t].delta_sign(triple).map_err(|e| match e {
            ComplexError::ManifoldNotOriented(_) => ComplexError::ManifoldNotOriented(t),
            other => other,
        })
    }

    /// Same complex with every edge direction flipped.
    pub fn with_reversed_edges(&self) -> Self {
        let edges = self
            .edges
            .iter()
            .map(|e| Edge::new(e.reference, e.direction.flipped()))
            .collect();
        Self::from_parts(self.vertex_count, edges, self.triangles.clone())
    }

    /// Connected components of the 1-skeleton, each as a sorted vertex list.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for e in &self.edges {
            let [a, b] = e.reference;
            adj.entry(a).or_default().push(b);
            adj.entry(b).or_default().push(a);
        }
        let mut seen = vec![false; self.vertex_count];
        let mut out = Vec::new();
        for s in 0..self.vertex_count {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for &w in adj.get(&v).map(Vec::as_slice).unwrap_or(&[]) {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }
}
