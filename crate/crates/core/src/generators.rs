//! The four single-triangle cases, periodic triangulated tori, built-in names
//! and the JSON complex-description format.

use std::fmt;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complexes::{ComplexError, DirectedSimplicialComplex, Direction, Edge, Triangle};

#[derive(Debug, Error)]
pub enum GeneratorError {
    #[error("unknown triangle case {0} (expected 1 to 4)")]
    UnknownCase(u32),
    #[error("torus {width}x{height} is too small: both sides must be at least 3")]
    TooSmall { width: usize, height: usize },
    #[error("unknown torus type {0} (expected 1 or 2)")]
    UnknownTorusType(u32),
    #[error("unknown built-in complex '{0}' (expected case1..case4 or torusMxNt1/torusMxNt2)")]
    UnknownBuiltin(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid complex file: {0}")]
    Invalid(ComplexError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TriangleCase {
    /// All three edges follow the triangle's circulation.
    Case1,
    /// All three edges oppose it.
    Case2,
    /// Two edges follow it.
    Case3,
    /// One edge follows it.
    Case4,
}

impl TriangleCase {
    pub const ALL: [TriangleCase; 4] = [
        TriangleCase::Case1,
        TriangleCase::Case2,
        TriangleCase::Case3,
        TriangleCase::Case4,
    ];

    pub fn from_id(id: u32) -> Result<Self, GeneratorError> {
        match id {
            1 => Ok(TriangleCase::Case1),
            2 => Ok(TriangleCase::Case2),
            3 => Ok(TriangleCase::Case3),
            4 => Ok(TriangleCase::Case4),
            other => Err(GeneratorError::UnknownCase(other)),
        }
    }

    pub fn id(self) -> u32 {
        match self {
            TriangleCase::Case1 => 1,
            TriangleCase::Case2 => 2,
            TriangleCase::Case3 => 3,
            TriangleCase::Case4 => 4,
        }
    }
}

impl fmt::Display for TriangleCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "case{}", self.id())
    }
}

/// A single filled triangle on vertices `0, 1, 2` with label-induced reference
/// orientations.
///
/// | case | edges            | circulation |
/// |------|------------------|-------------|
/// | 1    | 0→1, 1→2, 2→0    | 0→1→2       |
/// | 2    | 0→1, 1→2, 2→0    | 2→1→0       |
/// | 3    | 0→1, 1→2, 0→2    | 0→1→2       |
/// | 4    | 0→1, 1→2, 0→2    | 2→1→0       |
pub fn directed_triangle(case: TriangleCase) -> DirectedSimplicialComplex {
    let closing = match case {
        TriangleCase::Case1 | TriangleCase::Case2 => Edge::labelled(2, 0),
        TriangleCase::Case3 | TriangleCase::Case4 => Edge::labelled(0, 2),
    };
    let dir = match case {
        TriangleCase::Case1 | TriangleCase::Case3 => Direction::Aligned,
        TriangleCase::Case2 | TriangleCase::Case4 => Direction::Reversed,
    };
    DirectedSimplicialComplex::new(
        3,
        vec![Edge::labelled(0, 1), closing, Edge::labelled(1, 2)],
        vec![Triangle::new([0, 1, 2], dir)],
    )
    .expect("case triangles are valid")
}

/// Which case a triangle of a complex realizes, by counting the boundary edges
/// that follow its circulation.
pub fn classify_triangle(c: &DirectedSimplicialComplex, t: usize) -> TriangleCase {
    let cycle = c.triangles()[t].flow_cycle();
    let following = c
        .triangle_edges(t)
        .iter()
        .filter(|&&e| {
            let (s, d) = c.edges()[e].flow();
            Triangle::cycle_traverses(cycle, s, d)
        })
        .count();
    match following {
        3 => TriangleCase::Case1,
        0 => TriangleCase::Case2,
        2 => TriangleCase::Case3,
        _ => TriangleCase::Case4,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TorusType {
    /// Every triangle circulates along its edges.
    Type1,
    /// As `Type1` with the upper triangle of every cell reversed.
    Type2,
}

impl TorusType {
    pub fn from_id(id: u32) -> Result<Self, GeneratorError> {
        match id {
            1 => Ok(TorusType::Type1),
            2 => Ok(TorusType::Type2),
            other => Err(GeneratorError::UnknownTorusType(other)),
        }
    }

    pub fn id(self) -> u32 {
        match self {
            TorusType::Type1 => 1,
            TorusType::Type2 => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TorusSpec {
    pub width: usize,
    pub height: usize,
    pub kind: TorusType,
}

impl TorusSpec {
    pub fn new(width: usize, height: usize, kind: TorusType) -> Self {
        Self { width, height, kind }
    }
}

impl fmt::Display for TorusSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "torus{}x{}t{}", self.width, self.height, self.kind.id())
    }
}

/// Periodic `m × n` grid triangulation.
///
/// Vertex `(x, y)` has index `y·m + x`. Each cell `(x, y)` contributes
///
/// - a horizontal edge `(x+1, y) → (x, y)`,
/// - a vertical edge `(x, y) → (x, y+1)`,
/// - a diagonal edge `(x, y+1) → (x+1, y)`,
/// - the lower triangle `{(x,y), (x+1,y), (x,y+1)}` and the upper triangle
///   `{(x+1,y), (x,y+1), (x+1,y+1)}`.
///
/// Edge references follow the drawn arrows and triangle references follow
/// their directed edge cycles. Both sides must be at least 3; smaller grids
/// wrap onto repeated edges.
pub fn triangulated_torus(spec: TorusSpec) -> Result<DirectedSimplicialComplex, GeneratorError> {
    let (m, n) = (spec.width, spec.height);
    if m < 3 || n < 3 {
        return Err(GeneratorError::TooSmall { width: m, height: n });
    }
    let v = |x: usize, y: usize| (y % n) * m + (x % m);
    let mut edges = Vec::with_capacity(3 * m * n);
    let mut triangles = Vec::with_capacity(2 * m * n);
    for y in 0..n {
        for x in 0..m {
            edges.push(Edge::directed(v(x + 1, y), v(x, y)));
            edges.push(Edge::directed(v(x, y), v(x, y + 1)));
            edges.push(Edge::directed(v(x, y + 1), v(x + 1, y)));
            // lower: (x+1,y) → (x,y) → (x,y+1) → (x+1,y)
            triangles.push(Triangle::directed(v(x + 1, y), v(x, y), v(x, y + 1)));
            // upper: (x,y+1) → (x+1,y) → (x+1,y+1) → (x,y+1)
            let upper_dir = match spec.kind {
                TorusType::Type1 => Direction::Aligned,
                TorusType::Type2 => Direction::Reversed,
            };
            triangles.push(Triangle::new([v(x, y + 1), v(x + 1, y), v(x + 1, y + 1)], upper_dir));
        }
    }
    edges.sort_by_key(Edge::key);
    triangles.sort_by_key(Triangle::vertices_sorted);
    DirectedSimplicialComplex::new(m * n, edges, triangles).map_err(GeneratorError::Invalid)
}

/// Resolve `case1`..`case4`, `torusMxNt1` or `torusMxNt2`.
pub fn builtin(name: &str) -> Result<DirectedSimplicialComplex, GeneratorError> {
    let unknown = || GeneratorError::UnknownBuiltin(name.to_string());
    if let Some(id) = name.strip_prefix("case") {
        let id: u32 = id.parse().map_err(|_| unknown())?;
        return TriangleCase::from_id(id).map(directed_triangle).map_err(|_| unknown());
    }
    if let Some(rest) = name.strip_prefix("torus") {
        let (dims, kind) = rest.split_once('t').ok_or_else(unknown)?;
        let (w, h) = dims.split_once('x').ok_or_else(unknown)?;
        let width: usize = w.parse().map_err(|_| unknown())?;
        let height: usize = h.parse().map_err(|_| unknown())?;
        let kind: u32 = kind.parse().map_err(|_| unknown())?;
        let kind = TorusType::from_id(kind).map_err(|_| unknown())?;
        return triangulated_torus(TorusSpec::new(width, height, kind));
    }
    Err(unknown())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeRecord {
    #[serde(rename = "ref")]
    reference: [usize; 2],
    dir: Direction,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TriangleRecord {
    #[serde(rename = "ref")]
    reference: [usize; 3],
    dir: Direction,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComplexFile {
    vertices: usize,
    edges: Vec<EdgeRecord>,
    triangles: Vec<TriangleRecord>,
}

/// Pretty-printed JSON description of `c`.
pub fn to_json(c: &DirectedSimplicialComplex) -> String {
    let file = ComplexFile {
        vertices: c.vertex_count(),
        edges: c
            .edges()
            .iter()
            .map(|e| EdgeRecord {
                reference: e.reference,
                dir: e.direction,
            })
            .collect(),
        triangles: c
            .triangles()
            .iter()
            .map(|t| TriangleRecord {
                reference: t.reference,
                dir: t.direction,
            })
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&file).expect("complex serializes");
    s.push('\n');
    s
}

/// Parse and validate a JSON description.
pub fn from_json(text: &str) -> Result<DirectedSimplicialComplex, GeneratorError> {
    let file: ComplexFile = serde_json::from_str(text).map_err(|e| GeneratorError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let edges = file.edges.into_iter().map(|e| Edge::new(e.reference, e.dir)).collect();
    let triangles = file
        .triangles
        .into_iter()
        .map(|t| Triangle::new(t.reference, t.dir))
        .collect();
    DirectedSimplicialComplex::new(file.vertices, edges, triangles).map_err(GeneratorError::Invalid)
}

pub fn load_complex(path: impl AsRef<Path>) -> Result<DirectedSimplicialComplex, GeneratorError> {
    from_json(&fs::read_to_string(path)?)
}

pub fn save_complex(c: &DirectedSimplicialComplex, path: impl AsRef<Path>) -> Result<(), GeneratorError> {
    fs::write(path, to_json(c))?;
    Ok(())
}
