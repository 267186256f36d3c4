//! Hodge Laplacians of the undirected complex, Betti numbers and the 1-up
//! Bochner matrix.

use thiserror::Error;

use crate::complexes::DirectedSimplicialComplex;
use crate::linalg::{hermitian_eigenvalues, ComplexMatrix, LinalgError, C64};

/// Eigenvalues below this count towards the kernel.
pub const KERNEL_TOL: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HodgeError {
    #[error("Hodge order {0} is not supported (expected 0, 1 or 2)")]
    UnsupportedOrder(usize),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct HodgeOperators {
    pub order: usize,
    pub up: ComplexMatrix,
    pub down: ComplexMatrix,
    pub full: ComplexMatrix,
}

/// `up_k = B_{k+1}B_{k+1}ᵀ`, `down_k = B_kᵀB_k`, with `down_0 = 0` and
/// `up_2 = 0`.
pub fn hodge_laplacian(c: &DirectedSimplicialComplex, k: usize) -> Result<HodgeOperators, HodgeError> {
    let (up, down) = match k {
        0 => {
            let b1 = c.boundary_1();
            let n = c.vertex_count();
            (&b1 * &b1.transpose(), ComplexMatrix::zeros(n, n))
        }
        1 => {
            let b1 = c.boundary_1();
            let b2 = c.boundary_2();
            (&b2 * &b2.transpose(), &b1.transpose() * &b1)
        }
        2 => {
            let b2 = c.boundary_2();
            let n = c.triangle_count();
            (ComplexMatrix::zeros(n, n), &b2.transpose() * &b2)
        }
        other => return Err(HodgeError::UnsupportedOrder(other)),
    };
    let full = &up + &down;
    Ok(HodgeOperators {
        order: k,
        up,
        down,
        full,
    })
}

/// Number of eigenvalues of a Hermitian matrix below [`KERNEL_TOL`].
pub fn kernel_dimension(m: &ComplexMatrix) -> Result<usize, LinalgError> {
    Ok(hermitian_eigenvalues(m)?.iter().filter(|&&x| x < KERNEL_TOL).count())
}

/// `β_n = dim ker L_n`.
pub fn betti_number(c: &DirectedSimplicialComplex, n: usize) -> Result<usize, HodgeError> {
    let ops = hodge_laplacian(c, n)?;
    Ok(kernel_dimension(&ops.full)?)
}

/// Bochner splitting `B = D − A` of the 1-up Hodge Laplacian.
#[derive(Debug, Clone, PartialEq)]
pub struct Bochner {
    pub b: ComplexMatrix,
    /// Diagonal of `D`: twice the upper degree of each edge.
    pub d: Vec<f64>,
    /// `−1` for `∼_U`, `+1` for `≁_U`, `0` otherwise.
    pub a: ComplexMatrix,
}

pub fn bochner_1up(c: &DirectedSimplicialComplex) -> Bochner {
    let n = c.edge_count();
    let mut a = ComplexMatrix::zeros(n, n);
    let mut d = vec![0.0; n];
    for r in c.upper_adjacent_edges() {
        let (l, m) = r.pair;
        let v = C64::new(-(r.sign as f64), 0.0);
        a[(l, m)] += v;
        a[(m, l)] += v;
    }
    for (l, deg) in c.upper_degrees().into_iter().enumerate() {
        d[l] = 2.0 * deg as f64;
    }
    let mut b = -&a;
    for (l, &x) in d.iter().enumerate() {
        b[(l, l)] = C64::new(x, 0.0);
    }
    Bochner { b, d, a }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::{Edge, Triangle};

    fn full_triangle() -> DirectedSimplicialComplex {
        DirectedSimplicialComplex::new(
            3,
            vec![Edge::directed(0, 1), Edge::directed(0, 2), Edge::directed(1, 2)],
            vec![Triangle::directed(0, 1, 2)],
        )
        .unwrap()
    }

    fn hollow_triangle() -> DirectedSimplicialComplex {
        DirectedSimplicialComplex::new(
            3,
            vec![Edge::directed(0, 1), Edge::directed(0, 2), Edge::directed(1, 2)],
            vec![],
        )
        .unwrap()
    }

    #[test]
    fn order_zero_is_graph_laplacian() {
        let c = full_triangle();
        assert_eq!(
            hodge_laplacian(&c, 0).unwrap().up,
            crate::graph::combinatorial_laplacian(&c)
        );
        assert!(hodge_laplacian(&c, 0).unwrap().down.is_zero());
    }

    #[test]
    fn order_one_diagonal() {
        let h = hodge_laplacian(&full_triangle(), 1).unwrap();
        for l in 0..3 {
            assert_eq!(h.full[(l, l)].re, 3.0);
        }
        assert!(hodge_laplacian(&hollow_triangle(), 1).unwrap().up.is_zero());
    }

    #[test]
    fn unsupported_order() {
        assert_eq!(
            hodge_laplacian(&full_triangle(), 3),
            Err(HodgeError::UnsupportedOrder(3))
        );
    }

    #[test]
    fn betti_numbers_of_triangles() {
        let c = full_triangle();
        assert_eq!(betti_number(&c, 0).unwrap(), 1);
        assert_eq!(betti_number(&c, 1).unwrap(), 0);
        assert_eq!(betti_number(&c, 2).unwrap(), 0);
        assert_eq!(betti_number(&hollow_triangle(), 1).unwrap(), 1);
    }

    #[test]
    fn hodge_parts_annihilate() {
        let h = hodge_laplacian(&full_triangle(), 1).unwrap();
        assert!((&h.up * &h.down).frobenius_norm() < 1e-12);
        assert!((&h.down * &h.up).frobenius_norm() < 1e-12);
    }

    #[test]
    fn bochner_of_full_triangle() {
        let c = full_triangle();
        let bo = bochner_1up(&c);
        assert_eq!(bo.d, vec![2.0, 2.0, 2.0]);
        // edges 0=[0,1], 1=[0,2], 2=[1,2]; ([0,1],[1,2]) are ∼_U
        assert_eq!(bo.a[(0, 2)].re, -1.0);
        assert_eq!(bo.a[(0, 1)].re, 1.0);
        let up = hodge_laplacian(&c, 1).unwrap().up;
        for l in 0..3 {
            let row: f64 = (0..3).filter(|&m| m != l).map(|m| up[(l, m)].norm()).sum();
            assert_eq!(bo.b[(l, l)].re, row);
            for m in 0..3 {
                if m != l {
                    assert_eq!(bo.b[(l, m)], up[(l, m)]);
                }
            }
        }
        assert!(hermitian_eigenvalues(&bo.b).unwrap()[0] > -1e-12);
    }

    #[test]
    fn bochner_without_triangles() {
        assert!(bochner_1up(&hollow_triangle()).b.is_zero());
    }
}
