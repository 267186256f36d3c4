//! Spectral operators on directed 2-dimensional simplicial complexes.
//!
//! Directed edges and triangles carry a flow direction on top of the usual
//! reference orientation. The crate builds the Hermitian operators that see
//! both:
//!
//! - graph level: combinatorial, magnetic and connection Laplacians ([`graph`]);
//! - undirected simplicial level: Hodge Laplacians and Betti numbers ([`hodge`]);
//! - directed simplicial level: the 1-up, 1-down and 2-down connection
//!   Laplacians whose 2×2 blocks are phase-rotated Pauli matrices ([`connection`]).
//!
//! On top of these sit δ-sweeps of spectra and commutators ([`sweeps`]) and the
//! edge diffusion `dν/dt = −Lν` ([`diffusion`]).
//!
//! ```
//! use hocl::generators::{directed_triangle, TriangleCase};
//! use hocl::connection::connection_1up;
//! use hocl::linalg::hermitian_eigenvalues;
//!
//! let c = directed_triangle(TriangleCase::Case1);
//! let op = connection_1up(&c, std::f64::consts::FRAC_PI_3);
//! let spectrum = hermitian_eigenvalues(&op.matrix).unwrap();
//! assert!(spectrum[0].abs() < 1e-12);
//! ```

pub mod cochain;
pub mod complexes;
pub mod connection;
pub mod diffusion;
pub mod generators;
pub mod graph;
pub mod hodge;
pub mod linalg;
pub mod sweeps;

pub use cochain::Cochain;
pub use complexes::{DirectedSimplicialComplex, Direction, Edge, Triangle};
pub use linalg::{ComplexMatrix, Pauli, C64};

/// Reduce an angle to `[0, 2π)`.
pub fn wrap_angle(theta: f64) -> f64 {
    let two_pi = std::f64::consts::TAU;
    let r = theta.rem_euclid(two_pi);
    if r >= two_pi {
        0.0
    } else {
        r
    }
}
