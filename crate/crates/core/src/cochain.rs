//! Complex-valued cochains: one scalar per vertex, or one `ℂ²` vector per
//! edge or triangle.

use std::f64::consts::{FRAC_PI_2, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::linalg::{vec_norm, C64};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CochainError {
    #[error("order-{order} cochain on {simplices} simplices needs {expected} values, got {actual}")]
    WrongLength {
        order: usize,
        simplices: usize,
        expected: usize,
        actual: usize,
    },
    #[error("cochain length mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("non-finite cochain entry")]
    NonFinite,
}

/// Number of complex components carried per simplex.
pub fn components_per_simplex(order: usize) -> usize {
    if order == 0 {
        1
    } else {
        2
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cochain {
    order: usize,
    values: Vec<C64>,
}

impl Cochain {
    pub fn new(order: usize, simplices: usize, values: Vec<C64>) -> Result<Self, CochainError> {
        let expected = simplices * components_per_simplex(order);
        if values.len() != expected {
            return Err(CochainError::WrongLength {
                order,
                simplices,
                expected,
                actual: values.len(),
            });
        }
        if values.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(CochainError::NonFinite);
        }
        Ok(Self { order, values })
    }

    /// Wrap a flat vector whose length is already a multiple of the
    /// per-simplex width.
    pub fn from_flat(order: usize, values: Vec<C64>) -> Result<Self, CochainError> {
        let w = components_per_simplex(order);
        if !values.len().is_multiple_of(w) {
            return Err(CochainError::WrongLength {
                order,
                simplices: values.len() / w,
                expected: (values.len() / w) * w,
                actual: values.len(),
            });
        }
        Self::new(order, values.len() / w, values)
    }

    pub fn zeros(order: usize, simplices: usize) -> Self {
        Self {
            order,
            values: vec![C64::new(0.0, 0.0); simplices * components_per_simplex(order)],
        }
    }

    /// Unit amplitude on every simplex with uniformly drawn angles.
    ///
    /// Order ≥ 1 uses `(cos ψ·e^{iθ}, sin ψ·e^{iφ})` with `ψ ∈ [0, π/2]`,
    /// `θ, φ ∈ [0, 2π)`; order 0 uses `e^{iθ}`.
    pub fn random_unit(order: usize, simplices: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut values = Vec::with_capacity(simplices * components_per_simplex(order));
        for _ in 0..simplices {
            if order == 0 {
                values.push(C64::from_polar(1.0, rng.gen_range(0.0..TAU)));
            } else {
                let psi = rng.gen_range(0.0..=FRAC_PI_2);
                let theta = rng.gen_range(0.0..TAU);
                let phi = rng.gen_range(0.0..TAU);
                values.push(C64::from_polar(psi.cos(), theta));
                values.push(C64::from_polar(psi.sin(), phi));
            }
        }
        Self { order, values }
    }

    /// Independent standard normal real and imaginary parts.
    pub fn random_gaussian(order: usize, simplices: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = simplices * components_per_simplex(order);
        let mut normal = || {
            // Box-Muller
            let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
            let u2: f64 = rng.gen_range(0.0..TAU);
            (-2.0 * u1.ln()).sqrt() * u2.cos()
        };
        let values = (0..n).map(|_| C64::new(normal(), normal())).collect();
        Self { order, values }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn simplex_count(&self) -> usize {
        self.values.len() / components_per_simplex(self.order)
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<C64> {
        self.values
    }

    /// The `ℂ²` value on simplex `l` (order ≥ 1).
    pub fn pair(&self, l: usize) -> [C64; 2] {
        [self.values[2 * l], self.values[2 * l + 1]]
    }

    pub fn norm(&self) -> f64 {
        vec_norm(&self.values)
    }

    pub fn scaled(&self, s: C64) -> Self {
        Self {
            order: self.order,
            values: self.values.iter().map(|z| z * s).collect(),
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, CochainError> {
        if self.values.len() != other.values.len() {
            return Err(CochainError::DimensionMismatch {
                left: self.values.len(),
                right: other.values.len(),
            });
        }
        Ok(Self {
            order: self.order,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}
