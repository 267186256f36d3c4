#![allow(dead_code)]

use std::collections::BTreeSet;
use std::f64::consts::PI;

use hocl::{DirectedSimplicialComplex, Direction, Edge, Triangle};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

#[derive(Debug, Deserialize)]
pub struct Term {
    pub a: f64,
    pub b: f64,
    pub f: String,
    pub freq: f64,
    pub shift: [i32; 2],
}

impl Term {
    pub fn eval(&self, delta: f64) -> f64 {
        let arg = self.freq * delta - self.shift[0] as f64 / self.shift[1] as f64 * PI;
        let g = match self.f.as_str() {
            "cos" => arg.cos(),
            "sin" => arg.sin(),
            other => panic!("unknown function {other}"),
        };
        self.a + self.b * g
    }
}

#[derive(Debug, Deserialize)]
pub struct Family {
    pub id: String,
    pub case: u32,
    pub operator: String,
    pub mode: String,
    pub multiplicity: Option<usize>,
    pub terms: Vec<Term>,
}

impl Family {
    /// Sorted values with multiplicity.
    pub fn multiset(&self, delta: f64) -> Vec<f64> {
        let m = self.multiplicity.unwrap_or(1);
        let mut v: Vec<f64> = self
            .terms
            .iter()
            .flat_map(|t| std::iter::repeat_n(t.eval(delta), m))
            .collect();
        v.sort_by(f64::total_cmp);
        v
    }

    /// Largest distance from an eigenvalue to the nearest term.
    pub fn membership_error(&self, delta: f64, eigenvalues: &[f64]) -> f64 {
        eigenvalues
            .iter()
            .map(|&x| {
                self.terms
                    .iter()
                    .map(|t| (t.eval(delta) - x).abs())
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    }

    /// Max abs error of the sorted comparison, or infinity on a size mismatch.
    pub fn multiset_error(&self, delta: f64, eigenvalues: &[f64]) -> f64 {
        let expected = self.multiset(delta);
        if expected.len() != eigenvalues.len() {
            return f64::INFINITY;
        }
        expected
            .iter()
            .zip(eigenvalues)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Deserialize)]
struct ClosedForms {
    families: Vec<Family>,
}

pub fn closed_forms() -> Vec<Family> {
    let text = include_str!("../data/closed_forms.json");
    serde_json::from_str::<ClosedForms>(text)
        .expect("closed_forms.json parses")
        .families
}

pub fn family(id: &str) -> Family {
    closed_forms()
        .into_iter()
        .find(|f| f.id == id)
        .unwrap_or_else(|| panic!("no family {id}"))
}

/// Seeded random directed complex with at most 8 vertices and 6 triangles.
pub fn random_complex(seed: u64) -> DirectedSimplicialComplex {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(3..=8);
    let want = rng.gen_range(0..=6);
    let mut triples = BTreeSet::new();
    for _ in 0..4 * want {
        if triples.len() == want {
            break;
        }
        let mut vs: Vec<usize> = (0..n).collect();
        vs.shuffle(&mut rng);
        let mut t = [vs[0], vs[1], vs[2]];
        t.sort();
        triples.insert(t);
    }
    let mut pairs = BTreeSet::new();
    for t in &triples {
        pairs.insert((t[0], t[1]));
        pairs.insert((t[0], t[2]));
        pairs.insert((t[1], t[2]));
    }
    for _ in 0..rng.gen_range(0..=4) {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a != b {
            pairs.insert((a.min(b), a.max(b)));
        }
    }
    let direction = |rng: &mut ChaCha8Rng| {
        if rng.gen_bool(0.5) {
            Direction::Aligned
        } else {
            Direction::Reversed
        }
    };
    let edges = pairs
        .into_iter()
        .map(|(a, b)| {
            let r = if rng.gen_bool(0.5) { [a, b] } else { [b, a] };
            Edge::new(r, direction(&mut rng))
        })
        .collect();
    let triangles = triples
        .into_iter()
        .map(|t| {
            let mut r = t;
            r.shuffle(&mut rng);
            Triangle::new(r, direction(&mut rng))
        })
        .collect();
    DirectedSimplicialComplex::new(n, edges, triangles).expect("random complex is valid")
}

/// Smallest circular distance between two angles.
pub fn angle_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}
