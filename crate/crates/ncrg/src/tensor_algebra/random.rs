//! Seeded random generation of test data.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::scalar::{rat, Rational};

use super::cyclic::{partitions, Cell, Truncation};
use super::interaction::{component_basis, NcInteraction};
use super::space::GradedSpace;
use super::tensor::Tensor;

/// Deterministic generator for a seed.
pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

/// Small nonzero rational with numerator in `[-3, 3]` and denominator in `[1, 3]`.
pub fn small_rational(rng: &mut impl Rng) -> Rational {
    loop {
        let n: i64 = rng.gen_range(-3..=3);
        if n != 0 {
            return rat(n, rng.gen_range(1..=3));
        }
    }
}

/// Random interaction with roughly `terms` orbit-basis terms spread over the
/// cells accepted by `allow`.
pub fn random_interaction(
    rng: &mut impl Rng,
    space: &Arc<GradedSpace>,
    trunc: Truncation,
    terms: usize,
    allow: impl Fn(&Cell) -> bool,
) -> NcInteraction<Rational> {
    let mut choices: Vec<(Cell, Vec<u32>, Tensor<Rational>)> = Vec::new();
    for c in trunc.cells().into_iter().filter(|c| allow(c)) {
        for r in partitions(c.l, c.k) {
            for t in component_basis::<Rational>(space, &r) {
                choices.push((c, r.clone(), t));
            }
        }
    }
    let mut out = NcInteraction::new(space.clone(), trunc);
    for _ in 0..terms {
        if let Some((c, r, t)) = choices.choose(rng) {
            out.add_invariant(*c, r, &t.scale(&small_rational(rng)));
        }
    }
    out
}

/// Random symmetric degree-zero two-tensor; each admissible entry is kept with probability `density`.
pub fn random_propagator(
    rng: &mut impl Rng,
    space: &GradedSpace,
    density: f64,
) -> Tensor<Rational> {
    let d = space.dim();
    let mut p = Tensor::zero(2);
    for a in 0..d {
        for b in a..d {
            if space.degree(a as u8) + space.degree(b as u8) != 0 || !rng.gen_bool(density) {
                continue;
            }
            let odd_pair = space.parity(a as u8) && space.parity(b as u8);
            if a == b && odd_pair {
                continue;
            }
            let v = small_rational(rng);
            p.add_entry(vec![a as u8, b as u8], v.clone());
            if a != b {
                p.add_entry(vec![b as u8, a as u8], if odd_pair { -v } else { v });
            }
        }
    }
    p
}
