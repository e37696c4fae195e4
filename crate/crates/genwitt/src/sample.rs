//! Seeded random generation of algebra values.
//!
//! Everything here is driven by an explicit ChaCha stream so that the
//! property suites and the CLI `selftest` command are reproducible
//! byte-for-byte for a fixed seed.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{AlgebraConfig, BasisElement, Element};
use crate::ideals::IndexBox;
use crate::operator::{FunctionElement, FunctionTerm};
use crate::rational::{ratio, Rational};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Small nonzero rational: numerator in ±1..=9, denominator in 1..=9.
pub fn nonzero_rational(rng: &mut ChaCha8Rng) -> Rational {
    let num = if rng.random_bool(0.5) { rng.random_range(1..=9) } else { rng.random_range(-9..=-1) };
    let den = rng.random_range(1..=9);
    ratio(num, den)
}

/// One of the slopes 1, 2/3, −5.
pub fn slope(rng: &mut ChaCha8Rng) -> Rational {
    match rng.random_range(0..3) {
        0 => ratio(1, 1),
        1 => ratio(2, 3),
        _ => ratio(-5, 1),
    }
}

/// Rank-`n` config with slopes drawn by [`slope`].
pub fn config(rng: &mut ChaCha8Rng, n: usize) -> AlgebraConfig {
    let slopes = (0..n).map(|_| slope(rng)).collect();
    AlgebraConfig::new(slopes).expect("sampled slopes are nonzero")
}

fn tuple(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> Vec<i64> {
    (0..n).map(|_| rng.random_range(-bound..=bound)).collect()
}

/// Uniform basis element inside the box.
pub fn basis_element(rng: &mut ChaCha8Rng, n: usize, bx: IndexBox) -> BasisElement {
    BasisElement::new(
        tuple(rng, n, bx.upper),
        tuple(rng, n, bx.lower),
        rng.random_range(1..=n),
    )
}

/// Element with exactly `terms` distinct support elements inside the box
/// and nonzero coefficients; nonzero whenever `terms ≥ 1`.
pub fn element(rng: &mut ChaCha8Rng, n: usize, bx: IndexBox, terms: usize) -> Element {
    let mut out = Element::zero();
    while out.num_terms() < terms {
        let b = basis_element(rng, n, bx);
        if !out.contains(&b) {
            out.add_term(b, nonzero_rational(rng));
        }
    }
    out
}

/// Uniform function term inside the box.
pub fn function_term(rng: &mut ChaCha8Rng, n: usize, bx: IndexBox) -> FunctionTerm {
    FunctionTerm::new(tuple(rng, n, bx.upper), tuple(rng, n, bx.lower))
}

pub fn function_element(
    rng: &mut ChaCha8Rng,
    n: usize,
    bx: IndexBox,
    terms: usize,
) -> FunctionElement {
    let mut out = FunctionElement::zero();
    while out.num_terms() < terms {
        let t = function_term(rng, n, bx);
        if !out.contains(&t) {
            out.add_term(t, nonzero_rational(rng));
        }
    }
    out
}

/// Rank-one element inside the box with non-negative lower indices.
pub fn bplus_element(rng: &mut ChaCha8Rng, bx: IndexBox, terms: usize) -> Element {
    let mut out = Element::zero();
    while out.num_terms() < terms {
        let b = BasisElement::rank1(
            rng.random_range(-bx.upper..=bx.upper),
            rng.random_range(0..=bx.lower),
        );
        if !out.contains(&b) {
            out.add_term(b, nonzero_rational(rng));
        }
    }
    out
}

/// Function element with non-negative lower indices.
pub fn nonneg_function_element(
    rng: &mut ChaCha8Rng,
    bx: IndexBox,
    terms: usize,
) -> FunctionElement {
    let mut out = FunctionElement::zero();
    while out.num_terms() < terms {
        let t = FunctionTerm::rank1(
            rng.random_range(-bx.upper..=bx.upper),
            rng.random_range(0..=bx.lower),
        );
        if !out.contains(&t) {
            out.add_term(t, nonzero_rational(rng));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_for_fixed_seed() {
        let bx = IndexBox::new(3, 3);
        let mut r1 = rng(42);
        let mut r2 = rng(42);
        for _ in 0..20 {
            assert_eq!(element(&mut r1, 2, bx, 3), element(&mut r2, 2, bx, 3));
        }
    }

    #[test]
    fn respects_shape_constraints() {
        let bx = IndexBox::new(2, 1);
        let mut r = rng(7);
        for _ in 0..50 {
            let e = element(&mut r, 3, bx, 4);
            assert_eq!(e.num_terms(), 4);
            assert!(bx.contains_support(&e));
            let b = bplus_element(&mut r, bx, 2);
            assert!(b.support().all(crate::derivations::in_bplus));
        }
    }
}
