//! Deterministic property suites behind the CLI `selftest` command.
//!
//! Each suite draws its inputs from a seeded stream, so identical
//! invocations print identical reports.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{AlgebraConfig, BasisElement, Element};
use crate::derivations::{self, DerivationTable, Decomposition};
use crate::ideals::IndexBox;
use crate::linalg::RowSpace;
use crate::operator::FunctionElement;
use crate::rational::from_i64;
use crate::sample;
use crate::text;

#[derive(Clone, Debug)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: usize,
    pub total: usize,
}

impl SuiteResult {
    pub fn ok(&self) -> bool {
        self.passed == self.total
    }
}

/// Runs every suite that applies to the config's rank.
pub fn run_selftest(cfg: &AlgebraConfig, seed: u64, trials: usize) -> Vec<SuiteResult> {
    let mut rng = sample::rng(seed);
    let mut results = vec![
        antisymmetry(cfg, &mut rng, trials),
        jacobi(cfg, &mut rng, trials),
        bilinearity(cfg, &mut rng, trials),
        oracle_equivalence(cfg, &mut rng, trials),
        grading(cfg, &mut rng, trials),
        witt_embedding(cfg),
        print_parse(cfg, &mut rng, trials),
        row_reduction(cfg, &mut rng, trials.min(50)),
    ];
    if cfg.n() == 1 {
        results.push(integrate_round_trip(cfg, &mut rng, trials));
        results.push(derivation_round_trip(cfg, &mut rng, trials.min(50)));
    }
    results
}

fn tally(
    name: &'static str,
    total: usize,
    mut trial: impl FnMut(usize) -> bool,
) -> SuiteResult {
    let passed = (0..total).filter(|&t| trial(t)).count();
    SuiteResult { name, passed, total }
}

fn antisymmetry(cfg: &AlgebraConfig, rng: &mut ChaCha8Rng, trials: usize) -> SuiteResult {
    let bx = IndexBox::new(3, 3);
    tally("antisymmetry", trials, |_| {
        let x = sample::element(rng, cfg.n(), bx, 3);
        let y = sample::element(rng, cfg.n(), bx, 3);
        let xy = cfg.bracket(&x, &y).expect("same config");
        let yx = cfg.bracket(&y, &x).expect("same config");
        (&xy + &yx).is_zero()
    })
}

fn jacobi(cfg: &AlgebraConfig, rng: &mut ChaCha8Rng, trials: usize) -> SuiteResult {
    let bx = IndexBox::new(3, 3);
    tally("jacobi", trials, |_| {
        let x = sample::element(rng, cfg.n(), bx, 2);
        let y = sample::element(rng, cfg.n(), bx, 2);
        let z = sample::element(rng, cfg.n(), bx, 2);
        let a = cfg.bracket(&x, &cfg.bracket(&y, &z).unwrap()).unwrap();
        let b = cfg.bracket(&y, &cfg.bracket(&z, &x).unwrap()).unwrap();
        let c = cfg.bracket(&z, &cfg.bracket(&x, &y).unwrap()).unwrap();
        (&(&a + &b) + &c).is_zero()
    })
}

fn bilinearity(cfg: &AlgebraConfig, rng: &mut ChaCha8Rng, trials: usize) -> SuiteResult {
    let bx = IndexBox::new(3, 3);
    tally("bilinearity", trials, |_| {
        let x = sample::element(rng, cfg.n(), bx, 2);
        let x2 = sample::element(rng, cfg.n(), bx, 2);
        let y = sample::element(rng, cfg.n(), bx, 2);
        let alpha = sample::nonzero_rational(rng);
        let beta = sample::nonzero_rational(rng);
        let mut combo = x.scaled(&alpha);
        combo.add_scaled(&x2, &beta);
        let lhs = cfg.bracket(&combo, &y).unwrap();
        let mut rhs = cfg.bracket(&x, &y).unwrap().scaled(&alpha);
        rhs.add_scaled(&cfg.bracket(&x2, &y).unwrap(), &beta);
        lhs == rhs
    })
}

fn oracle_equivalence(cfg: &AlgebraConfig, rng: &mut ChaCha8Rng, trials: usize) -> SuiteResult {
    let bx = IndexBox::new(3, 3);
    tally("operator oracle", trials, |_| {
        let x = sample::element(rng, cfg.n(), bx, 2);
        let y = sample::element(rng, cfg.n(), bx, 2);
        let f = sample::function_term(rng, cfg.n(), bx);
        let bracket = cfg.bracket(&x, &y).unwrap();
        let via_bracket = cfg.apply(&bracket, &FunctionElement::unit(f.clone())).unwrap();
        let via_commutator = cfg.oracle_commutator(&x, &y, &f).unwrap();
        via_bracket == via_commutator
    })
}

fn grading(cfg: &AlgebraConfig, rng: &mut ChaCha8Rng, trials: usize) -> SuiteResult {
    let n = cfg.n();
    let homogeneous = |rng: &mut ChaCha8Rng| {
        let degree: Vec<i64> = (0..n).map(|_| rng.random_range(-3..=3)).collect();
        let mut e = Element::zero();
        while e.num_terms() < 2 {
            let b = BasisElement::new(
                degree.clone(),
                (0..n).map(|_| rng.random_range(-3..=3)).collect(),
                rng.random_range(1..=n),
            );
            if !e.contains(&b) {
                e.add_term(b, sample::nonzero_rational(rng));
            }
        }
        (degree, e)
    };
    tally("grading", trials, |_| {
        let (d1, x) = homogeneous(rng);
        let (d2, y) = homogeneous(rng);
        let expected: Vec<i64> = d1.iter().zip(&d2).map(|(a, b)| a + b).collect();
        cfg.bracket(&x, &y)
            .unwrap()
            .support()
            .all(|b| b.upper == expected)
    })
}

/// With all upper indices zero the bracket must match the classical Witt
/// formula term for term; checked on every pair inside a small window.
fn witt_embedding(cfg: &AlgebraConfig) -> SuiteResult {
    let n = cfg.n();
    let bound = if n >= 3 { 1 } else { 2 };
    let mut elements = Vec::new();
    for lower in tuples(bound, n) {
        for dir in 1..=n {
            elements.push(BasisElement::new(vec![0; n], lower.clone(), dir));
        }
    }
    let mut passed = 0;
    let mut total = 0;
    for x in &elements {
        for y in &elements {
            total += 1;
            let got = cfg
                .bracket(&Element::unit(x.clone()), &Element::unit(y.clone()))
                .unwrap();
            if got == witt_formula(x, y) {
                passed += 1;
            }
        }
    }
    SuiteResult { name: "witt embedding", passed, total }
}

fn tuples(bound: i64, n: usize) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .iter()
            .flat_map(|prefix| {
                (-bound..=bound).map(move |v| {
                    let mut t = prefix.clone();
                    t.push(v);
                    t
                })
            })
            .collect();
    }
    out
}

/// The classical Witt bracket `[x^α ∂_p, x^β ∂_q] = β_p·x^{α+β−e_p}∂_q −
/// α_q·x^{α+β−e_q}∂_p`, written on zero-upper basis elements.
fn witt_formula(x: &BasisElement, y: &BasisElement) -> Element {
    let n = x.n();
    let (alpha, p) = (&x.lower, x.dir);
    let (beta, q) = (&y.lower, y.dir);
    let sum: Vec<i64> = alpha.iter().zip(beta).map(|(a, b)| a + b).collect();
    let mut out = Element::zero();
    if beta[p - 1] != 0 {
        let mut lo = sum.clone();
        lo[p - 1] -= 1;
        out.add_term(BasisElement::new(vec![0; n], lo, q), from_i64(beta[p - 1]));
    }
    if alpha[q - 1] != 0 {
        let mut lo = sum;
        lo[q - 1] -= 1;
        out.add_term(BasisElement::new(vec![0; n], lo, p), from_i64(-alpha[q - 1]));
    }
    out
}

fn print_parse(cfg: &AlgebraConfig, rng: &mut ChaCha8Rng, trials: usize) -> SuiteResult {
    let bx = IndexBox::new(9, 9);
    tally("print/parse", trials, |t| {
        let e = sample::element(rng, cfg.n(), bx, t % 5 + 1);
        match text::parse_element(&e.to_string(), cfg.n()) {
            Ok(back) => back == e,
            Err(_) => false,
        }
    })
}

fn row_reduction(cfg: &AlgebraConfig, rng: &mut ChaCha8Rng, trials: usize) -> SuiteResult {
    let bx = IndexBox::new(2, 2);
    tally("row reduction", trials, |_| {
        let mut space = RowSpace::new();
        let rows: Vec<Element> =
            (0..rng.random_range(1..=8)).map(|_| sample::element(rng, cfg.n(), bx, 3)).collect();
        for r in &rows {
            space.insert(r);
        }
        // every generator is a member, and reduction is linear
        let members = rows.iter().all(|r| space.contains(r));
        let v = sample::element(rng, cfg.n(), bx, 3);
        let w = sample::element(rng, cfg.n(), bx, 3);
        let linear = space.reduce(&(&v + &w)) == &space.reduce(&v) + &space.reduce(&w);
        members && linear
    })
}

fn integrate_round_trip(cfg: &AlgebraConfig, rng: &mut ChaCha8Rng, trials: usize) -> SuiteResult {
    let bx = IndexBox::new(3, 3);
    let del = Element::unit(derivations::del());
    tally("integrate", trials, |t| {
        let f = sample::nonneg_function_element(rng, bx, t % 4 + 1);
        match derivations::integrate(cfg, &f) {
            Ok(g) => cfg.apply(&del, &g).unwrap() == f,
            Err(_) => false,
        }
    })
}

fn derivation_round_trip(cfg: &AlgebraConfig, rng: &mut ChaCha8Rng, trials: usize) -> SuiteResult {
    let window = IndexBox::new(3, 3);
    tally("derivation decompose", trials, |_| {
        let g = sample::bplus_element(rng, IndexBox::new(2, 2), 2);
        let rule = Decomposition::new(
            g,
            sample::nonzero_rational(rng),
            sample::nonzero_rational(rng),
        );
        let table = match DerivationTable::tabulate(cfg, window, &rule) {
            Ok(t) => t,
            Err(_) => return false,
        };
        match derivations::decompose(cfg, &table) {
            Ok(deco) => deco.is_clean(),
            Err(_) => false,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_suites_pass_rank_one() {
        let cfg = AlgebraConfig::with_unit_slopes(1);
        for suite in run_selftest(&cfg, 7, 25) {
            assert!(suite.ok(), "{} failed: {}/{}", suite.name, suite.passed, suite.total);
        }
    }

    #[test]
    fn all_suites_pass_rank_two_mixed_slopes() {
        let cfg = AlgebraConfig::new(vec![
            crate::rational::ratio(2, 3),
            crate::rational::ratio(-5, 1),
        ])
        .unwrap();
        for suite in run_selftest(&cfg, 11, 25) {
            assert!(suite.ok(), "{} failed: {}/{}", suite.name, suite.passed, suite.total);
        }
    }

    #[test]
    fn selftest_is_deterministic() {
        let cfg = AlgebraConfig::with_unit_slopes(2);
        let a = run_selftest(&cfg, 3, 10);
        let b = run_selftest(&cfg, 3, 10);
        let summary = |rs: &[SuiteResult]| {
            rs.iter().map(|r| format!("{} {}/{}", r.name, r.passed, r.total)).collect::<Vec<_>>()
        };
        assert_eq!(summary(&a), summary(&b));
    }
}
