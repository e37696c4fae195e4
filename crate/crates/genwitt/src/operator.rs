//! Differential-operator realization of the algebra.
//!
//! A function term `(b_1,…,b_n | j_1,…,j_n)` stands for the monomial
//! `e^{g_1(b_1)x_1}···e^{g_n(b_n)x_n}·x_1^{j_1}···x_n^{j_n}`, and the
//! basis element `(a|i)_k` acts on such monomials as multiplication by
//! `e^{g(a)·x}x^i` followed by `∂_k`. Commutators of these operators give
//! a route to the bracket that never touches the structure constants,
//! which is what makes them useful as an oracle.

use std::fmt;

use crate::algebra::{AlgebraConfig, BasisElement, Element};
use crate::error::Error;
use crate::linear::Combination;
use crate::rational::from_i64;

/// A monomial `(b|j)` of the function space: upper indices feed the
/// exponentials, lower indices are plain powers. No direction index.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct FunctionTerm {
    pub upper: Vec<i64>,
    pub lower: Vec<i64>,
}

impl FunctionTerm {
    pub fn new(upper: Vec<i64>, lower: Vec<i64>) -> Self {
        assert_eq!(upper.len(), lower.len(), "index tuples must have equal length");
        Self { upper, lower }
    }

    /// `(b|j)` in rank one.
    pub fn rank1(b: i64, j: i64) -> Self {
        Self::new(vec![b], vec![j])
    }

    pub fn n(&self) -> usize {
        self.upper.len()
    }
}

impl fmt::Display for FunctionTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let joined = |vals: &[i64]| {
            vals.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
        };
        write!(f, "({}|{})", joined(&self.upper), joined(&self.lower))
    }
}

/// A canonical rational combination of function terms.
pub type FunctionElement = Combination<FunctionTerm>;

impl AlgebraConfig {
    /// Action of the basis element `x = (a|i)_k` on the monomial
    /// `f = (b|j)`: the product rule gives
    /// `g_k(b_k)·(a+b | i+j) + j_k·(a+b | i+j−e_k)`.
    pub fn apply_operator(&self, x: &BasisElement, f: &FunctionTerm) -> FunctionElement {
        debug_assert_eq!(x.n(), self.n());
        debug_assert_eq!(f.n(), self.n());
        let k = x.dir;
        let upper: Vec<i64> = x.upper.iter().zip(&f.upper).map(|(a, b)| a + b).collect();
        let lower: Vec<i64> = x.lower.iter().zip(&f.lower).map(|(a, b)| a + b).collect();

        let mut out = FunctionElement::zero();
        let b_k = f.upper[k - 1];
        if b_k != 0 {
            out.add_term(FunctionTerm::new(upper.clone(), lower.clone()), self.g(k, b_k));
        }
        let j_k = f.lower[k - 1];
        if j_k != 0 {
            let mut lo = lower;
            lo[k - 1] -= 1;
            out.add_term(FunctionTerm::new(upper, lo), from_i64(j_k));
        }
        out
    }

    /// Bilinear extension of [`apply_operator`](Self::apply_operator) to
    /// whole elements and function elements.
    pub fn apply(&self, x: &Element, f: &FunctionElement) -> Result<FunctionElement, Error> {
        self.check_element(x)?;
        let mut out = FunctionElement::zero();
        for (b, c) in x.iter() {
            for (t, d) in f.iter() {
                if t.n() != self.n() {
                    return Err(Error::DimensionMismatch { expected: self.n(), found: t.n() });
                }
                out.add_scaled(&self.apply_operator(b, t), &(c * d));
            }
        }
        Ok(out)
    }

    /// `X(Y(f)) − Y(X(f))`, computed purely through the operator action.
    /// Independent of [`bracket`](Self::bracket): agreement of the two
    /// routes on random inputs certifies the structure constants.
    pub fn oracle_commutator(
        &self,
        x: &Element,
        y: &Element,
        f: &FunctionTerm,
    ) -> Result<FunctionElement, Error> {
        let f = FunctionElement::unit(f.clone());
        let xy = self.apply(x, &self.apply(y, &f)?)?;
        let yx = self.apply(y, &self.apply(x, &f)?)?;
        Ok(&xy - &yx)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::Rational;
    use num_traits::One;

    fn cfg1() -> AlgebraConfig {
        AlgebraConfig::with_unit_slopes(1)
    }

    #[test]
    fn del_acts_by_product_rule() {
        // (0|0)_1 on (b|j) → b·(b|j) + j·(b|j−1) with m = 1.
        let cfg = cfg1();
        let del = BasisElement::rank1(0, 0);
        let f = FunctionTerm::rank1(3, 2);
        let mut expected = FunctionElement::term(FunctionTerm::rank1(3, 2), from_i64(3));
        expected.add_term(FunctionTerm::rank1(3, 1), from_i64(2));
        assert_eq!(cfg.apply_operator(&del, &f), expected);
    }

    #[test]
    fn constants_are_killed() {
        let cfg = cfg1();
        let x = BasisElement::rank1(4, -2);
        assert!(cfg.apply_operator(&x, &FunctionTerm::rank1(0, 0)).is_zero());
    }

    #[test]
    fn multiplication_shifts_indices() {
        // e^x·x·∂ applied to e^x is e^{2x}x.
        let cfg = cfg1();
        let x = BasisElement::rank1(1, 1);
        let f = FunctionTerm::rank1(1, 0);
        assert_eq!(
            cfg.apply_operator(&x, &f),
            FunctionElement::unit(FunctionTerm::rank1(2, 1))
        );
    }

    #[test]
    fn commutator_of_element_with_itself_vanishes() {
        let cfg = cfg1();
        let mut x = Element::unit(BasisElement::rank1(1, 2));
        x.add_term(BasisElement::rank1(0, 1), Rational::one());
        let f = FunctionTerm::rank1(1, 1);
        assert!(cfg.oracle_commutator(&x, &x, &f).unwrap().is_zero());
    }

    #[test]
    fn commutator_matches_bracket_on_spec_pair() {
        // [(1|0)_1, (2|0)_1] = (3|0)_1 applied to (1|0) gives (4|0).
        let cfg = cfg1();
        let x = Element::unit(BasisElement::rank1(1, 0));
        let y = Element::unit(BasisElement::rank1(2, 0));
        let f = FunctionTerm::rank1(1, 0);
        let via_commutator = cfg.oracle_commutator(&x, &y, &f).unwrap();
        assert_eq!(via_commutator, FunctionElement::unit(FunctionTerm::rank1(4, 0)));

        let bracket = cfg.bracket(&x, &y).unwrap();
        let via_bracket = cfg.apply(&bracket, &FunctionElement::unit(f)).unwrap();
        assert_eq!(via_bracket, via_commutator);
    }
}
